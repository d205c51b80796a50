"""Germs of semigroup elements at finite or eventually periodic points.

A germ [alpha, g, beta; xi] is a triple together with a point xi hanging
off the beta leg; it sits at the point beta·xi and maps it to
alpha·(g·xi).  Two germs are equal when some common shrinking of their
triples agrees on a neighbourhood of the point; the search advances the
common prefix edge by edge and is complete by pigeonhole on the pair of
tracked restrictions and the phase of the point.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import semigroup as sg
from .actions import (BoundaryPoint, FixingAutomaton, act_point, boundary_point,
                      edge_at, fixes_point, point_from_json, point_phase,
                      point_prefix, point_tail, point_to_json,
                      strongly_fixed_prefix)
from .graphs import is_prefix


class GermError(ValueError):
    pass


@dataclass(frozen=True)
class Germ:
    triple: sg.Triple
    xi: BoundaryPoint   # the tail of the base point after the beta leg

    def __str__(self):
        return "[%s; %s]" % (self.triple, self.xi)


def make_germ(action, triple, xi):
    if sg.is_zero(triple):
        raise GermError("zero has no germs")
    if action.graph.path_src(triple.beta) != xi.base:
        raise GermError("point %s does not extend the beta leg %s"
                        % (xi, triple.beta))
    return Germ(triple, xi)


def point_prepend(graph, p, x):
    """The point p·x (p a path composing with x)."""
    graph.check_path(p)
    if graph.path_src(p) != x.base:
        raise GermError("path %s does not compose with point %s" % (p, x))
    base = p.base if p.edges else x.base
    return boundary_point(graph, p.edges + x.prefix, x.period, base=base)


def source_point(action, a):
    return point_prepend(action.graph, a.triple.beta, a.xi)


def range_point(action, a):
    return point_prepend(action.graph, a.triple.alpha,
                         act_point(action, a.triple.g, a.xi))


def germ_eq(action, a, b):
    """Germ equality: same point, and some common prefix extension of both
    beta legs on which the rewritten ranges and the restrictions agree."""
    graph = action.graph
    x = source_point(action, a)
    if x != source_point(action, b):
        return False
    if sg.length_cocycle(a.triple) != sg.length_cocycle(b.triple):
        return False
    na, nb = len(a.triple.beta.edges), len(b.triple.beta.edges)
    n = max(na, nb)
    wa = point_prefix(graph, x, n)
    pa = graph.concat(a.triple.alpha,
                      action.act_path(a.triple.g, graph.tail_after(wa, na)))
    ga = action.restrict_path(a.triple.g, graph.tail_after(wa, na))
    pb = graph.concat(b.triple.alpha,
                      action.act_path(b.triple.g, graph.tail_after(wa, nb)))
    gb = action.restrict_path(b.triple.g, graph.tail_after(wa, nb))
    seen = set()
    while True:
        if pa != pb:
            return False  # ranges diverged; extensions only append
        if ga == gb:
            return True
        if x.is_finite() and n >= len(x.prefix):
            return False
        key = (ga, gb, point_phase(x, n))
        if key in seen:
            return False
        seen.add(key)
        e = edge_at(x, n)
        pa = graph.extend(pa, action.act_edge(ga, e))
        pb = graph.extend(pb, action.act_edge(gb, e))
        ga = action.restrict_edge(ga, e)
        gb = action.restrict_edge(gb, e)
        n += 1


def germ_mul(action, a, b):
    """Composition a∘b, defined when source(a) = range(b); the product germ
    represents the semigroup product at the source of b."""
    graph = action.graph
    if source_point(action, a) != range_point(action, b):
        raise GermError("germs do not compose: source(a) != range(b)")
    st = sg.mul(action, a.triple, b.triple)
    if sg.is_zero(st):
        raise GermError("composable germs gave a zero product")
    beta, gamma = a.triple.beta, b.triple.alpha
    if is_prefix(beta, gamma):
        xi = b.xi
    else:
        g1 = graph.tail_after(beta, len(gamma.edges))
        xi = point_tail(graph, b.xi, len(g1.edges))
    return Germ(st, xi)


def germ_inv(action, a):
    return Germ(sg.star(action, a.triple),
                act_point(action, a.triple.g, a.xi))


def cycle_expansion(action, first, g0):
    """The unique point x with x = first·(g0·x): blocks a1 = first,
    a_{n+1} = g_n·a_n, g_{n+1} = g_n|_{a_n}; eventually periodic by
    pigeonhole on (element, block)."""
    graph = action.graph
    blocks, seen = [], {}
    word, h = first, g0
    while (h, word) not in seen:
        seen[(h, word)] = len(blocks)
        blocks.append(word)
        nxt = action.act_path(h, word)
        h = action.restrict_path(h, word)
        word = nxt
    j = seen[(h, word)]
    pre = [e for b in blocks[:j] for e in b.edges]
    per = [e for b in blocks[j:] for e in b.edges]
    return boundary_point(graph, pre, per,
                          base=first.base if not (pre or per) else None)


def cycle_infinite_path(action, g, cycle):
    """The boundary point an entrance-free orbit-cycle traces out:
    repeatedly send the cycle forward with the inverse element."""
    gpd = action.groupoid
    if gpd.src(g) != action.graph.path_src(cycle) \
            or gpd.rng(g) != action.graph.path_rng(cycle):
        raise GermError("%r does not close the path %s into a cycle" % (g, cycle))
    return cycle_expansion(action, cycle, gpd.inv(g))


def classify(action, a):
    """Sort a germ: unit, isotropy (cases a/b/c by leg lengths), or moving.

    The unbalanced isotropy cases are cross-checked (on explicit backends)
    against the cycle expansion that must reproduce the point.
    """
    graph, gpd = action.graph, action.groupoid
    alpha, g, beta = a.triple.alpha, a.triple.g, a.triple.beta
    if alpha == beta and strongly_fixed_prefix(action, g, a.xi) is not None:
        return {"kind": "unit", "case": None, "verified": True}
    if source_point(action, a) != range_point(action, a):
        return {"kind": "moving", "case": None, "verified": True}
    la, lb = len(alpha.edges), len(beta.edges)
    if la == lb:
        return {"kind": "isotropy", "case": "a", "verified": alpha == beta}
    verified = None
    if gpd.kind == "explicit":
        if la > lb:
            b1 = graph.tail_after(alpha, lb)
            verified = a.xi == cycle_expansion(action, b1, g)
        else:
            abar = graph.tail_after(beta, la)
            gi = gpd.inv(g)
            verified = a.xi == cycle_expansion(
                action, action.act_path(gi, abar),
                action.restrict_path(gi, abar))
    return {"kind": "isotropy", "case": "c" if la > lb else "b",
            "verified": verified}


def in_core(action, a):
    """Membership in the degree-zero sub-semigroup's germ groupoid: some
    element h rewrites beta to alpha while g^{-1}(h|_beta) strongly fixes
    the point."""
    graph, gpd = action.graph, action.groupoid
    t = a.triple
    if sg.length_cocycle(t) != 0:
        return False
    for h in gpd.elements():
        if gpd.src(h) != graph.path_rng(t.beta):
            continue
        if action.act_path(h, t.beta) != t.alpha:
            continue
        k = gpd.mul(gpd.inv(t.g), action.restrict_path(h, t.beta))
        if strongly_fixed_prefix(action, k, a.xi) is not None:
            return True
    return False


def to_json(a):
    out = sg.to_json(a.triple)
    out["xi"] = point_to_json(a.xi)
    return out


def from_json(action, data):
    triple = sg.from_json(action, data)
    if sg.is_zero(triple):
        raise GermError("zero has no germs")
    xi = point_from_json(action.graph, data["xi"])
    return make_germ(action, triple, xi)


# -- singular decompositions and xbar --------------------------------------


@dataclass(frozen=True)
class SingularClass:
    position: int
    element: str

    def germ(self, action, x):
        graph = action.graph
        p = point_prefix(graph, x, self.position)
        return Germ(sg.Triple(p, self.element, p),
                    point_tail(graph, x, self.position))


def _tail_states_good(action, g, tail):
    """Every prefix of the tail must keep a strongly fixed extension in
    reach: each restriction along the tail can reach a unit in the fixing
    automaton."""
    aut = FixingAutomaton(action, g)
    good = aut.can_reach_unit()
    h, j, seen = g, 0, set()
    while True:
        if h not in good:
            return False
        key = (h, point_phase(tail, j))
        if key in seen:
            return True
        seen.add(key)
        if tail.is_finite() and j >= len(tail.prefix):
            return True
        h = action.restrict_edge(h, edge_at(tail, j))
        j += 1


def _decomposition_equivalent(action, x, a, b):
    """(i, g) ~ (j, h): along some common prefix the two restrictions meet."""
    graph = action.graph
    m = max(a.position, b.position)

    def advance(c):
        w = point_prefix(graph, x, m)
        seg = graph.tail_after(w, c.position)
        return action.restrict_path(c.element, seg)

    ga, gb = advance(a), advance(b)
    n, seen = m, set()
    while True:
        if ga == gb:
            return True
        if x.is_finite() and n >= len(x.prefix):
            return False
        key = (ga, gb, point_phase(x, n))
        if key in seen:
            return False
        seen.add(key)
        e = edge_at(x, n)
        ga = action.restrict_edge(ga, e)
        gb = action.restrict_edge(gb, e)
        n += 1


def singular_decompositions(action, x):
    """All ways of writing the point as prefix·tail with a non-unit isotropy
    element fixing the tail, not strongly, while every tail prefix keeps a
    strongly fixed extension in reach — up to common-prefix equivalence.

    Returns (classes, note); finite points get no classes (the construction
    needs an infinite tail past every prefix).
    """
    graph, gpd = action.graph, action.groupoid
    if x.is_finite():
        return [], ("finite points admit no singular decompositions; an "
                    "infinite tail is needed")
    bound = len(x.prefix) + len(x.period) * max(1, len(gpd.elements()))
    cands = []
    for i in range(bound + 1):
        tail = point_tail(graph, x, i)
        for g in gpd.isotropy_at(tail.base):
            if gpd.is_unit(g):
                continue
            if not fixes_point(action, g, tail):
                continue
            if strongly_fixed_prefix(action, g, tail) is not None:
                continue
            if not _tail_states_good(action, g, tail):
                continue
            cands.append(SingularClass(i, g))
    reps = []
    for c in cands:
        for k, r in enumerate(reps):
            if _decomposition_equivalent(action, x, c, r):
                break
        else:
            reps.append(c)
    reps.sort(key=lambda c: (c.position, c.element))
    return reps, ""


def xbar(action, x):
    """The closure data of the point: the point itself plus one isotropy
    germ per singular decomposition class."""
    classes, note = singular_decompositions(action, x)
    return {
        "point": x,
        "germs": [c.germ(action, x) for c in classes],
        "size": 1 + len(classes),
        "note": note,
    }


# -- the exact group-summation test ----------------------------------------


def _rational_rank(rows):
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    cols = len(rows[0])
    rank, rix = 0, 0
    for c in range(cols):
        piv = None
        for r in range(rix, len(rows)):
            if rows[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows[rix], rows[piv] = rows[piv], rows[rix]
        inv = Fraction(1) / rows[rix][c]
        rows[rix] = [v * inv for v in rows[rix]]
        for r in range(len(rows)):
            if r != rix and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [v - f * w for (v, w) in zip(rows[r], rows[rix])]
        rix += 1
        rank += 1
        if rix == len(rows):
            break
    return rank


def hum_check(elements, mul, family):
    """Does every function on the group that sums to zero over all left
    translates of every family member vanish?  Exact rational rank test:
    rows are (member, translator) incidence vectors of cosets."""
    elements = list(elements)
    index = {x: k for (k, x) in enumerate(elements)}
    rows = []
    for part in family:
        for gamma in elements:
            row = [Fraction(0)] * len(elements)
            for eta in part:
                row[index[mul[(gamma, eta)]]] = Fraction(1)
            rows.append(row)
    return _rational_rank(rows) == len(elements)


def generated_subgroup(elements, mul, gens):
    out = set(gens)
    frontier = set(gens)
    while frontier:
        nxt = set()
        for a in frontier:
            for b in out:
                for c in (mul[(a, b)], mul[(b, a)]):
                    if c not in out:
                        nxt.add(c)
        out |= nxt
        frontier = nxt
    return sorted(out)


def hum_for_point(action, x):
    """Convenience wrapper: run the group test on the subgroup generated by
    the germ components of xbar(x) minus the point, when they sit at one
    vertex of an explicit groupoid; refuse otherwise (recorded in the note)."""
    gpd = action.groupoid
    classes, note = singular_decompositions(action, x)
    if x.is_finite():
        return {"result": None, "note": note}
    if not classes:
        return {"result": True, "group": [], "family": [],
                "note": "no singular classes at the point; the condition "
                        "is vacuous"}
    if gpd.kind != "explicit":
        return {"result": None,
                "note": "the group test needs products; the backend is "
                        "behavioral"}
    vertices = {gpd.src(c.element) for c in classes}
    if len(vertices) > 1:
        return {"result": None,
                "note": "germ components sit at several vertices; refusing "
                        "to aggregate them into one group"}
    v = vertices.pop()
    iso = gpd.isotropy_at(v)
    mul = {(a, b): gpd.mul(a, b) for a in iso for b in iso}
    gens = sorted({c.element for c in classes})
    sub = generated_subgroup(iso, mul, gens)
    result = hum_check(sub, mul, [sub])
    return {"result": result, "group": sub, "family": [sub], "note": ""}
