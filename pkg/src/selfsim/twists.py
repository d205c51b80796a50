"""Circle-valued twists over an action.

A twist is a normalized 2-cocycle on the groupoid together with a phase
for each (element, edge) pair, compatible with the action.  Phases are
roots of unity written additively as exact fractions mod 1 ("p/q"); the
multiplicative identity is "0/1".  The pair extends to paths and induces
a 2-cocycle omega on the semigroup of triples, defined wherever the
product is nonzero.
"""

from fractions import Fraction

from . import semigroup as sg
from .graphs import is_prefix


class TwistError(ValueError):
    pass


PHASE_ONE = Fraction(0)


def phase(value):
    """Parse a circle element: 'p/q' string, int, or Fraction, taken mod 1."""
    if isinstance(value, Fraction):
        f = value
    elif isinstance(value, int):
        f = Fraction(value)
    elif isinstance(value, str):
        f = Fraction(value)
    else:
        raise TwistError("cannot read a phase from %r" % (value,))
    return f % 1


def phase_mul(a, b):
    return (a + b) % 1


def phase_conj(a):
    return (-a) % 1


def phase_str(a):
    return "%d/%d" % (a.numerator, a.denominator)


class Twist:
    """Sparse table of group phases sigma_G(g,h) and edge phases
    sigma_bowtie(g,e); missing entries are the identity phase."""

    def __init__(self, action, group_entries=(), edge_entries=()):
        gpd = action.groupoid
        if gpd.kind != "explicit":
            raise TwistError("twists need products; the backend is behavioral")
        self.action = action
        self._group = {}
        self._edge = {}
        for (g, h, val) in group_entries:
            if gpd.src(g) != gpd.rng(h):
                raise TwistError("group entry (%r, %r) is not composable"
                                 % (g, h))
            self._group[(g, h)] = phase(val)
        for (g, e, val) in edge_entries:
            edge = action.graph.edge(e)
            if gpd.src(g) != edge.rng:
                raise TwistError("edge entry (%r, %r): the element does not "
                                 "act on the edge" % (g, e))
            self._edge[(g, e)] = phase(val)

    def group(self, g, h):
        gpd = self.action.groupoid
        if gpd.src(g) != gpd.rng(h):
            raise TwistError("(%r, %r) is not composable" % (g, h))
        return self._group.get((g, h), PHASE_ONE)

    def edge(self, g, e):
        if self.action.groupoid.src(g) != self.action.graph.edge(e).rng:
            raise TwistError("%r does not act on edge %r" % (g, e))
        return self._edge.get((g, e), PHASE_ONE)

    def group_json(self):
        return [[g, h, phase_str(v)] for ((g, h), v)
                in sorted(self._group.items()) if v != PHASE_ONE]

    def edge_json(self):
        return [[g, e, phase_str(v)] for ((g, e), v)
                in sorted(self._edge.items()) if v != PHASE_ONE]


def extend_bowtie(twist, g, p):
    """The edge phase extended along a path, front edge first."""
    action = twist.action
    if action.graph.path_rng(p) != action.groupoid.src(g):
        raise TwistError("%r does not act on path %s" % (g, p))
    out, h = PHASE_ONE, g
    for e in p.edges:
        out = phase_mul(out, twist.edge(h, e))
        h = action.restrict_edge(h, e)
    return out


def validate_twist(twist):
    """All normalization, cocycle and compatibility identities; returns the
    list of violations (empty means valid)."""
    action = twist.action
    gpd, graph = action.groupoid, action.graph
    bad = []
    for g in gpd.elements():
        lu = gpd.unit_at(gpd.rng(g))
        ru = gpd.unit_at(gpd.src(g))
        if twist.group(lu, g) != PHASE_ONE or twist.group(g, ru) != PHASE_ONE:
            bad.append("group cocycle is not normalized at %r" % (g,))
    composable = [(g, h) for g in gpd.elements() for h in gpd.elements()
                  if gpd.src(g) == gpd.rng(h)]
    for (g, h) in composable:
        gh = gpd.mul(g, h)
        for k in gpd.elements():
            if gpd.src(h) != gpd.rng(k):
                continue
            lhs = phase_mul(twist.group(g, h), twist.group(gh, k))
            rhs = phase_mul(twist.group(h, k), twist.group(g, gpd.mul(h, k)))
            if lhs != rhs:
                bad.append("group cocycle identity fails at (%r, %r, %r)"
                           % (g, h, k))
    edge_names = sorted(e.name for e in graph.edges)
    for e in edge_names:
        u = gpd.unit_at(graph.edge(e).rng)
        if twist.edge(u, e) != PHASE_ONE:
            bad.append("edge phase at the unit is not 1 on %r" % (e,))
    for (g, h) in composable:
        gh = gpd.mul(g, h)
        for e in edge_names:
            if graph.edge(e).rng != gpd.src(h):
                continue
            he = action.act_edge(h, e)
            lhs = phase_mul(
                phase_mul(twist.edge(h, e), phase_conj(twist.edge(gh, e))),
                twist.edge(g, he))
            rhs = phase_mul(
                phase_conj(twist.group(action.restrict_edge(g, he),
                                       action.restrict_edge(h, e))),
                twist.group(g, h))
            if lhs != rhs:
                bad.append("edge compatibility fails at (%r, %r, %r)"
                           % (g, h, e))
    return bad


def omega(twist, s, t):
    """The induced semigroup 2-cocycle; None when the product is zero."""
    if sg.is_zero(s) or sg.is_zero(t):
        return None
    action = twist.action
    graph, gpd = action.graph, action.groupoid
    beta, gamma = s.beta, t.alpha
    if is_prefix(beta, gamma):
        b1 = graph.tail_after(gamma, len(beta.edges))
        return phase_mul(extend_bowtie(twist, s.g, b1),
                         twist.group(action.restrict_path(s.g, b1), t.g))
    if is_prefix(gamma, beta):
        g1 = graph.tail_after(beta, len(gamma.edges))
        hi = gpd.inv(t.g)
        k = gpd.inv(action.restrict_path(hi, g1))
        return phase_mul(twist.group(s.g, k),
                         extend_bowtie(twist, t.g, action.act_path(hi, g1)))
    return None


def _right_candidates(action, elements):
    """Index: for an element s, the t with mul(s,t) nonzero are those whose
    alpha leg is comparable with s.beta."""
    graph = action.graph
    exact = {}
    extends = {}
    for t in elements:
        exact.setdefault(t.alpha, []).append(t)
        p = t.alpha
        while True:
            extends.setdefault(p, []).append(t)
            if not p.edges:
                break
            p = graph.prefix(p, len(p.edges) - 1)

    def cands(s):
        out = list(extends.get(s.beta, ()))
        p = s.beta
        while p.edges:
            p = graph.prefix(p, len(p.edges) - 1)
            out.extend(exact.get(p, ()))
        return out

    return cands


def verify_omega_cocycle(twist, bound):
    """Exhaustively check omega(s,t)·omega(r,st) = omega(r,s)·omega(rs,t)
    over all triples with legs of length <= bound and nonzero products.

    Products and omega values are memoized: the same composable pair shows
    up under many third factors.
    """
    action = twist.action
    elements = sg.elements_up_to(action, bound)
    cands = _right_candidates(action, elements)
    mul_cache, omega_cache = {}, {}

    def mulc(x, y):
        key = (x, y)
        if key not in mul_cache:
            mul_cache[key] = sg.mul(action, x, y)
        return mul_cache[key]

    def omegac(x, y):
        key = (x, y)
        if key not in omega_cache:
            omega_cache[key] = omega(twist, x, y)
        return omega_cache[key]

    pair_lists = {id(s): cands(s) for s in elements}
    checked, failures = 0, []
    for r in elements:
        for s in pair_lists[id(r)]:
            rs = mulc(r, s)
            if sg.is_zero(rs):
                continue
            w_rs = omegac(r, s)
            for t in pair_lists[id(s)]:
                st = mulc(s, t)
                if sg.is_zero(st):
                    continue
                rst = mulc(rs, t)
                if sg.is_zero(rst):
                    continue
                checked += 1
                lhs = phase_mul(omegac(s, t), omegac(r, st))
                rhs = phase_mul(w_rs, omegac(rs, t))
                if lhs != rhs:
                    if len(failures) < 20:
                        failures.append({
                            "r": sg.to_json(r), "s": sg.to_json(s),
                            "t": sg.to_json(t),
                            "lhs": phase_str(lhs), "rhs": phase_str(rhs),
                        })
                    else:
                        return {"ok": False, "checked": checked,
                                "failures": failures, "truncated": True}
    return {"ok": not failures, "checked": checked, "failures": failures}
