"""The inverse semigroup of an action: triples alpha·g·beta* plus zero.

A nonzero element is a triple t = (alpha, g, beta) of two paths and a
groupoid element with src(alpha) = rng(g) and src(beta) = src(g); it maps
the cylinder of beta onto the cylinder of alpha by rewriting prefixes.
Products follow the two-case prefix formula and are zero when the inner
legs are incomparable.  Idempotents are the f_alpha = (alpha, unit, alpha)
together with zero.

Everything product-shaped needs an explicit groupoid; the behavioral
backend raises RequiresExplicitError through the groupoid calls.
"""

from dataclasses import dataclass

from .graphs import Path, is_prefix, comparable
from . import actions as act_mod


class SemigroupError(ValueError):
    pass


class _Zero:
    __slots__ = ()

    def __repr__(self):
        return "0"

    def __str__(self):
        return "0"


ZERO = _Zero()


def is_zero(s):
    return isinstance(s, _Zero)


@dataclass(frozen=True)
class Triple:
    alpha: Path
    g: str
    beta: Path

    def __str__(self):
        return "(%s, %s, %s)" % (self.alpha, self.g, self.beta)


def make(action, alpha, g, beta):
    gpd, graph = action.groupoid, action.graph
    graph.check_path(alpha)
    graph.check_path(beta)
    if graph.path_src(alpha) != gpd.rng(g):
        raise SemigroupError(
            "src(alpha)=%r is not rng(%r)" % (graph.path_src(alpha), g))
    if graph.path_src(beta) != gpd.src(g):
        raise SemigroupError(
            "src(beta)=%r is not src(%r)" % (graph.path_src(beta), g))
    return Triple(alpha, g, beta)


def idempotent(action, p):
    """f_p = (p, unit at src(p), p)."""
    action.graph.check_path(p)
    u = action.groupoid.unit_at(action.graph.path_src(p))
    return Triple(p, u, p)


def mul(action, s, t):
    """Product in the semigroup; zero when the inner legs are incomparable."""
    if is_zero(s) or is_zero(t):
        return ZERO
    gpd, graph = action.groupoid, action.graph
    alpha, g, beta = s.alpha, s.g, s.beta
    gamma, h, delta = t.alpha, t.g, t.beta
    if is_prefix(beta, gamma):
        b1 = graph.tail_after(gamma, len(beta.edges))
        return Triple(graph.concat(alpha, action.act_path(g, b1)),
                      gpd.mul(action.restrict_path(g, b1), h),
                      delta)
    if is_prefix(gamma, beta):
        g1 = graph.tail_after(beta, len(gamma.edges))
        hi = gpd.inv(h)
        r = action.restrict_path(hi, g1)
        return Triple(alpha,
                      gpd.mul(g, gpd.inv(r)),
                      graph.concat(delta, action.act_path(hi, g1)))
    return ZERO


def star(action, s):
    if is_zero(s):
        return ZERO
    return Triple(s.beta, action.groupoid.inv(s.g), s.alpha)


def is_idempotent(action, s):
    if is_zero(s):
        return True
    return s.alpha == s.beta and action.groupoid.is_unit(s.g)


def leq(action, s, t):
    """Natural partial order: s = t f for an idempotent f under t."""
    if is_zero(s):
        return True
    if is_zero(t):
        return False
    if not is_prefix(t.beta, s.beta):
        return False
    d1 = action.graph.tail_after(s.beta, len(t.beta.edges))
    return (s.alpha == action.graph.concat(t.alpha, action.act_path(t.g, d1))
            and s.g == action.restrict_path(t.g, d1))


def length_cocycle(s):
    """|alpha| - |beta|: the degree of the element."""
    if is_zero(s):
        raise SemigroupError("zero has no degree")
    return len(s.alpha.edges) - len(s.beta.edges)


def in_S0(s):
    return not is_zero(s) and length_cocycle(s) == 0


def in_S00(action, s):
    """Is s of the form (h·beta, h|_beta, beta) for some element h?

    On a behavioral model this means: witnessed by some state.
    """
    if is_zero(s):
        return False
    gpd, graph = action.groupoid, action.graph
    if length_cocycle(s) != 0:
        return False
    for h in gpd.elements():
        if gpd.src(h) != graph.path_rng(s.beta):
            continue
        if (action.act_path(h, s.beta) == s.alpha
                and action.restrict_path(h, s.beta) == s.g):
            return True
    return False


def conj_idempotent(action, t, p):
    """t f_p t*: an idempotent again, by the prefix case split."""
    if is_zero(t):
        return ZERO
    graph = action.graph
    graph.check_path(p)
    if is_prefix(t.beta, p):
        b1 = graph.tail_after(p, len(t.beta.edges))
        return idempotent(action, graph.concat(t.alpha, action.act_path(t.g, b1)))
    if is_prefix(p, t.beta):
        return idempotent(action, t.alpha)
    return ZERO


def _corridor_holds(action, g, alpha_bar, forced, start_vertex):
    """Decide: for every path b extending the forced word, g·b is a prefix
    of alpha_bar·b.  alpha_bar has positive length s; position i of the
    target word is alpha_bar[i] for i < s and b[i-s] afterwards.

    Runs the unique corridor the condition allows; any branch point, or a
    mismatch, refutes it.  A source ends the corridor (vacuously true
    beyond); a repeated (element, window) state proves it holds forever.
    """
    gpd, graph = action.groupoid, action.graph
    s = len(alpha_bar)
    h, w, i, vertex = g, [], 0, start_vertex
    seen = set()
    while True:
        if i < len(forced):
            e = forced[i]
        else:
            outs = graph.received_by(vertex)
            if not outs:
                return True
            if len(outs) > 1:
                return False  # some continuation must break the rewriting
            e = outs[0].name
        req = alpha_bar[i] if i < s else w[i - s]
        if action.act_edge(h, e) != req:
            return False
        h = action.restrict_edge(h, e)
        w.append(e)
        vertex = graph.edge(e).src
        i += 1
        if i >= len(forced) and i >= s:
            key = (h, tuple(w[i - s:i]))
            if key in seen:
                return True
            seen.add(key)


def fixed_by(action, t, p):
    """Does t fix the idempotent f_p: (t f t*) f != 0 for every nonzero
    idempotent f <= f_p?

    Decided exactly: branches off the beta-corridor kill it, and the
    unbounded condition past beta reduces to a deterministic corridor
    simulation (or to kernel membership of a restriction when the legs
    have equal length).  t fixes f_p iff t* does, so the legs may be
    swapped to make alpha the shorter one.
    """
    if is_zero(t):
        return False
    gpd, graph = action.groupoid, action.graph
    graph.check_path(p)
    if len(t.alpha.edges) > len(t.beta.edges):
        t = star(action, t)
    alpha, g, beta = t.alpha, t.g, t.beta

    if not comparable(graph, p, beta):
        return False  # conj at p itself is already zero
    if is_prefix(p, beta) and p != beta:
        # extensions of p that leave the beta corridor meet a zero conjugate
        for k in range(len(p.edges), len(beta.edges)):
            stem = graph.prefix(beta, k)
            if len(graph.received_by(graph.path_src(stem))) > 1:
                return False
        if not is_prefix(alpha, beta):
            return False  # the chain element at beta is incomparable with alpha
        forced = ()
    else:
        forced = graph.tail_after(p, len(beta.edges)).edges

    if len(alpha.edges) == len(beta.edges):
        if alpha != beta:
            return False
        forced_path = graph.path(forced, base=graph.path_src(beta) if not forced else None)
        if action.act_path(g, forced_path) != forced_path:
            return False
        return act_mod.fixes_all_paths(action, action.restrict_path(g, forced_path))

    if not is_prefix(alpha, beta):
        return False
    alpha_bar = beta.edges[len(alpha.edges):]
    return _corridor_holds(action, g, alpha_bar, tuple(forced),
                           graph.path_src(beta))


def estar_unitary(action):
    """Nonzero elements above a nonzero idempotent are idempotent.

    Equivalent to pseudo-freeness of the action, which is how it is decided;
    tests cross-check against the definition by bounded enumeration.
    """
    v = act_mod.pseudo_free(action)
    return v


def elements_up_to(action, bound):
    """All nonzero triples whose legs have length <= bound (sorted)."""
    gpd, graph = action.groupoid, action.graph
    paths = graph.all_paths(bound)
    by_src = {}
    for q in paths:
        by_src.setdefault(graph.path_src(q), []).append(q)
    out = []
    for g in gpd.elements():
        for alpha in by_src.get(gpd.rng(g), ()):
            for beta in by_src.get(gpd.src(g), ()):
                out.append(Triple(alpha, g, beta))
    return out


def to_json(s):
    if is_zero(s):
        return {"zero": True}
    return {"alpha": list(s.alpha.edges), "g": s.g, "beta": list(s.beta.edges)}


def from_json(action, data):
    if data.get("zero"):
        return ZERO
    gpd, graph = action.groupoid, action.graph
    g = data["g"]
    if not gpd.has_element(g):
        raise SemigroupError("unknown element %r" % (g,))
    alpha = graph.path(data["alpha"], base=None if data["alpha"] else gpd.rng(g))
    beta = graph.path(data["beta"], base=None if data["beta"] else gpd.src(g))
    return make(action, alpha, g, beta)
