"""Self-similar groupoid actions on finite directed graphs.

An action assigns to each composable pair (g, e) — an element g and an
edge e received by src(g) — an image edge g·e received by rng(g) and a
restriction g|_e with src(g|_e) = src(e) and rng(g|_e) = src(g·e).  For
each g the map e -> g·e is a bijection from src(g)E1 onto rng(g)E1.
On paths the action runs edge by edge, restricting as it goes; vertices
are length-zero paths with g·v = rng(g) and g|_v = g.

Explicit groupoids must satisfy the two product laws

    (hg)·e = h·(g·e)        (hg)|_e = (h|_{g·e}) (g|_e)

which are validated exhaustively.  Behavioral models carry the same
act/restrict tables on states; every state is assumed to describe the
behavior of at least one actual element.
"""

from dataclasses import dataclass

from .graphs import Path, GraphError, path_key
from .groupoids import GroupoidError, RequiresExplicitError
from . import verdicts


class ActionError(ValueError):
    pass


class SelfSimilarAction:
    def __init__(self, graph, groupoid, edge_action, restriction):
        self.graph = graph
        self.groupoid = groupoid
        self.edge_action = dict(edge_action)    # (g, e) -> g·e
        self.restriction = dict(restriction)    # (g, e) -> g|_e

    # -- one-step calculus ----------------------------------------------

    def act_edge(self, g, e):
        if self.groupoid.src(g) != self.graph.edge(e).rng:
            raise ActionError("element %r cannot act on edge %r" % (g, e))
        try:
            return self.edge_action[(g, e)]
        except KeyError:
            raise ActionError("edge action missing for (%r, %r)" % (g, e))

    def restrict_edge(self, g, e):
        if self.groupoid.src(g) != self.graph.edge(e).rng:
            raise ActionError("element %r cannot restrict along edge %r" % (g, e))
        try:
            return self.restriction[(g, e)]
        except KeyError:
            raise ActionError("restriction missing for (%r, %r)" % (g, e))

    # -- path calculus ----------------------------------------------------

    def act_path(self, g, p):
        """g·p, defined when src(g) = rng(p); has range rng(g) and len(p)."""
        self.graph.check_path(p)
        if self.groupoid.src(g) != p.base:
            raise ActionError("element %r cannot act on path %s" % (g, p))
        h, out = g, []
        for e in p.edges:
            out.append(self.act_edge(h, e))
            h = self.restrict_edge(h, e)
        return Path(self.groupoid.rng(g), tuple(out))

    def restrict_path(self, g, p):
        """g|_p: restrict g along every edge of p in turn."""
        self.graph.check_path(p)
        if self.groupoid.src(g) != p.base:
            raise ActionError("element %r cannot restrict along path %s" % (g, p))
        h = g
        for e in p.edges:
            h = self.restrict_edge(h, e)
        return h

    def fixes(self, g, p):
        return self.act_path(g, p) == p

    def strongly_fixes(self, g, p):
        """g·p = p with unit restriction g|_p."""
        return self.fixes(g, p) and self.groupoid.is_unit(self.restrict_path(g, p))

    # -- validation --------------------------------------------------------

    def validate(self):
        problems = []
        problems += ["graph: " + m for m in self.graph.validate()]
        problems += ["groupoid: " + m for m in self.groupoid.validate()]
        gpd, graph = self.groupoid, self.graph
        if set(gpd.vertices) != set(graph.vertices):
            problems.append("groupoid vertex set differs from the graph's")
        if problems:
            return problems

        composable = set()
        for g in gpd.elements():
            for e in graph.received_by(gpd.src(g)):
                composable.add((g, e.name))
        for key in self.edge_action:
            if key not in composable:
                problems.append("edge action on non-composable pair %r" % (key,))
        for key in self.restriction:
            if key not in composable:
                problems.append("restriction on non-composable pair %r" % (key,))
        for key in sorted(composable):
            if key not in self.edge_action:
                problems.append("missing edge action for %r" % (key,))
            if key not in self.restriction:
                problems.append("missing restriction for %r" % (key,))
        if problems:
            return problems

        for g in gpd.elements():
            dom = graph.received_by(gpd.src(g))
            cod = {e.name for e in graph.received_by(gpd.rng(g))}
            seen = set()
            for e in dom:
                img = self.edge_action[(g, e.name)]
                if img not in cod:
                    problems.append(
                        "(%r)·%r = %r is not received by rng(%r)" % (g, e.name, img, g))
                if img in seen:
                    problems.append("edge action of %r is not injective" % (g,))
                seen.add(img)
                r = self.restriction[(g, e.name)]
                if not gpd.has_element(r):
                    problems.append("restriction (%r)|_%r = %r unknown" % (g, e.name, r))
                    continue
                if gpd.src(r) != e.src:
                    problems.append(
                        "src((%r)|_%r) should be src(%r)" % (g, e.name, e.name))
                if img in cod and gpd.rng(r) != graph.edge(img).src:
                    problems.append(
                        "rng((%r)|_%r) should be src of the image edge" % (g, e.name))
            if len(seen) != len(dom) or len(dom) != len(cod):
                problems.append("edge action of %r is not a bijection" % (g,))
        if problems:
            return problems

        for v in graph.vertices:
            u = gpd.unit_at(v)
            for e in graph.received_by(v):
                if self.edge_action[(u, e.name)] != e.name:
                    problems.append("unit at %r moves edge %r" % (v, e.name))
                r = self.restriction[(u, e.name)]
                if r != gpd.unit_at(e.src):
                    problems.append("unit at %r restricts to non-unit on %r" % (v, e.name))

        if gpd.kind == "explicit" and not problems:
            for h in gpd.elements():
                for g in gpd.elements():
                    if gpd.src(h) != gpd.rng(g):
                        continue
                    hg = gpd.mul(h, g)
                    for e in graph.received_by(gpd.src(g)):
                        ge = self.edge_action[(g, e.name)]
                        if self.edge_action[(hg, e.name)] != self.edge_action[(h, ge)]:
                            problems.append(
                                "(hg)·e law fails at (%r, %r, %r)" % (h, g, e.name))
                        lhs = self.restriction[(hg, e.name)]
                        rhs = gpd.mul(self.restriction[(h, ge)],
                                      self.restriction[(g, e.name)])
                        if lhs != rhs:
                            problems.append(
                                "(hg)|_e law fails at (%r, %r, %r)" % (h, g, e.name))
            # spot check: (g|_p)^{-1} = g^{-1}|_{g·p} on short paths
            for g in gpd.elements():
                for p in graph.paths_from(gpd.src(g), 3):
                    lhs = gpd.inv(self.restrict_path(g, p))
                    rhs = self.restrict_path(gpd.inv(g), self.act_path(g, p))
                    if lhs != rhs:
                        problems.append(
                            "inverse-restriction law fails at (%r, %s)" % (g, p))
                        break
        return problems


# -- eventually periodic boundary points ---------------------------------


@dataclass(frozen=True)
class BoundaryPoint:
    """A finite path, or an eventually periodic infinite path prefix·period^∞.

    Stored canonically: the period is primitive and the prefix is as short
    as possible (no trailing prefix edge equal to the last period edge).
    """

    base: str
    prefix: tuple = ()
    period: tuple = ()

    def is_finite(self):
        return not self.period

    def __str__(self):
        if self.is_finite():
            return "".join(self.prefix) if self.prefix else self.base
        head = "".join(self.prefix)
        return "%s(%s)^inf" % (head, "".join(self.period))


def _primitive_word(word):
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


def boundary_point(graph, prefix_edges, period_edges=(), base=None):
    """Build and canonicalize a boundary point from raw edge words."""
    prefix = tuple(prefix_edges)
    period = tuple(period_edges)
    if not prefix and not period:
        if base is None:
            raise GraphError("vertex boundary point needs a base vertex")
        graph.vertex_path(base)
        return BoundaryPoint(base)
    if period:
        per_path = graph.path(period)
        if graph.path_src(per_path) != per_path.base:
            raise GraphError("period %s is not a closed word" % (per_path,))
        if prefix:
            pre_path = graph.path(prefix)
            graph.concat(pre_path, per_path)
        period = _primitive_word(period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = (period[-1],) + period[:-1]
        b = graph.path(prefix).base if prefix else graph.path(period).base
        if base is not None and base != b:
            raise GraphError("boundary point base mismatch")
        return BoundaryPoint(b, prefix, period)
    p = graph.path(prefix)
    if base is not None and base != p.base:
        raise GraphError("boundary point base mismatch")
    return BoundaryPoint(p.base, prefix, ())


def point_from_path(graph, p):
    graph.check_path(p)
    return BoundaryPoint(p.base, p.edges, ())


def finite_path(graph, x):
    if not x.is_finite():
        raise GraphError("%s is not a finite point" % (x,))
    return Path(x.base, x.prefix)


def edge_at(x, i):
    if i < len(x.prefix):
        return x.prefix[i]
    if x.is_finite():
        raise GraphError("%s has no edge at position %d" % (x, i))
    return x.period[(i - len(x.prefix)) % len(x.period)]


def point_prefix(graph, x, n):
    """The length-n prefix of the point, as a Path."""
    if x.is_finite() and n > len(x.prefix):
        raise GraphError("%s is shorter than %d" % (x, n))
    return graph.path([edge_at(x, i) for i in range(n)], base=x.base if n == 0 else None)


def point_tail(graph, x, n):
    """The boundary point left after removing the first n edges."""
    if x.is_finite():
        p = graph.tail_after(finite_path(graph, x), n)
        return BoundaryPoint(p.base, p.edges, ())
    if n <= len(x.prefix):
        rest = x.prefix[n:]
        b = graph.path(rest).base if rest else graph.path(x.period).base
        return BoundaryPoint(b, rest, x.period)
    k = (n - len(x.prefix)) % len(x.period)
    per = x.period[k:] + x.period[:k]
    return BoundaryPoint(graph.path(per).base, (), per)


def point_phase(x, i):
    """Canonical marker for position i; equal markers mean equal tails."""
    if i < len(x.prefix):
        return ("pre", i)
    return ("per", (i - len(x.prefix)) % len(x.period))


def in_boundary(graph, x):
    """Membership in ∂E: infinite, or a finite path ending at a source."""
    if not x.is_finite():
        return True
    return graph.is_source(graph.path_src(finite_path(graph, x)))


def point_to_json(x):
    return {"base": x.base, "prefix": list(x.prefix), "period": list(x.period)}


def point_from_json(graph, data):
    if isinstance(data, (list, tuple)):
        return boundary_point(graph, data)
    return boundary_point(graph, data.get("prefix", ()),
                          data.get("period", ()), base=data.get("base"))


def boundary_points_from(graph, v, max_len):
    """All of v∂E with prefix+period total length <= max_len (canonical, sorted)."""
    pts = set()
    for p in graph.paths_from(v, max_len):
        if graph.is_source(graph.path_src(p)):
            pts.add(point_from_path(graph, p))
        for k in range(len(p.edges)):
            head, tail = p.edges[:k], p.edges[k:]
            tp = graph.path(tail)
            if graph.path_src(tp) == tp.base:
                pts.add(boundary_point(graph, head, tail))
    return sorted(pts, key=lambda x: (len(x.prefix) + len(x.period), x.base,
                                      x.prefix, x.period))


def act_point(action, g, x):
    """g·x for a boundary point x with rng(x) = src(g)."""
    graph, gpd = action.graph, action.groupoid
    if gpd.src(g) != x.base:
        raise ActionError("element %r cannot act on point %s" % (g, x))
    if x.is_finite():
        p = action.act_path(g, finite_path(graph, x))
        return BoundaryPoint(p.base, p.edges, ())
    out, seen, h, i = [], {}, g, 0
    while True:
        key = (h, point_phase(x, i))
        if key in seen:
            j = seen[key]
            return boundary_point(graph, out[:j], out[j:i])
        seen[key] = i
        e = edge_at(x, i)
        out.append(action.act_edge(h, e))
        h = action.restrict_edge(h, e)
        i += 1


def strongly_fixed_prefix(action, g, x):
    """Smallest n with the length-n prefix of x strongly fixed by g, else None."""
    gpd = action.groupoid
    if gpd.src(g) != x.base:
        raise ActionError("element %r does not sit at point %s" % (g, x))
    h, i, seen = g, 0, set()
    while True:
        if gpd.is_unit(h):
            return i
        if x.is_finite() and i >= len(x.prefix):
            return None
        key = (h, point_phase(x, i))
        if key in seen:
            return None
        seen.add(key)
        e = edge_at(x, i)
        if action.act_edge(h, e) != e:
            return None
        h = action.restrict_edge(h, e)
        i += 1


def fixes_point(action, g, x):
    """g·x = x decided by direct comparison of canonical forms."""
    return act_point(action, g, x) == x


# -- fixing automaton and minimal strongly fixed paths --------------------


class FixingAutomaton:
    """States reachable from a root element by restricting along fixed edges.

    A walk root -e1-> h1 -e2-> h2 ... exists iff the path e1 e2 ... is
    fixed by the root; the walk ends at a unit state iff the path is
    strongly fixed.
    """

    def __init__(self, action, root):
        self.action = action
        self.root = root
        self.trans = {}
        queue = [root]
        while queue:
            h = queue.pop()
            if h in self.trans:
                continue
            outs = []
            for e in sorted(action.graph.received_by(action.groupoid.src(h)),
                            key=lambda e: e.name):
                if action.act_edge(h, e.name) == e.name:
                    nxt = action.restrict_edge(h, e.name)
                    outs.append((e.name, nxt))
                    queue.append(nxt)
            self.trans[h] = tuple(outs)

    def nodes(self):
        return tuple(sorted(self.trans))

    def unit_nodes(self):
        return tuple(n for n in self.nodes() if self.action.groupoid.is_unit(n))

    def successors(self, h):
        return self.trans[h]

    def can_reach_unit(self):
        """The set of nodes from which some unit node is reachable."""
        good = set(self.unit_nodes())
        changed = True
        while changed:
            changed = False
            for h, outs in self.trans.items():
                if h not in good and any(n in good for (_, n) in outs):
                    good.add(h)
                    changed = True
        return good

    def to_dot(self, name="fixing"):
        lines = ["digraph %s {" % name]
        for h in self.nodes():
            shape = "doublecircle" if self.action.groupoid.is_unit(h) else "circle"
            mark = ' style=bold' if h == self.root else ""
            lines.append('  "%s" [shape=%s%s];' % (h, shape, mark))
        for h in self.nodes():
            for (e, n) in self.successors(h):
                lines.append('  "%s" -> "%s" [label="%s"];' % (h, n, e))
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MinimalFixedResult:
    status: str            # "finite" | "infinite"
    paths: tuple = ()      # the minimal strongly fixed paths when finite
    witness: dict = None   # pumping data when infinite

    def is_finite(self):
        return self.status == "finite"


def _shortest_walk(aut, sources, goal_test, within=None):
    """Lexicographically smallest shortest edge word from sources to a goal.

    When within is given, intermediate nodes must stay inside it (goal
    nodes are exempt).
    """
    from collections import deque
    queue = deque((s, ()) for s in sorted(set(sources)))
    seen = set(sorted(set(sources)))
    while queue:
        h, word = queue.popleft()
        if goal_test(h):
            return h, word
        for (e, n) in aut.successors(h):
            if within is not None and n not in within and not goal_test(n):
                continue
            if n not in seen:
                seen.add(n)
                queue.append((n, word + (e,)))
    return None, None


def minimal_strongly_fixed(action, g):
    """The minimal strongly fixed paths of g: no proper prefix strongly fixed.

    Returns a finite sorted tuple, or reports the set infinite with a
    pumping witness (access word to a node on a cycle, the cycle word, and
    an exit word to a unit; pumping the cycle gives infinitely many
    minimal strongly fixed paths).
    """
    gpd, graph = action.groupoid, action.graph
    if gpd.is_unit(g):
        return MinimalFixedResult("finite", (graph.vertex_path(gpd.src(g)),))
    aut = FixingAutomaton(action, g)
    good = aut.can_reach_unit()

    # region reachable from g through non-unit nodes only
    region = set()
    stack = [g]
    while stack:
        h = stack.pop()
        if h in region or gpd.is_unit(h):
            continue
        region.add(h)
        stack.extend(n for (_, n) in aut.successors(h))

    # a cycle inside the region that can reach a unit makes the set infinite
    live = sorted(h for h in region if h in good)
    for h in live:
        cycle_word = None
        for (e, n) in aut.successors(h):
            if n not in region:
                continue
            if n == h:
                cycle_word = (e,)
                break
            _, back = _shortest_walk(aut, [n], lambda m: m == h, within=region)
            if back is not None:
                cand = (e,) + back
                if cycle_word is None or (len(cand), cand) < (len(cycle_word), cycle_word):
                    cycle_word = cand
        if cycle_word is None:
            continue
        _, access = _shortest_walk(aut, [g], lambda n: n == h, within=region)
        _, exit_word = _shortest_walk(aut, [h], lambda n: gpd.is_unit(n))
        return MinimalFixedResult("infinite", (), {
            "element": g,
            "access": list(access),
            "cycle": list(cycle_word),
            "exit": list(exit_word),
        })

    # finite: depth-first enumeration through live non-unit nodes
    out = []

    def walk(h, word):
        for (e, n) in aut.successors(h):
            if gpd.is_unit(n):
                out.append(graph.path(word + (e,)))
            elif n in region and n in good:
                walk(n, word + (e,))

    walk(g, ())
    return MinimalFixedResult("finite", tuple(sorted(out, key=path_key)))


def fixes_all_paths(action, g):
    """Does g fix every path out of src(g)?  (Kernel membership test.)"""
    gpd, graph = action.groupoid, action.graph
    seen, stack = set(), [g]
    while stack:
        h = stack.pop()
        if h in seen:
            continue
        seen.add(h)
        for e in graph.received_by(gpd.src(h)):
            if action.act_edge(h, e.name) != e.name:
                return False
            stack.append(action.restrict_edge(h, e.name))
    return True


# -- kernels, nucleus, freeness -------------------------------------------


def kernel_elements(action):
    """The kernel: all elements (or states) fixing every path at their source."""
    return tuple(g for g in action.groupoid.elements()
                 if fixes_all_paths(action, g))


def faithful(action):
    """Only units may fix all paths."""
    witness = None
    for g in action.groupoid.elements():
        if not action.groupoid.is_unit(g) and fixes_all_paths(action, g):
            witness = {"element": g}
            break
    return verdicts.universal_verdict(
        action.groupoid, witness,
        witness_note="a non-unit fixes every path at its source",
        model_note="only units fix all paths")


def tight_kernel_elements(action):
    """Elements whose iterated restrictions strongly stabilize: the least set
    containing the units that contains every regular-based g fixing all its
    edges with restrictions already in the set (units at source vertices are
    always members)."""
    gpd, graph = action.groupoid, action.graph
    units = {gpd.unit_at(v) for v in graph.vertices}
    singular_units = {gpd.unit_at(v) for v in graph.sources()}

    def regular_based(g):
        return (not graph.is_source(gpd.src(g))) and (not graph.is_source(gpd.rng(g)))

    k = set(units)
    while True:
        nxt = set(singular_units)
        for g in gpd.elements():
            if not regular_based(g):
                continue
            ok = True
            for e in graph.received_by(gpd.src(g)):
                if (action.act_edge(g, e.name) != e.name
                        or action.restrict_edge(g, e.name) not in k):
                    ok = False
                    break
            if ok:
                nxt.add(g)
        nxt |= k
        if nxt == k:
            return tuple(sorted(k))
        k = nxt


def tightly_faithful(action):
    """The tight kernel contains only units."""
    units = {action.groupoid.unit_at(v) for v in action.graph.vertices}
    witness = None
    for g in tight_kernel_elements(action):
        if g not in units:
            witness = {"element": g}
            break
    return verdicts.universal_verdict(
        action.groupoid, witness,
        witness_note="a non-unit lies in the tight kernel (it strongly fixes "
                     "the whole boundary at its source)",
        model_note="the tight kernel is the unit space")


def restriction_digraph(action):
    """All restriction arrows g -e-> g|_e over every edge at src(g)."""
    gpd, graph = action.groupoid, action.graph
    arrows = {}
    for g in gpd.elements():
        outs = []
        for e in sorted(graph.received_by(gpd.src(g)), key=lambda e: e.name):
            outs.append((e.name, action.restrict_edge(g, e.name)))
        arrows[g] = tuple(outs)
    return arrows


def restriction_digraph_dot(action, name="restrictions"):
    arrows = restriction_digraph(action)
    gpd = action.groupoid
    lines = ["digraph %s {" % name]
    for g in sorted(arrows):
        shape = "doublecircle" if gpd.is_unit(g) else "circle"
        lines.append('  "%s" [shape=%s];' % (g, shape))
    for g in sorted(arrows):
        for (e, h) in arrows[g]:
            lines.append('  "%s" -> "%s" [label="%s"];' % (g, h, e))
    lines.append("}")
    return "\n".join(lines) + "\n"


def cycle_nodes(arrows):
    """Nodes lying on some directed cycle of the arrow relation."""
    nodes = sorted(arrows)
    on_cycle = set()
    for start in nodes:
        # start is on a cycle iff start is reachable from one of its successors
        stack = [h for (_, h) in arrows[start]]
        seen = set()
        while stack:
            h = stack.pop()
            if h == start:
                on_cycle.add(start)
                break
            if h in seen:
                continue
            seen.add(h)
            stack.extend(n for (_, n) in arrows.get(h, ()))
    return on_cycle


def nucleus(action):
    """The smallest restriction-closed set that all deep restrictions land in:
    every element reachable from a directed cycle of the restriction digraph.

    Needs a graph without sources (restriction walks must never die out).
    """
    if action.groupoid.kind != "explicit":
        raise RequiresExplicitError(
            "the nucleus concerns the full element set; a behavioral model "
            "cannot certify it")
    if action.graph.sources():
        raise ActionError("nucleus needs a graph without sources; %r is one"
                          % (action.graph.sources()[0],))
    arrows = restriction_digraph(action)
    seeds = cycle_nodes(arrows)
    out, stack = set(), sorted(seeds)
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        stack.extend(h for (_, h) in arrows[g])
    return tuple(sorted(out))


def deep_restriction_layers(action, g, depth):
    """layers[k] = set of elements appearing as restrictions of g at depth k."""
    arrows = restriction_digraph(action)
    layers = [{g}]
    for _ in range(depth):
        cur = layers[-1]
        layers.append({h for x in cur for (_, h) in arrows[x]})
    return layers


def pseudo_free(action):
    """No non-unit fixes an edge with unit restriction."""
    gpd, graph = action.groupoid, action.graph
    witness = None
    for g in gpd.elements():
        if gpd.is_unit(g):
            continue
        for e in sorted(graph.received_by(gpd.src(g)), key=lambda e: e.name):
            if (action.act_edge(g, e.name) == e.name
                    and gpd.is_unit(action.restrict_edge(g, e.name))):
                witness = {"element": g, "edge": e.name}
                break
        if witness:
            break
    return verdicts.universal_verdict(
        action.groupoid, witness,
        witness_note="a non-unit strongly fixes an edge",
        model_note="no non-unit strongly fixes an edge")
