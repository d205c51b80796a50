"""Finite directed graphs and their path calculus.

Convention: an edge e runs from its range vertex rng(e) to its source
vertex src(e), and vE1(v) is the set of edges *received* by v (those with
rng(e) = v).  A vertex with vE1(v) empty is a source.  A path is a word
e1 e2 ... en with src(e_i) = rng(e_{i+1}); it has rng = rng(e1) and
src = src(en), and it extends by appending edges at its source end.
Vertices double as the paths of length zero.
"""

from dataclasses import dataclass


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    name: str
    src: str
    rng: str


@dataclass(frozen=True)
class Path:
    """A finite path: range vertex plus the tuple of edge names, in order."""

    base: str            # the range vertex of the path
    edges: tuple = ()

    def __len__(self):
        return len(self.edges)

    def is_vertex(self):
        return not self.edges

    def __str__(self):
        return "".join(self.edges) if self.edges else self.base


class DirectedGraph:
    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        self.edges = tuple(Edge(*e) if not isinstance(e, Edge) else e for e in edges)
        self._by_name = {e.name: e for e in self.edges}
        self._received = {v: [] for v in self.vertices}  # vE1: edges with rng = v
        for e in self.edges:
            if e.rng in self._received:
                self._received[e.rng].append(e)

    def validate(self):
        """Collect structural problems; empty list means the graph is well formed."""
        problems = []
        seen = set()
        for v in self.vertices:
            if v in seen:
                problems.append("duplicate vertex %r" % v)
            seen.add(v)
        names = set()
        for e in self.edges:
            if e.name in names:
                problems.append("duplicate edge name %r" % e.name)
            names.add(e.name)
            if e.src not in self._received:
                problems.append("edge %r has unknown src %r" % (e.name, e.src))
            if e.rng not in self._received:
                problems.append("edge %r has unknown rng %r" % (e.name, e.rng))
            if e.name in self._received and e.name in seen:
                problems.append("name %r used for both a vertex and an edge" % e.name)
        return problems

    def edge(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise GraphError("unknown edge %r" % (name,))

    def has_vertex(self, v):
        return v in self._received

    def received_by(self, v):
        """vE1: the edges whose range is v, in declaration order."""
        if v not in self._received:
            raise GraphError("unknown vertex %r" % (v,))
        return tuple(self._received[v])

    def is_source(self, v):
        return not self.received_by(v)

    def sources(self):
        return tuple(v for v in self.vertices if self.is_source(v))

    def vertex_class(self, v):
        """'source' if v receives no edge, else 'regular' (graphs here are finite)."""
        return "source" if self.is_source(v) else "regular"

    def has_entrance_vertex(self, v):
        """True when v receives at least two edges."""
        return len(self.received_by(v)) >= 2

    # -- path calculus -------------------------------------------------

    def vertex_path(self, v):
        if v not in self._received:
            raise GraphError("unknown vertex %r" % (v,))
        return Path(v)

    def path(self, edge_names, base=None):
        """Build a path from edge names; base only needed for the empty path."""
        edge_names = tuple(edge_names)
        if not edge_names:
            if base is None:
                raise GraphError("empty path needs a base vertex")
            return self.vertex_path(base)
        es = [self.edge(n) for n in edge_names]
        for a, b in zip(es, es[1:]):
            if a.src != b.rng:
                raise GraphError(
                    "edges %r and %r do not compose (src %r != rng %r)"
                    % (a.name, b.name, a.src, b.rng))
        p = Path(es[0].rng, edge_names)
        if base is not None and base != p.base:
            raise GraphError("path %s has range %r, not %r" % (p, p.base, base))
        return p

    def check_path(self, p):
        if not self.has_vertex(p.base):
            raise GraphError("path %s not over this graph (unknown base)" % (p,))
        self.path(p.edges, base=p.base if not p.edges else None)
        if p.edges and self.edge(p.edges[0]).rng != p.base:
            raise GraphError("path %s has inconsistent base" % (p,))
        return p

    def path_src(self, p):
        """The source vertex of the path (its base for the empty path)."""
        self.check_path(p)
        return self.edge(p.edges[-1]).src if p.edges else p.base

    def path_rng(self, p):
        self.check_path(p)
        return p.base

    def base_vertices(self, p):
        """All vertices the path passes through: rng of every edge plus the final src."""
        self.check_path(p)
        return tuple([self.edge(n).rng for n in p.edges] + [self.path_src(p)])

    def concat(self, p, q):
        """p followed by q; valid when src(p) = rng(q)."""
        if self.path_src(p) != self.path_rng(q):
            raise GraphError("paths %s and %s do not compose" % (p, q))
        return Path(p.base if p.edges else q.base, p.edges + q.edges)

    def extend(self, p, edge_name):
        return self.concat(p, self.path([edge_name]))

    def prefix(self, p, n):
        if n < 0 or n > len(p.edges):
            raise GraphError("no prefix of length %d in %s" % (n, p))
        return Path(p.base, p.edges[:n])

    def tail_after(self, p, n):
        """The path left after removing the length-n prefix of p."""
        q = self.prefix(p, n)  # validates n
        return Path(self.path_src(q), p.edges[n:])

    def split(self, p, n):
        return self.prefix(p, n), self.tail_after(p, n)

    def paths_from(self, v, max_len):
        """All paths with range v of length <= max_len, shortest first, lexicographic."""
        out = [self.vertex_path(v)]
        frontier = [self.vertex_path(v)]
        for _ in range(max_len):
            nxt = []
            for p in frontier:
                for e in sorted(self.received_by(self.path_src(p)), key=lambda e: e.name):
                    nxt.append(Path(p.base, p.edges + (e.name,)))
            out.extend(nxt)
            frontier = nxt
            if not frontier:
                break
        return out

    def all_paths(self, max_len):
        out = []
        for v in sorted(self.vertices):
            out.extend(self.paths_from(v, max_len))
        out.sort(key=path_key)
        return out

    def has_entrance(self, p):
        """True when some vertex the path passes through receives >= 2 edges."""
        return any(self.has_entrance_vertex(v) for v in self.base_vertices(p))

    def to_dot(self, name="graph"):
        lines = ["digraph %s {" % name]
        for v in sorted(self.vertices):
            shape = "doublecircle" if self.is_source(v) else "circle"
            lines.append('  "%s" [shape=%s];' % (v, shape))
        for e in sorted(self.edges, key=lambda e: e.name):
            lines.append('  "%s" -> "%s" [label="%s"];' % (e.rng, e.src, e.name))
        lines.append("}")
        return "\n".join(lines) + "\n"


def path_key(p):
    """Deterministic sort key: length, then base, then edge names."""
    return (len(p.edges), p.base, p.edges)


def is_prefix(p, q):
    """True when p is a prefix of q (same base, q's edges start with p's)."""
    return p.base == q.base and q.edges[: len(p.edges)] == p.edges


def comparable(graph, p, q):
    """True when one of the paths is a prefix of the other (same cylinder chain)."""
    graph.check_path(p)
    graph.check_path(q)
    return is_prefix(p, q) or is_prefix(q, p)


def covers(graph, p, family):
    """Does the finite family of paths cover the cylinder of p?

    A branch is covered once some family member is a prefix of it; branches
    are explored to the maximum family length, stopping early at sources.
    """
    graph.check_path(p)
    fam = [graph.check_path(f) for f in family]
    if not fam:
        return False  # the cylinder of p always contains a boundary point
    max_len = max(len(f.edges) for f in fam)
    stack = [p]
    while stack:
        q = stack.pop()
        if any(is_prefix(f, q) for f in fam):
            continue
        if len(q.edges) >= max_len:
            return False  # this branch outruns the family uncovered
        nxt = graph.received_by(graph.path_src(q))
        if not nxt:
            return False  # ends at a source: a boundary path escapes the family
        stack.extend(Path(q.base, q.edges + (e.name,)) for e in nxt)
    return True
