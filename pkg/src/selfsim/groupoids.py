"""Finite groupoids over a vertex set, plus a partial behavioral backend.

Two backends share one duck-typed surface:

* ExplicitGroupoid — full element set with multiplication and inverse
  tables.  mul(a, b) composes a after b and is defined iff src(a) = rng(b).
* BehavioralModel — finitely many named states with src/rng and a unit
  marking, no products.  It stands for a possibly infinite groupoid of
  which only the action-relevant behavior is known.  Three capability
  flags record what the model is asserted to reflect:

  - unit_reflecting: a state marked non-unit represents only non-unit
    elements (so failure witnesses hinging on non-unitness are sound);
  - element_complete: every element of the real groupoid behaves like
    one of the states (universally quantified "holds" answers are global);
  - orbit_complete: the states witness the full orbit relation on vertices.

Operations that genuinely need products raise RequiresExplicitError on a
behavioral model.
"""

from dataclasses import dataclass


class GroupoidError(ValueError):
    pass


class RequiresExplicitError(GroupoidError):
    """The operation needs multiplication, which a behavioral model lacks."""


@dataclass(frozen=True)
class GroupoidElement:
    name: str
    src: str
    rng: str


class ExplicitGroupoid:
    kind = "explicit"

    def __init__(self, vertices, elements, units, mul_table, inv_table):
        self.vertices = tuple(vertices)
        self._elements = {}
        for el in elements:
            el = GroupoidElement(*el) if not isinstance(el, GroupoidElement) else el
            self._elements[el.name] = el
        self.units = dict(units)          # vertex -> unit element name
        self._mul = dict(mul_table)       # (a, b) -> ab, with src(a) = rng(b)
        self._inv = dict(inv_table)       # a -> a^{-1}

    # -- basic accessors ------------------------------------------------

    def elements(self):
        return tuple(sorted(self._elements))

    def has_element(self, g):
        return g in self._elements

    def _get(self, g):
        try:
            return self._elements[g]
        except KeyError:
            raise GroupoidError("unknown element %r" % (g,))

    def src(self, g):
        return self._get(g).src

    def rng(self, g):
        return self._get(g).rng

    def unit_at(self, v):
        try:
            return self.units[v]
        except KeyError:
            raise GroupoidError("no unit at vertex %r" % (v,))

    def is_unit(self, g):
        el = self._get(g)
        return self.units.get(el.src) == g

    def mul(self, a, b):
        """a composed after b; defined iff src(a) = rng(b)."""
        if self.src(a) != self.rng(b):
            raise GroupoidError("elements %r and %r do not compose" % (a, b))
        try:
            return self._mul[(a, b)]
        except KeyError:
            raise GroupoidError("product (%r, %r) missing from table" % (a, b))

    def inv(self, g):
        self._get(g)
        try:
            return self._inv[g]
        except KeyError:
            raise GroupoidError("inverse of %r missing from table" % (g,))

    # -- derived structure ----------------------------------------------

    def nonunits(self):
        return tuple(g for g in self.elements() if not self.is_unit(g))

    def isotropy_at(self, v):
        return tuple(g for g in self.elements()
                     if self.src(g) == v and self.rng(g) == v)

    def elements_from(self, v):
        """Elements with source v (those that can act on paths out of v)."""
        return tuple(g for g in self.elements() if self.src(g) == v)

    def orbit_pairs(self):
        """All (src, rng) pairs realized by elements."""
        return sorted({(self.src(g), self.rng(g)) for g in self.elements()})

    def same_orbit(self, v, w):
        return v == w or (v, w) in set(self.orbit_pairs())

    def orbit_of(self, v):
        return tuple(sorted({w for (a, w) in self.orbit_pairs() if a == v} | {v}))

    def validate(self):
        problems = []
        vset = set(self.vertices)
        for el in self._elements.values():
            if el.src not in vset:
                problems.append("element %r has unknown src %r" % (el.name, el.src))
            if el.rng not in vset:
                problems.append("element %r has unknown rng %r" % (el.name, el.rng))
        for v in self.vertices:
            u = self.units.get(v)
            if u is None:
                problems.append("no unit at vertex %r" % v)
                continue
            if u not in self._elements:
                problems.append("unit %r at %r is not an element" % (u, v))
                continue
            if self.src(u) != v or self.rng(u) != v:
                problems.append("unit %r at %r has src/rng elsewhere" % (u, v))
        if problems:
            return problems
        els = self.elements()
        # mul defined exactly on composable pairs, with the right src/rng
        for a in els:
            for b in els:
                composable = self.src(a) == self.rng(b)
                present = (a, b) in self._mul
                if composable and not present:
                    problems.append("missing product (%r, %r)" % (a, b))
                elif not composable and present:
                    problems.append("product (%r, %r) should not exist" % (a, b))
                elif present:
                    ab = self._mul[(a, b)]
                    if ab not in self._elements:
                        problems.append("product (%r, %r) = %r unknown" % (a, b, ab))
                    elif self.src(ab) != self.src(b) or self.rng(ab) != self.rng(a):
                        problems.append("product (%r, %r) has wrong endpoints" % (a, b))
        if problems:
            return problems
        for g in els:
            u_r, u_s = self.unit_at(self.rng(g)), self.unit_at(self.src(g))
            if self._mul[(u_r, g)] != g or self._mul[(g, u_s)] != g:
                problems.append("units do not act as identities on %r" % g)
            gi = self._inv.get(g)
            if gi is None or gi not in self._elements:
                problems.append("missing or unknown inverse for %r" % g)
            elif (self.src(gi) != self.rng(g) or self.rng(gi) != self.src(g)
                  or self._mul[(gi, g)] != u_s or self._mul[(g, gi)] != u_r):
                problems.append("inverse of %r is wrong" % g)
        for a in els:
            for b in els:
                if self.src(a) != self.rng(b):
                    continue
                ab = self._mul[(a, b)]
                for c in els:
                    if self.src(b) != self.rng(c):
                        continue
                    if self._mul[(ab, c)] != self._mul[(a, self._mul[(b, c)])]:
                        problems.append(
                            "associativity fails on (%r, %r, %r)" % (a, b, c))
        return problems


class BehavioralModel:
    kind = "behavioral"

    def __init__(self, vertices, states, unit_reflecting=False,
                 element_complete=False, orbit_complete=False):
        self.vertices = tuple(vertices)
        self._states = {}
        for st in states:
            st = GroupoidElement(*st[:3]) if not isinstance(st, dict) else \
                GroupoidElement(st["name"], st["src"], st["rng"])
            self._states[st.name] = st
        self._unit_names = set()
        self.unit_reflecting = bool(unit_reflecting)
        self.element_complete = bool(element_complete)
        self.orbit_complete = bool(orbit_complete)

    @classmethod
    def from_states(cls, vertices, states, flags=None):
        """states: iterable of (name, src, rng, is_unit) tuples or dicts."""
        rows, unit_names = [], set()
        for st in states:
            if isinstance(st, dict):
                name, src, rng, isu = st["name"], st["src"], st["rng"], st.get("is_unit", False)
            else:
                name, src, rng, isu = st
            rows.append((name, src, rng))
            if isu:
                unit_names.add(name)
        flags = flags or {}
        model = cls(vertices, rows,
                    unit_reflecting=flags.get("unit_reflecting", False),
                    element_complete=flags.get("element_complete", False),
                    orbit_complete=flags.get("orbit_complete", False))
        model._unit_names = unit_names
        return model

    def elements(self):
        return tuple(sorted(self._states))

    def has_element(self, g):
        return g in self._states

    def _get(self, g):
        try:
            return self._states[g]
        except KeyError:
            raise GroupoidError("unknown state %r" % (g,))

    def src(self, g):
        return self._get(g).src

    def rng(self, g):
        return self._get(g).rng

    def is_unit(self, g):
        self._get(g)
        return g in self._unit_names

    def unit_at(self, v):
        for name in sorted(self._unit_names):
            if self._states[name].src == v:
                return name
        raise GroupoidError("no unit state at vertex %r" % (v,))

    def nonunits(self):
        return tuple(g for g in self.elements() if not self.is_unit(g))

    def isotropy_at(self, v):
        return tuple(g for g in self.elements()
                     if self.src(g) == v and self.rng(g) == v)

    def elements_from(self, v):
        return tuple(g for g in self.elements() if self.src(g) == v)

    def orbit_pairs(self):
        return sorted({(self.src(g), self.rng(g)) for g in self.elements()})

    def same_orbit(self, v, w):
        return v == w or (v, w) in set(self.orbit_pairs())

    def orbit_of(self, v):
        return tuple(sorted({w for (a, w) in self.orbit_pairs() if a == v} | {v}))

    def mul(self, a, b):
        raise RequiresExplicitError(
            "products are not available on a behavioral model")

    def inv(self, g):
        raise RequiresExplicitError(
            "inverses are not available on a behavioral model")

    def validate(self):
        problems = []
        vset = set(self.vertices)
        for st in self._states.values():
            if st.src not in vset or st.rng not in vset:
                problems.append("state %r has unknown src/rng" % (st.name,))
        for u in self._unit_names:
            st = self._states.get(u)
            if st is None:
                problems.append("unit mark on unknown state %r" % (u,))
            elif st.src != st.rng:
                problems.append("unit state %r has src != rng" % (u,))
        for v in self.vertices:
            units_here = [u for u in self._unit_names
                          if u in self._states and self._states[u].src == v]
            if not units_here:
                problems.append("no unit state at vertex %r" % (v,))
            elif len(units_here) > 1:
                problems.append("several unit states at vertex %r" % (v,))
        return problems


def group_bundle(vertices, fibers):
    """Explicit groupoid with isotropy only: fibers[v] = (elements, unit, mul).

    fibers maps a vertex to a dict {"elements": [...], "unit": name,
    "mul": {(a, b): ab}} describing a finite group.  Element names must be
    globally unique.  Vertices missing from fibers get the trivial group
    with unit named "1@<v>".
    """
    elements, units, mul, inv = [], {}, {}, {}
    for v in vertices:
        fib = fibers.get(v)
        if fib is None:
            name = "1@%s" % v
            elements.append((name, v, v))
            units[v] = name
            mul[(name, name)] = name
            inv[name] = name
            continue
        els, unit = list(fib["elements"]), fib["unit"]
        for a in els:
            elements.append((a, v, v))
        units[v] = unit
        table = dict(fib["mul"])
        for a in els:
            for b in els:
                ab = table.get((a, b))
                if ab is None:
                    raise GroupoidError("fiber at %r missing product (%r, %r)" % (v, a, b))
                mul[(a, b)] = ab
                if ab == unit:
                    inv.setdefault(a, b)
    g = ExplicitGroupoid(vertices, elements, units, mul, inv)
    problems = g.validate()
    if problems:
        raise GroupoidError("bad group bundle: " + "; ".join(problems))
    return g


def cyclic_group_table(n, prefix=""):
    """Names "<prefix>0".."<prefix>n-1"; returns (elements, unit, mul)."""
    names = ["%s%d" % (prefix, k) for k in range(n)]
    mul = {(names[a], names[b]): names[(a + b) % n]
           for a in range(n) for b in range(n)}
    return {"elements": names, "unit": names[0], "mul": mul}


def from_group_action(group_elements, group_mul, group_unit, vertices, vertex_action):
    """Transformation groupoid of a finite group acting on the vertex set.

    Elements are pairs gamma@v with src v and rng gamma·v, composing by
    (gamma, delta·w)(delta, w) = (gamma·delta, w).  vertex_action maps
    (gamma, v) to gamma·v.
    """
    def nm(gamma, v):
        return "%s@%s" % (gamma, v)

    elements, units, mul, inv = [], {}, {}, {}
    for gamma in group_elements:
        for v in vertices:
            elements.append((nm(gamma, v), v, vertex_action[(gamma, v)]))
    for v in vertices:
        units[v] = nm(group_unit, v)
    for gamma in group_elements:
        for delta in group_elements:
            for w in vertices:
                a = nm(gamma, vertex_action[(delta, w)])
                b = nm(delta, w)
                mul[(a, b)] = nm(group_mul[(gamma, delta)], w)
    for gamma in group_elements:
        gi = next(d for d in group_elements if group_mul[(gamma, d)] == group_unit)
        for v in vertices:
            inv[nm(gamma, v)] = nm(gi, vertex_action[(gamma, v)])
    g = ExplicitGroupoid(vertices, elements, units, mul, inv)
    problems = g.validate()
    if problems:
        raise GroupoidError("bad transformation groupoid: " + "; ".join(problems))
    return g
