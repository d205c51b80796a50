"""Condition deciders, scope discipline, derived verdicts, reports.

The invariance oracle enumerates vertex subsets outright and checks the
closure clauses literally, so the library's fixpoint computation is
measured against the definition, not against itself.
"""

import itertools

import pytest

from selfsim import conditions as cond
from selfsim import verdicts
from selfsim.actions import SelfSimilarAction
from selfsim.conditions import (check_con, check_contracting, check_cyc,
                                check_evr, check_fin, check_min, check_rec,
                                check_sla, combine, invariant_closure,
                                orbit_classes, run_report)
from selfsim.graphs import DirectedGraph
from selfsim.groupoids import (BehavioralModel, ExplicitGroupoid,
                               cyclic_group_table, group_bundle)
from selfsim.verdicts import fails, holds, holds_on_model, requires_explicit

from conftest import FIXTURES


# -- oracles ----------------------------------------------------------------


def oracle_orbit_closure(groupoid):
    """Equivalence closure of the witnessed (src, rng) pairs, by repeated
    symmetric-transitive sweeps."""
    classes = {v: {v} for v in groupoid.vertices}
    pairs = set(groupoid.orbit_pairs())
    changed = True
    while changed:
        changed = False
        for (a, b) in pairs:
            merged = classes[a] | classes[b]
            for u in merged:
                if classes[u] != merged:
                    classes[u] = merged
                    changed = True
    return classes


def oracle_is_invariant(action, classes, h):
    """h is invariant: path-closed, orbit-closed, and saturated."""
    graph = action.graph
    for u in h:
        for e in graph.received_by(u):
            if e.src not in h:
                return False
        if not classes[u] <= h:
            return False
    for w in graph.vertices:
        if w in h or graph.is_source(w):
            continue
        if all(e.src in h for e in graph.received_by(w)):
            return False
    return True


def oracle_min_closure(action, v):
    """Smallest invariant vertex set containing v, by exhaustive search;
    invariant sets intersect to invariant sets, so the minimum is their
    intersection."""
    vs = sorted(action.graph.vertices)
    classes = oracle_orbit_closure(action.groupoid)
    best = None
    for k in range(len(vs) + 1):
        for combo in itertools.combinations(vs, k):
            h = set(combo)
            if v in h and oracle_is_invariant(action, classes, h):
                best = h if best is None else (best & h)
    return best


# -- ad-hoc systems ----------------------------------------------------------


def five_vertex_action():
    """Five vertices with a proper invariant closure: d is walled off
    behind its own loop while saturation pulls z in, and an orbit pair
    links b with c."""
    graph = DirectedGraph(
        ["a", "b", "c", "d", "z"],
        [("e1", "b", "a"), ("e2", "c", "b"), ("n", "c", "c"),
         ("f1", "a", "z"), ("f2", "c", "z"), ("l", "d", "d"),
         ("m", "z", "d")])
    units = {v: "u" + v for v in graph.vertices}
    elements = [("u" + v, v, v) for v in graph.vertices]
    elements += [("g", "b", "c"), ("gi", "c", "b")]
    mul = {(u, u): u for u in units.values()}
    mul.update({("g", "gi"): "uc", ("gi", "g"): "ub",
                ("uc", "g"): "g", ("g", "ub"): "g",
                ("ub", "gi"): "gi", ("gi", "uc"): "gi"})
    inv = {u: u for u in units.values()}
    inv.update({"g": "gi", "gi": "g"})
    gpd = ExplicitGroupoid(graph.vertices, elements, units, mul, inv)
    assert gpd.validate() == []
    edge_action, restriction = {}, {}
    for v in graph.vertices:
        for e in graph.received_by(v):
            edge_action[("u" + v, e.name)] = e.name
            restriction[("u" + v, e.name)] = "u" + e.src
    # g: b -> c moves the edge into b onto the loop at c, and back
    edge_action[("g", "e2")] = "n"
    restriction[("g", "e2")] = "uc"
    edge_action[("gi", "n")] = "e2"
    restriction[("gi", "n")] = "uc"
    action = SelfSimilarAction(graph, gpd, edge_action, restriction)
    assert action.validate() == []
    return action


def stuck_loop_action():
    """Both loops fixed by the involution with itself as restriction: it
    fixes every path yet never strongly fixes one."""
    graph = DirectedGraph(["v"], [("e", "v", "v"), ("f", "v", "v")])
    gpd = group_bundle(["v"], {"v": cyclic_group_table(2)})
    edge_action = {(g, e): e for g in ("0", "1") for e in ("e", "f")}
    restriction = {("0", "e"): "0", ("0", "f"): "0",
                   ("1", "e"): "1", ("1", "f"): "1"}
    action = SelfSimilarAction(graph, gpd, edge_action, restriction)
    assert action.validate() == []
    return action


def disconnected_action(flags):
    """Two loop components seen through a behavioral model."""
    graph = DirectedGraph(["v", "w"], [("e", "v", "v"), ("f", "w", "w")])
    gpd = BehavioralModel.from_states(
        ["v", "w"],
        [("0v", "v", "v", True), ("0w", "w", "w", True)], flags)
    edge_action = {("0v", "e"): "e", ("0w", "f"): "f"}
    restriction = {("0v", "e"): "0v", ("0w", "f"): "0w"}
    return SelfSimilarAction(graph, gpd, edge_action, restriction)


# -- orbit classes -----------------------------------------------------------


@pytest.mark.parametrize("name", FIXTURES)
def test_orbit_classes_match_closure_oracle(fix, name):
    gpd = fix(name).action.groupoid
    classes = orbit_classes(gpd)
    oracle = oracle_orbit_closure(gpd)
    for v in gpd.vertices:
        for w in gpd.vertices:
            assert (classes[v] == classes[w]) == (w in oracle[v])


def test_orbit_classes_close_transitively():
    gpd = BehavioralModel.from_states(
        ["a", "b", "c", "d"],
        [("ua", "a", "a", True), ("ub", "b", "b", True),
         ("uc", "c", "c", True), ("ud", "d", "d", True),
         ("s", "a", "b", False), ("t", "b", "c", False)])
    classes = orbit_classes(gpd)
    assert classes["a"] == classes["b"] == classes["c"]
    assert classes["d"] != classes["a"]


# -- invariant closure (the Min machinery) ------------------------------------


@pytest.mark.parametrize("name", FIXTURES)
def test_invariant_closure_is_minimal_on_fixtures(fix, name):
    action = fix(name).action
    for v in action.graph.vertices:
        assert invariant_closure(action, v) == oracle_min_closure(action, v)


def test_invariant_closure_is_minimal_on_five_vertices():
    action = five_vertex_action()
    classes = oracle_orbit_closure(action.groupoid)
    for v in action.graph.vertices:
        closure = invariant_closure(action, v)
        assert closure == oracle_min_closure(action, v)
        assert oracle_is_invariant(action, classes, closure)
    assert invariant_closure(action, "a") == {"a", "b", "c", "z"}
    assert invariant_closure(action, "d") == {"a", "b", "c", "d", "z"}


def test_check_min_witness_replays():
    action = five_vertex_action()
    v = check_min(action)
    assert v.status == "Fails"
    w = v.witness
    assert w["vertex"] == "a"
    assert w["closure"] == ["a", "b", "c", "z"]
    classes = oracle_orbit_closure(action.groupoid)
    assert oracle_is_invariant(action, classes, set(w["closure"]))
    assert set(w["closure"]) != set(action.graph.vertices)


# -- cycles and entrances ------------------------------------------------------


def _replay_cyc_witness(action, w):
    graph = action.groupoid and action.graph
    p = graph.path(w["path"])
    assert not graph.has_entrance(p)
    for base in graph.base_vertices(p):
        assert len(graph.received_by(base)) < 2
    oracle = oracle_orbit_closure(action.groupoid)
    assert graph.path_src(p) in oracle[graph.path_rng(p)]


def test_check_cyc_fails_with_replayable_witness(fix):
    action = fix("entrance_free_loop").action
    v = check_cyc(action)
    assert v.status == "Fails"
    assert v.witness["path"] == ["f"]
    _replay_cyc_witness(action, v.witness)
    v5 = check_cyc(five_vertex_action())
    assert v5.status == "Fails"
    _replay_cyc_witness(five_vertex_action(), v5.witness)


def test_check_cyc_holds_when_cycles_pass_entrances(fix):
    assert check_cyc(fix("four_loop_z2").action).status == "Holds"
    # complete orbit data on the model upgrades the sweep to Holds
    assert check_cyc(fix("two_edges").action).status == "Holds"


# -- recurrence, finiteness, strong fixing -------------------------------------


def test_check_rec_witness_is_nonunit_isotropy(fix):
    for name in ("four_loop_z2", "not_exel_pardo", "two_edges",
                 "twisted_three_spoke"):
        action = fix(name).action
        v = check_rec(action)
        assert v.status == "Fails"
        g = v.witness["element"]
        gpd = action.groupoid
        assert not gpd.is_unit(g)
        assert gpd.src(g) == gpd.rng(g)
        assert v.witness["path"]["base"] == gpd.src(g)


def test_check_rec_holds_without_nonunit_isotropy(fix):
    assert check_rec(fix("entrance_free_loop").action).status == "Holds"


def test_check_fin_witness_pumps(fix):
    for name in ("four_loop_z2", "twisted_three_spoke"):
        action = fix(name).action
        v = check_fin(action)
        assert v.status == "Fails"
        w = v.witness
        graph = action.graph
        for k in range(4):
            p = graph.path(w["access"] + w["cycle"] * k + w["exit"])
            assert action.strongly_fixes(w["element"], p)
            for m in range(len(p.edges)):
                assert not action.strongly_fixes(w["element"],
                                                 graph.prefix(p, m))


def test_check_fin_holds_on_tame_fixtures(fix):
    assert check_fin(fix("entrance_free_loop").action).status == "Holds"
    # a cycle-free graph keeps every minimal family finite; the behavioral
    # scope keeps the verdict on the model
    assert check_fin(fix("two_edges").action).status == "HoldsOnModel"


def _unit_reachable_inline(action, g):
    gpd, graph = action.groupoid, action.graph
    seen, stack = {g}, [g]
    while stack:
        h = stack.pop()
        if gpd.is_unit(h):
            return True
        for e in graph.received_by(gpd.src(h)):
            if action.act_edge(h, e.name) == e.name:
                k = action.restrict_edge(h, e.name)
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
    return False


def test_check_evr_fails_on_stuck_action():
    action = stuck_loop_action()
    v = check_evr(action)
    assert v.status == "Fails"
    g = v.witness["element"]
    from selfsim.actions import fixes_all_paths
    assert fixes_all_paths(action, g)
    assert not _unit_reachable_inline(action, g)
    assert check_fin(action).status == "Holds"  # no minimal paths at all


def test_check_sla_fails_on_stuck_action_with_replay():
    action = stuck_loop_action()
    v = check_sla(action)
    assert v.status == "Fails"
    w = v.witness
    g = action.groupoid
    h = w["element"]
    for e in w["access"]:
        assert action.act_edge(h, e) == e
        h = action.restrict_edge(h, e)
    at_cycle = h
    for e in w["cycle"]:
        assert action.act_edge(h, e) == e
        h = action.restrict_edge(h, e)
    assert h == at_cycle, "the cycle word must return to its state"
    for e in w["to_nonunit"]:
        assert action.act_edge(h, e) == e
        h = action.restrict_edge(h, e)
    assert h == w["nonunit"]
    assert not g.is_unit(h)


def test_check_sla_on_fixtures(fix):
    assert check_sla(fix("not_exel_pardo").action).status == "Fails"
    assert check_sla(fix("entrance_free_loop").action).status == "Holds"
    # the involution moves a and b, so it fixes no vertex path's tree and
    # the quantifier over all-path-fixing elements sees only the unit
    assert check_sla(fix("four_loop_z2").action).status == "Holds"
    assert check_sla(fix("twisted_three_spoke").action).status == "Fails"


# -- reachability of entered cycles --------------------------------------------


def test_check_con_statuses(fix):
    assert check_con(fix("four_loop_z2").action).status == "Holds"
    v = check_con(five_vertex_action())
    assert v.status == "Fails"
    assert v.witness["vertex"] == "a"
    loop = check_con(fix("entrance_free_loop").action)
    assert loop.status == "Fails"


def test_check_con_scope_needs_orbit_completeness():
    v = check_con(disconnected_action({}))
    assert v.status == "RequiresExplicit"
    v = check_con(disconnected_action({"orbit_complete": True}))
    assert v.status == "Fails"


def test_check_min_scope_needs_orbit_completeness():
    v = check_min(disconnected_action({}))
    assert v.status == "RequiresExplicit"
    v = check_min(disconnected_action({"orbit_complete": True}))
    assert v.status == "Fails"
    assert v.witness["vertex"] == "v"
    assert v.witness["closure"] == ["v"]


# -- contraction ----------------------------------------------------------------


def test_check_contracting_cases(fix):
    v = check_contracting(fix("four_loop_z2").action)
    assert v.status == "Holds"
    assert "nucleus has 2 elements" in v.note
    v = check_contracting(fix("twisted_three_spoke").action)
    assert v.status == "Holds"
    assert "source" in v.note
    v = check_contracting(fix("not_exel_pardo").action)
    assert v.status == "RequiresExplicit"


# -- combining verdicts -----------------------------------------------------------


def test_combine_precedence_and_scope():
    H = holds("ok")
    M = holds_on_model("ok on model")
    F = fails({"x": 1}, "broken")
    R = requires_explicit("unknown")
    assert combine([("A", H), ("B", H)]).status == "Holds"
    out = combine([("A", H), ("B", M)])
    assert out.status == "HoldsOnModel"
    assert "B" in out.note
    out = combine([("A", M), ("B", F), ("C", R)])
    assert out.status == "Fails"
    assert out.witness["failed_input"] == "B"
    assert out.witness["witness"] == {"x": 1}
    out = combine([("A", M), ("B", R)])
    assert out.status == "RequiresExplicit"
    out = combine([("A", M)], scope_mode="strict")
    assert out.status == "RequiresExplicit"
    assert combine([], scope_mode="strict").status == "Holds"


def test_report_structure_and_notes(fix):
    rep = run_report(fix("four_loop_z2").action, name="four_loop_z2")
    data = rep.to_json()
    assert data["system"] == "four_loop_z2"
    assert data["backend"] == "explicit"
    assert data["scope_mode"] == "model"
    assert set(data["conditions"]) == set(cond.CONDITION_TEXT)
    for cid, entry in data["conditions"].items():
        assert set(entry) >= {"status", "witness", "scope", "citation"}
        assert entry["citation"] == cond.CONDITION_TEXT[cid]
    for did, entry in data["derived"].items():
        assert set(entry) >= {"status", "witness", "scope", "citation",
                              "inputs"}
        assert entry["inputs"] == list(
            [i for (d, i, _r) in cond.DERIVED_RULES if d == did][0])
    assert any("purely" in n for n in data["notes"])
    text = rep.to_text()
    assert "four_loop_z2" in text
    for cid in data["conditions"]:
        assert cid in text


def test_report_strict_scope_downgrades_model_verdicts(fix):
    rep = run_report(fix("two_edges").action, scope_mode="strict")
    data = rep.to_json()
    assert data["conditions"]["Evr"]["status"] == "HoldsOnModel"
    assert data["derived"]["TopFreeTight"]["status"] == "RequiresExplicit"
    relaxed = run_report(fix("two_edges").action, scope_mode="model")
    assert relaxed.to_json()["derived"]["TopFreeTight"]["status"] == \
        "HoldsOnModel"
