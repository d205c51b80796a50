"""System files: one JSON document holding graph, groupoid, action and an
optional twist, plus the bundled example systems.

All names are strings and phases are "p/q" strings, so files diff cleanly
and serialization round-trips bit-exactly.
"""

import json
from importlib import resources

from .actions import SelfSimilarAction
from .graphs import DirectedGraph, GraphError
from .groupoids import (BehavioralModel, GroupoidError, ExplicitGroupoid,
                        cyclic_group_table, group_bundle)
from .twists import Twist, TwistError, validate_twist


class SystemLoadError(ValueError):
    """The file cannot be parsed into a system at all (shape/parse errors);
    domain problems are reported by validate_system instead."""


class System:
    def __init__(self, name, action, twist=None, notes=(), problems=()):
        self.name = name
        self.action = action
        self.graph = action.graph
        self.groupoid = action.groupoid
        self.twist = twist
        self.notes = list(notes)
        self.problems = list(problems)   # construction-time domain errors


def graph_from_json(data):
    try:
        vertices = list(data["vertices"])
        edges = [(e["name"], e["src"], e["rng"]) for e in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise SystemLoadError("bad graph section: %s" % (exc,))
    return DirectedGraph(vertices, edges)


def graph_to_json(graph):
    return {
        "vertices": sorted(graph.vertices),
        "edges": [{"name": e.name, "src": e.src, "rng": e.rng}
                  for e in sorted(graph.edges, key=lambda e: e.name)],
    }


def groupoid_from_json(data, vertices):
    try:
        kind = data["kind"]
        if kind == "explicit":
            elements = [(el["name"], el["src"], el["rng"])
                        for el in data["elements"]]
            mul = {(a, b): c for (a, b, c) in data["mul"]}
            return ExplicitGroupoid(vertices, elements, data["units"], mul,
                                    data["inv"])
        if kind == "bundle":
            fibers = {}
            for (v, fib) in data["fibers"].items():
                if "cyclic" in fib:
                    fibers[v] = cyclic_group_table(fib["cyclic"],
                                                   fib.get("prefix", ""))
                else:
                    fibers[v] = {
                        "elements": fib["elements"],
                        "unit": fib["unit"],
                        "mul": {(a, b): c for (a, b, c) in fib["mul"]},
                    }
            return group_bundle(vertices, fibers)
        if kind == "behavioral":
            return BehavioralModel.from_states(vertices, data["states"],
                                               data.get("flags"))
    except SystemLoadError:
        raise
    except GroupoidError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SystemLoadError("bad groupoid section: %s" % (exc,))
    raise SystemLoadError("unknown groupoid kind %r" % (kind,))


def groupoid_to_json(gpd):
    if gpd.kind == "behavioral":
        return {
            "kind": "behavioral",
            "states": [{"name": g, "src": gpd.src(g), "rng": gpd.rng(g),
                        "is_unit": gpd.is_unit(g)} for g in gpd.elements()],
            "flags": {
                "unit_reflecting": gpd.unit_reflecting,
                "element_complete": gpd.element_complete,
                "orbit_complete": gpd.orbit_complete,
            },
        }
    return {
        "kind": "explicit",
        "elements": [{"name": g, "src": gpd.src(g), "rng": gpd.rng(g)}
                     for g in gpd.elements()],
        "units": {v: gpd.unit_at(v) for v in sorted(gpd.vertices)},
        "mul": sorted([a, b, c] for ((a, b), c) in gpd._mul.items()),
        "inv": {g: gpd.inv(g) for g in gpd.elements()},
    }


def action_from_json(data, graph, gpd):
    try:
        edge_action = {(g, e): e2 for (g, e, e2) in data["edge_action"]}
        restriction = {(g, e): g2 for (g, e, g2) in data["restriction"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise SystemLoadError("bad action section: %s" % (exc,))
    return SelfSimilarAction(graph, gpd, edge_action, restriction)


def action_to_json(action):
    return {
        "edge_action": sorted([g, e, e2] for ((g, e), e2)
                              in action.edge_action.items()),
        "restriction": sorted([g, e, g2] for ((g, e), g2)
                              in action.restriction.items()),
    }


def twist_to_json(twist):
    return {"sigma_G": twist.group_json(), "sigma_bowtie": twist.edge_json()}


def system_from_json(data):
    if not isinstance(data, dict):
        raise SystemLoadError("a system file must be a JSON object")
    for key in ("graph", "groupoid", "action"):
        if key not in data:
            raise SystemLoadError("missing %r section" % (key,))
    graph = graph_from_json(data["graph"])
    problems = []
    try:
        gpd = groupoid_from_json(data["groupoid"], graph.vertices)
    except GroupoidError as exc:
        raise SystemLoadError("groupoid does not assemble: %s" % (exc,))
    action = action_from_json(data["action"], graph, gpd)
    twist = None
    if "twist" in data:
        tw = data["twist"]
        try:
            twist = Twist(action,
                          group_entries=tw.get("sigma_G", ()),
                          edge_entries=tw.get("sigma_bowtie", ()))
        except (TwistError, GraphError, GroupoidError) as exc:
            problems.append("twist: %s" % (exc,))
        except (KeyError, TypeError, ValueError) as exc:
            raise SystemLoadError("bad twist section: %s" % (exc,))
    return System(data.get("name", ""), action, twist,
                  notes=data.get("notes", ()), problems=problems)


def system_to_json(system):
    out = {
        "name": system.name,
        "graph": graph_to_json(system.graph),
        "groupoid": groupoid_to_json(system.groupoid),
        "action": action_to_json(system.action),
    }
    if system.twist is not None:
        out["twist"] = twist_to_json(system.twist)
    if system.notes:
        out["notes"] = list(system.notes)
    return out


def validate_system(system):
    """Every structural and algebraic check, as a flat list of problems."""
    problems = list(system.problems)
    problems += system.action.validate()
    if system.twist is not None and not problems:
        problems += ["twist: " + m for m in validate_twist(system.twist)]
    return problems


def load_system(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SystemLoadError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise SystemLoadError("not valid JSON: %s" % (exc,))
    return system_from_json(data)


def save_system(system, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(system_to_json(system), fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- bundled examples -------------------------------------------------------


def fixture_names():
    root = resources.files("selfsim").joinpath("fixtures")
    return sorted(p.name[:-5] for p in root.iterdir()
                  if p.name.endswith(".json"))


def load_fixture(name):
    text = (resources.files("selfsim").joinpath("fixtures")
            .joinpath(name + ".json").read_text(encoding="utf-8"))
    return system_from_json(json.loads(text))
