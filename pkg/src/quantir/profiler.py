"""Time profiling over the circuit containment graph.

``profile`` walks the *unflattened* circuit: every distinct sub-circuit
definition (by object identity) becomes a node, as does every gate kind that
appears.  Given a device time table (gate name -> duration), it accounts:

* a definition's per-instance time = its direct gates' time plus its direct
  children's per-instance time scaled by multiplicity;
* a definition's expansion count = how many times it ends up instantiated
  when the root is expanded (root = 1);
* a gate-kind node's calls = total instances over all expansions; its self
  and cumulative time are ``calls * duration``;
* an edge parent->child carries ``calls`` = parent expansion x direct count.

Time shares are cumulative-time fractions of the total, so gate-kind shares
sum to 1 and the root is 100%.  Definitions without a name are auto-named
``QCircuit_k`` with ``k`` assigned children-first, so the innermost earliest
definition is ``QCircuit_0``.

BARRIER carries no duration and is ignored; MEASURE is timed like a gate.
Instance dagger flags do not change the accounting: a definition's gate
profile is read as written.

``report_gprof`` renders a flat profile (ranked by self time) plus a call
graph section; ``report_dot`` renders the graph in DOT with ``name\\n<pct>%``
node labels and ``<N>x`` edge labels.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .circuit import Circuit, SubcircuitInstance
from .gates import KIND_BY_NAME, GateKind

__all__ = ["ProfilerError", "ProfileNode", "ProfileEdge", "ProfileReport",
           "profile", "report_gprof", "report_dot"]

_GATE_NAMES = frozenset(KIND_BY_NAME)


class ProfilerError(ValueError):
    """Bad time table or ambiguous circuit names."""


@dataclass(frozen=True)
class ProfileNode:
    name: str
    kind: str  # "circuit" or "gate"
    calls: int
    self_time: float
    cumulative_time: float
    time_share: float


@dataclass(frozen=True)
class ProfileEdge:
    parent: str
    child: str
    calls: int


@dataclass(frozen=True)
class ProfileReport:
    nodes: tuple[ProfileNode, ...]
    edges: tuple[ProfileEdge, ...]
    total_time: float


def _items(c: Circuit):
    return c._items if c._items is not None else c.body


def _collect_defs(root: Circuit) -> list[Circuit]:
    """All reachable definitions, children before parents (postorder)."""
    order: list[Circuit] = []
    seen: set[int] = set()

    def visit(c: Circuit):
        if id(c) in seen:
            return
        seen.add(id(c))
        for el in _items(c):
            if isinstance(el, SubcircuitInstance):
                visit(el.circuit)
        order.append(c)

    visit(root)
    return order


def _name_defs(defs: list[Circuit]) -> dict[int, str]:
    names: dict[int, str] = {}
    taken: set[str] = set()
    for c in defs:
        if c.name is None:
            continue
        if c.name in taken:
            raise ProfilerError(f"duplicate circuit name {c.name!r}")
        if c.name in _GATE_NAMES:
            raise ProfilerError(
                f"circuit name {c.name!r} collides with a gate name")
        taken.add(c.name)
        names[id(c)] = c.name
    k = 0
    for c in defs:
        if id(c) in names:
            continue
        while f"QCircuit_{k}" in taken:
            k += 1
        names[id(c)] = f"QCircuit_{k}"
        taken.add(f"QCircuit_{k}")
        k += 1
    return names


def _check_times(times) -> dict[str, float]:
    checked: dict[str, float] = {}
    for name, dur in times.items():
        if name not in _GATE_NAMES:
            raise ProfilerError(f"unknown gate name in time table: {name!r}")
        dur = float(dur)
        if not dur > 0:
            raise ProfilerError(f"duration for {name} must be > 0, got {dur}")
        checked[name] = dur
    return checked


def profile(circuit: Circuit, times: dict[str, float]) -> ProfileReport:
    """Account device time over the containment graph of ``circuit``."""
    times = _check_times(times)
    defs = _collect_defs(circuit)          # postorder: children first
    names = _name_defs(defs)

    # direct contents per definition
    gate_counts: dict[int, dict[str, int]] = {}
    child_mults: dict[int, dict[int, int]] = {}
    child_order: dict[int, list[int]] = {}
    child_def: dict[int, Circuit] = {}
    for c in defs:
        gc: dict[str, int] = {}
        cm: dict[int, int] = {}
        co: list[int] = []
        for el in _items(c):
            if isinstance(el, SubcircuitInstance):
                cid = id(el.circuit)
                if cid not in cm:
                    cm[cid] = 0
                    co.append(cid)
                    child_def[cid] = el.circuit
                cm[cid] += 1
            elif el.kind is not GateKind.BARRIER:
                gc[el.kind.name] = gc.get(el.kind.name, 0) + 1
        gate_counts[id(c)] = gc
        child_mults[id(c)] = cm
        child_order[id(c)] = co

    # every present gate kind needs a duration
    present = sorted({k for gc in gate_counts.values() for k in gc})
    missing = [k for k in present if k not in times]
    if missing:
        raise ProfilerError(
            "no duration for gate(s): " + ", ".join(missing))

    # per-instance cumulative time, children first
    per_instance: dict[int, float] = {}
    for c in defs:
        own = sum(n * times[k] for k, n in gate_counts[id(c)].items())
        kids = sum(m * per_instance[cid]
                   for cid, m in child_mults[id(c)].items())
        per_instance[id(c)] = own + kids

    # expansion counts, parents first (reverse postorder is topological)
    expansion: dict[int, int] = {id(c): 0 for c in defs}
    expansion[id(circuit)] = 1
    for c in reversed(defs):
        ex = expansion[id(c)]
        for cid, m in child_mults[id(c)].items():
            expansion[cid] += ex * m

    total = per_instance[id(circuit)]

    def share(t: float) -> float:
        return t / total if total > 0 else 0.0

    nodes: list[ProfileNode] = []
    rev = list(reversed(defs))             # root first
    for c in rev:
        cum = expansion[id(c)] * per_instance[id(c)]
        nodes.append(ProfileNode(
            name=names[id(c)], kind="circuit", calls=expansion[id(c)],
            self_time=0.0, cumulative_time=cum, time_share=share(cum)))
    total_gate_calls: dict[str, int] = {}
    for c in defs:
        ex = expansion[id(c)]
        for k, n in gate_counts[id(c)].items():
            total_gate_calls[k] = total_gate_calls.get(k, 0) + ex * n
    for k in sorted(total_gate_calls):
        t = total_gate_calls[k] * times[k]
        nodes.append(ProfileNode(
            name=k, kind="gate", calls=total_gate_calls[k],
            self_time=t, cumulative_time=t, time_share=share(t)))

    def_pos = {id(c): i for i, c in enumerate(rev)}
    edges: list[ProfileEdge] = []
    for c in rev:
        ex = expansion[id(c)]
        kids = sorted(child_order[id(c)], key=def_pos.__getitem__)
        for cid in kids:
            edges.append(ProfileEdge(
                parent=names[id(c)], child=names[cid],
                calls=ex * child_mults[id(c)][cid]))
        for k in sorted(gate_counts[id(c)]):
            edges.append(ProfileEdge(
                parent=names[id(c)], child=k,
                calls=ex * gate_counts[id(c)][k]))

    return ProfileReport(nodes=tuple(nodes), edges=tuple(edges),
                         total_time=total)


# -- text renderings ------------------------------------------------------------


def _fmt(t: float) -> str:
    return f"{t:.3f}"


def report_gprof(report: ProfileReport) -> str:
    """Flat profile plus call-graph section, plain text."""
    lines = ["Flat profile:", ""]
    header = f"{'%time':>6}  {'cumulative':>10}  {'self':>10}  {'calls':>8}  name"
    lines.append(header)
    flat = sorted(report.nodes, key=lambda n: (-n.self_time, n.name))
    running = 0.0
    total = report.total_time
    for n in flat:
        running += n.self_time
        pct = 100.0 * n.self_time / total if total > 0 else 0.0
        lines.append(f"{pct:>6.1f}  {_fmt(running):>10}  {_fmt(n.self_time):>10}"
                     f"  {n.calls:>8}  {n.name}")
    lines.append("")
    lines.append("Call graph:")
    lines.append("")
    parents: dict[str, list[ProfileEdge]] = {}
    children: dict[str, list[ProfileEdge]] = {}
    for e in report.edges:
        children.setdefault(e.parent, []).append(e)
        parents.setdefault(e.child, []).append(e)
    index = {n.name: i + 1 for i, n in enumerate(report.nodes)}
    rule = "-" * 48
    for n in report.nodes:
        lines.append(rule)
        for e in parents.get(n.name, []):
            lines.append(f"{'':>16}{e.calls:>8}/{n.calls:<8}    {e.parent} "
                         f"[{index[e.parent]}]")
        pct = 100.0 * n.time_share
        lines.append(f"[{index[n.name]}] {pct:>6.1f} {_fmt(n.self_time):>10} "
                     f"{_fmt(n.cumulative_time):>10} {n.calls:>8}    {n.name}")
        for e in children.get(n.name, []):
            lines.append(f"{'':>16}{e.calls:>8}        {e.child} "
                         f"[{index[e.child]}]")
    if report.nodes:
        lines.append(rule)
    lines.append("")
    return "\n".join(lines)


_DOT_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _dot_id(name: str) -> str:
    if _DOT_ID.match(name):
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def report_dot(report: ProfileReport) -> str:
    """The containment graph in DOT, labels ``name\\n<pct>%`` and ``<N>x``."""
    if not report.nodes:
        return "digraph { }"
    lines = ["digraph {"]
    for n in report.nodes:
        pct = f"{100.0 * n.time_share:.1f}"
        lines.append(f'  {_dot_id(n.name)} [label="{n.name}\\n{pct}%"];')
    for e in report.edges:
        lines.append(f'  {_dot_id(e.parent)} -> {_dot_id(e.child)} '
                     f'[label="{e.calls}x"];')
    lines.append("}")
    return "\n".join(lines)
