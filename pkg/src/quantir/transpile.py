"""End-to-end compilation: preprocess, place, route, optimize, lower.

``transpile`` runs a staged pipeline controlled by ``TranspileConfig.level``:

* level 0 — preprocess (flatten + basis lowering), placement, routing, and
  expansion of routing SWAPs into the basis.  No optimization.
* level 1 — level 0 plus same-axis rotation merging before placement and
  after routing.
* level 2 — level 1 plus inverse-pair cancellation at both points.  The
  post-routing cancellation runs before SWAP expansion so adjacent routing
  SWAPs can annihilate.

Everything is deterministic per (circuit, graph, config).
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .circuit import Circuit, Instruction, depth, flatten
from .dag import CircuitDag
from .gates import CLS_2Q, GateKind
from .passes import (BASES, cancel_adjacent_inverses, decompose_to_basis,
                     expand_swaps, merge_adjacent_rotations)
from .sabre import Layout, SabreConfig, sabre_layout, sabre_route
from .topology import CouplingGraph

__all__ = ["TranspileConfig", "TranspileStats", "TranspileResult",
           "TranspileError", "preprocess", "transpile"]

LEVELS = (0, 1, 2)


class TranspileError(ValueError):
    """Transpilation input or configuration is invalid."""


@dataclass(frozen=True)
class TranspileConfig:
    """Pipeline knobs; routing fields mirror :class:`SabreConfig`."""

    level: int = 1
    basis: str = "none"
    seed: int = 0
    layout_trials: int = 4
    extended_set_size: int = 20
    extended_weight: float = 0.5
    decay_delta: float = 0.001
    decay_reset_interval: int = 5

    def __post_init__(self):
        if self.level not in LEVELS:
            raise TranspileError(f"level must be one of {LEVELS}, "
                                 f"got {self.level!r}")
        if self.basis not in BASES:
            raise TranspileError(f"basis must be one of {BASES}, "
                                 f"got {self.basis!r}")
        if self.layout_trials < 1:
            raise TranspileError("layout_trials must be >= 1")
        if self.extended_set_size < 0:
            raise TranspileError("extended_set_size must be >= 0")
        if self.extended_weight < 0:
            raise TranspileError("extended_weight must be >= 0")
        if self.decay_delta < 0:
            raise TranspileError("decay_delta must be >= 0")
        if self.decay_reset_interval < 1:
            raise TranspileError("decay_reset_interval must be >= 1")

    def sabre(self) -> SabreConfig:
        return SabreConfig(
            layout_trials=self.layout_trials,
            extended_set_size=self.extended_set_size,
            extended_weight=self.extended_weight,
            decay_delta=self.decay_delta,
            decay_reset_interval=self.decay_reset_interval,
        )


@dataclass(frozen=True)
class TranspileStats:
    swaps_inserted: int
    depth_before: int
    depth_after: int
    two_q_count: int
    two_q_depth: int
    elapsed: float  # seconds


@dataclass(frozen=True)
class TranspileResult:
    circuit: Circuit
    initial_layout: Layout
    final_layout: Layout
    stats: TranspileStats


def preprocess(circuit: Circuit, config: TranspileConfig) -> Circuit:
    """Flatten, check measurement placement, lower to the target basis."""
    flat = flatten(circuit)
    seen_measure = False
    for ins in flat.body:
        if ins.kind is GateKind.MEASURE:
            seen_measure = True
        elif seen_measure:
            raise TranspileError("measurement must be final")
    return decompose_to_basis(flat, config.basis)


def _swap_count(c: Circuit) -> int:
    return sum(1 for ins in c.body if ins.kind is GateKind.SWAP)


def _two_q_count(c: Circuit) -> int:
    return sum(1 for ins in c.body if ins.kind.opclass == CLS_2Q)


def _two_q_depth(c: Circuit) -> int:
    wire = [0] * c.num_qubits
    d = 0
    for ins in c.body:
        if ins.kind.opclass == CLS_2Q:
            a, b = ins.qubits
            nxt = max(wire[a], wire[b]) + 1
            wire[a] = wire[b] = nxt
            if nxt > d:
                d = nxt
    return d


def transpile(circuit: Circuit, graph: CouplingGraph,
              config: TranspileConfig = TranspileConfig()) -> TranspileResult:
    """Compile ``circuit`` for ``graph``; see the module overview."""
    t0 = time.perf_counter()
    flat = flatten(circuit)
    depth_before = depth(flat)

    pre = preprocess(flat, config)
    # split off the (validated trailing) measurements; they are re-attached
    # at the end, re-targeted through the final layout
    body = pre.body
    cut = len(body)
    while cut > 0 and body[cut - 1].kind is GateKind.MEASURE:
        cut -= 1
    measures = body[cut:]
    if measures:
        gates = Circuit(pre.num_qubits, pre.num_cbits, name=pre.name)
        for ins in body[:cut]:
            gates._append_fast(ins)
        pre = gates

    if config.level >= 1:
        pre = merge_adjacent_rotations(pre)
    if config.level >= 2:
        pre = cancel_adjacent_inverses(pre)

    dag = CircuitDag(pre)
    sabre_cfg = config.sabre()
    initial = sabre_layout(dag, graph, sabre_cfg, seed=config.seed)
    routed, final = sabre_route(dag, graph, initial, sabre_cfg)
    swaps_inserted = _swap_count(routed) - _swap_count(pre)

    out = routed
    if config.level >= 1:
        out = merge_adjacent_rotations(out)
    if config.level >= 2:
        out = cancel_adjacent_inverses(out)
    if config.basis != "none":
        out = expand_swaps(out, config.basis)

    for m in measures:
        out._append_fast(Instruction._raw(
            GateKind.MEASURE, (final.phys(m.qubits[0]),), (), m.cbit, False))

    stats = TranspileStats(
        swaps_inserted=swaps_inserted,
        depth_before=depth_before,
        depth_after=depth(out),
        two_q_count=_two_q_count(out),
        two_q_depth=_two_q_depth(out),
        elapsed=time.perf_counter() - t0,
    )
    return TranspileResult(out, initial, final, stats)
