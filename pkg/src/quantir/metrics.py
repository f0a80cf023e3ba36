"""Normalized structural features of a circuit (five-component vector).

All five components are ratios in [0, 1], computed on the flattened body
with MEASURE and BARRIER removed.  With N qubits, G gates, depth d (greedy
wire layering), and e two-qubit gates:

* ``communication``  — interaction-graph density: sum of qubit degrees over
  N(N-1), where qubits are adjacent iff some two-qubit gate couples them.
* ``critical_depth`` — two-qubit gates on a longest dependency path, over e.
* ``entanglement_ratio`` — e / G.
* ``parallelism``    — (G/d - 1) / (N - 1): how densely layers are filled.
* ``liveness``       — active (qubit, layer) cells over N * d.

Degenerate inputs clamp to 0: communication and parallelism need N > 1,
critical_depth and entanglement_ratio need e > 0, liveness and parallelism
need d > 0.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .circuit import Circuit, flatten
from .dag import CircuitDag
from .gates import CLS_2Q, GateKind

__all__ = ["MetricsVector", "circuit_metrics"]


@dataclass(frozen=True)
class MetricsVector:
    communication: float
    critical_depth: float
    entanglement_ratio: float
    parallelism: float
    liveness: float

    def to_dict(self) -> dict[str, float]:
        return asdict(self)

    def __iter__(self):
        yield from (self.communication, self.critical_depth,
                    self.entanglement_ratio, self.parallelism, self.liveness)


def _strip(c: Circuit) -> Circuit:
    flat = flatten(c)
    out = Circuit(flat.num_qubits, flat.num_cbits)
    for ins in flat.body:
        if ins.kind is not GateKind.MEASURE and ins.kind is not GateKind.BARRIER:
            out._append_fast(ins)
    return out


def _critical_two_q(c: Circuit, e: int) -> float:
    """Two-qubit gates on a longest path of the dependency DAG, over ``e``.

    Among equally long paths the one with the most two-qubit gates counts.
    """
    if e == 0:
        return 0.0
    dag = CircuitDag(c)
    body = dag.body
    best_len = 0
    best_two = 0
    length = [0] * len(body)
    twoq = [0] * len(body)
    for i, ins in enumerate(body):
        l = 0
        t = 0
        for p in dag.preds[i]:
            if length[p] > l or (length[p] == l and twoq[p] > t):
                l, t = length[p], twoq[p]
        if ins.kind.opclass == CLS_2Q:
            t += 1
        l += 1
        length[i], twoq[i] = l, t
        if l > best_len or (l == best_len and t > best_two):
            best_len, best_two = l, t
    return best_two / e


def circuit_metrics(c: Circuit) -> MetricsVector:
    stripped = _strip(c)
    n = stripped.num_qubits
    body = stripped.body
    g = len(body)

    # greedy wire layering; mark which (qubit, layer) cells are active
    wire = [0] * n
    active = 0
    d = 0
    degree_pairs: set[tuple[int, int]] = set()
    e = 0
    for ins in body:
        qs = ins.qubits
        layer = max(wire[q] for q in qs) + 1
        for q in qs:
            wire[q] = layer
        active += len(qs)
        if layer > d:
            d = layer
        if ins.kind.opclass == CLS_2Q:
            e += 1
            a, b = qs
            degree_pairs.add((a, b) if a < b else (b, a))

    communication = 0.0
    if n > 1 and degree_pairs:
        communication = 2 * len(degree_pairs) / (n * (n - 1))
    entanglement = e / g if g else 0.0
    parallelism = 0.0
    if n > 1 and d > 0:
        parallelism = (g / d - 1) / (n - 1)
    liveness = active / (n * d) if d > 0 else 0.0
    return MetricsVector(
        communication=communication,
        critical_depth=_critical_two_q(stripped, e),
        entanglement_ratio=entanglement,
        parallelism=parallelism,
        liveness=liveness,
    )
