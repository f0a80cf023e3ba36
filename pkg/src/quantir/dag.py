"""Wire-dependency DAG over a flat circuit body.

Node ``i`` is the i-th body instruction.  Edges follow program order along
every wire an instruction touches: qubit wires for gates and barriers, and
the classical wire for measurements.  Body order is a topological order.
"""
from __future__ import annotations

from .circuit import Circuit, flatten
from .gates import CLS_2Q

__all__ = ["CircuitDag"]


class CircuitDag:
    """Dependency structure of a flat circuit."""

    __slots__ = ("circuit", "body", "preds", "succs")

    def __init__(self, circuit: Circuit):
        flat = flatten(circuit)
        self.circuit = flat
        body = self.body = flat.body
        n = len(body)
        preds: list[list[int]] = [[] for _ in range(n)]
        succs: list[list[int]] = [[] for _ in range(n)]
        last_q = [-1] * flat.num_qubits
        last_c = [-1] * flat.num_cbits
        for i, ins in enumerate(body):
            for q in ins.qubits:
                p = last_q[q]
                if p >= 0 and (not succs[p] or succs[p][-1] != i):
                    succs[p].append(i)
                    preds[i].append(p)
                last_q[q] = i
            cb = ins.cbit
            if cb is not None:
                p = last_c[cb]
                if p >= 0 and (not succs[p] or succs[p][-1] != i):
                    succs[p].append(i)
                    preds[i].append(p)
                last_c[cb] = i
        self.preds = preds
        self.succs = succs

    def __len__(self) -> int:
        return len(self.body)

    def pred_counts(self) -> list[int]:
        """Mutable copy of per-node predecessor counts."""
        return [len(p) for p in self.preds]

    def front_layer(self) -> list[int]:
        """Nodes with no predecessors, in body order."""
        return [i for i, p in enumerate(self.preds) if not p]

    def two_qubit_nodes(self) -> list[int]:
        return [i for i, ins in enumerate(self.body)
                if ins.kind.opclass == CLS_2Q]

    def reversed_circuit(self) -> Circuit:
        """The body in reverse order (gates unchanged), for reverse routing."""
        out = Circuit(self.circuit.num_qubits, self.circuit.num_cbits)
        for ins in reversed(self.body):
            out._append_fast(ins)
        return out
