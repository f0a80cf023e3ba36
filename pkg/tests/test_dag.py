"""Wire-dependency DAG construction."""
import pytest

from quantir.circuit import Circuit
from quantir.dag import CircuitDag
from quantir.gates import GateKind


def test_ghz_chain():
    c = Circuit(3).h(0).cnot(0, 1).cnot(1, 2)
    d = CircuitDag(c)
    assert len(d) == 3
    assert d.preds == [[], [0], [1]]
    assert d.succs == [[1], [2], []]


def test_parallel_gates_have_no_edges():
    c = Circuit(3).h(0).x(1).z(2)
    d = CircuitDag(c)
    assert d.preds == [[], [], []]
    assert d.front_layer() == [0, 1, 2]


def test_two_qubit_edge_deduplicated():
    c = Circuit(2).cnot(0, 1).cnot(0, 1)
    d = CircuitDag(c)
    # both wires connect the same pair; the edge is stored once
    assert d.preds == [[], [0]]
    assert d.succs == [[1], []]


def test_cbit_wire_orders_measurements():
    c = Circuit(2, 1).measure(0, 0).measure(1, 0)
    d = CircuitDag(c)
    # distinct qubits, shared classical bit: still ordered
    assert d.preds == [[], [0]]


def test_barrier_fences_its_qubits_only():
    c = Circuit(3).h(0).barrier(0, 1).x(1).z(2)
    d = CircuitDag(c)
    assert d.preds[1] == [0]   # barrier after h
    assert d.preds[2] == [1]   # x after barrier
    assert d.preds[3] == []    # z untouched by barrier


def test_front_layer_and_pred_counts():
    c = Circuit(3).h(0).h(1).cnot(0, 1).cnot(1, 2)
    d = CircuitDag(c)
    assert d.front_layer() == [0, 1]
    counts = d.pred_counts()
    assert counts == [0, 0, 2, 1]
    counts[0] = 99
    assert d.pred_counts() == [0, 0, 2, 1]  # fresh copy each call


def test_two_qubit_nodes():
    c = Circuit(3, 1).h(0).cnot(0, 1).rz(2, 0.5).swap(1, 2).measure(0, 0)
    d = CircuitDag(c)
    assert d.two_qubit_nodes() == [1, 3]


def test_flattens_subcircuits():
    inner = Circuit(2).cnot(0, 1)
    c = Circuit(2).h(0).sub(inner)
    d = CircuitDag(c)
    assert [ins.kind for ins in d.body] == [GateKind.H, GateKind.CNOT]
    assert d.preds == [[], [0]]


def test_reversed_circuit_keeps_gates():
    c = Circuit(2).h(0).s(1).cnot(0, 1)
    r = CircuitDag(c).reversed_circuit()
    assert [ins.kind for ins in r.body] == [GateKind.CNOT, GateKind.S, GateKind.H]
    assert not any(ins.dagger for ins in r.body)


def test_empty_circuit():
    d = CircuitDag(Circuit(2))
    assert len(d) == 0
    assert d.front_layer() == []
    assert d.two_qubit_nodes() == []
