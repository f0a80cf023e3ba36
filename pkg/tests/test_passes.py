"""Rewrite passes: rotation merging, inverse cancellation, basis lowering."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quantir.circuit import Circuit, Instruction, flatten, gate_counts
from quantir.gates import CLS_2Q, GateKind
from quantir.passes import (BASES, PassError, cancel_adjacent_inverses,
                            decompose_to_basis, expand_swaps,
                            merge_adjacent_rotations)
from quantir.sim import circuit_unitary, equivalent

from conftest import circuits

PI = math.pi


def kinds_of(c):
    return [ins.kind for ins in c.body]


def unitaries_match(a, b, tol=1e-9):
    ua, ub = circuit_unitary(a), circuit_unitary(b)
    return abs(np.trace(ua.conj().T @ ub)) / ua.shape[0] > 1 - tol


# -- merge_adjacent_rotations --------------------------------------------------

def test_merge_same_axis():
    c = Circuit(1).rz(0, 0.3).rz(0, 0.4)
    m = merge_adjacent_rotations(c)
    assert kinds_of(m) == [GateKind.RZ]
    assert m.body[0].params[0] == pytest.approx(0.7)


def test_merge_keeps_other_axes_apart():
    c = Circuit(1).rz(0, 0.3).rx(0, 0.4)
    m = merge_adjacent_rotations(c)
    assert kinds_of(m) == [GateKind.RZ, GateKind.RX]


def test_merge_long_run_collapses():
    c = Circuit(1)
    for a in (0.1, 0.2, 0.3, 0.4):
        c.ry(0, a)
    m = merge_adjacent_rotations(c)
    assert kinds_of(m) == [GateKind.RY]
    assert m.body[0].params[0] == pytest.approx(1.0)


def test_merge_blocked_by_gate_on_same_wire():
    c = Circuit(1).rz(0, 0.3).h(0).rz(0, 0.4)
    m = merge_adjacent_rotations(c)
    assert kinds_of(m) == [GateKind.RZ, GateKind.H, GateKind.RZ]


def test_merge_blocked_by_two_qubit_gate():
    c = Circuit(2).rz(0, 0.3).cnot(0, 1).rz(0, 0.4)
    m = merge_adjacent_rotations(c)
    assert len(m.body) == 3


def test_merge_unblocked_on_other_wire():
    c = Circuit(2).rz(0, 0.3).h(1).rz(0, 0.4)
    m = merge_adjacent_rotations(c)
    counts = gate_counts(m)
    assert counts[GateKind.RZ] == 1 and counts[GateKind.H] == 1


def test_merge_blocked_by_barrier_and_measure():
    c = Circuit(1, 1).rz(0, 0.3).barrier(0).rz(0, 0.4)
    assert len(merge_adjacent_rotations(c).body) == 3
    c = Circuit(1, 1).rz(0, 0.3).measure(0, 0)
    c2 = Circuit(1, 1).rz(0, 0.3).measure(0, 0).rz(0, 0.4)
    assert len(merge_adjacent_rotations(c2).body) == 3


def test_merge_cancels_full_turn():
    c = Circuit(1).rz(0, 1.25).rz(0, -1.25)
    assert merge_adjacent_rotations(c).body == []
    c = Circuit(1).rx(0, PI).rx(0, PI)  # 2*pi
    assert merge_adjacent_rotations(c).body == []
    c = Circuit(1).ry(0, 3 * PI).ry(0, PI)  # 4*pi
    assert merge_adjacent_rotations(c).body == []


def test_merge_full_turn_tolerance():
    c = Circuit(1).rz(0, PI).rz(0, PI + 5e-13)
    assert merge_adjacent_rotations(c).body == []
    c = Circuit(1).rz(0, PI).rz(0, PI + 5e-9)
    assert len(merge_adjacent_rotations(c).body) == 1


def test_merge_lone_zero_rotation_survives():
    c = Circuit(1).rz(0, 0.0)
    assert len(merge_adjacent_rotations(c).body) == 1


def test_merge_fixpoint_across_deletion():
    # deleting the middle pair exposes a second merge
    c = Circuit(1).rx(0, 0.5).rz(0, 0.7).rz(0, -0.7).rx(0, 0.5)
    m = merge_adjacent_rotations(c)
    assert kinds_of(m) == [GateKind.RX]
    assert m.body[0].params[0] == pytest.approx(1.0)


def test_merge_flattens_input():
    inner = Circuit(1).rz(0, 0.25)
    c = Circuit(1).rz(0, 0.25).sub(inner)
    m = merge_adjacent_rotations(c)
    assert kinds_of(m) == [GateKind.RZ]
    assert m.body[0].params[0] == pytest.approx(0.5)


@settings(max_examples=30, deadline=None)
@given(circuits(max_qubits=4, max_len=16, measures=False, barriers=True))
def test_merge_preserves_unitary(c):
    m = merge_adjacent_rotations(c)
    stripped = Circuit(c.num_qubits)
    for ins in flatten(c).body:
        if ins.kind is not GateKind.BARRIER:
            stripped._append_fast(ins)
    m_stripped = Circuit(c.num_qubits)
    for ins in m.body:
        if ins.kind is not GateKind.BARRIER:
            m_stripped._append_fast(ins)
    assert unitaries_match(stripped, m_stripped)


# -- cancel_adjacent_inverses --------------------------------------------------

@pytest.mark.parametrize("build", [
    lambda c: c.h(0).h(0),
    lambda c: c.x(0).x(0),
    lambda c: c.y(0).y(0),
    lambda c: c.z(0).z(0),
    lambda c: c.s(0).sdg(0),
    lambda c: c.sdg(0).s(0),
    lambda c: c.t(0).tdg(0),
    lambda c: c.tdg(0).t(0),
    lambda c: c.x1(0).x1(0, dagger=True),
    lambda c: c.x1(0, dagger=True).x1(0),
])
def test_cancel_one_qubit_pairs(build):
    c = Circuit(1)
    build(c)
    assert cancel_adjacent_inverses(c).body == []


@pytest.mark.parametrize("build,n_left", [
    (lambda c: c.x1(0).x1(0), 2),          # sqrt-X squared is X, not identity
    (lambda c: c.s(0).s(0), 2),
    (lambda c: c.t(0).t(0), 2),
    (lambda c: c.h(0).x(0), 2),
    (lambda c: c.i(0).i(0), 2),            # identity gates are left alone
])
def test_cancel_leaves_non_inverse_pairs(build, n_left):
    c = Circuit(1)
    build(c)
    assert len(cancel_adjacent_inverses(c).body) == n_left


def test_cancel_two_qubit_pairs():
    assert cancel_adjacent_inverses(Circuit(2).cnot(0, 1).cnot(0, 1)).body == []
    assert cancel_adjacent_inverses(Circuit(2).cz(0, 1).cz(1, 0)).body == []
    assert cancel_adjacent_inverses(Circuit(2).swap(0, 1).swap(1, 0)).body == []
    assert cancel_adjacent_inverses(Circuit(2).swap(0, 1).swap(0, 1)).body == []


def test_cancel_cnot_orientation_matters():
    c = Circuit(2).cnot(0, 1).cnot(1, 0)
    assert len(cancel_adjacent_inverses(c).body) == 2


def test_cancel_two_qubit_needs_both_wires_clear():
    c = Circuit(2).cnot(0, 1).h(1).cnot(0, 1)
    assert len(cancel_adjacent_inverses(c).body) == 3
    # a spectator on an unrelated wire does not block
    c = Circuit(3).cnot(0, 1).h(2).cnot(0, 1)
    out = cancel_adjacent_inverses(c)
    assert kinds_of(out) == [GateKind.H]


def test_cancel_blocked_by_barrier():
    c = Circuit(1).h(0).barrier(0).h(0)
    assert len(cancel_adjacent_inverses(c).body) == 3


def test_cancel_fixpoint_nesting():
    c = Circuit(1).h(0).x(0).x(0).h(0)
    assert cancel_adjacent_inverses(c).body == []
    c = Circuit(2).cnot(0, 1).h(0).h(0).cnot(0, 1)
    assert cancel_adjacent_inverses(c).body == []


def test_cancel_keeps_rotations():
    c = Circuit(1).rz(0, 0.5).rz(0, -0.5)
    assert len(cancel_adjacent_inverses(c).body) == 2  # merging's job


@settings(max_examples=30, deadline=None)
@given(circuits(max_qubits=4, max_len=16, measures=False, barriers=False))
def test_cancel_preserves_unitary(c):
    out = cancel_adjacent_inverses(c)
    assert unitaries_match(flatten(c), out)


# -- decompose_to_basis ---------------------------------------------------------

ALLOWED = {
    "rz-x1-cz": {GateKind.RZ, GateKind.X1, GateKind.CZ,
                 GateKind.MEASURE, GateKind.BARRIER},
    "rz-rx-cnot": {GateKind.RZ, GateKind.RX, GateKind.CNOT,
                   GateKind.MEASURE, GateKind.BARRIER},
}

FIXED_GATES = [
    (GateKind.H, ()), (GateKind.X, ()), (GateKind.Y, ()), (GateKind.Z, ()),
    (GateKind.S, ()), (GateKind.SDG, ()), (GateKind.T, ()), (GateKind.TDG, ()),
    (GateKind.X1, ()),
    (GateKind.RX, (0.77,)), (GateKind.RY, (-1.3,)), (GateKind.RZ, (2.2,)),
    (GateKind.U3, (0.4, -0.9, 1.6)),
]


@pytest.mark.parametrize("basis", ["rz-x1-cz", "rz-rx-cnot"])
@pytest.mark.parametrize("kind,params", FIXED_GATES)
def test_lowered_one_qubit_gates_match(basis, kind, params):
    c = Circuit(1)
    c.append_gate(kind, (0,), params)
    low = decompose_to_basis(c, basis)
    assert all(ins.kind in ALLOWED[basis] for ins in low.body)
    assert not any(ins.dagger for ins in low.body)
    assert unitaries_match(c, low)


@pytest.mark.parametrize("basis", ["rz-x1-cz", "rz-rx-cnot"])
@pytest.mark.parametrize("kind", [GateKind.CNOT, GateKind.CZ, GateKind.SWAP])
@pytest.mark.parametrize("order", [(0, 1), (1, 0)])
def test_lowered_two_qubit_gates_match(basis, kind, order):
    c = Circuit(2)
    c.append_gate(kind, order)
    low = decompose_to_basis(c, basis)
    assert all(ins.kind in ALLOWED[basis] for ins in low.body)
    assert unitaries_match(c, low)


@pytest.mark.parametrize("basis", ["rz-x1-cz", "rz-rx-cnot"])
def test_lowered_daggered_x1_matches(basis):
    c = Circuit(1).x1(0, dagger=True)
    low = decompose_to_basis(c, basis)
    assert all(ins.kind in ALLOWED[basis] for ins in low.body)
    assert not any(ins.dagger for ins in low.body)
    assert unitaries_match(c, low)


def test_exact_h_sequence_in_x1_basis():
    low = decompose_to_basis(Circuit(1).h(0), "rz-x1-cz")
    assert kinds_of(low) == [GateKind.RZ, GateKind.X1, GateKind.RZ]
    assert low.body[0].params[0] == PI / 2
    assert low.body[2].params[0] == PI / 2


def test_exact_cnot_sequence_in_x1_basis():
    low = decompose_to_basis(Circuit(2).cnot(0, 1), "rz-x1-cz")
    assert kinds_of(low) == [GateKind.RZ, GateKind.X1, GateKind.RZ,
                             GateKind.CZ,
                             GateKind.RZ, GateKind.X1, GateKind.RZ]
    assert low.body[3].qubits == (0, 1)
    assert {ins.qubits for ins in low.body if ins.kind is not GateKind.CZ} \
        == {(1,)}


def test_identity_gate_dropped():
    for basis in ("rz-x1-cz", "rz-rx-cnot"):
        assert decompose_to_basis(Circuit(1).i(0), basis).body == []


def test_measure_barrier_pass_through():
    c = Circuit(2, 1).h(0).barrier(0, 1).measure(0, 0)
    for basis in ("rz-x1-cz", "rz-rx-cnot"):
        low = decompose_to_basis(c, basis)
        assert low.body[-1].kind is GateKind.MEASURE
        assert low.body[-1].cbit == 0
        assert any(ins.kind is GateKind.BARRIER for ins in low.body)


def test_none_basis_flattens_only():
    inner = Circuit(2).cnot(0, 1)
    c = Circuit(2).h(0).sub(inner)
    out = decompose_to_basis(c, "none")
    assert kinds_of(out) == [GateKind.H, GateKind.CNOT]


def test_unknown_basis_rejected():
    with pytest.raises(PassError):
        decompose_to_basis(Circuit(1).h(0), "clifford")
    with pytest.raises(PassError):
        expand_swaps(Circuit(1).h(0), "u-cx")


def test_bases_tuple():
    assert BASES == ("none", "rz-x1-cz", "rz-rx-cnot")


@pytest.mark.parametrize("basis", ["rz-x1-cz", "rz-rx-cnot"])
@settings(max_examples=20, deadline=None)
@given(c=circuits(max_qubits=3, max_len=12, measures=False, barriers=False))
def test_lowering_preserves_unitary(basis, c):
    low = decompose_to_basis(c, basis)
    assert all(ins.kind in ALLOWED[basis] for ins in low.body)
    assert unitaries_match(flatten(c), low)


# -- expand_swaps ----------------------------------------------------------------

@pytest.mark.parametrize("basis", ["rz-x1-cz", "rz-rx-cnot"])
def test_expand_swaps_rewrites_only_swaps(basis):
    c = Circuit(3).h(0).swap(0, 1).cnot(1, 2).swap(2, 0)
    out = expand_swaps(c, basis)
    assert all(ins.kind is not GateKind.SWAP for ins in out.body)
    # non-swap gates are untouched, in order
    kept = [ins.kind for ins in out.body
            if ins.kind in (GateKind.H, GateKind.CNOT)]
    if basis == "rz-x1-cz":
        assert kept == [GateKind.H, GateKind.CNOT]
    assert unitaries_match(flatten(c), out)


def test_expand_swaps_none_passthrough():
    c = Circuit(2).swap(0, 1)
    assert expand_swaps(c, "none") == flatten(c)


def test_expand_swaps_in_cnot_basis_is_three_cnots():
    out = expand_swaps(Circuit(2).swap(0, 1), "rz-rx-cnot")
    assert kinds_of(out) == [GateKind.CNOT] * 3
    assert [ins.qubits for ins in out.body] == [(0, 1), (1, 0), (0, 1)]
