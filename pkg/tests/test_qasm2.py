"""OpenQASM 2 importer and renderer."""
import math

import pytest
from hypothesis import given, settings

from quantir.circuit import Circuit, flatten
from quantir.gates import GateKind
from quantir.qasm2 import QasmError, UnsupportedFeature, emit_qasm2, import_qasm2
from quantir.sim import fidelity_up_to_phase, simulate

from conftest import circuits


def fidelity(a, b):
    return fidelity_up_to_phase(simulate(a), simulate(b))


HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


# -- importer: structure ----------------------------------------------------------

def test_import_minimal():
    c = import_qasm2(HEADER + "qreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\n")
    assert c.num_qubits == 2 and c.num_cbits == 2
    assert [i.kind for i in c.body] == [GateKind.H, GateKind.CNOT]
    assert c.body[1].qubits == (0, 1)


def test_import_registers_concatenate_in_declaration_order():
    text = HEADER + "qreg a[1];\nqreg b[1];\ncx a[0],b[0];\n"
    c = import_qasm2(text)
    assert c.num_qubits == 2
    assert c.body[0].kind is GateKind.CNOT and c.body[0].qubits == (0, 1)


def test_import_three_registers_offsets():
    text = HEADER + "qreg a[2]; qreg b[3]; qreg c[1]; x b[2]; z c[0]; y a[1];"
    c = import_qasm2(text)
    assert c.num_qubits == 6
    assert [(i.kind, i.qubits[0]) for i in c.body] == [
        (GateKind.X, 4), (GateKind.Z, 5), (GateKind.Y, 1)]


def test_import_measure_and_barrier():
    text = HEADER + "qreg q[2];\ncreg m[2];\nbarrier q[0],q[1];\nmeasure q[1] -> m[0];\n"
    c = import_qasm2(text)
    bar, mea = c.body
    assert bar.kind is GateKind.BARRIER and bar.qubits == (0, 1)
    assert mea.kind is GateKind.MEASURE and mea.qubits == (1,) and mea.cbit == 0


def test_import_ignores_comments_and_blank_lines():
    text = ("// leading comment\nOPENQASM 2.0;\n\ninclude \"qelib1.inc\";\n"
            "qreg q[1]; // trailing\n// h q[0];\nx q[0];\n")
    c = import_qasm2(text)
    assert [i.kind for i in c.body] == [GateKind.X]


def test_import_statement_may_span_lines():
    c = import_qasm2("OPENQASM 2.0;\nqreg q[2];\ncx\n  q[0],\n  q[1];\n")
    assert c.body[0].kind is GateKind.CNOT


def test_import_accepts_crlf():
    c = import_qasm2("OPENQASM 2.0;\r\nqreg q[1];\r\nh q[0];\r\n")
    assert c.body[0].kind is GateKind.H


def test_import_include_is_optional():
    c = import_qasm2("OPENQASM 2.0;\nqreg q[1];\ns q[0];\n")
    assert c.body[0].kind is GateKind.S


# -- importer: gate and angle mappings --------------------------------------------

@pytest.mark.parametrize("name,kind", [
    ("h", GateKind.H), ("x", GateKind.X), ("y", GateKind.Y), ("z", GateKind.Z),
    ("s", GateKind.S), ("sdg", GateKind.SDG), ("t", GateKind.T),
    ("tdg", GateKind.TDG), ("sx", GateKind.X1),
])
def test_import_fixed_gate_names(name, kind):
    c = import_qasm2(HEADER + f"qreg q[1];\n{name} q[0];\n")
    assert c.body[0].kind is kind and not c.body[0].dagger


@pytest.mark.parametrize("name,kind", [
    ("rx", GateKind.RX), ("ry", GateKind.RY), ("rz", GateKind.RZ)])
def test_import_rotations(name, kind):
    c = import_qasm2(HEADER + f"qreg q[1];\n{name}(0.25) q[0];\n")
    assert c.body[0].kind is kind and c.body[0].params == (0.25,)


def test_import_u1_maps_to_rz():
    c = import_qasm2(HEADER + "qreg q[1];\nu1(0.5) q[0];\n")
    assert c.body[0].kind is GateKind.RZ and c.body[0].params == (0.5,)


def test_import_u2_maps_to_u3_with_half_pi_theta():
    c = import_qasm2(HEADER + "qreg q[1];\nu2(0.5,1.5) q[0];\n")
    ins = c.body[0]
    assert ins.kind is GateKind.U3 and ins.params == (math.pi / 2, 0.5, 1.5)


def test_import_u3():
    c = import_qasm2(HEADER + "qreg q[1];\nu3(1.0,2.0,3.0) q[0];\n")
    assert c.body[0].params == (1.0, 2.0, 3.0)


@pytest.mark.parametrize("name,kind", [
    ("cx", GateKind.CNOT), ("cz", GateKind.CZ), ("swap", GateKind.SWAP)])
def test_import_two_qubit_gates(name, kind):
    c = import_qasm2(HEADER + f"qreg q[3];\n{name} q[2],q[0];\n")
    assert c.body[0].kind is kind and c.body[0].qubits == (2, 0)


@pytest.mark.parametrize("expr,value", [
    ("0", 0.0), ("1.5", 1.5), (".5", 0.5), ("2.", 2.0), ("1e-3", 1e-3),
    ("-0.5", -0.5), ("pi", math.pi), ("-pi", -math.pi),
    ("pi/2", math.pi / 2), ("-pi/4", -math.pi / 4),
    ("3*pi/4", 3 * math.pi / 4), ("-7*pi/8", -7 * math.pi / 8),
    (" pi / 2 ", math.pi / 2),
])
def test_import_angle_forms(expr, value):
    c = import_qasm2(HEADER + f"qreg q[1];\nrz({expr}) q[0];\n")
    assert c.body[0].params[0] == pytest.approx(value, abs=0, rel=1e-15)


# -- importer: rejections ---------------------------------------------------------

def test_import_rejects_gate_definition():
    text = HEADER + "qreg q[1];\ngate g a { h a; }\ng q[0];\n"
    with pytest.raises(UnsupportedFeature) as err:
        import_qasm2(text)
    assert err.value.feature == "gate" and err.value.line == 4


def test_import_rejects_if_statement():
    text = HEADER + "qreg q[1];\ncreg c[1];\nif (c==1) x q[0];\n"
    with pytest.raises(UnsupportedFeature) as err:
        import_qasm2(text)
    assert err.value.feature == "if"


def test_import_rejects_opaque():
    with pytest.raises(UnsupportedFeature) as err:
        import_qasm2(HEADER + "opaque magic q;\n")
    assert err.value.feature == "opaque"


def test_import_rejects_unknown_gate_name():
    with pytest.raises(UnsupportedFeature) as err:
        import_qasm2(HEADER + "qreg q[3];\nccx q[0],q[1],q[2];\n")
    assert err.value.feature == "ccx"


def test_import_rejects_wrong_version():
    with pytest.raises(UnsupportedFeature) as err:
        import_qasm2("OPENQASM 3.0;\nqreg q[1];\n")
    assert "3.0" in err.value.feature


def test_import_rejects_missing_header():
    with pytest.raises(QasmError, match="OPENQASM"):
        import_qasm2("qreg q[1];\nh q[0];\n")
    with pytest.raises(QasmError, match="missing OPENQASM header"):
        import_qasm2("// nothing here\n")


def test_import_rejects_register_broadcast():
    with pytest.raises(UnsupportedFeature) as err:
        import_qasm2(HEADER + "qreg q[2];\nh q;\n")
    assert err.value.feature == "register broadcast"


def test_import_rejects_other_includes():
    with pytest.raises(UnsupportedFeature):
        import_qasm2('OPENQASM 2.0;\ninclude "other.inc";\n')


@pytest.mark.parametrize("stmt,match", [
    ("h q[5];", "out of range"),
    ("h r[0];", "unknown register"),
    ("cx q[0];", "2 qubit"),
    ("h q[0],q[1];", "1 qubit"),
    ("rz() q[0];", "1 parameter"),
    ("rz(0.1,0.2) q[0];", "1 parameter"),
    ("u2(0.1) q[0];", "2 parameters"),
    ("u3(0.1) q[0];", "3 parameters"),
    ("h(0.5) q[0];", "no parameters"),
    ("cx q[0],q[0];", "distinct"),
    ("measure q[0];", "->"),
    ("barrier;", "at least one"),
])
def test_import_rejects_malformed_statements(stmt, match):
    with pytest.raises(QasmError, match=match):
        import_qasm2(HEADER + "qreg q[2];\ncreg c[2];\n" + stmt + "\n")


def test_import_rejects_duplicate_register():
    with pytest.raises(QasmError, match="already declared"):
        import_qasm2(HEADER + "qreg q[1];\nqreg q[2];\n")


def test_import_rejects_richer_expression():
    with pytest.raises(UnsupportedFeature, match="angle expression"):
        import_qasm2(HEADER + "qreg q[1];\nrz(2*pi/3+1) q[0];\n")


def test_import_rejects_missing_semicolon():
    with pytest.raises(QasmError, match="missing ';'"):
        import_qasm2(HEADER + "qreg q[1];\nh q[0]\n")


def test_import_error_lines_are_one_based():
    text = 'OPENQASM 2.0;\nqreg q[1];\nh q[0];\nbadgate q[0];\n'
    with pytest.raises(QasmError) as err:
        import_qasm2(text)
    assert err.value.line == 4 and "line 4" in str(err.value)


def test_import_measure_creg_qreg_mixup():
    text = HEADER + "qreg q[1];\ncreg c[1];\nmeasure c[0] -> c[0];\n"
    with pytest.raises(QasmError, match="unknown register"):
        import_qasm2(text)


# -- renderer ---------------------------------------------------------------------

def test_emit_header_and_registers():
    c = Circuit(3, 2)
    c.h(0)
    text = emit_qasm2(c)
    lines = text.splitlines()
    assert lines[0] == "OPENQASM 2.0;"
    assert lines[1] == 'include "qelib1.inc";'
    assert lines[2] == "qreg q[3];"
    assert lines[3] == "creg c[2];"
    assert text.endswith("\n")


def test_emit_omits_empty_creg():
    c = Circuit(1, 0)
    c.x(0)
    assert "creg" not in emit_qasm2(c)


def test_emit_known_forms():
    c = Circuit(2, 1)
    c.h(0)
    c.rz(0, 0.5)
    c.cnot(0, 1)
    c.cz(0, 1)
    c.measure(1, 0)
    text = emit_qasm2(c)
    assert "u2(0,pi) q[0];" in text
    assert "u1(0.5) q[0];" in text
    assert "cx q[0],q[1];" in text
    assert "cz q[0],q[1];" in text
    assert "measure q[1] -> c[0];" in text


def test_emit_swap_as_three_cx():
    c = Circuit(2, 0)
    c.swap(0, 1)
    body = emit_qasm2(c).splitlines()[3:]
    assert body == ["cx q[0],q[1];", "cx q[1],q[0];", "cx q[0],q[1];"]


def test_emit_barrier():
    c = Circuit(3, 0)
    c.barrier(2, 0)
    assert "barrier q[2],q[0];" in emit_qasm2(c)


def test_emit_flattens_subcircuits():
    inner = Circuit(1, 0)
    inner.t(0)
    outer = Circuit(1, 0)
    outer.sub(inner)
    outer.sub(inner, dagger=True)
    text = emit_qasm2(outer)
    assert "u1(pi/4) q[0];" in text and "u1(-pi/4) q[0];" in text


# -- round trip -------------------------------------------------------------------

ALL_GATES = Circuit(3, 2)
ALL_GATES.i(0)
ALL_GATES.h(0)
ALL_GATES.x(1)
ALL_GATES.y(2)
ALL_GATES.z(0)
ALL_GATES.s(1)
ALL_GATES.sdg(2)
ALL_GATES.t(0)
ALL_GATES.tdg(1)
ALL_GATES.x1(2)
ALL_GATES.x1(0, dagger=True)
ALL_GATES.rx(1, 0.3)
ALL_GATES.ry(2, -1.2)
ALL_GATES.rz(0, 2.5)
ALL_GATES.u3(1, 0.4, 1.1, -0.7)
ALL_GATES.cnot(0, 1)
ALL_GATES.cz(1, 2)
ALL_GATES.swap(0, 2)


def test_round_trip_every_gate_kind_preserves_state():
    back = import_qasm2(emit_qasm2(ALL_GATES))
    assert back.num_qubits == 3
    assert fidelity(ALL_GATES, back) > 1 - 1e-9


@pytest.mark.parametrize("kind", list(GateKind))
def test_u_forms_match_each_gate(kind):
    if kind in (GateKind.MEASURE, GateKind.BARRIER):
        pytest.skip("not a unitary gate")
    from quantir.gates import CLS_2Q, PARAM_COUNT
    n = 2 if kind.opclass == CLS_2Q else 1
    c = Circuit(n, 0)
    params = {1: (0.37,), 3: (0.37, -1.4, 2.2)}.get(PARAM_COUNT[kind.opclass], ())
    c.append_gate(kind, tuple(range(n)), params)
    back = import_qasm2(emit_qasm2(c))
    assert fidelity(c, back) > 1 - 1e-12


def test_u_form_of_daggered_x1():
    c = Circuit(1, 0)
    c.x1(0, dagger=True)
    back = import_qasm2(emit_qasm2(c))
    assert fidelity(c, back) > 1 - 1e-12


def test_round_trip_preserves_measure_targets():
    c = Circuit(2, 2)
    c.h(0)
    c.measure(0, 1)
    c.measure(1, 0)
    back = import_qasm2(emit_qasm2(c))
    tail = back.body[-2:]
    assert [(i.qubits[0], i.cbit) for i in tail] == [(0, 1), (1, 0)]


def test_emitted_angles_reimport_bit_exact():
    c = Circuit(1, 0)
    for theta in (1e-300, 0.1 + 0.2, math.pi, -5e-324, 123456.789):
        c.rz(0, theta)
    back = import_qasm2(emit_qasm2(c))
    assert [i.params[0] for i in back.body] == [i.params[0] for i in c.body]


@settings(max_examples=60, deadline=None)
@given(circuits(max_qubits=4, max_len=25, measures=False))
def test_round_trip_random_circuits_equivalent(c):
    back = import_qasm2(emit_qasm2(c))
    assert back.num_qubits == flatten(c).num_qubits
    assert fidelity(c, back) > 1 - 1e-9
