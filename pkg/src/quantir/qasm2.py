"""OpenQASM 2 subset: importer and a matching text renderer.

The importer accepts the common single-file subset: an ``OPENQASM 2.0;``
header, ``include "qelib1.inc";`` (ignored), ``qreg``/``creg`` declarations
(multiple registers concatenate into one index space in declaration order),
and the statements h, x, y, z, s, sdg, t, tdg, sx, rx, ry, rz, u1, u2, u3,
cx, cz, swap, measure, barrier.  Mappings: ``u1(l) -> RZ(l)``,
``u2(p,l) -> U3(pi/2,p,l)``, ``sx -> X1``.  Angle expressions are decimal
literals, ``pi``, unary minus, and the forms ``pi/INT`` / ``INT*pi/INT``.

Anything outside the subset — ``gate`` definitions, ``if``, ``opaque``,
other versions, unknown statement names, whole-register (broadcast)
operands, richer expressions — raises :class:`UnsupportedFeature`.  Plain
syntax problems raise :class:`QasmError`.  Both carry a 1-based line number.

The renderer emits the same subset back, writing every one-qubit gate in
u1/u2/u3 form (so a fixed three-gate vocabulary covers the whole gate set)
and SWAP as three ``cx``.  ``import_qasm2(emit_qasm2(c))`` reproduces the
flattened circuit up to that rewriting, verified against the simulator.
"""
from __future__ import annotations

import math
import re

from .circuit import Circuit, CircuitError, Instruction
from .gates import GateKind

__all__ = ["QasmError", "UnsupportedFeature", "import_qasm2", "emit_qasm2"]


class QasmError(ValueError):
    """Malformed QASM input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class UnsupportedFeature(QasmError):
    """Valid OpenQASM 2 that falls outside the supported subset."""

    def __init__(self, feature: str, line: int | None = None):
        self.feature = feature
        super().__init__(f"unsupported feature: {feature}", line)


# -- importer --------------------------------------------------------------------

_FIXED_GATES = {
    "h": GateKind.H, "x": GateKind.X, "y": GateKind.Y, "z": GateKind.Z,
    "s": GateKind.S, "sdg": GateKind.SDG, "t": GateKind.T, "tdg": GateKind.TDG,
    "sx": GateKind.X1,
}
_ROT_GATES = {"rx": GateKind.RX, "ry": GateKind.RY, "rz": GateKind.RZ}
_TWO_Q_GATES = {"cx": GateKind.CNOT, "cz": GateKind.CZ, "swap": GateKind.SWAP}

_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_PI_FORM = re.compile(r"([+-])?\s*(?:(\d+)\s*\*\s*)?pi(?:\s*/\s*(\d+))?\Z")
_REG_DECL = re.compile(r"(qreg|creg)\s+([A-Za-z_][A-Za-z0-9_]*)\s*"
                       r"\[\s*(\d+)\s*\]\Z")
_REF = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*(?:\[\s*(\d+)\s*\])?\Z")
_HEAD = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)")


def _strip_comments(text: str) -> str:
    return re.sub(r"//[^\n]*", "", text)


def _statements(text: str):
    """Yield (line_number, statement) splitting on ';' outside comments."""
    line = 1
    start_line = None
    buf: list[str] = []
    for ch in _strip_comments(text):
        if ch == "\n":
            line += 1
        if ch == ";":
            stmt = "".join(buf).strip()
            if stmt:
                yield (start_line or line), stmt
            buf.clear()
            start_line = None
            continue
        if not ch.isspace() and start_line is None:
            start_line = line
        buf.append(ch)
    tail = "".join(buf).strip()
    if tail:
        raise QasmError("statement missing ';'", start_line)


def _parse_angle(expr: str, line: int) -> float:
    expr = expr.strip()
    if _DECIMAL.match(expr):
        return float(expr)
    m = _PI_FORM.match(expr)
    if m:
        sign, mul, div = m.groups()
        value = math.pi
        if mul is not None:
            value *= int(mul)
        if div is not None:
            if int(div) == 0:
                raise QasmError("division by zero in angle", line)
            value /= int(div)
        return -value if sign == "-" else value
    raise UnsupportedFeature(f"angle expression {expr!r}", line)


def _split_args(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    return parts if parts != [""] else []


class _Registers:
    def __init__(self):
        self.offsets: dict[str, tuple[int, int]] = {}  # name -> (offset, size)
        self.total = 0

    def declare(self, name: str, size: int, line: int):
        if name in self.offsets:
            raise QasmError(f"register {name!r} already declared", line)
        self.offsets[name] = (self.total, size)
        self.total += size

    def resolve(self, ref: str, line: int) -> int:
        m = _REF.match(ref.strip())
        if not m:
            raise QasmError(f"bad operand {ref!r}", line)
        name, idx = m.groups()
        if name not in self.offsets:
            raise QasmError(f"unknown register {name!r}", line)
        if idx is None:
            raise UnsupportedFeature("register broadcast", line)
        offset, size = self.offsets[name]
        i = int(idx)
        if i >= size:
            raise QasmError(f"index {i} out of range for {name}[{size}]", line)
        return offset + i


def import_qasm2(text: str) -> Circuit:
    """Parse the OpenQASM 2 subset into a flat circuit."""
    qregs = _Registers()
    cregs = _Registers()
    instructions: list[tuple[int, GateKind, tuple, tuple, int | None]] = []
    saw_header = False

    for line, stmt in _statements(text):
        head_m = _HEAD.match(stmt)
        if not head_m:
            raise QasmError(f"bad statement {stmt!r}", line)
        head = head_m.group(1)
        rest = stmt[head_m.end():].strip()

        if not saw_header:
            if head != "OPENQASM":
                raise QasmError("first statement must be 'OPENQASM 2.0'", line)
            if rest != "2.0":
                raise UnsupportedFeature(f"version {rest!r}", line)
            saw_header = True
            continue

        if head == "OPENQASM":
            raise QasmError("duplicate OPENQASM header", line)
        if head == "include":
            if rest != '"qelib1.inc"':
                raise UnsupportedFeature(f"include {rest}", line)
            continue
        if head in ("qreg", "creg"):
            m = _REG_DECL.match(stmt)
            if not m:
                raise QasmError(f"bad register declaration {stmt!r}", line)
            _, name, size = m.groups()
            if int(size) < 1:
                raise QasmError("register size must be >= 1", line)
            (qregs if head == "qreg" else cregs).declare(name, int(size), line)
            continue
        if head in ("gate", "if", "opaque"):
            raise UnsupportedFeature(head, line)

        if head == "measure":
            m = re.match(r"(.+?)->(.+)\Z", rest)
            if not m:
                raise QasmError("measure needs 'q[i] -> c[j]'", line)
            q = qregs.resolve(m.group(1), line)
            c = cregs.resolve(m.group(2), line)
            instructions.append((line, GateKind.MEASURE, (q,), (), c))
            continue
        if head == "barrier":
            qs = tuple(qregs.resolve(a, line) for a in _split_args(rest))
            if not qs:
                raise QasmError("barrier needs at least one qubit", line)
            instructions.append((line, GateKind.BARRIER, qs, (), None))
            continue

        params: tuple[float, ...] = ()
        if rest.startswith("("):
            depth = 0
            for i, ch in enumerate(rest):
                depth += ch == "("
                depth -= ch == ")"
                if depth == 0:
                    break
            else:
                raise QasmError("unbalanced parentheses", line)
            params = tuple(_parse_angle(p, line)
                           for p in _split_args(rest[1:i]))
            rest = rest[i + 1:].strip()

        if head in _FIXED_GATES or head in _TWO_Q_GATES:
            if params:
                raise QasmError(f"{head} takes no parameters", line)
            kind = _FIXED_GATES.get(head) or _TWO_Q_GATES[head]
        elif head in _ROT_GATES or head == "u1":
            if len(params) != 1:
                raise QasmError(f"{head} takes 1 parameter", line)
            kind = _ROT_GATES.get(head, GateKind.RZ)
        elif head == "u2":
            if len(params) != 2:
                raise QasmError("u2 takes 2 parameters", line)
            kind = GateKind.U3
            params = (math.pi / 2, params[0], params[1])
        elif head == "u3":
            if len(params) != 3:
                raise QasmError("u3 takes 3 parameters", line)
            kind = GateKind.U3
        else:
            raise UnsupportedFeature(head, line)

        qs = tuple(qregs.resolve(a, line) for a in _split_args(rest))
        need = 2 if head in _TWO_Q_GATES else 1
        if len(qs) != need:
            raise QasmError(f"{head} takes {need} qubit operand(s)", line)
        instructions.append((line, kind, qs, params, None))

    if not saw_header:
        raise QasmError("missing OPENQASM header", None)

    circuit = Circuit(qregs.total, cregs.total)
    for line, kind, qs, params, cbit in instructions:
        try:
            circuit.append(Instruction(kind, qs, params, cbit))
        except CircuitError as exc:
            raise QasmError(str(exc), line) from exc
    return circuit


# -- renderer --------------------------------------------------------------------

def _ang(value: float) -> str:
    return repr(float(value))


def emit_qasm2(circuit: Circuit) -> str:
    """Render a circuit as importable OpenQASM 2 text (u-form dialect)."""
    from .circuit import flatten

    flat = flatten(circuit)
    out = ["OPENQASM 2.0;", 'include "qelib1.inc";',
           f"qreg q[{max(flat.num_qubits, 1)}];"]
    if flat.num_cbits:
        out.append(f"creg c[{flat.num_cbits}];")
    emit = out.append
    for ins in flat.body:
        k = ins.kind
        q = ins.qubits[0]
        if k is GateKind.RZ:
            emit(f"u1({_ang(ins.params[0])}) q[{q}];")
        elif k is GateKind.CNOT:
            a, b = ins.qubits
            emit(f"cx q[{a}],q[{b}];")
        elif k is GateKind.CZ:
            a, b = ins.qubits
            emit(f"cz q[{a}],q[{b}];")
        elif k is GateKind.H:
            emit(f"u2(0,pi) q[{q}];")
        elif k is GateKind.RX:
            emit(f"u3({_ang(ins.params[0])},-pi/2,pi/2) q[{q}];")
        elif k is GateKind.RY:
            emit(f"u3({_ang(ins.params[0])},0,0) q[{q}];")
        elif k is GateKind.U3:
            t, p, l = ins.params
            emit(f"u3({_ang(t)},{_ang(p)},{_ang(l)}) q[{q}];")
        elif k is GateKind.X1:
            theta = "-pi/2" if ins.dagger else "pi/2"
            emit(f"u3({theta},-pi/2,pi/2) q[{q}];")
        elif k is GateKind.X:
            emit(f"u3(pi,0,pi) q[{q}];")
        elif k is GateKind.Y:
            emit(f"u3(pi,pi/2,pi/2) q[{q}];")
        elif k is GateKind.Z:
            emit(f"u1(pi) q[{q}];")
        elif k is GateKind.S:
            emit(f"u1(pi/2) q[{q}];")
        elif k is GateKind.SDG:
            emit(f"u1(-pi/2) q[{q}];")
        elif k is GateKind.T:
            emit(f"u1(pi/4) q[{q}];")
        elif k is GateKind.TDG:
            emit(f"u1(-pi/4) q[{q}];")
        elif k is GateKind.I:
            emit(f"u1(0) q[{q}];")
        elif k is GateKind.SWAP:
            a, b = ins.qubits
            emit(f"cx q[{a}],q[{b}];")
            emit(f"cx q[{b}],q[{a}];")
            emit(f"cx q[{a}],q[{b}];")
        elif k is GateKind.MEASURE:
            emit(f"measure q[{q}] -> c[{ins.cbit}];")
        elif k is GateKind.BARRIER:
            emit("barrier " + ",".join(f"q[{i}]" for i in ins.qubits) + ";")
        else:  # pragma: no cover
            raise QasmError(f"no rendering for {k.name}")
    return "\n".join(out) + "\n"
