"""Circuit model: instructions, nested sub-circuits, flattening, depth.

A circuit body is an ordered list of Instruction and SubcircuitInstance
elements.  Flat bodies (instructions only) are additionally kept in a packed
columnar form -- an opcode byte array plus operand/parameter arrays -- so
that serialization and structural equality run as bulk array operations.
The packed columns and the Instruction list are two views of the same body;
each is built lazily from the other and cached.
"""
from __future__ import annotations

import math
from collections import Counter
from operator import index as _as_index

import numpy as np

from .gates import (
    CLS_1Q, CLS_2Q, CLS_BARRIER, CLS_MEASURE, CLS_ROT, CLS_U3,
    DAGGER_SWAP, GateKind, KIND_BY_OPCODE, SELF_INVERSE, X1_DAGGER_OPCODE,
)


class CircuitError(ValueError):
    """Invalid instruction, operand, or circuit composition."""


def _same_float(a: float, b: float) -> bool:
    # bit-exact: distinguishes 0.0 from -0.0 (NaN never passes validation)
    return a == b and math.copysign(1.0, a) == math.copysign(1.0, b)


class Instruction:
    """One gate, measurement, or barrier application.

    Immutable.  ``dagger`` marks the instruction as the adjoint of its kind;
    flatten() resolves the flag for every kind except X1, whose adjoint is
    not in the gate set.
    """

    __slots__ = ("kind", "qubits", "params", "cbit", "dagger")

    def __init__(self, kind: GateKind, qubits, params=(), cbit: int | None = None,
                 dagger: bool = False):
        qubits = tuple(_as_index(q) for q in qubits)
        params = tuple(float(p) for p in params)
        cls = kind.opclass
        if cls == CLS_BARRIER:
            if not qubits:
                raise CircuitError("BARRIER needs at least one qubit")
        elif cls == CLS_2Q:
            if len(qubits) != 2:
                raise CircuitError(f"{kind.name} takes 2 qubits, got {len(qubits)}")
        elif len(qubits) != 1:
            raise CircuitError(f"{kind.name} takes 1 qubit, got {len(qubits)}")
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"{kind.name} qubits must be distinct: {qubits}")
        want = 1 if cls == CLS_ROT else 3 if cls == CLS_U3 else 0
        if len(params) != want:
            raise CircuitError(f"{kind.name} takes {want} params, got {len(params)}")
        for p in params:
            if not math.isfinite(p):
                raise CircuitError(f"{kind.name} param not finite: {p!r}")
        if cls == CLS_MEASURE:
            if cbit is None:
                raise CircuitError("MEASURE needs a classical bit")
            cbit = _as_index(cbit)
            if dagger:
                raise CircuitError("MEASURE cannot be daggered")
        elif cbit is not None:
            raise CircuitError(f"{kind.name} takes no classical bit")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "cbit", cbit)
        object.__setattr__(self, "dagger", bool(dagger))

    @classmethod
    def _raw(cls, kind, qubits, params, cbit, dagger):
        # trusted constructor for pre-validated data (decode, unpack)
        self = object.__new__(cls)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "cbit", cbit)
        object.__setattr__(self, "dagger", dagger)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Instruction is immutable")

    @property
    def opcode(self) -> int:
        if self.dagger and self.kind is GateKind.X1:
            return X1_DAGGER_OPCODE
        return self.kind.value

    def __eq__(self, other):
        if not isinstance(other, Instruction):
            return NotImplemented
        return (self.kind is other.kind and self.qubits == other.qubits
                and self.cbit == other.cbit and self.dagger == other.dagger
                and len(self.params) == len(other.params)
                and all(_same_float(a, b) for a, b in zip(self.params, other.params)))

    __hash__ = None

    def __repr__(self):
        bits = [self.kind.name, ",".join(f"q{q}" for q in self.qubits)]
        if self.params:
            bits.append("(" + ",".join(repr(p) for p in self.params) + ")")
        if self.cbit is not None:
            bits.append(f"c{self.cbit}")
        if self.dagger:
            bits.append("dag")
        return "<" + " ".join(bits) + ">"


def dagger_instruction(ins: Instruction) -> Instruction:
    """The adjoint of a single instruction (X1 keeps a dagger flag)."""
    k = ins.kind
    if k is GateKind.MEASURE:
        raise CircuitError("MEASURE cannot be daggered")
    if k in SELF_INVERSE:
        return ins if not ins.dagger else Instruction._raw(k, ins.qubits, ins.params, None, False)
    if k in DAGGER_SWAP:
        return Instruction._raw(DAGGER_SWAP[k], ins.qubits, (), None, False)
    if k is GateKind.X1:
        return Instruction._raw(k, ins.qubits, (), None, not ins.dagger)
    if k in (GateKind.RX, GateKind.RY, GateKind.RZ):
        return Instruction._raw(k, ins.qubits, (-ins.params[0],), None, False)
    if k is GateKind.U3:
        t, p, l = ins.params
        return Instruction._raw(k, ins.qubits, (-t, -l, -p), None, False)
    raise CircuitError(f"no dagger rule for {k.name}")  # pragma: no cover


def _resolve(ins: Instruction, block_dagger: bool) -> Instruction:
    """Fold an instruction's own dagger flag with an enclosing block's."""
    eff = ins.dagger ^ block_dagger
    if ins.kind is GateKind.MEASURE:
        if eff:
            raise CircuitError("MEASURE cannot be daggered")
        return ins
    if not eff:
        if not ins.dagger:
            return ins
        return Instruction._raw(ins.kind, ins.qubits, ins.params, ins.cbit, False)
    plain = ins if not ins.dagger else Instruction._raw(ins.kind, ins.qubits, ins.params, ins.cbit, False)
    return dagger_instruction(plain)


class SubcircuitInstance:
    """A placement of one circuit inside another (wires map identically)."""

    __slots__ = ("circuit", "dagger", "name")

    def __init__(self, circuit: "Circuit", dagger: bool = False, name: str | None = None):
        self.circuit = circuit
        self.dagger = bool(dagger)
        self.name = name

    def __eq__(self, other):
        if not isinstance(other, SubcircuitInstance):
            return NotImplemented
        return (self.dagger == other.dagger and self.name == other.name
                and self.circuit == other.circuit)

    __hash__ = None

    def __repr__(self):
        tag = self.name or self.circuit.name or "circuit"
        return f"<sub {tag}{' dag' if self.dagger else ''}>"


class _Columns:
    """Packed flat body: one row per instruction.

    code: opcode byte; a: qubit (or qubit count for BARRIER); b: second qubit
    (class 3), cbit (class 4), else -1; params: rotation/U3 angles in body
    order; extra: BARRIER qubit pool in body order.
    """

    __slots__ = ("code", "a", "b", "params", "extra")

    def __init__(self, code, a, b, params, extra):
        self.code = code
        self.a = a
        self.b = b
        self.params = params
        self.extra = extra

    def __len__(self):
        return len(self.code)

    def same(self, other: "_Columns") -> bool:
        return (self.code.tobytes() == other.code.tobytes()
                and self.a.tobytes() == other.a.tobytes()
                and self.b.tobytes() == other.b.tobytes()
                and self.params.tobytes() == other.params.tobytes()
                and self.extra.tobytes() == other.extra.tobytes())


_PARAMS_PER_CLASS = (0, 1, 3, 0, 0, 0, 0, 0)


def _pack_body(body) -> _Columns:
    code: list[int] = []
    a: list[int] = []
    b: list[int] = []
    params: list[float] = []
    extra: list[int] = []
    for ins in body:
        cls = ins.kind.opclass
        code.append(ins.opcode)
        if cls == CLS_BARRIER:
            a.append(len(ins.qubits))
            b.append(-1)
            extra.extend(ins.qubits)
        else:
            a.append(ins.qubits[0])
            if cls == CLS_2Q:
                b.append(ins.qubits[1])
            elif cls == CLS_MEASURE:
                b.append(ins.cbit)
            else:
                b.append(-1)
                params.extend(ins.params)
    return _Columns(
        np.array(code, dtype=np.uint8),
        np.array(a, dtype=np.int64),
        np.array(b, dtype=np.int64),
        np.array(params, dtype=np.float64),
        np.array(extra, dtype=np.int64),
    )


def _unpack_body(cols: _Columns) -> list[Instruction]:
    out: list[Instruction] = []
    app = out.append
    raw = Instruction._raw
    params = cols.params.tolist()
    extra = cols.extra.tolist()
    pi = 0
    xi = 0
    for op, av, bv in zip(cols.code.tolist(), cols.a.tolist(), cols.b.tolist()):
        kind = KIND_BY_OPCODE[op]
        cls = op >> 5
        if cls == CLS_1Q:
            app(raw(kind, (av,), (), None, op == X1_DAGGER_OPCODE))
        elif cls == CLS_ROT:
            app(raw(kind, (av,), (params[pi],), None, False))
            pi += 1
        elif cls == CLS_U3:
            app(raw(kind, (av,), tuple(params[pi:pi + 3]), None, False))
            pi += 3
        elif cls == CLS_2Q:
            app(raw(kind, (av, bv), (), None, False))
        elif cls == CLS_MEASURE:
            app(raw(kind, (av,), (), bv, False))
        else:
            app(raw(kind, tuple(extra[xi:xi + av]), (), None, False))
            xi += av
    return out


class Circuit:
    """A quantum circuit over ``num_qubits`` wires and ``num_cbits`` bits."""

    __slots__ = ("num_qubits", "num_cbits", "name", "_items", "_cols",
                 "_subs", "_dagger_fixups")

    def __init__(self, num_qubits: int, num_cbits: int | None = None,
                 name: str | None = None):
        num_qubits = _as_index(num_qubits)
        if num_qubits < 0:
            raise CircuitError("num_qubits must be >= 0")
        num_cbits = num_qubits if num_cbits is None else _as_index(num_cbits)
        if num_cbits < 0:
            raise CircuitError("num_cbits must be >= 0")
        self.num_qubits = num_qubits
        self.num_cbits = num_cbits
        self.name = name
        self._items: list | None = []
        self._cols: _Columns | None = None
        self._subs = 0           # SubcircuitInstance elements in _items
        self._dagger_fixups = 0  # instructions whose dagger flag must resolve

    @classmethod
    def _from_columns(cls, num_qubits, num_cbits, cols: _Columns, name=None):
        self = object.__new__(cls)
        self.num_qubits = num_qubits
        self.num_cbits = num_cbits
        self.name = name
        self._items = None
        self._cols = cols
        self._subs = 0
        self._dagger_fixups = 0
        return self

    # -- body views ---------------------------------------------------------

    @property
    def body(self) -> list:
        """Body elements, in order.  Treat as read-only; use append()."""
        if self._items is None:
            self._items = _unpack_body(self._cols)
        return self._items

    def _columns(self) -> _Columns:
        if self._cols is None:
            if self._subs:
                raise CircuitError("cannot pack a circuit with sub-circuits")
            self._cols = _pack_body(self._items)
        return self._cols

    def __len__(self):
        if self._items is None:
            return len(self._cols)
        return len(self._items)

    # -- building -----------------------------------------------------------

    def append(self, item) -> None:
        if isinstance(item, Instruction):
            for q in item.qubits:
                if not 0 <= q < self.num_qubits:
                    raise CircuitError(
                        f"qubit {q} out of range for {self.num_qubits}-qubit circuit")
            if item.kind is GateKind.MEASURE and not 0 <= item.cbit < self.num_cbits:
                raise CircuitError(
                    f"cbit {item.cbit} out of range for {self.num_cbits} cbits")
            body = self.body
            body.append(item)
            if item.dagger and item.kind is not GateKind.X1:
                self._dagger_fixups += 1
        elif isinstance(item, SubcircuitInstance):
            sub = item.circuit
            if sub.num_qubits > self.num_qubits or sub.num_cbits > self.num_cbits:
                raise CircuitError(
                    f"sub-circuit needs {sub.num_qubits}q/{sub.num_cbits}c, parent has "
                    f"{self.num_qubits}q/{self.num_cbits}c")
            if sub is self or _contains(sub, self):
                raise CircuitError("circular sub-circuit containment")
            self.body.append(item)
            self._subs += 1
        else:
            raise CircuitError(f"cannot append {type(item).__name__} to circuit")
        self._cols = None

    def extend(self, items) -> None:
        for item in items:
            self.append(item)

    def append_gate(self, kind: GateKind, qubits, params=(), cbit=None,
                    dagger: bool = False) -> "Circuit":
        self.append(Instruction(kind, qubits, params, cbit, dagger))
        return self

    def _append_fast(self, ins: Instruction) -> None:
        # for internal passes: operands already validated against this width
        self._items.append(ins)
        if ins.dagger and ins.kind is not GateKind.X1:
            self._dagger_fixups += 1

    # gate builders; each returns self so circuits can be chained together
    def i(self, q): self.append(Instruction(GateKind.I, (q,))); return self
    def h(self, q): self.append(Instruction(GateKind.H, (q,))); return self
    def x(self, q): self.append(Instruction(GateKind.X, (q,))); return self
    def y(self, q): self.append(Instruction(GateKind.Y, (q,))); return self
    def z(self, q): self.append(Instruction(GateKind.Z, (q,))); return self
    def s(self, q): self.append(Instruction(GateKind.S, (q,))); return self
    def sdg(self, q): self.append(Instruction(GateKind.SDG, (q,))); return self
    def t(self, q): self.append(Instruction(GateKind.T, (q,))); return self
    def tdg(self, q): self.append(Instruction(GateKind.TDG, (q,))); return self

    def x1(self, q, dagger=False):
        self.append(Instruction(GateKind.X1, (q,), dagger=dagger))
        return self

    def rx(self, q, theta): self.append(Instruction(GateKind.RX, (q,), (theta,))); return self
    def ry(self, q, theta): self.append(Instruction(GateKind.RY, (q,), (theta,))); return self
    def rz(self, q, theta): self.append(Instruction(GateKind.RZ, (q,), (theta,))); return self

    def u3(self, q, theta, phi, lam):
        self.append(Instruction(GateKind.U3, (q,), (theta, phi, lam)))
        return self

    def cnot(self, c, t): self.append(Instruction(GateKind.CNOT, (c, t))); return self
    def cz(self, a, b): self.append(Instruction(GateKind.CZ, (a, b))); return self
    def swap(self, a, b): self.append(Instruction(GateKind.SWAP, (a, b))); return self

    def measure(self, q, c):
        self.append(Instruction(GateKind.MEASURE, (q,), cbit=c))
        return self

    def barrier(self, *qubits):
        self.append(Instruction(GateKind.BARRIER, qubits))
        return self

    def sub(self, circuit: "Circuit", dagger=False, name=None):
        self.append(SubcircuitInstance(circuit, dagger=dagger, name=name))
        return self

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        if self.num_qubits != other.num_qubits or self.num_cbits != other.num_cbits:
            return False
        if len(self) != len(other):
            return False
        if self._subs == 0 and other._subs == 0:
            return self._columns().same(other._columns())
        return self.body == other.body

    __hash__ = None

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<Circuit{tag} {self.num_qubits}q/{self.num_cbits}c, {len(self)} elements>"


def _contains(root: Circuit, target: Circuit) -> bool:
    if root._items is None:
        return False
    for el in root._items:
        if isinstance(el, SubcircuitInstance):
            if el.circuit is target or _contains(el.circuit, target):
                return True
    return False


def flatten(c: Circuit) -> Circuit:
    """Expand sub-circuits and resolve dagger flags.

    Daggered blocks reverse instruction order and take each instruction's
    adjoint; only X1 keeps a dagger flag in the output.  Returns ``c`` itself
    when it is already flat.
    """
    if c._items is None or (c._subs == 0 and c._dagger_fixups == 0):
        return c
    out = Circuit(c.num_qubits, c.num_cbits, name=c.name)
    _expand(c._items, False, out)
    return out


def _expand(items, block_dagger: bool, out: Circuit) -> None:
    seq = reversed(items) if block_dagger else items
    for el in seq:
        if isinstance(el, SubcircuitInstance):
            _expand(el.circuit.body, block_dagger ^ el.dagger, out)
        else:
            out._append_fast(_resolve(el, block_dagger))


def depth(c: Circuit) -> int:
    """Greedy-layering depth over qubit wires (empty circuit: 0).

    Every flat instruction, including MEASURE and BARRIER, occupies one layer
    on each of its qubits.
    """
    flat = flatten(c)
    level = [0] * flat.num_qubits
    top = 0
    for ins in flat.body:
        layer = 1 + max(level[q] for q in ins.qubits)
        for q in ins.qubits:
            level[q] = layer
        if layer > top:
            top = layer
    return top


def gate_counts(c: Circuit) -> Counter:
    """Flat instruction counts by kind (daggered X1 counts as X1)."""
    flat = flatten(c)
    if flat._items is None:
        codes = flat._cols.code
        vals, counts = np.unique(codes, return_counts=True)
        out: Counter = Counter()
        for v, n in zip(vals.tolist(), counts.tolist()):
            out[KIND_BY_OPCODE[v]] += int(n)
        return out
    return Counter(ins.kind for ins in flat.body)
