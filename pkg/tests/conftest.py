"""Shared strategies and builders for the test suite."""
from __future__ import annotations

import math

from hypothesis import strategies as st

from quantir.circuit import Circuit
from quantir.gates import GateKind

PARAMLESS_1Q = [GateKind.I, GateKind.H, GateKind.X, GateKind.Y, GateKind.Z,
                GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG, GateKind.X1]
ROTATIONS = [GateKind.RX, GateKind.RY, GateKind.RZ]
TWO_Q = [GateKind.CNOT, GateKind.CZ, GateKind.SWAP]

angles = st.floats(min_value=-4 * math.pi, max_value=4 * math.pi,
                   allow_nan=False, allow_infinity=False)


@st.composite
def circuits(draw, max_qubits: int = 5, max_len: int = 24,
             measures: bool = False, barriers: bool = True):
    """Random flat circuit; trailing measures only (when enabled)."""
    n = draw(st.integers(min_value=1, max_value=max_qubits))
    c = Circuit(n)
    length = draw(st.integers(min_value=0, max_value=max_len))
    for _ in range(length):
        choices = ["1q", "rot", "u3"]
        if n >= 2:
            choices.append("2q")
        if barriers:
            choices.append("barrier")
        which = draw(st.sampled_from(choices))
        q = draw(st.integers(min_value=0, max_value=n - 1))
        dag = draw(st.booleans())
        if which == "1q":
            kind = draw(st.sampled_from(PARAMLESS_1Q))
            c.append_gate(kind, (q,), (), dagger=dag)
        elif which == "rot":
            kind = draw(st.sampled_from(ROTATIONS))
            c.append_gate(kind, (q,), (draw(angles),), dagger=dag)
        elif which == "u3":
            c.append_gate(GateKind.U3, (q,),
                          (draw(angles), draw(angles), draw(angles)), dagger=dag)
        elif which == "2q":
            q2 = draw(st.integers(min_value=0, max_value=n - 2))
            if q2 >= q:
                q2 += 1
            kind = draw(st.sampled_from(TWO_Q))
            c.append_gate(kind, (q, q2), (), dagger=dag)
        else:
            k = draw(st.integers(min_value=1, max_value=n))
            qs = draw(st.permutations(range(n)))[:k]
            c.barrier(*qs)
    if measures and draw(st.booleans()):
        k = draw(st.integers(min_value=1, max_value=n))
        for i, q in enumerate(sorted(draw(st.permutations(range(n)))[:k])):
            c.measure(q, i)
    return c


def ghz(n: int = 3) -> Circuit:
    c = Circuit(n)
    c.h(0)
    for i in range(n - 1):
        c.cnot(i, i + 1)
    return c


def parse_dot(text: str):
    """Minimal DOT checker: digraph { node/edge statements with attrs }.

    Returns (nodes, edges): nodes maps id -> attr dict, edges is a list of
    (tail, head, attr dict).  Raises ValueError on anything outside the
    tiny grammar the renderer emits.
    """
    import re

    token = re.compile(r'''\s*(?:
        (?P<id>[A-Za-z_][A-Za-z0-9_]*) |
        (?P<quoted>"(?:[^"\\]|\\.)*") |
        (?P<punct>->|[{}\[\]=;,])
    )''', re.X)

    tokens = []
    pos = 0
    while pos < len(text):
        m = token.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"bad token at {pos}: {text[pos:pos + 20]!r}")
        pos = m.end()
        if m.lastgroup == "quoted":
            raw = m.group("quoted")[1:-1]
            # undo only quote/backslash escapes; label escapes like \n stay
            tokens.append(("id", re.sub(r'\\([\\"])', r'\1', raw)))
        elif m.lastgroup == "id":
            tokens.append(("id", m.group("id")))
        else:
            tokens.append(("punct", m.group("punct")))

    def expect(kind, value=None):
        nonlocal i
        if i >= len(tokens):
            raise ValueError("unexpected end of input")
        t, v = tokens[i]
        if t != kind or (value is not None and v != value):
            raise ValueError(f"expected {value or kind}, got {v!r}")
        i += 1
        return v

    def parse_attrs():
        nonlocal i
        attrs = {}
        if i < len(tokens) and tokens[i] == ("punct", "["):
            i += 1
            while True:
                key = expect("id")
                expect("punct", "=")
                attrs[key] = expect("id")
                if tokens[i] == ("punct", ","):
                    i += 1
                    continue
                break
            expect("punct", "]")
        return attrs

    i = 0
    expect("id", "digraph")
    if tokens[i][0] == "id":  # optional graph name
        i += 1
    expect("punct", "{")
    nodes: dict[str, dict] = {}
    edges: list[tuple[str, str, dict]] = []
    while tokens[i] != ("punct", "}"):
        name = expect("id")
        if i < len(tokens) and tokens[i] == ("punct", "->"):
            i += 1
            head = expect("id")
            edges.append((name, head, parse_attrs()))
        else:
            nodes[name] = parse_attrs()
        if i < len(tokens) and tokens[i] == ("punct", ";"):
            i += 1
    expect("punct", "}")
    if i != len(tokens):
        raise ValueError("trailing tokens after closing brace")
    return nodes, edges
