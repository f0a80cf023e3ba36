"""Transmission benchmark: serialization cost across formats and scales.

``random_circuit`` builds reproducible random circuits layer by layer: every
layer covers all qubits, so the greedy circuit depth equals the requested
layer count exactly.  Each placement decision is 70% a one-qubit gate
(uniform over H, X, Y, Z, S, T, X1, RX, RY, RZ; angles uniform in [0, 2*pi))
and 30% a two-qubit gate (uniform over CNOT, CZ, SWAP on a random distinct
pair), falling back to one-qubit when a single free qubit remains.  No
measurements are generated.

``run_transmission_bench`` sweeps one of circuit count, circuit depth, or
qubit count while holding the other two fixed, and for every (value, format)
pair times whole-batch encode (circuit objects -> transmitted bytes) and
decode (bytes -> circuit objects), reporting the median over repetitions
plus the serialized size and total gate count.  Text formats serialize one
UTF-8 document per circuit; the binary formats use a single multi-circuit
stream.  Timing runs single-threaded so points are comparable.
"""
from __future__ import annotations

import csv
import random
import statistics
import time
from dataclasses import dataclass

from . import bis, originir
from .circuit import Circuit, Instruction
from .gates import CLS_ROT, GateKind
from .qasm2 import emit_qasm2, import_qasm2

__all__ = [
    "SWEEPS", "FORMATS", "BenchError", "BenchConfig", "BenchRow",
    "CSV_HEADER", "random_circuit", "run_transmission_bench", "write_csv",
]

SWEEPS = ("circuit_count", "circuit_depth", "qubit_count")
FORMATS = ("bis_compressed", "bis_uncompressed", "originir", "qasm2")
CSV_HEADER = ("sweep", "value", "format", "encode_s", "decode_s",
              "size_bytes", "gate_count")

_TAU = 6.283185307179586

_ONE_Q = (GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S,
          GateKind.T, GateKind.X1, GateKind.RX, GateKind.RY, GateKind.RZ)
_TWO_Q = (GateKind.CNOT, GateKind.CZ, GateKind.SWAP)


class BenchError(ValueError):
    """Invalid benchmark configuration."""


@dataclass(frozen=True)
class BenchConfig:
    """One benchmark run: a sweep axis, its values, and fixed parameters."""

    sweep: str
    sweep_values: tuple[int, ...]
    fixed_circuit_count: int = 500
    fixed_depth: int = 500
    fixed_qubits: int = 72
    seed: int = 0
    formats: tuple[str, ...] = FORMATS
    repetitions: int = 5

    def __post_init__(self):
        object.__setattr__(self, "sweep_values", tuple(self.sweep_values))
        object.__setattr__(self, "formats", tuple(self.formats))
        if self.sweep not in SWEEPS:
            raise BenchError(f"unknown sweep {self.sweep!r}; "
                             f"expected one of {', '.join(SWEEPS)}")
        if not self.sweep_values:
            raise BenchError("sweep_values must be non-empty")
        for v in self.sweep_values:
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise BenchError(f"sweep values must be positive integers, got {v!r}")
        for field in ("fixed_circuit_count", "fixed_depth", "fixed_qubits"):
            if getattr(self, field) < 1:
                raise BenchError(f"{field} must be >= 1")
        if not self.formats:
            raise BenchError("formats must be non-empty")
        for fmt in self.formats:
            if fmt not in FORMATS:
                raise BenchError(f"unknown format {fmt!r}; "
                                 f"expected a subset of {', '.join(FORMATS)}")
        if len(set(self.formats)) != len(self.formats):
            raise BenchError("duplicate format")
        if self.repetitions < 3:
            raise BenchError("repetitions must be >= 3 (medians need them)")


@dataclass(frozen=True)
class BenchRow:
    """One measured point: medians over the configured repetitions."""

    sweep_value: int
    format: str
    encode_time: float
    decode_time: float
    post_encoding_size: int
    gate_count: int


def random_circuit(num_qubits: int, depth: int, seed: int = 0) -> Circuit:
    """Reproducible random circuit whose greedy depth is exactly ``depth``."""
    if num_qubits < 1:
        raise BenchError("num_qubits must be >= 1")
    if depth < 1:
        raise BenchError("depth must be >= 1")
    rng = random.Random(seed)
    rand, randrange, shuffle, uniform = (rng.random, rng.randrange,
                                         rng.shuffle, rng.uniform)
    c = Circuit(num_qubits)
    append = c._append_fast
    raw = Instruction._raw
    order = list(range(num_qubits))
    for _ in range(depth):
        shuffle(order)
        i = 0
        while i < num_qubits:
            if num_qubits - i >= 2 and rand() >= 0.7:
                j = randrange(i + 1, num_qubits)
                order[i + 1], order[j] = order[j], order[i + 1]
                kind = _TWO_Q[randrange(3)]
                append(raw(kind, (order[i], order[i + 1]), (), None, False))
                i += 2
            else:
                kind = _ONE_Q[randrange(10)]
                params = (uniform(0.0, _TAU),) if kind.value >> 5 == CLS_ROT else ()
                append(raw(kind, (order[i],), params, None, False))
                i += 1
    return c


# -- format codecs ----------------------------------------------------------------

def _encode_bis_compressed(batch):
    return bis.encode(batch, compress=True)


def _encode_bis_uncompressed(batch):
    return bis.encode(batch, compress=False)


def _encode_originir(batch):
    return [originir.emit(c).encode("utf-8") for c in batch]


def _decode_originir(docs):
    return [originir.parse(d.decode("utf-8")) for d in docs]


def _encode_qasm2(batch):
    return [emit_qasm2(c).encode("utf-8") for c in batch]


def _decode_qasm2(docs):
    return [import_qasm2(d.decode("utf-8")) for d in docs]


_CODECS = {
    "bis_compressed": (_encode_bis_compressed, bis.decode),
    "bis_uncompressed": (_encode_bis_uncompressed, bis.decode),
    "originir": (_encode_originir, _decode_originir),
    "qasm2": (_encode_qasm2, _decode_qasm2),
}


def _payload_size(payload) -> int:
    if isinstance(payload, (bytes, bytearray)):
        return len(payload)
    return sum(len(doc) for doc in payload)


# -- harness ----------------------------------------------------------------------

def run_transmission_bench(config: BenchConfig) -> list[BenchRow]:
    """Measure encode/decode time and size for every (sweep value, format)."""
    rng = random.Random(config.seed)
    rows: list[BenchRow] = []
    for value in config.sweep_values:
        count = value if config.sweep == "circuit_count" else config.fixed_circuit_count
        depth = value if config.sweep == "circuit_depth" else config.fixed_depth
        qubits = value if config.sweep == "qubit_count" else config.fixed_qubits
        batch = [random_circuit(qubits, depth, rng.randrange(2 ** 63))
                 for _ in range(count)]
        gate_count = sum(len(c) for c in batch)
        for fmt in config.formats:
            encode, decode = _CODECS[fmt]
            enc_times, dec_times = [], []
            payload = decoded = None
            for _ in range(config.repetitions):
                t0 = time.perf_counter()
                payload = encode(batch)
                t1 = time.perf_counter()
                decoded = decode(payload)
                t2 = time.perf_counter()
                enc_times.append(t1 - t0)
                dec_times.append(t2 - t1)
            if len(decoded) != count:
                raise BenchError(f"{fmt} round trip lost circuits")
            rows.append(BenchRow(value, fmt, statistics.median(enc_times),
                                 statistics.median(dec_times),
                                 _payload_size(payload), gate_count))
    return rows


def write_csv(config: BenchConfig, rows, out) -> None:
    """Write rows as CSV; ``out`` is a path or a text file object."""
    if hasattr(out, "write"):
        _write_csv(config, rows, out)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            _write_csv(config, rows, fh)


def _write_csv(config, rows, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([config.sweep, row.sweep_value, row.format,
                         repr(row.encode_time), repr(row.decode_time),
                         row.post_encoding_size, row.gate_count])
