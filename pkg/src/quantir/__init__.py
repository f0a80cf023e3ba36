"""quantir: a toolkit for gate-model quantum circuits.

Circuits are built with :class:`Circuit`, serialized to a human-readable
text IR (:mod:`quantir.originir`), a compact binary instruction stream
(:mod:`quantir.bis`), or an OpenQASM 2 subset (:mod:`quantir.qasm2`), and
mapped onto hardware couplings by a Sabre-style transpiler
(:mod:`quantir.transpile`).  Analysis lives in :mod:`quantir.metrics`
(five normalized structure metrics), :mod:`quantir.profiler` (flow
profiling under a per-gate duration table, gprof/DOT reports), and
:mod:`quantir.sim` (a statevector oracle for small circuits).
:mod:`quantir.bench` measures serialization cost across formats, and
:mod:`quantir.cli` exposes everything as the ``quantir`` command.

The most commonly used names are re-exported here; format codecs stay in
their own modules (``originir.emit/parse``, ``bis.encode/decode``,
``qasm2.emit_qasm2/import_qasm2``) because their verbs collide.
"""
from .circuit import (Circuit, CircuitError, Instruction, SubcircuitInstance,
                      depth, flatten, gate_counts)
from .gates import GateKind
from .topology import CouplingGraph, TopologyError
from .transpile import (TranspileConfig, TranspileError, TranspileResult,
                        TranspileStats, transpile)
from .metrics import MetricsVector, circuit_metrics
from .profiler import (ProfileEdge, ProfileNode, ProfileReport, ProfilerError,
                       profile, report_dot, report_gprof)
from .sim import SimulationError, simulate
from .bench import BenchConfig, BenchRow, random_circuit, run_transmission_bench
from .draw import draw

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CircuitError", "Instruction", "SubcircuitInstance",
    "GateKind", "depth", "flatten", "gate_counts",
    "CouplingGraph", "TopologyError",
    "TranspileConfig", "TranspileError", "TranspileResult", "TranspileStats",
    "transpile",
    "MetricsVector", "circuit_metrics",
    "ProfileEdge", "ProfileNode", "ProfileReport", "ProfilerError",
    "profile", "report_dot", "report_gprof",
    "SimulationError", "simulate",
    "BenchConfig", "BenchRow", "random_circuit", "run_transmission_bench",
    "draw",
    "__version__",
]
