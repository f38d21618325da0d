"""Dense state-vector simulation with seeded measurement sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .circuit import Circuit, Gate, ResourceGuardError, apply_gate_inplace

SIM_QUBIT_LIMIT = 24
NORM_TOL = 1e-9


@dataclass(frozen=True)
class StateVector:
    """2^n complex amplitudes with unit norm; index 0 is |0...0>."""

    n: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amps, dtype=complex)
        object.__setattr__(self, "amps", amps)
        if amps.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes, got {amps.shape}")

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True)
class ShotHistogram:
    """Counts of sampled basis bitstrings; sum of counts equals shots."""

    shots: int
    counts: Mapping[str, int]
    seed: int

    def __post_init__(self) -> None:
        if sum(self.counts.values()) != self.shots:
            raise ValueError("histogram counts do not sum to shots")


def bitstring_to_index(bits: str) -> int:
    """MSB-first bitstring -> basis index (leftmost char is the top qubit)."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"invalid bitstring {bits!r}")
    return int(bits, 2)


def index_to_bitstring(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def init_zero(n: int) -> StateVector:
    """|0>^n."""
    if not 1 <= n <= SIM_QUBIT_LIMIT:
        raise ResourceGuardError(
            f"qubit count {n} outside supported range 1..{SIM_QUBIT_LIMIT}"
        )
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate; norm is preserved to within 1e-9."""
    for q in gate.qubits:
        if q >= state.n:
            raise ValueError(f"qubit {q} out of range for {state.n}-qubit state")
    amps = state.amps.copy()
    apply_gate_inplace(amps, gate, state.n)
    return StateVector(state.n, amps)


def run(circuit: Circuit) -> StateVector:
    """Apply the circuit's gates in time order to |0>^n."""
    if circuit.num_qubits > SIM_QUBIT_LIMIT:
        raise ResourceGuardError(
            f"simulation limited to {SIM_QUBIT_LIMIT} qubits, got {circuit.num_qubits}"
        )
    amps = np.zeros(1 << circuit.num_qubits, dtype=complex)
    amps[0] = 1.0
    for g in circuit.gates:
        apply_gate_inplace(amps, g, circuit.num_qubits)
    return StateVector(circuit.num_qubits, amps)


def success_probability(state: StateVector, targets: Iterable[str]) -> float:
    """Total probability mass on the given basis bitstrings."""
    probs = state.probabilities()
    total = 0.0
    for t in targets:
        idx = bitstring_to_index(t)
        if len(t) != state.n or idx >= probs.size:
            raise ValueError(f"target {t!r} out of range for {state.n} qubits")
        total += float(probs[idx])
    return total

def sample(state: StateVector, shots: int, seed: int) -> ShotHistogram:
    """Draw i.i.d. measurement outcomes; deterministic for a fixed seed."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    cdf = np.cumsum(probs)
    draws = np.searchsorted(cdf, np.random.default_rng(seed).random(shots), side="right")
    counts: dict[str, int] = {}
    for idx, cnt in zip(*np.unique(draws, return_counts=True)):
        counts[index_to_bitstring(int(idx), state.n)] = int(cnt)
    return ShotHistogram(shots, counts, seed)


# --- CSV / JSON export ----------------------------------------------------


def _csv_lines(header: str, rows: Iterable[str], metadata: Mapping[str, str] | None) -> str:
    lines = []
    if metadata:
        lines.extend(f"# {k}={v}" for k, v in metadata.items())
    lines.append(header)
    lines.extend(rows)
    return "\n".join(lines) + "\n"


def probabilities_csv(
    state: StateVector, metadata: Mapping[str, str] | None = None
) -> str:
    """CSV ``bitstring,probability`` over all basis states."""
    probs = state.probabilities()
    rows = (
        f"{index_to_bitstring(i, state.n)},{probs[i]!r}" for i in range(probs.size)
    )
    return _csv_lines("bitstring,probability", rows, metadata)


def histogram_csv(hist: ShotHistogram, metadata: Mapping[str, str] | None = None) -> str:
    """CSV ``bitstring,count`` over observed outcomes, sorted by bitstring."""
    rows = (f"{b},{hist.counts[b]}" for b in sorted(hist.counts))
    return _csv_lines("bitstring,count", rows, metadata)


def histogram_json(hist: ShotHistogram) -> dict:
    return {"shots": hist.shots, "seed": hist.seed, "counts": dict(hist.counts)}
