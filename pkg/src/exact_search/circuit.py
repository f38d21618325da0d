"""Gate-level circuit representation.

A circuit is an ordered sequence of gates over ``num_qubits`` wires.  Qubit 0
is the least-significant bit of a basis-state integer; bitstrings such as
``"00101"`` are written most-significant-bit first, so ``"00101"`` denotes
basis index 5 and its leftmost character describes qubit 4.

Multi-controlled gates are first-class: they count as one gate and occupy one
layer.  Expanding them into 1- and 2-qubit gates is an explicit pass (see
:mod:`exact_search.lower`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

UNITARY_QUBIT_LIMIT = 10
UNITARY_TOL = 1e-9


class CircuitError(ValueError):
    """Invalid gate or circuit construction."""


class ResourceGuardError(RuntimeError):
    """A dense-simulation size guard was exceeded."""


class GateKind(Enum):
    H = "H"
    X = "X"
    T = "T"
    TDG = "Tdg"
    RY = "Ry"
    PS = "PS"
    CNOT = "CNOT"
    CPS = "CPS"
    CX_MULTI = "CX_multi"
    CPS_MULTI = "CPS_multi"

    @property
    def tag(self) -> str:
        return self.value

    @property
    def parameterized(self) -> bool:
        return self in _PARAMETERIZED

    def control_arity(self) -> tuple[int, int | None]:
        """Allowed (min, max) number of controls; max None means unbounded."""
        if self in (GateKind.CNOT, GateKind.CPS):
            return (1, 1)
        if self in (GateKind.CX_MULTI, GateKind.CPS_MULTI):
            return (1, None)
        return (0, 0)


_PARAMETERIZED = {GateKind.RY, GateKind.PS, GateKind.CPS, GateKind.CPS_MULTI}
_TAG_TO_KIND = {k.value: k for k in GateKind}


@dataclass(frozen=True)
class Gate:
    """One circuit element: kind, optional angle, control set and target."""

    kind: GateKind
    target: int
    controls: tuple[int, ...] = ()
    angle: float | None = None

    def __post_init__(self) -> None:
        if self.kind.parameterized:
            if self.angle is None or not math.isfinite(self.angle):
                raise CircuitError(f"{self.kind.tag} requires a finite angle")
        elif self.angle is not None:
            raise CircuitError(f"{self.kind.tag} does not take an angle")
        lo, hi = self.kind.control_arity()
        n_ctrl = len(self.controls)
        if n_ctrl < lo or (hi is not None and n_ctrl > hi):
            raise CircuitError(
                f"{self.kind.tag} takes {lo}{'+' if hi is None else ''} "
                f"control(s), got {n_ctrl}"
            )
        qubits = (*self.controls, self.target)
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"duplicate qubit in gate: {qubits}")
        if any(q < 0 for q in qubits):
            raise CircuitError(f"negative qubit index in gate: {qubits}")

    @property
    def qubits(self) -> tuple[int, ...]:
        """Full footprint, controls first."""
        return (*self.controls, self.target)

    def inverse(self) -> "Gate":
        if self.kind is GateKind.T:
            return Gate(GateKind.TDG, self.target)
        if self.kind is GateKind.TDG:
            return Gate(GateKind.T, self.target)
        if self.kind.parameterized:
            assert self.angle is not None
            return Gate(self.kind, self.target, self.controls, -self.angle)
        return self  # H, X, CNOT, CX_multi are self-inverse


@dataclass(frozen=True)
class Circuit:
    """Ordered gate sequence over ``num_qubits`` wires.

    ``blocks`` is an optional partition of the gate sequence into contiguous
    index ranges ``(start, end)``, one per logical operator (initialization,
    each oracle, each diffusion).  It drives the ``blocked`` depth policy.
    """

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    blocks: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise CircuitError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            self._check_gate(g)
        if self.blocks is not None:
            object.__setattr__(
                self, "blocks", tuple((int(a), int(b)) for a, b in self.blocks)
            )
            validate_blocks(self.blocks, len(self.gates))

    def _check_gate(self, gate: Gate) -> None:
        for q in gate.qubits:
            if q >= self.num_qubits:
                raise CircuitError(
                    f"qubit {q} out of range for {self.num_qubits}-qubit circuit"
                )

    def __len__(self) -> int:
        return len(self.gates)

    def inverted(self) -> "Circuit":
        """Gate-wise inverse in reverse order (block annotations dropped)."""
        return Circuit(self.num_qubits, tuple(g.inverse() for g in reversed(self.gates)))


def append(circuit: Circuit, gate: Gate) -> Circuit:
    """Return a new circuit with ``gate`` appended (order preserved)."""
    blocks = None
    if circuit.blocks is not None:
        # grow the trailing block to keep the partition covering
        *head, last = circuit.blocks if circuit.blocks else [(0, 0)]
        blocks = (*head, (last[0], last[1] + 1))
    return Circuit(circuit.num_qubits, (*circuit.gates, gate), blocks)


def validate_blocks(blocks: Sequence[tuple[int, int]], n_gates: int) -> None:
    """Check that ranges partition [0, n_gates) contiguously without overlap."""
    pos = 0
    for start, end in blocks:
        if start != pos or end < start:
            raise CircuitError(f"block ranges must partition the gate sequence, got {blocks}")
        pos = end
    if pos != n_gates:
        raise CircuitError(
            f"block ranges cover [0, {pos}) but circuit has {n_gates} gates"
        )


@dataclass(frozen=True)
class DepthPolicy:
    """How layers are counted.

    ``asap`` packs every gate into the earliest layer whose occupied qubits
    are disjoint from the gate's footprint.  ``blocked`` applies asap
    independently inside each annotated block and sums the per-block depths,
    i.e. no layer is shared across oracle/diffusion boundaries.
    """

    kind: str = "asap"
    blocks: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("asap", "blocked"):
            raise CircuitError(f"unknown depth policy {self.kind!r}")

    @staticmethod
    def asap() -> "DepthPolicy":
        return DepthPolicy("asap")

    @staticmethod
    def blocked(blocks: Iterable[tuple[int, int]] | None = None) -> "DepthPolicy":
        return DepthPolicy("blocked", tuple(blocks) if blocks is not None else None)


ASAP = DepthPolicy.asap()
BLOCKED = DepthPolicy.blocked()


def count_gates(circuit: Circuit) -> dict[str, int]:
    """Histogram of gate-kind tag -> count, plus a ``"total"`` entry.

    Multi-controlled gates count as one gate each.
    """
    hist: dict[str, int] = {}
    for g in circuit.gates:
        hist[g.kind.tag] = hist.get(g.kind.tag, 0) + 1
    hist["total"] = len(circuit.gates)
    return hist


def _asap_depth(gates: Sequence[Gate]) -> int:
    busy_until: dict[int, int] = {}
    depth = 0
    for g in gates:
        layer = 1 + max((busy_until.get(q, 0) for q in g.qubits), default=0)
        for q in g.qubits:
            busy_until[q] = layer
        depth = max(depth, layer)
    return depth


def depth(circuit: Circuit, policy: DepthPolicy = ASAP) -> int:
    """Layer count under the given policy."""
    if policy.kind == "asap":
        return _asap_depth(circuit.gates)
    blocks = policy.blocks if policy.blocks is not None else circuit.blocks
    if blocks is None:
        raise CircuitError("blocked depth requires block annotations")
    validate_blocks(blocks, len(circuit.gates))
    return sum(_asap_depth(circuit.gates[a:b]) for a, b in blocks)


# --- dense linear algebra -------------------------------------------------

_SQRT2 = math.sqrt(2.0)


def gate_matrix(kind: GateKind, angle: float | None = None) -> np.ndarray:
    """2x2 matrix acting on the target qubit (controls handled separately)."""
    if kind is GateKind.H:
        return np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2
    if kind in (GateKind.X, GateKind.CNOT, GateKind.CX_MULTI):
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind is GateKind.T:
        return np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]])
    if kind is GateKind.TDG:
        return np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]])
    if kind is GateKind.RY:
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    # PS, CPS, CPS_multi
    return np.array([[1, 0], [0, np.exp(1j * angle)]])


def apply_gate_inplace(arr: np.ndarray, gate: Gate, num_qubits: int) -> None:
    """Apply ``gate`` to ``arr`` along axis 0 (length 2**num_qubits).

    Works for state vectors (1-D) and for matrices whose columns are states.
    Controlled kinds act only where every control bit is 1.
    """
    m = gate_matrix(gate.kind, gate.angle)
    idx = np.arange(1 << num_qubits)
    tbit = 1 << gate.target
    mask = (idx & tbit) == 0
    for c in gate.controls:
        mask &= (idx & (1 << c)) != 0
    i0 = idx[mask]
    i1 = i0 | tbit
    a0 = arr[i0].copy()
    a1 = arr[i1]
    arr[i0] = m[0, 0] * a0 + m[0, 1] * a1
    arr[i1] = m[1, 0] * a0 + m[1, 1] * a1


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Dense 2^n x 2^n unitary, gates applied in time order (earliest first)."""
    if circuit.num_qubits > UNITARY_QUBIT_LIMIT:
        raise ResourceGuardError(
            f"dense unitary limited to {UNITARY_QUBIT_LIMIT} qubits, "
            f"got {circuit.num_qubits}"
        )
    dim = 1 << circuit.num_qubits
    u = np.eye(dim, dtype=complex)
    for g in circuit.gates:
        apply_gate_inplace(u, g, circuit.num_qubits)
    return u


def equivalent_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    """True iff |trace(U^dag V)| / dim >= 1 - tol (global phase ignored)."""
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise CircuitError(f"dimension mismatch: {u.shape} vs {v.shape}")
    dim = u.shape[0]
    return bool(abs(np.trace(u.conj().T @ v)) / dim >= 1.0 - tol)


def max_deviation_from_unitary(u: np.ndarray) -> float:
    """Max-entry deviation of U^dag U from the identity."""
    dim = u.shape[0]
    return float(np.max(np.abs(u.conj().T @ u - np.eye(dim))))


# --- serialization --------------------------------------------------------
#
# Text format, one gate per line:  KIND [angle] controls... -> target
# preceded by a header line "qubits N" and an optional "blocks a:b c:d ...".
# Lines starting with '#' are comments.


def to_text(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.num_qubits}"]
    if circuit.blocks is not None:
        lines.append("blocks " + " ".join(f"{a}:{b}" for a, b in circuit.blocks))
    for g in circuit.gates:
        parts = [g.kind.tag]
        if g.angle is not None:
            parts.append(repr(g.angle))
        parts.extend(str(c) for c in g.controls)
        parts.append("->")
        parts.append(str(g.target))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    num_qubits: int | None = None
    blocks: tuple[tuple[int, int], ...] | None = None
    gates: list[Gate] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "qubits":
            num_qubits = int(tokens[1])
            continue
        if tokens[0] == "blocks":
            blocks = tuple(
                (int(a), int(b)) for a, b in (t.split(":") for t in tokens[1:])
            )
            continue
        kind = _TAG_TO_KIND.get(tokens[0])
        if kind is None:
            raise CircuitError(f"unknown gate kind {tokens[0]!r}")
        rest = tokens[1:]
        angle = None
        if kind.parameterized:
            angle = float(rest[0])
            rest = rest[1:]
        if rest[-2] != "->":
            raise CircuitError(f"malformed gate line: {line!r}")
        target = int(rest[-1])
        controls = tuple(int(c) for c in rest[:-2])
        gates.append(Gate(kind, target, controls, angle))
    if num_qubits is None:
        raise CircuitError("missing 'qubits N' header line")
    return Circuit(num_qubits, tuple(gates), blocks)


def to_json_dict(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        entry: dict = {"kind": g.kind.tag, "target": g.target}
        if g.controls:
            entry["controls"] = list(g.controls)
        if g.angle is not None:
            entry["angle"] = g.angle
        gates.append(entry)
    out: dict = {"num_qubits": circuit.num_qubits, "gates": gates}
    if circuit.blocks is not None:
        out["blocks"] = [list(b) for b in circuit.blocks]
    return out


def from_json_dict(data: dict) -> Circuit:
    gates = tuple(
        Gate(
            _TAG_TO_KIND[e["kind"]],
            e["target"],
            tuple(e.get("controls", ())),
            e.get("angle"),
        )
        for e in data["gates"]
    )
    blocks = data.get("blocks")
    return Circuit(
        data["num_qubits"],
        gates,
        tuple(tuple(b) for b in blocks) if blocks is not None else None,
    )


def to_json(circuit: Circuit) -> str:
    return json.dumps(to_json_dict(circuit), indent=2)


def from_json(text: str) -> Circuit:
    return from_json_dict(json.loads(text))
