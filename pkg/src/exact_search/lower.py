"""Compiler passes: gate merging and multi-controlled-gate decomposition.

Two passes are provided:

- :func:`merge_hx_to_ry` fuses adjacent H/X pairs on a single qubit into one
  Ry rotation (the optimization that turns the canonical diffusion into the
  merged one).
- :func:`lower_full` expands every multi-controlled gate into 1- and 2-qubit
  gates: multi-controlled X via a Toffoli-style recursion, multi-controlled
  phase via the control-parity chain of single-controlled phases and CNOTs.

Every pass preserves the circuit unitary up to global phase; ``lower_full``
verifies this densely for circuits small enough to afford it and refuses to
return an inequivalent result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import (
    ASAP,
    Circuit,
    CircuitError,
    DepthPolicy,
    Gate,
    GateKind,
    count_gates,
    depth,
    equivalent_up_to_phase,
    unitary_of,
)

LOWER_VERIFY_QUBIT_LIMIT = 8
LOWER_VERIFY_TOL = 1e-9

BASIS_KINDS = frozenset(
    {
        GateKind.H,
        GateKind.X,
        GateKind.T,
        GateKind.TDG,
        GateKind.RY,
        GateKind.PS,
        GateKind.CNOT,
        GateKind.CPS,
    }
)


class EquivalenceError(RuntimeError):
    """A pass produced a circuit that is not equivalent to its input."""


@dataclass(frozen=True)
class PassReport:
    """Before/after accounting for one pass over one circuit."""

    pass_name: str
    gates_before: dict[str, int]
    gates_after: dict[str, int]
    depth_before: dict[str, int | None]
    depth_after: dict[str, int | None]
    equivalence_checked: bool
    equivalence_ok: bool | None
    tolerance: float = LOWER_VERIFY_TOL

    def to_json_dict(self) -> dict:
        return {
            "pass": self.pass_name,
            "gates_before": self.gates_before,
            "gates_after": self.gates_after,
            "depth_before": self.depth_before,
            "depth_after": self.depth_after,
            "equivalence_checked": self.equivalence_checked,
            "equivalence_ok": self.equivalence_ok,
            "tolerance": self.tolerance,
        }


def _depths(circuit: Circuit) -> dict[str, int | None]:
    blocked = (
        depth(circuit, DepthPolicy.blocked()) if circuit.blocks is not None else None
    )
    return {"asap": depth(circuit, ASAP), "blocked": blocked}


# --- H/X merging ------------------------------------------------------------


def merge_hx_to_ry(circuit: Circuit) -> Circuit:
    """Fuse adjacent single-qubit H/X pairs into Ry rotations.

    A time-ordered (H then X) pair on one qubit with no intervening gate on
    that qubit becomes Ry(pi/2); an (X then H) pair becomes Ry(-pi/2).  Both
    identities are exact.  When the circuit carries block annotations the
    merge never crosses a block boundary, so logical operators (oracles,
    diffusions, initialization) are rewritten independently; this is what
    turns the canonical search circuit into the merged-diffusion one
    gate for gate.
    """
    if circuit.blocks is not None:
        spans = circuit.blocks
    else:
        spans = ((0, len(circuit.gates)),)

    out: list[Gate] = []
    out_blocks: list[tuple[int, int]] = []
    for start, end in spans:
        block_start = len(out)
        last_on_qubit: dict[int, int] = {}  # qubit -> index into `out`
        for g in circuit.gates[start:end]:
            merged = False
            if g.kind in (GateKind.H, GateKind.X) and not g.controls:
                prev_idx = last_on_qubit.get(g.target)
                if prev_idx is not None and prev_idx >= block_start:
                    prev = out[prev_idx]
                    pair = (prev.kind, g.kind)
                    if prev.target == g.target and pair == (GateKind.H, GateKind.X):
                        out[prev_idx] = Gate(GateKind.RY, g.target, (), math.pi / 2)
                        merged = True
                    elif prev.target == g.target and pair == (GateKind.X, GateKind.H):
                        out[prev_idx] = Gate(GateKind.RY, g.target, (), -math.pi / 2)
                        merged = True
            if not merged:
                out.append(g)
                for q in g.qubits:
                    last_on_qubit[q] = len(out) - 1
        out_blocks.append((block_start, len(out)))

    blocks = tuple(out_blocks) if circuit.blocks is not None else None
    return Circuit(circuit.num_qubits, tuple(out), blocks)


# --- multi-controlled X -----------------------------------------------------


def _toffoli_skeleton(
    a,
    b,
    target: int,
    cx,
    phase_a,
) -> list[Gate]:
    """Standard 15-gate Toffoli network over abstract control roles.

    ``cx(role, tgt)`` emits the gate playing the CNOT(role -> tgt) part and
    ``phase_a()`` the one playing T(a); both may carry extra controls.
    """
    return [
        Gate(GateKind.H, target),
        cx(b, target),
        Gate(GateKind.TDG, target),
        cx(a, target),
        Gate(GateKind.T, target),
        cx(b, target),
        Gate(GateKind.TDG, target),
        cx(a, target),
        Gate(GateKind.T, b),
        Gate(GateKind.T, target),
        Gate(GateKind.H, target),
        cx(a, b),
        phase_a(),
        Gate(GateKind.TDG, b),
        cx(a, b),
    ]


def _controlled_x(controls: tuple[int, ...], target: int) -> Gate:
    if len(controls) == 1:
        return Gate(GateKind.CNOT, target, controls)
    return Gate(GateKind.CX_MULTI, target, controls)


def _controlled_ps(controls: tuple[int, ...], target: int, angle: float) -> Gate:
    if not controls:
        if angle == math.pi / 4:
            return Gate(GateKind.T, target)
        if angle == -math.pi / 4:
            return Gate(GateKind.TDG, target)
        return Gate(GateKind.PS, target, (), angle)
    if len(controls) == 1:
        return Gate(GateKind.CPS, target, controls, angle)
    return Gate(GateKind.CPS_MULTI, target, controls, angle)


def cnx_one_level(controls: tuple[int, ...], target: int) -> list[Gate]:
    """One recursion level of the multi-controlled-X decomposition.

    The last two controls play the Toffoli-network roles; the remaining
    controls are attached to the six X-type gates and to the T on the
    second-to-last control, leaving the other single-qubit gates bare.  For
    two controls this is the plain 15-gate Toffoli network; for three it
    yields six doubly-controlled X, one controlled T, two H and six T-family
    gates.
    """
    if len(controls) < 2:
        raise CircuitError("multi-controlled X decomposition needs >= 2 controls")
    *extra_list, a, b = controls
    extra = tuple(extra_list)

    def cx(src: int, tgt: int) -> Gate:
        return _controlled_x((*extra, src), tgt)

    def phase_a() -> Gate:
        # plays the role of T on control `a`
        return _controlled_ps(extra, a, math.pi / 4)

    return _toffoli_skeleton(a, b, target, cx, phase_a)


def _expand_cnx(controls: tuple[int, ...], target: int) -> list[Gate]:
    if len(controls) == 1:
        return [Gate(GateKind.CNOT, target, controls)]
    out: list[Gate] = []
    for g in cnx_one_level(controls, target):
        if g.kind is GateKind.CX_MULTI:
            out.extend(_expand_cnx(g.controls, g.target))
        elif g.kind is GateKind.CPS_MULTI:
            out.extend(_expand_cps(g.controls, g.target, g.angle))
        else:
            out.append(g)
    return out


def decompose_cnx(n_controls: int) -> Circuit:
    """Multi-controlled X over qubits (0..n_controls-1 -> n_controls), fully
    expanded to 1- and 2-qubit gates."""
    if n_controls < 2:
        raise CircuitError("decompose_cnx requires n_controls >= 2")
    controls = tuple(range(n_controls))
    gates = _expand_cnx(controls, n_controls)
    return Circuit(n_controls + 1, tuple(gates))


# --- multi-controlled phase -------------------------------------------------


def _parity_flip_sequence(m: int) -> list[int]:
    """Control indices of the CNOT scaffolding for an m-control parity sweep.

    The sequence walks a closed Gray-code loop: the i-th flip toggles the
    lowest set bit of i, and the final flip restores the start.
    """
    seq = [(i & -i).bit_length() - 1 for i in range(1, 1 << m)]
    seq.append(m - 1)
    return seq


def _expand_cps(controls: tuple[int, ...], target: int, angle: float) -> list[Gate]:
    k = len(controls)
    if k == 1:
        return [Gate(GateKind.CPS, target, controls, angle)]
    rest, last = controls[:-1], controls[-1]
    v = angle / (1 << (k - 1))
    out: list[Gate] = []
    sign = 1.0
    for flip in _parity_flip_sequence(k - 1):
        out.append(Gate(GateKind.CPS, target, (last,), sign * v))
        out.append(Gate(GateKind.CNOT, last, (rest[flip],)))
        sign = -sign
    out.extend(_expand_cps(rest, target, angle / 2))
    return out


def decompose_cnu_vchain(n_controls: int, u_angle: float) -> Circuit:
    """Multi-controlled phase over (0..n_controls-1 -> n_controls) as a chain
    of single-controlled phases and CNOTs.

    Uses 2^c - 1 controlled phases of magnitude u_angle / 2^(c-1) and
    2^c - 2 CNOTs for c controls; a single control passes through unchanged.
    """
    if n_controls < 1:
        raise CircuitError("decompose_cnu_vchain requires n_controls >= 1")
    controls = tuple(range(n_controls))
    gates = _expand_cps(controls, n_controls, u_angle)
    return Circuit(n_controls + 1, tuple(gates))


# --- full lowering ----------------------------------------------------------


def lower_gate(gate: Gate) -> list[Gate]:
    """Replacement sequence for one gate (identity for basis kinds)."""
    if gate.kind is GateKind.CX_MULTI:
        return _expand_cnx(gate.controls, gate.target)
    if gate.kind is GateKind.CPS_MULTI:
        return _expand_cps(gate.controls, gate.target, gate.angle)
    return [gate]


def lower_full(
    circuit: Circuit, verify: bool | None = None
) -> tuple[Circuit, PassReport]:
    """Expand all multi-controlled gates to the 1-/2-qubit basis.

    Equivalence with the input is verified densely when the circuit has at
    most 8 qubits (or when ``verify`` is forced on); a failed check raises
    :class:`EquivalenceError` rather than returning a wrong circuit.
    """
    out: list[Gate] = []
    offsets = [0]  # input gate index -> output start index
    for g in circuit.gates:
        out.extend(lower_gate(g))
        offsets.append(len(out))
    blocks = None
    if circuit.blocks is not None:
        blocks = tuple((offsets[a], offsets[b]) for a, b in circuit.blocks)

    lowered = Circuit(circuit.num_qubits, tuple(out), blocks)
    assert all(g.kind in BASIS_KINDS for g in lowered.gates)

    if verify is None:
        verify = circuit.num_qubits <= LOWER_VERIFY_QUBIT_LIMIT
    ok: bool | None = None
    if verify:
        ok = equivalent_up_to_phase(
            unitary_of(circuit), unitary_of(lowered), LOWER_VERIFY_TOL
        )
    report = PassReport(
        pass_name="lower_full",
        gates_before=count_gates(circuit),
        gates_after=count_gates(lowered),
        depth_before=_depths(circuit),
        depth_after=_depths(lowered),
        equivalence_checked=verify,
        equivalence_ok=ok,
    )
    if verify and not ok:
        raise EquivalenceError(
            f"lowering changed the circuit unitary beyond {LOWER_VERIFY_TOL} "
            f"(gates {len(circuit)} -> {len(lowered)})"
        )
    return lowered, report
