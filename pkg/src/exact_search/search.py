"""Search-circuit construction for three algorithm variants.

Variants
--------
- ``grover``: the textbook amplitude-amplification baseline.  Oracle and
  diffusion invert phases (rotation angle pi); run for
  ``floor(pi/4 * sqrt(N/M))`` iterations; success is probabilistic.
- ``modified``: exact search via the phase-matching condition.  Oracle and
  diffusion rotate by the same angle phi chosen so that after J+1 iterations
  the state lies exactly in the target subspace.
- ``optimized``: same algorithm with the diffusion's H/X conjugation layers
  merged into single Ry(+-pi/2) rotations, saving 2n gates per iteration.

All three share one skeleton: an initial H layer, then per iteration one
oracle per target followed by one diffusion.  A parallel 2x2 model of the
iteration operator acting on (target, non-target) amplitudes is provided as
an independent check of the full simulation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circuit import Circuit, Gate, GateKind
from .statevec import StateVector, bitstring_to_index

REDUCED_NORM_TOL = 1e-9


class Variant(str, Enum):
    GROVER_ORIGINAL = "grover"
    MODIFIED_CANONICAL = "modified"
    OPTIMIZED_MERGED = "optimized"


@dataclass(frozen=True)
class SearchSpec:
    """Database size 2^n, set of target bitstrings, and algorithm variant."""

    n: int
    targets: tuple[str, ...]
    variant: Variant

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "variant", Variant(self.variant))
        if not self.targets:
            raise ValueError("at least one target is required")
        for t in self.targets:
            if len(t) != self.n or any(c not in "01" for c in t):
                raise ValueError(f"target {t!r} is not an {self.n}-bit string")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("duplicate targets")

    @property
    def m(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class PhaseParams:
    """Rotation angle and iteration bundle.

    ``beta`` is the angle with sin(beta) = sqrt(M/N).  For the exact
    variants ``phi`` satisfies the phase-matching condition for slack ``j``
    and ``iterations == j + 1``; for the Grover baseline ``phi`` is pi and
    ``iterations`` is the baseline's own optimum.
    """

    beta: float
    j: int
    phi: float
    iterations: int

    def __post_init__(self) -> None:
        if not 0.0 < self.beta <= math.pi / 2 + 1e-12:
            raise ValueError(f"beta {self.beta} outside (0, pi/2]")
        # exact variants always run j+1 >= 1 iterations; the Grover baseline
        # floors to 0 when the targets cover most of the database
        if self.j < 0 or self.iterations < 0:
            raise ValueError("j and iterations must be >= 0")


def beta_angle(n: int, m: int) -> float:
    """Overlap angle between the uniform state and the target subspace."""
    _check_nm(n, m)
    return math.asin(math.sqrt(m / (1 << n)))


def j_min(beta: float) -> int:
    """Smallest iteration slack for which the phase angle is well defined."""
    return math.floor((math.pi / 2 - beta) / (2 * beta))


def default_j(n: int, m: int) -> int:
    """Experimental slack choice floor(pi/4 * sqrt(N/M) - 1/2), >= j_min."""
    raw = math.floor((math.pi / 4) * math.sqrt((1 << n) / m) - 0.5)
    return max(raw, j_min(beta_angle(n, m)))


def phase_angle(beta: float, j: int) -> float:
    """Common oracle/diffusion rotation angle for slack j."""
    ratio = math.sin(math.pi / (4 * j + 6)) / math.sin(beta)
    return 2 * math.asin(min(1.0, ratio))


def compute_params(n: int, m: int, j_override: int | None = None) -> PhaseParams:
    """Phase-matching parameters for an exact search over (n, m).

    The default slack is the experimental choice ``default_j``; an explicit
    ``j_override`` is accepted if it is at least ``j_min``.
    """
    beta = beta_angle(n, m)
    floor_j = j_min(beta)
    if j_override is None:
        j = default_j(n, m)
    else:
        if j_override < floor_j:
            raise ValueError(
                f"j={j_override} below minimum {floor_j} for n={n}, m={m}"
            )
        j = j_override
    return PhaseParams(beta=beta, j=j, phi=phase_angle(beta, j), iterations=j + 1)


def grover_iterations(n: int, m: int) -> int:
    """Baseline iteration count floor(pi/4 * sqrt(N/M))."""
    _check_nm(n, m)
    return math.floor((math.pi / 4) * math.sqrt((1 << n) / m))


def grover_success(n: int, m: int, k: int) -> float:
    """Success probability sin^2((2k+1) * beta) after k baseline iterations."""
    return math.sin((2 * k + 1) * beta_angle(n, m)) ** 2


def _check_nm(n: int, m: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= m <= (1 << n):
        raise ValueError(f"target count {m} outside 1..2^{n}")


def _controlled_phase(n: int, phi: float) -> Gate:
    """Phase rotation on the all-ones subspace, highest-index qubit as target."""
    if n == 1:
        return Gate(GateKind.PS, 0, (), phi)
    controls = tuple(range(n - 1))
    kind = GateKind.CPS if n == 2 else GateKind.CPS_MULTI
    return Gate(kind, n - 1, controls, phi)


def zero_bit_qubits(target: str) -> tuple[int, ...]:
    """Qubit indices whose bit is 0 in the MSB-first target string."""
    n = len(target)
    return tuple(q for q in range(n) if target[n - 1 - q] == "0")


def build_oracle(target: str, phi: float) -> Circuit:
    """Oracle fragment marking one basis state with phase e^{i phi}.

    X gates map the target to |1...1>, a controlled phase rotates it, and the
    X layer is undone.  The fragment's unitary is
    I + (e^{i phi} - 1)|target><target|.
    """
    n = len(target)
    if n < 1 or any(c not in "01" for c in target):
        raise ValueError(f"invalid target bitstring {target!r}")
    flips = [Gate(GateKind.X, q) for q in zero_bit_qubits(target)]
    gates = (*flips, _controlled_phase(n, phi), *flips)
    return Circuit(n, gates)


def build_diffusion(n: int, phi: float, form: str = "canonical") -> Circuit:
    """Diffusion fragment rotating the uniform superposition by e^{i phi}.

    ``canonical`` conjugates the controlled phase with H and X layers
    (4n + 1 gates); ``merged`` fuses each H/X pair into a single Ry rotation
    (2n + 1 gates).  Both realize I + (e^{i phi} - 1)|u><u| for the uniform
    state |u>.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cphase = _controlled_phase(n, phi)
    if form == "canonical":
        h = [Gate(GateKind.H, q) for q in range(n)]
        x = [Gate(GateKind.X, q) for q in range(n)]
        gates = (*h, *x, cphase, *x, *h)
    elif form == "merged":
        fwd = [Gate(GateKind.RY, q, (), math.pi / 2) for q in range(n)]
        rev = [Gate(GateKind.RY, q, (), -math.pi / 2) for q in range(n)]
        gates = (*fwd, cphase, *rev)
    else:
        raise ValueError(f"unknown diffusion form {form!r}")
    return Circuit(n, gates)


def variant_params(spec: SearchSpec, j_override: int | None = None) -> PhaseParams:
    """Parameter bundle actually used when building ``spec``'s circuit."""
    params = compute_params(spec.n, spec.m, j_override)
    if spec.variant is Variant.GROVER_ORIGINAL:
        return PhaseParams(
            beta=params.beta,
            j=params.j,
            phi=math.pi,
            iterations=grover_iterations(spec.n, spec.m),
        )
    return params


def build_circuit(
    spec: SearchSpec, j_override: int | None = None
) -> tuple[Circuit, PhaseParams]:
    """Full search circuit with block annotations, plus the parameters used.

    Layout: one H layer, then per iteration one oracle per target followed by
    one diffusion.  Blocks mark the initial layer and each oracle/diffusion.
    """
    params = variant_params(spec, j_override)
    phi = params.phi
    form = "merged" if spec.variant is Variant.OPTIMIZED_MERGED else "canonical"

    gates: list[Gate] = [Gate(GateKind.H, q) for q in range(spec.n)]
    blocks: list[tuple[int, int]] = [(0, spec.n)]
    diffusion = build_diffusion(spec.n, phi, form)
    oracles = [build_oracle(t, phi) for t in spec.targets]
    for _ in range(params.iterations):
        for oracle in oracles:
            start = len(gates)
            gates.extend(oracle.gates)
            blocks.append((start, len(gates)))
        start = len(gates)
        gates.extend(diffusion.gates)
        blocks.append((start, len(gates)))
    return Circuit(spec.n, tuple(gates), tuple(blocks)), params


# --- reduced 2x2 model ------------------------------------------------------


@dataclass(frozen=True)
class ReducedState:
    """Amplitudes on the uniform target / non-target superpositions."""

    a_target: complex
    a_rest: complex

    def __post_init__(self) -> None:
        norm = abs(self.a_target) ** 2 + abs(self.a_rest) ** 2
        if abs(norm - 1.0) > REDUCED_NORM_TOL:
            raise ValueError(f"reduced state norm {norm} is not 1")


def initial_reduced(params: PhaseParams) -> ReducedState:
    """Projection of the uniform superposition: (sin beta, cos beta)."""
    return ReducedState(math.sin(params.beta), math.cos(params.beta))


def iteration_matrix(params: PhaseParams) -> np.ndarray:
    """2x2 matrix of one iteration (oracle then diffusion, with the global
    minus sign of the iteration operator included)."""
    e = cmath.exp(1j * params.phi)
    sb, cb = math.sin(params.beta), math.cos(params.beta)
    return np.array(
        [
            [-e * (1 + (e - 1) * sb * sb), -(e - 1) * sb * cb],
            [-e * (e - 1) * sb * cb, -e + (e - 1) * sb * sb],
        ]
    )


def reduced_step(state: ReducedState, params: PhaseParams) -> ReducedState:
    """One application of the reduced iteration matrix."""
    m = iteration_matrix(params)
    at, ar = state.a_target, state.a_rest
    return ReducedState(
        m[0, 0] * at + m[0, 1] * ar,
        m[1, 0] * at + m[1, 1] * ar,
    )


def reduced_projection(state: StateVector, targets: tuple[str, ...]) -> ReducedState:
    """Project a full simulator state onto the (target, non-target) pair.

    Valid only when the state lives in that 2-dimensional subspace, which
    holds throughout every search circuit built here; leakage shows up as a
    norm violation.
    """
    dim = 1 << state.n
    t_idx = np.array(sorted(bitstring_to_index(t) for t in targets))
    m = len(t_idx)
    a_target = complex(np.sum(state.amps[t_idx]) / math.sqrt(m))
    if m == dim:
        return ReducedState(a_target, 0.0)
    rest_mask = np.ones(dim, dtype=bool)
    rest_mask[t_idx] = False
    a_rest = complex(np.sum(state.amps[rest_mask]) / math.sqrt(dim - m))
    return ReducedState(a_target, a_rest)


def analytic_final_phase(params: PhaseParams) -> float:
    """Claimed phase (pi - phi)/2 + J(pi + phi) of the final target
    amplitude, reduced modulo 2 pi.

    Note: the reduced model built from the iteration matrix actually lands
    on :func:`reduced_final_phase`, which differs by the sign of the first
    term.  Both are reported; the iteration matrix is the operational truth.
    """
    return ((math.pi - params.phi) / 2 + params.j * (math.pi + params.phi)) % (
        2 * math.pi
    )


def reduced_final_phase(params: PhaseParams) -> float:
    """Phase (phi - pi)/2 + J(pi + phi) the reduced model provably reaches
    after J+1 iterations, reduced modulo 2 pi."""
    return ((params.phi - math.pi) / 2 + params.j * (math.pi + params.phi)) % (
        2 * math.pi
    )
