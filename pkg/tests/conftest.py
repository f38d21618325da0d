import math

import numpy as np
import pytest
from hypothesis import strategies as st

from exact_search.circuit import Circuit, Gate, GateKind
from exact_search.presets import PRESETS

PRESET_NAMES = sorted(PRESETS)


@pytest.fixture(params=PRESET_NAMES)
def preset(request):
    name = request.param
    n, targets = PRESETS[name]
    return name, n, targets


# --- hypothesis strategies --------------------------------------------------

_SINGLE_KINDS = [GateKind.H, GateKind.X, GateKind.T, GateKind.TDG]
_PARAM_ANGLES = st.floats(
    min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False
)


@st.composite
def gates(draw, num_qubits: int):
    choice = draw(st.integers(0, 5))
    target = draw(st.integers(0, num_qubits - 1))
    if choice == 0:
        return Gate(draw(st.sampled_from(_SINGLE_KINDS)), target)
    if choice == 1:
        return Gate(GateKind.RY, target, (), draw(_PARAM_ANGLES))
    if choice == 2:
        return Gate(GateKind.PS, target, (), draw(_PARAM_ANGLES))
    others = [q for q in range(num_qubits) if q != target]
    if choice == 3 and others:
        control = draw(st.sampled_from(others))
        if draw(st.booleans()):
            return Gate(GateKind.CNOT, target, (control,))
        return Gate(GateKind.CPS, target, (control,), draw(_PARAM_ANGLES))
    if others:
        k = draw(st.integers(1, len(others)))
        controls = tuple(draw(st.permutations(others))[:k])
        if choice == 4:
            return Gate(GateKind.CX_MULTI, target, controls)
        return Gate(GateKind.CPS_MULTI, target, controls, draw(_PARAM_ANGLES))
    return Gate(GateKind.H, target)


@st.composite
def circuits(draw, max_qubits: int = 5, max_gates: int = 30):
    n = draw(st.integers(1, max_qubits))
    length = draw(st.integers(0, max_gates))
    return Circuit(n, tuple(draw(gates(n)) for _ in range(length)))


def random_block_partition(rng: np.random.Generator, n_gates: int):
    if n_gates == 0:
        return ()
    n_cuts = int(rng.integers(0, n_gates))
    cuts = sorted(rng.choice(range(1, n_gates), size=n_cuts, replace=False)) if n_cuts else []
    bounds = [0, *cuts, n_gates]
    return tuple((bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1))
