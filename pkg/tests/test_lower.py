import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings

from exact_search.circuit import (
    ASAP,
    Circuit,
    CircuitError,
    Gate,
    GateKind,
    count_gates,
    depth,
    equivalent_up_to_phase,
    unitary_of,
)
from exact_search.lower import (
    BASIS_KINDS,
    cnx_one_level,
    decompose_cnu_vchain,
    decompose_cnx,
    lower_full,
    merge_hx_to_ry,
)
from exact_search.search import SearchSpec, Variant, build_circuit

from conftest import circuits


def dense_cnx(n_controls: int) -> np.ndarray:
    dim = 1 << (n_controls + 1)
    hi = dim - 1
    lo = hi ^ (1 << n_controls)
    u = np.eye(dim, dtype=complex)
    u[lo, lo] = u[hi, hi] = 0
    u[lo, hi] = u[hi, lo] = 1
    return u


def dense_cps(n_controls: int, angle: float) -> np.ndarray:
    dim = 1 << (n_controls + 1)
    u = np.eye(dim, dtype=complex)
    u[dim - 1, dim - 1] = np.exp(1j * angle)
    return u


class TestMergeHxToRy:
    def test_single_pair_becomes_ry(self):
        c = Circuit(1, (Gate(GateKind.H, 0), Gate(GateKind.X, 0)))
        merged = merge_hx_to_ry(c)
        assert merged.gates == (Gate(GateKind.RY, 0, (), math.pi / 2),)

    def test_reverse_pair_becomes_negative_ry(self):
        c = Circuit(1, (Gate(GateKind.X, 0), Gate(GateKind.H, 0)))
        merged = merge_hx_to_ry(c)
        assert merged.gates == (Gate(GateKind.RY, 0, (), -math.pi / 2),)

    def test_intervening_gate_blocks_merge(self):
        c = Circuit(
            2,
            (Gate(GateKind.H, 0), Gate(GateKind.CNOT, 1, (0,)), Gate(GateKind.X, 0)),
        )
        assert merge_hx_to_ry(c).gates == c.gates

    def test_gate_on_other_qubit_does_not_block(self):
        c = Circuit(
            2, (Gate(GateKind.H, 0), Gate(GateKind.X, 1), Gate(GateKind.X, 0))
        )
        merged = merge_hx_to_ry(c)
        assert len(merged) == 2
        assert merged.gates[0] == Gate(GateKind.RY, 0, (), math.pi / 2)

    @pytest.mark.parametrize(
        "n,targets,before,after",
        [
            (2, ("00", "01"), 19, 15),
            (5, ("00101", "10111"), 98, 68),
            (5, ("10001", "01011", "11101", "10110"), 87, 67),
            (6, ("100010", "110011", "111010"), 182, 134),
        ],
    )
    def test_canonical_circuit_merges_to_optimized(self, n, targets, before, after):
        mod, _ = build_circuit(SearchSpec(n, targets, Variant.MODIFIED_CANONICAL))
        opt, _ = build_circuit(SearchSpec(n, targets, Variant.OPTIMIZED_MERGED))
        assert count_gates(mod)["total"] == before
        merged = merge_hx_to_ry(mod)
        assert count_gates(merged)["total"] == after
        # gate-for-gate identical to the directly built merged circuit
        assert merged.gates == opt.gates
        assert merged.blocks == opt.blocks

    def test_merge_does_not_cross_block_boundary(self):
        c = Circuit(
            1,
            (Gate(GateKind.H, 0), Gate(GateKind.X, 0)),
            blocks=((0, 1), (1, 2)),
        )
        assert merge_hx_to_ry(c).gates == c.gates

    @given(circuits(max_qubits=4, max_gates=25))
    @settings(max_examples=60, deadline=None)
    def test_never_increases_count_or_depth_and_preserves_unitary(self, circ):
        merged = merge_hx_to_ry(circ)
        assert len(merged) <= len(circ)
        assert depth(merged, ASAP) <= depth(circ, ASAP)
        assert equivalent_up_to_phase(unitary_of(circ), unitary_of(merged), 1e-9)


class TestDecomposeCnx:
    def test_toffoli_network(self):
        frag = decompose_cnx(2)
        hist = count_gates(frag)
        assert hist["total"] == 15
        assert hist["CNOT"] == 6
        assert hist["H"] == 2
        assert hist["T"] + hist["Tdg"] == 7
        # entrywise exact, not merely up to phase
        assert np.max(np.abs(unitary_of(frag) - dense_cnx(2))) < 1e-12

    def test_three_control_census_before_recursion(self):
        census = Counter(g.kind.tag for g in cnx_one_level((0, 1, 2), 3))
        assert census["CX_multi"] == 6
        assert census["CPS"] == 1  # the controlled T
        assert census["H"] == 2
        assert census["T"] + census["Tdg"] == 6
        ct = next(g for g in cnx_one_level((0, 1, 2), 3) if g.kind is GateKind.CPS)
        assert ct.angle == pytest.approx(math.pi / 4)

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_equivalence(self, k):
        u = unitary_of(decompose_cnx(k))
        assert equivalent_up_to_phase(u, dense_cnx(k), 1e-9)

    def test_requires_two_controls(self):
        with pytest.raises(CircuitError):
            decompose_cnx(1)


class TestDecomposeCnuVchain:
    def test_single_control_passthrough(self):
        frag = decompose_cnu_vchain(1, 0.8)
        assert frag.gates == (Gate(GateKind.CPS, 1, (0,), 0.8),)

    def test_three_control_census(self):
        theta = 2.0
        frag = decompose_cnu_vchain(3, theta)
        hist = count_gates(frag)
        assert hist["CPS"] == 7
        assert hist["CNOT"] == 6
        angles = {round(g.angle, 12) for g in frag.gates if g.kind is GateKind.CPS}
        assert angles == {theta / 4, -theta / 4}

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_gate_count_identity(self, k):
        hist = count_gates(decompose_cnu_vchain(k, 1.3))
        assert hist["CPS"] == 2**k - 1
        assert hist.get("CNOT", 0) == 2**k - 2

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_equivalence(self, k):
        theta = 2.1951
        u = unitary_of(decompose_cnu_vchain(k, theta))
        assert equivalent_up_to_phase(u, dense_cps(k, theta), 1e-9)

    def test_negative_angle(self):
        u = unitary_of(decompose_cnu_vchain(3, -1.1))
        assert equivalent_up_to_phase(u, dense_cps(3, -1.1), 1e-9)


class TestLowerFull:
    def test_single_multi_controlled_phase(self):
        circ = Circuit(5, (Gate(GateKind.CPS_MULTI, 4, (0, 1, 2, 3), 0.77),))
        lowered, report = lower_full(circ)
        assert all(g.kind in BASIS_KINDS for g in lowered.gates)
        assert report.equivalence_ok

    def test_single_multi_controlled_x(self):
        circ = Circuit(4, (Gate(GateKind.CX_MULTI, 3, (0, 1, 2)),))
        lowered, report = lower_full(circ)
        assert all(g.kind in BASIS_KINDS for g in lowered.gates)
        assert report.equivalence_ok

    def test_one_control_multis_become_plain(self):
        circ = Circuit(
            2,
            (Gate(GateKind.CX_MULTI, 1, (0,)), Gate(GateKind.CPS_MULTI, 1, (0,), 0.3)),
        )
        lowered, _ = lower_full(circ)
        assert [g.kind for g in lowered.gates] == [GateKind.CNOT, GateKind.CPS]

    @pytest.mark.parametrize(
        "n,targets,saved",
        [
            (5, ("00101", "10111"), 30),
            (5, ("10001", "01011", "11101", "10110"), 20),
            (6, ("100010", "110011", "111010"), 48),
        ],
    )
    def test_lowered_deltas_between_variants(self, n, targets, saved):
        mod, _ = build_circuit(SearchSpec(n, targets, Variant.MODIFIED_CANONICAL))
        opt, _ = build_circuit(SearchSpec(n, targets, Variant.OPTIMIZED_MERGED))
        cm = count_gates(lower_full(mod)[0])
        co = count_gates(lower_full(opt)[0])
        assert cm["H"] - co["H"] == saved
        assert cm["X"] - co["X"] == saved
        assert co["Ry"] - cm.get("Ry", 0) == saved
        assert cm["total"] - co["total"] == saved
        # everything else is untouched by the diffusion merge
        for kind in ("CPS", "CNOT", "T", "Tdg", "PS"):
            assert cm.get(kind, 0) == co.get(kind, 0)

    def test_blocks_are_remapped(self):
        circ, _ = build_circuit(SearchSpec(5, ("00101", "10111"), Variant.OPTIMIZED_MERGED))
        lowered, _ = lower_full(circ)
        assert lowered.blocks is not None
        assert len(lowered.blocks) == len(circ.blocks)
        assert lowered.blocks[-1][1] == len(lowered.gates)

    def test_report_accounting(self):
        circ = Circuit(4, (Gate(GateKind.CPS_MULTI, 3, (0, 1, 2), 1.0),))
        lowered, report = lower_full(circ)
        assert report.gates_before["total"] == 1
        assert report.gates_after["total"] == len(lowered.gates)
        assert report.pass_name == "lower_full"
        assert report.equivalence_checked

    def test_verification_skipped_above_width_limit(self):
        circ = Circuit(9, (Gate(GateKind.CPS_MULTI, 8, tuple(range(8)), 0.5),))
        lowered, report = lower_full(circ)
        assert not report.equivalence_checked
        assert report.equivalence_ok is None
        assert all(g.kind in BASIS_KINDS for g in lowered.gates)

    @given(circuits(max_qubits=5, max_gates=12))
    @settings(max_examples=40, deadline=None)
    def test_preserves_unitary_on_random_circuits(self, circ):
        lowered, report = lower_full(circ)
        assert report.equivalence_ok
        assert all(g.kind in BASIS_KINDS for g in lowered.gates)
