from decimal import Decimal

import numpy as np
import pytest

from exact_search.circuit import DepthPolicy, count_gates, depth
from exact_search.metrics import (
    REFERENCE_LOWERED_TOTALS,
    analytic_success,
    compare,
    compare_csv,
    count_formula,
    depth_formula,
    evaluate,
    reduction_pct,
)
from exact_search.search import (
    SearchSpec,
    Variant,
    build_circuit,
    variant_params,
)

GROVER = Variant.GROVER_ORIGINAL
MODIFIED = Variant.MODIFIED_CANONICAL
OPTIMIZED = Variant.OPTIMIZED_MERGED


class TestDepthFormula:
    @pytest.mark.parametrize(
        "n,m,expect",
        [
            (2, 2, (12, 12, 10)),
            (5, 2, (34, 34, 28)),
            (5, 4, (35, 35, 31)),
            (6, 3, (43, 57, 49)),
        ],
    )
    def test_benchmark_values(self, n, m, expect):
        got = tuple(depth_formula(v, n, m) for v in (GROVER, MODIFIED, OPTIMIZED))
        assert got == expect

    def test_matches_blocked_depth_when_targets_have_zero_bits(self):
        rng = np.random.default_rng(12)
        checked = 0
        while checked < 50:
            n = int(rng.integers(1, 8))
            m = int(rng.integers(1, (1 << n) + 1))
            idx = rng.choice(1 << n, size=m, replace=False)
            targets = tuple(format(int(i), f"0{n}b") for i in idx)
            if "1" * n in targets:
                continue
            for variant in (GROVER, MODIFIED, OPTIMIZED):
                circ, _ = build_circuit(SearchSpec(n, targets, variant))
                assert depth(circ, DepthPolicy.blocked()) == depth_formula(variant, n, m)
            checked += 1

    def test_all_ones_target_measures_below_formula(self):
        spec = SearchSpec(2, ("11",), MODIFIED)
        circ, params = build_circuit(spec)
        measured = depth(circ, DepthPolicy.blocked())
        formula = depth_formula(MODIFIED, 2, 1)
        # the all-ones oracle is a bare controlled phase: 1 layer instead of 3
        assert formula - measured == 2 * params.iterations


class TestCountFormula:
    @pytest.mark.parametrize(
        "n,targets,variant,expect",
        [
            (5, ("00101", "10111"), OPTIMIZED, 68),
            (2, ("00", "01"), MODIFIED, 19),
            (2, ("00", "01"), OPTIMIZED, 15),
            (5, ("10001", "01011", "11101", "10110"), MODIFIED, 87),
            (5, ("10001", "01011", "11101", "10110"), OPTIMIZED, 67),
        ],
    )
    def test_benchmark_values(self, n, targets, variant, expect):
        spec = SearchSpec(n, targets, variant)
        assert count_formula(variant, spec, variant_params(spec)) == expect

    def test_matches_measured_counts_randomized(self):
        rng = np.random.default_rng(99)
        for _ in range(200):
            n = int(rng.integers(1, 9))
            m = int(rng.integers(1, (1 << n) + 1))
            idx = rng.choice(1 << n, size=m, replace=False)
            targets = tuple(format(int(i), f"0{n}b") for i in idx)
            variant = [GROVER, MODIFIED, OPTIMIZED][int(rng.integers(0, 3))]
            spec = SearchSpec(n, targets, variant)
            circ, params = build_circuit(spec)
            assert count_formula(variant, spec, params) == count_gates(circ)["total"]


class TestReductionPct:
    def test_benchmark_reductions(self):
        assert str(reduction_pct(19, 15)) == "21.1"
        assert str(reduction_pct(98, 68)) == "30.6"
        assert str(reduction_pct(87, 67)) == "23.0"
        assert str(reduction_pct(182, 134)) == "26.4"
        assert str(reduction_pct(12, 10)) == "16.7"
        assert str(reduction_pct(34, 28)) == "17.6"
        assert str(reduction_pct(35, 31)) == "11.4"
        assert str(reduction_pct(57, 49)) == "14.0"

    def test_rounds_half_up(self):
        # 0.15% exactly must round to 0.2, not bankers' 0.1
        assert reduction_pct(10000, 9985) == Decimal("0.2")


class TestEvaluateReport:
    def test_exact_run_report(self):
        report = evaluate(SearchSpec(2, ("00", "01"), OPTIMIZED), seed=5)
        assert report.success_amplitude == pytest.approx(1.0, abs=1e-9)
        assert report.success_sampled == 1.0
        assert report.depths == {"blocked": 10, "asap": 10, "formula": 10}
        data = report.to_json_dict()
        assert data["version"]
        assert data["params"]["j_min"] == 0
        assert data["success"]["reference_pct"] == 100.0

    def test_all_ones_target_flagged(self):
        report = evaluate(SearchSpec(2, ("11",), MODIFIED), seed=1)
        assert any("no zero bits" in note for note in report.notes)
        assert report.depths["blocked"] < report.depths["formula"]

    def test_inconsistent_reference_flagged_only_where_real(self):
        # 6q3t baseline: reference 96.3% vs analytic 99.8% -> flagged
        r6 = evaluate(SearchSpec(6, ("100010", "110011", "111010"), GROVER), seed=1)
        assert any("inconsistent" in note for note in r6.notes)
        # 5q4t baseline: reference 94.7% vs analytic 94.5% -> consistent
        r5 = evaluate(
            SearchSpec(5, ("10001", "01011", "11101", "10110"), GROVER), seed=1
        )
        assert not any("inconsistent" in note for note in r5.notes)

    def test_lowered_counts_and_reference(self):
        spec = SearchSpec(5, ("00101", "10111"), MODIFIED)
        report = evaluate(spec, lowered=True)
        assert report.counts_lowered is not None
        data = report.to_json_dict()
        assert data["reference_lowered_total"] == 2006
        assert data["counts_lowered"]["total"] == report.counts_lowered["total"]

    def test_analytic_success(self):
        spec = SearchSpec(5, ("00101", "10111"), GROVER)
        assert analytic_success(spec, variant_params(spec)) == pytest.approx(
            0.9613189697265625, abs=1e-12
        )
        spec = SearchSpec(5, ("00101", "10111"), MODIFIED)
        assert analytic_success(spec, variant_params(spec)) == 1.0


class TestCompare:
    def test_reduction_columns(self):
        rows = compare(5, ("00101", "10111"), shots=200, seed=2, preset="5q2t")
        by_variant = {r["variant"]: r for r in rows}
        assert by_variant["optimized"]["reduction_gates_vs_modified_pct"] == "30.6"
        assert by_variant["optimized"]["reduction_depth_vs_modified_pct"] == "17.6"
        assert by_variant["modified"]["reduction_gates_vs_modified_pct"] == "0.0"

    def test_single_variant_degenerate(self):
        rows = compare(2, ("00", "01"), variants=(OPTIMIZED,), shots=50, seed=0)
        assert len(rows) == 1
        assert rows[0]["reduction_gates_vs_modified_pct"] == ""

    def test_csv_shape(self):
        rows = compare(2, ("00", "01"), shots=50, seed=0, preset="2q2t")
        text = compare_csv(rows, metadata={"tool": "t"})
        lines = text.splitlines()
        assert lines[0] == "# tool=t"
        header = lines[1].split(",")
        assert header[0] == "preset"
        assert len(lines) == 2 + 3

    def test_lowered_columns_present(self):
        rows = compare(2, ("00", "01"), shots=50, seed=0, lowered=True)
        assert "lowered_total" in rows[0]
        text = compare_csv(rows, lowered=True)
        assert "lowered_total" in text.splitlines()[0]


class TestReferenceTables:
    def test_lowered_reference_totals_complete(self):
        for entry in REFERENCE_LOWERED_TOTALS.values():
            assert set(entry) == {GROVER, MODIFIED, OPTIMIZED}
