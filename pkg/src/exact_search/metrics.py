"""Closed-form resource formulas and formula-vs-measured comparison rows.

The depth formulas assume each oracle contributes exactly 3 layers (X
conjugation / controlled phase / X conjugation), each diffusion 5 layers
(canonical) or 3 (merged), plus one initialization layer; the ``blocked``
depth policy realizes exactly this accounting.  When a target is the
all-ones string its oracle has no X layers and measures 1 layer instead of
3, so the measured blocked depth falls below the formula; reports flag this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

from . import __version__
from .circuit import ASAP, DepthPolicy, count_gates, depth
from .lower import lower_full
from .search import (
    PhaseParams,
    SearchSpec,
    Variant,
    build_circuit,
    grover_success,
    j_min,
    reduced_final_phase,
    zero_bit_qubits,
)
from .statevec import ShotHistogram, run, sample, success_probability


def depth_formula(variant: Variant, n: int, m: int) -> int:
    """Closed-form blocked depth for a variant over (n, m)."""
    variant = Variant(variant)
    t = (math.pi / 4) * math.sqrt((1 << n) / m)
    if variant is Variant.GROVER_ORIGINAL:
        return 1 + (3 * m + 5) * math.floor(t)
    if variant is Variant.MODIFIED_CANONICAL:
        return (3 * m + 6) + (3 * m + 5) * math.floor(t - 0.5)
    return (3 * m + 4) + (3 * m + 3) * math.floor(t - 0.5)


def count_formula(variant: Variant, spec: SearchSpec, params: PhaseParams) -> int:
    """Closed-form gate count: n + iterations * (sum_i(2 z_i + 1) + D).

    ``z_i`` is the number of zero bits of target i and D is the diffusion
    cost, 4n+1 canonical or 2n+1 merged.  Equals the measured count of the
    built circuit exactly.
    """
    variant = Variant(variant)
    oracle_cost = sum(2 * len(zero_bit_qubits(t)) + 1 for t in spec.targets)
    diffusion_cost = (
        2 * spec.n + 1 if variant is Variant.OPTIMIZED_MERGED else 4 * spec.n + 1
    )
    return spec.n + params.iterations * (oracle_cost + diffusion_cost)


def reduction_pct(base: int, new: int) -> Decimal:
    """Percentage reduction from integers, rounded half-up to one decimal."""
    value = Decimal(100) * (Decimal(base) - Decimal(new)) / Decimal(base)
    return value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)


# Published reference measurements for the four benchmark instances this
# package reproduces (sampled success in percent; gate totals after the
# reference implementation's own decomposition).  Reported side by side;
# the reference decomposition recursion is not fully specified, so lowered
# totals here are not expected to coincide with ours.
REFERENCE_SUCCESS_PCT: dict[tuple[int, frozenset[str]], dict[Variant, float]] = {
    (2, frozenset({"00", "01"})): {
        Variant.GROVER_ORIGINAL: 49.5,
        Variant.MODIFIED_CANONICAL: 100.0,
        Variant.OPTIMIZED_MERGED: 100.0,
    },
    (5, frozenset({"00101", "10111"})): {
        Variant.GROVER_ORIGINAL: 95.8,
        Variant.MODIFIED_CANONICAL: 100.0,
        Variant.OPTIMIZED_MERGED: 100.0,
    },
    (5, frozenset({"10001", "01011", "11101", "10110"})): {
        Variant.GROVER_ORIGINAL: 94.7,
        Variant.MODIFIED_CANONICAL: 100.0,
        Variant.OPTIMIZED_MERGED: 100.0,
    },
    (6, frozenset({"100010", "110011", "111010"})): {
        Variant.GROVER_ORIGINAL: 96.3,
        Variant.MODIFIED_CANONICAL: 100.0,
        Variant.OPTIMIZED_MERGED: 100.0,
    },
}

REFERENCE_LOWERED_TOTALS: dict[tuple[int, frozenset[str]], dict[Variant, int]] = {
    (5, frozenset({"00101", "10111"})): {
        Variant.GROVER_ORIGINAL: 5552,
        Variant.MODIFIED_CANONICAL: 2006,
        Variant.OPTIMIZED_MERGED: 1976,
    },
    (5, frozenset({"10001", "01011", "11101", "10110"})): {
        Variant.GROVER_ORIGINAL: 6167,
        Variant.MODIFIED_CANONICAL: 2207,
        Variant.OPTIMIZED_MERGED: 2187,
    },
    (6, frozenset({"100010", "110011", "111010"})): {
        Variant.GROVER_ORIGINAL: 55109,
        Variant.MODIFIED_CANONICAL: 23533,
        Variant.OPTIMIZED_MERGED: 23485,
    },
}


def _reference_success(spec: SearchSpec) -> float | None:
    entry = REFERENCE_SUCCESS_PCT.get((spec.n, frozenset(spec.targets)))
    return entry.get(spec.variant) if entry else None


def _reference_lowered_total(spec: SearchSpec) -> int | None:
    entry = REFERENCE_LOWERED_TOTALS.get((spec.n, frozenset(spec.targets)))
    return entry.get(spec.variant) if entry else None


@dataclass(frozen=True)
class Report:
    """Per-run metrics record."""

    spec: SearchSpec
    params: PhaseParams
    seed: int
    shots: int
    counts_ir: dict[str, int]
    depths: dict[str, int]
    success_analytic: float
    success_amplitude: float
    success_sampled: float
    histogram: ShotHistogram
    counts_lowered: dict[str, int] | None = None
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        out = {
            "version": __version__,
            "spec": {
                "n": self.spec.n,
                "targets": list(self.spec.targets),
                "variant": self.spec.variant.value,
            },
            "params": {
                "beta": self.params.beta,
                "j": self.params.j,
                "j_min": j_min(self.params.beta),
                "phi": self.params.phi,
                "iterations": self.params.iterations,
            },
            "seed": self.seed,
            "shots": self.shots,
            "counts_ir": self.counts_ir,
            "depths": self.depths,
            "success": {
                "analytic": self.success_analytic,
                "amplitude": self.success_amplitude,
                "sampled_fraction": self.success_sampled,
            },
            "histogram": {"counts": dict(self.histogram.counts)},
            "notes": list(self.notes),
        }
        if self.counts_lowered is not None:
            out["counts_lowered"] = self.counts_lowered
        ref = _reference_success(self.spec)
        if ref is not None:
            out["success"]["reference_pct"] = ref
        ref_lowered = _reference_lowered_total(self.spec)
        if ref_lowered is not None:
            out["reference_lowered_total"] = ref_lowered
        return out


def analytic_success(spec: SearchSpec, params: PhaseParams) -> float:
    """Closed-form success probability: exact variants reach 1."""
    if spec.variant is Variant.GROVER_ORIGINAL:
        return grover_success(spec.n, spec.m, params.iterations)
    return 1.0


def _run_notes(spec: SearchSpec, params: PhaseParams, analytic: float) -> list[str]:
    notes = []
    all_ones = "1" * spec.n
    if all_ones in spec.targets:
        notes.append(
            "target %s has no zero bits: its oracle measures 1 layer, so the "
            "blocked depth falls below the closed-form value" % all_ones
        )
    ref = _reference_success(spec)
    if ref is not None and spec.variant is Variant.GROVER_ORIGINAL:
        sigma = math.sqrt(max(analytic * (1 - analytic), 1e-12) / 1000)
        if abs(ref / 100 - analytic) > 5 * sigma:
            notes.append(
                f"reference sampled success {ref}% is inconsistent with the "
                f"analytic value {analytic:.4f} at 1000 shots (>5 sigma); the "
                "analytic value is reported unchanged"
            )
    if spec.variant is not Variant.GROVER_ORIGINAL:
        notes.append(
            "final target-amplitude phase follows (phi-pi)/2 + J(pi+phi) = "
            f"{reduced_final_phase(params):.6f} rad in the reduced model; the "
            "circuit adds a further global factor (-1)^iterations"
        )
    return notes


def evaluate(
    spec: SearchSpec,
    shots: int = 1000,
    seed: int = 0,
    j_override: int | None = None,
    lowered: bool = False,
) -> Report:
    """Build, simulate, sample and measure one search instance."""
    circuit, params = build_circuit(spec, j_override)
    state = run(circuit)
    hist = sample(state, shots, seed)
    amplitude = success_probability(state, spec.targets)
    sampled = sum(hist.counts.get(t, 0) for t in spec.targets) / shots
    analytic = analytic_success(spec, params)
    counts_lowered = None
    if lowered:
        lowered_circuit, _ = lower_full(circuit)
        counts_lowered = count_gates(lowered_circuit)
    return Report(
        spec=spec,
        params=params,
        seed=seed,
        shots=shots,
        counts_ir=count_gates(circuit),
        depths={
            "blocked": depth(circuit, DepthPolicy.blocked()),
            "asap": depth(circuit, ASAP),
            "formula": depth_formula(spec.variant, spec.n, spec.m),
        },
        success_analytic=analytic,
        success_amplitude=amplitude,
        success_sampled=sampled,
        histogram=hist,
        counts_lowered=counts_lowered,
        notes=tuple(_run_notes(spec, params, analytic)),
    )


COMPARE_COLUMNS = [
    "preset",
    "n",
    "targets",
    "variant",
    "beta",
    "j",
    "phi",
    "iterations",
    "gates_total",
    "gates_formula",
    "depth_blocked",
    "depth_asap",
    "depth_formula",
    "success_analytic",
    "success_sampled",
    "reduction_gates_vs_modified_pct",
    "reduction_gates_vs_grover_pct",
    "reduction_depth_vs_modified_pct",
    "reduction_depth_vs_grover_pct",
]

LOWERED_COLUMNS = [
    "lowered_total",
    "lowered_h",
    "lowered_x",
    "lowered_t_family",
    "lowered_ry",
    "lowered_ps",
    "lowered_cps",
    "lowered_cnot",
    "reference_lowered_total",
]


def compare(
    n: int,
    targets: tuple[str, ...],
    shots: int = 1000,
    seed: int = 0,
    lowered: bool = False,
    preset: str = "",
    variants: Iterable[Variant] = tuple(Variant),
) -> list[dict]:
    """One row per variant over a shared (n, targets) instance.

    Reduction columns are percentages relative to the modified and Grover
    rows (empty when that baseline is not among the requested variants).
    """
    rows: list[dict] = []
    for variant in variants:
        spec = SearchSpec(n, targets, Variant(variant))
        report = evaluate(spec, shots=shots, seed=seed, lowered=lowered)
        row = {
            "preset": preset,
            "n": n,
            "targets": ";".join(targets),
            "variant": spec.variant.value,
            "beta": report.params.beta,
            "j": report.params.j,
            "phi": report.params.phi,
            "iterations": report.params.iterations,
            "gates_total": report.counts_ir["total"],
            "gates_formula": count_formula(spec.variant, spec, report.params),
            "depth_blocked": report.depths["blocked"],
            "depth_asap": report.depths["asap"],
            "depth_formula": report.depths["formula"],
            "success_analytic": report.success_analytic,
            "success_sampled": report.success_sampled,
        }
        if lowered:
            lc = report.counts_lowered or {}
            row.update(
                {
                    "lowered_total": lc.get("total", 0),
                    "lowered_h": lc.get("H", 0),
                    "lowered_x": lc.get("X", 0),
                    "lowered_t_family": lc.get("T", 0) + lc.get("Tdg", 0),
                    "lowered_ry": lc.get("Ry", 0),
                    "lowered_ps": lc.get("PS", 0),
                    "lowered_cps": lc.get("CPS", 0),
                    "lowered_cnot": lc.get("CNOT", 0),
                    "reference_lowered_total": _reference_lowered_total(spec) or "",
                }
            )
        rows.append(row)

    baselines = {
        "modified": next((r for r in rows if r["variant"] == "modified"), None),
        "grover": next((r for r in rows if r["variant"] == "grover"), None),
    }
    for row in rows:
        for name, base in baselines.items():
            for quantity, col in (("gates_total", "gates"), ("depth_blocked", "depth")):
                key = f"reduction_{col}_vs_{name}_pct"
                row[key] = (
                    str(reduction_pct(base[quantity], row[quantity]))
                    if base is not None
                    else ""
                )
    return rows


def compare_csv(rows: list[dict], lowered: bool = False, metadata: dict | None = None) -> str:
    columns = COMPARE_COLUMNS + (LOWERED_COLUMNS if lowered else [])
    lines = []
    if metadata:
        lines.extend(f"# {k}={v}" for k, v in metadata.items())
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(str(row.get(c, "")) for c in columns))
    return "\n".join(lines) + "\n"
