"""Command-line front end.

Subcommands: ``params`` (phase parameters), ``run`` (simulate one instance
and write CSV/JSON reports), ``compare`` (three-variant comparison table),
``lower`` (decompose a circuit file), ``sweep`` (parameter grid CSV).

Exit status: 0 success, 1 usage or validation error, 2 numerical or
equivalence failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import DepthPolicy, ResourceGuardError, count_gates, depth
from .circuit import from_text as circuit_from_text
from .circuit import to_text as circuit_to_text
from .lower import EquivalenceError, lower_full
from .metrics import compare, compare_csv, depth_formula, evaluate
from .presets import PRESETS, preset_instance
from .search import (
    SearchSpec,
    Variant,
    build_circuit,
    compute_params,
    default_j,
    grover_iterations,
    j_min,
)
from .statevec import histogram_csv, probabilities_csv, run as run_state

USAGE_EXIT = 1
NUMERIC_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage errors, not 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_EXIT)


def _parse_targets(raw: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in raw.split(",") if t.strip())


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _resolve(args: argparse.Namespace, config: dict, key: str, default=None):
    """Flag value if given, else config file value, else default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    return config.get(key, default)


def _spec_from(args: argparse.Namespace, config: dict) -> SearchSpec:
    preset = _resolve(args, config, "preset")
    variant = Variant(_resolve(args, config, "variant", "optimized"))
    if preset is not None:
        n, targets = preset_instance(preset)
    else:
        n = _resolve(args, config, "n")
        raw = _resolve(args, config, "targets")
        if n is None or raw is None:
            raise ValueError("need either --preset or both -n and --targets")
        targets = _parse_targets(raw) if isinstance(raw, str) else tuple(raw)
    return SearchSpec(int(n), targets, variant)


def _metadata(config: dict) -> dict[str, str]:
    return {
        "tool": f"exact-search {__version__}",
        "config": json.dumps(config, sort_keys=True),
    }


def cmd_params(args: argparse.Namespace) -> int:
    targets = _parse_targets(args.targets)
    n = args.n
    m = len(targets)
    spec = SearchSpec(n, targets, Variant.MODIFIED_CANONICAL)  # validates targets
    params = compute_params(n, m, args.j)
    print(f"n={n} targets={','.join(spec.targets)} m={m}")
    print(f"beta       = {params.beta:.6f} rad")
    print(f"j_min      = {j_min(params.beta)}")
    print(f"j_default  = {default_j(n, m)}")
    print(f"j          = {params.j}")
    print(f"phi        = {params.phi:.6f} rad")
    print(f"iterations = {params.iterations}")
    print(f"grover_iterations = {grover_iterations(n, m)}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    spec = _spec_from(args, config)
    shots = int(_resolve(args, config, "shots", 1000))
    seed = int(_resolve(args, config, "seed", 0))
    j_override = _resolve(args, config, "j", config.get("j_override"))
    lowered = bool(_resolve(args, config, "lowered", False))
    policy = _resolve(args, config, "depth_policy", "both")
    out_dir = Path(_resolve(args, config, "out", "out"))

    report = evaluate(
        spec, shots=shots, seed=seed, j_override=j_override, lowered=lowered
    )
    circuit, _ = build_circuit(spec, j_override)
    state = run_state(circuit)

    resolved = {
        "command": "run",
        "n": spec.n,
        "targets": list(spec.targets),
        "variant": spec.variant.value,
        "shots": shots,
        "seed": seed,
        "j": j_override,
        "lowered": lowered,
        "depth_policy": policy,
    }
    meta = _metadata(resolved)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "probabilities.csv").write_text(probabilities_csv(state, meta))
    (out_dir / "histogram.csv").write_text(histogram_csv(report.histogram, meta))
    report_dict = report.to_json_dict()
    if policy != "both":
        kept = {policy, "formula"}
        report_dict["depths"] = {
            k: v for k, v in report_dict["depths"].items() if k in kept
        }
    report_dict["resolved_config"] = resolved
    (out_dir / "report.json").write_text(json.dumps(report_dict, indent=2) + "\n")

    print(
        f"{spec.variant.value} n={spec.n} m={spec.m}: "
        f"P(amplitude)={report.success_amplitude:.9f} "
        f"sampled={report.success_sampled:.3f} "
        f"gates={report.counts_ir['total']} depth={report.depths['blocked']}"
    )
    print(f"wrote {out_dir}/probabilities.csv, histogram.csv, report.json")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    names_raw = _resolve(args, config, "presets", ",".join(PRESETS))
    names = (
        _parse_targets(names_raw) if isinstance(names_raw, str) else tuple(names_raw)
    )
    shots = int(_resolve(args, config, "shots", 1000))
    seed = int(_resolve(args, config, "seed", 0))
    lowered = bool(_resolve(args, config, "lowered", False))
    out = Path(_resolve(args, config, "out", "compare.csv"))

    rows = []
    for name in names:
        n, targets = preset_instance(name)
        rows.extend(
            compare(n, targets, shots=shots, seed=seed, lowered=lowered, preset=name)
        )
    resolved = {
        "command": "compare",
        "presets": list(names),
        "shots": shots,
        "seed": seed,
        "lowered": lowered,
    }
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(compare_csv(rows, lowered=lowered, metadata=_metadata(resolved)))
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def cmd_lower(args: argparse.Namespace) -> int:
    circuit = circuit_from_text(Path(args.infile).read_text())
    lowered, report = lower_full(circuit)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    meta = _metadata({"command": "lower", "in": args.infile})
    header = "".join(f"# {k}={v}\n" for k, v in meta.items())
    out.write_text(header + circuit_to_text(lowered))
    if args.report:
        Path(args.report).write_text(
            json.dumps(
                {"version": __version__, **report.to_json_dict()}, indent=2
            )
            + "\n"
        )
    print(
        f"lowered {report.gates_before['total']} -> {report.gates_after['total']} gates; "
        f"equivalence "
        + (
            "verified"
            if report.equivalence_ok
            else "not checked (circuit too wide)"
        )
    )
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    lo_n, hi_n = (int(x) for x in args.n_range.split(":"))
    lo_m, hi_m = (int(x) for x in args.m_range.split(":"))
    extra_j = args.extra_j
    rng = np.random.default_rng(args.seed)
    lines = [
        "n,m,j,phi,iterations,targets,variant,gates_total,depth_blocked,"
        "depth_formula,success_amplitude"
    ]
    for n in range(lo_n, hi_n + 1):
        for m in range(lo_m, min(hi_m, 1 << n) + 1):
            indices = rng.choice(1 << n, size=m, replace=False)
            targets = tuple(format(int(i), f"0{n}b") for i in sorted(indices))
            base = compute_params(n, m).j
            for j in range(base, base + extra_j + 1):
                for variant in (Variant.MODIFIED_CANONICAL, Variant.OPTIMIZED_MERGED):
                    spec = SearchSpec(n, targets, variant)
                    circuit, params = build_circuit(spec, j)
                    state = run_state(circuit)
                    p = float(sum(abs(state.amps[int(t, 2)]) ** 2 for t in targets))
                    lines.append(
                        f"{n},{m},{params.j},{params.phi!r},{params.iterations},"
                        f"{';'.join(targets)},{variant.value},"
                        f"{count_gates(circuit)['total']},"
                        f"{depth(circuit, DepthPolicy.blocked())},"
                        f"{depth_formula(variant, n, m)},{p!r}"
                    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    meta = _metadata({"command": "sweep", "n": args.n_range, "m": args.m_range,
                      "extra_j": extra_j, "seed": args.seed})
    header = "\n".join(f"# {k}={v}" for k, v in meta.items())
    out.write_text(header + "\n" + "\n".join(lines) + "\n")
    print(f"wrote {out} ({len(lines) - 1} rows)")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="exact-search", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", parents=[], help="print phase parameters")
    p.add_argument("-n", type=int, required=True, help="qubit count")
    p.add_argument("-t", "--targets", required=True, help="comma-separated bitstrings")
    p.add_argument("--j", type=int, default=None, help="iteration slack override")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("run", help="simulate one instance and write reports")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p.add_argument("-n", type=int, default=None)
    p.add_argument("-t", "--targets", default=None)
    p.add_argument("--variant", choices=[v.value for v in Variant], default=None)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--lowered", action="store_const", const=True, default=None,
                   help="also lower the circuit and report decomposed counts")
    p.add_argument("--depth-policy", dest="depth_policy",
                   choices=["blocked", "asap", "both"], default=None,
                   help="which measured depth(s) to report (default: both)")
    p.add_argument("--out", default=None, help="output directory (default: out)")
    p.add_argument("--config", default=None, help="JSON config file; flags win")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="three-variant comparison CSV")
    p.add_argument("--presets", default=None, help="comma-separated preset names")
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--lowered", action="store_const", const=True, default=None)
    p.add_argument("--out", default=None, help="output CSV path")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("lower", help="decompose a circuit file to the 1-/2-qubit basis")
    p.add_argument("--in", dest="infile", required=True, help="circuit text file")
    p.add_argument("--out", required=True, help="lowered circuit text file")
    p.add_argument("--report", default=None, help="pass-report JSON path")
    p.set_defaults(func=cmd_lower)

    p = sub.add_parser("sweep", help="grid over n, M, J emitting CSV")
    p.add_argument("--n-range", default="2:6", help="lo:hi inclusive")
    p.add_argument("--m-range", default="1:4", help="lo:hi inclusive")
    p.add_argument("--extra-j", type=int, default=1,
                   help="also sweep j from default to default+extra")
    p.add_argument("--seed", type=int, default=0, help="target-choice seed")
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ResourceGuardError, EquivalenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERIC_EXIT
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
