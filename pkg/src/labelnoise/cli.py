"""Command-line front end.

Subcommands: fit, test, power, prior-test, generate, simulate.  Every
command is batch-oriented and deterministic given its flags (and --seed,
whose default may come from the LABELNOISE_SEED environment variable).
Machine-readable JSON goes to stdout or --output; the one-line human
verdict goes to stderr when stdout carries JSON, so pipelines stay
parseable.  Failures print a JSON error record to stderr and exit with a
code identifying the failure class:

    2  usage / argument parsing (argparse)
    3  file or schema problem (DataFormatError)
    4  dimension mismatch
    5  linearly separable data
    6  degenerate test variance
    7  invalid parameter value
    8  numerical failure
    1  anything else
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .anchors import (
    anchor_mean_and_variance,
    load_anchors,
    power,
    power_curve,
    save_anchors,
    z_test,
)
from .errors import (
    DataFormatError,
    DegenerateVarianceError,
    DimensionMismatchError,
    LabelNoiseError,
    NumericalError,
    ParameterError,
    SeparableDataError,
)
from .harness import ExperimentConfig, run_grid
from .logistic import fit, load_dataset, save_dataset
from .prior import count_positive, prior_exact_test, prior_z_test
from .synth import GaussianSetup, generate, sample_anchors

EXIT_CODES = [
    (DataFormatError, 3),
    (DimensionMismatchError, 4),
    (SeparableDataError, 5),
    (DegenerateVarianceError, 6),
    (ParameterError, 7),
    (NumericalError, 8),
]


def _default_seed() -> int:
    return int(os.environ.get("LABELNOISE_SEED", "0"))


def _emit(payload: str, output: str | None, verdict: str | None = None) -> None:
    if output:
        Path(output).write_text(payload + "\n")
        if verdict:
            print(verdict)
    else:
        print(payload)
        if verdict:
            print(verdict, file=sys.stderr)


def _cmd_fit(args) -> int:
    data = load_dataset(args.dataset)
    model = fit(data, ridge_fallback=args.ridge_fallback)
    payload = json.dumps({
        "theta": list(model.theta),
        "hessian_inv": [list(row) for row in model.hessian_inv],
        "converged": model.converged,
        "iterations": model.iterations,
        "grad_norm": model.grad_norm,
        "ridge_used": model.ridge_used,
    })
    _emit(payload, args.output,
          f"fit converged={model.converged} after {model.iterations} iterations")
    return 0


def _cmd_test(args) -> int:
    data = load_dataset(args.dataset)
    anchors = load_anchors(args.anchors, delta=args.delta)
    model = fit(data, ridge_fallback=args.ridge_fallback)
    report = z_test(model, anchors, args.alpha_level)
    _emit(report.to_json(), args.output, report.verdict())
    return 0


def _cmd_power(args) -> int:
    a = args.level
    if args.from_model:
        data = load_dataset(args.from_model[0])
        anchors = load_anchors(args.from_model[1])
        model = fit(data)
        _, v = anchor_mean_and_variance(model, anchors)
        eta1 = (1.0 - args.alpha + args.beta) / 2.0
        v_tilde = (eta1 * (1.0 - eta1)) ** 2 * 16.0 * v
    else:
        if args.v is None or args.v_tilde is None:
            raise ParameterError("either --from-model or both --v and --v-tilde")
        v, v_tilde = args.v, args.v_tilde

    if args.sweep:
        gaps = np.linspace(0.0, args.sweep_max, args.sweep_points)
        table = power_curve(gaps, args.k_grid, v, v_tilde, a)
        lines = ["gap," + ",".join(f"k{k}" for k in args.k_grid)]
        for g, row in zip(gaps, table):
            lines.append(f"{g:.17g}," + ",".join(f"{p:.17g}" for p in row))
        _emit("\n".join(lines), args.output,
              f"power curve over {len(gaps)} gaps, v={v:g}, v_tilde={v_tilde:g}")
        return 0

    value = power(args.alpha, args.beta, v, v_tilde, a)
    payload = json.dumps({
        "alpha": args.alpha, "beta": args.beta,
        "v": v, "v_tilde": v_tilde, "level": a, "power": value,
    })
    _emit(payload, args.output, f"power = {value:.6f} at level {a:g}")
    return 0


def _cmd_prior_test(args) -> int:
    if args.data:
        data = load_dataset(args.data)
        n, k_pos = count_positive(data.labels)
    else:
        if args.n is None or args.k is None:
            raise ParameterError("either --data or both --n and --k are required")
        n, k_pos = args.n, args.k
    if args.method == "exact":
        report = prior_exact_test(n, k_pos, args.pi0)
    else:
        report = prior_z_test(n, k_pos, args.pi0)
    payload = json.dumps({
        "n": report.n, "k_pos": report.k_pos, "pi0": report.pi0,
        "pi_hat": report.pi_hat, "z": report.z,
        "p_value": report.p_value, "method": report.method,
    })
    _emit(payload, args.output, report.verdict(args.alpha_level))
    return 0


def _cmd_generate(args) -> int:
    setup = GaussianSetup(
        np.asarray(args.mean_pos, dtype=float),
        np.asarray(args.mean_neg, dtype=float),
        args.prior,
    )
    data = generate(setup, args.n, args.seed)
    save_dataset(data, args.output)
    messages = [f"wrote {args.n} rows to {args.output}"]
    if args.anchors_out:
        anchors = sample_anchors(
            setup, args.k, args.delta, args.half_width, args.anchor_seed
        )
        save_anchors(anchors, args.anchors_out)
        messages.append(
            f"wrote {args.k} anchors (delta={args.delta:g}) to {args.anchors_out}"
        )
    print("; ".join(messages))
    return 0


def _cmd_simulate(args) -> int:
    if args.config:
        config = ExperimentConfig.from_json_file(args.config)
    else:
        config = ExperimentConfig()
    if args.runs is not None:
        config = ExperimentConfig.from_dict(
            {**config.to_dict(), "runs": args.runs}
        )
    summary = run_grid(config, args.outdir, plots=args.plots,
                       progress=not args.quiet)
    print(f"wrote {summary.runs_csv} and {summary.cells_csv} "
          f"({len(summary.cells)} cells)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="labelnoise",
        description="Hypothesis tests for class-conditional label noise "
                    "in binary classification.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit the logistic model to a dataset CSV")
    p.add_argument("dataset")
    p.add_argument("--ridge-fallback", action="store_true",
                   help="fall back to a tiny ridge penalty on separable data")
    p.add_argument("--output", help="write the model JSON here instead of stdout")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("test", help="anchor z-test for class-conditional noise")
    p.add_argument("dataset")
    p.add_argument("anchors")
    p.add_argument("--alpha-level", type=float, default=0.05,
                   help="significance level (default 0.05)")
    p.add_argument("--delta", type=float, default=None,
                   help="declared anchor relaxation half-width "
                        "(default: sidecar file or 0)")
    p.add_argument("--ridge-fallback", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_test)

    p = sub.add_parser("power", help="analytic power of the anchor test")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--v", type=float, default=None, help="null variance")
    p.add_argument("--v-tilde", type=float, default=None,
                   help="variance under the alternative")
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--from-model", nargs=2, metavar=("DATASET", "ANCHORS"),
                   help="estimate the variances from a dataset and anchor file")
    p.add_argument("--sweep", action="store_true",
                   help="emit a power-curve CSV over the rate gap")
    p.add_argument("--sweep-max", type=float, default=0.9)
    p.add_argument("--sweep-points", type=int, default=91)
    p.add_argument("--k-grid", type=int, nargs="+", default=[1, 2, 4, 8, 16, 32])
    p.add_argument("--output")
    p.set_defaults(func=_cmd_power)

    p = sub.add_parser("prior-test", help="prior-based binomial / z test")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None, help="positive-label count")
    p.add_argument("--data", help="dataset CSV to count labels from")
    p.add_argument("--pi0", type=float, required=True,
                   help="hypothesised clean positive-class prior")
    p.add_argument("--method", choices=("exact", "z"), default="exact")
    p.add_argument("--alpha-level", type=float, default=0.05)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_prior_test)

    p = sub.add_parser("generate", help="synthetic two-Gaussian dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--output", required=True)
    p.add_argument("--mean-pos", type=float, nargs="+", default=[1.0, 1.0])
    p.add_argument("--mean-neg", type=float, nargs="+", default=[-1.0, -1.0])
    p.add_argument("--prior", type=float, default=0.5)
    p.add_argument("--anchors-out", help="also sample anchors to this CSV")
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--half-width", type=float, default=4.0)
    p.add_argument("--anchor-seed", type=int, default=None)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("simulate", help="run the Monte-Carlo experiment grid")
    p.add_argument("--config", help="JSON config file (defaults apply if omitted)")
    p.add_argument("--outdir", required=True)
    p.add_argument("--runs", type=int, default=None,
                   help="override the per-cell run count (desk-scale runs)")
    p.add_argument("--plots", action="store_true", help="emit SVG figures")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "anchor_seed", None) is None and args.command == "generate":
        args.anchor_seed = args.seed + 1
    try:
        return args.func(args)
    except LabelNoiseError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        for klass, code in EXIT_CODES:
            if isinstance(exc, klass):
                return code
        return 1


if __name__ == "__main__":
    sys.exit(main())
