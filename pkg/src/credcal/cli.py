"""Command-line interface: `credcal test|simulate|measure`.

Exit codes: 0 success, 2 usage error (bad flags), 3 input validation error
(unreadable or malformed data), 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .domain import BINNING_SCHEMES, MEASURE_KINDS, MeasureSpec, mix
from .errors import CredcalError, ValidationError
from .harness import DEFAULT_ALPHAS, DEFAULT_MEASURES, StudySpec, build_manifest, run_study, summarize, write_csv
from .io import read_dataset, report_to_json, write_report
from .measures import make_measure
from .settest import TestConfig, set_calibration_test
from .synth import SCENARIOS


def _alpha(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"significance level must be in (0, 1), got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _margin(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= value < 1:
        raise argparse.ArgumentTypeError(f"margin must be in [0, 1), got {text}")
    return value


def _weights(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("CREDCAL_WORKERS", "1")))
    except ValueError:
        return 1


def _add_measure_flags(parser: argparse.ArgumentParser, multi: bool) -> None:
    if multi:
        parser.add_argument(
            "--measure",
            action="append",
            choices=MEASURE_KINDS,
            default=None,
            help="measure to study; repeatable (default: ece_conf, ece_cwise, hl_cwise, skce_ul)",
        )
    else:
        parser.add_argument("--measure", choices=MEASURE_KINDS, default="ece_conf", help="calibration measure")
    parser.add_argument("--bins", type=_positive_int, default=None, help="bin count for binned measures")
    parser.add_argument("--binning", choices=BINNING_SCHEMES, default=None, help="override the measure's binning scheme")
    parser.add_argument("--bandwidth", type=_positive_float, default=2.0, help="kernel length scale for skce measures")


def _measure_spec(kind: str, args, study: bool = False) -> MeasureSpec:
    bins = args.bins
    if bins is None:
        # The default study profile uses 5 bins for the chi-square-style
        # measure and 10 for the calibration-error ones.
        bins = 5 if study and kind == "hl_cwise" else 10
    return MeasureSpec(kind, bins=bins, binning=args.binning, bandwidth=args.bandwidth)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="credcal",
        description="Calibration measures and a calibration test for sets of probabilistic classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run the set-calibration test on a dataset file")
    p_test.add_argument("dataset", help="dataset file (see README for the format)")
    _add_measure_flags(p_test, multi=False)
    p_test.add_argument("--alpha", type=_alpha, default=0.05, help="significance level")
    p_test.add_argument("--draws", type=_positive_int, default=100, help="reference distribution draws")
    p_test.add_argument("--seed", type=int, default=0, help="root seed for all randomness")
    p_test.add_argument("--output", "-o", default=None, help="write the JSON report here (default: stdout)")
    p_test.add_argument(
        "--workers",
        type=_positive_int,
        default=_default_workers(),
        help="accepted for flag symmetry with simulate; the test runs single-process",
    )
    p_test.set_defaults(func=cmd_test)

    p_sim = sub.add_parser("simulate", help="Monte Carlo error-rate study on synthetic data")
    p_sim.add_argument("--scenario", action="append", choices=SCENARIOS, default=None, help="repeatable (default: all)")
    _add_measure_flags(p_sim, multi=True)
    p_sim.add_argument("--alpha", type=_alpha, action="append", default=None, help="repeatable (default: 0.01 0.05 0.1 0.15 0.2)")
    p_sim.add_argument("--replications", "-R", type=_positive_int, default=200, help="datasets per scenario")
    p_sim.add_argument("--instances", "-N", type=_positive_int, default=100, help="instances per dataset")
    p_sim.add_argument("--members", "-M", type=_positive_int, default=10, help="ensemble size")
    p_sim.add_argument("--classes", "-K", type=_positive_int, default=10, help="number of classes")
    p_sim.add_argument("--spread", "-u", type=_positive_float, default=0.01, help="ensemble spread around its center")
    p_sim.add_argument("--draws", "-D", type=_positive_int, default=100, help="reference distribution draws per test")
    p_sim.add_argument("--margin", type=_margin, default=0.02, help="outside-sampling margin for S2/S3 (0 allows the boundary)")
    p_sim.add_argument("--seed", type=int, default=0, help="master seed")
    p_sim.add_argument("--workers", type=_positive_int, default=_default_workers(), help="parallel replication workers")
    p_sim.add_argument("--csv", default="study.csv", help="output CSV path")
    p_sim.add_argument("--manifest", default="study_manifest.json", help="output manifest path")
    p_sim.set_defaults(func=cmd_simulate)

    p_meas = sub.add_parser("measure", help="evaluate one calibration measure on a dataset file")
    p_meas.add_argument("dataset", help="dataset file")
    _add_measure_flags(p_meas, multi=False)
    p_meas.add_argument(
        "--lambda",
        dest="weights",
        type=_weights,
        default=None,
        metavar="W1,W2,...",
        help="mixture weights over the members (default: uniform)",
    )
    p_meas.set_defaults(func=cmd_measure)
    return parser


def cmd_test(args) -> int:
    data = read_dataset(args.dataset)
    config = TestConfig(
        measure=_measure_spec(args.measure, args),
        alpha=args.alpha,
        bootstrap_draws=args.draws,
        seed=args.seed,
    )
    report = set_calibration_test(data, config)
    if args.output:
        write_report(args.output, report)
        print(
            f"reject={str(report.reject).lower()} observed={report.observed:.6g} "
            f"threshold={report.threshold:.6g} mc_pvalue={report.mc_pvalue:.6g}"
        )
    else:
        sys.stdout.write(report_to_json(report))
    return 0


def cmd_simulate(args) -> int:
    if args.measure:
        measures = tuple(_measure_spec(kind, args, study=True) for kind in args.measure)
    else:
        measures = DEFAULT_MEASURES
    alphas = tuple(sorted(set(args.alpha))) if args.alpha else DEFAULT_ALPHAS
    spec = StudySpec(
        scenarios=tuple(args.scenario) if args.scenario else SCENARIOS,
        measures=measures,
        alphas=alphas,
        replications=args.replications,
        n_instances=args.instances,
        n_members=args.members,
        n_classes=args.classes,
        spread=args.spread,
        bootstrap_draws=args.draws,
        master_seed=args.seed,
        outside_margin=args.margin,
    )
    result = run_study(spec, workers=args.workers)
    rows = summarize(result.curves)
    write_csv(rows, args.csv)
    with open(args.manifest, "w") as fh:
        json.dump(build_manifest(spec, result), fh, indent=2, sort_keys=True)
        fh.write("\n")
    for scenario in spec.scenarios:
        for measure in spec.measures:
            cells = [r for r in rows if r.scenario == scenario and r.measure == measure.label]
            rates = " ".join(f"alpha={c.alpha:g}:{c.rate:.3f}" for c in cells)
            print(f"{scenario} {measure.label} rejection rates: {rates}")
    print(f"{result.replications_total} replications in {result.elapsed_seconds:.1f} s ({args.workers} workers)")
    if result.failures:
        print(f"note: {result.failures} of {result.replications_total} replications failed and were excluded")
    return 0


def cmd_measure(args) -> int:
    data = read_dataset(args.dataset)
    fn = make_measure(_measure_spec(args.measure, args))
    weights = args.weights if args.weights is not None else [1.0 / data.n_members] * data.n_members
    mixed = mix(data.classifier_set, weights)
    print(f"{fn(mixed.probs, data.labels):.12g}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CredcalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
