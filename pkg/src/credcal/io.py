"""Reading and writing datasets and test reports.

Dataset text format, line-oriented so errors carry exact line numbers and
large files stream:

    K=3 M=2 N=100        header: classes, members, instances
    <N lines of K decimals>   member 1, one instance per line
    <N lines of K decimals>   member 2
    <one line of N labels>    1-based class indices

Blank lines are ignored.  Values are written with shortest round-trip float
formatting, so write -> read -> write is byte-stable.
"""

from __future__ import annotations

import json
import re

import numpy as np

from .domain import LabeledDataset, validate_dataset
from .errors import ParseError
from .settest import TestReport

_HEADER_RE = re.compile(r"^K=(\d+)\s+M=(\d+)\s+N=(\d+)$")


def _content_lines(fh):
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if line:
            yield lineno, line


def read_dataset(path) -> LabeledDataset:
    """Parse and validate a dataset file; labels return 0-based internally."""
    with open(path) as fh:
        lines = _content_lines(fh)
        try:
            lineno, header = next(lines)
        except StopIteration:
            raise ParseError("empty file") from None
        match = _HEADER_RE.match(header)
        if not match:
            raise ParseError(f"expected header 'K=<int> M=<int> N=<int>', got {header!r}", lineno)
        n_classes, n_members, n_instances = (int(g) for g in match.groups())
        if min(n_classes, n_members, n_instances) < 1:
            raise ParseError("header dimensions must all be positive", lineno)

        members = np.empty((n_members, n_instances, n_classes))
        for m in range(n_members):
            for i in range(n_instances):
                try:
                    lineno, line = next(lines)
                except StopIteration:
                    raise ParseError(f"file ended inside member {m + 1}: expected {n_instances} rows, got {i}") from None
                tokens = line.split()
                if len(tokens) != n_classes:
                    raise ParseError(f"expected {n_classes} probabilities, got {len(tokens)}", lineno)
                try:
                    members[m, i] = [float(t) for t in tokens]
                except ValueError as exc:
                    raise ParseError(f"bad probability value: {exc}", lineno) from None

        try:
            lineno, line = next(lines)
        except StopIteration:
            raise ParseError("file ended before the label line") from None
        tokens = line.split()
        if len(tokens) != n_instances:
            raise ParseError(f"expected {n_instances} labels, got {len(tokens)}", lineno)
        try:
            labels = [int(t) for t in tokens]
        except ValueError as exc:
            raise ParseError(f"bad label value: {exc}", lineno) from None

        for lineno, line in lines:
            raise ParseError(f"unexpected trailing content: {line!r}", lineno)

    return validate_dataset(members, labels)


def write_dataset(path, data: LabeledDataset) -> None:
    """Serialize in the text format above; labels written 1-based."""
    stack = data.classifier_set.stack
    with open(path, "w") as fh:
        fh.write(f"K={data.n_classes} M={data.n_members} N={data.n_instances}\n")
        for m in range(data.n_members):
            for i in range(data.n_instances):
                fh.write(" ".join(repr(float(v)) for v in stack[m, i]) + "\n")
        fh.write(" ".join(str(int(y) + 1) for y in data.labels) + "\n")


def report_to_dict(report: TestReport) -> dict:
    return {
        "measure": {
            "kind": report.measure.kind,
            "bins": report.measure.bins,
            "binning": report.measure.effective_binning,
            "bandwidth": report.measure.bandwidth,
        },
        "alpha": float(report.alpha),
        "bootstrap_draws": int(report.bootstrap_draws),
        "seed": int(report.seed),
        "threshold": float(report.threshold),
        "observed": float(report.observed),
        "reject": bool(report.reject),
        "mc_pvalue": float(report.mc_pvalue),
        "lambda_star": [float(w) for w in report.lambda_star.coords],
        "null_stats": [float(t) for t in report.null_stats],
        "optimizer_evals": int(report.optimizer_evals),
        "budget_exhausted": bool(report.budget_exhausted),
    }


def report_to_json(report: TestReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"


def write_report(path, report: TestReport) -> None:
    with open(path, "w") as fh:
        fh.write(report_to_json(report))
