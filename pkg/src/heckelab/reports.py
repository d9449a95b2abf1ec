"""CSV and JSON emission for experiment reports.

CSV files carry no timestamps, so reruns are byte-identical; JSON mirrors
add run metadata under a "generated_at" key that comparisons may ignore.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path

from .asymptotics import AsymptoticsReport
from .stats import DistributionTestReport, SignDensityReport

SCHEMA_VERSION = 1

SIGN_DENSITY_HEADER = [
    "form", "m", "X", "n_unramified",
    "count_pos", "count_neg", "count_zero",
    "freq_pos", "freq_neg", "freq_zero",
    "pred_pos", "pred_neg", "pred_zero",
    "err_pos", "err_neg", "err_zero",
]

HISTOGRAM_HEADER = ["bin_left", "bin_right", "count", "reference_mass"]

PARTIAL_SUM_HEADER = ["form", "m", "kind", "delta_m", "x", "A", "R"]

PROBE_HEADER = ["form", "m", "kind", "sigma", "j", "T", "ratio_to_prev"]


def write_csv(path: str | Path, header: list[str], rows: list[tuple]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows([_fmt(v) for v in row] for row in rows)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_json(path: str | Path, payload: dict) -> None:
    from . import __version__

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {
        "schema_version": SCHEMA_VERSION,
        "code_version": __version__,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        **payload,
    }
    with open(path, "w") as fh:
        json.dump(body, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sign_density_rows(reports: list[SignDensityReport]) -> list[tuple]:
    rows = []
    for r in reports:
        rows.append(
            (
                r.form_name, r.m, r.x_bound, r.n_unramified,
                *r.counts, *r.frequencies, *r.predicted, *r.abs_errors,
            )
        )
    return rows


def sign_density_payload(reports: list[SignDensityReport]) -> dict:
    return {
        "reports": [
            {
                "form": r.form_name,
                "m": r.m,
                "X": r.x_bound,
                "n_unramified": r.n_unramified,
                "counts": {"pos": r.counts[0], "neg": r.counts[1], "zero": r.counts[2]},
                "frequencies": {
                    "pos": r.frequencies[0], "neg": r.frequencies[1], "zero": r.frequencies[2],
                },
                "predicted": {
                    "pos": r.predicted[0], "neg": r.predicted[1], "zero": r.predicted[2],
                },
                "abs_errors": {
                    "pos": r.abs_errors[0], "neg": r.abs_errors[1], "zero": r.abs_errors[2],
                },
            }
            for r in reports
        ]
    }


def distribution_payload(report: DistributionTestReport, threshold: float) -> dict:
    return {
        "form": report.form_name,
        "X": report.x_bound,
        "reference": report.reference,
        "sample_size": report.sample_size,
        "ks_statistic": report.ks_statistic,
        "threshold": threshold,
        "passed": report.ks_statistic <= threshold,
    }


def partial_sum_rows(reports: list[AsymptoticsReport]) -> list[tuple]:
    rows = []
    for r in reports:
        for x, a, ratio in r.checkpoints:
            rows.append((r.form_name, r.m, r.kind, r.delta, x, a, ratio))
    return rows


def probe_rows(
    form_name: str, m: int, kind: str, sigma: float, tjs: list[tuple[int, float]]
) -> list[tuple]:
    rows = []
    prev = None
    for j, t in tjs:
        ratio = t / prev if prev is not None else ""
        rows.append((form_name, m, kind, sigma, j, t, ratio))
        prev = t
    return rows


def asymptotics_payload(
    reports: list[AsymptoticsReport],
    probes: list[dict],
    checks: dict,
) -> dict:
    return {
        "partial_sums": [
            {
                "form": r.form_name,
                "m": r.m,
                "kind": r.kind,
                "delta_m": r.delta,
                "checkpoints": [
                    {"x": x, "A": a, "R": ratio} for x, a, ratio in r.checkpoints
                ],
            }
            for r in reports
        ],
        "abscissa_probes": probes,
        "checks": checks,
    }
