"""Report rendering: delimited trace/battery files with matplotlib figures.

Every writer takes an output directory and drops a CSV next to its PNG,
so a single report path yields both the machine-readable table and the
picture.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

from .markov import MixingReport
from .stats import TestReport


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def write_mixing_report(
    report: MixingReport,
    out_dir: str | Path,
    *,
    stem: str = "mixing",
    reference_b: int | None = None,
) -> tuple[Path, Path]:
    """Write <stem>.csv and <stem>.png for a mixing-time trace."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{stem}.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "worst_row_tv"])
        for t, tv in enumerate(report.trace, start=1):
            writer.writerow([t, f"{tv:.12e}"])

    plt = _figure()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ts = range(1, len(report.trace) + 1)
    ax.semilogy(ts, report.trace, marker=".", lw=1.2, label="worst-row TV")
    ax.axhline(report.epsilon, color="tab:red", ls="--", lw=1.0, label=f"epsilon={report.epsilon:g}")
    if report.mixed:
        ax.axvline(report.t, color="tab:green", ls=":", lw=1.0, label=f"t={report.t}")
    if reference_b is not None:
        ax.axvline(reference_b, color="tab:gray", ls="-.", lw=1.0, label=f"reference b={reference_b}")
    ax.set_xlabel("steps t")
    ax.set_ylabel("total variation to uniform")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    png_path = out / f"{stem}.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return csv_path, png_path


def write_sweep_report(
    sweep: Sequence[tuple[float, int | None]],
    out_dir: str | Path,
    *,
    stem: str = "sweep",
    reference_b: int | None = None,
) -> tuple[Path, Path]:
    """Write <stem>.csv and <stem>.png for an epsilon sweep."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{stem}.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epsilon", "t"])
        for eps, t in sweep:
            writer.writerow([f"{eps:g}", "" if t is None else t])

    plt = _figure()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    xs = [eps for eps, t in sweep if t is not None]
    ys = [t for _eps, t in sweep if t is not None]
    ax.semilogx(xs, ys, marker="o", lw=1.2, label="mixing time")
    if reference_b is not None:
        ax.axhline(reference_b, color="tab:gray", ls="-.", lw=1.0, label=f"reference b={reference_b}")
    ax.invert_xaxis()
    ax.set_xlabel("epsilon")
    ax.set_ylabel("steps t")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    png_path = out / f"{stem}.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return csv_path, png_path


def write_battery_report(
    reports: Iterable[TestReport],
    out_dir: str | Path,
    *,
    stem: str = "battery",
    meta: dict | None = None,
) -> tuple[Path, Path]:
    """Write <stem>.csv and <stem>.png for a battery run."""
    reports = list(reports)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{stem}.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["test", "bits", "statistic", "p_value", "alpha", "pass"]
        extra = sorted(meta) if meta else []
        writer.writerow(header + extra)
        for r in reports:
            row = [r.test_name, r.sample_bits, f"{r.statistic:.10g}", f"{r.p_value:.10g}", r.alpha, r.passed]
            writer.writerow(row + [meta[k] for k in extra])

    plt = _figure()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    names = [r.test_name for r in reports]
    pvals = [max(r.p_value, 1e-12) for r in reports]
    colors = ["tab:green" if r.passed else "tab:red" for r in reports]
    ax.bar(names, pvals, color=colors)
    ax.set_yscale("log")
    if reports:
        ax.axhline(reports[0].alpha, color="tab:red", ls="--", lw=1.0, label=f"alpha={reports[0].alpha:g}")
        ax.legend(fontsize=8)
    ax.set_ylabel("p-value")
    ax.tick_params(axis="x", labelrotation=20)
    fig.tight_layout()
    png_path = out / f"{stem}.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return csv_path, png_path
