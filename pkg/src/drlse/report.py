"""Delimited output and figure rendering.

CSV is the machine-readable contract: decimal dots, LF line endings,
floats written with Python's shortest round-trip repr so identical runs
produce identical bytes.  Figures are rendered next to the CSVs as a
convenience view of the same data.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .harness import AggregateCurve, RunRecord, TimingResult

RUN_HEADER = "t,x_index,w_index,y,H_size,L_size,U_size,f_score,acq_seconds"
AGGREGATE_HEADER = "t,f_mean,f_sd,n_seeds"
TIMING_HEADER = "path,mean_seconds,sd_seconds,n_iterations"


def _fmt(value: float) -> str:
    return repr(float(value))


def write_run_csv(record: RunRecord, path) -> Path:
    path = Path(path)
    lines = [RUN_HEADER]
    for row in record.rows:
        lines.append(
            ",".join(
                [
                    str(row.t),
                    str(row.x_index),
                    str(row.w_index),
                    _fmt(row.y),
                    str(row.above_size),
                    str(row.below_size),
                    str(row.undecided_size),
                    _fmt(row.f_score),
                    _fmt(row.acq_seconds),
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def write_aggregate_csv(curve: AggregateCurve, path) -> Path:
    path = Path(path)
    lines = [AGGREGATE_HEADER]
    for t, mean, sd in zip(curve.t, curve.f_mean, curve.f_sd):
        lines.append(f"{t},{_fmt(mean)},{_fmt(sd)},{curve.n_seeds}")
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def write_timing_csv(timing: TimingResult, path) -> Path:
    path = Path(path)
    lines = [TIMING_HEADER]
    for label in timing.labels:
        mean, sd = timing.mean_sd(label)
        n = timing.seconds[label].size
        lines.append(f"{label},{_fmt(mean)},{_fmt(sd)},{n}")
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_fscore_figure(curve: AggregateCurve, path, title: str = "") -> Path:
    """Mean F-score per iteration with a +-1 sd band."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(curve.t, curve.f_mean, color="tab:blue", lw=1.5, label="mean F-score")
    ax.fill_between(
        curve.t,
        curve.f_mean - curve.f_sd,
        curve.f_mean + curve.f_sd,
        color="tab:blue",
        alpha=0.2,
        label="+-1 sd",
    )
    ax.set_xlabel("iteration")
    ax.set_ylabel("F-score")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)


def render_timing_figure(timing: TimingResult, path, title: str = "") -> Path:
    """Mean per-iteration acquisition seconds per computation path."""
    plt = _pyplot()
    means = []
    sds = []
    for label in timing.labels:
        mean, sd = timing.mean_sd(label)
        means.append(mean)
        sds.append(sd)
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    pos = np.arange(len(timing.labels))
    ax.bar(pos, means, yerr=sds, color="tab:orange", capsize=3)
    ax.set_xticks(pos)
    ax.set_xticklabels(timing.labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("seconds per iteration")
    ax.set_yscale("log")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)
