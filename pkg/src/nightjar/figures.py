"""Render evaluation reports as figures alongside the JSON output."""
from __future__ import annotations

from pathlib import Path

from .evaluation import MetricsReport

_BAR_METRICS = (
    ("precision", "P"),
    ("recall", "R"),
    ("f1", "F1"),
    ("aon_recall", "AON R"),
)


def _figsize(width: float = 8.0) -> tuple[float, float]:
    golden = (5 ** 0.5 - 1) / 2
    return width, width * golden


def save_metrics_figures(report: MetricsReport, out_dir: str | Path) -> list[Path]:
    """Write per-label metric bars and error-count bars as PNG files;
    returns the written paths."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    labels = [row.name for row in report.rows]
    x = range(len(labels))
    width = 0.2
    fig, ax = plt.subplots(figsize=_figsize())
    for i, (attr, title) in enumerate(_BAR_METRICS):
        values = [getattr(row, attr) or 0.0 for row in report.rows]
        ax.bar([xi + (i - 1.5) * width for xi in x], values, width, label=title)
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.set_title("Detection quality by label (token level)")
    ax.legend(ncol=4, fontsize="small")
    fig.tight_layout()
    path = out / "metrics_by_label.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=_figsize(6.0))
    names = [c.label.value for c in report.counts]
    fps = [c.fp for c in report.counts]
    fns = [c.fn for c in report.counts]
    xs = range(len(names))
    ax.bar([xi - 0.2 for xi in xs], fps, 0.4, label="false positives")
    ax.bar([xi + 0.2 for xi in xs], fns, 0.4, label="false negatives")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("token count")
    ax.set_title(f"Errors: {report.total_false_positives} FP, "
                 f"{report.total_false_negatives} FN")
    ax.legend()
    fig.tight_layout()
    path = out / "error_counts.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written
