"""Turn sweep CSVs into the three standard figures.

The input is the long-format CSV written by the experiment harness:
one metric value per row under a fixed 10-column header. Each figure
kind filters one scenario, groups rows into curves and draws them with
error bars from the stderr column.
"""

import csv
import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

EXPECTED_HEADER = [
    "scenario", "method", "x_name", "x_value", "metric",
    "mean", "stderr", "trials", "seed", "config_hash",
]

FIGURES = {
    "fig3": {
        "scenario": "sumrate_vs_snr",
        "group_by": "method",
        "metric": "sumrate_avg_bps_hz",
        "xlabel": "SNR (dB)",
        "ylabel": "Achievable sum-rate (bits/s/Hz)",
        "title": "Sum-rate vs SNR",
    },
    "fig4": {
        "scenario": "ee_vs_power",
        "group_by": "method",
        "metric": "ee_bps_hz_per_w",
        "xlabel": "Transmit power (dBm)",
        "ylabel": "Energy efficiency (bits/s/Hz/W)",
        "title": "Energy efficiency vs transmit power",
    },
    "fig5": {
        "scenario": "gap_vs_snr",
        "group_by": "metric",
        "metric": None,  # all gap metrics become curves
        "xlabel": "SNR (dB)",
        "ylabel": "Sum-rate gap (bits per OFDM use)",
        "title": "Selection gap vs SNR and its high-SNR bound",
    },
}


class SchemaError(ValueError):
    """CSV header or content does not match the sweep format."""


class GapDominanceWarning(UserWarning):
    """A gap row reports the bound below the exact value (upstream bug)."""


@dataclass
class FigureSpec:
    csv_path: str
    figure: str  # fig3 | fig4 | fig5
    out_image_path: str
    dpi: int = 150

    def __post_init__(self) -> None:
        if self.figure not in FIGURES:
            raise ValueError(f"unknown figure {self.figure!r}; choose from {sorted(FIGURES)}")
        if self.dpi <= 0:
            raise ValueError("dpi must be positive")


@dataclass
class Curve:
    label: str
    x: list[float]
    y: list[float]
    err: list[float]


def read_rows(csv_path: str) -> list[dict]:
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{csv_path}: empty file")
        if list(reader.fieldnames) != EXPECTED_HEADER:
            raise SchemaError(
                f"{csv_path}: header {reader.fieldnames} does not match {EXPECTED_HEADER}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            try:
                row["x_value"] = float(row["x_value"])
                row["mean"] = float(row["mean"])
                row["stderr"] = float(row["stderr"])
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"{csv_path}:{lineno}: non-numeric value: {exc}") from exc
            rows.append(row)
    if not rows:
        raise SchemaError(f"{csv_path}: no data rows")
    return rows


def _check_gap_dominance(rows: list[dict]) -> None:
    exact = {(r["method"], r["x_value"]): r["mean"]
             for r in rows if r["metric"] == "gap_exact"}
    bound = {(r["method"], r["x_value"]): r["mean"]
             for r in rows if r["metric"] == "gap_bound"}
    bad = [key for key in exact if key in bound and bound[key] < exact[key]]
    if bad:
        warnings.warn(
            f"gap_bound < gap_exact at {len(bad)} grid point(s) "
            f"(first at x={bad[0][1]:g}); upstream results are inconsistent",
            GapDominanceWarning,
            stacklevel=2,
        )


def load_curves(spec: FigureSpec) -> list[Curve]:
    """Select and group the rows this figure draws, sorted by x."""
    layout = FIGURES[spec.figure]
    rows = [r for r in read_rows(spec.csv_path) if r["scenario"] == layout["scenario"]]
    if not rows:
        raise SchemaError(
            f"{spec.csv_path}: no rows with scenario {layout['scenario']!r}"
        )
    if spec.figure == "fig5":
        _check_gap_dominance(rows)
    else:
        rows = [r for r in rows if r["metric"] == layout["metric"]]
        if not rows:
            raise SchemaError(
                f"{spec.csv_path}: no rows with metric {layout['metric']!r}"
            )
    curves: list[Curve] = []
    for label in dict.fromkeys(r[layout["group_by"]] for r in rows):  # stable order
        sel = sorted((r for r in rows if r[layout["group_by"]] == label),
                     key=lambda r: r["x_value"])
        curves.append(Curve(label=label,
                            x=[r["x_value"] for r in sel],
                            y=[r["mean"] for r in sel],
                            err=[r["stderr"] for r in sel]))
    return curves


def build_figure(spec: FigureSpec):
    """Assemble the matplotlib figure; returns (figure, curves)."""
    layout = FIGURES[spec.figure]
    curves = load_curves(spec)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    markers = "osd^v<>*"
    for i, curve in enumerate(curves):
        ax.errorbar(curve.x, curve.y, yerr=curve.err, label=curve.label,
                    marker=markers[i % len(markers)], markersize=4,
                    capsize=2, linewidth=1.4)
    ax.set_xlabel(layout["xlabel"])
    ax.set_ylabel(layout["ylabel"])
    ax.set_title(layout["title"])
    ax.grid(True, alpha=0.3)
    if len(curves) > 1:
        ax.legend()
    fig.tight_layout()
    return fig, curves


def render(spec: FigureSpec) -> str:
    """Write the figure to spec.out_image_path; returns the path."""
    fig, _ = build_figure(spec)
    try:
        fig.savefig(spec.out_image_path, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return spec.out_image_path
