"""Figure rendering for the sweep output.

Functions take the CSV text produced by :mod:`.experiments` rather than
live objects, so a saved sweep can be re-rendered without recomputing.
The matplotlib Agg backend is forced; everything here writes files.
"""

import csv
import io
import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["plot_figure"]


def _read_rows(csv_text: str):
    reader = csv.DictReader(io.StringIO(csv_text))
    return [{key: float(value) for key, value in row.items()} for row in reader]


def _blocks(rows, key):
    """Group rows by a column, preserving first-seen order."""
    order = []
    grouped = {}
    for row in rows:
        value = row[key]
        if value not in grouped:
            grouped[value] = []
            order.append(value)
        grouped[value].append(row)
    return [(value, grouped[value]) for value in order]


def _has_mc(rows, column):
    return any(not math.isnan(row[column]) for row in rows)


def _save(fig, path: str) -> None:
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def _plot_split_sweep(rows, path, value_column, ylabel, reference_column=None):
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    with_mc = _has_mc(rows, f"{value_column}_mc")
    for d2, block in _blocks(rows, "d2"):
        alphas = [row["alpha"] for row in block]
        label = f"$d_2$ = {d2:.4g}"
        (line,) = ax.semilogy(
            alphas, [row[f"{value_column}_analytic"] for row in block], label=label
        )
        if with_mc:
            ax.semilogy(
                alphas,
                [row[f"{value_column}_mc"] for row in block],
                linestyle="none",
                marker="o",
                markersize=3,
                color=line.get_color(),
            )
        if reference_column is not None:
            ax.semilogy(
                alphas,
                [row[reference_column] for row in block],
                linestyle=":",
                color=line.get_color(),
            )
    ax.set_xlabel(r"power split $\alpha$")
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if with_mc:
        ax.set_title("lines: closed form, markers: simulation")
    _save(fig, path)


def _plot_fading_sweep(rows, path):
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    figures = [row["m"] for row in rows]
    for column, label in (("f_op", "primary outage"), ("f_os", "secondary outage")):
        (line,) = ax.semilogy(
            figures, [row[f"{column}_analytic"] for row in rows], label=label
        )
        if _has_mc(rows, f"{column}_mc"):
            ax.semilogy(
                figures,
                [row[f"{column}_mc"] for row in rows],
                linestyle="none",
                marker="o",
                markersize=3,
                color=line.get_color(),
            )
    ax.set_xlabel("fading figure $m$")
    ax.set_ylabel("outage probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, path)


def plot_figure(which: int, csv_text: str, path: str) -> None:
    """Render one of the sweep figures from its CSV text to `path`."""
    rows = _read_rows(csv_text)
    if which == 2:
        _plot_split_sweep(rows, path, "f_op", "primary outage probability", "p_d")
    elif which == 3:
        _plot_split_sweep(rows, path, "f_os", "secondary outage probability")
    elif which == 4:
        _plot_fading_sweep(rows, path)
    else:
        raise ValueError(f"no figure {which!r}; expected 2, 3 or 4")
