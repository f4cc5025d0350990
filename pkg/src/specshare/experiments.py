"""Sweep harness behind the command-line reports.

Each ``run_*`` function renders its result as text: comma-separated values
for the sweeps, key=value lines for single-point reports.  Output is
byte-stable for a fixed request: floats are printed with 17 significant
digits, grids are generated from integer ratios, and the Monte Carlo
columns come from the deterministic simulator.  A trial budget of zero
produces the closed forms only, with ``nan`` in the empirical columns.
"""

import dataclasses
from dataclasses import dataclass

from .analysis import (
    analyze,
    critical_alpha,
    critical_omega2,
    direct_outage,
    primary_outage,
    secondary_outage,
)
from .model import SystemConfig, derive_thresholds, derive_topology
from .simulate import simulate_direct, simulate_primary, simulate_secondary

__all__ = [
    "DEFAULT_TRIALS",
    "DEFAULT_SEED",
    "ExperimentSpec",
    "default_alpha_grid",
    "default_m_grid",
    "default_d2_set",
    "run_analyze",
    "run_simulate",
    "run_critical",
    "run_fig2",
    "run_fig3",
    "run_fig4",
]

DEFAULT_TRIALS = 1_000_000
DEFAULT_SEED = 42


def default_alpha_grid() -> tuple[float, ...]:
    """Power splits 0.00 to 0.99 in steps of 0.01, each an exact ratio."""
    return tuple(i / 100.0 for i in range(100))


def default_m_grid() -> tuple[float, ...]:
    """Fading figures 0.5 to 5.0 in steps of 0.25, each an exact ratio."""
    return tuple((2 + i) / 4.0 for i in range(19))


def default_d2_set(base: SystemConfig) -> tuple[float, ...]:
    """Two reference distances plus the computed access boundary."""
    region = critical_omega2(base, derive_topology(base), derive_thresholds(base))
    return (0.8, 1.5, region.d2_tilde)


@dataclass(frozen=True)
class ExperimentSpec:
    """A sweep request: base operating point, grids and the trial budget.

    Empty grids select the defaults above.  trials = 0 skips the
    simulator entirely.
    """

    base: SystemConfig
    alpha_grid: tuple[float, ...] = ()
    m_grid: tuple[float, ...] = ()
    d2_set: tuple[float, ...] = ()
    trials: int = 0
    seed: int = DEFAULT_SEED
    workers: int = 1


def _fmt(value) -> str:
    if value is None:
        return "nan"
    return f"{value:.17g}"


def _render_csv(header: tuple[str, ...], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(value) for value in row) for row in rows)
    return "\n".join(lines) + "\n"


def _render_report(pairs) -> str:
    return "".join(f"{key}={value}\n" for key, value in pairs)


def run_analyze(spec: ExperimentSpec) -> str:
    """Closed forms at the base operating point, as key=value lines."""
    point = analyze(spec.base)
    thresholds = derive_thresholds(spec.base)
    return _render_report(
        [
            ("f_op", _fmt(point.f_op)),
            ("f_os", _fmt(point.f_os)),
            ("p_d", _fmt(point.p_d)),
            ("branch", point.branch.value),
            ("alpha_hat", _fmt(thresholds.alpha_hat)),
        ]
    )


def run_simulate(spec: ExperimentSpec) -> str:
    """Monte Carlo estimates at the base operating point."""
    trials = spec.trials if spec.trials > 0 else DEFAULT_TRIALS
    primary = simulate_primary(spec.base, trials, spec.seed, spec.workers)
    secondary = simulate_secondary(spec.base, trials, spec.seed, spec.workers)
    direct = simulate_direct(spec.base, trials, spec.seed, spec.workers)
    return _render_report(
        [
            ("f_op_mc", _fmt(primary.p_hat)),
            ("f_op_stderr", _fmt(primary.stderr)),
            ("f_os_mc", _fmt(secondary.p_hat)),
            ("f_os_stderr", _fmt(secondary.stderr)),
            ("p_d_mc", _fmt(direct.p_hat)),
            ("p_d_stderr", _fmt(direct.stderr)),
            ("trials", trials),
            ("seed", spec.seed),
        ]
    )


def run_critical(spec: ExperimentSpec) -> str:
    """Access-region boundary report at the base operating point."""
    config = spec.base
    topology = derive_topology(config)
    thresholds = derive_thresholds(config)
    region = critical_alpha(config, topology, thresholds)
    status = region.alpha_status.value if region.alpha_status is not None else "nan"
    return _render_report(
        [
            ("omega2_tilde", _fmt(region.omega2_tilde)),
            ("d2_tilde", _fmt(region.d2_tilde)),
            ("alpha_hat", _fmt(thresholds.alpha_hat)),
            ("alpha_status", status),
            ("alpha_tilde", _fmt(region.alpha_tilde)),
            ("chi", _fmt(region.chi)),
            ("phi", _fmt(region.phi)),
        ]
    )


def run_fig2(spec: ExperimentSpec) -> str:
    """Primary outage versus power split, one block of rows per distance.

    Columns: d2, alpha, f_op_analytic, f_op_mc, mc_stderr, p_d.  The
    direct-transmission outage p_d is repeated down each block as the
    split-independent reference.
    """
    alphas = spec.alpha_grid or default_alpha_grid()
    distances = spec.d2_set or default_d2_set(spec.base)
    rows = []
    for d2 in distances:
        placed = dataclasses.replace(spec.base, d2=d2)
        topology = derive_topology(placed)
        thresholds = derive_thresholds(placed)
        p_d = direct_outage(placed, topology, thresholds)
        for alpha in alphas:
            config = dataclasses.replace(placed, alpha=alpha)
            f_op = primary_outage(config, topology, thresholds)
            if spec.trials > 0:
                estimate = simulate_primary(config, spec.trials, spec.seed, spec.workers)
                rows.append((d2, alpha, f_op, estimate.p_hat, estimate.stderr, p_d))
            else:
                rows.append((d2, alpha, f_op, None, None, p_d))
    return _render_csv(
        ("d2", "alpha", "f_op_analytic", "f_op_mc", "mc_stderr", "p_d"), rows
    )


def run_fig3(spec: ExperimentSpec) -> str:
    """Secondary outage versus power split, one block of rows per distance.

    Columns: d2, alpha, f_os_analytic, f_os_mc, mc_stderr.
    """
    alphas = spec.alpha_grid or default_alpha_grid()
    distances = spec.d2_set or default_d2_set(spec.base)
    rows = []
    for d2 in distances:
        placed = dataclasses.replace(spec.base, d2=d2)
        topology = derive_topology(placed)
        thresholds = derive_thresholds(placed)
        for alpha in alphas:
            config = dataclasses.replace(placed, alpha=alpha)
            f_os = secondary_outage(config, topology, thresholds)
            if spec.trials > 0:
                estimate = simulate_secondary(config, spec.trials, spec.seed, spec.workers)
                rows.append((d2, alpha, f_os, estimate.p_hat, estimate.stderr))
            else:
                rows.append((d2, alpha, f_os, None, None))
    return _render_csv(("d2", "alpha", "f_os_analytic", "f_os_mc", "mc_stderr"), rows)


def run_fig4(spec: ExperimentSpec) -> str:
    """Both outage probabilities versus the fading figure.

    Columns: m, f_op_analytic, f_os_analytic, f_op_mc, f_os_mc,
    f_op_mc_stderr, f_os_mc_stderr.
    """
    figures = spec.m_grid or default_m_grid()
    rows = []
    for m in figures:
        config = dataclasses.replace(spec.base, m=m)
        topology = derive_topology(config)
        thresholds = derive_thresholds(config)
        f_op = primary_outage(config, topology, thresholds)
        f_os = secondary_outage(config, topology, thresholds)
        if spec.trials > 0:
            primary = simulate_primary(config, spec.trials, spec.seed, spec.workers)
            secondary = simulate_secondary(config, spec.trials, spec.seed, spec.workers)
            rows.append(
                (m, f_op, f_os, primary.p_hat, secondary.p_hat,
                 primary.stderr, secondary.stderr)
            )
        else:
            rows.append((m, f_op, f_os, None, None, None, None))
    return _render_csv(
        (
            "m",
            "f_op_analytic",
            "f_os_analytic",
            "f_op_mc",
            "f_os_mc",
            "f_op_mc_stderr",
            "f_os_mc_stderr",
        ),
        rows,
    )
