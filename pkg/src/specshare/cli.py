"""Command-line harness.

Subcommands: ``analyze`` (closed forms at one operating point),
``simulate`` (Monte Carlo estimates), ``critical`` (access-region report)
and ``figure {2,3,4}`` (the sweep CSVs, optionally rendered with
``--plot``).  Operating-point values come from built-in defaults, then an
optional ``--config`` file of key=value lines using the
:class:`~specshare.model.SystemConfig` field names with linear powers,
then command-line flags; later sources win.  Powers on the command line
are given in dB.

Exit codes: 0 on success, 2 for invalid invocations or parameter values,
3 when a computation leaves its mathematical domain.
"""

import argparse
import dataclasses
import sys

from .errors import ConvergenceError, DomainError
from .experiments import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    ExperimentSpec,
    run_analyze,
    run_critical,
    run_fig2,
    run_fig3,
    run_fig4,
    run_simulate,
)
from .model import SystemConfig

__all__ = ["main", "build_parser"]

_CONFIG_FIELDS = {field.name: field.type for field in dataclasses.fields(SystemConfig)}

_FIGURES = {2: run_fig2, 3: run_fig3, 4: run_fig4}


class UsageError(Exception):
    """Invalid invocation or parameter values; maps to exit code 2."""


def _add_point_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="key=value file of SystemConfig fields (linear powers)")
    parser.add_argument("--n-antennas", type=int, metavar="N",
                        help="receive antennas at the secondary transmitter")
    parser.add_argument("--m", type=float, help="Nakagami fading figure")
    parser.add_argument("--d2", metavar="D[,D...]",
                        help="primary-to-secondary distance; figure sweeps accept a comma list")
    parser.add_argument("--alpha", type=float, help="secondary power split in [0, 1)")
    parser.add_argument("--pp-db", type=float, metavar="DB",
                        help="primary transmit SNR in dB")
    parser.add_argument("--ps-db", type=float, metavar="DB",
                        help="secondary transmit SNR in dB")
    parser.add_argument("--k", type=float, help="path-loss exponent")
    parser.add_argument("--rpt", type=float, metavar="RATE",
                        help="primary target rate, bit/s/Hz")
    parser.add_argument("--rst", type=float, metavar="RATE",
                        help="secondary target rate, bit/s/Hz")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="Monte Carlo seed (default %(default)s)")
    parser.add_argument("--workers", type=int, default=1,
                        help="concurrent simulation workers; results do not depend on this")
    parser.add_argument("--out", metavar="PATH",
                        help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specshare",
        description="Outage analysis of a two-phase cooperative spectrum sharing protocol",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="closed forms at one operating point")
    _add_point_flags(analyze)

    simulate = commands.add_parser("simulate", help="Monte Carlo outage estimates")
    _add_point_flags(simulate)
    simulate.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                          help="Monte Carlo trials (default %(default)s)")

    critical = commands.add_parser("critical", help="spectrum-access region report")
    _add_point_flags(critical)

    figure = commands.add_parser("figure", help="sweep CSV for one of the figures")
    figure.add_argument("which", type=int, choices=sorted(_FIGURES),
                        help="which sweep to run")
    _add_point_flags(figure)
    figure.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                        help="Monte Carlo trials per point; 0 = closed forms only "
                             "(default %(default)s)")
    figure.add_argument("--plot", metavar="PATH",
                        help="also render the sweep to this image file")

    return parser


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        if key not in _CONFIG_FIELDS:
            raise UsageError(f"{path}:{lineno}: unknown field {key!r}")
        try:
            values[key] = int(value) if key == "n_antennas" else float(value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def _parse_d2_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --d2 value: {text!r}") from exc
    if not values:
        raise UsageError("empty --d2 list")
    return values


def _resolve_point(args) -> tuple[SystemConfig, tuple[float, ...]]:
    """Merge defaults, config file and flags into a validated operating point.

    Returns the base config plus the full --d2 list (empty when the flag
    was not given).
    """
    values = _read_config_file(args.config) if args.config else {}
    for flag, field in (
        ("n_antennas", "n_antennas"),
        ("m", "m"),
        ("alpha", "alpha"),
        ("k", "k"),
        ("rpt", "r_pt"),
        ("rst", "r_st"),
    ):
        flag_value = getattr(args, flag)
        if flag_value is not None:
            values[field] = flag_value
    if args.pp_db is not None:
        values["pp_over_sigma2"] = 10.0 ** (args.pp_db / 10.0)
    if args.ps_db is not None:
        values["ps_over_sigma2"] = 10.0 ** (args.ps_db / 10.0)

    d2_list: tuple[float, ...] = ()
    if args.d2 is not None:
        d2_list = _parse_d2_list(args.d2)
        values["d2"] = d2_list[0]
    try:
        base = SystemConfig(**values)
        # surface invalid sweep distances now, as a usage error
        for d2 in d2_list[1:]:
            dataclasses.replace(base, d2=d2)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    return base, d2_list


def _build_spec(args, base: SystemConfig, d2_list) -> ExperimentSpec:
    trials = getattr(args, "trials", 0)
    if trials < 0:
        raise UsageError(f"trials must be >= 0, got {trials}")
    if args.seed < 0:
        raise UsageError(f"seed must be >= 0, got {args.seed}")
    if args.workers < 1:
        raise UsageError(f"workers must be >= 1, got {args.workers}")
    return ExperimentSpec(
        base=base,
        d2_set=d2_list,
        trials=trials,
        seed=args.seed,
        workers=args.workers,
    )


def _dispatch(args, spec: ExperimentSpec) -> str:
    if args.command == "analyze":
        return run_analyze(spec)
    if args.command == "simulate":
        if spec.trials < 1:
            raise UsageError("simulate needs at least one trial")
        return run_simulate(spec)
    if args.command == "critical":
        return run_critical(spec)
    return _FIGURES[args.which](spec)


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        base, d2_list = _resolve_point(args)
        if args.command in ("analyze", "simulate", "critical") and len(d2_list) > 1:
            raise UsageError(f"{args.command} takes a single --d2 value")
        spec = _build_spec(args, base, d2_list)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        text = _dispatch(args, spec)
        _write_output(text, args.out)
        if getattr(args, "plot", None) is not None:
            from .plotting import plot_figure

            try:
                plot_figure(args.which, text, args.plot)
            except OSError as exc:
                raise UsageError(f"cannot write {args.plot}: {exc}") from exc
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
