"""
amdiqkd command-line interface.

    amdiqkd rate --L 100 --eta-det 0.9 --tau 67 --source 0,1,0 --qnd-source 0.2,0.8,0
    amdiqkd sweep --config sweep.conf --out rates.csv
    amdiqkd qmax --config qmax.conf --out qmax.csv
    amdiqkd verify --points 50 --seed 7
    amdiqkd check-pdc --lambda 0.5 --mu 0.01
    amdiqkd config --config sweep.conf

Flags override the values of a --config document. Exit codes: 0 success,
1 usage or configuration error, 2 verification failure, 3 output error.
"""

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

import structlog

from src.core.constants import (
    CSV_FLOAT_FORMAT,
    EXIT_CONFIG_ERROR,
    EXIT_IO_ERROR,
    EXIT_OK,
)
from src.core.exceptions import AmdiQkdError, OutputError, ParseError
from src.core.telemetry import setup_telemetry
from src.devices.channel_detector import channel_transmittance, sum_context
from src.models.sweep import QMAX_COLUMNS, SWEEP_COLUMNS, PdcSourceSpec, SweepConfig
from src.rate import pdc_condition_check, plob_bound, secret_key_rate
from src.sweep import (
    VERIFY_COLUMNS,
    emit_config,
    parse_config,
    run_qmax,
    run_sweep,
    run_verify,
    source_roles,
    write_csv,
    write_json,
)

logger = structlog.get_logger(__name__)

# argparse dest -> configuration key
_OVERRIDE_KEYS: dict[str, str] = {
    "L": "L",
    "eta_det": "eta_det",
    "tau": "tau_ns",
    "L_att": "L_att",
    "source": "source",
    "qnd_source": "qnd_source",
    "p0": "p0",
    "P": "P",
    "q0": "q0",
    "Q": "Q",
    "lam": "lambda",
    "mu": "mu",
    "L_start": "L_start",
    "L_stop": "L_stop",
    "L_points": "L_points",
    "L_spacing": "L_spacing",
    "points": "points",
    "seed": "seed",
    "threads": "threads",
    "out": "out",
    "json_out": "json_out",
}


# =============================================================================
# Argument Parser
# =============================================================================


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key = value configuration document")
    parser.add_argument("--eta-det", dest="eta_det", help="detector efficiency")
    parser.add_argument("--tau", help="feedforward time in ns")
    parser.add_argument("--L-att", dest="L_att", help="attenuation length in km")
    parser.add_argument("--source", help="user source statistics p0,p1,p2")
    parser.add_argument("--qnd-source", dest="qnd_source", help="QND source statistics q0,q1,q2")
    parser.add_argument("--p0", help="user source vacuum probability")
    parser.add_argument("--P", dest="P", help="user source ratio p2/p1")
    parser.add_argument("--q0", help="QND source vacuum probability")
    parser.add_argument("--Q", dest="Q", help="QND source ratio q2/q1")
    parser.add_argument("--threads", help="worker pool size")


def _add_grid(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--L-start", dest="L_start", help="first distance in km")
    parser.add_argument("--L-stop", dest="L_stop", help="last distance in km")
    parser.add_argument("--L-points", dest="L_points", help="number of distances")
    parser.add_argument("--L-spacing", dest="L_spacing", choices=["log", "linear"])
    parser.add_argument("--out", help="CSV output path ('-' for stdout)")
    parser.add_argument("--json-out", dest="json_out", help="JSON output path")


def build_parser() -> argparse.ArgumentParser:
    """The amdiqkd argument parser."""
    parser = argparse.ArgumentParser(
        prog="amdiqkd",
        description="Secret key rates of adaptive MDI-QKD with QND-heralded photons.",
    )
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-format", choices=["console", "json"])
    sub = parser.add_subparsers(dest="command", required=True)

    rate = sub.add_parser("rate", help="rate breakdown at one distance")
    _add_common(rate)
    rate.add_argument("--L", dest="L", help="Alice-Bob distance in km")
    rate.add_argument("--lambda", dest="lam", help="user PDC brightness")
    rate.add_argument("--mu", help="QND PDC brightness")

    sweep = sub.add_parser("sweep", help="rate and bound over a distance grid")
    _add_common(sweep)
    _add_grid(sweep)
    sweep.add_argument("--lambda", dest="lam", help="user PDC brightness")
    sweep.add_argument("--mu", help="QND PDC brightness")

    qmax = sub.add_parser("qmax", help="Q^max map over (p0, P)")
    _add_common(qmax)
    _add_grid(qmax)

    verify = sub.add_parser("verify", help="oracle versus closed form on random points")
    verify.add_argument("--config", type=Path)
    verify.add_argument("--points", help="number of random points")
    verify.add_argument("--seed", help="generator seed")
    verify.add_argument("--threads", help="worker pool size")
    verify.add_argument("--out", help="CSV report path")

    pdc = sub.add_parser("check-pdc", help="necessary condition for PDC sources")
    pdc.add_argument("--lambda", dest="lam", required=True, help="user PDC brightness")
    pdc.add_argument("--mu", required=True, help="QND PDC brightness")

    config = sub.add_parser("config", help="print the effective configuration")
    _add_common(config)
    _add_grid(config)
    config.add_argument("--mode", choices=["rate", "sweep", "qmax", "verify", "check-pdc"])
    config.add_argument("--L", dest="L")

    return parser


def load_config(args: argparse.Namespace) -> SweepConfig:
    """
    Config document (if any) with the flags applied over it.

    Raises:
        ParseError: Unreadable document or invalid values.
    """
    text = ""
    path: Path | None = getattr(args, "config", None)
    if path is not None:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"cannot read {path}: {e}") from e

    overrides = {
        key: str(getattr(args, dest))
        for dest, key in _OVERRIDE_KEYS.items()
        if getattr(args, dest, None) is not None
    }
    mode = getattr(args, "mode", None) if args.command == "config" else args.command
    if mode is not None:
        overrides["mode"] = mode
    return parse_config(text, overrides)


# =============================================================================
# Commands
# =============================================================================


def _print_pairs(pairs: Sequence[tuple[str, object]]) -> None:
    for name, value in pairs:
        text = format(value, CSV_FLOAT_FORMAT) if isinstance(value, float) else str(value)
        print(f"{name} = {text}")


def cmd_rate(cfg: SweepConfig) -> int:
    params = cfg.system_params()
    roles = source_roles(cfg)
    breakdown = secret_key_rate(sum_context(roles, params))
    eta_ch = channel_transmittance(params)
    bound = plob_bound(eta_ch)
    _print_pairs(
        [("L_km", params.distance_km), ("eta_ch", eta_ch), *breakdown.model_dump().items()]
        + [("plob_bound", bound), ("beats_bound", breakdown.rate > bound)]
    )
    return EXIT_OK


def cmd_sweep(cfg: SweepConfig) -> int:
    rows = run_sweep(cfg)
    write_csv(rows, SWEEP_COLUMNS, cfg.out or "-")
    if cfg.json_out:
        write_json(rows, cfg.json_out)
    return EXIT_OK


def cmd_qmax(cfg: SweepConfig) -> int:
    rows = run_qmax(cfg)
    write_csv(rows, QMAX_COLUMNS, cfg.out or "-")
    if cfg.json_out:
        write_json(rows, cfg.json_out)
    return EXIT_OK


def cmd_verify(cfg: SweepConfig) -> int:
    report = run_verify(cfg)
    if cfg.out:
        write_csv(report.checks(), VERIFY_COLUMNS, cfg.out)
    failures = report.failures()
    print(f"seed = {report.seed}")
    print(f"points = {len(report.points)}")
    print(f"checks = {len(report.checks())}")
    print(f"failures = {len(failures)}")
    for check in failures:
        print(
            f"FAIL point {check.point} [{check.kind}] {check.name}: "
            f"{check.value:{CSV_FLOAT_FORMAT}} vs {check.reference:{CSV_FLOAT_FORMAT}} "
            f"(abs {check.abs_dev:.3g}, rel {check.rel_dev:.3g})"
        )
    return report.exit_code


def cmd_check_pdc(cfg: SweepConfig) -> int:
    assert isinstance(cfg.source, PdcSourceSpec)
    assert isinstance(cfg.qnd_source, PdcSourceSpec)
    result = pdc_condition_check(cfg.source.brightness, cfg.qnd_source.brightness)
    _print_pairs(list(result.model_dump().items()))
    return EXIT_OK


def cmd_config(cfg: SweepConfig) -> int:
    sys.stdout.write(emit_config(cfg))
    return EXIT_OK


_COMMANDS = {
    "rate": cmd_rate,
    "sweep": cmd_sweep,
    "qmax": cmd_qmax,
    "verify": cmd_verify,
    "check-pdc": cmd_check_pdc,
    "config": cmd_config,
}


# =============================================================================
# Entry Point
# =============================================================================


def main(argv: Sequence[str] | None = None) -> int:
    """Run one amdiqkd command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; 2 is reserved for failed verification
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG_ERROR
    setup_telemetry(log_level=args.log_level, log_format=args.log_format)

    try:
        cfg = load_config(args)
        return _COMMANDS[args.command](cfg)
    except OutputError as e:
        logger.error("output failed", error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO_ERROR
    except AmdiQkdError as e:
        logger.error("command failed", command=args.command, error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
