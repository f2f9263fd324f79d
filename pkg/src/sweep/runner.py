"""
Rate sweeps over distance and Q^max maps over (p0, P).

Grid points are dispatched to a thread pool; executor.map keeps the rows in
grid order whatever the completion order.
"""

from concurrent.futures import ThreadPoolExecutor

import structlog

from src.core.config import get_settings
from src.core.telemetry import get_tracer, traced_operation
from src.devices.channel_detector import channel_transmittance, sum_context
from src.models.sources import SourceRoles
from src.models.sweep import QMaxRow, RatioSourceSpec, SweepConfig, SweepRow
from src.parsers import get_parser_factory
from src.rate import default_distance_grid, plob_bound, q_max_search, secret_key_rate

logger = structlog.get_logger(__name__)
tracer = get_tracer("amdiqkd.sweep.runner")


def resolve_threads(cfg: SweepConfig) -> int:
    """Worker count from the config, else from NUMERICS_THREADS."""
    return cfg.threads or get_settings().numerics.threads


def source_roles(cfg: SweepConfig) -> SourceRoles:
    """Photon statistics of both source roles."""
    factory = get_parser_factory()
    return SourceRoles(
        alice_bob=factory.to_statistics(cfg.source, cfg.n_max),
        qnd=factory.to_statistics(cfg.qnd_source, cfg.n_max),
    )


def distance_grid(cfg: SweepConfig) -> list[float]:
    """Distances of the configured grid, in km."""
    return default_distance_grid(cfg.grid.start, cfg.grid.stop, cfg.grid.points, cfg.grid.spacing)


# =============================================================================
# Rate Sweep
# =============================================================================


def evaluate_row(roles: SourceRoles, cfg: SweepConfig, distance_km: float) -> SweepRow:
    """Rate, error rates and bound at one distance."""
    params = cfg.system_params(distance_km)
    eta_ch = channel_transmittance(params)
    breakdown = secret_key_rate(sum_context(roles, params))
    bound = plob_bound(eta_ch)
    return SweepRow(
        L_km=distance_km,
        eta_ch=eta_ch,
        **breakdown.probabilities().as_dict(),
        e_z=breakdown.e_z,
        e_x=breakdown.e_x,
        rate=breakdown.rate,
        plob_bound=bound,
        beats_bound=breakdown.rate > bound,
    )


def run_sweep(cfg: SweepConfig, threads: int | None = None) -> list[SweepRow]:
    """
    One row per distance of the configured grid, in grid order.

    Raises:
        InvalidParameter: Empty or invalid grid, or invalid source statistics.
    """
    grid = distance_grid(cfg)
    roles = source_roles(cfg)
    workers = threads or resolve_threads(cfg)

    with traced_operation(tracer, "run_sweep", {"points": len(grid), "threads": workers}) as span:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(lambda L: evaluate_row(roles, cfg, L), grid))
        beating = sum(row.beats_bound for row in rows)
        span.set_attribute("rows.beating", beating)
        logger.info("sweep complete", rows=len(rows), beating=beating, threads=workers)
        return rows


# =============================================================================
# Q^max Map
# =============================================================================


def evaluate_qmax_cell(cfg: SweepConfig, p0: float, P: float, grid: list[float]) -> QMaxRow:
    """Q^max at the configured detectors and with the ideal reference."""
    assert isinstance(cfg.qnd_source, RatioSourceSpec)
    q0 = cfg.qnd_source.zero
    params = cfg.system_params()
    ideal = params.model_copy(update={"eta_det": 1.0, "tau_s": 0.0})

    result = q_max_search(p0, P, q0, params, grid, cfg.qmax_tol)
    reference = q_max_search(p0, P, q0, ideal, grid, cfg.qmax_tol)
    ratio = result.q_max / reference.q_max if reference.q_max > 0 else 0.0
    return QMaxRow(
        p0=p0,
        P=P,
        q0=q0,
        eta_det=cfg.eta_det,
        tau_ns=cfg.tau_ns,
        q_max=result.q_max,
        q_max_reference=reference.q_max,
        ratio=ratio,
        beatable=result.beatable,
        monotone=result.monotone and reference.monotone,
    )


def run_qmax(cfg: SweepConfig, threads: int | None = None) -> list[QMaxRow]:
    """One row per (p0, P) cell, cells in row-major order."""
    grid = distance_grid(cfg)
    cells = cfg.qmax_cells()
    workers = threads or resolve_threads(cfg)

    with traced_operation(tracer, "run_qmax", {"cells": len(cells), "threads": workers}):
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(lambda cell: evaluate_qmax_cell(cfg, *cell, grid), cells))
        logger.info("q_max map complete", cells=len(rows), threads=workers)
        return rows
