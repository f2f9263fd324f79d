"""
Oracle-versus-closed-form verification runs.

Random operating points are drawn from a seeded numpy generator: Dirichlet
source statistics, eta_det in [0.3, 1], tau in {0, 67 ns}, L in [1, 300] km.
At every point the five closed-form probabilities are compared with the
brute-force Fock-space oracle. Extra points with ideal detectors and no
feedforward are also compared with the short unit-efficiency forms.

Usage:
    from src.sweep.verify import run_verify

    report = run_verify(cfg)
    if not report:
        for check in report.failures():
            print(check)
"""

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import structlog

from src.closed_form import compute_probabilities, unit_efficiency_probability_set
from src.core.config import get_settings
from src.core.constants import DEFAULT_TAU_S, EXIT_OK, EXIT_VERIFICATION_FAILED
from src.core.exceptions import CapExceeded
from src.core.telemetry import get_tracer, traced_operation
from src.devices.channel_detector import channel_transmittance, sum_context
from src.devices.sources import make_statistics
from src.models.rate import PROBABILITY_NAMES, ProbabilitySet, SumContext
from src.models.sources import PhotonStatistics, SourceRoles
from src.models.sweep import SweepConfig
from src.models.system import SystemParams
from src.oracle import oracle_pipeline

logger = structlog.get_logger(__name__)
tracer = get_tracer("amdiqkd.sweep.verify")

ClosedFormFn = Callable[[SumContext], ProbabilitySet]
OracleFn = Callable[[SourceRoles, SystemParams], ProbabilitySet]

# Ranges of the randomized points
ETA_DET_RANGE: tuple[float, float] = (0.3, 1.0)
DISTANCE_RANGE_KM: tuple[float, float] = (1.0, 300.0)
TAU_CHOICES_S: tuple[float, ...] = (0.0, DEFAULT_TAU_S)

# One ideal-detector point per this many random points
UNIT_POINT_STRIDE = 10


# =============================================================================
# Result Types
# =============================================================================


@dataclass
class ProbabilityCheck:
    """Comparison of one probability against its reference."""

    point: int
    kind: str
    name: str
    value: float
    reference: float
    abs_dev: float
    rel_dev: float
    passed: bool

    def __bool__(self) -> bool:
        """Allow using result in boolean context."""
        return self.passed


@dataclass
class PointReport:
    """All checks at one operating point."""

    index: int
    kind: str
    parameters: dict[str, Any]
    checks: list[ProbabilityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks)

    def __bool__(self) -> bool:
        """Allow using result in boolean context."""
        return self.passed


@dataclass
class VerificationReport:
    """Outcome of a verification run."""

    seed: int
    abs_tol: float
    rel_tol: float
    unit_tol: float
    points: list[PointReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.points)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_VERIFICATION_FAILED

    def checks(self) -> list[ProbabilityCheck]:
        return [check for point in self.points for check in point.checks]

    def failures(self) -> list[ProbabilityCheck]:
        return [check for check in self.checks() if not check]

    def __bool__(self) -> bool:
        """Allow using result in boolean context."""
        return self.passed


VERIFY_COLUMNS: tuple[str, ...] = (
    "point",
    "kind",
    "name",
    "value",
    "reference",
    "abs_dev",
    "rel_dev",
    "passed",
)


# =============================================================================
# Internal Checks
# =============================================================================


def _check_probability(
    point: int,
    kind: str,
    name: str,
    value: float,
    reference: float,
    abs_tol: float,
    rel_tol: float,
) -> ProbabilityCheck:
    """Compare value with reference under math.isclose tolerances."""
    abs_dev = abs(value - reference)
    scale = abs(reference)
    rel_dev = abs_dev / scale if scale > 0 else (0.0 if abs_dev == 0 else math.inf)
    return ProbabilityCheck(
        point=point,
        kind=kind,
        name=name,
        value=value,
        reference=reference,
        abs_dev=abs_dev,
        rel_dev=rel_dev,
        passed=math.isclose(value, reference, rel_tol=rel_tol, abs_tol=abs_tol),
    )


def _check_probability_set(
    point: int,
    kind: str,
    values: ProbabilitySet,
    reference: ProbabilitySet,
    abs_tol: float,
    rel_tol: float,
) -> list[ProbabilityCheck]:
    ours = values.as_dict()
    theirs = reference.as_dict()
    return [
        _check_probability(point, kind, name, ours[name], theirs[name], abs_tol, rel_tol)
        for name in PROBABILITY_NAMES
    ]


def _check_oracle_cap(n_max: int) -> None:
    cap = get_settings().numerics.oracle_max_n_max
    if n_max > cap:
        raise CapExceeded(f"n_max={n_max} exceeds the oracle cap {cap} (NUMERICS_ORACLE_MAX_N_MAX)")


# =============================================================================
# Random Points
# =============================================================================


@dataclass(frozen=True)
class VerifyPoint:
    """One operating point of a verification run."""

    index: int
    kind: str
    roles: SourceRoles
    params: SystemParams

    def describe(self) -> dict[str, Any]:
        return {
            "p": list(self.roles.alice_bob.probs),
            "q": list(self.roles.qnd.probs),
            "eta_det": self.params.eta_det,
            "tau_s": self.params.tau_s,
            "L_km": self.params.distance_km,
        }


def _random_statistics(rng: np.random.Generator, n_max: int) -> PhotonStatistics:
    # Dirichlet draws can sum to 1 + ulp
    probs = rng.dirichlet(np.ones(n_max + 1))
    return make_statistics([float(p) for p in probs / max(1.0, float(probs.sum()))])


def draw_points(
    count: int, seed: int, n_max: int, base: SystemParams | None = None
) -> list[VerifyPoint]:
    """
    Randomized oracle points followed by ideal-detector points.

    The same seed always yields the same points.
    """
    rng = np.random.default_rng(seed)
    base = base or SystemParams()
    points: list[VerifyPoint] = []
    for index in range(count):
        roles = SourceRoles(
            alice_bob=_random_statistics(rng, n_max), qnd=_random_statistics(rng, n_max)
        )
        params = base.model_copy(
            update={
                "eta_det": float(rng.uniform(*ETA_DET_RANGE)),
                "tau_s": float(rng.choice(TAU_CHOICES_S)),
                "distance_km": float(rng.uniform(*DISTANCE_RANGE_KM)),
            }
        )
        points.append(VerifyPoint(index, "oracle", roles, params))

    for offset in range(max(1, count // UNIT_POINT_STRIDE)):
        roles = SourceRoles(
            alice_bob=_random_statistics(rng, n_max), qnd=_random_statistics(rng, n_max)
        )
        params = base.model_copy(
            update={
                "eta_det": 1.0,
                "tau_s": 0.0,
                "distance_km": float(rng.uniform(*DISTANCE_RANGE_KM)),
            }
        )
        points.append(VerifyPoint(count + offset, "unit", roles, params))
    return points


# =============================================================================
# Verification Run
# =============================================================================


def verify_point(
    point: VerifyPoint,
    abs_tol: float,
    rel_tol: float,
    unit_tol: float,
    closed_form_fn: ClosedFormFn = compute_probabilities,
    oracle_fn: OracleFn = oracle_pipeline,
) -> PointReport:
    """Compare closed form with the oracle (and the unit-efficiency forms)."""
    closed = closed_form_fn(sum_context(point.roles, point.params))
    oracle = oracle_fn(point.roles, point.params)
    report = PointReport(index=point.index, kind=point.kind, parameters=point.describe())
    report.checks.extend(
        _check_probability_set(point.index, "oracle", closed, oracle, abs_tol, rel_tol)
    )
    if point.kind == "unit" and point.roles.n_max <= 2:
        unit = unit_efficiency_probability_set(
            point.roles, channel_transmittance(point.params)
        )
        report.checks.extend(
            _check_probability_set(point.index, "unit", closed, unit, unit_tol, unit_tol)
        )
    return report


def run_verify(
    cfg: SweepConfig,
    closed_form_fn: ClosedFormFn = compute_probabilities,
    oracle_fn: OracleFn = oracle_pipeline,
    threads: int | None = None,
) -> VerificationReport:
    """
    Randomized oracle-versus-closed-form comparison.

    Points, seed and tolerances come from the config, else from VERIFY_*
    settings. The attenuation length and fiber speed come from the config.

    Raises:
        CapExceeded: n_max above the oracle feasibility cap.
    """
    _check_oracle_cap(cfg.n_max)
    defaults = get_settings().verify
    count = cfg.points or defaults.points
    seed = cfg.seed if cfg.seed is not None else defaults.seed
    abs_tol = cfg.abs_tol or defaults.abs_tol
    rel_tol = cfg.rel_tol or defaults.rel_tol
    workers = threads or cfg.threads or get_settings().numerics.threads

    points = draw_points(count, seed, cfg.n_max, cfg.system_params(0.0))
    report = VerificationReport(
        seed=seed, abs_tol=abs_tol, rel_tol=rel_tol, unit_tol=defaults.unit_tol
    )

    with traced_operation(
        tracer, "run_verify", {"points": len(points), "seed": seed, "threads": workers}
    ) as span:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            report.points = list(
                executor.map(
                    lambda point: verify_point(
                        point, abs_tol, rel_tol, defaults.unit_tol, closed_form_fn, oracle_fn
                    ),
                    points,
                )
            )
        failures = report.failures()
        span.set_attribute("failures", len(failures))
        if failures:
            logger.warning(
                "verification failed",
                seed=seed,
                failures=len(failures),
                first=f"point {failures[0].point} {failures[0].name}",
            )
        else:
            logger.info("verification passed", seed=seed, points=len(points))
    return report
