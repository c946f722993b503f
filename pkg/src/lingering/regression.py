"""Heavy-traffic sweeps and the ``F ~ alpha + log C / x`` fit, ``x = log(1/(1 - rho))``."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, replace
from typing import Sequence

import numpy as np
from joblib import Parallel, delayed

from .distributions import RngStream, derive_stream_id
from .estimators import DEFAULT_BATCHES, scaling_F, stationary_mean
from .model import DivergedCycleError, ModelParams, SystemState, simulate_chain

log = logging.getLogger(__name__)

MIN_WINDOW = 4


class InsufficientWindowError(ValueError):
    """Too few sweep points at or after the minimum of F."""


@dataclass(frozen=True)
class SweepPoint:
    rho: float
    F: float
    mean: float
    ci: float
    n_epochs: int = 0

    @property
    def x(self) -> float:
        return math.log(1.0 / (1.0 - self.rho))


@dataclass(frozen=True)
class SweepFailure:
    rho: float
    error: str


@dataclass(frozen=True)
class RegressionResult:
    alpha_hat: float
    log_c_hat: float
    window_start: int
    rss: float
    n_points: int

    def to_record(self) -> dict:
        return asdict(self)


def default_rho_grid(n: int = 10, x_min: float = 2.0, x_max: float = 5.3) -> np.ndarray:
    """Loads whose ``log(1/(1-rho))`` are equally spaced in ``[x_min, x_max]``."""
    return 1.0 - np.exp(-np.linspace(x_min, x_max, n))


def minimum_index(F: Sequence[float]) -> int:
    """Index of the smallest F, ties going to the largest index."""
    F = np.asarray(F, dtype=float)
    return int(len(F) - 1 - np.argmin(F[::-1]))


WINDOW_MODES = ("minimum", "all", "auto")


def fit_alpha(points: Sequence[SweepPoint], window: str = "minimum") -> RegressionResult:
    """Least-squares fit of ``F = a + b / x``; ``a`` estimates the exponent, ``b`` log C.

    ``window`` picks the fitted points:

    * ``"minimum"``: the points at or after the smallest F (the default);
    * ``"all"``: every point;
    * ``"auto"``: as ``"minimum"``, unless F falls over the grid so steeply
      that fewer than `MIN_WINDOW` points remain; then F is still coming
      down towards its limit from above and all points are used.

    Points are sorted by load first, so input order does not matter.
    """
    if window not in WINDOW_MODES:
        raise ValueError(f"window must be one of {WINDOW_MODES}, got {window!r}")
    pts = sorted(points, key=lambda p: p.rho)
    if len(pts) < 6:
        raise InsufficientWindowError(f"need at least 6 sweep points, got {len(pts)}")
    x = np.array([p.x for p in pts])
    F = np.array([p.F for p in pts])
    start = 0 if window == "all" else minimum_index(F)
    if window == "auto" and len(pts) - start < MIN_WINDOW and F[-1] < F[0]:
        start = 0
    if len(pts) - start < MIN_WINDOW:
        raise InsufficientWindowError(
            f"only {len(pts) - start} points at or after the minimum of F (index {start})")
    xs, Fs = x[start:], F[start:]
    design = np.column_stack([np.ones_like(xs), 1.0 / xs])
    coef, *_ = np.linalg.lstsq(design, Fs, rcond=None)
    resid = Fs - design @ coef
    return RegressionResult(alpha_hat=float(coef[0]), log_c_hat=float(coef[1]),
                            window_start=start, rss=float(resid @ resid), n_points=len(xs))


def point_stream(seed: int, index: int) -> RngStream:
    return RngStream(seed, derive_stream_id("sweep-alpha", index))


def warm_start(params: ModelParams) -> SystemState:
    """All 2R queues at the level where the averaged drift vanishes.

    That level, ``(1 - rho) ** (-1 / beta) - 1``, is close to the stationary
    mean when beta is small, where starting empty would need a very long
    burn-in; for large beta it is small and the start is nearly empty.
    """
    if params.infinite_beta or params.rho >= 1:
        return SystemState.empty(params.R)
    z = max(params.zeta.mean, 1e-12)
    level = int(round(min(max((z / (1.0 - params.rho)) ** (1.0 / params.beta) - 1.0, 0.0), 1e12)))
    return SystemState((level,) * params.R, (level,) * params.R)


def run_point(params: ModelParams, n_epochs: int, seed: int, index: int,
              burn_in: int | None = None, n_batches: int = DEFAULT_BATCHES) -> SweepPoint:
    """Simulate one load from `warm_start` and summarise it."""
    chain = simulate_chain(warm_start(params), n_epochs, params, point_stream(seed, index))
    est = stationary_mean(chain.norms, burn_in=burn_in, n_batches=n_batches)
    return SweepPoint(rho=params.rho, F=scaling_F(est.mean, params.rho), mean=est.mean,
                      ci=est.ci_half_width, n_epochs=n_epochs)


def _task(params, n_epochs, seed, index, burn_in_fraction, n_batches):
    burn_in = int(burn_in_fraction * (n_epochs + 1))
    try:
        return run_point(params, n_epochs, seed, index, burn_in=burn_in, n_batches=n_batches)
    except (DivergedCycleError, ValueError) as exc:
        return SweepFailure(rho=params.rho, error=f"{type(exc).__name__}: {exc}")


def sweep_alpha(beta: float, rho_grid: Sequence[float] | None = None, R: int = 2,
                n_epochs: int | Sequence[int] = 20_000, seed: int = 0, workers: int = 1,
                params_base: ModelParams | None = None, burn_in_fraction: float = 0.2,
                n_batches: int = DEFAULT_BATCHES, window: str = "auto",
                on_error: str = "raise"):
    """Estimate F at every load of the grid, then fit the scaling exponent.

    Each grid point runs on its own stream keyed by ``(seed, index)``, so
    the output does not depend on ``workers``.  ``n_epochs`` is either one
    budget for every point or one per point.  With ``on_error="record"``
    failed points are returned as `SweepFailure` entries and left out of
    the fit.  ``window`` is passed on to `fit_alpha`.

    Returns ``(points, result)``; ``result`` is None when the fit itself
    failed under ``on_error="record"``.
    """
    grid = np.asarray(default_rho_grid() if rho_grid is None else rho_grid, dtype=float)
    if np.any(np.diff(grid) <= 0) or grid.min() <= 0 or grid.max() >= 1:
        raise ValueError("rho grid must be strictly increasing inside (0, 1)")
    budgets = [int(n_epochs)] * len(grid) if np.ndim(n_epochs) == 0 else [int(b) for b in n_epochs]
    if len(budgets) != len(grid):
        raise ValueError("one epoch budget per grid point")
    if params_base is None:
        params_base = ModelParams.standard(float(grid[0]), beta=beta, R=R)
    base = replace(params_base, beta=beta)
    tasks = [delayed(_task)(base.with_rho(float(rho)), b, seed, i, burn_in_fraction, n_batches)
             for i, (rho, b) in enumerate(zip(grid, budgets))]
    if workers == 1:
        points = [fn(*args, **kw) for fn, args, kw in tasks]
    else:
        points = Parallel(n_jobs=workers)(tasks)
    failures = [p for p in points if isinstance(p, SweepFailure)]
    if failures and on_error == "raise":
        raise RuntimeError(f"sweep point rho={failures[0].rho} failed: {failures[0].error}")
    good = [p for p in points if isinstance(p, SweepPoint)]
    try:
        result = fit_alpha(good, window=window)
    except InsufficientWindowError:
        if on_error == "raise":
            raise
        log.warning("fit failed for beta=%s", beta)
        result = None
    return points, result
