"""Estimators over embedded-chain trajectories and cycle batches."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .distributions import RngStream
from .model import NOT_YET, ChainResult, CycleBatch, CycleRecord, sample_cycles

DEFAULT_BURN_IN_FRACTION = 0.2
DEFAULT_BATCHES = 30


class EstimationError(ValueError):
    """Not enough post-burn-in data for the requested estimate."""


class NotTransientError(ValueError):
    """The trajectory returned to zero inside the window used for a growth rate."""


@dataclass(frozen=True)
class EstimatorResult:
    mean: float
    ci_half_width: float
    n_epochs: int
    burn_in: int


@dataclass(frozen=True)
class LingeringStats:
    mean_t_star: float
    mean_tau_max: float
    mean_gap_t_star_tau_max: float
    mean_gap_t_star_tau_min: float
    idle_fraction: float
    n_cycles: int


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    z_score: float
    total_lhs: float
    total_rhs: float
    total_z_score: float


def default_burn_in(n: int) -> int:
    return int(DEFAULT_BURN_IN_FRACTION * n)


def batch_means(x, n_batches: int = DEFAULT_BATCHES) -> tuple[float, float]:
    """Mean and its standard error from non-overlapping batch means.

    The tail that does not fill a whole batch is dropped from the standard
    error but kept in the mean.
    """
    x = np.asarray(x, dtype=float)
    if n_batches < 2:
        raise EstimationError("need at least two batches")
    b = len(x) // n_batches
    if b < 1:
        raise EstimationError(f"{len(x)} observations cannot fill {n_batches} batches")
    means = x[: b * n_batches].reshape(n_batches, b).mean(axis=1)
    return float(x.mean()), float(means.std(ddof=1) / math.sqrt(n_batches))


def stationary_mean(values, burn_in: int | None = None, n_batches: int = DEFAULT_BATCHES,
                    level: float = 0.95) -> EstimatorResult:
    """Time average of ``values`` (e.g. ``ChainResult.norms``) after burn-in.

    The confidence half-width uses a Student-t quantile on ``n_batches``
    batch means.
    """
    if isinstance(values, ChainResult):
        values = values.norms
    x = np.asarray(values, dtype=float)
    n = len(x)
    if burn_in is None:
        burn_in = default_burn_in(n)
    if n_batches < 10:
        raise EstimationError("use at least 10 batches")
    if n <= burn_in:
        raise EstimationError(f"stream of length {n} does not exceed burn-in {burn_in}")
    tail = x[burn_in:]
    if len(tail) < n_batches:
        raise EstimationError(f"{len(tail)} post-burn-in epochs for {n_batches} batches")
    mean, se = batch_means(tail, n_batches)
    half = stats.t.ppf(0.5 + level / 2, n_batches - 1) * se
    return EstimatorResult(mean=mean, ci_half_width=float(half), n_epochs=n, burn_in=burn_in)


def scaling_F(mean: float, rho: float) -> float:
    """log(mean) / log(1 / (1 - rho))."""
    if not mean > 0:
        raise ValueError(f"mean must be positive, got {mean}")
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    return math.log(mean) / math.log(1.0 / (1.0 - rho))


def growth_rate(trajectory, min_level: float | None = None) -> float:
    """Geometric-mean ratio of successive totals over the trailing half.

    With ``min_level`` only the part after the trajectory first exceeds that
    level is considered.
    """
    q = np.asarray(trajectory.norms if isinstance(trajectory, ChainResult) else trajectory,
                   dtype=float)
    if min_level is not None:
        above = np.nonzero(q > min_level)[0]
        if not above.size:
            raise NotTransientError(f"trajectory never exceeds {min_level}")
        q = q[above[0]:]
    window = q[len(q) // 2:]
    if len(window) < 2:
        raise EstimationError("need at least two points in the trailing window")
    if np.any(window <= 0):
        raise NotTransientError("trajectory hits zero in the trailing window")
    return float(np.exp(np.mean(np.diff(np.log(window)))))


def _cycle_columns(records):
    if isinstance(records, (CycleBatch, ChainResult)):
        if records.tau is None or records.idle_slots is None:
            raise EstimationError("cycle vectors missing; run the chain with full=True")
        t = np.asarray(records.t_star)
        tau = np.asarray(records.tau)
        idle = np.asarray(records.idle_slots)
    else:
        records = list(records)
        if not records:
            raise EstimationError("no cycles")
        t = np.array([c.t_star for c in records])
        tau = np.array([c.tau for c in records])
        idle = np.array([c.idle_slots for c in records])
    return t, tau, idle


def lingering_stats(records) -> LingeringStats:
    """Means of T*, tau_max and the gaps T* - tau_max, T* - tau_(1).

    ``idle_fraction`` is the number of idle slots of the first queue to
    empty, summed over cycles, over the total number of slots.  Queues that
    never empty within a cycle do not enter the tau statistics.
    """
    if isinstance(records, CycleRecord):
        records = [records]
    t, tau, idle = _cycle_columns(records)
    if len(t) == 0:
        raise EstimationError("no cycles")
    seen = tau != NOT_YET
    big = np.iinfo(np.int64).max
    tau_min = np.where(seen, tau, big).min(axis=1)
    tau_max = np.where(seen, tau, -1).max(axis=1)
    has = seen.any(axis=1)
    if not has.any():
        raise EstimationError("no queue emptied in any cycle")
    first = np.where(seen, tau, big).argmin(axis=1)
    first_idle = np.where(has, idle[np.arange(len(t)), first], 0)
    total = t.sum()
    return LingeringStats(
        mean_t_star=float(t.mean()),
        mean_tau_max=float(tau_max[has].mean()),
        mean_gap_t_star_tau_max=float((t - tau_max)[has].mean()),
        mean_gap_t_star_tau_min=float((t - tau_min)[has].mean()),
        idle_fraction=float(first_idle.sum() / total) if total else 0.0,
        n_cycles=len(t),
    )


def check_stationarity_identity(chain: ChainResult, burn_in: int | None = None,
                                n_batches: int = DEFAULT_BATCHES) -> IdentityCheck:
    """Compare the mean active length per queue at switching epochs with E(xi) E(T*).

    Each epoch is paired with the cycle it starts; the z-score uses batch
    means of the paired difference.  The summed version (all R active
    queues against R E(xi) E(T*)) is returned alongside.
    """
    if chain.active is None:
        raise EstimationError("identity check needs a chain run with full=True")
    n = chain.n_epochs
    if burn_in is None:
        burn_in = default_burn_in(n)
    if n - burn_in < n_batches:
        raise EstimationError("not enough post-burn-in epochs")
    R = chain.params.R
    m = chain.params.xi.mean
    active = chain.active[burn_in:n].astype(float)
    t = chain.t_star[burn_in:].astype(float)
    per_queue = active.mean(axis=1)
    lhs, _ = batch_means(per_queue, n_batches)
    rhs = m * float(t.mean())
    d_mean, d_se = batch_means(per_queue - m * t, n_batches)
    z = d_mean / d_se if d_se > 0 else (0.0 if d_mean == 0 else math.copysign(math.inf, d_mean))
    total = active.sum(axis=1)
    tot_mean, tot_se = batch_means(total - R * m * t, n_batches)
    tz = tot_mean / tot_se if tot_se > 0 else (0.0 if tot_mean == 0 else math.copysign(math.inf, tot_mean))
    return IdentityCheck(lhs=lhs, rhs=rhs, z_score=float(z), total_lhs=float(total.mean()),
                         total_rhs=R * rhs, total_z_score=float(tz))


@dataclass(frozen=True)
class LingeringSlope:
    slope: float
    stderr: float
    levels: tuple[int, ...]
    gaps: tuple[float, ...]
    gap_stderrs: tuple[float, ...]


def lingering_slope(levels, params, n_cycles: int, r: RngStream) -> LingeringSlope:
    """Log-log slope of E[T* - tau_(1)] against a symmetric start level.

    Every start ``(a, ..., a)`` runs ``n_cycles`` independent cycles on the
    substream ``r.spawn("lingering", a)``.  The fit is weighted by the delta
    method variance of each log mean.
    """
    levels = tuple(int(a) for a in levels)
    if len(levels) < 2 or min(levels) < 1:
        raise EstimationError("need at least two positive start levels")
    gaps, ses = [], []
    for a in levels:
        batch = sample_cycles((a,) * params.R, n_cycles, params, r.spawn("lingering", a))
        t, tau, _ = _cycle_columns(batch)
        seen = tau != NOT_YET
        first = np.where(seen, tau, np.iinfo(np.int64).max).min(axis=1)
        d = (t - first)[seen.any(axis=1)].astype(float)
        if len(d) < 2 or d.mean() <= 0:
            raise EstimationError(f"no usable cycles at level {a}")
        gaps.append(float(d.mean()))
        ses.append(float(d.std(ddof=1) / math.sqrt(len(d))))
    x = np.log(levels)
    y = np.log(gaps)
    w = (np.array(gaps) / np.array(ses)) ** 2
    X = np.column_stack([x, np.ones_like(x)])
    cov = np.linalg.inv(X.T @ (w[:, None] * X))
    coef = cov @ (X.T @ (w * y))
    return LingeringSlope(slope=float(coef[0]), stderr=float(math.sqrt(cov[0, 0])),
                          levels=levels, gaps=tuple(gaps), gap_stderrs=tuple(ses))
