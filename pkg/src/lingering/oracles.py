"""Monte-Carlo checks of the model's structural bounds and of the conditioned walk.

Every check returns a `CheckResult` carrying the statistic, the bound it
is compared against, a standard error and a verdict.  Verdicts use a
one-sided guard band of ``GUARD`` standard errors, so an exact inequality
fails spuriously with probability below 0.2% per call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numba
import numpy as np
from scipy import stats

from .distributions import (
    DistributionSpec,
    ParameterError,
    RngStream,
    draw,
    draw_sum,
    geometric_xi_for_load,
    moments,
    sample,
)
from .model import NOT_YET, ModelParams, _psi, _psi_table, sample_cycles

GUARD = 3.0
_ROUNDING = 1e-9  # relative slack so degenerate (zero-variance) cases compare equal
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

_DIRECT, _HITTING = 0, 1


class InsufficientDataError(ValueError):
    """Too few usable samples for a tail fit."""


@dataclass
class CheckResult:
    check: str
    params: dict
    statistic: float
    bound: float
    stderr: float
    verdict: str
    details: dict = field(default_factory=dict)

    @property
    def satisfied(self) -> bool:
        return self.verdict == PASS

    def to_record(self) -> dict:
        return {
            "check": self.check,
            "params": _jsonable(self.params),
            "statistic": _finite_or_none(self.statistic),
            "bound": _finite_or_none(self.bound),
            "stderr": _finite_or_none(self.stderr),
            "verdict": self.verdict,
        }


def _finite_or_none(v):
    v = float(v)
    return v if math.isfinite(v) else None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _finite_or_none(obj) if not math.isinf(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, DistributionSpec):
        return obj.to_record()
    return obj


@dataclass(frozen=True)
class WalkSpec:
    """Step law of a random walk ``W(x) = step_1 + ... + step_x``.

    ``direct`` steps are ``shift + sign * X`` with ``X ~ generator``.
    ``hitting_time`` steps are copies of the time a walk with increments
    ``xi - 1`` (``xi ~ generator``) needs to go from 1 down to 0; their
    mean is ``1 / (1 - E xi)`` and their variance ``Var(xi) / (1 - E xi)^3``.
    """

    step_mean: float
    step_variance: float
    generator: DistributionSpec
    mode: str = "direct"
    shift: int = 0
    sign: int = 1

    @classmethod
    def from_distribution(cls, d: DistributionSpec, shift: int = 0, sign: int = 1) -> "WalkSpec":
        if sign not in (1, -1):
            raise ParameterError("sign must be +1 or -1")
        m, v = moments(d)
        return cls(step_mean=shift + sign * m, step_variance=v, generator=d,
                   shift=int(shift), sign=sign)

    @classmethod
    def hitting_time(cls, xi: DistributionSpec) -> "WalkSpec":
        m, v = moments(xi)
        if not m < 1:
            raise ParameterError(f"hitting times are finite in mean only for E(xi) < 1, got {m}")
        return cls(step_mean=1.0 / (1.0 - m), step_variance=v / (1.0 - m) ** 3,
                   generator=xi, mode="hitting_time")

    @property
    def non_negative(self) -> bool:
        return self.mode == "hitting_time" or (self.sign == 1 and self.shift >= 0)

    def _kernel_args(self):
        mode = _HITTING if self.mode == "hitting_time" else _DIRECT
        return (mode, *self.generator.code, self.shift, self.sign)

    def to_record(self) -> dict:
        return {"mode": self.mode, "generator": self.generator.to_record(),
                "shift": self.shift, "sign": self.sign,
                "step_mean": self.step_mean, "step_variance": self.step_variance}


@dataclass(frozen=True)
class TailEstimate:
    exponent_hat: float
    stderr: float
    n_samples: int
    truncation_horizon: int


@dataclass
class ReleaseCounts:
    """Release counts along conditioned paths at two horizons.

    ``tail[n]`` estimates P(N > n) at the base horizon, ``tail_doubled`` the
    same at twice the horizon.  ``local_time[a]`` is the mean number of
    visits of the path to level ``a``.
    """

    beta: float
    horizon: int
    histogram: np.ndarray
    p_zero: float
    p_zero_stderr: float
    tail: np.ndarray
    tail_doubled: np.ndarray
    max_tail_shift: float
    inconclusive: bool
    acceptance: float
    local_time: np.ndarray
    n_samples: int


@dataclass(frozen=True)
class ScalingEstimate:
    slope: float
    stderr: float
    a1_grid: tuple
    means: tuple
    stderrs: tuple
    degenerate: bool = False


@dataclass(frozen=True)
class DriftEstimate:
    drift: float
    stderr: float
    heuristic: float


# ---------------------------------------------------------------- kernels


@numba.njit(cache=True)
def _walk_sum(g, mode, k, a, b, shift, sign, x):
    if mode == 1:
        # Skip-free downward walk: from level L it needs at least L steps, and
        # after exactly L steps it sits at the arrivals of those steps.
        total = np.int64(0)
        level = np.int64(x)
        while level > 0:
            total += level
            level = draw_sum(g, k, a, b, level)
        return total
    return shift * x + sign * draw_sum(g, k, a, b, x)


@numba.njit(cache=True)
def _max_of_walks(g, mode, k, a, b, shift, sign, x, out):
    for i in range(out.shape[0]):
        best = _walk_sum(g, mode, k, a, b, shift, sign, x[0])
        for r in range(1, x.shape[0]):
            w = _walk_sum(g, mode, k, a, b, shift, sign, x[r])
            if w > best:
                best = w
        out[i] = best


@numba.njit(cache=True)
def _conditioned_paths(n, horizon, xk, xa, xb, beta, ptab, g_xi, g_u, max_tries,
                       n_rel, first_rel, local, keep_path, path_out):
    """Rejection sampler for the walk with steps ``1 - xi`` kept above 0 after time 0.

    Per accepted path stores the number of releases at times 1..horizon and
    the first release time (``NOT_YET`` if none).  Returns (accepted, tries).
    """
    inf_beta = beta == np.inf
    n_tab = ptab.shape[0]
    n_local = local.shape[0]
    path = np.empty(horizon + 1, dtype=np.int64)
    tries = 0
    for i in range(n):
        while True:
            tries += 1
            if tries > max_tries:
                return i, tries
            w = np.int64(0)
            path[0] = 0
            count = 0
            first = -1
            ok = True
            for k in range(1, horizon + 1):
                w += 1 - draw(g_xi, xk, xa, xb)
                if w <= 0:
                    ok = False
                    break
                path[k] = w
                if not inf_beta:
                    p = ptab[w] if w < n_tab else _psi(w, beta)
                    if g_u.random() < p:
                        count += 1
                        if first < 0:
                            first = k
            if ok:
                break
        n_rel[i] = count
        first_rel[i] = first
        for k in range(horizon + 1):
            if path[k] < n_local:
                local[path[k]] += 1
        if keep_path:
            path_out[:] = path
    return n, tries


# ------------------------------------------------------------ bound checks


def _max_samples(x, spec: WalkSpec, n_samples: int, r: RngStream) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    if x.size == 0 or x.min() < 0:
        raise ParameterError("x must be a non-empty vector of non-negative integers")
    out = np.empty(int(n_samples), dtype=np.int64)
    _max_of_walks(r.generator, *spec._kernel_args(), x, out)
    return out


def _mean_se(v) -> tuple[float, float]:
    v = np.asarray(v, dtype=float)
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else 0.0


def verify_bound_max(x, spec: WalkSpec, n_samples: int, r: RngStream) -> CheckResult:
    """E max_r W_r(x_r) <= m |x|_inf + R (w |x|_inf)^(1/2) for R independent walks.

    The bound only holds for a non-negative step mean ``m``.
    """
    if n_samples < 10_000:
        raise ParameterError("use at least 10^4 samples")
    if spec.step_mean < 0:
        raise ParameterError(f"the bound needs a non-negative step mean, got {spec.step_mean}")
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    xm = float(x.max(initial=0))
    bound = spec.step_mean * xm + len(x) * math.sqrt(spec.step_variance * xm)
    mean, se = _mean_se(_max_samples(x, spec, n_samples, r))
    verdict = PASS if mean <= bound + GUARD * se + _ROUNDING * max(1.0, abs(bound)) else FAIL
    return CheckResult("bound_max", {"x": x.tolist(), "walk": spec.to_record(), "n_samples": n_samples},
                       mean, bound, se, verdict)


def verify_bound_max_sqrt(x, spec: WalkSpec, n_samples: int, r: RngStream) -> CheckResult:
    """E (max_r W_r(x_r))^(1/2) >= (m |x|_inf)^(1/2) - w m^(-3/2) |x|_inf^(-1/2), non-negative steps."""
    if n_samples < 10_000:
        raise ParameterError("use at least 10^4 samples")
    if not spec.non_negative:
        raise ParameterError("the lower bound needs steps supported on the non-negative integers")
    m, w = spec.step_mean, spec.step_variance
    if not m > 0:
        raise ParameterError(f"the lower bound needs a positive step mean, got {m}")
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    xm = float(x.max(initial=0))
    if xm <= 0:
        raise ParameterError("need |x|_inf >= 1")
    bound = math.sqrt(m * xm) - w / m**1.5 / math.sqrt(xm)
    mean, se = _mean_se(np.sqrt(_max_samples(x, spec, n_samples, r)))
    verdict = PASS if mean >= bound - GUARD * se - _ROUNDING * max(1.0, abs(bound)) else FAIL
    return CheckResult("bound_max_sqrt", {"x": x.tolist(), "walk": spec.to_record(), "n_samples": n_samples},
                       mean, bound, se, verdict)


def tstar_gap_means(initial_grid, params: ModelParams, n_samples: int, r: RngStream):
    """Means and standard errors of ``T* - tau_max`` per starting vector.

    State ``i`` draws from ``r.spawn("tstar-gap", i)``, so two calls with the
    same stream and grid but different loads are coupled.
    """
    means, ses = [], []
    for i, a0 in enumerate(initial_grid):
        batch = sample_cycles(a0, n_samples, params, r.spawn("tstar-gap", i))
        m, se = _mean_se(batch.t_star - batch.tau_max)
        means.append(m)
        ses.append(se)
    return np.array(means), np.array(ses)


def _weighted_slope(x, y, se):
    x, y, se = (np.asarray(v, dtype=float) for v in (x, y, se))
    w = 1.0 / np.maximum(se, 1e-12) ** 2
    xb = np.sum(w * x) / np.sum(w)
    sxx = np.sum(w * (x - xb) ** 2)
    slope = np.sum(w * (x - xb) * y) / sxx
    return float(slope), float(math.sqrt(1.0 / sxx))


def verify_tstar_gap(initial_grid, params: ModelParams, n_samples: int, r: RngStream) -> CheckResult:
    """No growth of E_a(T* - tau_max) with the size of ``a`` (infinite beta).

    The statistic is the weighted slope of the per-state means against
    ``log |a|_inf``; the check passes when it is at most ``GUARD``
    standard errors above 0.  ``details["max_mean_gap"]`` holds the largest
    mean over the grid.
    """
    if not params.infinite_beta:
        raise ParameterError("the gap check is stated for infinite beta")
    grid = [tuple(int(v) for v in a) for a in initial_grid]
    means, ses = tstar_gap_means(grid, params, n_samples, r)
    sizes = np.array([max(a) for a in grid], dtype=float)
    details = {"means": means.tolist(), "stderrs": ses.tolist(), "max_mean_gap": float(means.max())}
    info = {"grid": grid, "rho": params.rho, "R": params.R, "n_samples": n_samples}
    if np.unique(sizes[sizes > 0]).size < 2:
        return CheckResult("tstar_gap", info, math.nan, 0.0, math.nan, INCONCLUSIVE, details)
    keep = sizes > 0
    slope, se = _weighted_slope(np.log(sizes[keep]), means[keep], ses[keep])
    verdict = PASS if slope <= GUARD * se else FAIL
    return CheckResult("tstar_gap", info, slope, 0.0, se, verdict, details)


def verify_hitting_time_mean(a: int, params: ModelParams, n_samples: int, r: RngStream) -> CheckResult:
    """Mean first emptying time of an active queue from ``a`` against ``a / (1 - E xi)``."""
    if a < 1:
        raise ParameterError("start from at least one packet")
    m = params.xi.mean
    if not m < 1:
        raise ParameterError("the identity needs E(xi) < 1")
    inf_params = replace(params, beta=math.inf)
    batch = sample_cycles((a,) * params.R, n_samples, inf_params, r)
    mean, se = _mean_se(batch.tau[:, 0])
    target = a / (1.0 - m)
    verdict = PASS if abs(mean - target) <= GUARD * se else FAIL
    return CheckResult("hitting_time_mean", {"a": a, "xi": params.xi, "n_samples": n_samples},
                       mean, target, se, verdict)


# ------------------------------------------------------------------ drift


def estimate_drift(a: int, params: ModelParams, n_samples: int, r: RngStream) -> DriftEstimate:
    """Half the mean one-slot change of a queue that is active half the time.

    ``2 * drift = E(xi) + E(active change from a)``; ``heuristic`` is
    ``rho - 1 + E(zeta) psi(a)``.
    """
    if a < 1:
        raise ParameterError("the drift is defined for a >= 1")
    n = int(n_samples)
    xi = sample(params.xi, r.substream("xi"), size=n)
    y = a + xi - 1
    if params.infinite_beta:
        released = y == 0
    else:
        released = r.substream("release").random(n) < (1.0 + y) ** (-params.beta)
    z = sample(params.zeta, r.substream("zeta"), size=n)
    change = xi - 1 + np.where(released & (y > 0), z, 0)
    half = 0.5 * (params.xi.mean + change)
    mean, se = _mean_se(half)
    psi_a = 0.0 if params.infinite_beta else (1.0 + a) ** (-params.beta)
    heuristic = 0.5 * (params.rho - 1.0 + params.zeta.mean * psi_a)
    return DriftEstimate(drift=mean, stderr=se, heuristic=heuristic)


def drift_root(params: ModelParams, n_samples: int, r: RngStream, a_max: int = 10**12) -> int:
    """Smallest ``a`` at which the Monte-Carlo drift turns negative.

    Every evaluation reuses the same random numbers, which makes the
    estimated drift non-increasing in ``a`` and the bisection well posed.
    """
    if params.infinite_beta:
        return 1

    def d(a):
        return estimate_drift(a, params, n_samples, RngStream(r.master_seed, r.stream_id)).drift

    lo = 1
    if d(lo) < 0:
        return lo
    hi = 2
    while d(hi) >= 0:
        lo, hi = hi, hi * 2
        if hi > a_max:
            raise ParameterError("drift stays non-negative up to a_max")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if d(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return hi


# -------------------------------------------------------- conditioned walk


def _default_walk_xi() -> DistributionSpec:
    return geometric_xi_for_load(1.0)


def _run_conditioned(n, horizon, beta, xi, r, max_tries, n_local=0, keep_path=False):
    if xi.mean >= 1:
        raise ParameterError("conditioning on never returning needs E(1 - xi) > 0")
    if horizon < 1:
        raise ParameterError("horizon must be at least 1")
    beta = float(beta)
    n_rel = np.zeros(n, dtype=np.int64)
    first = np.zeros(n, dtype=np.int64)
    local = np.zeros(n_local, dtype=np.int64)
    path = np.zeros(horizon + 1 if keep_path else 0, dtype=np.int64)
    done, tries = _conditioned_paths(n, int(horizon), *xi.code, beta, _psi_table(beta),
                                     r.substream("xi").generator, r.substream("release").generator,
                                     int(max_tries), n_rel, first, local, keep_path, path)
    acceptance = done / tries if tries else 0.0
    if done < n:
        raise ParameterError(f"acceptance rate below {n / max_tries:.1e} "
                             f"({done} of {n} paths after {tries} tries)")
    return n_rel, first, local, path, acceptance


def sample_conditioned_walk(horizon: int, r: RngStream, xi: DistributionSpec | None = None,
                            min_acceptance: float = 1e-6) -> tuple[np.ndarray, float]:
    """One path ``W(0..horizon)`` of the walk with steps ``1 - xi``, started at 0 and kept >= 1 afterwards.

    Returns the path and the acceptance rate of the rejection sampler.
    """
    xi = _default_walk_xi() if xi is None else xi
    max_tries = int(math.ceil(1.0 / min_acceptance))
    _, _, _, path, acc = _run_conditioned(1, horizon, math.inf, xi, r, max_tries, keep_path=True)
    return path, acc


def conditioned_acceptance(horizon: int, n_samples: int, r: RngStream,
                           xi: DistributionSpec | None = None) -> float:
    """Fraction of unconditioned paths that stay >= 1 up to ``horizon``."""
    xi = _default_walk_xi() if xi is None else xi
    _, _, _, _, acc = _run_conditioned(n_samples, horizon, math.inf, xi, r, 10**9)
    return acc


def local_times(horizon: int, n_samples: int, r: RngStream, levels: int = 51,
                xi: DistributionSpec | None = None) -> np.ndarray:
    """Mean number of visits of the conditioned path to each level ``0 .. levels - 1``."""
    xi = _default_walk_xi() if xi is None else xi
    _, _, local, _, _ = _run_conditioned(n_samples, horizon, math.inf, xi, r, 10**9, n_local=levels)
    return local / n_samples


def release_count_distribution(beta: float, horizon: int, n_samples: int, r: RngStream,
                               xi: DistributionSpec | None = None, tolerance: float = 0.01,
                               n_levels: int = 51) -> ReleaseCounts:
    """Releases advertized along conditioned paths at times ``1 .. horizon``.

    Time 0 is left out: the path sits at 0 there and would always release.
    The run is repeated at twice the horizon on an independent stream; if
    ``P(N > n)`` moves by more than ``max(tolerance, 3 standard errors)``
    for some ``n`` the result is flagged inconclusive.
    """
    if not beta > 1:
        raise ParameterError(f"release counts are finite only for beta > 1, got {beta}")
    xi = _default_walk_xi() if xi is None else xi
    counts, _, local, _, acc = _run_conditioned(n_samples, horizon, beta, xi, r.spawn("horizon", 1),
                                                10**9, n_local=n_levels)
    counts2, _, _, _, _ = _run_conditioned(n_samples, 2 * horizon, beta, xi, r.spawn("horizon", 2), 10**9)
    top = int(max(counts.max(initial=0), counts2.max(initial=0))) + 1
    hist = np.bincount(counts, minlength=top)
    tail = 1.0 - np.cumsum(hist) / n_samples
    tail2 = 1.0 - np.cumsum(np.bincount(counts2, minlength=top)) / n_samples
    se = np.sqrt((tail * (1 - tail) + tail2 * (1 - tail2)) / n_samples)
    shift = np.abs(tail - tail2)
    p0 = hist[0] / n_samples
    return ReleaseCounts(
        beta=float(beta), horizon=int(horizon), histogram=hist, p_zero=float(p0),
        p_zero_stderr=float(math.sqrt(p0 * (1 - p0) / n_samples)),
        tail=tail, tail_doubled=tail2, max_tail_shift=float(shift.max(initial=0.0)),
        inconclusive=bool(np.any(shift > np.maximum(tolerance, GUARD * se))),
        acceptance=float(acc), local_time=local / n_samples, n_samples=int(n_samples))


def _log_bins(k_min: int, horizon: int, bins_per_decade: int = 8) -> np.ndarray:
    n_dec = math.log10(max(horizon, k_min + 1) / k_min)
    edges = np.floor(k_min * 10 ** np.linspace(0, n_dec, max(2, int(n_dec * bins_per_decade) + 1)))
    return np.unique(np.append(edges, horizon + 1)).astype(np.int64)


def _binned_tail_fit(first, horizon: int, k_min: int, method: str = "pmf", min_count: int = 30):
    """Log-log slope of the first-release law over logarithmic bins with >= ``min_count`` events.

    ``pmf`` fits P(B = k); ``hazard`` fits P(B = k | B >= k), which drops the
    survival factor that makes the pmf slope converge slowly for beta near 1.
    """
    first = np.asarray(first)
    n_total = first.size
    finite = first[first != NOT_YET]
    edges = _log_bins(k_min, horizon)
    counts, _ = np.histogram(finite, bins=edges)
    ok = counts >= min_count
    if ok.sum() < 3:
        raise InsufficientDataError(f"only {int(ok.sum())} bins with at least {min_count} events")
    if method == "pmf":
        rate = counts / np.diff(edges) / n_total
    elif method == "hazard":
        # at_risk[k] = paths with no release before k (censored paths stay at risk up to the horizon)
        released_by = np.cumsum(np.bincount(finite, minlength=horizon + 2))
        at_risk = n_total - np.concatenate([[0], released_by[:-1]])
        exposure = np.array([at_risk[lo:hi].sum() for lo, hi in zip(edges[:-1], edges[1:])], dtype=float)
        rate = counts / np.maximum(exposure, 1.0)
    else:
        raise ValueError(f"method must be 'pmf' or 'hazard', got {method!r}")
    centers = np.sqrt(edges[:-1] * np.maximum(edges[1:] - 1, edges[:-1]))
    fit = stats.linregress(np.log(centers[ok]), np.log(rate[ok]))
    return -float(fit.slope), float(fit.stderr)


def tail_exponent_B(beta: float, horizon: int, n_samples: int, r: RngStream,
                    xi: DistributionSpec | None = None, k_min: int = 8,
                    method: str = "pmf") -> TailEstimate:
    """Power-law exponent of the first release time B along the conditioned walk.

    Paths without a release before ``horizon`` are censored.  ``method``
    selects the fitted quantity, see `_binned_tail_fit`.
    """
    if not 1 < beta <= 2:
        raise ParameterError(f"tail fit is set up for beta in (1, 2], got {beta}")
    xi = _default_walk_xi() if xi is None else xi
    _, first, _, _, _ = _run_conditioned(n_samples, horizon, beta, xi, r, 10**9)
    n_finite = int(np.count_nonzero(first != NOT_YET))
    if n_finite < 100:
        raise InsufficientDataError(f"only {n_finite} finite first-release times")
    exponent, se = _binned_tail_fit(first, horizon, k_min, method)
    return TailEstimate(exponent_hat=exponent, stderr=se, n_samples=n_finite,
                        truncation_horizon=int(horizon))


# ------------------------------------------------------- A(T*) scaling


def scaling_of_A_at_Tstar(beta: float, a1_grid, n_samples: int, r: RngStream,
                          rho: float = 0.99, R: int = 2,
                          params: ModelParams | None = None) -> ScalingEstimate:
    """Log-log slope of E(A_1(T*)) against the symmetric starting level ``a1``.

    Both queues of the active group start at ``a1``; the estimate averages
    the R (exchangeable) final lengths per cycle.  Infinite beta leaves
    every queue empty at the switch and is reported as degenerate.
    """
    if params is None:
        params = ModelParams.standard(rho, beta=beta, R=R)
    grid = tuple(int(a) for a in a1_grid)
    if params.infinite_beta:
        return ScalingEstimate(math.nan, math.nan, grid, (0.0,) * len(grid), (0.0,) * len(grid), True)
    means, ses = [], []
    for i, a1 in enumerate(grid):
        batch = sample_cycles((a1,) * params.R, n_samples, params, r.spawn("a-scaling", i))
        m, se = _mean_se(batch.a_final.mean(axis=1))
        means.append(m)
        ses.append(se)
    means, ses = np.array(means), np.array(ses)
    if np.any(means <= 0):
        return ScalingEstimate(math.nan, math.nan, grid, tuple(means), tuple(ses), True)
    slope, se = _weighted_slope(np.log(grid), np.log(means), ses / means)
    return ScalingEstimate(slope, se, grid, tuple(means.tolist()), tuple(ses.tolist()))
