"""Slot dynamics of the two-group model and its chain embedded at switching times.

One group of R queues is active at a time.  In every slot each active queue
receives a geometric-like number of packets, serves one if it was non-empty,
and then tosses a coin: it advertizes a release with probability
``psi(a) = (1 + a) ** -beta`` where ``a`` is its length at the end of the
slot.  A non-empty queue that advertizes pays an extra ``zeta`` jump.  The
first slot at whose end every active queue advertizes is the switching time
``T*``; the groups then swap roles.  Inactive queues only accumulate
arrivals.

The heavy lifting is done in numba kernels that take numpy ``Generator``
objects, one per role:

* ``xi``       arrivals of the active queues, R draws per slot in queue order
* ``release``  the release coins (not used when ``beta`` is infinite)
* ``zeta``     release costs, drawn only when a non-empty queue releases
* ``arrivals`` inactive-side arrivals, sampled as a sum over the whole cycle
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator

import numba
import numpy as np

from .distributions import (
    DistributionSpec,
    ParameterError,
    RngStream,
    draw,
    draw_sum,
    geometric_xi_for_load,
    point_mass,
    sample,
)

DEFAULT_CYCLE_CAP = 10**9
NOT_YET = -1

_OK, _DIVERGED, _STOPPED = 0, 1, 2


class DivergedCycleError(RuntimeError):
    """A cycle exceeded the slot cap before every active queue released at once."""

    def __init__(self, message, record=None, epoch=None):
        super().__init__(message)
        self.record = record
        self.epoch = epoch


@dataclass(frozen=True)
class ModelParams:
    """R queues per group, release exponent beta, arrival law xi, release cost zeta.

    ``instant_empty_switch`` only matters for beta = inf.  When True (the
    default) an active group that is empty at the start of a cycle switches
    at once, with T* = 0.  Together with A(T*) = 0 this makes the all-empty
    state absorbing for the embedded chain.  When False such a group runs
    slots like any other and switches at the first slot end k >= 1 where all
    its queues are empty, which keeps the chain irreducible.
    """

    R: int
    beta: float
    xi: DistributionSpec
    zeta: DistributionSpec
    instant_empty_switch: bool = True

    def __post_init__(self):
        if int(self.R) != self.R or self.R < 2:
            raise ParameterError(f"need at least two queues per group, got R={self.R}")
        object.__setattr__(self, "R", int(self.R))
        beta = float(self.beta)
        if not beta > 0:
            raise ParameterError(f"beta must be positive, got {self.beta}")
        object.__setattr__(self, "beta", beta)

    @classmethod
    def standard(cls, rho: float, beta: float = 2.0, R: int = 2,
                 instant_empty_switch: bool = True) -> "ModelParams":
        """Geometric arrivals with load ``rho`` and unit release cost."""
        return cls(R=R, beta=beta, xi=geometric_xi_for_load(rho), zeta=point_mass(1),
                   instant_empty_switch=instant_empty_switch)

    @property
    def rho(self) -> float:
        return 2.0 * self.xi.mean

    @property
    def infinite_beta(self) -> bool:
        return math.isinf(self.beta)

    def with_rho(self, rho: float) -> "ModelParams":
        return replace(self, xi=geometric_xi_for_load(rho))

    def to_record(self) -> dict:
        return {
            "R": self.R,
            "beta": "inf" if self.infinite_beta else self.beta,
            "xi": self.xi.to_record(),
            "zeta": self.zeta.to_record(),
            "instant_empty_switch": self.instant_empty_switch,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ModelParams":
        return cls(
            R=rec["R"],
            beta=float(rec["beta"]),
            xi=DistributionSpec.from_record(rec["xi"]),
            zeta=DistributionSpec.from_record(rec["zeta"]),
            instant_empty_switch=bool(rec.get("instant_empty_switch", True)),
        )


@dataclass(frozen=True)
class SystemState:
    """Queue lengths just after a switch: ``active`` (Q^a) and ``inactive`` (Q^i)."""

    active: tuple[int, ...]
    inactive: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(v) for v in self.active)
        i = tuple(int(v) for v in self.inactive)
        if len(a) != len(i):
            raise ParameterError("active and inactive vectors must have the same length")
        if min(a + i, default=0) < 0:
            raise ParameterError("queue lengths must be non-negative")
        object.__setattr__(self, "active", a)
        object.__setattr__(self, "inactive", i)

    @classmethod
    def empty(cls, R: int) -> "SystemState":
        return cls((0,) * R, (0,) * R)

    @property
    def total(self) -> int:
        return sum(self.active) + sum(self.inactive)


@dataclass
class CycleRecord:
    """Observables of one switching cycle started from ``a0``.

    ``tau[r]`` is the first slot at whose end queue r is empty (0 if it
    starts empty, ``NOT_YET`` if it never empties before the switch).
    ``idle_slots[r]`` counts slots that queue r started empty, i.e. slots in
    which it had nothing to serve.
    """

    a0: np.ndarray
    t_star: int
    tau: np.ndarray
    a_final: np.ndarray
    s_final: np.ndarray
    idle_slots: np.ndarray
    release_events: int
    arrivals: int = 0
    departures: int = 0
    zeta_added: int = 0

    @property
    def tau_max(self) -> int:
        seen = self.tau[self.tau != NOT_YET]
        return int(seen.max()) if seen.size else NOT_YET

    @property
    def tau_min(self) -> int:
        seen = self.tau[self.tau != NOT_YET]
        return int(seen.min()) if seen.size else NOT_YET


@dataclass
class CycleBatch:
    """Independent cycles from a common starting vector, stored column-wise."""

    a0: np.ndarray
    t_star: np.ndarray
    tau: np.ndarray
    a_final: np.ndarray
    idle_slots: np.ndarray
    release_events: np.ndarray

    def __len__(self):
        return len(self.t_star)

    @property
    def tau_max(self) -> np.ndarray:
        return np.where(self.tau == NOT_YET, -1, self.tau).max(axis=1)

    @property
    def tau_min(self) -> np.ndarray:
        big = np.iinfo(np.int64).max
        m = np.where(self.tau == NOT_YET, big, self.tau).min(axis=1)
        return np.where(m == big, NOT_YET, m)


@dataclass
class ChainResult:
    """Trajectory of the embedded chain.

    ``norms[k]`` is the total number of packets just after the k-th switch
    (``norms[0]`` is the initial state).  Per-cycle arrays have one entry
    per completed switch.  Vector-valued fields are only filled when the
    chain was run with ``full=True``.
    """

    params: ModelParams
    norms: np.ndarray
    t_star: np.ndarray
    tau_max: np.ndarray
    tau_min: np.ndarray
    release_events: np.ndarray
    active: np.ndarray | None = None
    inactive: np.ndarray | None = None
    tau: np.ndarray | None = None
    a_final: np.ndarray | None = None
    s_final: np.ndarray | None = None
    idle_slots: np.ndarray | None = None
    stopped: bool = False

    @property
    def n_epochs(self) -> int:
        return len(self.t_star)

    @property
    def final_state(self) -> SystemState | None:
        if self.active is None:
            return None
        return SystemState(self.active[-1], self.inactive[-1])


def psi(a, beta: float):
    """Release probability ``(1 + a) ** -beta``; the indicator of ``a == 0`` for infinite beta."""
    if np.ndim(a) == 0:
        if math.isinf(beta):
            return 1.0 if a == 0 else 0.0
        return (1.0 + a) ** (-beta)
    a = np.asarray(a, dtype=float)
    if math.isinf(beta):
        return (a == 0).astype(float)
    return (1.0 + a) ** (-beta)


def slot_transition(a: int, xi: int, u: float, zeta: int, beta: float) -> tuple[int, bool]:
    """One active slot with the randomness supplied explicitly.

    ``u`` is ignored for infinite beta (release iff the queue ends empty) and
    ``zeta`` only matters when a non-empty queue releases.
    """
    y = a + xi - (1 if a > 0 else 0)
    if math.isinf(beta):
        released = y == 0
    else:
        released = u < psi(y, beta)
    if released and y > 0:
        y += zeta
    return y, released


def active_slot_step(a: int, params: ModelParams, r: RngStream) -> tuple[int, bool]:
    """Advance a single active queue by one slot, consuming ``r``'s role substreams."""
    x = sample(params.xi, r.substream("xi"))
    y = a + x - (1 if a > 0 else 0)
    if params.infinite_beta:
        released = y == 0
    else:
        released = bool(r.substream("release").random() < psi(y, params.beta))
    if released and y > 0:
        y += sample(params.zeta, r.substream("zeta"))
    return y, released


@numba.njit(cache=True)
def _psi(y, beta):
    if y == 0:
        return 1.0
    if beta == np.inf:
        return 0.0
    return (1.0 + y) ** (-beta)


@numba.njit(cache=True)
def _fill_psi(beta, out):
    for y in range(out.shape[0]):
        out[y] = _psi(y, beta)


_PSI_TABLE_SIZE = 1 << 18
_psi_tables: dict = {}


def _psi_table(beta: float) -> np.ndarray:
    """Precomputed release probabilities for small lengths (pow dominates the slot cost)."""
    tab = _psi_tables.get(beta)
    if tab is None:
        tab = np.empty(0 if math.isinf(beta) else _PSI_TABLE_SIZE)
        _fill_psi(beta, tab)
        _psi_tables[beta] = tab
    return tab


@numba.njit(cache=True)
def _cycle(a, beta, ptab, instant, xk, xa, xb, zk, za, zb, g_xi, g_u, g_zeta, cap,
           tau, idle, flows, rec_active, rec_rel):
    """Run one cycle in place on ``a``; returns (t_star, releases, status).

    ``flows`` receives (active arrivals, departures, zeta added).  When
    ``rec_active`` has rows, per-slot lengths and release flags are stored
    until it is full.
    """
    R = a.shape[0]
    inf_beta = beta == np.inf
    n_rec = rec_active.shape[0]
    n_tab = ptab.shape[0]
    releases = 0
    arrivals = 0
    departures = 0
    zeta_added = 0
    all_empty = True
    for r in range(R):
        idle[r] = 0
        if a[r] == 0:
            tau[r] = 0
        else:
            tau[r] = -1
            all_empty = False
    if inf_beta and all_empty and instant:
        flows[0] = 0
        flows[1] = 0
        flows[2] = 0
        return 0, 0, 0
    k = 0
    status = 0
    while True:
        k += 1
        everyone = True
        for r in range(R):
            x = draw(g_xi, xk, xa, xb)
            arrivals += x
            ar = a[r]
            if ar > 0:
                y = ar + x - 1
                departures += 1
            else:
                y = x
                idle[r] += 1
            if inf_beta:
                rel = y == 0
            else:
                p = ptab[y] if y < n_tab else _psi(y, beta)
                rel = g_u.random() < p
            if rel:
                releases += 1
                if y > 0:
                    j = draw(g_zeta, zk, za, zb)
                    y += j
                    zeta_added += j
            else:
                everyone = False
            a[r] = y
            if y == 0 and tau[r] < 0:
                tau[r] = k
            if k <= n_rec:
                rec_active[k - 1, r] = y
                rec_rel[k - 1, r] = rel
        if everyone:
            break
        if k >= cap:
            status = 1
            break
    flows[0] = arrivals
    flows[1] = departures
    flows[2] = zeta_added
    return k, releases, status


@numba.njit(cache=True)
def _cycle_batch(a0, n, beta, ptab, instant, xk, xa, xb, zk, za, zb, g_xi, g_u, g_zeta, cap,
                 t_star, tau, a_final, idle, releases):
    R = a0.shape[0]
    a = np.empty(R, dtype=np.int64)
    flows = np.zeros(3, dtype=np.int64)
    rec_a = np.zeros((0, R), dtype=np.int64)
    rec_r = np.zeros((0, R), dtype=np.bool_)
    for i in range(n):
        a[:] = a0
        t, rel, status = _cycle(a, beta, ptab, instant, xk, xa, xb, zk, za, zb, g_xi, g_u, g_zeta, cap,
                                tau[i], idle[i], flows, rec_a, rec_r)
        t_star[i] = t
        releases[i] = rel
        a_final[i, :] = a
        if status != 0:
            return i, status
    return n, 0


@numba.njit(cache=True)
def _chain(qa, qi, n, beta, ptab, instant, xk, xa, xb, zk, za, zb, g_xi, g_u, g_zeta, g_s, cap,
           stop_above, full, norms, t_star, tau_max, tau_min, releases,
           act, inact, tau_all, a_fin, s_fin, idle_all, last_start, last_tau, last_idle, last_flows):
    """Iterate the embedded chain for up to ``n`` switches, updating qa/qi in place."""
    R = qa.shape[0]
    tau = np.empty(R, dtype=np.int64)
    idle = np.empty(R, dtype=np.int64)
    rec_a = np.zeros((0, R), dtype=np.int64)
    rec_r = np.zeros((0, R), dtype=np.bool_)
    s = np.empty(R, dtype=np.int64)
    total = np.int64(0)
    for r in range(R):
        total += qa[r] + qi[r]
    norms[0] = total
    if full:
        act[0, :] = qa
        inact[0, :] = qi
    for e in range(n):
        last_start[:] = qa
        t, rel, status = _cycle(qa, beta, ptab, instant, xk, xa, xb, zk, za, zb, g_xi, g_u, g_zeta, cap,
                                tau, idle, last_flows, rec_a, rec_r)
        last_tau[:] = tau
        last_idle[:] = idle
        if status != 0:
            return e, status
        tmax = -1
        tmin = -1
        for r in range(R):
            if tau[r] >= 0:
                if tau[r] > tmax:
                    tmax = tau[r]
                if tmin < 0 or tau[r] < tmin:
                    tmin = tau[r]
        total = 0
        for r in range(R):
            s[r] = draw_sum(g_s, xk, xa, xb, t)
            new_active = qi[r] + s[r]
            qi[r] = qa[r]
            qa[r] = new_active
            total += qa[r] + qi[r]
        norms[e + 1] = total
        t_star[e] = t
        tau_max[e] = tmax
        tau_min[e] = tmin
        releases[e] = rel
        if full:
            act[e + 1, :] = qa
            inact[e + 1, :] = qi
            tau_all[e, :] = tau
            a_fin[e, :] = qi
            s_fin[e, :] = s
            idle_all[e, :] = idle
        if stop_above >= 0 and total > stop_above:
            return e + 1, 2
    return n, 0


def _streams(r: RngStream):
    return (
        r.substream("xi").generator,
        r.substream("release").generator,
        r.substream("zeta").generator,
        r.substream("arrivals").generator,
    )


def _as_vector(a0, R=None) -> np.ndarray:
    a = np.array(a0, dtype=np.int64).reshape(-1)
    if R is not None and a.shape[0] != R:
        raise ParameterError(f"expected {R} queue lengths, got {a.shape[0]}")
    if a.size and a.min() < 0:
        raise ParameterError("queue lengths must be non-negative")
    return a


def run_cycle(a0, params: ModelParams, r: RngStream, cap: int = DEFAULT_CYCLE_CAP,
              record_slots: int = 0):
    """Simulate the active group from ``a0`` until the switching time.

    Returns a `CycleRecord`.  With ``record_slots > 0`` also returns the
    per-slot active lengths and release flags for the first
    ``record_slots`` slots.
    """
    a = _as_vector(a0, params.R)
    start = a.copy()
    g_xi, g_u, g_zeta, g_s = _streams(r)
    R = params.R
    tau = np.empty(R, dtype=np.int64)
    idle = np.empty(R, dtype=np.int64)
    flows = np.zeros(3, dtype=np.int64)
    rec_a = np.zeros((record_slots, R), dtype=np.int64)
    rec_r = np.zeros((record_slots, R), dtype=np.bool_)
    t, rel, status = _cycle(a, params.beta, _psi_table(params.beta), params.instant_empty_switch,
                            *params.xi.code, *params.zeta.code, g_xi, g_u, g_zeta, cap, tau, idle, flows, rec_a, rec_r)
    if status == _OK:
        s = np.array([draw_sum(g_s, *params.xi.code, t) for _ in range(R)], dtype=np.int64)
    else:
        s = np.zeros(R, dtype=np.int64)
    rec = CycleRecord(a0=start, t_star=int(t), tau=tau, a_final=a, s_final=s, idle_slots=idle,
                      release_events=int(rel), arrivals=int(flows[0]),
                      departures=int(flows[1]), zeta_added=int(flows[2]))
    if status != _OK:
        raise DivergedCycleError(f"cycle did not switch within {cap} slots", record=rec)
    if record_slots:
        n = min(t, record_slots)
        return rec, rec_a[:n], rec_r[:n]
    return rec


def sample_cycles(a0, n: int, params: ModelParams, r: RngStream,
                  cap: int = DEFAULT_CYCLE_CAP) -> CycleBatch:
    """``n`` independent cycles, all started from ``a0``."""
    a = _as_vector(a0, params.R)
    R = params.R
    g_xi, g_u, g_zeta, _ = _streams(r)
    t_star = np.zeros(n, dtype=np.int64)
    tau = np.zeros((n, R), dtype=np.int64)
    a_final = np.zeros((n, R), dtype=np.int64)
    idle = np.zeros((n, R), dtype=np.int64)
    releases = np.zeros(n, dtype=np.int64)
    done, status = _cycle_batch(a, n, params.beta, _psi_table(params.beta), params.instant_empty_switch,
                                *params.xi.code, *params.zeta.code, g_xi, g_u, g_zeta, cap, t_star, tau, a_final, idle, releases)
    if status != _OK:
        raise DivergedCycleError(f"cycle {done} did not switch within {cap} slots")
    return CycleBatch(a, t_star, tau, a_final, idle, releases)


def simulate_chain(q0: SystemState, n_switches: int, params: ModelParams, r: RngStream,
                   full: bool = False, stop_above: int | None = None,
                   cap: int = DEFAULT_CYCLE_CAP) -> ChainResult:
    """Run the embedded chain for ``n_switches`` switches and return the trajectory.

    ``stop_above`` ends the run early once the total number of packets
    exceeds it (for transient loads).  Consecutive calls with the same
    stream continue where the previous call stopped.
    """
    if n_switches < 1:
        raise ParameterError("n_switches must be at least 1")
    R = params.R
    qa = _as_vector(q0.active, R)
    qi = _as_vector(q0.inactive, R)
    n = int(n_switches)
    norms = np.zeros(n + 1, dtype=np.int64)
    t_star = np.zeros(n, dtype=np.int64)
    tau_max = np.zeros(n, dtype=np.int64)
    tau_min = np.zeros(n, dtype=np.int64)
    releases = np.zeros(n, dtype=np.int64)
    m = n if full else 0
    act = np.zeros((m + 1 if full else 0, R), dtype=np.int64)
    inact = np.zeros_like(act)
    tau_all = np.zeros((m, R), dtype=np.int64)
    a_fin = np.zeros((m, R), dtype=np.int64)
    s_fin = np.zeros((m, R), dtype=np.int64)
    idle_all = np.zeros((m, R), dtype=np.int64)
    last_start = np.zeros(R, dtype=np.int64)
    last_tau = np.zeros(R, dtype=np.int64)
    last_idle = np.zeros(R, dtype=np.int64)
    last_flows = np.zeros(3, dtype=np.int64)
    g_xi, g_u, g_zeta, g_s = _streams(r)
    done, status = _chain(qa, qi, n, params.beta, _psi_table(params.beta), params.instant_empty_switch,
                          *params.xi.code, *params.zeta.code, g_xi, g_u, g_zeta, g_s, cap,
                          -1 if stop_above is None else int(stop_above), full,
                          norms, t_star, tau_max, tau_min, releases,
                          act, inact, tau_all, a_fin, s_fin, idle_all,
                          last_start, last_tau, last_idle, last_flows)
    if status == _DIVERGED:
        rec = CycleRecord(a0=last_start, t_star=cap, tau=last_tau,
                          a_final=qa.copy(), s_final=np.zeros(R, dtype=np.int64),
                          idle_slots=last_idle, release_events=0,
                          arrivals=int(last_flows[0]), departures=int(last_flows[1]),
                          zeta_added=int(last_flows[2]))
        raise DivergedCycleError(
            f"cycle at epoch {done} did not switch within {cap} slots", record=rec, epoch=done)
    k = done
    res = ChainResult(params=params, norms=norms[: k + 1], t_star=t_star[:k],
                      tau_max=tau_max[:k], tau_min=tau_min[:k], release_events=releases[:k],
                      stopped=status == _STOPPED)
    if full:
        res.active = act[: k + 1]
        res.inactive = inact[: k + 1]
        res.tau = tau_all[:k]
        res.a_final = a_fin[:k]
        res.s_final = s_fin[:k]
        res.idle_slots = idle_all[:k]
    return res


def embedded_step(q: SystemState, params: ModelParams, r: RngStream) -> tuple[SystemState, CycleRecord]:
    """One switch of the embedded chain: new active = old inactive + S(T*), new inactive = A(T*)."""
    rec = run_cycle(q.active, params, r)
    nxt = SystemState(tuple(np.asarray(q.inactive) + rec.s_final), tuple(rec.a_final))
    return nxt, rec


def run_chain(q0: SystemState, n_switches: int, params: ModelParams, r: RngStream,
              block: int = 4096) -> Iterator[tuple[SystemState, CycleRecord]]:
    """Yield ``(state after switch k, record of cycle k)`` for k = 0 .. n_switches - 1.

    Streams are consumed exactly as by repeated `embedded_step` calls, so the
    two agree draw for draw.
    """
    if n_switches < 1:
        raise ParameterError("n_switches must be at least 1")
    state = q0
    remaining = int(n_switches)
    offset = 0
    while remaining:
        m = min(block, remaining)
        try:
            res = simulate_chain(state, m, params, r, full=True)
        except DivergedCycleError as exc:
            exc.epoch = offset + (exc.epoch or 0)
            raise
        for k in range(m):
            rec = CycleRecord(a0=res.active[k].copy(), t_star=int(res.t_star[k]),
                              tau=res.tau[k].copy(), a_final=res.a_final[k].copy(),
                              s_final=res.s_final[k].copy(), idle_slots=res.idle_slots[k].copy(),
                              release_events=int(res.release_events[k]))
            yield SystemState(res.active[k + 1], res.inactive[k + 1]), rec
        state = res.final_state
        remaining -= m
        offset += m


@dataclass
class TraceRows:
    """Per-slot queue lengths for consecutive cycles, one row per (slot, queue)."""

    slot: np.ndarray
    queue: np.ndarray
    group: np.ndarray
    length: np.ndarray
    released: np.ndarray
    switch_slots: list = field(default_factory=list)

    def __len__(self):
        return len(self.slot)


def trace_cycles(q0: SystemState, n_cycles: int, params: ModelParams, r: RngStream,
                 max_slots: int = 1_000_000) -> TraceRows:
    """Slot-level lengths of all 2R queues over ``n_cycles`` consecutive cycles.

    Queues 0..R-1 form group 1 and R..2R-1 form group 2; group 1 starts
    active.  Inactive-side arrivals are drawn slot by slot here, so a traced
    run does not consume its streams like an untraced one.
    """
    R = params.R
    state = q0
    groups = [0, 1]  # physical group of the (active, inactive) roles
    slot_base = 0
    cols = {k: [] for k in ("slot", "queue", "group", "length", "released")}
    switches = []
    arrivals = r.substream("arrivals")
    slot_ids = np.arange(R)
    for _ in range(n_cycles):
        budget = max_slots - slot_base
        if budget <= 0:
            raise ParameterError(f"trace window exceeds {max_slots} slots")
        try:
            rec, act, rel = run_cycle(state.active, params, r, cap=budget, record_slots=budget)
        except DivergedCycleError as exc:
            raise ParameterError(f"trace window exceeds {max_slots} slots") from exc
        t = rec.t_star
        s_path = np.cumsum(sample(params.xi, arrivals, size=(t, R)), axis=0) if t else np.zeros((0, R), dtype=np.int64)
        inact = np.asarray(state.inactive) + s_path
        slots = slot_base + 1 + np.arange(t)
        ga, gi = groups
        for lengths, flags, g in ((act, rel, ga), (inact, np.zeros_like(rel), gi)):
            cols["slot"].append(np.repeat(slots, R))
            cols["queue"].append(np.tile(slot_ids + g * R, t))
            cols["group"].append(np.full(t * R, g + 1))
            cols["length"].append(lengths.reshape(-1))
            cols["released"].append(flags.reshape(-1).astype(np.int8))
        slot_base += t
        switches.append(slot_base)
        new_active = tuple(inact[-1]) if t else state.inactive
        state = SystemState(new_active, tuple(rec.a_final))
        groups = groups[::-1]
    out = {k: np.concatenate(v) if v else np.zeros(0, dtype=np.int64) for k, v in cols.items()}
    order = np.lexsort((out["queue"], out["slot"]))
    return TraceRows(**{k: v[order] for k, v in out.items()}, switch_slots=switches)
