"""Shared fixtures and an independent pure-Python replay of the slot dynamics.

The replay draws from numpy generators in the same order as the compiled
kernels (arrivals of queue 0, coin of queue 0, zeta of queue 0, queue 1, ...),
so on the same keys it must reproduce them exactly.  It is written from the
model definition, not from the kernel code.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from lingering.distributions import RngStream

ACCEPTANCE_LINES: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance-scale test")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def ref_draw(g: np.random.Generator, spec) -> int:
    kind, p = spec.kind, spec.params
    if kind == "geometric":
        return int(g.geometric(p[0])) - 1
    if kind == "point_mass":
        return int(p[0])
    if kind == "bernoulli":
        return int(p[1]) if g.random() < p[0] else 0
    if kind == "poisson":
        return int(g.poisson(p[0]))
    return int(g.zipf(p[0])) - 1


def ref_draw_sum(g: np.random.Generator, spec, n: int) -> int:
    if n <= 0:
        return 0
    kind, p = spec.kind, spec.params
    if kind == "geometric":
        return 0 if p[0] >= 1 else int(g.negative_binomial(n, p[0]))
    if kind == "point_mass":
        return n * int(p[0])
    if kind == "bernoulli":
        return int(p[1]) * int(g.binomial(n, p[0]))
    if kind == "poisson":
        return int(g.poisson(n * p[0]))
    return sum(int(g.zipf(p[0])) - 1 for _ in range(n))


class RefGenerators:
    """The four role generators of a stream, taken from a fresh copy of its key."""

    def __init__(self, r: RngStream):
        fresh = RngStream(r.master_seed, r.stream_id)
        self.xi = fresh.substream("xi").generator
        self.u = fresh.substream("release").generator
        self.zeta = fresh.substream("zeta").generator
        self.s = fresh.substream("arrivals").generator


def ref_cycle(a0, params, gens: RefGenerators):
    """Reference cycle: returns dict of T*, tau, A(T*), per-slot lengths and flows."""
    a = [int(v) for v in a0]
    R = len(a)
    beta = params.beta
    tau = [0 if v == 0 else -1 for v in a]
    idle = [0] * R
    out = {"slots": [], "flags": [], "arrivals": 0, "departures": 0, "zeta": 0, "releases": 0}
    if math.isinf(beta) and params.instant_empty_switch and all(v == 0 for v in a):
        return dict(out, t_star=0, tau=tau, a_final=a, idle=idle)
    k = 0
    while True:
        k += 1
        all_released = True
        flags = []
        for r in range(R):
            x = ref_draw(gens.xi, params.xi)
            out["arrivals"] += x
            if a[r] > 0:
                y = a[r] + x - 1
                out["departures"] += 1
            else:
                y = x
                idle[r] += 1
            if math.isinf(beta):
                released = y == 0
            else:
                released = gens.u.random() < (1.0 + y) ** (-beta)
            if released:
                out["releases"] += 1
                if y > 0:
                    j = ref_draw(gens.zeta, params.zeta)
                    y += j
                    out["zeta"] += j
            else:
                all_released = False
            a[r] = y
            if y == 0 and tau[r] < 0:
                tau[r] = k
            flags.append(released)
        out["slots"].append(list(a))
        out["flags"].append(flags)
        if all_released:
            return dict(out, t_star=k, tau=tau, a_final=list(a), idle=idle)


def ref_chain(q0, n, params, r: RngStream):
    """Reference embedded chain: list of (active, inactive) after each switch, and cycle dicts."""
    gens = RefGenerators(r)
    act, inact = list(q0.active), list(q0.inactive)
    states = [(tuple(act), tuple(inact))]
    cycles = []
    for _ in range(n):
        c = ref_cycle(act, params, gens)
        s = [ref_draw_sum(gens.s, params.xi, c["t_star"]) for _ in act]
        act, inact = [i + v for i, v in zip(inact, s)], list(c["a_final"])
        c["s"] = s
        states.append((tuple(act), tuple(inact)))
        cycles.append(c)
    return states, cycles


@pytest.fixture
def stream():
    return RngStream(20240601, 1)
