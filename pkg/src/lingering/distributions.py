"""Integer-valued jump distributions and keyed random streams.

Every law here lives on the non-negative integers.  A `DistributionSpec` is
an immutable description (kind + parameters) with closed-form moments; the
same distribution can be sampled from Python (``sample``/``sample_sum``) or from the
compiled kernels through its ``code`` triple, which dispatches to the
``draw``/``draw_sum`` jit functions below.  Both paths consume the
underlying bit generator identically, so a Python replay of a kernel run
reproduces it draw for draw.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numba
import numpy as np
from scipy import special

GEOMETRIC, POINT_MASS, BERNOULLI, POISSON, ZETA = range(5)

_KIND_CODES = {
    "geometric": GEOMETRIC,
    "point_mass": POINT_MASS,
    "bernoulli": BERNOULLI,
    "poisson": POISSON,
    "zeta": ZETA,
}
_PARAM_NAMES = {
    "geometric": ("p",),
    "point_mass": ("c",),
    "bernoulli": ("p", "c"),
    "poisson": ("lam",),
    "zeta": ("s",),
}

_MASK64 = (1 << 64) - 1


class ParameterError(ValueError):
    """Raised for out-of-range distribution or model parameters."""


@dataclass(frozen=True)
class DistributionSpec:
    """A law on {0, 1, 2, ...}.

    Kinds and parameters:

    * ``geometric(p)``: P(k) = p (1-p)^k, 0 < p <= 1
    * ``point_mass(c)``: always c (non-negative integer)
    * ``bernoulli(p, c)``: c with probability p, else 0
    * ``poisson(lam)``
    * ``zeta(s)``: P(k) proportional to (k+1)^(-s), s > 2 so the mean is finite
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise ParameterError(f"unknown distribution kind {self.kind!r}")
        names = _PARAM_NAMES[self.kind]
        if len(self.params) != len(names):
            raise ParameterError(f"{self.kind} takes parameters {names}, got {self.params}")
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))
        _validate(self.kind, self.params)

    @property
    def code(self) -> tuple[int, float, float]:
        """(kind code, first parameter, second parameter) for the jit kernels."""
        a = self.params[0]
        b = self.params[1] if len(self.params) > 1 else 0.0
        return _KIND_CODES[self.kind], a, b

    @property
    def mean(self) -> float:
        return moments(self)[0]

    @property
    def variance(self) -> float:
        return moments(self)[1]

    def to_record(self) -> dict:
        rec = {"kind": self.kind}
        rec.update(zip(_PARAM_NAMES[self.kind], self.params))
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "DistributionSpec":
        try:
            kind = rec["kind"]
            names = _PARAM_NAMES[kind]
        except KeyError as exc:
            raise ParameterError(f"bad distribution record {rec!r}") from exc
        extra = set(rec) - {"kind", *names}
        if extra:
            raise ParameterError(f"unexpected keys {sorted(extra)} for {kind}")
        try:
            return cls(kind, tuple(rec[n] for n in names))
        except KeyError as exc:
            raise ParameterError(f"{kind} record missing parameter {exc.args[0]!r}") from exc

    def __repr__(self):
        args = ", ".join(f"{n}={v!r}" for n, v in zip(_PARAM_NAMES[self.kind], self.params))
        return f"{self.kind}({args})"


def _validate(kind, params):
    if kind == "geometric":
        if not 0.0 < params[0] <= 1.0:
            raise ParameterError(f"geometric p must lie in (0, 1], got {params[0]}")
    elif kind == "point_mass":
        c = params[0]
        if c < 0 or c != math.floor(c):
            raise ParameterError(f"point mass must sit on a non-negative integer, got {c}")
    elif kind == "bernoulli":
        p, c = params
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"bernoulli p must lie in [0, 1], got {p}")
        if c < 0 or c != math.floor(c):
            raise ParameterError(f"bernoulli scale must be a non-negative integer, got {c}")
    elif kind == "poisson":
        if not params[0] >= 0.0 or math.isinf(params[0]):
            raise ParameterError(f"poisson rate must be finite and >= 0, got {params[0]}")
    elif kind == "zeta":
        if not params[0] > 2.0:
            raise ParameterError(f"zeta exponent must exceed 2 for a finite mean, got {params[0]}")


def geometric(p: float) -> DistributionSpec:
    return DistributionSpec("geometric", (p,))


def point_mass(c: int) -> DistributionSpec:
    return DistributionSpec("point_mass", (c,))


def bernoulli(p: float, c: int = 1) -> DistributionSpec:
    return DistributionSpec("bernoulli", (p, c))


def poisson(lam: float) -> DistributionSpec:
    return DistributionSpec("poisson", (lam,))


def zeta(s: float) -> DistributionSpec:
    return DistributionSpec("zeta", (s,))


def geometric_xi_for_load(rho: float) -> DistributionSpec:
    """Per-slot arrivals with mean rho/2: geometric with success probability 2/(2+rho)."""
    if not 0.0 < rho < 2.0:
        raise ParameterError(f"load must lie in (0, 2), got {rho}")
    return geometric(2.0 / (2.0 + rho))


def moments(d: DistributionSpec) -> tuple[float, float]:
    """Closed-form (mean, variance); the variance may be ``inf`` for zeta laws."""
    kind, params = d.kind, d.params
    if kind == "geometric":
        p = params[0]
        return (1.0 - p) / p, (1.0 - p) / p**2
    if kind == "point_mass":
        return params[0], 0.0
    if kind == "bernoulli":
        p, c = params
        return c * p, c * c * p * (1.0 - p)
    if kind == "poisson":
        return params[0], params[0]
    s = params[0]
    z = special.zeta(s)
    m1 = special.zeta(s - 1.0) / z  # mean of the unshifted zipf law
    var = special.zeta(s - 2.0) / z - m1 * m1 if s > 3.0 else math.inf
    return m1 - 1.0, var


def pmf(d: DistributionSpec, k) -> np.ndarray:
    """Exact probability mass at the integers ``k``."""
    k = np.asarray(k)
    kind, params = d.kind, d.params
    if kind == "geometric":
        p = params[0]
        return np.where(k >= 0, p * (1.0 - p) ** np.maximum(k, 0), 0.0)
    if kind == "point_mass":
        return (k == params[0]).astype(float)
    if kind == "bernoulli":
        p, c = params
        if c == 0:
            return (k == 0).astype(float)
        return np.where(k == c, p, 0.0) + np.where(k == 0, 1.0 - p, 0.0)
    if kind == "poisson":
        from scipy import stats

        return stats.poisson.pmf(k, params[0])
    s = params[0]
    return np.where(k >= 0, (np.maximum(k, 0) + 1.0) ** (-s) / special.zeta(s), 0.0)


class RngStream:
    """Counter-based random stream keyed by ``(master_seed, stream_id)``.

    The pair is used verbatim as the 128-bit Philox key, so two streams with
    the same key replay the same sequence and streams with different keys
    are independent by construction.  Named substreams are derived on first
    use and cached, so repeated calls through the same parent keep advancing
    the same child.
    """

    def __init__(self, master_seed: int, stream_id: int = 0):
        self.master_seed = int(master_seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        key = np.array([self.master_seed, self.stream_id], dtype=np.uint64)
        self.generator = np.random.Generator(np.random.Philox(key=key))
        self._children: dict = {}

    def __repr__(self):
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"

    def spawn(self, *tags) -> "RngStream":
        """A fresh child stream whose id is a hash of this stream's id and ``tags``."""
        return RngStream(self.master_seed, derive_stream_id(self.stream_id, *tags))

    def substream(self, tag) -> "RngStream":
        """Cached child: the same object is returned for the same tag."""
        child = self._children.get(tag)
        if child is None:
            child = self._children[tag] = self.spawn(tag)
        return child

    def random(self, size=None):
        return self.generator.random(size)


def _tag_to_int(tag) -> int:
    if isinstance(tag, (int, np.integer)):
        return int(tag) & _MASK64
    data = repr(tag).encode() if not isinstance(tag, str) else tag.encode()
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def derive_stream_id(*tags) -> int:
    """Deterministic 64-bit id for an ordered tuple of ints/strings."""
    entropy = [_tag_to_int(t) for t in tags]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def sample(d: DistributionSpec, r: RngStream, size=None):
    """Draw from ``d``; a scalar ``int`` when ``size`` is None."""
    g = r.generator
    kind, params = d.kind, d.params
    if size is None:
        return int(draw(g, *d.code))
    if kind == "geometric":
        out = g.geometric(params[0], size) - 1
    elif kind == "point_mass":
        out = np.full(size, int(params[0]), dtype=np.int64)
    elif kind == "bernoulli":
        out = int(params[1]) * (g.random(size) < params[0])
    elif kind == "poisson":
        out = g.poisson(params[0], size)
    else:
        out = g.zipf(params[0], size) - 1
    return np.asarray(out, dtype=np.int64)


def sample_sum(d: DistributionSpec, n: int, r: RngStream) -> int:
    """Sum of ``n`` independent draws, sampled exactly in O(1) where a closed form exists."""
    return int(draw_sum(r.generator, *d.code, n))


@numba.njit(cache=True)
def draw(rng, kind, a, b):
    if kind == GEOMETRIC:
        return rng.geometric(a) - 1
    if kind == POINT_MASS:
        return np.int64(a)
    if kind == BERNOULLI:
        return np.int64(b) if rng.random() < a else np.int64(0)
    if kind == POISSON:
        return rng.poisson(a)
    return rng.zipf(a) - 1


@numba.njit(cache=True)
def draw_sum(rng, kind, a, b, n):
    if n <= 0:
        return np.int64(0)
    if kind == GEOMETRIC:
        if a >= 1.0:
            return np.int64(0)
        return np.int64(rng.negative_binomial(float(n), a))
    if kind == POINT_MASS:
        return np.int64(n * np.int64(a))
    if kind == BERNOULLI:
        return np.int64(b) * rng.binomial(n, a)
    if kind == POISSON:
        return rng.poisson(n * a)
    total = np.int64(0)
    for _ in range(n):
        total += rng.zipf(a) - 1
    return total
