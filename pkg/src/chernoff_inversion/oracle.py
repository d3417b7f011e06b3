"""Independent checks that emitted thresholds really are conservative.

Identical trials are checked against the exact binomial tail, summed in log
space so that probabilities far below the double-precision underflow of the
individual terms are still resolved. Heterogeneous trials fall back to a
seeded Monte Carlo estimate.

Simulation draws come from Philox, a counter-based generator. Replications
are cut into fixed blocks and block ``b`` is keyed by ``(seed, b)``, so the
merged count does not depend on how blocks are spread over workers.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binom

from .errors import DomainError, InfeasibleBoundError
from .exponents import ExponentKind, Method
from .intervals import Side
from .inversion import DEFAULT_TOL, beta_from, invert

MAX_EXACT_TERMS = 10 ** 8
_BLOCK_REPS = 1 << 16
# cap on uniforms drawn per block for heterogeneous models
_BLOCK_DRAWS = 1 << 22
_PMF_FLOOR = 1e-290
# terms more than this far below the largest log term are left unrefined
_REFINE_WINDOW = 60.0


@dataclass(frozen=True, eq=False)
class TrialModel:
    """Independent 0/1 trials: either ``n`` copies of ``p`` or explicit ``probs``."""

    n: int
    p: float | None = None
    probs: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"need at least one trial, got n={self.n}")
        if (self.p is None) == (self.probs is None):
            raise ValueError("supply exactly one of p or probs")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p!r}")
        if self.probs is not None:
            probs = np.asarray(self.probs, dtype=float)
            if probs.shape != (self.n,):
                raise ValueError("probs must be a 1-d sequence of length n")
            if np.any((probs < 0) | (probs > 1)) or not np.all(np.isfinite(probs)):
                raise DomainError("every success probability must lie in [0, 1]")
            object.__setattr__(self, "probs", probs)

    @classmethod
    def identical(cls, n: int, p: float) -> "TrialModel":
        return cls(n=int(n), p=float(p))

    @classmethod
    def heterogeneous(cls, probs) -> "TrialModel":
        probs = np.asarray(probs, dtype=float)
        return cls(n=len(probs), probs=probs)

    @property
    def is_identical(self) -> bool:
        return self.p is not None

    @property
    def mean(self) -> float:
        if self.is_identical:
            return self.n * self.p
        return math.fsum(self.probs)

    def check_mean(self, mu: float, tol: float = 1e-9) -> None:
        if abs(self.mean - mu) > tol * max(1.0, abs(mu)):
            raise ValueError(f"model mean {self.mean!r} does not match mu={mu!r}")


@dataclass(frozen=True)
class TailCheckReport:
    requested_gamma: float
    achieved_probability: float
    conservative: bool | None
    side: Side
    method: Method
    threshold: int
    delta: float
    std_error: float | None = None

    @property
    def exact(self) -> bool:
        return self.std_error is None


def _check_binomial(n, p, k, lo, hi):
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    if not lo <= k <= hi:
        raise DomainError(f"k={k} outside [{lo}, {hi}]")


def _log_sum(n, p, start, stop):
    """log of sum of binomial pmf over i in [start, stop)."""
    if stop - start > MAX_EXACT_TERMS:
        raise DomainError(f"exact tail capped at {MAX_EXACT_TERMS} terms; use simulation")
    i = np.arange(start, stop, dtype=np.int64)
    # binom.logpmf never underflows but loses ~1e-9 relative near the mode for
    # large n; binom.pmf is accurate to ~1e-14 where representable. Refine the
    # terms that matter with the latter.
    logs = binom.logpmf(i, n, p)
    top = logs.max()
    if top == -np.inf:
        return -np.inf
    near = np.flatnonzero(logs > top - _REFINE_WINDOW)
    pmf = binom.pmf(i[near], n, p)
    ok = pmf > _PMF_FLOOR
    logs[near[ok]] = np.log(pmf[ok])
    top = logs.max()
    return top + math.log(np.exp(logs - top).sum())


def binomial_tail_upper(n: int, p: float, k: int) -> float:
    """P(X >= k) for X ~ Binomial(n, p)."""
    _check_binomial(n, p, k, 0, n + 1)
    if k == 0:
        return 1.0
    if k == n + 1 or p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    return min(1.0, math.exp(_log_sum(n, p, k, n + 1)))


def binomial_tail_lower(n: int, p: float, k: int) -> float:
    """P(X <= k) for X ~ Binomial(n, p)."""
    _check_binomial(n, p, k, -1, n)
    if k == n:
        return 1.0
    if k == -1 or p == 1.0:
        return 0.0
    if p == 0.0:
        return 1.0
    return min(1.0, math.exp(_log_sum(n, p, 0, k + 1)))


def _block_layout(model: TrialModel, reps: int) -> list[tuple[int, int]]:
    size = _BLOCK_REPS if model.is_identical else max(1, min(_BLOCK_REPS, _BLOCK_DRAWS // model.n))
    return [(b, min(size, reps - b * size)) for b in range(-(-reps // size))]


def _count_block(model, threshold, upper, seed, block, count):
    gen = np.random.Generator(np.random.Philox(key=(block << 64) | seed))
    if model.is_identical:
        sums = gen.binomial(model.n, model.p, size=count)
    else:
        sums = (gen.random((count, model.n)) < model.probs).sum(axis=1)
    hits = sums >= threshold if upper else sums <= threshold
    return int(np.count_nonzero(hits))


def simulate_tail_frequency(model: TrialModel, threshold: float, side: Side, reps: int,
                            seed: int, workers: int = 1) -> tuple[float, float]:
    """Fraction of ``reps`` simulated sums at or beyond ``threshold`` and its standard error."""
    if side not in (Side.UPPER, Side.LOWER):
        raise ValueError("side must be UPPER or LOWER")
    if reps < 1:
        raise ValueError("reps must be positive")
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if workers < 1:
        raise ValueError("workers must be positive")
    upper = side is Side.UPPER
    blocks = _block_layout(model, reps)

    def run(item):
        return _count_block(model, threshold, upper, seed, *item)

    if workers == 1:
        hits = sum(map(run, blocks))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(run, blocks))
    freq = hits / reps
    return freq, math.sqrt(freq * (1.0 - freq) / reps)


def emitted_threshold(gamma: float, mu: float, method: Method, side: Side,
                      tol: float = DEFAULT_TOL) -> tuple[int, float]:
    """Integer event threshold and deviation for a prediction bound.

    Upper: ``ceil((1 + delta_U) mu)`` so the event is ``X >= threshold``.
    Lower: ``floor((1 - delta_L) mu)`` so the event is ``X <= threshold``.
    """
    upper = side is Side.UPPER
    kind = ExponentKind.for_side(upper, prediction=True)
    result = invert(kind, method, beta_from(mu, gamma), tol)
    if not result.in_domain:
        raise InfeasibleBoundError(
            f"{method.value} delta={result.delta:.6g} outside the validated domain",
            side=side.value)
    if upper:
        return math.ceil((1.0 + result.delta) * mu), result.delta
    return math.floor((1.0 - result.delta) * mu), result.delta


def check_conservative(gamma: float, model: TrialModel, method: Method, side: Side,
                       reps: int = 100_000, seed: int = 0, workers: int = 1) -> TailCheckReport:
    """Evaluate the real tail probability at the threshold a method emits for ``model``.

    Identical-trial models get the exact binomial tail and a hard verdict.
    Heterogeneous models are simulated; the report then carries a standard
    error and ``conservative`` is left as None.
    """
    if side not in (Side.UPPER, Side.LOWER):
        raise ValueError("side must be UPPER or LOWER")
    threshold, delta = emitted_threshold(gamma, model.mean, method, side)
    if model.is_identical:
        n, p = model.n, model.p
        if side is Side.UPPER:
            achieved = binomial_tail_upper(n, p, threshold) if threshold <= n + 1 else 0.0
        else:
            achieved = binomial_tail_lower(n, p, min(threshold, n)) if threshold >= 0 else 0.0
        return TailCheckReport(gamma, achieved, achieved <= gamma, side, method, threshold, delta)
    freq, se = simulate_tail_frequency(model, threshold, side, reps, seed, workers)
    return TailCheckReport(gamma, freq, None, side, method, threshold, delta, se)
