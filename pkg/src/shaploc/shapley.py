"""Exact, truncated and permutation-sampled Shapley values.

The Shapley value of sensor i is the coalition-weighted average of its
marginal contribution v(S u {i}) - v(S) over all coalitions S that exclude
i.  Coalitions are enumerated as bit masks; the value function is an
abstract callable so the same engine serves the Gaussian anomaly score and
synthetic games alike.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Protocol, runtime_checkable

import numpy as np

from .coalitions import Coalition

MAX_EXACT_SENSORS = 24


class UniverseTooLargeError(ValueError):
    """Exact enumeration refused; use sampled_shapley instead."""


class EmptyKeptSetError(ValueError):
    """The truncation predicate rejected every coalition."""


@runtime_checkable
class ValueFunction(Protocol):
    """Deterministic coalition score; must return 0 on the empty coalition."""

    n: int

    def __call__(self, s: Coalition, x) -> float: ...


class AdditiveValueFunction:
    """Synthetic additive game: score of S is the sum of per-sensor coefficients.

    Ignores the observation argument; useful for exercising the engine on a
    game whose Shapley values are known in closed form (they equal the
    coefficients).
    """

    def __init__(self, coeffs):
        self.a = np.asarray(coeffs, dtype=float)
        if self.a.ndim != 1 or self.a.size == 0:
            raise ValueError("coefficients must be a non-empty vector")
        self.n = self.a.size

    def __call__(self, s: Coalition, x=None) -> float:
        return float(sum(self.a[j] for j in s))


@dataclass(frozen=True)
class ShapleyResult:
    phi: np.ndarray        # one value per sensor
    evaluations: int       # value-function calls made


def shapley_weight(s_card: int, n: int) -> float:
    """Coalition weight |S|! (n-|S|-1)! / n! for a universe of n sensors."""
    if n < 1:
        raise ValueError(f"universe size must be positive, got {n}")
    if not 0 <= s_card <= n - 1:
        raise ValueError(f"coalition cardinality {s_card} out of range for n={n}")
    if n <= 20:
        return math.factorial(s_card) * math.factorial(n - s_card - 1) / math.factorial(n)
    # log-gamma keeps relative error ~1e-15 well within a 1e-12 budget
    return math.exp(
        math.lgamma(s_card + 1) + math.lgamma(n - s_card) - math.lgamma(n + 1)
    )


def _check_universe(n: int) -> None:
    if n > MAX_EXACT_SENSORS:
        raise UniverseTooLargeError(
            f"exact enumeration refuses n={n} > {MAX_EXACT_SENSORS}"
        )


def _subsets_excluding(n: int, i: int):
    """Yield every mask over n bits with bit i clear, via (n-1)-bit counting."""
    low = (1 << i) - 1
    for sub in range(1 << (n - 1)):
        yield ((sub & ~low) << 1) | (sub & low)


def exact_shapley(v: ValueFunction, x, i: int) -> float:
    """Shapley value of sensor i by full coalition enumeration."""
    n = v.n
    _check_universe(n)
    if not 0 <= i < n:
        raise ValueError(f"sensor index {i} out of range for n={n}")
    weights = [shapley_weight(c, n) for c in range(n)]
    bit = 1 << i
    total = 0.0
    for mask in _subsets_excluding(n, i):
        w = weights[mask.bit_count()]
        total += w * (
            v(Coalition(mask | bit, n), x) - v(Coalition(mask, n), x)
        )
    return total


def all_shapley(v: ValueFunction, x) -> ShapleyResult:
    """Shapley values of every sensor, evaluating each coalition once."""
    n = v.n
    _check_universe(n)
    values = np.empty(1 << n)
    for mask in range(1 << n):
        values[mask] = v(Coalition(mask, n), x)
    weights = [shapley_weight(c, n) for c in range(n)]
    phi = np.zeros(n)
    for i in range(n):
        bit = 1 << i
        acc = 0.0
        for mask in _subsets_excluding(n, i):
            acc += weights[mask.bit_count()] * (values[mask | bit] - values[mask])
        phi[i] = acc
    return ShapleyResult(phi=phi, evaluations=1 << n)


def truncated_shapley(
    v: ValueFunction, x, i: int, keep: Callable[[Coalition], bool]
) -> float:
    """Shapley sum restricted to kept coalitions, weights renormalized."""
    n = v.n
    _check_universe(n)
    if not 0 <= i < n:
        raise ValueError(f"sensor index {i} out of range for n={n}")
    weights = [shapley_weight(c, n) for c in range(n)]
    bit = 1 << i
    total = 0.0
    mass = 0.0
    for mask in _subsets_excluding(n, i):
        s = Coalition(mask, n)
        if not keep(s):
            continue
        w = weights[mask.bit_count()]
        total += w * (v(Coalition(mask | bit, n), x) - v(s, x))
        mass += w
    if mass == 0.0:
        raise EmptyKeptSetError("truncation predicate kept no coalition")
    return total / mass


def sampled_shapley(
    v: ValueFunction, x, i: int, permutations: int, rng: np.random.Generator
) -> float:
    """Unbiased permutation-sampling estimate of the Shapley value of i.

    Averages the marginal contribution of i over uniformly random sensor
    orderings; coalition values are memoized within the call.
    """
    n = v.n
    if not 0 <= i < n:
        raise ValueError(f"sensor index {i} out of range for n={n}")
    if permutations < 1:
        raise ValueError("need at least one permutation")
    cache: dict[int, float] = {0: 0.0}

    def val(mask: int) -> float:
        got = cache.get(mask)
        if got is None:
            got = cache[mask] = v(Coalition(mask, n), x)
        return got

    bit = 1 << i
    total = 0.0
    for _ in range(permutations):
        perm = rng.permutation(n)
        pred = 0
        for j in perm:
            if j == i:
                break
            pred |= 1 << int(j)
        total += val(pred | bit) - val(pred)
    return total / permutations
