"""Monte Carlo comparison of the Shapley score against the single-term score.

Each trial draws one clean observation, attacks it with the configured
probability, and scores the sensor under test two ways: the exact Shapley
value phi(x_i) of the Gaussian anomaly score, and the single marginal term
v({i}, x).  Thresholds are then optimized per statistic on the same paired
trials, so their error rates are directly comparable.

Randomness is counter-based: trial j always reads the same slots of a
Philox stream keyed by the experiment seed, so results are reproducible
trial-by-trial and independent of chunking or execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import ndtr, ndtri

from .attacks import AttackSpec, offsets_from_uniforms
from .coalitions import Coalition
from .gaussian import GaussianModel
from .shapley import shapley_weight

Z_95 = 1.96


class DegenerateLabelsError(ValueError):
    """Threshold optimization needs at least one trial of each class."""


@dataclass(frozen=True)
class GridSpec:
    """Equally spaced threshold grid (the fine-grid search mode)."""

    lo: float
    hi: float
    steps: int

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError("grid needs lo < hi")
        if self.steps < 2:
            raise ValueError("grid needs at least 2 steps")


@dataclass(frozen=True)
class ExperimentConfig:
    model: GaussianModel
    attack: AttackSpec
    sensor_under_test: int = 0
    trials: int = 100_000
    attack_prior: float = 0.5
    seed: int = 0
    threshold_mode: GridSpec | str = "exact"  # "exact" or a GridSpec

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not 0.0 < self.attack_prior < 1.0:
            raise ValueError("attack prior must lie strictly inside (0, 1)")
        if not 0 <= self.sensor_under_test < self.model.n:
            raise ValueError(
                f"sensor under test {self.sensor_under_test} out of range"
            )
        if self.attack.targets.n != self.model.n:
            raise ValueError("attack universe does not match the model")
        if isinstance(self.threshold_mode, str) and self.threshold_mode != "exact":
            raise ValueError(f"unknown threshold mode {self.threshold_mode!r}")


@dataclass(frozen=True)
class ScorePair:
    phi_score: float
    v_score: float
    attacked: bool


@dataclass(frozen=True)
class ErrorRateReport:
    statistic: str          # "shapley" or "single-term"
    threshold: float
    pe: float
    ci_halfwidth: float
    trials: int
    # sum of the two conditional error rates at the same threshold; kept
    # alongside the prior-weighted pe because published tables sometimes
    # report this variant instead
    pe_rate_sum: float = field(default=float("nan"))


def binomial_ci(pe: float, m: int) -> float:
    """95% normal-approximation half-width for an empirical proportion."""
    if not 0.0 <= pe <= 1.0:
        raise ValueError("pe must lie in [0, 1]")
    if m < 1:
        raise ValueError("need at least one trial")
    return Z_95 * math.sqrt(pe * (1.0 - pe) / m)


# ----------------------------------------------------------------------
# trial simulation


def _slot_count(config: ExperimentConfig) -> tuple[int, int]:
    """(used slots, padded stride) of uniforms per trial.

    Layout: slot 0 decides attacked/clean, slots 1..n seed the clean draw,
    then one slot per target sensor for the attack offset.  The stride is
    padded to a multiple of 4 because the Philox counter advances in
    four-draw blocks.
    """
    k = 1 + config.model.n + len(config.attack.targets)
    return k, -(-k // 4) * 4


def _trial_uniforms(seed: int, stride: int, start: int, count: int) -> np.ndarray:
    bg = np.random.Philox(key=seed)
    bg.advance(start * stride // 4)
    return np.random.Generator(bg).random((count, stride))


def _simulate_chunk(
    config: ExperimentConfig, start: int, count: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(phi_scores, v_scores, attacked labels) for trials start..start+count-1."""
    model = config.model
    n = model.n
    k, stride = _slot_count(config)
    u = _trial_uniforms(config.seed, stride, start, count)

    attacked = u[:, 0] < config.attack_prior
    z = ndtri(np.clip(u[:, 1 : 1 + n], 1e-300, 1.0))
    xs = model.mean + z @ model.chol.T

    targets = config.attack.targets.indices()
    offsets = offsets_from_uniforms(config.attack, u[:, 1 + n : k])
    for col, j in enumerate(targets):
        xs[attacked, j] += offsets[attacked, col]

    # negative log marginal density of every coalition, vectorized over trials
    values = np.empty((1 << n, count))
    values[0] = 0.0
    for mask in range(1, 1 << n):
        values[mask] = -model.marginal_log_density_batch(Coalition(mask, n), xs)

    i = config.sensor_under_test
    bit = 1 << i
    low = bit - 1
    weights = [shapley_weight(c, n) for c in range(n)]
    phi = np.zeros(count)
    for sub in range(1 << (n - 1)):
        mask = ((sub & ~low) << 1) | (sub & low)
        phi += weights[mask.bit_count()] * (values[mask | bit] - values[mask])
    return phi, values[bit], attacked


def run_trial(config: ExperimentConfig, trial_index: int) -> ScorePair:
    """Score a single trial; a pure function of (config, trial_index)."""
    if not 0 <= trial_index < config.trials:
        raise ValueError(f"trial index {trial_index} out of range")
    phi, v, attacked = _simulate_chunk(config, trial_index, 1)
    return ScorePair(float(phi[0]), float(v[0]), bool(attacked[0]))


def simulate_scores(
    config: ExperimentConfig, chunk: int = 1 << 17
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All trial scores and labels, computed in deterministic chunks."""
    # bound the 2^n x chunk scratch space
    chunk = max(1024, min(chunk, (1 << 24) >> config.model.n))
    phis, vs, labels = [], [], []
    for start in range(0, config.trials, chunk):
        count = min(chunk, config.trials - start)
        p, v, a = _simulate_chunk(config, start, count)
        phis.append(p)
        vs.append(v)
        labels.append(a)
    return np.concatenate(phis), np.concatenate(vs), np.concatenate(labels)


# ----------------------------------------------------------------------
# threshold optimization


def _pairs_to_arrays(pairs: Sequence[ScorePair], statistic: str):
    if statistic == "shapley":
        scores = np.array([p.phi_score for p in pairs])
    elif statistic == "single-term":
        scores = np.array([p.v_score for p in pairs])
    else:
        raise ValueError(f"unknown statistic {statistic!r}")
    labels = np.array([p.attacked for p in pairs], dtype=bool)
    return scores, labels


def _error_curve(scores: np.ndarray, labels: np.ndarray):
    """Sorted scores plus per-cut error counts.

    Cut position c means "the c smallest scores are declared clean"; the
    decision rule is score > threshold.  errors[c] counts misses among the
    first c plus false alarms among the rest; att_below[c] is the miss count
    alone.
    """
    m = scores.size
    if m == 0:
        raise DegenerateLabelsError("no trials to optimize over")
    n_att = int(np.count_nonzero(labels))
    if n_att == 0 or n_att == m:
        raise DegenerateLabelsError("threshold optimization needs both classes")
    order = np.argsort(scores, kind="stable")
    s = scores[order]
    att_below = np.concatenate(([0], np.cumsum(labels[order])))
    clean_below = np.arange(m + 1) - att_below
    errors = att_below + ((m - n_att) - clean_below)
    return s, errors, att_below, n_att


def _rate_sum(errors_at: int, misses_at: int, n_att: int, m: int) -> float:
    return misses_at / n_att + (errors_at - misses_at) / (m - n_att)


def _optimize_exact(scores: np.ndarray, labels: np.ndarray):
    s, errors, att_below, n_att = _error_curve(scores, labels)
    m = scores.size
    # candidate cuts: below all scores, between distinct neighbours, above all
    distinct = np.flatnonzero(s[1:] > s[:-1]) + 1
    cuts = np.concatenate(([0], distinct, [m]))
    best = int(cuts[int(np.argmin(errors[cuts]))])  # ties -> smallest threshold
    if best == 0:
        tau = -math.inf
    elif best == m:
        tau = math.inf
    else:
        tau = 0.5 * (s[best - 1] + s[best])
    rate_sum = _rate_sum(int(errors[best]), int(att_below[best]), n_att, m)
    return float(tau), float(errors[best] / m), rate_sum


def _optimize_grid(scores, labels, lo: float, hi: float, steps: int):
    s, errors, att_below, n_att = _error_curve(scores, labels)
    m = scores.size
    taus = np.linspace(lo, hi, steps)
    cuts = np.searchsorted(s, taus, side="right")
    best_idx = int(np.argmin(errors[cuts]))  # ties -> smallest threshold
    best = int(cuts[best_idx])
    rate_sum = _rate_sum(int(errors[best]), int(att_below[best]), n_att, m)
    return float(taus[best_idx]), float(errors[best] / m), rate_sum


def _report(statistic: str, tau: float, pe: float, rate_sum: float, m: int) -> ErrorRateReport:
    return ErrorRateReport(
        statistic=statistic,
        threshold=tau,
        pe=pe,
        ci_halfwidth=binomial_ci(pe, m),
        trials=m,
        pe_rate_sum=rate_sum,
    )


def optimize_threshold_exact(
    pairs: Sequence[ScorePair], statistic: str
) -> ErrorRateReport:
    """Error-minimizing threshold over all midpoints of sorted distinct scores."""
    scores, labels = _pairs_to_arrays(pairs, statistic)
    tau, pe, rate_sum = _optimize_exact(scores, labels)
    return _report(statistic, tau, pe, rate_sum, scores.size)


def optimize_threshold_grid(
    pairs: Sequence[ScorePair], statistic: str, lo: float, hi: float, steps: int
) -> ErrorRateReport:
    """Error-minimizing threshold over an equally spaced grid."""
    GridSpec(lo, hi, steps)  # validate
    scores, labels = _pairs_to_arrays(pairs, statistic)
    tau, pe, rate_sum = _optimize_grid(scores, labels, lo, hi, steps)
    return _report(statistic, tau, pe, rate_sum, scores.size)


def run_experiment(
    config: ExperimentConfig,
) -> tuple[ErrorRateReport, ErrorRateReport]:
    """(shapley report, single-term report) over the configured trials."""
    phi, v, labels = simulate_scores(config)
    reports = []
    for statistic, scores in (("shapley", phi), ("single-term", v)):
        if isinstance(config.threshold_mode, GridSpec):
            g = config.threshold_mode
            tau, pe, rate_sum = _optimize_grid(scores, labels, g.lo, g.hi, g.steps)
        else:
            tau, pe, rate_sum = _optimize_exact(scores, labels)
        reports.append(_report(statistic, tau, pe, rate_sum, scores.size))
    return reports[0], reports[1]


# ----------------------------------------------------------------------
# analytic oracle


def analytic_pe_gaussian(sigma: float, am: float, attack_prior: float = 0.5) -> float:
    """Minimum error probability of the single-term test, zero-mean type-A case.

    With x ~ N(0, sigma^2) clean and N(am, sigma^2) attacked, thresholding
    v(x) = -ln f(x) is equivalent to thresholding |x|, so the error
    probability reduces to a one-dimensional function of the cut t,
    minimized here by golden-section search.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    p = attack_prior
    if not 0.0 < p < 1.0:
        raise ValueError("attack prior must lie strictly inside (0, 1)")

    def pe(t: float) -> float:
        false_alarm = 2.0 * (1.0 - ndtr(t / sigma))
        miss = ndtr((t - am) / sigma) - ndtr((-t - am) / sigma)
        return (1.0 - p) * false_alarm + p * miss

    lo, hi = 0.0, abs(am) + 8.0 * sigma
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = pe(c), pe(d)
    while b - a > 1e-10:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = pe(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = pe(d)
    return pe(0.5 * (a + b))
