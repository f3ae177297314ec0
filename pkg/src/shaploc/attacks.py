"""Additive sensor attacks injected on top of clean observations.

Three attack kinds, all additive on the targeted sensors:

* ``A`` - constant offset AM
* ``B`` - Gaussian offset with mean AM and standard deviation sigma_a
* ``C`` - Uniform(0, UM) offset plus the constant AM
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .coalitions import Coalition

ATTACK_KINDS = ("A", "B", "C")


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    am: float
    targets: Coalition
    sigma_a: float | None = None
    um: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ATTACK_KINDS:
            raise ValueError(f"unknown attack kind {self.kind!r}")
        if not np.isfinite(self.am):
            raise ValueError("attack magnitude must be finite")
        if not self.targets:
            raise ValueError("attack must target at least one sensor")
        if self.kind == "B":
            if self.sigma_a is None or self.sigma_a < 0:
                raise ValueError("type-B attack requires sigma_a >= 0")
        elif self.sigma_a is not None:
            raise ValueError(f"sigma_a only applies to type-B attacks, not {self.kind}")
        if self.kind == "C":
            if self.um is None or self.um < 0:
                raise ValueError("type-C attack requires um >= 0")
        elif self.um is not None:
            raise ValueError(f"um only applies to type-C attacks, not {self.kind}")


def apply_attack(
    spec: AttackSpec, x, rng: np.random.Generator | None = None
) -> np.ndarray:
    """Return a copy of ``x`` with the attack added on the target sensors.

    ``rng`` is required for the random kinds B and C and is consumed once
    per target sensor, in increasing sensor order.
    """
    y = np.array(x, dtype=float, copy=True)
    if not np.all(np.isfinite(y)):
        raise ValueError("observation contains non-finite entries")
    if spec.kind != "A" and rng is None:
        raise ValueError(f"type-{spec.kind} attack needs a random stream")
    for j in spec.targets:
        if spec.kind == "A":
            y[j] += spec.am
        elif spec.kind == "B":
            y[j] += rng.normal(spec.am, spec.sigma_a)
        else:
            y[j] += spec.am + rng.uniform(0.0, spec.um)
    return y


def offsets_from_uniforms(spec: AttackSpec, u: np.ndarray) -> np.ndarray:
    """Attack offsets from pre-drawn uniforms, one column per target sensor.

    Inverse-CDF mapping so the Monte Carlo harness can budget exactly one
    uniform per target per trial.  Shape of ``u`` is (trials, #targets).
    """
    if spec.kind == "A":
        return np.full_like(u, spec.am)
    if spec.kind == "B":
        if spec.sigma_a == 0.0:
            return np.full_like(u, spec.am)
        z = ndtri(np.clip(u, 1e-300, 1.0))
        return spec.am + spec.sigma_a * z
    return spec.am + spec.um * u
