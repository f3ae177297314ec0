"""Config-driven experiment suites, table presets and the complexity bench.

A suite is a list of named two-sensor experiments described either in an
INI-style config file or by one of the built-in presets (the independent
and correlated parameter grids).  Each experiment is run through the Monte
Carlo harness and reported as one row of a CSV or markdown table.
"""

from __future__ import annotations

import configparser
import gc
import time
from dataclasses import dataclass, replace

import numpy as np

from .attacks import AttackSpec
from .coalitions import Coalition
from .gaussian import GaussianModel, GaussianValueFunction
from .harness import (
    ExperimentConfig,
    GridSpec,
    analytic_pe_gaussian,
    run_experiment,
)
from .shapley import all_shapley

COLUMNS = (
    "name", "rho", "sigma1", "sigma2", "attack_type", "sigma_a", "AM", "UM",
    "M", "prior", "Pe_v", "Pe_phi", "CI_v", "CI_phi", "tau_v", "tau_phi",
    "analytic_Pe",
)


class ConfigError(ValueError):
    """Config file could not be parsed or validated."""


@dataclass(frozen=True)
class ExperimentSpec:
    """Scalar description of one two-sensor experiment.

    Sensor numbering is 1-based here, matching the config file syntax; the
    harness works with 0-based indices.
    """

    attack_type: str
    am: float
    rho: float = 0.0
    sigma1: float = 1.0
    sigma2: float = 1.0
    mu1: float = 0.0
    mu2: float = 0.0
    sigma_a: float | None = None
    um: float | None = None
    targets: tuple[int, ...] = (1,)
    sensor_under_test: int = 1
    trials: int = 10_000
    attack_prior: float = 0.5
    threshold_mode: GridSpec | str = "exact"

    def __post_init__(self) -> None:
        if not abs(self.rho) < 1:
            raise ConfigError("rho: correlation out of range (need |rho| < 1)")
        for key in ("sigma1", "sigma2"):
            if getattr(self, key) <= 0:
                raise ConfigError(f"{key}: must be positive")
        if self.sensor_under_test not in (1, 2):
            raise ConfigError("sensor_under_test: must be 1 or 2")
        if not self.targets or any(t not in (1, 2) for t in self.targets):
            raise ConfigError("targets: must be a non-empty subset of {1, 2}")
        # AttackSpec re-validates; surface its message under the field name
        try:
            self.attack()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.trials < 1:
            raise ConfigError("trials: must be at least 1")
        if not 0.0 < self.attack_prior < 1.0:
            raise ConfigError("attack_prior: must lie strictly inside (0, 1)")

    def model(self) -> GaussianModel:
        c = self.rho * self.sigma1 * self.sigma2
        cov = [[self.sigma1 ** 2, c], [c, self.sigma2 ** 2]]
        return GaussianModel([self.mu1, self.mu2], cov)

    def attack(self) -> AttackSpec:
        return AttackSpec(
            kind=self.attack_type,
            am=self.am,
            targets=Coalition.of([t - 1 for t in self.targets], 2),
            sigma_a=self.sigma_a,
            um=self.um,
        )

    def to_config(self, seed: int) -> ExperimentConfig:
        return ExperimentConfig(
            model=self.model(),
            attack=self.attack(),
            sensor_under_test=self.sensor_under_test - 1,
            trials=self.trials,
            attack_prior=self.attack_prior,
            seed=seed,
            threshold_mode=self.threshold_mode,
        )

    def analytic_pe(self) -> float | None:
        """Closed-form error probability where the oracle applies."""
        i = self.sensor_under_test
        mu_i = self.mu1 if i == 1 else self.mu2
        sigma_i = self.sigma1 if i == 1 else self.sigma2
        if (
            self.attack_type == "A"
            and self.rho == 0.0
            and mu_i == 0.0
            and i in self.targets
        ):
            return analytic_pe_gaussian(sigma_i, self.am, self.attack_prior)
        return None


@dataclass(frozen=True)
class SuiteConfig:
    experiments: tuple[tuple[str, ExperimentSpec], ...]
    seed: int = 0
    fmt: str = "csv"
    out: str | None = None

    def __post_init__(self) -> None:
        names = [name for name, _ in self.experiments]
        if len(set(names)) != len(names):
            raise ConfigError("experiment names must be unique")
        if self.fmt not in ("csv", "markdown"):
            raise ConfigError(f"format: unknown output format {self.fmt!r}")


# ----------------------------------------------------------------------
# config file parsing

_SUITE_KEYS = {"seed", "format", "out", "trials"}
_EXPERIMENT_KEYS = {
    "rho", "sigma1", "sigma2", "mu1", "mu2", "attack_type", "am", "sigma_a",
    "um", "targets", "sensor_under_test", "trials", "attack_prior",
    "threshold_mode", "grid_lo", "grid_hi", "grid_steps",
}


def _get_float(section, key, default=None):
    raw = section.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"[{section.name}] missing required key {key!r}")
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section.name}] {key}: not a number: {raw!r}") from None


def _get_int(section, key, default):
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section.name}] {key}: not an integer: {raw!r}") from None


def _parse_experiment(section, default_trials: int) -> ExperimentSpec:
    unknown = set(section.keys()) - _EXPERIMENT_KEYS
    if unknown:
        raise ConfigError(f"[{section.name}] unknown keys: {sorted(unknown)}")
    attack_type = section.get("attack_type")
    if attack_type is None:
        raise ConfigError(f"[{section.name}] missing required key 'attack_type'")
    mode_raw = section.get("threshold_mode", "exact-sort")
    if mode_raw == "exact-sort":
        mode: GridSpec | str = "exact"
    elif mode_raw == "grid":
        try:
            mode = GridSpec(
                lo=_get_float(section, "grid_lo"),
                hi=_get_float(section, "grid_hi"),
                steps=_get_int(section, "grid_steps", 0),
            )
        except ValueError as exc:
            raise ConfigError(f"[{section.name}] {exc}") from None
    else:
        raise ConfigError(
            f"[{section.name}] threshold_mode: expected 'exact-sort' or 'grid', "
            f"got {mode_raw!r}"
        )
    targets_raw = section.get("targets", "1")
    try:
        targets = tuple(int(t) for t in targets_raw.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"[{section.name}] targets: not a sensor list: {targets_raw!r}") from None
    sigma_a = section.get("sigma_a")
    um = section.get("um")
    try:
        return ExperimentSpec(
            attack_type=attack_type.strip(),
            am=_get_float(section, "am"),
            rho=_get_float(section, "rho", 0.0),
            sigma1=_get_float(section, "sigma1", 1.0),
            sigma2=_get_float(section, "sigma2", 1.0),
            mu1=_get_float(section, "mu1", 0.0),
            mu2=_get_float(section, "mu2", 0.0),
            sigma_a=float(sigma_a) if sigma_a is not None else None,
            um=float(um) if um is not None else None,
            targets=targets,
            sensor_under_test=_get_int(section, "sensor_under_test", 1),
            trials=_get_int(section, "trials", default_trials),
            attack_prior=_get_float(section, "attack_prior", 0.5),
            threshold_mode=mode,
        )
    except ConfigError as exc:
        raise ConfigError(f"[{section.name}] {exc}") from None


def parse_config(path) -> SuiteConfig:
    """Parse and validate a suite config file."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except configparser.Error as exc:
        # configparser messages already carry the offending line number
        raise ConfigError(str(exc)) from None

    seed = 0
    fmt = "csv"
    out = None
    default_trials = 10_000
    experiments = []
    for name in parser.sections():
        section = parser[name]
        if name == "suite":
            unknown = set(section.keys()) - _SUITE_KEYS
            if unknown:
                raise ConfigError(f"[suite] unknown keys: {sorted(unknown)}")
            seed = _get_int(section, "seed", 0)
            fmt = section.get("format", "csv")
            out = section.get("out")
            default_trials = _get_int(section, "trials", default_trials)
        elif name.startswith("experiment."):
            exp_name = name[len("experiment."):]
            if not exp_name:
                raise ConfigError(f"empty experiment name in section [{name}]")
            experiments.append((exp_name, _parse_experiment(section, default_trials)))
        else:
            raise ConfigError(
                f"unknown section [{name}]; expected [suite] or [experiment.<name>]"
            )
    return SuiteConfig(
        experiments=tuple(experiments), seed=seed, fmt=fmt, out=out
    )


def canonical_config(cfg: SuiteConfig) -> str:
    """Emit a config file that parses back to an equivalent suite."""
    lines = ["[suite]", f"seed = {cfg.seed}", f"format = {cfg.fmt}"]
    if cfg.out is not None:
        lines.append(f"out = {cfg.out}")
    for name, spec in cfg.experiments:
        lines += ["", f"[experiment.{name}]"]
        lines += [
            f"rho = {spec.rho!r}",
            f"sigma1 = {spec.sigma1!r}",
            f"sigma2 = {spec.sigma2!r}",
            f"mu1 = {spec.mu1!r}",
            f"mu2 = {spec.mu2!r}",
            f"attack_type = {spec.attack_type}",
            f"am = {spec.am!r}",
        ]
        if spec.sigma_a is not None:
            lines.append(f"sigma_a = {spec.sigma_a!r}")
        if spec.um is not None:
            lines.append(f"um = {spec.um!r}")
        lines += [
            f"targets = {','.join(str(t) for t in spec.targets)}",
            f"sensor_under_test = {spec.sensor_under_test}",
            f"trials = {spec.trials}",
            f"attack_prior = {spec.attack_prior!r}",
        ]
        if isinstance(spec.threshold_mode, GridSpec):
            g = spec.threshold_mode
            lines += [
                "threshold_mode = grid",
                f"grid_lo = {g.lo!r}",
                f"grid_hi = {g.hi!r}",
                f"grid_steps = {g.steps}",
            ]
        else:
            lines.append("threshold_mode = exact-sort")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# presets (the published parameter grids)

_TABLE1_ATTACKS = (
    ("A", dict(am=10.0)),
    ("B", dict(am=10.0, sigma_a=0.1)),
    ("B", dict(am=10.0, sigma_a=1.0)),
    ("C", dict(am=9.95, um=0.1)),
)


def preset_table1(trials: int = 1_000_000, seed: int = 0) -> SuiteConfig:
    """Independent-sensor grid: sigma in {1, 1.5, 2} x four attack setups."""
    experiments = []
    for kind, params in _TABLE1_ATTACKS:
        for sigma in (1.0, 1.5, 2.0):
            tag = f"{kind}_s{sigma:g}" + (
                f"_sa{params['sigma_a']:g}" if kind == "B" else ""
            )
            experiments.append((
                tag,
                ExperimentSpec(
                    attack_type=kind, rho=0.0, sigma1=sigma, sigma2=sigma,
                    trials=trials, **params,
                ),
            ))
    return SuiteConfig(experiments=tuple(experiments), seed=seed)


def preset_table2(trials: int = 1_000_000, seed: int = 0) -> SuiteConfig:
    """Correlated-sensor grid: rho in {+-0.2, +-0.5, +-0.8}, type-A, AM=1."""
    experiments = []
    for rho in (0.2, -0.2, 0.5, -0.5, 0.8, -0.8):
        experiments.append((
            f"A_rho{rho:+g}",
            ExperimentSpec(
                attack_type="A", am=1.0, rho=rho, sigma1=2.0, sigma2=2.0,
                trials=trials,
            ),
        ))
    return SuiteConfig(experiments=tuple(experiments), seed=seed)


def override_trials(cfg: SuiteConfig, trials: int) -> SuiteConfig:
    experiments = tuple(
        (name, replace(spec, trials=trials)) for name, spec in cfg.experiments
    )
    return replace(cfg, experiments=experiments)


# ----------------------------------------------------------------------
# suite execution and rendering


def experiment_seed(suite_seed: int, index: int) -> int:
    """Derived 64-bit stream key for the index-th experiment of a suite."""
    ss = np.random.SeedSequence((suite_seed & 0xFFFFFFFFFFFFFFFF, index))
    return int(ss.generate_state(1, np.uint64)[0])


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".10g")


def run_suite(cfg: SuiteConfig) -> tuple[int, list[dict]]:
    """Run every experiment; returns (exit status, one result row each).

    A failing experiment contributes a FAILED marker row and flips the exit
    status to 2; the remaining experiments still run.
    """
    rows: list[dict] = []
    status = 0
    for index, (name, spec) in enumerate(cfg.experiments):
        base = {
            "name": name, "rho": spec.rho, "sigma1": spec.sigma1,
            "sigma2": spec.sigma2, "attack_type": spec.attack_type,
            "sigma_a": spec.sigma_a, "AM": spec.am, "UM": spec.um,
            "M": spec.trials, "prior": spec.attack_prior,
        }
        try:
            config = spec.to_config(experiment_seed(cfg.seed, index))
            shap, single = run_experiment(config)
            rows.append(base | {
                "Pe_v": single.pe, "Pe_phi": shap.pe,
                "CI_v": single.ci_halfwidth, "CI_phi": shap.ci_halfwidth,
                "tau_v": single.threshold, "tau_phi": shap.threshold,
                "analytic_Pe": spec.analytic_pe(),
            })
        except Exception as exc:  # noqa: BLE001 - marker row per contract
            rows.append(base | {"name": f"{name} FAILED: {exc}"})
            status = 2
    return status, rows


def render_rows(
    cfg: SuiteConfig, rows: list[dict], timestamp: bool = False
) -> str:
    """Render result rows as CSV or a markdown table, with a seed header."""
    header = [f"# shaploc suite, seed={cfg.seed}"]
    if timestamp:
        header.append(f"# generated={time.strftime('%Y-%m-%dT%H:%M:%S')}")
    cells = [[_fmt(row.get(col)) for col in COLUMNS] for row in rows]
    if cfg.fmt == "markdown":
        lines = header
        lines.append("| " + " | ".join(COLUMNS) + " |")
        lines.append("|" + "---|" * len(COLUMNS))
        lines.extend("| " + " | ".join(row) + " |" for row in cells)
    else:
        lines = header + [",".join(COLUMNS)]
        lines.extend(",".join(row) for row in cells)
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# complexity bench


def bench(n_list, reps: int = 2, seed: int = 0) -> list[dict]:
    """Wall-time comparison of full enumeration vs the single-term score.

    For each universe size, times ``all_shapley`` and the n single-sensor
    scores on a random independent model; reports the best of ``reps``
    repetitions.
    """
    rows = []
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for n in n_list:
            rng = np.random.default_rng((seed, n))
            variances = rng.uniform(0.5, 2.0, n)
            model = GaussianModel(
                np.zeros(n), np.diag(variances), cache_marginals=False
            )
            x = model.sample(rng)
            vf = GaussianValueFunction(model)
            singles = [Coalition.of([i], n) for i in range(n)]

            t_shapley = float("inf")
            for _ in range(reps):
                tic = time.perf_counter()
                all_shapley(vf, x)
                t_shapley = min(t_shapley, time.perf_counter() - tic)

            # repeat the cheap statistic until it is measurable; extra reps
            # because short timings are dominated by scheduling noise
            inner = max(1, 4000 // n)
            t_single = float("inf")
            for _ in range(max(reps, 5)):
                tic = time.perf_counter()
                for _ in range(inner):
                    for s in singles:
                        vf(s, x)
                t_single = min(t_single, (time.perf_counter() - tic) / inner)

            rows.append({"n": n, "t_shapley": t_shapley, "t_single": t_single})
    finally:
        if gc_was_enabled:
            gc.enable()
    return rows


def render_bench(rows: list[dict]) -> str:
    lines = ["n,t_shapley_s,t_single_s,shapley_ratio,single_ratio"]
    prev = None
    for row in rows:
        shap_ratio = row["t_shapley"] / prev["t_shapley"] if prev else None
        single_ratio = row["t_single"] / prev["t_single"] if prev else None
        lines.append(",".join([
            str(row["n"]), _fmt(row["t_shapley"]), _fmt(row["t_single"]),
            _fmt(shap_ratio), _fmt(single_ratio),
        ]))
        prev = row
    return "\n".join(lines) + "\n"
