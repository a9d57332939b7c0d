"""Experiment orchestration: INI config parsing, the ``simulate`` /
``verify`` / ``attractor`` / ``converge`` subcommands, and deterministic
CSV/JSON artifacts.

Exit codes: 0 success, 1 check failure, 2 configuration or parameter error,
3 divergence or boundary contamination during integration.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .attractor import convergence_study, sample_attractor, tail_certificate
from .dynamics import (
    LatticeParams,
    Nonlinearity,
    cocycle_property_check,
    integrate,
    make_finite_rhs,
    make_nonlinearity,
    max_stable_step,
)
from .errors import (
    BoundaryContaminationError,
    CapacityError,
    ConfigError,
    DimensionError,
    DivergenceError,
    EmptyCloudError,
    NonlinearityConditionError,
    ParameterError,
    StrictModeRequiredError,
    UnsupportedForcingError,
)
from .estimates import asymptotic_radius_sq, gronwall_bound, verify_energy_decay
from .forcing import QuasiPeriodicForcing, forcing_from_config
from .operators import (
    apply_difference,
    apply_laplacian,
    difference_matrix,
    laplacian_matrix,
    project_forcing,
    wrap_forcing,
)

log = logging.getLogger("latticedyn")

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_DIVERGED = 3

_CONFIG_ERRORS = (
    ConfigError,
    ParameterError,
    NonlinearityConditionError,
    StrictModeRequiredError,
    CapacityError,
    DimensionError,
    UnsupportedForcingError,
    EmptyCloudError,
)

_SCHEMA: dict[str, set[str]] = {
    "params": {"nu", "lambda", "n", "n_list", "n_ref", "n_work", "boundary"},
    "nonlinearity": {"name", "alpha", "coeffs"},
    "forcing": {
        "support",
        "amplitude0",
        "decay_rate",
        "support_radius",
        "frequency_rule",
        "phase_rule",
    },
    "integrator": {"h", "rho"},
    "simulate": {"t0", "t1", "v0", "v0_norm", "sample_stride"},
    "attractor": {
        "eps",
        "ic_count",
        "sample_count",
        "seed",
        "burn_in",
        "window",
        "ic_radius",
        "tail_eps",
        "boundary_floor",
    },
    "converge": {"threshold"},
    "verify": {"cocycle_tol", "energy_margin", "triples"},
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class ExperimentConfig:
    """Validated experiment settings plus the raw config echo."""

    nu: float
    lam: float
    n: int | None
    n_list: tuple[int, ...] | None
    n_ref: int | None
    n_work: int | None
    boundary: str
    nonlinearity_name: str
    alpha: float
    coeffs: tuple[float, ...] | None
    forcing: QuasiPeriodicForcing
    h: float | None  # None means derive from the stability bound
    rho: float | None
    t0: float
    t1: float
    v0_mode: str
    v0_norm: float
    sample_stride: int
    eps: float
    ic_count: int
    sample_count: int
    seed: int
    burn_in: float | None
    window: float | None
    ic_radius: float | None
    tail_eps: tuple[float, ...]
    boundary_floor: float
    threshold: float | None
    cocycle_tol: float
    energy_margin: float
    verify_triples: int
    echo: dict[str, dict[str, str]] = field(default_factory=dict)

    def make_nonlinearity(self) -> Nonlinearity:
        return make_nonlinearity(self.nonlinearity_name, self.alpha, self.coeffs)

    def make_params(self, n: int | None = None) -> LatticeParams:
        order = n if n is not None else self.n
        if order is None:
            raise ConfigError("this command needs [params] n")
        return LatticeParams(nu=self.nu, lam=self.lam, n=order)

    def system_forcing(self, n: int) -> QuasiPeriodicForcing:
        if self.boundary == "wrap":
            return wrap_forcing(self.forcing, n)
        return project_forcing(self.forcing, n)

    def step_for(self, params: LatticeParams, nonlin: Nonlinearity, radius: float) -> float:
        if self.h is not None:
            return self.h
        rho = self.rho if self.rho is not None else 1.5 * radius + 0.5
        return max_stable_step(params, nonlin, rho)


class _SectionView:
    """Typed accessors over one config section with error context."""

    def __init__(self, name: str, values: dict[str, str]):
        self.name = name
        self.values = values

    def _raw(self, key: str, default: str | None) -> str | None:
        if key in self.values:
            return self.values[key]
        return default

    def get_float(self, key: str, default: str | None = None) -> float | None:
        raw = self._raw(key, default)
        if raw is None:
            return None
        if raw.strip().lower() == "auto":
            return None
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"[{self.name}] {key}: expected number, got {raw!r}") from exc

    def get_int(self, key: str, default: str | None = None) -> int | None:
        raw = self._raw(key, default)
        if raw is None:
            return None
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"[{self.name}] {key}: expected integer, got {raw!r}") from exc

    def get_str(self, key: str, default: str | None = None) -> str | None:
        raw = self._raw(key, default)
        return raw.strip() if raw is not None else None

    def get_int_list(self, key: str) -> tuple[int, ...] | None:
        raw = self._raw(key, None)
        if raw is None:
            return None
        try:
            return tuple(int(x) for x in raw.split())
        except ValueError as exc:
            raise ConfigError(f"[{self.name}] {key}: expected integer list") from exc

    def get_float_list(self, key: str, default: str) -> tuple[float, ...]:
        raw = self._raw(key, default)
        try:
            return tuple(float(x) for x in raw.split())
        except ValueError as exc:
            raise ConfigError(f"[{self.name}] {key}: expected number list") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate the INI experiment file; unknown keys are rejected."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc

    echo: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        unknown = set(parser[section]) - _SCHEMA[section]
        if unknown:
            raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")
        echo[section] = dict(parser[section])

    def view(name: str) -> _SectionView:
        return _SectionView(name, echo.get(name, {}))

    params = view("params")
    nu = params.get_float("nu", "1.0")
    lam = params.get_float("lambda", None)
    if lam is None:
        raise ConfigError("[params] lambda is required")
    boundary = params.get_str("boundary", "wrap")
    if boundary not in ("wrap", "project"):
        raise ConfigError(f"[params] boundary must be wrap|project, got {boundary!r}")

    nl = view("nonlinearity")
    name = nl.get_str("name", "zero")
    alpha = nl.get_float("alpha", "0.0")
    coeffs_raw = nl.get_str("coeffs", None)
    coeffs = None
    if coeffs_raw is not None:
        try:
            coeffs = tuple(float(x) for x in coeffs_raw.split())
        except ValueError as exc:
            raise ConfigError("[nonlinearity] coeffs: expected number list") from exc

    if "forcing" in echo:
        forcing = forcing_from_config(echo["forcing"])
    else:
        forcing = QuasiPeriodicForcing.zero()

    integ = view("integrator")
    sim = view("simulate")
    att = view("attractor")
    conv = view("converge")
    ver = view("verify")

    v0_mode = sim.get_str("v0", "zero")
    if v0_mode not in ("zero", "ball"):
        raise ConfigError(f"[simulate] v0 must be zero|ball, got {v0_mode!r}")

    return ExperimentConfig(
        nu=nu,
        lam=lam,
        n=params.get_int("n", None),
        n_list=params.get_int_list("n_list"),
        n_ref=params.get_int("n_ref", None),
        n_work=params.get_int("n_work", None),
        boundary=boundary,
        nonlinearity_name=name,
        alpha=alpha,
        coeffs=coeffs,
        forcing=forcing,
        h=integ.get_float("h", "auto"),
        rho=integ.get_float("rho", "auto"),
        t0=sim.get_float("t0", "0.0"),
        t1=sim.get_float("t1", "1.0"),
        v0_mode=v0_mode,
        v0_norm=sim.get_float("v0_norm", "1.0"),
        sample_stride=sim.get_int("sample_stride", "1"),
        eps=att.get_float("eps", "1e-2"),
        ic_count=att.get_int("ic_count", "4"),
        sample_count=att.get_int("sample_count", "8"),
        seed=att.get_int("seed", "0"),
        burn_in=att.get_float("burn_in", "auto"),
        window=att.get_float("window", "auto"),
        ic_radius=att.get_float("ic_radius", "auto"),
        tail_eps=att.get_float_list("tail_eps", "1e-2 1e-3"),
        boundary_floor=att.get_float("boundary_floor", "1e-8"),
        threshold=conv.get_float("threshold", "auto"),
        cocycle_tol=ver.get_float("cocycle_tol", "1e-8"),
        energy_margin=ver.get_float("energy_margin", "0.05"),
        verify_triples=ver.get_int("triples", "100"),
        echo=echo,
    )


# ----------------------------------------------------------------------
# artifact writers


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _site_header(half_width: int) -> list[str]:
    return [f"i={i}" for i in range(-half_width, half_width + 1)]


def _write_report(out_dir: Path, report: dict[str, Any]) -> Path:
    path = out_dir / "report.json"
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


def _check(name: str, passed: bool, margin: float, detail: str) -> dict[str, Any]:
    status = "pass" if passed else "FAIL"
    log.info("check %-28s %s (margin %.3g) %s", name, status, margin, detail)
    return {"name": name, "passed": bool(passed), "margin": float(margin), "detail": detail}


def _base_report(command: str, cfg: ExperimentConfig, seed: int) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "seed": seed,
        "config": cfg.echo,
        "checks": [],
        "artifacts": [],
    }


# ----------------------------------------------------------------------
# subcommands


def _initial_state(cfg: ExperimentConfig, dim: int, seed: int) -> np.ndarray:
    if cfg.v0_mode == "zero":
        return np.zeros(dim)
    v = np.random.default_rng(seed).standard_normal(dim)
    scale = np.linalg.norm(v)
    return v * (cfg.v0_norm / scale) if scale > 0 else v


def cmd_simulate(cfg: ExperimentConfig, out_dir: Path, seed: int, threads: int) -> tuple[int, dict]:
    report = _base_report("simulate", cfg, seed)
    nonlin = cfg.make_nonlinearity()
    params = cfg.make_params()
    forcing = cfg.system_forcing(params.n)
    radius = max(
        cfg.v0_norm,
        math.sqrt(asymptotic_radius_sq(cfg.lam, nonlin.alpha, cfg.forcing.uniform_bound())),
    )
    h = cfg.step_for(params, nonlin, radius)
    v0 = _initial_state(cfg, params.dim, seed)
    log.info("simulate: n=%d dim=%d h=%.6g over [%g, %g]", params.n, params.dim, h, cfg.t0, cfg.t1)

    traj = integrate(
        make_finite_rhs(params, nonlin, forcing), v0, cfg.t0, cfg.t1, h, cfg.sample_stride
    )

    traj_path = out_dir / "trajectory.csv"
    _write_csv(
        traj_path,
        ["t"] + _site_header(params.n),
        ([_fmt(t)] + [_fmt(x) for x in row] for t, row in zip(traj.times, traj.states)),
    )
    norms_path = out_dir / "norms.csv"
    norms_sq = traj.norms_sq()
    _write_csv(
        norms_path,
        ["t", "norm_sq"],
        ([_fmt(t), _fmt(y)] for t, y in zip(traj.times, norms_sq)),
    )
    report["artifacts"] = [str(traj_path), str(norms_path)]
    report["final_norm"] = float(math.sqrt(norms_sq[-1]))
    report["steps"] = int(len(traj.times) - 1)
    return EXIT_OK, report


def cmd_verify(cfg: ExperimentConfig, out_dir: Path, seed: int, threads: int) -> tuple[int, dict]:
    report = _base_report("verify", cfg, seed)
    checks = report["checks"]
    rng = np.random.default_rng(seed)
    params = cfg.make_params(cfg.n if cfg.n is not None else 8)

    # materialized stencil identity on small orders
    worst_n = 0
    ok = True
    for n in range(1, min(max(params.n, 8), 32) + 1):
        b = difference_matrix(n)
        if not (np.array_equal(b.T @ b, laplacian_matrix(n))
                and np.array_equal(b @ b.T, laplacian_matrix(n))):
            ok, worst_n = False, n
            break
    checks.append(_check("matrix-identity", ok, 0.0, f"orders 1..{min(max(params.n, 8), 32)}"
                         + ("" if ok else f", first failure at n={worst_n}")))

    # quadratic-form identity, positivity, and operator norm on random states
    worst_gap = 0.0
    worst_quad = 0.0
    worst_norm = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 25))
        v = rng.standard_normal(2 * n + 1)
        av = apply_laplacian(v, n)
        bv = apply_difference(v, n)
        scale = float(v @ v) + 1e-30
        worst_gap = max(worst_gap, abs(float(av @ v) - float(bv @ bv)) / scale)
        worst_quad = max(worst_quad, -float(av @ v) / scale)
        worst_norm = max(worst_norm, float(np.linalg.norm(av)) / (4.0 * np.linalg.norm(v)))
    checks.append(_check("stencil-energy-identity", worst_gap < 1e-12, 1e-12 - worst_gap,
                         f"worst relative gap {worst_gap:.3g}"))
    checks.append(_check("stencil-positivity", worst_quad <= 1e-12, 1e-12 - worst_quad,
                         f"worst negative quadratic form {worst_quad:.3g}"))
    checks.append(_check("stencil-norm-bound", worst_norm <= 1.0 + 1e-12, 1.0 + 1e-12 - worst_norm,
                         f"worst ||Av||/(4||v||) = {worst_norm:.6g}"))

    # shift equivariance of the two forcing projections
    def equivariance_defect(project) -> float:
        worst = 0.0
        for _ in range(cfg.verify_triples):
            n = int(rng.integers(1, 9))
            h_shift, t = rng.uniform(-20.0, 20.0, 2)
            lhs = project(cfg.forcing.shift(h_shift), n).eval_window(t, n)
            rhs = project(cfg.forcing, n).shift(h_shift).eval_window(t, n)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    for label, proj in (("truncation-equivariance", project_forcing),
                        ("wrap-equivariance", wrap_forcing)):
        worst = equivariance_defect(proj)
        checks.append(_check(label, worst < 1e-12, 1e-12 - worst,
                             f"{cfg.verify_triples} random (n, h, t) triples, worst {worst:.3g}"))

    # nonlinearity contract at registration
    try:
        nonlin = cfg.make_nonlinearity()
        checks.append(_check("nonlinearity-registration", True, 0.0,
                             f"{cfg.nonlinearity_name}: contract holds on the sample grid"))
    except NonlinearityConditionError as exc:
        checks.append(_check("nonlinearity-registration", False, -1.0, str(exc)))
        report["passed"] = False
        _write_report(out_dir, report)
        return EXIT_CHECK_FAILED, report

    # two-path composition defect of the numerical flow
    forcing_n = cfg.system_forcing(params.n)
    radius = math.sqrt(
        asymptotic_radius_sq(cfg.lam, nonlin.alpha, cfg.forcing.uniform_bound())
    )
    h = min(cfg.step_for(params, nonlin, max(radius, 1.0)), 1e-2)
    v0 = _initial_state(cfg, params.dim, seed) if cfg.v0_mode == "ball" else (
        np.random.default_rng(seed).standard_normal(params.dim) * 0.3
    )
    defect = cocycle_property_check(v0, forcing_n, 1.0, 1.0, params, nonlin, h)
    checks.append(_check("cocycle-defect", defect < cfg.cocycle_tol, cfg.cocycle_tol - defect,
                         f"two-path defect {defect:.3g} at h={h:.3g}"))

    # energy envelope along a forced trajectory
    c_bound = cfg.forcing.uniform_bound()
    v0_norm = max(cfg.v0_norm, 1.0)
    v0 = np.random.default_rng(seed + 1).standard_normal(params.dim)
    v0 *= v0_norm / np.linalg.norm(v0)
    horizon = 6.0
    traj = integrate(make_finite_rhs(params, nonlin, forcing_n), v0, 0.0, horizon,
                     cfg.step_for(params, nonlin, max(radius, v0_norm)))
    energy = verify_energy_decay(traj, cfg.lam, nonlin.alpha, c_bound, cfg.energy_margin)
    checks.append(_check("energy-envelope", energy.ok, -energy.max_excess,
                         f"{energy.samples_checked} sample pairs, max excess {energy.max_excess:.3g}"))

    envelope = np.array([
        gronwall_bound(cfg.lam, nonlin.alpha, c_bound, v0_norm, t) for t in traj.times
    ])
    norms = np.sqrt(traj.norms_sq())
    worst_ratio = float(np.max(norms / (envelope * 1.05 + 1e-30)))
    checks.append(_check("absorbing-envelope", worst_ratio <= 1.0, 1.0 - worst_ratio,
                         f"worst norm / (1.05 * bound) = {worst_ratio:.6g}"))

    passed = all(c["passed"] for c in checks)
    report["passed"] = passed
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), report


def cmd_attractor(cfg: ExperimentConfig, out_dir: Path, seed: int, threads: int) -> tuple[int, dict]:
    report = _base_report("attractor", cfg, seed)
    nonlin = cfg.make_nonlinearity()
    params = cfg.make_params()
    log.info("attractor: n=%d eps=%g points=%d", params.n, cfg.eps,
             cfg.ic_count * cfg.sample_count)
    cloud = sample_attractor(
        cfg.forcing, params, nonlin,
        eps=cfg.eps, ic_count=cfg.ic_count, sample_count=cfg.sample_count,
        seed=seed, boundary=cfg.boundary, burn_in=cfg.burn_in,
        window=cfg.window, step=cfg.h, ic_radius=cfg.ic_radius,
        threads=threads,
    )
    cloud_path = out_dir / "cloud.csv"
    _write_csv(
        cloud_path,
        _site_header(cloud.half_width),
        ([_fmt(x) for x in row] for row in cloud.states),
    )
    tail = tail_certificate([cloud], cfg.tail_eps, cfg.forcing, cfg.nu, cfg.lam, nonlin.alpha)
    tail_path = out_dir / "tail_report.json"
    with open(tail_path, "w", encoding="utf-8") as handle:
        json.dump(
            {
                "ball_norm_sq": tail.ball_norm_sq,
                "points_checked": tail.points_checked,
                "rows": [
                    {"eps": r.eps, "k": r.k, "worst_tail": r.worst_tail, "margin": r.margin}
                    for r in tail.rows
                ],
            },
            handle, indent=2, sort_keys=True,
        )
        handle.write("\n")

    report["artifacts"] = [str(cloud_path), str(tail_path)]
    report["cloud"] = {
        "label": cloud.label,
        "points": len(cloud),
        "diameter": cloud.diameter(),
        "max_norm": float(cloud.norms().max()),
        "burn_in": cloud.burn_in,
    }
    report["checks"].append(
        _check("tail-certificate", tail.ok,
               min(r.margin for r in tail.rows), f"{len(tail.rows)} tolerance levels")
    )
    passed = tail.ok
    report["passed"] = passed
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), report


def cmd_converge(cfg: ExperimentConfig, out_dir: Path, seed: int, threads: int) -> tuple[int, dict]:
    report = _base_report("converge", cfg, seed)
    if not cfg.n_list:
        raise ConfigError("[params] n_list is required for converge")
    if cfg.n_ref is None:
        raise ConfigError("[params] n_ref is required for converge")
    nonlin = cfg.make_nonlinearity()
    log.info("converge: n_list=%s n_ref=%d", list(cfg.n_list), cfg.n_ref)
    study = convergence_study(
        cfg.forcing, cfg.nu, cfg.lam, nonlin,
        n_list=cfg.n_list, n_ref=cfg.n_ref,
        eps=cfg.eps, ic_count=cfg.ic_count, sample_count=cfg.sample_count,
        seed=seed, boundary=cfg.boundary, threshold=cfg.threshold,
        burn_in=cfg.burn_in, window=cfg.window, step=cfg.h,
        boundary_floor=cfg.boundary_floor, threads=threads,
    )
    csv_path = out_dir / "convergence.csv"
    _write_csv(
        csv_path,
        ["n", "beta_n_to_ref", "beta_ref_to_n", "runtime_s"],
        (
            [str(r.order), _fmt(r.beta_to_ref), _fmt(r.beta_from_ref), _fmt(r.runtime_s)]
            for r in study.rows
        ),
    )
    report["artifacts"] = [str(csv_path)]
    report["rows"] = [
        {
            "n": r.order,
            "beta_n_to_ref": r.beta_to_ref,
            "beta_ref_to_n": r.beta_from_ref,
            "points": r.cloud_size,
        }
        for r in study.rows
    ]
    report["checks"].append(
        _check(
            "beta-threshold",
            study.passed,
            (cfg.threshold - study.final_beta) if cfg.threshold is not None else 0.0,
            f"final beta {study.final_beta:.3g}"
            + (f" vs threshold {cfg.threshold:g}" if cfg.threshold is not None else " (no threshold)"),
        )
    )
    report["checks"].append(
        _check("beta-nonincreasing", study.nonincreasing_within_noise, 0.0,
               f"betas {[f'{b:.3g}' for b in study.betas]}")
    )
    passed = study.passed and study.nonincreasing_within_noise
    report["passed"] = passed
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), report


_COMMANDS = {
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "attractor": cmd_attractor,
    "converge": cmd_converge,
}


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticedyn",
        description="Simulate and verify dissipative lattice dynamics experiments.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="experiment INI file")
    parser.add_argument("--out", default="out", help="output directory (default: ./out)")
    parser.add_argument("--seed", type=int, default=None, help="overrides [attractor] seed")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    return parser


def _configure_logging() -> None:
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("LATTICE_LOG", "info").strip().lower(), logging.INFO
    )
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    log.setLevel(level)


def main(argv=None) -> int:
    _configure_logging()
    parser = _build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0

    started = time.perf_counter()
    try:
        cfg = load_config(args.config)
        seed = args.seed if args.seed is not None else cfg.seed
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        code, report = _COMMANDS[args.command](cfg, out_dir, seed, max(1, args.threads))
        report["timing_s"] = time.perf_counter() - started
        path = _write_report(out_dir, report)
        log.info("%s finished in %.2fs, report at %s", args.command, report["timing_s"], path)
        return code
    except _CONFIG_ERRORS as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except (DivergenceError, BoundaryContaminationError) as exc:
        log.error("integration failed: %s", exc)
        return EXIT_DIVERGED


if __name__ == "__main__":
    raise SystemExit(main())
