"""Right-hand sides for the wrapped finite system and the padded reference
system, the nonlinearity contract, and a fixed-step RK4 integrator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    BoundaryContaminationError,
    DimensionError,
    DivergenceError,
    NonlinearityConditionError,
    ParameterError,
)
from .forcing import QuasiPeriodicForcing
from .operators import apply_laplacian
from .state import PaddedState

STABILITY_SAFETY = 0.5
_SIGN_SLACK = 1e-12  # absorbs 1-ulp rounding in the sampled sign checks
_REGISTRATION_SAMPLES = 10_000


@dataclass(frozen=True)
class LatticeParams:
    """Coupling strength, linear decay rate, and truncation order."""

    nu: float
    lam: float
    n: int

    def __post_init__(self) -> None:
        if not self.lam > 0.0:
            raise ParameterError(f"decay rate must be > 0, got {self.lam}")
        if self.nu < 0.0:
            raise ParameterError(f"coupling must be >= 0, got {self.nu}")
        if self.n < 1:
            raise ParameterError(f"truncation order must be >= 1, got {self.n}")

    @property
    def dim(self) -> int:
        return 2 * self.n + 1


@dataclass(frozen=True)
class Nonlinearity:
    """Pointwise feedback term with a declared sign margin and a
    Lipschitz-on-ball witness.

    ``mode`` is ``"strict"`` (``s*F(s) <= -alpha*s**2``) or ``"weak"``
    (``s*F(s) <= 0``).  The declared conditions are checked by dense sampling
    at registration time; see :meth:`verify`.
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    alpha: float
    mode: str
    lipschitz: Callable[[float], float]

    def __post_init__(self) -> None:
        if self.mode not in ("strict", "weak"):
            raise ParameterError(f"mode must be 'strict' or 'weak', got {self.mode!r}")
        if self.alpha < 0.0:
            raise ParameterError(f"margin alpha must be >= 0, got {self.alpha}")
        if self.mode == "weak" and self.alpha != 0.0:
            raise ParameterError("weak mode requires alpha == 0")

    def verify(self, rho_max: float = 4.0, samples: int = _REGISTRATION_SAMPLES) -> None:
        """Check the declared contract on a dense grid of ``[-rho_max, rho_max]``.

        Raises :class:`NonlinearityConditionError` naming the violated
        condition: zero fixed point, sign margin, or Lipschitz witness.
        """
        s = np.linspace(-rho_max, rho_max, samples)
        fs = np.asarray(self.func(s), dtype=float)
        f0 = float(self.func(np.array([0.0]))[0])
        if f0 != 0.0:
            raise NonlinearityConditionError(
                f"{self.name}: zero fixed point violated, F(0) = {f0}"
            )
        slack = _SIGN_SLACK * (1.0 + s * s)
        if self.mode == "strict":
            bad = s * fs > -self.alpha * s * s + slack
            if np.any(bad):
                worst = s[np.argmax(s * fs + self.alpha * s * s)]
                raise NonlinearityConditionError(
                    f"{self.name}: strict sign margin s*F(s) <= -alpha*s^2 "
                    f"violated near s = {worst:.6g}"
                )
        else:
            bad = s * fs > slack
            if np.any(bad):
                worst = s[np.argmax(s * fs)]
                raise NonlinearityConditionError(
                    f"{self.name}: weak sign condition s*F(s) <= 0 "
                    f"violated near s = {worst:.6g}"
                )
        bound = self.lipschitz(rho_max)
        slopes = np.abs(np.diff(fs) / np.diff(s))
        if np.any(slopes > bound * (1.0 + 1e-9) + _SIGN_SLACK):
            raise NonlinearityConditionError(
                f"{self.name}: Lipschitz witness L({rho_max}) = {bound} exceeded "
                f"(sampled slope {slopes.max():.6g})"
            )


def make_nonlinearity(
    name: str,
    alpha: float = 0.0,
    coeffs: tuple[float, ...] | None = None,
    rho_max: float = 4.0,
) -> Nonlinearity:
    """Build and register a catalog nonlinearity.

    * ``linear``: ``F(s) = -alpha * s``
    * ``cubic``:  ``F(s) = -alpha * s - s**3``
    * ``zero``:   ``F = 0`` (weak mode, requires ``alpha == 0``)
    * ``poly``:   odd polynomial ``F(s) = c0*s + c1*s**3 + ...`` from
      ``coeffs``, declared strict when ``alpha > 0`` else weak.

    Registration fails with the violated condition named if the declared
    mode does not hold on the sampling grid.
    """
    if name == "linear":
        nl = Nonlinearity(
            name="linear",
            func=lambda s, a=alpha: -a * s,
            alpha=alpha,
            mode="strict" if alpha > 0 else "weak",
            lipschitz=lambda rho, a=alpha: a,
        )
    elif name == "cubic":
        nl = Nonlinearity(
            name="cubic",
            func=lambda s, a=alpha: -a * s - s ** 3,
            alpha=alpha,
            mode="strict" if alpha > 0 else "weak",
            lipschitz=lambda rho, a=alpha: a + 3.0 * rho * rho,
        )
    elif name == "zero":
        if alpha != 0.0:
            raise ParameterError("zero nonlinearity carries no margin; alpha must be 0")
        nl = Nonlinearity(
            name="zero",
            func=lambda s: np.zeros_like(s),
            alpha=0.0,
            mode="weak",
            lipschitz=lambda rho: 0.0,
        )
    elif name == "poly":
        if not coeffs:
            raise ParameterError("poly nonlinearity needs odd-power coefficients")
        cs = tuple(float(c) for c in coeffs)

        def _poly(s, cs=cs):
            out = np.zeros_like(s)
            for k, c in enumerate(cs):
                out += c * s ** (2 * k + 1)
            return out

        nl = Nonlinearity(
            name="poly",
            func=_poly,
            alpha=alpha,
            mode="strict" if alpha > 0 else "weak",
            lipschitz=lambda rho, cs=cs: sum(
                (2 * k + 1) * abs(c) * rho ** (2 * k) for k, c in enumerate(cs)
            ),
        )
    else:
        raise ParameterError(f"unknown nonlinearity '{name}'")
    nl.verify(rho_max=rho_max)
    return nl


# ----------------------------------------------------------------------
# right-hand sides


def rhs_finite(
    v,
    t: float,
    params: LatticeParams,
    nonlin: Nonlinearity,
    forcing: QuasiPeriodicForcing,
):
    """Wrapped finite system: ``-nu*A v - lam*v + F(v) + f(t)``.

    The forcing is expected to be already truncated or wrapped to width
    ``2n + 1``; modes beyond the window are ignored.  Acts on the last axis,
    so stacked trajectories integrate in one call.
    """
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != params.dim:
        raise DimensionError(
            f"state width {v.shape[-1]} does not match 2n+1 = {params.dim}"
        )
    drift = -params.nu * apply_laplacian(v, params.n) - params.lam * v
    return drift + nonlin.func(v) + forcing.eval_window(t, params.n)


def _line_laplacian(u: np.ndarray) -> np.ndarray:
    """Two-sided stencil ``u_{i-1} - 2 u_i + u_{i+1}`` with zero ghost cells."""
    out = -2.0 * u
    out[..., :-1] += u[..., 1:]
    out[..., 1:] += u[..., :-1]
    return out


def rhs_reference(
    u: PaddedState,
    t: float,
    params: LatticeParams,
    nonlin: Nonlinearity,
    forcing: QuasiPeriodicForcing,
    boundary_floor: float = 1e-8,
) -> PaddedState:
    """Padded stand-in for the full two-sided system:
    ``nu*(u_{i-1} - 2u_i + u_{i+1}) - lam*u + F(u) + f(t)`` on a working
    array with zero ghost cells.

    Raises :class:`BoundaryContaminationError` when the edge components
    exceed ``boundary_floor``, signalling that the working width is too
    small for the run.
    """
    rhs = make_reference_rhs(params, nonlin, forcing, u.half_width, boundary_floor)
    return PaddedState(rhs(t, u.values), u.half_width)


def make_finite_rhs(
    params: LatticeParams,
    nonlin: Nonlinearity,
    forcing: QuasiPeriodicForcing,
) -> Callable[[float, np.ndarray], np.ndarray]:
    """Integrator-ready closure over :func:`rhs_finite`."""

    def rhs(t: float, v: np.ndarray) -> np.ndarray:
        return rhs_finite(v, t, params, nonlin, forcing)

    return rhs


def make_reference_rhs(
    params: LatticeParams,
    nonlin: Nonlinearity,
    forcing: QuasiPeriodicForcing,
    n_work: int,
    boundary_floor: float = 1e-8,
) -> Callable[[float, np.ndarray], np.ndarray]:
    """Integrator-ready closure for the padded reference system with a
    boundary-contamination monitor on every evaluation."""
    if n_work < 1:
        raise ParameterError(f"working half-width must be >= 1, got {n_work}")
    width = 2 * n_work + 1

    def rhs(t: float, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape[-1] != width:
            raise DimensionError(
                f"state width {u.shape[-1]} does not match working width {width}"
            )
        edge = max(np.abs(u[..., 0]).max(), np.abs(u[..., -1]).max())
        if edge > boundary_floor:
            raise BoundaryContaminationError(
                f"edge amplitude {edge:.3e} exceeds floor {boundary_floor:.3e} "
                f"at t = {t:.6g}; increase the working half-width"
            )
        drift = params.nu * _line_laplacian(u) - params.lam * u
        return drift + nonlin.func(u) + forcing.eval_window(t, n_work)

    return rhs


# ----------------------------------------------------------------------
# integrator


def max_stable_step(params: LatticeParams, nonlin: Nonlinearity, rho: float) -> float:
    """Step bound ``safety / (4 nu + lam + L_F(rho))`` for the explicit
    scheme, using the operator-norm bound ``||A|| <= 4`` on a ball of
    radius ``rho``."""
    if rho <= 0.0:
        raise ParameterError(f"ball radius must be > 0, got {rho}")
    return STABILITY_SAFETY / (4.0 * params.nu + params.lam + nonlin.lipschitz(rho))


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped state samples from a single integration run."""

    times: np.ndarray
    states: np.ndarray
    step: float
    scheme: str = "rk4"
    sample_stride: int = 1

    def __post_init__(self) -> None:
        if len(self.times) != len(self.states):
            raise DimensionError("times and states disagree in length")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("sample times must be strictly increasing")
        if not np.all(np.isfinite(self.states)):
            raise ValueError("trajectory contains non-finite states")

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def norms_sq(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self.states, self.states)


def rk4_step(rhs, t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _step_count(t0: float, t1: float, h: float) -> int:
    span = t1 - t0
    if span == 0.0:
        return 0
    return max(1, math.ceil(span / h - 1e-12))


def integrate(
    rhs,
    v0,
    t0: float,
    t1: float,
    h: float,
    sample_stride: int = 1,
) -> Trajectory:
    """Classical fixed-step RK4 from ``t0`` to ``t1``.

    The final step is shortened to land exactly on ``t1``.  States are
    recorded at ``t0``, every ``sample_stride``-th accepted step, and ``t1``.
    Raises :class:`DivergenceError` naming the step index on a non-finite
    state.
    """
    if h <= 0.0:
        raise ParameterError(f"step must be > 0, got {h}")
    if t1 < t0:
        raise ParameterError(f"t1 = {t1} precedes t0 = {t0}")
    if sample_stride < 1:
        raise ParameterError("sample_stride must be >= 1")
    y = np.array(v0, dtype=float)
    if y.ndim != 1:
        raise DimensionError("integrate expects a single state vector")
    times = [t0]
    states = [y.copy()]
    n_steps = _step_count(t0, t1, h)
    for k in range(n_steps):
        t = t0 + k * h
        step = min(h, t1 - t)
        y = rk4_step(rhs, t, y, step)
        if not np.all(np.isfinite(y)):
            raise DivergenceError(f"non-finite state after step {k} (t = {t + step:.6g})")
        if (k + 1) % sample_stride == 0 or k == n_steps - 1:
            times.append(t1 if k == n_steps - 1 else t + step)
            states.append(y.copy())
    return Trajectory(
        times=np.asarray(times),
        states=np.asarray(states),
        step=h,
        sample_stride=sample_stride,
    )


def integrate_final(rhs, v0, t0: float, t1: float, h: float) -> np.ndarray:
    """Endpoint-only integration; accepts a stack of initial rows and steps
    them together through the shared right-hand side."""
    if h <= 0.0:
        raise ParameterError(f"step must be > 0, got {h}")
    if t1 < t0:
        raise ParameterError(f"t1 = {t1} precedes t0 = {t0}")
    y = np.array(v0, dtype=float)
    for k in range(_step_count(t0, t1, h)):
        t = t0 + k * h
        y = rk4_step(rhs, t, y, min(h, t1 - t))
        if not np.all(np.isfinite(y)):
            bad = "state"
            if y.ndim == 2:
                rows = np.nonzero(~np.all(np.isfinite(y), axis=-1))[0]
                bad = f"row {rows[0]}"
            raise DivergenceError(f"non-finite {bad} after step {k} (t = {t:.6g})")
    return y


def cocycle_property_check(
    v0,
    forcing: QuasiPeriodicForcing,
    t: float,
    tau: float,
    params: LatticeParams,
    nonlin: Nonlinearity,
    h: float,
    direct_step: float | None = None,
) -> float:
    """Two-path composition defect of the numerical solution operator:

        || phi(t, phi(tau, v0, f), shift(tau, f)) - phi(t + tau, v0, f) ||

    Both legs of the composed path use step ``h``; the direct path uses
    ``direct_step`` (defaults to ``h``).  Passing a refined ``direct_step``
    turns the direct path into a reference solution, exposing the composed
    path's full fourth-order discretization error instead of the near
    cancellation between two equally resolved paths.
    """
    if t < 0.0 or tau < 0.0:
        raise ParameterError("t and tau must be >= 0")
    rhs = make_finite_rhs(params, nonlin, forcing)
    mid = integrate_final(rhs, v0, 0.0, tau, h)
    rhs_shifted = make_finite_rhs(params, nonlin, forcing.shift(tau))
    composed = integrate_final(rhs_shifted, mid, 0.0, t, h)
    direct = integrate_final(rhs, v0, 0.0, t + tau, direct_step or h)
    return float(np.linalg.norm(composed - direct))
