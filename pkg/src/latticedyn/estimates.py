"""Closed-form constants from the a priori energy estimates: the Gronwall
envelope, the absorbing radius, the smooth cutoff, burn-in times, and tail
mass on states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError, StrictModeRequiredError
from .state import PaddedState
from .dynamics import Trajectory

#: Slope bound of the unit cutoff profile; the cubic smoothstep attains
#: its steepest slope 3/2 at the midpoint of the bridge.
CUTOFF_SLOPE_BOUND = 1.5


def asymptotic_radius_sq(lam: float, alpha: float, forcing_bound: float) -> float:
    """Squared radius ``C**2 / (lam * (lam + 2*alpha))`` that forced energy
    settles into."""
    if lam <= 0.0:
        raise ParameterError(f"decay rate must be > 0, got {lam}")
    if alpha < 0.0:
        raise ParameterError(f"margin must be >= 0, got {alpha}")
    return forcing_bound ** 2 / (lam * (lam + 2.0 * alpha))


def gronwall_bound(
    lam: float,
    alpha: float,
    forcing_bound: float,
    v0_norm: float,
    horizon: float,
) -> float:
    """Norm bound after time ``horizon`` from the energy inequality
    ``y' <= -(lam + 2*alpha) y + C**2 / lam``:

        M = sqrt( exp(-(lam+2a)T) * (||v0||^2 - b) + b ),
        b = C^2 / (lam (lam + 2a)),

    with the decaying term clamped at zero when the initial energy already
    sits below ``b``, so M stays a valid bound in both directions.
    """
    if horizon < 0.0:
        raise ParameterError(f"horizon must be >= 0, got {horizon}")
    base = asymptotic_radius_sq(lam, alpha, forcing_bound)
    decaying = math.exp(-(lam + 2.0 * alpha) * horizon) * (v0_norm ** 2 - base)
    return math.sqrt(max(decaying, 0.0) + base)


@dataclass(frozen=True)
class AbsorbingBall:
    """Ball that trajectories from ``||v0||`` enter within ``horizon``."""

    radius: float
    asymptotic_radius: float
    horizon: float
    lam: float
    alpha: float
    forcing_bound: float
    initial_norm: float


def absorbing_ball(
    lam: float,
    alpha: float,
    forcing_bound: float,
    v0_norm: float,
    horizon: float,
) -> AbsorbingBall:
    return AbsorbingBall(
        radius=gronwall_bound(lam, alpha, forcing_bound, v0_norm, horizon),
        asymptotic_radius=math.sqrt(asymptotic_radius_sq(lam, alpha, forcing_bound)),
        horizon=horizon,
        lam=lam,
        alpha=alpha,
        forcing_bound=forcing_bound,
        initial_norm=v0_norm,
    )


def cutoff_eval(k: int, s: float) -> float:
    """Smooth cutoff ``xi_k``: zero up to ``k``, one from ``2k`` on, with a
    cubic smoothstep bridge in between; ``|xi_k'| <= 1.5 / k``."""
    if k < 1:
        raise ParameterError(f"cutoff scale must be >= 1, got {k}")
    if s < 0.0:
        raise ParameterError(f"cutoff argument must be >= 0, got {s}")
    tau = s / k - 1.0
    if tau <= 0.0:
        return 0.0
    if tau >= 1.0:
        return 1.0
    return tau * tau * (3.0 - 2.0 * tau)


def burn_in_time(alpha: float, ball_norm_sq: float, eps: float) -> float:
    """Time ``max(0, (1/alpha) * ln(alpha * ||Q||^2 / eps))`` after which the
    cutoff-weighted energy has decayed below the forcing-driven floor."""
    if alpha <= 0.0:
        raise StrictModeRequiredError(
            "burn-in formula needs a strict margin alpha > 0"
        )
    if eps <= 0.0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    if ball_norm_sq <= 0.0:
        raise ParameterError(f"ball_norm_sq must be > 0, got {ball_norm_sq}")
    return max(0.0, math.log(alpha * ball_norm_sq / eps) / alpha)


def tail_mass(w, k: int) -> float:
    """Mass ``sum_{|i| >= k} |w_i|^2`` over the stored sites of ``w``.

    ``w`` is a :class:`PaddedState` or an odd-length array over centered
    logical sites.  Sites beyond the stored range are zero by embedding, so
    ``k`` past the half-width simply yields zero.
    """
    if k < 0:
        raise ParameterError(f"tail index must be >= 0, got {k}")
    values = w.values if isinstance(w, PaddedState) else np.asarray(w, dtype=float)
    if values.ndim != 1 or values.size % 2 != 1:
        raise ParameterError("state must be one-dimensional with odd length")
    half = (values.size - 1) // 2
    if k == 0:
        return float(np.dot(values, values))
    if k > half:
        return 0.0
    lo = values[:half - k + 1]
    hi = values[half + k:]
    return float(np.dot(lo, lo) + np.dot(hi, hi))


def calibrate_tail_index(
    nu: float,
    alpha: float,
    ball_norm_sq: float,
    tail_bound: Callable[[int], float],
    eps: float,
    slope_bound: float = CUTOFF_SLOPE_BOUND,
    k_max: int = 10 ** 9,
) -> int:
    """Smallest cutoff scale ``k`` with

        nu * 4 * C0 * ||Q||^2 / k  +  (1/alpha) * sup-tail(f beyond k)  <=  eps * alpha / 2,

    where ``tail_bound(m)`` bounds ``sup_t sum_{|i| > m} |f_i(t)|^2``.  The
    returned scale does not depend on any truncation order.
    """
    if alpha <= 0.0:
        raise StrictModeRequiredError("tail calibration needs alpha > 0")
    if eps <= 0.0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    budget = eps * alpha / 2.0

    def load(k: int) -> float:
        return nu * 4.0 * slope_bound * ball_norm_sq / k + tail_bound(k - 1) / alpha

    # the load is nonincreasing in k: bracket then bisect for the first hit
    lo, hi = 1, 1
    while load(hi) > budget:
        hi *= 2
        if hi > k_max:
            raise ParameterError(
                f"no cutoff scale below {k_max} meets eps = {eps}"
            )
    while lo < hi:
        mid = (lo + hi) // 2
        if load(mid) <= budget:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass(frozen=True)
class EnergyDecayReport:
    """Outcome of checking the discrete energy envelope along a trajectory."""

    violations: tuple[tuple[int, float], ...]
    max_excess: float
    samples_checked: int
    margin: float

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_energy_decay(
    traj: Trajectory,
    lam: float,
    alpha: float,
    forcing_bound: float,
    margin: float = 0.05,
) -> EnergyDecayReport:
    """Check every consecutive sample pair against the discrete shadow of the
    energy inequality:

        y_{k+1} <= y_k * exp(-(lam + 2*alpha) * dt) + (C^2 / lam) * dt * (1 + margin).

    The margin absorbs integration error; the report lists violating pairs
    with their excess.
    """
    if lam <= 0.0:
        raise ParameterError(f"decay rate must be > 0, got {lam}")
    y = traj.norms_sq()
    dts = np.diff(traj.times)
    rate = lam + 2.0 * alpha
    allowed = y[:-1] * np.exp(-rate * dts) + (forcing_bound ** 2 / lam) * dts * (1.0 + margin)
    excess = y[1:] - allowed
    bad = np.nonzero(excess > 0.0)[0]
    violations = tuple((int(k), float(excess[k])) for k in bad)
    return EnergyDecayReport(
        violations=violations,
        max_excess=float(excess.max(initial=-math.inf)),
        samples_checked=len(dts),
        margin=margin,
    )
