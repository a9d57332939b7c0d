"""Concrete translation-compact forcing built from square-summable sine modes.

Every forcing assigns to lattice site ``i`` the scalar signal

    f_i(t) = a_i * sin(w_i * t + p_i),

with ``sum_i a_i**2`` finite, certified by construction.  Two storage forms
are supported:

* ``finite``    -- explicit mode table on ``|i| <= m`` with per-site
  amplitude, frequency, and phase;
* ``geometric`` -- ``a_i = a0 * r**|i|`` on all of Z (``0 < r < 1``) with one
  shared frequency and phase, so norms and mode tails have closed forms.

Time shifts are tracked through an exact shift accumulator, which makes the
shift group law and the shift-equivariance of the truncation and wrap
projections hold to the last bit.
"""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from .errors import ConfigError, ParameterError, UnsupportedForcingError
from .state import PaddedState

_SUPPORT_CAP = 10_000  # widest window a geometric forcing will materialize


class QuasiPeriodicForcing:
    """Immutable quasi-periodic forcing; construct via :meth:`finite`,
    :meth:`geometric`, or :meth:`zero`."""

    __slots__ = (
        "_kind",
        "_amplitudes",
        "_frequencies",
        "_phases",
        "_support",
        "_amplitude0",
        "_decay_rate",
        "_frequency",
        "_phase",
        "_offset",
    )

    def __init__(self, *, _kind: str, **fields) -> None:
        self._kind = _kind
        self._amplitudes = fields.get("amplitudes")
        self._frequencies = fields.get("frequencies")
        self._phases = fields.get("phases")
        self._support = fields.get("support")
        self._amplitude0 = fields.get("amplitude0")
        self._decay_rate = fields.get("decay_rate")
        self._frequency = fields.get("frequency")
        self._phase = fields.get("phase")
        self._offset = fields.get("offset", 0.0)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def finite(
        cls,
        amplitudes,
        frequencies,
        phases=0.0,
        *,
        time_offset: float = 0.0,
    ) -> "QuasiPeriodicForcing":
        """Mode table over logical sites ``-m .. m`` (array length ``2m+1``).

        Scalars for ``frequencies`` or ``phases`` broadcast over all sites.
        """
        a = np.atleast_1d(np.asarray(amplitudes, dtype=float)).copy()
        if a.ndim != 1 or a.size % 2 != 1:
            raise ParameterError("amplitude table must be 1-D with odd length")
        w = np.broadcast_to(np.asarray(frequencies, dtype=float), a.shape).copy()
        p = np.broadcast_to(np.asarray(phases, dtype=float), a.shape).copy()
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(w)) and np.all(np.isfinite(p))):
            raise ParameterError("mode table contains non-finite entries")
        m = (a.size - 1) // 2
        a.setflags(write=False)
        w.setflags(write=False)
        p.setflags(write=False)
        return cls(
            _kind="finite",
            amplitudes=a,
            frequencies=w,
            phases=p,
            support=m,
            offset=float(time_offset),
        )

    @classmethod
    def geometric(
        cls,
        amplitude0: float,
        decay_rate: float,
        frequency: float,
        phase: float = 0.0,
        *,
        time_offset: float = 0.0,
    ) -> "QuasiPeriodicForcing":
        """Geometric amplitude profile ``a_i = amplitude0 * decay_rate**|i|``."""
        if not 0.0 < decay_rate < 1.0:
            raise ParameterError(f"decay_rate must lie in (0, 1), got {decay_rate}")
        if amplitude0 < 0.0:
            raise ParameterError(f"amplitude0 must be >= 0, got {amplitude0}")
        return cls(
            _kind="geometric",
            amplitude0=float(amplitude0),
            decay_rate=float(decay_rate),
            frequency=float(frequency),
            phase=float(phase),
            offset=float(time_offset),
        )

    @classmethod
    def zero(cls) -> "QuasiPeriodicForcing":
        return cls.finite([0.0], 0.0, 0.0)

    # ------------------------------------------------------------------
    # structure

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def support(self) -> int | None:
        """Stored support half-width; ``None`` for an infinite geometric profile."""
        return self._support if self._kind == "finite" else None

    @property
    def decay_rate(self) -> float | None:
        return self._decay_rate if self._kind == "geometric" else None

    @property
    def time_offset(self) -> float:
        return self._offset

    def mode_table(self, window: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Base amplitude/frequency/phase arrays for ``|i| <= window``.

        The shift accumulator is *not* folded into the returned phases; carry
        ``time_offset`` alongside when rebuilding a forcing from the table.
        """
        if window < 0:
            raise ParameterError("window must be >= 0")
        width = 2 * window + 1
        if self._kind == "finite":
            a = np.zeros(width)
            w = np.zeros(width)
            p = np.zeros(width)
            m = self._support
            lo = max(-window, -m)
            hi = min(window, m)
            if lo <= hi:
                a[lo + window:hi + window + 1] = self._amplitudes[lo + m:hi + m + 1]
                w[lo + window:hi + window + 1] = self._frequencies[lo + m:hi + m + 1]
                p[lo + window:hi + window + 1] = self._phases[lo + m:hi + m + 1]
            return a, w, p
        sites = np.abs(np.arange(-window, window + 1))
        a = self._amplitude0 * self._decay_rate ** sites
        return a, np.full(width, self._frequency), np.full(width, self._phase)

    def effective_support(self, tol: float = 1e-16) -> int:
        """Smallest window whose amplitude tail norm is below ``tol``."""
        if self._kind == "finite":
            return self._support
        if self._amplitude0 == 0.0:
            return 0
        # solve 2 a0^2 r^(2(n+1)) / (1 - r^2) <= tol^2 for n
        r = self._decay_rate
        target = tol * tol * (1.0 - r * r) / (2.0 * self._amplitude0 ** 2)
        if target <= 0.0:
            return _SUPPORT_CAP
        n = math.log(target) / (2.0 * math.log(r)) - 1.0
        return int(min(max(math.ceil(n), 0), _SUPPORT_CAP))

    # ------------------------------------------------------------------
    # evaluation

    def eval_window(self, t: float, window: int):
        """Component values ``f_i(t)`` for ``|i| <= window`` as an array."""
        a, w, p = self.mode_table(window)
        return a * np.sin(w * (t + self._offset) + p)

    def eval_state(self, t: float, window: int) -> PaddedState:
        """Same as :meth:`eval_window`, embedded as a padded state."""
        return PaddedState(self.eval_window(t, window), window)

    def norm_sq_at(self, t: float) -> float:
        """Exact squared sequence norm of ``f(t)``."""
        if self._kind == "finite":
            v = self.eval_window(t, self._support)
            return float(np.dot(v, v))
        s = math.sin(self._frequency * (t + self._offset) + self._phase)
        return self.total_energy() * s * s

    def norm_at(self, t: float) -> float:
        return math.sqrt(self.norm_sq_at(t))

    # ------------------------------------------------------------------
    # closed-form certificates

    def total_energy(self) -> float:
        """``sum_i a_i**2``, the square-summability certificate."""
        if self._kind == "finite":
            return float(np.dot(self._amplitudes, self._amplitudes))
        r2 = self._decay_rate ** 2
        return self._amplitude0 ** 2 * (1.0 + r2) / (1.0 - r2)

    def uniform_bound(self) -> float:
        """Time-uniform norm bound, valid for every shift and every
        truncation or wrap image (projections only drop or relocate modes)."""
        return math.sqrt(self.total_energy())

    def tail(self, n: int, t: float) -> float:
        """Mode-tail mass ``sum_{|i| >= n+1} |f_i(t)|**2``, exact."""
        if n < 0:
            raise ParameterError("tail order must be >= 0")
        if self._kind == "finite":
            if n >= self._support:
                return 0.0
            v = self.eval_window(t, self._support)
            head = v[self._support - n:self._support + n + 1]
            return float(np.dot(v, v) - np.dot(head, head))
        s = math.sin(self._frequency * (t + self._offset) + self._phase)
        return self.tail_sup_bound(n) * s * s

    def tail_sup_bound(self, n: int) -> float:
        """Upper bound for ``sup_t`` of :meth:`tail`; exact (attained) when all
        modes share one frequency and phase."""
        if n < 0:
            raise ParameterError("tail order must be >= 0")
        if self._kind == "finite":
            if n >= self._support:
                return 0.0
            a = self._amplitudes
            m = self._support
            head = a[m - n:m + n + 1]
            return float(np.dot(a, a) - np.dot(head, head))
        r2 = self._decay_rate ** 2
        return 2.0 * self._amplitude0 ** 2 * r2 ** (n + 1) / (1.0 - r2)

    def time_lipschitz(self) -> float:
        """Global Lipschitz constant in time, ``sqrt(sum a_i^2 w_i^2)``."""
        if self._kind == "finite":
            aw = self._amplitudes * self._frequencies
            return float(math.sqrt(np.dot(aw, aw)))
        return abs(self._frequency) * self.uniform_bound()

    # ------------------------------------------------------------------
    # shift flow

    def shift(self, h: float) -> "QuasiPeriodicForcing":
        """Time translate: the shifted forcing evaluates as ``f(t + h)``."""
        if self._kind == "finite":
            return QuasiPeriodicForcing(
                _kind="finite",
                amplitudes=self._amplitudes,
                frequencies=self._frequencies,
                phases=self._phases,
                support=self._support,
                offset=self._offset + h,
            )
        return QuasiPeriodicForcing(
            _kind="geometric",
            amplitude0=self._amplitude0,
            decay_rate=self._decay_rate,
            frequency=self._frequency,
            phase=self._phase,
            offset=self._offset + h,
        )

    def __repr__(self) -> str:
        if self._kind == "finite":
            return (
                f"QuasiPeriodicForcing(finite, support={self._support}, "
                f"offset={self._offset!r})"
            )
        return (
            f"QuasiPeriodicForcing(geometric, a0={self._amplitude0!r}, "
            f"r={self._decay_rate!r}, w={self._frequency!r}, offset={self._offset!r})"
        )


# ----------------------------------------------------------------------
# module-level operations


def equicontinuity_modulus(f: QuasiPeriodicForcing, eps: float) -> float:
    """Largest step ``delta`` with ``|t1-t2| < delta`` forcing
    ``||f(t1)-f(t2)|| < eps``, from the analytic time-Lipschitz bound.

    The bound is uniform over all of R.  Returns ``inf`` for a constant
    (zero) forcing: any step works.
    """
    if eps <= 0.0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    lip = f.time_lipschitz()
    if not math.isfinite(lip):
        raise UnsupportedForcingError("frequency-weighted mode sum diverges")
    if lip == 0.0:
        return math.inf
    return eps / lip


def bebutov_distance(
    f: QuasiPeriodicForcing,
    g: QuasiPeriodicForcing,
    l_max: float,
    dt: float,
) -> float:
    """Grid approximation of the compact-open metric

        d(f, g) = sup_{L>0} min( max_{|t|<=L} ||f(t)-g(t)||, 1/L ).

    The inner max is scanned on a grid of spacing ``dt``, so the result
    approximates the metric from below.  Diagnostics only.
    """
    if l_max <= 0.0 or dt <= 0.0:
        raise ParameterError("l_max and dt must be positive")
    window = max(f.effective_support(1e-12), g.effective_support(1e-12))
    ts = np.arange(0.0, l_max + 0.5 * dt, dt)
    running = 0.0
    best = 0.0
    for t in ts:
        for tt in ((t, -t) if t > 0.0 else (t,)):
            d = f.eval_window(tt, window) - g.eval_window(tt, window)
            running = max(running, float(np.linalg.norm(d)))
        scale = max(t, dt)
        best = max(best, min(running, 1.0 / scale))
    return best


def forcing_from_config(mapping: Mapping[str, str]) -> QuasiPeriodicForcing:
    """Build a forcing from flat config keys.

    Required: ``support`` (``finite`` | ``geometric``), ``amplitude0``,
    ``decay_rate``, ``frequency_rule``, ``phase_rule``.  Finite support
    additionally needs ``support_radius``; its frequency and phase rules may
    be a single number or a per-site list of length ``2*support_radius + 1``.
    """
    allowed = {
        "support",
        "amplitude0",
        "decay_rate",
        "support_radius",
        "frequency_rule",
        "phase_rule",
    }
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown forcing keys: {sorted(unknown)}")

    def _get(key: str, default: str | None = None) -> str:
        if key in mapping:
            return mapping[key]
        if default is None:
            raise ConfigError(f"missing forcing key '{key}'")
        return default

    def _rule(key: str, width: int) -> np.ndarray:
        parts = _get(key, "0.0").split()
        try:
            vals = [float(x) for x in parts]
        except ValueError as exc:
            raise ConfigError(f"bad numeric list for '{key}'") from exc
        if len(vals) == 1:
            return np.full(width, vals[0])
        if len(vals) != width:
            raise ConfigError(
                f"'{key}' must have 1 or {width} entries, got {len(vals)}"
            )
        return np.asarray(vals)

    support = _get("support").strip().lower()
    try:
        amplitude0 = float(_get("amplitude0"))
        decay = float(_get("decay_rate", "0.5"))
    except ValueError as exc:
        raise ConfigError("amplitude0/decay_rate must be numeric") from exc

    if support == "geometric":
        freq = _rule("frequency_rule", 1)
        phase = _rule("phase_rule", 1)
        try:
            return QuasiPeriodicForcing.geometric(
                amplitude0, decay, float(freq[0]), float(phase[0])
            )
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc
    if support == "finite":
        try:
            radius = int(_get("support_radius"))
        except ValueError as exc:
            raise ConfigError("support_radius must be an integer") from exc
        if radius < 0:
            raise ConfigError("support_radius must be >= 0")
        width = 2 * radius + 1
        sites = np.abs(np.arange(-radius, radius + 1))
        amps = amplitude0 * decay ** sites
        return QuasiPeriodicForcing.finite(
            amps, _rule("frequency_rule", width), _rule("phase_rule", width)
        )
    raise ConfigError(f"support must be 'finite' or 'geometric', got '{support}'")
