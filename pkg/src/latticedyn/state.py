"""Sequence-space states stored as center-aligned arrays with zero padding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError


@dataclass(frozen=True, eq=False)
class PaddedState:
    """A real state over logical sites ``-half_width .. half_width``.

    Entries outside the array are zero by convention, so the array is the
    image of a finite-dimensional state under the isometric zero-padding
    embedding.  Storage index of logical site ``i`` is ``i + half_width``.
    """

    values: np.ndarray
    half_width: int

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if self.half_width < 0:
            raise CapacityError(f"half_width must be >= 0, got {self.half_width}")
        if values.ndim != 1 or values.shape[0] != 2 * self.half_width + 1:
            raise DimensionError(
                f"expected array of length {2 * self.half_width + 1}, "
                f"got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("state contains non-finite entries")
        object.__setattr__(self, "values", values)

    def component(self, i: int) -> float:
        """Value at logical site ``i``; exactly zero outside the stored range."""
        if abs(i) > self.half_width:
            return 0.0
        return float(self.values[i + self.half_width])

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def norm_sq(self) -> float:
        return float(np.dot(self.values, self.values))

    def repad(self, half_width: int) -> "PaddedState":
        """Re-embed into a wider array; widening never changes the norm."""
        if half_width < self.half_width:
            raise CapacityError(
                f"cannot narrow from half_width {self.half_width} to {half_width}"
            )
        pad = half_width - self.half_width
        return PaddedState(np.pad(self.values, pad), half_width)

    def restrict(self, n: int) -> np.ndarray:
        """Central slice covering logical sites ``-n .. n`` as a fresh array."""
        if n > self.half_width:
            raise CapacityError(f"cannot restrict to {n} > half_width {self.half_width}")
        lo = self.half_width - n
        return self.values[lo:lo + 2 * n + 1].copy()


def pad_to_width(values: np.ndarray, half_width: int, target: int) -> np.ndarray:
    """Center-pad a raw state array (or stack of them) to a wider half-width."""
    if target < half_width:
        raise CapacityError(f"cannot narrow from half_width {half_width} to {target}")
    pad = target - half_width
    if pad == 0:
        return np.asarray(values, dtype=float)
    widths = [(0, 0)] * (np.ndim(values) - 1) + [(pad, pad)]
    return np.pad(np.asarray(values, dtype=float), widths)
