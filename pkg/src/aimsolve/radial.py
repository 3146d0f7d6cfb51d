"""Sampled radial wavefunctions shared by the iterative and closed-form paths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RadialWavefunction", "MIN_GRID_POINTS"]

MIN_GRID_POINTS = 64


@dataclass(frozen=True)
class RadialWavefunction:
    """Reduced radial function R(r) sampled on an ascending r-grid.

    Normalized so that the trapezoid integral of R**2 over the grid is 1.
    """

    r: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @staticmethod
    def normalized(r, values) -> "RadialWavefunction":
        r = np.asarray(r, dtype=float)
        v = np.asarray(values, dtype=float)
        norm = np.sqrt(np.trapezoid(v * v, r))
        if norm == 0:
            raise ValueError("cannot normalize an identically-zero sample")
        return RadialWavefunction(r, v / norm)

    @property
    def node_count(self) -> int:
        """Interior sign changes, ignoring numerically-dead samples."""
        v = self.values
        scale = np.max(np.abs(v))
        if scale == 0:
            return 0
        live = v[np.abs(v) > 1e-12 * scale]
        signs = np.sign(live)
        return int(np.sum(signs[1:] != signs[:-1]))
