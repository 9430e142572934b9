"""Sampling grids on the disc, the exterior disc, and annuli.

Grids are polar tensor products returned as 2-d complex arrays indexed
(radius, angle).  Criteria over open regions approach the boundary without
touching it: disc radii stop at ``R_DISC`` = 0.999, exterior radii start at
``R_EXT_LO`` = 1.001.  When a supremum is taken over a grid, ties resolve to
the first point in row-major order, so sweeps are deterministic regardless of
how the evaluation was parallelized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

R_DISC = 0.999
R_EXT_LO = 1.001
R_EXT_HI = 10.0

# hard cap so a typo in a flag cannot allocate tens of gigabytes
MAX_GRID_POINTS = 1 << 24


@dataclass(frozen=True)
class GridSpec:
    """Polar grid resolution: n_r radii by n_theta angles."""

    n_r: int = 96
    n_theta: int = 96

    def __post_init__(self) -> None:
        if self.n_r < 1 or self.n_theta < 1:
            raise ValueError("grid must have at least one radius and angle")
        if self.n_r * self.n_theta > MAX_GRID_POINTS:
            raise ValueError(
                f"grid of {self.n_r}x{self.n_theta} exceeds the "
                f"{MAX_GRID_POINTS} point cap"
            )

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse 'NRxNT' (as in '128x256')."""
        parts = text.lower().split("x")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"grid spec {text!r} is not of the form NRxNT")
        return cls(int(parts[0]), int(parts[1]))


def _angles(n_theta: int) -> np.ndarray:
    return np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)


def disc_grid(spec: GridSpec, r_max: float = R_DISC) -> np.ndarray:
    """Points r_j e^{i theta_k} with r_j = j/n_r * r_max, j = 1..n_r."""
    radii = (np.arange(1, spec.n_r + 1) / spec.n_r) * r_max
    return radii[:, None] * np.exp(1j * _angles(spec.n_theta))[None, :]


def exterior_grid(
    spec: GridSpec, r_lo: float = R_EXT_LO, r_hi: float = R_EXT_HI
) -> np.ndarray:
    """Exterior points on geometrically spaced radii in [r_lo, r_hi].

    Geometric spacing concentrates samples near the seam, where the
    exterior functionals peak.  The chart point at infinity is handled
    separately by callers (it has no finite coordinates).
    """
    radii = np.geomspace(r_lo, r_hi, spec.n_r)
    return radii[:, None] * np.exp(1j * _angles(spec.n_theta))[None, :]


def annulus_grid(spec: GridSpec, r_lo: float, r_hi: float) -> np.ndarray:
    """Linearly spaced annulus, used by refinement sweeps near the seam."""
    radii = np.linspace(r_lo, r_hi, spec.n_r)
    return radii[:, None] * np.exp(1j * _angles(spec.n_theta))[None, :]


def argmax_2d(values: np.ndarray) -> tuple[int, int]:
    """Row-major index of the maximum; NaNs never win."""
    flat = np.where(np.isnan(values), -np.inf, values).ravel()
    idx = int(np.argmax(flat))
    return idx // values.shape[1], idx % values.shape[1]
