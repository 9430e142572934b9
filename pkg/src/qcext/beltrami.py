"""Finite-difference complex dilatation of extended maps.

Wirtinger derivatives come from a 4-point stencil with relative step; the
dilatation mu = F_zbar / F_z is measured on polar grids on both sides of the
unit circle and on a chart around infinity, then certified against the bound
the builder claimed.  Everything here treats the map as a black-box
evaluator: the point is to confirm the closed forms by an estimator that
knows nothing about them.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .classifiers import POLE_EXCLUSION
from .errors import PreconditionError
from .extensions import SEAM_EPS, TAU_SEAM, ExtendedMap, SeamGap, seam_gap
from .grids import MAX_GRID_POINTS
from .sphere import is_infinity

TAU_MU = 1e-3
DEGENERATE_TOL = 1e-12
H_SCALE = 1e-5
SEAM_MARGIN = 1e-4
CHART_RADIUS = 10.0

REGIONS = ("disc", "exterior_annulus", "sphere")


class DegenerateFieldError(ArithmeticError):
    """Too many stencil points with vanishing F_z to trust the field."""


def _threads() -> int:
    try:
        n = int(os.environ.get("QCX_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


@dataclass(frozen=True)
class FieldGrid:
    """Polar sampling layout for dilatation sweeps.

    region picks the side of the seam ("sphere" takes both).  r_bounds
    defaults leave a SEAM_MARGIN cushion so stencils never straddle the
    circle.  exclusions are (center, radius) holes, on top of the holes
    beltrami_field punches around the map's own special points.
    """

    region: str = "sphere"
    n_r: int = 96
    n_theta: int = 96
    r_bounds: Optional[Tuple[float, float]] = None
    exclusions: Tuple[Tuple[complex, float], ...] = ()

    def __post_init__(self):
        if self.region not in REGIONS:
            raise ValueError(f"unknown region {self.region!r}")
        if self.n_r < 1 or self.n_theta < 1:
            raise ValueError("grid must be at least 1x1")
        sides = 2 if self.region == "sphere" else 1
        if sides * self.n_r * self.n_theta > MAX_GRID_POINTS:
            raise ValueError("grid exceeds the evaluation budget")
        if self.r_bounds is not None:
            lo, hi = self.r_bounds
            if not 0 < lo < hi:
                raise ValueError("r_bounds must be ordered and positive")

    def points(self) -> np.ndarray:
        th = 2.0 * np.pi * (np.arange(self.n_theta) + 0.5) / self.n_theta
        rays = np.exp(1j * th)

        def polar(lo, hi):
            radii = np.linspace(lo, hi, self.n_r)
            return (radii[:, None] * rays[None, :]).ravel()

        if self.region == "disc":
            lo, hi = self.r_bounds or (0.05, 1.0 - SEAM_MARGIN)
            return polar(lo, min(hi, 1.0 - SEAM_MARGIN))
        if self.region == "exterior_annulus":
            lo, hi = self.r_bounds or (1.0 + SEAM_MARGIN, CHART_RADIUS)
            return polar(max(lo, 1.0 + SEAM_MARGIN), hi)
        lo, hi = self.r_bounds or (0.05, CHART_RADIUS)
        return np.concatenate(
            [polar(lo, 1.0 - SEAM_MARGIN), polar(1.0 + SEAM_MARGIN, hi)]
        )


@dataclass(frozen=True, eq=False)
class BeltramiField:
    grid: FieldGrid
    points: np.ndarray
    mu: np.ndarray
    jacobian_proxy: np.ndarray
    sup_mu: float
    argmax_point: complex
    degenerate_count: int

    @property
    def n_points(self) -> int:
        return int(self.points.size)

    def summary(self) -> dict:
        return {
            "sup_mu": self.sup_mu,
            "argmax_point": [self.argmax_point.real, self.argmax_point.imag],
            "degenerate_count": self.degenerate_count,
            "n_points": self.n_points,
            "mesh": f"{self.grid.n_r}x{self.grid.n_theta} {self.grid.region}",
        }


@dataclass(frozen=True)
class VerificationVerdict:
    passed: bool
    mu_ok: bool
    orientation_ok: bool
    seam_ok: bool
    sup_mu: float
    claimed_k: float
    jacobian_min: float
    seam: SeamGap
    degenerate_count: int
    n_points: int

    def summary(self) -> dict:
        return {
            "passed": self.passed,
            "mu_ok": self.mu_ok,
            "orientation_ok": self.orientation_ok,
            "seam_ok": self.seam_ok,
            "sup_mu": self.sup_mu,
            "claimed_k": self.claimed_k,
            "jacobian_min": self.jacobian_min,
            "seam_sup_chordal": self.seam.sup_chordal,
            "seam_sup_abs": self.seam.sup_abs,
            "degenerate_count": self.degenerate_count,
            "n_points": self.n_points,
        }


# ---------------------------------------------------------------------------
# stencils


def wirtinger(
    F: Callable,
    z: complex,
    h: float,
    exclusions: Sequence[Tuple[complex, float]] = (),
) -> Tuple[complex, complex]:
    """(F_z, F_zbar) by central differences at step h."""
    z = complex(z)
    stencil = (z + h, z - h, z + 1j * h, z - 1j * h)
    for center, radius in exclusions:
        for s in stencil:
            if abs(s - center) < radius:
                raise PreconditionError(f"stencil at {z} touches exclusion {center}")
    vals = [complex(np.complex128(F(np.complex128(s)))) for s in stencil]
    d1 = vals[0] - vals[1]
    d2 = vals[2] - vals[3]
    fz = (d1 - 1j * d2) / (4.0 * h)
    fzb = (d1 + 1j * d2) / (4.0 * h)
    return fz, fzb


def _wirtinger_block(F, Z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    h = H_SCALE * np.maximum(1.0, np.abs(Z))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        d1 = F(Z + h) - F(Z - h)
        d2 = F(Z + 1j * h) - F(Z - 1j * h)
        fz = (d1 - 1j * d2) / (4.0 * h)
        fzb = (d1 + 1j * d2) / (4.0 * h)
    return fz, fzb


def _wirtinger_array(F, Z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    n = _threads()
    if n <= 1 or Z.size < 4 * n:
        return _wirtinger_block(F, Z)
    chunks = np.array_split(Z, n)
    with ThreadPoolExecutor(max_workers=n) as pool:
        parts = list(pool.map(lambda c: _wirtinger_block(F, c), chunks))
    # concatenation in submission order keeps the result thread-count invariant
    return (
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
    )


# ---------------------------------------------------------------------------
# fields


def _exclusion_zones(em: ExtendedMap, grid: FieldGrid):
    zones = list(grid.exclusions)
    for src, _ in em.special_points:
        if not is_infinity(src):
            zones.append((complex(src), POLE_EXCLUSION))
    return zones


def _apply_zones(points: np.ndarray, zones) -> np.ndarray:
    keep = np.ones(points.shape, dtype=bool)
    for center, radius in zones:
        keep &= np.abs(points - center) >= radius
    return points[keep]


def _field_on_points(
    grid: FieldGrid, F, points: np.ndarray, label_points: Optional[np.ndarray] = None
) -> BeltramiField:
    """Shared reduction: stencil, degeneracy filter, deterministic argmax."""
    if label_points is None:
        label_points = points
    fz, fzb = _wirtinger_array(F, points)
    finite = np.isfinite(fz) & np.isfinite(fzb)
    degenerate = ~finite | (np.abs(fz) < DEGENERATE_TOL)
    n_deg = int(degenerate.sum())
    if points.size and n_deg > max(1, points.size // 100):
        raise DegenerateFieldError(
            f"{n_deg}/{points.size} stencil points have no usable F_z"
        )
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        mu = np.where(degenerate, np.nan, fzb) / np.where(degenerate, 1.0, fz)
        jac = np.abs(fz) ** 2 - np.abs(fzb) ** 2
    absmu = np.where(degenerate, -np.inf, np.abs(mu))
    if points.size:
        idx = int(np.argmax(absmu))
        sup = float(absmu[idx]) if math.isfinite(absmu[idx]) else 0.0
        arg = complex(label_points[idx])
    else:
        sup, arg = 0.0, 0j
    return BeltramiField(
        grid=grid,
        points=label_points,
        mu=mu,
        jacobian_proxy=jac,
        sup_mu=sup,
        argmax_point=arg,
        degenerate_count=n_deg,
    )


def beltrami_field(em: ExtendedMap, grid: Optional[FieldGrid] = None) -> BeltramiField:
    """Dilatation sweep over the grid, with holes around special points."""
    grid = grid or FieldGrid()
    points = _apply_zones(grid.points(), _exclusion_zones(em, grid))
    return _field_on_points(grid, em.evaluate_array, points)


def infinity_chart_field(em: ExtendedMap, n_r: int = 12, n_theta: int = 48) -> BeltramiField:
    """Dilatation near infinity through the w = 1/z chart.

    When the map fixes infinity the dilatation of 1/F(1/w) is measured; both
    inversions are conformal, so |mu| carries over.  When F(infinity) is
    finite only the pre-composition F(1/w) is inverted away.
    """
    fixes_inf = any(
        is_infinity(src) and is_infinity(img) for src, img in em.special_points
    )
    grid = FieldGrid(
        "disc", n_r, n_theta, r_bounds=(1.0 / (5.0 * CHART_RADIUS), 1.0 / CHART_RADIUS)
    )
    W = grid.points()
    zones = [
        (1.0 / complex(src), POLE_EXCLUSION / (5.0 * CHART_RADIUS))
        for src, _ in em.special_points
        if not is_infinity(src) and abs(complex(src)) > 1.0 / (2.0 * CHART_RADIUS)
    ]
    W = _apply_zones(W, zones)

    if fixes_inf:

        def F(Wv):
            return 1.0 / em.evaluate_array(1.0 / Wv)

    else:

        def F(Wv):
            return em.evaluate_array(1.0 / Wv)

    return _field_on_points(grid, F, W)


def certify_qc(
    em: ExtendedMap,
    claimed_k: Optional[float] = None,
    grid: Optional[FieldGrid] = None,
) -> VerificationVerdict:
    """Check the claimed dilatation bound, orientation, and the seam.

    The grid sup is a lower bound for the essential sup: a pass means no
    violation was found at this mesh, nothing stronger.
    """
    k = em.claimed_k if claimed_k is None else float(claimed_k)
    field = beltrami_field(em, grid)
    chart = infinity_chart_field(em)
    sup_mu = max(field.sup_mu, chart.sup_mu)
    jac_min = float(
        min(
            np.min(field.jacobian_proxy[np.isfinite(field.jacobian_proxy)], initial=np.inf),
            np.min(chart.jacobian_proxy[np.isfinite(chart.jacobian_proxy)], initial=np.inf),
        )
    )
    seam = seam_gap(em)
    mu_ok = sup_mu <= k + TAU_MU
    orientation_ok = jac_min > 0
    seam_ok = seam.sup_chordal <= TAU_SEAM
    return VerificationVerdict(
        passed=mu_ok and orientation_ok and seam_ok,
        mu_ok=mu_ok,
        orientation_ok=orientation_ok,
        seam_ok=seam_ok,
        sup_mu=sup_mu,
        claimed_k=k,
        jacobian_min=jac_min,
        seam=seam,
        degenerate_count=field.degenerate_count + chart.degenerate_count,
        n_points=field.n_points + chart.n_points,
    )


def injectivity_floor(
    em: ExtendedMap, n_pairs: int = 10_000, seed: int = 0, window: float = 3.0
) -> float:
    """Fitted c with |F(z1)-F(z2)| >= c |z1-z2| over random sample pairs.

    Returns the smallest observed ratio; a positive value at 10^4 pairs is
    the sampled stand-in for injectivity on the sphere.
    """
    rng = np.random.default_rng(seed)
    m = 2 * n_pairs
    r_in = np.sqrt(rng.random(m // 2)) * (1.0 - SEAM_MARGIN)
    r_out = 1.0 + SEAM_MARGIN + rng.random(m - m // 2) * (window - 1.0)
    r = np.concatenate([r_in, r_out])
    th = 2.0 * np.pi * rng.random(m)
    pts = r * np.exp(1j * th)
    pts = _apply_zones(pts, _exclusion_zones(em, FieldGrid()))
    half = pts.size // 2
    z1, z2 = pts[:half], pts[half : 2 * half]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        F1 = em.evaluate_array(z1)
        F2 = em.evaluate_array(z2)
    dz = np.abs(z1 - z2)
    dF = np.abs(F1 - F2)
    keep = (
        (dz > 1e-6)
        & np.isfinite(dF)
        & (np.abs(F1) < 1e6)
        & (np.abs(F2) < 1e6)
    )
    if not keep.any():
        raise PreconditionError("no usable sample pairs")
    return float(np.min(dF[keep] / dz[keep]))
