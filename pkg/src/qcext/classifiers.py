"""Class-membership functionals for disc and exterior maps.

The central object is U_f(z) = (z/f(z))^2 f'(z) - 1.  Membership criteria
bound either |U| itself, |U|/|z|^2, or a first-derivative distance, over the
disc or the exterior of the closed disc.  check_class sweeps a polar grid,
adds a chart sample at infinity for exterior criteria, and returns the worst
sampled value with the point that produced it.

Grid verdicts are evidence, not proofs: the sup is over samples and the open
boundary is approached by the grid, never touched.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .grids import R_DISC, GridSpec, argmax_2d, disc_grid, exterior_grid
from .mapexpr import (
    Const,
    Div,
    EvalError,
    MapExpr,
    Mul,
    Pow,
    SeriesJet,
    Sub,
    Var,
    const_text,
    derive,
    eval_array,
    eval_map,
    laurent_at_infinity,
    parse_map,
    poles_in_disc,
    print_expr,
    residue_at,
    series_inv,
    series_mul,
    taylor_jet,
)
from .sphere import INFINITY, ExtComplex, is_infinity

TAU_CLASS = 1e-9
POLE_EXCLUSION = 0.02

CLASS_NAMES = (
    "U_lambda",
    "V_p_lambda",
    "M_Ug",
    "M_corollary1",
    "M_krzyz_decay",
    "brown",
    "krzyz_w",
    "thm5",
)


@dataclass(frozen=True)
class ClassParams:
    """Parameters of the membership criteria.

    lam bounds |U|/|z|^2 on the disc, k bounds the exterior and derivative
    criteria, p locates the interior pole for the meromorphic class, theta
    rotates the example family, brown_lambda scales the derivative criterion
    |lam*f' - 1| <= k.
    """

    lam: float = 1.0
    k: float = 0.5
    p: float = 0.5
    theta: float = 0.0
    brown_lambda: complex = 1.0 + 0j

    def __post_init__(self) -> None:
        if not (0.0 < self.lam <= 1.0):
            raise ValueError("lam must lie in (0, 1]")
        if not (0.0 < self.k < 1.0):
            raise ValueError("k must lie in (0, 1)")
        if not (0.0 < self.p < 1.0):
            raise ValueError("p must lie strictly inside the disc")
        if not (0.0 <= self.theta < 2.0 * math.pi):
            raise ValueError("theta must lie in [0, 2*pi)")
        if self.brown_lambda == 0:
            raise ValueError("brown_lambda must be nonzero")


@dataclass(frozen=True)
class ClassVerdict:
    class_name: str
    holds: bool
    worst_point: ExtComplex
    worst_value: float
    margin: float
    bound: float
    n_samples: int


@dataclass(frozen=True)
class SchwarzReport:
    """Both sides of the small-functional equivalence on a grid."""

    equivalent: bool
    sup_u: float
    sup_ratio: float

    def __bool__(self) -> bool:
        return self.equivalent


# ---------------------------------------------------------------------------
# the U operator


@functools.lru_cache(maxsize=256)
def u_expr(f: MapExpr) -> MapExpr:
    """U_f as an expression tree: (z/f)^2 * f' - 1."""
    root = Sub(
        Mul(Pow(Div(Var(), f.root), 2), derive(f).root), Const(1 + 0j)
    )
    return MapExpr(root, print_expr(root))


def u_operator(f: MapExpr, z: ExtComplex) -> ExtComplex:
    """U_f(z) on the sphere, with the removable points filled in:
    U at a simple pole p is -p^2/residue - 1, U(0) is 1/f'(0) - 1 when
    f(0) = 0.  A zero of f away from the origin is an error."""
    if is_infinity(z):
        return eval_map(u_expr(f), INFINITY)
    z = complex(z)
    if z == 0:
        jet = taylor_jet(f, 2)
        if jet[0] == 0:
            if jet[1] == 0:
                raise EvalError("f has a multiple zero at 0")
            return 1.0 / jet[1] - 1.0
        return -1.0 + 0j
    w = eval_map(f, z)
    if w == 0:
        raise EvalError(f"f vanishes at {z}, U_f undefined there")
    if is_infinity(w):
        m = residue_at(f, z)
        return -z * z / m - 1.0
    return eval_map(u_expr(f), z)


def u_field(f: MapExpr, Z: np.ndarray) -> np.ndarray:
    """Vectorized (z/f)^2 f' - 1 on a finite grid (IEEE semantics)."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        F = eval_array(f, Z)
        Fp = eval_array(derive(f), Z)
        return (Z / F) ** 2 * Fp - 1.0


def u_jet(f: MapExpr, order: int = 4) -> SeriesJet:
    """Taylor jet of U_f at 0 for normalized f (handles the z/f quotient by
    cancelling the shared zero at the origin)."""
    jf = taylor_jet(f, order + 1)
    c = np.array(jf.coeffs)
    if c[0] != 0:
        raise PreconditionError("u_jet expects f(0) = 0")
    shifted = c[1:]  # series of f(z)/z
    if shifted[0] == 0:
        raise PreconditionError("u_jet expects f'(0) != 0")
    zf = series_inv(shifted[: order + 1])  # series of z/f
    fp = np.array(
        [(j + 1) * jf[j + 1] for j in range(order + 1)], dtype=complex
    )
    u = series_mul(series_mul(zf, zf), fp)
    u[0] -= 1.0
    return SeriesJet(0j, tuple(complex(v) for v in u))


@functools.lru_cache(maxsize=256)
def phi_from_map(f: MapExpr) -> MapExpr:
    """phi(z) = z/f(z) + a2*z - 1 for normalized f.

    Satisfies phi(0) = phi'(0) = 0 and U_f = phi - z*phi'.
    """
    jet = taylor_jet(f, 2)
    if abs(jet[0]) > 1e-12 or abs(jet[1] - 1.0) > 1e-12:
        raise PreconditionError(
            "phi_from_map needs f(0)=0 and f'(0)=1, got "
            f"c0={jet[0]}, c1={jet[1]}"
        )
    a2 = jet[2]
    phi = parse_map(f"z/{print_expr(f.root)}+{const_text(a2)}*z-1")
    # jet arithmetic cannot cancel the z/f quotient at 0; verify the
    # second-order vanishing through the shifted series instead
    jf = taylor_jet(f, 3)
    zf = series_inv(np.array(jf.coeffs[1:], dtype=complex))
    phi0 = zf[0] - 1.0
    phi1 = zf[1] + a2
    if abs(phi0) > 1e-9 or abs(phi1) > 1e-9:
        raise PreconditionError("phi does not vanish to second order at 0")
    return phi


# ---------------------------------------------------------------------------
# chart values at infinity for the exterior criteria


def _leading(g: MapExpr) -> tuple[int, np.ndarray]:
    return laurent_at_infinity(g, 4)


def _chart_value(g: MapExpr, which: str) -> float:
    """The criterion functional evaluated at the point at infinity."""
    if which == "M_Ug":
        v = eval_map(u_expr(g), INFINITY)
        return math.inf if is_infinity(v) else abs(v)
    if which == "M_corollary1":
        k, c = _leading(g)
        if k != 1:
            return math.inf
        return abs(1.0 / c[0] + 1.0)
    if which == "M_krzyz_decay":
        # (g' - 1) * z^2 tends to -c2 when g = z + c1 + c2/z + ...
        k, c = _leading(g)
        if k != 1 or abs(c[0] - 1.0) > 1e-12:
            return math.inf
        return abs(c[2])
    raise ValueError(f"no chart sample for criterion {which}")


# ---------------------------------------------------------------------------
# criterion sweep


def _finite_or_inf(vals: np.ndarray) -> np.ndarray:
    return np.where(np.isfinite(vals), vals, np.inf)


def check_class(
    m: MapExpr,
    which: str,
    params: ClassParams | None = None,
    grid: GridSpec | None = None,
) -> ClassVerdict:
    """Sweep the named criterion over its natural domain.

    Disc criteria reject maps with an unexcluded pole inside the sampled
    disc; the meromorphic-class criterion excludes a fixed neighborhood of
    the declared pole instead.
    """
    params = params or ClassParams()
    grid = grid or GridSpec()
    if which not in CLASS_NAMES:
        raise ValueError(f"unknown criterion {which!r}")

    chart_val = None
    if which in ("U_lambda", "V_p_lambda"):
        bound = params.lam
        Z = disc_grid(grid)
        vals = _finite_or_inf(np.abs(u_field(m, Z)) / np.abs(Z) ** 2)
        if which == "V_p_lambda":
            vals = np.where(
                np.abs(Z - params.p) < POLE_EXCLUSION, -np.inf, vals
            )
        else:
            poles = poles_in_disc(m, R_DISC)
            if poles:
                raise PreconditionError(
                    f"pole at {poles[0]} inside the disc grid; use the "
                    "V_p_lambda criterion with its exclusion zone"
                )
    elif which in ("M_Ug", "M_corollary1", "M_krzyz_decay"):
        bound = params.k
        Z = exterior_grid(grid)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if which == "M_Ug":
                vals = np.abs(u_field(m, Z))
            elif which == "M_corollary1":
                G = eval_array(m, Z)
                Gp = eval_array(derive(m), Z)
                vals = np.abs((Z / G) ** 2 * Gp + 1.0)
            else:
                Gp = eval_array(derive(m), Z)
                vals = np.abs(Gp - 1.0) * np.abs(Z) ** 2
        vals = _finite_or_inf(vals)
        chart_val = _chart_value(m, which)
    elif which in ("brown", "krzyz_w", "thm5"):
        bound = params.k
        Z = disc_grid(grid)
        poles = poles_in_disc(m, R_DISC)
        if poles:
            raise PreconditionError(
                f"pole at {poles[0]} inside the disc grid for criterion "
                f"{which}"
            )
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            Fp = eval_array(derive(m), Z)
            if which == "brown":
                vals = np.abs(params.brown_lambda * Fp - 1.0)
            elif which == "krzyz_w":
                vals = np.abs(Fp)
            else:
                vals = np.abs(Fp + 1.0)
        vals = _finite_or_inf(vals)

    i, j = argmax_2d(vals)
    worst_value = float(vals[i, j])
    worst_point: ExtComplex = complex(Z[i, j])
    n = int(np.sum(np.isfinite(vals) | (vals == np.inf)))
    if chart_val is not None:
        n += 1
        if chart_val > worst_value:
            worst_value = float(chart_val)
            worst_point = INFINITY
    if worst_value == -math.inf:
        raise PreconditionError("exclusion removed every grid point")
    return ClassVerdict(
        class_name=which,
        holds=bool(worst_value <= bound + TAU_CLASS),
        worst_point=worst_point,
        worst_value=worst_value,
        margin=float(bound - worst_value),
        bound=float(bound),
        n_samples=n,
    )


def schwarz_equivalence(f: MapExpr, grid: GridSpec | None = None) -> SchwarzReport:
    """On a grid, |U_f| < 1 forces |U_f| <= |z|^2 once U vanishes to second
    order at the origin (checked via the jet before sweeping)."""
    grid = grid or GridSpec()
    jet = u_jet(f, 3)
    if abs(jet[0]) > 1e-9 or abs(jet[1]) > 1e-9:
        raise PreconditionError("U_f must vanish to second order at 0")
    Z = disc_grid(grid)
    U = np.abs(u_field(f, Z))
    U = _finite_or_inf(U)
    sup_u = float(np.max(U))
    sup_ratio = float(np.max(U / np.abs(Z) ** 2))
    equivalent = (sup_u >= 1.0) or (sup_ratio <= 1.0 + TAU_CLASS)
    return SchwarzReport(equivalent=equivalent, sup_u=sup_u, sup_ratio=sup_ratio)
