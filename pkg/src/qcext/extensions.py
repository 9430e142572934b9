"""Closed-form quasiconformal extensions as piecewise maps on the sphere.

Each builder glues an analytic branch (a grammar expression) to a closed-form
branch in z, z-bar and |z| on the complementary region.  The two branches
agree identically on the unit circle; seam_gap measures how well the floating
point evaluations realize that identity.  The non-analytic branch is kept as
an evaluator, never as an expression tree: the grammar is holomorphic-only on
purpose.

Builders validate their hypotheses (normalization jets, parameter ranges),
record the dilatation bound the construction is supposed to achieve as
claimed_k, and verify every declared special point by chart evaluation
before returning.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from .classifiers import phi_from_map, u_field
from .errors import PreconditionError
from .loewner import (
    N_SEAM,
    LoewnerChainSpec,
    chain_eval_array,
    check_theorem_A,
    time_zero_map,
)
from .mapexpr import (
    Add,
    Const,
    Div,
    MapExpr,
    Mul,
    Pow,
    Var,
    compose,
    const_text,
    derive,
    eval_array,
    eval_map,
    laurent_at_infinity,
    parse_map,
    poles_in_disc,
    print_expr,
    rational_form,
    taylor_jet,
)
from .sphere import ExtComplex, INFINITY, chordal, chordal_array, is_infinity

TAU_SEAM = 1e-9
SEAM_EPS = 1e-6

SpecialPoint = Tuple[ExtComplex, ExtComplex]


def _circle(n: int = N_SEAM) -> np.ndarray:
    # half-offset keeps samples away from poles sitting at rational angles
    th = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    return np.exp(1j * th)


def _sup(vals: np.ndarray) -> float:
    a = np.abs(np.asarray(vals)).ravel()
    bad = ~np.isfinite(a)
    if bad.any():
        if int(bad.sum()) > max(2, a.size // 500):
            return math.inf
        a = a[~bad]
    return float(a.max())


def _point_json(v: ExtComplex):
    if is_infinity(v):
        return "infinity"
    v = complex(v)
    return [v.real, v.imag]


@dataclass(frozen=True)
class RadialProfile:
    """psi(r) = M r - (M-1) on [1, oo): psi(1) = 1, bi-Lipschitz constant M."""

    M: float

    def __post_init__(self):
        if not (isinstance(self.M, (int, float)) and self.M > 1.0):
            raise ValueError("profile constant M must exceed 1")

    def psi(self, r):
        return self.M * r - (self.M - 1.0)

    def psi_prime(self, r):
        return self.M * np.ones_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class SeamGap:
    sup_abs: float
    sup_chordal: float
    sup_offset: float
    n_samples: int
    eps: float


@dataclass(frozen=True)
class ExtendedMap:
    """A sphere map assembled from an analytic branch and a closed-form one.

    inner is the analytic branch' expression; inner_region says which side of
    the unit circle it lives on.  outer evaluates the complementary branch and
    follows numpy IEEE semantics on arrays.  special_points are (source,
    image) pairs that the assembled map must honor, including the charts at
    infinity.
    """

    inner: MapExpr
    inner_region: str  # "disc" | "exterior"
    outer_id: str
    outer_params: Tuple[Tuple[str, str], ...]
    outer: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    special_points: Tuple[SpecialPoint, ...] = ()
    claimed_k: float = math.inf

    def evaluate(self, z: ExtComplex) -> ExtComplex:
        if is_infinity(z):
            for src, img in self.special_points:
                if is_infinity(src):
                    return img
            if self.inner_region == "exterior":
                return eval_map(self.inner, INFINITY)
            raise PreconditionError("map declares no chart at infinity")
        z = complex(z)
        r = abs(z)
        on_inner = r <= 1.0 if self.inner_region == "disc" else r >= 1.0
        if on_inner:
            return eval_map(self.inner, z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            v = complex(self.outer(np.complex128(z)))
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            return INFINITY
        return v

    def evaluate_array(self, Z: np.ndarray) -> np.ndarray:
        Z = np.asarray(Z, dtype=np.complex128)
        r = np.abs(Z)
        use_inner = r <= 1.0 if self.inner_region == "disc" else r >= 1.0
        out = np.empty(Z.shape, dtype=np.complex128)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if use_inner.any():
                out[use_inner] = eval_array(self.inner, Z[use_inner])
            rest = ~use_inner
            if rest.any():
                out[rest] = self.outer(Z[rest])
        return out

    def summary(self) -> dict:
        return {
            "inner": print_expr(self.inner.root),
            "inner_region": self.inner_region,
            "outer": {"id": self.outer_id, "params": dict(self.outer_params)},
            "special_points": [
                [_point_json(s), _point_json(i)] for s, i in self.special_points
            ],
            "claimed_k": self.claimed_k,
        }


def seam_gap(em: ExtendedMap, n: int = N_SEAM, eps: float = SEAM_EPS) -> SeamGap:
    """Branch disagreement across |z| = 1.

    sup_abs and sup_chordal compare both branches evaluated on the circle
    itself; sup_offset compares them from eps inside and outside.  The
    chordal number is the meaningful one near seam poles, where both branches
    blow up together and absolute differences lose their footing.
    """
    circle = _circle(n)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        inner_on = eval_array(em.inner, circle)
        outer_on = em.outer(circle)
        diff = np.abs(inner_on - outer_on)
        both_bad = ~np.isfinite(inner_on) & ~np.isfinite(outer_on)
        diff = np.where(both_bad, 0.0, diff)
        sup_abs = float(np.max(np.where(np.isfinite(diff), diff, np.inf)))
        sup_chordal = float(np.max(chordal_array(inner_on, outer_on)))
        inward = 1.0 - eps if em.inner_region == "disc" else 1.0 + eps
        outward = 1.0 + eps if em.inner_region == "disc" else 1.0 - eps
        off = np.abs(
            eval_array(em.inner, inward * circle) - em.outer(outward * circle)
        )
        off = np.where(np.isfinite(off), off, np.inf)
        sup_offset = float(np.max(off))
    return SeamGap(sup_abs, sup_chordal, sup_offset, n, eps)


def _verify_special(em: ExtendedMap) -> None:
    # charts at infinity are probed at a large off-axis radius
    probe = 1e8 * complex(math.cos(0.9), math.sin(0.9))
    for src, img in em.special_points:
        got = em.evaluate(probe) if is_infinity(src) else em.evaluate(src)
        d = chordal(got, img)
        if d > 1e-6:
            raise ArithmeticError(
                f"special point {src} -> {img} violated: got {got} (chordal {d:.3e})"
            )


def _require_normalized_jet(f: MapExpr) -> np.ndarray:
    jet = taylor_jet(f, 3)
    c = np.asarray(jet.coeffs)
    if abs(c[0]) > 1e-9 or abs(c[1] - 1.0) > 1e-9:
        raise PreconditionError("map must be normalized: f(0)=0, f'(0)=1")
    return c


def _disc_pole_points(f: MapExpr) -> list[SpecialPoint]:
    return [(p, INFINITY) for p in poles_in_disc(f, 1.0 + 1e-9)]


# ---------------------------------------------------------------------------
# disc-side builders


def ext_huang_owa(f: MapExpr) -> ExtendedMap:
    """Extend a normalized disc map by z / (1 - a2 z + |z|^2 phi(1/z-bar)).

    The seam identity is |z|^2 phi(1/z-bar) = phi(z) on |z| = 1.  The bound
    recorded is the boundary sup of |(phi(w)/w)'|, which is what the
    dilatation of this extension works out to at the reflected point.
    """
    c = _require_normalized_jet(f)
    a2 = complex(c[2])
    phi = phi_from_map(f)
    ratio = MapExpr(Div(phi.root, Var()), f"({print_expr(phi.root)})/z")
    claimed = _sup(eval_array(derive(ratio), _circle()))

    def outer(Z):
        W = 1.0 / np.conj(Z)
        return Z / (1.0 - a2 * Z + np.abs(Z) ** 2 * eval_array(phi, W))

    at_inf = INFINITY if abs(a2) <= 1e-12 else -1.0 / a2
    pts = tuple(_disc_pole_points(f)) + ((INFINITY, at_inf),)
    em = ExtendedMap(
        inner=f,
        inner_region="disc",
        outer_id="phi_reflection",
        outer_params=(("a2", repr(a2)),),
        outer=outer,
        special_points=pts,
        claimed_k=claimed,
    )
    _verify_special(em)
    return em


def ext_thm2(f: MapExpr) -> ExtendedMap:
    """Extend by z f(1/z-bar) / (z - (|z|^2 - 1) f(1/z-bar)); needs a2 = 0."""
    c = _require_normalized_jet(f)
    if abs(c[2]) > 1e-9:
        raise PreconditionError(
            f"second coefficient must vanish for this extension, got {c[2]}"
        )
    recip = MapExpr(Div(Const(1.0 + 0j), f.root), f"1/({print_expr(f.root)})")
    claimed = _sup(u_field(f, _circle()))

    def outer(Z):
        # divide through by f(1/z-bar) so reflected poles stay finite
        W = 1.0 / np.conj(Z)
        return Z / (Z * eval_array(recip, W) - (np.abs(Z) ** 2 - 1.0))

    pts = tuple(_disc_pole_points(f)) + ((INFINITY, INFINITY),)
    em = ExtendedMap(
        inner=f,
        inner_region="disc",
        outer_id="map_reflection",
        outer_params=(),
        outer=outer,
        special_points=pts,
        claimed_k=claimed,
    )
    _verify_special(em)
    return em


def ext_mobius_convex(a2: complex) -> ExtendedMap:
    """Extend z/(1 - a2 z) by z(|z|^2 - a2 z)/(|z| - a2 z)^2; |mu| = |a2|."""
    a2 = complex(a2)
    if not 0.0 < abs(a2) < 1.0:
        raise PreconditionError("need 0 < |a2| < 1 (a2 = 0 extends trivially)")
    inner = parse_map(f"z/(1-{const_text(a2)}*z)")

    def outer(Z):
        R = np.abs(Z)
        return Z * (R**2 - a2 * Z) / (R - a2 * Z) ** 2

    em = ExtendedMap(
        inner=inner,
        inner_region="disc",
        outer_id="mobius_polar",
        outer_params=(("a2", repr(a2)),),
        outer=outer,
        special_points=((INFINITY, INFINITY),),
        claimed_k=abs(a2),
    )
    _verify_special(em)
    return em


def ext_radial_psi(
    pole_style: str, pole_param: complex, profile: RadialProfile
) -> ExtendedMap:
    """Radial-profile extension of the Mobius maps with a boundary or inner pole.

    unimodular_a2: inner z/(1 - a2 z), |a2| = 1, pole on the seam; outer
    psi(r) e^{i theta} / (1 - a2 psi(r) e^{i theta}).
    vp_pole: inner p z/(p - z) with pole p in (0,1); outer
    p psi(r) e^{i theta} / (p - psi(r) e^{i theta}).
    Claimed bound (M^2-1)/(M^2+1) from the profile constant.
    """
    M = profile.M
    if pole_style == "unimodular_a2":
        a2 = complex(pole_param)
        if abs(abs(a2) - 1.0) > 1e-9:
            raise PreconditionError("unimodular_a2 needs |a2| = 1")
        inner = parse_map(f"z/(1-{const_text(a2)}*z)")

        def outer(Z):
            R = np.abs(Z)
            PSI = profile.psi(R)
            E = Z / R
            return PSI * E / (1.0 - a2 * PSI * E)

        pts = ((1.0 / a2, INFINITY), (INFINITY, -1.0 / a2))
        params = (("a2", repr(a2)), ("M", repr(float(M))))
    elif pole_style == "vp_pole":
        p = complex(pole_param)
        if abs(p.imag) > 0 or not 0.0 < p.real < 1.0:
            raise PreconditionError("vp_pole needs real p in (0,1)")
        p = p.real
        inner = parse_map(f"{p!r}*z/({p!r}-z)")

        def outer(Z):
            R = np.abs(Z)
            PSI = profile.psi(R)
            E = Z / R
            return p * PSI * E / (p - PSI * E)

        pts = ((complex(p), INFINITY), (INFINITY, complex(-p)))
        params = (("p", repr(float(p))), ("M", repr(float(M))))
    else:
        raise ValueError(f"unknown pole_style {pole_style!r}")
    em = ExtendedMap(
        inner=inner,
        inner_region="disc",
        outer_id="radial_profile",
        outer_params=params,
        outer=outer,
        special_points=pts,
        claimed_k=(M * M - 1.0) / (M * M + 1.0),
    )
    _verify_special(em)
    return em


def ext_brown(f: MapExpr, brown_lambda: complex) -> ExtendedMap:
    """Extend by f(1/z-bar) + (z - 1/z-bar)/lambda; bound sup |lambda f' - 1|."""
    lam = complex(brown_lambda)
    if lam == 0:
        raise PreconditionError("lambda must be nonzero")
    if is_infinity(eval_map(f, 0j)):
        raise PreconditionError("map must be finite at 0")
    circle = _circle()
    claimed = _sup(lam * eval_array(derive(f), circle) - 1.0)

    def outer(Z):
        W = 1.0 / np.conj(Z)
        return eval_array(f, W) + (Z - W) / lam

    pts = tuple(_disc_pole_points(f)) + ((INFINITY, INFINITY),)
    em = ExtendedMap(
        inner=f,
        inner_region="disc",
        outer_id="derivative_shift",
        outer_params=(("lambda", repr(lam)),),
        outer=outer,
        special_points=pts,
        claimed_k=claimed,
    )
    _verify_special(em)
    return em


def ext_thm5(f: MapExpr) -> ExtendedMap:
    """Extend by f(1/z-bar) - z + 1/z-bar; bound sup |f' + 1|.

    Maps under this hypothesis have f'(0) near -1, so no normalization jet is
    demanded here.
    """
    if is_infinity(eval_map(f, 0j)):
        raise PreconditionError("map must be finite at 0")
    claimed = _sup(eval_array(derive(f), _circle()) + 1.0)

    def outer(Z):
        W = 1.0 / np.conj(Z)
        return eval_array(f, W) - Z + W

    pts = tuple(_disc_pole_points(f)) + ((INFINITY, INFINITY),)
    em = ExtendedMap(
        inner=f,
        inner_region="disc",
        outer_id="reflection_shift",
        outer_params=(),
        outer=outer,
        special_points=pts,
        claimed_k=claimed,
    )
    _verify_special(em)
    return em


# ---------------------------------------------------------------------------
# exterior-side builders


def _poly_node(coeffs: np.ndarray):
    """Expression node for sum coeffs[j] z^j with zero terms dropped."""
    terms = []
    for j, cj in enumerate(coeffs):
        if cj == 0:
            continue
        if j == 0:
            terms.append(Const(complex(cj)))
        else:
            zj = Var() if j == 1 else Pow(Var(), j)
            terms.append(zj if cj == 1 else Mul(Const(complex(cj)), zj))
    if not terms:
        return Const(0j)
    node = terms[0]
    for t in terms[1:]:
        node = Add(node, t)
    return node


def _recover_w(g: MapExpr) -> MapExpr:
    """w(z) = g(1/z) - 1/z rebuilt as one rational expression.

    Subtracting the trees directly is catastrophic near 0 where both terms
    blow up; doing the subtraction on numerator coefficients cancels the
    shared singular part exactly.
    """
    P, Q = rational_form(compose(g, parse_map("1/z")))
    n = max(len(P) + 1, len(Q))
    num = np.zeros(n, dtype=np.complex128)
    num[1 : len(P) + 1] += P  # z * P
    num[: len(Q)] -= Q
    den = np.zeros(len(Q) + 1, dtype=np.complex128)
    den[1:] = Q  # z * Q
    scale = max(np.max(np.abs(P)), np.max(np.abs(Q)))
    num[np.abs(num) <= 1e-12 * scale] = 0.0
    den[np.abs(den) <= 1e-12 * scale] = 0.0
    v = 0
    while v < len(num) and v < len(den) and num[v] == 0 and den[v] == 0:
        v += 1
    num, den = num[v:], den[v:]
    if len(den) == 0 or den[0] == 0:
        raise PreconditionError("w(z) = g(1/z) - 1/z has a pole at 0")
    while len(num) > 1 and num[-1] == 0:
        num = num[:-1]
    while len(den) > 1 and den[-1] == 0:
        den = den[:-1]
    if len(den) == 1 and den[0] == 1:
        root = _poly_node(num)
    else:
        root = Div(_poly_node(num), _poly_node(den))
    return MapExpr(root, print_expr(root))


def ext_exterior(g: MapExpr, which: str) -> ExtendedMap:
    """Fill the disc under an exterior map g(zeta) = zeta + b0 + b1/zeta + ...

    thm4:  g(1/zb) / (1 + (1/zeta - zb) g(1/zb)),  zb = zeta-bar
    cor1:  same with a minus sign in the denominator
    krzyz: zeta + w(zeta-bar) with w(z) = g(1/z) - 1/z
    krzyz_decay: as krzyz after confirming the decay identity
    |w'(1/zeta)| = |zeta|^2 |g'(zeta) - 1| on samples.
    """
    if which not in ("thm4", "cor1", "krzyz", "krzyz_decay"):
        raise ValueError(f"unknown exterior extension {which!r}")
    k, c = laurent_at_infinity(g, 4)
    if k != 1:
        raise PreconditionError("exterior map must grow like zeta at infinity")
    c0 = complex(c[0])
    if which == "cor1":
        if abs(abs(c0) - 1.0) > 1e-9:
            raise PreconditionError("leading coefficient must be unimodular")
        if abs(c0 - 1.0) > 1e-9:
            warnings.warn(
                f"exterior map with leading coefficient {c0}; the construction "
                "tolerates any unimodular one",
                stacklevel=2,
            )
    elif abs(c0 - 1.0) > 1e-9:
        raise PreconditionError(f"leading coefficient must be 1, got {c0}")

    circle = _circle()
    gp = derive(g)
    if which in ("krzyz", "krzyz_decay"):
        w = _recover_w(g)
        w0 = eval_map(w, 0j)
        if is_infinity(w0) or abs(w0) > 1e-9:
            warnings.warn(
                f"w(0) = {w0} is nonzero: the glued map need not extend the "
                "chain construction (formula-only mode)",
                stacklevel=2,
            )
        if which == "krzyz_decay":
            zs = 1.0 / (np.linspace(1.05, 3.0, 48) * _circle(48))
            lhs = np.abs(eval_array(derive(w), zs))
            rhs = np.abs(eval_array(gp, 1.0 / zs) - 1.0) / np.abs(zs) ** 2
            if _sup(lhs - rhs) > 1e-9 * (1.0 + _sup(rhs)):
                raise ArithmeticError("derivative decay identity violated")
        wp = derive(w)
        claimed = _sup(eval_array(wp, circle))

        def outer(Z):
            return Z + eval_array(w, np.conj(Z))

        params = (("w", print_expr(w.root)),)
        outer_id = "conjugate_shift"
    else:
        sign = 1.0 if which == "thm4" else -1.0
        G = eval_array(g, circle)
        Gp = eval_array(gp, circle)
        claimed = _sup((circle / G) ** 2 * Gp - sign)

        def outer(Z):
            Zb = np.conj(Z)
            GW = eval_array(g, 1.0 / Zb)
            return GW / (1.0 + sign * (1.0 / Z - Zb) * GW)

        params = ()
        outer_id = "inverse_reflection_plus" if which == "thm4" else "inverse_reflection_minus"
    em = ExtendedMap(
        inner=g,
        inner_region="exterior",
        outer_id=outer_id,
        outer_params=params,
        outer=outer,
        special_points=((INFINITY, INFINITY),),
        claimed_k=claimed,
    )
    _verify_special(em)
    return em


# ---------------------------------------------------------------------------
# chain-driven extension


def becker_extend(chain: LoewnerChainSpec, validate: bool = True) -> ExtendedMap:
    """Extend the chain's time-zero map by F(z) = f(z/|z|, log |z|).

    With validate, the chain is swept through its verification battery first
    and rejected unless it passes.
    """
    if validate:
        report = check_theorem_A(chain)
        if not report.passed:
            raise PreconditionError(
                f"{chain.kind} chain fails verification; no extension is implied"
            )
    inner = time_zero_map(chain)

    def outer(Z):
        R = np.abs(Z)
        return chain_eval_array(chain, Z / R, np.log(R))

    em = ExtendedMap(
        inner=inner,
        inner_region="disc",
        outer_id="chain_radial",
        outer_params=(
            ("kind", chain.kind),
            ("base", print_expr(chain.base_map.root)),
        ),
        outer=outer,
        special_points=((INFINITY, INFINITY),),
        claimed_k=chain.claimed_k,
    )
    _verify_special(em)
    return em
