"""Values on the Riemann sphere: a distinguished point at infinity,
tolerance-aware division, and the chordal metric.

Finite values are ordinary ``complex`` numbers; the point at infinity is the
singleton ``INFINITY``.  It deliberately carries no real/imaginary parts, so
code that needs coordinates must go through a chart first.
"""

from __future__ import annotations

import cmath
import math
from typing import Union

import numpy as np

# A quotient is declared a pole once the denominator is this small relative
# to the numerator.
TAU_POLE = 1e-12


class _Infinity:
    """The point at infinity (singleton, compares only to itself)."""

    _instance = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()

ExtComplex = Union[complex, _Infinity]


class SphereArithmeticError(ArithmeticError):
    """An indeterminate sphere operation: 0/0, inf - inf, 0 * inf, inf^0."""


def is_infinity(v: object) -> bool:
    return v is INFINITY


def as_ext(v: complex) -> ExtComplex:
    """Collapse non-finite floats (overflow results) onto INFINITY."""
    if isinstance(v, _Infinity):
        return v
    v = complex(v)
    if not (cmath.isfinite(v)):
        if cmath.isnan(v.real) and cmath.isnan(v.imag):
            raise SphereArithmeticError("indeterminate value (nan)")
        return INFINITY
    return v


def safe_div(num: ExtComplex, den: ExtComplex) -> ExtComplex:
    """Divide on the sphere.

    A finite quotient whose denominator magnitude falls below
    ``TAU_POLE * |num|`` is reported as INFINITY; the exact 0/0 case raises
    :class:`SphereArithmeticError`.
    """
    ninf, dinf = is_infinity(num), is_infinity(den)
    if ninf and dinf:
        raise SphereArithmeticError("inf / inf")
    if ninf:
        return INFINITY
    if dinf:
        return 0j
    num = complex(num)
    den = complex(den)
    an, ad = abs(num), abs(den)
    if an == 0.0 and ad == 0.0:
        raise SphereArithmeticError("0 / 0")
    if ad <= TAU_POLE * an:
        return INFINITY
    return as_ext(num / den)


def ext_add(a: ExtComplex, b: ExtComplex) -> ExtComplex:
    if is_infinity(a) and is_infinity(b):
        raise SphereArithmeticError("inf + inf")
    if is_infinity(a) or is_infinity(b):
        return INFINITY
    return as_ext(complex(a) + complex(b))


def ext_sub(a: ExtComplex, b: ExtComplex) -> ExtComplex:
    if is_infinity(a) and is_infinity(b):
        raise SphereArithmeticError("inf - inf")
    if is_infinity(a) or is_infinity(b):
        return INFINITY
    return as_ext(complex(a) - complex(b))


def ext_neg(a: ExtComplex) -> ExtComplex:
    if is_infinity(a):
        return INFINITY
    return -complex(a)


def ext_mul(a: ExtComplex, b: ExtComplex) -> ExtComplex:
    if is_infinity(a) or is_infinity(b):
        other = b if is_infinity(a) else a
        if not is_infinity(other) and complex(other) == 0:
            raise SphereArithmeticError("0 * inf")
        return INFINITY
    return as_ext(complex(a) * complex(b))


def ext_pow(a: ExtComplex, n: int) -> ExtComplex:
    if is_infinity(a):
        if n > 0:
            return INFINITY
        if n < 0:
            return 0j
        raise SphereArithmeticError("inf ^ 0")
    base = complex(a)
    if n == 0:
        return 1 + 0j
    if n < 0:
        return safe_div(1 + 0j, ext_pow(base, -n))
    # binary exponentiation, overflow folded onto INFINITY
    result: ExtComplex = 1 + 0j
    acc: ExtComplex = base
    m = n
    while m:
        if m & 1:
            result = ext_mul(result, acc)
            if is_infinity(result):
                return INFINITY
        m >>= 1
        if m:
            acc = ext_mul(acc, acc)
            if is_infinity(acc):
                # remaining factors of acc only push further toward infinity
                # unless result is 0, which ext_mul would have rejected
                return INFINITY
    return result


def chordal(a: ExtComplex, b: ExtComplex) -> float:
    """Chordal (sphere) distance, range [0, 2]."""
    ainf, binf = is_infinity(a), is_infinity(b)
    if ainf and binf:
        return 0.0
    if ainf or binf:
        w = complex(b if ainf else a)
        aw = abs(w)
        if not cmath.isfinite(complex(aw)):
            return 0.0
        return 2.0 / math.hypot(1.0, aw)
    wa, wb = complex(a), complex(b)
    if not cmath.isfinite(wa):
        return chordal(INFINITY, wb)
    if not cmath.isfinite(wb):
        return chordal(wa, INFINITY)
    if abs(wa) > 1e150 and abs(wb) > 1e150:
        # avoid inf - inf overflow; the chordal metric is inversion invariant
        return chordal(1.0 / wa, 1.0 / wb)
    return 2.0 * abs(wa - wb) / math.hypot(1.0, abs(wa)) / math.hypot(1.0, abs(wb))


def chordal_array(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Elementwise chordal distance under IEEE conventions.

    Nonfinite entries are read as the point at infinity (grid evaluation only
    produces them by blowing up), so two simultaneous overflows are distance
    0.  Huge-but-finite entries are routed through 1/z to dodge inf/inf.
    """
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        fa, fb = np.isfinite(A), np.isfinite(B)
        absA, absB = np.abs(A), np.abs(B)
        # hypot keeps sqrt(1+|.|^2) finite for every finite input
        sA, sB = np.hypot(1.0, absA), np.hypot(1.0, absB)
        d = 2.0 * np.abs(A - B) / sA / sB
        IA = 1.0 / np.where(A == 0, np.inf, A)
        IB = 1.0 / np.where(B == 0, np.inf, B)
        inv = (
            2.0
            * np.abs(IA - IB)
            / np.hypot(1.0, np.abs(IA))
            / np.hypot(1.0, np.abs(IB))
        )
        # A-B itself can only overflow when both sides are huge
        d = np.where((absA > 1e150) & (absB > 1e150), inv, d)
        d = np.where(fa & ~fb, 2.0 / sA, d)
        d = np.where(~fa & fb, 2.0 / sB, d)
        d = np.where(~fa & ~fb, 0.0, d)
    return d
