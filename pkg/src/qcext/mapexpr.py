"""Parse, print, evaluate, and differentiate rational maps of one complex
variable.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' signed-integer)?
    base   := number | 'i' | 'z' | '(' expr ')' | '-' base

Numbers are unsigned decimal literals with optional fraction and exponent
(``2``, ``0.5``, ``1.25e-3``).  The bare token ``i`` is the imaginary unit;
complex constants are spelled ``a+b*i``.  Power exponents are integers with
magnitude at most ``MAX_EXPONENT``.

The canonical printed form is fully parenthesized with coefficients at 17
significant digits, and re-parsing it reproduces the identical tree.  Parse
errors carry the byte offset of the offending character; at end of input the
offset is clamped onto the last byte.

Evaluation happens on the Riemann sphere: a division whose denominator
underflows below ``TAU_POLE`` relative to its numerator yields ``INFINITY``,
and evaluation at ``INFINITY`` goes through the chart w = 1/z (implemented
exactly on the rational normal form P/Q).
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .sphere import (
    INFINITY,
    ExtComplex,
    SphereArithmeticError,
    ext_add,
    ext_mul,
    ext_neg,
    ext_pow,
    ext_sub,
    is_infinity,
    safe_div,
)

MAX_EXPONENT = 64


class MapExprError(Exception):
    """Base class for errors raised by this module."""


class ParseError(MapExprError):
    """Syntax error with the byte offset of the offending character."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class EvalError(MapExprError):
    """Indeterminate evaluation (0/0, inf - inf and friends)."""


class PoleAtCenterError(MapExprError):
    """A Taylor jet was requested at a pole of the map."""


# ---------------------------------------------------------------------------
# Syntax tree


@dataclass(frozen=True)
class Const:
    """Constant node.

    Parser-produced constants are either nonnegative reals or exactly the
    imaginary unit; negative or general complex constants are represented
    structurally (Neg, a+b*i).
    """

    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    child: "Node"


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Div:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Const, Var, Neg, Add, Sub, Mul, Div, Pow]

_I = Const(1j)
_ZERO = Const(0j)
_ONE = Const(1 + 0j)


@dataclass(frozen=True)
class MapExpr:
    """A parsed map: syntax tree plus the text it came from."""

    root: Node
    source_text: str

    @property
    def canonical(self) -> str:
        return print_expr(self.root)

    def __str__(self) -> str:
        return self.canonical


# ---------------------------------------------------------------------------
# Lexer / parser

_TOKEN_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|[izZ()^*/+-]|\S")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "i", "z", one of "()^*/+-", "eof"
    text: str
    offset: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        assert m is not None
        tok = m.group(0)
        if tok[0].isdigit():
            tokens.append(_Token("num", tok, pos))
        elif tok in ("i",):
            tokens.append(_Token("i", tok, pos))
        elif tok in ("z", "Z"):
            tokens.append(_Token("z", tok, pos))
        elif tok in "()^*/+-":
            tokens.append(_Token(tok, tok, pos))
        else:
            raise ParseError(f"unexpected character {tok[0]!r}", pos)
        pos = m.end()
    tokens.append(_Token("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _lex(text)
        self.pos = 0

    def _peek(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def _err(self, message: str, tok: _Token) -> ParseError:
        # at end of input, point at the last byte rather than one past it
        offset = tok.offset
        if tok.kind == "eof" and len(self.text) > 0:
            offset = min(offset, len(self.text) - 1)
        return ParseError(message, offset)

    def parse(self) -> Node:
        node = self.expr()
        tok = self._peek()
        if tok.kind != "eof":
            raise self._err(f"unexpected {tok.text!r} after expression", tok)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._peek().kind in ("+", "-"):
            op = self._advance()
            rhs = self.term()
            node = Add(node, rhs) if op.kind == "+" else Sub(node, rhs)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self._peek().kind in ("*", "/"):
            op = self._advance()
            rhs = self.factor()
            if op.kind == "/":
                if rhs == _ZERO:
                    raise self._err("division by the constant zero", op)
                node = Div(node, rhs)
            else:
                node = Mul(node, rhs)
        return node

    def factor(self) -> Node:
        node = self.base()
        if self._peek().kind == "^":
            self._advance()
            sign = 1
            tok = self._peek()
            if tok.kind in ("+", "-"):
                self._advance()
                sign = -1 if tok.kind == "-" else 1
            tok = self._peek()
            if tok.kind != "num" or not tok.text.isdigit():
                raise self._err("expected integer exponent", tok)
            self._advance()
            exponent = sign * int(tok.text)
            if abs(exponent) > MAX_EXPONENT:
                raise self._err(
                    f"exponent overflow (|exponent| > {MAX_EXPONENT})", tok
                )
            node = Pow(node, exponent)
        return node

    def base(self) -> Node:
        tok = self._peek()
        if tok.kind == "num":
            self._advance()
            return Const(complex(float(tok.text), 0.0))
        if tok.kind == "i":
            self._advance()
            return _I
        if tok.kind == "z":
            self._advance()
            return Var()
        if tok.kind == "(":
            self._advance()
            node = self.expr()
            closing = self._peek()
            if closing.kind != ")":
                raise self._err("expected ')'", closing)
            self._advance()
            return node
        if tok.kind == "-":
            self._advance()
            return Neg(self.base())
        raise self._err("expected operand", tok)


def parse_map(text: str) -> MapExpr:
    """Parse grammar text into a MapExpr.  Raises ParseError with offset."""
    return MapExpr(_Parser(text).parse(), text)


# ---------------------------------------------------------------------------
# Canonical printing


def _fmt_real(x: float) -> str:
    if x == 0.0:
        return "0"  # avoid the "-0" spelling
    return format(x, ".17g")


def print_expr(node: Node) -> str:
    """Fully parenthesized canonical text; coefficients at 17 significant
    digits.  Parser- and derive-produced trees round-trip exactly."""
    if isinstance(node, Const):
        v = node.value
        if v == 1j:
            return "i"
        if v.imag == 0.0 and (v.real > 0.0 or v.real == 0.0):
            return _fmt_real(v.real)
        # non-canonical constant (hand-built tree): emit an equivalent
        # structural spelling rather than fail
        return print_expr(const_node(v))
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Neg):
        return "(-" + print_expr(node.child) + ")"
    if isinstance(node, Add):
        return "(" + print_expr(node.left) + "+" + print_expr(node.right) + ")"
    if isinstance(node, Sub):
        return "(" + print_expr(node.left) + "-" + print_expr(node.right) + ")"
    if isinstance(node, Mul):
        return "(" + print_expr(node.left) + "*" + print_expr(node.right) + ")"
    if isinstance(node, Div):
        return "(" + print_expr(node.left) + "/" + print_expr(node.right) + ")"
    if isinstance(node, Pow):
        return "(" + print_expr(node.base) + "^" + str(node.exponent) + ")"
    raise TypeError(f"not a node: {node!r}")


def const_text(c: complex) -> str:
    """Grammar text for an arbitrary complex constant, parenthesized so it can
    be spliced into templates as a factor."""
    c = complex(c)
    re_part = _fmt_real(abs(c.real))
    im_part = _fmt_real(abs(c.imag))
    if c.imag == 0.0:
        return f"(-{re_part})" if c.real < 0 else re_part
    im_text = "i" if abs(c.imag) == 1.0 else f"{im_part}*i"
    if c.real == 0.0:
        return f"(-{im_text})" if c.imag < 0 else f"({im_text})"
    re_text = f"-{re_part}" if c.real < 0 else re_part
    sign = "-" if c.imag < 0 else "+"
    return f"({re_text}{sign}{im_text})"


def const_node(c: complex) -> Node:
    """Canonical (parser-shaped) tree for an arbitrary complex constant."""
    return _Parser(const_text(complex(c))).parse()


# ---------------------------------------------------------------------------
# Evaluation


def _root(m: MapExpr | Node) -> Node:
    return m.root if isinstance(m, MapExpr) else m


def eval_map(m: MapExpr | Node, z: ExtComplex) -> ExtComplex:
    """Evaluate on the sphere.  Poles return INFINITY; indeterminate forms
    raise EvalError."""
    node = _root(m)
    if is_infinity(z):
        return eval_at_infinity(node)
    try:
        return _ev(node, complex(z))
    except SphereArithmeticError as exc:
        raise EvalError(str(exc)) from exc


def _ev(node: Node, z: complex) -> ExtComplex:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return z
    if isinstance(node, Neg):
        return ext_neg(_ev(node.child, z))
    if isinstance(node, Add):
        return ext_add(_ev(node.left, z), _ev(node.right, z))
    if isinstance(node, Sub):
        return ext_sub(_ev(node.left, z), _ev(node.right, z))
    if isinstance(node, Mul):
        return ext_mul(_ev(node.left, z), _ev(node.right, z))
    if isinstance(node, Div):
        return safe_div(_ev(node.left, z), _ev(node.right, z))
    if isinstance(node, Pow):
        return ext_pow(_ev(node.base, z), node.exponent)
    raise TypeError(f"not a node: {node!r}")


def eval_array(m: MapExpr | Node, Z: np.ndarray) -> np.ndarray:
    """Vectorized evaluation with IEEE semantics: poles become inf/nan
    silently.  Meant for grid sweeps where exceptional points are masked by
    the caller."""
    Z = np.asarray(Z, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = _ev_arr(_root(m), Z)
    return np.broadcast_to(out, Z.shape).astype(np.complex128, copy=False)


def _ev_arr(node: Node, Z: np.ndarray):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return Z
    if isinstance(node, Neg):
        return -_ev_arr(node.child, Z)
    if isinstance(node, Add):
        return _ev_arr(node.left, Z) + _ev_arr(node.right, Z)
    if isinstance(node, Sub):
        return _ev_arr(node.left, Z) - _ev_arr(node.right, Z)
    if isinstance(node, Mul):
        return _ev_arr(node.left, Z) * _ev_arr(node.right, Z)
    if isinstance(node, Div):
        return _ev_arr(node.left, Z) / _ev_arr(node.right, Z)
    if isinstance(node, Pow):
        base = _ev_arr(node.base, Z)
        if np.isscalar(base) or getattr(base, "shape", ()) == ():
            base = np.asarray(base, dtype=np.complex128)
        return base ** node.exponent
    raise TypeError(f"not a node: {node!r}")


# ---------------------------------------------------------------------------
# Rational normal form (ascending coefficient arrays) and limits


def _trim(p: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(p)) if p.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=np.complex128)
    keep = np.nonzero(np.abs(p) > 1e-14 * scale)[0]
    if keep.size == 0:
        return np.zeros(1, dtype=np.complex128)
    return p[: keep[-1] + 1]


def _pmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _trim(np.convolve(a, b))


def _padd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.complex128)
    out[: len(a)] += a
    out[: len(b)] += b
    return _trim(out)


def _ppow(a: np.ndarray, n: int) -> np.ndarray:
    out = np.ones(1, dtype=np.complex128)
    acc = a
    while n:
        if n & 1:
            out = _pmul(out, acc)
        n >>= 1
        if n:
            acc = _pmul(acc, acc)
    return out


def rational_form(m: MapExpr | Node) -> tuple[np.ndarray, np.ndarray]:
    """The map as a ratio P(z)/Q(z) of polynomials, ascending coefficients.

    Exact in the polynomial algebra up to float rounding; no common-factor
    cancellation is attempted.
    """
    return _rational(_root(m))


def _rational(node: Node) -> tuple[np.ndarray, np.ndarray]:
    one = np.ones(1, dtype=np.complex128)
    if isinstance(node, Const):
        return np.array([node.value], dtype=np.complex128), one
    if isinstance(node, Var):
        return np.array([0, 1], dtype=np.complex128), one
    if isinstance(node, Neg):
        p, q = _rational(node.child)
        return -p, q
    if isinstance(node, (Add, Sub)):
        p1, q1 = _rational(node.left)
        p2, q2 = _rational(node.right)
        if isinstance(node, Sub):
            p2 = -p2
        return _padd(_pmul(p1, q2), _pmul(p2, q1)), _pmul(q1, q2)
    if isinstance(node, Mul):
        p1, q1 = _rational(node.left)
        p2, q2 = _rational(node.right)
        return _pmul(p1, p2), _pmul(q1, q2)
    if isinstance(node, Div):
        p1, q1 = _rational(node.left)
        p2, q2 = _rational(node.right)
        q = _pmul(q1, p2)
        if np.all(q == 0):
            raise EvalError("denominator is identically zero")
        return _pmul(p1, q2), q
    if isinstance(node, Pow):
        p, q = _rational(node.base)
        n = node.exponent
        if n >= 0:
            return _ppow(p, n), _ppow(q, n)
        if np.all(p == 0):
            raise EvalError("negative power of the zero expression")
        return _ppow(q, -n), _ppow(p, -n)
    raise TypeError(f"not a node: {node!r}")


def _degree(p: np.ndarray) -> int:
    nz = np.nonzero(p)[0]
    return int(nz[-1]) if nz.size else -1


def eval_at_infinity(m: MapExpr | Node) -> ExtComplex:
    """Limit along the chart w = 1/z, computed exactly from P/Q degrees."""
    p, q = rational_form(m)
    dp, dq = _degree(p), _degree(q)
    if dq < 0:
        raise EvalError("denominator is identically zero")
    if dp < 0:
        return 0j
    if dp > dq:
        return INFINITY
    if dp < dq:
        return 0j
    return complex(p[dp] / q[dq])


def residue_at(m: MapExpr | Node, p0: complex) -> complex:
    """Residue at a simple pole p0 via P(p0)/Q'(p0).  Informational."""
    P, Q = rational_form(m)
    pv = np.polynomial.polynomial.polyval(p0, P)
    dq = np.polynomial.polynomial.polyval(
        p0, np.polynomial.polynomial.polyder(Q)
    )
    if dq == 0:
        raise EvalError("pole is not simple")
    return complex(pv / dq)


def poles_in_disc(m: MapExpr | Node, radius: float = 1.0) -> list[complex]:
    """Roots of the denominator with |root| < radius, excluding removable
    candidates where the numerator vanishes as well."""
    P, Q = rational_form(m)
    if _degree(Q) < 1:
        return []
    roots = np.polynomial.polynomial.polyroots(Q)
    out = []
    for r in roots:
        if abs(r) >= radius:
            continue
        pv = np.polynomial.polynomial.polyval(r, P)
        qscale = np.max(np.abs(Q))
        pscale = max(np.max(np.abs(P)), 1.0)
        if abs(pv) <= 1e-9 * pscale and qscale > 0:
            continue  # likely a removable root
        out.append(complex(r))
    out.sort(key=lambda w: (abs(w), w.real, w.imag))
    return out


def nearest_singularity(m: MapExpr | Node) -> float:
    """Distance from 0 to the nearest denominator root (inf when entire)."""
    P, Q = rational_form(m)
    if _degree(Q) < 1:
        return float("inf")
    roots = np.polynomial.polynomial.polyroots(Q)
    if roots.size == 0:
        return float("inf")
    return float(np.min(np.abs(roots)))


# ---------------------------------------------------------------------------
# Symbolic derivative (with light constant folding at construction)


def _is_const(node: Node, value: complex) -> bool:
    return isinstance(node, Const) and node.value == value


def _int_const(n: int) -> Node:
    if n < 0:
        return Neg(Const(complex(-n, 0)))
    return Const(complex(n, 0))


def _fadd(a: Node, b: Node) -> Node:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return Add(a, b)


def _fsub(a: Node, b: Node) -> Node:
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return Neg(b)
    return Sub(a, b)


def _fmul(a: Node, b: Node) -> Node:
    if _is_const(a, 0) or _is_const(b, 0):
        return _ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return Mul(a, b)


def _fdiv(a: Node, b: Node) -> Node:
    if _is_const(a, 0):
        return _ZERO
    if _is_const(b, 1):
        return a
    return Div(a, b)


def _fpow(base: Node, n: int) -> Node:
    if n == 0:
        return _ONE
    if n == 1:
        return base
    return Pow(base, n)


def _d(node: Node) -> Node:
    if isinstance(node, Const):
        return _ZERO
    if isinstance(node, Var):
        return _ONE
    if isinstance(node, Neg):
        inner = _d(node.child)
        return _ZERO if _is_const(inner, 0) else Neg(inner)
    if isinstance(node, Add):
        return _fadd(_d(node.left), _d(node.right))
    if isinstance(node, Sub):
        return _fsub(_d(node.left), _d(node.right))
    if isinstance(node, Mul):
        return _fadd(
            _fmul(_d(node.left), node.right), _fmul(node.left, _d(node.right))
        )
    if isinstance(node, Div):
        num = _fsub(
            _fmul(_d(node.left), node.right), _fmul(node.left, _d(node.right))
        )
        return _fdiv(num, _fpow(node.right, 2))
    if isinstance(node, Pow):
        n = node.exponent
        if n == 0:
            return _ZERO
        du = _d(node.base)
        term = _fmul(_int_const(n), _fpow(node.base, n - 1))
        return _fmul(term, du)
    raise TypeError(f"not a node: {node!r}")


@functools.lru_cache(maxsize=512)
def derive(m: MapExpr) -> MapExpr:
    """Symbolic derivative.  The result round-trips through the grammar."""
    root = _d(m.root)
    return MapExpr(root, print_expr(root))


def compose(m: MapExpr, inner: MapExpr) -> MapExpr:
    """Substitute inner for the variable of m (tree substitution)."""

    def sub(node: Node) -> Node:
        if isinstance(node, Var):
            return inner.root
        if isinstance(node, Const):
            return node
        if isinstance(node, Neg):
            return Neg(sub(node.child))
        if isinstance(node, Add):
            return Add(sub(node.left), sub(node.right))
        if isinstance(node, Sub):
            return Sub(sub(node.left), sub(node.right))
        if isinstance(node, Mul):
            return Mul(sub(node.left), sub(node.right))
        if isinstance(node, Div):
            return Div(sub(node.left), sub(node.right))
        if isinstance(node, Pow):
            return Pow(sub(node.base), node.exponent)
        raise TypeError(f"not a node: {node!r}")

    root = sub(m.root)
    return MapExpr(root, print_expr(root))


# ---------------------------------------------------------------------------
# Jets


@dataclass(frozen=True)
class SeriesJet:
    """Truncated Taylor expansion around a center: sum c_j (z - center)^j."""

    center: complex
    coeffs: tuple[complex, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, j: int) -> complex:
        return self.coeffs[j]


def series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = len(a)
    return np.convolve(a, b)[:n]


def series_inv(a: np.ndarray) -> np.ndarray:
    n = len(a)
    scale = np.max(np.abs(a)) if n else 0.0
    if scale == 0.0 or abs(a[0]) <= 1e-13 * scale:
        raise PoleAtCenterError("series has (numerically) zero constant term")
    out = np.zeros(n, dtype=np.complex128)
    out[0] = 1.0 / a[0]
    for k in range(1, n):
        out[k] = -np.dot(a[1 : k + 1], out[k - 1 :: -1][: k]) / a[0]
    return out


def series_pow(a: np.ndarray, n: int) -> np.ndarray:
    if n < 0:
        return series_pow(series_inv(a), -n)
    out = np.zeros(len(a), dtype=np.complex128)
    out[0] = 1.0
    acc = a.copy()
    while n:
        if n & 1:
            out = series_mul(out, acc)
        n >>= 1
        if n:
            acc = series_mul(acc, acc)
    return out


def _jet_arr(node: Node, J: int, center: complex) -> np.ndarray:
    zero = np.zeros(J + 1, dtype=np.complex128)
    if isinstance(node, Const):
        out = zero.copy()
        out[0] = node.value
        return out
    if isinstance(node, Var):
        out = zero.copy()
        out[0] = center
        if J >= 1:
            out[1] = 1.0
        return out
    if isinstance(node, Neg):
        return -_jet_arr(node.child, J, center)
    if isinstance(node, Add):
        return _jet_arr(node.left, J, center) + _jet_arr(node.right, J, center)
    if isinstance(node, Sub):
        return _jet_arr(node.left, J, center) - _jet_arr(node.right, J, center)
    if isinstance(node, Mul):
        return series_mul(
            _jet_arr(node.left, J, center), _jet_arr(node.right, J, center)
        )
    if isinstance(node, Div):
        return series_mul(
            _jet_arr(node.left, J, center),
            series_inv(_jet_arr(node.right, J, center)),
        )
    if isinstance(node, Pow):
        return series_pow(_jet_arr(node.base, J, center), node.exponent)
    raise TypeError(f"not a node: {node!r}")


def taylor_jet(m: MapExpr | Node, order: int, center: complex = 0j) -> SeriesJet:
    """Taylor coefficients c_0..c_order at the center (jet arithmetic).

    Raises PoleAtCenterError when the center sits on a pole.
    """
    if order < 2:
        raise ValueError("jet order must be at least 2")
    coeffs = _jet_arr(_root(m), order, complex(center))
    return SeriesJet(complex(center), tuple(complex(c) for c in coeffs))


def laurent_at_infinity(m: MapExpr | Node, order: int) -> tuple[int, np.ndarray]:
    """Expansion at infinity: returns (k, c) with
    m(z) = sum_j c[j] * z^(k - j), j = 0..order, c[0] != 0.

    Computed from the rational normal form, so it is exact up to rounding.
    """
    P, Q = rational_form(m)
    dp, dq = _degree(P), _degree(Q)
    if dq < 0:
        raise EvalError("denominator is identically zero")
    if dp < 0:
        return 0, np.zeros(order + 1, dtype=np.complex128)
    # in the chart w = 1/z:  m = w^(dq - dp) * Prev(w)/Qrev(w)
    prev = P[dp::-1].astype(np.complex128)
    qrev = Q[dq::-1].astype(np.complex128)
    n = order + 1
    a = np.zeros(n, dtype=np.complex128)
    a[: min(n, len(prev))] = prev[:n]
    b = np.zeros(n, dtype=np.complex128)
    b[: min(n, len(qrev))] = qrev[:n]
    series = series_mul(a, series_inv(b))
    return dp - dq, series


def is_normalized(m: MapExpr | Node, tol: float = 1e-12) -> bool:
    """True when the jet at 0 starts z + O(z^2)."""
    try:
        jet = taylor_jet(m, 2)
    except PoleAtCenterError:
        return False
    return abs(jet[0]) <= tol and abs(jet[1] - 1.0) <= tol
