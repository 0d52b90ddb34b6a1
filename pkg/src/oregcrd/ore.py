"""Differential polynomials ``sum_i f_i(t) D^i`` with ``D t = t D + 1``.

Coefficients always sit to the left of the powers of ``D``.  The exact
(rational) mode carries the Euclidean machinery used as an oracle by the
numeric code: pseudo right division, content, and the GCRD.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .errors import ModeMismatchError, ZeroOperandError
from .polynomial import ZERO_DEGREE, Poly, poly_divmod, poly_gcd, poly_norm2, render_poly


@dataclass(frozen=True)
class DiffPoly:
    coeffs: tuple  # of Poly, index = power of D
    exact: bool = False

    def __post_init__(self):
        cs = []
        for c in self.coeffs:
            if not isinstance(c, Poly):
                c = Poly(tuple(c) if isinstance(c, (list, tuple)) else (c,), self.exact)
            if c.exact != self.exact:
                raise ModeMismatchError("coefficient mode differs from operator mode")
            cs.append(c)
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence], exact: bool = False) -> DiffPoly:
        """Build from nested coefficient lists: ``rows[i][j]`` is the ``t^j D^i`` coefficient."""
        return cls(tuple(Poly(tuple(r), exact) for r in rows), exact)

    @classmethod
    def zero(cls, exact: bool = False) -> DiffPoly:
        return cls((), exact)

    @classmethod
    def one(cls, exact: bool = False) -> DiffPoly:
        return cls((Poly.const(1, exact),), exact)

    @classmethod
    def D(cls, exact: bool = False) -> DiffPoly:
        return cls((Poly.zero(exact), Poly.const(1, exact)), exact)

    @classmethod
    def scalar(cls, p: Poly) -> DiffPoly:
        return cls((p,), p.exact)

    @property
    def deg_d(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def deg_t(self):
        return max((c.degree for c in self.coeffs), default=ZERO_DEGREE)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lcoeff(self) -> Poly:
        return self.coeffs[-1] if self.coeffs else Poly.zero(self.exact)

    def coeff(self, i: int) -> Poly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Poly.zero(self.exact)

    def to_exact(self) -> DiffPoly:
        return DiffPoly(tuple(c.to_exact() for c in self.coeffs), True)

    def to_float(self) -> DiffPoly:
        return DiffPoly(tuple(c.to_float() for c in self.coeffs), False)

    def to_lists(self) -> list[list]:
        return [list(c.coeffs) for c in self.coeffs]

    def map(self, fn) -> DiffPoly:
        return DiffPoly(tuple(fn(c) for c in self.coeffs), self.exact)

    def scale(self, c) -> DiffPoly:
        return self.map(lambda p: p.scale(c))

    def left_mul_poly(self, p: Poly) -> DiffPoly:
        return self.map(lambda c: p * c)

    def _check(self, other: DiffPoly):
        if self.exact != other.exact:
            raise ModeMismatchError("cannot combine float and exact-rational operators")

    def __add__(self, other: DiffPoly) -> DiffPoly:
        return ore_add(self, other)

    def __neg__(self) -> DiffPoly:
        return self.map(lambda c: -c)

    def __sub__(self, other: DiffPoly) -> DiffPoly:
        return ore_add(self, -other)

    def __mul__(self, other: DiffPoly) -> DiffPoly:
        return ore_mul(self, other)

    def __repr__(self):
        return f"DiffPoly({render(self)!r}{', exact' if self.exact else ''})"


def ore_add(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    a._check(b)
    n = max(len(a.coeffs), len(b.coeffs))
    return DiffPoly(tuple(a.coeff(i) + b.coeff(i) for i in range(n)), a.exact)


def _d_power_times(k: int, b: DiffPoly) -> list[Poly]:
    """Coefficients of ``D^k * b`` via Leibniz: D^k c = sum_j C(k,j) c^(j) D^(k-j)."""
    out = [Poly.zero(b.exact)] * (k + len(b.coeffs))
    for i, c in enumerate(b.coeffs):
        deriv = c
        for j in range(k + 1):
            if deriv.is_zero():
                break
            out[i + k - j] = out[i + k - j] + deriv.scale(comb(k, j))
            deriv = deriv.derivative()
    return out


def ore_mul(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    a._check(b)
    if a.is_zero() or b.is_zero():
        return DiffPoly.zero(a.exact)
    out = [Poly.zero(a.exact)] * (len(a.coeffs) + len(b.coeffs) - 1)
    for k, ak in enumerate(a.coeffs):
        if ak.is_zero():
            continue
        for i, c in enumerate(_d_power_times(k, b)):
            if not c.is_zero():
                out[i] = out[i] + ak * c
    return DiffPoly(tuple(out), a.exact)


def apply(f: DiffPoly, y: Poly) -> Poly:
    """Action of ``f`` on a polynomial function: ``sum_i f_i(t) y^(i)(t)``."""
    if f.exact != y.exact:
        raise ModeMismatchError("operator and operand modes differ")
    acc = Poly.zero(y.exact)
    deriv = y
    for c in f.coeffs:
        acc = acc + c * deriv
        deriv = deriv.derivative()
    return acc


def diff_norm(f: DiffPoly):
    """Coefficient 2-norm.  Exact operators return the exact squared norm."""
    if f.exact:
        return sum((poly_norm2(c) for c in f.coeffs), Fraction(0))
    return math.sqrt(math.fsum(poly_norm2(c) ** 2 for c in f.coeffs))


def normalize(f: DiffPoly) -> DiffPoly:
    if f.exact:
        raise ModeMismatchError("normalize is a float-mode operation")
    nrm = diff_norm(f)
    if nrm == 0:
        raise ZeroOperandError("cannot normalize the zero operator")
    return f.scale(1.0 / nrm)


# -- exact Euclidean machinery ---------------------------------------------

@dataclass(frozen=True)
class DivisionResult:
    """``multiplier * f = quotient * g + remainder`` with ``deg_D remainder < deg_D g``.

    ``multiplier`` is a polynomial in ``t``; it is 1 whenever the leading
    coefficient of ``g`` is a constant, and otherwise a power of it (pseudo
    division keeps everything inside Q[t][D]).
    """

    quotient: DiffPoly
    remainder: DiffPoly
    multiplier: Poly


def right_division(f: DiffPoly, g: DiffPoly) -> DivisionResult:
    if not (f.exact and g.exact):
        raise ModeMismatchError("right_division needs exact-rational operators")
    if g.is_zero():
        raise ZeroOperandError("right division by the zero operator")
    one = Poly.const(1, True)
    n = g.deg_d
    lg = g.lcoeff
    const_lead = lg.degree == 0
    q = DiffPoly.zero(True)
    r = f
    mult = one
    while not r.is_zero() and r.deg_d >= n:
        k = r.deg_d - n
        lr = r.lcoeff
        if const_lead:
            c, scale = lr.scale(1 / lg.lead), one
        else:
            c, rem = poly_divmod(lr, lg)
            if rem.is_zero():
                scale = one
            else:
                c, scale = lr, lg
        term = DiffPoly((Poly.zero(True),) * k + (c,), True)
        if scale != one:
            r = r.left_mul_poly(scale)
            q = q.left_mul_poly(scale)
            mult = mult * scale
        r = r - ore_mul(term, g)
        q = q + term
    return DivisionResult(q, r, mult)


def content(f: DiffPoly) -> Poly:
    """Content ``c`` with ``f = c * primitive_part(f)`` (see :func:`primitive_part`)."""
    if not f.exact:
        raise ModeMismatchError("content is computed in exact mode")
    if f.is_zero():
        raise ZeroOperandError("content of the zero operator")
    g = Poly.zero(True)
    for c in f.coeffs:
        g = poly_gcd(g, c)
        if g.degree == 0:
            break
    # fold the scalar into the content so the primitive part has a unit leading term
    lead_scalar = poly_divmod(f.lcoeff, g)[0].lead
    return g.scale(lead_scalar)


def primitive_part(f: DiffPoly) -> DiffPoly:
    """``f`` divided by its polynomial content, scaled so ``lcoeff(f).lead == 1``."""
    c = content(f)
    out = []
    for p in f.coeffs:
        q, r = poly_divmod(p, c)
        assert r.is_zero()
        out.append(q)
    return DiffPoly(tuple(out), True)


def exact_gcrd(f: DiffPoly, g: DiffPoly) -> DiffPoly:
    """Greatest common right divisor over Q(t), returned primitive and canonical.

    Canonical means: primitive in Q[t][D] and the leading coefficient's
    leading term equal to 1.
    """
    if not (f.exact and g.exact):
        raise ModeMismatchError("exact_gcrd needs exact-rational operators")
    if f.is_zero() and g.is_zero():
        raise ZeroOperandError("gcrd(0, 0) is undefined")
    if f.is_zero():
        return primitive_part(g)
    if g.is_zero():
        return primitive_part(f)
    a, b = primitive_part(f), primitive_part(g)
    if a.deg_d < b.deg_d:
        a, b = b, a
    while not b.is_zero():
        r = right_division(a, b).remainder
        a, b = b, (primitive_part(r) if not r.is_zero() else r)
    return primitive_part(a)


# -- rendering -------------------------------------------------------------

def render(f: DiffPoly, dvar: str = "D", tvar: str = "t") -> str:
    if f.is_zero():
        return "0"
    parts = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if c.is_zero():
            continue
        cs = render_poly(c, tvar)
        if i == 0:
            parts.append(cs)
            continue
        mon = dvar if i == 1 else f"{dvar}^{i}"
        if c == Poly.const(1, c.exact):
            parts.append(mon)
        elif len([x for x in c.coeffs if x != 0]) > 1:
            parts.append(f"({cs})*{mon}")
        else:
            parts.append(f"{cs}*{mon}")
    return " + ".join(parts).replace("+ -", "- ")


def random_diffpoly(rng: np.random.Generator, deg_d: int, deg_t: int) -> DiffPoly:
    """Uniform [-1, 1] coefficients; the leading coefficient is kept nonzero."""
    rows = [rng.uniform(-1, 1, deg_t + 1) for _ in range(deg_d + 1)]
    return DiffPoly(tuple(Poly(tuple(r)) for r in rows))
