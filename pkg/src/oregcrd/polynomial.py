"""Dense univariate polynomials in ``t`` over floats or exact rationals.

A :class:`Poly` is immutable and always canonical: trailing zeros are
trimmed, so ``coeffs[-1]`` is nonzero unless the polynomial is zero (in
which case ``coeffs`` is empty).  The scalar mode is fixed at construction
and operations refuse to mix modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DivisionInstabilityError,
    InterpolationError,
    ModeMismatchError,
    ZeroOperandError,
)

#: Degree of the zero polynomial.  Compares below every valid degree.
ZERO_DEGREE = -math.inf

DEFAULT_CLEANUP = 1e-8
HALF_STEP = 0.5


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, Rational):
        return Fraction(c)
    if isinstance(c, float):
        # decimal reading, so that 0.3 means 3/10 and not the binary value
        return Fraction(repr(c))
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot interpret {c!r} as an exact rational")


@dataclass(frozen=True)
class Poly:
    coeffs: tuple
    exact: bool = False

    def __post_init__(self):
        if self.exact:
            cs = [_to_fraction(c) for c in self.coeffs]
        else:
            cs = []
            for c in self.coeffs:
                if isinstance(c, Fraction):
                    raise ModeMismatchError("rational coefficient in a float polynomial")
                cs.append(float(c))
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, exact: bool = False) -> Poly:
        return cls((), exact)

    @classmethod
    def const(cls, c, exact: bool = False) -> Poly:
        return cls((c,), exact)

    @classmethod
    def monomial(cls, k: int, c=1, exact: bool = False) -> Poly:
        return cls((0,) * k + (c,), exact)

    def to_exact(self) -> Poly:
        """Rationalise the coefficients using their shortest decimal repr."""
        return Poly(self.coeffs, exact=True)

    def to_float(self) -> Poly:
        return Poly(tuple(float(c) for c in self.coeffs), exact=False)

    # -- basic queries ----------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else self._zero_scalar()

    def _zero_scalar(self):
        return Fraction(0) if self.exact else 0.0

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self._zero_scalar()

    def padded(self, length: int) -> np.ndarray:
        """Coefficient vector of exactly ``length`` floats (truncating is an error)."""
        if len(self.coeffs) > length:
            raise ValueError(f"degree {self.degree} does not fit in length {length}")
        out = np.zeros(length)
        out[: len(self.coeffs)] = [float(c) for c in self.coeffs]
        return out

    def __call__(self, x):
        acc = 0 * x + self._zero_scalar()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: Poly):
        if self.exact != other.exact:
            raise ModeMismatchError("cannot combine float and exact-rational polynomials")

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, float, Fraction)):
            if isinstance(other, float) and self.exact:
                raise ModeMismatchError("float scalar used with an exact polynomial")
            return Poly.const(other, self.exact)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(tuple(out), self.exact)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs), self.exact)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.exact)
        if not self.exact:
            return Poly(tuple(np.convolve(a, b)), False)
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly(tuple(out), True)

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        return Poly(tuple(c * x for x in self.coeffs), self.exact)

    def shift(self, k: int) -> Poly:
        """Multiply by ``t**k``."""
        if not self.coeffs:
            return self
        return Poly((self._zero_scalar(),) * k + self.coeffs, self.exact)

    def derivative(self) -> Poly:
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0), self.exact)

    def truncate(self, max_degree) -> Poly:
        """Drop terms above ``max_degree`` (all terms if it is ``ZERO_DEGREE``)."""
        if max_degree == ZERO_DEGREE or max_degree < 0:
            return Poly.zero(self.exact)
        return Poly(self.coeffs[: int(max_degree) + 1], self.exact)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.exact == other.exact and self.coeffs == other.coeffs
        if isinstance(other, (int, float, Fraction)):
            return self.coeffs == Poly.const(other, self.exact).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.exact))

    def __repr__(self):
        return f"Poly({render_poly(self)!r}{', exact' if self.exact else ''})"


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_derivative(a: Poly) -> Poly:
    return a.derivative()


def poly_norm2(a: Poly):
    """Coefficient 2-norm.  Exact polynomials return the exact *squared* norm."""
    if a.exact:
        return sum((c * c for c in a.coeffs), Fraction(0))
    return math.sqrt(math.fsum(c * c for c in a.coeffs))


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Euclidean division ``a = q*b + r`` with ``deg r < deg b``."""
    a._check(b)
    if b.is_zero():
        raise ZeroOperandError("polynomial division by zero")
    if a.degree < b.degree:
        return Poly.zero(a.exact), a
    r = list(a.coeffs)
    q = [a._zero_scalar()] * (len(r) - len(b.coeffs) + 1)
    lb, db = b.coeffs[-1], len(b.coeffs) - 1
    for k in range(len(q) - 1, -1, -1):
        c = r[k + db] / lb
        q[k] = c
        if c:
            for j, bc in enumerate(b.coeffs):
                r[k + j] -= c * bc
        r[k + db] = a._zero_scalar()
    return Poly(tuple(q), a.exact), Poly(tuple(r[:db]), a.exact)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic GCD over the rationals (Euclid).  Exact mode only."""
    if not (a.exact and b.exact):
        raise ModeMismatchError("poly_gcd needs exact-rational polynomials")
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    if a.is_zero():
        return a
    return a.scale(1 / a.lead)


def render_poly(p: Poly, var: str = "t") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        s = str(c) if p.exact else repr(c)
        if i == 0:
            terms.append(s)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            terms.append(mon if c == 1 else f"{s}*{mon}")
    return " + ".join(terms).replace("+ -", "- ")


# -- FFT evaluation / interpolation ------------------------------------------

def _next_pow2(k: int) -> int:
    return 1 << max(0, int(k) - 1).bit_length()


def _twist(n: int, rotation: float, sign: int) -> np.ndarray:
    return np.exp(sign * -2j * np.pi * rotation * np.arange(n) / n)


def fft_eval(a: Poly, k: int, rotation: float = 0.0) -> np.ndarray:
    """Evaluate ``a`` at the ``n``-th roots of unity, ``n`` = next power of two >= k.

    Entry ``j`` is ``a(exp(-2*pi*i*(j + rotation)/n))`` (numpy's forward-transform
    order); the transform size actually used is ``len(result)``.
    """
    if k < len(a.coeffs):
        raise ValueError(f"need at least {len(a.coeffs)} points, got {k}")
    n = _next_pow2(max(k, 1))
    c = a.to_float().padded(n) if a.exact else a.padded(n)
    if rotation:
        c = c * _twist(n, rotation, 1)
    return np.fft.fft(c)


def fft_interpolate(values, rotation: float = 0.0) -> Poly:
    """Real polynomial taking ``values`` on the grid used by :func:`fft_eval`."""
    values = np.asarray(values, dtype=complex)
    n = len(values)
    if n == 0 or n & (n - 1):
        raise ValueError(f"transform length {n} is not a power of two")
    c = np.fft.ifft(values)
    if rotation:
        c = c * _twist(n, rotation, -1)
    scale = np.linalg.norm(values)
    if np.max(np.abs(c.imag)) > 1e-10 * max(scale, 1.0):
        raise InterpolationError(
            f"imaginary residue {np.max(np.abs(c.imag)):.3g} in interpolated coefficients"
        )
    return Poly(tuple(c.real), exact=False)


def cleanup(p: Poly, threshold: float) -> Poly:
    """Zero every coefficient with magnitude below ``threshold``."""
    return Poly(tuple(0.0 if abs(c) < threshold else c for c in p.coeffs), p.exact)


@dataclass(frozen=True)
class ApproxQuotient:
    quotient: Poly
    residual: float
    inexact: bool


def approx_divide(numer: Poly, denom: Poly, cleanup_threshold: float = DEFAULT_CLEANUP) -> ApproxQuotient:
    """Divide by pointwise quotient of FFT values.

    The grid is the roots of unity turned by half a step, so real divisors
    with a root at +1 or -1 (such as ``t + 1``) stay usable.

    Both operands are first stripped of coefficients below the threshold.
    The quotient is truncated to degree ``deg numer - deg denom`` and cleaned
    again; ``inexact`` is set when ``|numer - q*denom|`` exceeds a tenth of
    ``|numer|``.
    """
    if numer.exact or denom.exact:
        raise ModeMismatchError("approx_divide works on float polynomials")
    numer = cleanup(numer, cleanup_threshold)
    denom = cleanup(denom, cleanup_threshold)
    if denom.is_zero():
        raise ZeroOperandError("approximate division by zero")
    if numer.is_zero():
        return ApproxQuotient(numer, 0.0, False)
    qdeg = numer.degree - denom.degree
    if qdeg < 0:
        raise ValueError("deg numer < deg denom")
    n = len(numer.coeffs)
    num_vals = fft_eval(numer, n, HALF_STEP)
    den_vals = fft_eval(denom, n, HALF_STEP)
    smallest = np.min(np.abs(den_vals))
    if smallest <= cleanup_threshold:
        raise DivisionInstabilityError(
            f"divisor is {smallest:.3g} at an evaluation point"
        )
    q = fft_interpolate(num_vals / den_vals, HALF_STEP)
    q = cleanup(q.truncate(qdeg), cleanup_threshold)
    residual = poly_norm2(numer - q * denom)
    return ApproxQuotient(q, residual, residual > 0.1 * poly_norm2(numer))


def random_poly(rng: np.random.Generator, degree: int, low: float = -1.0, high: float = 1.0) -> Poly:
    return Poly(tuple(rng.uniform(low, high, degree + 1)), exact=False)


def from_sequence(seq: Sequence | Iterable, exact: bool = False) -> Poly:
    return Poly(tuple(seq), exact)
