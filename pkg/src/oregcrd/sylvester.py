"""Differential Sylvester matrices and their inflation to real matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ZeroOperandError
from .ore import DiffPoly, ore_mul
from .polynomial import Poly, poly_norm2


def psi(f: DiffPoly, ell: int) -> list[Poly]:
    """Coefficient vector ``(f_0, ..., f_m, 0, ..., 0)`` of length ``ell``."""
    if not f.is_zero() and f.deg_d >= ell:
        raise ValueError(f"deg_D f = {f.deg_d} does not fit in length {ell}")
    return [f.coeff(i) for i in range(ell)]


@dataclass(frozen=True)
class SylvesterMatrix:
    entries: tuple  # rows of Poly
    m: int
    n: int
    d: int
    exact: bool = False

    @property
    def size(self) -> int:
        return self.m + self.n

    @property
    def mu(self) -> int:
        return 2 * (self.m + self.n) * self.d

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def evaluate(self, x) -> np.ndarray:
        return np.array([[p(x) for p in row] for row in self.entries])


def _shape(f: DiffPoly, g: DiffPoly):
    if f.is_zero() or g.is_zero():
        raise ZeroOperandError("Sylvester matrix of a zero operator")
    return f.deg_d, g.deg_d, max(0, f.deg_t, g.deg_t)


def build_sylvester(f: DiffPoly, g: DiffPoly) -> SylvesterMatrix:
    """Rows ``psi(D^i f)`` for ``i < n`` then ``psi(D^j g)`` for ``j < m``."""
    f._check(g)
    m, n, d = _shape(f, g)
    N = m + n
    D = DiffPoly.D(f.exact)
    rows = []
    for op, count in ((f, n), (g, m)):
        cur = op
        for _ in range(count):
            rows.append(tuple(psi(cur, N)))
            cur = ore_mul(D, cur)
    return SylvesterMatrix(tuple(rows), m, n, d, f.exact)


def gamma(a: Poly, mu: int, d: int) -> np.ndarray:
    """Multiplication-by-``a`` matrix: row ``k`` holds the coefficients of ``t^k a``."""
    if a.degree > d:
        raise ValueError(f"deg a = {a.degree} exceeds d = {d}")
    out = np.zeros((mu + 1, mu + d + 1))
    if a.is_zero():
        return out
    c = np.array([float(x) for x in a.coeffs])
    for k in range(mu + 1):
        out[k, k : k + len(c)] = c
    return out


@dataclass(frozen=True)
class InflatedMatrix:
    data: np.ndarray = field(repr=False)
    m: int
    n: int
    d: int
    mu: int

    @property
    def size(self) -> int:
        return self.m + self.n

    @property
    def block_rows(self) -> int:
        return self.mu + 1

    @property
    def block_cols(self) -> int:
        return self.mu + self.d + 1

    @property
    def shape(self):
        return self.data.shape

    def block(self, i: int, j: int) -> np.ndarray:
        br, bc = self.block_rows, self.block_cols
        return self.data[i * br : (i + 1) * br, j * bc : (j + 1) * bc]

    def with_data(self, data: np.ndarray) -> InflatedMatrix:
        return InflatedMatrix(data, self.m, self.n, self.d, self.mu)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.data, "fro"))

    def spectral_norm(self) -> float:
        return float(np.linalg.norm(self.data, 2)) if self.data.size else 0.0

    def to_text(self, fmt: str = "%.17g") -> str:
        return "\n".join(" ".join(fmt % x for x in row) for row in self.data)


def inflate(V: SylvesterMatrix, mu: int | None = None) -> InflatedMatrix:
    mu = V.mu if mu is None else mu
    N, d = V.size, V.d
    br, bc = mu + 1, mu + d + 1
    data = np.zeros((N * br, N * bc))
    for i in range(N):
        for j in range(N):
            data[i * br : (i + 1) * br, j * bc : (j + 1) * bc] = gamma(V[i, j], mu, d)
    return InflatedMatrix(data, V.m, V.n, d, mu)


def inflated_sylvester(f: DiffPoly, g: DiffPoly) -> InflatedMatrix:
    return inflate(build_sylvester(f, g))


def frobenius_norm(V: SylvesterMatrix):
    """``sqrt(sum |V_ij|^2)``; exact matrices return the exact squared norm."""
    sq = [poly_norm2(p) for row in V.entries for p in row]
    if V.exact:
        return sum(sq, Fraction(0))
    return math.sqrt(math.fsum(x * x for x in sq))
