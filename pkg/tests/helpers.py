"""Worked examples and random instance generators shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from oregcrd.ore import DiffPoly, ore_mul
from oregcrd.polynomial import Poly

# Sylvester matrix example: m = n = 2, common right factor of degree 1
EX1_F = [[0.2, 0.3, 0.06], [1.0, 0.5], [1]]
EX1_G = [[0.2, 0, 0.9, 0.18], [1.0, 0.2, 0.9], [1]]
EX1_V = [
    [[0.2, 0.3, 0.06], [1.0, 0.5], [1], []],
    [[0.3, 0.12], [0.7, 0.3, 0.06], [1.0, 0.5], [1]],
    [[0.2, 0, 0.9, 0.18], [1.0, 0.2, 0.9], [1], []],
    [[0, 1.8, 0.54], [0.4, 1.8, 0.9, 0.18], [1.0, 0.2, 0.9], [1]],
]
EX1_NULLVECTOR = [[-10, 60, 0, 9, -27], [0, 10, -30], [10, -60, -3, 9], [0, -10, 30]]

# inflation example: f = (0.45 + 0.84t)D + 0.42 + 0.11t, g = 0.66D + 0.92t
EX2_F = [[0.42, 0.11], [0.45, 0.84]]
EX2_G = [[0, 0.92], [0.66]]
EX2_VHAT = [
    [0.42, 0.11, 0, 0, 0, 0, 0.45, 0.84, 0, 0, 0, 0],
    [0, 0.42, 0.11, 0, 0, 0, 0, 0.45, 0.84, 0, 0, 0],
    [0, 0, 0.42, 0.11, 0, 0, 0, 0, 0.45, 0.84, 0, 0],
    [0, 0, 0, 0.42, 0.11, 0, 0, 0, 0, 0.45, 0.84, 0],
    [0, 0, 0, 0, 0.42, 0.11, 0, 0, 0, 0, 0.45, 0.84],
    [0, 0.92, 0, 0, 0, 0, 0.66, 0, 0, 0, 0, 0],
    [0, 0, 0.92, 0, 0, 0, 0, 0.66, 0, 0, 0, 0],
    [0, 0, 0, 0.92, 0, 0, 0, 0, 0.66, 0, 0, 0],
    [0, 0, 0, 0, 0.92, 0, 0, 0, 0, 0.66, 0, 0],
    [0, 0, 0, 0, 0, 0.92, 0, 0, 0, 0, 0.66, 0],
]

# numeric GCRD example, eps = 1e-3
NUM_F = [[-0.45, 0, -0.11], [0, -0.56], [-0.45]]
NUM_G = [[0.66, 0, 0.292], [2.0, 0.952], [0.66, 1.0], [1]]
NUM_UNREDUCED = [
    [-0.00002, -0.11378, 0.30993, 0.02781, -0.01461],
    [-0.11380, 0.30990, 0.02781, -0.01460],
]

# nearest-pair example, eps = 0.005
NEAR_F = [[1, 0, 2], [-0.0003, 3], [1, 0.0043]]
NEAR_G = [[0, 0, 1], [0.0001, -0.0004, 0, 1], [0, 0, 1]]
NEAR_GCRD = [[-0.06695, 1.06508], [1]]
NEAR_FT = [[0.99999, 0, 2.00000], [-0.00029, 3.00000], [0.99999, 0.00429]]
NEAR_GT = [
    [-0.00001, -0.00002, 1.00001],
    [0.00011, -0.00039, 0.00005, 0.99999],
    [-0.00001, -0.00002, 0.99999],
]


def diff(rows, exact=False) -> DiffPoly:
    return DiffPoly.from_lists(rows, exact)


def coeff_matrix(f: DiffPoly, deg_d: int | None = None, deg_t: int | None = None) -> np.ndarray:
    """Dense ``(deg_d+1) x (deg_t+1)`` float array of coefficients."""
    dd = f.deg_d if deg_d is None else deg_d
    dt = max(int(f.deg_t), 0) if deg_t is None else deg_t
    out = np.zeros((int(dd) + 1, dt + 1))
    for i, c in enumerate(f.coeffs):
        out[i, : len(c.coeffs)] = [float(x) for x in c.coeffs]
    return out


def max_coeff_diff(a: DiffPoly, b: DiffPoly) -> float:
    dd = int(max(a.deg_d, b.deg_d, 0))
    dt = int(max(a.deg_t, b.deg_t, 0))
    return float(np.abs(coeff_matrix(a, dd, dt) - coeff_matrix(b, dd, dt)).max())


def unit_fit(G: DiffPoly, H: DiffPoly):
    """Least-squares ``c(t)`` with ``G ~ c * H`` (deg c = deg lc G - deg lc H); returns (c, max residual)."""
    k = int(G.lcoeff.degree - H.lcoeff.degree)
    if k < 0 or G.deg_d != H.deg_d:
        return None, np.inf
    dt = int(max(G.deg_t, H.deg_t + k, 0))
    rows, rhs = [], []
    for i in range(H.deg_d + 1):
        h = np.asarray(H.coeff(i).to_float().coeffs, dtype=float)
        gi = np.zeros(dt + 1)
        gi[: len(G.coeff(i).coeffs)] = G.coeff(i).coeffs
        M = np.zeros((dt + 1, k + 1))
        for j in range(k + 1):
            M[j : j + len(h), j] = h
        rows.append(M)
        rhs.append(gi)
    M, y = np.vstack(rows), np.concatenate(rhs)
    c, *_ = np.linalg.lstsq(M, y, rcond=None)
    return Poly(tuple(c)), float(np.abs(M @ c - y).max())


def unit_equiv(G: DiffPoly, H: DiffPoly) -> float:
    """Relative mismatch of ``lc(H)*G`` and ``lc(G)*H``; zero iff G, H agree up to a unit of R(t)."""
    if G.deg_d != H.deg_d:
        return np.inf
    a, b = G.left_mul_poly(H.lcoeff.to_float()), H.left_mul_poly(G.lcoeff.to_float())
    scale = max(np.abs(coeff_matrix(a)).max(), np.abs(coeff_matrix(b)).max())
    return max_coeff_diff(a, b) / scale


def rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.choice((1, 2, 4, 5)))


def rand_exact_factor(rng: random.Random, deg_d=(1, 2), deg_t=(0, 2)) -> DiffPoly:
    dd = rng.randint(*deg_d)
    dt = rng.randint(*deg_t)
    rows = [[rand_fraction(rng) for _ in range(dt + 1)] for _ in range(dd + 1)]
    while all(x == 0 for x in rows[-1]):
        rows[-1] = [rand_fraction(rng) for _ in range(dt + 1)]
    return DiffPoly.from_lists(rows, exact=True)


def rand_exact_instance(rng: random.Random):
    """``(f, g, h1, h2, h3)`` with ``f = h1 h3`` and ``g = h2 h3`` over Q."""
    h1, h2, h3 = (rand_exact_factor(rng) for _ in range(3))
    return ore_mul(h1, h3), ore_mul(h2, h3), h1, h2, h3
