"""Exact rank computations used as oracles for the numeric code.

Ranks over Q are computed modulo large primes after clearing denominators;
a rank mod p never exceeds the rank over Q, so the maximum over several
primes is exact unless every prime divides the same maximal minor.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ore import DiffPoly
from .sylvester import SylvesterMatrix, build_sylvester

PRIMES = (2147483629, 2147483587, 2147483579)


def _rank_mod_p(rows: np.ndarray, p: int) -> int:
    """Rank of an int64 matrix (entries already reduced mod p) over GF(p)."""
    A = rows.copy() % p
    nr, nc = A.shape
    rank = 0
    for col in range(nc):
        if rank == nr:
            break
        piv = np.nonzero(A[rank:, col])[0]
        if len(piv) == 0:
            continue
        pr = rank + piv[0]
        if pr != rank:
            A[[rank, pr]] = A[[pr, rank]]
        inv = pow(int(A[rank, col]), p - 2, p)
        A[rank, col:] = (A[rank, col:] * inv) % p
        # rows above the pivot row are never needed again for the rank
        others = rank + 1 + np.nonzero(A[rank + 1 :, col])[0]
        if len(others):
            factors = A[others, col].reshape(-1, 1)
            # (factor * row) may reach p^2 < 2^62, safely inside int64
            A[others, col:] = (A[others, col:] - (factors * A[rank, col:]) % p) % p
        rank += 1
    return rank


def _to_mod_p(M: Sequence[Sequence[Fraction]], p: int) -> np.ndarray:
    out = np.zeros((len(M), len(M[0]) if len(M) else 0), dtype=np.int64)
    # inflated matrices repeat each entry many times
    seen: dict = {}
    for i, row in enumerate(M):
        for j, x in enumerate(row):
            if not x:
                continue
            r = seen.get(x)
            if r is None:
                x = Fraction(x)
                r = seen[x] = (x.numerator % p) * pow(x.denominator % p, p - 2, p) % p
            out[i, j] = r
    return out


def rank_exact(M: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q of a matrix of rationals."""
    if len(M) == 0 or len(M[0]) == 0:
        return 0
    return max(_rank_mod_p(_to_mod_p(M, p), p) for p in PRIMES)


def sylvester_rank_exact(V: SylvesterMatrix, trials: int = 3, seed: int = 0) -> int:
    """Rank of ``V`` over Q(t): maximum rank over random evaluation points mod p."""
    rng = random.Random(seed)
    N = V.size
    best = 0
    for p in PRIMES[:trials]:
        x = rng.randrange(1, p)
        M = np.zeros((N, N), dtype=np.int64)
        for i in range(N):
            for j in range(N):
                acc = 0
                for c in reversed(V[i, j].coeffs):
                    c = Fraction(c)
                    cm = c.numerator % p * pow(c.denominator % p, p - 2, p) % p
                    acc = (acc * x + cm) % p
                M[i, j] = acc
        best = max(best, _rank_mod_p(M, p))
    return best


def inflated_exact(V: SylvesterMatrix, mu: int | None = None) -> list[list[Fraction]]:
    """The inflated matrix with exact rational entries."""
    mu = V.mu if mu is None else mu
    N, d = V.size, V.d
    br, bc = mu + 1, mu + d + 1
    out = [[Fraction(0)] * (N * bc) for _ in range(N * br)]
    for I in range(N):
        for J in range(N):
            cs = [Fraction(c) for c in V[I, J].coeffs]
            for k in range(br):
                row = out[I * br + k]
                for j, c in enumerate(cs):
                    row[J * bc + k + j] = c
    return out


def inflated_left_nullity(f: DiffPoly, g: DiffPoly) -> tuple[int, int]:
    """(left nullity of the exact inflated matrix, its row count)."""
    V = build_sylvester(f, g)
    M = inflated_exact(V)
    return len(M) - rank_exact(M), len(M)


def scaled_rank(rank: int, block_cols: int) -> int:
    return math.ceil(rank / block_cols)
