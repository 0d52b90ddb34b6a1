import math
import random

import numpy as np
import pytest

from helpers import EX1_F, EX1_G, EX1_NULLVECTOR, EX1_V, EX2_F, EX2_G, EX2_VHAT, diff, rand_exact_factor
from oregcrd.errors import ZeroOperandError
from oregcrd.exact import inflated_exact, rank_exact, sylvester_rank_exact
from oregcrd.ore import DiffPoly, exact_gcrd, ore_add, ore_mul
from oregcrd.polynomial import Poly
from oregcrd.sylvester import build_sylvester, frobenius_norm, gamma, inflate, psi


def test_psi():
    f = diff(EX1_F)
    assert psi(f, 4) == [Poly((0.2, 0.3, 0.06)), Poly((1.0, 0.5)), Poly((1,)), Poly.zero()]
    assert all(p.is_zero() for p in psi(DiffPoly.zero(), 3))
    with pytest.raises(ValueError):
        psi(f, 2)
    rng = random.Random(0)
    for _ in range(10):
        a, b = rand_exact_factor(rng), rand_exact_factor(rng)
        assert psi(ore_add(a, b), 5) == [x + y for x, y in zip(psi(a, 5), psi(b, 5))]


def test_example_matrix_exact_and_float():
    V = build_sylvester(diff(EX1_F, True), diff(EX1_G, True))
    for i in range(4):
        for j in range(4):
            assert V[i, j] == Poly(tuple(EX1_V[i][j]), exact=True)
    Vf = build_sylvester(diff(EX1_F), diff(EX1_G))
    for i in range(4):
        for j in range(4):
            want = Poly(tuple(EX1_V[i][j])).padded(4)
            assert np.abs(Vf[i, j].padded(4) - want).max() <= 1e-12
    assert (V.m, V.n, V.d, V.mu) == (2, 2, 3, 24)


def test_example_nullvector_and_rank():
    V = build_sylvester(diff(EX1_F, True), diff(EX1_G, True))
    w = [Poly(tuple(r), exact=True) for r in EX1_NULLVECTOR]
    for j in range(4):
        acc = Poly.zero(True)
        for i in range(4):
            acc = acc + w[i] * V[i, j]
        assert acc.is_zero()
    assert sylvester_rank_exact(V) == 3


def test_small_cases():
    V = build_sylvester(DiffPoly.D(), DiffPoly.D())
    assert V.size == 2 and V[0, 1] == Poly((1,)) and V[1, 1] == Poly((1,))
    assert V.evaluate(0.3).tolist() == [[0, 1], [0, 1]]
    with pytest.raises(ZeroOperandError):
        build_sylvester(DiffPoly.zero(), DiffPoly.D())


def test_rows_are_shifted_operators():
    rng = random.Random(1)
    for _ in range(10):
        f, g = rand_exact_factor(rng), rand_exact_factor(rng)
        V = build_sylvester(f, g)
        N, Dop = V.size, DiffPoly.D(True)
        cur = f
        for i in range(V.n):
            assert list(V.entries[i]) == psi(cur, N)
            cur = ore_mul(Dop, cur)
        cur = g
        for j in range(V.m):
            assert list(V.entries[V.n + j]) == psi(cur, N)
            cur = ore_mul(Dop, cur)


def test_gamma():
    G = gamma(Poly((1.0,)), 3, 2)
    assert G.shape == (4, 6)
    assert np.array_equal(G[:, :4], np.eye(4)) and not G[:, 4:].any()
    G = gamma(Poly((0.66,)), 4, 1)
    assert np.array_equal(G, np.asarray(EX2_VHAT)[5:, 6:])
    with pytest.raises(ValueError):
        gamma(Poly((1, 2, 3)), 3, 1)
    rng = np.random.default_rng(2)
    for _ in range(10):
        a = Poly(tuple(rng.uniform(-1, 1, 3)))
        b = Poly(tuple(rng.uniform(-1, 1, 6)))
        assert np.allclose(b.padded(6) @ gamma(a, 5, 2), (b * a).padded(8), atol=1e-14)


def test_inflate_example():
    Vhat = inflate(build_sylvester(diff(EX2_F), diff(EX2_G)))
    assert Vhat.shape == (10, 12) and Vhat.mu == 4
    assert np.abs(Vhat.data - np.asarray(EX2_VHAT)).max() <= 1e-12


def test_inflate_zero_entry_gives_zero_block():
    Vhat = inflate(build_sylvester(diff(EX1_F), diff(EX1_G)))
    assert not Vhat.block(0, 3).any() and not Vhat.block(2, 3).any()


def test_inflate_matches_polynomial_combination():
    rng = np.random.default_rng(4)
    f, g = diff(EX1_F), diff(EX1_G)
    V = build_sylvester(f, g)
    Vhat = inflate(V)
    br, bc = Vhat.block_rows, Vhat.block_cols
    for _ in range(5):
        w = [Poly(tuple(rng.uniform(-1, 1, br))) for _ in range(V.size)]
        what = np.concatenate([p.padded(br) for p in w])
        prod = what @ Vhat.data
        for j in range(V.size):
            col = Poly.zero()
            for i in range(V.size):
                col = col + w[i] * V[i, j]
            assert np.allclose(prod[j * bc : (j + 1) * bc], col.padded(bc), atol=1e-12)


def test_constant_coefficients_degenerate_to_scalar_sylvester():
    # f = (D + 1)(D + 2), g = (D + 1)(D - 3): classical resultant is zero
    f, g = diff([[2], [3], [1]]), diff([[-3], [-2], [1]])
    Vhat = inflate(build_sylvester(f, g))
    assert Vhat.mu == 0 and Vhat.shape == (4, 4)
    assert np.linalg.matrix_rank(Vhat.data) == 3


def test_frobenius_norm_examples():
    V = build_sylvester(diff(EX1_F), diff(EX1_G))
    direct = math.sqrt(sum(c * c for row in EX1_V for p in row for c in p))
    assert frobenius_norm(V) == pytest.approx(direct, rel=1e-14)
    one = build_sylvester(DiffPoly.D(), DiffPoly.D())
    assert frobenius_norm(one) == pytest.approx(math.sqrt(2))
    Vhat = inflate(V)
    assert Vhat.spectral_norm() <= Vhat.frobenius_norm()
    assert Vhat.to_text().count("\n") == Vhat.shape[0] - 1


def test_exact_rank_law_small():
    rng = random.Random(8)
    for _ in range(5):
        h1, h2, h3 = (rand_exact_factor(rng, deg_t=(0, 1)) for _ in range(3))
        f, g = ore_mul(h1, h3), ore_mul(h2, h3)
        V = build_sylvester(f, g)
        k = exact_gcrd(f, g).deg_d
        assert V.size - sylvester_rank_exact(V) == k
        M = inflated_exact(V)
        bc = V.mu + V.d + 1
        assert math.ceil(rank_exact(M) / bc) == V.size - k


def test_left_nullvector_degree_bound():
    from oregcrd.approx import left_nullvector

    rng = np.random.default_rng(9)
    for _ in range(5):
        h = [diff([list(rng.uniform(-1, 1, 2)) for _ in range(2)]) for _ in range(3)]
        f, g = ore_mul(h[0], h[2]), ore_mul(h[1], h[2])
        Vhat = inflate(build_sylvester(f, g))
        w = left_nullvector(Vhat)
        assert max(p.degree for p in w) <= Vhat.mu
        what = np.concatenate([p.padded(Vhat.block_rows) for p in w])
        assert np.linalg.norm(what @ Vhat.data) <= 1e-9 * Vhat.frobenius_norm()
