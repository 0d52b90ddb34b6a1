"""Numeric GCRD of approximate differential polynomials.

Pipeline: normalise the inputs, inflate their differential Sylvester
matrix, read the GCRD degree off the singular values (:func:`deflated_rank`),
then either extract a GCRD directly (:func:`numeric_gcrd`) or first move to
a nearby pair whose inflated matrix has the detected rank deficiency
(:func:`nearest_with_gcrd`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    CandidateRejected,
    ExtractionFailure,
    OreGcrdError,
    SeparationFailure,
    ZeroOperandError,
)
from .ore import DiffPoly, diff_norm, ore_add, ore_mul
from .polynomial import DEFAULT_CLEANUP, ZERO_DEGREE, Poly, approx_divide, cleanup, poly_norm2
from .sylvester import InflatedMatrix, build_sylvester, inflate


class ReconstructionMode(enum.Enum):
    FIRST_ROW = "first-row"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class SvdFactors:
    P: np.ndarray = field(repr=False)
    sigma: np.ndarray
    Q: np.ndarray = field(repr=False)

    def rebuild(self, sigma: np.ndarray | None = None) -> np.ndarray:
        """``P @ diag(sigma) @ Q`` with ``diag`` padded to the factored shape."""
        s = self.sigma if sigma is None else sigma
        k = len(s)
        return (self.P[:, :k] * s) @ self.Q[:k, :]


def compute_svd(M) -> SvdFactors:
    data = M.data if isinstance(M, InflatedMatrix) else np.asarray(M, dtype=float)
    if not np.all(np.isfinite(data)):
        raise OreGcrdError("matrix has non-finite entries")
    try:
        P, s, Q = np.linalg.svd(data, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise OreGcrdError(f"SVD did not converge: {exc}") from exc
    return SvdFactors(P, s, Q)


@dataclass(frozen=True)
class RankReport:
    k: int
    r: int
    full_rank: bool
    separation_ok: bool

    def degree(self, m: int, n: int) -> int:
        return m + n - self.r


def rank_thresholds(eps: float, m: int, n: int, d: int, mu: int) -> tuple[float, float]:
    """(lower bound a retained singular value must exceed, upper bound for the next one)."""
    return eps * math.sqrt((m + n) * (2 * mu + d + 2)) / (mu + d + 1), eps


def deflated_rank(sigma, eps: float, m: int, n: int, d: int, mu: int) -> RankReport:
    """Scaled rank of ``V`` from the singular values of its inflation.

    ``k`` is the largest 1-based index with ``sigma[k] > keep`` and
    ``sigma[k+1] < eps`` (a missing ``sigma[k+1]`` counts as zero); the rank
    of ``V`` is ``ceil(k / (mu+d+1))``.
    """
    if eps <= 0:
        raise ValueError("search radius must be positive")
    sigma = np.asarray(sigma, dtype=float)
    N, bc = m + n, mu + d + 1
    if len(sigma) and np.all(sigma > eps):
        return RankReport(len(sigma), N, True, True)
    keep, drop = rank_thresholds(eps, m, n, d, mu)
    nxt = np.append(sigma[1:], 0.0)
    ok = np.nonzero((sigma > keep) & (nxt < drop))[0]
    if len(ok) == 0:
        return RankReport(0, 0, False, False)
    k = int(ok[-1]) + 1
    r = min(N, -(-k // bc))
    return RankReport(k, r, r == N, True)


def gap_cut(sigma, k: int) -> float:
    """Geometric mean of the singular values on either side of index ``k``.

    Used to drop near-syzygy directions during extraction; 0 when there is
    no gap to cut (``k`` at either end).
    """
    sigma = np.asarray(sigma, dtype=float)
    if not 0 < k < len(sigma):
        return 0.0
    below = max(sigma[k], 1e-16 * sigma[0])
    return float(math.sqrt(sigma[k - 1] * below))


@dataclass(frozen=True)
class GcrdOutcome:
    kind: str  # "found" | "coprime"
    G: DiffPoly | None = None
    degree: int = 0
    residual: float = 0.0
    cofactors: tuple[DiffPoly, DiffPoly] | None = None
    unreduced: DiffPoly | None = None
    perturbed_pair: tuple[DiffPoly, DiffPoly] | None = None
    perturbation_f: float = 0.0
    perturbation_g: float = 0.0
    rank: RankReport | None = None
    singular_values: np.ndarray | None = field(default=None, repr=False)
    degree_validated: bool = True

    @property
    def found(self) -> bool:
        return self.kind == "found"


# -- extraction -----------------------------------------------------------

def _row_space_annihilator(Vhat: InflatedMatrix, D: int, wdeg: int, rank_tol: float = 0.0):
    """Unit row-space vector of ``Vhat`` (multipliers of t-degree <= wdeg) whose
    entries in the D-columns beyond ``D`` are smallest.  Returns (tail, w).

    Row-space directions with singular value below ``rank_tol`` are near
    syzygies of the pair and are left out.
    """
    N, br, bc = Vhat.size, Vhat.block_rows, Vhat.block_cols
    rows = np.concatenate([np.arange(i * br, i * br + wdeg + 1) for i in range(N)])
    U, S, Wt = np.linalg.svd(Vhat.data[rows], full_matrices=False)
    keep = S > max(rank_tol, 1e-13 * S[0])
    if not keep.any():
        return math.inf, np.zeros(N * br)
    U, S, Wt = U[:, keep], S[keep], Wt[keep]
    tail_cols = Wt[:, (D + 1) * bc :]
    if tail_cols.shape[1] == 0:
        y = np.zeros(len(S))
        y[0] = 1.0
        tail = 0.0
    else:
        Y, s, _ = np.linalg.svd(tail_cols, full_matrices=True)
        y = Y[:, -1]
        tail = float(s[-1]) if len(s) == Y.shape[0] else 0.0
    w = np.zeros(N * br)
    w[rows] = (U / S) @ y
    return tail, w


def _devectorize(w: np.ndarray, Vhat: InflatedMatrix) -> list[Poly]:
    br = Vhat.block_rows
    return [Poly(tuple(w[i * br : (i + 1) * br])) for i in range(Vhat.size)]


def solve_gcrd_system(
    Vhat: InflatedMatrix, f: DiffPoly, g: DiffPoly, D: int, tol: float = 1e-10, rank_tol: float = 0.0
):
    """Solve ``w V = (*_0 ... *_D 0 ... 0)`` for a polynomial vector ``w``.

    Among all row combinations of ``Vhat`` of unit norm, the one with the
    smallest component in D-positions ``D+1 .. m+n-1`` is chosen; the t-degree
    of the multipliers is the smallest one reaching a relative tail below
    ``tol`` (this keeps the content of ``G`` small).  Directions of the row
    space with singular value below ``rank_tol`` are treated as zero.  Returns
    ``(w, G, full)`` where ``full = u*f + v*g`` and ``G`` is its part of
    D-degree <= ``D``.
    """
    N = Vhat.size
    if not 0 <= D < N:
        raise ValueError(f"target degree {D} outside [0, {N})")
    lo, hi = 0, Vhat.mu
    tail, w = _row_space_annihilator(Vhat, D, hi, rank_tol)
    if tail < tol:
        while lo < hi:
            mid = (lo + hi) // 2
            t_mid, w_mid = _row_space_annihilator(Vhat, D, mid, rank_tol)
            if t_mid < tol:
                hi, w = mid, w_mid
            else:
                lo = mid + 1
    ws = _devectorize(w, Vhat)
    u = DiffPoly(tuple(ws[: Vhat.n]))
    v = DiffPoly(tuple(ws[Vhat.n :]))
    full = ore_add(ore_mul(u, f), ore_mul(v, g))
    G = DiffPoly(full.coeffs[: D + 1])
    scale = max((poly_norm2(c) for c in G.coeffs), default=0.0)
    if scale < 1e-10 * max(1.0, diff_norm(full)):
        raise ExtractionFailure("annihilator produced a vanishing GCRD candidate")
    return ws, G.scale(1 / scale), full.scale(1 / scale)


def left_nullvector(Vhat: InflatedMatrix, tol: float = 1e-10) -> list[Poly]:
    """Polynomial vector ``w`` of least t-degree with ``w V = 0``, unit coefficient norm.

    Raises :class:`ExtractionFailure` when ``V`` has full rank.
    """
    N, br = Vhat.size, Vhat.block_rows
    scale = max(Vhat.spectral_norm(), 1e-300)

    def attempt(wdeg):
        rows = np.concatenate([np.arange(i * br, i * br + wdeg + 1) for i in range(N)])
        U, S, _ = np.linalg.svd(Vhat.data[rows], full_matrices=True)
        smallest = S[-1] if len(S) == len(rows) else 0.0
        return smallest < tol * scale, rows, U[:, -1]

    ok, rows, y = attempt(Vhat.mu)
    if not ok:
        raise ExtractionFailure("the Sylvester matrix has no left null vector")
    lo, hi = 0, Vhat.mu
    while lo < hi:
        mid = (lo + hi) // 2
        ok_mid, rows_mid, y_mid = attempt(mid)
        if ok_mid:
            hi, rows, y = mid, rows_mid, y_mid
        else:
            lo = mid + 1
    w = np.zeros(N * br)
    w[rows] = y
    return _devectorize(w, Vhat)


def numerical_degree(p: Poly, rel_tol: float):
    """Index of the last coefficient above ``rel_tol`` times the largest one."""
    if p.is_zero():
        return ZERO_DEGREE
    c = np.abs(np.asarray(p.coeffs))
    return int(np.nonzero(c > rel_tol * c.max())[0][-1])


def remove_content_fft(
    G: DiffPoly, threshold: float = DEFAULT_CLEANUP, degree_tol: float | None = None
) -> DiffPoly:
    """Divide every coefficient by the leading one via FFT; the result has ``lcoeff = 1``.

    Assumes the primitive GCRD is monic in ``D`` (its content is then the
    leading coefficient).  Before dividing, each coefficient is cut at its
    numerical degree (terms below ``degree_tol`` relative to its largest
    term, default ``threshold``) and entries below ``threshold`` are zeroed.
    """
    if G.is_zero():
        raise ExtractionFailure("cannot remove content of the zero operator")
    degree_tol = threshold if degree_tol is None else degree_tol

    def prepared(p: Poly) -> Poly:
        p = cleanup(p, threshold)
        return p.truncate(numerical_degree(p, degree_tol))

    D = G.deg_d
    lead = prepared(G.lcoeff)
    out = []
    for i in range(D):
        Gi = prepared(G.coeffs[i])
        if Gi.is_zero() or Gi.degree < lead.degree:
            out.append(Poly.zero())
            continue
        out.append(approx_divide(Gi, lead, threshold).quotient)
    out.append(Poly.const(1.0))
    return DiffPoly(tuple(out))


def check_candidate(G: DiffPoly, m: int, n: int, leading_coprime: bool = False, tol: float = 1e-8):
    """Reject candidates that cannot be a GCRD.

    ``D > min(m, n)`` is always impossible.  When the leading coefficients of
    the inputs are known to be coprime, a nonzero lower coefficient may not
    have smaller (numerical) t-degree than the leading one.
    """
    if G.deg_d > min(m, n):
        raise CandidateRejected(f"GCRD degree {G.deg_d} exceeds min(m, n) = {min(m, n)}")
    if leading_coprime:
        lead = numerical_degree(G.lcoeff, tol)
        for i, c in enumerate(G.coeffs[:-1]):
            if not c.is_zero() and numerical_degree(c, tol) < lead:
                raise CandidateRejected(
                    f"coefficient {i} has t-degree below the leading coefficient's"
                )


def _prepare(f: DiffPoly, g: DiffPoly, normalize: bool):
    if f.exact or g.exact:
        f, g = f.to_float(), g.to_float()
    if f.is_zero() or g.is_zero():
        raise ZeroOperandError("GCRD of a zero operator")
    nf, ng = (diff_norm(f), diff_norm(g)) if normalize else (1.0, 1.0)
    return f, g, f.scale(1 / nf), g.scale(1 / ng), nf, ng


def numeric_gcrd(
    f: DiffPoly,
    g: DiffPoly,
    eps: float,
    content: str = "fft",
    cleanup_threshold: float = DEFAULT_CLEANUP,
    degree: int | None = None,
    normalize: bool = True,
    leading_coprime: bool = False,
    tail_tol: float | None = None,
) -> GcrdOutcome:
    """Approximate GCRD of ``f`` and ``g`` within search radius ``eps``.

    ``content`` is ``"fft"`` (divide by the leading coefficient) or ``"none"``.
    ``tail_tol`` (default ``eps``) is the level below which the D-positions
    past the target degree count as zero.
    Passing ``degree`` skips rank detection and extracts a GCRD of that
    degree; the detected degree is still compared with it and the result
    recorded in ``degree_validated``.
    """
    if content not in ("fft", "none"):
        raise ValueError(f"unknown content mode {content!r}")
    _, _, fn, gn, _, _ = _prepare(f, g, normalize)
    m, n = fn.deg_d, gn.deg_d
    Vhat = inflate(build_sylvester(fn, gn))
    sigma = np.linalg.svd(Vhat.data, compute_uv=False)
    report = deflated_rank(sigma, eps, m, n, Vhat.d, Vhat.mu)
    validated = True
    if degree is None:
        if not report.separation_ok:
            raise SeparationFailure("no singular value gap at the given search radius")
        if report.full_rank:
            return GcrdOutcome("coprime", rank=report, singular_values=sigma)
        D = m + n - report.r
    else:
        D = degree
        validated = report.separation_ok and m + n - report.r == D
    if D > min(m, n):
        raise CandidateRejected(f"GCRD degree {D} exceeds min(m, n) = {min(m, n)}")
    cut = gap_cut(sigma, report.k) if report.separation_ok else 0.0
    ws, G, full = solve_gcrd_system(Vhat, fn, gn, D, tol=eps if tail_tol is None else tail_tol, rank_tol=cut)
    residual = max((poly_norm2(c) for c in full.coeffs[D + 1 :]), default=0.0)
    check_candidate(G, m, n, leading_coprime, tol=max(eps, cleanup_threshold))
    unreduced = G
    if content == "fft":
        G = remove_content_fft(G, cleanup_threshold, degree_tol=max(eps, cleanup_threshold))
    u, v = DiffPoly(tuple(ws[:n])), DiffPoly(tuple(ws[n:]))
    return GcrdOutcome(
        "found", G, D, residual, (u, v), unreduced,
        rank=report, singular_values=sigma, degree_validated=validated,
    )


# -- nearest pair ---------------------------------------------------------

def reconstruct_pair(
    Vtil: InflatedMatrix,
    f: DiffPoly,
    g: DiffPoly,
    mode: ReconstructionMode = ReconstructionMode.FIRST_ROW,
) -> tuple[DiffPoly, DiffPoly]:
    """Read ``f~`` from block-row 0 and ``g~`` from block-row ``n`` of ``Vtil``.

    First-row mode takes row 0 of each block; weighted mode averages the
    ``mu+1`` shifted copies of every coefficient.  t-degrees never exceed
    those of the corresponding coefficients of the originals.
    """
    mode = ReconstructionMode(mode)
    br = Vtil.block_rows
    r = np.arange(br)

    def read(block_row: int, op: DiffPoly) -> DiffPoly:
        coeffs = []
        for k in range(op.deg_d + 1):
            dk = op.coeff(k).degree
            if dk == ZERO_DEGREE:
                coeffs.append(Poly.zero())
                continue
            blk = Vtil.block(block_row, k)
            if mode is ReconstructionMode.FIRST_ROW:
                vals = blk[0, : dk + 1]
            else:
                vals = np.array([blk[r, r + j].mean() for j in range(dk + 1)])
            coeffs.append(Poly(tuple(vals)))
        return DiffPoly(tuple(coeffs))

    return read(0, f), read(Vtil.n, g)


def truncate_singular_values(sigma: np.ndarray, keep: int) -> np.ndarray:
    out = np.array(sigma, dtype=float)
    out[keep:] = 0.0
    return out


@dataclass(frozen=True)
class NearestPair:
    """Rank decision plus the recovered pairs (caller's scale), one per mode."""

    report: RankReport
    sigma: np.ndarray = field(repr=False)
    degree: int
    pairs: dict = field(default_factory=dict)
    perturbations: dict = field(default_factory=dict)

    @property
    def coprime(self) -> bool:
        return self.report.full_rank


def nearest_pair(
    f: DiffPoly,
    g: DiffPoly,
    eps: float,
    modes=(ReconstructionMode.FIRST_ROW,),
    normalize: bool = True,
) -> NearestPair:
    """Truncate the SVD of the inflated matrix and read back a nearby pair."""
    f, g, fn, gn, nf, ng = _prepare(f, g, normalize)
    m, n = fn.deg_d, gn.deg_d
    Vhat = inflate(build_sylvester(fn, gn))
    svd = compute_svd(Vhat)
    report = deflated_rank(svd.sigma, eps, m, n, Vhat.d, Vhat.mu)
    if not report.separation_ok:
        raise SeparationFailure("no singular value gap at the given search radius")
    if report.full_rank:
        return NearestPair(report, svd.sigma, 0)
    D = m + n - report.r
    if D > min(m, n):
        raise CandidateRejected(f"GCRD degree {D} exceeds min(m, n) = {min(m, n)}")
    sbar = truncate_singular_values(svd.sigma, report.r * Vhat.block_cols)
    Vtil = Vhat.with_data(svd.rebuild(sbar))
    pairs, perts = {}, {}
    for mode in modes:
        mode = ReconstructionMode(mode)
        ft, gt = reconstruct_pair(Vtil, fn, gn, mode)
        ft, gt = ft.scale(nf), gt.scale(ng)
        pairs[mode] = (ft, gt)
        perts[mode] = (diff_norm(f - ft), diff_norm(g - gt))
    return NearestPair(report, svd.sigma, D, pairs, perts)


def nearest_with_gcrd(
    f: DiffPoly,
    g: DiffPoly,
    eps: float,
    mode: ReconstructionMode | str = ReconstructionMode.FIRST_ROW,
    content: str = "fft",
    cleanup_threshold: float = DEFAULT_CLEANUP,
    normalize: bool = True,
    leading_coprime: bool = False,
    tail_tol: float | None = None,
) -> GcrdOutcome:
    """Move to a nearby pair with a nontrivial GCRD and return that GCRD.

    The perturbed pair and its distances are reported in the caller's scale
    (inputs are normalised internally unless ``normalize`` is false).
    """
    mode = ReconstructionMode(mode)
    near = nearest_pair(f, g, eps, (mode,), normalize)
    if near.coprime:
        return GcrdOutcome("coprime", rank=near.report, singular_values=near.sigma)
    ft, gt = near.pairs[mode]
    inner = numeric_gcrd(
        ft, gt, eps, content, cleanup_threshold,
        degree=near.degree, normalize=normalize, leading_coprime=leading_coprime, tail_tol=tail_tol,
    )
    pf, pg = near.perturbations[mode]
    return replace(
        inner,
        perturbed_pair=(ft, gt),
        perturbation_f=pf,
        perturbation_g=pg,
        rank=near.report,
        singular_values=near.sigma,
    )
