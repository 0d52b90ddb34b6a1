"""Approximate greatest common right divisors of differential operators."""

from .approx import (
    GcrdOutcome,
    NearestPair,
    RankReport,
    ReconstructionMode,
    SvdFactors,
    compute_svd,
    deflated_rank,
    left_nullvector,
    nearest_pair,
    nearest_with_gcrd,
    numeric_gcrd,
    reconstruct_pair,
    remove_content_fft,
    solve_gcrd_system,
)
from .errors import (
    CandidateRejected,
    DivisionInstabilityError,
    ExtractionFailure,
    InterpolationError,
    ModeMismatchError,
    OreGcrdError,
    ParseError,
    SeparationFailure,
    ZeroOperandError,
)
from .io import parse_diffpoly, render_rounded
from .ore import DiffPoly, apply, exact_gcrd, ore_add, ore_mul, render, right_division
from .polynomial import Poly, approx_divide
from .sylvester import InflatedMatrix, SylvesterMatrix, build_sylvester, gamma, inflate, psi

__version__ = "0.1.0"
