"""Print the three worked examples: Sylvester matrix, numeric GCRD, nearest pair."""

from oregcrd.approx import ReconstructionMode, nearest_pair, nearest_with_gcrd, numeric_gcrd
from oregcrd.exact import sylvester_rank_exact
from oregcrd.io import parse_infix, render_rounded
from oregcrd.ore import render
from oregcrd.polynomial import render_poly
from oregcrd.sylvester import build_sylvester

SYL_F = "D^2 + (1 + t/2)*D + 1/5 + 3/10*t + 3/50*t^2"
SYL_G = "D^2 + (1 + t/5 + 9/10*t^2)*D + 1/5 + 9/10*t^2 + 9/50*t^3"

NUM_F = "-0.45*D^2 - 0.56*t*D - 0.45 - 0.11*t^2"
NUM_G = "D^3 + (0.66 + t)*D^2 + (2 + 0.952*t)*D + 0.66 + 0.292*t^2"

NEAR_F = "(1 + 0.0043*t)*D^2 + (-0.0003 + 3*t)*D + 1 + 2*t^2"
NEAR_G = "t^2*D^2 + (0.0001 - 0.0004*t + t^3)*D + t^2"


def sylvester_example():
    f, g = parse_infix(SYL_F, exact=True), parse_infix(SYL_G, exact=True)
    V = build_sylvester(f, g)
    print("Sylvester matrix, rank", sylvester_rank_exact(V))
    for row in V.entries:
        print("   ", " | ".join(render_poly(p.to_float()) for p in row))


def numeric_example(eps=1e-3):
    out = numeric_gcrd(parse_infix(NUM_F), parse_infix(NUM_G), eps)
    print(f"numeric GCRD (eps={eps}):", render_rounded(out.G))
    print("    unreduced:", render(out.unreduced))


def nearest_example(eps=0.005):
    f, g = parse_infix(NEAR_F), parse_infix(NEAR_G)
    for normalize in (True, False):
        near = nearest_pair(f, g, eps, tuple(ReconstructionMode), normalize)
        print(f"nearest pair (eps={eps}, normalize={normalize}): k={near.report.k} r={near.report.r} D={near.degree}")
        for mode in ReconstructionMode:
            out = nearest_with_gcrd(f, g, eps, mode, normalize=normalize)
            pf, pg = near.perturbations[mode]
            print(f"    {mode.value:>9}: G = {render_rounded(out.G)}   |df| = {pf:.3e}  |dg| = {pg:.3e}")


if __name__ == "__main__":
    sylvester_example()
    numeric_example()
    nearest_example()
