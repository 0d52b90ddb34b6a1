"""Command line entry point: ``oregcrd {gcrd,nearest,sylvester,bench} ...``.

Exit status: 0 success, 1 usage or input error, 2 computation failure,
3 no singular value gap at the requested radius.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench
from .approx import ReconstructionMode, nearest_with_gcrd, numeric_gcrd
from .errors import OreGcrdError, ParseError, SeparationFailure
from .io import diffpoly_to_json, load_diffpoly, outcome_to_json, render_rounded
from .polynomial import render_poly
from .sylvester import build_sylvester, inflate

EXIT_OK, EXIT_USAGE, EXIT_FAILURE, EXIT_SEPARATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(x: str) -> float:
    v = float(x)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {x}")
    return v


def _nonneg(x: str) -> float:
    v = float(x)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {x}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="oregcrd", description="Approximate GCRDs of differential operators.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("text", "json")):
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--out", help="write output here instead of stdout")

    def operands(sp):
        sp.add_argument("f", help="operator file (JSON or infix) or literal")
        sp.add_argument("g", help="operator file (JSON or infix) or literal")

    def gcrd_opts(sp):
        sp.add_argument("-e", "--epsilon", type=_positive, default=1e-3, help="search radius")
        sp.add_argument("--content", choices=("fft", "none"), default="fft")
        sp.add_argument("--digits", type=int, default=5, help="decimals in text output")
        sp.add_argument("--no-normalize", action="store_true", help="skip unit-norm scaling of inputs")

    sp = sub.add_parser("gcrd", help="numeric GCRD of two operators")
    operands(sp)
    gcrd_opts(sp)
    common(sp)

    sp = sub.add_parser("nearest", help="nearby pair with a nontrivial GCRD")
    operands(sp)
    gcrd_opts(sp)
    sp.add_argument("--mode", choices=[m.value for m in ReconstructionMode], default="first-row")
    common(sp)

    sp = sub.add_parser("sylvester", help="differential Sylvester matrix")
    operands(sp)
    sp.add_argument("--inflated", action="store_true", help="also print the inflated real matrix")
    common(sp)

    sp = sub.add_parser("bench", help="randomised perturbation experiment")
    sp.add_argument("--protocol", choices=bench.PROTOCOLS, default="bounded")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--rho", type=_positive, nargs="+", default=[0.5])
    sp.add_argument("--delta", type=_nonneg, nargs="+", default=[0.01])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=[m.value for m in ReconstructionMode], default=None,
                    help="restrict to one reconstruction (default: both)")
    sp.add_argument("--workers", type=int, default=None, help="defaults to $ORE_GCRD_THREADS or 1")
    sp.add_argument("--no-log", action="store_true", help="omit per-trial records from JSON")
    common(sp, formats=("csv", "json", "text"))
    return p


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text.rstrip("\n"))


def _cmd_gcrd(args, nearest: bool) -> str:
    f, g = load_diffpoly(args.f), load_diffpoly(args.g)
    kw = dict(content=args.content, normalize=not args.no_normalize)
    if nearest:
        res = nearest_with_gcrd(f, g, args.epsilon, ReconstructionMode(args.mode), **kw)
    else:
        res = numeric_gcrd(f, g, args.epsilon, **kw)
    if args.format == "json":
        return json.dumps(outcome_to_json(res), indent=2)
    if not res.found:
        return "coprime"
    lines = [render_rounded(res.G, args.digits)]
    if nearest:
        ft, gt = res.perturbed_pair
        lines += [
            f"f~ = {render_rounded(ft, args.digits)}",
            f"g~ = {render_rounded(gt, args.digits)}",
            f"|f - f~| = {res.perturbation_f:.6g}",
            f"|g - g~| = {res.perturbation_g:.6g}",
        ]
    return "\n".join(lines)


def _cmd_sylvester(args) -> str:
    f, g = load_diffpoly(args.f), load_diffpoly(args.g)
    V = build_sylvester(f, g)
    Vhat = inflate(V) if args.inflated else None
    if args.format == "json":
        doc = {
            "m": V.m, "n": V.n, "d": V.d, "mu": V.mu,
            "entries": [[list(p.coeffs) for p in row] for row in V.entries],
            "f": diffpoly_to_json(f), "g": diffpoly_to_json(g),
        }
        if Vhat is not None:
            doc["inflated"] = Vhat.data.tolist()
        return json.dumps(doc, indent=2)
    cells = [[render_poly(p) for p in row] for row in V.entries]
    width = max(len(c) for row in cells for c in row)
    lines = ["  ".join(c.rjust(width) for c in row) for row in cells]
    if Vhat is not None:
        lines += ["", f"# inflated {Vhat.shape[0]}x{Vhat.shape[1]} (mu = {Vhat.mu})", Vhat.to_text("%.10g")]
    return "\n".join(lines)


def _cmd_bench(args) -> str:
    if args.trials < 1:
        raise UsageError("bench: --trials must be >= 1")
    results = []
    for rho in args.rho:
        for delta in args.delta:
            cfg = bench.ExperimentConfig(
                protocol=args.protocol, trials=args.trials, rho=rho, delta=delta,
                seed=args.seed, mode=args.mode,
            )
            results.append(bench.run_suite(cfg, args.workers))
    if args.format == "csv":
        return bench.to_csv(results)
    if args.format == "json":
        return bench.to_json(results, include_log=not args.no_log)
    return bench.to_text(results)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "gcrd":
            text = _cmd_gcrd(args, nearest=False)
        elif args.command == "nearest":
            text = _cmd_gcrd(args, nearest=True)
        elif args.command == "sylvester":
            text = _cmd_sylvester(args)
        else:
            text = _cmd_bench(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError) as exc:
        print(f"oregcrd: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OreGcrdError as exc:
        code = EXIT_SEPARATION if isinstance(exc, SeparationFailure) else EXIT_FAILURE
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return code
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
