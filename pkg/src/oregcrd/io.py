"""Reading and writing operators and results.

Operators are accepted either as JSON::

    {"dvar": "D", "tvar": "t", "coeffs": [[0.2, 0.3, 0.06], [1.0, 0.5], [1]]}

(``coeffs[i][j]`` multiplies ``t^j D^i``; a bare nested list also works) or
as infix text such as ``D^2 + (0.5*t+1.0)*D + 0.3*t + 0.06*t^2 + 0.2``.
Products in the infix form follow the operator algebra, so ``D*t`` reads
as ``t*D + 1``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from .approx import GcrdOutcome
from .errors import ParseError
from .ore import DiffPoly, ore_add, ore_mul, render
from .polynomial import Poly

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_∂]\w*|∂)|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        val = m.group(kind)
        if val == "**":
            val = "^"
        tokens.append((kind, val, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over ``expr := term (('+'|'-') term)*`` and friends."""

    def __init__(self, text: str, exact: bool, dvar: str, tvar: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.exact = exact
        self.dvar, self.tvar = dvar, tvar

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val):
        kind, v, pos = self.take()
        if v != val:
            raise ParseError(f"expected {val!r}, found {v or 'end of input'!r}", pos)

    def scalar(self, x) -> DiffPoly:
        return DiffPoly.scalar(Poly.const(x, self.exact))

    def parse(self) -> DiffPoly:
        out = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", pos)
        return out

    def expr(self) -> DiffPoly:
        acc = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            acc = ore_add(acc, rhs if op == "+" else -rhs)
        return acc

    def term(self) -> DiffPoly:
        acc = self.unary()
        while self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1:]
            rhs = self.unary()
            if op == "*":
                acc = ore_mul(acc, rhs)
                continue
            if rhs.is_zero():
                raise ParseError("division by zero", pos)
            if rhs.deg_d > 0 or rhs.deg_t > 0:
                raise ParseError("only division by a nonzero constant is allowed", pos)
            acc = acc.scale(1 / rhs.lcoeff.lead)
        return acc

    def unary(self) -> DiffPoly:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> DiffPoly:
        base = self.atom()
        if self.peek()[1] != "^":
            return base
        self.take()
        kind, v, pos = self.take()
        if kind != "num" or not v.isdigit():
            raise ParseError("exponent must be a non-negative integer", pos)
        out = DiffPoly.one(self.exact)
        for _ in range(int(v)):
            out = ore_mul(out, base)
        return out

    def atom(self) -> DiffPoly:
        kind, v, pos = self.take()
        if kind == "num":
            return self.scalar(Fraction(v) if self.exact else float(v))
        if kind == "name":
            if v == self.tvar:
                return DiffPoly.scalar(Poly.monomial(1, 1, self.exact))
            if v == self.dvar or v == "∂":
                return DiffPoly.D(self.exact)
            raise ParseError(f"unknown variable {v!r}", pos)
        if v == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {v or 'end of input'!r}", pos)


def parse_infix(text: str, exact: bool = False, dvar: str = "D", tvar: str = "t") -> DiffPoly:
    return _Parser(text, exact, dvar, tvar).parse()


def diffpoly_from_json(obj, exact: bool = False) -> DiffPoly:
    rows = obj["coeffs"] if isinstance(obj, dict) else obj
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("'coeffs' must be a list of coefficient lists", 0)
    conv = Fraction if exact else float
    try:
        return DiffPoly.from_lists([[conv(x) for x in r] for r in rows], exact)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad coefficient: {exc}", 0) from exc


def parse_diffpoly(text: str, exact: bool = False) -> DiffPoly:
    """Parse JSON (object or nested list) or infix text into a :class:`DiffPoly`."""
    s = text.strip()
    if not s:
        raise ParseError("empty input", 0)
    if s[0] in "{[":
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.pos) from exc
        dvar = obj.get("dvar", "D") if isinstance(obj, dict) else "D"
        tvar = obj.get("tvar", "t") if isinstance(obj, dict) else "t"
        if isinstance(obj, dict) and isinstance(obj.get("coeffs"), str):
            return parse_infix(obj["coeffs"], exact, dvar, tvar)
        return diffpoly_from_json(obj, exact)
    return parse_infix(s, exact)


def load_diffpoly(arg: str, exact: bool = False) -> DiffPoly:
    """``arg`` is a path to a file holding an operator, or the operator itself."""
    p = Path(arg)
    if len(arg) < 4096 and p.is_file():
        return parse_diffpoly(p.read_text(), exact)
    return parse_diffpoly(arg, exact)


# -- output ---------------------------------------------------------------

def _num(x):
    return str(x) if isinstance(x, Fraction) else float(x)


def poly_to_json(p: Poly) -> list:
    return [_num(c) for c in p.coeffs]


def diffpoly_to_json(f: DiffPoly, dvar: str = "D", tvar: str = "t") -> dict:
    return {"dvar": dvar, "tvar": tvar, "coeffs": [poly_to_json(c) for c in f.coeffs]}


def render_rounded(f: DiffPoly, digits: int = 5, dvar: str = "D", tvar: str = "t") -> str:
    """Fixed-point rendering, e.g. ``D + 1.00000*t``; terms that round to zero vanish."""
    if f.exact:
        return render(f, dvar, tvar)
    q = 10.0 ** -digits / 2

    def fmt(c):
        return f"{c:.{digits}f}"

    parts = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        terms = []
        for j, c in enumerate(f.coeffs[i].coeffs):
            if abs(c) < q:
                continue
            mon = "" if j == 0 else (tvar if j == 1 else f"{tvar}^{j}")
            terms.append(fmt(c) if not mon else f"{fmt(c)}*{mon}")
        if not terms:
            continue
        dm = "" if i == 0 else (dvar if i == 1 else f"{dvar}^{i}")
        coef = " + ".join(terms).replace("+ -", "- ")
        if not dm:
            parts.append(coef)
        elif coef == fmt(1.0):
            parts.append(dm)
        elif len(terms) > 1:
            parts.append(f"({coef})*{dm}")
        else:
            parts.append(f"{coef}*{dm}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def outcome_to_json(out: GcrdOutcome) -> dict:
    doc = {
        "kind": out.kind,
        "degree": out.degree,
        "gcrd": diffpoly_to_json(out.G) if out.G is not None else None,
        "residual": out.residual,
        "perturbation_f": out.perturbation_f,
        "perturbation_g": out.perturbation_g,
        "singular_values": [] if out.singular_values is None else np.asarray(out.singular_values).tolist(),
    }
    if out.rank is not None:
        doc["rank"] = {"k": out.rank.k, "r": out.rank.r}
    if out.unreduced is not None:
        doc["unreduced"] = diffpoly_to_json(out.unreduced)
    if out.perturbed_pair is not None:
        doc["perturbed_pair"] = [diffpoly_to_json(x) for x in out.perturbed_pair]
    if out.found:
        doc["degree_validated"] = out.degree_validated
    return doc


def outcome_from_json(doc: dict) -> dict:
    """Inverse of :func:`outcome_to_json` for the core fields (operators parsed back)."""
    out = dict(doc)
    if doc.get("gcrd") is not None:
        out["gcrd"] = diffpoly_from_json(doc["gcrd"])
    return out
