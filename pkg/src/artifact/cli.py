"""Command line front end: polynomial parsing, session files and JSON reports."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .coeff import FieldError, FieldSpec
from .locus import CurveIdeal, discover_locus
from .ring import MultiSeries, RingError
from .surface import Surface, new_surface, newton_set
from .transform import (MONOIDAL, QUADRATIC, CenterNotPermitted, Direction, DirectionNotOnCone,
                        MultiplicityDropped, blowdown_construct, enumerate_directions, monoidal_transform,
                        quadratic_transform)
from .verify import (FAIL, INCONCLUSIVE, PASS, SCHEMA, case_b_reports, check_case_a, check_case_b,
                     fuzz_corpus)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
ALIASES = {"X1": "X", "Y1": "Y", "Z1": "Z"}
COMMANDS = ("analyze", "blowup", "locus", "verify", "fuzz", "blowdown")


# expression parsing


class ParseError(ValueError):
    def __init__(self, message: str, text: str, span: tuple[int, int]):
        self.span = span
        self.text = text
        start, end = span
        caret = " " * start + "^" * max(1, end - start)
        super().__init__(f"{message} at columns {start}-{end}\n  {text}\n  {caret}")


class ExpressionSyntaxError(ParseError):
    pass


class UnknownVariable(ParseError):
    pass


class NonIntegerExponent(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            out.append(("int", m.group(1), start, m.end()))
        elif m.group(2):
            out.append(("name", m.group(2), start, m.end()))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExpressionSyntaxError(f"unexpected character {ch!r}", text, (start, start + 1))
            out.append(("op", ch, start, m.end()))
        pos = m.end()
    out.append(("end", "", len(text), len(text)))
    return out


class _Parser:
    def __init__(self, text: str, field: FieldSpec, variables: Sequence[str]):
        self.text = text
        self.field = field
        self.vars = list(variables)
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, cls, msg, tok):
        raise cls(msg, self.text, (tok[2], max(tok[3], tok[2] + 1)))

    def parse(self) -> MultiSeries:
        if self.peek()[0] == "end":
            self.error(ExpressionSyntaxError, "empty expression", self.peek())
        e = self.expr()
        if self.peek()[0] != "end":
            self.error(ExpressionSyntaxError, "unexpected token", self.peek())
        return e

    def expr(self):
        acc = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                acc = acc * rhs
            else:
                if any(sum(e) for e in rhs.terms) or not rhs.terms:
                    self.error(ExpressionSyntaxError, "division by a non-constant or zero", tok)
                acc = acc.scale(self.field.inv(rhs.constant_term()))
        return acc

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            v = self.unary()
            return -v if tok[1] == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                self.error(NonIntegerExponent, "exponent must be a non-negative integer literal", tok)
            self.take()
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.error(NonIntegerExponent, "exponent must be a non-negative integer literal", nxt)
            return base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        n = len(self.vars)
        if tok[0] == "int":
            return MultiSeries.const(self.field, n, int(tok[1]))
        if tok[0] == "name":
            name = ALIASES.get(tok[1], tok[1])
            if name not in self.vars:
                self.error(UnknownVariable, f"unknown variable {tok[1]!r}", tok)
            return MultiSeries.var(self.field, n, self.vars.index(name))
        if tok[0] == "op" and tok[1] == "(":
            e = self.expr()
            close = self.take()
            if close[1] != ")":
                self.error(ExpressionSyntaxError, "expected ')'", close)
            return e
        self.error(ExpressionSyntaxError, "expected a number, variable or '('", tok)


def parse_poly(text: str, field: FieldSpec, variables: Sequence[str] = ("X", "Y", "Z")) -> MultiSeries:
    """Parse an exact polynomial; errors carry the offending column span."""
    return _Parser(text, field, variables).parse()


def parse_center(text: str, field: FieldSpec) -> CurveIdeal:
    """``"Z + g, h"`` with g and h in X, Y."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"center {text!r} must look like 'Z + g, h'")
    zg = parse_poly(parts[0], field)
    lin = zg.coeff((0, 0, 1))
    rest = zg - MultiSeries.var(field, 3, 2).scale(lin)
    if not lin or any(e[2] for e in rest.terms):
        raise ValueError("the first generator must be c*Z + g(X, Y)")
    g = MultiSeries(field, 2, {e[:2]: field.div(c, lin) for e, c in rest.terms.items()})
    h = parse_poly(parts[1], field, ("X", "Y"))
    return CurveIdeal(g, h)


# configuration


@dataclass
class SessionConfig:
    field: FieldSpec = dc_field(default_factory=lambda: FieldSpec(0))
    surface: str | None = None
    degree: int = 16
    h_bound: int = 4
    g_bound: int = 3
    direction: str | None = None
    center: str | None = None
    seed: int = 0
    count: int = 10
    strict: bool = False
    json: bool = False
    G: str | None = None

    def to_json(self) -> dict:
        return {"field": str(self.field), "surface": self.surface, "degree": self.degree,
                "h_bound": self.h_bound, "g_bound": self.g_bound, "dir": self.direction,
                "center": self.center, "seed": self.seed, "count": self.count, "G": self.G}


def read_session(path: str) -> dict:
    """UTF-8 ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def _bool(v) -> bool:
    return str(v).lower() in ("1", "true", "yes", "on")


def build_config(args: argparse.Namespace) -> SessionConfig:
    values = read_session(args.session) if args.session else {}
    for key in ("field", "surface", "degree", "h_bound", "g_bound", "dir", "center", "seed", "count", "G"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = SessionConfig()
    if "field" in values:
        cfg.field = FieldSpec.parse(str(values["field"]))
    cfg.surface = values.get("surface")
    cfg.degree = int(values.get("degree", cfg.degree))
    cfg.h_bound = int(values.get("h_bound", cfg.h_bound))
    cfg.g_bound = int(values.get("g_bound", cfg.g_bound))
    cfg.direction = values.get("dir")
    cfg.center = values.get("center")
    cfg.seed = int(values.get("seed", cfg.seed))
    cfg.count = int(values.get("count", cfg.count))
    cfg.G = values.get("G")
    cfg.strict = args.strict or _bool(values.get("strict", False))
    cfg.json = args.json or _bool(values.get("json", False))
    return cfg


# reports


def surface_json(S: Surface) -> dict:
    return {"field": str(S.field), "F": S.F.to_str(), "multiplicity": S.n,
            "newton_set": sorted(list(e) for e in newton_set(S)), "cone": S.cone.variant,
            "normalization": [[im.to_str() for im in ch.images] for ch in S.changes]}


def locus_json(L, names=("X", "Y", "Z")) -> dict:
    return {"elements": [e.to_json(names) for e in L], "completeness": L.completeness,
            "bounds": list(L.bounds), "notes": list(L.notes)}


def _need_surface(cfg: SessionConfig) -> Surface:
    if not cfg.surface:
        raise UsageError("a surface expression is required")
    F = parse_poly(cfg.surface, cfg.field)
    if not F.terms:
        raise UsageError("the surface polynomial is zero")
    return new_surface(F, cfg.degree)


class UsageError(ValueError):
    pass


def _verdict_code(verdicts: Sequence[str], strict: bool) -> int:
    if FAIL in verdicts:
        return EXIT_FAIL
    if strict and INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _summary(verdicts: Sequence[str]) -> str:
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts or not verdicts:
        return INCONCLUSIVE
    return PASS


def _transform_json(out) -> dict:
    if isinstance(out, MultiplicityDropped):
        return out.to_json()
    S1, rec = out
    return {"kind": "transformed", "surface": surface_json(S1), "record": rec.to_json(),
            "F1": S1.F.to_str(("X1", "Y1", "Z1"))}


def run_command(cmd: str, cfg: SessionConfig) -> tuple[dict, int]:
    """Run one command and return (report document, exit code)."""
    doc = {"schema": SCHEMA, "command": cmd, "config": cfg.to_json()}
    bounds = (cfg.h_bound, cfg.g_bound)
    code = EXIT_OK
    if cmd == "analyze":
        S = _need_surface(cfg)
        doc["surface"] = surface_json(S)
        doc["locus"] = locus_json(discover_locus(S, *bounds))
    elif cmd == "locus":
        S = _need_surface(cfg)
        doc["locus"] = locus_json(discover_locus(S, *bounds))
    elif cmd == "blowup":
        S = _need_surface(cfg)
        doc["surface"] = surface_json(S)
        if cfg.center:
            P = parse_center(cfg.center, cfg.field)
            dirs = [Direction.parse(cfg.direction, cfg.field)] if cfg.direction else \
                [u for u, _ in enumerate_directions(S, MONOIDAL)]
            outs = [(u, monoidal_transform(S, P, u, cfg.degree)) for u in dirs]
        else:
            dirs = [Direction.parse(cfg.direction, cfg.field)] if cfg.direction else \
                [u for u, _ in enumerate_directions(S, QUADRATIC)]
            outs = [(u, quadratic_transform(S, u, cfg.degree)) for u in dirs]
        doc["transforms"] = [dict(direction=u.to_str(), **_transform_json(o)) for u, o in outs]
    elif cmd == "verify":
        S = _need_surface(cfg)
        if cfg.center:
            P = parse_center(cfg.center, cfg.field)
            u = Direction.parse(cfg.direction, cfg.field) if cfg.direction else None
            reports = [check_case_a(S, P, u, bounds, cfg.degree)]
        elif cfg.direction:
            reports = [check_case_b(S, Direction.parse(cfg.direction, cfg.field), bounds, cfg.degree)]
        else:
            reports = list(case_b_reports(S, bounds, cfg.degree))
        verdicts = [r.verdict for r in reports]
        doc["reports"] = [r.to_json() for r in reports]
        doc["verdict"] = _summary(verdicts)
        code = _verdict_code(verdicts, cfg.strict)
    elif cmd == "fuzz":
        primes = (cfg.field.p,) if cfg.field.is_finite else (2, 3, 5)
        reports = []
        for S in fuzz_corpus(cfg.seed, cfg.count, primes):
            reports.extend(case_b_reports(S, bounds, cfg.degree))
        verdicts = [r.verdict for r in reports]
        doc["counts"] = {v: verdicts.count(v) for v in (PASS, FAIL, INCONCLUSIVE)}
        doc["non_vacuous_b2"] = sum(1 for r in reports if r.case == "b2" and r.non_vacuous)
        doc["reports"] = [r.to_json() for r in reports]
        doc["verdict"] = _summary(verdicts) if FAIL in verdicts else PASS
        code = _verdict_code(verdicts, cfg.strict)
    elif cmd == "blowdown":
        if not cfg.G:
            raise UsageError("blowdown needs --G, a series in Y")
        G = parse_poly(cfg.G, cfg.field, ("X", "Y"))
        H, u = blowdown_construct(G, cfg.degree)
        doc["blowdown"] = {"G": G.to_str(), "H": H.to_str(), "u": u.to_str(), "lambda": int(H.order())}
    else:
        raise UsageError(f"unknown command {cmd!r}")
    return doc, code


def render(doc: dict) -> str:
    """Short human-readable rendering of a report document."""
    lines = [f"{doc['command']} over {doc['config']['field']}"]
    if "surface" in doc:
        s = doc["surface"]
        lines.append(f"  F = {s['F']}")
        lines.append(f"  multiplicity {s['multiplicity']}, cone {s['cone']}")
        lines.append(f"  Newton set {s['newton_set']}")
    if "locus" in doc:
        els = ", ".join(e.get("ideal", "M") for e in doc["locus"]["elements"])
        lines.append(f"  E0 = {{{els}}} ({doc['locus']['completeness']})")
    for t in doc.get("transforms", []):
        if t["kind"] == "transformed":
            lines.append(f"  at ({t['direction']}): {t['F1']}")
        else:
            lines.append(f"  at ({t['direction']}): multiplicity drops to {t['new_multiplicity']}: {t['F1']}")
    for r in doc.get("reports", []) if doc["command"] != "fuzz" else []:
        lines.append(f"  case {r['case']} at ({r['direction']}): {r['verdict']}"
                     + (f" ({r['reason']})" if r["reason"] else ""))
        for c in r["classification"]:
            pre = f" <- {c['preimage']}" if c.get("preimage") else ""
            lines.append(f"    {c['curve']}: {c['type']}{pre}")
    if "counts" in doc:
        lines.append(f"  verdicts {doc['counts']}, non-vacuous b2 {doc['non_vacuous_b2']}")
    if "blowdown" in doc:
        b = doc["blowdown"]
        lines.append(f"  H = {b['H']}")
        lines.append(f"  u = {b['u']}")
    if "verdict" in doc:
        lines.append(f"verdict: {doc['verdict']}")
    return "\n".join(lines)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artifact", description=__doc__)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("surface", nargs="?", help="surface polynomial in X, Y, Z")
    ap.add_argument("--field", help="QQ or GF:p")
    ap.add_argument("--degree", type=int, help="working truncation degree")
    ap.add_argument("--h-bound", dest="h_bound", type=int, help="degree bound for h in curve search")
    ap.add_argument("--g-bound", dest="g_bound", type=int, help="degree bound for g in curve search")
    ap.add_argument("--dir", help="direction a:b:c (or a:c for monoidal)")
    ap.add_argument("--center", help="permitted center, e.g. 'Z,X'")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--count", type=int)
    ap.add_argument("--G", help="series in Y for blowdown")
    ap.add_argument("--session", help="key=value session file")
    ap.add_argument("--strict", action="store_true", help="exit 3 on Inconclusive")
    ap.add_argument("--json", action="store_true", help="emit JSON")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        doc, code = run_command(args.command, cfg)
    except (ParseError, UsageError, FieldError, RingError, DirectionNotOnCone, CenterNotPermitted,
            ValueError, OSError) as exc:
        print(f"artifact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(render(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
