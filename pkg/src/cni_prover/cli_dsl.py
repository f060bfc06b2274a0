"""Line-oriented construction language and the command line driver.

Grammar (one statement per line, `#` starts a comment):

    point A, B, C
    X := (A+B)/2
    X := midpoint(A, B)
    assume collinear(A, O, B)
    prove perpendicular(A, C, C, B)

Expressions use +, -, *, /, integer literals, parentheses, and previously
declared points. Exactly one `prove` statement is required. Identifiers are
an ASCII letter followed by letters or digits, case-sensitive.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .algebra_core import Const, PointRef, RationalExpr, VarKind, VarTable
from .geometry_model import (
    AngleEqual,
    Collinear,
    Concyclic,
    Construction,
    Declarative,
    Equidistant,
    GeometryError,
    Parallel,
    Perpendicular,
    Predicate,
    FIX_MODES,
    build_system,
    declarative_expr,
    fix_coordinates,
    predicate_step,
    substitute_declaratives,
)
from .proof_emitter import FORMATS, emit_trace, format_expr
from .prover import INCONCLUSIVE, PROVED, ProofTrace, ProverConfig, ProverVerdict, prove


class DslSyntaxError(ValueError):
    """Malformed source; carries the line and column of the offence."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownPredicateError(Exception):
    """A predicate name outside the supported catalog (reason code niu)."""

    def __init__(self, name: str, line: int):
        super().__init__(f"line {line}: the predicate '{name}' is not supported")
        self.name = name
        self.line = line


class PredicateArityError(Exception):
    """A known predicate applied to the wrong number of points (nfiu)."""

    def __init__(self, name: str, line: int, expected: int, got: int):
        super().__init__(
            f"line {line}: {name} takes {expected} points, got {got}"
        )
        self.line = line


PREDICATES: dict[str, tuple[type, int]] = {
    "collinear": (Collinear, 3),
    "perpendicular": (Perpendicular, 4),
    "parallel": (Parallel, 4),
    "equidist": (Equidistant, 3),
    "angle_eq": (AngleEqual, 6),
    "concyclic": (Concyclic, 4),
}

_PREDICATE_NAMES = {cls: name for name, (cls, _) in PREDICATES.items()}

SUGAR = {
    "midpoint": ("midpoint", 2),
    "barycenter": ("barycenter", 3),
    "parallelogram4": ("parallelogram_fourth", 3),
}

KEYWORDS = ("point", "assume", "prove")


@dataclass(frozen=True)
class SourceProgram:
    """Raw program text plus a name used in diagnostics."""

    text: str
    name: str = "<input>"

    def statements(self) -> list[tuple[int, str]]:
        """Non-empty statements with their 1-based line numbers, comments
        stripped."""
        out = []
        for i, raw in enumerate(self.text.splitlines(), start=1):
            stripped = raw.split("#", 1)[0].strip()
            if stripped:
                out.append((i, stripped))
        return out


# ---------------------------------------------------------------------------
# Tokenizer and statement parsing.

# Underscores are tolerated by the tokenizer because predicate names use
# them (angle_eq); point identifiers themselves stay letters-and-digits.
_TOKEN_RE = re.compile(
    r"[ \t]*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<assign>:=)|(?P<sym>[+\-*/(),]))"
)

def _check_point_name(name: str, line: int, col: int) -> None:
    if "_" in name:
        raise DslSyntaxError(
            "point names are a letter followed by letters or digits", line, col
        )


def _tokenize(text: str, line: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise DslSyntaxError(
                f"unexpected character {rest[0]!r}", line, pos + 1
            )
        for kind in ("name", "int", "assign", "sym"):
            value = m.group(kind)
            if value is not None:
                tokens.append((kind, value, m.start(kind) + 1))
                break
        pos = m.end()
    return tokens


class _Tokens:
    def __init__(self, tokens, line):
        self.tokens = tokens
        self.line = line
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expected: str | None = None):
        tok = self.peek()
        if tok is None:
            raise DslSyntaxError(
                f"unexpected end of line (expected {expected or 'more input'})",
                self.line,
                len_hint(self.tokens),
            )
        self.pos += 1
        return tok

    def expect_sym(self, sym: str):
        kind, value, col = self.next(repr(sym))
        if value != sym:
            raise DslSyntaxError(f"expected {sym!r}, got {value!r}", self.line, col)

    def expect_name(self, what: str) -> tuple[str, int]:
        kind, value, col = self.next(what)
        if kind != "name":
            raise DslSyntaxError(f"expected {what}, got {value!r}", self.line, col)
        return value, col

    def expect_end(self):
        tok = self.peek()
        if tok is not None:
            raise DslSyntaxError(
                f"unexpected trailing input {tok[1]!r}", self.line, tok[2]
            )


def len_hint(tokens) -> int:
    return tokens[-1][2] + len(tokens[-1][1]) if tokens else 1


class _ExprParser:
    """Recursive descent over +, -, *, /, integers, parentheses, points."""

    def __init__(self, ts: _Tokens, points: dict[str, int]):
        self.ts = ts
        self.points = points

    def parse(self) -> RationalExpr:
        e = self._sum()
        return e

    def _sum(self) -> RationalExpr:
        e = self._product()
        while True:
            tok = self.ts.peek()
            if tok is None or tok[1] not in ("+", "-"):
                return e
            self.ts.next()
            rhs = self._product()
            e = e + rhs if tok[1] == "+" else e - rhs

    def _product(self) -> RationalExpr:
        e = self._factor()
        while True:
            tok = self.ts.peek()
            if tok is None or tok[1] not in ("*", "/"):
                return e
            self.ts.next()
            rhs = self._factor()
            e = e * rhs if tok[1] == "*" else e / rhs

    def _factor(self) -> RationalExpr:
        tok = self.ts.peek()
        if tok is not None and tok[1] == "-":
            self.ts.next()
            inner = self._factor()
            if isinstance(inner, Const):
                return Const(-inner.value)
            return Const(Fraction(0)) - inner
        kind, value, col = self.ts.next("an expression")
        if kind == "int":
            return Const(Fraction(int(value)))
        if kind == "name":
            idx = self.points.get(value)
            if idx is None:
                raise DslSyntaxError(
                    f"unknown point {value!r} (points must be declared first)",
                    self.ts.line,
                    col,
                )
            return PointRef(idx)
        if value == "(":
            e = self._sum()
            self.ts.expect_sym(")")
            return e
        raise DslSyntaxError(f"unexpected token {value!r}", self.ts.line, col)


def _parse_call(ts: _Tokens, points: dict[str, int], line: int) -> tuple[str, list[int], int]:
    """Parse NAME(P1, ..., Pk) where the Pi are declared points. Returns the
    call name, the point indices, and the name's column."""
    name, col = ts.expect_name("a predicate name")
    args = _parse_call_args_only(ts, points, line)
    return name, args, col


def _build_predicate(name: str, args: list[int], line: int, col: int) -> Predicate:
    entry = PREDICATES.get(name)
    if entry is None:
        raise UnknownPredicateError(name, line)
    cls, arity = entry
    if len(args) != arity:
        raise PredicateArityError(name, line, arity, len(args))
    try:
        return cls(*args)
    except GeometryError as exc:
        raise DslSyntaxError(str(exc), line, col) from exc


def parse(src: SourceProgram) -> Construction:
    """Parse a program into a Construction with a single thesis."""
    table = VarTable()
    points: dict[str, int] = {}
    free: list[int] = []
    steps = []
    thesis: Predicate | None = None
    last_line = 1

    for line, text in src.statements():
        last_line = line
        ts = _Tokens(_tokenize(text, line), line)
        kind, first, col = ts.next("a statement")
        if kind != "name":
            raise DslSyntaxError(f"unexpected token {first!r}", line, col)

        if first == "point":
            while True:
                name, ncol = ts.expect_name("a point name")
                if name in KEYWORDS:
                    raise DslSyntaxError(
                        f"{name!r} is a keyword and cannot name a point", line, ncol
                    )
                _check_point_name(name, line, ncol)
                if name in points:
                    raise DslSyntaxError(f"duplicate point {name!r}", line, ncol)
                idx = table.add(name, VarKind.POINT)
                points[name] = idx
                free.append(idx)
                tok = ts.peek()
                if tok is None:
                    break
                ts.expect_sym(",")
            continue

        if first in ("assume", "prove"):
            pname, pargs, pcol = _parse_call(ts, points, line)
            pred = _build_predicate(pname, pargs, line, pcol)
            if first == "assume":
                steps.append(predicate_step(pred))
            else:
                if thesis is not None:
                    raise DslSyntaxError("multiple prove statements", line, col)
                thesis = pred
            continue

        # definition: NAME := expr
        name = first
        _check_point_name(name, line, col)
        if name in points:
            raise DslSyntaxError(f"duplicate point {name!r}", line, col)
        tok = ts.peek()
        if tok is None or tok[0] != "assign":
            raise DslSyntaxError(
                "expected 'point', 'assume', 'prove', or 'name := expression'",
                line,
                col,
            )
        ts.next()

        nxt = ts.peek()
        following = ts.tokens[ts.pos + 1] if ts.pos + 1 < len(ts.tokens) else None
        if (
            nxt is not None
            and nxt[0] == "name"
            and nxt[1] in SUGAR
            and following is not None
            and following[1] == "("
        ):
            sugar_name, sugar_col = ts.expect_name("a definition")
            cargs = _parse_call_args_only(ts, points, line)
            dsl_kind, arity = SUGAR[sugar_name]
            if len(cargs) != arity:
                raise DslSyntaxError(
                    f"{sugar_name} takes {arity} points, got {len(cargs)}",
                    line,
                    sugar_col,
                )
            definition = declarative_expr(dsl_kind, tuple(cargs))
        else:
            definition = _ExprParser(ts, points).parse()
            ts.expect_end()
        idx = table.add(name, VarKind.POINT)
        points[name] = idx
        steps.append(Declarative(idx, definition))

    if thesis is None:
        raise DslSyntaxError("missing prove statement", last_line)
    return Construction(
        table=table, free_points=tuple(free), steps=tuple(steps), thesis=thesis
    )


def _parse_call_args_only(ts: _Tokens, points: dict[str, int], line: int) -> list[int]:
    """Parse the (P1, ..., Pk) tail of a sugar call."""
    ts.expect_sym("(")
    args: list[int] = []
    while True:
        pname, pcol = ts.expect_name("a point name")
        idx = points.get(pname)
        if idx is None:
            raise DslSyntaxError(
                f"unknown point {pname!r} (points must be declared first)", line, pcol
            )
        args.append(idx)
        kind, value, vcol = ts.next("',' or ')'")
        if value == ")":
            break
        if value != ",":
            raise DslSyntaxError(f"expected ',' or ')', got {value!r}", line, vcol)
    ts.expect_end()
    return args


# ---------------------------------------------------------------------------
# Printing a construction back to source form.


def _predicate_source(p: Predicate, names) -> str:
    name = _PREDICATE_NAMES.get(type(p))
    if name is None:
        raise GeometryError(f"cannot print predicate {p!r}")
    return f"{name}({', '.join(names[i] for i in p.points())})"


def format_construction(c: Construction) -> str:
    """Print a construction as DSL source. Parsing the result gives back a
    structurally equal construction (sugar definitions print expanded)."""
    names = tuple(c.table.name(i) for i in range(len(c.table)))
    lines = []
    if c.free_points:
        lines.append("point " + ", ".join(names[i] for i in c.free_points))
    for step in c.steps:
        if isinstance(step, Declarative):
            lines.append(f"{names[step.point]} := {format_expr(step.definition, names)}")
        elif step.source is not None:
            lines.append(f"assume {_predicate_source(step.source, names)}")
        else:
            raise GeometryError("only predicate relations have a source form")
    if c.thesis is None:
        raise GeometryError("only predicate theses have a source form")
    lines.append(f"prove {_predicate_source(c.thesis, names)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CLI driver.


@dataclass(frozen=True)
class CliConfig:
    input: str
    fix_mode: str = "zero_one"
    timeout: float = 20.0
    format: str = "text"
    show_ideal: bool = False

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.fix_mode not in FIX_MODES:
            raise ValueError(f"unknown fix mode {self.fix_mode!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")


def _unsupported_verdict(code: str, note: str) -> ProverVerdict:
    trace = ProofTrace(
        point_names=(),
        free_point_names=(),
        declaratives=(),
        hypotheses=(),
        fixed=(),
        notes=(),
        reason_note=note,
    )
    return ProverVerdict(INCONCLUSIVE, code, trace)


def run_cli(cfg: CliConfig, out=None, err=None) -> int:
    """Prove the program in cfg.input and print the proof document. Exit
    status 0 for Proved, 2 for Inconclusive, 1 for parse or IO errors."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr

    if cfg.input == "-":
        text = sys.stdin.read()
        source_name = "<stdin>"
    else:
        try:
            text = Path(cfg.input).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"error: {exc}", file=err)
            return 1
        source_name = cfg.input

    try:
        construction = parse(SourceProgram(text, source_name))
    except DslSyntaxError as exc:
        print(f"error: {source_name}: {exc}", file=err)
        return 1
    except UnknownPredicateError as exc:
        doc = emit_trace(_unsupported_verdict("niu", str(exc)), cfg.format)
        print(doc.text(), file=out)
        return 2
    except PredicateArityError as exc:
        doc = emit_trace(_unsupported_verdict("nfiu", str(exc)), cfg.format)
        print(doc.text(), file=out)
        return 2

    try:
        substituted = substitute_declaratives(construction)
        system = build_system(substituted)
        system = fix_coordinates(system, substituted, cfg.fix_mode)
    except GeometryError as exc:
        print(f"error: {source_name}: {exc}", file=err)
        return 1

    verdict = prove(system, ProverConfig(timeout=cfg.timeout))
    doc = emit_trace(verdict, cfg.format, cfg.show_ideal)
    print(doc.text(), file=out)
    return 0 if verdict.outcome == PROVED else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cni-prover",
        description="Prove planar geometry statements through complex number identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("prove", help="prove a construction program")
    p.add_argument("file", help="program file, or - for standard input")
    p.add_argument("--fix", choices=FIX_MODES, default="zero_one",
                   help="coordinate fixing mode (default zero_one)")
    p.add_argument("--timeout", type=float, default=20.0,
                   help="elimination budget in seconds (default 20)")
    p.add_argument("--format", choices=FORMATS, default="text",
                   help="proof document format (default text)")
    p.add_argument("--show-ideal", action="store_true",
                   help="include the elimination ideal generators")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    try:
        cfg = CliConfig(
            input=args.file,
            fix_mode=args.fix,
            timeout=args.timeout,
            format=args.format,
            show_ideal=args.show_ideal,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run_cli(cfg)


if __name__ == "__main__":
    sys.exit(main())
