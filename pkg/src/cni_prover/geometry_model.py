"""Constructions over complex points: predicates encoded as rational
expressions that are real exactly when the property holds, declarative
point definitions, and the translation of a construction plus thesis into
the polynomial system whose elimination ideal decides the statement.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .algebra_core import (
    AlgebraError,
    Add,
    Const,
    Div,
    Mul,
    MonomialOrder,
    PointRef,
    Polynomial,
    Pow,
    RationalExpr,
    Sub,
    VarKind,
    VarTable,
    block_elimination_order,
    expr_normalize,
    expr_points,
    expr_substitute,
)


class GeometryError(ValueError):
    """Structurally invalid construction input."""


class PredicateArgumentError(GeometryError):
    """Predicate arguments violate the syntactic distinctness rules."""


# ---------------------------------------------------------------------------
# Predicates. Arguments are point variable indices. Each predicate knows the
# point pairs that appear as directed segments in its expression; those must
# be symbolically distinct or a denominator is identically zero.


class Predicate:
    __slots__ = ()

    def points(self) -> tuple[int, ...]:
        raise NotImplementedError

    def _segments(self) -> tuple[tuple[int, int], ...]:
        raise NotImplementedError

    def _check(self) -> None:
        for a, b in self._segments():
            if a == b:
                raise PredicateArgumentError(
                    f"{type(self).__name__} needs distinct points in each "
                    f"directed segment (argument {a} repeated)"
                )


@dataclass(frozen=True)
class Collinear(Predicate):
    a: int
    o: int
    b: int

    def __post_init__(self):
        self._check()

    def points(self):
        return (self.a, self.o, self.b)

    def _segments(self):
        return ((self.a, self.o), (self.o, self.b))


@dataclass(frozen=True)
class Parallel(Predicate):
    e: int
    f: int
    g: int
    h: int

    def __post_init__(self):
        self._check()

    def points(self):
        return (self.e, self.f, self.g, self.h)

    def _segments(self):
        return ((self.e, self.f), (self.g, self.h))


@dataclass(frozen=True)
class Perpendicular(Predicate):
    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        self._check()

    def points(self):
        return (self.p, self.q, self.r, self.s)

    def _segments(self):
        return ((self.p, self.q), (self.r, self.s))


@dataclass(frozen=True)
class Equidistant(Predicate):
    """OA = OC, encoded through the angle equality of the isosceles
    triangle OAC."""

    o: int
    a: int
    c: int

    def __post_init__(self):
        self._check()

    def points(self):
        return (self.o, self.a, self.c)

    def _segments(self):
        return ((self.a, self.c), (self.a, self.o), (self.c, self.o))


@dataclass(frozen=True)
class AngleEqual(Predicate):
    """Angle P1-Q1-R1 equals angle P2-Q2-R2 (vertex in the middle)."""

    p1: int
    q1: int
    r1: int
    p2: int
    q2: int
    r2: int

    def __post_init__(self):
        self._check()

    def points(self):
        return (self.p1, self.q1, self.r1, self.p2, self.q2, self.r2)

    def _segments(self):
        return (
            (self.q1, self.p1),
            (self.q1, self.r1),
            (self.q2, self.p2),
            (self.q2, self.r2),
        )


@dataclass(frozen=True)
class Concyclic(Predicate):
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        self._check()

    def points(self):
        return (self.a, self.b, self.c, self.d)

    def _segments(self):
        return ((self.a, self.c), (self.b, self.d), (self.a, self.d), (self.b, self.c))


def predicate_exprs(p: Predicate) -> list[RationalExpr]:
    """Rational expressions that are all real iff the predicate holds."""

    def pt(i: int) -> PointRef:
        return PointRef(i)

    if isinstance(p, Collinear):
        return [Div(Sub(pt(p.a), pt(p.o)), Sub(pt(p.o), pt(p.b)))]
    if isinstance(p, Parallel):
        return [Div(Sub(pt(p.e), pt(p.f)), Sub(pt(p.g), pt(p.h)))]
    if isinstance(p, Perpendicular):
        return [Pow(Div(Sub(pt(p.p), pt(p.q)), Sub(pt(p.r), pt(p.s))), 2)]
    if isinstance(p, Equidistant):
        return [
            Div(
                Div(Sub(pt(p.a), pt(p.c)), Sub(pt(p.a), pt(p.o))),
                Div(Sub(pt(p.c), pt(p.o)), Sub(pt(p.c), pt(p.a))),
            )
        ]
    if isinstance(p, AngleEqual):
        return [
            Div(
                Div(Sub(pt(p.q1), pt(p.p1)), Sub(pt(p.q1), pt(p.r1))),
                Div(Sub(pt(p.q2), pt(p.p2)), Sub(pt(p.q2), pt(p.r2))),
            )
        ]
    if isinstance(p, Concyclic):
        # real cross-ratio; also real for collinear quadruples, see note
        return [
            Div(
                Mul(Sub(pt(p.a), pt(p.c)), Sub(pt(p.b), pt(p.d))),
                Mul(Sub(pt(p.a), pt(p.d)), Sub(pt(p.b), pt(p.c))),
            )
        ]
    raise GeometryError(f"unknown predicate {p!r}")


DECLARATIVE_KINDS = ("midpoint", "parallelogram_fourth", "barycenter")


def declarative_expr(kind: str, args: tuple[int, ...]) -> RationalExpr:
    """Built-in declarative point definitions."""
    pts = [PointRef(i) for i in args]
    if kind == "midpoint":
        if len(args) != 2:
            raise GeometryError("midpoint takes 2 points")
        return Div(Add(pts[0], pts[1]), Const(Fraction(2)))
    if kind == "parallelogram_fourth":
        # completes P, Q, R to the parallelogram P Q R X
        if len(args) != 3:
            raise GeometryError("parallelogram_fourth takes 3 points")
        return Sub(Add(pts[0], pts[2]), pts[1])
    if kind == "barycenter":
        if len(args) != 3:
            raise GeometryError("barycenter takes 3 points")
        return Div(Add(Add(pts[0], pts[1]), pts[2]), Const(Fraction(3)))
    raise GeometryError(f"unknown declarative kind {kind!r}")


# ---------------------------------------------------------------------------
# Construction steps.


@dataclass(frozen=True)
class Declarative:
    point: int
    definition: RationalExpr


@dataclass(frozen=True)
class RealRelational:
    """One or more rational expressions required to be real.

    `relations` is what the algebra consumes (declaratives substituted);
    `stated` keeps the expressions as originally written for trace display.
    """

    relations: tuple[RationalExpr, ...]
    stated: tuple[RationalExpr, ...] = ()
    source: Predicate | None = None

    def __post_init__(self):
        if not self.relations:
            raise GeometryError("a real-relational step needs at least one expression")
        if not self.stated:
            object.__setattr__(self, "stated", self.relations)


def predicate_step(p: Predicate) -> RealRelational:
    """Hypothesis step asserting a predicate through its expressions."""
    exprs = tuple(predicate_exprs(p))
    return RealRelational(relations=exprs, stated=exprs, source=p)


ConstructionStep = Union[Declarative, RealRelational]


@dataclass(frozen=True)
class Construction:
    """A construction: free points, steps, and exactly one thesis, given
    either as a predicate or as an explicit rational expression."""

    table: VarTable
    free_points: tuple[int, ...]
    steps: tuple[ConstructionStep, ...]
    thesis: Predicate | None = None
    thesis_expr: RationalExpr | None = None
    thesis_stated: RationalExpr | None = None
    inlined: tuple[Declarative, ...] = ()

    def __post_init__(self):
        if self.thesis is None and self.thesis_expr is None:
            raise GeometryError("a construction needs a thesis")
        n = len(self.table)
        for i in self.free_points:
            if not 0 <= i < n:
                raise GeometryError(f"free point index {i} out of range")
        declared = set(self.free_points)
        for step in self.steps:
            if isinstance(step, Declarative):
                for ref in expr_points(step.definition):
                    if ref >= step.point:
                        raise GeometryError(
                            f"declarative point {self.table.name(step.point)} may "
                            f"only reference earlier points"
                        )
                declared.add(step.point)
            else:
                for e in step.relations:
                    for ref in expr_points(e):
                        if not 0 <= ref < n:
                            raise GeometryError(f"point index {ref} out of range")
        if self.thesis is not None:
            for ref in self.thesis.points():
                if not 0 <= ref < n:
                    raise GeometryError(f"thesis point index {ref} out of range")

    def point_name(self, i: int) -> str:
        return self.table.name(i)


def substitute_declaratives(c: Construction) -> Construction:
    """Inline every declarative definition into later relations and the
    thesis. The result carries only real-relational steps; the inlined
    definitions are archived for trace narration."""
    env: dict[int, RationalExpr] = {}
    inlined: list[Declarative] = []
    new_steps: list[RealRelational] = []
    for step in c.steps:
        if isinstance(step, Declarative):
            expanded = expr_substitute(step.definition, env)
            env[step.point] = expanded
            inlined.append(Declarative(step.point, step.definition))
        else:
            new_steps.append(
                RealRelational(
                    relations=tuple(expr_substitute(e, env) for e in step.relations),
                    stated=step.stated,
                    source=step.source,
                )
            )
    thesis_expr = c.thesis_expr
    thesis_stated = c.thesis_stated
    if c.thesis is not None:
        exprs = predicate_exprs(c.thesis)
        if len(exprs) != 1:
            raise GeometryError("the thesis must reduce to a single expression")
        thesis_stated = exprs[0]
        thesis_expr = expr_substitute(exprs[0], env)
    elif thesis_expr is not None:
        thesis_stated = thesis_stated if thesis_stated is not None else thesis_expr
        thesis_expr = expr_substitute(thesis_expr, env)
    return Construction(
        table=c.table,
        free_points=c.free_points,
        steps=tuple(new_steps),
        thesis=c.thesis,
        thesis_expr=thesis_expr,
        thesis_stated=thesis_stated,
        inlined=c.inlined + tuple(inlined),
    )


# ---------------------------------------------------------------------------
# Polynomial system assembly.


@dataclass(frozen=True)
class SlackOrigin:
    """Ties a slack variable to the relation it measures."""

    slack: int
    name: str
    stated: RationalExpr
    source: Predicate | None
    is_thesis: bool


@dataclass(frozen=True)
class PolynomialSystem:
    """Cleared polynomials p1..ps (thesis last) plus the denominator
    product polynomial, with the variable partition for elimination."""

    table: VarTable
    hypothesis_polys: tuple[Polynomial, ...]
    rabinowitsch_poly: Polynomial | None
    eliminate_vars: tuple[int, ...]
    keep_vars: tuple[int, ...]
    slack_map: tuple[SlackOrigin, ...]
    denominator_factors: tuple[Polynomial, ...]
    free_points: tuple[int, ...]
    point_names: tuple[str, ...]
    declaratives: tuple[tuple[str, RationalExpr], ...]
    fixed: tuple[tuple[str, Fraction], ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def thesis_slack(self) -> int:
        return self.slack_map[-1].slack

    def order(self) -> MonomialOrder:
        return block_elimination_order(self.eliminate_vars, self.keep_vars)


def _fresh_name(base: str, table: VarTable) -> str:
    if base not in table:
        return base
    k = 0
    while f"{base}_{k}" in table:
        k += 1
    return f"{base}_{k}"


def _segment_text(c: Construction, a: int, b: int) -> str:
    return f"{c.point_name(a)}{c.point_name(b)}"


def _collect_notes(c: Construction) -> tuple[str, ...]:
    notes: list[str] = []
    preds = [s.source for s in c.steps if isinstance(s, RealRelational) and s.source]
    if isinstance(c.thesis, Perpendicular):
        t = c.thesis
        notes.append(
            "The squared-ratio encoding of perpendicularity proves a weaker "
            f"conclusion: either {_segment_text(c, t.p, t.q)} is perpendicular "
            f"to {_segment_text(c, t.r, t.s)} or the two lines are parallel."
        )
    if any(isinstance(p, Equidistant) for p in preds) or isinstance(c.thesis, Equidistant):
        notes.append(
            "Distance equality is encoded through the isosceles angle "
            "equality; the encoding also admits some degenerate collinear "
            "configurations."
        )
    if any(isinstance(p, Concyclic) for p in preds) or isinstance(c.thesis, Concyclic):
        notes.append(
            "Concyclicity is encoded through the real cross-ratio, which is "
            "also real when the four points are collinear."
        )
    return tuple(notes)


def build_system(c: Construction) -> PolynomialSystem:
    """Translate a construction (declaratives already substituted) into the
    cleared polynomial system: one polynomial e_i - r_i per relation, one
    for the thesis, and the product polynomial (b1...bm)u - 1 over the
    deduplicated denominator factors."""
    for step in c.steps:
        if isinstance(step, Declarative):
            raise GeometryError("substitute declaratives before building the system")
    if c.thesis_expr is None:
        raise GeometryError("substitute declaratives before building the system")

    relations: list[tuple[RationalExpr, RationalExpr, Predicate | None]] = []
    for step in c.steps:
        if len(step.relations) != len(step.stated):
            raise GeometryError("stated expressions out of step with relations")
        for e, stated in zip(step.relations, step.stated):
            relations.append((e, stated, step.source))

    n_points = len(c.table)
    table = VarTable()
    for i in range(n_points):
        table.add(c.table.name(i), VarKind.POINT)
    u = table.add(_fresh_name("u", table), VarKind.RABINOWITSCH)
    slack_entries: list[SlackOrigin] = []
    for k, (_, stated, source) in enumerate(relations, start=1):
        idx = table.add(_fresh_name(f"r{k}", table), VarKind.SLACK)
        slack_entries.append(SlackOrigin(idx, table.name(idx), stated, source, False))
    r_idx = table.add(_fresh_name("r", table), VarKind.SLACK)
    thesis_stated = c.thesis_stated if c.thesis_stated is not None else c.thesis_expr
    slack_entries.append(SlackOrigin(r_idx, table.name(r_idx), thesis_stated, c.thesis, True))

    eliminate_vars = tuple(range(n_points)) + (u,)
    keep_vars = tuple(o.slack for o in slack_entries)
    order = block_elimination_order(eliminate_vars, keep_vars)

    polys: list[Polynomial] = []
    factors: list[Polynomial] = []
    seen: set[frozenset] = set()

    def clear(expr: RationalExpr, slack: int) -> None:
        num, _den, fs = expr_normalize(Sub(expr, PointRef(slack)), table, order)
        polys.append(num)
        for f in fs:
            key = frozenset(f.terms.items())
            if key not in seen:
                seen.add(key)
                factors.append(f)

    for (e, _, _), origin in zip(relations, slack_entries):
        clear(e, origin.slack)
    clear(c.thesis_expr, r_idx)

    rab = None
    if factors:
        prod = Polynomial.constant(table, 1)
        for f in factors:
            prod = prod * f
        rab = prod * Polynomial.variable(table, u) - Polynomial.constant(table, 1)

    return PolynomialSystem(
        table=table,
        hypothesis_polys=tuple(polys),
        rabinowitsch_poly=rab,
        eliminate_vars=eliminate_vars,
        keep_vars=keep_vars,
        slack_map=tuple(slack_entries),
        denominator_factors=tuple(factors),
        free_points=c.free_points,
        point_names=tuple(c.table.name(i) for i in range(n_points)),
        declaratives=tuple((c.table.name(d.point), d.definition) for d in c.inlined),
        fixed=(),
        notes=_collect_notes(c),
    )


FIX_MODES = ("zero_one", "minus_one_one", "off")


def fix_coordinates(sys: PolynomialSystem, c: Construction, mode: str) -> PolynomialSystem:
    """Pin the first two free points to constants (0 and 1, or -1 and 1).
    The statement is affine-invariant, so this only shrinks the elimination
    problem. With fewer than two free points, fixes as many as available."""
    if mode not in FIX_MODES:
        raise GeometryError(f"unknown coordinate fixing mode {mode!r}")
    if mode == "off" or not c.free_points:
        return sys
    values = (Fraction(0), Fraction(1)) if mode == "zero_one" else (Fraction(-1), Fraction(1))
    targets = list(zip(c.free_points[:2], values))
    assignment = {p: v for p, v in targets}
    polys = tuple(p.substitute(assignment) for p in sys.hypothesis_polys)
    rab = None if sys.rabinowitsch_poly is None else sys.rabinowitsch_poly.substitute(assignment)
    fixed_set = set(assignment)
    return PolynomialSystem(
        table=sys.table,
        hypothesis_polys=polys,
        rabinowitsch_poly=rab,
        eliminate_vars=tuple(v for v in sys.eliminate_vars if v not in fixed_set),
        keep_vars=sys.keep_vars,
        slack_map=sys.slack_map,
        denominator_factors=tuple(f.substitute(assignment) for f in sys.denominator_factors),
        free_points=sys.free_points,
        point_names=sys.point_names,
        declaratives=sys.declaratives,
        fixed=sys.fixed + tuple((sys.table.name(p), v) for p, v in targets),
        notes=sys.notes,
    )
