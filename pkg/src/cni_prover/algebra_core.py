"""Exact rational arithmetic: sparse multivariate polynomials over Q,
monomial orderings, multivariate division, S-polynomials, and the
normalization of complex point expressions into cleared fractions.

Everything here is exact. No floating point is used anywhere in the
proving path, since ideal membership decisions must be error-free.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

Rational = Fraction


class AlgebraError(ValueError):
    """Raised on structurally invalid algebraic input."""


class ZeroDenominatorError(AlgebraError):
    """A division node whose denominator normalizes to the zero polynomial."""


class VarKind(enum.Enum):
    POINT = "point"
    SLACK = "slack"
    RABINOWITSCH = "rabinowitsch"


class VarTable:
    """Ordered registry of variables: complex point variables, real slack
    variables, and at most one Rabinowitsch variable."""

    def __init__(self) -> None:
        self._names: list[str] = []
        self._kinds: list[VarKind] = []
        self._index: dict[str, int] = {}

    def add(self, name: str, kind: VarKind) -> int:
        if name in self._index:
            raise AlgebraError(f"duplicate variable name {name!r}")
        if kind is VarKind.RABINOWITSCH and self.rabinowitsch is not None:
            raise AlgebraError("a variable table holds at most one Rabinowitsch variable")
        idx = len(self._names)
        self._names.append(name)
        self._kinds.append(kind)
        self._index[name] = idx
        return idx

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlgebraError(f"unknown variable {name!r}") from None

    def name(self, idx: int) -> str:
        return self._names[idx]

    def kind(self, idx: int) -> VarKind:
        return self._kinds[idx]

    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def indices(self, kind: VarKind) -> tuple[int, ...]:
        return tuple(i for i, k in enumerate(self._kinds) if k is kind)

    @property
    def rabinowitsch(self) -> int | None:
        for i, k in enumerate(self._kinds):
            if k is VarKind.RABINOWITSCH:
                return i
        return None

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __repr__(self) -> str:
        return f"VarTable({', '.join(self._names)})"


class Monomial:
    """Sparse monomial: a map from variable index to positive exponent,
    stored as a sorted tuple of pairs so it can be hashed and compared."""

    __slots__ = ("exps",)

    def __init__(self, exps: Union[Mapping[int, int], Iterable[tuple[int, int]]] = ()) -> None:
        items = exps.items() if isinstance(exps, Mapping) else exps
        cleaned = []
        for v, e in items:
            if e < 0:
                raise AlgebraError("monomial exponents must be nonnegative")
            if e:
                cleaned.append((v, e))
        object.__setattr__(self, "exps", tuple(sorted(cleaned)))

    def __setattr__(self, name, value):
        raise AttributeError("Monomial is immutable")

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def exponent(self, v: int) -> int:
        for vv, e in self.exps:
            if vv == v:
                return e
        return 0

    def variables(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.exps)

    @property
    def is_one(self) -> bool:
        return not self.exps

    def __mul__(self, other: "Monomial") -> "Monomial":
        out = dict(self.exps)
        for v, e in other.exps:
            out[v] = out.get(v, 0) + e
        return Monomial(out)

    def divide(self, other: "Monomial") -> "Monomial | None":
        """self / other, or None when other does not divide self."""
        out = dict(self.exps)
        for v, e in other.exps:
            have = out.get(v, 0)
            if have < e:
                return None
            if have == e:
                del out[v]
            else:
                out[v] = have - e
        return Monomial(out)

    def divides(self, other: "Monomial") -> bool:
        return other.divide(self) is not None

    def lcm(self, other: "Monomial") -> "Monomial":
        out = dict(self.exps)
        for v, e in other.exps:
            if out.get(v, 0) < e:
                out[v] = e
        return Monomial(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return hash(self.exps)

    def __repr__(self) -> str:
        if not self.exps:
            return "1"
        return "*".join(f"x{v}" if e == 1 else f"x{v}^{e}" for v, e in self.exps)


MONOMIAL_ONE = Monomial()


class MonomialOrder:
    """Base for monomial orders. Orders compare through sort keys; larger
    key means larger monomial."""

    def key(self, m: Monomial):
        raise NotImplementedError

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)


@dataclass(frozen=True)
class Lex(MonomialOrder):
    perm: tuple[int, ...]

    def key(self, m: Monomial):
        return tuple(m.exponent(v) for v in self.perm)


@dataclass(frozen=True)
class GrevLex(MonomialOrder):
    perm: tuple[int, ...]

    def key(self, m: Monomial):
        exps = [m.exponent(v) for v in self.perm]
        return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class Block(MonomialOrder):
    """Block order: compare by `first` (the eliminated block), break ties by
    `second`. Any monomial touching a first-block variable exceeds every
    monomial free of them, which is what elimination needs."""

    first: MonomialOrder
    second: MonomialOrder

    def key(self, m: Monomial):
        return (self.first.key(m), self.second.key(m))


def block_elimination_order(elim: Iterable[int], keep: Iterable[int]) -> Block:
    """Standard order for computing elimination ideals: graded reverse
    lexicographic inside each block, eliminated block first."""
    return Block(GrevLex(tuple(elim)), GrevLex(tuple(keep)))


class Polynomial:
    """Sparse polynomial over Q attached to a variable table. The zero
    polynomial is the empty term map; no zero coefficient is ever stored."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Mapping[Monomial, Rational]) -> None:
        cleaned: dict[Monomial, Fraction] = {}
        for m, c in terms.items():
            c = Fraction(c)
            if c:
                cleaned[m] = c
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def zero(cls, table: VarTable) -> "Polynomial":
        return cls(table, {})

    @classmethod
    def constant(cls, table: VarTable, c) -> "Polynomial":
        return cls(table, {MONOMIAL_ONE: Fraction(c)})

    @classmethod
    def variable(cls, table: VarTable, v: int) -> "Polynomial":
        return cls(table, {Monomial({v: 1}): Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(m.is_one for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise AlgebraError("polynomial is not constant")
        return self.terms.get(MONOMIAL_ONE, Fraction(0))

    @property
    def total_degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def degree_in(self, v: int) -> int:
        return max((m.exponent(v) for m in self.terms), default=0)

    def contains_var(self, v: int) -> bool:
        return any(m.exponent(v) for m in self.terms)

    def variables(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms:
            out.update(m.variables())
        return out

    def _same_table(self, other: "Polynomial") -> None:
        if self.table is not other.table:
            raise AlgebraError("polynomials belong to different variable tables")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._same_table(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, Fraction(0)) + c
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return Polynomial(self.table, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._same_table(other)
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = ma * mb
                nc = out.get(m, Fraction(0)) + ca * cb
                if nc:
                    out[m] = nc
                else:
                    del out[m]
        return Polynomial(self.table, out)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise AlgebraError("negative polynomial power")
        acc = Polynomial.constant(self.table, 1)
        for _ in range(k):
            acc = acc * self
        return acc

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.table, {m: cc * c for m, cc in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.table is other.table
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.table), frozenset(self.terms.items())))

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        if self.is_zero:
            raise AlgebraError("the zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder) -> "Polynomial":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading_coefficient(order))

    def substitute(self, assignment: Mapping[int, Rational]) -> "Polynomial":
        """Replace the given variables by rational constants."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            coef = Fraction(c)
            rest = []
            for v, e in m.exps:
                if v in assignment:
                    coef *= Fraction(assignment[v]) ** e
                else:
                    rest.append((v, e))
            if not coef:
                continue
            mm = Monomial(rest)
            nc = out.get(mm, Fraction(0)) + coef
            if nc:
                out[mm] = nc
            else:
                out.pop(mm, None)
        return Polynomial(self.table, out)

    def evaluate(self, assignment: Mapping[int, object]):
        """Evaluate at a full assignment. Values only need ring operations,
        so exact complex rationals from the test suite work as well."""
        total = None
        for m, c in self.terms.items():
            term = None
            for v, e in m.exps:
                f = assignment[v]
                p = f
                for _ in range(e - 1):
                    p = p * f
                term = p if term is None else term * p
            val = c if term is None else term * c
            total = val if total is None else total + val
        return Fraction(0) if total is None else total

    def sorted_terms(self, order: MonomialOrder) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __repr__(self) -> str:
        if self.is_zero:
            return "Polynomial(0)"
        names = self.table.names()
        bits = []
        for m, c in sorted(self.terms.items(), key=lambda t: t[0].exps):
            mono = "*".join(
                names[v] if e == 1 else f"{names[v]}^{e}" for v, e in m.exps
            )
            bits.append(f"{c}" if not mono else f"{c}*{mono}")
        return "Polynomial(" + " + ".join(bits) + ")"


def content_and_primitive(p: Polynomial, order: MonomialOrder) -> tuple[Fraction, Polynomial]:
    """Write p = content * primitive with primitive having coprime integer
    coefficients and a positive leading coefficient under `order`."""
    if p.is_zero:
        return Fraction(0), p
    num_gcd = 0
    den_lcm = 1
    for c in p.terms.values():
        num_gcd = gcd(num_gcd, c.numerator)
        den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    if p.leading_coefficient(order) < 0:
        content = -content
    return content, p.scale(1 / content)


def poly_arith(op: str, f: Polynomial, g) -> Polynomial:
    """Dispatch helper mirroring the documented operation set."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "pow":
        return f ** g
    raise AlgebraError(f"unknown polynomial operation {op!r}")


def normal_form(f: Polynomial, G: Iterable[Polynomial], order: MonomialOrder) -> Polynomial:
    """Remainder of f under multivariate division by G: no monomial of the
    result is divisible by any leading monomial of G, and f minus the result
    lies in the ideal generated by G."""
    reducers = []
    for g in G:
        if g.is_zero:
            raise AlgebraError("normal_form requires nonzero divisors")
        reducers.append((g.leading_monomial(order), g.leading_coefficient(order), g))
    work = dict(f.terms)
    rem: dict[Monomial, Fraction] = {}
    while work:
        m = max(work, key=order.key)
        c = work.pop(m)
        hit = None
        for lm, lc, g in reducers:
            q = m.divide(lm)
            if q is not None:
                hit = (q, c / lc, g)
                break
        if hit is None:
            rem[m] = c
            continue
        q, scale, g = hit
        for mg, cg in g.terms.items():
            mm = q * mg
            if mm == m:
                continue  # the head term cancels exactly
            nc = work.get(mm, Fraction(0)) - scale * cg
            if nc:
                work[mm] = nc
            else:
                work.pop(mm, None)
    return Polynomial(f.table, rem)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    """S(f, g) = (lcm/lt(f)) * f - (lcm/lt(g)) * g; the leading terms cancel."""
    if f.is_zero or g.is_zero:
        raise AlgebraError("S-polynomial of a zero polynomial")
    f._same_table(g)
    lmf = f.leading_monomial(order)
    lmg = g.leading_monomial(order)
    l = lmf.lcm(lmg)
    qf = l.divide(lmf)
    qg = l.divide(lmg)
    tf = Polynomial(f.table, {qf: 1 / f.terms[lmf]})
    tg = Polynomial(g.table, {qg: 1 / g.terms[lmg]})
    return tf * f - tg * g


# ---------------------------------------------------------------------------
# Rational point expressions


class Expr:
    """Expression tree over complex point symbols and rational constants."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, k: int):
        return Pow(self, k)

    def __neg__(self):
        return Sub(Const(Fraction(0)), self)


RationalExpr = Expr


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class PointRef(Expr):
    index: int


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr

    def __post_init__(self):
        if isinstance(self.right, Const) and self.right.value == 0:
            raise ZeroDenominatorError("division by the constant zero")


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise AlgebraError("Pow exponent must be nonnegative")


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(Fraction(x))
    raise AlgebraError(f"cannot treat {x!r} as an expression")


def expr_evaluate(e: Expr, assignment: Mapping[int, object]):
    """Evaluate an expression at concrete values. Works for any value type
    with field operations (Fraction, or the exact complex rationals used in
    tests)."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, PointRef):
        return assignment[e.index]
    if isinstance(e, Add):
        return expr_evaluate(e.left, assignment) + expr_evaluate(e.right, assignment)
    if isinstance(e, Sub):
        return expr_evaluate(e.left, assignment) - expr_evaluate(e.right, assignment)
    if isinstance(e, Mul):
        return expr_evaluate(e.left, assignment) * expr_evaluate(e.right, assignment)
    if isinstance(e, Div):
        return expr_evaluate(e.left, assignment) / expr_evaluate(e.right, assignment)
    if isinstance(e, Pow):
        base = expr_evaluate(e.base, assignment)
        out = base ** 0 if hasattr(base, "__pow__") else 1
        try:
            return base ** e.exponent
        except TypeError:
            for _ in range(e.exponent):
                out = out * base
            return out
    raise AlgebraError(f"unknown expression node {e!r}")


def expr_substitute(e: Expr, mapping: Mapping[int, Expr]) -> Expr:
    """Replace point references by expressions. References absent from the
    mapping stay as they are."""
    if isinstance(e, PointRef):
        return mapping.get(e.index, e)
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return Add(expr_substitute(e.left, mapping), expr_substitute(e.right, mapping))
    if isinstance(e, Sub):
        return Sub(expr_substitute(e.left, mapping), expr_substitute(e.right, mapping))
    if isinstance(e, Mul):
        return Mul(expr_substitute(e.left, mapping), expr_substitute(e.right, mapping))
    if isinstance(e, Div):
        return Div(expr_substitute(e.left, mapping), expr_substitute(e.right, mapping))
    if isinstance(e, Pow):
        return Pow(expr_substitute(e.base, mapping), e.exponent)
    raise AlgebraError(f"unknown expression node {e!r}")


def expr_points(e: Expr) -> set[int]:
    if isinstance(e, PointRef):
        return {e.index}
    if isinstance(e, (Add, Sub, Mul, Div)):
        return expr_points(e.left) | expr_points(e.right)
    if isinstance(e, Pow):
        return expr_points(e.base)
    return set()


def expr_normalize(
    e: Expr, table: VarTable, order: MonomialOrder
) -> tuple[Polynomial, Polynomial, list[Polynomial]]:
    """Clear denominators: e = num/den as formal rational functions.

    Every Div node contributes its (normalized) denominator polynomial to
    the factor list exactly once, to the first power. Constant denominators
    are folded into the numerator coefficients, so `den` is literally a
    product of powers of the listed factors. The factors are primitive with
    positive leading coefficient under `order`, which is what the
    Rabinowitsch product wants downstream.
    """
    one = Polynomial.constant(table, 1)
    factors: list[Polynomial] = []
    seen: set[frozenset] = set()

    def note(p: Polynomial) -> None:
        k = frozenset(p.terms.items())
        if k not in seen:
            seen.add(k)
            factors.append(p)

    def walk(node: Expr) -> tuple[Polynomial, Polynomial]:
        if isinstance(node, Const):
            return Polynomial.constant(table, node.value), one
        if isinstance(node, PointRef):
            return Polynomial.variable(table, node.index), one
        if isinstance(node, Add):
            nl, dl = walk(node.left)
            nr, dr = walk(node.right)
            return nl * dr + nr * dl, dl * dr
        if isinstance(node, Sub):
            nl, dl = walk(node.left)
            nr, dr = walk(node.right)
            return nl * dr - nr * dl, dl * dr
        if isinstance(node, Mul):
            nl, dl = walk(node.left)
            nr, dr = walk(node.right)
            return nl * nr, dl * dr
        if isinstance(node, Pow):
            nb, db = walk(node.base)
            return nb ** node.exponent, db ** node.exponent
        if isinstance(node, Div):
            nl, dl = walk(node.left)
            nr, dr = walk(node.right)
            if nr.is_zero:
                raise ZeroDenominatorError("denominator normalizes to the zero polynomial")
            content, prim = content_and_primitive(nr, order)
            num = nl * dr
            if prim.is_constant:
                # purely numeric denominator: fold into coefficients
                return num.scale(1 / (content * prim.constant_value())), dl
            note(prim)
            return num.scale(1 / content), dl * prim
        raise AlgebraError(f"unknown expression node {node!r}")

    num, den = walk(e)
    return num, den, factors
