"""Shared test helpers: exact Gaussian rationals for evaluating point
expressions, random polynomial generators, and sympy conversion."""

from __future__ import annotations

import random
from fractions import Fraction

from cni_prover.algebra_core import Monomial, Polynomial, VarKind, VarTable


class Qi:
    """Gaussian rational a + b*i. Field operations are exact, which lets
    polynomial and expression evaluation run over the complex rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __add__(self, other):
        o = _qi(other)
        return Qi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _qi(other)
        return Qi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return _qi(other) - self

    def __mul__(self, other):
        o = _qi(other)
        return Qi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _qi(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return Qi((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        return _qi(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return Qi(1) / self ** (-k)
        out = Qi(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __neg__(self):
        return Qi(-self.re, -self.im)

    def __eq__(self, other):
        try:
            o = _qi(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Qi({self.re}, {self.im})"


def _qi(x) -> Qi:
    if isinstance(x, Qi):
        return x
    if isinstance(x, (int, Fraction)):
        return Qi(x)
    raise TypeError(f"cannot coerce {x!r} to Qi")


I = Qi(0, 1)


def make_table(*names: str, kind=VarKind.POINT) -> VarTable:
    table = VarTable()
    for n in names:
        table.add(n, kind)
    return table


def random_polynomial(
    rng: random.Random,
    table: VarTable,
    variables,
    max_degree: int = 3,
    max_terms: int = 4,
) -> Polynomial:
    terms: dict[Monomial, Fraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        exps: dict[int, int] = {}
        for _ in range(rng.randint(0, max_degree)):
            v = rng.choice(variables)
            exps[v] = exps.get(v, 0) + 1
        c = Fraction(rng.randint(-5, 5))
        if not c:
            continue
        m = Monomial(exps)
        nc = terms.get(m, Fraction(0)) + c
        if nc:
            terms[m] = nc
        else:
            terms.pop(m, None)
    return Polynomial(table, terms)


def to_sympy(p: Polynomial, symbols):
    """Convert to a sympy expression; symbols[i] stands for variable i."""
    import sympy

    total = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in m.exps:
            term *= symbols[v] ** e
        total += term
    return total


def from_sympy(expr, table: VarTable, symbols) -> Polynomial:
    """Convert a sympy polynomial expression back; inverse of to_sympy."""
    import sympy

    index = {s: i for i, s in enumerate(symbols)}
    poly = sympy.Poly(sympy.expand(expr), *symbols)
    terms: dict[Monomial, Fraction] = {}
    for monom, coeff in poly.terms():
        c = sympy.Rational(coeff)
        frac = Fraction(int(c.p), int(c.q))
        exps = {index[s]: e for s, e in zip(symbols, monom) if e}
        terms[Monomial(exps)] = frac
    return Polynomial(table, terms)
