"""Rendering of prover verdicts as proof documents.

A verdict's trace is turned into an ordered list of narration lines in the
style of a hand-written complex-number proof: the construction, the slack
relations, the pivot equation, and the reality argument. Three formats share
one line sequence: plain text, a LaTeX enumerated list, and a JSON object for
machine consumption.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra_core import (
    Add,
    AlgebraError,
    Const,
    Div,
    MONOMIAL_ONE,
    Monomial,
    MonomialOrder,
    Mul,
    PointRef,
    Polynomial,
    Pow,
    RationalExpr,
    Sub,
    content_and_primitive,
)
from .prover import (
    INCONCLUSIVE,
    PROVED,
    REASON_MEANINGS,
    ProofTrace,
    ProverVerdict,
)

FORMATS = ("text", "latex", "json")


@dataclass(frozen=True)
class ProofDocument:
    """Rendered proof: ordered lines plus the one-line verdict banner."""

    format: str
    lines: tuple[str, ...]
    banner: str

    def text(self) -> str:
        return "\n".join(self.lines)


# ---------------------------------------------------------------------------
# Expression printing.

_OPS = {Add: ("+", 1), Sub: ("-", 1), Mul: ("*", 2), Div: ("/", 2)}


def _render_expr(e: RationalExpr, names: Sequence[str]) -> tuple[str, int]:
    if isinstance(e, Const):
        return str(e.value), (4 if e.value >= 0 else 1)
    if isinstance(e, PointRef):
        return names[e.index], 4
    if isinstance(e, Pow):
        base, bp = _render_expr(e.base, names)
        if bp < 4:
            base = f"({base})"
        return f"{base}^{e.exponent}", 3
    op = _OPS.get(type(e))
    if op is None:
        raise AlgebraError(f"cannot print expression node {type(e).__name__}")
    sym, prec = op
    left, lp = _render_expr(e.left, names)
    right, rp = _render_expr(e.right, names)
    if lp < prec:
        left = f"({left})"
    # Division and subtraction chains associate to the left, so a right
    # operand at equal precedence keeps its parentheses.
    if rp < prec or (rp == prec and isinstance(e, (Sub, Div))) or right.startswith("-"):
        right = f"({right})"
    return f"{left}{sym}{right}", prec


def format_expr(e: RationalExpr, names: Sequence[str]) -> str:
    """Print an expression with the usual precedence rules. Left-nested
    quotients stay flat (a/b/c) while compound right operands are wrapped."""
    return _render_expr(e, names)[0]


def _term_string(m: Monomial, c: Fraction, p: Polynomial) -> str:
    if not m.exps:
        return str(c)
    mono = "*".join(
        p.table.name(v) + (f"^{e}" if e > 1 else "") for v, e in m.exps
    )
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def format_polynomial(p: Polynomial, order: MonomialOrder) -> str:
    """Print terms descending under `order` with explicit * and ^."""
    if p.is_zero:
        return "0"
    out = []
    for m, c in p.sorted_terms(order):
        s = _term_string(m, c, p)
        if out and not s.startswith("-"):
            out.append("+")
        out.append(s)
    return "".join(out)


def _primitive(p: Polynomial, order: MonomialOrder) -> Polynomial:
    if p.is_zero:
        return p
    _, prim = content_and_primitive(p, order)
    return prim


# ---------------------------------------------------------------------------
# The summarizing identity.


def emit_identity(trace: ProofTrace) -> str | None:
    """When the pivot has exactly two terms c*M*r + k with k constant, the
    proof amounts to one identity: the product of the slack expressions in M
    and the thesis expression equals -k/c. Returns None otherwise."""
    if trace.linear is None or trace.thesis is None:
        return None
    pivot = trace.linear.pivot
    if len(pivot.terms) != 2:
        return None
    r = trace.thesis.slack
    mono = coeff = const = None
    for m, c in pivot.terms.items():
        if m.exponent(r) == 1:
            mono, coeff = m, c
        elif not m.exps:
            const = c
    if mono is None or const is None:
        return None
    by_slack = {h.slack: h for h in trace.hypotheses}
    names = trace.point_names
    factors = []
    for v, e in mono.exps:
        if v == r:
            continue
        origin = by_slack.get(v)
        if origin is None:
            return None
        s = format_expr(origin.stated, names)
        factors.append(f"({s})" + (f"^{e}" if e > 1 else ""))
    thesis_s = format_expr(trace.thesis.stated, names)
    value = -const / coeff
    if not factors:
        return f"{thesis_s}={value}"
    factors.append(f"({thesis_s})")
    return "*".join(factors) + f"={value}"


def _rational_form(trace: ProofTrace) -> str | None:
    """r = -w/v as a display string, collapsed to a polynomial when v is
    constant."""
    if trace.linear is None or trace.display_order is None:
        return None
    v, w = trace.linear.v, trace.linear.w
    order = trace.display_order
    if v.is_constant:
        return format_polynomial(w.scale(Fraction(-1) / v.constant_value()), order)
    num = w.scale(Fraction(-1))
    ns = format_polynomial(num, order)
    if len(num.terms) > 1:
        ns = f"({ns})"
    return f"{ns}/({format_polynomial(v, order)})"


def _second_status(verdict: ProverVerdict) -> str | None:
    t = verdict.trace
    if t.second_trivial:
        return "trivial"
    if t.second_linear is not None:
        return "polynomial"
    if t.denominator is None:
        return None
    if t.second_generators is None:
        return "timeout"
    if verdict.reason == "e2nru":
        return "no_r"
    return "inconclusive"


# ---------------------------------------------------------------------------
# Narration assembly. Items are (kind, text) with kind "s" for a sentence,
# "f" for a formula line, and "fr" for a hypothesis relation (LaTeX marks
# those as real).

BANNER_PROVED = "The statement is true under some non-degeneracy conditions (see below)."
BANNER_INCONCLUSIVE = "The statement could not be proved."


def _note_line(note: str) -> str:
    return "Note: " + note + ("" if note.endswith(".") else ".")


def _narration(verdict: ProverVerdict, show_ideal: bool) -> list[tuple[str, str]]:
    t = verdict.trace
    names = t.point_names
    items: list[tuple[str, str]] = []

    free = t.free_point_names
    if len(free) == 1:
        items.append(("s", f"Let {free[0]} be an arbitrary point."))
    elif free:
        items.append(("s", f"Let {', '.join(free)} be arbitrary points."))

    items.append(("s", _banner(verdict)))

    if t.declaratives or t.hypotheses:
        items.append(("s", "The hypotheses:"))
    for name, defn in t.declaratives:
        items.append(("f", f"{name}:={format_expr(defn, names)}"))
    for h in t.hypotheses:
        items.append(("fr", f"{format_expr(h.stated, names)}={h.name}"))

    if t.fixed:
        items.append(("s", "Without loss of generality, some coordinates can be fixed:"))
        for point, value in t.fixed:
            items.append(("f", f"{point}:={value}"))

    if t.thesis is not None:
        items.append(("s", "The thesis:"))
        items.append(("f", f"{format_expr(t.thesis.stated, names)}={t.thesis.name}"))

    if t.display_order is not None:
        items.append(("s", "We eliminate all variables that correspond to complex points."))

    order = t.display_order
    if show_ideal and order is not None and (t.generators or verdict.reason != "t/o"):
        if t.generators:
            items.append(("s", "The elimination ideal is generated by:"))
            for g in t.generators:
                items.append(("f", format_polynomial(_primitive(g, order), order)))
        else:
            items.append(("s", "The elimination ideal is <0>."))

    if t.pivot is not None and order is not None:
        rname = t.thesis.name if t.thesis is not None else "r"
        items.append(
            (
                "s",
                f"The thesis ({rname}) can be expressed as a rational expression "
                f"of the hypotheses, because {rname} is linear in an obtained "
                "polynomial equation:",
            )
        )
        items.append(("f", f"{format_polynomial(t.pivot, order)}=0"))

        if t.polynomial_form:
            items.append(
                ("s", "The thesis can be expressed as a polynomial expression of the hypotheses.")
            )
        elif t.denominator is not None:
            items.append(
                ("s", f"Expressing the thesis requires a division by {format_polynomial(t.denominator, order)}.")
            )
            items.append(("s", "Let us assume that that divisor is 0 and restart the elimination."))
            if show_ideal and t.second_generators:
                items.append(("s", "The second elimination ideal is generated by:"))
                for g in t.second_generators:
                    items.append(("f", format_polynomial(_primitive(g, order), order)))
            if t.second_trivial:
                items.append(("s", "The elimination verifies that that divisor cannot be zero."))
            elif t.second_linear is not None:
                items.append(
                    (
                        "s",
                        "Even if that divisor is 0, the thesis can be expressed as a "
                        "polynomial expression of the hypotheses (except for a couple "
                        "of counterexamples):",
                    )
                )
                items.append(("f", f"{format_polynomial(t.second_linear.pivot, order)}=0"))

    if verdict.outcome == PROVED:
        items.append(("s", "Since all hypotheses are real expressions, the thesis must also be real."))
        identity = emit_identity(t)
        if identity is not None:
            items.append(("s", "The proof can be summarized as the complex number identity:"))
            items.append(("f", identity))
        if t.reason_note:
            items.append(("s", _note_line(t.reason_note)))
    else:
        code = verdict.reason
        items.append(("s", f"Reason code: {code}."))
        items.append(("s", f"This code means: {REASON_MEANINGS[code]}."))
        if t.reason_note:
            items.append(("s", _note_line(t.reason_note)))

    for note in t.notes:
        items.append(("s", _note_line(note)))
    return items


def _banner(verdict: ProverVerdict) -> str:
    return BANNER_PROVED if verdict.outcome == PROVED else BANNER_INCONCLUSIVE


def _json_payload(verdict: ProverVerdict, show_ideal: bool) -> dict:
    t = verdict.trace
    names = t.point_names
    order = t.display_order

    def fmt(p: Polynomial | None) -> str | None:
        if p is None or order is None:
            return None
        return format_polynomial(p, order)

    obj = {
        "verdict": verdict.outcome,
        "reason": verdict.reason,
        "hypotheses": [
            {"relation": format_expr(h.stated, names), "slack": h.name}
            for h in t.hypotheses
        ],
        "fixed": [{"point": p, "value": str(v)} for p, v in t.fixed],
        "thesis": (
            {"relation": format_expr(t.thesis.stated, names), "slack": t.thesis.name}
            if t.thesis is not None
            else None
        ),
        "pivot": fmt(t.pivot),
        "rational_form": _rational_form(t),
        "denominator": fmt(t.denominator),
        "second_elimination": _second_status(verdict),
        "identity": emit_identity(t),
        "declaratives": [
            {"point": nm, "definition": format_expr(d, names)}
            for nm, d in t.declaratives
        ],
        "notes": list(t.notes),
        "note": t.reason_note,
    }
    if show_ideal and order is not None:
        obj["ideal"] = [fmt(_primitive(g, order)) for g in t.generators]
        obj["second_ideal"] = (
            [fmt(_primitive(g, order)) for g in t.second_generators]
            if t.second_generators is not None
            else None
        )
    return obj


def emit_trace(
    verdict: ProverVerdict, format: str = "text", show_ideal: bool = False
) -> ProofDocument:
    """Render a verdict in one of the supported formats."""
    if format not in FORMATS:
        raise AlgebraError(f"unknown proof format {format!r}")
    banner = _banner(verdict)

    if format == "json":
        payload = _json_payload(verdict, show_ideal)
        lines = tuple(json.dumps(payload, indent=2).splitlines())
        return ProofDocument("json", lines, banner)

    items = _narration(verdict, show_ideal)
    if format == "text":
        return ProofDocument("text", tuple(text for _, text in items), banner)

    lines = ["\\begin{enumerate}"]
    for kind, text in items:
        if kind == "s":
            lines.append(f"\\item {text}")
        elif kind == "fr":
            lines.append(f"\\item ${text} \\in \\mathbb{{R}}$")
        else:
            lines.append(f"\\item ${text}$")
    lines.append("\\end{enumerate}")
    return ProofDocument("latex", tuple(lines), banner)
