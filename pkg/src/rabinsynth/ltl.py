"""Restricted temporal-pattern frontend.

The accepted language is a small set of shapes over boolean state formulas:

* ``b``                   -- a boolean constraint on the first letter
* ``G b``                 -- invariant
* ``G F b``               -- recurrence
* ``F G b``               -- persistence
* ``G (b1 -> X b2)``      -- one-step response
* ``G (b1 -> F b2)``      -- eventual response

Conjuncts may be joined with a top-level ``&``; each piece is compiled to a
small deterministic automaton.  Anything outside these shapes (``U``, nested
temporal operators, ...) is rejected with a pointer to the automaton-based
input path, which accepts arbitrary Rabin-index-1 properties.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Literal, Union

from .automata import (
    Buchi,
    CoBuchi,
    CONJUNCT_KINDS,
    OmegaAutomaton,
    OnePairRabin,
    Safety,
    decompose_rabin,
    transition_table,
)
from .boolexpr import (
    And,
    ApTable,
    BoolExpr,
    Iff,
    Implies,
    Lit,
    Not,
    Or,
    TRUE,
    Var,
    format_expr,
)


class LtlError(Exception):
    pass


class UnsupportedFragment(LtlError):
    def __init__(self, operator: str):
        self.operator = operator
        super().__init__(
            f"operator {operator!r} is outside the supported pattern fragment; "
            "supply this conjunct as an explicit automaton instead")


class UnsupportedAcceptance(LtlError):
    pass


@dataclass(frozen=True)
class StateInit:
    condition: BoolExpr


@dataclass(frozen=True)
class Always:
    condition: BoolExpr


@dataclass(frozen=True)
class Recurrence:
    condition: BoolExpr


@dataclass(frozen=True)
class Persistence:
    condition: BoolExpr


@dataclass(frozen=True)
class NextResponse:
    trigger: BoolExpr
    reaction: BoolExpr


@dataclass(frozen=True)
class Response:
    trigger: BoolExpr
    reaction: BoolExpr


PatternFormula = Union[
    StateInit, Always, Recurrence, Persistence, NextResponse, Response
]


# ---------------------------------------------------------------------------
# tokenizer / parser

_TEMPORAL = {"G", "F", "X", "U"}
_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|<->|->|[!&|()]|\S")


def _tokenize(text: str) -> list[str]:
    tokens = []
    for tok in _TOKEN.findall(text):
        if re.fullmatch(r"[GFXU]+", tok):
            tokens.extend(tok)  # allow the compact forms GF / FG
        elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*|<->|->|[!&|()]", tok):
            tokens.append(tok)
        else:
            raise LtlError(f"unexpected character {tok!r}")
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> str | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise LtlError("unexpected end of formula")
        if expected is not None and tok != expected:
            raise LtlError(f"expected {expected!r}, got {tok!r}")
        self.pos += 1
        return tok

    # boolean grammar: <-> binds loosest, then ->, |, &, !
    def bool_expr(self) -> BoolExpr:
        expr = self.bool_implies()
        while self.peek() == "<->":
            self.take()
            expr = Iff(expr, self.bool_implies())
        return expr

    def bool_implies(self) -> BoolExpr:
        expr = self.bool_or()
        if self.peek() == "->":
            self.take()
            return Implies(expr, self.bool_implies())
        return expr

    def bool_or(self) -> BoolExpr:
        expr = self.bool_and()
        while self.peek() == "|":
            self.take()
            expr = Or(expr, self.bool_and())
        return expr

    def bool_and(self) -> BoolExpr:
        expr = self.bool_unary()
        while self.peek() == "&":
            self.take()
            expr = And(expr, self.bool_unary())
        return expr

    def bool_unary(self) -> BoolExpr:
        tok = self.take()
        if tok == "!":
            return Not(self.bool_unary())
        if tok == "(":
            expr = self.bool_expr()
            self.take(")")
            return expr
        if tok == "true":
            return Lit(True)
        if tok == "false":
            return Lit(False)
        if tok in _TEMPORAL:
            raise UnsupportedFragment(tok)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return Var(tok)
        raise LtlError(f"unexpected token {tok!r}")

    def pattern(self) -> PatternFormula:
        tok = self.peek()
        if tok == "G":
            self.take()
            if self.peek() == "F":
                self.take()
                return Recurrence(self.bool_unary())
            if self.peek() == "(":
                return self.g_parenthesised()
            return Always(self.bool_unary())
        if tok == "F":
            self.take()
            if self.peek() == "G":
                self.take()
                return Persistence(self.bool_unary())
            raise UnsupportedFragment("F")
        if tok in ("X", "U"):
            raise UnsupportedFragment(tok)
        return StateInit(self.bool_expr())

    def g_parenthesised(self) -> PatternFormula:
        # G ( ... ) is an invariant unless the parenthesised formula is a
        # top-level implication whose consequent starts with X or F.
        self.take("(")
        left = self.bool_or()
        if self.peek() == "->" and self.peek(1) in ("X", "F"):
            self.take()
            op = self.take()
            right = self.bool_expr()
            self.take(")")
            return NextResponse(left, right) if op == "X" else Response(left, right)
        # fall back to the boolean continuation of the invariant body
        expr = left
        if self.peek() == "->":
            self.take()
            expr = Implies(expr, self.bool_implies())
        while self.peek() == "<->":
            self.take()
            expr = Iff(expr, self.bool_implies())
        self.take(")")
        return Always(expr)


def _split_top_level(tokens: list[str]) -> list[list[str]]:
    segments: list[list[str]] = [[]]
    depth = 0
    for tok in tokens:
        if tok == "(":
            depth += 1
        elif tok == ")":
            depth -= 1
            if depth < 0:
                raise LtlError("unbalanced parentheses")
        if tok == "&" and depth == 0:
            segments.append([])
        else:
            segments[-1].append(tok)
    if depth != 0:
        raise LtlError("unbalanced parentheses")
    return segments


def parse_ltl(text: str) -> list[PatternFormula]:
    """Parse a conjunction of patterns; a top-level ``&`` separates conjuncts."""
    tokens = _tokenize(text)
    if not tokens:
        raise LtlError("empty formula")
    conjuncts = []
    for segment in _split_top_level(tokens):
        if not segment:
            raise LtlError("empty conjunct")
        parser = _Parser(segment)
        pattern = parser.pattern()
        if parser.pos != len(segment):
            leftover = segment[parser.pos]
            if leftover in _TEMPORAL:
                raise UnsupportedFragment(leftover)
            raise LtlError(f"unexpected token {leftover!r} after pattern")
        conjuncts.append(pattern)
    return conjuncts


def _amp_at_depth_zero(s: str) -> bool:
    depth = 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "&" and depth == 0:
            return True
    return False


def format_pattern(pattern: PatternFormula) -> str:
    """Inverse of :func:`parse_ltl` on single conjuncts."""
    def atom(b: BoolExpr) -> str:
        s = format_expr(b)
        return s if isinstance(b, (Var, Lit, Not)) else "(" + s + ")"

    match pattern:
        case StateInit(b):
            s = format_expr(b)
            # an unparenthesised & would be read as a conjunct separator
            return "(" + s + ")" if _amp_at_depth_zero(s) else s
        case Always(b):
            return "G " + atom(b)
        case Recurrence(b):
            return "G F " + atom(b)
        case Persistence(b):
            return "F G " + atom(b)
        case NextResponse(t, r):
            left = format_expr(t)
            if isinstance(t, (Implies, Iff)):
                left = "(" + left + ")"
            return f"G ({left} -> X {format_expr(r)})"
        case Response(t, r):
            left = format_expr(t)
            if isinstance(t, (Implies, Iff)):
                left = "(" + left + ")"
            return f"G ({left} -> F {format_expr(r)})"
    raise TypeError(f"not a pattern formula: {pattern!r}")


# ---------------------------------------------------------------------------
# compilation to automata


def compile_pattern(pattern: PatternFormula, table: ApTable) -> OmegaAutomaton:
    """Compile a pattern into a deterministic total automaton whose lasso
    language matches the pattern semantics."""
    true_ = TRUE

    def edges(*rows):
        return tuple(tuple(row) for row in rows)

    match pattern:
        case StateInit(b):
            # 0: reads the first letter; 1: satisfied; 2: failed (both absorbing)
            return OmegaAutomaton(
                n_states=3, initial=0,
                edges=edges(
                    [(b, 1), (Not(b), 2)],
                    [(true_, 1)],
                    [(true_, 2)],
                ),
                acceptance=Buchi(frozenset({1})))
        case Always(b):
            # 0: invariant holds so far; 1: failure sink
            return OmegaAutomaton(
                n_states=2, initial=0,
                edges=edges(
                    [(b, 0), (Not(b), 1)],
                    [(true_, 1)],
                ),
                acceptance=Buchi(frozenset({0})))
        case Recurrence(b):
            # 1 is entered exactly on letters satisfying the condition
            return OmegaAutomaton(
                n_states=2, initial=0,
                edges=edges(
                    [(Not(b), 0), (b, 1)],
                    [(Not(b), 0), (b, 1)],
                ),
                acceptance=Buchi(frozenset({1})))
        case Persistence(b):
            return OmegaAutomaton(
                n_states=2, initial=0,
                edges=edges(
                    [(Not(b), 0), (b, 1)],
                    [(Not(b), 0), (b, 1)],
                ),
                acceptance=CoBuchi(frozenset({0})))
        case NextResponse(t, r):
            # 0: no obligation; 1: the previous letter raised one; 2: failure sink
            return OmegaAutomaton(
                n_states=3, initial=0,
                edges=edges(
                    [(Not(t), 0), (t, 1)],
                    [(And(r, Not(t)), 0), (And(r, t), 1), (Not(r), 2)],
                    [(true_, 2)],
                ),
                acceptance=Buchi(frozenset({0, 1})))
        case Response(t, r):
            # 0: idle; 1: waiting for the reaction
            return OmegaAutomaton(
                n_states=2, initial=0,
                edges=edges(
                    [(Or(Not(t), r), 0), (And(t, Not(r)), 1)],
                    [(r, 0), (Not(r), 1)],
                ),
                acceptance=Buchi(frozenset({0})))
    raise TypeError(f"not a pattern formula: {pattern!r}")


# ---------------------------------------------------------------------------
# conjunct classification


Role = Literal["assumption", "guarantee"]
Kind = Literal["buchi", "cobuchi"]


@dataclass(frozen=True)
class ClassifiedConjunct:
    automaton: OmegaAutomaton
    role: Role
    kind: Kind

    def __post_init__(self) -> None:
        expected = Buchi if self.kind == "buchi" else CoBuchi
        if not isinstance(self.automaton.acceptance, expected):
            raise ValueError("conjunct kind does not match the acceptance tag")


def failure_sinks(aut: OmegaAutomaton, table: ApTable) -> frozenset[int]:
    """Absorbing states of a safety automaton, read as violation markers.

    Safety inputs must encode violations as absorbing sink states; a safety
    automaton whose absorbing states mean something else has to be supplied
    with an explicit Buchi acceptance instead.
    """
    tt = transition_table(aut, table)
    return frozenset(
        s for s in range(aut.n_states) if all(t == s for t in tt[s]))


def normalize(aut: OmegaAutomaton, role: Role, table: ApTable) -> list[ClassifiedConjunct]:
    """Express one conjunct through Buchi/co-Buchi conjuncts of equal language.

    Safety automata become Buchi automata accepting everywhere outside their
    failure sinks; one-pair Rabin automata split into a co-Buchi and a Buchi
    part; Buchi and co-Buchi conjuncts pass through unchanged.
    """
    acc = aut.acceptance
    if isinstance(acc, Safety):
        sinks = failure_sinks(aut, table)
        buchi = OmegaAutomaton(
            aut.n_states, aut.initial, aut.edges,
            Buchi(frozenset(range(aut.n_states)) - sinks))
        return [ClassifiedConjunct(buchi, role, "buchi")]
    if isinstance(acc, Buchi):
        return [ClassifiedConjunct(aut, role, "buchi")]
    if isinstance(acc, CoBuchi):
        return [ClassifiedConjunct(aut, role, "cobuchi")]
    if isinstance(acc, OnePairRabin):
        co, bu = decompose_rabin(aut)
        return [
            ClassifiedConjunct(co, role, "cobuchi"),
            ClassifiedConjunct(bu, role, "buchi"),
        ]
    raise UnsupportedAcceptance(
        f"conjuncts must be one of {[k.__name__ for k in CONJUNCT_KINDS]}, "
        f"got {type(acc).__name__}")
