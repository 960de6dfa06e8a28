"""Boolean formulas over named atomic propositions.

A *letter* is one truth assignment to all propositions of an :class:`ApTable`,
encoded as an integer bitmask: bit ``i`` carries the value of ``table.names[i]``.
Automata guards, pattern formulas and machine alphabets all share this encoding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class ApTable:
    """Ordered, duplicate-free list of proposition names.

    The order fixes the bitmask encoding of letters and is shared by every
    automaton taking part in one synthesis problem.
    """

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        seen: set[str] = set()
        for name in self.names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid proposition name: {name!r}")
            if name in seen:
                raise ValueError(f"duplicate proposition name: {name!r}")
            seen.add(name)
        object.__setattr__(self, "_bit", {n: i for i, n in enumerate(self.names)})

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def n_letters(self) -> int:
        return 1 << len(self.names)

    def letters(self) -> range:
        return range(1 << len(self.names))

    def bit(self, name: str) -> int:
        try:
            return self._bit[name]  # type: ignore[attr-defined]
        except KeyError:
            raise KeyError(f"unknown proposition: {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._bit  # type: ignore[attr-defined]

    def letter(self, present: Iterable[str]) -> int:
        """Encode the set of true propositions as a letter bitmask."""
        mask = 0
        for name in present:
            mask |= 1 << self.bit(name)
        return mask

    def letter_names(self, letter: int) -> tuple[str, ...]:
        """Decode a letter into the alphabetically sorted true propositions."""
        return tuple(sorted(n for i, n in enumerate(self.names) if letter >> i & 1))


class BoolExpr:
    """Base class of boolean formula nodes. Instances are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class Lit(BoolExpr):
    value: bool


@dataclass(frozen=True)
class Var(BoolExpr):
    name: str


@dataclass(frozen=True)
class Not(BoolExpr):
    arg: BoolExpr


@dataclass(frozen=True)
class And(BoolExpr):
    left: BoolExpr
    right: BoolExpr


@dataclass(frozen=True)
class Or(BoolExpr):
    left: BoolExpr
    right: BoolExpr


@dataclass(frozen=True)
class Implies(BoolExpr):
    left: BoolExpr
    right: BoolExpr


@dataclass(frozen=True)
class Iff(BoolExpr):
    left: BoolExpr
    right: BoolExpr


TRUE = Lit(True)
FALSE = Lit(False)


def evaluate(expr: BoolExpr, letter: int, table: ApTable) -> bool:
    """Evaluate ``expr`` under the assignment encoded by ``letter``."""
    match expr:
        case Lit(value):
            return value
        case Var(name):
            return bool(letter >> table.bit(name) & 1)
        case Not(arg):
            return not evaluate(arg, letter, table)
        case And(left, right):
            return evaluate(left, letter, table) and evaluate(right, letter, table)
        case Or(left, right):
            return evaluate(left, letter, table) or evaluate(right, letter, table)
        case Implies(left, right):
            return not evaluate(left, letter, table) or evaluate(right, letter, table)
        case Iff(left, right):
            return evaluate(left, letter, table) == evaluate(right, letter, table)
    raise TypeError(f"not a boolean expression: {expr!r}")


def free_names(expr: BoolExpr) -> Iterator[str]:
    match expr:
        case Lit():
            return
        case Var(name):
            yield name
        case Not(arg):
            yield from free_names(arg)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            yield from free_names(l)
            yield from free_names(r)
        case _:
            raise TypeError(f"not a boolean expression: {expr!r}")


def minterm(letter: int, table: ApTable) -> BoolExpr:
    """The conjunction of literals satisfied by exactly ``letter``."""
    expr: BoolExpr | None = None
    for i, name in enumerate(table.names):
        lit: BoolExpr = Var(name) if letter >> i & 1 else Not(Var(name))
        expr = lit if expr is None else And(expr, lit)
    return TRUE if expr is None else expr


def any_of(exprs: Iterable[BoolExpr]) -> BoolExpr:
    """Disjunction of the given formulas; false if empty."""
    out: BoolExpr | None = None
    for e in exprs:
        out = e if out is None else Or(out, e)
    return FALSE if out is None else out


# Precedence levels used by the printer; parenthesise a child whenever its
# level is below what its context requires.
_PREC = {Iff: 0, Implies: 1, Or: 2, And: 3, Not: 4, Var: 5, Lit: 5}


def format_expr(expr: BoolExpr) -> str:
    """Render with minimal parentheses; the output reparses to the same tree."""
    return _fmt(expr, 0)


def _fmt(expr: BoolExpr, min_level: int) -> str:
    match expr:
        case Lit(value):
            s = "true" if value else "false"
        case Var(name):
            s = name
        case Not(arg):
            s = "!" + _fmt(arg, 4)
        case And(l, r):
            s = _fmt(l, 3) + " & " + _fmt(r, 4)
        case Or(l, r):
            s = _fmt(l, 2) + " | " + _fmt(r, 3)
        case Implies(l, r):
            # right-associative
            s = _fmt(l, 2) + " -> " + _fmt(r, 1)
        case Iff(l, r):
            s = _fmt(l, 0) + " <-> " + _fmt(r, 1)
        case _:
            raise TypeError(f"not a boolean expression: {expr!r}")
    if _PREC[type(expr)] < min_level:
        return "(" + s + ")"
    return s
