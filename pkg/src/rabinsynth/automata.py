"""Deterministic, total omega-automata and lasso-word acceptance.

States are dense 0-based indices.  Every automaton is expected to be
deterministic and total over the proposition table it is evaluated against:
for each state and each concrete letter exactly one outgoing guard holds.
Words are handled in ultimately-periodic (lasso) form, which suffices to
decide all acceptance conditions implemented here.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

from .boolexpr import ApTable, BoolExpr, evaluate


@dataclass(frozen=True)
class Safety:
    """All infinite runs accept.  Violations of a safety property are modelled
    structurally, by an absorbing failure sink in the transition graph."""


@dataclass(frozen=True)
class Buchi:
    """Accept iff some accepting state is visited infinitely often."""

    accepting: frozenset[int]


@dataclass(frozen=True)
class CoBuchi:
    """Accept iff every rejecting state is visited only finitely often."""

    rejecting: frozenset[int]


@dataclass(frozen=True)
class OnePairRabin:
    """Accept iff the run eventually stays inside ``persistent`` and visits
    ``recurrent`` infinitely often."""

    persistent: frozenset[int]
    recurrent: frozenset[int]


@dataclass(frozen=True)
class Parity:
    """Accept iff the maximum colour visited infinitely often is even."""

    colours: tuple[int, ...]
    n_colours: int


@dataclass(frozen=True)
class GeneralizedBuchi:
    """Accept iff every member set is visited infinitely often."""

    sets: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class Streett:
    """Accept iff no pair behaves like an accepting Rabin pair: for each pair,
    the run leaves ``persistent`` infinitely often or avoids ``recurrent``
    from some point on."""

    pairs: tuple[tuple[frozenset[int], frozenset[int]], ...]


@dataclass(frozen=True)
class Muller:
    """Accept iff the set of states visited infinitely often is listed."""

    accept_sets: tuple[frozenset[int], ...]


Acceptance = Union[
    Safety, Buchi, CoBuchi, OnePairRabin, Parity, GeneralizedBuchi, Streett, Muller
]

#: Acceptance kinds allowed for specification conjuncts.  The remaining kinds
#: exist only so that lasso evaluation covers every classical condition.
CONJUNCT_KINDS = (Safety, Buchi, CoBuchi, OnePairRabin)


@dataclass(frozen=True)
class OmegaAutomaton:
    """Deterministic omega-automaton with guard-labelled edges.

    ``edges[s]`` lists ``(guard, target)`` pairs; the guards of one state must
    partition the letter space of the table the automaton is used with.
    """

    n_states: int
    initial: int
    edges: tuple[tuple[tuple[BoolExpr, int], ...], ...]
    acceptance: Acceptance


@dataclass(frozen=True)
class Lasso:
    """The ultimately periodic word ``stem . loop^omega``."""

    stem: tuple[int, ...]
    loop: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")

    def letter_at(self, i: int) -> int:
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]


# Validation issues are plain values so that callers can collect all of them.


@dataclass(frozen=True)
class NondeterministicEdge:
    state: int
    letter: int


@dataclass(frozen=True)
class MissingEdge:
    state: int
    letter: int


@dataclass(frozen=True)
class RangeError:
    detail: str


ValidationIssue = Union[NondeterministicEdge, MissingEdge, RangeError]


class ValidationError(Exception):
    """Raised when an automaton is rejected by :func:`validate`."""

    def __init__(self, issues: list[ValidationIssue]):
        self.issues = issues
        super().__init__(f"invalid automaton: {issues[:5]!r}"
                         + (" ..." if len(issues) > 5 else ""))


class WrongAcceptanceKind(Exception):
    pass


def acceptance_state_sets(acc: Acceptance) -> tuple[frozenset[int], ...]:
    """All state sets referenced by an acceptance condition."""
    match acc:
        case Safety():
            return ()
        case Buchi(accepting):
            return (accepting,)
        case CoBuchi(rejecting):
            return (rejecting,)
        case OnePairRabin(persistent, recurrent):
            return (persistent, recurrent)
        case Parity():
            return ()
        case GeneralizedBuchi(sets):
            return tuple(sets)
        case Streett(pairs):
            return tuple(s for pair in pairs for s in pair)
        case Muller(accept_sets):
            return tuple(accept_sets)
    raise TypeError(f"not an acceptance condition: {acc!r}")


def accepts_inf(acc: Acceptance, inf: frozenset[int]) -> bool:
    """Verdict of an acceptance condition on the infinitely-visited state set."""
    match acc:
        case Safety():
            return True
        case Buchi(accepting):
            return bool(inf & accepting)
        case CoBuchi(rejecting):
            return not inf & rejecting
        case OnePairRabin(persistent, recurrent):
            return inf <= persistent and bool(inf & recurrent)
        case Parity(colours, _):
            return max(colours[s] for s in inf) % 2 == 0
        case GeneralizedBuchi(sets):
            return all(inf & s for s in sets)
        case Streett(pairs):
            return all(not (inf <= p) or not (inf & r) for p, r in pairs)
        case Muller(accept_sets):
            return inf in accept_sets
    raise TypeError(f"not an acceptance condition: {acc!r}")


def validate(aut: OmegaAutomaton, table: ApTable) -> list[ValidationIssue]:
    """Check determinism, totality and acceptance-set ranges.

    Returns the empty list iff the automaton is usable with ``table``.
    """
    issues: list[ValidationIssue] = []
    n = aut.n_states
    if n <= 0:
        return [RangeError("automaton must have at least one state")]
    if not 0 <= aut.initial < n:
        issues.append(RangeError(f"initial state {aut.initial} out of range"))
    if len(aut.edges) != n:
        return issues + [RangeError(
            f"expected {n} edge lists, found {len(aut.edges)}")]
    for s, state_edges in enumerate(aut.edges):
        for _, target in state_edges:
            if not 0 <= target < n:
                issues.append(RangeError(f"edge target {target} of state {s} out of range"))
    for ss in acceptance_state_sets(aut.acceptance):
        for s in ss:
            if not 0 <= s < n:
                issues.append(RangeError(f"acceptance set member {s} out of range"))
    if isinstance(aut.acceptance, Parity):
        if len(aut.acceptance.colours) != n:
            issues.append(RangeError("parity colour map must cover every state"))
        else:
            for s, c in enumerate(aut.acceptance.colours):
                if not 0 <= c < aut.acceptance.n_colours:
                    issues.append(RangeError(f"colour {c} of state {s} out of range"))
    if issues:
        return issues
    for s in range(n):
        for letter in table.letters():
            matches = sum(
                1 for guard, _ in aut.edges[s] if evaluate(guard, letter, table))
            if matches == 0:
                issues.append(MissingEdge(s, letter))
            elif matches > 1:
                issues.append(NondeterministicEdge(s, letter))
    return issues


def step(aut: OmegaAutomaton, state: int, letter: int, table: ApTable) -> int:
    """Unique successor of ``state`` under ``letter``; assumes a valid automaton."""
    for guard, target in aut.edges[state]:
        if evaluate(guard, letter, table):
            return target
    raise ValidationError([MissingEdge(state, letter)])


def transition_table(aut: OmegaAutomaton, table: ApTable) -> list[list[int]]:
    """Dense ``state x letter -> target`` table; raises on missing edges."""
    return [
        [step(aut, s, letter, table) for letter in table.letters()]
        for s in range(aut.n_states)
    ]


def run_stem(aut: OmegaAutomaton, word: tuple[int, ...], table: ApTable) -> int:
    state = aut.initial
    for letter in word:
        state = step(aut, state, letter, table)
    return state


def infinity_set(aut: OmegaAutomaton, lasso: Lasso, table: ApTable) -> frozenset[int]:
    """States visited infinitely often by the unique run on the lasso word.

    Iterates the loop from the post-stem state until the state at a loop
    boundary repeats (guaranteed within ``n_states`` passes); the states
    entered during the repeating cycle are exactly the infinitely visited ones.
    """
    state = run_stem(aut, lasso.stem, table)
    boundary_pass = {state: 0}
    entered_per_pass: list[list[int]] = []
    current = state
    while True:
        entered = []
        for letter in lasso.loop:
            current = step(aut, current, letter, table)
            entered.append(current)
        entered_per_pass.append(entered)
        if current in boundary_pass:
            first = boundary_pass[current]
            return frozenset(
                s for states in entered_per_pass[first:] for s in states)
        boundary_pass[current] = len(entered_per_pass)


def eval_lasso(aut: OmegaAutomaton, lasso: Lasso, table: ApTable) -> bool:
    """Acceptance verdict of the automaton on the lasso word."""
    return accepts_inf(aut.acceptance, infinity_set(aut, lasso, table))


def decompose_rabin(aut: OmegaAutomaton) -> tuple[OmegaAutomaton, OmegaAutomaton]:
    """Split a one-pair Rabin automaton into conjunctive parts.

    Returns automata over the same transition structure: a co-Buchi one whose
    rejecting set is the complement of the persistence set, and a Buchi one
    accepting on the recurrence set.  A word is Rabin-accepted iff both parts
    accept it.
    """
    if not isinstance(aut.acceptance, OnePairRabin):
        raise WrongAcceptanceKind(
            f"expected one-pair Rabin acceptance, got {type(aut.acceptance).__name__}")
    everything = frozenset(range(aut.n_states))
    co = replace(aut, acceptance=CoBuchi(everything - aut.acceptance.persistent))
    bu = replace(aut, acceptance=Buchi(aut.acceptance.recurrent))
    return co, bu
