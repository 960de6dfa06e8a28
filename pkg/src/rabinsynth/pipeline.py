"""End-to-end synthesis: normalisation, product, game, extraction, checking.

The pipeline also hosts the two semantic reference points used throughout the
test suite: :func:`lasso_oracle`, which evaluates the implication shape
conjunct by conjunct on a lasso word, and :func:`differential_test`, which
compares the parity product against that oracle over all small lassos.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Union

import numpy as np

from .automata import Lasso, OmegaAutomaton, eval_lasso
from .boolexpr import ApTable
from .game import SYSTEM, SynthesisGame, build_game
from .hoa import parse_hoa
from .ltl import ClassifiedConjunct, Role, compile_pattern, normalize, parse_ltl
from .mealy import MealyMachine
from .graphs import find_cycle_through, strongly_connected_components
from .product import (
    CapacityExceeded,
    NormalizedSpec,
    ParityAutomaton,
    build_product,
    DEFAULT_STATE_LIMIT,
)
from .solvers import Solution, solve_zielonka


class NormalizationError(Exception):
    """A conjunct source could not be turned into a classified automaton."""


class NotRealizable(Exception):
    pass


class IncompatibleAlphabets(Exception):
    pass


class InternalCertificationFailure(Exception):
    """An extracted machine failed verification; always a bug, never silent."""


@dataclass(frozen=True)
class ConjunctSource:
    """One assumption or guarantee: an inline pattern formula, an inline
    automaton document, or a path to an automaton file."""

    ltl: str | None = None
    hoa: str | None = None
    hoa_file: str | None = None

    def __post_init__(self) -> None:
        given = sum(x is not None for x in (self.ltl, self.hoa, self.hoa_file))
        if given != 1:
            raise ValueError(
                "exactly one of 'ltl', 'hoa' or 'hoa_file' must be given")


@dataclass(frozen=True)
class SpecProblem:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    assumptions: tuple[ConjunctSource, ...]
    guarantees: tuple[ConjunctSource, ...]


def _pattern_names(pattern) -> set[str]:
    from .boolexpr import free_names
    from .ltl import NextResponse, Response

    if isinstance(pattern, (NextResponse, Response)):
        return set(free_names(pattern.trigger)) | set(free_names(pattern.reaction))
    return set(free_names(pattern.condition))


def _conjunct_automata(
    source: ConjunctSource,
    table: ApTable,
) -> list[OmegaAutomaton]:
    if source.ltl is not None:
        patterns = parse_ltl(source.ltl)
        for pattern in patterns:
            unknown = sorted(n for n in _pattern_names(pattern) if n not in table)
            if unknown:
                raise NormalizationError(
                    f"formula uses propositions outside the problem: {unknown}")
        return [compile_pattern(p, table) for p in patterns]
    text = source.hoa
    if text is None:
        text = Path(source.hoa_file).read_text(encoding="utf-8")
    aut, own_table = parse_hoa(text)
    unknown = sorted(n for n in own_table.names if n not in table)
    if unknown:
        raise NormalizationError(
            f"automaton uses propositions outside the problem: {unknown}")
    return [aut]


def normalize_problem(problem: SpecProblem) -> NormalizedSpec:
    """Resolve all conjunct sources and classify them into the four sets."""
    if set(problem.inputs) & set(problem.outputs):
        raise NormalizationError("input and output propositions must be disjoint")
    table = ApTable(tuple(problem.inputs) + tuple(problem.outputs))
    classified: list[ClassifiedConjunct] = []
    for role, sources in (("assumption", problem.assumptions),
                          ("guarantee", problem.guarantees)):
        for source in sources:
            try:
                automata = _conjunct_automata(source, table)
                for aut in automata:
                    classified.extend(normalize(aut, role, table))  # type: ignore[arg-type]
            except NormalizationError:
                raise
            except Exception as exc:
                raise NormalizationError(f"bad {role} conjunct: {exc}") from exc
    def pick(role: Role, kind: str) -> tuple[OmegaAutomaton, ...]:
        return tuple(c.automaton for c in classified
                     if c.role == role and c.kind == kind)

    return NormalizedSpec(
        inputs=tuple(problem.inputs),
        outputs=tuple(problem.outputs),
        buchi_assumptions=pick("assumption", "buchi"),
        cobuchi_assumptions=pick("assumption", "cobuchi"),
        buchi_guarantees=pick("guarantee", "buchi"),
        cobuchi_guarantees=pick("guarantee", "cobuchi"),
    )


# ---------------------------------------------------------------------------
# outcome types


@dataclass(frozen=True)
class SynthesisStats:
    product_states: int
    game_env_vertices: int
    game_system_vertices: int
    machine_states: int
    colours_used: tuple[int, ...]
    solve_seconds: float


@dataclass(frozen=True)
class Realizable:
    machine: MealyMachine
    stats: SynthesisStats


@dataclass(frozen=True)
class Unrealizable:
    """Environment's positional counterstrategy on its reachable winning slice:
    a map from Environment vertices to the input letter to play."""

    counterstrategy: Mapping[int, int]
    initial_vertex: int
    stats: SynthesisStats


SynthesisOutcome = Union[Realizable, Unrealizable]


# ---------------------------------------------------------------------------
# machine extraction and verification


def extract_mealy(game: SynthesisGame, solution: Solution) -> MealyMachine:
    """Machine induced by the System strategy on its reachable winning slice."""
    if game.initial not in solution.system_region:
        raise NotRealizable("initial vertex is not winning for the System")
    inputs = game.table.names[:game.input_bits]
    outputs = game.table.names[game.input_bits:]
    index = {game.initial: 0}
    order = [game.initial]
    rows: list[tuple[tuple[int, int], ...]] = []
    position = 0
    while position < len(order):
        state_vertex = order[position]
        position += 1
        row = []
        for x in range(game.n_inputs):
            middle = game.env_move(state_vertex, x)
            y = solution.system_strategy[middle]
            target_vertex = game.system_move(middle, y)
            target = index.get(target_vertex)
            if target is None:
                target = len(order)
                index[target_vertex] = target
                order.append(target_vertex)
            row.append((target, y))
        rows.append(tuple(row))
    return MealyMachine(
        inputs=inputs,
        outputs=outputs,
        n_states=len(order),
        initial=0,
        transitions=tuple(rows),
    )


@dataclass(frozen=True)
class Violation:
    lasso: Lasso


def verify_mealy(machine: MealyMachine, pa: ParityAutomaton) -> Violation | None:
    """Model-check the machine against the parity product.

    Explores the synchronous product of machine and automaton and reports a
    concrete lasso witness whenever some reachable cycle has an odd maximum
    colour (checked per odd colour on the subgraph of colours up to it).
    """
    if machine.inputs + machine.outputs != pa.table.names:
        raise IncompatibleAlphabets(
            "machine propositions do not match the specification alphabet")
    input_bits = len(machine.inputs)
    n_inputs = 1 << input_bits

    start = (machine.initial, pa.initial)
    index = {start: 0}
    order = [start]
    edges: list[list[tuple[int, int]]] = []  # node -> [(letter, node)]
    position = 0
    while position < len(order):
        m, q = order[position]
        position += 1
        row = []
        for x in range(n_inputs):
            m2, y = machine.transitions[m][x]
            letter = x | y << input_bits
            q2 = pa.transitions[q][letter]
            node = (m2, q2)
            target = index.get(node)
            if target is None:
                target = len(order)
                index[node] = target
                order.append(node)
            row.append((letter, target))
        edges.append(row)

    colour = [pa.colours[q] for _, q in order]
    for d in (1, 3):
        sub = [v for v in range(len(order)) if colour[v] <= d]
        sub_set = set(sub)

        def sub_succ(v: int) -> list[int]:
            return [t for _, t in edges[v] if t in sub_set]

        for component in strongly_connected_components(sub, sub_succ):
            members = set(component)
            witnesses = [v for v in component if colour[v] == d]
            if not witnesses:
                continue
            if len(component) == 1 and component[0] not in sub_succ(component[0]):
                continue
            entry = min(witnesses)
            cycle = find_cycle_through(entry, members.__contains__, sub_succ)
            assert cycle is not None
            return Violation(_witness_lasso(edges, entry, cycle))
    return None


def _witness_lasso(
    edges: list[list[tuple[int, int]]],
    entry: int,
    cycle: list[int],
) -> Lasso:
    # stem: breadth-first path from the initial node to the cycle entry
    parents: dict[int, tuple[int, int]] = {}
    frontier = [0]
    seen = {0}
    while entry not in seen:
        next_frontier = []
        for v in frontier:
            for letter, t in edges[v]:
                if t not in seen:
                    seen.add(t)
                    parents[t] = (v, letter)
                    next_frontier.append(t)
        frontier = next_frontier
    stem_letters: list[int] = []
    cursor = entry
    while cursor != 0:
        cursor, letter = parents[cursor]
        stem_letters.append(letter)
    stem_letters.reverse()

    loop_letters = []
    for i, v in enumerate(cycle):
        succ = cycle[(i + 1) % len(cycle)]
        letter = next(l for l, t in edges[v] if t == succ)
        loop_letters.append(letter)
    return Lasso(tuple(stem_letters), tuple(loop_letters))


# ---------------------------------------------------------------------------
# lasso oracle and the exhaustive differential comparison


def lasso_oracle(spec: NormalizedSpec, lasso: Lasso) -> bool:
    """Implication-shaped verdict evaluated conjunct by conjunct."""
    table = spec.table()
    assumptions = spec.buchi_assumptions + spec.cobuchi_assumptions
    guarantees = spec.buchi_guarantees + spec.cobuchi_guarantees
    if any(not eval_lasso(aut, lasso, table) for aut in assumptions):
        return True
    return all(eval_lasso(aut, lasso, table) for aut in guarantees)


def product_accepts(pa: ParityAutomaton, lasso: Lasso) -> bool:
    """Run the product on a lasso; accept iff the repeating cycle's maximum
    colour is even (cycle detection keyed on the loop-boundary state)."""
    state = pa.initial
    for letter in lasso.stem:
        state = pa.transitions[state][letter]
    boundary = {state: 0}
    per_pass: list[list[int]] = []
    current = state
    while True:
        entered = []
        for letter in lasso.loop:
            current = pa.transitions[current][letter]
            entered.append(current)
        per_pass.append(entered)
        if current in boundary:
            first = boundary[current]
            cycle_states = {s for states in per_pass[first:] for s in states}
            return max(pa.colours[s] for s in cycle_states) % 2 == 0
        boundary[current] = len(per_pass)


@dataclass(frozen=True)
class DifferentialReport:
    checked: int
    mismatches: int


# highest set bit of a 5-bit colour mask, evenness table
_HIGH_EVEN = np.array(
    [False] + [((m.bit_length() - 1) % 2 == 0) for m in range(1, 32)],
    dtype=bool)


def differential_test(
    spec: NormalizedSpec,
    max_stem: int,
    max_loop: int,
    *,
    max_aps: int = 3,
    state_limit: int = DEFAULT_STATE_LIMIT,
) -> DifferentialReport:
    """Compare product verdicts against the conjunct oracle on every lasso
    with stem length up to ``max_stem`` and loop length up to ``max_loop``.

    Verdicts are computed for all stems and loops simultaneously: one bit
    signature per product state records its colour and the acceptance-set
    memberships of every conjunct component, and pointer doubling aggregates
    those signatures over the repeating cycle of each loop word.
    """
    if len(spec.inputs) + len(spec.outputs) > max_aps:
        raise CapacityExceeded(
            f"differential enumeration is limited to {max_aps} propositions")
    pa = build_product(spec, state_limit=state_limit)
    n = pa.n_states
    n_letters = pa.table.n_letters
    transitions = np.array(pa.transitions, dtype=np.int64)

    conjuncts = []  # (is_assumption, is_buchi, marked state set) per component
    for aut in spec.buchi_assumptions:
        conjuncts.append((True, True, aut.acceptance.accepting))
    for aut in spec.cobuchi_assumptions:
        conjuncts.append((True, False, aut.acceptance.rejecting))
    for aut in spec.buchi_guarantees:
        conjuncts.append((False, True, aut.acceptance.accepting))
    for aut in spec.cobuchi_guarantees:
        conjuncts.append((False, False, aut.acceptance.rejecting))
    if len(conjuncts) > 58:
        raise CapacityExceeded("too many conjuncts for packed signatures")

    signature = np.zeros(n, dtype=np.int64)
    for s, pstate in enumerate(pa.states):
        bits = 1 << pa.colours[s]
        for j, (_, _, marked) in enumerate(conjuncts):
            if pstate.components[j] in marked:
                bits |= 1 << (5 + j)
        signature[s] = bits

    # distinct end states of all stems, with multiplicities
    stem_counts: dict[int, int] = {pa.initial: 1}
    frontier = {pa.initial: 1}
    for _ in range(max_stem):
        nxt: dict[int, int] = {}
        for s, count in frontier.items():
            for letter in range(n_letters):
                t = pa.transitions[s][letter]
                nxt[t] = nxt.get(t, 0) + count
        for s, count in nxt.items():
            stem_counts[s] = stem_counts.get(s, 0) + count
        frontier = nxt
    end_states = np.array(sorted(stem_counts), dtype=np.int64)
    end_multiplicity = np.array(
        [stem_counts[s] for s in sorted(stem_counts)], dtype=np.int64)
    n_stems = int(end_multiplicity.sum())

    doubling_rounds = max(1, (n - 1).bit_length())
    identity = np.arange(n, dtype=np.int64)

    checked = 0
    mismatches = 0
    loop: tuple[int, ...]
    for length in range(1, max_loop + 1):
        for encoded in range(n_letters ** length):
            loop = tuple((encoded // n_letters ** i) % n_letters
                         for i in range(length))
            jump = identity
            bits = np.zeros(n, dtype=np.int64)
            for letter in loop:
                jump = transitions[jump, letter]
                bits = bits | signature[jump]
            for _ in range(doubling_rounds):
                bits = bits | bits[jump]
                jump = jump[jump]
            cycle_bits = bits[jump]

            product_verdict = _HIGH_EVEN[cycle_bits & 31]
            assumption_rejected = np.zeros(n, dtype=bool)
            guarantees_accepted = np.ones(n, dtype=bool)
            for j, (is_assumption, is_buchi, _) in enumerate(conjuncts):
                visited = (cycle_bits >> (5 + j) & 1).astype(bool)
                accepted = visited if is_buchi else ~visited
                if is_assumption:
                    assumption_rejected |= ~accepted
                else:
                    guarantees_accepted &= accepted
            oracle_verdict = assumption_rejected | guarantees_accepted

            disagree = product_verdict[end_states] != oracle_verdict[end_states]
            mismatches += int(end_multiplicity[disagree].sum())
            checked += n_stems
    return DifferentialReport(checked=checked, mismatches=mismatches)


# ---------------------------------------------------------------------------
# the synthesis entry point


def _reachable_counterstrategy(
    game: SynthesisGame,
    solution: Solution,
) -> dict[int, int]:
    moves: dict[int, int] = {}
    queue = [game.initial]
    seen = {game.initial}
    while queue:
        v = queue.pop()
        if game.owner(v) == SYSTEM:
            successors = [t for _, t in game.moves(v)]
        else:
            letter = solution.env_strategy[v]
            moves[v] = letter
            successors = [game.env_move(v, letter)]
        for t in successors:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return dict(sorted(moves.items()))


def _constant_machine(spec: NormalizedSpec) -> MealyMachine:
    n_inputs = 1 << len(spec.inputs)
    return MealyMachine(
        inputs=tuple(spec.inputs),
        outputs=tuple(spec.outputs),
        n_states=1,
        initial=0,
        transitions=((tuple((0, 0) for _ in range(n_inputs))),),
    )


def synthesize(
    problem: SpecProblem | NormalizedSpec,
    *,
    state_limit: int = DEFAULT_STATE_LIMIT,
) -> SynthesisOutcome:
    """Synthesize an implementation or produce an environment counterstrategy.

    Every machine returned inside a :class:`Realizable` outcome has passed
    :func:`verify_mealy` against the parity product; a verification failure
    aborts with :class:`InternalCertificationFailure`.
    """
    if isinstance(problem, NormalizedSpec):
        spec = problem
    else:
        spec = normalize_problem(problem)
    pa = build_product(spec, state_limit=state_limit)
    game = build_game(pa, spec.inputs, spec.outputs)
    started = time.perf_counter()
    solution = solve_zielonka(game)
    solve_seconds = time.perf_counter() - started

    def stats(machine_states: int) -> SynthesisStats:
        return SynthesisStats(
            product_states=pa.n_states,
            game_env_vertices=game.n_env_vertices,
            game_system_vertices=game.n_system_vertices,
            machine_states=machine_states,
            colours_used=tuple(sorted(set(pa.colours))),
            solve_seconds=solve_seconds,
        )

    if game.initial not in solution.system_region:
        return Unrealizable(
            counterstrategy=_reachable_counterstrategy(game, solution),
            initial_vertex=game.initial,
            stats=stats(0),
        )

    no_guarantees = not spec.buchi_guarantees and not spec.cobuchi_guarantees
    machine = _constant_machine(spec) if no_guarantees else extract_mealy(game, solution)
    violation = verify_mealy(machine, pa)
    if violation is not None:
        raise InternalCertificationFailure(
            f"extracted machine fails on witness {violation.lasso}")
    return Realizable(machine=machine, stats=stats(machine.n_states))
