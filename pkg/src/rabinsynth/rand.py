"""Seeded random instances for differential and property testing."""

from __future__ import annotations

import random

from .automata import Buchi, CoBuchi, OmegaAutomaton, OnePairRabin, Safety
from .boolexpr import ApTable
from .game import SynthesisGame
from .hoa import automaton_from_letter_table
from .ltl import (
    Always,
    NextResponse,
    PatternFormula,
    Persistence,
    Recurrence,
    Response,
    StateInit,
    compile_pattern,
    normalize,
)
from .boolexpr import And, BoolExpr, Lit, Not, Or, Var
from .product import NormalizedSpec


def random_bool_expr(rng: random.Random, names: tuple[str, ...], depth: int = 2) -> BoolExpr:
    if depth == 0 or rng.random() < 0.4:
        if rng.random() < 0.1:
            return Lit(rng.random() < 0.5)
        return Var(rng.choice(names))
    op = rng.randrange(3)
    if op == 0:
        return Not(random_bool_expr(rng, names, depth - 1))
    left = random_bool_expr(rng, names, depth - 1)
    right = random_bool_expr(rng, names, depth - 1)
    return And(left, right) if op == 1 else Or(left, right)


def random_pattern(rng: random.Random, names: tuple[str, ...]) -> PatternFormula:
    kind = rng.randrange(6)
    b = random_bool_expr(rng, names)
    if kind == 0:
        return StateInit(b)
    if kind == 1:
        return Always(b)
    if kind == 2:
        return Recurrence(b)
    if kind == 3:
        return Persistence(b)
    b2 = random_bool_expr(rng, names)
    return NextResponse(b, b2) if kind == 4 else Response(b, b2)


def random_letter_automaton(
    rng: random.Random,
    table: ApTable,
    n_states: int,
    acceptance_kind: str,
) -> OmegaAutomaton:
    """Total deterministic automaton with uniformly random letter targets."""
    targets = [[rng.randrange(n_states) for _ in table.letters()]
               for _ in range(n_states)]
    if acceptance_kind == "safety":
        # give violations somewhere to go: the last state becomes absorbing
        sink = n_states - 1
        targets[sink] = [sink] * table.n_letters
        acceptance = Safety()
    elif acceptance_kind == "buchi":
        acceptance = Buchi(_random_subset(rng, n_states))
    elif acceptance_kind == "cobuchi":
        acceptance = CoBuchi(_random_subset(rng, n_states))
    elif acceptance_kind == "rabin":
        acceptance = OnePairRabin(
            persistent=_random_subset(rng, n_states),
            recurrent=_random_subset(rng, n_states))
    else:
        raise ValueError(f"unknown acceptance kind {acceptance_kind!r}")
    return automaton_from_letter_table(
        targets, rng.randrange(n_states), acceptance, table)


def _random_subset(rng: random.Random, n: int) -> frozenset[int]:
    return frozenset(s for s in range(n) if rng.random() < 0.5)


def random_normalized_spec(
    rng: random.Random,
    *,
    max_conjuncts_per_side: int = 2,
    max_component_states: int = 3,
    buchi_only: bool = False,
) -> NormalizedSpec:
    """Random specification over up to three propositions.

    Conjuncts mix compiled patterns with random automata of every supported
    acceptance kind and are classified through the normal frontend path.
    """
    n_inputs = rng.randrange(1, 3)
    n_outputs = rng.randrange(1, 4 - n_inputs)
    inputs = tuple(f"i{k}" for k in range(n_inputs))
    outputs = tuple(f"o{k}" for k in range(n_outputs))
    table = ApTable(inputs + outputs)

    if buchi_only:
        automaton_kinds = ("buchi", "safety")
        pattern_kinds = (StateInit, Always, Recurrence, NextResponse, Response)
    else:
        automaton_kinds = ("buchi", "cobuchi", "rabin", "safety")
        pattern_kinds = None

    classified = []
    for role in ("assumption", "guarantee"):
        for _ in range(rng.randrange(max_conjuncts_per_side + 1)):
            if rng.random() < 0.5:
                pattern = random_pattern(rng, table.names)
                if pattern_kinds is not None:
                    while not isinstance(pattern, pattern_kinds):
                        pattern = random_pattern(rng, table.names)
                aut = compile_pattern(pattern, table)
            else:
                aut = random_letter_automaton(
                    rng, table, rng.randrange(2, max_component_states + 1),
                    rng.choice(automaton_kinds))
            classified.extend(normalize(aut, role, table))

    def pick(role, kind):
        return tuple(c.automaton for c in classified
                     if c.role == role and c.kind == kind)

    return NormalizedSpec(
        inputs=inputs,
        outputs=outputs,
        buchi_assumptions=pick("assumption", "buchi"),
        cobuchi_assumptions=pick("assumption", "cobuchi"),
        buchi_guarantees=pick("guarantee", "buchi"),
        cobuchi_guarantees=pick("guarantee", "cobuchi"),
    )


def random_game(
    rng: random.Random,
    *,
    max_states: int = 50,
    max_input_bits: int = 2,
    max_output_bits: int = 2,
    max_colour: int = 4,
) -> SynthesisGame:
    """Random bipartite parity game in the synthesis-game shape."""
    n_states = rng.randrange(1, max_states + 1)
    input_bits = rng.randrange(1, max_input_bits + 1)
    output_bits = rng.randrange(1, max_output_bits + 1)
    names = tuple(f"i{k}" for k in range(input_bits)) + tuple(
        f"o{k}" for k in range(output_bits))
    n_letters = 1 << (input_bits + output_bits)
    transitions = tuple(
        tuple(rng.randrange(n_states) for _ in range(n_letters))
        for _ in range(n_states))
    colours = tuple(rng.randrange(max_colour + 1) for _ in range(n_states))
    return SynthesisGame(
        table=ApTable(names),
        input_bits=input_bits,
        output_bits=output_bits,
        n_states=n_states,
        transitions=transitions,
        state_colours=colours,
        initial=rng.randrange(n_states),
    )
