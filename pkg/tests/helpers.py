"""Independent reference implementations used to cross-check the library.

Everything here deliberately avoids the code paths under test: lasso verdicts
are computed by long-run simulation instead of boundary cycle detection, and
pattern semantics are decided by direct position analysis on the lasso.
"""

from __future__ import annotations

import itertools

from rabinsynth.automata import (
    Buchi,
    CoBuchi,
    GeneralizedBuchi,
    Lasso,
    Muller,
    OmegaAutomaton,
    OnePairRabin,
    Parity,
    Safety,
    Streett,
)
from rabinsynth.boolexpr import ApTable, evaluate
from rabinsynth.ltl import (
    Always,
    NextResponse,
    Persistence,
    Recurrence,
    Response,
    StateInit,
)


def letter_table(aut: OmegaAutomaton, table: ApTable) -> list[list[int]]:
    rows = []
    for s in range(aut.n_states):
        row = []
        for letter in table.letters():
            targets = [t for g, t in aut.edges[s] if evaluate(g, letter, table)]
            assert len(targets) == 1, f"state {s} letter {letter}: {targets}"
            row.append(targets[0])
        rows.append(row)
    return rows


def naive_inf_set(tt: list[list[int]], initial: int, lasso: Lasso) -> frozenset[int]:
    """Infinitely visited states via plain long-run simulation.

    Runs the loop for 2n passes; the states entered during the last n passes
    are exactly the recurring ones (the boundary sequence is periodic after at
    most n passes and its period is at most n).
    """
    n = len(tt)
    state = initial
    for a in lasso.stem:
        state = tt[state][a]
    visits: list[int] = []
    for _ in range(2 * n):
        for a in lasso.loop:
            state = tt[state][a]
            visits.append(state)
    return frozenset(visits[len(visits) // 2:])


def naive_verdict(acceptance, inf: frozenset[int]) -> bool:
    if isinstance(acceptance, Safety):
        return True
    if isinstance(acceptance, Buchi):
        return len(inf & acceptance.accepting) > 0
    if isinstance(acceptance, CoBuchi):
        return len(inf & acceptance.rejecting) == 0
    if isinstance(acceptance, OnePairRabin):
        return inf.issubset(acceptance.persistent) and len(
            inf & acceptance.recurrent) > 0
    if isinstance(acceptance, Parity):
        return max(acceptance.colours[s] for s in inf) % 2 == 0
    if isinstance(acceptance, GeneralizedBuchi):
        return all(len(inf & member) > 0 for member in acceptance.sets)
    if isinstance(acceptance, Streett):
        return all(
            not inf.issubset(p) or len(inf & r) == 0 for p, r in acceptance.pairs)
    if isinstance(acceptance, Muller):
        return inf in acceptance.accept_sets
    raise TypeError(acceptance)


def naive_lasso_verdict(aut: OmegaAutomaton, lasso: Lasso, table: ApTable) -> bool:
    tt = letter_table(aut, table)
    return naive_verdict(aut.acceptance, naive_inf_set(tt, aut.initial, lasso))


def never_enters(
    tt: list[list[int]], initial: int, lasso: Lasso, bad: frozenset[int],
    passes: int | None = None,
) -> bool:
    """Whether the run avoids ``bad`` forever (simulates until it must cycle)."""
    n = len(tt)
    state = initial
    if state in bad:
        return False
    for a in lasso.stem:
        state = tt[state][a]
        if state in bad:
            return False
    for _ in range(passes if passes is not None else n + 1):
        for a in lasso.loop:
            state = tt[state][a]
            if state in bad:
                return False
    return True


def all_lassos(table: ApTable, max_stem: int, max_loop: int):
    letters = list(table.letters())
    for stem_len in range(max_stem + 1):
        for stem in itertools.product(letters, repeat=stem_len):
            for loop_len in range(1, max_loop + 1):
                for loop in itertools.product(letters, repeat=loop_len):
                    yield Lasso(stem, loop)


def pattern_holds(pattern, lasso: Lasso, table: ApTable) -> bool:
    """Direct semantics of the supported patterns on an ultimately periodic
    word, decided by stem and loop position analysis."""
    stem_len = len(lasso.stem)
    loop_len = len(lasso.loop)
    total = stem_len + loop_len

    def sat(b, i: int) -> bool:
        return evaluate(b, lasso.letter_at(i), table)

    match pattern:
        case StateInit(b):
            return sat(b, 0)
        case Always(b):
            return all(sat(b, i) for i in range(total))
        case Recurrence(b):
            return any(sat(b, stem_len + k) for k in range(loop_len))
        case Persistence(b):
            return all(sat(b, stem_len + k) for k in range(loop_len))
        case NextResponse(trigger, reaction):
            return all(
                not sat(trigger, i) or sat(reaction, i + 1) for i in range(total))
        case Response(trigger, reaction):
            loop_reacts = any(sat(reaction, stem_len + k) for k in range(loop_len))
            for i in range(stem_len):
                if sat(trigger, i):
                    if not (loop_reacts
                            or any(sat(reaction, j) for j in range(i, stem_len))):
                        return False
            if any(sat(trigger, stem_len + k) for k in range(loop_len)):
                return loop_reacts
            return True
    raise TypeError(pattern)


def table_lasso_verdict(
    tt: list[list[int]], initial: int, acceptance, lasso: Lasso,
) -> bool:
    """Fast verdict over a precomputed letter table (same oracle as
    :func:`naive_lasso_verdict`, shared table)."""
    return naive_verdict(acceptance, naive_inf_set(tt, initial, lasso))


def induced_lasso(machine, input_lasso: Lasso) -> Lasso:
    """Combined input/output word a machine produces on an input lasso.

    The loop is unrolled until the machine state repeats at a loop boundary,
    which makes the induced word ultimately periodic again.
    """
    input_bits = len(machine.inputs)
    state = machine.initial
    stem_letters = []
    for x in input_lasso.stem:
        state, y = machine.transitions[state][x]
        stem_letters.append(x | y << input_bits)
    boundaries = {state: 0}
    per_pass: list[list[int]] = []
    current = state
    while True:
        pass_letters = []
        for x in input_lasso.loop:
            current, y = machine.transitions[current][x]
            pass_letters.append(x | y << input_bits)
        per_pass.append(pass_letters)
        if current in boundaries:
            first = boundaries[current]
            stem = stem_letters + [a for p in per_pass[:first] for a in p]
            loop = [a for p in per_pass[first:] for a in p]
            return Lasso(tuple(stem), tuple(loop))
        boundaries[current] = len(per_pass)
