import random
import re

import pytest

from rabinsynth.automata import Buchi, OnePairRabin, Parity, ValidationError
from rabinsynth.boolexpr import ApTable
from rabinsynth.hoa import HoaError, UnsupportedFeature, emit_hoa, parse_hoa
from rabinsynth.rand import random_letter_automaton

from helpers import letter_table

MINIMAL_BUCHI = """\
HOA: v1
States: 1
Start: 0
AP: 1 "p"
acc-name: Buchi
Acceptance: 1 Inf(0)
--BODY--
State: 0 {0}
[t] 0
--END--
"""


class TestParse:
    def test_minimal_buchi_document(self):
        aut, table = parse_hoa(MINIMAL_BUCHI)
        assert aut.n_states == 1
        assert aut.initial == 0
        assert table.names == ("p",)
        assert aut.acceptance == Buchi(frozenset({0}))

    def test_unsupported_acceptance_name(self):
        text = MINIMAL_BUCHI.replace("acc-name: Buchi", "acc-name: Streett 2")
        with pytest.raises(UnsupportedFeature):
            parse_hoa(text)

    def test_unknown_header(self):
        text = MINIMAL_BUCHI.replace("Start: 0", "Start: 0\nname: \"x\"")
        with pytest.raises(UnsupportedFeature):
            parse_hoa(text)

    def test_nondeterministic_document_fails_validation(self):
        text = MINIMAL_BUCHI.replace("[t] 0", "[t] 0\n[0] 0")
        with pytest.raises(ValidationError):
            parse_hoa(text)

    def test_partial_document_fails_validation(self):
        text = MINIMAL_BUCHI.replace("[t] 0", "[0] 0")
        with pytest.raises(ValidationError):
            parse_hoa(text)

    def test_mismatched_acceptance_line(self):
        text = MINIMAL_BUCHI.replace("Acceptance: 1 Inf(0)", "Acceptance: 1 Fin(0)")
        with pytest.raises(HoaError):
            parse_hoa(text)

    def test_missing_header(self):
        text = MINIMAL_BUCHI.replace('AP: 1 "p"\n', "")
        with pytest.raises(HoaError):
            parse_hoa(text)

    def test_error_carries_line_number(self):
        text = MINIMAL_BUCHI.replace("[t] 0", "[t] x")
        with pytest.raises(HoaError) as err:
            parse_hoa(text)
        assert err.value.line == 9

    def test_rabin_sets_orientation(self):
        text = """\
HOA: v1
States: 2
Start: 0
AP: 1 "p"
acc-name: Rabin 1
Acceptance: 2 Fin(0) & Inf(1)
--BODY--
State: 0 {0}
[t] 1
State: 1 {1}
[t] 1
--END--
"""
        aut, _ = parse_hoa(text)
        # set 0 is the complement of the persistence set, set 1 the recurrence set
        assert aut.acceptance == OnePairRabin(
            persistent=frozenset({1}), recurrent=frozenset({1}))

    def test_parity_needs_exactly_one_colour_per_state(self):
        text = """\
HOA: v1
States: 1
Start: 0
AP: 1 "p"
acc-name: parity max even 2
Acceptance: 2 Inf(1) | (Fin(0))
--BODY--
State: 0
[t] 0
--END--
"""
        with pytest.raises(HoaError):
            parse_hoa(text)


def assert_isomorphic(a, ta, b, tb):
    assert a.n_states == b.n_states
    assert a.initial == b.initial
    assert ta.names == tb.names
    assert letter_table(a, ta) == letter_table(b, tb)
    assert type(a.acceptance) is type(b.acceptance)
    assert a.acceptance == b.acceptance


class TestRoundTrip:
    TABLE = ApTable(("p", "q"))

    def sample_automata(self):
        rng = random.Random(99)
        for kind in ("buchi", "cobuchi", "rabin", "safety"):
            for _ in range(10):
                yield random_letter_automaton(rng, self.TABLE, 3, kind)

    def test_round_trip_all_kinds(self):
        for aut in self.sample_automata():
            text = emit_hoa(aut, self.TABLE)
            parsed, table = parse_hoa(text)
            assert_isomorphic(aut, self.TABLE, parsed, table)

    def test_round_trip_parity(self):
        rng = random.Random(5)
        base = random_letter_automaton(rng, self.TABLE, 4, "buchi")
        aut = with_parity_acceptance(base)
        text = emit_hoa(aut, self.TABLE)
        parsed, table = parse_hoa(text)
        assert_isomorphic(aut, self.TABLE, parsed, table)
        assert "parity max even 5" in text

    def test_emit_is_stable(self):
        aut, table = parse_hoa(MINIMAL_BUCHI)
        once = emit_hoa(aut, table)
        again = emit_hoa(*parse_hoa(once))
        assert once == again

    def test_safety_header(self):
        rng = random.Random(11)
        aut = random_letter_automaton(rng, self.TABLE, 3, "safety")
        text = emit_hoa(aut, self.TABLE)
        assert "acc-name: safety" in text
        assert "Acceptance: 0 t" in text

    def test_emitted_guard_grammar(self):
        for aut in self.sample_automata():
            text = emit_hoa(aut, self.TABLE)
            for line in text.splitlines():
                if line.startswith("["):
                    guard = line[1:line.index("]")]
                    assert re.fullmatch(r"[t!&|()\d ]+", guard), guard


def with_parity_acceptance(base):
    from dataclasses import replace

    colours = tuple(s % 5 for s in range(base.n_states))
    return replace(base, acceptance=Parity(colours, 5))
