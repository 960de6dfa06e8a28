import random

import pytest

from rabinsynth.automata import eval_lasso
from rabinsynth.boolexpr import ApTable, Var
from rabinsynth.ltl import Persistence, Recurrence, compile_pattern, parse_ltl
from rabinsynth.product import (
    CapacityExceeded,
    NormalizedSpec,
    ProductState,
    build_product,
    colour_of,
    control_successor,
    raw_product_bound,
)
from rabinsynth.pipeline import product_accepts
from rabinsynth.rand import random_normalized_spec

from helpers import all_lassos


def gf_spec():
    table = ApTable(("r", "g"))
    assumption = compile_pattern(parse_ltl("GF r")[0], table)
    guarantee = compile_pattern(parse_ltl("GF g")[0], table)
    return NormalizedSpec(("r",), ("g",), (assumption,), (), (guarantee,), ())


class TestControlSuccessor:
    def test_increment_on_accepting_component(self):
        nxt, _, _ = control_successor(1, 0, False, [True, False], [], [])
        assert nxt == 2

    def test_free_slot_always_advances(self):
        nxt, _, _ = control_successor(0, 0, False, [False, False], [], [])
        assert nxt == 1

    def test_wraparound_sets_serviced_flag(self):
        nxt, _, serviced = control_successor(
            2, 0, False, [False, True], [], [True])
        assert nxt == 0
        assert serviced is True  # regardless of the rejecting flag

    def test_rejecting_guarantee_clears_flag_when_stalled(self):
        nxt, _, serviced = control_successor(
            2, 0, True, [False, False], [], [True])
        assert nxt == 2
        assert serviced is False

    def test_no_assumptions_keeps_counter_at_zero(self):
        nxt, _, serviced = control_successor(0, 0, False, [], [], [])
        assert nxt == 0
        assert serviced is True

    def test_guarantee_counter_mirrors_assumption_counter(self):
        _, nxt, _ = control_successor(0, 1, True, [], [False, True], [])
        assert nxt == 1
        _, nxt, _ = control_successor(0, 2, True, [], [False, True], [])
        assert nxt == 0


class TestColour:
    def setup_method(self):
        self.spec = robust_spec()

    def test_rejecting_cobuchi_assumption_dominates(self):
        # component order: buchi assumptions, cobuchi assumptions,
        # buchi guarantees, cobuchi guarantees
        state = ProductState((0, 0, 0), 0, 0, True)
        assert colour_of(state, self.spec) == 4

    def test_serviced_rejecting_guarantee(self):
        state = ProductState((1, 1, 0), 1, 1, True)
        assert colour_of(state, self.spec) == 3

    def test_unserviced_rejecting_guarantee_is_not_three(self):
        state = ProductState((1, 1, 0), 1, 1, False)
        assert colour_of(state, self.spec) == 0

    def test_guarantee_free_slot(self):
        state = ProductState((1, 1, 1), 1, 0, False)
        assert colour_of(state, self.spec) == 2

    def test_assumption_free_slot(self):
        state = ProductState((1, 1, 1), 0, 1, False)
        assert colour_of(state, self.spec) == 1

    def test_quiet_state(self):
        state = ProductState((1, 1, 1), 1, 1, False)
        assert colour_of(state, self.spec) == 0


def robust_spec():
    """One Buchi assumption, one co-Buchi assumption, one co-Buchi guarantee.

    Components (in order): recurrence tracker on i0 (rejecting-free Buchi,
    accepting {1}), persistence tracker on i0 (co-Buchi rejecting {0}),
    persistence tracker on o0 (co-Buchi rejecting {0}).
    """
    table = ApTable(("i0", "o0"))
    buchi_a = compile_pattern(Recurrence(Var("i0")), table)
    cobuchi_a = compile_pattern(Persistence(Var("i0")), table)
    cobuchi_g = compile_pattern(Persistence(Var("o0")), table)
    return NormalizedSpec(
        ("i0",), ("o0",), (buchi_a,), (cobuchi_a,), (), (cobuchi_g,))


class TestBuildProduct:
    def test_gf_spec_bound_and_colours(self):
        spec = gf_spec()
        assert raw_product_bound(spec) == 32
        pa = build_product(spec)
        assert pa.n_states <= 32
        assert set(pa.colours) <= {0, 1, 2}

    def test_initial_state(self):
        pa = build_product(gf_spec())
        assert pa.states[pa.initial] == ProductState((0, 0), 0, 0, False)

    def test_deterministic_and_total(self):
        pa = build_product(gf_spec())
        for row in pa.transitions:
            assert len(row) == pa.table.n_letters
            assert all(0 <= t < pa.n_states for t in row)

    def test_cobuchi_guarantee_only(self):
        table = ApTable(("g",))
        guarantee = compile_pattern(Persistence(Var("g")), table)
        spec = NormalizedSpec((), ("g",), (), (), (), (guarantee,))
        pa = build_product(spec)
        assert set(pa.colours) <= {2, 3}
        assert all(s.awaiting_assumption == 0 for s in pa.states)
        assert all(s.awaiting_guarantee == 0 for s in pa.states)
        # accepted exactly when the loop avoids the rejecting tracker state
        for lasso in all_lassos(table, 2, 3):
            assert product_accepts(pa, lasso) == eval_lasso(guarantee, lasso, table)

    def test_empty_spec(self):
        spec = NormalizedSpec((), ("g",), (), (), (), ())
        assert raw_product_bound(spec) == 2
        pa = build_product(spec)
        assert pa.n_states <= 2
        assert set(pa.colours) == {2}
        for lasso in all_lassos(spec.table(), 1, 2):
            assert product_accepts(pa, lasso)

    def test_state_bound_on_random_specs(self):
        rng = random.Random(123)
        for _ in range(50):
            spec = random_normalized_spec(rng)
            pa = build_product(spec)
            assert pa.n_states <= raw_product_bound(spec)
            assert set(pa.colours) <= {0, 1, 2, 3, 4}

    def test_gr1_degeneration(self):
        rng = random.Random(321)
        for _ in range(40):
            spec = random_normalized_spec(rng, buchi_only=True)
            assert not spec.cobuchi_assumptions and not spec.cobuchi_guarantees
            pa = build_product(spec)
            assert set(pa.colours) <= {0, 1, 2}

    def test_capacity_limit(self):
        with pytest.raises(CapacityExceeded):
            build_product(gf_spec(), state_limit=10)

    def test_rebuild_is_identical(self):
        a = build_product(gf_spec())
        b = build_product(gf_spec())
        assert a.transitions == b.transitions
        assert a.colours == b.colours
        assert a.states == b.states

    def test_concurrent_builds_share_no_state(self):
        from concurrent.futures import ThreadPoolExecutor

        rng = random.Random(55)
        specs = [random_normalized_spec(rng) for _ in range(12)]
        sequential = [build_product(s) for s in specs]
        with ThreadPoolExecutor(max_workers=4) as pool:
            concurrent = list(pool.map(build_product, specs))
        for a, b in zip(sequential, concurrent):
            assert a.transitions == b.transitions
            assert a.colours == b.colours
