import pytest
from hypothesis import given, strategies as st

from rabinsynth.boolexpr import (
    And,
    ApTable,
    Iff,
    Implies,
    Lit,
    Not,
    Or,
    Var,
    evaluate,
    format_expr,
    minterm,
)
from rabinsynth.ltl import _Parser, _tokenize  # boolean grammar shared with patterns

NAMES = ("a", "b", "c")


def exprs(depth=3):
    leaves = st.one_of(
        st.sampled_from([Var(n) for n in NAMES]),
        st.sampled_from([Lit(True), Lit(False)]),
    )

    def extend(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(Iff, children, children),
        )

    return st.recursive(leaves, extend, max_leaves=12)


def parse_bool(text):
    parser = _Parser(_tokenize(text))
    expr = parser.bool_expr()
    assert parser.pos == len(parser.tokens)
    return expr


class TestApTable:
    def test_letter_round_trip(self):
        table = ApTable(("req", "grant", "err"))
        letter = table.letter(["err", "req"])
        assert letter == 0b101
        assert table.letter_names(letter) == ("err", "req")

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            ApTable(("a", "a"))

    def test_rejects_bad_identifier(self):
        with pytest.raises(ValueError):
            ApTable(("1bad",))

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            ApTable(("a",)).letter(["b"])


class TestEvaluate:
    def test_connectives(self):
        table = ApTable(("a", "b"))
        a, b = Var("a"), Var("b")
        only_a = table.letter(["a"])
        assert evaluate(And(a, Not(b)), only_a, table)
        assert evaluate(Implies(b, a), only_a, table)
        assert not evaluate(Iff(a, b), only_a, table)
        assert evaluate(Or(b, Lit(True)), 0, table)

    def test_minterm_characterises_its_letter(self):
        table = ApTable(("a", "b", "c"))
        for letter in table.letters():
            term = minterm(letter, table)
            matches = [x for x in table.letters() if evaluate(term, x, table)]
            assert matches == [letter]


@given(exprs())
def test_format_parse_identity(expr):
    assert parse_bool(format_expr(expr)) == expr


@given(exprs(), st.integers(min_value=0, max_value=7))
def test_format_preserves_semantics(expr, letter):
    table = ApTable(NAMES)
    assert evaluate(parse_bool(format_expr(expr)), letter, table) == evaluate(
        expr, letter, table)
