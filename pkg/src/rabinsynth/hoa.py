"""Reader and writer for a small HOA-style automaton interchange format.

Supported documents consist of the headers ``HOA: v1``, ``States:``,
``Start:``, ``AP:``, ``acc-name:``, ``Acceptance:`` followed by a ``--BODY--``
section of per-state blocks with guarded edges, closed by ``--END--``.
Acceptance is state-based; automata must be deterministic and total.

Recognised acceptance names and their canonical ``Acceptance:`` lines:

=====================  ===============================================
``Buchi``              ``1 Inf(0)``                 (set 0: accepting)
``co-Buchi``           ``1 Fin(0)``                 (set 0: rejecting)
``Rabin 1``            ``2 Fin(0) & Inf(1)``        (set 0: complement of
                       the persistence set, set 1: recurrence set)
``parity max even n``  max-even chain over n sets   (set c: colour c)
``safety``             ``0 t``                      (no sets)
=====================  ===============================================
"""

from __future__ import annotations

import re

from .automata import (
    Buchi,
    CoBuchi,
    OmegaAutomaton,
    OnePairRabin,
    Parity,
    Safety,
    ValidationError,
    validate,
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
    Var,
    any_of,
    minterm,
)


class HoaError(Exception):
    """Malformed document; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class UnsupportedFeature(HoaError):
    def __init__(self, name: str, line: int | None = None):
        self.feature = name
        super().__init__(f"unsupported feature: {name}", line)


# ---------------------------------------------------------------------------
# acceptance formulas


def _parity_max_even_formula(n_sets: int) -> str:
    formula = ""
    for c in range(n_sets):
        atom = f"Inf({c})" if c % 2 == 0 else f"Fin({c})"
        if not formula:
            formula = atom
        else:
            op = "|" if c % 2 == 0 else "&"
            formula = f"{atom} {op} ({formula})"
    return formula


_CANONICAL_ACCEPTANCE = {
    "Buchi": (1, "Inf(0)"),
    "co-Buchi": (1, "Fin(0)"),
    "Rabin 1": (2, "Fin(0) & Inf(1)"),
    "safety": (0, "t"),
}

_ACC_TOKEN = re.compile(r"Fin|Inf|\d+|[()&|tf]")


def _parse_acc_formula(text: str, line: int):
    """Parse an acceptance formula into a normalised nested-tuple form."""
    tokens = _ACC_TOKEN.findall(text)
    if "".join(tokens).replace(" ", "") != text.replace(" ", ""):
        raise HoaError(f"cannot tokenise acceptance formula {text!r}", line)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens) or (expected is not None and tokens[pos] != expected):
            raise HoaError(f"malformed acceptance formula {text!r}", line)
        pos += 1
        return tokens[pos - 1]

    def atom():
        tok = take()
        if tok in ("Fin", "Inf"):
            take("(")
            k = take()
            if not k.isdigit():
                raise HoaError(f"malformed acceptance formula {text!r}", line)
            take(")")
            return (tok.lower(), int(k))
        if tok in ("t", "f"):
            return (tok,)
        if tok == "(":
            inner = disj()
            take(")")
            return inner
        raise HoaError(f"malformed acceptance formula {text!r}", line)

    def conj():
        parts = [atom()]
        while peek() == "&":
            take()
            parts.append(atom())
        if len(parts) == 1:
            return parts[0]
        flat = []
        for p in parts:
            flat.extend(p[1:] if p[0] == "and" else [p])
        return ("and", *flat)

    def disj():
        parts = [conj()]
        while peek() == "|":
            take()
            parts.append(conj())
        if len(parts) == 1:
            return parts[0]
        flat = []
        for p in parts:
            flat.extend(p[1:] if p[0] == "or" else [p])
        return ("or", *flat)

    result = disj()
    if pos != len(tokens):
        raise HoaError(f"malformed acceptance formula {text!r}", line)
    return result


def _check_acceptance_line(acc_name: str, n_sets: int, formula: str, line: int) -> None:
    if acc_name.startswith("parity"):
        expected = _parity_max_even_formula(n_sets)
    else:
        expected_sets, expected = _CANONICAL_ACCEPTANCE[acc_name]
        if n_sets != expected_sets:
            raise HoaError(
                f"acceptance declares {n_sets} sets, {acc_name} uses {expected_sets}",
                line)
    if _parse_acc_formula(formula, line) != _parse_acc_formula(expected, line):
        raise HoaError(
            f"acceptance formula {formula!r} does not match acc-name {acc_name!r}",
            line)


# ---------------------------------------------------------------------------
# guards over AP indices


class _GuardParser:
    """Recursive-descent parser for ``t f ! & |`` guards over AP indices."""

    def __init__(self, text: str, table: ApTable, line: int):
        self.tokens = re.findall(r"\d+|[tf!&|()]|\S", text)
        self.pos = 0
        self.table = table
        self.line = line

    def fail(self, why: str):
        raise HoaError(f"bad guard: {why}", self.line)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of guard")
        self.pos += 1
        return tok

    def parse(self) -> BoolExpr:
        expr = self.disj()
        if self.pos != len(self.tokens):
            self.fail(f"trailing tokens near {self.peek()!r}")
        return expr

    def disj(self) -> BoolExpr:
        expr = self.conj()
        while self.peek() == "|":
            self.take()
            expr = Or(expr, self.conj())
        return expr

    def conj(self) -> BoolExpr:
        expr = self.unary()
        while self.peek() == "&":
            self.take()
            expr = And(expr, self.unary())
        return expr

    def unary(self) -> BoolExpr:
        tok = self.take()
        if tok == "!":
            return Not(self.unary())
        if tok == "(":
            expr = self.disj()
            if self.take() != ")":
                self.fail("expected ')'")
            return expr
        if tok == "t":
            return Lit(True)
        if tok == "f":
            return Lit(False)
        if tok.isdigit():
            index = int(tok)
            if index >= self.table.size:
                self.fail(f"AP index {index} out of range")
            return Var(self.table.names[index])
        self.fail(f"unexpected token {tok!r}")
        raise AssertionError  # unreachable


def _guard_text(expr: BoolExpr, table: ApTable) -> str:
    """Render a guard using only ``t ! & |``, parentheses and AP indices."""
    return _guard_fmt(expr, 0, table)


def _guard_fmt(expr: BoolExpr, min_level: int, table: ApTable) -> str:
    match expr:
        case Lit(value):
            return "t" if value else "!t"
        case Var(name):
            return str(table.bit(name))
        case Not(arg):
            return "!" + _guard_fmt(arg, 3, table)
        case And(l, r):
            s = _guard_fmt(l, 2, table) + " & " + _guard_fmt(r, 3, table)
            return "(" + s + ")" if 2 < min_level else s
        case Or(l, r):
            s = _guard_fmt(l, 1, table) + " | " + _guard_fmt(r, 2, table)
            return "(" + s + ")" if 1 < min_level else s
        case Implies(l, r):
            return _guard_fmt(Or(Not(l), r), min_level, table)
        case Iff(l, r):
            rewritten = Or(And(l, r), And(Not(l), Not(r)))
            return _guard_fmt(rewritten, min_level, table)
    raise TypeError(f"not a boolean expression: {expr!r}")


# ---------------------------------------------------------------------------
# emitter


def emit_hoa(aut: OmegaAutomaton, table: ApTable) -> str:
    """Serialise a validated automaton; stable under parse/emit round-trips."""
    acc = aut.acceptance
    match acc:
        case Buchi(accepting):
            acc_name = "Buchi"
            sets = [accepting]
        case CoBuchi(rejecting):
            acc_name = "co-Buchi"
            sets = [rejecting]
        case OnePairRabin(persistent, recurrent):
            acc_name = "Rabin 1"
            sets = [frozenset(range(aut.n_states)) - persistent, recurrent]
        case Parity(colours, n_colours):
            acc_name = f"parity max even {n_colours}"
            sets = [frozenset(s for s, c in enumerate(colours) if c == k)
                    for k in range(n_colours)]
        case Safety():
            acc_name = "safety"
            sets = []
        case _:
            raise UnsupportedFeature(type(acc).__name__)

    if acc_name.startswith("parity"):
        formula = _parity_max_even_formula(len(sets))
    else:
        _, formula = _CANONICAL_ACCEPTANCE[acc_name]

    lines = [
        "HOA: v1",
        f"States: {aut.n_states}",
        f"Start: {aut.initial}",
        "AP: " + " ".join([str(table.size)] + [f'"{n}"' for n in table.names]),
        f"acc-name: {acc_name}",
        f"Acceptance: {len(sets)} {formula}",
        "--BODY--",
    ]
    for s in range(aut.n_states):
        membership = [k for k, ss in enumerate(sets) if s in ss]
        suffix = " {" + " ".join(map(str, membership)) + "}" if membership else ""
        lines.append(f"State: {s}{suffix}")
        for guard, target in aut.edges[s]:
            lines.append(f"[{_guard_text(guard, table)}] {target}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parser


_HEADERS = ("HOA", "States", "Start", "AP", "acc-name", "Acceptance")


def parse_hoa(text: str) -> tuple[OmegaAutomaton, ApTable]:
    """Parse a document; the result always passes :func:`validate`."""
    headers: dict[str, tuple[str, int]] = {}
    lines = text.splitlines()
    body_start = None
    for i, raw in enumerate(lines):
        line = raw.strip()
        if not line:
            continue
        if line == "--BODY--":
            body_start = i + 1
            break
        if ":" not in line:
            raise HoaError(f"expected a 'name: value' header, got {line!r}", i + 1)
        name, value = line.split(":", 1)
        name = name.strip()
        if name not in _HEADERS:
            raise UnsupportedFeature(name, i + 1)
        if name in headers:
            raise HoaError(f"duplicate header {name!r}", i + 1)
        headers[name] = (value.strip(), i + 1)
    if body_start is None:
        raise HoaError("missing --BODY-- marker")
    for required in _HEADERS:
        if required not in headers:
            raise HoaError(f"missing header {required!r}")
    if headers["HOA"][0] != "v1":
        raise UnsupportedFeature(f"HOA version {headers['HOA'][0]}",
                                 headers["HOA"][1])

    value, line_no = headers["States"]
    if not value.isdigit() or int(value) == 0:
        raise HoaError(f"bad state count {value!r}", line_no)
    n_states = int(value)

    value, line_no = headers["Start"]
    if not value.isdigit():
        raise HoaError(f"bad start state {value!r}", line_no)
    initial = int(value)

    value, line_no = headers["AP"]
    parts = re.findall(r'"([^"]*)"|(\S+)', value)
    flat = [a or b for a, b in parts]
    if not flat or not flat[0].isdigit():
        raise HoaError(f"bad AP header {value!r}", line_no)
    if int(flat[0]) != len(flat) - 1:
        raise HoaError("AP count does not match the number of names", line_no)
    try:
        table = ApTable(tuple(flat[1:]))
    except ValueError as exc:
        raise HoaError(str(exc), line_no) from exc

    acc_name, acc_line = headers["acc-name"]
    n_colours = None
    if acc_name in ("Buchi", "co-Buchi", "Rabin 1", "safety"):
        pass
    else:
        m = re.fullmatch(r"parity max even (\d+)", acc_name)
        if not m:
            raise UnsupportedFeature(acc_name, acc_line)
        n_colours = int(m.group(1))
        if n_colours == 0:
            raise HoaError("parity automata need at least one colour", acc_line)

    value, line_no = headers["Acceptance"]
    m = re.match(r"(\d+)\s*(.*)\Z", value)
    if not m:
        raise HoaError(f"bad acceptance header {value!r}", line_no)
    n_sets = int(m.group(1))
    _check_acceptance_line(
        acc_name if n_colours is None else "parity",
        n_sets if n_colours is None else n_colours,
        m.group(2), line_no)
    if n_colours is not None and n_sets != n_colours:
        raise HoaError("parity set count must equal the colour count", line_no)

    # body
    memberships: dict[int, frozenset[int]] = {}
    edges: dict[int, list[tuple[BoolExpr, int]]] = {}
    current: int | None = None
    end_seen = False
    for i in range(body_start, len(lines)):
        line = lines[i].strip()
        line_no = i + 1
        if not line:
            continue
        if line == "--END--":
            end_seen = True
            for j in range(i + 1, len(lines)):
                if lines[j].strip():
                    raise HoaError("content after --END--", j + 1)
            break
        if line.startswith("State:"):
            rest = line[len("State:"):].strip()
            m = re.fullmatch(r"(\d+)\s*(?:\{([\d\s]*)\})?", rest)
            if not m:
                raise HoaError(f"bad state line {line!r}", line_no)
            current = int(m.group(1))
            if current in edges:
                raise HoaError(f"duplicate block for state {current}", line_no)
            edges[current] = []
            member = frozenset(int(x) for x in (m.group(2) or "").split())
            if any(k >= n_sets for k in member):
                raise HoaError("acceptance set id out of range", line_no)
            memberships[current] = member
        elif line.startswith("["):
            if current is None:
                raise HoaError("edge before the first state block", line_no)
            close = line.find("]")
            if close < 0:
                raise HoaError("unterminated guard", line_no)
            target_text = line[close + 1:].strip()
            if not re.fullmatch(r"\d+", target_text):
                raise HoaError(f"bad edge target {target_text!r}", line_no)
            guard = _GuardParser(line[1:close], table, line_no).parse()
            edges[current].append((guard, int(target_text)))
        else:
            raise HoaError(f"unexpected body line {line!r}", line_no)
    if not end_seen:
        raise HoaError("missing --END-- marker")
    if set(edges) != set(range(n_states)):
        missing = sorted(set(range(n_states)) - set(edges))
        raise HoaError(f"missing state blocks for {missing}")

    def in_set(k: int) -> frozenset[int]:
        return frozenset(s for s in range(n_states) if k in memberships[s])

    acceptance: object
    if acc_name == "Buchi":
        acceptance = Buchi(in_set(0))
    elif acc_name == "co-Buchi":
        acceptance = CoBuchi(in_set(0))
    elif acc_name == "Rabin 1":
        acceptance = OnePairRabin(
            persistent=frozenset(range(n_states)) - in_set(0),
            recurrent=in_set(1))
    elif acc_name == "safety":
        if any(memberships[s] for s in memberships):
            raise HoaError("safety automata carry no acceptance sets")
        acceptance = Safety()
    else:
        colours = []
        for s in range(n_states):
            member = memberships[s]
            if len(member) != 1:
                raise HoaError(
                    f"state {s} must belong to exactly one colour set")
            colours.append(next(iter(member)))
        acceptance = Parity(tuple(colours), n_colours)

    aut = OmegaAutomaton(
        n_states=n_states,
        initial=initial,
        edges=tuple(tuple(edge_list) for edge_list in
                    (edges[s] for s in range(n_states))),
        acceptance=acceptance,
    )
    issues = validate(aut, table)
    if issues:
        raise ValidationError(issues)
    return aut, table


def automaton_from_letter_table(
    targets: list[list[int]],
    initial: int,
    acceptance,
    table: ApTable,
) -> OmegaAutomaton:
    """Build an automaton from a dense letter table, merging letters with a
    common target into one disjunctive guard."""
    edges = []
    for row in targets:
        by_target: dict[int, list[int]] = {}
        for letter, target in enumerate(row):
            by_target.setdefault(target, []).append(letter)
        state_edges = []
        for target in sorted(by_target):
            letters = by_target[target]
            if len(letters) == table.n_letters:
                guard: BoolExpr = Lit(True)
            else:
                guard = any_of(minterm(letter, table) for letter in letters)
            state_edges.append((guard, target))
        edges.append(tuple(state_edges))
    return OmegaAutomaton(
        n_states=len(targets), initial=initial,
        edges=tuple(edges), acceptance=acceptance)
