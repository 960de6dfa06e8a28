"""Two-player game view of a parity automaton.

The Environment picks an input letter at an automaton-state vertex, the System
answers with an output letter at an intermediate (state, input) vertex, and
the automaton steps on the combined letter.  The System wins a play iff the
maximum colour seen infinitely often among automaton-state vertices is even;
intermediate vertices carry the neutral colour 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boolexpr import ApTable
from .product import ParityAutomaton

#: Vertex owners.  The Environment moves at state vertices, the System at
#: (state, input) vertices.
ENVIRONMENT = 0
SYSTEM = 1


@dataclass(frozen=True)
class SynthesisGame:
    """Bipartite letter-labelled parity game.

    Vertices ``0 .. n_states-1`` are Environment vertices (one per automaton
    state); vertex ``n_states + (q << input_bits) + x`` is the System vertex
    reached from state ``q`` by input ``x``.
    """

    table: ApTable
    input_bits: int
    output_bits: int
    n_states: int
    transitions: tuple[tuple[int, ...], ...]  # state x combined letter -> state
    state_colours: tuple[int, ...]
    initial: int

    @property
    def n_inputs(self) -> int:
        return 1 << self.input_bits

    @property
    def n_outputs(self) -> int:
        return 1 << self.output_bits

    @property
    def n_env_vertices(self) -> int:
        return self.n_states

    @property
    def n_system_vertices(self) -> int:
        return self.n_states << self.input_bits

    @property
    def n_vertices(self) -> int:
        return self.n_env_vertices + self.n_system_vertices

    def owner(self, v: int) -> int:
        return ENVIRONMENT if v < self.n_states else SYSTEM

    def colour(self, v: int) -> int:
        return self.state_colours[v] if v < self.n_states else 0

    def env_move(self, v: int, input_letter: int) -> int:
        """Successor of an Environment vertex under an input choice."""
        return self.n_states + (v << self.input_bits) + input_letter

    def system_vertex_key(self, v: int) -> tuple[int, int]:
        """Decode a System vertex into its (state, input letter) pair."""
        raw = v - self.n_states
        return raw >> self.input_bits, raw & (self.n_inputs - 1)

    def system_move(self, v: int, output_letter: int) -> int:
        """Successor of a System vertex under an output choice."""
        state, input_letter = self.system_vertex_key(v)
        return self.transitions[state][
            input_letter | output_letter << self.input_bits]

    def moves(self, v: int) -> list[tuple[int, int]]:
        """All ``(letter, target)`` moves of a vertex, in letter order."""
        if v < self.n_states:
            return [(x, self.env_move(v, x)) for x in range(self.n_inputs)]
        return [(y, self.system_move(v, y)) for y in range(self.n_outputs)]


def game_debug_dump(game: SynthesisGame) -> dict:
    """Plain vertex/edge/colour dump for debugging; format not stable."""
    vertices = []
    edges = []
    for v in range(game.n_vertices):
        vertices.append({
            "id": v,
            "owner": "environment" if game.owner(v) == ENVIRONMENT else "system",
            "colour": game.colour(v),
            "initial": v == game.initial,
        })
        for label, target in game.moves(v):
            edges.append({"from": v, "letter": label, "to": target})
    return {
        "propositions": list(game.table.names),
        "input_bits": game.input_bits,
        "output_bits": game.output_bits,
        "vertices": vertices,
        "edges": edges,
    }


def build_game(pa: ParityAutomaton, inputs, outputs) -> SynthesisGame:
    """Split the product alphabet into choices of the two players."""
    inputs = tuple(inputs)
    outputs = tuple(outputs)
    if pa.table.names != inputs + outputs:
        raise ValueError(
            "parity automaton table must list the inputs followed by the outputs")
    return SynthesisGame(
        table=pa.table,
        input_bits=len(inputs),
        output_bits=len(outputs),
        n_states=pa.n_states,
        transitions=pa.transitions,
        state_colours=pa.colours,
        initial=pa.initial,
    )
