"""Canonical small factor automata."""

from .mealy import MealyAutomaton


def rz2() -> MealyAutomaton:
    """Two-element right-zero semigroup: ``x`` writes ``a``, ``y`` writes ``b``."""
    return MealyAutomaton.from_transitions(
        ["x", "y"],
        ["a", "b"],
        {
            ("x", "a"): ("x", "a"),
            ("x", "b"): ("x", "a"),
            ("y", "a"): ("y", "b"),
            ("y", "b"): ("y", "b"),
        },
        name="RZ2",
    )


def add() -> MealyAutomaton:
    """Reverse-binary increment ``q`` together with the identity ``e``."""
    return MealyAutomaton.from_transitions(
        ["q", "e"],
        ["0", "1"],
        {
            ("q", "0"): ("e", "1"),
            ("q", "1"): ("q", "0"),
            ("e", "0"): ("e", "0"),
            ("e", "1"): ("e", "1"),
        },
        name="ADD",
    )


FIXTURES = {"RZ2": rz2, "ADD": add}
