"""Finite Mealy transducers and the semigroups their states generate.

States act on the right: a word ``pq`` sends ``s`` to ``(s.p).q``, so the
leftmost state of a word reads the tape first.  A *product state* is a tuple
of state indices that threads each input letter through its components from
left to right; the word problem of the generated semigroup reduces to
equivalence of product states.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InputError, ResourceError

DEFAULT_STATE_CAP = 1_000_000

Row = tuple[int, int]


@dataclass(frozen=True)
class MealyAutomaton:
    """A complete letter-to-letter transducer.

    ``table[q][a]`` is the pair ``(next_state, output_letter)`` as indices
    into ``states`` and ``alphabet``.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    table: tuple[tuple[Row, ...], ...]
    name: str = ""
    _state_index: dict = field(init=False, repr=False, compare=False)
    _letter_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "table", tuple(tuple((int(t), int(b)) for t, b in row) for row in self.table))
        if not self.states:
            raise InputError("automaton needs at least one state")
        if not self.alphabet:
            raise InputError("automaton needs at least one letter")
        state_index = {q: i for i, q in enumerate(self.states)}
        letter_index = {a: i for i, a in enumerate(self.alphabet)}
        if len(state_index) != len(self.states):
            raise InputError(f"duplicate state names in {self.states}")
        if len(letter_index) != len(self.alphabet):
            raise InputError(f"duplicate letter names in {self.alphabet}")
        if len(self.table) != len(self.states):
            raise InputError("table must have one row per state")
        nq, na = len(self.states), len(self.alphabet)
        for q, row in zip(self.states, self.table):
            if len(row) != na:
                raise InputError(f"row of state {q!r} must have one entry per letter")
            for a, (t, b) in zip(self.alphabet, row):
                if not (0 <= t < nq and 0 <= b < na):
                    raise InputError(f"transition ({q!r}, {a!r}) points outside the automaton")
        object.__setattr__(self, "_state_index", state_index)
        object.__setattr__(self, "_letter_index", letter_index)

    @classmethod
    def from_transitions(
        cls,
        states: Sequence[str],
        alphabet: Sequence[str],
        transitions: Mapping[tuple[str, str], tuple[str, str]],
        name: str = "",
    ) -> "MealyAutomaton":
        """Build from a ``{(state, letter): (next_state, output)}`` mapping."""
        si = {q: i for i, q in enumerate(states)}
        li = {a: i for i, a in enumerate(alphabet)}
        for (q, a), (t, b) in transitions.items():
            for kind, ident, index in (("state", q, si), ("letter", a, li), ("state", t, si), ("letter", b, li)):
                if ident not in index:
                    raise InputError(f"unknown {kind} {ident!r} in transition ({q!r}, {a!r})")
        rows = []
        for q in states:
            row = []
            for a in alphabet:
                try:
                    t, b = transitions[q, a]
                except KeyError:
                    raise InputError(f"missing transition for ({q!r}, {a!r})") from None
                row.append((si[t], li[b]))
            rows.append(row)
        return cls(tuple(states), tuple(alphabet), rows, name)

    def state_index(self, q: str) -> int:
        try:
            return self._state_index[q]
        except KeyError:
            raise InputError(f"unknown state {q!r}") from None

    def letter_index(self, a: str) -> int:
        try:
            return self._letter_index[a]
        except KeyError:
            raise InputError(f"unknown letter {a!r}") from None

    def word(self, w: Iterable[str], allow_empty: bool = False) -> tuple[int, ...]:
        """Indices of a state word; a plain ``str`` is read one character per state."""
        idx = tuple(self.state_index(q) for q in w)
        if not idx and not allow_empty:
            raise InputError("state words must be nonempty")
        return idx

    def string(self, s: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.letter_index(a) for a in s)

    def state_names(self, idx: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.states[i] for i in idx)

    def letter_names(self, idx: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.alphabet[i] for i in idx)

    def transition(self, q: str, a: str) -> tuple[str, str]:
        t, b = self.table[self.state_index(q)][self.letter_index(a)]
        return self.states[t], self.alphabet[b]

    def transitions(self) -> Iterator[tuple[str, str, str, str]]:
        """Yield ``(from, input, to, output)`` in canonical order."""
        for q, row in zip(self.states, self.table):
            for a, (t, b) in zip(self.alphabet, row):
                yield q, a, self.states[t], self.alphabet[b]

    def with_transition(self, q: str, a: str, to: str, out: str) -> "MealyAutomaton":
        qi, ai = self.state_index(q), self.letter_index(a)
        rows = [list(r) for r in self.table]
        rows[qi][ai] = (self.state_index(to), self.letter_index(out))
        return MealyAutomaton(self.states, self.alphabet, rows, self.name)

    def renamed(self, suffix: str) -> "MealyAutomaton":
        return MealyAutomaton(tuple(q + suffix for q in self.states), self.alphabet, self.table, self.name)


def as_mealy(aut) -> MealyAutomaton:
    """Accept a free-product automaton wherever a plain transducer is expected."""
    return getattr(aut, "underlying", aut)


def _like(s, out: tuple[str, ...]):
    return "".join(out) if isinstance(s, str) else out


def _step(table, p: tuple[int, ...], c: int) -> tuple[tuple[int, ...], int]:
    nxt = []
    for q in p:
        t, c = table[q][c]
        nxt.append(t)
    return tuple(nxt), c


def _run(table, p: tuple[int, ...], cs: Iterable[int]) -> list[int]:
    out = []
    for c in cs:
        p, c = _step(table, p, c)
        out.append(c)
    return out


def act_state(aut, q: str, s):
    """Output of state ``q`` on the string ``s``."""
    aut = as_mealy(aut)
    out = _run(aut.table, (aut.state_index(q),), aut.string(s))
    return _like(s, aut.letter_names(out))


def act_word(aut, w, s):
    """``s`` acted on by the state word ``w``, leftmost state first."""
    aut = as_mealy(aut)
    out = _run(aut.table, aut.word(w), aut.string(s))
    return _like(s, aut.letter_names(out))


def step_product(aut, p: Sequence[str], c: str) -> tuple[tuple[str, ...], str]:
    """One letter through a product state: returns (successor tuple, output)."""
    aut = as_mealy(aut)
    nxt, out = _step(aut.table, aut.word(p), aut.letter_index(c))
    return aut.state_names(nxt), aut.alphabet[out]


def _witness(aut: MealyAutomaton, t1: tuple[int, ...], t2: tuple[int, ...], cap: int) -> list[int] | None:
    """Shortest input on which two product states disagree, by BFS over pairs."""
    table, na = aut.table, len(aut.alphabet)
    start = (t1, t2)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        for c in range(na):
            n1, o1 = _step(table, pair[0], c)
            n2, o2 = _step(table, pair[1], c)
            if o1 != o2:
                path = [c]
                while parent[pair] is not None:
                    pair, letter = parent[pair]
                    path.append(letter)
                return path[::-1]
            nxt = (n1, n2)
            if nxt not in parent:
                if len(parent) >= cap:
                    raise ResourceError(cap)
                parent[nxt] = (pair, c)
                queue.append(nxt)
    return None


def find_witness(aut, w1, w2, cap: int = DEFAULT_STATE_CAP) -> tuple[str, ...] | None:
    """A shortest string on which ``w1`` and ``w2`` act differently, or None.

    Either word may be empty, standing for the identity transformation.
    """
    aut = as_mealy(aut)
    path = _witness(aut, aut.word(w1, allow_empty=True), aut.word(w2, allow_empty=True), cap)
    return None if path is None else aut.letter_names(path)


def words_equivalent(aut, w1, w2, cap: int = DEFAULT_STATE_CAP) -> bool:
    aut = as_mealy(aut)
    return _witness(aut, aut.word(w1), aut.word(w2), cap) is None


def _closure(aut: MealyAutomaton, roots: Iterable[tuple[int, ...]], cap: int):
    index: dict[tuple[int, ...], int] = {}
    tuples: list[tuple[int, ...]] = []
    for r in roots:
        if r not in index:
            index[r] = len(tuples)
            tuples.append(r)
    if len(tuples) > cap:
        raise ResourceError(cap)
    na = len(aut.alphabet)
    succ, out = [], []
    i = 0
    while i < len(tuples):
        p = tuples[i]
        srow, orow = [], []
        for c in range(na):
            n, o = _step(aut.table, p, c)
            j = index.get(n)
            if j is None:
                if len(tuples) >= cap:
                    raise ResourceError(cap)
                j = index[n] = len(tuples)
                tuples.append(n)
            srow.append(j)
            orow.append(o)
        succ.append(srow)
        out.append(orow)
        i += 1
    return index, np.array(succ, dtype=np.int64), np.array(out, dtype=np.int64)


def _refine(succ: np.ndarray, out: np.ndarray) -> np.ndarray:
    """Moore partition refinement; returns a block id per product state."""
    _, block = np.unique(out, axis=0, return_inverse=True)
    block = block.reshape(-1)
    count = int(block.max()) + 1
    while True:
        key = np.concatenate([block[:, None], block[succ]], axis=1)
        _, new = np.unique(key, axis=0, return_inverse=True)
        new = new.reshape(-1)
        new_count = int(new.max()) + 1
        if new_count == count:
            return new
        block, count = new, new_count


def classify_words(aut, words: Sequence[tuple[int, ...]], cap: int = DEFAULT_STATE_CAP) -> list[int]:
    """Class ids for index words: equal ids iff the words act identically.

    Ids are numbered by first occurrence in ``words``.
    """
    aut = as_mealy(aut)
    if not words:
        return []
    index, succ, out = _closure(aut, words, cap)
    block = _refine(succ, out)
    renumber: dict[int, int] = {}
    return [renumber.setdefault(int(block[index[w]]), len(renumber)) for w in words]


def shortlex_words(n_states: int, max_len: int) -> Iterator[tuple[int, ...]]:
    for k in range(1, max_len + 1):
        yield from itertools.product(range(n_states), repeat=k)


def shortlex_key(w: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    return len(w), tuple(w)


def enumerate_classes(aut, max_len: int, cap: int = DEFAULT_STATE_CAP) -> list[list[tuple[str, ...]]]:
    """Partition all words of length at most ``max_len`` by their action.

    Classes and their members are in shortlex order, so ``cls[0]`` is the
    shortlex-minimal representative.
    """
    if max_len < 1:
        raise InputError("length bound must be at least 1")
    aut = as_mealy(aut)
    words = list(shortlex_words(len(aut.states), max_len))
    if len(words) > cap:
        raise ResourceError(cap, "words")
    classes: dict[int, list[tuple[str, ...]]] = {}
    for w, k in zip(words, classify_words(aut, words, cap)):
        classes.setdefault(k, []).append(aut.state_names(w))
    return list(classes.values())
