"""The free-product automaton of two automaton semigroups.

Given transducers for ``S`` (left, alphabet ``A``) and ``T`` (right,
alphabet ``B``) and a state map ``phi`` from left states to right states
that extends to a homomorphism ``S -> T``, the product automaton has the
disjoint union of the two state sets and runs over the alphabet

    dominoes (a, b) in four marks: unmarked, S-marked, T-marked, circled
    gates: closed, half-open, open

so ``4 |A| |B| + 3`` symbols in all.  Left states read the first component
of unmarked and S-marked dominoes (S-marking them), circle T-marked ones and
jump to their ``phi`` image through closed or half-open gates.  Right states
read the second component of S- and T-marked dominoes (T-marking them) and
open half-open gates.  Everything else is fixed.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .errors import InputError, ResourceError
from .homomorphism import StateMap
from .mealy import DEFAULT_STATE_CAP, MealyAutomaton, _step, as_mealy


class Mark(enum.Enum):
    UNMARKED = "D"
    S = "DS"
    T = "DT"
    CIRCLED = "DC"


class GateKind(enum.Enum):
    CLOSED = "G_CLOSED"
    HALF_OPEN = "G_HALF"
    OPEN = "G_OPEN"


@dataclass(frozen=True)
class Domino:
    a: str
    b: str
    mark: Mark = Mark.UNMARKED

    @property
    def name(self) -> str:
        return f"{self.mark.value}({self.a},{self.b})"

    def with_(self, a: str | None = None, b: str | None = None, mark: Mark | None = None) -> "Domino":
        return Domino(self.a if a is None else a, self.b if b is None else b, self.mark if mark is None else mark)


@dataclass(frozen=True)
class Gate:
    kind: GateKind

    @property
    def name(self) -> str:
        return self.kind.value


Symbol = Union[Domino, Gate]

CLOSED, HALF_OPEN, OPEN = Gate(GateKind.CLOSED), Gate(GateKind.HALF_OPEN), Gate(GateKind.OPEN)


def symbol_kind(sym: Symbol) -> str:
    return sym.mark.value if isinstance(sym, Domino) else sym.kind.value


def product_alphabet(left_alphabet: Sequence[str], right_alphabet: Sequence[str]) -> tuple[Symbol, ...]:
    """Dominoes grouped by mark, then the closed, half-open and open gates."""
    dominoes = tuple(Domino(a, b, m) for m in Mark for a in left_alphabet for b in right_alphabet)
    return dominoes + (CLOSED, HALF_OPEN, OPEN)


@dataclass(frozen=True)
class FreeProductAutomaton:
    """A product automaton together with the factors it was built from.

    ``right`` is itself a ``FreeProductAutomaton`` for iterated products.
    States of ``underlying`` are the left states followed by the right ones.
    """

    underlying: MealyAutomaton
    left: MealyAutomaton
    right: Union[MealyAutomaton, "FreeProductAutomaton"]
    phi: Mapping[str, str]
    symbols: tuple[Symbol, ...]
    _symbol_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "phi", dict(self.phi))
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if tuple(s.name for s in self.symbols) != self.underlying.alphabet:
            raise InputError("symbol list does not match the product alphabet")
        if self.underlying.states != self.left.states + self.right_mealy.states:
            raise InputError("product states must be the left states followed by the right states")
        object.__setattr__(self, "_symbol_index", {s: i for i, s in enumerate(self.symbols)})

    @property
    def right_mealy(self) -> MealyAutomaton:
        return as_mealy(self.right)

    @property
    def states(self) -> tuple[str, ...]:
        return self.underlying.states

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.underlying.alphabet

    @property
    def n_left(self) -> int:
        return len(self.left.states)

    @property
    def left_states(self) -> frozenset[str]:
        return frozenset(self.left.states)

    @property
    def right_states(self) -> frozenset[str]:
        return frozenset(self.right_mealy.states)

    def is_left(self, state_idx: int) -> bool:
        return state_idx < self.n_left

    def symbol_index(self, sym: Symbol) -> int:
        try:
            return self._symbol_index[sym]
        except KeyError:
            raise InputError(f"{sym!r} is not a symbol of this product") from None

    def symbol(self, name: str) -> Symbol:
        return self.symbols[self.underlying.letter_index(name)]

    def names(self, syms: Sequence[Symbol]) -> tuple[str, ...]:
        return tuple(s.name for s in syms)

    def parse_symbols(self, names: Sequence[str]) -> tuple[Symbol, ...]:
        return tuple(self.symbol(n) for n in names)

    def with_transition(self, q: str, letter: str, to: str, out: str) -> "FreeProductAutomaton":
        """Copy with one table entry overwritten; used to probe the checks."""
        return dataclasses.replace(self, underlying=self.underlying.with_transition(q, letter, to, out))

    def renamed(self, suffix: str) -> "FreeProductAutomaton":
        return FreeProductAutomaton(
            self.underlying.renamed(suffix),
            self.left.renamed(suffix),
            self.right.renamed(suffix),
            {s + suffix: t + suffix for s, t in self.phi.items()},
            self.symbols,
        )


def expected_transition(left: MealyAutomaton, right: MealyAutomaton, phi: Mapping[str, str],
                        q: str, sym: Symbol) -> tuple[str, Symbol]:
    """The construction's table entry for state ``q`` on ``sym``."""
    if q in left._state_index:
        if isinstance(sym, Gate):
            if sym.kind is GateKind.OPEN:
                return q, sym
            return phi[q], HALF_OPEN
        if sym.mark in (Mark.UNMARKED, Mark.S):
            q0, a0 = left.transition(q, sym.a)
            return q0, sym.with_(a=a0, mark=Mark.S)
        if sym.mark is Mark.T:
            return q, sym.with_(mark=Mark.CIRCLED)
        return q, sym
    if isinstance(sym, Gate):
        if sym.kind is GateKind.HALF_OPEN:
            return q, OPEN
        return q, sym
    if sym.mark in (Mark.S, Mark.T):
        q0, b0 = right.transition(q, sym.b)
        return q0, sym.with_(b=b0, mark=Mark.T)
    return q, sym


def row_kind(fp: FreeProductAutomaton, q: str, sym: Symbol) -> str:
    """Which of the 14 table rows an entry belongs to, e.g. ``L:DS``."""
    side = "L" if fp.underlying.state_index(q) < fp.n_left else "R"
    return f"{side}:{symbol_kind(sym)}"


def audit_table(fp: FreeProductAutomaton) -> list[dict]:
    """Entries of the product table that deviate from the construction."""
    bad = []
    for q, letter, to, out in fp.underlying.transitions():
        sym = fp.symbol(letter)
        exp_to, exp_out = expected_transition(fp.left, fp.right_mealy, fp.phi, q, sym)
        if (to, out) != (exp_to, exp_out.name):
            bad.append({"state": q, "input": letter, "expected": [exp_to, exp_out.name], "actual": [to, out]})
    return bad


def _rename_map(phi: StateMap, src_suffix: str, dst_suffix: str) -> StateMap:
    return StateMap({s + src_suffix: tuple(t + dst_suffix for t in img) for s, img in phi.mapping.items()})


def build_free_product(a1: MealyAutomaton, a2, phi: StateMap, rename: bool = False) -> FreeProductAutomaton:
    """Product automaton for ``S * T`` from factors ``a1``, ``a2`` and ``phi: S -> T``.

    ``phi`` must send each state of ``a1`` to a single state of ``a2``; use
    :func:`normalize_map` first when images are longer words.  With
    ``rename`` every left state gets the suffix ``.L`` and every right
    state ``.R``; otherwise shared names are an error.
    """
    if isinstance(a1, FreeProductAutomaton):
        a1 = a1.underlying
    phi.validate(a1, a2)
    if rename:
        a1, a2, phi = a1.renamed(".L"), a2.renamed(".R"), _rename_map(phi, ".L", ".R")
    right = as_mealy(a2)
    shared = sorted(set(a1.states) & set(right.states))
    if shared:
        raise InputError(f"factor state names collide: {shared}; enable renaming (--rename-on-collision) to disambiguate")
    targets = phi.targets()

    symbols = product_alphabet(a1.alphabet, right.alphabet)
    states = a1.states + right.states
    transitions = {}
    for q in states:
        for sym in symbols:
            to, out = expected_transition(a1, right, targets, q, sym)
            transitions[q, sym.name] = (to, out.name)
    name = f"{a1.name or 'S'}*{right.name or 'T'}"
    underlying = MealyAutomaton.from_transitions(states, [s.name for s in symbols], transitions, name)
    return FreeProductAutomaton(underlying, a1, a2, targets, symbols)


def _adjoin(aut: MealyAutomaton, w, name: str, cap: int) -> tuple[MealyAutomaton, dict[str, tuple[str, ...]]]:
    aut = as_mealy(aut)
    root = aut.word(w)

    def tuple_name(t):
        return f"{name}({','.join(aut.state_names(t))})"

    names = {root: name}
    order = [root]
    rows = []
    i = 0
    while i < len(order):
        p = order[i]
        row = []
        for c in range(len(aut.alphabet)):
            nxt, out = _step(aut.table, p, c)
            if len(nxt) == 1:
                target = aut.states[nxt[0]]
            else:
                if nxt not in names:
                    if len(order) >= cap:
                        raise ResourceError(cap)
                    names[nxt] = tuple_name(nxt)
                    order.append(nxt)
                target = names[nxt]
            row.append((target, aut.alphabet[out]))
        rows.append(row)
        i += 1

    new_states = [names[p] for p in order]
    clash = sorted(set(aut.states).intersection(new_states))
    if clash:
        raise InputError(f"adjoined state names already in use: {clash}")
    transitions = {(q, a): (t, b) for q, a, t, b in aut.transitions()}
    for q, row in zip(new_states, rows):
        for a, entry in zip(aut.alphabet, row):
            transitions[q, a] = entry
    extended = MealyAutomaton.from_transitions(aut.states + tuple(new_states), aut.alphabet, transitions, aut.name)
    return extended, {names[p]: aut.state_names(p) for p in order}


def adjoin_word_state(aut: MealyAutomaton, w, name: str, cap: int = DEFAULT_STATE_CAP) -> MealyAutomaton:
    """Extend ``aut`` with a state ``name`` acting as the word ``w``.

    Every product tuple reachable from ``w`` of length two or more becomes a
    state too, named ``name(p,q,...)``; one-letter tuples reuse the original
    states.  The added states act exactly as the products they stand for.
    """
    return _adjoin(aut, w, name, cap)[0]


def _normalize(target, phi: StateMap, cap: int):
    target = as_mealy(target)
    adjoined: dict[tuple[str, ...], str] = {}
    expansions: dict[str, tuple[str, ...]] = {}
    mapping = {}
    for src, img in phi.mapping.items():
        if len(img) == 1:
            mapping[src] = img
            continue
        if img not in adjoined:
            base = candidate = "_".join(img)
            k = 2
            while candidate in target._state_index or any(s.startswith(candidate + "(") for s in target.states):
                candidate = f"{base}_{k}"
                k += 1
            target, new = _adjoin(target, img, candidate, cap)
            expansions.update(new)
            adjoined[img] = candidate
        mapping[src] = (adjoined[img],)
    return target, StateMap(mapping), expansions


def normalize_map(target: MealyAutomaton, phi: StateMap, cap: int = DEFAULT_STATE_CAP) -> tuple[MealyAutomaton, StateMap]:
    """Adjoin a state for every word image of ``phi`` so all images are single states."""
    target, phi, _ = _normalize(target, phi, cap)
    return target, phi


def build_chain(factors: Sequence[MealyAutomaton], homs: Sequence[tuple[int, StateMap]],
                rename: bool = False, cap: int = DEFAULT_STATE_CAP) -> FreeProductAutomaton:
    """Iterated free product ``S_1 * ... * S_n``.

    ``homs[i]`` is ``(j, phi_i)`` with ``j > i`` (0-based) and ``phi_i`` a map
    from factor ``i`` into factor ``j``.  The product is folded from the right:
    ``S_{n-1} * S_n`` first, then each earlier factor is prepended, its map
    landing in the states of factor ``j`` that the partial product contains.
    With ``rename`` the states of factor ``i`` get the suffix ``.i`` (1-based).
    """
    factors = [as_mealy(f) for f in factors]
    n = len(factors)
    if n < 2:
        raise InputError("a chain needs at least two factors")
    if len(homs) != n - 1:
        raise InputError(f"a chain of {n} factors needs {n - 1} maps, got {len(homs)}")
    # States adjoined to a factor stand for words over its original states;
    # maps out of that factor are extended to them multiplicatively.
    expansions: list[dict[str, tuple[str, ...]]] = [{} for _ in factors]
    maps: list[tuple[int, StateMap]] = []
    for i, (j, phi) in enumerate(homs):
        if not i < j < n:
            raise InputError(f"chain step {i + 1}: map target {j + 1} must be a later factor")
        try:
            if expansions[i]:
                mapping = dict(phi.mapping)
                for q, word in expansions[i].items():
                    mapping[q] = phi.image(word)
                phi = StateMap(mapping)
            phi.validate(factors[i], factors[j])
            factors[j], phi, new = _normalize(factors[j], phi, cap)
        except InputError as exc:
            raise InputError(f"chain step {i + 1}: {exc}") from None
        for q, word in new.items():
            expansions[j][q] = tuple(x for p in word for x in expansions[j].get(p, (p,)))
        maps.append((j, phi))
    if rename:
        maps = [(j, _rename_map(phi, f".{i + 1}", f".{j + 1}")) for i, (j, phi) in enumerate(maps)]
        factors = [f.renamed(f".{i + 1}") for i, f in enumerate(factors)]

    product = factors[-1]
    for i in range(n - 2, -1, -1):
        try:
            product = build_free_product(factors[i], product, maps[i][1])
        except InputError as exc:
            raise InputError(f"chain step {i + 1}: {exc}") from None
    return product
