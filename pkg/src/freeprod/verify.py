"""Evidence that a product automaton generates the free product of its factors.

The oracle here never looks at the product table: two words are equal in
``S * T`` exactly when their alternating block decompositions have the same
shape and matching blocks are equal in the factor that owns them.  The
checks compare that oracle against the product automaton's own word problem
and replay the steps of the faithfulness argument on concrete strings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import CollapseError, InputError
from .free_product import (
    CLOSED,
    OPEN,
    Domino,
    FreeProductAutomaton,
    Gate,
    GateKind,
    Mark,
    row_kind,
)
from .mealy import (
    DEFAULT_STATE_CAP,
    _run,
    act_word,
    classify_words,
    find_witness,
    shortlex_words,
    words_equivalent,
)

LEFT, RIGHT = "L", "R"


@dataclass(frozen=True)
class Block:
    tag: str
    word: tuple[str, ...]


@dataclass(frozen=True)
class AltDecomposition:
    """Maximal runs of left (``L``) and right (``R``) states, in order."""

    blocks: tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(b if isinstance(b, Block) else Block(b[0], tuple(b[1])) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for b in blocks:
            if b.tag not in (LEFT, RIGHT):
                raise InputError(f"block tag must be L or R, got {b.tag!r}")
            if not b.word:
                raise InputError("blocks must be nonempty")
        for b1, b2 in zip(blocks, blocks[1:]):
            if b1.tag == b2.tag:
                raise InputError("adjacent blocks must alternate between L and R")

    @property
    def tags(self) -> str:
        return "".join(b.tag for b in self.blocks)

    def word(self) -> tuple[str, ...]:
        return tuple(q for b in self.blocks for q in b.word)

    def shape(self) -> tuple[tuple[str, ...], list[tuple[tuple[str, ...], tuple[str, ...]]]]:
        """``(v0, [(u1, v1), ..., (un, vn)])`` with ``v0`` and ``vn`` possibly empty."""
        blocks = list(self.blocks)
        v0: tuple[str, ...] = ()
        if blocks and blocks[0].tag == RIGHT:
            v0 = blocks.pop(0).word
        pairs = []
        for i in range(0, len(blocks), 2):
            u = blocks[i].word
            v = blocks[i + 1].word if i + 1 < len(blocks) else ()
            pairs.append((u, v))
        return v0, pairs


def decompose(fp: FreeProductAutomaton, w: Sequence[str]) -> AltDecomposition:
    w = tuple(w)
    idx = fp.underlying.word(w)
    blocks = []
    for is_left, run in itertools.groupby(zip(w, idx), key=lambda qi: fp.is_left(qi[1])):
        blocks.append(Block(LEFT if is_left else RIGHT, tuple(q for q, _ in run)))
    return AltDecomposition(tuple(blocks))


def _right_equal(fp: FreeProductAutomaton, v1, v2, cap: int) -> bool:
    if isinstance(fp.right, FreeProductAutomaton):
        return oracle_equal(fp.right, v1, v2, cap)
    return words_equivalent(fp.right, v1, v2, cap)


def oracle_equal(fp: FreeProductAutomaton, w1, w2, cap: int = DEFAULT_STATE_CAP) -> bool:
    """Equality of two words in the free product of the factors."""
    d1, d2 = decompose(fp, w1), decompose(fp, w2)
    if d1.tags != d2.tags:
        return False
    for b1, b2 in zip(d1.blocks, d2.blocks):
        if b1.tag == LEFT:
            if not words_equivalent(fp.left, b1.word, b2.word, cap):
                return False
        elif not _right_equal(fp, b1.word, b2.word, cap):
            return False
    return True


def _oracle_keys(fp: FreeProductAutomaton, words: Sequence[tuple[str, ...]], cap: int) -> list:
    decs = [decompose(fp, w).blocks for w in words]
    lefts = list(dict.fromkeys(b.word for d in decs for b in d if b.tag == LEFT))
    rights = list(dict.fromkeys(b.word for d in decs for b in d if b.tag == RIGHT))
    left_ids = dict(zip(lefts, classify_words(fp.left, [fp.left.word(u) for u in lefts], cap)))
    if isinstance(fp.right, FreeProductAutomaton):
        right_ids = dict(zip(rights, _oracle_keys(fp.right, rights, cap)))
    else:
        right_ids = dict(zip(rights, classify_words(fp.right, [fp.right.word(v) for v in rights], cap)))
    return [tuple((b.tag, (left_ids if b.tag == LEFT else right_ids)[b.word]) for b in d) for d in decs]


def oracle_classes(fp: FreeProductAutomaton, words: Sequence[Sequence[str]], cap: int = DEFAULT_STATE_CAP) -> list[int]:
    """Free-product class id per word, numbered by first occurrence."""
    keys = _oracle_keys(fp, [tuple(w) for w in words], cap)
    ids: dict = {}
    return [ids.setdefault(k, len(ids)) for k in keys]


COLLAPSE = "collapse"
SEPARATION_FAILURE = "separation-failure"


@dataclass(frozen=True)
class Violation:
    lhs: tuple[str, ...]
    rhs: tuple[str, ...]
    direction: str
    witness: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        return {"lhs": list(self.lhs), "rhs": list(self.rhs),
                "witness": None if self.witness is None else list(self.witness),
                "direction": self.direction}


@dataclass
class FaithfulnessReport:
    max_word_len: int
    words: int
    pairs_checked: int
    action_classes: int
    oracle_classes: int
    violations: list[Violation] = field(default_factory=list)
    violations_total: int = 0

    @property
    def passed(self) -> bool:
        return self.violations_total == 0

    def to_dict(self) -> dict:
        return {
            "bounds": {"max_word_len": self.max_word_len},
            "words": self.words,
            "pairs_checked": self.pairs_checked,
            "action_classes": self.action_classes,
            "oracle_classes": self.oracle_classes,
            "violations_total": self.violations_total,
            "violations": [v.to_dict() for v in self.violations],
        }


def check_faithful(fp: FreeProductAutomaton, max_len: int, cap: int = DEFAULT_STATE_CAP,
                   max_listed: int = 100) -> FaithfulnessReport:
    """Compare product-automaton equality with the oracle on all word pairs.

    A *collapse* is an oracle-distinct pair with equal action; a
    *separation failure* is an oracle-equal pair with distinct action and
    comes with a witness string.  At most ``max_listed`` violations are
    listed, in shortlex order of the pair; ``violations_total`` counts all.
    """
    if max_len < 1:
        raise InputError("length bound must be at least 1")
    idx_words = list(shortlex_words(len(fp.states), max_len))
    words = [fp.underlying.state_names(w) for w in idx_words]
    action = classify_words(fp, idx_words, cap)
    oracle = oracle_classes(fp, words, cap)
    n = len(words)

    bad: list[tuple[int, int, str]] = []
    for ids, other, direction in ((action, oracle, COLLAPSE), (oracle, action, SEPARATION_FAILURE)):
        groups: dict[int, list[int]] = {}
        for i, k in enumerate(ids):
            groups.setdefault(k, []).append(i)
        for members in groups.values():
            for i, j in itertools.combinations(members, 2):
                if other[i] != other[j]:
                    bad.append((i, j, direction))
    bad.sort()
    listed = []
    for i, j, direction in bad[:max_listed]:
        witness = find_witness(fp, words[i], words[j], cap) if direction == SEPARATION_FAILURE else None
        listed.append(Violation(words[i], words[j], direction, witness))
    return FaithfulnessReport(max_len, n, n * (n - 1) // 2, len(set(action)), len(set(oracle)), listed, len(bad))


def _left_alphabet(fp):
    return fp.left.alphabet


def _right_alphabet(fp):
    return fp.right_mealy.alphabet


def _dominoes(alpha: Sequence[str], beta: Sequence[str], mark: Mark) -> list[Domino]:
    if len(alpha) != len(beta):
        raise InputError("domino runs need first and second components of equal length")
    return [Domino(a, b, mark) for a, b in zip(alpha, beta)]


def gamma_string(fp: FreeProductAutomaton, alphas, betas) -> tuple[str, ...]:
    """Unmarked domino runs ``(alpha_i, beta_i)`` separated by closed gates."""
    syms: list = []
    for i, (alpha, beta) in enumerate(zip(alphas, betas)):
        if i:
            syms.append(CLOSED)
        syms.extend(_dominoes(tuple(alpha), tuple(beta), Mark.UNMARKED))
    return fp.names(syms)


def gamma_image(fp: FreeProductAutomaton, d: AltDecomposition, alphas, betas) -> tuple[str, ...]:
    """Predicted image of :func:`gamma_string` under the word of ``d``.

    Run ``i`` becomes ``(alpha_i . u_i, beta_i . v_i)``, circled for ``i < n``
    and T-marked for the last run (S-marked when the word ends inside a
    left block); every gate ends up open.
    """
    v0, pairs = d.shape()
    n = len(pairs)
    if n < 1:
        raise InputError("the decomposition needs at least one left block")
    if len(alphas) != n or len(betas) != n:
        raise InputError(f"need {n} first-component and {n} second-component strings")
    syms: list = []
    for i, ((u, v), alpha, beta) in enumerate(zip(pairs, alphas, betas), 1):
        alpha, beta = tuple(alpha), tuple(beta)
        if len(alpha) != len(beta):
            raise InputError(f"run {i}: components have different lengths")
        a_out = act_word(fp.left, u, alpha) if alpha else ()
        b_out = act_word(fp.right, v, beta) if v and beta else beta
        if i < n:
            mark = Mark.CIRCLED
        else:
            mark = Mark.T if v else Mark.S
        if i > 1:
            syms.append(OPEN)
        syms.extend(_dominoes(a_out, b_out, mark))
    return fp.names(syms)


def gamma_formula_check(fp: FreeProductAutomaton, d: AltDecomposition, alphas, betas) -> bool:
    """Act on the gated domino string by ``d``'s word and compare with the prediction."""
    expected = gamma_image(fp, d, alphas, betas)
    gamma = gamma_string(fp, alphas, betas)
    return act_word(fp, d.word(), gamma) == expected


def _compare(aut, x: tuple, y: tuple, equal, cap: int) -> tuple[bool, tuple | None]:
    """(differ, witness) for two possibly empty factor words."""
    if not x and not y:
        return False, None
    if x and y and equal(x, y):
        return False, None
    return True, find_witness(aut, x, y, cap)


def separator_recipe(fp: FreeProductAutomaton, w1, w2, cap: int = DEFAULT_STATE_CAP) -> tuple[str, ...] | None:
    """Candidate separator built from the first block where the words differ.

    Returns None when the words are equal in the free product.  The result
    is not re-simulated; see :func:`distinguishing_string`.
    """
    s1, s2 = decompose(fp, w1).shape(), decompose(fp, w2).shape()
    if len(s1[1]) < len(s2[1]):
        s1, s2 = s2, s1
    (v0, pairs), (v0_, pairs_) = s1, s2
    pairs_ = pairs_ + [((), ())] * (len(pairs) - len(pairs_))
    left_eq = lambda x, y: words_equivalent(fp.left, x, y, cap)
    right_eq = lambda x, y: _right_equal(fp, x, y, cap)
    a0, b0 = _left_alphabet(fp)[0], _right_alphabet(fp)[0]

    differ, beta = _compare(fp.right, v0, v0_, right_eq, cap)
    if differ:
        beta = beta or (b0,)
        return fp.names(_dominoes((a0,) * len(beta), beta, Mark.T))
    for k, ((u, v), (u_, v_)) in enumerate(zip(pairs, pairs_), 1):
        du, alpha = _compare(fp.left, u, u_, left_eq, cap)
        dv, beta = _compare(fp.right, v, v_, right_eq, cap)
        if du or dv:
            alpha, beta = tuple(alpha or ()), tuple(beta or ())
            m = max(len(alpha), len(beta), 1)
            alpha += (a0,) * (m - len(alpha))
            beta += (b0,) * (m - len(beta))
            return fp.names([CLOSED] * (k - 1) + _dominoes(alpha, beta, Mark.UNMARKED))
    return None


def distinguishing_string(fp: FreeProductAutomaton, w1, w2, cap: int = DEFAULT_STATE_CAP) -> tuple[str, ...]:
    """A product-alphabet string on which two free-product-distinct words act differently.

    Tries the block-by-block recipe first and falls back to a shortest
    separator from breadth-first search over state pairs.
    """
    w1, w2 = tuple(w1), tuple(w2)
    if oracle_equal(fp, w1, w2, cap):
        raise InputError("words are equal in the free product; nothing separates them")
    gamma = separator_recipe(fp, w1, w2, cap)
    if gamma is not None and act_word(fp, w1, gamma) != act_word(fp, w2, gamma):
        return gamma
    gamma = find_witness(fp, w1, w2, cap)
    if gamma is None:
        raise CollapseError(f"{w1} and {w2} differ in the free product but act identically")
    return gamma


@dataclass
class RestrictionReport:
    max_word_len: int
    depth: int
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[dict] = field(default_factory=list)
    violations_total: int = 0

    @property
    def passed(self) -> bool:
        return self.violations_total == 0

    def to_dict(self) -> dict:
        return {
            "bounds": {"max_word_len": self.max_word_len, "depth": self.depth},
            "checked": dict(self.checked),
            "violations_total": self.violations_total,
            "violations": list(self.violations),
        }


def _strings(symbols: Sequence, depth: int) -> Iterator[tuple]:
    for k in range(depth + 1):
        yield from itertools.product(symbols, repeat=k)


def _factor_words(states: Sequence[str], max_len: int) -> Iterator[tuple[str, ...]]:
    for w in shortlex_words(len(states), max_len):
        yield tuple(states[i] for i in w)


def restriction_checks(fp: FreeProductAutomaton, max_len: int, depth: int,
                       max_listed: int = 100) -> RestrictionReport:
    """Exhaustive checks of how each factor acts on each kind of symbol.

    ``right_on_T``        right words on T-marked runs act by the right factor
    ``right_S_as_T``      S-marked dominoes are read by right words like T-marked ones
    ``left_on_S``         left words on S-marked runs act by the left factor
    ``right_fixes``       right words fix unmarked dominoes and closed gates
    ``left_on_unmarked``  left words S-mark unmarked runs, acting on first components
    ``inert``             every word fixes circled dominoes and open gates
    """
    if max_len < 1 or depth < 0:
        raise InputError("bounds must be positive")
    report = RestrictionReport(max_len, depth)
    A, B = _left_alphabet(fp), _right_alphabet(fp)
    pairs = [(a, b) for a in A for b in B]
    table = fp.underlying.table
    sym_index = fp.symbol_index
    left_words = list(_factor_words(fp.left.states, max_len))
    right_words = list(_factor_words(fp.right_mealy.states, max_len))
    all_words = list(_factor_words(fp.states, max_len))

    def run(word, syms):
        out = _run(table, fp.underlying.word(word), [sym_index(s) for s in syms])
        return tuple(fp.symbols[o] for o in out)

    def record(check, word, syms, expected, actual):
        report.violations_total += 1
        if len(report.violations) < max_listed:
            report.violations.append({
                "check": check, "word": list(word), "input": list(fp.names(syms)),
                "expected": list(fp.names(expected)), "actual": list(fp.names(actual)),
            })

    def sweep(check, words, symbols, predict):
        count = 0
        for word in words:
            for syms in _strings(symbols, depth):
                expected = predict(word, syms)
                actual = run(word, syms)
                count += 1
                if actual != expected:
                    record(check, word, syms, expected, actual)
        report.checked[check] = count

    def by_right(word, syms):
        beta = tuple(s.b for s in syms)
        out = act_word(fp.right, word, beta) if beta else ()
        return tuple(Domino(s.a, b, Mark.T) for s, b in zip(syms, out))

    def by_left(word, syms):
        alpha = tuple(s.a for s in syms)
        out = act_word(fp.left, word, alpha) if alpha else ()
        return tuple(Domino(a, s.b, Mark.S) for s, a in zip(syms, out))

    def fixed(word, syms):
        return tuple(syms)

    t_marked = [Domino(a, b, Mark.T) for a, b in pairs]
    s_marked = [Domino(a, b, Mark.S) for a, b in pairs]
    unmarked = [Domino(a, b, Mark.UNMARKED) for a, b in pairs]
    circled = [Domino(a, b, Mark.CIRCLED) for a, b in pairs]
    sweep("right_on_T", right_words, t_marked, by_right)
    sweep("right_S_as_T", right_words, s_marked + t_marked, by_right)
    sweep("left_on_S", left_words, s_marked, by_left)
    sweep("right_fixes", right_words, unmarked + [CLOSED], fixed)
    sweep("left_on_unmarked", left_words, unmarked, by_left)
    sweep("inert", all_words, circled + [OPEN], fixed)
    return report


ROW_KINDS = tuple(f"{side}:{kind}" for side in (LEFT, RIGHT)
                  for kind in [m.value for m in Mark] + [g.value for g in GateKind])

_NEXT_MARK = dict(zip(Mark, list(Mark)[1:] + list(Mark)[:1]))
_NEXT_GATE = dict(zip(GateKind, list(GateKind)[1:] + list(GateKind)[:1]))


def mutants(fp: FreeProductAutomaton) -> Iterator[tuple[str, str, str, FreeProductAutomaton]]:
    """One corrupted copy per table row kind.

    The first entry of each kind (first state of the side, first symbol of
    the kind) keeps its next state but has its output shifted to the next
    mark, or the next gate kind.  Yields ``(kind, state, input, mutant)``.
    """
    seen: set[str] = set()
    for q, letter, to, out in fp.underlying.transitions():
        kind = row_kind(fp, q, fp.symbol(letter))
        if kind in seen:
            continue
        seen.add(kind)
        sym = fp.symbol(out)
        if isinstance(sym, Domino):
            bad = sym.with_(mark=_NEXT_MARK[sym.mark])
        else:
            bad = Gate(_NEXT_GATE[sym.kind])
        yield kind, q, letter, fp.with_transition(q, letter, to, bad.name)
