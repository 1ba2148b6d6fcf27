"""Generator-level maps between automaton semigroups and bounded checks that
they extend to homomorphisms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError
from .mealy import (
    DEFAULT_STATE_CAP,
    as_mealy,
    classify_words,
    enumerate_classes,
    find_witness,
    words_equivalent,
)


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses, so ``D(a,b),x`` gives two items."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputError(f"unbalanced parentheses in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise InputError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return parts


@dataclass(frozen=True)
class StateMap:
    """Total map from source states to nonempty words over target states.

    A plain string image stands for a one-letter word.
    """

    mapping: Mapping[str, tuple[str, ...]]

    def __post_init__(self):
        norm = {}
        for src, img in dict(self.mapping).items():
            img = (img,) if isinstance(img, str) else tuple(img)
            if not img:
                raise InputError(f"image of {src!r} must be a nonempty word")
            norm[src] = img
        object.__setattr__(self, "mapping", norm)

    def __getitem__(self, src: str) -> tuple[str, ...]:
        try:
            return self.mapping[src]
        except KeyError:
            raise InputError(f"state map has no image for {src!r}") from None

    def image(self, word: Sequence[str]) -> tuple[str, ...]:
        return tuple(q for src in word for q in self[src])

    @property
    def normalized(self) -> bool:
        return all(len(img) == 1 for img in self.mapping.values())

    def targets(self) -> dict[str, str]:
        """The map as state-to-state, for normalized maps only."""
        if not self.normalized:
            raise InputError("state map has word images; adjoin them as states first")
        return {src: img[0] for src, img in self.mapping.items()}

    def validate(self, source, target) -> None:
        source, target = as_mealy(source), as_mealy(target)
        missing = [q for q in source.states if q not in self.mapping]
        if missing:
            raise InputError(f"state map is not total: no image for {missing}")
        extra = [q for q in self.mapping if q not in source._state_index]
        if extra:
            raise InputError(f"state map has unknown source states {extra}")
        for src, img in self.mapping.items():
            for q in img:
                if q not in target._state_index:
                    raise InputError(f"image of {src!r} uses unknown target state {q!r}")

    @classmethod
    def parse(cls, text: str) -> "StateMap":
        """Parse ``src:tgt,src:tgt``; ``tgt`` may be a word ``p+q`` of states."""
        mapping: dict[str, tuple[str, ...]] = {}
        for entry in split_top_level(text):
            entry = entry.strip()
            if not entry:
                continue
            src, sep, tgt = entry.partition(":")
            src, tgt = src.strip(), tgt.strip()
            if not sep or not src or not tgt:
                raise InputError(f"bad state map entry {entry!r}; expected source:target")
            if src in mapping:
                raise InputError(f"state map lists {src!r} twice")
            img = tuple(t.strip() for t in tgt.split("+"))
            if not all(img):
                raise InputError(f"bad image word in entry {entry!r}")
            mapping[src] = img
        return cls(mapping)

    def format(self) -> str:
        return ",".join(f"{src}:{'+'.join(img)}" for src, img in self.mapping.items())


def constant_hom(a1, a2, e) -> StateMap:
    """Send every state of ``a1`` to the word ``e`` over ``a2``."""
    e = (e,) if isinstance(e, str) else tuple(e)
    as_mealy(a2).word(e)
    return StateMap({q: e for q in as_mealy(a1).states})


@dataclass(frozen=True)
class HomomorphismVerdict:
    """Outcome of a bounded homomorphism check.

    ``passed`` only certifies words up to ``bound``; a counterexample is a
    pair ``(u, v)`` equal in the source whose images differ on ``witness``.
    """

    passed: bool
    bound: int
    pairs_checked: int
    counterexample: tuple[tuple[str, ...], tuple[str, ...]] | None = None
    witness: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        d = {"verdict": "PASS" if self.passed else "COUNTEREXAMPLE", "bound": self.bound,
             "pairs_checked": self.pairs_checked}
        if self.counterexample is not None:
            d["counterexample"] = [list(self.counterexample[0]), list(self.counterexample[1])]
            d["witness"] = list(self.witness)
        return d


def check_homomorphism_bounded(a1, a2, phi: StateMap, max_len: int,
                               cap: int = DEFAULT_STATE_CAP) -> HomomorphismVerdict:
    if max_len < 2:
        raise InputError("homomorphism checks need a length bound of at least 2")
    phi.validate(a1, a2)
    a1, a2 = as_mealy(a1), as_mealy(a2)
    classes = enumerate_classes(a1, max_len, cap)
    # Each member is compared with its class representative; that covers
    # every within-class pair by transitivity.
    images = [[a2.word(phi.image(u)) for u in cls] for cls in classes]
    flat = [img for cls in images for img in cls]
    ids = iter(classify_words(a2, flat, cap))
    checked = 0
    for cls, imgs in zip(classes, images):
        cls_ids = [next(ids) for _ in imgs]
        checked += len(cls) * (len(cls) - 1) // 2
        for u, k in zip(cls[1:], cls_ids[1:]):
            if k != cls_ids[0]:
                rep = cls[0]
                witness = find_witness(a2, phi.image(u), phi.image(rep), cap)
                return HomomorphismVerdict(False, max_len, checked, (u, rep), witness)
    return HomomorphismVerdict(True, max_len, checked)


def find_idempotents(aut, max_len: int, cap: int = DEFAULT_STATE_CAP) -> list[tuple[str, ...]]:
    """Shortlex-minimal representatives ``w`` with ``ww = w``, for ``|w| <= max_len``."""
    return [cls[0] for cls in enumerate_classes(aut, max_len, cap)
            if words_equivalent(aut, cls[0] + cls[0], cls[0], cap)]

