"""Command-line interface.

Exit codes: 0 success / equal / pass, 1 unequal / counterexample /
violation, 2 input error, 3 state cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .documents import parse_document, serialize_automaton
from .errors import CollapseError, InputError, ResourceError
from .free_product import FreeProductAutomaton, audit_table, build_chain, build_free_product, normalize_map
from .homomorphism import StateMap, check_homomorphism_bounded, find_idempotents, split_top_level
from .mealy import DEFAULT_STATE_CAP, act_word, as_mealy, enumerate_classes, find_witness
from .verify import check_faithful, restriction_checks

EXIT_OK, EXIT_FOUND, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str):
    try:
        return parse_document(_read(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _word(text: str) -> list[str]:
    items = [t.strip() for t in split_top_level(text)]
    if not all(items):
        raise InputError(f"empty state name in word {text!r}")
    return items


def _tape(aut, text: str) -> list[str]:
    """Comma-separated letters; a single token that is not a letter is read per character."""
    if text == "":
        return []
    items = [t.strip() for t in split_top_level(text)]
    if len(items) == 1 and items[0] not in aut._letter_index:
        return list(items[0])
    return items


def _show_tape(letters) -> str:
    letters = list(letters)
    if all(len(a) == 1 for a in letters):
        return "".join(letters)
    return ",".join(letters)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_act(args) -> int:
    aut = as_mealy(_load(args.automaton))
    print(_show_tape(act_word(aut, _word(args.word), _tape(aut, args.input))))
    return EXIT_OK


def cmd_eq(args) -> int:
    aut = _load(args.automaton)
    witness = find_witness(aut, _word(args.word1), _word(args.word2), args.state_cap)
    if witness is None:
        print("equal")
        return EXIT_OK
    print("unequal")
    print(f"witness: {_show_tape(witness)}")
    return EXIT_FOUND


def _product(args, left_path: str, right_path: str, map_text: str) -> FreeProductAutomaton:
    left, right = as_mealy(_load(left_path)), _load(right_path)
    phi = StateMap.parse(map_text)
    phi.validate(left, right)
    if not phi.normalized:
        if isinstance(right, FreeProductAutomaton):
            raise InputError("word images into a product automaton are not supported; use chain")
        right, phi = normalize_map(right, phi, args.state_cap)
    return build_free_product(left, right, phi, rename=args.rename_on_collision)


def _summary(fp: FreeProductAutomaton) -> str:
    return f"{len(fp.states)} states, {len(fp.alphabet)} symbols"


def cmd_freeproduct(args) -> int:
    fp = _product(args, args.left, args.right, args.map)
    _emit(args, serialize_automaton(fp))
    if args.out:
        print(_summary(fp))
    return EXIT_OK


def cmd_chain(args) -> int:
    factors = [as_mealy(_load(p)) for p in args.factors]
    homs = []
    for text in args.hom:
        target, sep, map_text = text.partition("@")
        if not sep or not target.strip().isdigit():
            raise InputError(f"bad --hom {text!r}; expected TARGET@MAP with a 1-based factor number")
        homs.append((int(target) - 1, StateMap.parse(map_text)))
    fp = build_chain(factors, homs, rename=args.rename_on_collision, cap=args.state_cap)
    _emit(args, serialize_automaton(fp))
    if args.out:
        print(_summary(fp))
    return EXIT_OK


def cmd_checkhom(args) -> int:
    source, target = _load(args.source), _load(args.target)
    verdict = check_homomorphism_bounded(source, target, StateMap.parse(args.map), args.max_word_len,
                                         args.state_cap)
    if verdict.passed:
        print(f"PASS at bound {verdict.bound} ({verdict.pairs_checked} equal pairs checked)")
        return EXIT_OK
    u, v = verdict.counterexample
    print(f"COUNTEREXAMPLE at bound {verdict.bound}: {','.join(u)} = {','.join(v)} "
          f"but images differ on {_show_tape(verdict.witness)}")
    return EXIT_FOUND


def cmd_idempotents(args) -> int:
    for w in find_idempotents(_load(args.automaton), args.max_word_len, args.state_cap):
        print(",".join(w))
    return EXIT_OK


def cmd_growth(args) -> int:
    classes = enumerate_classes(_load(args.automaton), args.max_word_len, args.state_cap)
    print("length\tnew\ttotal")
    total = 0
    for k in range(1, args.max_word_len + 1):
        new = sum(1 for cls in classes if len(cls[0]) == k)
        total += new
        print(f"{k}\t{new}\t{total}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if len(args.files) == 1:
        if args.map:
            raise InputError("--map applies only when verifying from two factor files")
        fp = _load(args.files[0])
        if not isinstance(fp, FreeProductAutomaton):
            raise InputError(f"{args.files[0]}: document has no construction record; pass the factor files")
    elif len(args.files) == 2:
        if not args.map:
            raise InputError("verifying from factor files needs --map")
        fp = _product(args, args.files[0], args.files[1], args.map)
    else:
        raise InputError("verify takes a product file or two factor files")

    faithful = check_faithful(fp, args.max_word_len, args.state_cap)
    restriction = restriction_checks(fp, args.max_word_len, args.depth)
    mismatches = audit_table(fp)
    report = {
        "tool": "freeprod",
        "version": __version__,
        "bounds": {"max_word_len": args.max_word_len, "depth": args.depth, "state_cap": args.state_cap},
        "pairs_checked": faithful.pairs_checked,
        "words": faithful.words,
        "action_classes": faithful.action_classes,
        "oracle_classes": faithful.oracle_classes,
        "violations_total": faithful.violations_total,
        "violations": [v.to_dict() for v in faithful.violations],
        "restriction": restriction.to_dict(),
        "table_mismatches": mismatches,
    }
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    _emit(args, text)
    failed = faithful.violations_total + restriction.violations_total + len(mismatches)
    if args.out:
        print(f"{faithful.pairs_checked} pairs checked, {faithful.violations_total} faithfulness violations, "
              f"{restriction.violations_total} restriction violations, {len(mismatches)} table mismatches")
    return EXIT_FOUND if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freeprod", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP,
                        help="maximum explored product states (default %(default)s)")
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", help="write the result to this file instead of stdout")
    rename = argparse.ArgumentParser(add_help=False)
    rename.add_argument("--rename-on-collision", action="store_true",
                        help="suffix factor state names (.L/.R, or .1... in chains)")

    def length(default):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--max-word-len", type=int, default=default, help="word length bound (default %(default)s)")
        return p

    p = sub.add_parser("act", parents=[common], help="act on a string by a state word")
    p.add_argument("automaton")
    p.add_argument("word", help="comma-separated states")
    p.add_argument("input", help="comma-separated letters, or one character per letter")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("eq", parents=[common], help="decide whether two state words are equal")
    p.add_argument("automaton")
    p.add_argument("word1")
    p.add_argument("word2")
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("freeproduct", parents=[common, output, rename], help="build the free-product automaton")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--map", required=True, help="state map, e.g. q:x,e:x")
    p.set_defaults(func=cmd_freeproduct)

    p = sub.add_parser("chain", parents=[common, output, rename], help="build an iterated free product")
    p.add_argument("factors", nargs="+")
    p.add_argument("--hom", action="append", default=[], required=True,
                   help="TARGET@MAP for each factor but the last, in order; TARGET is 1-based")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("checkhom", parents=[common, length(4)], help="bounded homomorphism check")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_checkhom)

    p = sub.add_parser("idempotents", parents=[common, length(3)], help="list idempotent elements")
    p.add_argument("automaton")
    p.set_defaults(func=cmd_idempotents)

    p = sub.add_parser("verify", parents=[common, output, rename, length(3)],
                       help="check a product automaton against the free-product oracle")
    p.add_argument("files", nargs="+", help="a product file, or two factor files with --map")
    p.add_argument("--map")
    p.add_argument("--depth", type=int, default=4, help="string length bound (default %(default)s)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("growth", parents=[common, length(3)], help="element counts by word length")
    p.add_argument("automaton")
    p.set_defaults(func=cmd_growth)
    return parser


def run_cli(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.state_cap < 1:
            raise InputError("--state-cap must be positive")
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CollapseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FOUND


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
