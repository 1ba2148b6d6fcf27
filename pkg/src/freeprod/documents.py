"""JSON automaton documents.

A document has ``name``, ``states``, ``alphabet`` and ``transitions`` (a list
of ``{from, input, to, output}`` records).  Product automata may carry an
extra ``construction`` record holding the left and right factor documents
and the state map, which lets them be verified from a single file.
"""

from __future__ import annotations

import json
import re

from .errors import InputError
from .free_product import FreeProductAutomaton, product_alphabet
from .mealy import MealyAutomaton, as_mealy

IDENTIFIER = re.compile(r"[A-Za-z0-9_.()$,-]+")


def _check_ident(value, where: str) -> str:
    if not isinstance(value, str) or not IDENTIFIER.fullmatch(value):
        raise InputError(f"{where}: {value!r} is not a valid identifier")
    return value


def _automaton_from_obj(obj, where: str = "document") -> MealyAutomaton:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    for key in ("states", "alphabet", "transitions"):
        if key not in obj:
            raise InputError(f"{where}: missing field {key!r}")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise InputError(f"{where}.name: expected a string")
    states = [_check_ident(q, f"{where}.states[{i}]") for i, q in enumerate(obj["states"])]
    alphabet = [_check_ident(a, f"{where}.alphabet[{i}]") for i, a in enumerate(obj["alphabet"])]
    for label, items in (("state", states), ("letter", alphabet)):
        dup = sorted({x for x in items if items.count(x) > 1})
        if dup:
            raise InputError(f"{where}: duplicate {label} names {dup}")
    known_states, known_letters = set(states), set(alphabet)
    rows: dict[tuple[str, str], tuple[str, str]] = {}
    for i, rec in enumerate(obj["transitions"]):
        loc = f"{where}.transitions[{i}]"
        if not isinstance(rec, dict) or set(rec) != {"from", "input", "to", "output"}:
            raise InputError(f"{loc}: expected exactly the fields from, input, to, output")
        for key, known, kind in (("from", known_states, "state"), ("input", known_letters, "letter"),
                                 ("to", known_states, "state"), ("output", known_letters, "letter")):
            if rec[key] not in known:
                raise InputError(f"{loc}: unknown {kind} {rec[key]!r} in field {key!r}")
        pair = (rec["from"], rec["input"])
        if pair in rows:
            raise InputError(f"{loc}: duplicate transition for {pair}")
        rows[pair] = (rec["to"], rec["output"])
    missing = [(q, a) for q in states for a in alphabet if (q, a) not in rows]
    if missing:
        raise InputError(f"{where}: missing transition for {missing[0]}" +
                         (f" and {len(missing) - 1} more" if len(missing) > 1 else ""))
    return MealyAutomaton.from_transitions(states, alphabet, rows, name)


def _obj_from_automaton(aut) -> dict:
    obj = {"name": as_mealy(aut).name, "states": list(as_mealy(aut).states),
           "alphabet": list(as_mealy(aut).alphabet),
           "transitions": [{"from": q, "input": a, "to": t, "output": b}
                           for q, a, t, b in as_mealy(aut).transitions()]}
    if isinstance(aut, FreeProductAutomaton):
        obj["construction"] = {"left": _obj_from_automaton(aut.left),
                               "right": _obj_from_automaton(aut.right),
                               "phi": dict(aut.phi)}
    return obj


def _product_from_obj(obj, where: str = "document"):
    aut = _automaton_from_obj(obj, where)
    if "construction" not in obj:
        return aut
    con = obj["construction"]
    loc = f"{where}.construction"
    if not isinstance(con, dict) or not {"left", "right", "phi"} <= set(con):
        raise InputError(f"{loc}: expected fields left, right, phi")
    left = _automaton_from_obj(con["left"], f"{loc}.left")
    right = _product_from_obj(con["right"], f"{loc}.right")
    phi = con["phi"]
    if not isinstance(phi, dict):
        raise InputError(f"{loc}.phi: expected an object")
    right_states = set(as_mealy(right).states)
    for s in left.states:
        if s not in phi:
            raise InputError(f"{loc}.phi: no image for {s!r}")
        if phi[s] not in right_states:
            raise InputError(f"{loc}.phi: image of {s!r} is not a right factor state")
    symbols = product_alphabet(left.alphabet, as_mealy(right).alphabet)
    if tuple(s.name for s in symbols) != aut.alphabet:
        raise InputError(f"{where}.alphabet: does not match the product of the factor alphabets")
    if aut.states != left.states + as_mealy(right).states:
        raise InputError(f"{where}.states: must list the left factor states then the right factor states")
    return FreeProductAutomaton(aut, left, right, {s: phi[s] for s in left.states}, symbols)


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_automaton(text: str) -> MealyAutomaton:
    """Parse a document as a plain transducer, ignoring any construction record."""
    return _automaton_from_obj(_load(text))


def parse_document(text: str):
    """Parse a document, rebuilding the product structure when it is recorded."""
    return _product_from_obj(_load(text))


def serialize_automaton(aut) -> str:
    """Canonical UTF-8 JSON: states and alphabet as listed, transitions by (from, input)."""
    return json.dumps(_obj_from_automaton(aut), indent=2, ensure_ascii=False) + "\n"
