"""Free products of automaton semigroups as automaton semigroups."""

__version__ = "0.1.0"

from .errors import CollapseError, InputError, ResourceError
from .mealy import (
    DEFAULT_STATE_CAP,
    MealyAutomaton,
    act_state,
    act_word,
    classify_words,
    enumerate_classes,
    find_witness,
    step_product,
    words_equivalent,
)
from .homomorphism import StateMap, check_homomorphism_bounded, constant_hom, find_idempotents
from .free_product import (
    Domino,
    FreeProductAutomaton,
    Gate,
    GateKind,
    Mark,
    adjoin_word_state,
    audit_table,
    build_chain,
    build_free_product,
    normalize_map,
    product_alphabet,
)
from .verify import (
    AltDecomposition,
    Block,
    check_faithful,
    decompose,
    distinguishing_string,
    gamma_formula_check,
    oracle_equal,
    restriction_checks,
)
from .documents import parse_automaton, parse_document, serialize_automaton
