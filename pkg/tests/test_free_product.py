import itertools

import pytest

from freeprod.errors import InputError
from freeprod.free_product import (
    CLOSED,
    HALF_OPEN,
    OPEN,
    Domino,
    Mark,
    adjoin_word_state,
    audit_table,
    build_chain,
    build_free_product,
    normalize_map,
    product_alphabet,
)
from freeprod.homomorphism import StateMap, constant_hom
from freeprod.mealy import act_word, words_equivalent

from .oracles import agree_up_to


def test_alphabet_size(rr, RZ2, ADD):
    assert len(rr.states) == 4
    assert len(rr.alphabet) == 4 * 2 * 2 + 3 == 19
    assert len(product_alphabet("abc", "01")) == 4 * 3 * 2 + 3
    assert rr.left_states == {"x.L", "y.L"} and rr.right_states == {"x.R", "y.R"}


def test_symbol_names():
    assert Domino("a", "b").name == "D(a,b)"
    assert Domino("a", "b", Mark.S).name == "DS(a,b)"
    assert Domino("a", "b", Mark.T).name == "DT(a,b)"
    assert Domino("a", "b", Mark.CIRCLED).name == "DC(a,b)"
    assert [g.name for g in (CLOSED, HALF_OPEN, OPEN)] == ["G_CLOSED", "G_HALF", "G_OPEN"]


def test_table_rows_by_hand(rr):
    t = rr.underlying.transition
    # left x writes a in the first component
    assert t("x.L", "D(b,b)") == ("x.L", "DS(a,b)")
    assert t("x.L", "DS(b,a)") == ("x.L", "DS(a,a)")
    assert t("x.L", "DT(b,a)") == ("x.L", "DC(b,a)")
    assert t("y.L", "DC(a,a)") == ("y.L", "DC(a,a)")
    assert t("y.L", "G_CLOSED") == ("x.R", "G_HALF")
    assert t("y.L", "G_HALF") == ("x.R", "G_HALF")
    assert t("y.L", "G_OPEN") == ("y.L", "G_OPEN")
    # right y writes b in the second component
    assert t("y.R", "D(a,a)") == ("y.R", "D(a,a)")
    assert t("y.R", "DS(a,a)") == ("y.R", "DT(a,b)")
    assert t("y.R", "DT(b,a)") == ("y.R", "DT(b,b)")
    assert t("y.R", "DC(b,a)") == ("y.R", "DC(b,a)")
    assert t("x.R", "G_CLOSED") == ("x.R", "G_CLOSED")
    assert t("x.R", "G_HALF") == ("x.R", "G_OPEN")
    assert t("x.R", "G_OPEN") == ("x.R", "G_OPEN")


def test_table_reads_factor_transitions(ar):
    # ADD's q on 0 goes to e writing 1; the left copy must follow that
    t = ar.underlying.transition
    assert t("q.L", "D(0,a)") == ("e.L", "DS(1,a)")
    assert t("q.L", "DS(1,b)") == ("q.L", "DS(0,b)")
    assert audit_table(ar) == []


def test_closure_properties(rr, ar):
    for fp in (rr, ar):
        left = fp.left_states
        for q, letter, to, out in fp.underlying.transitions():
            sym = fp.symbol(letter)
            if q in left:
                if sym in (CLOSED, HALF_OPEN):
                    assert to == fp.phi[q]
                else:
                    assert to in left
            else:
                assert to in fp.right_states
            if sym == OPEN or (isinstance(sym, Domino) and sym.mark is Mark.CIRCLED):
                assert (to, out) == (q, letter)


def test_collision_needs_rename(RZ2):
    with pytest.raises(InputError, match="collide"):
        build_free_product(RZ2, RZ2, constant_hom(RZ2, RZ2, "x"))


def test_map_must_be_single_states(RZ2, ADD):
    with pytest.raises(InputError, match="adjoin"):
        build_free_product(RZ2, ADD, StateMap({"x": ("q", "q"), "y": "e"}))
    with pytest.raises(InputError, match="unknown target"):
        build_free_product(RZ2, ADD, StateMap({"x": "z", "y": "e"}))
    with pytest.raises(InputError, match="not total"):
        build_free_product(RZ2, ADD, StateMap({"x": "q"}))


def test_right_factor_restriction(rr, RZ2):
    # every right word acts on T-marked strings by RZ2 on the second components
    for w in itertools.product(["x", "y"], repeat=2):
        for alpha, beta in itertools.product(itertools.product("ab", repeat=3), repeat=2):
            tape = [Domino(a, b, Mark.T).name for a, b in zip(alpha, beta)]
            out = act_word(rr, [q + ".R" for q in w], tape)
            expected = [Domino(a, b, Mark.T).name for a, b in zip(alpha, act_word(RZ2, w, beta))]
            assert list(out) == expected


def test_adjoin_single_state_duplicates_row(ADD):
    ext = adjoin_word_state(ADD, ["q"], "w")
    assert ext.states == ("q", "e", "w")
    for a in ADD.alphabet:
        assert ext.transition("w", a) == ADD.transition("q", a)


def test_adjoin_preserves_action(RZ2, ADD):
    ext = adjoin_word_state(RZ2, ["x", "y"], "w")
    assert words_equivalent(ext, ["w"], ["y"])
    ext = adjoin_word_state(ADD, ["q", "q"], "w")
    assert ext.states == ("q", "e", "w", "w(e,q)", "w(q,e)", "w(e,e)")
    assert words_equivalent(ext, ["w"], ["q", "q"])
    assert agree_up_to(ext, ["w"], ["q", "q"], 5)
    # acting as +2: 1 -> 3 in reverse binary on three bits
    assert act_word(ext, ["w"], "100") == "110"
    for q in ext.states[2:]:
        assert any(words_equivalent(ext, [q], list(t)) for t in itertools.product("qe", repeat=2))


def test_adjoin_rejects_name_clash(ADD):
    with pytest.raises(InputError, match="already in use"):
        adjoin_word_state(ADD, ["q", "q"], "e")


def test_normalize_map(RZ2, ADD):
    target, phi = normalize_map(ADD, constant_hom(RZ2, ADD, ["q", "q"]))
    assert phi.normalized
    assert phi.targets() == {"x": "q_q", "y": "q_q"}
    assert words_equivalent(target, ["q_q"], ["q", "q"])


def test_chain_sizes(RZ2):
    ch = build_chain([RZ2] * 3, [(1, constant_hom(RZ2, RZ2, "x")), (2, constant_hom(RZ2, RZ2, "x"))], rename=True)
    assert ch.states == ("x.1", "y.1", "x.2", "y.2", "x.3", "y.3")
    assert len(ch.right.alphabet) == 19
    assert len(ch.alphabet) == 4 * 2 * 19 + 3 == 155
    assert ch.phi == {"x.1": "x.2", "y.1": "x.2"}
    assert audit_table(ch) == [] and audit_table(ch.right) == []


def test_chain_base_case_matches_pair(RZ2, ADD):
    phi = constant_hom(ADD, RZ2, "x")
    assert build_chain([ADD, RZ2], [(1, phi)]) == build_free_product(ADD, RZ2, phi)


def test_chain_maps_may_skip_a_factor(RZ2, ADD):
    # ADD -> third factor, RZ2 -> third factor
    ch = build_chain([ADD, RZ2, RZ2], [(2, constant_hom(ADD, RZ2, "x")), (2, constant_hom(RZ2, RZ2, "y"))],
                     rename=True)
    assert ch.phi == {"q.1": "x.3", "e.1": "x.3"}
    assert ch.right.phi == {"x.2": "y.3", "y.2": "y.3"}


def test_chain_extends_maps_over_adjoined_states(RZ2, ADD):
    # The first map adjoins qq to ADD; the map out of ADD must cover it too.
    ch = build_chain([RZ2, ADD, RZ2], [(1, constant_hom(RZ2, ADD, ["q", "q"])), (2, constant_hom(ADD, RZ2, "x"))],
                     rename=True)
    assert "q_q.2" in ch.states
    assert ch.right.phi["q_q.2"] == "x_x.3"
    assert audit_table(ch) == []


def test_chain_errors_carry_step(RZ2):
    with pytest.raises(InputError, match="chain step 1"):
        build_chain([RZ2] * 3, [(1, StateMap({"x": "z", "y": "x"})), (2, constant_hom(RZ2, RZ2, "x"))],
                    rename=True)
    with pytest.raises(InputError, match="later factor"):
        build_chain([RZ2] * 3, [(0, constant_hom(RZ2, RZ2, "x")), (2, constant_hom(RZ2, RZ2, "x"))])
    with pytest.raises(InputError, match="at least two"):
        build_chain([RZ2], [])
