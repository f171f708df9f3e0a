import pytest
from hypothesis import given, settings, strategies as st

from constraintkernel.syntax import (AUNIT, IPL, MUNIT, Atom, Bunch, Op, ParseError, Sequent,
                                     bunch_paths, coherent_equiv, comma, formula_size, leaf,
                                     modal_depth, normalize, parse_bunch, parse_formula,
                                     parse_sequent, replace_subbunch, semi, show_bunch,
                                     show_formula, show_sequent, subbunch_at)

atoms = st.sampled_from([Atom(n) for n in ("p", "q", "r")])
formulas = st.recursive(
    st.one_of(atoms, st.sampled_from([Op("top"), Op("bot"), Op("mtop")])),
    lambda sub: st.one_of(
        st.builds(lambda o, a, b: Op(o, (a, b)),
                  st.sampled_from(["and", "or", "imp", "mand", "wand"]), sub, sub),
        st.builds(lambda o, a: Op(o, (a,)), st.sampled_from(["not", "box", "dia"]), sub)),
    max_leaves=6,
)


def _bunches(max_leaves=12):
    return st.recursive(
        st.one_of(st.builds(leaf, atoms), st.just(MUNIT), st.just(AUNIT)),
        lambda sub: st.builds(lambda k, xs: Bunch(k, None, tuple(xs)),
                              st.sampled_from([",", ";"]), st.lists(sub, min_size=2, max_size=3)),
        max_leaves=max_leaves,
    )


bunches = _bunches()


@settings(max_examples=300)
@given(formulas)
def test_formula_print_parse_identity(f):
    assert parse_formula(show_formula(f)) == f


@settings(max_examples=200)
@given(bunches)
def test_bunch_print_parse_up_to_coherence(b):
    assert coherent_equiv(parse_bunch(show_bunch(b)), b)


@settings(max_examples=200)
@given(bunches, bunches, bunches)
def test_coherent_equiv_is_an_equivalence(a, b, c):
    assert coherent_equiv(a, a)
    assert coherent_equiv(a, b) == coherent_equiv(b, a)
    if coherent_equiv(a, b) and coherent_equiv(b, c):
        assert coherent_equiv(a, c)


@settings(max_examples=200)
@given(bunches, st.data())
def test_coherent_equiv_is_a_congruence(ctx, data):
    path = data.draw(st.sampled_from(list(bunch_paths(ctx))))
    d = data.draw(bunches)
    # build a coherently equivalent variant of d by shuffling and padding with a unit
    if d.kind == "leaf":
        d2 = Bunch(",", None, (d, MUNIT))
    else:
        unit = MUNIT if d.kind == "," else AUNIT
        d2 = Bunch(d.kind, None, tuple(reversed(d.children)) + (unit,))
    assert coherent_equiv(d, d2)
    assert coherent_equiv(replace_subbunch(ctx, path, d), replace_subbunch(ctx, path, d2))


def test_units_and_normal_forms():
    p, q = leaf(Atom("p")), leaf(Atom("q"))
    assert coherent_equiv(comma(p, MUNIT), p)
    assert coherent_equiv(semi(p, AUNIT), p)
    assert not coherent_equiv(comma(p, AUNIT), p)
    assert coherent_equiv(comma(p, comma(q, p)), comma(comma(p, p), q))
    assert not coherent_equiv(comma(p, q), semi(p, q))
    assert normalize(comma(p, q)) == normalize(comma(q, p))


def test_paths_are_into_the_raw_tree():
    b = parse_bunch("p , (q ; r)")
    assert subbunch_at(b, (1, 0)) == leaf(Atom("q"))
    assert show_bunch(replace_subbunch(b, (1, 0), leaf(Atom("s")))) == "p , (s ; r)"
    with pytest.raises(IndexError):
        subbunch_at(b, (0, 0))


def test_sequent_text():
    s = parse_sequent("p , q , r |- p * (q * r)")
    assert show_sequent(s) == "p , q , r |- p * (q * r)"
    assert parse_sequent("e+ |- p | ~p", IPL).antecedent == AUNIT
    assert parse_sequent("|- p -> p", IPL) == Sequent(AUNIT, leaf(parse_formula("p -> p")))


def test_measures():
    f = parse_formula("box (p & dia q)")
    assert formula_size(f) == 5
    assert modal_depth(f) == 2


@pytest.mark.parametrize("bad", ["p &", "(p", "p |- q |- r", "p ** q", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_sequent(bad)


def test_alphabet_restriction():
    with pytest.raises(ParseError):
        parse_formula("p * q", IPL)
