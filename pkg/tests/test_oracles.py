import itertools

import pytest
from hypothesis import given, settings, strategies as st

from constraintkernel import oracles
from constraintkernel.oracles import KripkeModel, ipl_decide, k_decide, model_check
from constraintkernel.syntax import (AUNIT, IPL, MODAL, Atom, Op, Sequent, comma, leaf,
                                     parse_formula, show_formula)

from corpora import ipl_corpus, k_corpus


def F(text, alphabet=IPL):
    return parse_formula(text, alphabet)


@pytest.mark.parametrize("text,valid", [
    ("p | ~p", False), ("~~(p | ~p)", True), ("((p -> q) -> p) -> p", False),
    ("(p -> q) -> (p -> q)", True), ("~(p & ~p)", True), ("bot -> p", True),
])
def test_ipl_known(text, valid):
    assert ipl_decide(F(text)) is valid


@pytest.mark.parametrize("text,valid", [
    ("box (p -> q) -> (box p -> box q)", True), ("box p -> p", False),
    ("dia p -> box p", False), ("box (p & q) -> box p", True), ("~ dia bot", True),
    ("box p -> dia p", False),
])
def test_k_known(text, valid):
    assert k_decide(F(text, MODAL)) is valid


def test_ipl_second_oracle_agrees():
    for f in ipl_corpus(6):
        assert ipl_decide(f) == oracles.ipl_sweep_valid(f), show_formula(f)


def test_ipl_monotone_under_weakening():
    corpus = ipl_corpus(4)
    for f, g in itertools.islice(itertools.product(corpus, corpus), 0, None, 7):
        if ipl_decide(Sequent(leaf(f), leaf(g))):
            assert ipl_decide(Sequent(comma(leaf(f), leaf(Atom("q"))), leaf(g)))


def test_ipl_countermodels_refute():
    for f in ipl_corpus(5):
        m = oracles.ipl_countermodel(f)
        if ipl_decide(f):
            assert m is None
        else:
            assert m is not None and not model_check(m, 0, f, "IPL")


def test_k_countermodels_refute():
    for f in k_corpus(6):
        m = oracles.k_countermodel(f)
        if k_decide(f):
            assert m is None
        else:
            assert not model_check(m, 0, f)


def _preorder(n, extra):
    rel = {(w, w) for w in range(n)} | set(extra)
    changed = True
    while changed:
        new = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        rel |= new
        changed = bool(new)
    return frozenset(rel)


@settings(max_examples=60)
@given(st.integers(1, 3), st.data())
def test_ipl_persistence(n, data):
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    rel = _preorder(n, data.draw(st.lists(st.sampled_from(pairs), max_size=3)) if pairs else [])
    val = {}
    for p in ("p", "q"):
        seed = set(data.draw(st.lists(st.integers(0, n - 1), max_size=n)))
        val[p] = frozenset(v for v in range(n) if any((w, v) in rel for w in seed))
    m = KripkeModel(tuple(range(n)), rel, val)
    for f in ipl_corpus(4):
        for w, v in rel:
            if model_check(m, w, f, "IPL"):
                assert model_check(m, v, f, "IPL")


def test_sequent_formula():
    s = Sequent(comma(leaf(Atom("p")), leaf(Atom("q"))), AUNIT)
    assert show_formula(oracles.sequent_formula(s)) == "p & q -> bot"
    assert oracles.sequent_formula(Atom("p")) == Atom("p")


def test_model_check_errors():
    m = KripkeModel((0,), frozenset(), {"p": frozenset()})
    with pytest.raises(ValueError):
        model_check(m, 0, Atom("p"), "IPL")
    with pytest.raises(ValueError):
        model_check(m, 1, Atom("p"))
    with pytest.raises(ValueError):
        ipl_decide(Op("box", (Atom("p"),)))
