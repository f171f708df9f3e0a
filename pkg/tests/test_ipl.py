import itertools

import pytest

from constraintkernel import boolalg as ba, ipl
from constraintkernel.oracles import ipl_decide
from constraintkernel.proofs import ProofTree
from constraintkernel.syntax import (AUNIT, IPL, Sequent, formulas_of, leaf, parse_formula,
                                     parse_sequent, show_formula)

from corpora import ipl_corpus


def goal(text):
    return parse_sequent(text, IPL) if "|-" in text else Sequent(AUNIT, leaf(parse_formula(text, IPL)))


@pytest.mark.parametrize("text,valid", [
    ("p | ~p", False),
    ("~~(p | ~p)", True),
    ("((p -> q) -> p) -> p", False),
    ("p -> p", True),
    ("p & q -> q & p", True),
    ("~~p -> p", False),
    ("p -> ~~p", True),
    ("(p -> q) -> (~q -> ~p)", True),
    ("(~q -> ~p) -> (p -> q)", False),
    ("p | q |- q | p", True),
])
def test_known_formulas(text, valid):
    res = ipl.prove_ipl(goal(text), depth=8)
    assert (res is not None) == valid
    if res:
        assert ipl.check_ljplus_proof(res.proof)


def test_choice_ergo_is_identity_on_unlabelled():
    for f in ipl_corpus(5)[:300]:
        s = ipl.jsequent([f], [f])
        e = ipl.EnrichedLJSequent(((f, None),), ((f, None),))
        assert ipl.choice_ergo(e, {}) == s
        assert ipl.choice_ergo(e, {"x1": 1}) == ipl.choice_ergo(e, {"x1": 0})


def _images(formulas, per_goal=3):
    for f in formulas:
        for red in itertools.islice(ipl.reduce_lkplusb(Sequent(AUNIT, leaf(f)), 8), per_goal):
            names = sorted({v for c in red.all_constraints() for v in ba.constraint_vars(c)}
                           | set(ipl._variables(red)), key=ba.natural_key)
            for interp in ba.all_solutions(red.all_constraints(), names)[:4]:
                yield f, red, ipl.sigma_image(red, interp)


def test_sigma_images_are_ljplus_proofs():
    corpus = ipl_corpus(7)
    seen = set()
    for f, red, img in _images(corpus):
        res = ipl.check_ljplus_proof(img)
        assert res, (show_formula(f), res.path, res.message)
        seen.add(f)
    assert len(seen) >= 500


def test_right_implication_keeps_a_single_conclusion():
    for f, red, img in _images(ipl_corpus(6)[::3]):
        for n in img.nodes():
            if n.rule in ("impR", "notR"):
                (prem,) = n.children
                assert len(formulas_of(prem.sequent.succedent)) <= 1


def test_oracle_agreement_sample():
    for f in ipl_corpus(6):
        g = Sequent(AUNIT, leaf(f))
        assert (ipl.prove_ipl(g, 8) is not None) == ipl_decide(g), show_formula(f)


def test_lj_checker():
    p, q = parse_formula("p"), parse_formula("q")
    ax = ProofTree(ipl.jsequent([p], [p]), "ax")
    good = ProofTree(ipl.jsequent([], [parse_formula("p -> p")]), "impR", (ax,))
    assert ipl.check_lj_proof(good)
    bad = ProofTree(ipl.jsequent([], [parse_formula("p -> q")]), "impR", (ax,))
    assert not ipl.check_lj_proof(bad)
    assert not ipl.check_ljplus_proof(ProofTree(ipl.jsequent([p], [q]), "ax"))


def test_rule_tables():
    assert set(ipl.LKB_RULES) >= {"ax", "cR", "impL", "notL"}
    assert ipl.LKPLUSB_RULES["impR"][2] == "x*y = 1"
    assert set(ipl.LKPLUSB_RULES) - {"e"} <= set(ipl.LJPLUS_RULES)


def test_unsupported_connective():
    with pytest.raises(ValueError):
        ipl.prove_ipl(parse_sequent("|- p * q"))
