import pytest

from constraintkernel import metafol as M
from constraintkernel.metafol import (LSeq, MAnd, MImp, MOr, Rel, Sat, builtin_calculus,
                                      check_labelled_proof, generate_relational_calculus,
                                      load_rules, load_theory, parse_labelled, parse_meta,
                                      prove_labelled, same_rules, show_lseq)
from constraintkernel.oracles import ipl_decide, k_decide
from constraintkernel.proofs import ProofTree
from constraintkernel.syntax import AUNIT, Sequent, leaf, show_formula

from corpora import ipl_corpus, k_corpus

# --- polarity and tractability ------------------------------------------------

BOX = "(forall y (imp (rel R x y) (sat y A)))"
PERS = "(imp (rel R x y) (forall F (imp (sat x F) (sat y F))))"


@pytest.mark.parametrize("text,pol,alt", [
    ("(sat x A)", "both", 0),
    ("(rel R x y)", "both", 0),
    ("bot", "pos", 0),
    ("(mand (sat x A) (sat x B))", "both", 0),
    ("(par (sat x A) (sat x B))", "pos", 0),
    ("(exists y (mand (rel R x y) (sat y A)))", "pos", 0),
    (BOX, "neg", 1),
    (PERS, "neg", 2),
    ("(mand (par (sat x A) (sat x B)) (sat x C))", "pos", 0),
    ("(imp (imp (imp (sat x A) (sat x B)) (sat x C)) (sat x D))", "neg", 3),
    ("(imp (mand (sat x A) (sat x B)) (exists y (sat y C)))", "neg", 1),
])
def test_polarity_and_alternations(text, pol, alt):
    f = parse_meta(text)
    assert M.polarity(f) == pol
    assert M.polarity_alternations(f) == alt


@pytest.mark.parametrize("text,tractable", [
    (BOX, True),
    (PERS, True),
    ("(par (sat x A) (sat x B))", True),
    # a geometric implication
    ("(forall (x y) (imp (mand (rel R x y) (sat x A)) (exists z (mand (rel R y z) (sat z A)))))", True),
    ("(imp (imp (imp (sat x A) (sat x B)) (sat x C)) (sat x D))", False),
])
def test_tractability(text, tractable):
    assert M.is_tractable(parse_meta(text)) is tractable


def test_ipl_implication_clause_is_tractable_both_ways():
    th = load_theory("ipl")
    imp = [f for _, f in th.clauses if "(x : A -> B)" in M.show_meta(f)]
    assert len(imp) == 2
    assert all(M.is_tractable(f) for f in imp)
    assert all(M.is_tractable(f) for _, f in th.clauses)


def test_mixed_conjunction_is_not_polarizable():
    with pytest.raises(M.NonPolarizable):
        M.polarity(parse_meta("(mand (imp (sat x A) (sat x B)) (par (sat x C) (sat x D)))"))


def test_synthesis_refuses_intractable():
    with pytest.raises(M.NotTractable):
        M.synthesize_rule(parse_meta("(imp (imp (imp (sat x A) (sat x B)) (sat x C)) (sat x D))"))


@pytest.mark.parametrize("name", ["collapse_par", "collapse_forall"])
def test_worked_collapses(name):
    (gold,) = load_rules(f"golden/{name}")
    syn = M.synthesize_rule(gold.concl_left[0]).as_rule()
    assert M.canonical_rule(syn) == M.canonical_rule(gold)


# --- calculus generation ------------------------------------------------------

@pytest.mark.parametrize("theory,golden", [("k", "golden/rk"), ("ipl", "golden/rj")])
def test_generated_calculi_match_golden(theory, golden):
    calc = generate_relational_calculus(load_theory(theory), simplify=True)
    assert same_rules(calc.rules, load_rules(golden)) == ([], [])


def test_unsimplified_calculus_is_larger():
    raw = generate_relational_calculus(load_theory("k"), simplify=False)
    simp = generate_relational_calculus(load_theory("k"), simplify=True)
    assert not raw.simplified and simp.simplified
    only_raw, _ = same_rules(raw.rules, simp.rules)
    assert only_raw


def test_rules_round_trip_through_text():
    for name in ("rk", "rj", "rjplus"):
        rules = builtin_calculus(name).rules
        again = M.parse_rules("\n".join(M.rule_to_sexp(r) for r in rules))
        assert same_rules(rules, again) == ([], [])


def test_encoding_matches_ljplus():
    enc = M.propositional_encoding(builtin_calculus("rjplus"))
    gold = M.load_object_rules("golden/ljplus")
    assert same_rules(enc, gold, key=M.canonical_object_rule) == ([], [])


def test_theory_errors():
    with pytest.raises(ValueError):
        M.parse_theory("(frobnicate (sat x A))")
    with pytest.raises(ValueError):
        M.parse_theory("(option speed fast)")


# --- labelled proving ----------------------------------------------------------

RK = builtin_calculus("rk")


def test_labelled_text_round_trip():
    s = parse_labelled("w: p & q , w R u |- u: p")
    assert parse_labelled(show_lseq(s)) == s


@pytest.mark.parametrize("text,provable", [
    ("x: box (p & q) |- x: box p", True),
    ("x: box p |- x: p", False),
    ("x: dia p , x: box q |- x: dia (p & q)", True),
    ("x: dia bot |-", True),
    ("x: box p |- x: dia p", False),
])
def test_rk_examples(text, provable):
    pr = prove_labelled(RK, parse_labelled(text))
    assert (pr is not None) == provable
    if pr:
        assert check_labelled_proof(RK, pr)


def test_rk_agrees_with_k_oracle_sample():
    for f in k_corpus(5):
        for goal, seq in ((LSeq.of([], [Sat("x", f)]), Sequent(AUNIT, leaf(f))),
                          (LSeq.of([Sat("x", f)], []), Sequent(leaf(f), AUNIT))):
            assert (prove_labelled(RK, goal) is not None) == k_decide(seq), show_lseq(goal)


def test_rjplus_agrees_with_ipl_oracle():
    rjp = builtin_calculus("rjplus")
    for f in ipl_corpus(7):
        pr = prove_labelled(rjp, LSeq.of([], [Sat("x", f)]), depth=8)
        assert (pr is not None) == ipl_decide(f), show_formula(f)


def _first_appearance(tree: ProofTree):
    for n in tree.nodes():
        for c in n.children:
            for w in c.sequent.worlds() - n.sequent.worlds():
                yield w, n


def test_eigenvariables_are_fresh():
    for f in k_corpus(6)[::4]:
        pr = prove_labelled(RK, LSeq.of([], [Sat("x", f)]))
        if pr is None:
            continue
        intro = {}
        for w, node in _first_appearance(pr):
            # a world variable is introduced at one node and never occurs below it in the tree
            assert w not in node.sequent.worlds()
            intro.setdefault(w, set()).add(id(node))
        for w, nodes in intro.items():
            assert len(nodes) == 1


def test_checker_rejects_wrong_rule():
    pr = prove_labelled(RK, parse_labelled("x: p & q |- x: p"))
    bad = ProofTree(pr.sequent, "Ror", pr.children)
    assert not check_labelled_proof(RK, bad)


def test_world_independence_partition():
    s = parse_labelled("x: p , x R y , y: q , z: r |- z: r , u: p")
    parts = M.world_independence_partition(s.left, s.right)
    assert sorted(len(l) + len(r) for l, r in parts) == [1, 2, 3]


def test_to_rjplus_rejects_relations():
    with pytest.raises(ValueError):
        M.to_rjplus(parse_labelled("x R y |- x: p"))
    goal, calc = M.to_rjplus(parse_labelled("|- x: p -> p"))
    assert calc.name == "rjplus" and prove_labelled(calc, goal)
