import itertools

import pytest

from constraintkernel import bi, boolalg as ba
from constraintkernel.proofs import render
from constraintkernel.syntax import parse_sequent, show_sequent

from corpora import random_bi_goal, rng


def test_split_example():
    res = bi.prove_bi(parse_sequent("p , q , r |- p * (q * r)"), depth=4)
    assert res is not None
    first = res.reduction.children[0]
    assert [ba.show_constraint(c) for c in first.constraints] == ["x1 = 1 & x2 = 0 & x3 = 0"]
    assert res.interpretation == {"x1": 1, "x2": 0, "x3": 0, "x4": 0, "x5": 1, "x6": 0}
    assert res.proof.rules() == ["mandR", "taut", "mandR", "taut", "taut"]
    assert [show_sequent(n.sequent) for n in res.proof.nodes()] == [
        "p , q , r |- p * (q * r)", "p |- p", "q , r |- q * r", "q |- q", "r |- r"]
    assert bi.check_lbi_proof(res.proof)


@pytest.mark.parametrize("goal,provable", [
    ("p |- p", True),
    ("p |- q", False),
    ("ex |- mtop", True),
    ("p |- p * p", False),
    ("p ; q |- p", True),
    ("p -* q , p |- q", True),
    ("p & q |- q & p", True),
    ("(p ; q) , r |- p * r", True),
    ("p , q |- p & q", False),
    ("p ; q |- p & q", True),
])
def test_small_goals(goal, provable):
    res = bi.prove_bi(parse_sequent(goal), depth=6)
    assert (res is not None) == provable
    if res:
        assert bi.check_lbi_proof(res.proof)


def _reductions(n_goals, salt):
    r = rng(salt)
    for _ in range(n_goals):
        g = random_bi_goal(r)
        for red in itertools.islice(bi.reduce_lbib(g, 4), 20):
            yield g, red


def test_faithfulness_sample():
    checked = 0
    for g, red in _reductions(60, 11):
        for interp in ba.all_solutions(red.all_constraints(), bi.reduction_vars(red))[:16]:
            res = bi.check_lbi_proof(bi.valuate(red, interp))
            assert res, (show_sequent(g), res.message, render(red, show_constraints=True))
            checked += 1
    assert checked > 0


def test_adequacy_by_lifting():
    r = rng(12)
    lifted = 0
    for _ in range(60):
        g = random_bi_goal(r)
        for d in itertools.islice(bi.search_lbi(g, 4), 2):
            out = bi.lift_lbi_proof(d)
            assert out is not None, show_sequent(g)
            red, interp = out
            assert all(ba.eval_constraint(c, interp) for c in red.all_constraints())
            v = bi.valuate(red, interp)
            assert v.rules() == d.rules()
            assert bi.check_lbi_proof(v)
            lifted += 1
    assert lifted > 0


def _leaf_labels(eseq):
    return [(path, n.label) for path, n, _ in bi._nodes(eseq.antecedent) if path]


def _seq_vars(eseq):
    return {v for _, n, _ in bi._nodes(eseq.antecedent) for v, _ in n.label}


def test_splits_carry_complementary_labels():
    splits = 0
    for g, red in _reductions(40, 13):
        for node in red.nodes():
            if node.rule != "mandR":
                continue
            left, right = node.children
            before = dict(_leaf_labels(node.sequent))
            for (pl, ll), (pr, lr) in zip(_leaf_labels(left.sequent), _leaf_labels(right.sequent)):
                assert pl == pr
                new_l, new_r = ll - before.get(pl, frozenset()), lr - before.get(pr, frozenset())
                # same split variables, opposite polarity: V on the left, its complement on the right
                assert {(v, not pos) for v, pos in new_l} == new_r
                assert all(pos for _, pos in new_l)
                splits += bool(new_l)
    assert splits > 0


def test_each_variable_is_introduced_by_one_rule():
    for g, red in _reductions(40, 14):
        owners = {}
        for i, node in enumerate(red.nodes()):
            below = set().union(*(_seq_vars(c.sequent) for c in node.children)) if node.children else set()
            for c in node.constraints:
                below |= ba.constraint_vars(c)
            for v in below - _seq_vars(node.sequent):
                assert owners.setdefault(v, i) == i, (show_sequent(g), v)


def test_checker_rejects_broken_proof():
    res = bi.prove_bi(parse_sequent("p , q |- p * q"), depth=4)
    assert bi.check_lbi_proof(res.proof)
    bad = res.proof.__class__(parse_sequent("p , q |- q * q"), res.proof.rule, res.proof.children)
    assert not bi.check_lbi_proof(bad)


def test_depth_must_be_positive():
    with pytest.raises(ValueError):
        next(bi.reduce_lbib(parse_sequent("p |- p"), 0))
