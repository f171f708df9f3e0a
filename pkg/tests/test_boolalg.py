import itertools

import pytest
from hypothesis import given, settings, strategies as st

from constraintkernel import boolalg as ba
from constraintkernel.boolalg import Compl, Lit, Prod, Sum, Var

NAMES = ["x1", "x2", "x3", "x4"]

exprs = st.recursive(
    st.one_of(st.sampled_from([Var(n) for n in NAMES]), st.sampled_from([Lit(0), Lit(1)])),
    lambda sub: st.one_of(st.builds(Sum, sub, sub), st.builds(Prod, sub, sub), st.builds(Compl, sub)),
    max_leaves=8,
)
interps = st.fixed_dictionaries({n: st.integers(0, 1) for n in NAMES})


@settings(max_examples=300)
@given(exprs, exprs, exprs, interps)
def test_boolean_algebra_equations(a, b, c, i):
    ev = lambda e: ba.eval_expr(e, i)
    assert ev(Sum(a, b)) == ev(Sum(b, a))
    assert ev(Prod(a, b)) == ev(Prod(b, a))
    assert ev(Sum(a, Sum(b, c))) == ev(Sum(Sum(a, b), c))
    assert ev(Prod(a, Prod(b, c))) == ev(Prod(Prod(a, b), c))
    assert ev(Prod(a, Sum(b, c))) == ev(Sum(Prod(a, b), Prod(a, c)))
    assert ev(Sum(a, Prod(b, c))) == ev(Prod(Sum(a, b), Sum(a, c)))
    assert ev(Sum(a, Prod(a, b))) == ev(a)
    assert ev(Prod(a, Sum(a, b))) == ev(a)
    assert ev(Sum(a, Lit(0))) == ev(a)
    assert ev(Prod(a, Lit(1))) == ev(a)
    assert ev(Sum(a, Compl(a))) == 1
    assert ev(Prod(a, Compl(a))) == 0


@given(exprs, interps)
def test_smart_constructors_preserve_value(a, i):
    for other in (Lit(0), Lit(1), Var("x1"), a):
        assert ba.eval_expr(ba.add(a, other), i) == ba.eval_expr(Sum(a, other), i)
        assert ba.eval_expr(ba.mul(a, other), i) == ba.eval_expr(Prod(a, other), i)
    assert ba.eval_expr(ba.compl(a), i) == 1 - ba.eval_expr(a, i)


def test_unbound_variable_raises():
    with pytest.raises(ba.UnboundVariable):
        ba.eval_expr(Var("y"), {})


constraints = st.recursive(
    st.builds(ba.eq, exprs, st.integers(0, 1)),
    lambda sub: st.one_of(st.builds(lambda xs: ba.Conj(tuple(xs)), st.lists(sub, max_size=3)),
                          st.builds(lambda xs: ba.Disj(tuple(xs)), st.lists(sub, max_size=3)),
                          st.builds(ba.Neg, sub)),
    max_leaves=5,
)


@settings(max_examples=300)
@given(st.lists(constraints, min_size=1, max_size=4))
def test_solve_agrees_with_brute_force(cs):
    names = sorted(set().union(*(ba.constraint_vars(c) for c in cs)), key=ba.natural_key)
    models = ba.brute_force(cs, names)
    got = ba.solve(cs)
    assert (got is None) == (not models)
    if got is not None:
        full = {n: got.get(n, 0) for n in names}
        assert all(ba.eval_constraint(c, full) for c in cs)
        # zero-first search in natural order gives the lexicographically least model
        assert full == models[0]


@settings(max_examples=100)
@given(st.lists(constraints, min_size=1, max_size=3))
def test_all_solutions_is_brute_force(cs):
    names = sorted(set().union(*(ba.constraint_vars(c) for c in cs)), key=ba.natural_key)
    assert ba.all_solutions(cs, names) == ba.brute_force(cs, names)


@settings(max_examples=200)
@given(constraints)
def test_show_parse_round_trip(c):
    text = ba.show_constraint(c)
    back = ba.parse_constraint(text)
    names = sorted(ba.constraint_vars(c))
    for bits in itertools.product((0, 1), repeat=len(names)):
        i = dict(zip(names, bits))
        assert ba.eval_constraint(back, i) == ba.eval_constraint(c, i)


def test_natural_variable_order():
    assert sorted(["x10", "x2", "x1"], key=ba.natural_key) == ["x1", "x2", "x10"]
    s = ba.solve([ba.parse_constraint("x10 + x2 = 1")])
    assert s == {"x2": 0, "x10": 1}


def test_parse_examples():
    c = ba.parse_constraint("x1 = 1 & x2 = 0 & x3 = 0")
    assert ba.eval_constraint(c, {"x1": 1, "x2": 0, "x3": 0})
    assert not ba.eval_constraint(c, {"x1": 1, "x2": 1, "x3": 0})
    assert ba.eval_constraint(ba.parse_constraint("~x1*x4 = 0 || x2 = 1"), {"x1": 0, "x4": 1, "x2": 1})
    assert ba.solve([ba.FALSE]) is None
    assert ba.solve([ba.TRUE]) == {}


def test_fresh_supply():
    f = ba.FreshSupply()
    assert [f().name for _ in range(3)] == ["x1", "x2", "x3"]
