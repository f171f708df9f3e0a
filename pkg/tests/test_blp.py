from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from constraintkernel import blp
from constraintkernel.blp import (Eq, Fn, Var, candidate_space, check_lb_proof, goal_vars,
                                  naive_lb_search, parse_goal, parse_program, rule_trace, run_blp,
                                  solve_unification, unify)

from corpora import rng

COURSES = Path(__file__).resolve().parent.parent / "programs" / "courses.pl"


@pytest.fixture(scope="module")
def courses():
    return parse_program(COURSES.read_text())


def test_course_example(courses):
    g = parse_goal("s(X, Y, Z)")
    answers = run_blp(courses, g)
    assert candidate_space(courses, g) == 729
    assert len(answers) == 27
    assert len({str(s) for s, _ in answers}) == 27
    assert str(answers[0][0]) == "X=al, Y=lo, Z=da"
    for s, tree in answers:
        assert check_lb_proof(courses, tree)
        assert s.is_idempotent()
        assert all(not blp._vars(t) for _, t in s.mapping)


def test_course_trace(courses):
    (ans,) = [t for s, t in run_blp(courses, parse_goal("s(X,Y,Z)")) if str(s) == "X=al, Y=lo, Z=ai"]
    assert rule_trace(ans) == ["exR", "allL", "impL", "andR", "andR", "ax", "ax", "ax"]
    ((_, ground),) = run_blp(courses, parse_goal("s(al, lo, ai)"))
    assert rule_trace(ground) == ["allL", "impL", "andR", "andR", "ax", "ax", "ax"]
    assert run_blp(courses, parse_goal("s(pr, gr, ca)")) == []


def test_naive_oracle_on_courses(courses):
    g = parse_goal("s(X,Y,Z)")
    assert {str(s) for s, _ in naive_lb_search(courses, g)} == {str(s) for s, _ in run_blp(courses, g)}


def test_hypothetical_goal():
    p = parse_program("q(a).\nr(X) :- p(X), q(X).")
    assert run_blp(p, parse_goal("r(a)")) == []
    (ans,) = run_blp(p, parse_goal("p(a) => r(a)"))
    assert check_lb_proof(p, ans[1])
    assert "impR" in rule_trace(ans[1])


def test_disjunctive_goal():
    p = parse_program("a(x). b(y).")
    got = sorted(str(s) for s, _ in run_blp(p, parse_goal("a(X) ; b(X)")))
    assert got == ["X=x", "X=y"]


# --- random stratified programs -------------------------------------------------

CONSTS = ["a", "b", "c"]


def _atom(r, pred, arity, vars_):
    pool = CONSTS + vars_
    return f"{pred}({', '.join(r.choice(pool) for _ in range(arity))})"


def random_program(r):
    lines = []
    for pred, arity in (("p", 1), ("e", 2)):
        for _ in range(r.randint(1, 3)):
            lines.append(_atom(r, pred, arity, []) + ".")
    for head, arity, body_preds in (("q", 1, [("p", 1), ("e", 2)]), ("t", 2, [("q", 1), ("e", 2), ("p", 1)])):
        for _ in range(r.randint(1, 3)):
            vs = ["X", "Y", "Z"][: r.randint(1, 3)]
            h = _atom(r, head, arity, vs[:arity])
            body = [_atom(r, *r.choice(body_preds), vs) for _ in range(r.randint(1, 2))]
            glue = ", " if r.random() < 0.7 else " ; "
            lines.append(f"{h} :- {glue.join(body)}.")
    return "\n".join(lines[:12])


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_ground_queries_match_naive_search(seed):
    r = rng(seed)
    prog = parse_program(random_program(r))
    for _ in range(3):
        pred, arity = r.choice([("q", 1), ("t", 2), ("p", 1)])
        g = parse_goal(_atom(r, pred, arity, []))
        assert bool(run_blp(prog, g)) == bool(naive_lb_search(prog, g))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_open_queries_are_faithful(seed):
    r = rng(seed)
    prog = parse_program(random_program(r))
    g = parse_goal(_atom(r, "t", 2, ["U", "W"]))
    answers = run_blp(prog, g)
    for s, tree in answers:
        assert check_lb_proof(prog, tree)
        assert s.is_idempotent()
    # every ground answer of the naive search is an instance of a returned answer
    for ground, _ in naive_lb_search(prog, g):
        target = blp.subst_goal(g, ground.as_dict())
        assert any(unify_goal(blp.subst_goal(g, s.as_dict()), target) for s, _ in answers)


def unify_goal(a, b):
    return unify(Fn(a.pred, a.args), Fn(b.pred, b.args), {}) is not None


# --- unification ----------------------------------------------------------------

def test_occurs_check():
    n = Var("n")
    assert unify(n, Fn("f", (n,)), {}) is None
    assert solve_unification([Eq(n, Fn("f", (n,)))]) == []


def test_chained_equations():
    n, m = Var("n"), Var("m")
    (sol,) = solve_unification([Eq(n, m), Eq(m, Fn("al"))])
    assert sol(n) == Fn("al") and sol(m) == Fn("al")


def test_disjunctive_constraints():
    x = Var("x")
    sols = solve_unification([blp.Disj((Eq(x, Fn("a")), Eq(x, Fn("b"))))])
    assert [s(x) for s in sols] == [Fn("a"), Fn("b")]
    assert solve_unification([blp.FALSUM]) == []


def test_substitution_composition():
    x, y = Var("X"), Var("Y")
    s1 = blp.Substitution.of({x: y})
    s2 = blp.Substitution.of({y: Fn("a")})
    c = s1.compose(s2)
    assert c(x) == Fn("a") and c(y) == Fn("a")
    assert c.is_idempotent()


@pytest.mark.parametrize("bad", ["p ; q :- r.", "p(X :- q.", "p(a)"])
def test_syntax_errors(bad):
    with pytest.raises(blp.BLPSyntaxError):
        parse_program(bad)


def test_goal_variables_in_order():
    assert [v.name for v in goal_vars(parse_goal("s(X, Y, Z), r(X)"))] == ["X", "Y", "Z"]
