"""Deterministic formula and goal generators shared by the test suites."""

from __future__ import annotations

import os
import random
from functools import lru_cache

from constraintkernel import boolalg as ba
from constraintkernel.syntax import (AUNIT, MUNIT, Atom, Bunch, Op, Sequent, comma, leaf,
                                     modal_depth, semi)

SEED = int(os.environ.get("CK_SEED", "20240917"))


def rng(salt: int = 0) -> random.Random:
    return random.Random(SEED * 1000 + salt)


@lru_cache(maxsize=None)
def ipl_formulas_of_size(n: int) -> tuple:
    """Every formula over p, q with exactly n symbols (atoms plus connectives)."""
    if n == 1:
        return (Atom("p"), Atom("q"))
    out = [Op("not", (a,)) for a in ipl_formulas_of_size(n - 1)]
    for i in range(1, n - 1):
        for a in ipl_formulas_of_size(i):
            for b in ipl_formulas_of_size(n - 1 - i):
                out += [Op(o, (a, b)) for o in ("and", "or", "imp")]
    return tuple(out)


def ipl_corpus(max_size: int = 7) -> list:
    return [f for n in range(1, max_size + 1) for f in ipl_formulas_of_size(n)]


@lru_cache(maxsize=None)
def modal_formulas_of_size(n: int) -> tuple:
    if n == 1:
        return (Atom("p"), Op("bot"))
    out = []
    for u in ("box", "dia"):
        out += [Op(u, (a,)) for a in modal_formulas_of_size(n - 1)]
    for b in ("and", "or"):
        for k in range(1, n - 1):
            out += [Op(b, (a, c)) for a in modal_formulas_of_size(k)
                    for c in modal_formulas_of_size(n - 1 - k)]
    return tuple(out)


def k_corpus(max_size: int = 7, max_depth: int = 2) -> list:
    return [f for n in range(1, max_size + 1) for f in modal_formulas_of_size(n)
            if modal_depth(f) <= max_depth]


# --- BI -------------------------------------------------------------------

_BI_ATOMS = ("p", "q", "r")


def random_bi_formula(r: random.Random, size: int):
    if size <= 1:
        return Atom(r.choice(_BI_ATOMS)) if r.random() < 0.9 else Op(r.choice(("mtop", "top")))
    k = r.randint(1, size - 1)
    o = r.choice(("and", "mand", "mand", "wand", "imp", "or"))
    return Op(o, (random_bi_formula(r, k), random_bi_formula(r, size - k)))


def random_bunch(r: random.Random, size: int) -> Bunch:
    if size <= 1:
        return leaf(random_bi_formula(r, r.randint(1, 2)))
    k = r.randint(1, size - 1)
    join = comma if r.random() < 0.6 else semi
    return join(random_bunch(r, k), random_bunch(r, size - k))


def _mirror(r: random.Random, b: Bunch):
    # a succedent that follows the bunch's shape, so the goal is often derivable
    if b.kind == "leaf":
        return b.formula
    parts = [_mirror(r, c) for c in b.children]
    if b.kind == ";":
        if r.random() < 0.5:
            return r.choice(parts)
        o = "and"
    else:
        o = "mand"
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Op(o, (p, out))
    return out


def random_bi_goal(r: random.Random) -> Sequent:
    """Half mirrored (mostly derivable) goals, half unconstrained ones."""
    ant = random_bunch(r, r.randint(1, 4))
    if r.random() < 0.5:
        suc = _mirror(r, ant)
        if r.random() < 0.3:
            suc = Op(r.choice(("or", "and", "mand")), (suc, random_bi_formula(r, 1)))
    else:
        suc = random_bi_formula(r, r.randint(1, 3))
    return Sequent(ant, leaf(suc))


# --- Boolean algebra ----------------------------------------------------------

def random_expr(r: random.Random, names, depth: int = 4):
    roll = r.random()
    if depth == 0 or roll < 0.25:
        if r.random() < 0.15:
            return ba.Lit(r.randint(0, 1))
        return ba.var(r.choice(names))
    if roll < 0.45:
        return ba.compl(random_expr(r, names, depth - 1))
    f = ba.add if roll < 0.72 else ba.mul
    return f(random_expr(r, names, depth - 1), random_expr(r, names, depth - 1))


def random_constraint_set(r: random.Random, nvars: int, ncons: int) -> tuple:
    names = [f"x{i}" for i in range(1, nvars + 1)]
    cs = []
    for _ in range(ncons):
        c = ba.eq(random_expr(r, names, 3), r.randint(0, 1))
        if r.random() < 0.2:
            c = ba.disj(c, ba.eq(random_expr(r, names, 2), r.randint(0, 1)))
        cs.append(c)
    return cs, names


__all__ = ["SEED", "rng", "ipl_corpus", "k_corpus", "random_bi_goal", "random_expr",
           "random_constraint_set", "AUNIT", "MUNIT", "Sequent", "leaf"]
