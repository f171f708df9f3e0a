"""Intuitionistic logic with classical combinatorics.

Search happens in the constraint system LK+⊕B: sequents are multi-succedent,
and each succedent formula carries a Boolean label (a product of literals).
The constraint ``xy = 1`` emitted by →R and ¬R forces the premiss to keep
only the implication's consequent, which is exactly what makes the choice
ergo σ_I of a coherent reduction an LJ+ proof.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping

from . import boolalg as ba
from .proofs import CheckResult, ProofTree, check_tree
from .syntax import AUNIT, Formula, Op, Sequent, comma, formulas_of, leaf, semi, show_formula

__all__ = [
    "JSeq", "EnrichedLJSequent", "reduce_lkplusb", "prove_ipl", "choice_ergo", "sigma_image",
    "check_ljplus_proof", "check_lj_proof", "jsequent", "IPLResult", "LKB_RULES", "LKPLUSB_RULES",
    "LJPLUS_RULES", "LJ_RULES",
]

ONE: frozenset = frozenset()

LJPLUS_RULES = ("ax", "wL", "wR", "cL", "e", "notL", "notR", "andL", "andR", "orL", "orR",
                "impL", "impR")
LJ_RULES = ("ax", "wL", "wR", "cL", "e", "andR", "andL1", "andL2", "notR", "orL", "orR1", "orR2",
            "notL", "impR", "impL")

# LK⊕B kept as a rule table only: conclusion <= premisses ; side-condition
LKB_RULES = {
    "wL": ("phi , G |- D", ["G |- D"], None),
    "wR": ("G |- D ; phi", ["G |- D"], None),
    "cL": ("phi , G |- D", ["phi , phi , G |- D"], None),
    "cR": ("G |- D ; phi", ["G |- D ; phi.x ; phi.~x"], None),
    "e": ("G |- D", ["G' |- D'"], None),
    "ax": ("phi.x |- phi.y", [], "x = 1 & y = 1"),
    "notL": ("~phi , G |- D", ["G |- D.~x ; phi.x"], None),
    "notR": ("G |- D ; ~phi", ["phi , G |- D"], None),
    "andR": ("G |- D ; phi & psi", ["G |- phi ; D", "G |- psi ; D"], None),
    "andL1": ("phi & psi , G |- D", ["phi , G |- D"], None),
    "andL2": ("phi & psi , G |- D", ["psi , G |- D"], None),
    "orL": ("phi | psi , G |- D", ["phi , G |- D", "psi , G |- D"], None),
    "orR1": ("G |- D ; phi | psi", ["G |- D ; phi"], None),
    "orR2": ("G |- D ; phi | psi", ["G |- D ; psi"], None),
    "impR": ("G |- D ; phi -> psi", ["phi , G |- D ; psi"], None),
    "impL": ("phi -> psi , G1 , G2 |- D1 ; D2", ["G1 |- D1.~x ; phi.x", "psi , G2 |- D2"], None),
}

LKPLUSB_RULES = {
    "ax": ("phi , G |- D ; phi", [], None),
    "wL": ("phi , G |- D", ["G |- D"], None),
    "wR": ("G |- D ; phi", ["G |- D"], None),
    "cL": ("phi , G |- D", ["phi , phi , G |- D"], None),
    "e": ("G |- D", ["G' |- D'"], None),
    "notL": ("~phi , G |- D", ["G |- D ; phi"], None),
    "notR": ("G |- D ; ~phi.x", ["phi.xy , G |- D"], "x*y = 1"),
    "andL": ("phi & psi , G |- D", ["phi , psi , G |- D"], None),
    "andR": ("G |- D ; phi & psi", ["G |- D ; phi", "G |- D ; psi"], None),
    "orL": ("phi | psi , G |- D", ["phi , G |- D", "psi , G |- D"], None),
    "orR": ("G |- phi | psi.x ; D", ["G |- phi.xy ; psi.x~y ; D"], None),
    "impL": ("phi -> psi , G |- D", ["G |- D ; phi", "psi , G |- D"], None),
    "impR": ("G |- phi -> psi.x ; D", ["G , phi.xy |- psi.xy ; D"], "x*y = 1"),
}


# ---------------------------------------------------------------------------
# enriched sequents

@dataclass(frozen=True)
class JSeq:
    """Antecedent: sorted tuple of formulas.  Succedent: tuple of (formula, label).

    ``spent`` records left implications and negations already unfolded since
    the last →R/¬R step; it is search bookkeeping, not part of the sequent.
    """
    antecedent: tuple
    succedent: tuple
    spent: frozenset = frozenset()

    def __str__(self) -> str:
        ant = " , ".join(show_formula(f) for f in self.antecedent)
        suc = " ; ".join(_show_labelled(f, l) for f, l in self.succedent)
        return f"{ant} |- {suc}".strip()


def _show_labelled(f: Formula, label: frozenset) -> str:
    s = show_formula(f)
    if not label:
        return s
    lab = ba.show_expr(_label_expr(label))
    return f"({s})[{lab}]" if " " in s else f"{s}[{lab}]"


def _label_expr(label: frozenset) -> ba.BoolExpr:
    lits = sorted(label, key=lambda l: (ba.natural_key(l[0]), not l[1]))
    return ba.prod_all(ba.Var(n) if pos else ba.Compl(ba.Var(n)) for n, pos in lits)


def _key(f: Formula) -> str:
    return show_formula(f)


def _ant(fs) -> tuple:
    return tuple(sorted(fs, key=_key))


def jsequent(ant, suc) -> Sequent:
    """Plain multi-succedent sequent from two formula lists."""
    a = comma(*[leaf(f) for f in ant]) if len(ant) != 1 else leaf(ant[0])
    s = semi(*[leaf(f) for f in suc]) if len(suc) != 1 else leaf(suc[0])
    if not ant:
        a = AUNIT
    return Sequent(a, s)


def _sides(s: Sequent) -> tuple:
    return formulas_of(s.antecedent), formulas_of(s.succedent)


def _check_ipl_formula(f: Formula):
    if isinstance(f, Op):
        if f.name not in ("and", "or", "imp", "not"):
            raise ValueError(f"LK+⊕B has no rules for {f.name!r}")
        for a in f.args:
            _check_ipl_formula(a)


# ---------------------------------------------------------------------------
# search

class _Fresh:
    def __init__(self):
        self.count = 0

    def __call__(self) -> str:
        self.count += 1
        return f"y{self.count}"


def _dead(label: frozenset, forced: Mapping) -> bool:
    return any(forced.get(n, p) != p for n, p in label)


def _force(label: frozenset, forced: dict | None):
    if forced is None:
        return None
    out = dict(forced)
    for n, p in label:
        if out.get(n, p) != p:
            return False
        out[n] = p
    return out


@dataclass
class _Step:
    rule: str
    premisses: tuple
    force: frozenset | None = None   # label that must equal 1
    principal: tuple | None = None   # ("L", formula) or ("R", index)


def _steps(s: JSeq, fresh, forced: Mapping) -> Iterator[_Step]:
    ant, suc = s.antecedent, s.succedent
    live = [(i, f, l) for i, (f, l) in enumerate(suc) if not _dead(l, forced)]
    ant_set = set(ant)
    # axioms
    for i, f, l in live:
        if f in ant_set:
            yield _Step("ax", (), l, ("R", i))
    # one invertible step, if any
    eager = _eager(s, ant_set, live)
    if eager is not None:
        yield eager(fresh)
        return
    # choices: unfold a left negation or implication, or →R / ¬R
    spent = s.spent
    for f in ant:
        if not isinstance(f, Op) or f in spent:
            continue
        if f.name == "not":
            yield _Step("notL", (JSeq(ant, suc + ((f.args[0], ONE),), spent | {f}),), None, ("L", f))
        elif f.name == "imp" and f.args[1] not in ant_set:
            yield _Step("impL", (
                JSeq(ant, suc + ((f.args[0], ONE),), spent | {f}),
                JSeq(_ant(ant + (f.args[1],)), suc, spent | {f})), None, ("L", f))
    for i, f, l in live:
        if isinstance(f, Op) and f.name in ("imp", "not"):
            y = fresh()
            lab = l | {(y, True)}
            rest = tuple((g, m | {(y, False)}) for j, (g, m) in enumerate(suc) if j != i)
            if f.name == "imp":
                prem = JSeq(_ant(ant + (f.args[0],)), ((f.args[1], lab),) + rest)
                yield _Step("impR", (prem,), lab, ("R", i))
            else:
                prem = JSeq(_ant(ant + (f.args[0],)), rest)
                yield _Step("notR", (prem,), lab, ("R", i))


def _eager(s: JSeq, ant_set: set, live: list):
    """The first invertible step: antecedent ∧/∨, then succedent ∧/∨."""
    ant, suc, spent = s.antecedent, s.succedent, s.spent
    for k, f in enumerate(ant):
        if isinstance(f, Op) and f.name in ("and", "or"):
            rest = ant[:k] + ant[k + 1:]
            if f.name == "and":
                return lambda fresh: _Step("andL", (JSeq(_ant(rest + f.args), suc, spent),), None, ("L", f))
            return lambda fresh: _Step(
                "orL", tuple(JSeq(_ant(rest + (a,)), suc, spent) for a in f.args), None, ("L", f))
    for kind in ("and", "or"):
        for i, f, l in live:
            if not (isinstance(f, Op) and f.name == kind):
                continue
            rest = suc[:i] + suc[i + 1:]
            if kind == "and":
                return lambda fresh: _Step(
                    "andR", tuple(JSeq(ant, rest + ((a, l),), spent) for a in f.args), None, ("R", i))

            def or_r(fresh, f=f, l=l, rest=rest, i=i):
                y = fresh()
                new = ((f.args[0], l | {(y, True)}), (f.args[1], l | {(y, False)}))
                return _Step("orR", (JSeq(ant, new + rest, spent),), None, ("R", i))
            return or_r
    return None


def _search(s: JSeq, depth: int, fresh, forced) -> Iterator[tuple]:
    if depth <= 0:
        return
    view = forced if forced is not None else {}
    for st in _steps(s, fresh, view):
        f2 = forced
        cons = ()
        if st.force is not None:
            cons = (ba.Eq(_label_expr(st.force), ba.ONE),)
            f2 = _force(st.force, forced)
            if f2 is False:
                continue
        node_info = {"principal": st.principal}
        for kids, f3 in _search_all(st.premisses, depth - 1, fresh, f2):
            yield ProofTree(s, st.rule, kids, cons, node_info), f3


def _search_all(prems, depth, fresh, forced) -> Iterator[tuple]:
    if not prems:
        yield (), forced
        return
    for first, f1 in _search(prems[0], depth, fresh, forced):
        for rest, f2 in _search_all(prems[1:], depth, fresh, f1):
            yield (first,) + rest, f2


def _lift(goal: Sequent) -> JSeq:
    ant, suc = _sides(goal)
    for f in ant + suc:
        _check_ipl_formula(f)
    return JSeq(_ant(ant), tuple((f, ONE) for f in suc))


def reduce_lkplusb(goal: Sequent, depth: int, prune: bool = False) -> Iterator[ProofTree]:
    """Complete LK+⊕B-reductions of ``goal`` of height ≤ ``depth``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    for tree, _ in _search(_lift(goal), depth, _Fresh(), {} if prune else None):
        yield tree


@dataclass
class IPLResult:
    reduction: ProofTree
    interpretation: dict
    proof: ProofTree


def _variables(r: ProofTree) -> list:
    names = set()
    for n in r.nodes():
        for _, l in n.sequent.succedent:
            names |= {v for v, _ in l}
    return sorted(names, key=ba.natural_key)


def prove_ipl(goal: Sequent, depth: int = 8) -> IPLResult | None:
    for tree, forced in _search(_lift(goal), depth, _Fresh(), {}):
        interp = {v: 0 for v in _variables(tree)}
        interp.update({n: int(p) for n, p in forced.items()})
        assert all(ba.eval_constraint(c, interp) for c in tree.all_constraints())
        return IPLResult(tree, interp, sigma_image(tree, interp))
    return None


# ---------------------------------------------------------------------------
# choice ergo

@dataclass(frozen=True)
class EnrichedLJSequent:
    """Sides are tuples of (formula, BoolExpr or None); None means unlabelled."""
    antecedent: tuple
    succedent: tuple


def choice_ergo(s, interp: Mapping[str, int]) -> Sequent:
    """σ_I: keep formulas whose label is 1, drop those whose label is 0."""
    if isinstance(s, JSeq):
        s = EnrichedLJSequent(tuple((f, None) for f in s.antecedent),
                              tuple((f, _label_expr(l)) for f, l in s.succedent))

    def keep(side):
        return [f for f, e in side if e is None or ba.eval_expr(e, interp) == 1]

    return jsequent(keep(s.antecedent), keep(s.succedent))


def sigma_image(r: ProofTree, interp: Mapping[str, int]) -> ProofTree:
    """LJ+ proof obtained from a coherent LK+⊕B reduction."""

    def go(n: ProofTree) -> ProofTree:
        seq = choice_ergo(n.sequent, interp)
        kids = tuple(go(c) for c in n.children)
        side, where = n.info.get("principal") or (None, None)
        if side == "R":
            _, label = n.sequent.succedent[where]
            if _value(label, interp) == 0:
                return kids[0] if kids else ProofTree(seq, n.rule)
        if n.rule == "orR":
            # one disjunct is erased in the premiss; restore it by weakening
            f, label = n.sequent.succedent[where]
            ant, suc = _sides(kids[0].sequent)
            full = jsequent(ant, suc + [f.args[1] if _value(n.children[0].sequent.succedent[0][1], interp) else f.args[0]])
            return ProofTree(seq, "orR", (ProofTree(full, "wR", kids),))
        if n.rule in ("impL", "notL"):
            f = where
            ant, suc = _sides(seq)
            doubled = jsequent(ant + [f], suc)
            return ProofTree(seq, "cL", (ProofTree(doubled, n.rule, kids),))
        return ProofTree(seq, n.rule, kids)

    return go(r)


def _value(label: frozenset, interp) -> int:
    return int(all(interp[n] == p for n, p in label))


# ---------------------------------------------------------------------------
# checkers

def _cnt(fs) -> Counter:
    return Counter(fs)


def _minus(c: Counter, *fs) -> Counter | None:
    out = Counter(c)
    for f in fs:
        if out[f] <= 0:
            return None
        out[f] -= 1
    return +out


def _ops(c: Counter, name: str):
    return [f for f in c if isinstance(f, Op) and f.name == name]


def _check_ljplus_node(n: ProofTree) -> str | None:
    a, s = map(_cnt, _sides(n.sequent))
    prem = [tuple(map(_cnt, _sides(c.sequent))) for c in n.children]
    rule, k = n.rule, len(prem)
    need = {"ax": 0, "wL": 1, "wR": 1, "cL": 1, "e": 1, "notL": 1, "notR": 1, "andL": 1,
            "andR": 2, "orL": 2, "orR": 1, "impL": 2, "impR": 1}
    if rule not in need:
        return f"unknown rule {rule!r}"
    if k != need[rule]:
        return f"expected {need[rule]} premisses, found {k}"
    if rule == "ax":
        return None if set(a) & set(s) else "no formula shared by both sides"
    if rule == "e":
        return None if prem[0] == (a, s) else "premiss differs"
    pa, ps = prem[0]
    if rule == "wL":
        return None if any(_minus(a, f) == pa for f in a) and ps == s else "not a left weakening"
    if rule == "wR":
        return None if any(_minus(s, f) == ps for f in s) and pa == a else "not a right weakening"
    if rule == "cL":
        return None if any(pa == a + _cnt([f]) for f in a) and ps == s else "not a left contraction"
    if rule == "notL":
        for f in _ops(a, "not"):
            if pa == _minus(a, f) and ps == s + _cnt([f.args[0]]):
                return None
        return "no matching negation on the left"
    if rule == "notR":
        for f in _ops(s, "not"):
            if pa == a + _cnt([f.args[0]]) and not ps:
                return None
        return "no matching negation on the right (premiss succedent must be empty)"
    if rule == "andL":
        for f in _ops(a, "and"):
            if pa == _minus(a, f) + _cnt(f.args) and ps == s:
                return None
        return "no matching conjunction on the left"
    if rule == "andR":
        for f in _ops(s, "and"):
            rest = _minus(s, f)
            if prem == [(a, rest + _cnt([f.args[0]])), (a, rest + _cnt([f.args[1]]))]:
                return None
        return "no matching conjunction on the right"
    if rule == "orL":
        for f in _ops(a, "or"):
            rest = _minus(a, f)
            if prem == [(rest + _cnt([f.args[0]]), s), (rest + _cnt([f.args[1]]), s)]:
                return None
        return "no matching disjunction on the left"
    if rule == "orR":
        for f in _ops(s, "or"):
            if pa == a and ps == _minus(s, f) + _cnt(f.args):
                return None
        return "no matching disjunction on the right"
    if rule == "impL":
        for f in _ops(a, "imp"):
            rest = _minus(a, f)
            if prem == [(rest, s + _cnt([f.args[0]])), (rest + _cnt([f.args[1]]), s)]:
                return None
        return "no matching implication on the left"
    if rule == "impR":
        for f in _ops(s, "imp"):
            if pa == a + _cnt([f.args[0]]) and ps == _cnt([f.args[1]]):
                return None
        return "no matching implication on the right (premiss succedent must be the consequent alone)"
    return None


def check_ljplus_proof(t: ProofTree) -> CheckResult:
    return check_tree(t, _check_ljplus_node)


def _check_lj_node(n: ProofTree) -> str | None:
    a, s = map(_cnt, _sides(n.sequent))
    prem = [tuple(map(_cnt, _sides(c.sequent))) for c in n.children]
    if sum(s.values()) > 1 or any(sum(p[1].values()) > 1 for p in prem):
        return "succedent must hold at most one formula"
    rule, k = n.rule, len(prem)
    need = {"ax": 0, "wL": 1, "wR": 1, "cL": 1, "e": 1, "andR": 2, "andL1": 1, "andL2": 1,
            "notR": 1, "orL": 2, "orR1": 1, "orR2": 1, "notL": 1, "impR": 1, "impL": 2}
    if rule not in need:
        return f"unknown rule {rule!r}"
    if k != need[rule]:
        return f"expected {need[rule]} premisses, found {k}"
    if rule == "ax":
        return None if a == s and sum(a.values()) == 1 else "not of the form phi |- phi"
    if rule == "e":
        return None if prem[0] == (a, s) else "premiss differs"
    pa, ps = prem[0]
    empty = Counter()
    if rule == "wL":
        return None if any(_minus(a, f) == pa for f in a) and ps == s else "not a left weakening"
    if rule == "wR":
        return None if s and pa == a and ps == empty else "not a right weakening"
    if rule == "cL":
        return None if any(pa == a + _cnt([f]) for f in a) and ps == s else "not a left contraction"
    if rule in ("andL1", "andL2"):
        i = 0 if rule == "andL1" else 1
        for f in _ops(a, "and"):
            if pa == _minus(a, f) + _cnt([f.args[i]]) and ps == s:
                return None
        return "no matching conjunction on the left"
    if rule == "andR":
        for f in _ops(s, "and"):
            if prem == [(a, _cnt([f.args[0]])), (a, _cnt([f.args[1]]))]:
                return None
        return "no matching conjunction on the right"
    if rule == "notR":
        for f in _ops(s, "not"):
            if pa == a + _cnt([f.args[0]]) and ps == empty:
                return None
        return "no matching negation on the right"
    if rule == "orL":
        for f in _ops(a, "or"):
            rest = _minus(a, f)
            if prem == [(rest + _cnt([f.args[0]]), s), (rest + _cnt([f.args[1]]), s)]:
                return None
        return "no matching disjunction on the left"
    if rule in ("orR1", "orR2"):
        i = 0 if rule == "orR1" else 1
        for f in _ops(s, "or"):
            if pa == a and ps == _cnt([f.args[i]]):
                return None
        return "no matching disjunction on the right"
    if rule == "notL":
        if s:
            return "conclusion succedent must be empty"
        for f in _ops(a, "not"):
            if pa == _minus(a, f) and ps == _cnt([f.args[0]]):
                return None
        return "no matching negation on the left"
    if rule == "impR":
        for f in _ops(s, "imp"):
            if pa == a + _cnt([f.args[0]]) and ps == _cnt([f.args[1]]):
                return None
        return "no matching implication on the right"
    if rule == "impL":
        (g1, d1), (g2, d2) = prem
        for f in _ops(a, "imp"):
            rest = _minus(a, f)
            if d1 == _cnt([f.args[0]]) and d2 == s and _minus(g2, f.args[1]) is not None \
                    and g1 + _minus(g2, f.args[1]) == rest:
                return None
        return "no matching implication on the left"
    return None


def check_lj_proof(t: ProofTree) -> CheckResult:
    return check_tree(t, _check_lj_node)
