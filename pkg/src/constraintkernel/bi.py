"""Resource distribution via Boolean constraints for BI.

Antecedents are labelled bunch trees.  Every node may carry a label, a
product of literals stored as a frozenset of ``(variable, polarity)`` pairs;
the *effective* label of a node is the product of the labels on its path
from the root.  Multiplicative splits multiply the labels of the top-level
elements by fresh variables ``V`` on one premiss and by ``V̄`` on the other,
so the decision of where each resource goes is deferred to the solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import boolalg as ba
from .proofs import CheckResult, ProofTree, check_tree
from .syntax import (AUNIT, MUNIT, Bunch, Formula, Op, Sequent, leaf, normalize, show_bunch,
                     show_formula)

__all__ = [
    "LB", "ESeq", "annotate", "lift_sequent", "reduce_lbib", "prove_bi", "valuate",
    "valuate_sequent", "check_lbi_proof", "search_lbi", "lift_lbi_proof", "coherence",
    "BIResult", "RULES",
]

RULES = ("taut", "botL", "mtopR", "topR", "wandL", "wandR", "mandL", "mandR", "mtopL",
         "andL", "andR", "topL", "orL", "orR1", "orR2", "impL", "impR", "w", "c", "e")

ONE: frozenset = frozenset()
_INVERTIBLE_LEFT = {"mand": "mandL", "and": "andL", "mtop": "mtopL", "top": "topL", "or": "orL"}


# ---------------------------------------------------------------------------
# labelled bunches

@dataclass(frozen=True)
class LB:
    kind: str                       # "leaf", "," or ";"
    formula: Formula | None = None
    children: tuple = ()
    label: frozenset = ONE

    @property
    def key(self) -> str:
        return show_lb(self)


def _lit_expr(lit) -> ba.BoolExpr:
    name, pos = lit
    v = ba.Var(name)
    return v if pos else ba.Compl(v)


def label_expr(label: frozenset) -> ba.BoolExpr:
    lits = sorted(label, key=lambda l: (ba.natural_key(l[0]), not l[1]))
    return ba.prod_all(_lit_expr(l) for l in lits)


def label_value(label: frozenset, interp) -> int:
    for name, pos in label:
        try:
            v = interp[name]
        except KeyError:
            raise ba.UnboundVariable(name) from None
        if v != pos:
            return 0
    return 1


def _lits_of(e: ba.BoolExpr) -> frozenset | None:
    """Literal set of a product of literals, or None for other shapes."""
    if isinstance(e, ba.Var):
        return frozenset({(e.name, True)})
    if isinstance(e, ba.Compl) and isinstance(e.arg, ba.Var):
        return frozenset({(e.arg.name, False)})
    if e == ba.ONE:
        return ONE
    if isinstance(e, ba.Prod):
        a, b = _lits_of(e.left), _lits_of(e.right)
        return None if a is None or b is None else a | b
    return None


def show_label(label: frozenset) -> str:
    return ba.show_expr(label_expr(label))


def show_lb(t: LB) -> str:
    if t.kind == "leaf":
        s = show_formula(t.formula)
        if t.label:
            s = f"({s})" if " " in s else s
    elif not t.children:
        s = "ex" if t.kind == "," else "e+"
    else:
        parts = []
        for c in t.children:
            cs = show_lb(c)
            if c.kind != "leaf" and c.children and not c.label:
                cs = f"({cs})"
            parts.append(cs)
        s = f" {t.kind} ".join(parts)
        if t.label:
            s = f"({s})"
    return f"{s}[{show_label(t.label)}]" if t.label else s


def lift_bunch(b: Bunch, label: frozenset = ONE) -> LB:
    if b.kind == "leaf":
        return LB("leaf", b.formula, (), label)
    return LB(b.kind, None, tuple(lift_bunch(c) for c in b.children), label)


def lb_normalize(t: LB, extra: frozenset = ONE) -> LB:
    """Flatten same-kind regions (pushing labels down), drop units, sort."""
    lab = t.label | extra
    if t.kind == "leaf":
        return LB("leaf", t.formula, (), lab)
    kids = []
    for c in t.children:
        n = lb_normalize(c)
        if n.kind == t.kind:
            kids.extend(LB(g.kind, g.formula, g.children, g.label | n.label) for g in n.children)
        else:
            kids.append(n)
    if len(kids) == 1:
        k = kids[0]
        return lb_normalize(k, lab) if k.kind == t.kind else LB(k.kind, k.formula, k.children, k.label | lab)
    kids.sort(key=lambda x: x.key)
    return LB(t.kind, None, tuple(kids), lab)


def annotate(b: Bunch, labels: Sequence[ba.BoolExpr]) -> LB:
    """Annotate the top-level multiplicative positions of ``b`` with ``labels``."""
    labels = list(labels)

    def positions(x: Bunch) -> int:
        if x.kind == "," and x.children:
            return sum(positions(c) for c in x.children)
        return 1

    if positions(b) != len(labels):
        raise ValueError(f"annotation needs {positions(b)} labels, got {len(labels)}")

    def lab(e: ba.BoolExpr) -> frozenset:
        ls = _lits_of(e)
        if ls is None:
            raise ValueError(f"labels must be products of literals: {ba.show_expr(e)}")
        return ls

    def go(x: Bunch, vs: list) -> LB:
        if x.kind == "," and x.children:
            out, i = [], 0
            for c in x.children:
                n = positions(c)
                out.append(go(c, vs[i:i + n]))
                i += n
            return LB(",", None, tuple(out))
        return lift_bunch(x, lab(vs[0]))

    return go(b, labels)


# ---------------------------------------------------------------------------
# enriched sequents

@dataclass(frozen=True)
class ESeq:
    antecedent: LB
    succedent: Formula

    def __str__(self) -> str:
        return f"{show_lb(self.antecedent)} |- {show_formula(self.succedent)}"


def lift_sequent(s: Sequent) -> ESeq:
    if s.succedent.kind != "leaf":
        raise ValueError("a BI sequent has a single formula on the right")
    return ESeq(lb_normalize(lift_bunch(s.antecedent)), s.succedent.formula)


def _nodes(t: LB, path=(), eff=ONE) -> Iterator[tuple]:
    e = eff | t.label
    yield path, t, e
    for i, c in enumerate(t.children):
        yield from _nodes(c, path + (i,), e)


def _get(t: LB, path) -> LB:
    for i in path:
        t = t.children[i]
    return t


def _replace(t: LB, path, new: LB) -> LB:
    if not path:
        return new
    kids = list(t.children)
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return LB(t.kind, t.formula, tuple(kids), t.label)


def _top_level(t: LB) -> list:
    """(path, node, effective label) of the top-level multiplicative elements."""
    if t.kind == ",":
        return [((i,), c, t.label | c.label) for i, c in enumerate(t.children)]
    return [((), t, t.label)]


def _scale(t: LB, paths_labels: list) -> LB:
    for path, extra in paths_labels:
        node = _get(t, path)
        t = _replace(t, path, LB(node.kind, node.formula, node.children, node.label | extra))
    return t


def _eq(label: frozenset, value: int) -> ba.Eq:
    return ba.Eq(label_expr(label), ba.Lit(value))


def _all_eq(pairs) -> ba.Constraint:
    return ba.conj(*[_eq(l, v) for l, v in pairs]) if pairs else ba.TRUE


def _detach(t: LB, eff: frozenset) -> LB:
    """A sub-bunch moved into a fresh sequent keeps its path labels."""
    return LB(t.kind, t.formula, t.children, eff)


@dataclass
class Step:
    rule: str
    premisses: tuple
    constraints: tuple
    eager: bool = False
    closing: bool = False


class _Fresh:
    def __init__(self):
        self.count = 0

    def __call__(self) -> str:
        self.count += 1
        return f"x{self.count}"


def _instances(s: ESeq, fresh, with_structural: bool = True) -> Iterator[Step]:
    """Every LBI_B rule instance applicable backwards to ``s``."""
    ant, suc = s.antecedent, s.succedent
    top = _top_level(ant)
    norm = lambda t: lb_normalize(t)

    # closing rules
    for path, node, e in top:
        others = [(o_e, 0) for p, o, o_e in top if p != path]
        if node.kind == "leaf" and node.formula == suc:
            yield Step("taut", (), (_all_eq([(e, 1)] + others),), closing=True)
        if node.kind == "leaf" and node.formula == Op("bot"):
            yield Step("botL", (), (_all_eq([(e, 1)] + others),), closing=True)
        if node.kind == ";" and not node.children and suc == Op("top"):
            yield Step("topR", (), (_all_eq([(e, 1)] + others),), closing=True)
    if suc == Op("mtop"):
        yield Step("mtopR", (), (_all_eq([(e, 0) for _, _, e in top]),), closing=True)

    # right rules
    if isinstance(suc, Op) and suc.name == "and":
        yield Step("andR", (ESeq(ant, suc.args[0]), ESeq(ant, suc.args[1])), (), eager=True)
    if isinstance(suc, Op) and suc.name in ("wand", "imp"):
        x = fresh()
        lab = frozenset({(x, True)})
        kind = "," if suc.name == "wand" else ";"
        prem = ESeq(norm(LB(kind, None, (ant, LB("leaf", suc.args[0], (), lab)))), suc.args[1])
        yield Step("wandR" if suc.name == "wand" else "impR", (prem,), (_eq(lab, 1),), eager=True)
    if isinstance(suc, Op) and suc.name == "mand":
        xs = [fresh() for _ in top]
        left = _scale(ant, [(p, frozenset({(x, True)})) for (p, _, _), x in zip(top, xs)])
        right = _scale(ant, [(p, frozenset({(x, False)})) for (p, _, _), x in zip(top, xs)])
        yield Step("mandR", (ESeq(norm(left), suc.args[0]), ESeq(norm(right), suc.args[1])), ())
    if isinstance(suc, Op) and suc.name == "or":
        yield Step("orR1", (ESeq(ant, suc.args[0]),), ())
        yield Step("orR2", (ESeq(ant, suc.args[1]),), ())

    # left rules
    for path, node, e in _nodes(ant):
        if node.kind != "leaf" or not isinstance(node.formula, Op):
            continue
        f = node.formula
        n, lab = f.name, node.label
        eager = e == ONE
        if n in ("mand", "and"):
            kind = "," if n == "mand" else ";"
            new = LB(kind, None, tuple(LB("leaf", a) for a in f.args), lab)
            yield Step(_INVERTIBLE_LEFT[n], (ESeq(norm(_replace(ant, path, new)), suc),), (_eq(e, 1),), eager)
        elif n in ("mtop", "top"):
            new = LB("," if n == "mtop" else ";", None, (), lab)
            yield Step(_INVERTIBLE_LEFT[n], (ESeq(norm(_replace(ant, path, new)), suc),), (_eq(e, 1),), eager)
        elif n == "or":
            prems = tuple(ESeq(norm(_replace(ant, path, LB("leaf", a, (), lab))), suc) for a in f.args)
            yield Step("orL", prems, (_eq(e, 1),), eager)
        elif n == "wand":
            parent_path = path[:-1]
            parent = _get(ant, parent_path) if path else None
            if parent is not None and parent.kind == ",":
                p_eff = _eff(ant, parent_path)
                sibs = [(i, c) for i, c in enumerate(parent.children) if i != path[-1]]
                xs = [fresh() for _ in sibs]
                left_kids = tuple(_detach(c, p_eff | c.label | {(x, True)}) for (i, c), x in zip(sibs, xs))
                right_kids = tuple(LB(c.kind, c.formula, c.children, c.label | {(x, False)})
                                   for (i, c), x in zip(sibs, xs))
                left = LB(",", None, left_kids)
                new_parent = LB(",", None, right_kids + (LB("leaf", f.args[1], (), lab),), parent.label)
                right = _replace(ant, parent_path, new_parent)
            else:
                left = MUNIT_LB
                right = _replace(ant, path, LB("leaf", f.args[1], (), lab))
            yield Step("wandL", (ESeq(norm(left), f.args[0]), ESeq(norm(right), suc)), (_eq(e, 1),))
        elif n == "imp":
            parent_path = path[:-1]
            parent = _get(ant, parent_path) if path else None
            if parent is not None and parent.kind == ";":
                p_eff = _eff(ant, parent_path)
                sibs = [_detach(c, p_eff | c.label) for i, c in enumerate(parent.children) if i != path[-1]]
                left = LB(";", None, tuple(sibs))
            else:
                left = AUNIT_LB
            right = _replace(ant, path, LB("leaf", f.args[1], (), lab))
            yield Step("impL", (ESeq(norm(left), f.args[0]), ESeq(norm(right), suc)), (_eq(e, 1),))

    if not with_structural:
        return
    # weakening: drop an additive child, or empty a top-level element for top
    for path, node, e in _nodes(ant):
        if not path:
            continue
        parent = _get(ant, path[:-1])
        if parent.kind == ";":
            new = _replace(ant, path, LB(";", None, (), node.label))
            yield Step("w", (ESeq(norm(new), suc),), (_eq(e, 1),))
    if suc == Op("top"):
        for path, node, e in top:
            if node.kind == ";" and not node.children:
                continue
            new = _replace(ant, path, LB(";", None, (), node.label))
            yield Step("w", (ESeq(norm(new), suc),), (_eq(e, 1),))
    # contraction on formula occurrences
    for path, node, e in _nodes(ant):
        if node.kind != "leaf":
            continue
        plain = LB("leaf", node.formula)
        new = _replace(ant, path, LB(";", None, (plain, plain), node.label))
        yield Step("c", (ESeq(norm(new), suc),), (_eq(e, 1),))


MUNIT_LB = LB(",")
AUNIT_LB = LB(";")


def _eff(t: LB, path) -> frozenset:
    e = t.label
    for i in path:
        t = t.children[i]
        e = e | t.label
    return e


def _strategy(s: ESeq, fresh) -> Iterator[Step]:
    """Closers first; an invertible step on a 1-labelled principal is taken alone."""
    deferred = []
    for st in _instances(s, fresh):
        if st.closing:
            yield st
        elif st.eager:
            yield st
            return
        else:
            deferred.append(st)
    yield from deferred


# ---------------------------------------------------------------------------
# constraint store with unit propagation

class _Store:
    __slots__ = ("assign", "clauses")

    def __init__(self, assign=None, clauses=()):
        self.assign = assign or {}
        self.clauses = clauses

    def add(self, cs) -> "_Store | None":
        units, clauses = [], list(self.clauses)
        stack = list(cs)
        while stack:
            c = stack.pop()
            if isinstance(c, ba.Conj):
                stack.extend(c.args)
                continue
            if isinstance(c, ba.Eq) and isinstance(c.right, ba.Lit):
                lits = _lits_of(c.left)
                if lits is not None:
                    if c.right.value == 1:
                        units.extend(lits)
                    else:
                        clauses.append(lits)
                    continue
            raise ValueError("unsupported constraint shape")
        assign = dict(self.assign)
        for name, pos in units:
            if assign.get(name, pos) != pos:
                return None
            assign[name] = pos
        # propagate clauses "not every literal holds"
        changed = True
        while changed:
            changed = False
            keep = []
            for cl in clauses:
                open_lits, satisfied = [], False
                for name, pos in cl:
                    v = assign.get(name)
                    if v is None:
                        open_lits.append((name, pos))
                    elif v != pos:
                        satisfied = True
                        break
                if satisfied:
                    continue
                if not open_lits:
                    return None
                if len(open_lits) == 1:
                    name, pos = open_lits[0]
                    assign[name] = not pos
                    changed = True
                    continue
                keep.append(frozenset(open_lits))
            clauses = keep
        return _Store(assign, tuple(clauses))


# ---------------------------------------------------------------------------
# search

def _search(s: ESeq, depth: int, fresh, store: _Store | None, strategy) -> Iterator[tuple]:
    if depth <= 0:
        return
    for st in strategy(s, fresh):
        st_store = store
        if store is not None:
            st_store = store.add(st.constraints)
            if st_store is None:
                continue
        for kids, out in _search_all(st.premisses, depth - 1, fresh, st_store, strategy):
            yield ProofTree(s, st.rule, kids, st.constraints), out


def _search_all(prems, depth, fresh, store, strategy) -> Iterator[tuple]:
    if not prems:
        yield (), store
        return
    for first, st1 in _search(prems[0], depth, fresh, store, strategy):
        for rest, st2 in _search_all(prems[1:], depth, fresh, st1, strategy):
            yield (first,) + rest, st2


def reduce_lbib(goal: Sequent, depth: int, prune: bool = False) -> Iterator[ProofTree]:
    """Complete LBI_B-reductions of the 1-annotated goal within ``depth``.

    With ``prune`` the stream skips branches whose constraints are already
    refuted by unit propagation; the coherent reductions are the same.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    store = _Store() if prune else None
    for tree, _ in _search(lift_sequent(goal), depth, _Fresh(), store, _strategy):
        yield tree


def coherence(r: ProofTree) -> dict | None:
    from .proofs import coherence as _coh
    return _coh(r)


@dataclass
class BIResult:
    reduction: ProofTree
    interpretation: dict
    proof: ProofTree


def prove_bi(goal: Sequent, depth: int = 6) -> BIResult | None:
    for r in reduce_lbib(goal, depth, prune=True):
        interp = ba.solve(r.all_constraints())
        if interp is not None:
            interp = _complete(r, interp)
            return BIResult(r, interp, valuate(r, interp))
    return None


def reduction_vars(r: ProofTree) -> list:
    names: set = set()
    for n in r.nodes():
        for _, node, _ in _nodes(n.sequent.antecedent):
            names |= {name for name, _ in node.label}
        for c in n.constraints:
            names |= ba.constraint_vars(c)
    return sorted(names, key=ba.natural_key)


def _complete(r: ProofTree, interp: dict) -> dict:
    out = {v: 0 for v in reduction_vars(r)}
    out.update(interp)
    return out


# ---------------------------------------------------------------------------
# valuation

def _valuate_lb(t: LB, interp, parent_kind: str | None, eff=ONE) -> Bunch:
    lab = eff | t.label
    if label_value(lab, interp) == 0:
        return MUNIT if parent_kind in (None, ",") else AUNIT
    if t.kind == "leaf":
        return leaf(t.formula)
    return Bunch(t.kind, None, tuple(_valuate_lb(c, interp, t.kind, lab) for c in t.children))


def valuate_sequent(s: ESeq, interp) -> Sequent:
    return Sequent(normalize(_valuate_lb(s.antecedent, interp, None)), leaf(s.succedent))


def valuate(r: ProofTree, interp) -> ProofTree:
    """Apply ν_I: keep 1-labelled material, erase the rest, drop constraints."""
    for c in r.all_constraints():
        if not ba.eval_constraint(c, interp):
            raise ValueError(f"interpretation violates {ba.show_constraint(c)}")

    def go(n: ProofTree) -> ProofTree:
        seq = valuate_sequent(n.sequent, interp)
        kids = tuple(go(c) for c in n.children)
        if len(kids) == 1 and kids[0].sequent == seq:
            return kids[0]
        return ProofTree(seq, n.rule, kids)

    return go(r)


# ---------------------------------------------------------------------------
# LBI checker

def _seq_parts(s: Sequent):
    if s.succedent.kind != "leaf":
        return None
    return normalize(s.antecedent), s.succedent.formula


def _occurrences(b: Bunch, path=()) -> Iterator[tuple]:
    yield path, b
    for i, c in enumerate(b.children):
        yield from _occurrences(c, path + (i,))


def _at(b: Bunch, path) -> Bunch:
    for i in path:
        b = b.children[i]
    return b


def _put(b: Bunch, path, new: Bunch) -> Bunch:
    if not path:
        return new
    kids = list(b.children)
    kids[path[0]] = _put(kids[path[0]], path[1:], new)
    return Bunch(b.kind, None, tuple(kids))


def _regions(b: Bunch) -> Iterator[tuple]:
    """(region, rebuild) pairs: a sub-bunch up to ≡ and a way to swap it out."""
    yield b, lambda x: normalize(x)
    for path, node in _occurrences(b):
        if node.kind == "leaf" or not node.children:
            continue
        n = len(node.children)
        for r in range(1, n + 1):
            for idx in itertools.combinations(range(n), r):
                if r == n and not path:
                    continue
                chosen = tuple(node.children[i] for i in idx)
                rest = tuple(c for i, c in enumerate(node.children) if i not in idx)
                region = chosen[0] if r == 1 else Bunch(node.kind, None, chosen)

                def rebuild(x, path=path, node=node, rest=rest):
                    return normalize(_put(b, path, Bunch(node.kind, None, rest + (x,))))

                yield region, rebuild


def _leaf_occurrences(b: Bunch, name: str) -> Iterator[tuple]:
    for path, node in _occurrences(b):
        if node.kind == "leaf" and isinstance(node.formula, Op) and node.formula.name == name:
            yield path, node.formula


def _subsets(items: list) -> Iterator[tuple]:
    for r in range(len(items) + 1):
        for idx in itertools.combinations(range(len(items)), r):
            yield [items[i] for i in idx], [x for i, x in enumerate(items) if i not in idx]


def _bundle(kind: str, items: list) -> Bunch:
    return normalize(Bunch(kind, None, tuple(items)))


def _check_lbi_node(n: ProofTree) -> str | None:
    parts = _seq_parts(n.sequent)
    if parts is None:
        return "succedent must be a single formula"
    ant, suc = parts
    prem = []
    for c in n.children:
        p = _seq_parts(c.sequent)
        if p is None:
            return "premiss succedent must be a single formula"
        prem.append(p)
    rule, k = n.rule, len(prem)

    def arity(m):
        return None if k == m else f"expected {m} premisses, found {k}"

    if rule == "taut":
        return arity(0) or (None if ant == leaf(suc) else "antecedent is not the succedent formula")
    if rule == "botL":
        ok = any(True for _ in _leaf_occurrences(ant, "bot"))
        return arity(0) or (None if ok else "no bot in antecedent")
    if rule == "mtopR":
        return arity(0) or (None if ant == MUNIT and suc == Op("mtop") else "not ex |- mtop")
    if rule == "topR":
        return arity(0) or (None if ant == AUNIT and suc == Op("top") else "not e+ |- top")
    if rule in ("andR", "mandR", "wandR", "impR", "orR1", "orR2"):
        want = {"andR": "and", "mandR": "mand", "wandR": "wand", "impR": "imp",
                "orR1": "or", "orR2": "or"}[rule]
        if not (isinstance(suc, Op) and suc.name == want):
            return f"succedent is not a {want} formula"
        a, b = suc.args
        if rule == "andR":
            return arity(2) or (None if prem == [(ant, a), (ant, b)] else "premisses do not match")
        if rule in ("orR1", "orR2"):
            target = a if rule == "orR1" else b
            return arity(1) or (None if prem[0] == (ant, target) else "premiss does not match")
        if rule == "wandR":
            return arity(1) or (None if prem[0] == (_bundle(",", [ant, leaf(a)]), b) else "premiss does not match")
        if rule == "impR":
            return arity(1) or (None if prem[0] == (_bundle(";", [ant, leaf(a)]), b) else "premiss does not match")
        # mandR: conclusion ≡ (left , right)
        if arity(2):
            return arity(2)
        (l_ant, l_suc), (r_ant, r_suc) = prem
        if (l_suc, r_suc) != (a, b):
            return "premiss succedents do not match"
        return None if _bundle(",", [l_ant, r_ant]) == ant else "antecedent is not the split of the premisses"
    if rule in ("mandL", "andL", "mtopL", "topL", "orL"):
        want = {"mandL": "mand", "andL": "and", "mtopL": "mtop", "topL": "top", "orL": "or"}[rule]
        if arity(2 if rule == "orL" else 1):
            return arity(2 if rule == "orL" else 1)
        for path, f in _leaf_occurrences(ant, want):
            if rule == "orL":
                outs = [(normalize(_put(ant, path, leaf(x))), suc) for x in f.args]
                if prem == outs:
                    return None
                continue
            new = {"mandL": lambda: Bunch(",", None, (leaf(f.args[0]), leaf(f.args[1]))),
                   "andL": lambda: Bunch(";", None, (leaf(f.args[0]), leaf(f.args[1]))),
                   "mtopL": lambda: MUNIT, "topL": lambda: AUNIT}[rule]()
            if prem[0] == (normalize(_put(ant, path, new)), suc):
                return None
        return "no matching occurrence"
    if rule in ("wandL", "impL"):
        if arity(2):
            return arity(2)
        want, kind = ("wand", ",") if rule == "wandL" else ("imp", ";")
        (l_ant, l_suc), (r_ant, r_suc) = prem
        for path, f in _leaf_occurrences(ant, want):
            if l_suc != f.args[0] or r_suc != suc:
                continue
            parent = _at(ant, path[:-1]) if path else None
            if parent is not None and parent.kind == kind:
                sibs = [c for i, c in enumerate(parent.children) if i != path[-1]]
            else:
                parent, sibs = None, []
            for gone, stay in _subsets(sibs):
                if l_ant != _bundle(kind, gone):
                    continue
                if rule == "wandL":
                    if parent is None:
                        right = normalize(_put(ant, path, leaf(f.args[1])))
                    else:
                        right = normalize(_put(ant, path[:-1], Bunch(",", None, tuple(stay) + (leaf(f.args[1]),))))
                else:
                    right = normalize(_put(ant, path, leaf(f.args[1])))
                if r_ant == right:
                    return None
        return "no matching instance"
    if rule == "e":
        return arity(1) or (None if prem[0] == (ant, suc) else "premiss not equivalent")
    if rule == "w":
        if arity(1):
            return arity(1)
        p_ant, p_suc = prem[0]
        if p_suc != suc:
            return "succedent changed"
        for _region, rebuild in _regions(ant):
            if rebuild(AUNIT) == p_ant:
                return None
        return "premiss is not a weakening of the conclusion"
    if rule == "c":
        if arity(1):
            return arity(1)
        p_ant, p_suc = prem[0]
        if p_suc != suc:
            return "succedent changed"
        for region, rebuild in _regions(ant):
            if rebuild(Bunch(";", None, (region, region))) == p_ant:
                return None
        return "premiss is not a contraction of the conclusion"
    return f"unknown rule {rule!r}"


def check_lbi_proof(t: ProofTree) -> CheckResult:
    return check_tree(t, _check_lbi_node)


# ---------------------------------------------------------------------------
# direct LBI search (adequacy reference)

def _plain_top(ant: Bunch) -> list:
    if ant.kind == ",":
        return list(ant.children)
    return [ant]


def _lbi_steps(ant: Bunch, suc: Formula) -> Iterator[tuple]:
    """LBI rule instances mirroring the LBI_B repertoire (no contraction)."""
    S = lambda a, f: Sequent(normalize(a), leaf(f))
    if ant == leaf(suc):
        yield "taut", ()
    if ant == leaf(Op("bot")):
        yield "botL", ()
    if ant == MUNIT and suc == Op("mtop"):
        yield "mtopR", ()
    if ant == AUNIT and suc == Op("top"):
        yield "topR", ()
    if isinstance(suc, Op):
        a = suc.args
        if suc.name == "and":
            yield "andR", (S(ant, a[0]), S(ant, a[1]))
        if suc.name == "wand":
            yield "wandR", (S(Bunch(",", None, (ant, leaf(a[0]))), a[1]),)
        if suc.name == "imp":
            yield "impR", (S(Bunch(";", None, (ant, leaf(a[0]))), a[1]),)
        if suc.name == "mand":
            elems = [] if ant == MUNIT else _plain_top(ant)
            seen = set()
            for left, right in _subsets(elems):
                key = (_bundle(",", left), _bundle(",", right))
                if key in seen:
                    continue
                seen.add(key)
                yield "mandR", (S(key[0], a[0]), S(key[1], a[1]))
        if suc.name == "or":
            yield "orR1", (S(ant, a[0]),)
            yield "orR2", (S(ant, a[1]),)
    for path, node in _occurrences(ant):
        if node.kind != "leaf" or not isinstance(node.formula, Op):
            continue
        f = node.formula
        n = f.name
        if n == "mand":
            yield "mandL", (S(_put(ant, path, Bunch(",", None, tuple(leaf(x) for x in f.args))), suc),)
        elif n == "and":
            yield "andL", (S(_put(ant, path, Bunch(";", None, tuple(leaf(x) for x in f.args))), suc),)
        elif n == "mtop":
            yield "mtopL", (S(_put(ant, path, MUNIT), suc),)
        elif n == "top":
            yield "topL", (S(_put(ant, path, AUNIT), suc),)
        elif n == "or":
            yield "orL", tuple(S(_put(ant, path, leaf(x)), suc) for x in f.args)
        elif n == "wand":
            parent = _at(ant, path[:-1]) if path else None
            if parent is not None and parent.kind == ",":
                sibs = [c for i, c in enumerate(parent.children) if i != path[-1]]
                seen = set()
                for gone, stay in _subsets(sibs):
                    right = _put(ant, path[:-1], Bunch(",", None, tuple(stay) + (leaf(f.args[1]),)))
                    key = (_bundle(",", gone), normalize(right))
                    if key not in seen:
                        seen.add(key)
                        yield "wandL", (S(key[0], f.args[0]), S(key[1], suc))
            else:
                yield "wandL", (S(MUNIT, f.args[0]), S(_put(ant, path, leaf(f.args[1])), suc))
        elif n == "imp":
            parent = _at(ant, path[:-1]) if path else None
            if parent is not None and parent.kind == ";":
                sibs = [c for i, c in enumerate(parent.children) if i != path[-1]]
                left = Bunch(";", None, tuple(sibs))
            else:
                left = AUNIT
            yield "impL", (S(left, f.args[0]), S(_put(ant, path, leaf(f.args[1])), suc))
    for path, node in _occurrences(ant):
        if path and _at(ant, path[:-1]).kind == ";":
            yield "w", (S(_put(ant, path, AUNIT), suc),)
    if suc == Op("top"):
        elems = [((i,), c) for i, c in enumerate(ant.children)] if ant.kind == "," else [((), ant)]
        for path, node in elems:
            if node != AUNIT:
                yield "w", (S(_put(ant, path, AUNIT), suc),)


def search_lbi(goal: Sequent, depth: int) -> Iterator[ProofTree]:
    """All LBI proofs of ``goal`` of height ≤ ``depth`` (sequents normalized)."""
    root = Sequent(normalize(goal.antecedent), goal.succedent)

    def go(s: Sequent, d: int) -> Iterator[ProofTree]:
        if d <= 0:
            return
        for rule, prems in _lbi_steps(s.antecedent, s.succedent.formula):
            if any(p == s for p in prems):
                continue
            for kids in _all(prems, d - 1):
                yield ProofTree(s, rule, kids)

    def _all(prems, d):
        if not prems:
            yield ()
            return
        for first in go(prems[0], d):
            for rest in _all(prems[1:], d):
                yield (first,) + rest

    yield from go(root, depth)


def lift_lbi_proof(d: ProofTree) -> tuple | None:
    """Mirror an LBI proof in LBI_B; returns (reduction, interpretation).

    Each LBI step is matched by an LBI_B instance of the same rule, and the
    fresh variables it introduces are assigned so that the valuation of every
    premiss is the corresponding LBI premiss.
    """
    fresh = _Fresh()

    def go(node: ProofTree, s: ESeq, interp: dict) -> Iterator[tuple]:
        for st in _instances(s, fresh):
            if st.rule != node.rule or len(st.premisses) != len(node.children):
                continue
            new_vars = set()
            for p in st.premisses:
                for _, x, _ in _nodes(p.antecedent):
                    new_vars |= {v for v, _ in x.label}
            for c in st.constraints:
                new_vars |= ba.constraint_vars(c)
            new_vars = sorted(new_vars - set(interp), key=ba.natural_key)
            for bits in itertools.product((0, 1), repeat=len(new_vars)):
                i2 = dict(interp)
                i2.update(zip(new_vars, bits))
                if not all(ba.eval_constraint(c, i2) for c in st.constraints):
                    continue
                if any(valuate_sequent(p, i2) != ch.sequent for p, ch in zip(st.premisses, node.children)):
                    continue
                for kids, i3 in go_all(node.children, st.premisses, i2):
                    yield ProofTree(s, st.rule, kids, st.constraints), i3

    def go_all(nodes, seqs, interp):
        if not nodes:
            yield (), interp
            return
        for first, i1 in go(nodes[0], seqs[0], interp):
            for rest, i2 in go_all(nodes[1:], seqs[1:], i1):
                yield (first,) + rest, i2

    root = lift_sequent(d.sequent)
    for tree, interp in go(d, root, {}):
        return tree, interp
    return None
