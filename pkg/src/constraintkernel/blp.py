"""Basic logic programming over hereditary Harrop formulas.

Two engines share one syntax: ``naive_lb_search`` guesses substitutions over
the program's constants and checks each by backward search in LB, while
``run_blp`` reduces once in LB⊕U with every term labelled, collects the
unification constraints, solves them and valuates the reduction into LB
proofs.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterator

from .proofs import CheckResult, ProofTree

__all__ = [
    "Var", "Fn", "PAtom", "GAnd", "GOr", "GImp", "DImp", "DAnd", "Program", "Substitution",
    "Eq", "Conj", "Disj", "FALSUM", "BLPSyntaxError", "parse_program", "parse_goal",
    "parse_term", "reduce_lbu", "solve_unification", "run_blp", "naive_lb_search",
    "check_lb_proof", "candidate_space", "show_goal", "show_clause", "show_term", "LBSeq",
    "rule_trace", "unify",
]


# ---------------------------------------------------------------------------
# terms and formulas

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class PAtom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class GAnd:
    left: object
    right: object


@dataclass(frozen=True)
class GOr:
    left: object
    right: object


@dataclass(frozen=True)
class GImp:
    """D → G inside a goal."""
    clause: object
    goal: object


@dataclass(frozen=True)
class DImp:
    """G → A as a definite clause."""
    body: object
    head: PAtom


@dataclass(frozen=True)
class DAnd:
    left: object
    right: object


def show_term(t) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.name
    return f"{t.name}({', '.join(map(show_term, t.args))})"


def _show_atom(a: PAtom) -> str:
    return a.pred if not a.args else f"{a.pred}({', '.join(map(show_term, a.args))})"


def show_goal(g) -> str:
    if isinstance(g, PAtom):
        return _show_atom(g)
    if isinstance(g, GAnd):
        return f"({show_goal(g.left)}, {show_goal(g.right)})"
    if isinstance(g, GOr):
        return f"({show_goal(g.left)} ; {show_goal(g.right)})"
    if isinstance(g, GImp):
        return f"(({show_clause(g.clause)}) => {show_goal(g.goal)})"
    raise TypeError(g)


def show_clause(d) -> str:
    if isinstance(d, PAtom):
        return _show_atom(d)
    if isinstance(d, DImp):
        return f"{_show_atom(d.head)} :- {show_goal(d.body)}"
    if isinstance(d, DAnd):
        return f"{show_clause(d.left)} & {show_clause(d.right)}"
    raise TypeError(d)


def _check_goal(g):
    if isinstance(g, PAtom):
        return
    if isinstance(g, (GAnd, GOr)):
        _check_goal(g.left)
        _check_goal(g.right)
    elif isinstance(g, GImp):
        _check_clause(g.clause)
        _check_goal(g.goal)
    else:
        raise BLPSyntaxError(f"not a goal formula: {g!r}")


def _check_clause(d):
    if isinstance(d, PAtom):
        return
    if isinstance(d, DImp):
        if not isinstance(d.head, PAtom):
            raise BLPSyntaxError("clause head must be an atom")
        _check_goal(d.body)
    elif isinstance(d, DAnd):
        _check_clause(d.left)
        _check_clause(d.right)
    else:
        raise BLPSyntaxError(f"not a definite clause: {d!r}")


@dataclass(frozen=True)
class Program:
    clauses: tuple

    def __post_init__(self):
        for c in self.clauses:
            _check_clause(c)

    def atoms(self) -> list:
        return [c for c in self.clauses if isinstance(c, PAtom)]

    def constants(self) -> list:
        out: list = []
        for c in self.clauses:
            for t in _clause_terms(c):
                for k in _constants(t):
                    if k not in out:
                        out.append(k)
        return out


# ---------------------------------------------------------------------------
# parsing

class BLPSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(:-|=>|[(),;.&])|([A-Za-z_][A-Za-z0-9_]*)|(%[^\n]*))")


def _tokens(text: str) -> list:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise BLPSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.group(3):
            continue
        out.append(m.group(1) or m.group(2))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expect=None):
        t = self.peek()
        if t is None or (expect is not None and t != expect):
            raise BLPSyntaxError(f"expected {expect or 'a token'}, got {t!r}")
        self.i += 1
        return t

    def term(self):
        name = self.take()
        if not re.fullmatch(r"[A-Za-z_]\w*", name):
            raise BLPSyntaxError(f"expected a term, got {name!r}")
        if name[0].isupper() or name[0] == "_":
            return Var(name)
        if self.peek() == "(":
            return Fn(name, self.args())
        return Fn(name)

    def args(self) -> tuple:
        self.take("(")
        out = [self.term()]
        while self.peek() == ",":
            self.take(",")
            out.append(self.term())
        self.take(")")
        return tuple(out)

    def atom(self) -> PAtom:
        name = self.take()
        if not re.fullmatch(r"[a-z]\w*", name):
            raise BLPSyntaxError(f"expected a predicate, got {name!r}")
        return PAtom(name, self.args() if self.peek() == "(" else ())

    def goal(self):
        g = self.conj()
        while self.peek() == ";":
            self.take(";")
            g = GOr(g, self.conj())
        return g

    def conj(self):
        g = self.imp()
        while self.peek() == ",":
            self.take(",")
            g = GAnd(g, self.imp())
        return g

    def imp(self):
        if self.peek() == "(":
            save = self.i
            self.take("(")
            # a parenthesised clause in front of '=>' or a grouped goal
            try:
                d = self.clause_body()
                self.take(")")
                if self.peek() == "=>":
                    self.take("=>")
                    return GImp(d, self.imp())
            except BLPSyntaxError:
                pass
            self.i = save
            self.take("(")
            g = self.goal()
            self.take(")")
            return g
        a = self.atom()
        if self.peek() == "=>":
            self.take("=>")
            return GImp(a, self.imp())
        return a

    def clause_body(self):
        d = self.single_clause()
        while self.peek() == "&":
            self.take("&")
            d = DAnd(d, self.single_clause())
        return d

    def single_clause(self):
        head = self.atom()
        if self.peek() == ";":
            raise BLPSyntaxError("disjunction is not allowed in a clause head")
        if self.peek() == ":-":
            self.take(":-")
            return DImp(self.goal(), head)
        return head

    def clause(self):
        d = self.clause_body()
        if self.peek() in (";", ","):
            raise BLPSyntaxError(f"clause head must be a single atom (found {self.peek()!r})")
        self.take(".")
        return d


def parse_program(text: str) -> Program:
    """Prolog-like clauses ``h(X) :- b1(X), b2(X).``; variables are capitalised."""
    p = _Parser(text)
    out = []
    while p.peek() is not None:
        out.append(p.clause())
    return Program(tuple(out))


def parse_goal(text: str):
    p = _Parser(text.strip().rstrip("."))
    g = p.goal()
    if p.peek() is not None:
        raise BLPSyntaxError(f"trailing input at {p.peek()!r}")
    _check_goal(g)
    return g


def parse_term(text: str):
    p = _Parser(text)
    t = p.term()
    if p.peek() is not None:
        raise BLPSyntaxError(f"trailing input at {p.peek()!r}")
    return t


# ---------------------------------------------------------------------------
# substitutions and unification

def _walk(t, s: dict):
    while isinstance(t, Var) and t in s:
        t = s[t]
    return t


def resolve(t, s: dict):
    t = _walk(t, s)
    if isinstance(t, Fn) and t.args:
        return Fn(t.name, tuple(resolve(a, s) for a in t.args))
    return t


def _occurs(v: Var, t, s: dict) -> bool:
    t = _walk(t, s)
    if t == v:
        return True
    return isinstance(t, Fn) and any(_occurs(v, a, s) for a in t.args)


def unify(a, b, s: dict) -> dict | None:
    """Syntactic unification with occurs check; returns an extended binding map."""
    a, b = _walk(a, s), _walk(b, s)
    if a == b:
        return s
    if isinstance(a, Var):
        return None if _occurs(a, b, s) else {**s, a: b}
    if isinstance(b, Var):
        return None if _occurs(b, a, s) else {**s, b: a}
    if a.name != b.name or len(a.args) != len(b.args):
        return None
    for x, y in zip(a.args, b.args):
        s = unify(x, y, s)
        if s is None:
            return None
    return s


@dataclass(frozen=True)
class Substitution:
    mapping: tuple          # sorted ((Var, term), ...)

    @staticmethod
    def of(d: dict) -> "Substitution":
        return Substitution(tuple(sorted(d.items(), key=lambda kv: kv[0].name)))

    def as_dict(self) -> dict:
        return dict(self.mapping)

    def __call__(self, t):
        return subst_term(t, self.as_dict())

    def compose(self, other: "Substitution") -> "Substitution":
        """self then other."""
        d = {v: other(t) for v, t in self.mapping}
        for v, t in other.mapping:
            d.setdefault(v, t)
        return Substitution.of({v: t for v, t in d.items() if t != v})

    def is_idempotent(self) -> bool:
        dom = {v for v, _ in self.mapping}
        return all(not (_vars(t) & dom) for _, t in self.mapping)

    def __str__(self):
        return ", ".join(f"{v.name}={show_term(t)}" for v, t in self.mapping)


def _vars(t) -> set:
    if isinstance(t, Var):
        return {t}
    return set().union(*(_vars(a) for a in t.args)) if t.args else set()


def _constants(t) -> list:
    if isinstance(t, Var):
        return []
    if not t.args:
        return [t]
    return [k for a in t.args for k in _constants(a)]


def subst_term(t, d: dict):
    if isinstance(t, Var):
        return d.get(t, t)
    if not t.args:
        return t
    return Fn(t.name, tuple(subst_term(a, d) for a in t.args))


def subst_goal(g, d: dict):
    if isinstance(g, PAtom):
        return PAtom(g.pred, tuple(subst_term(a, d) for a in g.args))
    if isinstance(g, (GAnd, GOr)):
        return type(g)(subst_goal(g.left, d), subst_goal(g.right, d))
    if isinstance(g, GImp):
        return GImp(subst_clause(g.clause, d), subst_goal(g.goal, d))
    raise TypeError(g)


def subst_clause(c, d: dict):
    if isinstance(c, PAtom):
        return subst_goal(c, d)
    if isinstance(c, DImp):
        return DImp(subst_goal(c.body, d), subst_goal(c.head, d))
    return DAnd(subst_clause(c.left, d), subst_clause(c.right, d))


def _goal_terms(g) -> Iterator:
    if isinstance(g, PAtom):
        yield from g.args
    elif isinstance(g, (GAnd, GOr)):
        yield from _goal_terms(g.left)
        yield from _goal_terms(g.right)
    elif isinstance(g, GImp):
        yield from _clause_terms(g.clause)
        yield from _goal_terms(g.goal)


def _clause_terms(c) -> Iterator:
    if isinstance(c, PAtom):
        yield from c.args
    elif isinstance(c, DImp):
        yield from _goal_terms(c.body)
        yield from c.head.args
    else:
        yield from _clause_terms(c.left)
        yield from _clause_terms(c.right)


def goal_vars(g) -> list:
    out: list = []
    for t in _goal_terms(g):
        for v in sorted(_vars(t), key=lambda v: v.name):
            if v not in out:
                out.append(v)
    return out


def clause_vars(c) -> list:
    out: list = []
    for t in _clause_terms(c):
        for v in sorted(_vars(t), key=lambda v: v.name):
            if v not in out:
                out.append(v)
    return out


def _ordered_vars(ts) -> list:
    out: list = []

    def walk(t):
        if isinstance(t, Var):
            if t not in out:
                out.append(t)
        else:
            for a in t.args:
                walk(a)
    for t in ts:
        walk(t)
    return out


# ---------------------------------------------------------------------------
# unification constraints

@dataclass(frozen=True)
class Eq:
    left: object
    right: object

    def __str__(self):
        return f"{show_term(self.left)} = {show_term(self.right)}"


@dataclass(frozen=True)
class Conj:
    parts: tuple

    def __str__(self):
        return " & ".join(map(str, self.parts)) if self.parts else "true"


@dataclass(frozen=True)
class Disj:
    parts: tuple

    def __str__(self):
        if not self.parts:
            return "false"
        # a membership constraint n ∈ {k1, ..., kn} prints compactly
        if all(isinstance(p, Eq) for p in self.parts) and len({p.left for p in self.parts}) == 1:
            return f"{show_term(self.parts[0].left)} in {{{', '.join(show_term(p.right) for p in self.parts)}}}"
        return " | ".join(f"({p})" for p in self.parts)


FALSUM = Disj(())


def _atom_equiv(a: PAtom, b: PAtom):
    """A ≡ B: positional equations of two atoms with the same relation symbol."""
    parts = tuple(Eq(x, y) for x, y in zip(a.args, b.args))
    return parts[0] if len(parts) == 1 else Conj(parts)


def _solve(cs: list, s: dict) -> Iterator[dict]:
    if not cs:
        yield s
        return
    c, rest = cs[0], cs[1:]
    if isinstance(c, Eq):
        s2 = unify(c.left, c.right, s)
        if s2 is not None:
            yield from _solve(rest, s2)
    elif isinstance(c, Conj):
        yield from _solve(list(c.parts) + rest, s)
    elif isinstance(c, Disj):
        for p in c.parts:
            yield from _solve([p] + rest, s)
    else:
        raise TypeError(c)


def solve_unification(cs, variables=None) -> list:
    """All solutions of a conjunction of constraints, in disjunct order.

    Each solution maps every variable (those of ``cs`` unless given) to its
    fully resolved value; duplicates from different disjuncts are merged.
    """
    cs = list(cs)
    if variables is None:
        variables = _ordered_vars(_constraint_terms(cs))
    out, seen = [], set()
    for s in _solve(cs, {}):
        sub = Substitution.of({v: resolve(v, s) for v in variables})
        if sub not in seen:
            seen.add(sub)
            out.append(sub)
    return out


def _constraint_terms(cs) -> Iterator:
    for c in cs:
        if isinstance(c, Eq):
            yield c.left
            yield c.right
        else:
            yield from _constraint_terms(c.parts)


# ---------------------------------------------------------------------------
# sequents and LB⊕U reduction

@dataclass(frozen=True)
class LBSeq:
    program: tuple          # clauses beyond the base program (in order of addition)
    goal: object

    def __str__(self):
        extra = "".join(f", {show_clause(c)}" for c in self.program)
        return f"P{extra} |- {show_goal(self.goal)}"


def _flatten(c) -> list:
    return _flatten(c.left) + _flatten(c.right) if isinstance(c, DAnd) else [c]


class _Fresh:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.n = 0

    def __call__(self) -> Var:
        self.n += 1
        return Var(f"_{self.prefix}{self.n}")


@dataclass
class _Ctx:
    base: tuple
    fresh: _Fresh = field(default_factory=lambda: _Fresh("n"))


def _reduce(ctx: _Ctx, extra: tuple, goal, depth: int) -> Iterator:
    seq = LBSeq(extra, goal)
    if isinstance(goal, GAnd):
        for left in _reduce(ctx, extra, goal.left, depth):
            for right in _reduce(ctx, extra, goal.right, depth):
                yield ProofTree(seq, "andR", (left, right))
        return
    if isinstance(goal, GOr):
        for i, side in enumerate((goal.left, goal.right)):
            for t in _reduce(ctx, extra, side, depth):
                yield ProofTree(seq, "orR", (t,), info={"branch": i})
        return
    if isinstance(goal, GImp):
        added = extra + tuple(_flatten(goal.clause))
        for t in _reduce(ctx, added, goal.goal, depth):
            if isinstance(goal.clause, DAnd):
                t = ProofTree(LBSeq(extra + (goal.clause,), goal.goal), "andL", (t,))
            yield ProofTree(seq, "impR", (t,))
        return
    # atomic goal: ax over the program's atoms, or backchaining on a clause
    program = ctx.base + extra
    facts = [a for a in program if isinstance(a, PAtom) and a.pred == goal.pred
             and len(a.args) == len(goal.args)]
    if facts:
        disj = Disj(tuple(_atom_equiv(_label_fact(ctx, a), goal) for a in facts))
        yield ProofTree(seq, "ax", (), constraints=(disj,))
    if depth <= 0:
        return
    for d in program:
        if not isinstance(d, DImp) or d.head.pred != goal.pred or len(d.head.args) != len(goal.args):
            continue
        theta = {v: ctx.fresh() for v in clause_vars(d)}
        inst = subst_clause(d, theta)
        ext = extra + (inst,)
        for body in _reduce(ctx, ext, inst.body, depth - 1):
            imp = ProofTree(LBSeq(ext, goal), "impL", (body,),
                            constraints=(_atom_equiv(inst.head, goal),))
            yield ProofTree(seq, "allL", (imp,), info={"clause": show_clause(d),
                                                        "theta": {k.name: show_term(v) for k, v in theta.items()}})


def _label_fact(ctx: _Ctx, a: PAtom) -> PAtom:
    vs = {v: ctx.fresh() for v in _ordered_vars(a.args)}
    return subst_goal(a, vs) if vs else a


def reduce_lbu(program: Program, goal, depth: int = 8) -> Iterator[ProofTree]:
    """Stream of LB⊕U reductions of P ▷ G; goal variables are labelled at ∃R."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    ctx = _Ctx(program.clauses)
    gv = goal_vars(goal)
    labels = {v: Var(f"_m{i + 1}") for i, v in enumerate(gv)}
    labelled = subst_goal(goal, labels)
    for t in _reduce(ctx, (), labelled, depth):
        if gv:
            t = ProofTree(LBSeq((), goal), "exR", (t,),
                          info={"labels": {v.name: l.name for v, l in labels.items()}})
        yield t


def _collect(t: ProofTree) -> list:
    out = list(t.constraints)
    for c in t.children:
        out.extend(_collect(c))
    return out


def _valuate(t: ProofTree, d: dict) -> ProofTree:
    """σ: apply the solution, drop constraints."""
    seq = LBSeq(tuple(subst_clause(c, d) for c in t.sequent.program), subst_goal(t.sequent.goal, d))
    info = dict(t.info)
    if t.rule == "allL" and "theta" in info:
        info["theta"] = {k: show_term(resolve(Var(v), d)) for k, v in info["theta"].items()}
    return ProofTree(seq, t.rule, tuple(_valuate(c, d) for c in t.children), (), info)


def run_blp(program: Program, goal, depth: int = 8) -> list:
    """Answers as (Substitution on the goal's variables, LB proof tree)."""
    gv = goal_vars(goal)
    out, seen = [], set()
    for red in reduce_lbu(program, goal, depth):
        labels = {Var(k): Var(v) for k, v in red.info.get("labels", {}).items()}
        cs = _collect(red)
        for s in _solve(cs, {}):
            full = {v: resolve(v, s) for v in _ordered_vars(_constraint_terms(cs))}
            for lbl in labels.values():
                full.setdefault(lbl, resolve(lbl, s))
            # unbound variables stay as they are; a self-binding would never resolve
            full = {v: t for v, t in full.items() if t != v}
            answer = Substitution.of({v: resolve(labels[v], s) for v in gv})
            if answer in seen:
                continue
            seen.add(answer)
            tree = _valuate(red, {**full, **{v: full.get(labels[v], labels[v]) for v in gv}})
            if gv:
                # the ∃R premiss is the goal under θ, not the labelled goal
                theta = answer.as_dict()
                kid = tree.children[0]
                tree = ProofTree(LBSeq((), goal), "exR", (kid,), (), {"theta": str(answer)})
                assert kid.sequent.goal == subst_goal(goal, theta)
            out.append((answer, tree))
    return out


def rule_trace(t: ProofTree) -> list:
    """Rule names in pre-order."""
    return [t.rule] + [r for c in t.children for r in rule_trace(c)]


# ---------------------------------------------------------------------------
# LB checking

def _match(p, t, s: dict) -> dict | None:
    """One-way matching of pattern p onto t."""
    if isinstance(p, Var):
        if p in s:
            return s if s[p] == t else None
        return {**s, p: t}
    if not isinstance(t, Fn) or t.name != p.name or len(t.args) != len(p.args):
        return None
    for a, b in zip(p.args, t.args):
        s = _match(a, b, s)
        if s is None:
            return None
    return s


def _match_goal(p, t, s: dict) -> dict | None:
    if isinstance(p, PAtom):
        if not isinstance(t, PAtom) or t.pred != p.pred or len(t.args) != len(p.args):
            return None
        for a, b in zip(p.args, t.args):
            s = _match(a, b, s)
            if s is None:
                return None
        return s
    if type(p) is not type(t):
        return None
    if isinstance(p, (GAnd, GOr)):
        s = _match_goal(p.left, t.left, s)
        return None if s is None else _match_goal(p.right, t.right, s)
    if isinstance(p, GImp):
        s = _match_clause(p.clause, t.clause, s)
        return None if s is None else _match_goal(p.goal, t.goal, s)
    return None


def _match_clause(p, t, s: dict) -> dict | None:
    if isinstance(p, PAtom):
        return _match_goal(p, t, s)
    if type(p) is not type(t):
        return None
    if isinstance(p, DImp):
        s = _match_goal(p.body, t.body, s)
        return None if s is None else _match_goal(p.head, t.head, s)
    s = _match_clause(p.left, t.left, s)
    return None if s is None else _match_clause(p.right, t.right, s)


def check_lb_proof(program: Program, tree: ProofTree) -> CheckResult:
    """Each node must be an instance of an LB rule over P plus its own extras."""
    base = program.clauses

    def walk(n: ProofTree, path) -> CheckResult:
        s, kids = n.sequent, [c.sequent for c in n.children]
        P = base + s.program
        g = s.goal
        bad = lambda msg: CheckResult(False, path, f"{n.rule}: {msg}")  # noqa: E731
        if n.constraints:
            return bad("constraints left in an LB tree")
        r = n.rule
        if r == "ax":
            # a non-ground fact is used through its instances
            if kids or not isinstance(g, PAtom) or \
                    not any(isinstance(a, PAtom) and _match_goal(a, g, {}) is not None for a in P):
                return bad("goal atom is not in the program")
        elif r == "andR":
            if not isinstance(g, GAnd) or len(kids) != 2 or (kids[0].goal, kids[1].goal) != (g.left, g.right) \
                    or any(k.program != s.program for k in kids):
                return bad("malformed conjunction step")
        elif r == "orR":
            if not isinstance(g, GOr) or len(kids) != 1 or kids[0].goal not in (g.left, g.right) \
                    or kids[0].program != s.program:
                return bad("malformed disjunction step")
        elif r == "impR":
            if not isinstance(g, GImp) or len(kids) != 1 or kids[0].goal != g.goal \
                    or kids[0].program != s.program + (g.clause,):
                return bad("malformed implication step")
        elif r == "andL":
            if len(kids) != 1 or kids[0].goal != g:
                return bad("goal changed")
            pre, new = s.program, kids[0].program
            ok = any(isinstance(c, DAnd) and new == pre[:i] + pre[i + 1:] + (c.left, c.right)
                     for i, c in enumerate(pre))
            if not ok:
                return bad("no conjunctive clause was split")
        elif r == "allL":
            if len(kids) != 1 or kids[0].goal != g or kids[0].program[:-1] != s.program \
                    or len(kids[0].program) != len(s.program) + 1:
                return bad("must add exactly one clause instance")
            inst = kids[0].program[-1]
            if not any(_match_clause(d, inst, {}) is not None for d in P):
                return bad("added clause is not an instance of a program clause")
        elif r == "impL":
            if len(kids) != 1 or kids[0].program != s.program or not isinstance(g, PAtom):
                return bad("malformed backchaining step")
            if not any(isinstance(d, DImp) and d.head == g and d.body == kids[0].goal for d in P):
                return bad("no clause G -> A with A the goal")
        elif r == "exR":
            if len(kids) != 1 or kids[0].program != s.program or _match_goal(g, kids[0].goal, {}) is None:
                return bad("premiss is not an instance of the goal")
        else:
            return bad("unknown rule")
        for i, c in enumerate(n.children):
            res = walk(c, path + (i,))
            if not res:
                return res
        return CheckResult(True)

    return walk(tree, ())


# ---------------------------------------------------------------------------
# naive search: guess the substitution, then reduce in LB

def candidate_space(program: Program, goal) -> int:
    return len(program.constants()) ** len(goal_vars(goal))


def _lb_prove(P: tuple, extra: tuple, goal, depth: int, consts: list):
    seq = LBSeq(extra, goal)
    if isinstance(goal, GAnd):
        a = _lb_prove(P, extra, goal.left, depth, consts)
        b = a and _lb_prove(P, extra, goal.right, depth, consts)
        return b and ProofTree(seq, "andR", (a, b))
    if isinstance(goal, GOr):
        for side in (goal.left, goal.right):
            t = _lb_prove(P, extra, side, depth, consts)
            if t:
                return ProofTree(seq, "orR", (t,))
        return None
    if isinstance(goal, GImp):
        added = extra + tuple(_flatten(goal.clause))
        t = _lb_prove(P, added, goal.goal, depth, consts)
        if not t:
            return None
        if isinstance(goal.clause, DAnd):
            t = ProofTree(LBSeq(extra + (goal.clause,), goal.goal), "andL", (t,))
        return ProofTree(seq, "impR", (t,))
    program = P + extra
    if any(isinstance(a, PAtom) and _match_goal(a, goal, {}) is not None for a in program):
        return ProofTree(seq, "ax")
    if depth <= 0:
        return None
    for d in program:
        if not isinstance(d, DImp) or d.head.pred != goal.pred:
            continue
        s = _match_goal(d.head, goal, {})
        if s is None:
            continue
        rest = [v for v in clause_vars(d) if v not in s]
        # blind guessing: every remaining variable ranges over the constants
        for combo in itertools.product(consts, repeat=len(rest)):
            theta = {**s, **dict(zip(rest, combo))}
            inst = subst_clause(d, theta)
            ext = extra + (inst,)
            body = _lb_prove(P, ext, inst.body, depth - 1, consts)
            if body:
                imp = ProofTree(LBSeq(ext, goal), "impL", (body,))
                return ProofTree(seq, "allL", (imp,))
    return None


def naive_lb_search(program: Program, goal, depth: int = 8) -> list:
    """Enumerate every substitution of the goal's variables by program constants
    (the candidate space) and keep those with an LB proof."""
    consts = program.constants()
    gv = goal_vars(goal)
    out = []
    for combo in itertools.product(consts, repeat=len(gv)):
        theta = dict(zip(gv, combo))
        g = subst_goal(goal, theta)
        t = _lb_prove(program.clauses, (), g, depth, consts)
        if t:
            if gv:
                t = ProofTree(LBSeq((), goal), "exR", (t,), info={"theta": str(Substitution.of(theta))})
            out.append((Substitution.of(theta), t))
    return out
