"""Two-element Boolean algebra: expressions, quantifier-free constraints, solving."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "Var", "Lit", "Sum", "Prod", "Compl", "BoolExpr", "ZERO", "ONE",
    "Eq", "Conj", "Disj", "Neg", "Constraint", "TRUE", "FALSE",
    "var", "add", "mul", "compl", "prod_all", "eq", "conj", "disj",
    "eval_expr", "eval_constraint", "solve", "all_solutions",
    "expr_vars", "constraint_vars", "natural_key", "FreshSupply",
    "parse_constraint", "parse_expr", "show_expr", "show_constraint",
    "UnboundVariable",
]


class UnboundVariable(KeyError):
    pass


# ---------------------------------------------------------------------------
# expressions

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Sum:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Prod:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Compl:
    arg: "BoolExpr"


BoolExpr = Union[Var, Lit, Sum, Prod, Compl]
ZERO, ONE = Lit(0), Lit(1)


def var(name: str) -> Var:
    return Var(name)


def add(a: BoolExpr, b: BoolExpr) -> BoolExpr:
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    if ONE in (a, b):
        return ONE
    return Sum(a, b)


def mul(a: BoolExpr, b: BoolExpr) -> BoolExpr:
    if a == ONE:
        return b
    if b == ONE:
        return a
    if ZERO in (a, b):
        return ZERO
    return Prod(a, b)


def prod_all(es: Iterable[BoolExpr]) -> BoolExpr:
    out: BoolExpr = ONE
    for e in es:
        out = mul(out, e)
    return out


def compl(a: BoolExpr) -> BoolExpr:
    if isinstance(a, Lit):
        return Lit(1 - a.value)
    if isinstance(a, Compl):
        return a.arg
    return Compl(a)


def expr_vars(e: BoolExpr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Lit):
        return set()
    if isinstance(e, Compl):
        return expr_vars(e.arg)
    return expr_vars(e.left) | expr_vars(e.right)


def eval_expr(e: BoolExpr, interp: Mapping[str, int]) -> int:
    if isinstance(e, Var):
        try:
            return interp[e.name]
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Compl):
        return 1 - eval_expr(e.arg, interp)
    if isinstance(e, Sum):
        return eval_expr(e.left, interp) | eval_expr(e.right, interp)
    return eval_expr(e.left, interp) & eval_expr(e.right, interp)


def _peval(e: BoolExpr, interp: Mapping[str, int]):
    """Three-valued evaluation: 0, 1 or None when undetermined."""
    if isinstance(e, Var):
        return interp.get(e.name)
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Compl):
        v = _peval(e.arg, interp)
        return None if v is None else 1 - v
    a = _peval(e.left, interp)
    if isinstance(e, Sum):
        if a == 1:
            return 1
        b = _peval(e.right, interp)
        if b == 1:
            return 1
        return 0 if a == 0 and b == 0 else None
    if a == 0:
        return 0
    b = _peval(e.right, interp)
    if b == 0:
        return 0
    return 1 if a == 1 and b == 1 else None


# ---------------------------------------------------------------------------
# constraints

@dataclass(frozen=True)
class Eq:
    left: BoolExpr
    right: BoolExpr


@dataclass(frozen=True)
class Conj:
    args: tuple = ()


@dataclass(frozen=True)
class Disj:
    args: tuple = ()


@dataclass(frozen=True)
class Neg:
    arg: "Constraint"


Constraint = Union[Eq, Conj, Disj, Neg]
TRUE, FALSE = Conj(()), Disj(())


def eq(a: BoolExpr, b: BoolExpr | int) -> Eq:
    if isinstance(b, int):
        b = Lit(b)
    return Eq(a, b)


def conj(*cs: Constraint) -> Constraint:
    return cs[0] if len(cs) == 1 else Conj(tuple(cs))


def disj(*cs: Constraint) -> Constraint:
    return cs[0] if len(cs) == 1 else Disj(tuple(cs))


def constraint_vars(c: Constraint) -> set:
    if isinstance(c, Eq):
        return expr_vars(c.left) | expr_vars(c.right)
    if isinstance(c, Neg):
        return constraint_vars(c.arg)
    out: set = set()
    for a in c.args:
        out |= constraint_vars(a)
    return out


def eval_constraint(c: Constraint, interp: Mapping[str, int]) -> bool:
    if isinstance(c, Eq):
        return eval_expr(c.left, interp) == eval_expr(c.right, interp)
    if isinstance(c, Neg):
        return not eval_constraint(c.arg, interp)
    if isinstance(c, Conj):
        return all(eval_constraint(a, interp) for a in c.args)
    return any(eval_constraint(a, interp) for a in c.args)


def _pcons(c: Constraint, interp: Mapping[str, int]):
    if isinstance(c, Eq):
        a = _peval(c.left, interp)
        if a is None:
            return None
        b = _peval(c.right, interp)
        return None if b is None else a == b
    if isinstance(c, Neg):
        v = _pcons(c.arg, interp)
        return None if v is None else not v
    unknown = False
    want = isinstance(c, Disj)     # value that short-circuits
    for a in c.args:
        v = _pcons(a, interp)
        if v is None:
            unknown = True
        elif v == want:
            return want
    return None if unknown else not want


# ---------------------------------------------------------------------------
# solving

def natural_key(name: str):
    """Sort key treating digit runs numerically, so x2 precedes x10."""
    return [(0, int(t)) if t.isdigit() else (1, t) for t in re.findall(r"\d+|\D+", name)]


def _search(cs: list, order: list, interp: dict, i: int) -> Iterator[dict]:
    status = [_pcons(c, interp) for c in cs]
    if False in status:
        return
    if i == len(order):
        yield dict(interp)
        return
    name = order[i]
    for value in (0, 1):
        interp[name] = value
        yield from _search(cs, order, interp, i + 1)
        del interp[name]


def solve(cs: Iterable[Constraint]) -> dict | None:
    """First model in natural variable order, 0 tried before 1; None if unsat."""
    cs = list(cs)
    names = sorted(set().union(*(constraint_vars(c) for c in cs)) if cs else set(), key=natural_key)
    interp: dict = {}

    def rec(i: int) -> bool:
        status = [_pcons(c, interp) for c in cs]
        if False in status:
            return False
        if all(status):
            # every constraint already holds; zero-fill is the first extension
            for n in names[i:]:
                interp[n] = 0
            return True
        if i == len(names):
            return False
        for value in (0, 1):
            interp[names[i]] = value
            if rec(i + 1):
                return True
        del interp[names[i]]
        return False

    return dict(interp) if rec(0) else None


def all_solutions(cs: Iterable[Constraint], variables: Iterable[str]) -> list:
    """Every model over ``variables`` in lexicographic order (0 before 1)."""
    cs = list(cs)
    order = list(variables)
    missing = set().union(*(constraint_vars(c) for c in cs)) - set(order) if cs else set()
    if missing:
        raise UnboundVariable(sorted(missing, key=natural_key)[0])
    return list(_search(cs, order, {}, 0))


def brute_force(cs: Iterable[Constraint], variables: Iterable[str]) -> list:
    """Reference enumeration over all 2^n assignments (oracle for the solver)."""
    cs = list(cs)
    order = list(variables)
    out = []
    for bits in itertools.product((0, 1), repeat=len(order)):
        interp = dict(zip(order, bits))
        if all(eval_constraint(c, interp) for c in cs):
            out.append(interp)
    return out


class FreshSupply:
    """Produces x1, x2, ... with a private counter."""

    def __init__(self, prefix: str = "x", start: int = 0):
        self.prefix = prefix
        self.count = start

    def __call__(self) -> Var:
        self.count += 1
        return Var(f"{self.prefix}{self.count}")


# ---------------------------------------------------------------------------
# debug text syntax

def show_expr(e: BoolExpr) -> str:
    return _show_e(e, 0)


def _show_e(e: BoolExpr, ctx: int) -> str:
    # ctx: 0 top / sum operand, 1 product operand, 2 complement operand
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Lit):
        return str(e.value)
    if isinstance(e, Compl):
        return "~" + _show_e(e.arg, 2)
    if isinstance(e, Sum):
        s = f"{_show_e(e.left, 0)} + {_show_e(e.right, 0)}"
        return f"({s})" if ctx >= 1 else s
    s = f"{_show_e(e.left, 1)}*{_show_e(e.right, 1)}"
    return f"({s})" if ctx >= 2 else s


def show_constraint(c: Constraint) -> str:
    return _show_c(c, 0)


def _show_c(c: Constraint, ctx: int) -> str:
    # ctx: 0 top, 1 disjunct, 2 conjunct, 3 negated
    if isinstance(c, Eq):
        s = f"{show_expr(c.left)} = {show_expr(c.right)}"
        return f"({s})" if ctx >= 3 else s
    if isinstance(c, Neg):
        return "!" + _show_c(c.arg, 3)
    if isinstance(c, Conj):
        if not c.args:
            return "true"
        s = " & ".join(_show_c(a, 2) for a in c.args)
        return f"({s})" if ctx >= 2 and len(c.args) > 1 else s
    if not c.args:
        return "false"
    s = " || ".join(_show_c(a, 1) for a in c.args)
    return f"({s})" if ctx >= 1 and len(c.args) > 1 else s


_CTOK = re.compile(r"\s*(?:(\|\||[&!=+*~()])|([01])\b|([A-Za-z_][A-Za-z0-9_']*))")


class _CParser:
    def __init__(self, text: str):
        self.toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _CTOK.match(text, pos)
            if not m:
                raise ValueError(f"bad constraint syntax at offset {pos}")
            self.toks.append((m.group(1) or m.group(2) or m.group(3), m.start()))
            pos = m.end()
        self.toks.append(("", len(text)))
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, want: str | None = None):
        tok, pos = self.toks[self.i]
        if want is not None and tok != want:
            raise ValueError(f"expected {want!r} at offset {pos}")
        self.i += 1
        return tok

    def constraint(self) -> Constraint:
        parts = [self.conjunction()]
        while self.peek() == "||":
            self.take()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Disj(tuple(parts))

    def conjunction(self) -> Constraint:
        parts = [self.literal()]
        while self.peek() == "&":
            self.take()
            parts.append(self.literal())
        return parts[0] if len(parts) == 1 else Conj(tuple(parts))

    def literal(self) -> Constraint:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Neg(self.literal())
        if tok in ("true", "false"):
            self.take()
            return TRUE if tok == "true" else FALSE
        if tok == "(":
            save = self.i
            self.take()
            try:
                c = self.constraint()
                self.take(")")
                if self.peek() != "=":
                    return c
            except ValueError:
                pass
            self.i = save
        left = self.expr()
        self.take("=")
        return Eq(left, self.expr())

    def expr(self) -> BoolExpr:
        e = self.term()
        while self.peek() == "+":
            self.take()
            e = Sum(e, self.term())
        return e

    def term(self) -> BoolExpr:
        e = self.factor()
        while self.peek() == "*":
            self.take()
            e = Prod(e, self.factor())
        return e

    def factor(self) -> BoolExpr:
        tok, pos = self.toks[self.i]
        if tok == "~":
            self.take()
            return Compl(self.factor())
        if tok == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if tok in ("0", "1"):
            self.take()
            return Lit(int(tok))
        if tok and (tok[0].isalpha() or tok[0] == "_") and tok not in ("true", "false"):
            self.take()
            return Var(tok)
        raise ValueError(f"unexpected {tok or 'end of input'!r} at offset {pos}")

    def done(self):
        tok, pos = self.toks[self.i]
        if tok:
            raise ValueError(f"unexpected {tok!r} at offset {pos}")


def parse_constraint(text: str) -> Constraint:
    p = _CParser(text)
    c = p.constraint()
    p.done()
    return c


def parse_expr(text: str) -> BoolExpr:
    p = _CParser(text)
    e = p.expr()
    p.done()
    return e
