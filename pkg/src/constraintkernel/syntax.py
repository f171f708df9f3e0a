"""Object-language syntax: formulas, bunches, sequents and their text form.

Bunches are trees whose internal nodes are the two data constructors
``,`` (multiplicative) and ``;`` (additive).  An internal node with no
children is the unit of its constructor, so ``Bunch(",", ())`` is the
multiplicative unit and ``Bunch(";", ())`` the additive one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence, Union

__all__ = [
    "Alphabet", "Atom", "Op", "Formula", "Bunch", "Sequent", "ParseError",
    "BI", "IPL", "MODAL", "FULL",
    "atom", "op", "leaf", "comma", "semi", "MUNIT", "AUNIT",
    "parse_formula", "parse_bunch", "parse_sequent",
    "normalize", "coherent_equiv", "replace_subbunch", "subbunch_at",
    "bunch_paths", "formulas_of",
]


class ParseError(ValueError):
    """Syntax error carrying the character offset where parsing failed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


# ---------------------------------------------------------------------------
# alphabets

@dataclass(frozen=True)
class Alphabet:
    operators: dict
    data_constructors: dict = field(default_factory=lambda: {",": 2, ";": 2})
    atoms: frozenset | None = None  # None: every identifier is an atom

    def __post_init__(self):
        ops, data = set(self.operators), set(self.data_constructors)
        if ops & data:
            raise ValueError(f"operator/constructor clash: {sorted(ops & data)}")
        if self.atoms is not None and self.atoms & (ops | data):
            raise ValueError("atom names clash with operator names")
        if any(a < 0 for a in list(self.operators.values()) + list(self.data_constructors.values())):
            raise ValueError("arities must be non-negative")

    def __hash__(self):
        return hash((tuple(sorted(self.operators.items())), self.atoms))


BI = Alphabet({"and": 2, "or": 2, "imp": 2, "mand": 2, "wand": 2,
               "top": 0, "bot": 0, "mtop": 0})
IPL = Alphabet({"and": 2, "or": 2, "imp": 2, "not": 1, "bot": 0, "top": 0})
MODAL = Alphabet({"and": 2, "or": 2, "imp": 2, "not": 1, "box": 1, "dia": 1,
                  "bot": 0, "top": 0})
FULL = Alphabet({"and": 2, "or": 2, "imp": 2, "not": 1, "mand": 2, "wand": 2,
                 "box": 1, "dia": 1, "top": 0, "bot": 0, "mtop": 0})


# ---------------------------------------------------------------------------
# formulas

@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Op:
    name: str
    args: tuple = ()

    def __str__(self) -> str:
        return show_formula(self)


Formula = Union[Atom, Op]


def atom(name: str) -> Atom:
    return Atom(name)


def op(name: str, *args: Formula) -> Op:
    return Op(name, tuple(args))


_BINARY = {"and": "&", "mand": "*", "or": "|", "imp": "->", "wand": "-*"}
_SYMBOL_TO_OP = {v: k for k, v in _BINARY.items()}
_UNARY = {"not": "~", "box": "box", "dia": "dia"}
_CONSTANTS = {"top", "bot", "mtop"}
# binding strength; higher binds tighter
_PREC = {"imp": 1, "wand": 1, "or": 2, "and": 3, "mand": 3}
_RIGHT_ASSOC = {"imp", "wand"}


def _fprec(f: Formula) -> int:
    if isinstance(f, Op) and f.name in _PREC:
        return _PREC[f.name]
    return 9


def show_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if not f.args:
        return f.name
    if f.name in _UNARY:
        (a,) = f.args
        inner = show_formula(a)
        if _fprec(a) < 9:
            inner = f"({inner})"
        sym = _UNARY[f.name]
        return f"{sym}{inner}" if sym == "~" else f"{sym} {inner}"
    if f.name in _BINARY:
        left, right = f.args
        p = _PREC[f.name]
        ls, rs = show_formula(left), show_formula(right)
        if f.name in _RIGHT_ASSOC:
            if _fprec(left) <= p:
                ls = f"({ls})"
            if _fprec(right) < p:
                rs = f"({rs})"
        else:
            if _fprec(left) < p:
                ls = f"({ls})"
            if _fprec(right) <= p:
                rs = f"({rs})"
        return f"{ls} {_BINARY[f.name]} {rs}"
    return f"{f.name}({', '.join(show_formula(a) for a in f.args)})"


def formula_size(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    return 1 + sum(formula_size(a) for a in f.args)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Op):
        for a in f.args:
            yield from subformulas(a)


def atoms_of(f: Formula) -> set:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def modal_depth(f: Formula) -> int:
    if isinstance(f, Atom) or not f.args:
        return 0
    inner = max(modal_depth(a) for a in f.args)
    return inner + 1 if f.name in ("box", "dia") else inner


# ---------------------------------------------------------------------------
# bunches

@dataclass(frozen=True)
class Bunch:
    kind: str                     # "leaf", "," or ";"
    formula: Formula | None = None
    children: tuple = ()

    def __post_init__(self):
        if self.kind == "leaf":
            if self.formula is None or self.children:
                raise ValueError("leaf bunch needs exactly a formula")
        elif self.kind in (",", ";"):
            if self.formula is not None:
                raise ValueError("constructor node cannot carry a formula")
        else:
            raise ValueError(f"unknown bunch kind {self.kind!r}")

    @property
    def is_unit(self) -> bool:
        return self.kind != "leaf" and not self.children

    @cached_property
    def key(self) -> str:
        return show_bunch(self)

    def __str__(self) -> str:
        return show_bunch(self)


def leaf(f: Formula) -> Bunch:
    return Bunch("leaf", f)


def comma(*children: Bunch) -> Bunch:
    return Bunch(",", None, tuple(children))


def semi(*children: Bunch) -> Bunch:
    return Bunch(";", None, tuple(children))


MUNIT = Bunch(",")
AUNIT = Bunch(";")


def show_bunch(b: Bunch) -> str:
    if b.kind == "leaf":
        return show_formula(b.formula)
    if not b.children:
        return "ex" if b.kind == "," else "e+"
    parts = []
    for c in b.children:
        s = show_bunch(c)
        if c.kind != "leaf" and c.children:
            s = f"({s})"
        parts.append(s)
    return f" {b.kind} ".join(parts)


def normalize(b: Bunch) -> Bunch:
    """Canonical representative of the coherent-equivalence class of ``b``."""
    if b.kind == "leaf":
        return b
    kids = []
    for c in b.children:
        n = normalize(c)
        if n.kind == b.kind:
            kids.extend(n.children)   # flatten; a same-kind unit contributes nothing
        else:
            kids.append(n)
    if len(kids) == 1:
        return kids[0]
    kids.sort(key=lambda x: x.key)
    return Bunch(b.kind, None, tuple(kids))


def coherent_equiv(b1: Bunch, b2: Bunch) -> bool:
    return normalize(b1) == normalize(b2)


def subbunch_at(whole: Bunch, path: Sequence[int]) -> Bunch:
    node = whole
    for depth, i in enumerate(path):
        if node.kind == "leaf" or not 0 <= i < len(node.children):
            raise IndexError(f"invalid path {tuple(path)} (fails at step {depth})")
        node = node.children[i]
    return node


def replace_subbunch(whole: Bunch, path: Sequence[int], replacement: Bunch) -> Bunch:
    """Return Γ(Δ′): ``whole`` with the sub-bunch at ``path`` swapped out."""
    subbunch_at(whole, path)  # validates
    if not path:
        return replacement
    i, rest = path[0], path[1:]
    kids = list(whole.children)
    kids[i] = replace_subbunch(kids[i], rest, replacement)
    return Bunch(whole.kind, None, tuple(kids))


def bunch_paths(b: Bunch, prefix: tuple = ()) -> Iterator[tuple]:
    yield prefix
    for i, c in enumerate(b.children):
        yield from bunch_paths(c, prefix + (i,))


def formulas_of(b: Bunch) -> list:
    if b.kind == "leaf":
        return [b.formula]
    out = []
    for c in b.children:
        out.extend(formulas_of(c))
    return out


# ---------------------------------------------------------------------------
# sequents

@dataclass(frozen=True)
class Sequent:
    antecedent: Bunch
    succedent: Bunch

    def __str__(self) -> str:
        return show_sequent(self)


def show_sequent(s: Sequent) -> str:
    ant = "" if s.antecedent == AUNIT else show_bunch(s.antecedent)
    suc = "" if s.succedent == AUNIT else show_bunch(s.succedent)
    return f"{ant} |- {suc}".strip()


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<turn>\|-)
  | (?P<sym>->|-\*|[&|~*(),;])
  | (?P<unit>e\+|ex\b)
  | (?P<ident>[a-z][a-zA-Z0-9_]*)
""", re.VERBOSE)


def _tokenize(text: str) -> list:
    toks, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            toks.append((kind, m.group(), pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.take()
        if t[1] != value:
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t[2])

    def check_op(self, name: str, arity: int, pos: int):
        ops = self.alphabet.operators
        if name not in ops:
            raise ParseError(f"unknown symbol {name!r}", pos)
        if ops[name] != arity:
            raise ParseError(f"arity mismatch for {name!r}", pos)

    # bunch level: ';' < ','
    def bunch(self) -> Bunch:
        items = [self.comma_bunch()]
        while self.peek()[1] == ";":
            self.take()
            items.append(self.comma_bunch())
        return items[0] if len(items) == 1 else Bunch(";", None, tuple(items))

    def comma_bunch(self) -> Bunch:
        items = [self.bunch_item()]
        while self.peek()[1] == ",":
            self.take()
            items.append(self.bunch_item())
        return items[0] if len(items) == 1 else Bunch(",", None, tuple(items))

    def bunch_item(self) -> Bunch:
        kind, val, pos = self.peek()
        if kind == "unit":
            self.take()
            return MUNIT if val == "ex" else AUNIT
        if val == "(":
            # a parenthesised bunch, unless it turns out to be a formula
            save = self.i
            self.take()
            inner = self.bunch()
            if inner.kind != "leaf":
                self.expect(")")
                return inner
            self.i = save
        return leaf(self.formula())

    # formula level
    def formula(self) -> Formula:
        left = self.disj()
        kind, val, pos = self.peek()
        if val in ("->", "-*"):
            self.take()
            name = _SYMBOL_TO_OP[val]
            self.check_op(name, 2, pos)
            return Op(name, (left, self.formula()))
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek()[1] == "|":
            _, _, pos = self.take()
            self.check_op("or", 2, pos)
            left = Op("or", (left, self.conj()))
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek()[1] in ("&", "*"):
            _, val, pos = self.take()
            name = _SYMBOL_TO_OP[val]
            self.check_op(name, 2, pos)
            left = Op(name, (left, self.unary()))
        return left

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "~":
            self.take()
            self.check_op("not", 1, pos)
            return Op("not", (self.unary(),))
        if kind == "ident" and val in ("box", "dia"):
            self.take()
            self.check_op(val, 1, pos)
            return Op(val, (self.unary(),))
        if kind == "ident":
            self.take()
            if val in _CONSTANTS:
                self.check_op(val, 0, pos)
                return Op(val)
            if self.alphabet.atoms is not None and val not in self.alphabet.atoms:
                raise ParseError(f"unknown symbol {val!r}", pos)
            return Atom(val)
        if val == "(":
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if kind == "eof":
            self.fail("unexpected end of input")
        self.fail(f"unexpected token {val!r}")

    def finish(self):
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected token {val!r}", pos)


def parse_formula(text: str, alphabet: Alphabet = FULL) -> Formula:
    p = _Parser(text, alphabet)
    f = p.formula()
    p.finish()
    return f


def parse_bunch(text: str, alphabet: Alphabet = FULL) -> Bunch:
    p = _Parser(text, alphabet)
    if p.peek()[0] == "eof":
        return AUNIT
    b = p.bunch()
    p.finish()
    return b


def parse_sequent(text: str, alphabet: Alphabet = FULL) -> Sequent:
    """Parse ``bunch |- datum``; an empty side is read as the additive unit."""
    p = _Parser(text, alphabet)
    ant = AUNIT if p.peek()[0] == "turn" else p.bunch()
    if p.peek()[0] != "turn":
        p.fail("expected '|-'")
    p.take()
    suc = AUNIT if p.peek()[0] == "eof" else p.bunch()
    p.finish()
    return Sequent(ant, suc)
