"""First-order meta-logic: theories, synthetic rules and relational calculi.

A theory is a finite set of closed meta-formulas over satisfaction atoms
``(x : A)`` and relation atoms ``x R y``.  Each member is unfolded by
generic hereditary reduction in G3c into a synthetic rule; suppressing the
theory yields a labelled (relational) calculus, which ``prove_labelled``
searches backwards.
"""

from __future__ import annotations

import itertools
import re
import sys
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Iterable, Iterator

import sexpdata

from .proofs import CheckResult, ProofTree
from .syntax import Atom, Bunch, Op, ParseError, parse_bunch, show_formula

__all__ = [
    "MVar", "Sat", "Rel", "MBot", "AnyAtom", "MAnd", "MOr", "MImp", "Forall", "Exists",
    "NonPolarizable", "NotTractable", "Theory", "SyntheticRule", "LRule", "Premiss",
    "LabelledCalculus", "LSeq", "polarity", "polarity_alternations", "is_tractable",
    "parse_meta", "load_theory", "parse_theory", "synthesize_rule", "generate_relational_calculus",
    "builtin_calculus", "prove_labelled", "check_labelled_proof", "parse_labelled",
    "show_lseq", "propositional_encoding", "ObjRule", "load_rules", "parse_rules",
    "load_object_rules", "canonical_rule", "canonical_object_rule", "same_rules",
    "world_independence_partition", "to_rjplus", "show_rule", "rule_to_sexp",
]


# ---------------------------------------------------------------------------
# meta-formulas

@dataclass(frozen=True)
class MVar(Atom):
    """Object-level meta-variable (a formula or datum placeholder)."""


@dataclass(frozen=True)
class Sat:
    world: str
    obj: object

    def __str__(self):
        return f"({self.world} : {show_obj(self.obj)})"


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple = ()

    def __str__(self):
        if len(self.args) == 2:
            return f"{self.args[0]} {self.name} {self.args[1]}"
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(self.args)})"


@dataclass(frozen=True)
class MBot:
    def __str__(self):
        return "bot"


@dataclass(frozen=True)
class AnyAtom:
    """Rule-schema variable standing for an arbitrary meta-atom."""
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class MAnd:
    left: object
    right: object


@dataclass(frozen=True)
class MOr:
    left: object
    right: object


@dataclass(frozen=True)
class MImp:
    left: object
    right: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


ATOMS = (Sat, Rel, MBot, AnyAtom)


def is_atom(f) -> bool:
    return isinstance(f, ATOMS)


def show_obj(t) -> str:
    if isinstance(t, Op) and t.name in (",", ";"):
        parts = []
        for a in t.args:
            s = show_obj(a)
            parts.append(f"({s})" if isinstance(a, Op) and a.name in (",", ";") and a.name != t.name else s)
        return f" {t.name} ".join(parts)
    return show_formula(t)


def show_meta(f) -> str:
    if is_atom(f):
        return str(f)
    if isinstance(f, MAnd):
        return f"({show_meta(f.left)} & {show_meta(f.right)})"
    if isinstance(f, MOr):
        return f"({show_meta(f.left)} | {show_meta(f.right)})"
    if isinstance(f, MImp):
        return f"({show_meta(f.left)} => {show_meta(f.right)})"
    if isinstance(f, Forall):
        return f"forall {f.var}. {show_meta(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {show_meta(f.body)}"
    raise TypeError(f"not a meta-formula: {f!r}")


# ---------------------------------------------------------------------------
# polarity and tractability

class NonPolarizable(ValueError):
    pass


class NotTractable(ValueError):
    pass


def polarity(f) -> str:
    """'pos', 'neg' or 'both', read off the principal connective.

    Atoms are neutral; ⅋, ∃ and ⊥ are positive; ⇒ and ∀ are negative; a
    conjunction takes the polarity its conjuncts agree on.
    """
    if isinstance(f, MBot):
        return "pos"
    if is_atom(f):
        return "both"
    if isinstance(f, (MOr, Exists)):
        for sub in _children(f):
            polarity(sub)
        return "pos"
    if isinstance(f, (MImp, Forall)):
        for sub in _children(f):
            polarity(sub)
        return "neg"
    if isinstance(f, MAnd):
        a, b = polarity(f.left), polarity(f.right)
        if a == "both":
            return b
        if b == "both" or a == b:
            return a
        raise NonPolarizable(f"conjunction mixes polarities: {show_meta(f)}")
    raise TypeError(f"not a meta-formula: {f!r}")


def _children(f) -> tuple:
    if isinstance(f, (MAnd, MOr, MImp)):
        return (f.left, f.right)
    if isinstance(f, (Forall, Exists)):
        return (f.body,)
    return ()


def polarity_alternations(f) -> int:
    if is_atom(f):
        return 0
    if isinstance(f, (MAnd, MOr)):
        return max(polarity_alternations(f.left), polarity_alternations(f.right))
    if isinstance(f, (Forall, Exists)):
        return polarity_alternations(f.body)
    if isinstance(f, MImp):
        return 1 + max(polarity_alternations(f.left), polarity_alternations(f.right))
    raise TypeError(f"not a meta-formula: {f!r}")


def is_tractable(f) -> bool:
    pol = polarity(f)
    pi = polarity_alternations(f)
    return (pol in ("neg", "both") and pi <= 2) or (pol in ("pos", "both") and pi <= 1)


# ---------------------------------------------------------------------------
# s-expression reading

_META_HEADS = {"sat", "rel", "mand", "par", "imp", "iff", "forall", "exists", "bot"}
_OBJ_OPS = {"and": 2, "or": 2, "imp": 2, "not": 1, "box": 1, "dia": 1, "mand": 2, "wand": 2,
            "comma": 2, "semi": 2}
_OBJ_CONSTS = {"bot", "top", "mtop"}


def _loads(text: str):
    return sexpdata.loads(text, nil=None, true=None)


def _sym(x) -> str:
    if isinstance(x, sexpdata.Symbol):
        return x.value()
    if isinstance(x, (int, str)):
        return str(x)
    raise ValueError(f"expected a symbol, got {x!r}")


def _head(x) -> str | None:
    return _sym(x[0]) if isinstance(x, list) and x else None


def parse_obj(x):
    """Object term: uppercase symbols are meta-variables, lowercase ones atoms."""
    if not isinstance(x, list):
        s = _sym(x)
        if s in _OBJ_CONSTS:
            return Op(s)
        return MVar(s) if s[0].isupper() else Atom(s)
    h = _head(x)
    if h not in _OBJ_OPS:
        raise ValueError(f"unknown object operator {h!r}")
    args = tuple(parse_obj(a) for a in x[1:])
    if len(args) != _OBJ_OPS[h]:
        raise ValueError(f"arity mismatch for {h!r}")
    name = {"comma": ",", "semi": ";"}.get(h, h)
    return Op(name, args)


def parse_meta(x):
    """Meta-formula from an s-expression (a parsed list or source text)."""
    if type(x) is str:
        x = _loads(x)
    if not isinstance(x, list):
        s = _sym(x)
        if s == "bot":
            return MBot()
        return Rel(s)
    h = _head(x)
    if h == "sat":
        return Sat(_sym(x[1]), parse_obj(x[2]))
    if h == "rel":
        return Rel(_sym(x[1]), tuple(_sym(a) for a in x[2:]))
    if h == "any":
        return AnyAtom(_sym(x[1]))
    if h in ("mand", "par"):
        parts = [parse_meta(a) for a in x[1:]]
        cls = MAnd if h == "mand" else MOr
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = cls(p, out)
        return out
    if h == "imp":
        return MImp(parse_meta(x[1]), parse_meta(x[2]))
    if h in ("forall", "exists"):
        cls = Forall if h == "forall" else Exists
        names = x[1] if isinstance(x[1], list) else [x[1]]
        body = parse_meta(x[2])
        for n in reversed(names):
            body = cls(_sym(n), body)
        return body
    if h == "iff":
        raise ValueError("'iff' is only allowed at the top of a clause")
    # bare predicate application: (A X)
    return Rel(h, tuple(_sym(a) for a in x[1:]))


def _obj_vars(t) -> list:
    if isinstance(t, MVar):
        return [t.name]
    if isinstance(t, Op):
        return [v for a in t.args for v in _obj_vars(a)]
    return []


def _atom_vars(a) -> list:
    if isinstance(a, Sat):
        return [a.world] + _obj_vars(a.obj)
    if isinstance(a, Rel):
        return list(a.args)
    if isinstance(a, AnyAtom):
        return [a.name]
    return []


def free_vars(f, bound=frozenset()) -> list:
    out: list = []
    if is_atom(f):
        vs = _atom_vars(f)
    elif isinstance(f, (Forall, Exists)):
        vs = [v for v in free_vars(f.body, bound | {f.var})]
    else:
        vs = [v for c in _children(f) for v in free_vars(c, bound)]
    for v in vs:
        if v not in bound and v not in out:
            out.append(v)
    return out


def closure(f):
    for v in reversed(free_vars(f)):
        f = Forall(v, f)
    return f


# ---------------------------------------------------------------------------
# theories

@dataclass
class Theory:
    clauses: list                     # (name or None, closed meta-formula)
    axioms: list                      # (name or None, closed atomic meta-formula)
    explicit_contraction: bool = False
    name: str = ""


def parse_theory(text: str, name: str = "") -> Theory:
    forms = _loads(f"({text})")
    th = Theory([], [], name=name)
    for form in forms:
        h = _head(form)
        rest = form[1:]
        label = None
        if rest and not isinstance(rest[0], list) and len(rest) > 1:
            label, rest = _sym(rest[0]), rest[1:]
        if h == "clause":
            body = rest[0]
            if _head(body) == "iff":
                a, b = parse_meta(body[1]), parse_meta(body[2])
                th.clauses.append((None, closure(MImp(a, b))))
                th.clauses.append((None, closure(MImp(b, a))))
            else:
                th.clauses.append((label, closure(parse_meta(body))))
        elif h == "axiom":
            th.axioms.append((label, closure(parse_meta(rest[0]))))
        elif h == "option":
            key, val = _sym(rest[0]) if label is None else label, _sym(rest[-1])
            if key == "contraction":
                th.explicit_contraction = val == "explicit"
            else:
                raise ValueError(f"unknown option {key!r}")
        else:
            raise ValueError(f"unknown theory form {h!r}")
    return th


def load_theory(path_or_name: str) -> Theory:
    """Load a theory by file path or by bundled name (``k`` or ``ipl``)."""
    if re.fullmatch(r"\w+", path_or_name):
        text = resources.files(__package__).joinpath(f"theories/{path_or_name}.thy").read_text()
        return parse_theory(text, path_or_name)
    with open(path_or_name) as fh:
        return parse_theory(fh.read(), path_or_name)


# ---------------------------------------------------------------------------
# rules

@dataclass(frozen=True)
class Premiss:
    left: tuple = ()
    right: tuple = ()
    ctx_left: object = "keep"        # "keep", "drop" or ("subst", x, y)
    ctx_right: object = "keep"


@dataclass(frozen=True)
class LRule:
    """Labelled rule schema over the contexts Π (left) and Σ (right).

    Conclusion atoms are matched against the sequent; whatever is not
    matched is the context.  ``occurs`` lists variables that must be
    instantiated with a term already present, ``fresh`` the eigenvariables.
    """
    name: str
    concl_left: tuple = ()
    concl_right: tuple = ()
    premisses: tuple = ()
    fresh: frozenset = frozenset()
    occurs: frozenset = frozenset()
    choice: bool = False             # search control only
    manual: bool = False             # never applied by the prover on its own


@dataclass(frozen=True)
class SyntheticRule:
    """Collapsed hereditary reduction of ``principal`` in left position."""
    principal: object
    premisses: tuple
    fresh: frozenset
    occurs: frozenset

    def as_rule(self, name: str = "syn") -> LRule:
        return LRule(name, (self.principal,), (), self.premisses, self.fresh, self.occurs)


@dataclass
class LabelledCalculus:
    name: str
    rules: list
    simplified: bool = True

    @property
    def explicit_contraction(self) -> bool:
        return any(r.name == "c" for r in self.rules)

    def rule(self, name: str) -> LRule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)


# --- generic hereditary reduction ------------------------------------------

@dataclass
class _Acc:
    inst: list = field(default_factory=list)      # ∀L / ∃R instantiations
    eigen: list = field(default_factory=list)     # ∀R / ∃L eigenvariables


@dataclass(frozen=True)
class _Tagged:
    atom: object
    top: bool          # reached through conjunctions only


def _red_left(f, acc: _Acc, top: bool) -> list:
    """Premisses (left, right) of generic hereditary reduction of f, Π ▷ Σ."""
    if is_atom(f):
        return [((_Tagged(f, top),), ())]
    if isinstance(f, MAnd):
        return [(l1 + l2, r1 + r2) for l1, r1 in _red_left(f.left, acc, top)
                for l2, r2 in _red_left(f.right, acc, top)]
    if isinstance(f, MOr):
        return _red_left(f.left, acc, False) + _red_left(f.right, acc, False)
    if isinstance(f, MImp):
        return _red_right(f.left, acc, top) + _red_left(f.right, acc, False)
    if isinstance(f, Forall):
        acc.inst.append(f.var)
        return _red_left(f.body, acc, False)
    if isinstance(f, Exists):
        acc.eigen.append(f.var)
        return _red_left(f.body, acc, False)
    raise TypeError(f"not a meta-formula: {f!r}")


def _red_right(f, acc: _Acc, top: bool) -> list:
    """Premisses of generic hereditary reduction of Π ▷ Σ, f."""
    if is_atom(f):
        return [((), (_Tagged(f, top),))]
    if isinstance(f, MAnd):
        return _red_right(f.left, acc, top) + _red_right(f.right, acc, top)
    if isinstance(f, MOr):
        return [(l1 + l2, r1 + r2) for l1, r1 in _red_right(f.left, acc, False)
                for l2, r2 in _red_right(f.right, acc, False)]
    if isinstance(f, MImp):
        return [(l1 + l2, r1 + r2) for l1, r1 in _red_left(f.left, acc, False)
                for l2, r2 in _red_right(f.right, acc, False)]
    if isinstance(f, Forall):
        acc.eigen.append(f.var)
        return _red_right(f.body, acc, False)
    if isinstance(f, Exists):
        acc.inst.append(f.var)
        return _red_right(f.body, acc, False)
    raise TypeError(f"not a meta-formula: {f!r}")


def _untag(prems) -> tuple:
    return tuple(Premiss(tuple(t.atom for t in l), tuple(t.atom for t in r)) for l, r in prems)


def synthesize_rule(f) -> SyntheticRule:
    """Collapse the generic hereditary reduction of ``f`` in left position."""
    if not is_tractable(f):
        raise NotTractable(f"not tractable: {show_meta(f)}")
    acc = _Acc()
    prems = _red_left(f, acc, True)
    return SyntheticRule(f, _untag(prems), frozenset(acc.eigen), frozenset(acc.inst))


# --- relational calculus ----------------------------------------------------

_OP_NAME = {",": "comma", ";": "semi"}


def _is_head(a) -> bool:
    return isinstance(a, Sat) and isinstance(a.obj, Op)


def _strip(f):
    bound = []
    while isinstance(f, Forall):
        bound.append(f.var)
        f = f.body
    return bound, f


def _clause_rule(label, f, theory: Theory, closable: set) -> LRule:
    """Simplified rule for one clause (forward/back-chaining analysis)."""
    closure_vars, body = _strip(f)
    if is_atom(body):
        return LRule(label or "axiom", (), (body,))
    if not isinstance(body, MImp):
        syn = synthesize_rule(f)
        return replace(syn.as_rule(label or "syn"), concl_left=())
    ante, cons = body.left, body.right
    head, side = None, None
    if _is_head(ante):
        head, side = ante, "L"
    elif _is_head(cons):
        head, side = cons, "R"
    acc = _Acc()
    raw = _red_right(ante, acc, True) + _red_left(cons, acc, False)
    inner_inst = bool(acc.inst)
    head_vars = set(_obj_vars(head.obj)) if head else set()

    moved_left: list = []
    moved_right: list = []
    retained: list = []
    kept = []
    for l, r in raw:
        if len(l) + len(r) == 1:
            t = (l or r)[0]
            a = t.atom
            if r and a == head and side == "L":
                moved_left.append(a)
                if not theory.explicit_contraction and inner_inst:
                    retained.append(("L", a))
                continue
            if l and a == head and side == "R":
                moved_right.append(a)
                if not theory.explicit_contraction and inner_inst:
                    retained.append(("R", a))
                continue
            if r and a != head:
                if head is None and t.top:
                    moved_left.append(a)
                    retained.append(("L", a))
                    continue
                if isinstance(a, Rel) and a.name not in closable:
                    moved_left.append(a)
                    retained.append(("L", a))
                    continue
                if isinstance(a, Sat) and not (set(_obj_vars(a.obj)) & head_vars) and \
                        not isinstance(a.obj, Op):
                    moved_left.append(a)
                    retained.append(("L", a))
                    continue
        kept.append((l, r))
    keep_l = tuple(a for s, a in retained if s == "L")
    keep_r = tuple(a for s, a in retained if s == "R")
    prems = tuple(Premiss(keep_l + tuple(t.atom for t in l), keep_r + tuple(t.atom for t in r))
                  for l, r in kept)
    concl_vars = {v for a in moved_left + moved_right for v in _atom_vars(a)}
    occurs = frozenset(v for v in closure_vars + acc.inst if v not in concl_vars)
    name = label
    if name is None:
        name = (side or "") + (_OP_NAME.get(head.obj.name, head.obj.name) if head else "geo")
    return LRule(name, tuple(moved_left), tuple(moved_right), prems, frozenset(acc.eigen), occurs)


def _base_rules(simplify: bool, explicit: bool) -> list:
    phi = AnyAtom("F")
    ax = LRule("ax", (phi,), (phi,))
    bot = LRule("bot", (MBot(),), ())
    cl = LRule("c", (phi,), (), (Premiss((phi, phi)),), manual=True)
    cr = LRule("cR", (), (phi,), (Premiss((), (phi, phi)),), manual=True)
    if not simplify:
        return [ax, bot, replace(cl, name="cL"), cr]
    return [ax, bot, cl] if explicit else [ax, bot]


def generate_relational_calculus(theory: Theory, simplify: bool = False) -> LabelledCalculus:
    """G3c(Ω) with Ω suppressed; ``simplify`` applies the chaining analysis."""
    for label, f in theory.clauses + theory.axioms:
        try:
            ok = is_tractable(f)
        except NonPolarizable as e:
            raise NotTractable(f"clause {label or show_meta(f)}: {e}") from e
        if not ok:
            raise NotTractable(f"clause {label or show_meta(f)} is not tractable: {show_meta(f)}")
    rules = _base_rules(simplify, theory.explicit_contraction)
    if not simplify:
        for i, (label, f) in enumerate(theory.clauses + theory.axioms):
            syn = synthesize_rule(f)
            rules.append(LRule(label or f"clause{i + 1}", (), (), syn.premisses, syn.fresh, syn.occurs))
        return LabelledCalculus(theory.name or "generated", rules, simplified=False)
    closable = {_strip(f)[1].name for _, f in theory.axioms if isinstance(_strip(f)[1], Rel)}
    for label, f in theory.axioms:
        rules.append(_clause_rule(label, f, theory, closable))
    for label, f in theory.clauses:
        rules.append(_clause_rule(label, f, theory, closable))
    return LabelledCalculus(theory.name or "generated", rules, simplified=True)


# ---------------------------------------------------------------------------
# rule files

def _atom_sexp(a) -> str:
    if isinstance(a, Sat):
        return f"(sat {a.world} {_obj_sexp(a.obj)})"
    if isinstance(a, Rel):
        return f"(rel {a.name}{''.join(' ' + x for x in a.args)})"
    if isinstance(a, MBot):
        return "bot"
    if isinstance(a, AnyAtom):
        return f"(any {a.name})"
    return _meta_sexp(a)


def _meta_sexp(f) -> str:
    if is_atom(f):
        return _atom_sexp(f)
    if isinstance(f, MAnd):
        return f"(mand {_meta_sexp(f.left)} {_meta_sexp(f.right)})"
    if isinstance(f, MOr):
        return f"(par {_meta_sexp(f.left)} {_meta_sexp(f.right)})"
    if isinstance(f, MImp):
        return f"(imp {_meta_sexp(f.left)} {_meta_sexp(f.right)})"
    kw = "forall" if isinstance(f, Forall) else "exists"
    return f"({kw} {f.var} {_meta_sexp(f.body)})"


def _obj_sexp(t) -> str:
    if isinstance(t, Op):
        if not t.args:
            return t.name
        name = {",": "comma", ";": "semi"}.get(t.name, t.name)
        return f"({name} {' '.join(_obj_sexp(a) for a in t.args)})"
    return t.name


def _ctx_sexp(tag: str, c) -> str:
    if c == "keep":
        return ""
    if c == "drop":
        return f" ({tag} drop)"
    return f" ({tag} subst {c[1]} {c[2]})"


def rule_to_sexp(r: LRule) -> str:
    parts = [f"(rule {r.name}",
             f"  (concl (left {' '.join(map(_atom_sexp, r.concl_left))}) "
             f"(right {' '.join(map(_atom_sexp, r.concl_right))}))"]
    for p in r.premisses:
        parts.append(f"  (prem (left {' '.join(map(_atom_sexp, p.left))}) "
                     f"(right {' '.join(map(_atom_sexp, p.right))})"
                     f"{_ctx_sexp('ctx-left', p.ctx_left)}{_ctx_sexp('ctx-right', p.ctx_right)})")
    if r.fresh:
        parts.append(f"  (fresh {' '.join(sorted(r.fresh))})")
    if r.occurs:
        parts.append(f"  (occurs {' '.join(sorted(r.occurs))})")
    if r.choice:
        parts.append("  (choice)")
    if r.manual:
        parts.append("  (manual)")
    return "\n".join(parts) + ")"


def _parse_ctx(x):
    kind = _sym(x[1])
    if kind in ("keep", "drop"):
        return kind
    if kind == "subst":
        return ("subst", _sym(x[2]), _sym(x[3]))
    raise ValueError(f"bad context form {kind!r}")


def _parse_rule(form) -> LRule:
    name = _sym(form[1])
    cl, cr, prems, fresh, occurs = (), (), [], frozenset(), frozenset()
    choice = manual = False
    for part in form[2:]:
        h = _head(part)
        if h in ("concl", "prem"):
            left = right = ()
            ctx_l = ctx_r = "keep"
            for side in part[1:]:
                sh = _head(side)
                if sh == "left":
                    left = tuple(parse_meta(a) for a in side[1:])
                elif sh == "right":
                    right = tuple(parse_meta(a) for a in side[1:])
                elif sh == "ctx-left":
                    ctx_l = _parse_ctx(side)
                elif sh == "ctx-right":
                    ctx_r = _parse_ctx(side)
                else:
                    raise ValueError(f"unknown sequent part {sh!r}")
            if h == "concl":
                cl, cr = left, right
            else:
                prems.append(Premiss(left, right, ctx_l, ctx_r))
        elif h == "fresh":
            fresh = frozenset(_sym(v) for v in part[1:])
        elif h == "occurs":
            occurs = frozenset(_sym(v) for v in part[1:])
        elif h == "choice":
            choice = True
        elif h == "manual":
            manual = True
        else:
            raise ValueError(f"unknown rule part {h!r}")
    return LRule(name, cl, cr, tuple(prems), fresh, occurs, choice, manual)


def parse_rules(text: str) -> list:
    return [_parse_rule(f) for f in _loads(f"({text})") if _head(f) == "rule"]


def _resource(name: str) -> str:
    return resources.files(__package__).joinpath(f"theories/{name}").read_text()


def load_rules(name_or_path: str) -> list:
    if re.fullmatch(r"[\w/]+", name_or_path):
        return parse_rules(_resource(f"{name_or_path}.rules"))
    with open(name_or_path) as fh:
        return parse_rules(fh.read())


def builtin_calculus(name: str) -> LabelledCalculus:
    files = {"rk": "golden/rk", "rj": "golden/rj", "rjplus": "rjplus"}
    if name not in files:
        raise KeyError(f"unknown built-in calculus {name!r}")
    return LabelledCalculus(name, load_rules(files[name]))


def show_rule(r: LRule) -> str:
    def side(atoms, ctx, sym):
        items = [] if ctx == "drop" else ([sym] if ctx == "keep" else [f"{sym}[{ctx[1]}:={ctx[2]}]"])
        return ", ".join(items + [str(a) if is_atom(a) else show_meta(a) for a in atoms])

    concl = f"{side(r.concl_left, 'keep', 'Π')} |- {side(r.concl_right, 'keep', 'Σ')}"
    prems = "   ||   ".join(f"{side(p.left, p.ctx_left, 'Π')} |- {side(p.right, p.ctx_right, 'Σ')}"
                            for p in r.premisses) or "(axiom)"
    extra = []
    if r.fresh:
        extra.append("fresh " + " ".join(sorted(r.fresh)))
    if r.occurs:
        extra.append("occurs " + " ".join(sorted(r.occurs)))
    tail = f"   [{'; '.join(extra)}]" if extra else ""
    return f"{r.name}: {concl}   <=   {prems}{tail}"


# --- comparison up to renaming ----------------------------------------------

def _rename_obj(t, m):
    if isinstance(t, MVar):
        return MVar(m.get(t.name, t.name))
    if isinstance(t, Op):
        return Op(t.name, tuple(_rename_obj(a, m) for a in t.args))
    return t


def _rename_meta(f, m):
    if isinstance(f, Sat):
        return Sat(m.get(f.world, f.world), _rename_obj(f.obj, m))
    if isinstance(f, Rel):
        return Rel(f.name, tuple(m.get(a, a) for a in f.args))
    if isinstance(f, AnyAtom):
        return AnyAtom(m.get(f.name, f.name))
    if isinstance(f, MBot):
        return f
    if isinstance(f, (MAnd, MOr, MImp)):
        return type(f)(_rename_meta(f.left, m), _rename_meta(f.right, m))
    return type(f)(m.get(f.var, f.var), _rename_meta(f.body, m))


def _meta_vars(f) -> list:
    if is_atom(f):
        return _atom_vars(f)
    out = []
    if isinstance(f, (Forall, Exists)):
        out.append(f.var)
    for c in _children(f):
        out.extend(_meta_vars(c))
    return out


def _rule_vars(r: LRule) -> list:
    seen: list = []
    atoms = list(r.concl_left) + list(r.concl_right)
    for p in r.premisses:
        atoms += list(p.left) + list(p.right)
    for a in atoms:
        for v in _meta_vars(a):
            if v not in seen:
                seen.append(v)
    for v in sorted(r.fresh | r.occurs):
        if v not in seen:
            seen.append(v)
    return seen


def _ms(atoms) -> tuple:
    return tuple(sorted(_meta_sexp(a) for a in atoms))


def _ctx_key(c, m) -> str:
    if isinstance(c, tuple):
        return f"subst {m.get(c[1], c[1])} {m.get(c[2], c[2])}"
    return c


def canonical_rule(r: LRule) -> tuple:
    """Shape of a rule invariant under variable renaming and multiset order."""
    vs = _rule_vars(r)
    best = None
    for perm in itertools.permutations(range(len(vs))):
        m = {v: f"v{perm[i]}" for i, v in enumerate(vs)}
        key = (
            _ms(_rename_meta(a, m) for a in r.concl_left),
            _ms(_rename_meta(a, m) for a in r.concl_right),
            tuple(sorted((_ms(_rename_meta(a, m) for a in p.left),
                          _ms(_rename_meta(a, m) for a in p.right),
                          _ctx_key(p.ctx_left, m), _ctx_key(p.ctx_right, m)) for p in r.premisses)),
            tuple(sorted(m[v] for v in r.fresh)),
            tuple(sorted(m[v] for v in r.occurs)),
        )
        if best is None or key < best:
            best = key
    return best


def same_rules(a: Iterable, b: Iterable, key=canonical_rule) -> tuple:
    """(only in a, only in b) as lists of rules, comparing shapes as multisets."""
    ka = [(key(r), r) for r in a]
    kb = [(key(r), r) for r in b]
    rest_b = list(kb)
    only_a = []
    for k, r in ka:
        for i, (k2, _) in enumerate(rest_b):
            if k2 == k:
                del rest_b[i]
                break
        else:
            only_a.append(r)
    return only_a, [r for _, r in rest_b]


# ---------------------------------------------------------------------------
# labelled sequents

def _akey(a) -> str:
    return _atom_sexp(a)


@dataclass(frozen=True)
class LSeq:
    left: tuple
    right: tuple

    @staticmethod
    def of(left: Iterable, right: Iterable) -> "LSeq":
        return LSeq(tuple(sorted(left, key=_akey)), tuple(sorted(right, key=_akey)))

    def worlds(self) -> set:
        out = set()
        for a in self.left + self.right:
            if isinstance(a, Sat):
                out.add(a.world)
            elif isinstance(a, Rel):
                out.update(a.args)
        return out

    def setkey(self) -> tuple:
        return (frozenset(self.left), frozenset(self.right))

    def __str__(self):
        return show_lseq(self)


def _show_latom(a) -> str:
    if isinstance(a, Sat):
        return f"{a.world}: {show_obj(a.obj)}"
    return str(a)


def show_lseq(s: LSeq) -> str:
    def side(atoms):
        return " , ".join(f"({_show_latom(a)})" if isinstance(a, Sat) and isinstance(a.obj, Op)
                          and a.obj.name in (",", ";") else _show_latom(a) for a in atoms)
    return f"{side(s.left)} |- {side(s.right)}".strip()


def _bunch_obj(b: Bunch):
    if b.formula is not None:
        return b.formula
    if not b.children:
        raise ParseError("units are not allowed in labelled data", 0)
    objs = [_bunch_obj(c) for c in b.children]
    out = objs[-1]
    for o in reversed(objs[:-1]):
        out = Op(b.kind, (o, out))
    return out


_ITEM_START = re.compile(r"\s*(?:[a-z]\w*\s*:|[a-z]\w*\s+[A-Z]\w*\s+[a-z]\w*\s*(?:,|$)|bot\s*(?:,|$))")


def _split_items(text: str, base: int) -> list:
    items, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0 and _ITEM_START.match(text, i + 1):
            items.append((text[start:i], base + start))
            start = i + 1
    if text.strip():
        items.append((text[start:], base + start))
    return items


def _parse_item(text: str, offset: int):
    s = text.strip()
    m = re.fullmatch(r"([a-z]\w*)\s+([A-Z]\w*)\s+([a-z]\w*)", s)
    if m:
        return Rel(m.group(2), (m.group(1), m.group(3)))
    if s == "bot":
        return MBot()
    m = re.fullmatch(r"([a-z]\w*)\s*:\s*(.+)", s, re.S)
    if not m:
        raise ParseError(f"expected a labelled item, got {s!r}", offset)
    try:
        b = parse_bunch(m.group(2))
    except ParseError as e:
        raise ParseError(str(e).rsplit(" at offset", 1)[0], offset + m.start(2) + e.offset) from None
    return Sat(m.group(1), _bunch_obj(b))


def parse_labelled(text: str) -> LSeq:
    """Parse ``w: p & q , w R u |- u: p``."""
    if text.count("|-") != 1:
        raise ParseError("expected exactly one '|-'", max(text.find("|-"), 0))
    k = text.index("|-")
    left = [_parse_item(t, o) for t, o in _split_items(text[:k], 0)]
    right = [_parse_item(t, o) for t, o in _split_items(text[k + 2:], k + 2)]
    return LSeq.of(left, right)


# ---------------------------------------------------------------------------
# matching and rule instances

def _match_obj(p, t, s: dict):
    if isinstance(p, MVar):
        if p.name in s:
            return s if s[p.name] == t else None
        return {**s, p.name: t}
    if isinstance(p, Op):
        if not isinstance(t, Op) or t.name != p.name or len(t.args) != len(p.args):
            return None
        for a, b in zip(p.args, t.args):
            s = _match_obj(a, b, s)
            if s is None:
                return None
        return s
    return s if p == t else None


def _match_world(v: str, w: str, s: dict):
    if v in s:
        return s if s[v] == w else None
    return {**s, v: w}


def _match_atom(p, a, s: dict):
    if isinstance(p, AnyAtom):
        if p.name in s:
            return s if s[p.name] == a else None
        return {**s, p.name: a}
    if isinstance(p, MBot):
        return s if isinstance(a, MBot) else None
    if isinstance(p, Sat):
        if not isinstance(a, Sat):
            return None
        s = _match_world(p.world, a.world, s)
        return None if s is None else _match_obj(p.obj, a.obj, s)
    if isinstance(p, Rel):
        if not isinstance(a, Rel) or a.name != p.name or len(a.args) != len(p.args):
            return None
        for v, w in zip(p.args, a.args):
            s = _match_world(v, w, s)
            if s is None:
                return None
        return s
    return None


def _match_side(pats: tuple, atoms: tuple, s: dict, used: frozenset = frozenset()) -> Iterator:
    if not pats:
        yield s, used
        return
    for i, a in enumerate(atoms):
        if i in used:
            continue
        s2 = _match_atom(pats[0], a, s)
        if s2 is not None:
            yield from _match_side(pats[1:], atoms, s2, used | {i})


def _inst_obj(t, s):
    if isinstance(t, MVar):
        return s[t.name]
    if isinstance(t, Op):
        return Op(t.name, tuple(_inst_obj(a, s) for a in t.args))
    return t


def _inst_atom(a, s):
    if isinstance(a, AnyAtom):
        return s[a.name]
    if isinstance(a, Sat):
        return Sat(s[a.world], _inst_obj(a.obj, s))
    if isinstance(a, Rel):
        return Rel(a.name, tuple(s[v] for v in a.args))
    return a


def _rename_world(a, x: str, y: str):
    if isinstance(a, Sat) and a.world == x:
        return Sat(y, a.obj)
    if isinstance(a, Rel):
        return Rel(a.name, tuple(y if v == x else v for v in a.args))
    return a


def _pattern_world_vars(r: LRule) -> set:
    out = set()
    atoms = list(r.concl_left) + list(r.concl_right)
    for p in r.premisses:
        atoms += list(p.left) + list(p.right)
    for a in atoms:
        if isinstance(a, Sat):
            out.add(a.world)
        elif isinstance(a, Rel):
            out.update(a.args)
    return out


@dataclass(frozen=True)
class _Instance:
    rule: LRule
    premisses: tuple
    principal_left: tuple     # matched antecedent atoms
    principal_right: tuple = ()


def _instances(r: LRule, seq: LSeq, fresh_names, world_pool=None) -> Iterator[_Instance]:
    worlds = sorted(seq.worlds())
    wvars = _pattern_world_vars(r)
    for s1, used_l in _match_side(r.concl_left, seq.left, {}):
        for s2, used_r in _match_side(r.concl_right, seq.right, s1):
            unbound = [v for v in sorted(r.occurs) if v not in s2]
            if any(v not in wvars for v in unbound):
                raise ValueError(f"rule {r.name}: cannot instantiate {unbound} from the sequent")
            pool = worlds if world_pool is None else world_pool
            for choice in itertools.product(pool, repeat=len(unbound)):
                s = dict(s2)
                s.update(zip(unbound, choice))
                for fresh in fresh_names(r, s, seq):
                    s3 = {**s, **fresh}
                    ctx_l = tuple(a for i, a in enumerate(seq.left) if i not in used_l)
                    ctx_r = tuple(a for i, a in enumerate(seq.right) if i not in used_r)
                    prems = []
                    for p in r.premisses:
                        if p.ctx_left == "keep":
                            cl = ctx_l
                        elif p.ctx_left == "drop":
                            cl = ()
                        else:
                            cl = tuple(_rename_world(a, s3[p.ctx_left[1]], s3[p.ctx_left[2]]) for a in ctx_l)
                        cr = ctx_r if p.ctx_right == "keep" else () if p.ctx_right == "drop" else \
                            tuple(_rename_world(a, s3[p.ctx_right[1]], s3[p.ctx_right[2]]) for a in ctx_r)
                        prems.append(LSeq.of(cl + tuple(_inst_atom(a, s3) for a in p.left),
                                             cr + tuple(_inst_atom(a, s3) for a in p.right)))
                    yield _Instance(r, tuple(prems),
                                    tuple(seq.left[i] for i in sorted(used_l)),
                                    tuple(seq.right[i] for i in sorted(used_r)))


class _FreshWorlds:
    def __init__(self, avoid: set):
        self.avoid = set(avoid)
        self.n = 0

    def __call__(self, r: LRule, s: dict, seq: LSeq):
        out = {}
        for v in sorted(r.fresh):
            while True:
                self.n += 1
                name = f"w{self.n}"
                if name not in self.avoid:
                    break
            self.avoid.add(name)
            out[v] = name
        yield out


# ---------------------------------------------------------------------------
# proving

def _kind(r: LRule) -> str:
    if r.manual:
        return "manual"
    if not r.premisses:
        return "close"
    if r.choice or r.occurs or any(p.ctx_left != "keep" or p.ctx_right != "keep" for p in r.premisses):
        return "choice"
    return "eager"


class _Prover:
    def __init__(self, calc: LabelledCalculus, goal: LSeq, max_branch: int):
        if not calc.simplified:
            raise ValueError("prove_labelled needs a simplified calculus")
        self.calc = calc
        self.fresh = _FreshWorlds(goal.worlds())
        by_kind: dict = {"close": [], "eager": [], "choice": [], "manual": []}
        for r in calc.rules:
            by_kind[_kind(r)].append(r)
        self.close, self.choice = by_kind["close"], by_kind["choice"]
        # consuming unfolds, then ones that keep their principal, then world creation
        self.eager = sorted(by_kind["eager"], key=_eager_rank)
        self.contract = calc.explicit_contraction
        self.max_branch = max_branch
        self.inert = _inert_relations(calc.rules)

    def prove(self, seq: LSeq, depth: int, seen: frozenset, used: frozenset = frozenset()):
        if depth <= 0 or len(seen) >= self.max_branch:
            return None
        key = seq.setkey()
        seen = seen | {key}
        for r in self.close:
            for _ in _instances(r, seq, self.fresh):
                return ProofTree(seq, r.name)
        for r in self.eager:
            for inst in _instances(r, seq, self.fresh):
                if any(p.setkey() == key for p in inst.premisses):
                    continue
                tag = _retain_tag(inst)
                if tag is not None and tag in used:
                    continue
                used2 = used if tag is None else used | {tag}
                kids = self._all(inst.premisses, depth, seen, used2)
                return None if kids is None else ProofTree(seq, r.name, kids)
        for r in self.choice:
            for inst in _instances(r, seq, self.fresh):
                # loop check: never re-enter a set-equal sequent of this branch
                if any(p.setkey() in seen for p in inst.premisses):
                    continue
                tag = _retain_tag(inst)
                if tag is not None and tag in used:
                    continue
                if self._dead(seq, inst):
                    continue
                used2 = used if tag is None else used | {tag}
                consumed = [a for a in inst.principal_left
                            if not all(a in p.left for p in inst.premisses)]
                if self.contract and consumed:
                    dup = LSeq.of(seq.left + tuple(consumed), seq.right)
                    prems = tuple(LSeq.of(p.left + tuple(consumed), p.right) for p in inst.premisses)
                    kids = self._all(prems, depth - 1, seen, used2)
                    if kids is not None:
                        node = ProofTree(dup, r.name, kids)
                        # one contraction per duplicated atom, outermost first
                        for k in range(len(consumed) - 1, -1, -1):
                            below = LSeq.of(seq.left + tuple(consumed[:k]), seq.right)
                            node = ProofTree(below, "c", (node,))
                        return node
                    continue
                kids = self._all(inst.premisses, depth - 1, seen, used2)
                if kids is not None:
                    return ProofTree(seq, r.name, kids)
        return None

    def _dead(self, seq: LSeq, inst: _Instance) -> bool:
        """A new succedent relation atom that can only ever close by an axiom."""
        for p in inst.premisses:
            for a in p.right:
                if isinstance(a, Rel) and a.name in self.inert and a not in seq.right:
                    probe = LSeq(p.left, (a,))
                    if not any(True for r in self.close for _ in _instances(r, probe, self.fresh)):
                        return True
        return False

    def _all(self, prems, depth, seen, used):
        out = []
        for p in prems:
            t = self.prove(p, depth, seen, used)
            if t is None:
                return None
            out.append(t)
        return tuple(out)


def _inert_relations(rules) -> set:
    """Relation names no rule derives on the right, and that enter the
    antecedent only together with an eigenvariable."""
    names = set()
    for r in rules:
        for p in r.premisses:
            for a in p.left + p.right:
                if isinstance(a, Rel):
                    names.add(a.name)
        for a in r.concl_left + r.concl_right:
            if isinstance(a, Rel):
                names.add(a.name)
    out = set()
    for n in names:
        ok = True
        for r in rules:
            if r.premisses and any(isinstance(a, Rel) and a.name == n for a in r.concl_right):
                ok = False
            for p in r.premisses:
                for a in p.left:
                    if isinstance(a, Rel) and a.name == n and a not in r.concl_left \
                            and not set(a.args) & r.fresh:
                        ok = False
        if ok:
            out.add(n)
    return out


def _eager_rank(r: LRule) -> int:
    if r.fresh:
        return 2
    keeps = all(set(r.concl_left) <= set(p.left) and set(r.concl_right) <= set(p.right)
                for p in r.premisses)
    return 1 if keeps else 0


def _retain_tag(inst: _Instance):
    """Instances that keep their whole conclusion fire once per branch."""
    if not inst.principal_left and not inst.principal_right:
        return None
    if all(set(inst.principal_left) <= set(p.left) and set(inst.principal_right) <= set(p.right)
           for p in inst.premisses):
        return (inst.rule.name, inst.principal_left, inst.principal_right)
    return None


def prove_labelled(calc: LabelledCalculus, goal: LSeq, depth: int = 8,
                   max_branch: int = 300) -> ProofTree | None:
    """Backward search bounded by ``depth`` choice points per branch.

    Invertible unfolds are free but a branch may not exceed ``max_branch``
    sequents in total.  A set-normalized loop check guards choice points.
    """
    if sys.getrecursionlimit() < 4 * max_branch + 200:
        sys.setrecursionlimit(4 * max_branch + 200)
    return _Prover(calc, goal, max_branch).prove(goal, depth, frozenset())


def _multiset_eq(a: tuple, b: tuple) -> bool:
    return sorted(map(_akey, a)) == sorted(map(_akey, b))


def check_labelled_proof(calc: LabelledCalculus, tree: ProofTree) -> CheckResult:
    """Every node must be an instance of its named rule; eigenvariables fresh."""
    def fresh_from(kids):
        def gen(r, s, seq):
            new = sorted(set().union(*(k.worlds() for k in kids)) - seq.worlds()) if kids else []
            if not r.fresh:
                yield {}
                return
            for combo in itertools.permutations(new, len(r.fresh)):
                yield dict(zip(sorted(r.fresh), combo))
        return gen

    def walk(n: ProofTree, path: tuple) -> CheckResult:
        if n.rule is None:
            return CheckResult(False, path, "open leaf")
        try:
            r = calc.rule(n.rule)
        except KeyError:
            return CheckResult(False, path, f"unknown rule {n.rule!r}")
        kids = [c.sequent for c in n.children]
        if len(kids) != len(r.premisses):
            return CheckResult(False, path, f"{n.rule}: wrong number of premisses")
        ok = False
        for inst in _instances(r, n.sequent, fresh_from(kids)):
            if all(_multiset_eq(p.left, k.left) and _multiset_eq(p.right, k.right)
                   for p, k in zip(inst.premisses, kids)):
                ok = True
                break
        if not ok:
            return CheckResult(False, path, f"{n.rule}: not an instance of the rule")
        for i, c in enumerate(n.children):
            res = walk(c, path + (i,))
            if not res:
                return res
        return CheckResult(True)

    return walk(tree, ())


def to_rjplus(goal: LSeq) -> tuple:
    """Switch an Ω_IPL goal to the basic calculus RJ+ (relation atoms are not allowed)."""
    for a in goal.left + goal.right:
        if isinstance(a, Rel):
            raise ValueError("RJ+ goals carry no relation atoms")
        if isinstance(a, Sat):
            for sub in _obj_ops(a.obj):
                if sub not in ("and", "or", "imp", "not", "bot", ",", ";"):
                    raise ValueError(f"operator {sub!r} is outside the IPL signature")
    return goal, builtin_calculus("rjplus")


def _obj_ops(t) -> Iterator[str]:
    if isinstance(t, Op):
        yield t.name
        for a in t.args:
            yield from _obj_ops(a)


# ---------------------------------------------------------------------------
# world independence

def world_independence_partition(left: Iterable, right: Iterable) -> list:
    """Split atoms into components connected by shared world variables.

    Returns a list of (left, right) pairs; atoms with no world (⊥) form
    their own singleton components.
    """
    items = [("L", a) for a in left] + [("R", a) for a in right]
    parent = list(range(len(items)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict = {}
    for i, (_, a) in enumerate(items):
        for w in _atom_worlds(a):
            if w in owner:
                parent[find(i)] = find(owner[w])
            else:
                owner[w] = i
    groups: dict = {}
    for i, (side, a) in enumerate(items):
        groups.setdefault(find(i), ([], []))[0 if side == "L" else 1].append(a)
    return [(tuple(l), tuple(r)) for l, r in groups.values()]


def _atom_worlds(a) -> list:
    if isinstance(a, Sat):
        return [a.world]
    if isinstance(a, Rel):
        return list(a.args)
    return []


# ---------------------------------------------------------------------------
# propositional encoding

@dataclass(frozen=True)
class ObjRule:
    """Object-level rule schema: sides are tuples of formula patterns, with the
    context variables ``G`` (antecedent) and ``D`` (succedent) as MVars."""
    name: str
    concl: tuple                  # (antecedent items, succedent items)
    premisses: tuple = ()


_CTX_L, _CTX_R = MVar("G"), MVar("D")


def _flatten(t, kind: str) -> list:
    if isinstance(t, Op) and t.name == kind:
        return [x for a in t.args for x in _flatten(a, kind)]
    return [t]


def _basic_world(atoms) -> str | None:
    ws = {a.world for a in atoms if isinstance(a, Sat)}
    return ws.pop() if len(ws) == 1 else None


def _encode_side(atoms, ctx, ctx_var, kind) -> tuple:
    items = [] if ctx == "drop" else [ctx_var]
    for a in atoms:
        items.extend(_flatten(a.obj, kind) if isinstance(a.obj, Op) else [a.obj])
    return tuple(items)


def _is_bvs_atoms(atoms) -> bool:
    return all(isinstance(a, (Sat, AnyAtom)) for a in atoms)


def propositional_encoding(calc: LabelledCalculus, operators=("and", "or", "imp", "not")) -> list:
    """ν(R): the object rules obtained by reading each basic rule through ⌊−⌋.

    Rules that cannot fire on basic validity sequents (their conclusion
    mentions relation atoms or ⊥, or an operator outside ``operators``) are
    outside the encoding's domain and skipped.  A rule in the domain whose
    premisses leave it raises ValueError.
    """
    out = []
    allowed = set(operators) | {",", ";"}
    for r in calc.rules:
        concl_atoms = r.concl_left + r.concl_right
        if not _is_bvs_atoms(concl_atoms):
            continue
        if any(op not in allowed for a in concl_atoms if isinstance(a, Sat) for op in _obj_ops(a.obj)):
            continue
        for p in r.premisses:
            atoms = p.left + p.right
            bad = [a for a in atoms if not isinstance(a, (Sat, AnyAtom))]
            if bad:
                raise ValueError(f"rule {r.name} is not basic: premiss mentions {bad[0]}")
            sats = [a for a in atoms if isinstance(a, Sat)]
            if sats and _basic_world(sats) is None:
                raise ValueError(f"rule {r.name} is not basic: premiss is not monomundic")
        if _basic_world([a for a in concl_atoms if isinstance(a, Sat)]) is None and \
                any(isinstance(a, Sat) for a in concl_atoms):
            raise ValueError(f"rule {r.name} is not basic: conclusion is not monomundic")

        def enc(left, right, cl="keep", cr="keep"):
            return (_encode_side(_as_sat(left), cl, _CTX_L, ","), _encode_side(_as_sat(right), cr, _CTX_R, ";"))

        concl = enc(r.concl_left, r.concl_right)
        prems = tuple(enc(p.left, p.right, p.ctx_left, p.ctx_right) for p in r.premisses)
        if len(prems) == 1 and _obj_seq_key(prems[0]) == _obj_seq_key(concl):
            # trivialised inference: only the exchange rule remains
            if not any(o.name == "e" for o in out):
                ident = ((_CTX_L,), (_CTX_R,))
                out.append(ObjRule("e", ident, (ident,)))
            continue
        out.append(ObjRule(r.name, concl, prems))
    return out


def _as_sat(atoms) -> tuple:
    return tuple(Sat("w", MVar(a.name)) if isinstance(a, AnyAtom) else a for a in atoms)


def _obj_seq_key(s) -> tuple:
    return (tuple(sorted(map(_obj_sexp, s[0]))), tuple(sorted(map(_obj_sexp, s[1]))))


def canonical_object_rule(r: ObjRule) -> tuple:
    vs: list = []
    for side in [r.concl] + list(r.premisses):
        for items in side:
            for t in items:
                for v in _obj_vars(t):
                    if v not in vs and v not in ("G", "D"):
                        vs.append(v)
    best = None
    for perm in itertools.permutations(range(len(vs))):
        m = {v: f"v{perm[i]}" for i, v in enumerate(vs)}

        def key(s):
            return (tuple(sorted(_obj_sexp(_rename_obj(t, m)) for t in s[0])),
                    tuple(sorted(_obj_sexp(_rename_obj(t, m)) for t in s[1])))
        k = (key(r.concl), tuple(sorted(key(p) for p in r.premisses)))
        if best is None or k < best:
            best = k
    return best


def _parse_obj_side(x) -> tuple:
    return tuple(parse_obj(a) for a in (x or []))


def parse_object_rules(text: str) -> list:
    out = []
    for form in _loads(f"({text})"):
        if _head(form) != "orule":
            continue
        name, concl, prems = _sym(form[1]), None, []
        for part in form[2:]:
            h = _head(part)
            seq = (_parse_obj_side(part[1]), _parse_obj_side(part[2]))
            if h == "concl":
                concl = seq
            elif h == "prem":
                prems.append(seq)
            else:
                raise ValueError(f"unknown object rule part {h!r}")
        out.append(ObjRule(name, concl, tuple(prems)))
    return out


def load_object_rules(name: str) -> list:
    return parse_object_rules(_resource(f"{name}.rules"))


def show_object_rule(r: ObjRule) -> str:
    def side(items):
        return " , ".join(show_obj(t) for t in items) or "∅"

    def seq(s):
        return f"{side(s[0])} |- {side(s[1])}"
    prems = "   ||   ".join(seq(p) for p in r.premisses) or "(axiom)"
    return f"{r.name}: {seq(r.concl)}   <=   {prems}"
