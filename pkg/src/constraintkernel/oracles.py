"""Independent decision procedures used as ground truth by the test-suite.

* ``ipl_decide``: backward search in a multi-succedent intuitionistic
  calculus over sets of formulas with a per-branch loop check.
* ``ipl_countermodel``: exhaustive sweep over rooted finite preorders.
* ``k_decide``: evaluation over all bisimulation types of the formula's
  modal depth, which is exact for K.
* ``model_check``: direct clause-by-clause satisfaction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .syntax import Atom, Formula, Op, Sequent, atoms_of, formulas_of, modal_depth, op

__all__ = [
    "KripkeModel", "FrameType", "ipl_decide", "ipl_countermodel", "ipl_sweep_valid",
    "k_decide", "k_countermodel", "model_check", "BoundExceeded", "sequent_formula",
]

TOP, BOT = Op("top"), Op("bot")


class BoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class FrameType:
    arities: tuple = (2,)


@dataclass(frozen=True)
class KripkeModel:
    worlds: tuple
    relation: frozenset          # pairs (w, v)
    valuation: dict              # atom -> frozenset of worlds

    def successors(self, w) -> list:
        return [v for v in self.worlds if (w, v) in self.relation]

    def describe(self) -> str:
        rel = ", ".join(f"{a}R{b}" for a, b in sorted(self.relation))
        val = "; ".join(f"{p}@{{{','.join(map(str, sorted(ws)))}}}"
                        for p, ws in sorted(self.valuation.items()))
        return f"worlds={list(self.worlds)} R={{{rel}}} V={{{val}}}"


def _sides(goal) -> tuple:
    if isinstance(goal, Sequent):
        return tuple(formulas_of(goal.antecedent)), tuple(formulas_of(goal.succedent))
    return (), (goal,)


def sequent_formula(goal) -> Formula:
    """The formula ⋀Γ → ⋁Δ expressing a sequent at a single world."""
    ant, suc = _sides(goal)
    if not ant and len(suc) == 1:
        return suc[0]
    a = ant[0] if ant else TOP
    for f in ant[1:]:
        a = op("and", a, f)
    s = suc[0] if suc else BOT
    for f in suc[1:]:
        s = op("or", s, f)
    return op("imp", a, s)


# ---------------------------------------------------------------------------
# IPL: backward search

def ipl_decide(goal) -> bool:
    """Intuitionistic validity of a formula or (multi-succedent) sequent."""
    ant, suc = _sides(goal)
    for f in ant + suc:
        _check_ipl(f)
    return _IPLSearch().prove(frozenset(ant), frozenset(suc), frozenset())


def _check_ipl(f: Formula):
    if isinstance(f, Op):
        if f.name not in ("and", "or", "imp", "not", "top", "bot"):
            raise ValueError(f"not an IPL formula: operator {f.name!r}")
        for a in f.args:
            _check_ipl(a)


class _IPLSearch:
    def __init__(self):
        self.proved: set = set()

    def prove(self, gamma: frozenset, delta: frozenset, path: frozenset) -> bool:
        gamma, delta, branches = self._saturate(gamma, delta)
        if branches is not None:
            return all(self.prove(g, d, path) for g, d in branches)
        key = (gamma, delta)
        if key in self.proved:
            return True
        if gamma & delta or BOT in gamma or TOP in delta:
            self.proved.add(key)
            return True
        if key in path:
            return False
        path = path | {key}
        for f in sorted(delta, key=str):
            if f.name == "imp":
                prem = (gamma | {f.args[0]}, frozenset({f.args[1]}))
            elif f.name == "not":
                prem = (gamma | {f.args[0]}, frozenset())
            else:
                continue
            if self.prove(*prem, path):
                self.proved.add(key)
                return True
        return False

    @staticmethod
    def _saturate(gamma: frozenset, delta: frozenset):
        """Apply one invertible rule; returns premisses, or None when saturated.

        Principal formulas are kept, so both sides only grow and each rule
        fires only while it adds something new.
        """
        if gamma & delta or BOT in gamma or TOP in delta:
            return gamma, delta, None
        for f in gamma:
            if not isinstance(f, Op):
                continue
            if f.name == "and" and not set(f.args) <= gamma:
                return gamma, delta, [(gamma | set(f.args), delta)]
            if f.name == "or" and not set(f.args) & gamma:
                return gamma, delta, [(gamma | {f.args[0]}, delta), (gamma | {f.args[1]}, delta)]
            if f.name == "imp" and f.args[1] not in gamma and f.args[0] not in delta:
                return gamma, delta, [(gamma, delta | {f.args[0]}), (gamma | {f.args[1]}, delta)]
            if f.name == "not" and f.args[0] not in delta:
                return gamma, delta, [(gamma, delta | {f.args[0]})]
        for f in delta:
            if not isinstance(f, Op):
                continue
            if f.name == "and" and not set(f.args) & delta:
                return gamma, delta, [(gamma, delta | {f.args[0]}), (gamma, delta | {f.args[1]})]
            if f.name == "or" and not set(f.args) <= delta:
                return gamma, delta, [(gamma, delta | set(f.args))]
        return gamma, delta, None


# ---------------------------------------------------------------------------
# IPL: countermodel sweep over rooted preorders

def _preorders(n: int) -> list:
    """Rooted preorders on range(n) (root 0), one per isomorphism class.

    Each is returned as a tuple ``up`` of bitmasks: ``up[w]`` is the set of
    worlds above ``w``.
    """
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen, out = set(), []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = {(i, i) for i in range(n)} | {p for p, b in zip(pairs, bits) if b}
        if any((i, k) not in rel for (i, j) in rel for (j2, k) in rel if j == j2):
            continue
        if any((0, j) not in rel for j in range(n)):
            continue
        canon = min(
            tuple(sorted((perm[i], perm[j]) for i, j in rel))
            for perm in itertools.permutations(range(n)) if perm[0] == 0
        )
        if canon in seen:
            continue
        seen.add(canon)
        up = tuple(sum(1 << j for j in range(n) if (i, j) in rel) for i in range(n))
        out.append(up)
    return out


@lru_cache(maxsize=None)
def _ipl_models(n_atoms: int, max_worlds: int = 4):
    """All rooted persistent models as parallel numpy arrays."""
    frames = [up for n in range(1, max_worlds + 1) for up in _preorders(n)]
    ntab = 1 << max_worlds
    table = np.zeros((len(frames), ntab), dtype=np.int64)
    frame_idx, full_of, vals = [], [], []
    for fi, up in enumerate(frames):
        n = len(up)
        full = (1 << n) - 1
        for c in range(ntab):
            table[fi, c] = sum(1 << w for w in range(n) if up[w] & ~c & full == 0)
        upsets = [c for c in range(full + 1) if all(up[w] & ~c == 0 for w in range(n) if c >> w & 1)]
        for combo in itertools.product(upsets, repeat=n_atoms):
            frame_idx.append(fi)
            full_of.append(full)
            vals.append(combo)
    return (frames, table, np.array(frame_idx), np.array(full_of, dtype=np.int64),
            np.array(vals, dtype=np.int64).reshape(len(vals), n_atoms))


class _IPLSweep:
    def __init__(self, atom_names: tuple, max_worlds: int = 4):
        self.atoms = atom_names
        self.frames, self.table, self.fidx, self.full, self.vals = _ipl_models(len(atom_names), max_worlds)
        self.memo: dict = {}

    def truth(self, f: Formula) -> np.ndarray:
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            r = self.vals[:, self.atoms.index(f.name)]
        elif f.name == "top":
            r = self.full
        elif f.name == "bot":
            r = np.zeros_like(self.full)
        elif f.name == "and":
            r = self.truth(f.args[0]) & self.truth(f.args[1])
        elif f.name == "or":
            r = self.truth(f.args[0]) | self.truth(f.args[1])
        elif f.name in ("imp", "not"):
            a = self.truth(f.args[0])
            b = self.truth(f.args[1]) if f.name == "imp" else 0
            r = self.table[self.fidx, (~a | b) & self.full]
        else:
            raise ValueError(f"not an IPL formula: operator {f.name!r}")
        self.memo[f] = r
        return r


_SWEEPS: dict = {}


def _sweep_for(atom_names: tuple) -> _IPLSweep:
    if atom_names not in _SWEEPS:
        _SWEEPS[atom_names] = _IPLSweep(atom_names)
    return _SWEEPS[atom_names]


def _default_atoms(f: Formula) -> tuple:
    names = sorted(atoms_of(f))
    return tuple(names)


def ipl_sweep_valid(goal, atom_names: tuple | None = None) -> bool:
    f = sequent_formula(goal)
    sw = _sweep_for(atom_names or _default_atoms(f))
    t = sw.truth(f)
    return bool(np.all(t == sw.full))


def ipl_countermodel(goal) -> KripkeModel | None:
    """A rooted preorder model (≤ 4 worlds) refuting ``goal`` at its root."""
    f = sequent_formula(goal)
    names = _default_atoms(f)
    sw = _sweep_for(names)
    t = sw.truth(f)
    bad = np.nonzero((t & 1) == 0)[0]
    if len(bad) == 0:
        return None
    i = int(bad[0])
    up = sw.frames[int(sw.fidx[i])]
    n = len(up)
    rel = frozenset((w, v) for w in range(n) for v in range(n) if up[w] >> v & 1)
    val = {p: frozenset(w for w in range(n) if int(sw.vals[i, k]) >> w & 1) for k, p in enumerate(names)}
    return KripkeModel(tuple(range(n)), rel, val)


# ---------------------------------------------------------------------------
# K: type sweep

K_TYPE_BOUND = 100_000


class _KTypes:
    """Bisimulation types of height ≤ d over the given atoms.

    Level 0 types are valuations; a level h type is a valuation together
    with any set of level h-1 types for its successors.
    """

    def __init__(self, atom_names: tuple, depth: int):
        self.atoms = atom_names
        a = len(atom_names)
        nval = 1 << a
        self.levels = []   # per level: (val bitmask array, successor matrix or None)
        prev = None
        for h in range(depth + 1):
            if h == 0:
                vals = np.arange(nval, dtype=np.int64)
                self.levels.append((vals, None))
                prev = nval
                continue
            count = nval * (1 << prev)
            if prev > 62 or count > K_TYPE_BOUND:
                raise BoundExceeded(
                    f"K type sweep needs more than {K_TYPE_BOUND} types at height {h} "
                    f"({nval} valuations x 2^{prev} successor sets)")
            idx = np.arange(count, dtype=np.int64)
            vals = idx % nval
            succ = idx // nval
            mat = ((succ[:, None] >> np.arange(prev)[None, :]) & 1).astype(bool)
            self.levels.append((vals, mat))
            prev = count

    def truth(self, f: Formula, h: int, memo: dict) -> np.ndarray:
        key = (f, h)
        hit = memo.get(key)
        if hit is not None:
            return hit
        vals, mat = self.levels[h]
        if isinstance(f, Atom):
            r = (vals >> self.atoms.index(f.name) & 1).astype(bool)
        elif f.name == "top":
            r = np.ones(len(vals), dtype=bool)
        elif f.name == "bot":
            r = np.zeros(len(vals), dtype=bool)
        elif f.name == "not":
            r = ~self.truth(f.args[0], h, memo)
        elif f.name == "and":
            r = self.truth(f.args[0], h, memo) & self.truth(f.args[1], h, memo)
        elif f.name == "or":
            r = self.truth(f.args[0], h, memo) | self.truth(f.args[1], h, memo)
        elif f.name == "imp":
            r = ~self.truth(f.args[0], h, memo) | self.truth(f.args[1], h, memo)
        elif f.name in ("box", "dia"):
            m = self.truth(f.args[0], h - 1, memo)
            if f.name == "box":
                r = ~(mat & ~m[None, :]).any(axis=1)
            else:
                r = (mat & m[None, :]).any(axis=1)
        else:
            raise ValueError(f"not a modal formula: operator {f.name!r}")
        memo[key] = r
        return r


@lru_cache(maxsize=64)
def _k_types(atom_names: tuple, depth: int) -> _KTypes:
    return _KTypes(atom_names, depth)


def _k_truth(goal):
    f = sequent_formula(goal)
    names = tuple(sorted(atoms_of(f))) or ("p",)
    d = modal_depth(f)
    types = _k_types(names, d)
    return types, types.truth(f, d, {}), d


def k_decide(goal) -> bool:
    """Validity in K of a modal formula or of the sequent ⋀Γ → ⋁Δ."""
    _, t, _ = _k_truth(goal)
    return bool(t.all())


def k_countermodel(goal) -> KripkeModel | None:
    """Unravel a refuting type into a finite tree model."""
    types, t, d = _k_truth(goal)
    bad = np.nonzero(~t)[0]
    if len(bad) == 0:
        return None
    worlds, rel, val = [], set(), {p: set() for p in types.atoms}

    def build(idx: int, h: int) -> int:
        w = len(worlds)
        worlds.append(w)
        vals, mat = types.levels[h]
        for k, p in enumerate(types.atoms):
            if int(vals[idx]) >> k & 1:
                val[p].add(w)
        if mat is not None:
            for j in np.nonzero(mat[idx])[0]:
                rel.add((w, build(int(j), h - 1)))
        return w

    build(int(bad[0]), d)
    return KripkeModel(tuple(worlds), frozenset(rel), {p: frozenset(s) for p, s in val.items()})


# ---------------------------------------------------------------------------
# direct satisfaction

def model_check(m: KripkeModel, w, f: Formula, mode: str = "K") -> bool:
    if w not in m.worlds:
        raise ValueError(f"world {w!r} not in model")
    mode = mode.upper()
    if mode not in ("K", "IPL"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "IPL":
        _validate_ipl_model(m)

    def sat(x, g: Formula) -> bool:
        if isinstance(g, Atom):
            if g.name not in m.valuation:
                raise KeyError(f"atom {g.name!r} missing from valuation")
            return x in m.valuation[g.name]
        n = g.name
        if n == "top":
            return True
        if n == "bot":
            return False
        if n == "and":
            return sat(x, g.args[0]) and sat(x, g.args[1])
        if n == "or":
            return sat(x, g.args[0]) or sat(x, g.args[1])
        if mode == "IPL":
            if n == "imp":
                return all(not sat(u, g.args[0]) or sat(u, g.args[1]) for u in m.successors(x))
            if n == "not":
                return all(not sat(u, g.args[0]) for u in m.successors(x))
            raise ValueError(f"not an IPL formula: operator {n!r}")
        if n == "imp":
            return not sat(x, g.args[0]) or sat(x, g.args[1])
        if n == "not":
            return not sat(x, g.args[0])
        if n == "box":
            return all(sat(u, g.args[0]) for u in m.successors(x))
        if n == "dia":
            return any(sat(u, g.args[0]) for u in m.successors(x))
        raise ValueError(f"not a modal formula: operator {n!r}")

    return sat(w, f)


def _validate_ipl_model(m: KripkeModel):
    for w in m.worlds:
        if (w, w) not in m.relation:
            raise ValueError(f"IPL model must be reflexive (missing {w}R{w})")
    for p, ws in m.valuation.items():
        for a, b in m.relation:
            if a in ws and b not in ws:
                raise ValueError(f"valuation of {p!r} is not persistent along {a}R{b}")
