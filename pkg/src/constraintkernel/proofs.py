"""Proof trees and reductions shared by every calculus in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from . import boolalg as ba


@dataclass(frozen=True)
class ProofTree:
    """A node of a derivation.

    ``rule`` is None for an open leaf.  ``constraints`` holds side-condition
    leaves emitted by the rule (only used in reductions).
    """
    sequent: Any
    rule: str | None
    children: tuple = ()
    constraints: tuple = ()
    info: dict = field(default_factory=dict, compare=False, hash=False)

    def nodes(self) -> Iterator["ProofTree"]:
        yield self
        for c in self.children:
            yield from c.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def all_constraints(self) -> list:
        return [c for n in self.nodes() for c in n.constraints]

    def open_leaves(self) -> list:
        return [n for n in self.nodes() if n.rule is None]

    def rules(self) -> list:
        """Rule names in pre-order."""
        return [n.rule for n in self.nodes()]


Reduction = ProofTree


class OpenLeafError(ValueError):
    pass


def coherence(r: ProofTree) -> dict | None:
    """Solve the side-conditions of a complete reduction."""
    if r.open_leaves():
        raise OpenLeafError("reduction has open leaves")
    return ba.solve(r.all_constraints())


def render(t: ProofTree, show: Callable[[Any], str] = str, show_constraints: bool = False,
           indent: str = "") -> str:
    lines = []

    def walk(n: ProofTree, pre: str):
        rule = n.rule if n.rule is not None else "open"
        lines.append(f"{pre}{show(n.sequent)}   [{rule}]")
        if show_constraints:
            for c in n.constraints:
                lines.append(f"{pre}  {{{ba.show_constraint(c)}}}")
        for c in n.children:
            walk(c, pre + "  ")

    walk(t, indent)
    return "\n".join(lines)


def to_dict(t: ProofTree, show: Callable[[Any], str] = str) -> dict:
    return {
        "sequent": show(t.sequent),
        "rule": t.rule,
        "constraints": [ba.show_constraint(c) for c in t.constraints],
        "children": [to_dict(c, show) for c in t.children],
    }


def from_dict(d: dict, parse: Callable[[str], Any]) -> ProofTree:
    return ProofTree(
        parse(d["sequent"]),
        d["rule"],
        tuple(from_dict(c, parse) for c in d.get("children", [])),
        tuple(ba.parse_constraint(c) for c in d.get("constraints", [])),
    )


@dataclass
class CheckResult:
    ok: bool
    path: tuple = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_tree(t: ProofTree, check_node: Callable[[ProofTree], str | None]) -> CheckResult:
    """Run ``check_node`` everywhere; it returns None or a failure message."""
    def walk(n: ProofTree, path: tuple) -> CheckResult:
        if n.rule is None:
            return CheckResult(False, path, "open leaf")
        msg = check_node(n)
        if msg is not None:
            return CheckResult(False, path, f"{n.rule}: {msg}")
        for i, c in enumerate(n.children):
            r = walk(c, path + (i,))
            if not r:
                return r
        return CheckResult(True)

    return walk(t, ())
