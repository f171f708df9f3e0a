"""Command-line front end.

Exit codes: 0 success or provable, 1 not provable or unsatisfiable, 2 usage
or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from . import bi, blp, ipl, metafol, oracles
from . import boolalg as ba
from .proofs import ProofTree, render
from .syntax import (AUNIT, IPL, MODAL, ParseError, Sequent, leaf, parse_formula,
                     parse_sequent, show_sequent)

DOC_VERSION = "constraintkernel-proof/1"


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# proof documents

def _node(t: ProofTree, show, show_c) -> dict:
    return {
        "sequent": show(t.sequent),
        "rule": t.rule,
        "constraints": [show_c(c) for c in t.constraints],
        "children": [_node(c, show, show_c) for c in t.children],
    }


def _unnode(d: dict, parse) -> ProofTree:
    return ProofTree(parse(d["sequent"]), d["rule"],
                     tuple(_unnode(c, parse) for c in d.get("children", [])))


def proof_document(logic: str, calculus: str, goal: str, tree: ProofTree, show,
                   interpretation=None, timing=None, reduction=None, show_c=ba.show_constraint) -> dict:
    doc = {
        "version": DOC_VERSION,
        "logic": logic,
        "calculus": calculus,
        "goal": goal,
        "tree": _node(tree, show, show_c),
        "interpretation": interpretation or {},
        "timing": timing,
    }
    if reduction is not None:
        doc["reduction"] = _node(reduction, str, show_c)
    return doc


def _blp_show(s: blp.LBSeq) -> str:
    return json.dumps({"extra": [blp.show_clause(c) for c in s.program], "goal": blp.show_goal(s.goal)})


def _blp_parse(text: str) -> blp.LBSeq:
    d = json.loads(text)
    extra = blp.parse_program("".join(c + ".\n" for c in d["extra"])).clauses if d["extra"] else ()
    return blp.LBSeq(extra, blp.parse_goal(d["goal"]))


def check_document(doc: dict, program_text: str | None = None):
    """Re-load a proof document and run the matching checker."""
    if doc.get("version") != DOC_VERSION:
        raise InputError(f"unknown document version {doc.get('version')!r}")
    calc = doc["calculus"]
    if calc == "LBI":
        return bi.check_lbi_proof(_unnode(doc["tree"], parse_sequent))
    if calc == "LJ+":
        return ipl.check_ljplus_proof(_unnode(doc["tree"], parse_sequent))
    if calc == "LB":
        if program_text is None:
            raise InputError("checking an LB proof needs the program")
        return blp.check_lb_proof(blp.parse_program(program_text), _unnode(doc["tree"], _blp_parse))
    labelled = _labelled_calculus(calc, doc["logic"])
    return metafol.check_labelled_proof(labelled, _unnode(doc["tree"], metafol.parse_labelled))


# ---------------------------------------------------------------------------
# prove

def _labelled_calculus(name: str, logic: str) -> metafol.LabelledCalculus:
    if name in ("rk", "rj", "rjplus"):
        return metafol.builtin_calculus(name)
    if name == "generated":
        theory = metafol.load_theory("k" if logic == "k" else "ipl")
        return metafol.generate_relational_calculus(theory, simplify=True)
    try:
        rules = metafol.load_rules(name)
    except (OSError, ValueError) as e:
        raise InputError(f"cannot load calculus {name!r}: {e}") from e
    return metafol.LabelledCalculus(name, rules)


def _labelled_goal(text: str, logic: str) -> metafol.LSeq:
    if ":" in text:
        return metafol.parse_labelled(text)
    # an unlabelled object sequent is placed at a single world x
    s = parse_sequent(text, MODAL if logic == "k" else IPL)
    items = []
    for side in (s.antecedent, s.succedent):
        items.append([] if side == AUNIT else [metafol.Sat("x", metafol._bunch_obj(side))])
    return metafol.LSeq.of(items[0], items[1])


def _emit(args, doc: dict, text_lines: list):
    if args.emit == "json":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print("\n".join(text_lines))
    if args.check:
        res = check_document(json.loads(json.dumps(doc)))
        print(f"check: {'ok' if res.ok else 'FAILED at ' + str(res.path) + ': ' + res.message}",
              file=sys.stderr)
        if not res.ok:
            return 1
    return 0


def cmd_prove(args) -> int:
    t0 = time.perf_counter()
    if args.calc or args.logic == "k":
        calc = _labelled_calculus(args.calc or "rk", args.logic)
        goal = _labelled_goal(args.goal, args.logic)
        tree = metafol.prove_labelled(calc, goal, depth=args.depth)
        if tree is None:
            print("not provable")
            return 1
        # record how to rebuild the calculus, not its internal name
        doc = proof_document(args.logic, args.calc or "rk", args.goal, tree, metafol.show_lseq,
                             timing=time.perf_counter() - t0)
        return _emit(args, doc, [render(tree, metafol.show_lseq)])

    alphabet = IPL if args.logic == "ipl" else None
    goal = parse_sequent(args.goal, alphabet) if alphabet else parse_sequent(args.goal)
    if args.logic == "bi":
        res, name = bi.prove_bi(goal, depth=args.depth), "LBI"
    else:
        res, name = ipl.prove_ipl(goal, depth=args.depth), "LJ+"
    if res is None:
        print("not provable")
        return 1
    elapsed = time.perf_counter() - t0
    doc = proof_document(args.logic, name, args.goal, res.proof, show_sequent,
                         res.interpretation, elapsed, res.reduction)
    if args.emit == "ljplus":
        if args.logic != "ipl":
            raise InputError("--emit ljplus needs --logic ipl")
        return _emit(args, doc, [render(res.proof, show_sequent)])
    lines = ["reduction:", render(res.reduction, str, args.show_constraints),
             "interpretation: " + ", ".join(f"{k}={v}" for k, v in res.interpretation.items()),
             "proof:", render(res.proof, show_sequent)]
    return _emit(args, doc, lines)


# ---------------------------------------------------------------------------
# oracle

def cmd_oracle(args) -> int:
    alphabet = MODAL if args.logic == "k" else IPL
    text = args.goal
    goal = parse_sequent(text, alphabet) if "|-" in text else Sequent(AUNIT, leaf(parse_formula(text, alphabet)))
    if args.logic == "ipl":
        valid = oracles.ipl_decide(goal)
        cm = None if valid else oracles.ipl_countermodel(goal)
    else:
        valid = oracles.k_decide(goal)
        cm = None if valid else oracles.k_countermodel(goal)
    print("valid" if valid else "invalid")
    if cm is not None:
        print(f"countermodel: {cm.describe()}")
    return 0 if valid else 1


# ---------------------------------------------------------------------------
# gen-calc

def cmd_gen_calc(args) -> int:
    if args.calc:
        calc = _labelled_calculus(args.calc, "ipl")
    else:
        try:
            theory = metafol.load_theory(args.theory)
        except OSError as e:
            raise InputError(f"cannot read theory {args.theory!r}: {e}") from e
        calc = metafol.generate_relational_calculus(theory, simplify=args.simplify)
    if args.emit == "ljplus":
        for r in metafol.propositional_encoding(calc):
            print(metafol.show_object_rule(r))
    elif args.emit == "json":
        print(json.dumps({"calculus": calc.name, "simplified": calc.simplified,
                          "rules": [{"name": r.name, "text": metafol.show_rule(r),
                                     "sexp": metafol.rule_to_sexp(r)} for r in calc.rules]},
                         indent=2, ensure_ascii=False))
    elif args.emit == "tree":
        for r in calc.rules:
            print(metafol.show_rule(r))
    else:
        print("\n".join(metafol.rule_to_sexp(r) for r in calc.rules))
    return 0


# ---------------------------------------------------------------------------
# blp

def cmd_blp(args) -> int:
    try:
        with open(args.program) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read program: {e}") from e
    program = blp.parse_program(text)
    goal = blp.parse_goal(args.goal)
    t0 = time.perf_counter()
    answers = blp.run_blp(program, goal, depth=args.depth)
    elapsed = time.perf_counter() - t0
    if not answers:
        print("no")
        return 1
    if not args.all:
        answers = answers[:1]
    for sub, tree in answers:
        if args.emit == "json":
            doc = proof_document("blp", "LB", args.goal, tree, _blp_show,
                                 {v.name: blp.show_term(t) for v, t in sub.mapping}, elapsed)
            print(json.dumps(doc, ensure_ascii=False))
            if args.check:
                res = check_document(json.loads(json.dumps(doc)), text)
                if not res.ok:
                    print(f"check: FAILED at {res.path}: {res.message}", file=sys.stderr)
                    return 1
        else:
            print(str(sub) if sub.mapping else "yes")
            if args.emit in ("tree", "proof"):
                print(render(tree, str))
    print(f"answers: {len(answers)}; candidate space: {blp.candidate_space(program, goal)}; "
          f"{elapsed:.3f}s", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# solve

def cmd_solve(args) -> int:
    cs = [ba.parse_constraint(c) for c in args.constraints]
    variables = sorted(set().union(*(ba.constraint_vars(c) for c in cs)), key=ba.natural_key)
    if args.all:
        sols = ba.all_solutions(cs, variables)
        for s in sols:
            print(", ".join(f"{k}={s[k]}" for k in variables))
        if not sols:
            print("unsat")
        return 0 if sols else 1
    s = ba.solve(cs)
    if s is None:
        print("unsat")
        return 1
    full = {v: s.get(v, 0) for v in variables}
    print(", ".join(f"{k}={v}" for k, v in full.items()))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="constraintkernel", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--jobs", type=int, default=1, help="accepted for compatibility; search is sequential")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("prove", help="search for a proof")
    pr.add_argument("goal")
    pr.add_argument("--logic", choices=("bi", "ipl", "k"), default="bi")
    pr.add_argument("--calc", help="labelled calculus: rk, rj, rjplus, generated or a .rules file")
    pr.add_argument("--depth", type=int, default=6)
    pr.add_argument("--emit", choices=("tree", "json", "ljplus"), default="tree")
    pr.add_argument("--show-constraints", action="store_true")
    pr.add_argument("--check", action="store_true", help="re-load the emitted document and check it")
    pr.set_defaults(func=cmd_prove)

    orc = sub.add_parser("oracle", help="decide validity semantically")
    orc.add_argument("goal")
    orc.add_argument("--logic", choices=("ipl", "k"), default="ipl")
    orc.set_defaults(func=cmd_oracle)

    gc = sub.add_parser("gen-calc", help="generate a labelled calculus from a theory")
    gc.add_argument("--theory", default="k", help="bundled theory name (k, ipl) or a .thy path")
    gc.add_argument("--calc", help="print a built-in calculus instead")
    gc.add_argument("--simplify", action="store_true")
    gc.add_argument("--emit", choices=("rules", "json", "tree", "ljplus"), default="rules")
    gc.set_defaults(func=cmd_gen_calc)

    bp = sub.add_parser("blp", help="run a logic program query")
    bp.add_argument("--program", required=True)
    bp.add_argument("--goal", required=True)
    bp.add_argument("--all", action="store_true")
    bp.add_argument("--depth", type=int, default=8)
    bp.add_argument("--emit", choices=("answers", "tree", "proof", "json"), default="answers")
    bp.add_argument("--check", action="store_true")
    bp.set_defaults(func=cmd_blp)

    so = sub.add_parser("solve", help="solve Boolean constraints")
    so.add_argument("constraints", nargs="+")
    so.add_argument("--all", action="store_true")
    so.set_defaults(func=cmd_solve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, blp.BLPSyntaxError, metafol.NotTractable, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
