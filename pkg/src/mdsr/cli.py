"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 validation, 3 guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .core import Instance, MasterPoset, Matching
from .errors import MdsrError, TooLarge, ValidationError
from .io import (
    parse_instance,
    parse_matching,
    serialize_instance,
    serialize_matching,
)
from .poset import verify_lpo
from .reductions import (
    instable_instance,
    parse_formula,
    sat_backward_assignment,
    sat_forward_matching,
    sat_reduce,
)
from .smti import (
    SmtiInstance,
    cutoff_gadget_instance,
    smti_backward,
    smti_forward,
    smti_reduce,
    tie_gadget_instance,
)
from .solvers import (
    default_window,
    fpt_dp_solve,
    greedy_big_d_solve,
    group_span_bound,
    locality_bound,
    strict_order_solve,
)
from .stability import brute_force_solve, find_blocking

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_GUARD = 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _write(path: Optional[str], text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _emit(args, out, human: str, payload: dict) -> None:
    if args.json:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(human + "\n")


def _cmd_solve(args, out) -> int:
    instance = parse_instance(_read(args.input))
    algo = args.algo
    matching: Optional[Matching] = None
    verdict = "UNKNOWN"
    validated = False
    if algo == "auto":
        src = instance.source
        if isinstance(src, MasterPoset) and instance.is_complete:
            kappa = src.poset.kappa()
            if kappa == 0:
                algo = "strict"
            elif 4 * kappa * 2 ** (4 * kappa) <= instance.d:
                algo = "greedy"
            else:
                algo = "dp"
        else:
            algo = "brute"
    if algo == "strict":
        matching = strict_order_solve(instance)
        verdict = "STABLE"
        validated = True  # unique by construction
    elif algo == "greedy":
        result = greedy_big_d_solve(instance)
        matching = result.matching
        # The step certificates prove existence; a full blocking scan is
        # infeasible at scale, so the witness is reported unvalidated.
        verdict = "UNSTABLE-EXISTS"
        try:
            validated = find_blocking(instance, matching, guard=10**6) is None
            if validated:
                verdict = "STABLE"
        except TooLarge:
            pass
    elif algo == "dp":
        matching = fpt_dp_solve(
            instance,
            window_size=args.window_size,
            span=args.span,
            window_cap=args.window_cap,
        )
        verdict = "STABLE" if matching is not None else "NO-STABLE"
        validated = matching is not None
    elif algo == "brute":
        matching = brute_force_solve(instance, max_n=args.max_n)
        verdict = "STABLE" if matching is not None else "NO-STABLE"
        validated = matching is not None
    groups = (
        sorted(sorted(instance.group_names(g)) for g in matching)
        if matching is not None
        else None
    )
    _emit(
        args,
        out,
        verdict,
        {"verdict": verdict, "algo": algo, "groups": groups, "validated": validated},
    )
    if args.witness and matching is not None:
        _write(args.witness, serialize_matching(instance, matching), out)
    return EXIT_OK


def _cmd_check(args, out) -> int:
    instance = parse_instance(_read(args.instance))
    matching = parse_matching(_read(args.matching), instance)
    report = find_blocking(instance, matching, guard=args.guard)
    if report is None:
        _emit(args, out, "STABLE", {"verdict": "STABLE", "blocking": None})
    else:
        blocking = sorted(instance.group_names(report.group))
        _emit(
            args,
            out,
            "UNSTABLE: blocking {%s}" % ",".join(blocking),
            {"verdict": "UNSTABLE", "blocking": blocking},
        )
    return EXIT_OK


def _cmd_stats(args, out) -> int:
    instance = parse_instance(_read(args.instance))
    info: dict = {"n": instance.n, "d": instance.d}
    src = instance.source
    if isinstance(src, MasterPoset):
        poset = src.poset
        kappa = poset.kappa()
        info["kappa"] = kappa
        info["width"] = poset.width()
        info["locality_bound"] = locality_bound(kappa, instance.d)
        info["window"] = default_window(kappa, instance.d)
        if kappa == 0 and instance.is_complete:
            info["algo"] = "strict"
        elif 4 * kappa * 2 ** (4 * kappa) <= instance.d and instance.is_complete:
            info["algo"] = "greedy"
        else:
            info["algo"] = "dp"
        info["lpo_verified"] = verify_lpo(instance.lpo().order, poset)
    else:
        info["algo"] = "brute"
    if args.lambda_budget is not None:
        from .distance import deletion_distance

        dist, deleted, _ = deletion_distance(instance, args.lambda_budget)
        info["lambda"] = dist
        info["deleted"] = [instance.names[a] for a in deleted]
    if args.json:
        out.write(json.dumps(info, sort_keys=True) + "\n")
    else:
        for key in sorted(info):
            out.write(f"{key}={info[key]}\n")
    return EXIT_OK


def _cmd_gen(args, out) -> int:
    if args.kind == "instable":
        instance = instable_instance()
    elif args.kind == "cutoff":
        instance = cutoff_gadget_instance(drop=("A",) if args.drop_a else ())
    else:
        drop = ()
        if args.drop_a:
            drop = ("A",)
        elif args.drop_b:
            drop = ("B", "B1")
        instance = tie_gadget_instance(drop=drop)
    _write(args.output, serialize_instance(instance), out)
    return EXIT_OK


def _cmd_reduce_sat(args, out) -> int:
    formula = parse_formula(_read(args.formula))
    reduction = sat_reduce(formula)
    if args.assignment is not None:
        true_vars = [int(x) for x in args.assignment.split(",") if x]
        matching = sat_forward_matching(reduction, true_vars)
        if args.emit_matching:
            _write(args.output, serialize_matching(reduction.instance, matching), out)
            return EXIT_OK
    if args.extract is not None:
        matching = parse_matching(_read(args.extract), reduction.instance)
        true_vars = sat_backward_assignment(reduction, matching)
        out.write(",".join(str(v) for v in sorted(true_vars)) + "\n")
        return EXIT_OK
    _write(args.output, serialize_instance(reduction.instance), out)
    return EXIT_OK


def parse_smti_document(text: str) -> SmtiInstance:
    """JSON schema: {"version":"1","n":int,"tie_starts":[1-based j where
    w_j is tied with w_{j+1}],"acceptable":[[man,woman] 1-based]}."""
    from .errors import ParseError

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("version") != "1":
        raise ParseError("marriage document must be an object with version '1'")
    try:
        return SmtiInstance(
            doc["n"],
            frozenset(j - 1 for j in doc.get("tie_starts", [])),
            frozenset((i - 1, j - 1) for i, j in doc["acceptable"]),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed marriage document: {exc}") from None


def _cmd_reduce_smti(args, out) -> int:
    smti = parse_smti_document(_read(args.input))
    reduction = smti_reduce(smti)
    if args.matching is not None:
        pairs = json.loads(_read(args.matching))
        marriage = {i - 1: j - 1 for i, j in pairs}
        matching = smti_forward(reduction, marriage)
        if args.emit_matching:
            _write(args.output, serialize_matching(reduction.instance, matching), out)
            return EXIT_OK
    if args.extract is not None:
        matching = parse_matching(_read(args.extract), reduction.instance)
        marriage = smti_backward(reduction, matching)
        out.write(
            json.dumps([[i + 1, j + 1] for i, j in sorted(marriage.items())]) + "\n"
        )
        return EXIT_OK
    _write(args.output, serialize_instance(reduction.instance), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdsr", description="Stable roommates in groups with master lists"
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find a stable matching")
    p.add_argument("--input", required=True)
    p.add_argument(
        "--algo",
        choices=["auto", "brute", "strict", "dp", "greedy"],
        default="auto",
    )
    p.add_argument("--witness", help="write the matching document here")
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--window-size", type=int)
    p.add_argument("--span", type=int)
    p.add_argument("--window-cap", type=int, default=18)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("check", help="check a matching for stability")
    p.add_argument("--instance", required=True)
    p.add_argument("--matching", required=True)
    p.add_argument("--guard", type=int, default=10**8)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("stats", help="print instance parameters")
    p.add_argument("--instance", required=True)
    p.add_argument("--lambda-budget", type=int)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("gen", help="emit a built-in instance")
    p.add_argument("kind", choices=["instable", "cutoff", "tie"])
    p.add_argument("--drop-a", action="store_true")
    p.add_argument("--drop-b", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("reduce", help="run a reduction")
    red = p.add_subparsers(dest="reduction", required=True)

    q = red.add_parser("sat", help="one-in-three satisfiability")
    q.add_argument("--formula", required=True)
    q.add_argument("--assignment", help="comma-separated true variables")
    q.add_argument("--emit-matching", action="store_true")
    q.add_argument("--extract", help="matching document to convert back")
    q.add_argument("--output")
    q.set_defaults(func=_cmd_reduce_sat)

    q = red.add_parser("smti", help="marriage with ties")
    q.add_argument("--input", required=True)
    q.add_argument("--matching", help="JSON list of 1-based [man, woman] pairs")
    q.add_argument("--emit-matching", action="store_true")
    q.add_argument("--extract", help="matching document to convert back")
    q.add_argument("--output")
    q.set_defaults(func=_cmd_reduce_smti)

    return parser


def run(argv, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValidationError, MdsrError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))
