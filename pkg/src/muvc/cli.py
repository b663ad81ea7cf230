"""Command-line front end.

Reports are ``key: value`` lines (or one JSON object with ``--json``).  Vertex
ids in reports are 1-based, matching the input files.  Exit status is 0 on
success, 2 when no solution fits the budget ``--k``, and 1 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections.abc import Sequence
from pathlib import Path

from . import cliquewidth as cw
from . import generators as gen
from .graph import Graph, GraphError, format_graph, induced_delete, is_unique_min_vc, min_vc_size, parse_graph
from .oracle import InfeasibleError, solve_muvc_bruteforce, solve_pauvc_bruteforce
from .tree import solve_muvc_tree
from .treewidth import EXACT, TRUNCATED, format_td, parse_td, solve_muvc_tw

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2
TIE_BREAK = "keep-before-delete, then lowest characteristic"


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None


def _load_graph(path: str) -> Graph:
    try:
        return parse_graph(_read(path), source=path)
    except GraphError as exc:
        raise InputError(str(exc)) from None


def _ids(vs) -> list[int]:
    return sorted(int(v) + 1 for v in vs)


def _unique_cover(g: Graph, s) -> tuple[bool, list[int]]:
    h, kept = induced_delete(g, s)
    unique, cover = is_unique_min_vc(h)
    return unique, _ids(kept[v] for v in cover)


def _emit(report: dict, as_json: bool, out) -> None:
    if as_json:
        print(json.dumps(report, sort_keys=False), file=out)
        return
    for key, value in report.items():
        if isinstance(value, list):
            value = " ".join(str(v) for v in value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        print(f"{key}: {value}", file=out)


def _solve_report(args, solver: str, instance: str, g: Graph, opt: int, witness, elapsed: float) -> dict:
    report = {
        "solver": solver,
        "instance": instance,
        "seed": args.seed,
        "tie_break": TIE_BREAK,
        "opt": opt,
        "delete": _ids(witness),
        "time_s": round(elapsed, 6),
    }
    if args.verify:
        unique, cover = _unique_cover(g, witness)
        report["cover"] = cover
        report["verified"] = "ok" if unique and len(witness) == opt else "FAILED"
    return report


def _budget_check(args, opt: int) -> bool:
    return args.k is None or opt <= args.k


def cmd_solve_tree(args, out) -> int:
    g = _load_graph(args.graph)
    start = time.perf_counter()
    try:
        opt, witness = solve_muvc_tree(g)
    except GraphError as exc:
        raise InputError(f"{args.graph}: {exc}") from None
    return _finish(args, out, "tree", g, opt, witness, time.perf_counter() - start)


def cmd_solve_tw(args, out) -> int:
    g = _load_graph(args.graph)
    td = None
    if args.td:
        try:
            td = parse_td(_read(args.td), source=args.td)
        except GraphError as exc:
            raise InputError(str(exc)) from None
    mode = TRUNCATED if args.truncate_degree else EXACT
    start = time.perf_counter()
    try:
        opt, witness = solve_muvc_tw(g, td, mode)
    except GraphError as exc:
        source = args.td or args.graph
        raise InputError(f"{source}: {exc}") from None
    return _finish(args, out, f"tw-{mode}", g, opt, witness, time.perf_counter() - start)


def cmd_solve_cw(args, out) -> int:
    if args.expr:
        try:
            e = cw.parse_cw_expression(_read(args.expr))
        except GraphError as exc:
            raise InputError(f"{args.expr}: {exc}") from None
        labeled = cw.eval_cw_expression(e)
        if args.graph:
            g = _load_graph(args.graph)
            if g != labeled.graph:
                raise InputError(f"{args.expr}: expression does not evaluate to {args.graph}")
        g = labeled.graph
    elif args.graph:
        g = _load_graph(args.graph)
        try:
            e = cw.tree_expression(g)
        except GraphError as exc:
            raise InputError(f"{args.graph}: no expression given and graph is not a forest ({exc})") from None
    else:
        raise InputError("solve-cw needs --expr or a graph file")
    start = time.perf_counter()
    if args.fpt:
        if args.k is None:
            raise InputError("--fpt requires --k")
        result = cw.solve_muvc_cw_fpt(e, args.k)
        if result is None:
            _emit({"solver": "cw-fpt", "result": f"infeasible within k={args.k}"}, args.json, out)
            return EXIT_INFEASIBLE
        opt, witness = result
        name = "cw-fpt"
    else:
        opt, witness = cw.solve_muvc_cw(e)
        name = "cw-xp"
    return _finish(args, out, name, g, opt, witness, time.perf_counter() - start, instance=args.expr or args.graph)


def _finish(args, out, solver, g, opt, witness, elapsed, instance=None) -> int:
    if not _budget_check(args, opt):
        _emit({"solver": solver, "result": f"infeasible within k={args.k}"}, args.json, out)
        return EXIT_INFEASIBLE
    report = _solve_report(args, solver, instance or args.graph, g, opt, witness, elapsed)
    _emit(report, args.json, out)
    if args.verify and report["verified"] != "ok":
        print("error: verification failed", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    g = _load_graph(args.graph)
    try:
        res = solve_muvc_bruteforce(g, args.k)
    except InfeasibleError:
        _emit({"solver": "oracle", "result": f"infeasible within k={args.k}"}, args.json, out)
        return EXIT_INFEASIBLE
    _emit(
        {"solver": "oracle", "instance": args.graph, "opt": res.opt, "delete": _ids(res.witness), "cover": _ids(res.unique_cover)},
        args.json,
        out,
    )
    return EXIT_OK


def cmd_pauvc(args, out) -> int:
    g = _load_graph(args.graph)
    _emit({"solver": "pauvc-oracle", "instance": args.graph, "opt": solve_pauvc_bruteforce(g)}, args.json, out)
    return EXIT_OK


def _parse_ids(text: str, n: int) -> list[int]:
    if not text:
        return []
    try:
        ids = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"--delete expects comma-separated vertex ids, got {text!r}") from None
    for v in ids:
        if not 1 <= v <= n:
            raise InputError(f"--delete: vertex {v} out of range 1..{n}")
    return [v - 1 for v in ids]


def cmd_verify(args, out) -> int:
    g = _load_graph(args.graph)
    s = _parse_ids(args.delete, g.n)
    unique, cover = _unique_cover(g, s)
    _emit({"unique": unique, "cover": cover, "cover_size": len(cover), "mvc_original": min_vc_size(g)}, args.json, out)
    return EXIT_OK


def _write(text: str, path: str | None, out) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def cmd_gen_gk(args, out) -> int:
    if args.k < 3:
        raise InputError("gen-gk needs k >= 3")
    _write(format_graph(gen.gen_gk(args.k), [f"G_k separation tree, k={args.k}"]), args.output, out)
    return EXIT_OK


def cmd_gen_hardness(args, out) -> int:
    try:
        f = gen.parse_formula(_read(args.formula))
        inst = gen.gen_hardness_instance(f)
    except gen.FormulaError as exc:
        raise InputError(f"{args.formula}: {exc}") from None
    _write(format_graph(inst.graph, [f"gadget graph for {args.formula}"]), args.output, out)
    roles = "".join(f"{v + 1} {tag}\n" for v, tag in enumerate(inst.roles))
    if args.output:
        Path(args.output).with_suffix(".roles").write_text(roles, encoding="utf-8")
    elif args.roles:
        Path(args.roles).write_text(roles, encoding="utf-8")
    return EXIT_OK


def cmd_gen_random(args, out) -> int:
    if args.n < 1:
        raise InputError(f"gen-random needs n >= 1, got {args.n}")
    if not 0.0 <= args.p <= 1.0:
        raise InputError(f"--p must lie in [0, 1], got {args.p}")
    if args.kind == "tree":
        g = gen.gen_random_tree(args.n, args.seed)
    elif args.kind == "graph":
        g = gen.gen_random_graph(args.n, args.p, args.seed)
    elif args.kind == "ktree":
        g, td = gen.gen_partial_ktree(args.n, args.width, args.seed, keep=args.p)
        if args.td_output:
            Path(args.td_output).write_text(format_td(td, g.n), encoding="utf-8")
    else:
        cot = gen.gen_random_cotree(args.n, args.seed)
        _write(cw.format_cw_expression(cw.cograph_expression(cot)) + "\n", args.output, out)
        return EXIT_OK
    _write(format_graph(g, [f"random {args.kind}, n={args.n}, seed={args.seed}"]), args.output, out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    rows = []
    prev = None
    for n in args.sizes:
        g = Graph(n, [(i, i + 1) for i in range(n - 1)])
        start = time.perf_counter()
        opt, _ = solve_muvc_tree(g)
        t = time.perf_counter() - start
        rows.append({"n": n, "opt": opt, "time_s": round(t, 4), "ratio": round(t / prev, 3) if prev else None})
        prev = t
    if args.json:
        print(json.dumps({"bench": "path-scaling", "rows": rows}), file=out)
    else:
        for r in rows:
            print(f"n: {r['n']}  opt: {r['opt']}  time_s: {r['time_s']}  ratio: {r['ratio']}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="muvc", description="Exact solvers for deletion to a unique minimum vertex cover.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON object instead of key: value lines")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised commands")
    common.add_argument("--threads", type=int, default=1, help="accepted for reproducibility; solvers are single-threaded")
    solve = argparse.ArgumentParser(add_help=False, parents=[common])
    solve.add_argument("--k", type=int, default=None, help="budget; exit 2 when the optimum exceeds it")
    solve.add_argument("--verify", action="store_true", help="re-check that the deletion set leaves a unique cover")

    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve-tree", parents=[solve], help="linear-time forest solver")
    s.add_argument("graph")
    s.set_defaults(func=cmd_solve_tree)

    s = sub.add_parser("solve-tw", parents=[solve], help="tree-decomposition solver")
    s.add_argument("graph")
    s.add_argument("--td", help="decomposition in .td format (forests get one automatically)")
    s.add_argument("--truncate-degree", action="store_true", help="prune characteristics by the degree bound")
    s.set_defaults(func=cmd_solve_tw)

    s = sub.add_parser("solve-cw", parents=[solve], help="clique-width expression solver")
    s.add_argument("graph", nargs="?", help="graph file (built into an expression when it is a forest)")
    s.add_argument("--expr", help="clique-width expression file")
    s.add_argument("--fpt", action="store_true", help="budgeted solver, needs --k")
    s.set_defaults(func=cmd_solve_cw)

    s = sub.add_parser("oracle", parents=[solve], help="exhaustive MU-VC")
    s.add_argument("graph")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("pauvc-oracle", parents=[common], help="exhaustive partial-assignment variant")
    s.add_argument("graph")
    s.set_defaults(func=cmd_pauvc)

    s = sub.add_parser("verify", parents=[common], help="check a deletion set")
    s.add_argument("graph")
    s.add_argument("--delete", default="", help="comma-separated 1-based vertex ids")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen-gk", parents=[common], help="separation tree G_k")
    s.add_argument("k", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen_gk)

    s = sub.add_parser("gen-hardness", parents=[common], help="gadget graph from a typed 3-CNF formula")
    s.add_argument("formula")
    s.add_argument("-o", "--output", help="graph file; roles go next to it with suffix .roles")
    s.add_argument("--roles", help="roles file when the graph goes to stdout")
    s.set_defaults(func=cmd_gen_hardness)

    s = sub.add_parser("gen-random", parents=[common], help="seeded random instances")
    s.add_argument("kind", choices=["tree", "graph", "ktree", "cotree"])
    s.add_argument("n", type=int)
    s.add_argument("--p", type=float, default=0.5, help="edge probability (graph) or edge keep rate (ktree)")
    s.add_argument("--width", type=int, default=2, help="k for ktree")
    s.add_argument("--td-output", help="where to write the ktree decomposition")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen_random)

    s = sub.add_parser("bench", parents=[common], help="path scaling experiment for the forest solver")
    s.add_argument("--sizes", type=int, nargs="+", default=[250_000, 500_000, 1_000_000])
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
