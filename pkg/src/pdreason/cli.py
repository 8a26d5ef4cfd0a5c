"""Command-line interface: ``pd <verb> ...``.

Machine-readable output (JSON by default) goes to stdout, a human-readable
table to stderr.  Exit status is 0 on success, 1 for usage, I/O or parse
errors and 2 when the input is semantically infeasible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bench as benchmod
from .constraints import build_system
from .model import WorldCapError, check_consistency_by_substitution, entropy_bits, marginal
from .parser import ParseError, parse_aa, parse_pd, serialize_pd
from .reasoner import (
    UnsatisfiableError,
    aa_to_pd,
    analyze,
    label_aa,
    literal_bounds,
    solve_framework,
    solve_relaxed,
)
from .solvers import SolverConfig, is_feasible, solve_sgd, solve_max_linear_entropy

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(doc: dict, out: str = "json", csv_rows: Optional[list[list]] = None) -> None:
    if out == "csv" and csv_rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
    sys.stdout.flush()


def _table(title: str, rows: Sequence[Sequence]) -> None:
    print(title, file=sys.stderr)
    for row in rows:
        print("  " + "  ".join(str(c) for c in row), file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _config(args) -> SolverConfig:
    kw = {"seed": args.seed}
    if args.tol is not None:
        kw["tol"] = args.tol
    if getattr(args, "max_epochs", None):
        kw["max_epochs"] = args.max_epochs
    return SolverConfig(**kw)


def _load_pd(path: str):
    text = _read(path)
    if path.endswith(".aaf"):
        return aa_to_pd(parse_aa(text))
    return parse_pd(text)


def _fmt(p: Optional[float]) -> str:
    return "-" if p is None else f"{p:.4f}"


# -- verbs ------------------------------------------------------------------


def cmd_check(args) -> int:
    framework = _load_pd(args.file)
    system = build_system(framework, args.mode)
    if args.dump_system:
        system.dump_csv(args.dump_system)
    solver = args.solver or "lp"
    config = _config(args)
    if solver == "lp":
        ok = is_feasible(system)
        res = solve_framework(framework, args.mode, "none", "lp", config, check=False)
    elif solver == "sgd":
        res = solve_sgd(system, config)
        ok = res.converged
    else:
        res = solve_max_linear_entropy(system, config, "direct")
        ok = res.converged
    report = check_consistency_by_substitution(framework, res.dist, tol=max(config.tol, 1e-6))
    kind = None
    if not ok:
        kind = "pcwa" if args.mode == "pcwa" and is_feasible(build_system(framework, "owa")) else "rule-psat"
    doc = {
        "file": args.file,
        "mode": args.mode,
        "solver": solver,
        "satisfiable": ok,
        "failure": kind,
        "residual": res.residual,
        "substitution": report.to_dict(),
    }
    _emit(doc)
    _table(f"{args.file}: {'satisfiable' if ok else 'unsatisfiable'} under {args.mode}", [("residual", f"{res.residual:.3g}")])
    return EXIT_OK if ok else EXIT_INFEASIBLE


def _solve(framework, args):
    if getattr(args, "relax", False):
        return solve_relaxed(framework, args.mode)
    return solve_framework(framework, args.mode, args.entropy, args.solver or "direct", _config(args))


def cmd_solve(args) -> int:
    framework = _load_pd(args.file)
    if args.dump_system:
        build_system(framework, args.mode).dump_csv(args.dump_system)
    res = _solve(framework, args)
    n = framework.n
    worlds = [format(w, f"0{n}b") if n else "" for w in range(1 << n)]
    probs = [float(p) for p in res.dist.probs]
    doc = {
        "atoms": [a.name for a in framework.atoms],
        "mode": args.mode,
        "entropy": "l1" if args.relax else args.entropy,
        "solver": res.dist.mode.backend,
        "converged": res.converged,
        "status": res.status,
        "epochs": res.epochs_used,
        "residual": res.residual,
        "entropy_bits": entropy_bits(res.dist.probs),
        "objective": res.objective,
        "worlds": [{"world": w, "probability": p} for w, p in zip(worlds, probs)],
    }
    _emit(doc, args.out, [["world", "probability"]] + [[w, repr(p)] for w, p in zip(worlds, probs)])
    _table(f"joint distribution ({res.dist.mode}, residual {res.residual:.3g})", [(w, f"{p:.4f}") for w, p in zip(worlds, probs)])
    return EXIT_OK


def cmd_query(args) -> int:
    framework = _load_pd(args.file)
    if args.dump_system:
        build_system(framework, args.mode).dump_csv(args.dump_system)
    if args.literal:
        lit = framework.literal(args.literal)
        res = _solve(framework, args)
        p = marginal(res.dist, [lit])
        doc = {"literal": str(lit), "probability": p, "mode": args.mode, "residual": res.residual,
               "no_deduction": not framework.rules_for(lit)}
        row = [str(lit), repr(p)]
        if args.bounds:
            lo, hi = literal_bounds(framework, lit, args.mode)
            doc["bounds"] = [lo, hi]
            row += [repr(lo), repr(hi)]
        header = ["literal", "probability"] + (["min", "max"] if args.bounds else [])
        _emit(doc, args.out, [header, row])
        extra = f"  bounds [{doc['bounds'][0]:.4f}, {doc['bounds'][1]:.4f}]" if args.bounds else ""
        _table("query", [(str(lit), f"{p:.4f}{extra}")])
        return EXIT_OK
    analysis = analyze(framework, args.mode, args.entropy, args.solver or "direct", _config(args), args.epsilon, args.relax)
    if args.bounds:
        for lit in framework.literals():
            analysis.bounds[str(lit)] = literal_bounds(framework, lit, args.mode)
    doc = analysis.to_dict()
    rows = [["literal", "probability"]] + [[k, repr(v)] for k, v in analysis.literal_probs.items()]
    _emit(doc, args.out, rows)
    _table("literal probabilities", [(k, _fmt(v)) for k, v in analysis.literal_probs.items()])
    _table("argument probabilities", [(f"A{i}", str(a), _fmt(a.probability)) for i, a in enumerate(analysis.arguments)])
    return EXIT_OK


def cmd_args(args) -> int:
    framework = _load_pd(args.file)
    analysis = analyze(framework, args.mode, args.entropy, args.solver or "direct", _config(args), args.epsilon, args.relax)
    doc = analysis.to_dict()
    del doc["literals"]
    rows = [["id", "claim", "support", "probability", "label"]] + [
        [i, str(a.claim), " ".join(sorted(map(str, a.support))), repr(a.probability), analysis.labelling[i]]
        for i, a in enumerate(analysis.arguments)
    ]
    _emit(doc, args.out, rows)
    _table("arguments", [(f"A{i}", str(a), _fmt(a.probability), analysis.labelling[i]) for i, a in enumerate(analysis.arguments)])
    _table("attacks", [(f"A{t.attacker} -> A{t.attackee}",) for t in analysis.attacks])
    return EXIT_OK


def cmd_label(args) -> int:
    graph = parse_aa(_read(args.file))
    try:
        result = label_aa(graph, args.epsilon, args.solver or "direct", _config(args))
    except UnsatisfiableError:
        _emit({"file": args.file, "error": "no consistent labelling under PD semantics"})
        print("no consistent labelling under PD semantics", file=sys.stderr)
        return EXIT_INFEASIBLE
    doc = {
        "file": args.file,
        "epsilon": args.epsilon,
        "complete": result.complete,
        "arguments": [
            {"argument": a, "probability": result.probabilities.get(a), "label": result.labelling.labels.get(a)}
            for a in graph.arguments
        ],
    }
    if not result.complete:
        doc["error"] = "probabilistic labelling is not a complete labelling"
    rows = [["argument", "probability", "label"]] + [
        [d["argument"], repr(d["probability"]), d["label"]] for d in doc["arguments"]
    ]
    _emit(doc, args.out, rows)
    _table("labelling", [(d["argument"], _fmt(d["probability"]), d["label"]) for d in doc["arguments"]])
    if not result.complete:
        print("refusing: the labelling is not complete", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_convert(args) -> int:
    text = _read(args.file)
    if args.file.endswith(".aaf"):
        out = serialize_pd(aa_to_pd(parse_aa(text)))
    else:
        framework = parse_pd(text)
        out = serialize_pd(framework)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = args.n
    rules = args.rules if args.rules else [16]
    if len(rules) == 1:
        rules = rules * len(sizes)
    if len(rules) != len(sizes):
        raise UsageError("--rules takes one value or one value per --n")
    backends = tuple(b.strip() for b in args.backends.split(",") if b.strip())
    rows = []
    for n, m in zip(sizes, rules):
        spec = benchmod.BenchSpec(
            n_literals=n, n_rules=m, max_body=args.max_body, seed=args.seed, backends=backends,
            repetitions=args.reps, include_build=args.include_build, max_epochs=args.max_epochs or 200_000,
        )
        rows.extend(benchmod.run_bench(spec))
    summary = benchmod.summarize(rows)
    if args.output:
        benchmod.write_csv(rows, args.output)
    figures = [str(p) for p in benchmod.render_figures(rows, args.figures)] if args.figures else []
    if args.out == "csv":
        sys.stdout.write(benchmod.rows_to_csv(rows))
    else:
        _emit({"rows": rows, "summary": summary, "figures": figures})
    _table(
        "backend  n  rules  mean_ms  conv  entropy",
        [
            (s["backend"], s["n_literals"], s["n_rules"], f"{s['mean_wall_ms']:.1f}", f"{s['convergence_rate']:.2f}",
             f"{s['mean_entropy_bits']:.3f}")
            for s in summary
        ],
    )
    for f in ([args.output] if args.output else []) + figures:
        print(f"wrote {f}", file=sys.stderr)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pd", description="Probabilistic deduction over p-rules.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp, entropy=True, solver=True):
        sp.add_argument("--mode", choices=("owa", "pcwa"), default="pcwa")
        if entropy:
            sp.add_argument("--entropy", choices=("none", "linear"), default="linear")
        if solver:
            sp.add_argument("--solver", choices=("sgd", "direct", "lp"), default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-epochs", type=int, default=None)
        sp.add_argument("--epsilon", type=float, default=1e-4)
        sp.add_argument("--dump-system", metavar="PATH", default=None)
        sp.add_argument("--out", choices=("json", "csv"), default="json")

    sp = sub.add_parser("check", help="decide satisfiability under a mode")
    sp.add_argument("file")
    common(sp, entropy=False)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("solve", help="print the joint distribution over worlds")
    sp.add_argument("file")
    common(sp)
    sp.add_argument("--relax", action="store_true", help="minimize the L1 violation instead (inconsistent inputs)")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("query", help="literal probabilities (all literals and arguments without --literal)")
    sp.add_argument("file")
    sp.add_argument("--literal", default=None)
    sp.add_argument("--bounds", action="store_true")
    sp.add_argument("--relax", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("args", help="arguments, attacks, probabilities and labels")
    sp.add_argument("file")
    sp.add_argument("--relax", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_args)

    sp = sub.add_parser("label", help="probabilistic labelling of an .aaf graph")
    sp.add_argument("file")
    common(sp, entropy=False)
    sp.set_defaults(func=cmd_label)

    sp = sub.add_parser("convert", help=".aaf to .pd, or normalize a .pd file")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("bench", help="race solvers on random satisfiable rule sets")
    sp.add_argument("--n", type=int, nargs="+", default=[6])
    sp.add_argument("--rules", type=int, nargs="+", default=None)
    sp.add_argument("--max-body", type=int, default=None)
    sp.add_argument("--reps", type=int, default=10)
    sp.add_argument("--backends", default="sgd,direct-entropy")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-epochs", type=int, default=None)
    sp.add_argument("--include-build", action="store_true")
    sp.add_argument("--output", default=None, help="write the CSV rows to this file")
    sp.add_argument("--figures", default=None, metavar="DIR", help="render matplotlib figures into DIR")
    sp.add_argument("--out", choices=("json", "csv"), default="csv")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, UsageError, WorldCapError, KeyError) as exc:
        print(f"pd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, UnsatisfiableError):
            _emit({"error": str(exc), "failure": exc.kind})
            print(f"pd: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        print(f"pd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
