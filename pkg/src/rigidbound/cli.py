"""Command line entry point: ``rigidbound {enumerate,bounds,mv,classify}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .graph import canonical_form, from_graph6, to_graph6
from .pipeline import (
    DEFAULT_CACHE, InputError, PipelineConfig, VerificationError, bounds_jsonl, run_bounds,
    run_enumerate, run_mv, summary_csv,
)
from .rigidity import classify, h1_trace, is_laman
from .subsystem import Budget

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", type=Path, default=DEFAULT_CACHE,
                        help="catalog and report directory (overridden by $RIGIDBOUND_CACHE)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="also print per-graph records in this format")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="rigidbound", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", parents=[common], help="build the Laman catalog")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--no-verify", action="store_true", help="do not enforce reference counts")

    b = sub.add_parser("bounds", parents=[common], help="embedding bound for every catalog graph")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--no-verify", action="store_true")
    b.add_argument("--budget-vars", type=int, default=Budget.max_vars)
    b.add_argument("--budget-candidates", type=int, default=Budget.max_candidates)
    b.add_argument("--extra-levels", type=int, default=Budget.extra_levels,
                   help="variable-set sizes searched past the first one with a valid subsystem")
    b.add_argument("--mirror-factor", type=int, choices=(1, 2), default=2,
                   help="embeddings per distance solution (2 counts mirror images)")
    b.add_argument("--no-finiteness", action="store_true",
                   help="skip the Jacobian rank certificate on subsystems")

    m = sub.add_parser("mv", parents=[common], help="mixed volume of a JSON support file")
    m.add_argument("file", type=Path)

    c = sub.add_parser("classify", parents=[common], help="Laman test and H1/H2 class of graph6 input")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--n", type=int, help="classify the cached catalog for n")
    src.add_argument("file", type=Path, nargs="?", help="graph6 file, '-' for stdin")
    c.add_argument("--no-verify", action="store_true")
    return p


def _config(args, **extra) -> PipelineConfig:
    return PipelineConfig.from_env(n=args.n, cache_dir=args.cache_dir, seed=args.seed, jobs=args.jobs,
                                   verify=not args.no_verify, **extra)


def _classify_records(graphs):
    for g in graphs:
        rec = {"graph6": to_graph6(g), "n": g.n, "laman": is_laman(g)}
        if rec["laman"]:
            rec["code"] = canonical_form(g).hex()
            rec["class"] = classify(g)
            if rec["class"] == "H1":
                trace, _ = h1_trace(g)
                rec["trace"] = [s.to_json() for s in trace.steps]
        yield rec


def _cmd_classify(args, out) -> int:
    if args.n is not None:
        graphs = run_enumerate(_config(args)).graphs
    else:
        try:
            fh = sys.stdin if str(args.file) == "-" else open(args.file)
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from exc
        with fh:
            try:
                graphs = [from_graph6(line) for line in fh if line.strip()]
            except ValueError as exc:
                raise InputError(f"bad graph6 input: {exc}") from exc
    recs = list(_classify_records(graphs))
    if args.format == "csv":
        print("graph6,laman,class", file=out)
        for r in recs:
            print(f"{r['graph6']},{str(r['laman']).lower()},{r.get('class', '')}", file=out)
    else:
        for r in recs:
            print(json.dumps(r, sort_keys=True), file=out)
    return EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = _parser().parse_args(argv)
    logging.basicConfig(level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s", stream=err)
    try:
        if args.command == "enumerate":
            run_enumerate(_config(args), out)
        elif args.command == "bounds":
            budget = Budget(args.budget_vars, args.budget_candidates, args.extra_levels)
            run = run_bounds(_config(args, budget=budget, mirror_factor=args.mirror_factor,
                                     check_finite=not args.no_finiteness), out)
            if args.format == "json":
                out.write(bounds_jsonl(run.reports))
            elif args.format == "csv":
                out.write(summary_csv(run.reports))
            if run.unbounded:
                return EXIT_MISMATCH
        elif args.command == "mv":
            run_mv(args.file, seed=args.seed, out=out, err=err)
        else:
            return _cmd_classify(args, out)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=err)
        return EXIT_MISMATCH
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    return EXIT_OK
