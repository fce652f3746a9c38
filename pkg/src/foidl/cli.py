"""Command-line front end: learn, eval, curve, and synth subcommands.

Diagnostics go to stderr; data goes to files or stdout.  Exit status is
0 exactly when the requested artifacts were produced.
"""

import argparse
import sys
from dataclasses import replace
from typing import Optional

from .background import BackgroundKB, default_background, load_background
from .dataset import (
    Corpus,
    CorpusError,
    SplitSpec,
    load_corpus,
    save_corpus,
    synthesize_corpus,
)
from .evaluate import CurveRow, evaluate, run_curve, run_point, write_csv
from .induction import (
    DECISION_LIST,
    UNORDERED,
    LearnedProgram,
    LearnError,
    LearnerParams,
    complexity,
    learn,
)
from .solver import DEFAULT_BUDGET, SolveBudget

MODES = ("foidl", "ifoil")


def _learner_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--u", type=float, default=None,
                   help="implicit-negative universe size")
    p.add_argument("--min-cover", type=int, default=None,
                   help="minimum positives a clause must cover")
    p.add_argument("--min-accuracy", type=float, default=None,
                   help="minimum stuck-clause accuracy to keep it")
    p.add_argument("--weak-limit", type=int, default=None,
                   help="consecutive weak-literal limit")
    p.add_argument("--max-answers", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--max-depth", type=int, default=None)


def _params_from(args, mode: Optional[str] = None) -> LearnerParams:
    params = LearnerParams()
    budget = params.budget
    if args.max_answers or args.max_steps or args.max_depth:
        budget = SolveBudget(
            max_answers=args.max_answers or DEFAULT_BUDGET.max_answers,
            max_steps=args.max_steps or DEFAULT_BUDGET.max_steps,
            max_depth=args.max_depth or DEFAULT_BUDGET.max_depth,
        )
    overrides = {"budget": budget}
    if args.u is not None:
        overrides["universe_size"] = args.u
    if args.min_cover is not None:
        overrides["min_clause_coverage"] = args.min_cover
    if args.min_accuracy is not None:
        overrides["min_clause_accuracy"] = args.min_accuracy
    if args.weak_limit is not None:
        overrides["weak_literal_limit"] = args.weak_limit
    if mode is not None:
        overrides["mode"] = DECISION_LIST if mode == "foidl" else UNORDERED
    return replace(params, **overrides)


def _load_kb(args) -> BackgroundKB:
    if getattr(args, "background", None):
        return load_background(args.background)
    return default_background()


def _modes_from(arg: str) -> list:
    modes = [m.strip() for m in arg.split(",") if m.strip()]
    for m in modes:
        if m not in MODES:
            raise ValueError(f"unknown mode {m!r} (choose from {MODES})")
    if not modes:
        raise ValueError("no mode given")
    return modes


def cmd_learn(args) -> int:
    corpus = load_corpus(args.train)
    kb = _load_kb(args)
    mode = args.mode or "foidl"
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    params = _params_from(args, mode)
    learned = learn(corpus.examples, kb=kb, params=params)
    text = learned.to_text()
    rules, literals, memorized = complexity(learned)
    counts = f"rules {rules}  literals {literals}  memorized {memorized}"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        print(counts)
    else:
        sys.stdout.write(text)
        print(counts, file=sys.stderr)
    for w in learned.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    with open(args.program, encoding="utf-8") as f:
        learned = LearnedProgram.from_text(f.read())
    corpus = load_corpus(args.test)
    kb = _load_kb(args)
    params = _params_from(args)
    import time

    t0 = time.perf_counter()
    report = evaluate(learned, corpus.examples, kb=kb, budget=params.budget)
    wall = time.perf_counter() - t0
    print(report.summary())
    print(f"warnings {len(report.warnings)}")
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.csv:
        mode = "foidl" if learned.mode == DECISION_LIST else "ifoil"
        row = CurveRow(0, 0, mode, report.accuracy, report.rule_count,
                       report.literal_count, report.memorized_count, wall)
        import csv as _csv
        import os

        new = not os.path.exists(args.csv) or os.path.getsize(args.csv) == 0
        with open(args.csv, "a", newline="", encoding="utf-8") as f:
            w = _csv.writer(f)
            if new:
                from .evaluate import CSV_HEADER

                w.writerow(CSV_HEADER)
            w.writerow(row.as_csv())
    return 0


def cmd_curve(args) -> int:
    corpus = load_corpus(args.train)
    kb = _load_kb(args)
    modes = _modes_from(args.mode or "foidl")
    params = _params_from(args)
    sizes = tuple(int(s) for s in args.train_sizes.split(","))
    spec = SplitSpec(train_sizes=sizes, test_size=args.test_size,
                     trials=args.trials, seed=args.seed)

    def progress(row: CurveRow):
        if args.verbose:
            print(f"trial {row.trial} size {row.train_size} {row.mode}: "
                  f"accuracy {row.accuracy:.4f} in {row.wall_seconds:.1f}s",
                  file=sys.stderr)

    if args.jobs and args.jobs > 1:
        rows = _curve_parallel(corpus, spec, modes, params, kb, args.jobs,
                               progress)
    else:
        rows = run_curve(corpus, spec, modes, params=params, kb=kb,
                         progress=progress)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as f:
            write_csv(rows, f)
    else:
        write_csv(rows, sys.stdout)
    return 0


def _curve_parallel(corpus, spec, modes, params, kb, jobs, progress):
    # deterministic (trial, size, mode) row order regardless of completion
    from concurrent.futures import ProcessPoolExecutor

    from .dataset import split_trials

    points = [(tr, mode) for tr in split_trials(corpus, spec)
              for mode in modes]
    rows = [None] * len(points)
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futures = {
            ex.submit(_curve_point, tr, mode, params): i
            for i, (tr, mode) in enumerate(points)
        }
        for fut, i in futures.items():
            rows[i] = fut.result()
            progress(rows[i])
    return rows


def _curve_point(tr, mode, params) -> CurveRow:
    row, _, _ = run_point(list(tr.train), list(tr.test), mode, params,
                          trial=tr.trial)
    return row


def cmd_synth(args) -> int:
    corpus = synthesize_corpus(args.size, args.irregular_fraction, args.seed)
    if args.out:
        save_corpus(corpus, args.out)
    else:
        for ex in corpus.examples:
            print(f"{ex.input_str}\t{ex.output_str}")
    print(f"{len(corpus)} pairs ({corpus.provenance})", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="foidl",
        description="Learn and evaluate first-order decision lists for "
                    "past-tense generation.",
    )
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("learn", help="induce a program from a corpus")
    p.add_argument("--train", required=True, help="training corpus (TSV)")
    p.add_argument("--background", help="background knowledge file")
    p.add_argument("--mode", default="foidl", choices=MODES)
    p.add_argument("--out", help="write the learned program here")
    _learner_flags(p)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("eval", help="score a program on a test corpus")
    p.add_argument("--program", required=True, help="learned program file")
    p.add_argument("--test", required=True, help="test corpus (TSV)")
    p.add_argument("--background", help="background knowledge file")
    p.add_argument("--csv", help="append a CSV result row here")
    _learner_flags(p)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("curve", help="multi-trial learning-curve experiment")
    p.add_argument("--train", required=True, help="corpus to split (TSV)")
    p.add_argument("--background", help="background knowledge file")
    p.add_argument("--mode", default="foidl",
                   help="comma-separated subset of foidl,ifoil")
    p.add_argument("--train-sizes", required=True,
                   help="comma-separated training sizes")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--test-size", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes for trials")
    p.add_argument("--csv", help="write the CSV here (default stdout)")
    _learner_flags(p)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--size", type=int, required=True, help="number of pairs")
    p.add_argument("--irregular-fraction", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the corpus here (default stdout)")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_synth)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, CorpusError, LearnError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
