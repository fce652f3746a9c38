"""Generation-based evaluation and learning-curve experiments.

A learned program is judged by the words it actually produces: each test
example poses an output query and only a ground first answer equal to the
reference past form counts as correct.
"""

from dataclasses import dataclass, replace
from typing import Optional

from .background import BackgroundKB, default_background
from .dataset import Corpus, Example, SplitSpec, split_trials
from .induction import (
    LearnedProgram,
    LearnerParams,
    complexity,
    learn,
)
from .solver import DEFAULT_BUDGET, SolveBudget, first_answer, output_query_goal
from .syntax import Literal
from .terms import Term, is_ground, word_str

CORRECT = "correct"
WRONG_OUTPUT = "wrong_output"
NO_OUTPUT = "no_output"
NONGROUND_OUTPUT = "nonground_output"


@dataclass(frozen=True)
class Verdict:
    kind: str
    predicted: Optional[Term] = None  # only for wrong_output


@dataclass(frozen=True)
class EvalReport:
    n_test: int
    n_correct: int
    accuracy: float
    verdicts: tuple
    rule_count: int
    literal_count: int
    memorized_count: int
    warnings: tuple = ()

    def summary(self) -> str:
        return (f"accuracy {self.accuracy:.4f} ({self.n_correct}/{self.n_test})"
                f"  rules {self.rule_count}  literals {self.literal_count}"
                f"  memorized {self.memorized_count}")


def evaluate(learned: LearnedProgram, test, kb: Optional[BackgroundKB] = None,
             budget: SolveBudget = DEFAULT_BUDGET) -> EvalReport:
    if kb is None:
        kb = default_background()
    prog = learned.program(kb)
    target = learned.target
    verdicts = []
    warnings = []
    n_correct = 0
    for ex in test:
        goal = Literal(target.name, (ex.input_word, ex.output_word))
        query, out_vars = output_query_goal(goal, target.arg_modes)
        ans, exhausted = first_answer(prog, query, budget)
        if ans is None:
            verdicts.append(Verdict(NO_OUTPUT))
            if not exhausted:
                warnings.append(
                    f"budget exhausted on input {word_str(ex.input_word)!r}")
            continue
        predicted = ans.value(out_vars[0])
        if not is_ground(predicted):
            verdicts.append(Verdict(NONGROUND_OUTPUT))
        elif predicted == ex.output_word:
            verdicts.append(Verdict(CORRECT))
            n_correct += 1
        else:
            verdicts.append(Verdict(WRONG_OUTPUT, predicted))
    n_test = len(verdicts)
    rules, literals, memorized = complexity(learned)
    return EvalReport(
        n_test=n_test,
        n_correct=n_correct,
        accuracy=(n_correct / n_test) if n_test else 0.0,
        verdicts=tuple(verdicts),
        rule_count=rules,
        literal_count=literals,
        memorized_count=memorized,
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# Learning-curve rows

CSV_HEADER = ("trial", "train_size", "mode", "accuracy", "rules", "literals",
              "memorized", "wall_seconds")


@dataclass(frozen=True)
class CurveRow:
    trial: int
    train_size: int
    mode: str
    accuracy: float
    rules: int
    literals: int
    memorized: int
    wall_seconds: float

    def as_csv(self) -> tuple:
        return (str(self.trial), str(self.train_size), self.mode,
                f"{self.accuracy:.4f}", str(self.rules), str(self.literals),
                str(self.memorized), f"{self.wall_seconds:.2f}")


def run_point(train, test, mode: str, params: LearnerParams,
              kb: Optional[BackgroundKB] = None,
              trial: int = 0) -> tuple[CurveRow, LearnedProgram, EvalReport]:
    import time

    if kb is None:
        kb = default_background()
    t0 = time.perf_counter()
    learned = learn(train, kb=kb, params=replace(params, mode=_mode_tag(mode)))
    wall = time.perf_counter() - t0
    report = evaluate(learned, test, kb=kb, budget=params.budget)
    row = CurveRow(trial, len(train), mode, report.accuracy,
                   report.rule_count, report.literal_count,
                   report.memorized_count, wall)
    return row, learned, report


def _mode_tag(mode: str) -> str:
    from .induction import DECISION_LIST, UNORDERED

    if mode == "foidl":
        return DECISION_LIST
    if mode == "ifoil":
        return UNORDERED
    raise ValueError(f"unknown mode {mode!r}")


def run_curve(corpus: Corpus, spec: SplitSpec, modes,
              params: Optional[LearnerParams] = None,
              kb: Optional[BackgroundKB] = None,
              progress=None) -> list[CurveRow]:
    """One row per (trial, train size, mode), in that deterministic order."""
    if params is None:
        params = LearnerParams()
    if kb is None:
        kb = default_background()
    rows = []
    for tr in split_trials(corpus, spec):
        for mode in modes:
            row, _, _ = run_point(list(tr.train), list(tr.test), mode,
                                  params, kb=kb, trial=tr.trial)
            rows.append(row)
            if progress is not None:
                progress(row)
    return rows


def write_csv(rows, fh) -> None:
    import csv

    w = csv.writer(fh)
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.as_csv())
