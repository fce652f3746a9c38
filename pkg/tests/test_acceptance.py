"""The eight headline checks, one test (and one pass/fail line) each.

Run with ``pytest -v tests/test_acceptance.py``; every criterion reports
as a single PASSED/FAILED line. Shared learning runs are module-scoped
fixtures so the invariants criterion can inspect the same programs.
"""

import itertools
import math
import random
import time

import pytest

from foidl.background import builtin_split, default_background
from foidl.dataset import (
    Example,
    SplitSpec,
    split_trials,
    synthesize_corpus,
)
from foidl.evaluate import evaluate, run_point
from foidl.induction import (
    LearnedProgram,
    LearnerParams,
    complexity,
    implicit_negative_mass,
    learn_foidl,
)
from foidl.solver import Program, SolveBudget, first_answer, solve
from foidl.syntax import Literal, parse_clause, render_clause, rename_apart
from foidl.terms import Var, fresh_var, mk_list, unify, walk, word, word_str

# experiment configuration for the larger corpora (criteria 5/6): a
# tighter solver budget, a raised theory-constant floor, and a body-length
# cap keep desk-scale wall clock sane; criterion 4 runs on pure defaults
EXPERIMENT = LearnerParams(
    budget=SolveBudget(max_answers=10, max_steps=4000, max_depth=150),
    theory_constant_min_occurrences=4,
    max_body_literals=6,
)


# -- criterion 1: solver oracles -------------------------------------------

CONSTS = ["a", "b", "c"]


def _random_term(rng, depth, pool):
    roll = rng.random()
    if depth <= 0 or roll < 0.35:
        if pool and roll < 0.18:
            return rng.choice(pool)
        return rng.choice(CONSTS)
    return (".", _random_term(rng, depth - 1, pool),
            _random_term(rng, depth - 1, pool))


def _naive_unify(a, b):
    # independent equation-stack unifier
    subst = {}

    def resolve(t):
        while isinstance(t, Var) and t in subst:
            t = subst[t]
        return t

    def contains(v, t):
        t = resolve(t)
        if isinstance(t, Var):
            return t == v
        return isinstance(t, tuple) and any(contains(v, x) for x in t)

    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        x, y = resolve(x), resolve(y)
        if x == y:
            continue
        if isinstance(x, Var) or isinstance(y, Var):
            v, t = (x, y) if isinstance(x, Var) else (y, x)
            if contains(v, t):
                return None
            subst[v] = t
        elif isinstance(x, tuple) and isinstance(y, tuple) and len(x) == len(y):
            todo.extend(zip(x, y))
        else:
            return None
    return subst


def _ground_out(t, s):
    t = walk(t, s)
    if isinstance(t, Var):
        return "a"
    if isinstance(t, tuple):
        return tuple(_ground_out(x, s) for x in t)
    return t


def _naive_first(prog, goal, s=None):
    # first-matching-clause reference with clause-terminal cut commit
    for c in prog.clauses_for(goal):
        c = rename_apart(c)
        s1 = unify(("$", *c.head.args), ("$", *goal.args), dict(s or {}))
        if s1 is None:
            continue
        for s2 in _naive_body(prog, c.body, s1):
            return s2
    return None


def _naive_body(prog, body, s):
    if not body:
        yield s
        return
    lit, rest = body[0], body[1:]
    if lit.pred == "=":
        s1 = unify(lit.args[0], lit.args[1], s)
        if s1 is not None:
            yield from _naive_body(prog, rest, s1)
        return
    s1 = _naive_first(prog, lit, s)
    if s1 is not None:
        yield from _naive_body(prog, rest, s1)


def _random_cut_program(rng):
    from foidl.solver import program_from_text

    lines = [f"f({rng.choice(CONSTS)})." for _ in range(rng.randint(2, 5))]
    lines += [f"g({rng.choice(CONSTS)},{rng.choice(CONSTS)}) :- !."
              for _ in range(rng.randint(1, 4))]
    for _ in range(rng.randint(1, 4)):
        lines.append(rng.choice([
            "p(X) :- f(X), !.",
            "p(X) :- g(X,Y), f(Y), !.",
            f"p({rng.choice(CONSTS)}) :- !.",
            f"p(X) :- g({rng.choice(CONSTS)},X), !.",
        ]))
    lines += ["q(X,Y) :- p(X), g(X,Y), !.", "q(X,X) :- f(X), !."]
    return program_from_text("\n".join(lines) + "\n")


def test_criterion_1_unify_and_first_answer_match_oracles():
    rng = random.Random(1001)
    for _ in range(1000):
        pool = [fresh_var() for _ in range(rng.randint(0, 3))]
        a = _random_term(rng, 3, pool)
        b = _random_term(rng, 3, pool)
        s = unify(a, b)
        assert (s is None) == (_naive_unify(a, b) is None)
        if s is not None:
            # explicit ground-instantiation witness
            assert _ground_out(a, s) == _ground_out(b, s)
    rng = random.Random(1002)
    for _ in range(200):
        prog = _random_cut_program(rng)
        for pred, arity in (("p", 1), ("q", 2)):
            qvars = tuple(fresh_var() for _ in range(arity))
            goal = Literal(pred, qvars)
            got, _ = first_answer(prog, goal)
            want = _naive_first(prog, goal)
            assert (got is None) == (want is None)
            if got is not None:
                assert tuple(got.value(v) for v in qvars) == \
                    tuple(walk(v, want) for v in qvars)


# -- criterion 2: split enumeration ----------------------------------------


def test_criterion_2_split_matches_index_oracle_to_length_8():
    kb = builtin_split()
    for n in range(0, 9):
        for letters in itertools.product("abc", repeat=n):
            w = "".join(letters)
            x, y = fresh_var(), fresh_var()
            answers, exhausted = solve(kb.program,
                                       Literal("split", (word(w), x, y)))
            assert exhausted
            got = [(word_str(a.value(x)), word_str(a.value(y)))
                   for a in answers]
            assert got == [(w[:i], w[i:]) for i in range(1, len(w))]


# -- criterion 3: implicit-negative arithmetic -----------------------------


def test_criterion_3_implicit_negative_worked_values():
    bare = (fresh_var(),)
    partial = (mk_list(["a", "c", "t"], tail=fresh_var()),)
    for u in (10.0, 1000.0):
        for p in (0, 1):
            assert implicit_negative_mass(bare, u, p) == \
                pytest.approx(u - p, abs=1e-9)
            assert implicit_negative_mass(partial, u, p) == \
                pytest.approx(u ** 0.25 - p, abs=1e-9)


# -- criterion 4: expert-program recovery ----------------------------------

HAND_CORPUS = [
    # 16 add-"ed" regulars
    ("walk", "walked"), ("act", "acted"), ("jump", "jumped"),
    ("paint", "painted"), ("call", "called"), ("plant", "planted"),
    ("hunt", "hunted"), ("help", "helped"), ("want", "wanted"),
    ("burn", "burned"), ("turn", "turned"), ("start", "started"),
    ("visit", "visited"), ("wait", "waited"), ("ask", "asked"),
    ("climb", "climbed"),
    # 6 final-"e" verbs
    ("ache", "ached"), ("bake", "baked"), ("care", "cared"),
    ("dance", "danced"), ("hope", "hoped"), ("love", "loved"),
    # 4 consonant+"y" verbs, pairwise-distinct pre-"y" consonants
    ("cry", "cried"), ("study", "studied"), ("envy", "envied"),
    ("imply", "implied"),
    # 3 "eep" -> "ept"
    ("sleep", "slept"), ("keep", "kept"), ("weep", "wept"),
    # vowel+"y" exceptions that the y-rule must not capture
    ("bay", "bayed"), ("delay", "delayed"),
]


@pytest.fixture(scope="module")
def hand_built_run():
    train = [Example.from_strings(b, p) for b, p in HAND_CORPUS]
    t0 = time.perf_counter()
    program = learn_foidl(train)  # all-default parameters
    wall = time.perf_counter() - t0
    return train, program, wall


@pytest.fixture(scope="module")
def regular_only_run():
    corpus = synthesize_corpus(220, 0.0, seed=11)
    spec = SplitSpec(train_sizes=(100,), test_size=100, trials=1, seed=11)
    (tr,) = split_trials(corpus, spec)
    t0 = time.perf_counter()
    program = learn_foidl(list(tr.train), params=EXPERIMENT)
    wall = time.perf_counter() - t0
    report = evaluate(program, list(tr.test), budget=EXPERIMENT.budget)
    return tr, program, report, wall


@pytest.fixture(scope="module")
def mixed_comparison_run():
    corpus = synthesize_corpus(400, 0.15, seed=7)
    spec = SplitSpec(train_sizes=(250,), test_size=100, trials=5, seed=7)
    rows = {"foidl": [], "ifoil": []}
    programs = []
    t0 = time.perf_counter()
    for tr in split_trials(corpus, spec):
        for mode in ("foidl", "ifoil"):
            row, program, _ = run_point(list(tr.train), list(tr.test), mode,
                                        EXPERIMENT, trial=tr.trial)
            rows[mode].append(row)
            programs.append((list(tr.train), program))
    wall = time.perf_counter() - t0
    return rows, programs, wall


def test_criterion_4_expert_program_recovery(hand_built_run):
    train, program, wall = hand_built_run
    assert wall < 60.0
    rendered = [render_clause(c) for c in program.rules]
    assert rendered[-1] == "past(A,B) :- split(B,A,C), C = [e,d], !."
    assert any("C = [d]" in r and "E = [e]" in r for r in rendered[:-1])
    assert any("D = [y]" in r and "E = [i,e,d]" in r for r in rendered[:-1])
    # uncovering exercised on bay/delay: either the recovery-rule pattern
    # or the two words memorized outright
    uncovered = any("uncovered" in w for w in program.warnings)
    recovery = any("C = [e,d]" in r and "[a,y]" in r for r in rendered)
    memorized = {render_clause(c) for c in program.exception_facts}
    memorized_equiv = {"past([b,a,y],[b,a,y,e,d]) :- !.",
                       "past([d,e,l,a,y],[d,e,l,a,y,e,d]) :- !."} <= memorized
    assert uncovered and (recovery or memorized_equiv)
    report = evaluate(program, train)
    assert report.accuracy == 1.0


# -- criterion 5: regular-only learnability --------------------------------


def test_criterion_5_regular_only_perfect_accuracy(regular_only_run):
    _, program, report, wall = regular_only_run
    assert wall < 300.0
    assert report.accuracy == 1.0
    assert report.rule_count <= 4


# -- criterion 6: foidl vs ifoil on mixed data -----------------------------


def test_criterion_6_foidl_beats_ifoil(mixed_comparison_run):
    rows, _, wall = mixed_comparison_run
    assert wall < 1800.0

    def mean(xs):
        return sum(xs) / len(xs)

    foidl, ifoil = rows["foidl"], rows["ifoil"]
    assert len(foidl) == len(ifoil) == 5
    assert mean([r.accuracy for r in foidl]) > \
        mean([r.accuracy for r in ifoil])
    assert mean([r.rules for r in foidl]) < mean([r.rules for r in ifoil])
    assert mean([r.literals for r in foidl]) < \
        mean([r.literals for r in ifoil])


# -- criterion 7: learner invariants ---------------------------------------


def test_criterion_7_invariants_on_all_learning_runs(
        hand_built_run, regular_only_run, mixed_comparison_run):
    # progress, prepend soundness and decision-list training consistency
    # are enforced as assertions inside learn(); reaching here means no run
    # tripped them. Re-verify training consistency externally for every
    # decision list produced (unordered programs carry no such guarantee).
    kb = default_background()
    runs = [(hand_built_run[0], hand_built_run[1], LearnerParams().budget),
            ([*regular_only_run[0].train], regular_only_run[1],
             EXPERIMENT.budget)]
    runs += [(train, program, EXPERIMENT.budget)
             for train, program in mixed_comparison_run[1]]
    checked = 0
    for train, program, budget in runs:
        if program.mode != "decision_list":
            continue
        checked += 1
        full = program.program(kb)
        for ex in train:
            out = fresh_var()
            ans, _ = first_answer(full, Literal("past", (ex.input_word, out)),
                                  budget)
            assert ans is not None and ans.value(out) == ex.output_word
    assert checked == 7  # criterion 4, criterion 5, five criterion-6 trials


# -- criterion 8: complexity excludes memorization, survives round-trip ----


def test_criterion_8_complexity_roundtrip(hand_built_run):
    train = [Example.from_strings(b, p) for b, p in HAND_CORPUS]
    train += [Example.from_strings("go", "went"),
              Example.from_strings("do", "did")]
    program = learn_foidl(train, params=EXPERIMENT)
    rules, literals, memorized = complexity(program)
    assert memorized >= 1
    # exception facts contribute nothing to the rule segment counts
    assert rules == len(program.rules)
    assert literals == sum(len(c.body) for c in program.rules)
    again = LearnedProgram.from_text(program.to_text())
    assert complexity(again) == (rules, literals, memorized)
