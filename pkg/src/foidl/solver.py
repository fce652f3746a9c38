"""Depth-first interpreter for ordered clause programs with terminal cut.

Clauses are tried strictly in program order with leftmost literal
selection.  A clause whose ``ends_in_cut`` flag is set commits to its
first body solution: remaining body alternatives and later clauses of
the predicate are pruned at that call site, which is exactly the
decision-list reading of ``!``.

All searches run under a :class:`SolveBudget`; running out of steps,
depth or answers is reported through the ``exhausted`` flag rather than
silently truncating.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional

from .syntax import (
    EQ,
    Clause,
    Literal,
    ParsedClause,
    SyntaxIssue,
    parse_program,
    render_clause,
    rename_apart,
)
from .terms import Subst, Term, Var, apply_subst, fresh_var, is_ground, unify, variables

sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))


@dataclass(frozen=True)
class SolveBudget:
    max_answers: int = 1000
    max_steps: int = 100_000
    max_depth: int = 500

    def __post_init__(self):
        if self.max_answers <= 0 or self.max_steps <= 0 or self.max_depth <= 0:
            raise ValueError("budget limits must be strictly positive")


DEFAULT_BUDGET = SolveBudget()


@dataclass(frozen=True)
class Answer:
    """Bindings restricted to the query's variables, fully dereferenced."""

    bindings: tuple  # ((Var, Term), ...) in query-variable order
    ground: bool

    def value(self, v: Var) -> Term:
        for var, t in self.bindings:
            if var == v:
                return t
        return v

    def apply(self, t: Term) -> Term:
        return apply_subst(dict(self.bindings), t)


class Program:
    """An immutable ordered clause list with a first-functor index."""

    def __init__(self, clauses):
        self.clauses = tuple(clauses)
        self.index: dict = {}
        for c in self.clauses:
            self.index.setdefault((c.head.pred, len(c.head.args)), []).append(c)

    def clauses_for(self, lit: Literal):
        return self.index.get((lit.pred, len(lit.args)), ())

    def __eq__(self, other):
        return isinstance(other, Program) and [c.key() for c in self.clauses] == [
            c.key() for c in other.clauses
        ]

    def __len__(self):
        return len(self.clauses)


def program_from_text(text: str) -> Program:
    clauses, directives = parse_program(text)
    if directives:
        raise SyntaxIssue("directives are not allowed in a plain program file",
                          directives[0].line)
    return Program([pc.clause for pc in clauses])


def program_to_text(program: Program) -> str:
    return "".join(render_clause(c) + "\n" for c in program.clauses)


class _Search:
    """Mutable per-solve state: the step countdown and trip flags."""

    __slots__ = ("steps", "max_depth", "tripped")

    def __init__(self, budget: SolveBudget):
        self.steps = budget.max_steps
        self.max_depth = budget.max_depth
        self.tripped = False


class _OutOfSteps(Exception):
    pass


def _solve(prog: Program, goals: tuple, s: Subst, depth: int, st: _Search) -> Iterator[Subst]:
    if not goals:
        yield s
        return
    if depth > st.max_depth:
        st.tripped = True
        return
    lit = goals[0]
    rest = goals[1:]
    if lit.pred == EQ:
        st.steps -= 1
        if st.steps < 0:
            raise _OutOfSteps
        s2 = unify(lit.args[0], lit.args[1], s)
        if s2 is not None:
            yield from _solve(prog, rest, s2, depth, st)
        return
    for clause in prog.clauses_for(lit):
        st.steps -= 1
        if st.steps < 0:
            raise _OutOfSteps
        rc = rename_apart(clause)
        s2 = s
        for a, b in zip(lit.args, rc.head.args):
            s2 = unify(a, b, s2)
            if s2 is None:
                break
        if s2 is None:
            continue
        if clause.ends_in_cut:
            for sol in _solve(prog, rc.body, s2, depth + 1, st):
                yield from _solve(prog, rest, sol, depth, st)
                return
        else:
            for sol in _solve(prog, rc.body, s2, depth + 1, st):
                yield from _solve(prog, rest, sol, depth, st)


class AnswerStream:
    """Lazy answer enumeration with the same budget semantics as solve().

    Iteration yields Answers on demand; ``exhausted`` is only meaningful
    once iteration has stopped (True iff the search space was fully
    explored within budget).
    """

    def __init__(self, prog: Program, goal: Literal,
                 budget: SolveBudget = DEFAULT_BUDGET):
        qvars = []
        for a in goal.args:
            for v in variables(a):
                if v not in qvars:
                    qvars.append(v)
        self._qvars = qvars
        self._search = _Search(budget)
        self._max_answers = budget.max_answers
        self._gen = _solve(prog, (goal,), {}, 0, self._search)
        self._yielded = 0
        self._done = False
        self.exhausted = True

    def __iter__(self):
        return self

    def __next__(self) -> Answer:
        if self._done:
            raise StopIteration
        try:
            sol = next(self._gen)
        except StopIteration:
            self._done = True
            if self._search.tripped:
                self.exhausted = False
            raise
        except _OutOfSteps:
            self._done = True
            self.exhausted = False
            raise StopIteration from None
        bindings = tuple((v, apply_subst(sol, v)) for v in self._qvars)
        ground = all(is_ground(t) for _, t in bindings)
        self._yielded += 1
        if self._yielded >= self._max_answers:
            self._done = True
            self.exhausted = False
            self._gen.close()
        return Answer(bindings, ground)


def solve(
    prog: Program, goal: Literal, budget: SolveBudget = DEFAULT_BUDGET
) -> tuple[list[Answer], bool]:
    """Enumerate answers for ``goal`` in depth-first clause order.

    Returns the answers plus an exhaustion flag; the flag is False when
    any budget tripped before the search space was fully explored.
    """
    stream = AnswerStream(prog, goal, budget)
    answers = list(stream)
    return answers, stream.exhausted


def first_answer(
    prog: Program, goal: Literal, budget: SolveBudget = DEFAULT_BUDGET
) -> tuple[Optional[Answer], bool]:
    """First answer of ``goal`` under decision-list evaluation, if any."""
    answers, exhausted = solve(prog, goal, replace(budget, max_answers=1))
    return (answers[0] if answers else None), exhausted or bool(answers)


def output_query_goal(ground_goal: Literal, modes) -> tuple[Literal, tuple]:
    """Build the query for a ground example: inputs kept, outputs fresh.

    ``modes`` is a sequence of '+'/'-' markers.  Returns the query literal
    and the tuple of fresh output variables, in argument order.
    """
    args = []
    out_vars = []
    for arg, mode in zip(ground_goal.args, modes):
        if mode == "+":
            args.append(arg)
        else:
            v = fresh_var()
            args.append(v)
            out_vars.append(v)
    return Literal(ground_goal.pred, tuple(args)), tuple(out_vars)


def output_query(
    prog: Program,
    ground_goal: Literal,
    modes,
    budget: SolveBudget = DEFAULT_BUDGET,
) -> tuple[Literal, tuple, list[Answer], bool]:
    """All outputs the program produces for the example's inputs."""
    if not any(m == "+" for m in modes):
        raise ValueError("output query needs at least one input argument")
    if not is_ground(("$", *ground_goal.args)):
        raise ValueError("output queries are built from ground examples")
    query, out_vars, = output_query_goal(ground_goal, modes)
    answers, exhausted = solve(prog, query, budget)
    return query, out_vars, answers, exhausted
