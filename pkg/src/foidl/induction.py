"""Greedy induction of first-order decision lists with implicit negatives.

The learner builds one clause at a time by hill-climbing on an
information-gain heuristic.  There are no explicit negative examples:
for each training example an *output query* (inputs bound, outputs
fresh) is posed against the candidate clause, and any answer beyond the
known correct output counts as implicit negative coverage, estimated as
``u^v - p`` where ``v`` is the (fractional) variable content of the
answer's output arguments.

Two modes share the machinery:

* decision-list mode: clauses end in a cut, are PREPENDED to the front
  of the list, and a clause is judged by the *first* answer it yields.
  Incorrect answers for examples no earlier clause handles are tolerated
  (an earlier clause will be learned for them); incorrect answers for
  examples the current program already answers correctly must be
  eliminated, or the clause goes stuck and the accuracy threshold
  decides between keeping it (returning the broken examples to
  positives-to-cover) and memorizing its examples as exception facts.

* unordered mode: cut-free clauses are appended, every enumerated answer
  must be correct before a clause is accepted, and stuck clauses always
  fall back to memorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .background import (
    BackgroundKB,
    PredicateSignature,
    TheoryConstantTable,
    extract_theory_constants,
)
from .dataset import Example
from .solver import DEFAULT_BUDGET, Program, SolveBudget, first_answer
from .syntax import EQ, Clause, Literal, equality, render_clause, render_literal
from .terms import (
    Term,
    Var,
    apply_subst,
    fresh_var,
    is_ground,
    unify,
    variable_fraction,
)

DECISION_LIST = "decision_list"
UNORDERED = "unordered"

_TIE_EPS = 1e-9


class LearnError(Exception):
    pass


@dataclass(frozen=True)
class LearnerParams:
    universe_size: float = 1000.0
    min_clause_coverage: int = 2
    weak_literal_limit: int = 1
    min_clause_accuracy: float = 0.5
    budget: SolveBudget = DEFAULT_BUDGET
    mode: str = DECISION_LIST
    theory_constant_min_occurrences: int = 2
    max_body_literals: int = 12

    def __post_init__(self):
        if self.universe_size <= 0:
            raise ValueError("universe size must be positive")
        if self.min_clause_coverage < 1:
            raise ValueError("min_clause_coverage must be >= 1")
        if not 0.0 < self.min_clause_accuracy <= 1.0:
            raise ValueError("min_clause_accuracy must be in (0, 1]")
        if self.mode not in (DECISION_LIST, UNORDERED):
            raise ValueError(f"unknown mode {self.mode!r}")


def past_tense_signature() -> PredicateSignature:
    return PredicateSignature("past", ("word", "word"), ("+", "-"))


# ---------------------------------------------------------------------------
# Scoring primitives


def info(pos_count: int, neg_mass: float) -> float:
    """Bits needed to signal a positive in a state with ``neg_mass`` negatives."""
    if pos_count <= 0:
        return math.inf
    return math.log2((pos_count + neg_mass) / pos_count)


def gain_value(retained_pos: int, info_before: float, info_after: float) -> float:
    if retained_pos == 0:
        return 0.0
    return retained_pos * (info_before - info_after)


def output_variable_content(outputs, subst=None) -> float:
    """v: summed variable fraction over the answer's output arguments."""
    return float(sum(variable_fraction(t, subst) for t in outputs))


def implicit_negative_mass(outputs, u: float, p: int, subst=None) -> float:
    """Estimated negatives covered by one output-query answer: u^v - p.

    ``p`` is the number of positive examples (for this query's input)
    whose output unifies with the answer; a ground wrong answer has
    v = 0, p = 0 and counts as exactly one negative.
    """
    return max(0.0, u ** output_variable_content(outputs, subst) - p)


def answer_mass_against_positives(outputs, u: float, same_input_outputs) -> float:
    """Convenience variant: p counted by unifying against the positives."""
    p = 0
    for correct in same_input_outputs:
        if unify(_pack(outputs), _pack(correct)) is not None:
            p += 1
    return implicit_negative_mass(outputs, u, p)


def _pack(ts) -> Term:
    return ("$t",) + tuple(ts)


# ---------------------------------------------------------------------------
# Candidate literals


@dataclass(frozen=True)
class CandidateLiteral:
    literal: Literal
    kind: str  # "background_call" | "constant_equality"
    new_vars: tuple  # ((Var, type_name), ...)
    index: int = 0

    @property
    def introduces_new_variables(self) -> bool:
        return bool(self.new_vars)


_FRESH = object()


def generate_candidates(
    bound_vars,  # ordered list of (Var, type_name); head variables first
    body,
    signatures,
    constants: TheoryConstantTable,
    target_name: str,
    head_arity: Optional[int] = None,
) -> list[CandidateLiteral]:
    """All mode/type-correct literals for the next specialization step.

    Background calls place bound variables of the exactly matching type
    in every input position; each output position takes a fresh variable
    or an existing variable of a compatible type.  Equalities pair each
    bound variable with each theory constant of its own type.  Literals
    alpha-equivalent to one already in the body are dropped.
    """
    out: list[CandidateLiteral] = []
    head_vars = {v for v, _ in bound_vars[: head_arity if head_arity is not None else 0]}
    body_keys = {_body_key(l, body, head_vars) for l in body}
    for sig in signatures:
        if sig.name == target_name:
            continue
        _background_candidates(sig, bound_vars, signatures, body_keys, out)
    constrained = {l.args[0] for l in body if l.pred == EQ and isinstance(l.args[0], Var)}
    for v, t in bound_vars:
        if v in constrained:
            continue
        for c in constants.constants_for(t):
            out.append(CandidateLiteral(equality(v, c), "constant_equality", (), len(out)))
    return out


def _background_candidates(sig, bound_vars, signatures, body_keys, out):
    slots = []
    for pos_type, mode in zip(sig.arg_types, sig.arg_modes):
        if mode == "+":
            opts = [(v, None) for v, t in bound_vars if t == pos_type]
            if not opts:
                return
        else:
            opts = [(_FRESH, pos_type)] + [
                (v, None) for v, t in bound_vars if signatures.compatible(t, pos_type)
            ]
        slots.append(opts)
    def rec(i, chosen, used):
        if i == len(slots):
            args, new_vars = [], []
            for pick, ptype in chosen:
                if pick is _FRESH:
                    v = fresh_var()
                    args.append(v)
                    new_vars.append((v, ptype))
                else:
                    args.append(pick)
            lit = Literal(sig.name, tuple(args))
            key = (sig.name, tuple("_" if isinstance(a, Var) and any(a == nv for nv, _ in new_vars) else a for a in args))
            if key in body_keys:
                return
            out.append(CandidateLiteral(lit, "background_call", tuple(new_vars), len(out)))
            return
        for pick, ptype in slots[i]:
            if pick is not _FRESH and pick in used:
                continue
            rec(i + 1, chosen + [(pick, ptype)], used | ({pick} if pick is not _FRESH else set()))
    rec(0, [], set())


def _body_key(lit, body, head_vars):
    """Literal shape with single-use non-head variables blanked."""
    counts: dict = {}
    for l in body:
        for a in l.args:
            for v in _vars_of(a):
                counts[v] = counts.get(v, 0) + 1
    def blank(a):
        if isinstance(a, Var) and counts.get(a, 0) <= 1 and a not in head_vars:
            return "_"
        return a
    return (lit.pred, tuple(blank(a) for a in lit.args))


def _vars_of(t):
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            yield x
        elif isinstance(x, tuple):
            stack.extend(x[1:])


# ---------------------------------------------------------------------------
# Memoized background goal solving


class _TableEntry:
    __slots__ = ("answers", "stream", "done", "exhausted", "prepared")

    def __init__(self, stream):
        self.answers: list = []
        self.stream = stream
        self.done = False
        self.exhausted = True
        self.prepared: dict = {}  # inverse renaming -> pre-substituted rows


class _GoalTable:
    """Answers for background goals, memoized up to variable renaming.

    Enumeration is lazy: answers are pulled from the solver only when some
    caller demands them, and stay cached for every later caller that poses
    an alpha-equivalent goal.
    """

    def __init__(self, kb: BackgroundKB, budget: SolveBudget):
        self.program = kb.program
        self.budget = budget
        self.cache: dict = {}
        self.truncated = False

    def extensions(self, lit: Literal, sol: dict, limit: Optional[int] = None,
                   fresh: bool = True) -> list:
        """Substitutions extending ``sol`` that satisfy ``lit``, in order.

        With ``fresh=False`` the solver's own answer variables are NOT
        renamed apart per use (the shared placeholder variables leak
        into the result).  That is only sound for throwaway scoring
        substitutions that mix in at most one answer row; committed
        solutions must use ``fresh=True``.
        """
        if lit.pred == EQ:
            s2 = unify(lit.args[0], lit.args[1], sol)
            return [s2] if s2 is not None else []
        walked = tuple(apply_subst(sol, a) for a in lit.args)
        canon: dict = {}
        key_args = tuple(_canonical(t, canon) for t in walked)
        key = (lit.pred, key_args)
        entry = self.cache.get(key)
        if entry is None:
            from .solver import AnswerStream

            entry = _TableEntry(
                AnswerStream(self.program, Literal(lit.pred, key_args),
                             self.budget))
            self.cache[key] = entry
        inverse = {cv: v for v, cv in canon.items()}
        prepared = None
        if not fresh:
            ikey = tuple(sorted((cv.id, v) for cv, v in inverse.items()))
            prepared = entry.prepared.setdefault(ikey, [])
        result = []
        i = 0
        while limit is None or len(result) < limit:
            if i >= len(entry.answers) and not self._pull(entry):
                if not entry.exhausted:
                    self.truncated = True
                break
            if prepared is not None:
                while len(prepared) <= i:
                    prepared.append(tuple(
                        (inverse[cv], _subst_query_vars(t, inverse))
                        for cv, t in entry.answers[len(prepared)]))
                s2 = dict(sol)
                s2.update(prepared[i])
            else:
                row = entry.answers[i]
                mapping = dict(inverse)
                s2 = dict(sol)
                for cv, t in row:
                    s2[inverse[cv]] = _rename_placeholders(t, mapping)
            i += 1
            result.append(s2)
        return result

    def _pull(self, entry: _TableEntry) -> bool:
        if entry.done:
            return False
        try:
            a = next(entry.stream)
        except StopIteration:
            entry.done = True
            entry.exhausted = entry.stream.exhausted
            entry.stream = None
            return False
        placeholders: dict = {}
        row = []
        for v, t in a.bindings:
            ct = _canonical_answer(t, placeholders)
            if ct == v:  # query var left unbound; a V->V entry would loop
                continue
            row.append((v, ct))
        entry.answers.append(tuple(row))
        return True


def _canonical(t, mapping):
    if isinstance(t, Var):
        cv = mapping.get(t)
        if cv is None:
            cv = mapping[t] = Var(-(len(mapping) + 1))
        return cv
    if isinstance(t, tuple):
        return (t[0],) + tuple(_canonical(a, mapping) for a in t[1:])
    return t


def _canonical_answer(t, placeholders):
    if isinstance(t, Var):
        if t.id < 0:  # an unbound canonical query variable
            return t
        cv = placeholders.get(t)
        if cv is None:
            cv = placeholders[t] = Var(-1_000_000 - len(placeholders))
        return cv
    if isinstance(t, tuple):
        return (t[0],) + tuple(_canonical_answer(a, placeholders) for a in t[1:])
    return t


def _subst_query_vars(t, mapping):
    if isinstance(t, Var):
        return mapping.get(t, t)
    if isinstance(t, tuple):
        return (t[0],) + tuple(_subst_query_vars(a, mapping) for a in t[1:])
    return t


def _rename_placeholders(t, mapping):
    if isinstance(t, Var):
        v = mapping.get(t)
        if v is None:
            v = mapping[t] = fresh_var()
        return v
    if isinstance(t, tuple):
        return (t[0],) + tuple(_rename_placeholders(a, mapping) for a in t[1:])
    return t


# ---------------------------------------------------------------------------
# Clause specialization

CORRECT = "correct"
UNIFIABLE = "unifiable"
INCORRECT = "incorrect"
NO_ANSWER = "no_answer"


@dataclass
class SpecResult:
    """Outcome of one clause search: a finished clause or a stuck partial."""

    success: bool
    clause: Clause
    covered: tuple  # example indices with ground-correct (first) answers
    broken: tuple   # previously-correct example indices this clause would break
    rounds: int


class _State:
    __slots__ = ("index", "inputs", "correct_outputs", "packed_correct",
                 "in_ptc", "prior_correct",
                 "sols", "status", "mass", "retained", "live", "covered")

    def __init__(self, index, inputs, outputs, in_ptc, prior_correct):
        self.index = index
        self.inputs = inputs
        self.correct_outputs = outputs
        self.packed_correct = _pack(outputs)
        self.in_ptc = in_ptc
        self.prior_correct = prior_correct
        self.sols: list = []
        self.status = NO_ANSWER
        self.mass = 0.0
        self.retained = False
        self.live = False
        self.covered = False


class _Specializer:
    """Grows one clause body by greedy gain over implicit negatives."""

    def __init__(self, examples, ptc, prior_correct, kb, constants, params, target,
                 table: _GoalTable, mode: str):
        self.params = params
        self.mode = mode
        self.target = target
        self.kb = kb
        self.constants = constants
        self.table = table
        self.u = params.universe_size
        self.cap = params.budget.max_answers
        self.head_vars = tuple(fresh_var() for _ in target.arg_types)
        self.head = Literal(target.name, self.head_vars)
        self.out_vars = tuple(
            v for v, m in zip(self.head_vars, target.arg_modes) if m == "-"
        )
        self._outs_packed = _pack(self.out_vars)
        self.bound = [(v, t) for v, t in zip(self.head_vars, target.arg_types)]
        self.body: list = []
        self.states = []
        in_pos = target.positions("+")
        out_pos = target.positions("-")
        for i, lit in enumerate(examples):
            st = _State(
                i,
                tuple(lit.args[p] for p in in_pos),
                tuple(lit.args[p] for p in out_pos),
                i in ptc,
                prior_correct[i],
            )
            st.sols = [dict(zip((self.head_vars[p] for p in in_pos), st.inputs))]
            if mode == UNORDERED and not st.in_ptc:
                # covered queries have left T; only live queries constrain
                # (and are scored for) the next unordered clause
                st.sols = []
            self.states.append(st)
        self._n_scorable = sum(1 for st in self.states if st.in_ptc)

    # -- per-example evaluation ------------------------------------------

    def _first_solution(self, st, cand):
        if cand is None:
            return st.sols[0] if st.sols else None
        for s in st.sols:
            exts = self.table.extensions(cand.literal, s, limit=1, fresh=False)
            if exts:
                return exts[0]
        return None

    def _classify_dl(self, st, cand):
        """Status and negative mass of the example's FIRST answer."""
        merged = self._first_solution(st, cand)
        if merged is None:
            return NO_ANSWER, 0.0
        out_vars = self.out_vars
        comp = unify(self._outs_packed, st.packed_correct, merged)
        if comp is None:
            return INCORRECT, implicit_negative_mass(out_vars, self.u, 0, merged)
        if all(is_ground(v, merged) for v in out_vars):
            return CORRECT, 0.0
        return UNIFIABLE, implicit_negative_mass(out_vars, self.u, 1, merged)

    def _classify_uo(self, st, cand, mass_budget=None):
        """(any answer unifies, any ground correct, total mass, exact) over ALL answers.

        With a mass budget, accumulation stops once the budget is blown:
        from then on only the unification flag is still chased and the
        returned mass is a lower bound (exact=False).
        """
        any_unify = any_correct = False
        total = 0.0
        n = 0
        exact = True
        out_vars = self.out_vars
        for s in st.sols:
            if not exact and any_unify:
                break
            exts = [s] if cand is None else self.table.extensions(
                cand.literal, s, limit=self.cap - n + 1, fresh=False)
            for m in exts:
                n += 1
                if n > self.cap:
                    self.table.truncated = True
                    return any_unify, any_correct, total, exact
                comp = unify(self._outs_packed, st.packed_correct, m)
                if comp is not None:
                    any_unify = True
                    if all(is_ground(v, m) for v in out_vars):
                        any_correct = True
                    elif exact:
                        total += implicit_negative_mass(out_vars, self.u, 1, m)
                elif exact:
                    total += implicit_negative_mass(out_vars, self.u, 0, m)
                if exact and mass_budget is not None and total > mass_budget:
                    exact = False
                if not exact and any_unify:
                    break
        return any_unify, any_correct, total, exact

    def _measure(self, st, cand):
        """(retained, live_mass, covered, broken) for one example."""
        if self.mode == DECISION_LIST:
            status, mass = self._classify_dl(st, cand)
            retained = st.in_ptc and status in (CORRECT, UNIFIABLE)
            live = status == UNIFIABLE or (status == INCORRECT and st.prior_correct)
            covered = st.in_ptc and status == CORRECT
            broken = st.prior_correct and status in (INCORRECT, UNIFIABLE)
            return retained, (mass if live else 0.0), covered, broken
        any_unify, any_correct, total, _ = self._classify_uo(st, cand)
        return st.in_ptc and any_unify, total, st.in_ptc and any_correct, False

    def _commit_measures(self):
        pos = 0
        mass = 0.0
        for st in self.states:
            st.retained = st.covered = st.live = False
            st.mass = 0.0
            if st.sols:
                r, m, c, _b = self._measure(st, None)
                st.retained, st.covered = r, c
                st.mass = m
                st.live = m > 0.0
            if st.retained:
                pos += 1
            mass += st.mass
        return pos, mass

    # -- search -----------------------------------------------------------

    def _score(self, cand, info_before=None, best_gain=None):
        """Retained-positive count and live negative mass for a candidate.

        When the best gain so far is known, candidates that provably
        cannot beat it are abandoned mid-scan (returns None); the bound
        is sound because retained positives only shrink and mass only
        grows as the remaining examples are scanned.
        """
        retained = 0
        mass = 0.0
        beat_best = best_gain is not None and best_gain > _TIE_EPS
        remaining = self._n_scorable
        n_max = self._n_scorable
        ceiling = None
        if info_before is not None and math.isfinite(info_before) and n_max:
            target = (best_gain - _TIE_EPS) / n_max if beat_best else 0.0
            # largest mass at which n_max positives could still reach the target
            ceiling = n_max * (2.0 ** (info_before - target) - 1.0)
        hopeless = False
        for st in self.states:
            if not st.sols:
                continue
            if st.in_ptc:
                remaining -= 1
            if self.mode == DECISION_LIST:
                r, m, _c, _b = self._measure(st, cand)
                if r:
                    retained += 1
                mass += m
                if beat_best and mass > 0.0:
                    possible = retained + remaining
                    if possible == 0:
                        return None
                    ub = possible * (info_before - info(possible, mass))
                    if ub < best_gain - _TIE_EPS:
                        return None
                continue
            if hopeless:
                # only the retained count still matters (weak-literal choice)
                au, _ac, _m, _ex = self._classify_uo(st, cand, 0.0)
                if st.in_ptc and au:
                    retained += 1
                continue
            budget = None if ceiling is None else ceiling - mass
            au, _ac, m, exact = self._classify_uo(st, cand, budget)
            if st.in_ptc and au:
                retained += 1
            mass += m
            if not exact or (ceiling is not None and mass > ceiling):
                if beat_best:
                    return None
                hopeless = True
        if hopeless:
            return retained, math.inf
        return retained, mass

    def _commit(self, cand):
        self.body.append(cand.literal)
        self.bound.extend(cand.new_vars)
        cap = self.cap
        for st in self.states:
            if not st.sols:
                continue
            new_sols = []
            for s in st.sols:
                for e in self.table.extensions(cand.literal, s,
                                               limit=cap - len(new_sols)):
                    new_sols.append(e)
                    if len(new_sols) >= cap:
                        self.table.truncated = True
                        break
                if len(new_sols) >= cap:
                    break
            st.sols = new_sols

    def _current_clause(self) -> Clause:
        return Clause(self.head, tuple(self.body),
                      ends_in_cut=self.mode == DECISION_LIST)

    def _exit(self, success: bool, rounds: int) -> SpecResult:
        covered = []
        broken = []
        for st in self.states:
            if not st.sols:
                continue
            _r, _m, c, b = self._measure(st, None)
            if c:
                covered.append(st.index)
            if b:
                broken.append(st.index)
        return SpecResult(success, self._current_clause(), tuple(covered),
                          tuple(broken), rounds)

    def run(self) -> SpecResult:
        params = self.params
        weak_run = 0
        rounds = 0
        while True:
            pos, mass = self._commit_measures()
            if mass == 0.0:
                return self._exit(True, rounds)
            if len(self.body) >= params.max_body_literals:
                return self._exit(False, rounds)
            info_before = info(pos, mass)
            candidates = generate_candidates(
                self.bound, self.body, self.kb.signatures, self.constants,
                self.target.name, head_arity=len(self.head_vars),
            )
            self._n_scorable = sum(
                1 for st in self.states if st.sols and st.in_ptc)
            best = None
            best_key = None
            scored = []
            # cheap equalities first: an early positive gain bound lets the
            # mass ceiling prune most background calls before enumeration
            order = sorted(candidates,
                           key=lambda c: c.kind != "constant_equality")
            for cand in order:
                result = self._score(
                    cand, info_before, best_key[0] if best_key else None)
                if result is None:
                    continue
                retained, cmass = result
                scored.append((cand, retained))
                if retained < params.min_clause_coverage:
                    continue
                g = gain_value(retained, info_before, info(retained, cmass))
                if g <= _TIE_EPS:
                    continue
                key = (g, -len(cand.new_vars),
                       1 if cand.kind == "constant_equality" else 0,
                       -cand.index)
                if best is None or _better(key, best_key):
                    best, best_key = cand, key
            scored.sort(key=lambda cr: cr[0].index)
            if best is not None:
                self._commit(best)
                weak_run = 0
                rounds += 1
                continue
            weak = weak_literal_step(scored, weak_run, params)
            if weak is None:
                return self._exit(False, rounds)
            self._commit(weak)
            weak_run += 1
            rounds += 1


def _better(key, best_key) -> bool:
    g, nv, kind, idx = key
    bg, bnv, bkind, bidx = best_key
    if g > bg + _TIE_EPS:
        return True
    if g < bg - _TIE_EPS:
        return False
    if nv != bnv:
        return nv > bnv  # fewer new variables (stored negated)
    if kind != bkind:
        return kind > bkind  # constant equality beats background call
    return idx > bidx  # earliest in generation order (stored negated)


def weak_literal_step(scored, consecutive_weak: int, params: LearnerParams):
    """Fallback when no literal has positive gain: a new-variable literal.

    Returns the new-variable-introducing candidate retaining the most
    positives (ties: first in generation order), provided the run of
    consecutive weak literals stays within the limit.
    """
    if consecutive_weak >= params.weak_literal_limit:
        return None
    best = None
    best_retained = -1
    for cand, retained in scored:
        if not cand.introduces_new_variables:
            continue
        if retained <= 0:
            continue
        if retained > best_retained:
            best, best_retained = cand, retained
    return best


# ---------------------------------------------------------------------------
# Learned programs

@dataclass
class ClauseStats:
    covered: int
    rounds: int
    uncovered: int = 0  # broken examples returned to the to-cover pool


@dataclass
class LearnedProgram:
    """An ordered theory: memorized exception facts, then learned rules."""

    target: PredicateSignature
    exception_facts: tuple
    rules: tuple
    rule_stats: tuple
    mode: str = DECISION_LIST
    warnings: tuple = ()

    def clauses(self) -> tuple:
        return tuple(self.exception_facts) + tuple(self.rules)

    def program(self, kb: Optional[BackgroundKB] = None) -> Program:
        clauses = self.clauses()
        if kb is not None:
            clauses = clauses + kb.program.clauses
        return Program(clauses)

    def to_text(self) -> str:
        lines = [render_clause(c, comment="memorized") for c in self.exception_facts]
        lines.extend(render_clause(c) for c in self.rules)
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str, target: Optional[PredicateSignature] = None,
                  mode: Optional[str] = None) -> "LearnedProgram":
        from .syntax import parse_program

        if target is None:
            target = past_tense_signature()
        parsed, _ = parse_program(text)
        exceptions = tuple(p.clause for p in parsed if p.memorized)
        rules = tuple(p.clause for p in parsed if not p.memorized)
        if mode is None:
            mode = DECISION_LIST if any(
                c.ends_in_cut for c in exceptions + rules
            ) else UNORDERED
        stats = tuple(ClauseStats(covered=0, rounds=0) for _ in rules)
        return cls(target, exceptions, rules, stats, mode=mode)


def complexity(learned: LearnedProgram) -> tuple:
    """(rule count, body literal count, memorized fact count)."""
    rules = learned.rules
    return (len(rules), sum(len(c.body) for c in rules),
            len(learned.exception_facts))


# ---------------------------------------------------------------------------
# Covering loops

def _example_literals(train, target: PredicateSignature):
    lits = []
    for ex in train:
        lits.append(Literal(target.name, (ex.input_word, ex.output_word)))
    return lits


def _prior_correct_flags(examples, clauses, kb, target, budget):
    prog = Program(tuple(clauses) + kb.program.clauses)
    out_pos = target.positions("-")
    flags = []
    for lit in examples:
        args = list(lit.args)
        outs = [fresh_var() for _ in out_pos]
        for p, v in zip(out_pos, outs):
            args[p] = v
        ans, _ = first_answer(prog, Literal(lit.pred, tuple(args)), budget)
        ok = ans is not None and all(
            ans.value(v) == lit.args[p] for p, v in zip(out_pos, outs)
        )
        flags.append(ok)
    return flags


def _most_frequent(indices, examples):
    # memorize the most common uncovered pair; break ties lexicographically
    from collections import Counter

    counts = Counter(examples[i] for i in indices)
    best = min(counts.items(), key=lambda kv: (-kv[1], render_literal(kv[0])))
    return best[0]


def learn(train, kb: Optional[BackgroundKB] = None,
          params: Optional[LearnerParams] = None,
          target: Optional[PredicateSignature] = None) -> LearnedProgram:
    """Run the covering loop until every training example is handled."""
    from .background import default_background

    if kb is None:
        kb = default_background()
    if params is None:
        params = LearnerParams()
    if target is None:
        target = past_tense_signature()
    if (target.name, len(target.arg_types)) in kb.program.index:
        raise LearnError(f"target predicate {target.name!r} defined in background")
    if "+" not in target.arg_modes:
        raise LearnError(
            "learning requires a functional target with at least one input "
            f"position; {target.name!r} declares none")
    train = list(train)
    if not train:
        raise LearnError("no training examples")
    seen = {}
    for ex in train:
        if not is_ground(ex.input_word) or not is_ground(ex.output_word):
            raise LearnError(
                f"non-ground training example {ex.input_str!r}")
        prev = seen.setdefault(ex.input_str, ex.output_str)
        if prev != ex.output_str:
            raise LearnError(
                "training data is not functionally output-complete: "
                f"conflicting outputs for {ex.input_str!r}: "
                f"{prev!r} vs {ex.output_str!r}")

    mode = params.mode
    constants = extract_theory_constants(
        train, params.theory_constant_min_occurrences)
    table = _GoalTable(kb, params.budget)
    examples = _example_literals(train, target)
    ptc = set(range(len(examples)))
    exceptions: list = []
    rules: list = []
    stats: list = []
    warnings: list = []

    def memorize(pairs):
        for lit in pairs:
            exceptions.append(
                Clause(lit, (), ends_in_cut=mode == DECISION_LIST))

    while ptc:
        before = len(ptc)
        learned_clauses = tuple(exceptions) + tuple(rules)
        if mode == DECISION_LIST:
            prior = _prior_correct_flags(
                examples, learned_clauses, kb, target, params.budget)
        else:
            prior = [False] * len(examples)
        spec = _Specializer(examples, ptc, prior, kb, constants, params,
                            target, table, mode).run()
        if spec.success and spec.covered:
            if mode == DECISION_LIST:
                rules.insert(0, spec.clause)
                stats.insert(0, ClauseStats(len(spec.covered), spec.rounds))
                _check_prepend_sound(examples, prior, spec.broken,
                                     exceptions, rules, kb, target, params)
            else:
                rules.append(spec.clause)
                stats.append(ClauseStats(len(spec.covered), spec.rounds))
            ptc.difference_update(spec.covered)
        elif (mode == DECISION_LIST and spec.covered
              and len(spec.covered) > len(spec.broken)
              and len(spec.covered) / (len(spec.covered) + len(spec.broken))
              >= params.min_clause_accuracy):
            # keep the stuck clause and return the examples it breaks
            rules.insert(0, spec.clause)
            stats.insert(0, ClauseStats(len(spec.covered), spec.rounds,
                                        uncovered=len(spec.broken)))
            ptc.difference_update(spec.covered)
            ptc.update(spec.broken)
            if spec.broken:
                warnings.append(
                    f"uncovered {len(spec.broken)} examples for clause "
                    f"{render_clause(spec.clause)}")
        else:
            covered_ptc = [i for i in spec.covered if i in ptc]
            if covered_ptc:
                memorize(examples[i] for i in sorted(covered_ptc))
                ptc.difference_update(covered_ptc)
            else:
                lit = _most_frequent(sorted(ptc), examples)
                memorize([lit])
                ptc.difference_update(
                    i for i in list(ptc) if examples[i] == lit)
        if len(ptc) >= before:
            raise LearnError("covering loop made no progress")

    if table.truncated:
        warnings.append("solver budget truncated some answer sets")
    learned = LearnedProgram(target, tuple(exceptions), tuple(rules),
                             tuple(stats), mode=mode, warnings=tuple(warnings))
    _check_training_consistent(learned, examples, kb, params)
    return learned


def _check_prepend_sound(examples, prior, broken, exceptions, rules, kb,
                         target, params):
    # prepending may only change verdicts for examples the clause broke,
    # and those were either uncovered or within the accuracy allowance
    after = _prior_correct_flags(
        examples, tuple(exceptions) + tuple(rules), kb, target, params.budget)
    broken_set = set(broken)
    for i, (was, now) in enumerate(zip(prior, after)):
        if was and not now and i not in broken_set:
            raise LearnError(
                f"prepend broke previously-correct example "
                f"{render_literal(examples[i])}")


def _check_training_consistent(learned: LearnedProgram, examples, kb, params):
    if learned.mode != DECISION_LIST:
        return
    flags = _prior_correct_flags(
        examples, learned.clauses(), kb, learned.target, params.budget)
    bad = [render_literal(examples[i]) for i, ok in enumerate(flags) if not ok]
    if bad:
        raise LearnError(
            "learned list mishandles training examples: " + ", ".join(bad[:5]))


def learn_foidl(train, kb=None, params: Optional[LearnerParams] = None,
                **kw) -> LearnedProgram:
    params = replace(params or LearnerParams(), mode=DECISION_LIST)
    return learn(train, kb, params, **kw)


def learn_ifoil(train, kb=None, params: Optional[LearnerParams] = None,
                **kw) -> LearnedProgram:
    params = replace(params or LearnerParams(), mode=UNORDERED)
    return learn(train, kb, params, **kw)
