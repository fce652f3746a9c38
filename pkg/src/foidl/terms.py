"""First-order terms, substitutions and unification.

Term representation (chosen for speed -- these are the innermost loops of
both the interpreter and the learner):

* variable:  ``Var`` instance, identified by its integer ``id``
* constant:  plain ``str`` (lowercase identifier, ``[]`` for the empty list)
* compound:  ``tuple`` of ``(functor, arg1, ..., argN)`` with N >= 1

Lists are sugar over the cons functor ``.``: ``[a,b]`` is
``('.', 'a', ('.', 'b', '[]'))``.  A partial list has a Var in tail
position.  Words are lists of single-character constants.

Substitutions are plain dicts mapping ``Var`` to terms.  Bindings are not
eagerly dereferenced; ``apply_subst`` dereferences on application, so the
observable result is idempotent.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, Optional, Union


class Var:
    """A logic variable, compared by its integer id."""

    __slots__ = ("id",)

    def __init__(self, id: int):
        self.id = id

    def __eq__(self, other):
        return isinstance(other, Var) and other.id == self.id

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return f"Var({self.id})"


Term = Union[Var, str, tuple]
Subst = dict

EMPTY_LIST = "[]"
CONS = "."

_fresh_counter = itertools.count(1)


def fresh_var() -> Var:
    return Var(next(_fresh_counter))


def mk_list(items, tail: Term = EMPTY_LIST) -> Term:
    """Build a (possibly partial) list term from ``items`` and ``tail``."""
    t = tail
    for x in reversed(list(items)):
        t = (CONS, x, t)
    return t


def list_parts(t: Term) -> tuple[list, Term]:
    """Decompose a term into list elements and the final tail.

    For a proper list the tail is ``'[]'``; for a partial list it is a Var.
    A non-list term decomposes into zero elements and itself.
    """
    elems = []
    while isinstance(t, tuple) and t[0] == CONS and len(t) == 3:
        elems.append(t[1])
        t = t[2]
    return elems, t


def is_proper_list(t: Term) -> bool:
    return list_parts(t)[1] == EMPTY_LIST


def word(s: str) -> Term:
    """A word as a list of single-letter constants, e.g. word('act')."""
    return mk_list(list(s))


def word_str(t: Term) -> str:
    """Inverse of :func:`word`; raises ValueError on non-word terms."""
    elems, tail = list_parts(t)
    if tail != EMPTY_LIST or not all(isinstance(e, str) and e != EMPTY_LIST for e in elems):
        raise ValueError(f"not a ground word: {t!r}")
    return "".join(elems)


def walk(t: Term, s: Subst) -> Term:
    """Follow variable bindings until a non-variable or unbound variable."""
    while isinstance(t, Var):
        b = s.get(t)
        if b is None:
            return t
        t = b
    return t


def is_ground(t: Term, s: Optional[Subst] = None) -> bool:
    stack = [t]
    while stack:
        x = stack.pop()
        if s is not None:
            x = walk(x, s)
        if isinstance(x, Var):
            return False
        if isinstance(x, tuple):
            stack.extend(x[1:])
    return True


def variables(t: Term) -> Iterator[Var]:
    """Yield each variable occurrence in ``t`` (duplicates included)."""
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            yield x
        elif isinstance(x, tuple):
            stack.extend(reversed(x[1:]))


def occurs(v: Var, t: Term, s: Subst) -> bool:
    stack = [t]
    while stack:
        x = walk(stack.pop(), s)
        if isinstance(x, Var):
            if x == v:
                return True
        elif isinstance(x, tuple):
            stack.extend(x[1:])
    return False


def unify(a: Term, b: Term, s: Optional[Subst] = None) -> Optional[Subst]:
    """Most general unifier extending ``s``, or None.

    Occurs-check is on: self-referential bindings are rejected, so
    groundness tests on answers stay honest.  The input substitution is
    never mutated.
    """
    s = {} if s is None else dict(s)
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x = walk(x, s)
        y = walk(y, s)
        if x is y:
            continue
        if isinstance(x, Var):
            if isinstance(y, Var):
                if x.id != y.id:
                    s[x] = y
            elif occurs(x, y, s):
                return None
            else:
                s[x] = y
        elif isinstance(y, Var):
            if occurs(y, x, s):
                return None
            s[y] = x
        elif isinstance(x, str):
            if x != y:
                return None
        elif isinstance(y, str):
            return None
        else:  # both tuples
            if len(x) != len(y) or x[0] != y[0]:
                return None
            stack.extend(zip(x[1:], y[1:]))
    return s


def apply_subst(s: Subst, t: Term) -> Term:
    """Replace every bound variable in ``t`` by its (dereferenced) binding."""
    t = walk(t, s)
    if isinstance(t, tuple):
        return (t[0],) + tuple(apply_subst(s, a) for a in t[1:])
    return t


def rename_term(t: Term, mapping: dict, fresh) -> Term:
    if isinstance(t, Var):
        v = mapping.get(t)
        if v is None:
            v = mapping[t] = fresh()
        return v
    if isinstance(t, tuple):
        return (t[0],) + tuple(rename_term(a, mapping, fresh) for a in t[1:])
    return t


def variable_fraction(t: Term, s: Optional[Subst] = None) -> Fraction:
    """Fraction of an answer argument that is still variable, in [0, 1].

    A bare variable scores 1 and a ground term 0.  For lists and partial
    lists the denominator is the number of elements, plus one when the
    tail is a variable; the numerator counts variable positions, so
    ``[a,c,t|Y]`` scores 1/4.  Non-list compounds fall back to counting
    variable leaves over all leaves.

    With a substitution the term is measured as if ``apply_subst`` had
    been run first, without building the instantiated term.
    """
    if s is not None:
        t = walk(t, s)
    if isinstance(t, Var):
        return Fraction(1)
    if isinstance(t, str):
        return Fraction(0)
    if s is None:
        elems, tail = list_parts(t)
    else:
        elems = []
        while isinstance(t, tuple) and t[0] == CONS and len(t) == 3:
            elems.append(t[1])
            t = walk(t[2], s)
        tail = t
    if elems and (tail == EMPTY_LIST or isinstance(tail, Var)):
        denom = len(elems) + (1 if isinstance(tail, Var) else 0)
        num = sum(variable_fraction(e, s) for e in elems)
        if isinstance(tail, Var):
            num += 1
        return Fraction(num, denom)
    if s is not None:
        # rare shape (non-list compound or improper tail): materialize
        for e in reversed(elems):
            tail = (CONS, e, tail)
        return variable_fraction(apply_subst(s, tail))
    leaves = _leaves(t)
    return Fraction(sum(1 for x in leaves if isinstance(x, Var)), len(leaves))


def _leaves(t: Term) -> list:
    out = []
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, tuple):
            stack.extend(x[1:])
        else:
            out.append(x)
    return out
