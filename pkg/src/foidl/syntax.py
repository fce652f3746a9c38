"""Reading and writing of terms, literals and clause programs.

Concrete syntax follows logic-programming convention: lowercase
identifiers are constants, uppercase-initial identifiers are variables,
``[a,b,c]`` and ``[H|T]`` are list sugar, ``f(X,Y)`` is a compound.
Equality literals are written infix, ``C = [e,d]``.  Clauses end in ``.``
with an optional trailing ``!`` marking the clause-terminal cut:

    past(A,B) :- split(B,A,C), C = [e,d], !.
    past([g,o],[w,e,n,t]) :- !.
    split([X,Y|Z],[X],[Y|Z]).

``%`` starts a comment.  Rendering is canonical (variables named A, B,
... in order of first appearance) and round-trips bit-exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

from .terms import CONS, EMPTY_LIST, Term, Var, fresh_var, list_parts, mk_list, rename_term

EQ = "="


class Literal(NamedTuple):
    pred: str
    args: tuple


@dataclass
class Clause:
    """``head :- body`` with an optional clause-terminal cut."""

    head: Literal
    body: tuple = ()
    ends_in_cut: bool = False

    def key(self):
        return (self.head, self.body, self.ends_in_cut)


def equality(a: Term, b: Term) -> Literal:
    return Literal(EQ, (a, b))


def rename_apart(c: Clause, fresh: Callable[[], Var] = fresh_var) -> Clause:
    """Copy of ``c`` with every variable replaced by a fresh one."""
    mapping: dict = {}
    head = Literal(c.head.pred, tuple(rename_term(a, mapping, fresh) for a in c.head.args))
    body = tuple(
        Literal(l.pred, tuple(rename_term(a, mapping, fresh) for a in l.args)) for l in c.body
    )
    return Clause(head, body, c.ends_in_cut)


# ---------------------------------------------------------------------------
# Tokenizer


class SyntaxIssue(Exception):
    def __init__(self, msg: str, line: Optional[int] = None):
        self.line = line
        super().__init__(msg if line is None else f"line {line}: {msg}")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<neck>:-)
  | (?P<punct>[()\[\]|,.!=:+\-])
  | (?P<varname>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*)
""",
    re.VERBOSE,
)


def tokenize(text: str):
    """Yield (kind, value, line) triples; comments become 'comment' tokens."""
    pos, line = 0, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SyntaxIssue(f"unexpected character {text[pos]!r}", line)
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            line += value.count("\n")
        elif kind == "comment":
            yield ("comment", value[1:].strip(), line)
        elif kind == "punct" or kind == "neck":
            yield (value, value, line)
        else:
            yield (kind, value, line)
        pos = m.end()


class _Tokens:
    def __init__(self, text: str, keep_comments: bool = False):
        self.items = [
            t for t in tokenize(text) if keep_comments or t[0] != "comment"
        ]
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else (None, None, None)

    def next(self):
        t = self.peek()
        if t[0] is None:
            raise SyntaxIssue("unexpected end of input")
        self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise SyntaxIssue(f"expected {kind!r}, got {t[1]!r}", t[2])
        return t


# ---------------------------------------------------------------------------
# Parser


class _TermParser:
    """Parses terms/literals, mapping variable names to Var ids per scope."""

    def __init__(self, tokens: _Tokens, varmap: Optional[dict] = None):
        self.tokens = tokens
        self.varmap = {} if varmap is None else varmap

    def variable(self, name: str) -> Var:
        v = self.varmap.get(name)
        if v is None:
            v = self.varmap[name] = fresh_var()
        return v

    def term(self) -> Term:
        kind, value, line = self.tokens.next()
        if kind == "varname":
            return self.variable(value)
        if kind == "[":
            return self._list_tail(line)
        if kind == "name":
            if self.tokens.peek()[0] == "(":
                self.tokens.next()
                args = [self.term()]
                while self.tokens.peek()[0] == ",":
                    self.tokens.next()
                    args.append(self.term())
                self.tokens.expect(")")
                return (value,) + tuple(args)
            return value
        raise SyntaxIssue(f"expected a term, got {value!r}", line)

    def _list_tail(self, line) -> Term:
        if self.tokens.peek()[0] == "]":
            self.tokens.next()
            return EMPTY_LIST
        items = [self.term()]
        while self.tokens.peek()[0] == ",":
            self.tokens.next()
            items.append(self.term())
        tail: Term = EMPTY_LIST
        if self.tokens.peek()[0] == "|":
            self.tokens.next()
            tail = self.term()
        self.tokens.expect("]")
        return mk_list(items, tail)

    def literal(self) -> Literal:
        t = self.term()
        if self.tokens.peek()[0] == EQ:
            self.tokens.next()
            return Literal(EQ, (t, self.term()))
        if isinstance(t, str):
            return Literal(t, ())
        if isinstance(t, tuple) and t[0] != CONS:
            return Literal(t[0], tuple(t[1:]))
        raise SyntaxIssue("a literal must be an atom, a compound or an equality")


def parse_term(text: str, varmap: Optional[dict] = None) -> Term:
    tokens = _Tokens(text)
    t = _TermParser(tokens, varmap).term()
    if tokens.peek()[0] is not None:
        raise SyntaxIssue(f"trailing input after term: {tokens.peek()[1]!r}")
    return t


def parse_literal(text: str, varmap: Optional[dict] = None) -> Literal:
    tokens = _Tokens(text)
    l = _TermParser(tokens, varmap).literal()
    if tokens.peek()[0] is not None:
        raise SyntaxIssue(f"trailing input after literal: {tokens.peek()[1]!r}")
    return l


@dataclass
class ParsedClause:
    clause: Clause
    line: int
    comments: tuple = ()

    @property
    def memorized(self) -> bool:
        return "memorized" in self.comments


@dataclass
class Directive:
    """A ``:- ...`` line, e.g. a signature declaration.

    Directive bodies have their own little grammars (``split(word:+, ...)``
    is not a term), so the raw tokens up to the final ``.`` are kept for
    the interested module to interpret.
    """

    tokens: list
    line: int

    @property
    def name(self) -> str:
        return self.tokens[0][1] if self.tokens else ""


def parse_program(text: str) -> tuple[list[ParsedClause], list[Directive]]:
    """Parse a clause file into clauses and directives, in file order."""
    tokens = _Tokens(text, keep_comments=True)
    clauses: list[ParsedClause] = []
    directives: list[Directive] = []
    pending_comments: list[str] = []
    while tokens.peek()[0] is not None:
        kind, value, line = tokens.peek()
        if kind == "comment":
            tokens.next()
            pending_comments.append(value)
            continue
        if kind == ":-":
            tokens.next()
            raw = []
            while tokens.peek()[0] not in (".", None):
                raw.append(tokens.next())
            tokens.expect(".")
            directives.append(Directive(raw, line))
            pending_comments = []
            continue
        clause, comments = _parse_clause_at(tokens, line)
        clauses.append(ParsedClause(clause, line, tuple(pending_comments) + comments))
        pending_comments = []
    return clauses, directives


def _parse_clause_at(tokens: _Tokens, line: int) -> tuple[Clause, tuple]:
    parser = _TermParser(tokens)
    head = parser.literal()
    if head.pred == EQ:
        raise SyntaxIssue("equality cannot head a clause", line)
    body: list[Literal] = []
    cut = False
    if tokens.peek()[0] == ":-":
        tokens.next()
        while True:
            if tokens.peek()[0] == "!":
                tokens.next()
                cut = True
                break
            body.append(parser.literal())
            if tokens.peek()[0] == ",":
                tokens.next()
                continue
            break
    tokens.expect(".")
    comments = []
    while tokens.peek()[0] == "comment" and tokens.peek()[2] == tokens.items[tokens.i - 1][2]:
        comments.append(tokens.next()[1])
    return Clause(head, tuple(body), cut), tuple(comments)


def parse_clause(text: str) -> Clause:
    clauses, directives = parse_program(text)
    if directives or len(clauses) != 1:
        raise SyntaxIssue("expected exactly one clause")
    return clauses[0].clause


# ---------------------------------------------------------------------------
# Rendering


def _var_name(n: int) -> str:
    return chr(ord("A") + n) if n < 26 else f"V{n + 1}"


class _Namer:
    def __init__(self):
        self.names: dict = {}

    def __call__(self, v: Var) -> str:
        name = self.names.get(v)
        if name is None:
            name = self.names[v] = _var_name(len(self.names))
        return name


def render_term(t: Term, namer: Optional[Callable[[Var], str]] = None) -> str:
    namer = namer or _Namer()
    return _render(t, namer)


def _render(t: Term, namer) -> str:
    if isinstance(t, Var):
        return namer(t)
    if isinstance(t, str):
        return t
    if t[0] == CONS:
        elems, tail = list_parts(t)
        inner = ",".join(_render(e, namer) for e in elems)
        if tail == EMPTY_LIST:
            return f"[{inner}]"
        return f"[{inner}|{_render(tail, namer)}]"
    args = ",".join(_render(a, namer) for a in t[1:])
    return f"{t[0]}({args})"


def render_literal(l: Literal, namer=None) -> str:
    namer = namer or _Namer()
    if l.pred == EQ:
        return f"{_render(l.args[0], namer)} = {_render(l.args[1], namer)}"
    if not l.args:
        return l.pred
    return f"{l.pred}({','.join(_render(a, namer) for a in l.args)})"


def render_clause(c: Clause, comment: Optional[str] = None) -> str:
    namer = _Namer()
    head = render_literal(c.head, namer)
    parts = [render_literal(l, namer) for l in c.body]
    if c.ends_in_cut:
        parts.append("!")
    text = head if not parts else f"{head} :- {', '.join(parts)}"
    text += "."
    if comment:
        text += f" % {comment}"
    return text
