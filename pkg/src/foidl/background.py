"""Intensional background knowledge and signature machinery.

A background KB is a cut-free clause program plus a signature (argument
types and +/- modes) for every predicate it defines.  The built-in
predicates are ``split`` (a word into two non-empty parts) and
``components`` (head/tail of a list).

Theory constants -- affixes occurring in at least ``min_occurrences``
distinct training words -- are extracted here as well; they feed the
equality literals of the learner.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dataset import Example
from .solver import Program
from .syntax import Directive, SyntaxIssue, parse_program, render_clause
from .terms import Term, word

MODES = ("+", "-")


@dataclass(frozen=True)
class PredicateSignature:
    name: str
    arg_types: tuple
    arg_modes: tuple

    def __post_init__(self):
        if len(self.arg_types) != len(self.arg_modes):
            raise ValueError("types and modes must have equal length")
        if any(m not in MODES for m in self.arg_modes):
            raise ValueError(f"modes must be '+' or '-': {self.arg_modes}")

    @property
    def arity(self) -> int:
        return len(self.arg_types)

    def positions(self, mode: str):
        return [i for i, m in enumerate(self.arg_modes) if m == mode]


class SignatureSet:
    """Signatures keyed by name/arity, plus type-compatibility groups.

    Two types in the same compatibility group describe the same universe
    of terms (for past tense: words, prefixes and suffixes are all letter
    lists), which is what licenses reusing an existing variable of one
    type in an output position of another.  Input positions always
    require the exact declared type.
    """

    def __init__(self, signatures=(), compatible_groups=()):
        self._sigs: dict = {}
        self.compatible_groups = [frozenset(g) for g in compatible_groups]
        for s in signatures:
            self.add(s)

    def add(self, sig: PredicateSignature):
        key = (sig.name, sig.arity)
        if key in self._sigs and self._sigs[key] != sig:
            raise ValueError(f"conflicting signature for {sig.name}/{sig.arity}")
        self._sigs[key] = sig

    def get(self, name: str, arity: int):
        return self._sigs.get((name, arity))

    def __iter__(self):
        return iter(self._sigs.values())

    def declare_compatible(self, *types: str):
        self.compatible_groups.append(frozenset(types))

    def compatible(self, t1: str, t2: str) -> bool:
        if t1 == t2:
            return True
        return any(t1 in g and t2 in g for g in self.compatible_groups)


@dataclass
class BackgroundKB:
    program: Program
    signatures: SignatureSet

    def __post_init__(self):
        for c in self.program.clauses:
            if c.ends_in_cut:
                raise SyntaxIssue(f"cut in background clause: {render_clause(c)}")
            if self.signatures.get(c.head.pred, len(c.head.args)) is None:
                raise SyntaxIssue(
                    f"no signature for background predicate "
                    f"{c.head.pred}/{len(c.head.args)}"
                )

    def merged_with_target(self, target_clauses) -> Program:
        """Target clauses (in order) followed by the background program."""
        return Program(tuple(target_clauses) + self.program.clauses)


SPLIT_TEXT = """\
split([X,Y|Z],[X],[Y|Z]).
split([X|Y],[X|W],Z) :- split(Y,W,Z).
"""

COMPONENTS_TEXT = "components([A|B],A,B).\n"


def builtin_split() -> BackgroundKB:
    """split(A,B,C): A is the word B ++ C with both parts non-empty."""
    sigs = SignatureSet(
        [PredicateSignature("split", ("word", "prefix", "suffix"), ("+", "-", "-"))]
    )
    return BackgroundKB(program_from(SPLIT_TEXT), sigs)


def builtin_components() -> BackgroundKB:
    sigs = SignatureSet(
        [PredicateSignature("components", ("list", "element", "list"), ("+", "-", "-"))]
    )
    return BackgroundKB(program_from(COMPONENTS_TEXT), sigs)


def default_background() -> BackgroundKB:
    """split + components, with the letter-list types declared compatible."""
    kb = merge(builtin_split(), builtin_components())
    kb.signatures.declare_compatible("word", "prefix", "suffix")
    return kb


def merge(*kbs: BackgroundKB) -> BackgroundKB:
    clauses = []
    sigs = SignatureSet()
    for kb in kbs:
        clauses.extend(kb.program.clauses)
        for s in kb.signatures:
            sigs.add(s)
        for g in kb.signatures.compatible_groups:
            sigs.compatible_groups.append(g)
    return BackgroundKB(Program(clauses), sigs)


def program_from(text: str) -> Program:
    clauses, directives = parse_program(text)
    return Program([pc.clause for pc in clauses])


# ---------------------------------------------------------------------------
# Background files

def _parse_signature_directive(d: Directive) -> PredicateSignature:
    # signature pred(type:+, type:-, ...)
    toks = d.tokens
    def bad(msg):
        raise SyntaxIssue(f"malformed signature directive: {msg}", d.line)
    if len(toks) < 4 or toks[1][0] != "name" or toks[2][0] != "(":
        bad("expected signature pred(type:mode, ...)")
    pred = toks[1][1]
    types, modes = [], []
    i = 3
    while True:
        if i + 1 >= len(toks) or toks[i][0] != "name":
            bad("expected type:mode")
        types.append(toks[i][1])
        if toks[i + 1][0] == ":-":  # "type:-" lexes as one ':-' token
            modes.append("-")
            i += 2
        elif (toks[i + 1][0] == ":" and i + 2 < len(toks)
              and toks[i + 2][0] in MODES):
            modes.append(toks[i + 2][0])
            i += 3
        else:
            bad("expected type:mode")
        if i < len(toks) and toks[i][0] == ",":
            i += 1
            continue
        break
    if i != len(toks) - 1 or toks[i][0] != ")":
        bad("expected closing parenthesis")
    return PredicateSignature(pred, tuple(types), tuple(modes))


def _parse_compatible_directive(d: Directive) -> frozenset:
    names = [t[1] for t in d.tokens[1:] if t[0] == "name"]
    shape = [t[0] for t in d.tokens[1:] if t[0] != "name"]
    if len(names) < 2 or shape != ["("] + [","] * (len(names) - 1) + [")"]:
        raise SyntaxIssue("malformed compatible directive", d.line)
    return frozenset(names)


def background_from_text(text: str) -> BackgroundKB:
    """Parse a background file: clauses plus signature directives."""
    clauses, directives = parse_program(text)
    sigs = SignatureSet()
    for d in directives:
        if d.name == "signature":
            sigs.add(_parse_signature_directive(d))
        elif d.name == "compatible":
            sigs.compatible_groups.append(_parse_compatible_directive(d))
        else:
            raise SyntaxIssue(f"unknown directive {d.name!r}", d.line)
    for pc in clauses:
        if pc.clause.ends_in_cut:
            raise SyntaxIssue("cut is not allowed in background clauses", pc.line)
        if sigs.get(pc.clause.head.pred, len(pc.clause.head.args)) is None:
            raise SyntaxIssue(
                f"clause for undeclared predicate {pc.clause.head.pred!r}", pc.line
            )
    return BackgroundKB(Program([pc.clause for pc in clauses]), sigs)


def background_to_text(kb: BackgroundKB) -> str:
    lines = []
    for sig in kb.signatures:
        specs = ", ".join(f"{t}:{m}" for t, m in zip(sig.arg_types, sig.arg_modes))
        lines.append(f":- signature {sig.name}({specs}).")
    for g in kb.signatures.compatible_groups:
        lines.append(f":- compatible({', '.join(sorted(g))}).")
    lines.extend(render_clause(c) for c in kb.program.clauses)
    return "".join(l + "\n" for l in lines)


def load_background(path) -> BackgroundKB:
    with open(path, encoding="utf-8") as f:
        return background_from_text(f.read())


def save_background(kb: BackgroundKB, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(background_to_text(kb))


# ---------------------------------------------------------------------------
# Theory constants

class TheoryConstantTable:
    """Ground terms admissible on the right of equality literals, by type."""

    def __init__(self, by_type=None):
        self.by_type: dict = {t: list(cs) for t, cs in (by_type or {}).items()}

    def constants_for(self, type_name: str) -> list:
        return self.by_type.get(type_name, [])

    def __eq__(self, other):
        return isinstance(other, TheoryConstantTable) and self.by_type == other.by_type


def extract_theory_constants(train, min_occurrences: int = 2) -> TheoryConstantTable:
    """Affixes occurring in >= ``min_occurrences`` distinct training words.

    Every input and output word contributes its proper non-empty prefixes
    and suffixes (never the full word: split needs two non-empty parts).
    Prefixes are filed under type ``prefix`` and suffixes under
    ``suffix``, shortest first for deterministic candidate order.
    """
    if min_occurrences < 1:
        raise ValueError("min_occurrences must be >= 1")
    words = set()
    for ex in train:
        words.add(ex.input_str)
        words.add(ex.output_str)
    prefix_counts: dict = {}
    suffix_counts: dict = {}
    for w in words:
        for i in range(1, len(w)):
            prefix_counts[w[:i]] = prefix_counts.get(w[:i], 0) + 1
            suffix_counts[w[i:]] = suffix_counts.get(w[i:], 0) + 1
    def keep(counts):
        kept = [a for a, n in counts.items() if n >= min_occurrences]
        kept.sort(key=lambda a: (len(a), a))
        return [word(a) for a in kept]
    return TheoryConstantTable({"prefix": keep(prefix_counts), "suffix": keep(suffix_counts)})
