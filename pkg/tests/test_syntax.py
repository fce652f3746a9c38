import pytest

from foidl.syntax import (
    EQ,
    Clause,
    Literal,
    SyntaxIssue,
    equality,
    parse_clause,
    parse_literal,
    parse_program,
    parse_term,
    rename_apart,
    render_clause,
    render_literal,
    render_term,
)
from foidl.terms import Var, fresh_var, mk_list, variables, word


def test_parse_term_list():
    assert parse_term("[a,c,t]") == word("act")


def test_parse_term_partial_list():
    vm = {}
    t = parse_term("[a,c,t|Y]", vm)
    assert t == mk_list(["a", "c", "t"], tail=vm["Y"])


def test_parse_term_variable_identity():
    vm = {}
    t = parse_term("[X,X,Y]", vm)
    assert vm["X"] != vm["Y"]
    vs = list(variables(t))
    assert vs.count(vm["X"]) == 2


def test_parse_literal():
    lit = parse_literal("split([a,b],C,D)")
    assert lit.pred == "split" and len(lit.args) == 3


def test_parse_equality_infix():
    vm = {}
    lit = parse_literal("C = [e,d]", vm)
    assert lit == equality(vm["C"], word("ed"))


def test_parse_clause_with_cut():
    c = parse_clause("past(A,B) :- split(B,A,C), C = [e,d], !.")
    assert c.ends_in_cut
    assert [l.pred for l in c.body] == ["split", EQ]


def test_parse_fact():
    c = parse_clause("past([a,c,t],[a,c,t,e,d]).")
    assert c.body == () and not c.ends_in_cut


def test_cut_only_at_end():
    with pytest.raises(SyntaxIssue):
        parse_clause("p(X) :- !, q(X).")


def test_render_parse_roundtrip():
    texts = [
        "past(A,B) :- split(A,C,D), split(B,C,E), D = [y], E = [i,e,d], !.",
        "past(A,B) :- split(B,A,C), C = [e,d], !.",
        "past([a,c,t],[a,c,t,e,d]).",
        "p(A) :- q(A,B), r(B).",
    ]
    for text in texts:
        c = parse_clause(text)
        assert render_clause(c) == text


def test_roundtrip_is_fixpoint():
    text = "past(A,B) :- split(B,A,C), C = [d], split(A,D,E), E = [e], !."
    once = render_clause(parse_clause(text))
    twice = render_clause(parse_clause(once))
    assert once == twice == text


def test_parse_program_comments_and_memorized():
    text = """\
% a leading comment
past([g,o],[w,e,n,t]) :- !. % memorized
past(A,B) :- split(B,A,C), C = [e,d], !.
"""
    parsed, directives = parse_program(text)
    assert directives == []
    assert [p.memorized for p in parsed] == [True, False]


def test_parse_program_directive():
    parsed, directives = parse_program(":- pred(split(word, word, word), [minus, plus, plus]).\n")
    assert parsed == [] and len(directives) == 1
    assert directives[0].name == "pred"


def test_unterminated_clause_rejected():
    with pytest.raises(SyntaxIssue):
        parse_program("p(a).\nq(b\n")


def test_error_carries_line_number():
    with pytest.raises(SyntaxIssue) as e:
        parse_program("p(a).\nq(b) :- .\n")
    assert "line" in str(e.value)


def test_rename_apart_fresh_and_shape():
    c = parse_clause("p(A,B) :- q(A,C), r(C,B).")
    r = rename_apart(c)
    assert render_clause(r) == render_clause(c)  # alpha-equivalent
    assert not (set(variables(("$", *c.head.args)))
                & set(variables(("$", *r.head.args))))


def test_render_term_stable_names():
    x, y = fresh_var(), fresh_var()
    assert render_term((".", x, (".", y, x))) == "[A,B|A]"
