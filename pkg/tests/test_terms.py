import pytest

from genrules.errors import ReductionLimitError, TermSyntaxError
from genrules.terms import (
    App,
    Conj,
    Const,
    Lam,
    Var,
    alpha_eq,
    apply_term,
    conj_terms,
    free_vars,
    normalize,
    parse_term,
    show,
    substitute,
    template_rule,
)

T = parse_term


def test_apply_examples():
    assert apply_term(T("\\P. P(Betty)"), T("\\x. ANGRY(x)")) == T("ANGRY(Betty)")
    assert apply_term(T("\\x. x"), Const("c")) == Const("c")
    assert apply_term(T("\\P. P(Pete)"), T("\\x. ANGRY(x)")) == T("ANGRY(Pete)")


def test_conj_examples():
    assert conj_terms(T("ANGRY(Betty)"), T("ANGRY(Pete)")) == T("ANGRY(Betty) & ANGRY(Pete)")
    assert conj_terms(Const("c"), Const("c")) == Conj(Const("c"), Const("c"))
    assert show(conj_terms(T("P(a)"), T("Q(b)"))) == "P(a) & Q(b)"


def test_alpha_eq_examples():
    assert alpha_eq(T("\\x. x"), T("\\y. y"))
    assert not alpha_eq(T("\\x. ANGRY(x)"), T("\\x. x"))
    t = T("ANGRY(Betty) & ANGRY(Pete)")
    assert alpha_eq(t, T("ANGRY(Betty) & ANGRY(Pete)"))
    assert not alpha_eq(T("\\x y. x"), T("\\x y. y"))
    assert not alpha_eq(T("\\x. y"), T("\\x. z"))


def test_capture_avoidance():
    # (\x. \y. x) y  must not become  \y. y
    out = normalize(App(T("\\x. \\y. x"), Var("y")))
    assert isinstance(out, Lam)
    assert out.body == Var("y") and out.var != "y"
    assert free_vars(out) == {"y"}
    assert substitute(T("\\y. x(y)"), "x", Var("y")) != T("\\y. y(y)")


def test_normal_order_finds_normal_form():
    # the argument diverges but is discarded
    omega = T("(\\x. x x)(\\x. x x)")
    assert normalize(App(T("\\z. K"), omega)) == Const("K")


def test_reduction_limit():
    omega = T("(\\x. x x)(\\x. x x)")
    with pytest.raises(ReductionLimitError):
        normalize(omega, limit=50)


def test_bound_uppercase_names_are_variables():
    t = T("\\P. P(Betty)")
    assert t == Lam("P", App(Var("P"), Const("Betty")))
    assert T("ANGRY") == Const("ANGRY")
    assert T("x") == Var("x")


@pytest.mark.parametrize("text", [
    "\\x. x",
    "\\P. P(Betty)",
    "ANGRY(Betty) & ANGRY(Pete)",
    "\\x y. x(y) & (\\P. P(Pete))(y)",
    "LOVE(John, Mary)",
    "f(\\x. x)",
    "a & (b & c)",
])
def test_show_parse_round_trip(text):
    t = T(text)
    assert T(show(t)) == t


def test_multi_argument_application_is_curried():
    assert T("R(a, b)") == App(App(Const("R"), Var("a")), Var("b"))
    assert T("f a b") == T("f(a)(b)")


@pytest.mark.parametrize("bad", ["\\. x", "f(", "a &", "x)", "a $ b", ""])
def test_syntax_errors(bad):
    with pytest.raises(TermSyntaxError):
        T(bad)


def test_template_rule_reduces():
    body = template_rule("\\x y. x(y) & (\\P. P(Pete))(y)")
    (out,) = body(T("\\P. P(Betty)"), T("\\x. ANGRY(x)"))
    assert alpha_eq(out, T("ANGRY(Betty) & ANGRY(Pete)"))
