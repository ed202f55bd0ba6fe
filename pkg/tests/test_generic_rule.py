import pytest

from conftest import CLASH_EDGES, CLASH_SIGNATURES, VP_EDGES
from genrules.catgram import BA, FA, parse_category
from genrules.errors import (
    BindingConflictError,
    DisjunctionConflictError,
    DuplicateSignatureError,
    IllFormedPosetError,
)
from genrules.generic_rule import (
    GenericRule,
    PartialRule,
    RuleFunction,
    comp,
    constant,
    disj,
    dynamic_bind,
    opt,
)
from genrules.poset import TypeHierarchy


@pytest.fixture
def syn():
    h = TypeHierarchy.from_edges(VP_EDGES, extra_types=["NP"])
    return GenericRule("SYN", h, [
        PartialRule(("NP", "VP"), constant("S")),
        PartialRule(("NP", "VP_i"), constant("S_i")),
    ])


def test_binding_examples(syn):
    assert syn.bind("NP", "VP").signature == ("NP", "VP")
    assert syn.bind("NP", "VP_2").signature == ("NP", "VP")
    assert syn.bind("VP_2", "NP") is None
    assert dynamic_bind(syn, "NP", "VP_i").signature == ("NP", "VP_i")
    assert syn.label(syn.bind("NP", "VP_i").signature) == "SYN_{NP⊗VP_i}"


def test_apply_examples(syn):
    assert syn.apply("NP", None, "VP", None) == ("S",)
    assert syn.apply("NP", None, "VP_2", None) == ("S",)
    assert syn.apply("VP_2", None, "NP", None) is None
    assert syn.apply("NP", "anything", "VP_i", 42) == ("S_i",)


def test_projection_body():
    h = TypeHierarchy(["a"])
    g = GenericRule("P", h, [PartialRule(("a", "a"), RuleFunction(lambda x, y: x, "first"))])
    assert g.apply("a", "phi", "a", "psi") == ("phi",)


def test_guard_blocks_rule():
    h = TypeHierarchy(["a"])
    g = GenericRule("G", h, [PartialRule(("a", "a"), constant("z"), lambda ctx: ctx == "ok", "only-ok")])
    assert g.apply("a", 1, "a", 2, ctx="ok") == ("z",)
    assert g.apply("a", 1, "a", 2, ctx="no") is None


def test_duplicate_signature_rejected():
    h = TypeHierarchy(["a"])
    with pytest.raises(DuplicateSignatureError):
        GenericRule("D", h, [(("a", "a"), constant(1)), (("a", "a"), constant(2))])


def test_ill_formed_rule_rejected_and_conflict_detected():
    h = TypeHierarchy.from_edges(CLASH_EDGES)
    rules = [PartialRule(s, constant(str(s))) for s in CLASH_SIGNATURES]
    with pytest.raises(IllFormedPosetError):
        GenericRule("F", h, rules)
    g = GenericRule("F", h, rules, check=False)
    with pytest.raises(BindingConflictError) as info:
        g.bind("her", "earrings")
    assert len(info.value.signatures) == 2
    # pairs away from the conflict still bind
    assert g.bind("her", "sign").signature == ("pronoun", "sign")


def test_disj():
    np_s_np = parse_category("(np\\s)/np")
    np = parse_category("np")
    both = disj(FA, BA)
    assert both(np_s_np, np) == (parse_category("np\\s"),)
    assert both(np, parse_category("np\\s")) == (parse_category("s"),)
    assert both(np, np) is None
    with pytest.raises(DisjunctionConflictError):
        disj(constant(1), constant(2))("x", "y")


def test_opt_and_comp():
    nothing = RuleFunction(lambda *a: None, "nothing")
    assert opt(nothing)(1, 2) == (1, 2)
    assert opt(constant(5))(1, 2) == (5,)
    double = RuleFunction(lambda x: 2 * x, "double")
    add = RuleFunction(lambda x, y: x + y, "add")
    assert comp(double, add)(3, 4) == (14,)
    assert comp(double, nothing)(3, 4) is None
    assert comp(double, add).expr == "comp(double, add)"
    assert str(opt(disj(FA, BA))) == "opt(disj(fa, ba))"


def test_rule_equality_uses_signatures_and_bodies(syn):
    h = syn.hierarchy
    same = GenericRule("SYN", h, [
        PartialRule(("NP", "VP_i"), constant("S_i")),
        PartialRule(("NP", "VP"), constant("S")),
    ])
    assert same == syn
    assert GenericRule("SYN", h, [PartialRule(("NP", "VP"), constant("S"))]) != syn
