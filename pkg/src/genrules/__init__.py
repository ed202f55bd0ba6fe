"""Generic rules: partial grammar rules selected by dynamic binding over a
cartesian poset of type signatures, a shift-reduce parser that uses them,
and a categorial grammar for non-constituent coordination."""
from .catgram import Atom, Backward, Classifier, Forward, Tuple, build_ncc_grammar, parse_category
from .errors import (
    BindingConflictError,
    BoundedCompletenessError,
    DisjunctionConflictError,
    DuplicateSignatureError,
    GenericRuleError,
    GrammarError,
    GrammarSyntaxError,
    HierarchyCycleError,
    IllFormedPosetError,
    LexiconError,
    ReductionLimitError,
    SearchLimitError,
    UnknownTypeError,
)
from .estimator import GenericRuleParser, check_sentences
from .generic_rule import GenericRule, PartialRule, ReduceContext, RuleFunction, comp, disj, opt
from .grammar import Grammar, check_grammar, load_grammar, loads
from .parser import ParseResult, ShiftReduceParser, parse_cfg_generic, parse_syn, parse_syn_sem
from .poset import CartesianPoset, CartesianType, TypeHierarchy
from .terms import alpha_eq, normalize, parse_term

__version__ = "0.1.0"
