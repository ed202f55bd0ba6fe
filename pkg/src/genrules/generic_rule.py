"""Generic rules: partial rules ranked by specificity and selected by dynamic binding.

Every rule function here follows one calling convention::

    fn(*payloads, ctx=None) -> tuple | None

It receives the payloads being combined (two for a binary partial rule, any
number for a function used inside :func:`comp`) and returns either ``None``
(the rule does not apply) or a nonempty tuple of result payloads. Most
results have length one; a longer tuple splices several constituents back
into the parse. A result payload may be wrapped in :class:`Splice` to tell
the parser which input span it came from.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Optional

from .errors import (
    BindingConflictError,
    DisjunctionConflictError,
    DuplicateSignatureError,
    IllFormedPosetError,
)
from .poset import CartesianPoset, CartesianType

logger = logging.getLogger(__name__)


class Splice(NamedTuple):
    """A result payload tagged with the span it should occupy."""

    value: Any
    span: Optional[tuple]


def unwrap(value):
    return value.value if isinstance(value, Splice) else value


@dataclass(frozen=True)
class ReduceContext:
    """What a guard or rule body may see of the parse configuration.

    ``left_span`` and ``right_span`` are the input spans of the two operands;
    ``conj_positions`` holds the token indices whose lexical entry is a
    conjunction.
    """

    left_span: tuple = (0, 0)
    right_span: tuple = (0, 0)
    tokens: tuple = ()
    conj_positions: frozenset = frozenset()

    @property
    def spans(self):
        return (self.left_span, self.right_span)


def _normalize(out):
    if out is None:
        return None
    if isinstance(out, (tuple, list)):
        return tuple(out) or None
    return (out,)


class RuleFunction:
    """A named callable in the rule-function convention.

    ``fn`` may return a bare value, a list/tuple of values, or ``None``; the
    result is normalized to a tuple or ``None``.
    """

    def __init__(self, fn, expr=None, *, takes_ctx=False):
        self.fn = fn
        self.expr = expr or getattr(fn, "__name__", repr(fn))
        self.takes_ctx = takes_ctx

    def __call__(self, *args, ctx=None):
        if self.takes_ctx:
            return _normalize(self.fn(*args, ctx=ctx))
        return _normalize(self.fn(*args))

    def __repr__(self):
        return "RuleFunction(%s)" % self.expr

    def __str__(self):
        return self.expr

    def __eq__(self, other):
        if not isinstance(other, RuleFunction):
            return NotImplemented
        return self.expr == other.expr

    def __hash__(self):
        return hash(self.expr)


def as_rule(fn, expr=None, *, takes_ctx=False):
    if isinstance(fn, RuleFunction):
        return fn
    return RuleFunction(fn, expr, takes_ctx=takes_ctx)


def constant(value, expr=None):
    """A body ignoring its arguments and returning ``value``."""
    return RuleFunction(lambda *args: value, expr or str(value))


def comp(r, p):
    """``comp(r, p)(x, y) = r(p(x, y))``; ``None`` propagates."""
    r, p = as_rule(r), as_rule(p)

    def composed(*args, ctx=None):
        mid = p(*args, ctx=ctx)
        if mid is None:
            return None
        return r(*mid, ctx=ctx)

    return RuleFunction(composed, "comp(%s, %s)" % (r.expr, p.expr), takes_ctx=True)


def disj(r, p):
    """Whichever of ``r`` and ``p`` succeeds.

    Raises:
        DisjunctionConflictError: both operands succeed on the same input.
    """
    r, p = as_rule(r), as_rule(p)

    def either(*args, ctx=None):
        a = r(*args, ctx=ctx)
        b = p(*args, ctx=ctx)
        if a is not None and b is not None:
            raise DisjunctionConflictError(
                "disj(%s, %s): both operands apply to %s" % (r.expr, p.expr, ", ".join(map(str, args))))
        return a if a is not None else b

    return RuleFunction(either, "disj(%s, %s)" % (r.expr, p.expr), takes_ctx=True)


def opt(r):
    """``r`` applied if it succeeds, otherwise the input unchanged."""
    r = as_rule(r)

    def optional(*args, ctx=None):
        out = r(*args, ctx=ctx)
        return out if out is not None else tuple(args)

    return RuleFunction(optional, "opt(%s)" % r.expr, takes_ctx=True)


@dataclass(frozen=True)
class PartialRule:
    """One member of a generic rule, applicable below its signature."""

    signature: CartesianType
    body: RuleFunction
    guard: Optional[Callable] = None
    guard_name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "signature", CartesianType(*self.signature))
        object.__setattr__(self, "body", as_rule(self.body))
        if self.guard is not None and self.guard_name is None:
            object.__setattr__(self, "guard_name", getattr(self.guard, "__name__", "guard"))

    def __call__(self, x, y, ctx=None):
        if self.guard is not None and not self.guard(ctx):
            return None
        return self.body(x, y, ctx=ctx)

    def key(self):
        return (self.signature, self.body.expr, self.guard_name)


class GenericRule:
    """A set of partial rules plus its cartesian poset and binding function.

    Args:
        name: Used in annotations such as ``SYN_{NP⊗VP}``.
        hierarchy: The :class:`~genrules.poset.TypeHierarchy` of argument types.
        rules: :class:`PartialRule` objects, at most one per signature.
        check: Raise :class:`IllFormedPosetError` when the signatures do not
            form a well-formed cartesian poset.
    """

    def __init__(self, name, hierarchy, rules, *, check=True):
        self.name = name
        self.hierarchy = hierarchy
        table = {}
        for rule in rules:
            if not isinstance(rule, PartialRule):
                rule = PartialRule(*rule)
            if rule.signature in table:
                raise DuplicateSignatureError(name, rule.signature)
            table[rule.signature] = rule
        self.rules = table
        self.poset = CartesianPoset(hierarchy, table)
        if check:
            conflicts = self.poset.check_well_formed()
            if conflicts:
                raise IllFormedPosetError(name, conflicts)

    def __repr__(self):
        return "GenericRule(%r, %s)" % (self.name, ", ".join(str(s) for s in sorted(self.rules)))

    def __eq__(self, other):
        if not isinstance(other, GenericRule):
            return NotImplemented
        return self.name == other.name and self.hierarchy == other.hierarchy and self.key() == other.key()

    __hash__ = None

    def key(self):
        return tuple(sorted(r.key() for r in self.rules.values()))

    def label(self, signature):
        return "%s_{%s}" % (self.name, signature)

    def bind(self, x1, x2):
        """The most specific partial rule applicable to ``(x1, x2)``, or ``None``.

        Raises:
            BindingConflictError: several incomparable minimal candidates.
        """
        minimal = self.poset.minimal_upper_bounds((x1, x2))
        if not minimal:
            return None
        if len(minimal) > 1:
            raise BindingConflictError(self.name, CartesianType(x1, x2), minimal)
        return self.rules[minimal[0]]

    def apply(self, x1, phi1, x2, phi2, ctx=None):
        """Bind on the types, then run the chosen rule on the payloads."""
        rule = self.bind(x1, x2)
        if rule is None:
            return None
        return rule(phi1, phi2, ctx)

    def __call__(self, x1, x2):
        return self.bind(x1, x2)


def dynamic_bind(g, x1, x2):
    return g.bind(x1, x2)


def apply_generic(g, x1, phi1, x2, phi2, ctx=None):
    return g.apply(x1, phi1, x2, phi2, ctx)


@dataclass
class RuleRegistry:
    """Named rule functions and guards available to grammar files."""

    rules: dict = field(default_factory=dict)
    guards: dict = field(default_factory=dict)

    def register_rule(self, name, fn, *, takes_ctx=False):
        self.rules[name] = RuleFunction(fn, name, takes_ctx=takes_ctx)
        return self.rules[name]

    def register_guard(self, name, fn):
        self.guards[name] = fn
        return fn

    def copy(self):
        return RuleRegistry(dict(self.rules), dict(self.guards))


def _first(x, y):
    return x


def _second(x, y):
    return y


def _nil(*args):
    return None


BASE_REGISTRY = RuleRegistry()
BASE_REGISTRY.register_rule("first", _first)
BASE_REGISTRY.register_rule("second", _second)
BASE_REGISTRY.register_rule("nil", _nil)
