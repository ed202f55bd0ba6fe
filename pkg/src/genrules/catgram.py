"""Categorial categories, the coordination rules, and the NCC generic rule.

Category syntax (reader and printer agree)::

    np                 atom (identifier starting lowercase, or a longer uppercase name)
    X                  variable (a single uppercase letter, optionally followed by digits)
    a/b                forward slash: result/argument
    a\\b                backward slash: argument\\result
    <a, b, c>          tuple; <> is the empty tuple
    ( ... )            grouping; both slashes associate to the left

Tuples keep, beside each element, the input span the element came from, so
that splitting a tuple back into constituents can restore word positions.
Spans never take part in matching; :func:`same_shape` ignores them.
"""
import re
from dataclasses import dataclass

from .errors import CategorySyntaxError
from .generic_rule import (
    BASE_REGISTRY,
    GenericRule,
    PartialRule,
    RuleFunction,
    Splice,
    comp,
    disj,
    opt,
)
from .poset import TypeHierarchy


class Category:
    __slots__ = ()

    def __str__(self):
        return show(self)

    def size(self):
        return 1


@dataclass(frozen=True, repr=False)
class Atom(Category):
    name: str

    def __repr__(self):
        return "Atom(%r)" % self.name


@dataclass(frozen=True, repr=False)
class Var(Category):
    name: str

    def __repr__(self):
        return "Var(%r)" % self.name


@dataclass(frozen=True, repr=False)
class Forward(Category):
    """``result/argument``"""

    result: Category
    argument: Category

    def __repr__(self):
        return "Forward(%r, %r)" % (self.result, self.argument)

    def size(self):
        return 1 + self.result.size() + self.argument.size()


@dataclass(frozen=True, repr=False)
class Backward(Category):
    """``argument\\result``"""

    argument: Category
    result: Category

    def __repr__(self):
        return "Backward(%r, %r)" % (self.argument, self.result)

    def size(self):
        return 1 + self.argument.size() + self.result.size()


@dataclass(frozen=True, repr=False)
class Tuple(Category):
    """A sequence product, stored flat.

    An n-tuple is the left-nested pair of its first n-1 elements and its last
    element; :meth:`pair` exposes that view, and extending a tuple on the
    right (``Tuple.of(t, y)`` with ``t`` a tuple) yields the n+1-tuple.
    """

    elements: tuple = ()
    spans: tuple = None

    def __post_init__(self):
        elements = tuple(self.elements)
        spans = self.spans
        spans = (None,) * len(elements) if spans is None else tuple(spans)
        if len(spans) != len(elements):
            raise ValueError("one span per tuple element required")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "spans", spans)

    def __repr__(self):
        return "Tuple(%r)" % (self.elements,)

    def __len__(self):
        return len(self.elements)

    def size(self):
        return 1 + sum(e.size() for e in self.elements)

    def flatten(self):
        return list(self.elements)

    def pair(self):
        """``(<x1..xn-1>, xn)`` for n >= 2."""
        if len(self.elements) < 2:
            raise ValueError("pair view needs at least two elements")
        return Tuple(self.elements[:-1], self.spans[:-1]), self.elements[-1]

    @classmethod
    def of(cls, x, y, x_span=None, y_span=None):
        if isinstance(x, Tuple) and len(x.elements) >= 1:
            return cls(x.elements + (y,), x.spans + (y_span,))
        return cls((x, y), (x_span, y_span))


def strip_spans(c):
    if isinstance(c, Tuple):
        return Tuple(tuple(strip_spans(e) for e in c.elements))
    if isinstance(c, Forward):
        return Forward(strip_spans(c.result), strip_spans(c.argument))
    if isinstance(c, Backward):
        return Backward(strip_spans(c.argument), strip_spans(c.result))
    return c


def same_shape(a, b):
    """Syntactic equality, ignoring recorded spans."""
    return strip_spans(a) == strip_spans(b)


def has_vars(c):
    if isinstance(c, Var):
        return True
    if isinstance(c, Forward):
        return has_vars(c.result) or has_vars(c.argument)
    if isinstance(c, Backward):
        return has_vars(c.argument) or has_vars(c.result)
    if isinstance(c, Tuple):
        return any(has_vars(e) for e in c.elements)
    return False


# printing

def show(c):
    if isinstance(c, (Atom, Var)):
        return c.name
    if isinstance(c, Tuple):
        return "<" + ", ".join(show(e) for e in c.elements) + ">"
    if isinstance(c, Forward):
        return "%s/%s" % (_operand(c.result), _operand(c.argument))
    return "%s\\%s" % (_operand(c.argument), _operand(c.result))


def _operand(c):
    s = show(c)
    return "(" + s + ")" if isinstance(c, (Forward, Backward)) else s


# reading

_CAT_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_'\-]*)|(?P<op>[/\\()<>,]))")
_VAR_NAME = re.compile(r"[A-Z][0-9]*$")


def parse_category(text, aliases=None):
    """Read a category. ``aliases`` maps atom names to categories."""
    aliases = aliases or {}
    toks = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _CAT_TOKEN.match(stripped, pos)
        if not m:
            raise CategorySyntaxError("unexpected character %r in category %r" % (stripped[pos], text))
        toks.append(m.group("id") or m.group("op"))
        pos = m.end()
    if not toks:
        raise CategorySyntaxError("empty category")
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take(expected=None):
        nonlocal i
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise CategorySyntaxError("expected %s in category %r" % (expected or "a category", text))
        i += 1
        return tok

    def slashed():
        c = primary()
        while peek() in ("/", "\\"):
            op = take()
            rhs = primary()
            c = Forward(c, rhs) if op == "/" else Backward(c, rhs)
        return c

    def primary():
        tok = take()
        if tok == "(":
            c = slashed()
            take(")")
            return c
        if tok == "<":
            elems = []
            if peek() != ">":
                elems.append(slashed())
                while peek() == ",":
                    take(",")
                    elems.append(slashed())
            take(">")
            return Tuple(tuple(elems))
        if tok in ("/", "\\", ")", ">", ","):
            raise CategorySyntaxError("unexpected %r in category %r" % (tok, text))
        if _VAR_NAME.match(tok):
            return Var(tok)
        if tok in aliases:
            return aliases[tok]
        return Atom(tok)

    c = slashed()
    if peek() is not None:
        raise CategorySyntaxError("trailing %r in category %r" % (peek(), text))
    return c


# unification

def _walk(c, subst):
    while isinstance(c, Var) and c.name in subst:
        c = subst[c.name]
    return c


def _occurs(name, c, subst):
    c = _walk(c, subst)
    if isinstance(c, Var):
        return c.name == name
    if isinstance(c, Forward):
        return _occurs(name, c.result, subst) or _occurs(name, c.argument, subst)
    if isinstance(c, Backward):
        return _occurs(name, c.argument, subst) or _occurs(name, c.result, subst)
    if isinstance(c, Tuple):
        return any(_occurs(name, e, subst) for e in c.elements)
    return False


def unify(a, b, subst=None):
    """Most general unifier extending ``subst``, or ``None``."""
    subst = dict(subst or {})
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = _walk(x, subst), _walk(y, subst)
        if isinstance(x, Var) and isinstance(y, Var) and x.name == y.name:
            continue
        if isinstance(x, Var):
            if _occurs(x.name, y, subst):
                return None
            subst[x.name] = y
        elif isinstance(y, Var):
            if _occurs(y.name, x, subst):
                return None
            subst[y.name] = x
        elif isinstance(x, Atom) and isinstance(y, Atom):
            if x.name != y.name:
                return None
        elif isinstance(x, Forward) and isinstance(y, Forward):
            stack.append((x.result, y.result))
            stack.append((x.argument, y.argument))
        elif isinstance(x, Backward) and isinstance(y, Backward):
            stack.append((x.argument, y.argument))
            stack.append((x.result, y.result))
        elif isinstance(x, Tuple) and isinstance(y, Tuple):
            if len(x.elements) != len(y.elements):
                return None
            stack.extend(zip(x.elements, y.elements))
        else:
            return None
    return subst


def apply_subst(c, subst):
    c = _walk(c, subst)
    if isinstance(c, Forward):
        return Forward(apply_subst(c.result, subst), apply_subst(c.argument, subst))
    if isinstance(c, Backward):
        return Backward(apply_subst(c.argument, subst), apply_subst(c.result, subst))
    if isinstance(c, Tuple):
        return Tuple(tuple(apply_subst(e, subst) for e in c.elements), c.spans)
    return c


# the binary rules

def _rename(c, suffix):
    if isinstance(c, Var):
        return Var(c.name + suffix)
    if isinstance(c, Forward):
        return Forward(_rename(c.result, suffix), _rename(c.argument, suffix))
    if isinstance(c, Backward):
        return Backward(_rename(c.argument, suffix), _rename(c.result, suffix))
    if isinstance(c, Tuple):
        return Tuple(tuple(_rename(e, suffix) for e in c.elements), c.spans)
    return c


def _apply(functor, argument):
    # the operand's variables are renamed apart; a result that still holds
    # a variable is underdetermined and rejected
    if has_vars(argument):
        argument = _rename(argument, "'")
    s = unify(functor.argument, argument)
    if s is None:
        return None
    out = apply_subst(functor.result, s)
    return None if has_vars(out) else out


def fa(x, y):
    """Forward application ``X/Y  Y -> X``."""
    if not isinstance(x, Forward):
        return None
    return _apply(x, y)


def ba(y, x):
    """Backward application ``Y  Y\\X -> X``."""
    if not isinstance(x, Backward):
        return None
    return _apply(x, y)


def ituple(x, y, x_span=None, y_span=None):
    """Tuple introduction. A tuple on the left is extended by one element."""
    return Tuple.of(x, y, x_span, y_span)


def _is_coordination(c):
    return isinstance(c, Backward) and isinstance(c.argument, Tuple) and isinstance(c.result, Tuple)


def scan(xn, r, span=None):
    """Cancel the last pending left-conjunct element of ``r`` against ``xn``.

    ``r`` must look like ``<X1..Xn>\\<Y1..Ym>``. When ``xn`` matches ``Xn`` the
    result is ``<X1..Xn-1>\\<Y1..Ym>``. A tuple operand whose elements match a
    whole suffix of the pending elements cancels that suffix at once.

    The right tuple records, for every cancelled position, the span of the
    left-conjunct material that matched it.
    """
    if not _is_coordination(r):
        return None
    left, right = r.argument, r.result
    n = len(left.elements)
    if n == 0:
        return None
    if same_shape(left.elements[-1], xn):
        k = n - 1
        if k < len(right.elements):
            new_spans = right.spans[:k] + (span,) + right.spans[k + 1:]
        else:
            new_spans = right.spans
        return Backward(Tuple(left.elements[:-1], left.spans[:-1]), Tuple(right.elements, new_spans))
    if isinstance(xn, Tuple) and 2 <= len(xn.elements) <= n:
        m = len(xn.elements)
        if all(same_shape(a, b) for a, b in zip(left.elements[n - m:], xn.elements)):
            spans = list(right.spans)
            for offset, sp in enumerate(xn.spans):
                if n - m + offset < len(spans):
                    spans[n - m + offset] = sp
            return Backward(Tuple(left.elements[:n - m], left.spans[:n - m]), Tuple(right.elements, tuple(spans)))
    return None


def dtuple(c):
    """Tuple elimination on an exhausted coordination ``<>\\<X1..Xn>``."""
    if not _is_coordination(c) or len(c.argument.elements) != 0:
        return None
    return list(c.result.elements)


# rule functions for generic rules

def _fa_rule(x, y):
    return fa(x, y)


def _ba_rule(x, y):
    return ba(x, y)


def _ituple_rule(x, y, ctx=None):
    if ctx is None:
        return ituple(x, y)
    return ituple(x, y, ctx.left_span, ctx.right_span)


def _scan_rule(x, r, ctx=None):
    return scan(x, r, None if ctx is None else ctx.left_span)


def _dtuple_rule(c, ctx=None):
    if dtuple(c) is None:
        return None
    return tuple(Splice(e, sp) for e, sp in zip(c.result.elements, c.result.spans))


FA = RuleFunction(_fa_rule, "fa")
BA = RuleFunction(_ba_rule, "ba")
ITUPLE = RuleFunction(_ituple_rule, "ituple", takes_ctx=True)
SCAN = RuleFunction(_scan_rule, "scan", takes_ctx=True)
DTUPLE = RuleFunction(_dtuple_rule, "dtuple", takes_ctx=True)

CATEGORIAL_RULES = {"fa": FA, "ba": BA, "ituple": ITUPLE, "scan": SCAN, "dtuple": DTUPLE}


# guards: the licensing conjunction is a terminal, so checks are by position

def conj_before(ctx):
    """A conjunction token immediately precedes the left operand."""
    return ctx is not None and ctx.left_span[0] - 1 in ctx.conj_positions


def conj_after(ctx):
    """A conjunction token immediately follows the right operand."""
    return ctx is not None and ctx.right_span[1] in ctx.conj_positions


def conj_adjacent(ctx):
    return conj_before(ctx) or conj_after(ctx)


GUARDS = {"conj-before": conj_before, "conj-after": conj_after, "conj-adjacent": conj_adjacent}

CATEGORIAL_REGISTRY = BASE_REGISTRY.copy()
CATEGORIAL_REGISTRY.rules.update(CATEGORIAL_RULES)
CATEGORIAL_REGISTRY.guards.update(GUARDS)


# classification into the hierarchy

_NP = Atom("np")
_S = Atom("s")
_VP = Backward(_NP, _S)
VM = Backward(_VP, _VP)


def _is_conj_scheme(c):
    return (isinstance(c, Forward) and isinstance(c.argument, Var)
            and isinstance(c.result, Backward)
            and c.result.argument == c.argument and c.result.result == c.argument)


def _is_verb(c):
    if not isinstance(c, Forward):
        return False
    while isinstance(c, Forward):
        c = c.result
    return same_shape(c, _VP)


class Classifier:
    """Maps categories to hierarchy types for dynamic binding.

    Args:
        hierarchy: The type hierarchy.
        shapes: Extra ``{category: type}`` entries, e.g. ``vm`` for
            ``(np\\s)\\(np\\s)``. Atoms named like a hierarchy type classify
            as that type without being listed.
        fallback: Type for everything else; defaults to the hierarchy top.
    """

    def __init__(self, hierarchy, shapes=None, fallback=None):
        self.hierarchy = hierarchy
        self.shapes = {strip_spans(k): v for k, v in (shapes or {}).items()}
        self.fallback = fallback or hierarchy.top
        if self.fallback is None:
            raise ValueError("a classifier needs a fallback type or a hierarchy top")

    def _known(self, name):
        return name if name in self.hierarchy else self.fallback

    def __call__(self, c, ctx=None):
        if isinstance(c, str):
            return c
        if isinstance(c, Tuple):
            return self._known("tuple")
        if _is_coordination(c):
            return self._known("c<>")
        if _is_conj_scheme(c):
            return self._known("conj")
        shape = self.shapes.get(strip_spans(c))
        if shape is not None:
            return shape
        if isinstance(c, Atom) and c.name in self.hierarchy:
            return c.name
        if _is_verb(c):
            return self._known("verb")
        return self.fallback


def classify(c, ctx=None, classifier=None):
    return (classifier or NCC_CLASSIFIER)(c, ctx)


# the NCC grammar

NCC_EDGES = [
    ("phrase", "T"), ("word", "T"),
    ("c<>", "phrase"), ("C", "phrase"),
    ("np", "C"), ("vm", "C"), ("tuple", "C"), ("pp", "C"),
    ("conj", "word"), ("verb", "word"),
]

NCC_ALIASES = {"vp": _VP, "vm": VM}

NCC_LEXICON = {
    "John": ["np"], "Jane": ["np"], "Chris": ["np"], "Peter": ["np"], "Mary": ["np"],
    "met": ["(np\\s)/np"], "made": ["(np\\s)/np"], "painted": ["(np\\s)/np"],
    "read": ["((np\\s)/pp)/np"],
    "yesterday": ["vp\\vp"], "today": ["vp\\vp"], "tomorrow": ["vp\\vp"],
    "and": ["(X\\X)/X"],
}


def ncc_hierarchy():
    return TypeHierarchy.from_edges(NCC_EDGES, top="T")


NCC_CLASSIFIER = Classifier(ncc_hierarchy(), {VM: "vm"})


def ncc_partial_rules(guards=True):
    before = conj_before if guards else None
    around = conj_adjacent if guards else None
    return [
        PartialRule(("T", "T"), disj(FA, BA)),
        PartialRule(("C", "C"), ITUPLE, before, "conj-before" if guards else None),
        PartialRule(("np", "verb"), ITUPLE, around, "conj-adjacent" if guards else None),
        PartialRule(("C", "c<>"), comp(opt(DTUPLE), SCAN)),
    ]


def build_ncc_grammar(name="SYN"):
    """The generic rule for non-constituent coordination.

    Returns:
        ``(rule, classifier, lexicon)`` where ``lexicon`` maps words to lists
        of categories.
    """
    h = ncc_hierarchy()
    rule = GenericRule(name, h, ncc_partial_rules())
    lexicon = {w: [parse_category(c, NCC_ALIASES) for c in cats] for w, cats in NCC_LEXICON.items()}
    return rule, Classifier(h, {VM: "vm"}), lexicon
