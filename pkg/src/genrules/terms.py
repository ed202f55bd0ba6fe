"""Lambda terms: the semantic payloads combined by semantic generic rules.

Concrete syntax::

    \\x. body          abstraction (several binders: \\x y. body)
    f(a)  or  f a      application, left associative; f(a, b) means f(a)(b)
    a & b             conjunction, binds looser than application
    Name              constant when the identifier starts uppercase ...
    name              ... variable otherwise

An identifier bound by an enclosing abstraction is always a variable,
whatever its case, so ``\\P. P(Betty)`` binds ``P``.
"""
import re
from dataclasses import dataclass

from .errors import ReductionLimitError, TermSyntaxError
from .generic_rule import RuleFunction

DEFAULT_STEP_LIMIT = 10_000


class Term:
    __slots__ = ()

    def __str__(self):
        return show(self)

    def __call__(self, arg):
        return apply_term(self, arg)


@dataclass(frozen=True, repr=False)
class Const(Term):
    name: str

    def __repr__(self):
        return "Const(%r)" % self.name


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str

    def __repr__(self):
        return "Var(%r)" % self.name


@dataclass(frozen=True, repr=False)
class Lam(Term):
    var: str
    body: Term

    def __repr__(self):
        return "Lam(%r, %r)" % (self.var, self.body)


@dataclass(frozen=True, repr=False)
class App(Term):
    fun: Term
    arg: Term

    def __repr__(self):
        return "App(%r, %r)" % (self.fun, self.arg)


@dataclass(frozen=True, repr=False)
class Conj(Term):
    left: Term
    right: Term

    def __repr__(self):
        return "Conj(%r, %r)" % (self.left, self.right)


def free_vars(t):
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    return free_vars(t.left) | free_vars(t.right)


def _all_names(t, acc):
    if isinstance(t, (Var, Const)):
        acc.add(t.name)
    elif isinstance(t, Lam):
        acc.add(t.var)
        _all_names(t.body, acc)
    elif isinstance(t, App):
        _all_names(t.fun, acc)
        _all_names(t.arg, acc)
    else:
        _all_names(t.left, acc)
        _all_names(t.right, acc)
    return acc


def fresh(base, avoid):
    stem = base.rstrip("0123456789") or "v"
    i = 1
    while "%s%d" % (stem, i) in avoid:
        i += 1
    return "%s%d" % (stem, i)


def substitute(t, name, value):
    """``t[name := value]``, renaming binders that would capture."""
    return _subst(t, name, value, free_vars(value))


def _subst(t, name, value, fv):
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(_subst(t.fun, name, value, fv), _subst(t.arg, name, value, fv))
    if isinstance(t, Conj):
        return Conj(_subst(t.left, name, value, fv), _subst(t.right, name, value, fv))
    if t.var == name or name not in free_vars(t.body):
        return t
    if t.var in fv:
        new = fresh(t.var, fv | _all_names(t.body, set()) | {name})
        body = _subst(t.body, t.var, Var(new), {new})
        return Lam(new, _subst(body, name, value, fv))
    return Lam(t.var, _subst(t.body, name, value, fv))


def _step(t):
    """One leftmost-outermost beta step, or ``None`` at normal form."""
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return substitute(t.fun.body, t.fun.var, t.arg)
        f = _step(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = _step(t.arg)
        return None if a is None else App(t.fun, a)
    if isinstance(t, Lam):
        b = _step(t.body)
        return None if b is None else Lam(t.var, b)
    if isinstance(t, Conj):
        left = _step(t.left)
        if left is not None:
            return Conj(left, t.right)
        right = _step(t.right)
        return None if right is None else Conj(t.left, right)
    return None


def normalize(t, limit=DEFAULT_STEP_LIMIT):
    """Beta-normal form by normal-order reduction.

    Raises:
        ReductionLimitError: more than ``limit`` steps were needed.
    """
    for _ in range(limit + 1):
        nxt = _step(t)
        if nxt is None:
            return t
        t = nxt
    raise ReductionLimitError(limit)


def apply_term(f, a, limit=DEFAULT_STEP_LIMIT):
    return normalize(App(f, a), limit)


def conj_terms(a, b):
    return Conj(a, b)


def template_rule(template, limit=DEFAULT_STEP_LIMIT):
    """A rule body applying ``template`` to the payloads, then reducing.

    ``template_rule("\\x y. x(y)")`` combines two semantic payloads by
    applying the first to the second.
    """
    if isinstance(template, str):
        template = parse_term(template)

    def body(*payloads):
        t = template
        for p in payloads:
            t = App(t, p)
        return normalize(t, limit)

    return RuleFunction(body, show(template))


def _nameless(t, env):
    if isinstance(t, Var):
        for depth, name in enumerate(reversed(env)):
            if name == t.name:
                return ("b", depth)
        return ("f", t.name)
    if isinstance(t, Const):
        return ("c", t.name)
    if isinstance(t, Lam):
        return ("l", _nameless(t.body, env + [t.var]))
    if isinstance(t, App):
        return ("a", _nameless(t.fun, env), _nameless(t.arg, env))
    return ("&", _nameless(t.left, env), _nameless(t.right, env))


def alpha_eq(a, b):
    """Equality up to consistent renaming of bound variables."""
    return _nameless(a, []) == _nameless(b, [])


def alpha_key(t):
    """A hashable key shared exactly by alpha-equivalent terms."""
    return _nameless(t, [])


# printing

def show(t):
    if isinstance(t, (Const, Var)):
        return t.name
    if isinstance(t, Lam):
        return "\\%s. %s" % (t.var, show(t.body))
    if isinstance(t, App):
        f = show(t.fun)
        if isinstance(t.fun, (Lam, Conj)):
            f = "(" + f + ")"
        return "%s(%s)" % (f, show(t.arg))
    left = show(t.left)
    if isinstance(t.left, Lam):
        left = "(" + left + ")"
    right = show(t.right)
    if isinstance(t.right, (Lam, Conj)):
        right = "(" + right + ")"
    return "%s & %s" % (left, right)


# parsing

_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[\\().&,]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError("unexpected character %r at offset %d in %r" % (text[pos], pos, text))
        out.append(m.group("id") or m.group("op"))
        pos = m.end()
    return out


class _TermParser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise TermSyntaxError("expected %s, found %s in %r" % (
                expected or "a term", "end of input" if tok is None else repr(tok), self.text))
        self.i += 1
        return tok

    def parse(self):
        t = self.term(())
        if self.peek() is not None:
            raise TermSyntaxError("trailing input %r in %r" % (self.peek(), self.text))
        return t

    def term(self, bound):
        t = self.operand(bound)
        while self.peek() == "&":
            self.take("&")
            t = Conj(t, self.operand(bound))
        return t

    def operand(self, bound):
        if self.peek() == "\\":
            return self.lam(bound)
        t = self.atom(bound)
        while True:
            tok = self.peek()
            if tok == "(":
                self.take("(")
                args = [self.term(bound)]
                while self.peek() == ",":
                    self.take(",")
                    args.append(self.term(bound))
                self.take(")")
                for a in args:
                    t = App(t, a)
            elif tok == "\\":
                return App(t, self.lam(bound))
            elif tok is not None and tok not in ")&,.":
                t = App(t, self.atom(bound))
            else:
                return t

    def lam(self, bound):
        self.take("\\")
        names = []
        while self.peek() not in (None, ".") and self.peek() not in "\\().&,":
            names.append(self.take())
        if not names:
            raise TermSyntaxError("abstraction without a variable in %r" % self.text)
        self.take(".")
        body = self.term(bound + tuple(names))
        for n in reversed(names):
            body = Lam(n, body)
        return body

    def atom(self, bound):
        tok = self.take()
        if tok == "(":
            t = self.term(bound)
            self.take(")")
            return t
        if tok in "\\().&,":
            raise TermSyntaxError("unexpected %r in %r" % (tok, self.text))
        if tok in bound or not tok[0].isupper():
            return Var(tok)
        return Const(tok)


def parse_term(text):
    """Read a term from its concrete syntax."""
    return _TermParser(text).parse()
