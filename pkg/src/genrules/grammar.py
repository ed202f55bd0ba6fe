"""Grammar files: reading, compile-time checking, printing.

A grammar file is line oriented; ``#`` starts a comment. Sections::

    [types]
    top T                   # optional maximal type
    np < C                  # child < parent (chains a < b < c allowed)
    S                       # a type with no declared parent
    vp = np\\s               # category alias; an alias named like a type
                            # also tells the classifier which category
                            # shape belongs to that type
    [lexicon]
    word : category [: lambda-term]
    [cfg]
    A -> B C
    [generic NAME]
    t1 t2 : body-expr [requires guard]
    [goal]
    category-or-type

``body-expr`` is a rule name (``fa``, ``ba``, ``ituple``, ``scan``,
``dtuple``, ``first``, ``second``, ``nil`` or a registered user rule), a
type name (a constant result), a lambda template such as ``\\x y. x(y)``,
or ``comp(e, e)``, ``disj(e, e)``, ``opt(e)`` over those.

When any generic rule uses one of the categorial rules, lexicon entries are
read as categories and dynamic binding classifies them into the hierarchy;
otherwise lexicon entries name hierarchy types directly.
"""
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import catgram
from .catgram import CATEGORIAL_REGISTRY, CATEGORIAL_RULES, Classifier, parse_category
from .errors import (
    GenericRuleError,
    GrammarError,
    GrammarSyntaxError,
)
from .generic_rule import GenericRule, PartialRule, RuleFunction, comp, constant, disj, opt
from .parser import CfgReducer, Production, ShiftReduceParser, SynReducer, SynSemReducer
from .poset import TypeHierarchy
from .terms import parse_term, template_rule

BUNDLED = ("eq3-toy", "fig1-illformed", "betty", "betty-cfg", "ncc", "ncc-unrestricted")

_SECTION = re.compile(r"^\[\s*(types|lexicon|cfg|generic|goal)(?:\s+(\S+))?\s*\]$")
_ALIAS = re.compile(r"^(\S+)\s*=\s*(.+)$")
_REQUIRES = re.compile(r"^(.*?)\s+requires\s+(\S+)$")


def bundled_path(name):
    """Filesystem path of a grammar shipped with the package."""
    if not name.endswith(".gr"):
        name += ".gr"
    return Path(str(resources.files("genrules") / "grammars" / name))


# body expressions

def _body_tokens(text, line):
    toks = re.findall(r"[(),]|[^\s(),]+", text)
    if not toks:
        raise GrammarSyntaxError("empty rule body", line)
    return toks


def parse_body(text, line=None):
    """Parse a body expression into a nested tuple AST."""
    text = text.strip()
    if text.startswith("\\"):
        return ("term", text)
    toks = _body_tokens(text, line)
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(toks) or toks[pos] in "(),":
            raise GrammarSyntaxError("malformed rule body %r" % text, line)
        name = toks[pos]
        pos += 1
        if pos < len(toks) and toks[pos] == "(":
            pos += 1
            args = [expr()]
            while pos < len(toks) and toks[pos] == ",":
                pos += 1
                args.append(expr())
            if pos >= len(toks) or toks[pos] != ")":
                raise GrammarSyntaxError("unbalanced parentheses in %r" % text, line)
            pos += 1
            return ("call", name, tuple(args))
        return ("name", name)

    ast = expr()
    if pos != len(toks):
        raise GrammarSyntaxError("trailing input in rule body %r" % text, line)
    return ast


def _body_names(ast):
    if ast[0] == "name":
        yield ast[1]
    elif ast[0] == "call":
        for a in ast[2]:
            yield from _body_names(a)


_COMBINATORS = {"comp": (comp, 2), "disj": (disj, 2), "opt": (opt, 1)}


def compile_body(ast, registry, hierarchy, line=None):
    kind = ast[0]
    if kind == "term":
        return template_rule(parse_term(ast[1]))
    if kind == "call":
        fn, arity = _COMBINATORS.get(ast[1], (None, None))
        if fn is None:
            raise GrammarSyntaxError("unknown combinator %r" % ast[1], line)
        if len(ast[2]) != arity:
            raise GrammarSyntaxError("%s takes %d argument(s)" % (ast[1], arity), line)
        return fn(*(compile_body(a, registry, hierarchy, line) for a in ast[2]))
    name = ast[1]
    if name in registry.rules:
        return registry.rules[name]
    if name in hierarchy:
        return constant(name)
    raise GrammarSyntaxError("unknown rule or type %r in rule body" % name, line)


# raw file structure

@dataclass
class _Raw:
    declared: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    top: object = None
    aliases: list = field(default_factory=list)
    lexicon: list = field(default_factory=list)
    cfg: list = field(default_factory=list)
    generic: dict = field(default_factory=dict)
    goal: object = None


def _read(text, path=None):
    raw = _Raw()
    seen = set()
    section = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            kind, name = m.group(1), m.group(2)
            if (kind == "generic") != (name is not None):
                raise GrammarSyntaxError("section [%s] %s a name" % (
                    kind, "needs" if kind == "generic" else "takes no"), lineno, path)
            key = (kind, name)
            if key in seen:
                raise GrammarSyntaxError("duplicate section [%s]" % " ".join(filter(None, key)), lineno, path)
            seen.add(key)
            section = key
            if kind == "generic":
                raw.generic[name] = []
            continue
        if line.startswith("["):
            raise GrammarSyntaxError("unknown section header %r" % line, lineno, path)
        if section is None:
            raise GrammarSyntaxError("content before the first section", lineno, path)
        kind, name = section
        try:
            _read_line(raw, kind, name, line, lineno)
        except GrammarSyntaxError as exc:
            if exc.path is None and path is not None:
                raise GrammarSyntaxError(str(exc).split(" ", 1)[1], lineno, path) from None
            raise
    return raw


def _read_line(raw, kind, name, line, lineno):
    if kind == "types":
        m = _ALIAS.match(line)
        if m:
            raw.aliases.append((m.group(1), m.group(2).strip(), lineno))
            return
        parts = line.split()
        if parts[0] == "top" and len(parts) == 2:
            if raw.top is not None:
                raise GrammarSyntaxError("top declared twice", lineno)
            raw.top = (parts[1], lineno)
            return
        if len(parts) == 1:
            raw.declared.append((parts[0], lineno))
            return
        if len(parts) % 2 == 0 or any(p != "<" for p in parts[1::2]):
            raise GrammarSyntaxError("expected 'child < parent', got %r" % line, lineno)
        names = parts[0::2]
        for child, parent in zip(names, names[1:]):
            raw.edges.append((child, parent, lineno))
    elif kind == "lexicon":
        parts = [p.strip() for p in line.split(":", 2)]
        if len(parts) < 2 or not parts[0] or not parts[1]:
            raise GrammarSyntaxError("expected 'word : category [: term]', got %r" % line, lineno)
        if len(parts[0].split()) != 1:
            raise GrammarSyntaxError("lexical item %r contains whitespace; join words with '+'" % parts[0], lineno)
        raw.lexicon.append((parts[0], parts[1], parts[2] if len(parts) == 3 else None, lineno))
    elif kind == "cfg":
        m = re.match(r"^(\S+)\s*->\s*(\S+)\s+(\S+)$", line)
        if not m:
            raise GrammarSyntaxError("expected binary production 'A -> B C', got %r" % line, lineno)
        raw.cfg.append((m.group(1), m.group(2), m.group(3), lineno))
    elif kind == "generic":
        head, sep, body = line.partition(":")
        sig = head.split()
        if not sep or len(sig) != 2 or not body.strip():
            raise GrammarSyntaxError("expected 't1 t2 : body [requires guard]', got %r" % line, lineno)
        body = body.strip()
        guard = None
        m = _REQUIRES.match(body)
        if m:
            body, guard = m.group(1).strip(), m.group(2)
        raw.generic[name].append((sig[0], sig[1], body, guard, lineno))
    elif kind == "goal":
        if raw.goal is not None:
            raise GrammarSyntaxError("[goal] holds a single category or type", lineno)
        raw.goal = (line, lineno)


# the loaded grammar

@dataclass
class CheckReport:
    problems: list
    conflicts: list

    @property
    def ok(self):
        return not self.problems


class Grammar:
    """A loaded grammar file. Use :func:`load_grammar` to build one."""

    def __init__(self, hierarchy, aliases, lexicon, cfg, generic, goal, domain, classifier=None, path=None):
        self.hierarchy = hierarchy
        self.aliases = aliases
        self.lexicon = lexicon
        self.cfg = cfg
        self.generic = generic
        self.goal = goal
        self.domain = domain
        self.classifier = classifier
        self.path = path

    def key(self):
        return (
            self.hierarchy,
            tuple(self.aliases.items()),
            tuple((w, tuple(es)) for w, es in sorted(self.lexicon.items())),
            tuple(self.cfg),
            tuple((name, g.key()) for name, g in self.generic.items()),
            self.goal,
            self.domain,
        )

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return self.key() == other.key()

    __hash__ = None

    def __repr__(self):
        return "Grammar(%s, %d words, rules=%s)" % (self.domain, len(self.lexicon), list(self.generic))

    @property
    def mode(self):
        if self.cfg:
            return "cfg"
        if "SYN" in self.generic and "SEM" in self.generic:
            return "syn-sem"
        return "syn"

    def classify(self, syn, ctx=None):
        return self.classifier(syn) if self.classifier is not None else syn

    def make_parser(self, **kwargs):
        mode = self.mode
        classify = self.classifier
        if mode == "cfg":
            if "SEM" in self.generic:
                rule = self.generic["SEM"]
            elif len(self.generic) == 1:
                rule = next(iter(self.generic.values()))
            else:
                raise GenericRuleError("a grammar with [cfg] needs one generic rule, or one named SEM")
            reducer = CfgReducer(self.cfg, rule, classify)
        elif mode == "syn-sem":
            reducer = SynSemReducer(self.generic["SYN"], self.generic["SEM"], classify)
        else:
            reducer = SynReducer(list(self.generic.values()), classify)
        return ShiftReduceParser(self.lexicon, reducer, classify=classify, hierarchy=self.hierarchy,
                                 goal=self.goal, **kwargs)

    def parse(self, sentence, goal=None, **kwargs):
        tokens = sentence.split() if isinstance(sentence, str) else list(sentence)
        return self.make_parser(**kwargs).parse(tokens, goal)

    def resolve_goal(self, text):
        """Read a goal given on the command line."""
        if text in self.hierarchy:
            return text
        if self.domain == "categories":
            return parse_category(text, self.aliases)
        raise GrammarSyntaxError("goal %r is not a type of the hierarchy" % text)

    def dumps(self):
        """Canonical text of the grammar; loading it gives an equal grammar."""
        h = self.hierarchy
        out = ["[types]"]
        if h.top is not None:
            out.append("top %s" % h.top)
        in_edges = {c for c, _ in h.edges} | {p for _, p in h.edges}
        for t in sorted(h.types - in_edges - {h.top}):
            out.append(t)
        for c, p in sorted(h.edges):
            out.append("%s < %s" % (c, p))
        for name, cat in self.aliases.items():
            out.append("%s = %s" % (name, cat))
        out += ["", "[lexicon]"]
        for word, entries in sorted(self.lexicon.items()):
            for syn, sem in entries:
                out.append("%s : %s" % (word, syn) + ("" if sem is None else " : %s" % sem))
        if self.cfg:
            out += ["", "[cfg]"]
            out += [str(p) for p in self.cfg]
        for name, g in self.generic.items():
            out += ["", "[generic %s]" % name]
            for sig in sorted(g.rules):
                r = g.rules[sig]
                line = "%s %s : %s" % (sig.left, sig.right, r.body.expr)
                if r.guard_name:
                    line += " requires %s" % r.guard_name
                out.append(line)
        if self.goal is not None:
            out += ["", "[goal]", str(self.goal)]
        return "\n".join(out) + "\n"


def _build(raw, registry, path):
    problems = []

    def problem(line, msg):
        problems.append(("line %d: " % line if line else "") + msg)

    types = {n for n, _ in raw.declared}
    for c, p, _ in raw.edges:
        types.update((c, p))
    top = raw.top[0] if raw.top else None
    if top is not None:
        types.add(top)
    try:
        hierarchy = TypeHierarchy(types, [(c, p) for c, p, _ in raw.edges], top,
                                  require_bounded_complete=False)
    except GenericRuleError as exc:
        problem(raw.top[1] if raw.top and "top" in str(exc) else None, str(exc))
        return None, problems, []
    for v in hierarchy.bounded_completeness_violations():
        problem(None, "bounded completeness: " + str(v))
    if problems:
        return None, problems, []

    asts = {}
    for name, lines in raw.generic.items():
        for t1, t2, body, guard, lineno in lines:
            asts[(name, lineno)] = parse_body(body, lineno)
    uses_categories = any(
        n in CATEGORIAL_RULES for ast in asts.values() for n in _body_names(ast))
    domain = "categories" if uses_categories else "types"

    aliases = {}
    for name, text, lineno in raw.aliases:
        try:
            aliases[name] = parse_category(text, aliases)
        except GenericRuleError as exc:
            problem(lineno, str(exc))

    lexicon = {}
    for word, cat, term, lineno in raw.lexicon:
        try:
            if domain == "categories":
                syn = parse_category(cat, aliases)
            else:
                if cat not in hierarchy:
                    raise GrammarSyntaxError("lexical type %r is not declared in [types]" % cat)
                syn = cat
            sem = parse_term(term) if term is not None else None
        except GenericRuleError as exc:
            problem(lineno, str(exc))
            continue
        lexicon.setdefault(word, []).append((syn, sem))

    cfg = []
    for lhs, b, c, lineno in raw.cfg:
        missing = [t for t in (lhs, b, c) if t not in hierarchy]
        if missing:
            problem(lineno, "production uses undeclared type %r" % missing[0])
            continue
        cfg.append(Production(lhs, b, c))

    generic = {}
    conflicts = []
    for name, lines in raw.generic.items():
        rules = {}
        for t1, t2, body, guard, lineno in lines:
            bad = [t for t in (t1, t2) if t not in hierarchy]
            if bad:
                problem(lineno, "signature uses undeclared type %r" % bad[0])
                continue
            if (t1, t2) in rules:
                problem(lineno, "generic rule %s declares signature %s⊗%s twice" % (name, t1, t2))
                continue
            try:
                fn = compile_body(asts[(name, lineno)], registry, hierarchy, lineno)
            except GenericRuleError as exc:
                problem(lineno, str(exc))
                continue
            guard_fn = None
            if guard is not None:
                guard_fn = registry.guards.get(guard)
                if guard_fn is None:
                    problem(lineno, "unknown guard %r" % guard)
                    continue
            rules[(t1, t2)] = PartialRule((t1, t2), fn, guard_fn, guard)
        g = GenericRule(name, hierarchy, rules.values(), check=False)
        found = g.poset.check_well_formed()
        for c in found:
            problem(None, "generic rule %s is not well-formed: %s" % (name, c.describe()))
        conflicts.extend(found)
        generic[name] = g

    goal = None
    if raw.goal is not None:
        text, lineno = raw.goal
        if text in hierarchy:
            goal = text
        elif domain == "categories":
            try:
                goal = parse_category(text, aliases)
            except GenericRuleError as exc:
                problem(lineno, str(exc))
        else:
            problem(lineno, "goal %r is not a type of the hierarchy" % text)

    classifier = None
    if domain == "categories":
        if hierarchy.top is None:
            problem(None, "a categorial grammar needs 'top NAME' in [types]")
        else:
            shapes = {cat: name for name, cat in aliases.items() if name in hierarchy}
            classifier = Classifier(hierarchy, shapes)

    grammar = Grammar(hierarchy, aliases, lexicon, cfg, generic, goal, domain, classifier, path)
    return grammar, problems, conflicts


def _source(source):
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8"), source
    if "\n" not in source and (source.endswith(".gr") or Path(source).exists()):
        p = Path(source)
        if not p.exists() and source.replace(".gr", "") in BUNDLED:
            p = bundled_path(source)
        return p.read_text(encoding="utf-8"), p
    if "\n" not in source and source in BUNDLED:
        p = bundled_path(source)
        return p.read_text(encoding="utf-8"), p
    return source, None


def check_grammar(source, registry=None):
    """Load ``source`` (path, bundled name or text) and report every problem.

    Raises:
        GrammarSyntaxError: the file cannot be read as a grammar at all.
        OSError: the file cannot be read.
    """
    text, path = _source(source)
    raw = _read(text, path)
    _, problems, conflicts = _build(raw, registry or CATEGORIAL_REGISTRY, path)
    return CheckReport(problems, conflicts)


def load_grammar(source, registry=None, *, strict=True):
    """Load a grammar from a path, a bundled grammar name, or file text.

    Raises:
        GrammarSyntaxError: malformed lines (with line numbers).
        GrammarError: compile-time checks failed and ``strict`` is set.
    """
    text, path = _source(source)
    raw = _read(text, path)
    grammar, problems, _ = _build(raw, registry or CATEGORIAL_REGISTRY, path)
    if problems and (strict or grammar is None):
        raise GrammarError(problems)
    return grammar


def loads(text, registry=None, *, strict=True):
    """Load a grammar from file text."""
    raw = _read(text)
    grammar, problems, _ = _build(raw, registry or CATEGORIAL_REGISTRY, None)
    if problems and (strict or grammar is None):
        raise GrammarError(problems)
    return grammar


def ncc_grammar():
    return load_grammar(bundled_path("ncc"))


__all__ = [
    "BUNDLED", "CheckReport", "Grammar", "bundled_path", "check_grammar", "compile_body",
    "load_grammar", "loads", "ncc_grammar", "parse_body",
]

# keep the module importable without pulling catgram names into the namespace
del catgram, RuleFunction
