"""Deductive bottom-up shift-reduce parsing with generic rules.

Items are configurations ``[stack • pending, j]``: a stack of constituents,
a (usually empty) buffer of constituents waiting to be shifted back, and
the number of tokens consumed. The axiom is the empty item at position 0;
goal items hold exactly one constituent matching the goal after the whole
input has been read.

The item set is closed exhaustively with an agenda and a seen-set, so every
derivation is found and the number of items and reduce attempts measures
the search space. Items sharing a stack prefix are packed into a
graph-structured stack (see :class:`StackGraph`); derivations are unpacked
on demand.

Three reduce calculi are provided:

* :class:`SynReducer`: syntax combined by one or more generic rules;
* :class:`SynSemReducer`: a syntactic and a semantic generic rule, both of
  which must succeed;
* :class:`CfgReducer`: binary context-free productions interpreted over
  the type hierarchy, with a generic rule computing the payload.

A rule returning several results replaces the two reduced constituents by
that many: the first goes on the stack, the rest into the pending buffer,
so that each can still combine with the material to its left.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Optional

from .catgram import Category, same_shape
from .errors import GenericRuleError, LexiconError, SearchLimitError
from .generic_rule import GenericRule, ReduceContext, Splice, unwrap

logger = logging.getLogger(__name__)

MAX_CATEGORY_SIZE = 64
MAX_ITEMS = 500_000


@dataclass(frozen=True)
class StackEntry:
    syn: Any
    sem: Any = None
    span: tuple = (0, 0)

    def __str__(self):
        return str(self.syn)


@dataclass(frozen=True)
class ParseItem:
    stack: tuple = ()
    pending: tuple = ()
    j: int = 0

    def __str__(self):
        inner = " ".join(str(e) for e in self.stack)
        buf = " ".join(str(e) for e in self.pending)
        return "[ %s • %s, %d ]" % (inner, buf, self.j) if buf else "[ %s •, %d ]" % (inner, self.j)

    def entries(self):
        return self.stack + self.pending


@dataclass(frozen=True)
class Step:
    """One inference: a shift (from the input or the pending buffer) or a reduce."""

    kind: str
    j: int
    rules: tuple = ()
    consumed: tuple = ()
    produced: tuple = ()
    word: Optional[str] = None

    @property
    def span(self):
        entries = self.consumed or self.produced
        return (entries[0].span[0], entries[-1].span[1])

    def sort_key(self):
        return (
            self.kind, self.j, self.rules,
            tuple((str(e.syn), str(e.sem), e.span) for e in self.consumed),
            tuple((str(e.syn), str(e.sem), e.span) for e in self.produced),
            self.word or "",
        )


@dataclass(frozen=True)
class Derivation:
    """A path of steps from the axiom to a goal item."""

    items: tuple
    steps: tuple

    @property
    def goal(self):
        return self.items[-1]

    @property
    def result(self):
        return self.items[-1].stack[0]

    def fired(self):
        """Labels of the partial rules fired, one tuple per reduce."""
        return [s.rules for s in self.steps if s.kind == "reduce"]

    def replay(self):
        """Re-execute the steps from the axiom and return the final item."""
        stack, pending, j = (), (), 0
        for step in self.steps:
            if step.kind == "shift":
                if step.word is None:
                    if not pending or pending[0] != step.produced[0]:
                        raise GenericRuleError("replay: pending buffer does not match shift")
                    pending = pending[1:]
                else:
                    j += 1
                stack = stack + step.produced
            else:
                if stack[-2:] != step.consumed:
                    raise GenericRuleError("replay: stack top does not match reduce")
                stack = stack[:-2] + step.produced[:1]
                pending = step.produced[1:] + pending
            if j != step.j:
                raise GenericRuleError("replay: position mismatch")
        return ParseItem(stack, pending, j)


@dataclass
class ParseStats:
    items: int = 0
    attempted: int = 0
    fired: int = 0
    shifts: int = 0
    pruned: int = 0
    links: int = 0

    def as_dict(self):
        return {"items": self.items, "links": self.links, "attempted": self.attempted,
                "fired": self.fired, "shifts": self.shifts, "pruned": self.pruned}


@dataclass
class Outcome:
    rules: tuple
    produced: tuple  # of (syn, sem, span hint or None)


def _entries_of(out):
    return [(unwrap(v), v.span if isinstance(v, Splice) else None) for v in out]


class SynReducer:
    """Reduce with one or more syntactic generic rules (payload = syntax)."""

    def __init__(self, rules, classify=None):
        self.rules = [rules] if isinstance(rules, GenericRule) else list(rules)
        self.classify = classify or _identity

    def __call__(self, left, right, ctx, stats):
        x1, x2 = self.classify(left.syn), self.classify(right.syn)
        outcomes = []
        for g in self.rules:
            stats.attempted += 1
            rule = g.bind(x1, x2)
            if rule is None:
                continue
            out = rule(left.syn, right.syn, ctx)
            if out is None:
                continue
            produced = tuple((v, None, sp) for v, sp in _entries_of(out))
            outcomes.append(Outcome((g.label(rule.signature),), produced))
        return outcomes


class SynSemReducer:
    """Reduce when both the syntactic and the semantic rule succeed."""

    def __init__(self, syn, sem, classify=None):
        self.syn = syn
        self.sem = sem
        self.classify = classify or _identity

    def __call__(self, left, right, ctx, stats):
        stats.attempted += 1
        x1, x2 = self.classify(left.syn), self.classify(right.syn)
        rs = self.syn.bind(x1, x2)
        if rs is None:
            return []
        out_syn = rs(left.syn, right.syn, ctx)
        if out_syn is None:
            return []
        rm = self.sem.bind(x1, x2)
        if rm is None:
            return []
        out_sem = rm(left.sem, right.sem, ctx)
        if out_sem is None:
            return []
        syn_vals, sem_vals = _entries_of(out_syn), _entries_of(out_sem)
        if len(syn_vals) != len(sem_vals):
            raise GenericRuleError(
                "syntactic rule produced %d constituents but semantic rule %d" % (len(syn_vals), len(sem_vals)))
        produced = tuple((s, m, sp) for (s, sp), (m, _) in zip(syn_vals, sem_vals))
        labels = (self.syn.label(rs.signature), self.sem.label(rm.signature))
        return [Outcome(labels, produced)]


@dataclass(frozen=True)
class Production:
    lhs: str
    left: str
    right: str

    def __str__(self):
        return "%s -> %s %s" % (self.lhs, self.left, self.right)


class CfgReducer:
    """Binary productions over the hierarchy plus a generic rule on payloads."""

    def __init__(self, productions, rule, classify=None):
        self.productions = [p if isinstance(p, Production) else Production(*p) for p in productions]
        self.rule = rule
        self.classify = classify or _identity

    def __call__(self, left, right, ctx, stats):
        stats.attempted += 1
        h = self.rule.hierarchy
        x1, x2 = self.classify(left.syn), self.classify(right.syn)
        matching = [p for p in self.productions if h.leq(x1, p.left) and h.leq(x2, p.right)]
        if not matching:
            return []
        bound = self.rule.bind(x1, x2)
        if bound is None:
            return []
        out = bound(left.sem, right.sem, ctx)
        if out is None:
            return []
        if len(out) != 1:
            raise GenericRuleError("context-free reduce needs a single payload, got %d" % len(out))
        value = unwrap(out[0])
        label = self.rule.label(bound.signature)
        return [Outcome((str(p), label), ((p.lhs, value, None),)) for p in matching]


def _identity(x, ctx=None):
    return x


def _size(syn):
    size = getattr(syn, "size", None)
    return size() if callable(size) else 1


@dataclass(frozen=True)
class Node:
    """A stack entry together with the pending buffer and position it was pushed with.

    The parser shares stack prefixes: a node records which nodes may sit
    directly below it, and every path from a node down to the root node is
    one reachable stack. ``entry`` is ``None`` only for the root.
    """

    entry: Optional[StackEntry]
    pending: tuple = ()
    j: int = 0


ROOT = Node(None)


class StackGraph:
    """Nodes and below-links of one parse, with how each link was derived."""

    def __init__(self):
        self.below = {ROOT: {}}
        self.above = {ROOT: set()}

    def __len__(self):
        return len(self.below)

    @property
    def links(self):
        return sum(len(b) for b in self.below.values())

    def add_node(self, node):
        if node in self.below:
            return False
        self.below[node] = {}
        self.above[node] = set()
        return True

    def add_link(self, node, under, how):
        """Record that ``under`` may sit below ``node``; True if the link is new."""
        hows = self.below[node].get(under)
        if hows is None:
            self.below[node][under] = [how]
            self.above[under].add(node)
            return True
        hows.append(how)
        return False

    def item(self, path):
        """The :class:`ParseItem` of a stack given as nodes from top to bottom."""
        if not path:
            return ParseItem()
        return ParseItem(tuple(n.entry for n in reversed(path)), path[0].pending, path[0].j)

    def predecessors(self, path):
        """``(previous path, step)`` pairs leading to the stack ``path``."""
        if not path:
            return []
        top, rest = path[0], path[1:]
        under = rest[0] if rest else ROOT
        out = []
        for how in self.below[top].get(under, ()):
            if how[0] == "shift":
                out.append((rest, how[1]))
            else:
                _, v, b, step = how
                out.append(((v, b) + rest, step))
        return out


@dataclass
class ParseResult:
    tokens: tuple
    goal: Any
    goal_items: list
    stats: ParseStats
    graph: StackGraph = field(repr=False)
    goal_paths: list = field(default_factory=list, repr=False)
    diagnostics: list = field(default_factory=list)
    max_derivations: Optional[int] = None
    _derivations: Optional[list] = field(default=None, repr=False)

    @property
    def accepted(self):
        return bool(self.goal_items)

    @property
    def results(self):
        """The single constituent of every goal item."""
        return [item.stack[0] for item in self.goal_items]

    @property
    def derivations(self):
        if self._derivations is None:
            self._derivations = enumerate_derivations(self.graph, self.goal_paths, self.max_derivations)
        return self._derivations


def enumerate_derivations(graph, goal_paths, limit=None):
    """All axiom-to-goal paths through the stack graph, in canonical order."""
    memo = {}
    on_path = set()

    def paths(stack):
        if stack in memo:
            return memo[stack]
        incoming = graph.predecessors(stack)
        if not stack:
            memo[stack] = [((graph.item(stack),), ())]
            return memo[stack]
        item = graph.item(stack)
        on_path.add(stack)
        out = []
        for prev, step in incoming:
            if prev in on_path:
                continue
            for items, steps in paths(prev):
                out.append((items + (item,), steps + (step,)))
                if limit is not None and len(out) >= limit:
                    break
        on_path.discard(stack)
        memo[stack] = out
        return out

    found = []
    for goal in goal_paths:
        found.extend(Derivation(items, steps) for items, steps in paths(goal))
    found.sort(key=lambda d: [s.sort_key() for s in d.steps])
    if limit is not None:
        found = found[:limit]
    return found


class ShiftReduceParser:
    """Exhaustive shift-reduce closure for one grammar.

    Stacks sharing a prefix are stored once, as in a graph-structured
    stack; ``stats.items`` counts the distinct stack nodes and
    ``stats.links`` the below-links between them. Reduce outcomes are
    computed once per pair of adjacent entries.

    Args:
        lexicon: ``{word: [(syn, sem), ...]}``; a bare ``syn`` means no payload.
        reducer: One of the reducer classes above.
        classify: Maps a syntactic payload to its hierarchy type.
        hierarchy: Used for type goals and to recognize conjunction tokens.
        goal: Default goal, a hierarchy type or a category.
        conj_type: Hierarchy type marking conjunction tokens for guards.
        max_category_size: Results with a larger category are pruned.
        max_items: Abort with :class:`SearchLimitError` past this many nodes.
    """

    def __init__(self, lexicon, reducer, *, classify=None, hierarchy=None, goal=None,
                 conj_type="conj", max_category_size=MAX_CATEGORY_SIZE, max_items=MAX_ITEMS,
                 max_derivations=None):
        self.lexicon = {w: [_lex_entry(e) for e in entries] for w, entries in lexicon.items()}
        self.reducer = reducer
        self.classify = classify or _identity
        self.hierarchy = hierarchy
        self.goal = goal
        self.conj_type = conj_type
        self.max_category_size = max_category_size
        self.max_items = max_items
        self.max_derivations = max_derivations

    def lookup(self, tokens):
        out = []
        for i, word in enumerate(tokens):
            if word not in self.lexicon or not self.lexicon[word]:
                raise LexiconError(word, i)
            out.append(self.lexicon[word])
        return out

    def _is_conj(self, syn):
        h = self.hierarchy
        if h is None or self.conj_type not in h:
            return False
        t = self.classify(syn)
        return t in h and h.leq(t, self.conj_type)

    def goal_matches(self, syn, goal):
        if goal is None:
            return True
        if isinstance(goal, str) and self.hierarchy is not None and goal in self.hierarchy:
            t = self.classify(syn)
            return syn == goal or (t in self.hierarchy and self.hierarchy.leq(t, goal))
        if isinstance(goal, Category) and isinstance(syn, Category):
            return same_shape(syn, goal)
        return syn == goal

    def parse(self, tokens, goal=None):
        """Close the stack graph for ``tokens`` and collect the goal items.

        Raises:
            LexiconError: a token has no lexical entry.
            SearchLimitError: more than ``max_items`` stack nodes were generated.
        """
        tokens = tuple(tokens)
        goal = self.goal if goal is None else goal
        entries = self.lookup(tokens)
        conj_positions = frozenset(
            i for i, es in enumerate(entries) if any(self._is_conj(syn) for syn, _ in es))
        n = len(tokens)
        stats = ParseStats()
        diagnostics = []
        graph = StackGraph()
        reduced = {}
        # links already combined, indexed both ways
        done_below = {ROOT: set()}
        done_above = {ROOT: set()}
        agenda = deque()

        def push(node, under, how):
            if graph.add_node(node):
                stats.items += 1
                if stats.items > self.max_items:
                    raise SearchLimitError("more than %d items for %r" % (self.max_items, " ".join(tokens)))
                done_below[node] = set()
                done_above[node] = set()
                for step, nxt in self._shifts(node, tokens, entries, stats):
                    push(nxt, node, ("shift", step))
            if graph.add_link(node, under, how):
                agenda.append((node, under))

        def reduce(v, b, c):
            key = (b.entry, v.entry)
            outcomes = reduced.get(key)
            if outcomes is None:
                ctx = ReduceContext(b.entry.span, v.entry.span, tokens, conj_positions)
                outcomes = reduced[key] = self._reduce(b.entry, v.entry, ctx, stats, diagnostics)
            for rules, produced in outcomes:
                step = Step("reduce", v.j, rules, (b.entry, v.entry), produced)
                push(Node(produced[0], produced[1:] + v.pending, v.j), c, ("reduce", v, b, step))

        stats.items = 1
        for step, nxt in self._shifts(ROOT, tokens, entries, stats):
            push(nxt, ROOT, ("shift", step))
        while agenda:
            v, b = agenda.popleft()
            done_below[v].add(b)
            done_above[b].add(v)
            if b is not ROOT:
                for c in list(done_below[b]):
                    reduce(v, b, c)
            if v is not ROOT:
                for above in list(done_above[v]):
                    reduce(above, v, b)
        stats.links = graph.links

        goal_paths = [(node,) for node in graph.below
                      if node is not ROOT and node.j == n and not node.pending
                      and ROOT in graph.below[node] and self.goal_matches(node.entry.syn, goal)]
        goal_paths.sort(key=lambda p: (str(p[0].entry.syn), str(p[0].entry.sem)))
        goals = [graph.item(p) for p in goal_paths]
        return ParseResult(tokens, goal, goals, stats, graph, goal_paths, diagnostics, self.max_derivations)

    def _shifts(self, node, tokens, entries, stats):
        if node.pending:
            entry = node.pending[0]
            stats.shifts += 1
            yield (Step("shift", node.j, produced=(entry,)), Node(entry, node.pending[1:], node.j))
        elif node.j < len(tokens):
            j = node.j
            for syn, sem in entries[j]:
                entry = StackEntry(syn, sem, (j, j + 1))
                stats.shifts += 1
                yield (Step("shift", j + 1, produced=(entry,), word=tokens[j]), Node(entry, (), j + 1))

    def _reduce(self, left, right, ctx, stats, diagnostics):
        out = []
        for outcome in self.reducer(left, right, ctx, stats):
            produced = self._place(outcome.produced, (left.span[0], right.span[1]))
            if produced is None:
                diagnostics.append("unplaceable splice from %s" % (outcome.rules,))
                continue
            too_big = [e for e in produced if _size(e.syn) > self.max_category_size]
            if too_big:
                stats.pruned += 1
                msg = "pruned category of size %d: %s" % (_size(too_big[0].syn), too_big[0].syn)
                logger.debug(msg)
                diagnostics.append(msg)
                continue
            stats.fired += 1
            out.append((outcome.rules, produced))
        return out

    @staticmethod
    def _place(produced, span):
        """Assign spans to reduce results so that they tile ``span``."""
        start, end = span
        if len(produced) == 1:
            syn, sem, _ = produced[0]
            return (StackEntry(syn, sem, span),)
        hints = [sp for _, _, sp in produced]
        if any(h is None for h in hints):
            return None
        starts = [start] + [h[0] for h in hints[1:]]
        if any(not (start <= a < b < end) for a, b in zip(starts, starts[1:])):
            return None
        ends = starts[1:] + [end]
        return tuple(StackEntry(syn, sem, (a, b)) for (syn, sem, _), a, b in zip(produced, starts, ends))


def _lex_entry(e):
    if isinstance(e, tuple) and len(e) == 2:
        return e
    return (e, None)


def parse_syn(rules, tokens, lexicon, goal, classify=None, hierarchy=None, **kwargs):
    """Parse with syntactic generic rules only."""
    rules_list = [rules] if isinstance(rules, GenericRule) else list(rules)
    hierarchy = hierarchy or rules_list[0].hierarchy
    parser = ShiftReduceParser(lexicon, SynReducer(rules_list, classify), classify=classify,
                               hierarchy=hierarchy, **kwargs)
    return parser.parse(tokens, goal)


def parse_syn_sem(gsyn, gsem, tokens, lexicon, goal, classify=None, **kwargs):
    """Parse with a syntactic and a semantic generic rule."""
    parser = ShiftReduceParser(lexicon, SynSemReducer(gsyn, gsem, classify), classify=classify,
                               hierarchy=gsyn.hierarchy, **kwargs)
    return parser.parse(tokens, goal)


def parse_cfg_generic(productions, rule, tokens, lexicon, goal, classify=None, **kwargs):
    """Parse with binary productions and a generic rule on payloads."""
    parser = ShiftReduceParser(lexicon, CfgReducer(productions, rule, classify), classify=classify,
                               hierarchy=rule.hierarchy, **kwargs)
    return parser.parse(tokens, goal)


def count_reduce_attempts(result):
    """``(attempted, fired)`` reduce tally of a finished parse."""
    return result.stats.attempted, result.stats.fired
