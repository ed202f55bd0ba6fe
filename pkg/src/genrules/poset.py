"""Type hierarchies and cartesian posets over pairs of types.

A :class:`TypeHierarchy` is a finite partial order declared through
``child < parent`` edges. Its reflexive-transitive closure is computed once,
at construction, so that subtype queries are dictionary lookups.

A :class:`CartesianPoset` is a set of pairs of hierarchy types ordered
componentwise. It is the structure used to rank the partial rules of a
generic rule by specificity.
"""
import graphlib
import itertools
from types import MappingProxyType
from typing import NamedTuple

from .errors import (
    BoundedCompletenessError,
    GenericRuleError,
    HierarchyCycleError,
    UnknownTypeError,
)


class TypeHierarchy:
    """A finite poset of type names.

    Args:
        types: Every type name in the hierarchy.
        edges: ``(child, parent)`` pairs; both ends must be in ``types``.
        top: Optional maximal type. When given, every type must be below it.
        require_bounded_complete: Reject hierarchies in which some pair of
            types has several incomparable maximal common subtypes.

    Raises:
        UnknownTypeError: an edge or ``top`` names an undeclared type.
        HierarchyCycleError: the edges contain a cycle.
        BoundedCompletenessError: see ``require_bounded_complete``.
    """

    def __init__(self, types=(), edges=(), top=None, *, require_bounded_complete=True):
        types = frozenset(types)
        edges = frozenset((c, p) for c, p in edges)
        for child, parent in edges:
            for name in (child, parent):
                if name not in types:
                    raise UnknownTypeError(name)
        if top is not None and top not in types:
            raise UnknownTypeError(top)

        parents = {t: set() for t in types}
        for child, parent in edges:
            if child == parent:
                raise HierarchyCycleError([child, child])
            parents[child].add(parent)
        try:
            order = list(graphlib.TopologicalSorter(parents).static_order())
        except graphlib.CycleError as exc:
            raise HierarchyCycleError(exc.args[1]) from None

        up = {}
        for t in order:
            acc = {t}
            for p in parents[t]:
                acc |= up[p]
            up[t] = frozenset(acc)
        down = {t: set() for t in types}
        for t, ancestors in up.items():
            for a in ancestors:
                down[a].add(t)

        self._types = types
        self._edges = edges
        self._top = top
        self._up = MappingProxyType(up)
        self._down = MappingProxyType({t: frozenset(s) for t, s in down.items()})

        if top is not None:
            stray = sorted(t for t in types if top not in up[t])
            if stray:
                raise GenericRuleError("type %r is not below top %r" % (stray[0], top))
        if require_bounded_complete:
            violations = self.bounded_completeness_violations()
            if violations:
                raise violations[0]

    @classmethod
    def from_edges(cls, edges, top=None, extra_types=(), **kwargs):
        """Build a hierarchy whose type set is every name mentioned."""
        edges = list(edges)
        names = set(extra_types)
        for child, parent in edges:
            names.add(child)
            names.add(parent)
        if top is not None:
            names.add(top)
        return cls(names, edges, top, **kwargs)

    @property
    def types(self):
        return self._types

    @property
    def edges(self):
        return self._edges

    @property
    def top(self):
        return self._top

    def __contains__(self, name):
        return name in self._types

    def __len__(self):
        return len(self._types)

    def __eq__(self, other):
        if not isinstance(other, TypeHierarchy):
            return NotImplemented
        return (self._types, self._edges, self._top) == (other._types, other._edges, other._top)

    def __hash__(self):
        return hash((self._types, self._edges, self._top))

    def __repr__(self):
        return "TypeHierarchy(%d types, %d edges, top=%r)" % (
            len(self._types), len(self._edges), self._top)

    def _check(self, name):
        if name not in self._types:
            raise UnknownTypeError(name)

    def leq(self, a, b):
        """True iff ``a`` is ``b`` or a (transitive) subtype of ``b``."""
        self._check(a)
        self._check(b)
        return b in self._up[a]

    def lt(self, a, b):
        return a != b and self.leq(a, b)

    def supertypes(self, name):
        """All types ``t`` with ``name <= t``, including ``name`` itself."""
        self._check(name)
        return self._up[name]

    def subtypes(self, name):
        """All types ``t`` with ``t <= name``, including ``name`` itself."""
        self._check(name)
        return self._down[name]

    def parents(self, name):
        self._check(name)
        return frozenset(p for c, p in self._edges if c == name)

    def _maximal_common_subtypes(self, a, b):
        common = self._down[a] & self._down[b]
        return [c for c in common if not (self._up[c] & common) - {c}]

    def meet(self, a, b):
        """Greatest common subtype of ``a`` and ``b``, or ``None``.

        Raises:
            BoundedCompletenessError: there are two or more incomparable
                maximal common subtypes.
        """
        self._check(a)
        self._check(b)
        if b in self._up[a]:
            return a
        if a in self._up[b]:
            return b
        maximal = self._maximal_common_subtypes(a, b)
        if not maximal:
            return None
        if len(maximal) > 1:
            raise BoundedCompletenessError(a, b, maximal)
        return maximal[0]

    def bounded_completeness_violations(self):
        """Every pair of types lacking a unique maximal common subtype."""
        found = []
        for a, b in itertools.combinations(sorted(self._types), 2):
            maximal = self._maximal_common_subtypes(a, b)
            if len(maximal) > 1:
                found.append(BoundedCompletenessError(a, b, maximal))
        return found


class CartesianType(NamedTuple):
    """A pair of type names, written ``left⊗right``."""

    left: str
    right: str

    def __str__(self):
        return "%s⊗%s" % (self.left, self.right)


class Conflict(NamedTuple):
    """An unordered pair of members whose componentwise meet is missing."""

    first: CartesianType
    second: CartesianType
    missing: CartesianType

    def describe(self):
        return "%s and %s are unordered and their meet ⟨%s, %s⟩ is not a signature" % (
            self.first, self.second, self.missing.left, self.missing.right)


class CartesianPoset:
    """A set of cartesian types ordered componentwise by a hierarchy."""

    def __init__(self, hierarchy, members=()):
        self.hierarchy = hierarchy
        members = frozenset(CartesianType(*m) for m in members)
        for m in members:
            hierarchy._check(m.left)
            hierarchy._check(m.right)
        self.members = members

    def __contains__(self, item):
        return CartesianType(*item) in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def leq(self, x, y):
        h = self.hierarchy
        return h.leq(x[0], y[0]) and h.leq(x[1], y[1])

    def upper_bounds(self, x):
        """Members ``t`` with ``x ⪯ t``."""
        x = CartesianType(*x)
        return [t for t in sorted(self.members) if self.leq(x, t)]

    def minimal_upper_bounds(self, x):
        """Upper bounds of ``x`` with no other upper bound strictly below them."""
        ups = self.upper_bounds(x)
        return [t for t in ups if not any(u != t and self.leq(u, t) for u in ups)]

    def covers(self):
        """Hasse diagram edges ``(lower, upper)`` among the members."""
        out = []
        for lo, hi in itertools.permutations(sorted(self.members), 2):
            if not self.leq(lo, hi):
                continue
            if any(m not in (lo, hi) and self.leq(lo, m) and self.leq(m, hi) for m in self.members):
                continue
            out.append((lo, hi))
        return sorted(out)

    def check_well_formed(self):
        """Return the list of conflicts; empty means well-formed.

        For every unordered pair of incomparable members whose componentwise
        meets both exist, the pair of meets must itself be a member.
        """
        h = self.hierarchy
        conflicts = []
        for x, y in itertools.combinations(sorted(self.members), 2):
            if self.leq(x, y) or self.leq(y, x):
                continue
            m1 = h.meet(x.left, y.left)
            m2 = h.meet(x.right, y.right)
            if m1 is None or m2 is None:
                continue
            missing = CartesianType(m1, m2)
            if missing not in self.members:
                conflicts.append(Conflict(x, y, missing))
        return conflicts

    def is_well_formed(self):
        return not self.check_well_formed()
