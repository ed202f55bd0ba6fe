"""Exception hierarchy shared by every module of the package."""


class GenericRuleError(Exception):
    """Base class for all errors raised by genrules."""


class UnknownTypeError(GenericRuleError):
    def __init__(self, name):
        super().__init__("unknown type name: %r" % (name,))
        self.name = name


class HierarchyCycleError(GenericRuleError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("type hierarchy contains a cycle: " + " < ".join(self.cycle))


class BoundedCompletenessError(GenericRuleError):
    """Two types have more than one maximal common subtype."""

    def __init__(self, a, b, candidates):
        self.pair = (a, b)
        self.candidates = sorted(candidates)
        super().__init__(
            "types %r and %r have %d incomparable maximal common subtypes: %s"
            % (a, b, len(self.candidates), ", ".join(self.candidates))
        )


class DuplicateSignatureError(GenericRuleError):
    def __init__(self, rule_name, signature):
        self.signature = signature
        super().__init__("generic rule %s declares signature %s twice" % (rule_name, signature))


class IllFormedPosetError(GenericRuleError):
    def __init__(self, rule_name, conflicts):
        self.conflicts = list(conflicts)
        lines = ["cartesian poset of %s is not well-formed:" % rule_name]
        lines.extend("  " + c.describe() for c in self.conflicts)
        super().__init__("\n".join(lines))


class BindingConflictError(GenericRuleError):
    """More than one minimal applicable partial rule."""

    def __init__(self, rule_name, argument, signatures):
        self.argument = argument
        self.signatures = sorted(signatures, key=str)
        super().__init__(
            "%s: no single most specific rule for %s, candidates %s"
            % (rule_name, argument, ", ".join(map(str, self.signatures)))
        )


class DisjunctionConflictError(GenericRuleError):
    """Both operands of a disjunction produced a result."""


class ReductionLimitError(GenericRuleError):
    def __init__(self, limit):
        self.limit = limit
        super().__init__("beta reduction did not terminate within %d steps" % limit)


class TermSyntaxError(GenericRuleError, ValueError):
    pass


class CategorySyntaxError(GenericRuleError, ValueError):
    pass


class LexiconError(GenericRuleError):
    def __init__(self, word, position):
        self.word = word
        self.position = position
        super().__init__("unknown word %r at position %d" % (word, position))


class SearchLimitError(GenericRuleError):
    pass


class GrammarSyntaxError(GenericRuleError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += str(path) + ":"
        if line is not None:
            where += "%d:" % line
        super().__init__((where + " " if where else "") + message)


class GrammarError(GenericRuleError):
    """A grammar file loaded but failed its compile-time checks."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))
