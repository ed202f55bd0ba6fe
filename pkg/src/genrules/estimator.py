"""A scikit-learn style wrapper: sentences in, acceptance or parse features out."""
import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .errors import LexiconError
from .grammar import Grammar, load_grammar
from .parser import MAX_CATEGORY_SIZE, MAX_ITEMS

FEATURES = ("accepted", "derivations", "items", "links", "attempted", "fired")


def check_sentences(X):
    """Validate ``X`` and return a list of token tuples.

    ``X`` may be one sentence (a string), or a sequence whose members are
    whitespace separated strings or sequences of tokens.
    """
    if isinstance(X, str):
        X = [X]
    if isinstance(X, np.ndarray):
        if X.ndim != 1:
            raise ValueError("expected a 1-d array of sentences, got shape %s" % (X.shape,))
        X = X.tolist()
    try:
        items = list(X)
    except TypeError:
        raise TypeError("expected a sentence or a sequence of sentences, got %s" % type(X).__name__) from None
    out = []
    for i, s in enumerate(items):
        if isinstance(s, str):
            tokens = tuple(s.split())
        elif isinstance(s, (list, tuple)) and all(isinstance(t, str) for t in s):
            tokens = tuple(s)
        else:
            raise TypeError("sentence %d is neither a string nor a list of tokens: %r" % (i, s))
        if not tokens:
            raise ValueError("sentence %d is empty" % i)
        out.append(tokens)
    return out


class GenericRuleParser(BaseEstimator):
    """Recognizer over a grammar file.

    Nothing is learned: ``fit`` loads and checks the grammar so that the
    object can sit in a pipeline or be cloned with ``get_params``.

    Args:
        grammar: Path, bundled grammar name (``"ncc"``) or a loaded
            :class:`~genrules.grammar.Grammar`.
        goal: Overrides the grammar's goal (category text or type name).
        max_items: Search limit per sentence.
        max_category_size: Category size bound per sentence.
    """

    def __init__(self, grammar="ncc", goal=None, max_items=MAX_ITEMS, max_category_size=MAX_CATEGORY_SIZE):
        self.grammar = grammar
        self.goal = goal
        self.max_items = max_items
        self.max_category_size = max_category_size

    def fit(self, X=None, y=None):
        g = self.grammar if isinstance(self.grammar, Grammar) else load_grammar(self.grammar)
        self.grammar_ = g
        self.goal_ = g.resolve_goal(self.goal) if self.goal is not None else g.goal
        self.parser_ = g.make_parser(max_items=self.max_items, max_category_size=self.max_category_size)
        self.classes_ = np.array([False, True])
        return self

    def parse(self, X):
        """One :class:`~genrules.parser.ParseResult` per sentence; ``None`` for unknown words."""
        check_is_fitted(self, "parser_")
        results = []
        for tokens in check_sentences(X):
            try:
                results.append(self.parser_.parse(tokens, self.goal_))
            except LexiconError:
                results.append(None)
        return results

    def predict(self, X):
        """Boolean array: does each sentence reach the goal?"""
        return np.array([r is not None and r.accepted for r in self.parse(X)], dtype=bool)

    def transform(self, X):
        """Parse statistics per sentence, columns as in ``FEATURES``."""
        rows = []
        for r in self.parse(X):
            if r is None:
                rows.append([0] * len(FEATURES))
                continue
            s = r.stats
            rows.append([int(r.accepted), len(r.derivations), s.items, s.links, s.attempted, s.fired])
        return np.array(rows, dtype=np.int64).reshape(-1, len(FEATURES))

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)

    def score(self, X, y):
        """Fraction of sentences whose acceptance matches ``y``."""
        y = np.asarray(y, dtype=bool).ravel()
        pred = self.predict(X)
        if len(y) != len(pred):
            raise ValueError("X has %d sentences but y has %d labels" % (len(pred), len(y)))
        return float(np.mean(pred == y))
