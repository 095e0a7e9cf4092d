"""Reduced bar construction and its dual DG algebra of functionals."""
from fractions import Fraction

from .core import InvalidInput, add_term, parity_sign


class UngradedOperand(ValueError):
    pass


class Functional:
    """Finitely supported function on words (a truncated element of the dual bar)."""

    __slots__ = ("support", "degree")

    def __init__(self, support=None, degree=None):
        self.support = {}
        for w, v in (support or {}).items():
            v = Fraction(v)
            if v:
                self.support[tuple(w)] = v
        self.degree = degree

    @classmethod
    def delta(cls, word, value=1):
        return cls({tuple(word): value})

    def __call__(self, word):
        return self.support.get(tuple(word), 0)

    def __bool__(self):
        return bool(self.support)

    def __eq__(self, other):
        if isinstance(other, Functional):
            return self.support == other.support
        if isinstance(other, dict):
            return self.support == other
        return NotImplemented

    def __repr__(self):
        return f"Functional({self.support!r})"

    def items(self):
        return self.support.items()

    def __add__(self, other):
        out = dict(self.support)
        for k, v in other.items():
            add_term(out, k, v)
        return Functional(out)

    def __sub__(self, other):
        out = dict(self.support)
        for k, v in other.items():
            add_term(out, k, -v)
        return Functional(out)

    def scale(self, c):
        return Functional({k: c * v for k, v in self.support.items()}, self.degree)

    @property
    def weight_support(self):
        return sorted({len(w) for w in self.support})

    def graded_degree(self, cat):
        """Shifted degree of the support, declared or inferred."""
        degs = {cat.wdeg(w) for w in self.support}
        if self.degree is not None:
            if degs - {self.degree}:
                raise UngradedOperand("support disagrees with declared degree")
            return self.degree
        if len(degs) > 1:
            raise UngradedOperand("functional is not homogeneous")
        return degs.pop() if degs else 0


class DoubleFunctional:
    """Finitely supported function on pairs of words.

    Values are the evaluations D(u, v); δ_u ⊗ δ_v evaluates to 1 on (u, v)
    with no Koszul sign.
    """

    __slots__ = ("support",)

    def __init__(self, support=None):
        self.support = {}
        for k, v in (support or {}).items():
            v = Fraction(v)
            if v:
                self.support[(tuple(k[0]), tuple(k[1]))] = v

    def __call__(self, u, v):
        return self.support.get((tuple(u), tuple(v)), 0)

    def __bool__(self):
        return bool(self.support)

    def __eq__(self, other):
        if isinstance(other, DoubleFunctional):
            return self.support == other.support
        if isinstance(other, dict):
            return self.support == other
        return NotImplemented

    def __repr__(self):
        return f"DoubleFunctional({self.support!r})"

    def items(self):
        return self.support.items()


def as_support(f):
    if isinstance(f, (Functional, DoubleFunctional)):
        return f.support
    return f


def reduced_coproduct(word):
    """Splittings ((a_n..a_{i+1}), (a_i..a_1)) for i = 1..n-1."""
    word = tuple(word)
    n = len(word)
    if n == 0:
        raise InvalidInput("empty word")
    return [(word[:n - i], word[n - i:]) for i in range(1, n)]


def convolution(cat, f, g):
    """(f•g)(w) = Σ_{w = u l} (-1)^{deg g · deg u} f(u) g(l)."""
    f = f if isinstance(f, Functional) else Functional(f)
    g = g if isinstance(g, Functional) else Functional(g)
    if not f or not g:
        return Functional()
    dg = g.graded_degree(cat)
    out = {}
    for u, fu in f.items():
        su = parity_sign(dg * cat.wdeg(u))
        src = cat.word_source(u)
        for l, gl in g.items():
            if cat.word_target(l) != src:
                continue
            add_term(out, u + l, su * fu * gl)
    deg = None
    if f.degree is not None and g.degree is not None:
        deg = f.degree + g.degree
    return Functional(out, deg)


def _uncontract(cat, word, coeff, out):
    """Add coeff · (words X with `word` a term of m̄X) into out."""
    n = len(word)
    right = 0
    # walk from the right so the sign of every letter is known
    for pos in range(n - 1, -1, -1):
        q = word[pos]
        s = parity_sign(right)
        for w, v in cat.uncontract_terms(q):
            add_term(out, word[:pos] + w + word[pos + 1:], s * v * coeff)
        right += cat.sdeg(q)


def dual_differential(cat, f):
    """(∂f)(w) = f(m̄ w), computed by expanding each letter of the support."""
    f = f if isinstance(f, Functional) else Functional(f)
    out = {}
    for word, c in f.items():
        _uncontract(cat, word, c, out)
    deg = f.degree + 1 if f.degree is not None else None
    return Functional(out, deg)


def koszul_switch(cat, pairs):
    return {(l, u): parity_sign(cat.wdeg(u) * cat.wdeg(l)) * c
            for (u, l), c in pairs.items()}


def coproduct_of(x):
    out = {}
    for w, c in x.items():
        for u, l in reduced_coproduct(w):
            add_term(out, (u, l), c)
    return out


def cocommutator_test(cat, x):
    """Whether (Δ̃ - σ∘Δ̃)(x) = 0 for a combination x of words."""
    x = as_support(x)
    d = coproduct_of(x)
    for k, v in koszul_switch(cat, d).items():
        add_term(d, k, -v)
    return not d


def delta_product(cat, u, l):
    """δ_u • δ_l as (word, sign), or None if not composable."""
    if cat.word_source(u) != cat.word_target(l):
        return None
    return u + l, parity_sign(cat.wdeg(l) * cat.wdeg(u))

