"""Finite A-infinity categories given by structure constants.

Words are tuples of morphism ids in the order (a_n, ..., a_1): index 0 is
the last morphism applied, index -1 the first.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial

from .core import (
    ONE, PLUS, STAR, BasisMorphism, DualityError, InvalidInput, add_term,
    fraction_str, parity_sign,
)
from .parallel import pmap


class ArityExceeded(ValueError):
    pass


class DegeneratePairing(ValueError):
    pass


class GradingMismatch(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


@dataclass
class ValidationReport:
    check: str
    passed: bool
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "check": self.check,
            "passed": self.passed,
            "failures": self.failures,
            "info": self.info,
        }


def comb_json(comb):
    """Linear combination of words as a sorted JSON-friendly list."""
    return [[list(k) if isinstance(k, tuple) else k, fraction_str(v)]
            for k, v in sorted(comb.items(), key=lambda kv: _sort_key(kv[0]))]


def _sort_key(k):
    if isinstance(k, tuple):
        return (len(k), tuple(str(x) for x in k))
    return (0, (str(k),))


class AInftyCategory:
    def __init__(self, objects, morphisms, d, max_arity, eps=None, name="",
                 check=True, sign_convention="shifted"):
        self.name = name
        self.objects = tuple(objects)
        self.d = int(d)
        self.max_arity = int(max_arity)
        self.sign_convention = sign_convention
        self.morphisms = {}
        for m in morphisms:
            if m.id in self.morphisms:
                raise InvalidInput(f"duplicate morphism id {m.id!r}")
            self.morphisms[m.id] = m
        self.ids = tuple(sorted(self.morphisms))
        self.eps = {}
        for (q, word), val in (eps or {}).items():
            val = Fraction(val)
            if val:
                self.eps[(q, tuple(word))] = val
        self.validated = False
        if check:
            self.validate_structure()
        self._index()

    # structure -------------------------------------------------------
    def validate_structure(self):
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise InvalidInput("duplicate object ids")
        if self.max_arity < 1:
            raise InvalidInput("max_arity must be positive")
        for m in self.morphisms.values():
            if m.source not in objs or m.target not in objs:
                raise InvalidInput(f"morphism {m.id!r} has unknown endpoint")
            if m.dual_id not in self.morphisms:
                raise DualityError(f"dual of {m.id!r} is not a morphism")
            md = self.morphisms[m.dual_id]
            if md.dual_id != m.id:
                raise DualityError(f"dual map is not an involution at {m.id!r}")
            if md.source != m.target or md.target != m.source:
                raise DualityError(f"dual of {m.id!r} has wrong endpoints")
            if m.degree + md.degree != self.d:
                raise DualityError(
                    f"degrees of {m.id!r} and its dual do not sum to d={self.d}")
            if m.orientation not in (PLUS, STAR):
                raise InvalidInput(f"bad orientation for {m.id!r}")
            if md.id != m.id and {m.orientation, md.orientation} != {PLUS, STAR}:
                raise DualityError(
                    f"pair ({m.id!r}, {md.id!r}) needs exactly one plus orientation")
        for (q, word), _ in self.eps.items():
            if q not in self.morphisms:
                raise InvalidInput(f"eps output {q!r} is not a morphism")
            if not word or len(word) > self.max_arity:
                raise InvalidInput(f"eps word {word!r} has bad arity")
            if any(a not in self.morphisms for a in word):
                raise InvalidInput(f"eps word {word!r} uses unknown morphisms")
            if not self.composable(word):
                raise InvalidInput(f"eps word {word!r} is not composable")
            if (self.word_source(word) != self.morphisms[q].source
                    or self.word_target(word) != self.morphisms[q].target):
                raise InvalidInput(f"eps entry ({q!r}, {word!r}) has wrong endpoints")
        self.validated = True

    def _index(self):
        self._mbar = {}
        self._uncontract = {}
        for (q, word), val in sorted(self.eps.items()):
            self._mbar.setdefault(word, []).append((q, val))
            self._uncontract.setdefault(q, []).append((word, val))
        self._deg = {i: m.shifted for i, m in self.morphisms.items()}
        self._by_target = {}
        for i in self.ids:
            self._by_target.setdefault(self.morphisms[i].target, []).append(i)
        self._by_source = {}
        for i in self.ids:
            self._by_source.setdefault(self.morphisms[i].source, []).append(i)

    def __eq__(self, other):
        return (isinstance(other, AInftyCategory)
                and self.objects == other.objects and self.d == other.d
                and self.max_arity == other.max_arity
                and self.morphisms == other.morphisms and self.eps == other.eps)

    def with_eps(self, eps, check=True):
        return AInftyCategory(self.objects, self.morphisms.values(), self.d,
                              self.max_arity, eps, name=self.name, check=check,
                              sign_convention=self.sign_convention)

    # degrees and words ------------------------------------------------
    def sdeg(self, a):
        return self._deg[a]

    def wdeg(self, word):
        deg = self._deg
        return sum(deg[a] for a in word)

    def dual(self, a):
        return self.morphisms[a].dual_id

    def source(self, a):
        return self.morphisms[a].source

    def target(self, a):
        return self.morphisms[a].target

    def word_source(self, word):
        return self.morphisms[word[-1]].source

    def word_target(self, word):
        return self.morphisms[word[0]].target

    def composable(self, word):
        ms = self.morphisms
        return all(ms[word[k]].source == ms[word[k + 1]].target
                   for k in range(len(word) - 1))

    def cyclic(self, word):
        return bool(word) and self.composable(word) and \
            self.word_target(word) == self.word_source(word)

    def words(self, max_weight, min_weight=1):
        """All composable words with weight in [min_weight, max_weight]."""
        out = []
        layer = [(a,) for a in self.ids]
        for w in range(1, max_weight + 1):
            if w >= min_weight:
                out.extend(layer)
            if w == max_weight:
                break
            nxt = []
            for word in layer:
                for a in self._by_source.get(self.word_target(word), ()):
                    nxt.append((a,) + word)
            layer = sorted(nxt)
        return out

    def cyclic_words(self, max_weight, min_weight=1):
        return [w for w in self.words(max_weight, min_weight) if self.cyclic(w)]

    # operations -------------------------------------------------------
    def mbar_n(self, word):
        word = tuple(word)
        if len(word) > self.max_arity:
            raise ArityExceeded(f"weight {len(word)} exceeds max arity {self.max_arity}")
        return {q: v for q, v in self._mbar.get(word, ())}

    def mbar_terms(self, word):
        """(q, value) pairs of m̄ on a block; empty above the max arity."""
        return self._mbar.get(word, ())

    def uncontract_terms(self, q):
        """(word, value) pairs with q appearing in m̄(word)."""
        return self._uncontract.get(q, ())

    def codifferential(self, word):
        """m̄ extended as a coderivation to one word.

        The block replaced by m̄_k gets the sign (-1)^(sum of shifted degrees
        of the letters to its right).
        """
        word = tuple(word)
        out = {}
        n = len(word)
        right_deg = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            right_deg[i] = right_deg[i + 1] + self._deg[word[i]]
        for k in range(1, min(self.max_arity, n) + 1):
            for st in range(0, n - k + 1):
                terms = self._mbar.get(word[st:st + k])
                if not terms:
                    continue
                s = parity_sign(right_deg[st + k])
                head, tail = word[:st], word[st + k:]
                for q, v in terms:
                    add_term(out, head + (q,) + tail, s * v)
        return out

    def apply_codifferential(self, comb):
        out = {}
        for w, c in comb.items():
            for w2, c2 in self.codifferential(w).items():
                add_term(out, w2, c * c2)
        return out


def _d2_residuals(cat, words):
    out = []
    for w in words:
        r = cat.apply_codifferential(cat.codifferential(w))
        if r:
            out.append({"word": list(w), "residual": comb_json(r)})
    return out


def check_ainfty(cat, jobs=1):
    """m̄∘m̄ = 0 on every composable word of weight ≤ 2K-1."""
    bound = 2 * cat.max_arity - 1
    words = cat.words(bound)
    fails = pmap(partial(_d2_residuals, cat), words, jobs)
    return ValidationReport("ainfty", not fails, fails,
                            {"max_weight": bound, "words_checked": len(words)})


def rotated_eps(cat, q, word):
    """Right side of the cyclicity condition for the entry ε(q*, word).

    ε(p_n, ..., p_1, q*) is the coefficient of p_n in m̄(p_{n-1}, ..., p_1, q*)
    (the first slot is always read as a dual).
    """
    qs = cat.dual(q)
    rot = word[1:] + (qs,)
    out = cat.dual(word[0])
    return cat.eps.get((out, rot), 0)


def check_assumption(cat):
    """Duality data, the degree law of m̄ and cyclic invariance of ε."""
    fails = []
    for m in sorted(cat.morphisms.values(), key=lambda m: m.id):
        md = cat.morphisms[m.dual_id]
        if m.degree + md.degree != cat.d:
            fails.append({"kind": "duality", "morphism": m.id})
    for (q, word), v in sorted(cat.eps.items()):
        if cat.sdeg(q) != cat.wdeg(word) + 1:
            fails.append({"kind": "degree", "out": q, "word": list(word),
                          "value": fraction_str(v)})
    # every cyclic word carrying a nonzero entry, in either position
    seen = set()
    for (q, word) in sorted(cat.eps):
        for key in _rotation_keys(cat, q, word):
            if key in seen:
                continue
            seen.add(key)
            q2, w2 = key
            lhs = cat.eps.get((q2, w2), 0)
            qs = cat.dual(q2)
            rhs = parity_sign(cat.sdeg(qs) * cat.wdeg(w2)) * rotated_eps(cat, q2, w2)
            if lhs != rhs:
                fails.append({"kind": "cyclicity", "cyclic_word": [qs] + list(w2),
                              "lhs": fraction_str(lhs), "rhs": fraction_str(rhs)})
    return ValidationReport("assumption", not fails, fails,
                            {"entries": len(cat.eps)})


def _rotation_keys(cat, q, word):
    cyc = (cat.dual(q),) + word
    keys = []
    n = len(cyc)
    for r in range(n):
        c = cyc[r:] + cyc[:r]
        keys.append((cat.dual(c[0]), c[1:]))
    return keys


def eps_slots(cat):
    """Every (q, word) an eps entry could occupy: composable words of weight
    up to K whose endpoints match those of q."""
    slots = []
    for word in cat.words(cat.max_arity):
        for q in cat.ids:
            if (cat.source(q) == cat.word_source(word)
                    and cat.target(q) == cat.word_target(word)):
                slots.append((q, word))
    return slots


def eps_mutations(cat, deltas=(1, -1)):
    """Single-entry perturbations of the eps table: one slot shifted by each delta."""
    out = []
    for slot in eps_slots(cat):
        for dv in deltas:
            eps = dict(cat.eps)
            eps[slot] = eps.get(slot, 0) + dv
            out.append((slot, dv, cat.with_eps(eps)))
    return out


def validate(cat, jobs=1):
    """Structural, A-infinity and assumption checks as one report list."""
    return [check_ainfty(cat, jobs=jobs), check_assumption(cat)]


def from_frobenius(basis, product, pairing, d, name="", obj="O"):
    """One-object category with m_2 the product of a graded Frobenius algebra.

    basis: {id: unshifted degree}; product: {(a, b): {c: coef}} for a·b;
    pairing: {(a, b): value}. The dual of a is the unique b with <a, b> ≠ 0.
    """
    ids = sorted(basis)
    for (a, b), v in pairing.items():
        if v and basis[a] + basis[b] != d:
            raise GradingMismatch(f"pairing <{a},{b}> is not of degree {d}")
    for (a, b), res in product.items():
        for c, v in res.items():
            if v and basis[c] != basis[a] + basis[b]:
                raise GradingMismatch(f"product {a}·{b} -> {c} breaks grading")
    dual = {}
    for a in ids:
        partners = [b for b in ids if pairing.get((a, b), 0)]
        if len(partners) != 1:
            raise DegeneratePairing(f"{a!r} does not pair with exactly one basis element")
        dual[a] = partners[0]
    if sorted(dual.values()) != ids:
        raise DegeneratePairing("pairing is not a bijection on the basis")
    morphisms = []
    for a in ids:
        orient = PLUS if a <= dual[a] else STAR
        morphisms.append(BasisMorphism(a, obj, obj, basis[a], dual[a], orient))
    eps = {}
    for (a2, a1), res in sorted(product.items()):
        s = parity_sign(basis[a1])
        for q, v in res.items():
            if v:
                eps[(q, (a2, a1))] = s * Fraction(v)
    return AInftyCategory([obj], morphisms, d, 2, eps, name=name)


# functors ------------------------------------------------------------

class AInftyFunctor:
    """Object map plus components F^n: word -> combination of morphisms."""

    def __init__(self, object_map, components):
        self.object_map = dict(object_map)
        self.components = {tuple(w): {b: Fraction(v) for b, v in out.items() if v}
                           for w, out in components.items()}

    def apply(self, word):
        return self.components.get(tuple(word), {})


def _check_functor_shape(F, A, B):
    for o in A.objects:
        if F.object_map.get(o) not in B.objects:
            raise ShapeMismatch(f"object {o!r} has no image")
    for w, out in F.components.items():
        if any(a not in A.morphisms for a in w) or not A.composable(w):
            raise ShapeMismatch(f"component on {w!r} is not a composable word of the source")
        src = F.object_map[A.word_source(w)]
        tgt = F.object_map[A.word_target(w)]
        for b in out:
            if b not in B.morphisms:
                raise ShapeMismatch(f"{b!r} is not a morphism of the target")
            if B.source(b) != src or B.target(b) != tgt:
                raise ShapeMismatch(f"component on {w!r} lands outside Hom(F{src}, F{tgt})")
            if B.sdeg(b) != A.wdeg(w):
                raise ShapeMismatch(f"component on {w!r} is not of shifted degree 0")


def _functor_image(F, word):
    """Weight-graded pieces of B(F)(word): sum over splittings into blocks."""
    n = len(word)
    # partial[i]: combination of B-words coming from word[i:]
    partial_ = {n: {(): ONE}}
    for i in range(n - 1, -1, -1):
        acc = {}
        for j in range(i + 1, n + 1):
            comp = F.apply(word[i:j])
            if not comp:
                continue
            for rest, c in partial_[j].items():
                for b, v in comp.items():
                    add_term(acc, (b,) + rest, c * v)
        partial_[i] = acc
    return partial_[0]


def check_functor(F, A, B, max_weight):
    """Weight-one part of B(F)∘m̄_A = m̄_B∘B(F) on words of weight ≤ max_weight."""
    _check_functor_shape(F, A, B)
    fails = []
    for w in A.words(max_weight):
        lhs = {}
        for w2, c in A.codifferential(w).items():
            for b, v in F.apply(w2).items():
                add_term(lhs, b, c * v)
        rhs = {}
        for bw, c in _functor_image(F, w).items():
            if len(bw) > B.max_arity:
                continue
            for q, v in B.mbar_terms(bw):
                add_term(rhs, q, c * v)
        diff = dict(lhs)
        for k, v in rhs.items():
            add_term(diff, k, -v)
        if diff:
            fails.append({"word": list(w), "residual": comb_json(diff)})
    return ValidationReport("functor", not fails, fails, {"max_weight": max_weight})


def identity_functor(cat, max_weight=1):
    return AInftyFunctor({o: o for o in cat.objects},
                         {(a,): {a: 1} for a in cat.ids})
