"""Hochschild and cyclic operators on cyclic words, and their bicomplex."""
from dataclasses import dataclass, field
from functools import partial
import random

from .ainfty import comb_json
from .bardual import as_support, cocommutator_test
from .core import ONE, InvalidInput, add_term, parity_sign
from .parallel import pmap


def _check_cyclic(cat, w):
    if not cat.cyclic(w):
        raise InvalidInput(f"word {list(w)} is not cyclically composable")


def b_prime(cat, w):
    """Bar differential on a cyclic word, all blocks including the whole word."""
    w = tuple(w)
    _check_cyclic(cat, w)
    return cat.codifferential(w)


def b_double_prime(cat, w):
    """Terms where m̄ eats a block wrapping around the end of the word.

    For w = (a_{n+1}, ..., a_1) the block is a_i..a_1 followed by
    a_{n+1}..a_{n-j+1} and the output is m̄(block) placed in front of
    a_{n-j}..a_{i+1}.
    """
    w = tuple(w)
    _check_cyclic(cat, w)
    L = len(w)
    n = L - 1
    deg = [cat.sdeg(a) for a in w]
    total = sum(deg)
    out = {}
    for j in range(0, n):
        for i in range(1, n - j + 1):
            block = w[n + 1 - i:] + w[:j + 1]
            terms = cat.mbar_terms(block)
            if not terms:
                continue
            rest = w[j + 1:n + 1 - i]
            low = sum(deg[n + 1 - i:])
            mid = sum(deg[j + 1:n + 1 - i])
            s = parity_sign(low * (total - low) + mid)
            for q, v in terms:
                add_term(out, (q,) + rest, s * v)
    return out


def b(cat, w):
    out = b_prime(cat, w)
    for k, v in b_double_prime(cat, w).items():
        add_term(out, k, v)
    return out


def t(cat, w):
    """Cyclic rotation: (sign, (a_1, a_{n+1}, ..., a_2))."""
    w = tuple(w)
    first = cat.sdeg(w[-1])
    return parity_sign(first * (cat.wdeg(w) - first)), w[-1:] + w[:-1]


def N(cat, w):
    out = {}
    s, x = ONE, tuple(w)
    for _ in range(len(w)):
        add_term(out, x, s)
        s2, x = t(cat, x)
        s = s * s2
    return out


def apply(op, cat, comb):
    """Extend a per-word operator linearly."""
    out = {}
    for w, c in as_support(comb).items():
        for k, v in op(cat, w).items():
            add_term(out, k, c * v)
    return out


def T(cat, comb):
    out = {}
    for w, c in as_support(comb).items():
        s, x = t(cat, w)
        add_term(out, x, s * c)
    return out


def one_minus_T(cat, comb):
    out = dict(as_support(comb))
    for k, v in T(cat, comb).items():
        add_term(out, k, -v)
    return out


def _diff(a, b_):
    out = dict(a)
    for k, v in b_.items():
        add_term(out, k, -v)
    return out


def _bicomplex_chunk(cat, words):
    out = []
    for w in words:
        r1 = _diff(apply(b_prime, cat, N(cat, w)), apply(N, cat, b(cat, w)))
        r2 = _diff(apply(b, cat, one_minus_T(cat, {w: ONE})),
                   one_minus_T(cat, b_prime(cat, w)))
        out.append((w, r1, r2))
    return out


@dataclass
class BicomplexReport:
    max_weight: int
    checked: int
    bprime_N: dict = field(default_factory=dict)
    b_one_minus_T: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.bprime_N["passed"] and self.b_one_minus_T["passed"]

    def to_json(self):
        return {"max_weight": self.max_weight, "checked": self.checked,
                "passed": self.passed, "bprime_N_equals_N_b": self.bprime_N,
                "b_one_minus_T_equals_one_minus_T_bprime": self.b_one_minus_T}


def verify_bicomplex(cat, max_weight, jobs=1):
    """Residuals of b'N - Nb and b(1-T) - (1-T)b' on cyclic words."""
    words = cat.cyclic_words(max_weight)
    res = pmap(partial(_bicomplex_chunk, cat), words, jobs)
    f1 = [{"word": list(w), "residual": comb_json(r)} for w, r, _ in res if r]
    f2 = [{"word": list(w), "residual": comb_json(r)} for w, _, r in res if r]
    return BicomplexReport(
        max_weight, len(words),
        {"passed": not f1, "failure_count": len(f1), "failures": f1[:20]},
        {"passed": not f2, "failure_count": len(f2), "failures": f2[:20]},
    )


# cyclic quotient ------------------------------------------------------------

def orbit_class(cat, w):
    """Canonical representative r and signs with x ≡ s·r modulo Im(1-T).

    Returns (r, {x: s}) or (r, None) if the class vanishes.
    """
    w = tuple(w)
    seen = {}
    x, s = w, ONE
    for _ in range(len(w)):
        s2, y = t(cat, x)
        seen.setdefault(x, set()).add(s)
        # x ≡ T x = s2·y, so y ≡ s2·x
        x, s = y, s * s2
    seen.setdefault(x, set()).add(s)
    rep = min(seen)
    if any(len(v) > 1 for v in seen.values()):
        return rep, None
    base = next(iter(seen[rep]))
    return rep, {y: next(iter(v)) * base for y, v in seen.items()}


def cell_words(cat, weight, degree):
    return [w for w in cat.cyclic_words(weight, weight) if cat.wdeg(w) == degree]


def _cell_index(cat, max_weight):
    cells = {}
    for w in cat.cyclic_words(max_weight):
        cells.setdefault((len(w), cat.wdeg(w)), []).append(w)
    return cells


@dataclass
class ChainComplexSlice:
    """Cyclic chains Coker(1-T) in a range of shifted degrees.

    ``basis[n]`` lists orbit representatives of degree n (sorted by weight, word);
    ``matrix[n]`` is b: C_n -> C_{n+1} as a dense list of rows indexed by
    basis[n+1], columns by basis[n].
    """
    degrees: tuple
    max_weight: int
    basis: dict
    matrix: dict

    def weights(self, n):
        return [len(w) for w in self.basis[n]]

    @property
    def cells(self):
        """(weight, degree) -> orbit representatives of that cell."""
        out = {}
        for n, words in sorted(self.basis.items()):
            for w in words:
                out.setdefault((len(w), n), []).append(w)
        return out

    def square_residuals(self):
        """Degrees n where matrix[n+1]·matrix[n] is not the zero matrix."""
        bad = []
        for n in sorted(self.matrix):
            if n + 1 not in self.matrix:
                continue
            A, B = self.matrix[n + 1], self.matrix[n]
            for row in A:
                if any(sum(row[k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]) if B else 0)):
                    bad.append(n)
                    break
        return bad


def quotient_basis(cat, words):
    reps = {}
    for w in words:
        rep, cls = orbit_class(cat, w)
        if cls is not None:
            reps[rep] = cls
    return sorted(reps, key=lambda w: (len(w), w)), reps


def project(cat, comb):
    """Express a combination of cyclic words on orbit representatives."""
    out = {}
    for w, c in as_support(comb).items():
        rep, cls = orbit_class(cat, w)
        if cls is not None:
            add_term(out, rep, c * cls[w])
    return out


def cyclic_complex(cat, degrees, max_weight):
    lo, hi = degrees
    words = {}
    for w in cat.cyclic_words(max_weight):
        words.setdefault(cat.wdeg(w), []).append(w)
    basis = {}
    for n in range(lo, hi + 2):
        basis[n], _ = quotient_basis(cat, words.get(n, []))
    matrix = {}
    for n in range(lo, hi + 1):
        idx = {w: i for i, w in enumerate(basis[n + 1])}
        rows = [[0] * len(basis[n]) for _ in basis[n + 1]]
        for j, w in enumerate(basis[n]):
            for k, v in project(cat, b(cat, w)).items():
                if k in idx:
                    rows[idx[k]][j] += v
                elif len(k) <= max_weight:
                    raise AssertionError("b left the degree slice")
        matrix[n] = rows
    return ChainComplexSlice((lo, hi + 1), max_weight, basis, matrix)


def cyclic_complex_slice(cat, degree, max_weight):
    """Cells of degrees degree-1, degree, degree+1 with both differentials."""
    return cyclic_complex(cat, (degree - 1, degree), max_weight)


# Quillen ---------------------------------------------------------------------

def _one_minus_T_matrix(cat, words):
    idx = {w: i for i, w in enumerate(words)}
    rows = [[0] * len(words) for _ in words]
    for j, w in enumerate(words):
        for k, v in one_minus_T(cat, {w: ONE}).items():
            rows[idx[k]][j] += v
    return rows


def quillen_check(cat, degree, max_weight, seed=0, samples=8):
    """Per (weight, degree) cell: dim Ker(1-T) = dim Coker(1-T), and the
    cocommutator vanishes exactly on Ker(1-T)."""
    from .homology import rank_kernel
    rng = random.Random(seed)
    cells = []
    for weight in range(1, max_weight + 1):
        words = cell_words(cat, weight, degree)
        if not words:
            continue
        M = _one_minus_T_matrix(cat, words)
        rank, kernel = rank_kernel(M)
        coker = len(quotient_basis(cat, words)[0])
        ker = len(words) - rank
        mismatches = []
        tests = []
        for vec in kernel:
            tests.append({w: c for w, c in zip(words, vec) if c})
        for w in words:
            tests.append({w: ONE})
        for _ in range(samples):
            x = {w: rng.randint(-3, 3) for w in words}
            tests.append({w: c for w, c in x.items() if c})
            if kernel:
                k = kernel[rng.randrange(len(kernel))]
                tests.append({w: c for w, c in zip(words, k) if c})
        for x in tests:
            in_ker = not one_minus_T(cat, x)
            if cocommutator_test(cat, x) != in_ker:
                mismatches.append(comb_json(x))
        cells.append({"weight": weight, "degree": degree, "words": len(words),
                      "dim_ker": ker, "dim_coker": coker,
                      "dims_agree": ker == coker,
                      "cocommutator_agrees": not mismatches,
                      "tested": len(tests), "mismatches": mismatches[:5]})
    return {"degree": degree, "max_weight": max_weight, "cells": cells,
            "passed": all(c["dims_agree"] and c["cocommutator_agrees"] for c in cells)}


def degrees_present(cat, max_weight):
    return sorted({cat.wdeg(w) for w in cat.cyclic_words(max_weight)})
