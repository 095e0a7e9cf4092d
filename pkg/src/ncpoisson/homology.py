"""Exact linear algebra and cyclic (co)homology dimensions."""
from fractions import Fraction
from math import gcd, lcm

from .bardual import as_support
from .core import ONE, add_term
from .hochcyc import cyclic_complex, orbit_class, quotient_basis


def _integer_row(row):
    den = 1
    for x in row:
        den = lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in row]


def _normalize(row):
    g = 0
    for x in row:
        g = gcd(g, x)
    if g > 1:
        row = [x // g for x in row]
    for x in row:
        if x:
            return row if x > 0 else [-y for y in row]
    return row


def echelon(matrix):
    """Fraction-free row echelon form.

    Rows are scaled to integers; each new row is reduced against the
    pivots found so far and its first nonzero column becomes its pivot.
    Returns [(pivot_col, row)] sorted by pivot column.
    """
    pivots = {}
    for raw in matrix:
        row = _integer_row(raw)
        for c in sorted(pivots):
            if row[c]:
                p = pivots[c]
                a, r = p[c], row[c]
                row = [a * x - r * y for x, y in zip(row, p)]
        row = _normalize(row)
        lead = next((c for c, x in enumerate(row) if x), None)
        if lead is None:
            continue
        # keep earlier pivots reduced in the new pivot column
        pivots[lead] = row
    return sorted(pivots.items())


def rank_kernel(matrix):
    """(rank, kernel basis) of a matrix given as a list of rows."""
    matrix = [list(r) for r in matrix]
    ncols = len(matrix[0]) if matrix else 0
    ech = echelon(matrix)
    rank = len(ech)
    # back-substitute to reduced form with exact fractions
    rref = {}
    for c, row in reversed(ech):
        r = [Fraction(x, row[c]) for x in row]
        for c2, r2 in rref.items():
            if r[c2]:
                f = r[c2]
                r = [x - f * y for x, y in zip(r, r2)]
        rref[c] = r
    free = [c for c in range(ncols) if c not in rref]
    kernel = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for c, r in rref.items():
            v[c] = -r[fc]
        kernel.append(v)
    return rank, kernel


def rank(matrix):
    return len(echelon([list(r) for r in matrix]))


def transpose(matrix, nrows=None, ncols=None):
    if not matrix:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*matrix)]


def _dims(basis, rank_out, rank_in):
    return len(basis) - rank_out - rank_in


def _ranks(cx, matrix_for):
    lo, hi = cx.degrees
    ranks = {}
    for n in range(lo, hi):
        m = matrix_for(n)
        ranks[n] = rank(m) if m and m[0] else 0
    return ranks


def chain_dims(cx):
    """dim H_n = dim C_n - rank(b_n) - rank(b_{n-1}) for interior degrees."""
    lo, hi = cx.degrees
    ranks = _ranks(cx, lambda n: cx.matrix[n])
    return {n: _dims(cx.basis[n], ranks[n], ranks[n - 1]) for n in range(lo + 1, hi)}


def _dual_b(cat, phi_word, max_weight):
    """Functional w ↦ φ(b w) for φ the invariant functional of an orbit,
    computed forward by expanding the letters of φ's support."""
    from .bardual import _uncontract
    rep, cls = orbit_class(cat, phi_word)
    out = {}
    for y, s in cls.items():
        # b' part: y appears in the codifferential of X
        _uncontract(cat, y, s, out)
        # b'' part: y = (q,) + rest with q from a wrapped block
        q, rest = y[0], y[1:]
        for blk, v in cat.uncontract_terms(q):
            L = len(blk)
            for i in range(1, L):
                X = blk[i:] + rest + blk[:i]
                if not cat.cyclic(X):
                    continue
                n = len(X) - 1
                j = L - i - 1
                if j > n - 1 or i > n - j:
                    continue
                deg = [cat.sdeg(a) for a in X]
                low = sum(deg[n + 1 - i:])
                mid = sum(deg[j + 1:n + 1 - i])
                sign = -1 if (low * (sum(deg) - low) + mid) % 2 else 1
                add_term(out, X, s * v * sign)
    return out


def cochain_matrices(cat, cx):
    """δ: C^{n+1} -> C^n on invariant functionals, built from the forward dual
    of b, independent of the chain matrices."""
    lo, hi = cx.degrees
    mats = {}
    for n in range(lo, hi):
        src = cx.basis[n + 1]
        tgt = cx.basis[n]
        idx = {w: i for i, w in enumerate(tgt)}
        rows = [[0] * len(src) for _ in tgt]
        for j, w in enumerate(src):
            val = _dual_b(cat, w, cx.max_weight)
            for i, r in enumerate(tgt):
                rows[i][j] = val.get(r, 0)
        mats[n] = rows
    return mats


def cochain_dims(cat, cx):
    lo, hi = cx.degrees
    mats = cochain_matrices(cat, cx)
    ranks = {n: (rank(m) if m and m[0] else 0) for n, m in mats.items()}
    return {n: _dims(cx.basis[n], ranks[n], ranks[n - 1]) for n in range(lo + 1, hi)}


def oracle_dims(cx):
    """Transpose the chain matrices and recompute ranks."""
    lo, hi = cx.degrees
    ranks = {}
    for n in range(lo, hi):
        m = cx.matrix[n]
        mt = transpose(m) if m and m[0] else []
        ranks[n] = rank(mt) if mt and mt[0] else 0
    return {n: _dims(cx.basis[n], ranks[n], ranks[n - 1]) for n in range(lo + 1, hi)}


def hc_dims(cat, max_weight, degrees):
    """Cyclic homology and cohomology dimensions per shifted degree.

    Chains are cyclic words of weight ≤ max_weight modulo Im(1-T); the
    differential b does not raise weight, so the truncation is a subcomplex.
    """
    lo, hi = degrees
    if not cat.ids:
        return {"max_weight": max_weight, "degrees": [lo, hi], "table": [], "passed": True}
    cx = cyclic_complex(cat, (lo - 1, hi), max_weight)
    chain = chain_dims(cx)
    cochain = cochain_dims(cat, cx)
    oracle = oracle_dims(cx)
    cells = []
    for n in range(lo, hi + 1):
        cells.append({"degree": n, "chain_dim": chain[n], "cochain_dim": cochain[n],
                      "oracle_dim": oracle[n], "cells": len(cx.basis[n]),
                      "agree": chain[n] == cochain[n] == oracle[n]})
    return {"max_weight": max_weight, "degrees": [lo, hi], "table": cells,
            "passed": all(c["agree"] for c in cells)}
