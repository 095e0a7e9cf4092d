import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ncpoisson.ainfty import AInftyCategory
from ncpoisson.bardual import Functional
from ncpoisson.core import ONE, PLUS, STAR, BasisMorphism, NotValidated, add_term, sgn_pair
from ncpoisson.examples import BUNDLED, s2xs2, sph, tri3, zero4
from ncpoisson.hochcyc import N, b, orbit_class
from ncpoisson.homology import rank_kernel
from ncpoisson.poisson import (
    NotCyclic, bracket, cyclic_average, cyclic_symmetrization, double_bracket,
    is_cyclic, jacobi_on_cyclic, lie_bracket_cyclic, verify_double_poisson,
)


def zero_pair():
    """Two objects joined by p (shifted degree 0) and p* (shifted degree 2)."""
    ms = [BasisMorphism("p", "A", "B", 1, "ps", PLUS),
          BasisMorphism("ps", "B", "A", 3, "p", STAR)]
    return AInftyCategory(["A", "B"], ms, 4, 2, {}, name="ZERO(4)")


def oracle_value(cat, f, g, u, v):
    """Naive transcription of the (i, j, p) sum, evaluated at (u, v)."""
    m, n = len(u), len(v)
    total = 0
    for i in range(1, m + 2):
        for j in range(1, n + 2):
            a_hi, a_lo = u[:m - i + 1], u[m - i + 1:]
            b_hi, b_lo = v[:n - j + 1], v[n - j + 1:]
            for p in cat.ids:
                ps = cat.dual(p)
                fv = f.get(b_hi + (p,) + a_lo, 0)
                gv = g.get(a_hi + (ps,) + b_lo, 0)
                if not fv or not gv:
                    continue
                A_hi, A_lo, B_hi = cat.wdeg(a_hi), cat.wdeg(a_lo), cat.wdeg(b_hi)
                eps = (A_hi + B_hi + cat.sdeg(p)) * A_lo + A_hi * (B_hi + cat.sdeg(ps))
                total += (-1) ** (eps % 2) * sgn_pair(cat, p) * fv * gv
    return total


def oracle_bracket(cat, f, g):
    totals = {len(X) + len(Y) - 2 for X in f for Y in g}
    by_len = {}
    for w in cat.words(max(totals)):
        by_len.setdefault(len(w), []).append(w)
    out = {}
    for T in totals:
        for k in range(1, T):
            for u in by_len.get(k, []):
                for v in by_len.get(T - k, []):
                    val = oracle_value(cat, f, g, u, v)
                    if val:
                        out[(u, v)] = val
    return out


def test_zero_pair_example():
    z = zero_pair()
    f, g = {("p", "ps"): 1}, {("ps", "p"): 1}
    # two corners land on ((p*), (p)) with ε = 0 and sgn(p)·sgn(p*) = -1
    assert oracle_value(z, f, g, ("ps",), ("p",)) == 0
    assert not double_bracket(z, f, g)
    for X, Y in itertools.product(z.words(2, 2), repeat=2):
        D = double_bracket(z, {X: 1}, {Y: 1})
        assert D.support == oracle_bracket(z, {X: 1}, {Y: 1})
    # with the extra letters of the bundled ZERO(4) weight-two pairs do not vanish
    z = zero4()
    nonzero = 0
    for X, Y in itertools.product(z.words(2, 2), repeat=2):
        D = double_bracket(z, {X: 1}, {Y: 1})
        assert D.support == oracle_bracket(z, {X: 1}, {Y: 1})
        for (u, v), c in D.items():
            assert len(u) == len(v) == 1 and c in (1, -1)
            nonzero += 1
    assert nonzero


@pytest.mark.parametrize("name", ["sph4", "zero4", "s2xs2"])
def test_double_bracket_matches_oracle(name):
    cat = BUNDLED[name]()
    rng = random.Random(7)
    words = cat.words(3)
    for _ in range(40):
        f = {w: rng.randint(-2, 2) for w in rng.sample(words, 3)}
        g = {w: rng.randint(-2, 2) for w in rng.sample(words, 3)}
        f = {w: c for w, c in f.items() if c}
        g = {w: c for w, c in g.items() if c}
        if not f or not g:
            continue
        assert double_bracket(cat, f, g).support == oracle_bracket(cat, f, g)


def test_zero_inputs_and_weight_one():
    s = sph(4)
    assert not double_bracket(s, {}, {("e",): 1})
    assert not double_bracket(s, {("e",): 1}, {("x",): 1})
    assert not bracket(s, {}, {("e",): 1})


def test_needs_validated_category():
    ms = [BasisMorphism("p", "A", "A", 1, "q", PLUS),
          BasisMorphism("q", "A", "A", 3, "p", STAR)]
    raw = AInftyCategory(["A"], ms, 4, 2, {}, check=False)
    with pytest.raises(NotValidated):
        double_bracket(raw, {("p", "q"): 1}, {("q", "p"): 1})


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["sph4", "zero4", "s2xs2", "sph2"]), st.data())
def test_weight_and_degree_law(name, data):
    cat = BUNDLED[name]()
    words = cat.words(3)
    X = data.draw(st.sampled_from(words))
    Y = data.draw(st.sampled_from(words))
    for (u, v) in double_bracket(cat, {X: 1}, {Y: 1}).support:
        assert len(u) >= 1 and len(v) >= 1
        assert len(u) + len(v) == len(X) + len(Y) - 2
        assert cat.wdeg(u) + cat.wdeg(v) == cat.wdeg(X) + cat.wdeg(Y) + 2 - cat.d


def test_bracket_lands_in_weight_one():
    z = zero4()
    for X, Y in itertools.product(z.words(2), z.words(1)):
        for w in bracket(z, {X: 1}, {Y: 1}).support:
            assert len(w) == 1


def test_bracket_contracts_double_bracket():
    z = zero_pair()
    f, g = {("p", "ps"): 1}, {("ps", "p"): 1}
    D = double_bracket(z, f, g)
    expect = {}
    for (u, v), c in D.items():
        if z.word_source(u) == z.word_target(v):
            add_term(expect, u + v, (-1) ** ((z.wdeg(u) * z.wdeg(v)) % 2) * c)
    assert bracket(z, f, g) == expect
    assert all(len(w) == 2 for w in bracket(z, f, g).support)


@pytest.mark.parametrize("name", ["sph4", "sph2", "zero4"])
def test_double_poisson_weight_two(name):
    rep = verify_double_poisson(BUNDLED[name](), 2)
    assert rep.passed, rep.to_json()


def test_double_poisson_sph4_weight_three():
    assert verify_double_poisson(sph(4), 3).passed


def _failures(rep):
    return {c: getattr(rep, c)["failure_count"] for c in rep.CHECKS}


def test_constant_sign_is_a_global_rescaling_on_sph4():
    # both members of the SPH(4) pair have sgn = -1, so sgn ≡ +1 negates the
    # whole bracket and every identity survives
    s = sph(4)
    assert {sgn_pair(s, p) for p in s.ids} == {-1}
    assert verify_double_poisson(s, 3, sgn=lambda cat, p: 1).passed


def test_relative_sign_is_load_bearing():
    s = sph(4)
    rep = verify_double_poisson(s, 3, sgn=lambda cat, p: 1 if p == "e" else -1)
    fails = _failures(rep)
    assert fails["skew_check"] and fails["double_jacobi_check"]
    rep = verify_double_poisson(zero4(), 2, sgn=lambda cat, p: 1)
    assert not rep.skew_check["passed"]


def test_odd_dimension_fails_honestly():
    rep = verify_double_poisson(tri3(), 2)
    assert not rep.passed


# cyclic level -------------------------------------------------------------

def cyclic_deltas(cat, W):
    out = []
    seen = set()
    for w in cat.cyclic_words(W):
        rep, cls = orbit_class(cat, w)
        if cls is None or rep in seen:
            continue
        seen.add(rep)
        out.append(cyclic_symmetrization(cat, rep))
    return out


def test_not_cyclic():
    z = zero4()
    with pytest.raises(NotCyclic):
        lie_bracket_cyclic(z, {("u", "v"): 1}, {("u",): 1})
    with pytest.raises(NotCyclic):
        jacobi_on_cyclic(z, {("p",): 1}, {("u",): 1}, {("u",): 1})


def test_cyclic_average_idempotent():
    for name in ("sph4", "zero4", "s2xs2"):
        cat = BUNDLED[name]()
        rng = random.Random(3)
        words = cat.cyclic_words(3)
        for _ in range(20):
            h = {w: rng.randint(-3, 3) for w in rng.sample(words, 4)}
            P = cyclic_average(cat, h)
            assert is_cyclic(cat, P)
            assert cyclic_average(cat, P) == P


def test_disjoint_support_vanishes():
    ms = [BasisMorphism("a", "A", "A", 1, "as", PLUS),
          BasisMorphism("as", "A", "A", 3, "a", STAR),
          BasisMorphism("c", "C", "C", 1, "cs", PLUS),
          BasisMorphism("cs", "C", "C", 3, "c", STAR)]
    cat = AInftyCategory(["A", "C"], ms, 4, 2, {})
    f = cyclic_symmetrization(cat, ("a", "as"))
    g = cyclic_symmetrization(cat, ("c", "cs"))
    assert not lie_bracket_cyclic(cat, f, g)


@pytest.mark.parametrize("name", ["sph4", "zero4", "s2xs2", "sph2"])
def test_lie_skew_and_jacobi(name):
    cat = BUNDLED[name]()
    fs = cyclic_deltas(cat, 2)
    d = cat.d
    degs = [cat.wdeg(next(iter(f.support))) for f in fs]
    for (f, df), (g, dg) in itertools.product(zip(fs, degs), repeat=2):
        s = (-1) ** (((df + d) * (dg + d)) % 2)
        assert not (lie_bracket_cyclic(cat, f, g) + lie_bracket_cyclic(cat, g, f).scale(s))
    for f, g, h in itertools.product(fs, repeat=3):
        assert not jacobi_on_cyclic(cat, f, g, h)


def test_self_bracket_of_even_element_vanishes():
    for name in ("sph4", "zero4"):
        cat = BUNDLED[name]()
        for f in cyclic_deltas(cat, 3):
            if (cat.wdeg(next(iter(f.support))) + cat.d) % 2 == 0:
                assert not lie_bracket_cyclic(cat, f, f)


def test_restriction_agreement():
    for name in ("sph4", "zero4"):
        cat = BUNDLED[name]()
        fs = cyclic_deltas(cat, 3)
        for f, g in itertools.product(fs, repeat=2):
            h = bracket(cat, f, g)
            P = cyclic_average(cat, h)
            W = max([len(w) for w in h.support] + [1])
            for w in cat.cyclic_words(W):
                Nw = N(cat, w)
                assert sum((c * h(k) for k, c in Nw.items()), 0) == \
                    sum((c * P(k) for k, c in Nw.items()), 0)


def cyclic_cocycles(cat, W):
    """Cyclic functionals of weight ≤ W vanishing on every b-boundary."""
    test_words = cat.cyclic_words(W + cat.max_arity - 1)
    by_degree = {}
    for f in cyclic_deltas(cat, W):
        by_degree.setdefault(cat.wdeg(next(iter(f.support))), []).append(f)
    out = []
    for fs in by_degree.values():
        rows = []
        for w in test_words:
            bw = b(cat, w)
            rows.append([sum((v * f(k) for k, v in bw.items()), 0) for f in fs])
        for vec in rank_kernel(rows)[1]:
            f = Functional()
            for c, fi in zip(vec, fs):
                f = f + fi.scale(c)
            if f:
                out.append(f)
    return out


@pytest.mark.parametrize("name,W", [("sph4", 3), ("zero4", 3), ("s2xs2", 2)])
def test_bracket_of_cocycles_is_a_cocycle(name, W):
    cat = BUNDLED[name]()
    cs = cyclic_cocycles(cat, W)
    assert cs
    for f, g in itertools.product(cs, repeat=2):
        h = lie_bracket_cyclic(cat, f, g)
        for w in cat.cyclic_words(2 * W - 1):
            assert sum((v * h(k) for k, v in b(cat, w).items()), 0) == 0
