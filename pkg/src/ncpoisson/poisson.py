"""The double bracket on the dual bar construction and its verifiers."""
from dataclasses import dataclass, field
from functools import partial
from itertools import product

from .ainfty import comb_json
from .bardual import (
    DoubleFunctional, Functional, _uncontract, as_support, dual_differential,
)
from .core import ONE, add_term, fraction_str, parity_sign, sgn_pair
from .hochcyc import t as rotate
from .parallel import pmap


class NotCyclic(ValueError):
    pass


@dataclass(frozen=True)
class Unit:
    """Weight-zero word: the unit at an object."""
    obj: str


def _deg(cat, w):
    return 0 if isinstance(w, Unit) else cat.wdeg(w)


def _src(cat, w):
    return w.obj if isinstance(w, Unit) else cat.word_source(w)


def _tgt(cat, w):
    return w.obj if isinstance(w, Unit) else cat.word_target(w)


def sign_table(cat, sgn=None):
    if sgn is None:
        return {p: sgn_pair(cat, p) for p in cat.ids}
    return {p: sgn(cat, p) for p in cat.ids}


def _prefix(cat, word):
    pre = [0]
    for a in word:
        pre.append(pre[-1] + cat.sdeg(a))
    return pre


def bracket_terms(cat, X, Y, signs, full=False):
    """Terms (u, v, value) of the double bracket of δ_X and δ_Y.

    Reads f at X = v_hi p u_lo and g at Y = u_hi p* v_lo; the output pair is
    u = u_hi u_lo, v = v_hi v_lo. With ``full`` an empty side becomes a Unit.
    """
    px = _prefix(cat, X)
    py = _prefix(cat, Y)
    tx, ty = px[-1], py[-1]
    positions = {}
    for t_, b in enumerate(Y):
        positions.setdefault(b, []).append(t_)
    out = []
    for s_, p in enumerate(X):
        sp = signs[p]
        if not sp:
            continue
        ts = positions.get(cat.dual(p))
        if not ts:
            continue
        dp = cat.sdeg(p)
        dps = cat.sdeg(cat.dual(p))
        v_hi = px[s_]
        u_lo = tx - px[s_ + 1]
        for t_ in ts:
            u_hi = py[t_]
            if not full and not (s_ + 1 < len(X) or t_ > 0):
                continue
            if not full and not (s_ > 0 or t_ + 1 < len(Y)):
                continue
            e = (u_hi + v_hi + dp) * u_lo + u_hi * (v_hi + dps)
            u = Y[:t_] + X[s_ + 1:]
            v = X[:s_] + Y[t_ + 1:]
            if full:
                if not u:
                    u = Unit(cat.source(p))
                if not v:
                    v = Unit(cat.target(p))
            out.append((u, v, parity_sign(e) * sp))
    return out


def _bracket_supports(cat, f, g, signs, full=False):
    out = {}
    for X, fx in f.items():
        for Y, gy in g.items():
            c = fx * gy
            for u, v, val in bracket_terms(cat, X, Y, signs, full):
                add_term(out, (u, v), val * c)
    return out


def double_bracket(cat, f, g, sgn=None):
    """{{f, g}} with literal values, following the explicit sum over (i, j, p)."""
    signs = sign_table(cat, sgn)
    return DoubleFunctional(_bracket_supports(cat, as_support(f), as_support(g), signs))


def formal_bracket(cat, f, g, signs, full=False):
    """Coefficients of {{f,g}} in the basis δ_u ⊗ δ_v, keyed by (u, v).

    Tensors of functionals are evaluated on pairs of words without a Koszul
    sign, so these are the literal values of the bracket.
    """
    return _bracket_supports(cat, as_support(f), as_support(g), signs, full)


def bracket(cat, f, g, sgn=None):
    """{f, g} = μ∘{{f, g}}, with μ(δ_u ⊗ δ_v) = δ_u • δ_v."""
    signs = sign_table(cat, sgn)
    out = {}
    for (u, v), c in formal_bracket(cat, f, g, signs).items():
        if cat.word_source(u) == cat.word_target(v):
            add_term(out, u + v, parity_sign(cat.wdeg(u) * cat.wdeg(v)) * c)
    return Functional(out)


# cyclic level -------------------------------------------------------------

def orbit(cat, word):
    """[(sign, t^k word)] for k = 0..n, the signed rotations of a cyclic word."""
    out = [(ONE, tuple(word))]
    s, w = ONE, tuple(word)
    for _ in range(len(word) - 1):
        s2, w = rotate(cat, w)
        s = s * s2
        out.append((s, w))
    return out


def cyclic_average(cat, f):
    """(Pf)(w) = f(N w)/(n+1) on cyclic words, zero on the rest."""
    f = as_support(f)
    words = set()
    for X in f:
        if cat.cyclic(X):
            words.update(w for _, w in orbit(cat, X))
    out = {}
    for w in sorted(words):
        tot = sum((s * f.get(x, 0) for s, x in orbit(cat, w)), 0)
        if tot:
            out[w] = tot / len(w)
    return Functional(out)


def is_cyclic(cat, f):
    """Whether f(T w) = f(w) for every word w."""
    f = as_support(f)
    for X, c in f.items():
        if not cat.cyclic(X):
            return False
        for s, y in orbit(cat, X):
            # t^k X = s·y, so invariance asks f(y) = s·f(X)
            if f.get(y, 0) != s * c:
                return False
    return True


def lie_bracket_cyclic(cat, f, g, sgn=None):
    if not is_cyclic(cat, f) or not is_cyclic(cat, g):
        raise NotCyclic("lie_bracket_cyclic needs T-invariant functionals")
    return cyclic_average(cat, bracket(cat, f, g, sgn))


def _fdeg(cat, f):
    f = as_support(f)
    degs = {cat.wdeg(w) for w in f}
    if len(degs) > 1:
        raise ValueError("inhomogeneous functional")
    return degs.pop() if degs else 0


def jacobi_on_cyclic(cat, f, g, h, sgn=None):
    """Cyclic average of the graded Jacobiator of the induced bracket."""
    for x in (f, g, h):
        if not is_cyclic(cat, x):
            raise NotCyclic("jacobi_on_cyclic needs T-invariant functionals")
    if not as_support(f) or not as_support(g) or not as_support(h):
        return Functional()
    d = cat.d
    df, dg, dh = (_fdeg(cat, x) + d for x in (f, g, h))
    L = partial(lie_bracket_cyclic, cat, sgn=sgn)
    out = Functional()
    out = out + L(f, L(g, h)).scale(parity_sign(df * dh))
    out = out + L(g, L(h, f)).scale(parity_sign(dg * df))
    out = out + L(h, L(f, g)).scale(parity_sign(dh * dg))
    return cyclic_average(cat, out)


def cyclic_symmetrization(cat, word):
    """N applied to δ_word, read as a functional (zero if it cancels)."""
    out = {}
    for s, w in orbit(cat, word):
        add_term(out, w, s)
    return Functional(out)


# verification -------------------------------------------------------------

MAX_REPORTED = 20


@dataclass
class BracketReport:
    weight_bound: int
    degree_check: dict = field(default_factory=dict)
    skew_check: dict = field(default_factory=dict)
    derivation_check: dict = field(default_factory=dict)
    double_jacobi_check: dict = field(default_factory=dict)
    differential_check: dict = field(default_factory=dict)

    CHECKS = ("degree_check", "skew_check", "derivation_check",
              "double_jacobi_check", "differential_check")

    @property
    def passed(self):
        return all(getattr(self, c).get("passed", False) for c in self.CHECKS)

    def to_json(self):
        out = {"weight_bound": self.weight_bound, "passed": self.passed}
        for c in self.CHECKS:
            out[c] = getattr(self, c)
        return out


def _summary(fails, checked):
    return {"passed": not fails, "checked": checked, "failure_count": len(fails),
            "failures": fails[:MAX_REPORTED]}


def _pairs_json(comb):
    rows = []
    for key, v in sorted(comb.items(), key=lambda kv: _key_str(kv[0])):
        rows.append([[_word_json(k) for k in key], fraction_str(v)])
    return rows


def _word_json(w):
    return ["1_" + w.obj] if isinstance(w, Unit) else list(w)


def _key_str(key):
    return tuple((0, w.obj) if isinstance(w, Unit) else (len(w), w) for w in key)


def _residual(a, b, sb=ONE):
    r = dict(a)
    for k, v in b.items():
        add_term(r, k, sb * v)
    return r


class _Ctx:
    """Per-process memo of delta brackets."""

    def __init__(self, cat, signs):
        self.cat = cat
        self.signs = signs
        self.memo = {}
        self.memo_full = {}

    def br(self, X, Y):
        key = (X, Y)
        r = self.memo.get(key)
        if r is None:
            r = formal_bracket(self.cat, {X: ONE}, {Y: ONE}, self.signs)
            self.memo[key] = r
        return r

    def br_full(self, X, Y):
        key = (X, Y)
        r = self.memo_full.get(key)
        if r is None:
            r = formal_bracket(self.cat, {X: ONE}, {Y: ONE}, self.signs, full=True)
            self.memo_full[key] = r
        return r


def flip(cat, comb):
    """(u ⊗ v)° = (-1)^{|u||v|} v ⊗ u on coefficients."""
    return {(v, u): parity_sign(_deg(cat, u) * _deg(cat, v)) * c
            for (u, v), c in comb.items()}


def _check_pairs(cat, signs, pairs):
    ctx = _Ctx(cat, signs)
    d = cat.d
    out = []
    for X, Y in pairs:
        dx, dy = cat.wdeg(X), cat.wdeg(Y)
        C = ctx.br(X, Y)
        deg_fail = None
        for (u, v) in C:
            if (cat.wdeg(u) + cat.wdeg(v) != dx + dy + 2 - d
                    or len(u) + len(v) != len(X) + len(Y) - 2):
                deg_fail = {"f": list(X), "g": list(Y), "pair": [list(u), list(v)]}
                break
        skew = _residual(C, flip(cat, ctx.br(Y, X)),
                         parity_sign((dx + d) * (dy + d)))
        dres = _differential_residual(cat, signs, X, Y, C)
        out.append((X, Y, deg_fail, skew, dres))
    return out


def pair_differential(cat, C):
    """Differential on pair functionals, with signs passing from the right:
    (∂C)(u, v) = (-1)^{|v|} C(m̄u, v) + C(u, m̄v). Computed forward."""
    out = {}
    for (u, v), c in as_support(C).items():
        tmp = {}
        _uncontract(cat, u, ONE, tmp)
        sv = parity_sign(_deg(cat, v)) * c
        for u2, cu in tmp.items():
            add_term(out, (u2, v), sv * cu)
        tmp = {}
        _uncontract(cat, v, ONE, tmp)
        for v2, cv in tmp.items():
            add_term(out, (u, v2), c * cv)
    return out


def _differential_residual(cat, signs, X, Y, C):
    """∂{{f,g}} - {{f,∂g}} - (-1)^{|g|} {{∂f,g}}."""
    lhs = pair_differential(cat, C)
    df = dual_differential(cat, {X: ONE}).support
    dg = dual_differential(cat, {Y: ONE}).support
    rhs = formal_bracket(cat, {X: ONE}, dg, signs)
    for k, v in formal_bracket(cat, df, {Y: ONE}, signs).items():
        add_term(rhs, k, parity_sign(cat.wdeg(Y)) * v)
    return _residual(lhs, rhs, -ONE)


def _word_product(cat, A, B):
    """δ_A • δ_B with units allowed; returns (word, sign) or None."""
    if _src(cat, A) != _tgt(cat, B):
        return None
    if isinstance(A, Unit):
        return B, ONE
    if isinstance(B, Unit):
        return A, ONE
    return A + B, parity_sign(cat.wdeg(A) * cat.wdeg(B))


def left_act(cat, G, C):
    """G • C for G a word: convolution on the first slot, where G passes the
    whole pair, (G•C)(G x, y) = (-1)^{|G|(|x|+|y|)} C(x, y) up to the word sign."""
    out = {}
    for (x, y), c in C.items():
        r = _word_product(cat, G, x)
        if r is not None:
            s = parity_sign(_deg(cat, G) * _deg(cat, y))
            add_term(out, (r[0], y), s * r[1] * c)
    return out


def right_act(cat, C, H):
    """C • H for H a word: convolution on the second slot, where H passes the
    whole pair, (C•H)(x, y H) = (-1)^{|H||x|} (x ⊗ (y•H))."""
    out = {}
    for (x, y), c in C.items():
        r = _word_product(cat, y, H)
        if r is not None:
            s = parity_sign(_deg(cat, H) * _deg(cat, x))
            add_term(out, (x, r[0]), s * r[1] * c)
    return out


def leibniz_residual(cat, signs, X, Y, Z, ctx=None):
    """{{f, g•h}} - g•{{f,h}} - (-1)^{(|f|+d)|h|} {{f,g}}•h, units kept."""
    ctx = ctx or _Ctx(cat, signs)
    lhs = {}
    gh = _word_product(cat, Y, Z)
    if gh is not None:
        w, s = gh
        for k, v in ctx.br_full(X, w).items():
            add_term(lhs, k, s * v)
    rhs = left_act(cat, Y, ctx.br_full(X, Z))
    sh = parity_sign((cat.wdeg(X) + cat.d) * cat.wdeg(Z))
    for k, v in right_act(cat, ctx.br_full(X, Y), Z).items():
        add_term(rhs, k, sh * v)
    return _residual(lhs, rhs, -ONE)


def _left_action(ctx, a, comb):
    """{{a, x ⊗ y}}_L = {{a, x}} ⊗ y."""
    out = {}
    for (x, y), c in comb.items():
        for (u, v), c2 in ctx.br(a, x).items():
            add_term(out, (u, v, y), c * c2)
    return out


def _sigma123(cat, T):
    return {(z, x, y): parity_sign(cat.wdeg(z) * (cat.wdeg(x) + cat.wdeg(y))) * c
            for (x, y, z), c in T.items()}


def _sigma132(cat, T):
    return {(y, z, x): parity_sign(cat.wdeg(x) * (cat.wdeg(y) + cat.wdeg(z))) * c
            for (x, y, z), c in T.items()}


def jacobi_residual(cat, ctx, X, Y, Z):
    d = cat.d
    dx, dy, dz = cat.wdeg(X), cat.wdeg(Y), cat.wdeg(Z)
    out = _left_action(ctx, X, ctx.br(Y, Z))
    s = parity_sign((dx + d) * (dy + dz))
    for k, v in _sigma123(cat, _left_action(ctx, Y, ctx.br(Z, X))).items():
        add_term(out, k, s * v)
    s = parity_sign((dz + d) * (dx + dy))
    for k, v in _sigma132(cat, _left_action(ctx, Z, ctx.br(X, Y))).items():
        add_term(out, k, s * v)
    return out


def _check_triples(cat, signs, triples):
    ctx = _Ctx(cat, signs)
    out = []
    for X, Y, Z in triples:
        out.append((X, Y, Z, leibniz_residual(cat, signs, X, Y, Z, ctx),
                    jacobi_residual(cat, ctx, X, Y, Z)))
    return out


def verify_double_poisson(cat, max_weight, sgn=None, jobs=1):
    """Check degree law, skew symmetry, Leibniz rule, double Jacobi and
    compatibility with the differential on all delta tuples of weight ≤ max_weight."""
    signs = sign_table(cat, sgn)
    words = cat.words(max_weight)
    pairs = list(product(words, repeat=2))
    res = pmap(partial(_check_pairs, cat, signs), pairs, jobs)
    deg_f, skew_f, diff_f = [], [], []
    for X, Y, dfail, skew, dres in res:
        if dfail:
            deg_f.append(dfail)
        if skew:
            skew_f.append({"f": list(X), "g": list(Y), "residual": _pairs_json(skew)})
        if dres:
            diff_f.append({"f": list(X), "g": list(Y), "residual": _pairs_json(dres)})
    triples = list(product(words, repeat=3))
    res3 = pmap(partial(_check_triples, cat, signs), triples, jobs)
    leib_f, jac_f = [], []
    for X, Y, Z, lres, jres in res3:
        if lres:
            leib_f.append({"f": list(X), "g": list(Y), "h": list(Z),
                           "residual": _pairs_json(lres)})
        if jres:
            jac_f.append({"f": list(X), "g": list(Y), "h": list(Z),
                          "residual": _pairs_json(jres)})
    return BracketReport(
        weight_bound=max_weight,
        degree_check=_summary(deg_f, len(pairs)),
        skew_check=_summary(skew_f, len(pairs)),
        derivation_check=_summary(leib_f, len(triples)),
        double_jacobi_check=_summary(jac_f, len(triples)),
        differential_check=_summary(diff_f, len(pairs)),
    )


def functional_json(f):
    return comb_json(as_support(f))


def double_json(D):
    return _pairs_json(as_support(D))
