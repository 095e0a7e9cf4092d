"""Exact scalars, basis morphisms and the Koszul sign primitives."""
from dataclasses import dataclass
from fractions import Fraction

Scalar = Fraction

ONE = Fraction(1)
ZERO = Fraction(0)


class InvalidInput(ValueError):
    pass


class NotValidated(RuntimeError):
    pass


class DualityError(ValueError):
    pass


def parity_sign(n):
    return ONE if n % 2 == 0 else -ONE


def koszul_swap_sign(deg_left, deg_right):
    return parity_sign(deg_left * deg_right)


def shift_sign(unshifted_degrees):
    """Sign of the n-fold desuspension on v_1 (x) ... (x) v_n.

    Exponent is (n-1)|v_n| + (n-2)|v_{n-1}| + ... + |v_2|.
    """
    degs = list(unshifted_degrees)
    if not degs:
        raise InvalidInput("shift_sign needs at least one degree")
    n = len(degs)
    # degs[k] is v_{k+1}; its coefficient is k
    return parity_sign(sum(k * d for k, d in enumerate(degs)))


PLUS = "plus"
STAR = "star"


@dataclass(frozen=True)
class BasisMorphism:
    id: str
    source: str
    target: str
    degree: int
    dual_id: str
    orientation: str = PLUS

    @property
    def shifted(self):
        return self.degree - 1


def add_term(comb, key, value):
    """In-place comb[key] += value, dropping zeros."""
    if not value:
        return
    new = comb.get(key, ZERO) + value
    if new:
        comb[key] = new
    else:
        del comb[key]


def add_into(comb, other, scale=ONE):
    for k, v in other.items():
        add_term(comb, k, scale * v)
    return comb


def scaled(comb, scale):
    if not scale:
        return {}
    return {k: scale * v for k, v in comb.items()}


def to_fraction(value):
    """Parse an exact rational from int, Fraction or a "num/den" string."""
    if isinstance(value, bool):
        raise InvalidInput(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational: {value!r}") from exc
    raise InvalidInput(f"not a rational: {value!r}")


def fraction_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def sgn_pair(cat, p, convention=None):
    """Orientation sign sgn(p, p*) attached to a basis morphism.

    ``convention`` is "shifted" (default, taken from the category) or
    "unshifted"; it selects which grading the sign formula reads.
    """
    if not getattr(cat, "validated", False):
        raise NotValidated("sgn_pair needs a structurally validated category")
    conv = convention or getattr(cat, "sign_convention", "shifted")
    m = cat.morphisms[p]
    ms = cat.morphisms[m.dual_id]
    if conv == "shifted":
        dp, dps = m.shifted, ms.shifted
    elif conv == "unshifted":
        dp, dps = m.degree, ms.degree
    else:
        raise InvalidInput(f"unknown sign convention {conv!r}")
    if m.id == ms.id:
        return ZERO if dp % 2 == 0 else parity_sign(dp)
    if m.orientation == PLUS:
        return parity_sign(dp)
    return parity_sign(dps + (dps + 1) * (dp + 1))
