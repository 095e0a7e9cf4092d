"""Small categories used as test beds."""
from .ainfty import AInftyCategory, from_frobenius
from .core import PLUS, STAR, BasisMorphism


def sph(d):
    """Cohomology of S^d: k[x]/x^2 with deg x = d."""
    return from_frobenius(
        {"e": 0, "x": d},
        {("e", "e"): {"e": 1}, ("e", "x"): {"x": 1}, ("x", "e"): {"x": 1}},
        {("e", "x"): 1, ("x", "e"): 1},
        d, name=f"SPH({d})")


def s2xs2():
    """Cohomology ring of S^2 x S^2 with basis 1, y1, y2, y1y2 (d = 4)."""
    basis = {"e": 0, "y1": 2, "y2": 2, "z": 4}
    prod = {("e", "e"): {"e": 1}, ("y1", "y2"): {"z": 1}, ("y2", "y1"): {"z": 1}}
    for b in ("y1", "y2", "z"):
        prod[("e", b)] = {b: 1}
        prod[(b, "e")] = {b: 1}
    pairing = {("e", "z"): 1, ("z", "e"): 1, ("y1", "y2"): 1, ("y2", "y1"): 1}
    return from_frobenius(basis, prod, pairing, 4, name="S2xS2")


def zero4():
    """Two objects, all structure maps zero, d = 4."""
    ms = [
        BasisMorphism("p", "A", "B", 1, "ps", PLUS),
        BasisMorphism("ps", "B", "A", 3, "p", STAR),
        BasisMorphism("u", "A", "A", 2, "v", PLUS),
        BasisMorphism("v", "A", "A", 2, "u", STAR),
        BasisMorphism("r", "A", "A", 2, "r", PLUS),
    ]
    return AInftyCategory(["A", "B"], ms, 4, 2, {}, name="ZERO(4)")


def tri3():
    """Three objects in a triangle with one cyclic triple product, d = 3."""
    ms = [
        BasisMorphism("x", "A", "B", 1, "xs", PLUS),
        BasisMorphism("y", "B", "C", 2, "ys", PLUS),
        BasisMorphism("z", "C", "A", 0, "zs", PLUS),
        BasisMorphism("xs", "B", "A", 2, "x", STAR),
        BasisMorphism("ys", "C", "B", 1, "y", STAR),
        BasisMorphism("zs", "A", "C", 3, "z", STAR),
    ]
    eps = {("zs", ("y", "x")): 1, ("ys", ("x", "z")): -1, ("xs", ("z", "y")): 1}
    return AInftyCategory(["A", "B", "C"], ms, 3, 2, eps, name="TRI(3)")


BUNDLED = {
    "sph4": lambda: sph(4),
    "sph2": lambda: sph(2),
    "s2xs2": s2xs2,
    "zero4": zero4,
    "tri3": tri3,
}
