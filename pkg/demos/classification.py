"""Classify a handful of weighted composition symbols and print the verdicts.

Each symbol is annotated exactly (moduli and angle fractions given as
rationals), so every verdict comes back as a plain Yes or No.
"""

from fractions import Fraction

from fockwc.classify import classify_full
from fockwc.symbols import (AffineMap, ExactAngle, Multiplier, OperatorSymbol,
                            Scalar)

GOLDEN = ExactAngle.irrational(1, "golden")
THIRD = ExactAngle.rational(Fraction(1, 3))


def rotation(angle, d):
    u = Multiplier(d, Scalar.from_value(0.0))
    return OperatorSymbol(u, AffineMap(Scalar.polar(1.0, angle),
                                       Scalar.from_value(0.0)))


symbols = {
    "translation e^{-z} f(z+1)": OperatorSymbol.from_values(a=1.0, b=1.0,
                                                            c=-1.0),
    "irrational rotation, weight 2i": rotation(GOLDEN,
                                               Scalar.polar(2.0,
                                                            ExactAngle.rational(Fraction(1, 4)))),
    "rotation by a third turn": rotation(THIRD, Scalar.from_value(1.0)),
    "irrational rotation, weight 1": rotation(GOLDEN, Scalar.from_value(1.0)),
    "contraction a=1/2": OperatorSymbol.from_values(a=0.5, b=0.0),
    "expansion a=2 (unbounded)": OperatorSymbol.from_values(a=2.0, b=0.0),
}

for name, op in symbols.items():
    rep = classify_full(op)
    print(f"== {name}")
    print(f"   bounded        {rep.bounded.value:4s} ({rep.bounded.reason})")
    print(f"   norm           [{rep.norm.lower:.6g}, {rep.norm.upper:.6g}]"
          f" exact={rep.norm.exact}")
    print(f"   cyclic         {rep.cyclic.value:4s} ({rep.cyclic.reason})")
    print(f"   convex-cyclic  {rep.convex_cyclic.value:4s}"
          f" ({rep.convex_cyclic.reason})")
    print(f"   supercyclic    {rep.supercyclic.value:4s}"
          f" ({rep.supercyclic.reason})")
    print()
