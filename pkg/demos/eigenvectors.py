"""Expand closed-form eigenvectors and check their residuals shrink with N.

For psi(z) = az + b with a != 0, 1 the operator has eigenvalues lam * a^m
with eigenvectors (z - z0)^m e^{beta z}.  Truncating both the operator and
the eigenvector should leave a residual that dies as the truncation grows.
"""

from fractions import Fraction

from fockwc import classify, fock
from fockwc.symbols import (AffineMap, ExactAngle, Multiplier, OperatorSymbol,
                            Scalar)

# unimodular map with the matching kernel-type exponent, so it is bounded
a = Scalar.polar(1.0, ExactAngle.irrational(Fraction(92, 2753), "sqrt2"))
b = Scalar.from_value(1.0)
c = Scalar.from_value(-(a.value * b.value.conjugate()))
circle = OperatorSymbol(Multiplier(Scalar.from_value(1.0), c),
                        AffineMap(a, b))

contraction = OperatorSymbol.from_values(a=0.5, b=0.3, c=0.1, d=1.25)

for name, op in (("circle map", circle), ("contraction", contraction)):
    system = classify.eigen_system(op, 4)
    print(f"== {name}: beta = {system.beta.value:.6f}, "
          f"distinct eigenvalues: {system.distinct}")
    for n in (32, 64, 128):
        trunc = fock.TruncationParams(N=n)
        m = fock.build_matrix(op, trunc)
        worst = 0.0
        for order, mu in system.pairs:
            v = fock.expand_eigenvector(op, order, trunc)
            worst = max(worst, fock.eigen_residual(m, v, mu.value))
        print(f"   N={n:4d}  worst residual over m<=4: {worst:.3e}")
    print()

# Diagonal symbols keep monomials as eigenvectors, so residuals vanish
# identically at any truncation.
rot = OperatorSymbol(
    Multiplier(Scalar.from_value(2.0j), Scalar.from_value(0.0)),
    AffineMap(Scalar.polar(1.0, ExactAngle.irrational(1, "golden")),
              Scalar.from_value(0.0)))
system = classify.eigen_system(rot, 4)
m = fock.build_matrix(rot, fock.TruncationParams(N=64))
res = [fock.eigen_residual(m, fock.expand_eigenvector(rot, order,
                                                      fock.TruncationParams(N=64)),
                           mu.value)
       for order, mu in system.pairs]
print(f"rotation residuals (exactly zero): {res}")
