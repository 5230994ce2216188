"""Follow operator orbits and measure how their convex hull approaches a target.

A cyclic symbol with |lam| > 1 and an irrational unimodular rotation angle is
convex-cyclic: convex combinations of its orbit get arbitrarily close to any
vector.  A rational rotation angle stalls instead.
"""

import math

import numpy as np

from fockwc import dynamics, fock
from fockwc.symbols import (AffineMap, ExactAngle, Multiplier, OperatorSymbol,
                            Scalar)

N = 32
coeffs = np.zeros(N, dtype=np.complex128)
coeffs[:8] = 1.0 / math.sqrt(8.0)
f = fock.CoeffVector(coeffs)


def rotation(angle, d):
    return OperatorSymbol(
        Multiplier(Scalar.from_value(d), Scalar.from_value(0.0)),
        AffineMap(Scalar.polar(1.0, angle), Scalar.from_value(0.0)))


# The two iteration routes agree; closed form composes the symbol instead of
# multiplying matrices.
op = OperatorSymbol.from_values(a=0.5, b=0.3, c=0.1, d=1.25)
rec_m = dynamics.orbit(op, f, 6, dynamics.MATRIX_ITERATION)
rec_c = dynamics.orbit(op, f, 6, dynamics.CLOSED_FORM)
gap = max(float(np.max(np.abs(u.values - v.values)))
          for u, v in zip(rec_m.vectors, rec_c.vectors))
print(f"route agreement over 6 steps: {gap:.3e}")

rng = np.random.default_rng(11)
raw = np.zeros(N, dtype=np.complex128)
raw[:4] = rng.normal(size=4) + 1j * rng.normal(size=4)
target = fock.CoeffVector(raw / np.linalg.norm(raw))

golden = rotation(ExactAngle.irrational(1, "golden"), 2.0j)
rec = dynamics.orbit(golden, f, 400, dynamics.MATRIX_ITERATION)
curve = dynamics.hull_distance(rec, target, iterations=120)
print("\nirrational rotation, weight 2i (convex-cyclic):")
for n in (1, 5, 20, 100, 400):
    print(f"   hull distance after {n:3d} orbit points: "
          f"{curve.errors[n - 1]:.6e}")

third = rotation(ExactAngle.rational(1, 3), 1.0)
rec3 = dynamics.orbit(third, f, 400, dynamics.MATRIX_ITERATION)
curve3 = dynamics.hull_distance(rec3, target, iterations=120)
print("\nrational rotation, weight 1 (orbit is finite, distance plateaus):")
for n in (1, 5, 20, 100, 400):
    print(f"   hull distance after {n:3d} orbit points: "
          f"{curve3.errors[n - 1]:.6e}")
