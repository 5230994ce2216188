"""Watch truncated compressions approach the exact operator norm from below.

The translation symbol u(z) = e^{-z}, psi(z) = z + 1 has a closed-form norm
e^{1/2}.  Dominant singular values of the N x N compression increase with N
and never cross it.
"""

import numpy as np

from fockwc import classify, fock
from fockwc.errors import NoConvergence
from fockwc.symbols import OperatorSymbol

op = OperatorSymbol.from_values(a=1.0, b=1.0, c=-1.0)
bounds = classify.operator_norm(op)
print(f"exact norm: {bounds.lower:.12f}")

for n in (16, 32, 64, 96, 192):
    m = fock.build_matrix(op, fock.TruncationParams(N=n))
    try:
        sigma = fock.dominant_singular_value(m)
        note = ""
    except NoConvergence as err:
        # the top two singular values tie at small N; the estimate is still
        # accurate to the tie width
        sigma = err.estimate
        note = "  (top pair nearly tied, estimate shown)"
    print(f"N={n:4d}  sigma={sigma:.12f}  gap={bounds.lower - sigma:.3e}"
          f"{note}")

# A contractive symbol only gets a bracket [S, S/|a|]; the compression lands
# inside it.
op2 = OperatorSymbol.from_values(a=0.5, b=0.3, c=0.1, d=1.25)
bounds2 = classify.operator_norm(op2)
m2 = fock.build_matrix(op2, fock.TruncationParams(N=96))
sigma2 = fock.dominant_singular_value(m2)
print(f"\ncontraction bracket: [{bounds2.lower:.6f}, {bounds2.upper:.6f}]")
print(f"sigma_96 = {sigma2:.6f}")

# Corner of the raw matrix, for a look at the entries themselves.
m3 = fock.build_matrix(op2, fock.TruncationParams(N=8))
with np.printoptions(precision=4, suppress=True):
    print("\ntop-left corner of the contraction's compression:")
    print(m3.entries[:4, :4])
