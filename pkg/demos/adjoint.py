"""The adjoint of a weighted composition is another weighted composition.

Conjugating the four parameters and swapping the two exponent roles gives
the adjoint symbol whenever the map is strictly contractive.  The demo
checks that against the conjugate transpose of the truncated matrix, and
verifies the reproducing-kernel covariance that drives the formula.
"""

import numpy as np

from fockwc import classify, fock
from fockwc.symbols import AffineMap, Multiplier, OperatorSymbol

op = OperatorSymbol.from_values(a=0.3 + 0.2j, b=0.5, c=0.1 - 0.4j,
                                d=1.25)
adj = classify.adjoint_symbol(op)
print("symbol:  a={0.a.value}, b={0.b.value}, c={0.c.value}, "
      "d={0.d.value}".format(op))
print("adjoint: a={0.a.value}, b={0.b.value}, c={0.c.value}, "
      "d={0.d.value}".format(adj))

trunc = fock.TruncationParams(N=48)
defect = fock.adjoint_consistency(op, adj, trunc)
print(f"max entry |matrix(adjoint) - matrix(op)^H| = {defect:.3e}")

# Swapping the wrong pair of exponents is visibly not the adjoint.
wrong = OperatorSymbol(Multiplier(op.d.conj(), op.c.conj()),
                       AffineMap(op.a.conj(), op.b.conj()))
print(f"wrong candidate defect = "
      f"{fock.adjoint_consistency(op, wrong, trunc):.3e}")

# Taking the adjoint twice restores the original symbol exactly.
again = classify.adjoint_symbol(adj)
print(f"adjoint of adjoint equals original: {again == op}")

# The underlying identity: the adjoint sends the kernel vector at w to
# conj(u(w)) times the kernel vector at psi(w).
for w in (0.35 + 0.2j, -0.4j, 1.1):
    rel = fock.kernel_covariance_check(op, w, fock.TruncationParams(N=96))
    print(f"kernel covariance defect at w={w}: {rel:.3e}")

# And the kernel vectors themselves reproduce point evaluation.
rng = np.random.default_rng(3)
coeffs = rng.normal(size=40) + 1j * rng.normal(size=40)
f = fock.CoeffVector(coeffs)
w = 0.3 - 0.25j
k = fock.kernel_vector(w, fock.TruncationParams(N=40))
print(f"<f, K_w> - f(w) = {f.inner(k) - f.evaluate(w):.3e}")
