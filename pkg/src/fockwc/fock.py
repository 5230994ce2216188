"""Truncated numerical realization of the Fock space.

Everything here works in the orthonormal basis e_n(z) = z^n / sqrt(n!) of
entire functions square-integrable against the plane Gaussian.  A function
is a coefficient vector, an operator is its N x N compression, and every
closed-form claim made by the exact classifiers is checked against these
compressions at a truncation N and again at 2N.

Numerical ground rules:

* No raw factorials.  Every sqrt(m!/n!) style ratio is produced by a
  multiplicative recurrence or an exact integer falling-factorial that is
  converted to float once.
* Operator columns are built by the recurrence
      (W e_{n+1})(z) = psi(z) * (W e_n)(z) / sqrt(n+1),
  i.e. one multiplication by psi(z) = a z + b per column, seeded with the
  expansion of the multiplier itself.  The textbook entrywise binomial sum
  suffers catastrophic cancellation (intermediate terms of size about
  e^{2|b| sqrt(N)} for unimodular a with the kernel-type multiplier); the
  recurrence form is run in extended precision and rounded once, which
  keeps absolute entry errors near double rounding even at N = 256.
* Residuals exclude the trailing ceil(N/8) coordinates: truncation pollutes
  the tail rows of M v, and the eigen relations hold exactly only in the
  full space.
* The dominant singular value uses a deterministic all-ones start so
  repeated runs are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import classify
from .errors import (DegenerateMap, DimensionMismatch, NoConvergence,
                     TruncationOverflow, ZeroVector)
from .symbols import Multiplier, OperatorSymbol, Scalar, scalar_powers

LOG_ENTRY_CAP = 700.0  # |entry| above e^700 signals a diverging compression

ScalarLike = Union[Scalar, complex, float, int]


def _as_complex(x: ScalarLike) -> complex:
    if isinstance(x, Scalar):
        return x.value
    return complex(x)


@dataclass(frozen=True)
class TruncationParams:
    """Basis size and tolerances for the numerical engine."""

    N: int = 64
    residual_tol: float = 1e-8
    sv_tol: float = 1e-10

    def __post_init__(self):
        if self.N < 8:
            raise ValueError("truncation size must be at least 8")
        if self.residual_tol <= 0 or self.sv_tol <= 0:
            raise ValueError("tolerances must be positive")

    def doubled(self) -> "TruncationParams":
        return TruncationParams(2 * self.N, self.residual_tol, self.sv_tol)


@dataclass(frozen=True)
class CoeffVector:
    """Coefficients against e_n; the function is sum v_n z^n / sqrt(n!).

    tail_mass records the norm of the coefficients beyond the truncation
    when the constructor knows it (eigenvector expansions report it).
    """

    values: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError("coefficient data must be one-dimensional")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def inner(self, other: "CoeffVector") -> complex:
        if len(self) != len(other):
            raise DimensionMismatch(
                f"vector lengths differ: {len(self)} vs {len(other)}")
        return complex(np.vdot(other.values, self.values))

    def evaluate(self, w: ScalarLike) -> complex:
        """f(w) via the multiplicative recurrence w^n/sqrt(n!)."""
        wv = _as_complex(w)
        acc = 0j
        term = 1.0 + 0j
        for n, v in enumerate(self.values):
            acc += v * term
            term *= wv / math.sqrt(n + 1)
        return acc


@dataclass(frozen=True)
class OperatorMatrix:
    """N x N compression; entries[m, n] = <W e_n, e_m>.

    divergent is set when the symbol is classified as not bounded: column
    norms of such compressions grow without bound in N and downstream
    numbers are reported for negative testing only.
    """

    N: int
    entries: np.ndarray
    divergent: bool = False

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.complex128)
        if arr.shape != (self.N, self.N):
            raise ValueError(f"entries must be {self.N} x {self.N}")
        object.__setattr__(self, "entries", arr)


def kernel_vector(w: ScalarLike, trunc: TruncationParams) -> CoeffVector:
    """Truncated reproducing kernel K_w: v_n = conj(w)^n / sqrt(n!)."""
    wc = _as_complex(w).conjugate()
    v = np.empty(trunc.N, dtype=np.complex128)
    v[0] = 1.0
    for n in range(trunc.N - 1):
        v[n + 1] = v[n] * wc / math.sqrt(n + 1)
    return CoeffVector(v)


def _multiplier_coeffs(u: Multiplier, count: int) -> np.ndarray:
    """Orthonormal-basis coefficients of u = d e^{cz} p(z), extended precision."""
    c = np.clongdouble(u.c.value)
    expo = np.zeros(count, dtype=np.clongdouble)
    expo[0] = 1.0
    for k in range(count - 1):
        expo[k + 1] = expo[k] * c / np.sqrt(np.longdouble(k + 1))
    if u.is_constant:
        out = expo
    else:
        # z^j shift in the orthonormal basis carries sqrt((m)(m-1)...(m-j+1))
        out = np.zeros(count, dtype=np.clongdouble)
        idx = np.arange(count)
        for j, coeff in enumerate(u.p):
            if coeff.is_zero or j >= count:
                continue
            fall = np.array(
                [math.perm(int(m), j) for m in idx[j:]], dtype=np.longdouble)
            out[j:] += np.clongdouble(coeff.value) * np.sqrt(fall) * expo[:count - j]
    return np.clongdouble(u.d.value) * out


def build_matrix(op: OperatorSymbol, trunc: TruncationParams) -> OperatorMatrix:
    """Compression of f -> u (f o psi); column n expands u * (e_n o psi)."""
    N = trunc.N
    a, b = op.a, op.b
    if b.is_zero and op.c.is_zero and op.u.is_constant:
        # Diagonal case d a^n.  Shares scalar_powers with the exact
        # eigenvalue list so both sides are bitwise identical.
        diag = op.lam.value * scalar_powers(a, N) if op.lam is not None \
            else op.d.value * scalar_powers(a, N)
        entries = np.diag(diag)
    else:
        cols = np.zeros((N, N), dtype=np.clongdouble)
        cols[:, 0] = _multiplier_coeffs(op.u, N)
        av = np.clongdouble(a.value)
        bv = np.clongdouble(b.value)
        climb = av * np.sqrt(np.arange(N, dtype=np.longdouble))
        for n in range(N - 1):
            prev = cols[:, n]
            nxt = bv * prev
            nxt[1:] = nxt[1:] + climb[1:] * prev[:-1]
            cols[:, n + 1] = nxt / np.sqrt(np.longdouble(n + 1))
        with np.errstate(over="ignore"):
            entries = cols.astype(np.complex128)
    if not np.all(np.isfinite(entries)):
        raise TruncationOverflow(
            f"non-finite matrix entries at N={N}; symbol diverges too fast")
    peak = float(np.max(np.abs(entries))) if N else 0.0
    if peak > 0 and math.log(peak) > LOG_ENTRY_CAP:
        raise TruncationOverflow(
            f"entry magnitude exp({math.log(peak):.1f}) exceeds cap at N={N}")
    verdict = classify.check_bounded(op)
    divergent = verdict.value in (classify.NO, classify.NO_WITH_MARGIN)
    return OperatorMatrix(N, entries, divergent)


def apply(M: OperatorMatrix, f: CoeffVector) -> CoeffVector:
    if len(f) != M.N:
        raise DimensionMismatch(f"matrix is {M.N} but vector has {len(f)}")
    return CoeffVector(M.entries @ f.values)


def expand_eigenvector(op: OperatorSymbol, m: int,
                       trunc: TruncationParams) -> CoeffVector:
    """Coefficients of (z - z0)^m e^{beta z}, beta = c/(1-a).

    That exponent makes u(z) e^{beta(az+b)} proportional to e^{beta z}, so
    the family really does satisfy the eigen relation for every admissible
    c; on the bounded unimodular family (c = -a conj(b)) it reduces to the
    kernel-type form a conj(b)/(a-1).  The monomial coefficient of z^k is
        sum_j C(m,j) (-z0)^{m-j} beta^{k-j} / (k-j)!
    and the orthonormal coefficient carries sqrt(k!), folded in through the
    falling-factorial form sqrt(k!/(k-j)!).  Computed out to an extended
    range so the reported tail_mass is the actual mass beyond N.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if op.a.is_zero or op.a.is_one:
        raise DegenerateMap("eigenvector family needs a outside {0, 1}")
    N = trunc.N
    n_ext = N + max(16, N // 4)
    av = op.a.value
    beta = op.c.value / (1.0 - av)
    z0 = op.z0.value
    base = np.empty(n_ext, dtype=np.complex128)
    base[0] = 1.0
    for k in range(n_ext - 1):
        base[k + 1] = base[k] * beta / math.sqrt(k + 1)
    out = np.zeros(n_ext, dtype=np.complex128)
    idx = np.arange(n_ext)
    for j in range(m + 1):
        w = math.comb(m, j) * (-z0) ** (m - j)
        fall = np.array([math.perm(int(k), j) for k in idx[j:]],
                        dtype=np.float64)
        out[j:] += w * np.sqrt(fall) * base[:n_ext - j]
    tail = float(np.linalg.norm(out[N:]))
    return CoeffVector(out[:N], tail_mass=tail)


def eigen_residual(M: OperatorMatrix, v: CoeffVector,
                   mu: ScalarLike) -> float:
    """|| (M v - mu v) restricted to the leading N - ceil(N/8) rows || / ||v||.

    The excluded buffer absorbs truncation leakage; the denominator is the
    full vector norm.
    """
    nrm = v.norm()
    if nrm == 0.0:
        raise ZeroVector("residual of the zero vector is undefined")
    if len(v) != M.N:
        raise DimensionMismatch(f"matrix is {M.N} but vector has {len(v)}")
    rows = M.N - math.ceil(M.N / 8)
    r = M.entries @ v.values - _as_complex(mu) * v.values
    return float(np.linalg.norm(r[:rows])) / nrm


def dominant_singular_value(M: OperatorMatrix, tol: float = 1e-10,
                            max_iter: int = 5000) -> float:
    """Largest singular value by power iteration on the Gram map.

    Deterministic all-ones start; stops when successive estimates agree to
    relative tol.  Raises NoConvergence (carrying the last estimate and
    gap) if the cap is hit.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    A = M.entries
    x = np.ones(M.N, dtype=np.complex128) / math.sqrt(M.N)
    sigma = 0.0
    for _ in range(max_iter):
        y = A @ x
        s = float(np.linalg.norm(y))
        if s == 0.0:
            return 0.0
        z = A.conj().T @ y
        zn = float(np.linalg.norm(z))
        if zn == 0.0:
            return s
        x = z / zn
        if abs(s - sigma) <= tol * max(s, 1e-300):
            return s
        sigma = s
    raise NoConvergence(
        f"power iteration did not settle in {max_iter} steps",
        estimate=sigma, gap=abs(s - sigma))


def adjoint_consistency(op: OperatorSymbol, candidate: OperatorSymbol,
                        trunc: TruncationParams) -> float:
    """Max-entry distance between matrix(candidate) and matrix(op)^H.

    This is the oracle that pins down the adjoint symbol's exponent
    assignment; the compressions satisfy the identity exactly, so any gap
    beyond rounding means the candidate symbol is wrong.
    """
    M = build_matrix(op, trunc)
    C = build_matrix(candidate, trunc)
    return float(np.max(np.abs(C.entries - M.entries.conj().T)))


def kernel_covariance_check(op: OperatorSymbol, w: ScalarLike,
                            trunc: TruncationParams) -> float:
    """Relative defect of W* K_w = conj(u(w)) K_{psi(w)} under truncation."""
    M = build_matrix(op, trunc)
    kw = kernel_vector(w, trunc)
    wv = _as_complex(w)
    target = kernel_vector(op.psi(wv), trunc)
    lhs = M.entries.conj().T @ kw.values
    rhs = op.u.evaluate(wv).conjugate() * target.values
    return float(np.linalg.norm(lhs - rhs)) / kw.norm()


# ---------------------------------------------------------------------------
# plain-text export


def vector_to_csv(v: CoeffVector) -> str:
    lines = ["index,re,im"]
    for n, x in enumerate(v.values):
        lines.append(f"{n},{float(x.real)!r},{float(x.imag)!r}")
    return "\n".join(lines) + "\n"


def matrix_to_csv(M: OperatorMatrix) -> str:
    """Row-major; each entry contributes a re,im pair of columns."""
    lines = []
    for row in M.entries:
        cells = []
        for x in row:
            cells.append(repr(float(x.real)))
            cells.append(repr(float(x.imag)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def vector_to_json(v: CoeffVector) -> dict:
    return {"n": len(v),
            "values": [[float(x.real), float(x.imag)] for x in v.values],
            "tail_mass": float(v.tail_mass)}


def matrix_to_json(M: OperatorMatrix) -> dict:
    return {"n": M.N,
            "divergent": M.divergent,
            "rows": [[[float(x.real), float(x.imag)] for x in row]
                     for row in M.entries]}
