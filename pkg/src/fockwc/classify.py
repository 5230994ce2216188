"""Exact decision procedures for weighted composition operator dynamics.

Every verdict is derived from the symbol data alone; the numerical engine
is used by the test suite to cross-check these answers, never to produce
them.  The decision tree:

* bounded: a = 0 or |a| < 1 always; |a| = 1 only for a constant polynomial
  factor with exponent c = -a conj(b); |a| > 1 never.
* cyclic (norm topology = weak topology, and the same for the adjoint):
  the multiplier is zero-free (constant polynomial factor) and no power of
  a returns to a, i.e. a is neither 0 nor a root of unity.
* convex-cyclic (= the adjoint's convex-cyclicity = "every invariant
  closed convex set is a subspace"): cyclic, |a| = 1, the fixed-point
  value lam = u(z0) has |lam| > 1, and no power a^m rotates lam onto the
  real axis.  On the unit circle boundedness pins |lam| = |d| e^{|b|^2/2},
  so the modulus test never needs lam itself.
* supercyclic in norm, weak, or pointwise topology: never (the pointwise
  form already fails, and it is the weakest of the three).

Verdict flavors: Yes/No are reserved for symbols whose scalars all carry
polar-exact annotations; anything else is graded YesWithMargin or
NoWithMargin with a computed distance-to-flip, or Unknown when no honest
margin exists (modulus within 1e-9 of the circle without an annotation,
eigenvalue arguments outside the angle catalog, or a refused irrational
combination).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from .errors import (DegenerateMap, InexactInput, Unbounded,
                     UnsupportedCombination, UnsupportedMultiplier)
from .symbols import (AffineMap, EigenSystem, Multiplier, OperatorSymbol,
                      Scalar, is_half_integer_combination, power_equals_base,
                      scalar_powers, scalar_to_json, symbol_to_json)

YES = "Yes"
NO = "No"
YES_WITH_MARGIN = "YesWithMargin"
NO_WITH_MARGIN = "NoWithMargin"
UNKNOWN = "Unknown"

SCHEMA_VERSION = "fockwc-report-1"

# Inexact |a| within the grey band of the unit circle cannot be classified;
# within the inner band it is treated as exactly unimodular (with margin).
_CIRCLE_EXACT_BAND = 1e-12
_CIRCLE_GREY_BAND = 1e-9

_RESONANCE_SCAN = 10_000


@dataclass(frozen=True)
class Verdict:
    value: str
    reason: str
    margin: Optional[float] = None

    @property
    def is_yes(self) -> bool:
        return self.value in (YES, YES_WITH_MARGIN)

    @property
    def is_no(self) -> bool:
        return self.value in (NO, NO_WITH_MARGIN)

    def to_json(self) -> dict:
        return {"value": self.value, "reason": self.reason,
                "margin": self.margin}


@dataclass(frozen=True)
class NormBounds:
    lower: float
    upper: float
    exact: bool

    def __post_init__(self):
        if self.lower < 0 or self.upper < self.lower:
            raise ValueError("need 0 <= lower <= upper")
        if self.exact and self.lower != self.upper:
            raise ValueError("exact bounds must coincide")

    def to_json(self) -> dict:
        upper = None if math.isinf(self.upper) else self.upper
        return {"lower": self.lower, "upper": upper, "exact": self.exact}


@dataclass(frozen=True)
class ClassificationReport:
    bounded: Verdict
    norm: NormBounds
    cyclic: Verdict
    adjoint_cyclic: Verdict
    convex_cyclic: Verdict
    adjoint_convex_cyclic: Verdict
    invariant_convex_property: Verdict
    supercyclic: Verdict
    weakly_supercyclic: Verdict
    tpt_supercyclic: Verdict
    weakly_cyclic: Verdict
    eigen: Optional[EigenSystem]
    adjoint_symbol: Optional[OperatorSymbol]

    def to_json(self) -> dict:
        eigen = None
        if self.eigen is not None:
            eigen = {
                "beta": scalar_to_json(self.eigen.beta),
                "pairs": [[m, scalar_to_json(mu)] for m, mu in self.eigen.pairs],
                "distinct": self.eigen.distinct,
            }
        adj = None
        if self.adjoint_symbol is not None:
            adj = symbol_to_json(self.adjoint_symbol)
        return {
            "schema": SCHEMA_VERSION,
            "bounded": self.bounded.to_json(),
            "norm": self.norm.to_json(),
            "cyclic": self.cyclic.to_json(),
            "adjoint_cyclic": self.adjoint_cyclic.to_json(),
            "convex_cyclic": self.convex_cyclic.to_json(),
            "adjoint_convex_cyclic": self.adjoint_convex_cyclic.to_json(),
            "invariant_convex_property": self.invariant_convex_property.to_json(),
            "supercyclic": self.supercyclic.to_json(),
            "weakly_supercyclic": self.weakly_supercyclic.to_json(),
            "tpt_supercyclic": self.tpt_supercyclic.to_json(),
            "weakly_cyclic": self.weakly_cyclic.to_json(),
            "eigen": eigen,
            "adjoint_symbol": adj,
        }

    def has_unknown(self) -> bool:
        fields = (self.bounded, self.cyclic, self.adjoint_cyclic,
                  self.convex_cyclic, self.adjoint_convex_cyclic,
                  self.invariant_convex_property, self.supercyclic,
                  self.weakly_supercyclic, self.tpt_supercyclic,
                  self.weakly_cyclic)
        return any(v.value == UNKNOWN for v in fields)


def _flavored(truth: bool, exact: bool, reason: str,
              margin: Optional[float] = None) -> Verdict:
    if exact:
        return Verdict(YES if truth else NO, reason, None)
    return Verdict(YES_WITH_MARGIN if truth else NO_WITH_MARGIN, reason, margin)


# zero / inside / circle / outside / grey
def _modulus_class(a: Scalar) -> str:
    if a.is_exact:
        if a.modulus == 0.0:
            return "zero"
        if a.modulus == 1.0:
            return "circle"
        return "inside" if a.modulus < 1.0 else "outside"
    m = a.abs_value
    if m == 0.0:
        return "zero"
    gap = abs(m - 1.0)
    if gap <= _CIRCLE_EXACT_BAND:
        return "circle"
    if gap <= _CIRCLE_GREY_BAND:
        return "grey"
    return "inside" if m < 1.0 else "outside"


def _kernel_exponent_defect(op: OperatorSymbol) -> float:
    """|c + a conj(b)|; zero exactly when the unimodular family is bounded."""
    return abs(op.c.value + op.a.value * op.b.value.conjugate())


def check_bounded(op: OperatorSymbol) -> Verdict:
    exact = op.all_exact
    cls = _modulus_class(op.a)
    if cls == "zero":
        return _flavored(True, exact,
                         "constant target map: rank-one with square-integrable "
                         "multiplier", None)
    if cls == "inside":
        return _flavored(True, exact,
                         "strict contraction: growth exponent is negative "
                         "definite for every multiplier in the family",
                         1.0 - op.a.abs_value)
    if cls == "outside":
        return _flavored(False, exact,
                         "expansion factor |a| > 1 forces unbounded growth",
                         op.a.abs_value - 1.0)
    if cls == "grey":
        return Verdict(UNKNOWN,
                       "modulus of a within 1e-9 of the unit circle without a "
                       "polar-exact annotation", abs(op.a.abs_value - 1.0))
    if not op.u.is_constant:
        return _flavored(False, exact,
                         "unimodular a admits no polynomial growth in the "
                         "multiplier", None)
    defect = _kernel_exponent_defect(op)
    tol = 1e-12 * max(1.0, op.b.abs_value)
    if defect <= tol:
        return _flavored(True, exact,
                         "unimodular a with kernel-type exponent c = -a conj(b)",
                         defect if not exact else None)
    return _flavored(False, exact,
                     "unimodular a with exponent offset from -a conj(b)",
                     defect)


def _multiplier_fock_norm(u: Multiplier) -> float:
    """||u|| in the space, by direct series summation of the coefficients."""
    cmod = u.c.abs_value
    count = max(48, int(6 * (cmod * cmod + 1)) + u.degree + 16)
    expo = np.empty(count, dtype=np.complex128)
    expo[0] = 1.0
    cv = u.c.value
    for k in range(count - 1):
        expo[k + 1] = expo[k] * cv / math.sqrt(k + 1)
    out = np.zeros(count, dtype=np.complex128)
    idx = np.arange(count)
    for j, coeff in enumerate(u.p):
        if coeff.is_zero:
            continue
        fall = np.array([math.perm(int(k), j) for k in idx[j:]],
                        dtype=np.float64)
        out[j:] += coeff.value * np.sqrt(fall) * expo[:count - j]
    return abs(u.d.value) * float(np.linalg.norm(out))


def _log_growth_weight(op: OperatorSymbol, z) -> np.ndarray:
    """log of |u(z)| e^{(|psi(z)|^2 - |z|^2)/2}, the boundedness integrand."""
    z = np.asarray(z, dtype=np.complex128)
    pv = np.polyval(op.u.p_values[::-1], z)
    w = op.a.value * z + op.b.value
    with np.errstate(divide="ignore"):
        return (math.log(abs(op.d.value)) + (op.c.value * z).real
                + np.log(np.abs(pv))
                + (np.abs(w) ** 2 - np.abs(z) ** 2) / 2.0)


def _numeric_sup_weight(op: OperatorSymbol) -> float:
    """Grid search plus local refinement of the growth weight, with an
    escape check that widens the window while the maximizer sits on the rim."""
    amod = op.a.abs_value
    shift = (op.c.value.conjugate() + op.a.value.conjugate() * op.b.value)
    center = shift / (1.0 - amod * amod)
    radius = max(2.0, 1.5 * abs(center) + 1.0)
    best_val, best_z = -math.inf, 0j
    for _ in range(4):
        xs = np.linspace(center.real - radius, center.real + radius, 161)
        ys = np.linspace(center.imag - radius, center.imag + radius, 161)
        zg = xs[None, :] + 1j * ys[:, None]
        vals = _log_growth_weight(op, zg)
        flat = int(np.argmax(vals))
        best_val = float(vals.ravel()[flat])
        best_z = complex(zg.ravel()[flat])
        if abs(best_z - center) < 0.94 * radius:
            break
        radius *= 2.0
    res = minimize(
        lambda t: -float(_log_growth_weight(op, complex(t[0], t[1]))),
        [best_z.real, best_z.imag], method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
    return max(best_val, -float(res.fun))


def operator_norm(op: OperatorSymbol) -> NormBounds:
    """Closed-form norm bracket; exact only on the unit circle."""
    verdict = check_bounded(op)
    if not verdict.is_yes:
        raise Unbounded(f"norm undefined: {verdict.reason}")
    cls = _modulus_class(op.a)
    bmod = op.b.abs_value
    if cls == "circle":
        value = abs(op.d.value) * math.exp(bmod * bmod / 2.0)
        return NormBounds(value, value, True)
    if cls == "zero":
        value = _multiplier_fock_norm(op.u) * math.exp(bmod * bmod / 2.0)
        pad = 1e-9 * value
        return NormBounds(value - pad, value + pad, False)
    amod = op.a.abs_value
    if op.u.is_constant:
        shift = abs(op.c.value + op.a.value * op.b.value.conjugate())
        s = abs(op.d.value) * math.exp(
            shift * shift / (2.0 * (1.0 - amod * amod)) + bmod * bmod / 2.0)
        return NormBounds(s, s / amod, False)
    s = math.exp(_numeric_sup_weight(op))
    return NormBounds(s, s / amod * (1.0 + 1e-6), False)


def check_cyclic(op: OperatorSymbol) -> Verdict:
    bounded = check_bounded(op)
    if bounded.value == UNKNOWN:
        return Verdict(UNKNOWN, f"boundedness undecided: {bounded.reason}",
                       bounded.margin)
    if not bounded.is_yes:
        return _flavored(False, bounded.value == NO,
                         f"not bounded: {bounded.reason}", bounded.margin)
    exact = op.all_exact
    if not op.u.is_constant:
        return _flavored(False, exact,
                         "multiplier vanishes at a polynomial zero, so every "
                         "orbit element shares that zero", None)
    try:
        returns = power_equals_base(op.a)
    except InexactInput as exc:
        return Verdict(UNKNOWN, str(exc), abs(op.a.abs_value - 1.0))
    amod = op.a.abs_value
    margin = None if exact else min(amod, abs(1.0 - amod))
    if returns:
        return _flavored(False, exact,
                         "a power of the map factor returns to itself "
                         "(a zero or a root of unity), collapsing the span",
                         margin)
    return _flavored(True, exact,
                     "zero-free multiplier and a^k never returns to a",
                     margin)


def _resonance_scan_margin(t_turns: float, s_turns: float) -> float:
    """min over m <= 10000 of |sin(2 pi (t + m s))|; non-exhaustive."""
    m = np.arange(_RESONANCE_SCAN + 1, dtype=np.float64)
    vals = np.abs(np.sin(2.0 * math.pi * (t_turns + m * s_turns)))
    return float(np.min(vals))


def check_convex_cyclic(op: OperatorSymbol) -> Verdict:
    bounded = check_bounded(op)
    if bounded.value == UNKNOWN:
        return Verdict(UNKNOWN, f"boundedness undecided: {bounded.reason}",
                       bounded.margin)
    if not bounded.is_yes:
        return _flavored(False, bounded.value == NO,
                         f"not bounded: {bounded.reason}", bounded.margin)
    cyclic = check_cyclic(op)
    if cyclic.value == UNKNOWN:
        return cyclic
    if not cyclic.is_yes:
        return _flavored(False, cyclic.value == NO,
                         f"not cyclic: {cyclic.reason}", cyclic.margin)
    exact = op.all_exact
    if _modulus_class(op.a) != "circle":
        return _flavored(False, exact,
                         "hull growth needs a unimodular map factor; strict "
                         "contractions compress every orbit hull",
                         abs(1.0 - op.a.abs_value))
    # On the circle, boundedness pins |lam| = |d| e^{|b|^2/2} exactly.
    bmod = op.b.abs_value
    if op.b.is_zero and op.d.is_exact:
        # |lam| = |d| held exactly; the comparison with 1 is decidable.
        if op.d.modulus <= 1.0:
            return _flavored(False, exact,
                             "fixed-point value has modulus at most 1, so "
                             "the orbit hull stays in a ball", None)
        log_lam = math.log(op.d.modulus)
    else:
        log_lam = math.log(abs(op.d.value)) + bmod * bmod / 2.0
        if abs(log_lam) <= 1e-12:
            return Verdict(UNKNOWN,
                           "fixed-point value within floating tolerance of "
                           "the unit circle; strict inequality undecidable",
                           abs(log_lam))
        if log_lam < 0:
            return _flavored(False, exact,
                             "fixed-point value has modulus at most 1, so "
                             "the orbit hull stays in a ball", abs(log_lam))
    if op.b.is_zero and op.d.is_exact and op.a.is_exact:
        try:
            hit = is_half_integer_combination(op.d.angle, op.a.angle)
        except UnsupportedCombination as exc:
            return Verdict(UNKNOWN, str(exc), None)
        if hit is None:
            return _flavored(True, exact,
                             "unimodular a, fixed-point value outside the "
                             "closed unit disk, and no power rotates it onto "
                             "the real axis", None)
        return _flavored(False, exact,
                         f"power m = {hit} rotates the fixed-point value onto "
                         "the real axis, giving a real eigenvalue", None)
    # lam's argument is not exactly representable; scan for a witness.
    lam = op.lam.value
    t_turns = math.atan2(lam.imag, lam.real) / (2.0 * math.pi)
    if op.a.is_exact:
        s_turns = op.a.angle.turns()
    else:
        av = op.a.value
        s_turns = math.atan2(av.imag, av.real) / (2.0 * math.pi)
    margin = _resonance_scan_margin(t_turns, s_turns)
    if exact:
        return Verdict(UNKNOWN,
                       "argument of the fixed-point value is outside the "
                       "exact-angle catalog; scan of powers m <= "
                       f"{_RESONANCE_SCAN} found minimum sine margin "
                       f"{margin:.3e} (non-exhaustive)", margin)
    if margin == 0.0:
        return Verdict(NO_WITH_MARGIN,
                       "a scanned power rotates the fixed-point value onto "
                       "the real axis (floating-point hit)", margin)
    return Verdict(YES_WITH_MARGIN,
                   "no real-axis hit among powers m <= "
                   f"{_RESONANCE_SCAN} (non-exhaustive scan)", margin)


def check_supercyclic_family(op: OperatorSymbol) -> Tuple[Verdict, Verdict, Verdict]:
    """(norm, weak, pointwise) supercyclicity; all impossible when bounded."""
    bounded = check_bounded(op)
    if bounded.value == UNKNOWN:
        u = Verdict(UNKNOWN, f"boundedness undecided: {bounded.reason}",
                    bounded.margin)
        return u, u, u
    if not bounded.is_yes:
        v = _flavored(False, bounded.value == NO,
                      f"not bounded: {bounded.reason}", bounded.margin)
        return v, v, v
    exact = op.all_exact
    tpt = _flavored(False, exact,
                    "two-point orbit ratios of zero-free functions are "
                    "bounded on an invariant disk, contradicting pointwise "
                    "projective density", None)
    weak = _flavored(False, exact,
                     "weak supercyclicity implies the pointwise form, which "
                     "fails", None)
    sup = _flavored(False, exact,
                    "norm supercyclicity implies the weak and pointwise "
                    "forms, which fail", None)
    return sup, weak, tpt


def eigen_system(op: OperatorSymbol, m_max: int) -> EigenSystem:
    """Eigenvector exponent beta = c/(1-a) and eigenvalues a^m lam, m <= m_max."""
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    if op.a.is_zero or op.a.is_one:
        raise DegenerateMap(
            "eigenvector family needs a outside {0, 1}")
    av = op.a.value
    # the exponent that commutes with the multiplier: e^{c z} e^{beta(az+b)}
    # is proportional to e^{beta z} exactly when beta = c/(1-a); for the
    # bounded unimodular family this equals the kernel form a conj(b)/(a-1)
    beta = Scalar.from_value(op.c.value / (1.0 - av))
    vals = op.lam.value * scalar_powers(op.a, m_max + 1)
    pairs = tuple((m, Scalar.from_value(complex(vals[m])))
                  for m in range(m_max + 1))
    try:
        distinct = not power_equals_base(op.a)
    except InexactInput:
        distinct = False
    return EigenSystem(beta=beta, pairs=pairs, distinct=distinct)


def adjoint_symbol(op: OperatorSymbol) -> Optional[OperatorSymbol]:
    """Symbol of the adjoint, when that adjoint is itself in the family.

    Matching coefficients in W K_w = d e^{b conj(w)} K_{conj(c) + conj(a) w}
    gives map z -> conj(a) z + conj(c) with multiplier conj(d) e^{conj(b) z}.
    Exists for 0 < |a| < 1 with any kernel-type multiplier and for |a| = 1
    exactly in the bounded family; rank-one operators (a = 0) are served by
    the kernel covariance rule instead of a symbol.
    """
    if not op.u.is_constant:
        raise UnsupportedMultiplier(
            "adjoint symbol defined only for kernel-type multipliers "
            "(constant polynomial factor)")
    cls = _modulus_class(op.a)
    if cls in ("zero", "outside", "grey"):
        return None
    if cls == "circle":
        if _kernel_exponent_defect(op) > 1e-12 * max(1.0, op.b.abs_value):
            return None
    u2 = Multiplier(op.d.conj(), op.b.conj(), (Scalar.from_value(1.0),))
    psi2 = AffineMap(op.a.conj(), op.c.conj())
    return OperatorSymbol(u2, psi2)


def classify_full(op: OperatorSymbol) -> ClassificationReport:
    bounded = check_bounded(op)
    if bounded.is_yes:
        norm = operator_norm(op)
    else:
        norm = NormBounds(0.0, math.inf, False)
    cyclic = check_cyclic(op)
    convex = check_convex_cyclic(op)
    sup, weak, tpt = check_supercyclic_family(op)
    eigen = None
    if bounded.is_yes and not (op.a.is_zero or op.a.is_one):
        eigen = eigen_system(op, 8)
    try:
        adj = adjoint_symbol(op)
    except UnsupportedMultiplier:
        adj = None
    report = ClassificationReport(
        bounded=bounded, norm=norm,
        cyclic=cyclic, adjoint_cyclic=cyclic,
        convex_cyclic=convex, adjoint_convex_cyclic=convex,
        invariant_convex_property=convex,
        supercyclic=sup, weakly_supercyclic=weak, tpt_supercyclic=tpt,
        weakly_cyclic=cyclic,
        eigen=eigen, adjoint_symbol=adj)
    # consistency of the implication diagram, asserted before release
    if report.convex_cyclic.is_yes:
        assert report.cyclic.is_yes
    assert not report.supercyclic.is_yes
    assert not report.weakly_supercyclic.is_yes
    assert not report.tpt_supercyclic.is_yes
    assert report.weakly_cyclic is report.cyclic
    assert report.adjoint_cyclic is report.cyclic
    assert report.adjoint_convex_cyclic is report.convex_cyclic
    assert report.invariant_convex_property is report.convex_cyclic
    if report.convex_cyclic.value == YES:
        assert report.norm.exact and report.norm.lower > 1.0
    return report
