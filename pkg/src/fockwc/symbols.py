"""Exact symbol data for weighted composition operators on the Fock space.

An operator symbol is a pair (u, psi) acting on entire functions by
f |-> u * (f o psi), with

    psi(z) = a z + b          (affine self-map of the plane)
    u(z)   = d e^{c z} p(z)   (multiplier: scalar, kernel-type exponential,
                               polynomial factor with constant term first)

Scalars carry an optional polar-exact annotation (modulus, angle) where the
angle is exact: either a reduced rational number of turns in [0, 1), or a
nonzero rational multiple of one of four catalog irrationals

    sqrt2, sqrt3, sqrt5, golden = (1 + sqrt 5)/2   (all in turns, angle =
    2 pi r kappa),

which is what makes root-of-unity and resonance questions decidable instead
of floating-point guesses.  Cartesian-only scalars are marked inexact; the
classifiers downgrade their verdicts accordingly.  `Scalar.from_value`
auto-promotes axis-aligned values (real or purely imaginary) to polar-exact
form, since their angles are exactly 0, 1/4, 1/2 or 3/4 turns.

Angle decision procedures:

* `power_equals_base(a)`: does a^k = a for some k >= 2?  Equivalent to a = 0
  or a a root of unity; decidable from the annotation (modulus exactly 1 and
  rational turns).
* `is_half_integer_combination(t, s)`: smallest m >= 0 with t + m s in
  {0, 1/2} modulo 1, or None.  Rational/rational reduces to a finite search
  over one period of m -> t + m s (period = denominator of s); a rational
  offset can only meet an irrational one at m = 0; same-kappa irrationals
  reduce to one exact rational solve.  The only catalog pair with a rational
  dependence is {sqrt5, golden} (golden = 1/2 + sqrt5/2); that combination is
  refused (`UnsupportedCombination`) rather than special-cased.

Everything here is immutable; derived quantities (fixed point, the
distinguished value lam = u(z0)) are cached on the symbol at construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DegenerateMap, InexactInput, UnsupportedCombination

TWO_PI = 2.0 * math.pi

#: Catalog of admissible irrational angle multipliers, in turns.
KAPPA_VALUES = {
    "sqrt2": math.sqrt(2.0),
    "sqrt3": math.sqrt(3.0),
    "sqrt5": math.sqrt(5.0),
    "golden": (1.0 + math.sqrt(5.0)) / 2.0,
}

RATIONAL = "rational"
IRRATIONAL = "irrational"

# Exact cartesian images of quarter-turn angles (cos, sin).
_QUARTER_TURNS = {
    Fraction(0): (1.0, 0.0),
    Fraction(1, 4): (0.0, 1.0),
    Fraction(1, 2): (-1.0, 0.0),
    Fraction(3, 4): (0.0, -1.0),
}


def _as_fraction(x: Union[int, str, Fraction]) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


@dataclass(frozen=True)
class ExactAngle:
    """An exactly represented angle, measured in turns (1 turn = 2 pi).

    kind == "rational": `frac` is the angle itself, reduced, in [0, 1).
    kind == "irrational": the angle is frac * KAPPA_VALUES[kappa] turns with
    frac a nonzero rational; it is reduced modulo 1 only when evaluated.
    """

    kind: str
    frac: Fraction
    kappa: Optional[str] = None

    def __post_init__(self):
        if self.kind == RATIONAL:
            if self.kappa is not None:
                raise ValueError("rational angle carries no kappa tag")
            if not (0 <= self.frac < 1):
                object.__setattr__(self, "frac", self.frac % 1)
        elif self.kind == IRRATIONAL:
            if self.kappa not in KAPPA_VALUES:
                raise ValueError(f"unknown kappa tag {self.kappa!r}")
            if self.frac == 0:
                raise ValueError("irrational angle needs a nonzero multiplier")
        else:
            raise ValueError(f"unknown angle kind {self.kind!r}")

    @classmethod
    def rational(cls, p: Union[int, str, Fraction], q: int = 1) -> "ExactAngle":
        return cls(RATIONAL, _as_fraction(p) / q if q != 1 else _as_fraction(p))

    @classmethod
    def irrational(cls, r: Union[int, str, Fraction], kappa: str) -> "ExactAngle":
        return cls(IRRATIONAL, _as_fraction(r), kappa)

    @property
    def is_rational(self) -> bool:
        return self.kind == RATIONAL

    def turns(self) -> float:
        """Float value of the angle in turns, reduced to [0, 1)."""
        if self.is_rational:
            return float(self.frac)
        return (float(self.frac) * KAPPA_VALUES[self.kappa]) % 1.0

    def radians(self) -> float:
        return TWO_PI * self.turns()

    def neg(self) -> "ExactAngle":
        """The angle of the complex conjugate (exactly representable)."""
        if self.is_rational:
            return ExactAngle(RATIONAL, (-self.frac) % 1)
        return ExactAngle(IRRATIONAL, -self.frac, self.kappa)

    def scale(self, n: int) -> "ExactAngle":
        """n times this angle; exact for every integer n."""
        if n == 0:
            return ExactAngle.rational(0)
        if self.is_rational:
            return ExactAngle(RATIONAL, (n * self.frac) % 1)
        return ExactAngle(IRRATIONAL, n * self.frac, self.kappa)

    def add(self, other: "ExactAngle") -> Optional["ExactAngle"]:
        """Exact sum where representable in the catalog, else None."""
        if self.is_rational and other.is_rational:
            return ExactAngle(RATIONAL, (self.frac + other.frac) % 1)
        if self.is_rational and self.frac == 0:
            return other
        if other.is_rational and other.frac == 0:
            return self
        if (not self.is_rational and not other.is_rational
                and self.kappa == other.kappa):
            r = self.frac + other.frac
            if r == 0:
                return ExactAngle.rational(0)
            return ExactAngle(IRRATIONAL, r, self.kappa)
        return None


@dataclass(frozen=True)
class Scalar:
    """A complex scalar, optionally with a polar-exact annotation.

    The cartesian value is always present.  When `modulus`/`angle` are set
    the pair is authoritative for exact decisions; construction checks the
    two representations agree to 1e-12 (relative to max(1, modulus)).
    """

    re: float
    im: float
    modulus: Optional[float] = None
    angle: Optional[ExactAngle] = None

    def __post_init__(self):
        if (self.modulus is None) != (self.angle is None):
            raise ValueError("polar annotation needs both modulus and angle")
        if self.modulus is not None:
            if self.modulus < 0:
                raise ValueError("modulus must be nonnegative")
            w = self.modulus * cmath.exp(1j * self.angle.radians())
            if abs(complex(self.re, self.im) - w) > 1e-12 * max(1.0, self.modulus):
                raise ValueError(
                    "cartesian and polar data disagree: "
                    f"({self.re}, {self.im}) vs modulus {self.modulus}, "
                    f"angle {self.angle}")

    @classmethod
    def from_value(cls, x: Union[complex, float, int]) -> "Scalar":
        """Canonical constructor; axis-aligned values come out polar-exact."""
        z = complex(x)
        re, im = z.real, z.imag
        if im == 0.0:
            if re == 0.0:
                return cls(0.0, 0.0, 0.0, ExactAngle.rational(0))
            if re > 0:
                return cls(re, 0.0, re, ExactAngle.rational(0))
            return cls(re, 0.0, -re, ExactAngle.rational(1, 2))
        if re == 0.0:
            if im > 0:
                return cls(0.0, im, im, ExactAngle.rational(1, 4))
            return cls(0.0, im, -im, ExactAngle.rational(3, 4))
        return cls(re, im)

    @classmethod
    def polar(cls, modulus: float, angle: ExactAngle) -> "Scalar":
        if modulus < 0:
            raise ValueError("modulus must be nonnegative")
        if angle.is_rational and angle.frac in _QUARTER_TURNS:
            cr, ci = _QUARTER_TURNS[angle.frac]
            return cls(modulus * cr, modulus * ci, modulus, angle)
        theta = angle.radians()
        return cls(modulus * math.cos(theta), modulus * math.sin(theta),
                   modulus, angle)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def is_exact(self) -> bool:
        return self.modulus is not None

    @property
    def abs_value(self) -> float:
        if self.modulus is not None:
            return self.modulus
        return math.hypot(self.re, self.im)

    @property
    def is_zero(self) -> bool:
        if self.modulus is not None:
            return self.modulus == 0.0
        return self.re == 0.0 and self.im == 0.0

    @property
    def is_one(self) -> bool:
        if self.modulus is not None:
            return (self.modulus == 1.0 and self.angle.is_rational
                    and self.angle.frac == 0)
        return self.re == 1.0 and self.im == 0.0

    def conj(self) -> "Scalar":
        if self.is_exact:
            return Scalar(self.re, -self.im, self.modulus, self.angle.neg())
        return Scalar(self.re, -self.im)

    def mul(self, other: "Scalar") -> "Scalar":
        """Product; stays polar-exact when both factors are and the angle
        sum is representable."""
        v = self.value * other.value
        if self.is_exact and other.is_exact:
            ang = self.angle.add(other.angle)
            if ang is not None:
                mod = self.modulus * other.modulus
                # Re-derive cartesian from the exact data when it is cleaner.
                s = Scalar.polar(mod, ang)
                if abs(s.value - v) <= 1e-12 * max(1.0, mod):
                    return s
        return Scalar.from_value(v)


@dataclass(frozen=True)
class AffineMap:
    """psi(z) = a z + b."""

    a: Scalar
    b: Scalar

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(Scalar.from_value(1.0), Scalar.from_value(0.0))

    def __call__(self, z: complex) -> complex:
        return self.a.value * z + self.b.value

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self o other, cartesian composition (used by oracles/tests)."""
        a = Scalar.from_value(self.a.value * other.a.value)
        b = Scalar.from_value(self.a.value * other.b.value + self.b.value)
        return AffineMap(a, b)


@dataclass(frozen=True)
class Multiplier:
    """u(z) = d e^{c z} p(z), p given by coefficients, constant term first.

    d must be nonzero and the leading coefficient of p nonzero (so the
    stored degree is the true degree).
    """

    d: Scalar
    c: Scalar
    p: tuple = (Scalar(1.0, 0.0, 1.0, ExactAngle.rational(0)),)

    def __post_init__(self):
        if self.d.is_zero:
            raise ValueError("multiplier scalar d must be nonzero")
        if len(self.p) == 0:
            raise ValueError("polynomial factor needs at least one coefficient")
        if len(self.p) > 1 and self.p[-1].is_zero:
            raise ValueError("leading coefficient of p must be nonzero")

    @classmethod
    def from_values(cls, d, c, p: Sequence = (1.0,)) -> "Multiplier":
        return cls(Scalar.from_value(d), Scalar.from_value(c),
                   tuple(Scalar.from_value(x) for x in p))

    @property
    def degree(self) -> int:
        return len(self.p) - 1

    @property
    def is_constant(self) -> bool:
        return self.degree == 0

    @property
    def is_nonvanishing(self) -> bool:
        # d != 0 is enforced; a zero-free entire function in this family
        # means no polynomial roots.
        return self.is_constant

    @property
    def p_values(self) -> np.ndarray:
        return np.array([x.value for x in self.p], dtype=np.complex128)

    def evaluate(self, z: complex) -> complex:
        acc = 0j
        for coeff in reversed(self.p):
            acc = acc * z + coeff.value
        return self.d.value * cmath.exp(self.c.value * z) * acc


@dataclass(frozen=True)
class OperatorSymbol:
    """The full symbol (u, psi) with cached derived data.

    Construction folds a constant polynomial factor into d (so u(0) = d
    whenever p is constant) and caches the fixed point z0 = b/(1 - a) and
    the distinguished value lam = u(z0) for a != 1.  When b = 0 the cache
    reuses the Scalar d itself, keeping lam polar-exact.
    """

    u: Multiplier
    psi: AffineMap
    z0: Optional[Scalar] = field(init=False, default=None, compare=False)
    lam: Optional[Scalar] = field(init=False, default=None, compare=False)

    def __post_init__(self):
        if self.u.is_constant and not self.u.p[0].is_one:
            folded = Multiplier(self.u.d.mul(self.u.p[0]), self.u.c,
                                (Scalar.from_value(1.0),))
            object.__setattr__(self, "u", folded)
        if not self.a.is_one:
            if self.b.is_zero:
                z0 = Scalar.from_value(0.0)
                lam = self.u.d if self.u.is_constant else \
                    Scalar.from_value(self.u.evaluate(0j))
            else:
                z0c = self.b.value / (1.0 - self.a.value)
                z0 = Scalar.from_value(z0c)
                lam = Scalar.from_value(self.u.evaluate(z0c))
            object.__setattr__(self, "z0", z0)
            object.__setattr__(self, "lam", lam)

    @classmethod
    def from_values(cls, a, b, c=0.0, d=1.0, p: Sequence = (1.0,)) -> "OperatorSymbol":
        return cls(Multiplier.from_values(d, c, p),
                   AffineMap(Scalar.from_value(a), Scalar.from_value(b)))

    @property
    def a(self) -> Scalar:
        return self.psi.a

    @property
    def b(self) -> Scalar:
        return self.psi.b

    @property
    def c(self) -> Scalar:
        return self.u.c

    @property
    def d(self) -> Scalar:
        return self.u.d

    @property
    def all_exact(self) -> bool:
        return (self.a.is_exact and self.b.is_exact and self.c.is_exact
                and self.d.is_exact and all(x.is_exact for x in self.u.p))


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvector family data for a bounded symbol with a not in {0, 1}:
    f_m(z) = (z - z0)^m e^{beta z}, eigenvalue a^m u(z0)."""

    beta: Scalar
    pairs: tuple  # ((m, Scalar eigenvalue), ...)
    distinct: bool


# ---------------------------------------------------------------------------
# operations


def fixed_point(psi: AffineMap) -> Scalar:
    """b / (1 - a); by convention 0 for the identity map.

    Raises DegenerateMap for a = 1, b != 0 (no finite fixed point).
    """
    if psi.a.is_one:
        if psi.b.is_zero:
            return Scalar.from_value(0.0)
        raise DegenerateMap("a = 1 with b != 0 has no finite fixed point")
    return Scalar.from_value(psi.b.value / (1.0 - psi.a.value))


def iterate_map(psi: AffineMap, n: int) -> AffineMap:
    """The n-fold composite psi^n = (a^n, b (1 + a + ... + a^{n-1})).

    Exactness of a's polar annotation survives (modulus^n, n * angle).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return AffineMap.identity()
    a, b = psi.a, psi.b
    if a.is_exact:
        a_n = Scalar.polar(a.modulus ** n, a.angle.scale(n))
    else:
        a_n = Scalar.from_value(a.value ** n)
    if a.is_one:
        b_n = Scalar.from_value(n * b.value)
    else:
        b_n = Scalar.from_value(b.value * (1.0 - a_n.value) / (1.0 - a.value))
    return AffineMap(a_n, b_n)


def geometric_sum(a: complex, n: int) -> complex:
    """1 + a + ... + a^{n-1} (n for a = 1)."""
    if a == 1.0:
        return complex(n)
    return (1.0 - a ** n) / (1.0 - a)


def iterated_multiplier(u: Multiplier, psi: AffineMap, n: int) -> Multiplier:
    """The orbit multiplier u_n = prod_{j=0}^{n-1} u(psi^j), in closed form.

    With psi^j(z) = a^j z + b g_j, g_j = 1 + ... + a^{j-1}:

        u_n(z) = [d^n e^{c s_n}] e^{(c g_n) z} prod_j p(psi^j(z)),
        s_n = b sum_{j<n} g_j = b (n - g_n) / (1 - a)   (a != 1),
              b n (n - 1) / 2                            (a = 1).

    n = 0 returns the empty product (the constant 1).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Multiplier.from_values(1.0, 0.0)
    a, b = psi.a.value, psi.b.value
    c, d = u.c.value, u.d.value
    g_n = geometric_sum(a, n)
    if a == 1.0:
        s_n = b * n * (n - 1) / 2.0
    else:
        s_n = b * (n - g_n) / (1.0 - a)
    d_n = d ** n * cmath.exp(c * s_n)
    c_n = c * g_n
    if u.is_constant:
        p_n = [1.0 + 0j]
    else:
        coeffs = [x.value for x in u.p]
        p_n = np.array([1.0 + 0j])
        for j in range(n):
            alpha = a ** j
            beta = b * geometric_sum(a, j)
            p_n = np.convolve(p_n, _compose_poly_affine(coeffs, alpha, beta))
    return Multiplier.from_values(d_n, c_n, list(np.atleast_1d(p_n)))


def _compose_poly_affine(coeffs, alpha: complex, beta: complex) -> np.ndarray:
    """Coefficients of p(alpha z + beta), Horner style."""
    out = np.array([coeffs[-1]], dtype=np.complex128)
    for k in range(len(coeffs) - 2, -1, -1):
        shifted = np.zeros(len(out) + 1, dtype=np.complex128)
        shifted[:-1] += beta * out
        shifted[1:] += alpha * out
        shifted[0] += coeffs[k]
        out = shifted
    return out


def power_equals_base(a: Scalar) -> bool:
    """Whether a^k = a for some integer k >= 2.

    True exactly when a = 0 or a is a root of unity (modulus exactly 1 with
    rational turns).  For |a| strictly inside or outside the unit circle the
    powers are strictly monotone in modulus, so the answer is False even
    without an annotation; within 1e-9 of the circle an unannotated scalar
    is refused (InexactInput).
    """
    if a.is_zero:
        return True
    if a.is_exact:
        if a.modulus == 1.0:
            return a.angle.is_rational
        return False
    m = a.abs_value
    if abs(m - 1.0) <= 1e-9:
        raise InexactInput(
            "modulus within 1e-9 of 1 without a polar-exact annotation; "
            "cannot decide root-of-unity membership")
    return False


_TARGETS = (Fraction(0), Fraction(1, 2))


def is_half_integer_combination(t: ExactAngle, s: ExactAngle) -> Optional[int]:
    """Smallest m >= 0 with t + m s in {0, 1/2} mod 1 turn, or None.

    This is the resonance question for eigenvalue arguments: lam a^m real
    for some m.  Decidable for every catalog combination except mixed
    {sqrt5, golden} tags, whose rational dependence (golden = 1/2 + sqrt5/2)
    is refused conservatively.
    """
    if t.is_rational and s.is_rational:
        # One full period of m -> t + m s mod 1.
        for m in range(s.frac.denominator):
            if (t.frac + m * s.frac) % 1 in _TARGETS:
                return m
        return None
    if t.is_rational:
        # m >= 1 adds a nonzero rational multiple of an irrational.
        return 0 if t.frac in _TARGETS else None
    if s.is_rational:
        # t + m s stays irrational for every m.
        return None
    if t.kappa == s.kappa:
        # (r_t + m r_s) kappa is rational only when the coefficient dies.
        m = -t.frac / s.frac
        if m.denominator == 1 and m >= 0:
            return int(m)
        return None
    if {t.kappa, s.kappa} == {"sqrt5", "golden"}:
        raise UnsupportedCombination(
            "sqrt5 and golden are rationally dependent; combination refused")
    return None


def scalar_powers(a: Scalar, count: int) -> np.ndarray:
    """[a^0, a^1, ..., a^{count-1}] by sequential multiplication.

    Single shared implementation so that independently computed eigenvalues
    and diagonal matrix entries agree bit for bit.
    """
    out = np.empty(count, dtype=np.complex128)
    if count == 0:
        return out
    out[0] = 1.0
    av = a.value
    for k in range(1, count):
        out[k] = out[k - 1] * av
    return out


# ---------------------------------------------------------------------------
# JSON forms


def angle_to_json(angle: ExactAngle) -> dict:
    if angle.is_rational:
        return {"kind": RATIONAL, "p": angle.frac.numerator,
                "q": angle.frac.denominator}
    return {"kind": IRRATIONAL, "r": str(angle.frac), "kappa": angle.kappa}


def angle_from_json(obj: dict) -> ExactAngle:
    kind = obj.get("kind")
    if kind == RATIONAL:
        return ExactAngle.rational(Fraction(int(obj["p"]), int(obj["q"])))
    if kind == IRRATIONAL:
        return ExactAngle.irrational(_as_fraction(obj["r"]), obj["kappa"])
    raise ValueError(f"unknown angle kind {kind!r}")


def scalar_to_json(s: Scalar) -> dict:
    out = {"re": s.re, "im": s.im}
    if s.is_exact:
        out["mod"] = s.modulus
        out["turns"] = angle_to_json(s.angle)
    return out


def scalar_from_json(obj) -> Scalar:
    """Accepts {"re","im"[,"mod","turns"]}, a bare number, or an [re, im] pair."""
    if isinstance(obj, (int, float)):
        return Scalar.from_value(float(obj))
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ValueError("scalar pair must be [re, im]")
        return Scalar.from_value(complex(float(obj[0]), float(obj[1])))
    if not isinstance(obj, dict):
        raise ValueError(f"cannot parse scalar from {obj!r}")
    if "mod" in obj or "turns" in obj:
        if not ("mod" in obj and "turns" in obj):
            raise ValueError("polar scalar needs both mod and turns")
        s = Scalar.polar(float(obj["mod"]), angle_from_json(obj["turns"]))
        if "re" in obj or "im" in obj:
            given = complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
            if abs(given - s.value) > 1e-12 * max(1.0, s.modulus):
                raise ValueError("cartesian fields disagree with polar fields")
        return s
    return Scalar.from_value(complex(float(obj.get("re", 0.0)),
                                     float(obj.get("im", 0.0))))


def symbol_to_json(op: OperatorSymbol) -> dict:
    return {
        "a": scalar_to_json(op.a),
        "b": scalar_to_json(op.b),
        "c": scalar_to_json(op.c),
        "d": scalar_to_json(op.d),
        "p": [scalar_to_json(x) for x in op.u.p],
    }


def symbol_from_json(obj: dict) -> OperatorSymbol:
    for key in ("a", "b"):
        if key not in obj:
            raise ValueError(f"symbol JSON missing field {key!r}")
    a = scalar_from_json(obj["a"])
    b = scalar_from_json(obj["b"])
    c = scalar_from_json(obj.get("c", 0.0))
    d = scalar_from_json(obj.get("d", 1.0))
    p_raw = obj.get("p", [1.0])
    if not isinstance(p_raw, (list, tuple)):
        p_raw = [p_raw]
    p = tuple(scalar_from_json(x) for x in p_raw)
    return OperatorSymbol(Multiplier(d, c, p), AffineMap(a, b))
