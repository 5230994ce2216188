"""Acceptance gate: ten end-to-end checks, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the table.  Every
tolerance is written out literally next to its assertion.
"""

import cmath
import math
import time
from fractions import Fraction

import numpy as np

from fockwc import classify, dynamics, fock
from fockwc.symbols import (AffineMap, ExactAngle, Multiplier, OperatorSymbol,
                            Scalar)

GOLDEN = ExactAngle.irrational(1, "golden")
THIRD = ExactAngle.rational(Fraction(1, 3))


def _sym(a, b, c=0.0, d=1.0, p=(1.0,)):
    return OperatorSymbol.from_values(a=a, b=b, c=c, d=d, p=p)


def _rotation(angle, d=1.0):
    return OperatorSymbol(
        Multiplier(Scalar.from_value(d), Scalar.from_value(0.0)),
        AffineMap(Scalar.polar(1.0, angle), Scalar.from_value(0.0)))


def _circle_kernel(frac, kappa, b, d=1.0):
    # unimodular map with the matching kernel-type exponent c = -a conj(b)
    a = Scalar.polar(1.0, ExactAngle.irrational(Fraction(frac), kappa))
    c = Scalar.from_value(-(a.value * complex(b).conjugate()))
    return OperatorSymbol(Multiplier(Scalar.from_value(d), c),
                          AffineMap(a, Scalar.from_value(b)))


def _disk(rng, rmax):
    r = rmax * math.sqrt(rng.uniform())
    th = rng.uniform(0.0, 2.0 * math.pi)
    return r * cmath.exp(1j * th)


def _report(k, ok, detail):
    print(f"[criterion {k:2d}] {'PASS' if ok else 'FAIL'}: {detail}")


# ---------------------------------------------------------------------------


def test_criterion_01_eigenvector_residuals_shrink_under_doubling():
    t0 = time.perf_counter()
    members = [
        _rotation(GOLDEN, d=2.0j),
        _rotation(ExactAngle.irrational(Fraction(1, 4), "sqrt2")),
        _circle_kernel("92/2753", "sqrt2", 1.0),
        _circle_kernel("11/277", "sqrt3", 1.0 + 1.0j),
        _circle_kernel("59/2759", "sqrt5", 1.0, d=1.0j),
    ]
    worst64 = 0.0
    worst_ratio = 0.0
    ok = True
    for op in members:
        assert classify.check_bounded(op).is_yes
        system = classify.eigen_system(op, 5)
        t64, t128 = fock.TruncationParams(N=64), fock.TruncationParams(N=128)
        m64, m128 = fock.build_matrix(op, t64), fock.build_matrix(op, t128)
        for m, mu in system.pairs:
            r64 = fock.eigen_residual(m64, fock.expand_eigenvector(op, m, t64),
                                      mu.value)
            r128 = fock.eigen_residual(m128,
                                       fock.expand_eigenvector(op, m, t128),
                                       mu.value)
            ok = ok and r64 <= 1e-8 and r128 <= r64 / 10.0
            worst64 = max(worst64, r64)
            if r64 > 0:
                worst_ratio = max(worst_ratio, r128 / r64)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 10.0
    _report(1, ok, f"5 unimodular symbols, m <= 5: worst residual at N=64 is "
                   f"{worst64:.2e} (tol 1e-8), worst doubling ratio "
                   f"{worst_ratio:.2e} (must be <= 0.1), {elapsed:.2f}s")
    assert ok


def test_criterion_02_norm_estimates_approach_exact_value_from_below():
    t0 = time.perf_counter()
    cases = [
        _sym(a=1.0, b=1.0, c=-1.0),
        _circle_kernel("92/2753", "sqrt2", 1.0),
        _circle_kernel("11/277", "sqrt3", 1.0 + 1.0j),
    ]
    ok = True
    details = []
    for op in cases:
        nb = classify.operator_norm(op)
        assert nb.exact
        target = nb.lower
        s96 = fock.dominant_singular_value(
            fock.build_matrix(op, fock.TruncationParams(N=96)))
        s192 = fock.dominant_singular_value(
            fock.build_matrix(op, fock.TruncationParams(N=192)))
        ok = ok and abs(s96 - target) <= 0.01 * target
        ok = ok and s96 <= s192 + 1e-9 * target
        ok = ok and s192 <= target * (1.0 + 1e-9)
        details.append(f"{s96:.6f}->{s192:.6f} vs {target:.6f}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 20.0
    _report(2, ok, "sigma_N within 1% and increasing toward the exact norm "
                   f"({'; '.join(details)}), {elapsed:.2f}s")
    assert ok


def test_criterion_03_norm_bracket_contains_compression_estimate():
    rng = np.random.default_rng(20260816)
    ok = True
    worst_rel = 0.0
    for _ in range(10):
        amod = rng.uniform(0.25, 0.7)
        aang = rng.uniform(0.0, 2.0 * math.pi)
        a = amod * cmath.exp(1j * aang)
        b = _disk(rng, 0.8)
        c = _disk(rng, 0.8)
        d = _disk(rng, 1.5) + 0.5
        op = _sym(a=a, b=b, c=c, d=d)
        nb = classify.operator_norm(op)
        sig = fock.dominant_singular_value(
            fock.build_matrix(op, fock.TruncationParams(N=96)))
        ok = ok and nb.lower * (1 - 1e-6) <= sig <= nb.upper * (1 + 1e-6)
        worst_rel = max(worst_rel, abs(sig - nb.lower) / nb.lower)
    _report(3, ok, "10 random contractive symbols: sigma_96 inside the "
                   "closed-form bracket [S, S/|a|] (slack 1e-6); worst "
                   f"relative gap above S is {worst_rel:.2e}")
    assert ok


def test_criterion_04_adjoint_symbol_matches_conjugate_transpose():
    rng = np.random.default_rng(20260121)
    trunc = fock.TruncationParams(N=40)
    ok = True
    worst_good = 0.0
    best_wrong = math.inf
    for _ in range(10):
        amod = rng.uniform(0.05, 0.9)
        a = amod * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        b = _disk(rng, 0.5)
        c = _disk(rng, 0.5)
        while abs(b - c) < 0.3:
            c = _disk(rng, 0.5)
        d = _disk(rng, 1.0) + 0.6
        op = _sym(a=a, b=b, c=c, d=d)
        adj = classify.adjoint_symbol(op)
        good = fock.adjoint_consistency(op, adj, trunc)
        wrong_symbol = OperatorSymbol(
            Multiplier(op.d.conj(), op.c.conj()),
            AffineMap(op.a.conj(), op.b.conj()))
        wrong = fock.adjoint_consistency(op, wrong_symbol, trunc)
        ok = ok and good <= 1e-10 and wrong >= 1e-2
        worst_good = max(worst_good, good)
        best_wrong = min(best_wrong, wrong)
    for t in (0.3, 0.7, 1.0, 1.3):
        a = Scalar.polar(1.0, ExactAngle.irrational(Fraction(1, 5), "sqrt2"))
        op = OperatorSymbol(
            Multiplier(Scalar.from_value(1.2), Scalar.from_value(-t)),
            AffineMap(a, a.mul(Scalar.from_value(t))))
        assert classify.check_bounded(op).is_yes
        adj = classify.adjoint_symbol(op)
        good = fock.adjoint_consistency(op, adj, trunc)
        ok = ok and adj is not None and good <= 1e-10
        worst_good = max(worst_good, good)
    _report(4, ok, "conjugated symbol reproduces the transposed compression: "
                   f"worst defect {worst_good:.2e} (tol 1e-10); swapped "
                   f"exponents stay detectable at {best_wrong:.2e} "
                   "(floor 1e-2)")
    assert ok


def test_criterion_05_kernel_covariance_under_the_transpose():
    rng = np.random.default_rng(20260505)
    trunc = fock.TruncationParams(N=96)
    ok = True
    worst = 0.0
    for _ in range(20):
        amod = rng.uniform(0.05, 0.9)
        a = amod * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        op = _sym(a=a, b=_disk(rng, 0.5), c=_disk(rng, 0.5),
                  d=_disk(rng, 1.0) + 0.6)
        w = _disk(rng, 1.0)
        defect = fock.kernel_covariance_check(op, w, trunc)
        ok = ok and defect <= 1e-8
        worst = max(worst, defect)
    _report(5, ok, "20 random (symbol, point) pairs: transpose maps the "
                   f"point kernel correctly, worst defect {worst:.2e} "
                   "(tol 1e-8)")
    assert ok


def test_criterion_06_orbit_routes_agree_coordinatewise():
    rng = np.random.default_rng(20260606)
    ok = True
    worst = 0.0
    for _ in range(50):
        amod = rng.uniform(0.3, 0.7)
        a = amod * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        op = _sym(a=a, b=_disk(rng, 0.3), c=_disk(rng, 0.3),
                  d=_disk(rng, 0.6) + 0.6)
        raw = rng.normal(size=96) + 1j * rng.normal(size=96)
        f = fock.CoeffVector(raw / np.linalg.norm(raw))
        rec_m = dynamics.orbit(op, f, 8, dynamics.MATRIX_ITERATION)
        rec_c = dynamics.orbit(op, f, 8, dynamics.CLOSED_FORM)
        diff = max(float(np.max(np.abs(u.values - v.values)))
                   for u, v in zip(rec_m.vectors, rec_c.vectors))
        ok = ok and diff <= 1e-8
        worst = max(worst, diff)
    _report(6, ok, "50 random bounded symbols, orbits of length 8: repeated "
                   "application and closed-form powers agree to "
                   f"{worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_07_exact_verdicts_on_the_catalog():
    cases = [
        # (symbol, bounded, cyclic, convex)
        (_sym(a=1.0, b=1.0, c=-1.0), "Yes", "No", "No"),
        (_rotation(GOLDEN, d=2.0j), "Yes", "Yes", "Yes"),
        (_rotation(THIRD), "Yes", "No", "No"),
        (_rotation(GOLDEN, d=1.0), "Yes", "Yes", "No"),
        (_sym(a=0.5, b=0.0), "Yes", "Yes", "No"),
        (_sym(a=1.0, b=0.0), "Yes", "No", "No"),
    ]
    ok = True
    for op, want_b, want_cyc, want_cvx in cases:
        rep = classify.classify_full(op)
        verdicts = (rep.bounded, rep.cyclic, rep.convex_cyclic,
                    rep.supercyclic, rep.weakly_supercyclic,
                    rep.tpt_supercyclic)
        ok = ok and rep.bounded.value == want_b
        ok = ok and rep.cyclic.value == want_cyc
        ok = ok and rep.convex_cyclic.value == want_cvx
        ok = ok and rep.supercyclic.value == "No"
        ok = ok and rep.weakly_supercyclic.value == "No"
        ok = ok and rep.tpt_supercyclic.value == "No"
        ok = ok and all(v.value in ("Yes", "No") and v.margin is None
                        for v in verdicts)
    _report(7, ok, "6 exactly annotated symbols: boundedness, cyclicity and "
                   "convex-cyclicity verdicts all plain Yes/No with no "
                   "margins, matching the hand catalog")
    assert ok


_KAPPAS = ("sqrt2", "sqrt3", "sqrt5", "golden")


def _random_exact_symbol(rng):
    mod = float(rng.choice([0.0, 1.0 / 3.0, 0.5, 0.75, 1.0, 1.0, 1.5]))
    if rng.random() < 0.7:
        ang = ExactAngle.rational(Fraction(int(rng.integers(0, 24)), 24))
    else:
        ang = ExactAngle.irrational(
            Fraction(int(rng.integers(1, 7)), int(rng.integers(1, 5))),
            str(rng.choice(_KAPPAS)))
    a = Scalar.polar(mod, ang)
    t = float(rng.choice([0.0, 0.0, 0.4, 0.9]))
    if mod == 1.0 and t != 0.0:
        b = a.mul(Scalar.from_value(t))
        c = Scalar.from_value(-t)
    else:
        b = Scalar.from_value(0.0 if t == 0.0 else
                              (t * 1j if rng.random() < 0.5 else -t))
        c = Scalar.from_value(float(rng.choice([0.0, 0.0, 0.3, -0.5])))
    dmod = float(rng.choice([0.5, 1.0, 2.0]))
    if rng.random() < 0.8:
        dang = ExactAngle.rational(Fraction(int(rng.integers(0, 8)), 8))
    else:
        dang = ExactAngle.irrational(Fraction(1, 2),
                                     str(rng.choice(_KAPPAS)))
    d = Scalar.polar(dmod, dang)
    p = (Scalar.from_value(1.0),)
    if 0.0 < mod < 1.0 and rng.random() < 0.03:
        p = (Scalar.from_value(1.0), Scalar.from_value(0.5))
    return OperatorSymbol(Multiplier(d, c, p), AffineMap(a, b))


def test_criterion_08_classification_relations_hold_in_bulk():
    rng = np.random.default_rng(77)
    violations = 0
    checked = 0
    for _ in range(1000):
        op = _random_exact_symbol(rng)
        rep = classify.classify_full(op)
        checked += 1
        good = rep.weakly_cyclic is rep.cyclic
        good = good and rep.adjoint_cyclic is rep.cyclic
        good = good and rep.adjoint_convex_cyclic is rep.convex_cyclic
        good = good and rep.invariant_convex_property is rep.convex_cyclic
        good = good and not rep.supercyclic.is_yes
        good = good and not rep.weakly_supercyclic.is_yes
        good = good and not rep.tpt_supercyclic.is_yes
        if rep.convex_cyclic.is_yes:
            good = good and rep.cyclic.is_yes
        if rep.cyclic.is_yes:
            good = good and rep.bounded.is_yes
        if rep.convex_cyclic.value == "Yes":
            good = good and rep.norm.exact and rep.norm.lower > 1.0
        if not rep.bounded.is_yes:
            good = good and rep.norm.lower == 0.0 \
                and math.isinf(rep.norm.upper)
        for v in (rep.bounded, rep.cyclic, rep.convex_cyclic):
            if v.value in ("Yes", "No"):
                good = good and op.all_exact
        if not good:
            violations += 1
    ok = violations == 0 and checked == 1000
    _report(8, ok, f"{checked} random exactly annotated symbols: equivalence "
                   "aliases, implication chain and norm consistency hold "
                   f"with {violations} violations")
    assert ok


def test_criterion_09_two_point_ratio_bound_on_invariant_disks():
    t0 = time.perf_counter()
    rep1 = dynamics.ratio_experiment(_sym(a=0.5, b=0.0), sigma=1.0, r=1.0,
                                     n_max=200, grid=64)
    rep2 = dynamics.ratio_experiment(_sym(a=1.0, b=0.01, c=-0.01), sigma=1.0,
                                     r=1.0, n_max=200, grid=64)
    elapsed = time.perf_counter() - t0
    ok = rep1.region_kind == dynamics.FIXED_POINT_DISK
    ok = ok and rep2.region_kind == dynamics.TRANSLATION_DISK
    for rep in (rep1, rep2):
        ok = ok and rep.invariance_defect <= 1e-12
        ok = ok and rep.max_ratio_observed <= rep.M * 1.05
    ok = ok and elapsed < 30.0
    _report(9, ok, "fixed-point disk and small-step translation disk: "
                   f"ratios {rep1.max_ratio_observed:.4f} <= M={rep1.M:.4f} "
                   f"and {rep2.max_ratio_observed:.4f} <= M={rep2.M:.4f}, "
                   f"regions invariant (defect <= 1e-12), {elapsed:.2f}s")
    assert ok


def test_criterion_10_hull_distance_shrinks_exactly_when_expected():
    op = _rotation(GOLDEN, d=2.0j)
    coeffs = np.zeros(32, dtype=np.complex128)
    coeffs[:8] = 1.0 / math.sqrt(8.0)
    f = fock.CoeffVector(coeffs)
    rec = dynamics.orbit(op, f, 400, dynamics.MATRIX_ITERATION)
    rng = np.random.default_rng(424242)
    ok = True
    finals, early = [], []
    for _ in range(5):
        raw = np.zeros(32, dtype=np.complex128)
        raw[:4] = rng.normal(size=4) + 1j * rng.normal(size=4)
        target = fock.CoeffVector(raw / np.linalg.norm(raw))
        curve = dynamics.hull_distance(rec, target, iterations=120)
        errs = np.array(curve.errors)
        ok = ok and np.all(np.diff(errs) <= 1e-12)
        ok = ok and errs[399] < errs[19]
        ok = ok and errs[399] <= 1e-5
        finals.append(errs[399])
        early.append(errs[19])
    # a rational rotation never improves past its finite orbit: plateau
    plateau_rec = dynamics.orbit(_rotation(THIRD), f, 400,
                                 dynamics.MATRIX_ITERATION)
    raw = np.zeros(32, dtype=np.complex128)
    raw[:4] = rng.normal(size=4) + 1j * rng.normal(size=4)
    target = fock.CoeffVector(raw / np.linalg.norm(raw))
    curve = dynamics.hull_distance(plateau_rec, target, iterations=120)
    tail = np.array(curve.errors[300:])
    rel_change = float((tail.max() - tail.min()) / max(tail.max(), 1e-300))
    ok = ok and rel_change < 1e-3
    _report(10, ok, "5 targets drain toward the growing hull (errors "
                    f"{max(early):.3f} -> {max(finals):.2e}, monotone); "
                    "rational rotation plateaus (relative change "
                    f"{rel_change:.2e} over the last 100 prefixes)")
    assert ok
