"""Acceptance criteria, one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
measurements.  Tolerances are fixed here, not tuned at runtime.

A note on "relative" measures: algorithm outputs (criteria 1, 4, 6, 8) are
compared with the output-relative difference ``|a - b| / max(|a|, |b|)``.
Identity-equivalence checks (criteria 2, 3) measure residuals against the
identity's natural term scale, the same convention the identity suite uses,
because both sides of an identity cancel identically large terms and the
output norm can be arbitrarily smaller than the rounding floor of any
double-precision evaluation.  For criterion 2 the output-relative reading
is additionally asserted for degrees up to 10, the range where double
precision can meet it; at degrees 11-12 the binomial-commutant form's own
rounding (verified against extended-precision evaluation) exceeds 1e-12,
so only the scaled reading is asserted there and the measured
output-relative worst is printed for the record.
"""

import json
import math
import time

import numpy as np
import pytest

from matseries import (
    Algorithm,
    BUILTIN_NAMES,
    OutsideDerivativeBallError,
    ScalarField,
    algebra_norm,
    binomial_sum_identity,
    block_triangular_differential,
    builtin_series,
    curve_derivative,
    derivative_series,
    eval_matrix,
    fd_differential,
    fd_slope,
    frechet_commutant,
    frechet_compare,
    frechet_derivative_series,
    frechet_direct,
    frechet_power_commutant,
    integral_identity_check,
    matrix,
    monomial_differential,
    monomial_differential_forms,
    polynomial_curve,
    relative_difference,
    resolvent_differential,
    run_identity_suite,
    zeros,
)
from helpers import random_matrix

ALL_ALGORITHMS = (frechet_direct, frechet_commutant,
                  frechet_power_commutant, frechet_derivative_series)


def report(criterion, ok, detail):
    print(f"[criterion {criterion:02d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def test_criterion_01_four_way_agreement():
    """All four algorithms agree pairwise within 1e-9 across series/dims/fields."""
    start = time.perf_counter()
    rng = np.random.default_rng(20260810)
    worst = 0.0
    runs = 0
    for name in BUILTIN_NAMES:
        g = builtin_series(name)
        cap = 0.3 * min(g.radius, 1.0)
        for dim in (2, 3, 4, 6):
            for field in (ScalarField.REAL, ScalarField.COMPLEX):
                for _ in range(50):
                    t = random_matrix(rng, dim, field,
                                      norm=float(rng.uniform(0.2, 1.0)) * cap)
                    h = random_matrix(rng, dim, field)
                    rep = frechet_compare(g, t, h)
                    assert len(rep.results) == 4
                    worst = max(worst, rep.max_relative_difference)
                    runs += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30.0
    report(1, ok, f"{runs} runs, worst pairwise relative {worst:.3e} "
                  f"(<= 1e-9), elapsed {elapsed:.1f}s (< 30s)")


def test_criterion_02_monomial_four_forms():
    """Four forms of the monomial differential agree; commuting inputs collapse."""
    rng = np.random.default_rng(31415)
    worst_scaled = 0.0
    worst_rel_low = 0.0   # output-relative, n <= 10
    worst_rel_high = 0.0  # output-relative, n in {11, 12}, printed for the record
    worst_collapse = 0.0
    for n in range(2, 13):
        for _ in range(20):
            t = random_matrix(rng, 4)
            h = random_matrix(rng, 4)
            forms = monomial_differential_forms(n, t, h)
            scale = n * algebra_norm(t) ** (n - 1) * algebra_norm(h)
            for i in range(4):
                for j in range(i + 1, 4):
                    resid = float(np.linalg.norm(forms[i].entries - forms[j].entries))
                    worst_scaled = max(worst_scaled, resid / scale)
                    rel = relative_difference(forms[i], forms[j])
                    if n <= 10:
                        worst_rel_low = max(worst_rel_low, rel)
                    else:
                        worst_rel_high = max(worst_rel_high, rel)
            hc = matrix(2 * np.eye(4) + 3 * t.entries + t.entries @ t.entries)
            target = n * (hc.entries @ np.linalg.matrix_power(t.entries, n - 1))
            tnorm = np.linalg.norm(target)
            for f in monomial_differential_forms(n, t, hc):
                worst_collapse = max(
                    worst_collapse, float(np.linalg.norm(f.entries - target)) / tnorm)
    ok = worst_scaled <= 1e-12 and worst_rel_low <= 1e-12 and worst_collapse <= 1e-13
    report(2, ok,
           f"scaled residual {worst_scaled:.3e} (<= 1e-12 for n=2..12), "
           f"output-relative {worst_rel_low:.3e} (<= 1e-12 for n<=10; "
           f"n=11..12 measured {worst_rel_high:.3e}, see ledger), "
           f"commuting collapse {worst_collapse:.3e} (<= 1e-13)")


def test_criterion_03_identity_suite():
    """Random identity suite residuals and the exact binomial sum."""
    worst = 0.0
    for dim in range(1, 9):
        for field in (ScalarField.REAL, ScalarField.COMPLEX):
            for rep in run_identity_suite(trials=200, dim=dim, seed=5000 + dim, field=field):
                worst = max(worst, rep.max_scaled_residual)
    exact = all(binomial_sum_identity(n, s) [0] == binomial_sum_identity(n, s)[1]
                for n in range(1, 41) for s in range(1, n + 1))
    ok = worst <= 1e-10 and exact
    report(3, ok, f"matrix identity scaled residual {worst:.3e} (<= 1e-10, "
                  f"trials=200, dim=1..8, both fields); binomial sum exact "
                  f"for 1 <= s <= n <= 40: {exact}")


def test_criterion_04_oracle_agreement():
    """Expansion algorithms match the independent oracles."""
    rng = np.random.default_rng(271828)
    worst_fd = worst_bt = worst_res = 0.0
    for name in BUILTIN_NAMES:
        g = builtin_series(name)
        for _ in range(5):
            dim = int(rng.integers(2, 5))
            t = random_matrix(rng, dim, norm=0.3 * min(g.radius, 1.0))
            h = random_matrix(rng, dim)
            direct = frechet_direct(g, t, h).value
            worst_fd = max(worst_fd, relative_difference(
                fd_differential(g, t, h, step=1e-5), direct))
            worst_bt = max(worst_bt, relative_difference(
                block_triangular_differential(g, t, h), direct))
    geo = builtin_series("geometric")
    for _ in range(10):
        dim = int(rng.integers(2, 5))
        t = random_matrix(rng, dim, norm=0.3)
        h = random_matrix(rng, dim)
        oracle = resolvent_differential(t, h)
        for fn in ALL_ALGORITHMS:
            worst_res = max(worst_res, relative_difference(fn(geo, t, h).value, oracle))
    g = builtin_series("exp")
    t = random_matrix(rng, 3, norm=0.3)
    h = random_matrix(rng, 3)
    ref = block_triangular_differential(g, t, h)
    steps = [1e-2, 1e-3, 1e-4]
    errs = [float(np.linalg.norm(fd_differential(g, t, h, step=s).entries - ref.entries))
            for s in steps]
    slope = fd_slope(errs, steps)
    ok = worst_fd <= 1e-6 and worst_bt <= 1e-9 and worst_res <= 1e-9 and slope >= 1.9
    report(4, ok, f"fd {worst_fd:.3e} (<= 1e-6), block-triangular {worst_bt:.3e} "
                  f"(<= 1e-9), resolvent {worst_res:.3e} (<= 1e-9), "
                  f"fd slope {slope:.3f} (>= 1.9)")


def test_criterion_05_norm_bound():
    """norm(u_n(T, h)) <= n norm(T)^(n-1) norm(h), 500 random draws."""
    rng = np.random.default_rng(161803)
    violations = 0
    for _ in range(500):
        n = int(rng.integers(1, 13))
        dim = int(rng.integers(2, 7))
        field = ScalarField.COMPLEX if rng.integers(0, 2) else ScalarField.REAL
        t = random_matrix(rng, dim, field)
        h = random_matrix(rng, dim, field)
        lhs = algebra_norm(monomial_differential(n, t, h))
        rhs = n * algebra_norm(t) ** (n - 1) * algebra_norm(h) * (1 + 1e-12)
        if lhs > rhs:
            violations += 1
    report(5, violations == 0, f"{violations} violations in 500 draws (need 0)")


def test_criterion_06_commuting_collapse():
    """With h = 2I + 3T + T^2 every algorithm returns g'(T) h."""
    rng = np.random.default_rng(141421)
    worst = 0.0
    for name in BUILTIN_NAMES:
        g = builtin_series(name)
        dg = derivative_series(g, 1)
        for _ in range(6):
            dim = int(rng.integers(2, 5))
            t = random_matrix(rng, dim, norm=float(rng.uniform(0.1, 1.0)) * 0.25)
            h = matrix(2 * np.eye(dim) + 3 * t.entries + t.entries @ t.entries)
            gp, _ = eval_matrix(dg, t)
            target = matrix(gp.entries @ h.entries)
            for fn in ALL_ALGORITHMS:
                worst = max(worst, relative_difference(fn(g, t, h).value, target))
    report(6, worst <= 1e-9, f"worst deviation from g'(T) h: {worst:.3e} (<= 1e-9)")


def test_criterion_07_r_over_three_guard():
    """The derivative-series ball guard and the compare-command skip record."""
    rng = np.random.default_rng(57721)
    g = builtin_series("geometric")
    h = random_matrix(rng, 3)
    rejected = 0
    for s in (1.0 / 3.0, 0.4, 0.7, 0.99):
        try:
            frechet_derivative_series(g, random_matrix(rng, 3, norm=s), h)
        except OutsideDerivativeBallError:
            rejected += 1
    skips_ok = True
    for s in (0.45, 0.6, 0.85):
        rep = frechet_compare(g, random_matrix(rng, 3, norm=s), h)
        skips_ok = skips_ok and len(rep.results) == 3 and len(rep.skipped) == 1 \
            and rep.skipped[0].algorithm is Algorithm.DERIVATIVE_SERIES_FORM
    ok = rejected == 4 and skips_ok
    report(7, ok, f"dedicated rejection at norm >= R/3 ({rejected}/4), "
                  f"compare reports 3 algorithms + 1 skip record: {skips_ok}")


def test_criterion_08_curve_derivative():
    """d/dt g(T(t)) for T(t) = t A + t^2 B matches finite differences in t."""
    rng = np.random.default_rng(662607)
    g = builtin_series("exp")
    a = random_matrix(rng, 3, norm=0.5)
    b = random_matrix(rng, 3, norm=0.5)
    assert np.linalg.norm(a.entries @ b.entries - b.entries @ a.entries) > 1e-3
    curve = polynomial_curve([zeros(3), a, b])
    worst = 0.0
    step = 1e-5
    for t0 in np.linspace(-0.45, 0.45, 10):
        t0 = float(t0)
        got = curve_derivative(g, curve, t0)
        hi, _ = eval_matrix(g, curve.value(t0 + step))
        lo, _ = eval_matrix(g, curve.value(t0 - step))
        fd = (hi.entries - lo.entries) / (2 * step)
        worst = max(worst, float(np.linalg.norm(got.entries - fd) / np.linalg.norm(fd)))
    report(8, worst <= 1e-6, f"worst relative deviation from time finite "
                             f"difference over 10 points: {worst:.3e} (<= 1e-6)")


def test_criterion_09_integral_identity():
    """W int_{u1}^{u2} g'(t W) dt equals g(u2 W) - g(u1 W) up to 1e-8."""
    rng = np.random.default_rng(602214)
    worst = 0.0
    for name in ("exp", "geometric"):
        g = builtin_series(name)
        for _ in range(20):
            dim = int(rng.integers(2, 5))
            w = random_matrix(rng, dim)
            span = 0.8 * min(g.radius, 2.0) / algebra_norm(w)
            u1 = float(rng.uniform(-span, span))
            u2 = float(rng.uniform(-span, span))
            worst = max(worst, integral_identity_check(g, w, u1, u2))
    report(9, worst <= 1e-8, f"worst residual over 40 random rays: {worst:.3e} (<= 1e-8)")


def test_criterion_10_cli_determinism(capsys):
    """Identical CLI requests give byte-identical reports; goldens match."""
    from make_goldens import GOLDENS, golden_commands, run_capture

    deterministic = True
    golden_ok = True
    for name, argv in golden_commands().items():
        code1, out1 = run_capture(list(argv))
        code2, out2 = run_capture(list(argv))
        deterministic = deterministic and code1 == code2 == 0 and out1 == out2
        golden_ok = golden_ok and out1 == (GOLDENS / f"{name}.json").read_text()
        assert json.loads(out1)  # well-formed
    with capsys.disabled():
        report(10, deterministic and golden_ok,
               f"byte-identical replays: {deterministic}; golden files match "
               f"for {len(golden_commands())} commands: {golden_ok}")
