#!/usr/bin/env python3
"""Evaluating power series of matrices with controlled truncation.

Walks through the basics: builtin series, scalar and matrix evaluation,
how the truncation index is chosen from an analytic tail bound, and what
happens at the edge of the convergence ball.
"""

import math

import numpy as np

from matseries import (
    BoundKind,
    OutsideRadiusError,
    TruncationPolicy,
    builtin_series,
    choose_truncation,
    eval_matrix,
    eval_scalar,
    from_coefficients,
    matrix,
    radius_estimate,
)

# ---------------------------------------------------------------------------
# A power series is a coefficient rule plus a radius of convergence.
# ---------------------------------------------------------------------------
exp = builtin_series("exp")          # radius inf
geo = builtin_series("geometric")    # 1/(1-x), radius 1

print("exp coefficients a_0..a_5:", [exp.coefficient(n) for n in range(6)])
print("geometric radius:", geo.radius)

# Scalar evaluation truncates once the tail bound sum_{n>N} |a_n| |x|^n
# drops below the tolerance.
print("\ngeometric(0.5) =", eval_scalar(geo, 0.5), "(closed form: 2.0)")
print("exp(1)       =", eval_scalar(exp, 1.0), "(math.e:", math.e, ")")

# ---------------------------------------------------------------------------
# Matrix arguments: g(T) = sum a_n T^n requires norm(T) < radius.
# ---------------------------------------------------------------------------
t = matrix([[0.2, 0.5], [0.0, 0.1]])
value, diag = eval_matrix(exp, t)
print("\nexp(T) for an upper-triangular T:")
print(value.entries)
print(f"terms used: {diag.terms_used}, tail bound: {diag.tail_bound:.2e}, "
      f"ball radius used: {diag.ball_radius_used:.3f}")

# Nilpotent arguments truncate exactly: T^2 = 0 makes the geometric series
# finite, and extra terms change nothing.
nilp = matrix([[0.0, 0.5], [0.0, 0.0]])
value, _ = eval_matrix(geo, nilp)
print("\n(1 - T)^(-1) for nilpotent T equals I + T exactly:")
print(value.entries)

# ---------------------------------------------------------------------------
# The truncation index is driven by which tail majorant you ask for.
# ---------------------------------------------------------------------------
print("\ntruncation indices for the geometric series at s = 0.5, tol 1e-10:")
for kind in BoundKind:
    pol = TruncationPolicy(tolerance=1e-10, bound_kind=kind)
    try:
        n = choose_truncation(geo, 0.5, pol)
        print(f"  {kind.value:>16}: N = {n}")
    except OutsideRadiusError as exc:
        print(f"  {kind.value:>16}: rejected ({exc})")

# The three-s bound needs norm(T) < radius/3; 0.5 is outside that ball,
# which is why it was rejected above.

# ---------------------------------------------------------------------------
# The boundary of the ball is rejected, never extrapolated.
# ---------------------------------------------------------------------------
try:
    eval_scalar(geo, 1.0)
except OutsideRadiusError as exc:
    print("\nevaluating the geometric series at its radius:", exc)

# ---------------------------------------------------------------------------
# User series: coefficients plus an optional radius.  Without a radius the
# root test on the tail of the list provides an estimate, flagged as such.
# ---------------------------------------------------------------------------
user = from_coefficients([2.0**n for n in range(40)])
print(f"\nseries with a_n = 2^n: estimated radius {user.radius:.6f} "
      f"(estimate flag: {user.radius_is_estimate})")
print("root-test estimate for a_n = 1/n!:",
      radius_estimate([1.0 / math.factorial(n) for n in range(40)]))
