#!/usr/bin/env python3
"""Curve derivatives, the ray integral identity, and the independent oracles.

For a differentiable path t -> T(t) inside the R/3 ball,

    d/dt g(T(t)) = sum_{p>=1} (1/p!) g^(p)(T(t)) C(T(t))^(p-1)(T'(t)),

collapsing to g'(T(t)) T'(t) whenever T'(t) commutes with T(t).  Along a
ray T(t) = t W that commutation always holds, which yields the checkable
integral identity

    W * integral_{u1}^{u2} g'(t W) dt = g(u2 W) - g(u1 W).

The oracles at the end recompute differentials through completely separate
routes (finite differences, a doubled block matrix, a closed-form
resolvent) and are what the test suite trusts as ground truth.
"""

import numpy as np

from matseries import (
    block_triangular_differential,
    builtin_series,
    curve_derivative,
    eval_matrix,
    fd_differential,
    frechet_direct,
    integral_identity_check,
    matrix,
    polynomial_curve,
    relative_difference,
    resolvent_differential,
    zeros,
)

rng = np.random.default_rng(23)
g = builtin_series("exp")

# ---------------------------------------------------------------------------
# A quadratic matrix path T(t) = t A + t^2 B with non-commuting A, B.
# ---------------------------------------------------------------------------
a = rng.uniform(-1, 1, (3, 3))
b = rng.uniform(-1, 1, (3, 3))
a = matrix(a / np.linalg.norm(a) * 0.5)
b = matrix(b / np.linalg.norm(b) * 0.5)
curve = polynomial_curve([zeros(3), a, b])

t0, step = 0.2, 1e-5
analytic = curve_derivative(g, curve, t0)
hi, _ = eval_matrix(g, curve.value(t0 + step))
lo, _ = eval_matrix(g, curve.value(t0 - step))
fd_in_t = (hi.entries - lo.entries) / (2 * step)
print("curve derivative vs. finite differences in t:")
print(f"  relative deviation at t = {t0}: "
      f"{np.linalg.norm(analytic.entries - fd_in_t) / np.linalg.norm(fd_in_t):.2e}")

# Along a ray the derivative is just W g'(tW):
w = matrix(rng.uniform(-1, 1, (2, 2)) * 0.3)
ray = polynomial_curve([zeros(2), w])
print("  constant-direction ray at t = 0.5, derivative[0,0]:",
      f"{curve_derivative(g, ray, 0.5).entries[0, 0]:+.12f}")

# ---------------------------------------------------------------------------
# The integral identity along rays, verified by adaptive quadrature.
# ---------------------------------------------------------------------------
print("\nintegral identity residuals:")
w_nilp = matrix([[0.0, 1.0], [0.0, 0.0]])
print(f"  exp, nilpotent W, [0, 1]:        "
      f"{integral_identity_check(g, w_nilp, 0.0, 1.0):.2e}")
geo = builtin_series("geometric")
w_diag = matrix(0.5 * np.eye(2))
print(f"  geometric, W = I/2, [0, 1]:      "
      f"{integral_identity_check(geo, w_diag, 0.0, 1.0):.2e}")
w_rand = matrix(rng.uniform(-1, 1, (3, 3)))
span = 0.8 / np.linalg.norm(w_rand.entries)
print(f"  geometric, random W, random ends: "
      f"{integral_identity_check(geo, w_rand, -0.3 * span, 0.7 * span):.2e}")

# ---------------------------------------------------------------------------
# Independent oracles.
# ---------------------------------------------------------------------------
t = matrix(rng.uniform(-1, 1, (3, 3)))
t = matrix(t.entries / np.linalg.norm(t.entries) * 0.3)
h = matrix(rng.uniform(-1, 1, (3, 3)))
reference = frechet_direct(g, t, h).value

print("\noracle agreement against the direct expansion (exp):")
fd = fd_differential(g, t, h)  # central difference of T -> g(T)
print(f"  finite difference:  {relative_difference(fd, reference):.2e}")

# the upper-right block of g([[T, h], [0, T]]) is exactly g'(T)(h)
bt = block_triangular_differential(g, t, h)
print(f"  block triangular:   {relative_difference(bt, reference):.2e}")

# for the geometric series there is a closed form:
# g'(T)(h) = (I-T)^(-1) h (I-T)^(-1)
res = resolvent_differential(t, h)
alg = frechet_direct(geo, t, h).value
print(f"  resolvent (geom.):  {relative_difference(res, alg):.2e}")
