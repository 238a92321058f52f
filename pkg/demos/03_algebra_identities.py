#!/usr/bin/env python3
"""The operator identities behind the commutant expansions, made executable.

Every rearrangement used by the differential algorithms rests on a small
stack of algebraic identities.  Each one is available as a function that
returns both sides, so you can see the residuals yourself; the random
suite batch-checks them all on seeded inputs.
"""

import json

import numpy as np

from matseries import (
    binomial_sum_identity,
    commutant_power_binomial,
    matrix,
    operator_sum_identity,
    power_commutant_decomposition,
    product_commutator_expansion,
    run_identity_suite,
)

rng = np.random.default_rng(17)
rand = lambda: matrix(rng.uniform(-1, 1, (3, 3)))


def show(name, lhs, rhs):
    print(f"  {name}: residual {np.linalg.norm(lhs.entries - rhs.entries):.2e}")


t, h, b = rand(), rand(), rand()

print("single identities on random 3x3 matrices:")

# The bracket of a product telescopes across its factors:
# [A1 A2 A3, B] = [A1,B] A2 A3 + A1 [A2,B] A3 + A1 A2 [A3,B]
show("product bracket ", *product_commutator_expansion([rand(), rand(), rand()], b))

# The bracket with a matrix power spreads into a sum of conjugated brackets:
# C(T^(n+1))(h) = sum_s T^s (hT - Th) T^(n-s)
show("power spreading ", *power_commutant_decomposition(t, h, 5))

# Nested brackets expand binomially because left and right multiplication
# by T commute as operators:
# C(T)^n(h) = sum_k (-1)^k binom(n,k) T^k h T^(n-k)
show("nested binomial ", *commutant_power_binomial(t, h, 4))

# The operator sum that converts the direct differential into its
# nested-commutant expansion:
show("operator sum    ", *operator_sum_identity(t, h, 6))

# All of the above trace back to a hockey-stick binomial sum, which holds
# in exact integers:
lhs, rhs = binomial_sum_identity(20, 7)
print(f"  binomial sum    : sum binom(p-1,6), p=7..20 = {lhs} = binom(20,7) = {rhs}")

# ---------------------------------------------------------------------------
# The batch suite: five identities, seeded random trials, scaled residuals.
# ---------------------------------------------------------------------------
print("\nrandom suite (100 trials, dim 5, seed 42):")
for report in run_identity_suite(trials=100, dim=5, seed=42):
    print(f"  {report.identity_name:32s} max residual {report.max_abs_residual:.2e} "
          f"(scaled {report.max_scaled_residual:.2e})")

# Reports serialize for downstream tooling; the worst-case inputs ride along.
payload = run_identity_suite(trials=10, dim=2, seed=1)[0].to_json()
print("\nserialized report keys:", sorted(payload))
print(json.dumps({k: payload[k] for k in ("identity", "trials")}, indent=2))
