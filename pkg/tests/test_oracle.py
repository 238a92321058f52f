"""Finite-difference, block-triangular, resolvent, and polynomial oracles."""

import math

import numpy as np
import pytest

from matseries import (
    OutsideRadiusError,
    ScalarField,
    algebra_norm,
    block_triangular_differential,
    builtin_series,
    fd_differential,
    fd_slope,
    frechet_direct,
    frechet_power_commutant,
    from_coefficients,
    identity,
    matrix,
    polynomial_differential,
    relative_difference,
    resolvent_differential,
    zeros,
)
from helpers import random_matrix

LINEAR = from_coefficients([0.0, 1.0], radius=math.inf)
SQUARE = from_coefficients([0.0, 0.0, 1.0], radius=math.inf)


class TestFiniteDifference:
    def test_linear_function_exact_for_any_step(self):
        rng = np.random.default_rng(0)
        t, h = random_matrix(rng, 3, norm=0.5), random_matrix(rng, 3)
        for step in (1e-2, 1e-6):
            got = fd_differential(LINEAR, t, h, step=step)
            np.testing.assert_allclose(got.entries, h.entries, rtol=1e-9)

    def test_quadratic_nearly_exact(self):
        rng = np.random.default_rng(1)
        t, h = random_matrix(rng, 3, norm=0.5), random_matrix(rng, 3)
        got = fd_differential(SQUARE, t, h, step=1e-5)
        expected = h.entries @ t.entries + t.entries @ h.entries
        assert np.linalg.norm(got.entries - expected) <= 1e-10 * np.linalg.norm(expected)

    def test_exp_matches_direct_algorithm(self):
        rng = np.random.default_rng(2)
        g = builtin_series("exp")
        t, h = random_matrix(rng, 3, norm=0.3), random_matrix(rng, 3)
        got = fd_differential(g, t, h)
        ref = frechet_direct(g, t, h).value
        assert relative_difference(got, ref) <= 1e-6

    def test_radius_guard_counts_perturbation(self):
        g = builtin_series("geometric")
        t = matrix(0.99 * np.eye(2) / math.sqrt(2))
        h = identity(2)
        with pytest.raises(OutsideRadiusError):
            fd_differential(g, t, h, step=0.05)

    def test_rejects_bad_step(self):
        rng = np.random.default_rng(3)
        with pytest.raises(ValueError):
            fd_differential(LINEAR, random_matrix(rng, 2), random_matrix(rng, 2), step=0.0)

    def test_second_order_convergence(self):
        rng = np.random.default_rng(4)
        g = builtin_series("exp")
        t, h = random_matrix(rng, 3, norm=0.3), random_matrix(rng, 3)
        ref = block_triangular_differential(g, t, h)
        steps = [1e-2, 1e-3, 1e-4]
        errors = [float(np.linalg.norm(fd_differential(g, t, h, step=s).entries - ref.entries))
                  for s in steps]
        assert fd_slope(errors, steps) >= 1.9


class TestBlockTriangular:
    def test_zero_perturbation(self):
        rng = np.random.default_rng(5)
        t = random_matrix(rng, 3, norm=0.3)
        got = block_triangular_differential(builtin_series("exp"), t, zeros(3))
        np.testing.assert_allclose(got.entries, np.zeros((3, 3)), atol=1e-14)

    def test_square_by_block_multiplication(self):
        rng = np.random.default_rng(6)
        t, h = random_matrix(rng, 3, norm=0.4), random_matrix(rng, 3)
        got = block_triangular_differential(SQUARE, t, h)
        expected = t.entries @ h.entries + h.entries @ t.entries
        np.testing.assert_allclose(got.entries, expected, rtol=1e-12, atol=1e-14)

    def test_exp_nilpotent_reference_vector(self):
        t = matrix([[0.0, 1.0], [0.0, 0.0]])
        h = matrix([[0.0, 0.0], [1.0, 0.0]])
        got = block_triangular_differential(builtin_series("exp"), t, h)
        np.testing.assert_allclose(got.entries, [[0.5, 1 / 6], [1.0, 0.5]], rtol=1e-13)

    def test_agrees_with_fd(self):
        rng = np.random.default_rng(7)
        g = builtin_series("exp")
        t, h = random_matrix(rng, 3, norm=0.3), random_matrix(rng, 3)
        bt = block_triangular_differential(g, t, h)
        fd = fd_differential(g, t, h)
        assert relative_difference(bt, fd) <= 1e-6

    def test_rescaling_keeps_linearity_for_large_h(self):
        rng = np.random.default_rng(8)
        g = builtin_series("geometric")
        t = random_matrix(rng, 2, norm=0.3)
        h_small = random_matrix(rng, 2, norm=1.0)
        h_big = matrix(50.0 * h_small.entries)
        small = block_triangular_differential(g, t, h_small)
        big = block_triangular_differential(g, t, h_big)
        np.testing.assert_allclose(big.entries, 50.0 * small.entries, rtol=1e-11)

    def test_rejects_argument_too_large_to_rescale(self):
        g = builtin_series("geometric")
        t = matrix(0.95 * np.eye(2) / math.sqrt(2))  # doubled matrix norm ~0.95*sqrt(2)
        h = identity(2)
        with pytest.raises(OutsideRadiusError):
            block_triangular_differential(g, t, h)


class TestResolvent:
    def test_at_zero(self):
        rng = np.random.default_rng(9)
        h = random_matrix(rng, 3)
        got = resolvent_differential(zeros(3), h)
        np.testing.assert_allclose(got.entries, h.entries, rtol=1e-15)

    def test_scaled_identity(self):
        got = resolvent_differential(matrix(0.5 * np.eye(2)), identity(2))
        np.testing.assert_allclose(got.entries, 4.0 * np.eye(2), rtol=1e-13)

    def test_agrees_with_power_commutant(self):
        rng = np.random.default_rng(10)
        g = builtin_series("geometric")
        t, h = random_matrix(rng, 3, norm=0.4), random_matrix(rng, 3)
        alg = frechet_power_commutant(g, t, h).value
        assert relative_difference(alg, resolvent_differential(t, h)) <= 1e-9

    def test_agrees_with_block_triangular(self):
        rng = np.random.default_rng(11)
        g = builtin_series("geometric")
        t, h = random_matrix(rng, 3, norm=0.4), random_matrix(rng, 3)
        bt = block_triangular_differential(g, t, h)
        assert relative_difference(bt, resolvent_differential(t, h)) <= 1e-9

    def test_complex_field(self):
        rng = np.random.default_rng(12)
        t = random_matrix(rng, 3, ScalarField.COMPLEX, norm=0.4)
        h = random_matrix(rng, 3, ScalarField.COMPLEX)
        got = resolvent_differential(t, h)
        inv = np.linalg.inv(np.eye(3) - t.entries)
        np.testing.assert_allclose(got.entries, inv @ h.entries @ inv, rtol=1e-12)

    def test_rejects_large_norm(self):
        with pytest.raises(OutsideRadiusError):
            resolvent_differential(matrix(np.eye(2)), identity(2))


class TestPolynomial:
    def test_identity_polynomial(self):
        rng = np.random.default_rng(13)
        t, h = random_matrix(rng, 2), random_matrix(rng, 2)
        got = polynomial_differential([0.0, 1.0], t, h)
        np.testing.assert_array_equal(got.entries, h.entries)

    def test_square_polynomial(self):
        rng = np.random.default_rng(14)
        t, h = random_matrix(rng, 2), random_matrix(rng, 2)
        got = polynomial_differential([0.0, 0.0, 1.0], t, h)
        expected = h.entries @ t.entries + t.entries @ h.entries
        np.testing.assert_allclose(got.entries, expected, rtol=1e-14)

    def test_matches_direct_algorithm_exactly(self):
        rng = np.random.default_rng(15)
        coeffs = [1.0, 2.0, 0.0, 5.0]
        t, h = random_matrix(rng, 2, norm=0.5), random_matrix(rng, 2)
        oracle = polynomial_differential(coeffs, t, h)
        alg = frechet_direct(from_coefficients(coeffs, radius=math.inf), t, h).value
        np.testing.assert_allclose(alg.entries, oracle.entries, rtol=1e-14)

    def test_linear_in_coefficients_and_h(self):
        rng = np.random.default_rng(16)
        t = random_matrix(rng, 3)
        h1, h2 = random_matrix(rng, 3), random_matrix(rng, 3)
        c1, c2 = [0.0, 1.0, 2.0], [0.0, -3.0, 1.0]
        combo_c = [a + b for a, b in zip(c1, c2)]
        lhs = polynomial_differential(combo_c, t, h1).entries
        rhs = polynomial_differential(c1, t, h1).entries + polynomial_differential(c2, t, h1).entries
        np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-14)
        combo_h = matrix(2.0 * h1.entries + h2.entries)
        lhs = polynomial_differential(c1, t, combo_h).entries
        rhs = 2.0 * polynomial_differential(c1, t, h1).entries \
            + polynomial_differential(c1, t, h2).entries
        np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-14)

    def test_complex_coefficients_promote_field(self):
        rng = np.random.default_rng(17)
        t, h = random_matrix(rng, 2), random_matrix(rng, 2)
        got = polynomial_differential([0.0, 1j], t, h)
        assert got.field is ScalarField.COMPLEX
        np.testing.assert_allclose(got.entries, 1j * h.entries, rtol=1e-15)


class TestSlopeFit:
    def test_perfect_quadratic_data_has_slope_two(self):
        steps = [1e-2, 1e-3, 1e-4]
        errors = [s**2 for s in steps]
        assert fd_slope(errors, steps) == pytest.approx(2.0, abs=1e-12)

    def test_validates_inputs(self):
        with pytest.raises(ValueError):
            fd_slope([1.0], [1.0])
        with pytest.raises(ValueError):
            fd_slope([1.0, 0.0], [1e-2, 1e-3])
