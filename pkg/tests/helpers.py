"""Shared helpers for the test suite."""

import numpy as np

from matseries import ScalarField, matrix


def random_matrix(rng, dim, field=ScalarField.REAL, norm=None):
    """Random matrix with entries uniform in [-1, 1], optionally norm-scaled."""
    a = rng.uniform(-1.0, 1.0, (dim, dim))
    if field is ScalarField.COMPLEX:
        a = a + 1j * rng.uniform(-1.0, 1.0, (dim, dim))
    if norm is not None:
        a = a / np.linalg.norm(a) * norm
    return matrix(a)


def rel_err(actual, expected):
    """Frobenius relative error against a dense array or MatrixElement."""
    act = getattr(actual, "entries", actual)
    exp = getattr(expected, "entries", expected)
    scale = np.linalg.norm(exp)
    if scale == 0.0:
        return float(np.linalg.norm(act))
    return float(np.linalg.norm(act - exp) / scale)
