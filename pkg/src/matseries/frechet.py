"""Frechet differentials of matrix power series via commutant expansions.

For ``g(T) = sum_n a_n T^n`` with radius ``R`` and ``norm(T) < R``, the
differential ``g'(T): h -> g'(T)(h)`` (the linear map giving the first
order change of ``g`` at ``T``) can be written in four equivalent ways,
each implemented here as a separate algorithm so they can cross-check one
another:

``direct``
    ``sum_n a_n u_n(T, h)`` with the monomial differential
    ``u_n(T, h) = sum_{p=1..n} T^(n-p) h T^(p-1)``; truncated with the
    first-derivative majorant ``sum n |a_n| s^(n-1)``.

``commutant``
    ``h g'(T) - sum_{p>=0} T^p (hT - Th) G_p(T)`` with
    ``G_p(T) = sum_{m>=0} (m+1) a_(m+p+2) T^m``.  The outer p-sum is
    truncated with the second-order majorant ``sum n (n-1) |a_n| s^(n-1)``
    and each inner series with its own value bound.

``power-commutant``
    ``h g'(T) - sum_{k>=2} (h T^(k-1) - T^(k-1) h) B_k(T)`` with
    ``B_k(T) = sum_{m>=0} a_(m+k) T^m``; truncation as above.

``derivative-series``
    ``sum_{p>=1} (1/p!) g^(p)(T) C(T)^(p-1)(h)`` where ``g^(p)`` is the
    p-th derivative series and ``C(T)(h) = hT - Th``.  This expansion is
    only guaranteed to converge for ``norm(T) < R/3`` (strictly); outside
    that ball it is rejected with :class:`OutsideDerivativeBallError`.
    The whole double sum ``sum_{p, m} binom(m+p, p) a_(m+p) T^m C(T)^(p-1)``
    is truncated jointly over ``m + p <= N`` with N chosen from the
    ``THREE_S`` majorant ``sum_{n>N} |a_n| 3^n s^(n-1)``, which dominates
    every discarded term.

When ``h`` commutes with ``T`` every form collapses to
``sum n a_n h T^(n-1) = g'(T) h``.

Also here: parametric curves ``t -> T(t)`` with
``d/dt g(T(t)) = sum_p (1/p!) g^(p)(T(t)) C(T(t))^(p-1)(T'(t))``
(again requiring ``norm(T(t)) < R/3``), and the integral identity
``W @ integral_{u1}^{u2} g'(t W) dt = g(u2 W) - g(u1 W)`` checked by
adaptive Simpson quadrature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import (
    DimensionMismatchError,
    FieldMismatchError,
    MatrixElement,
    ScalarField,
    algebra_norm,
)
from .series import (
    BoundKind,
    DEFAULT_POLICY,
    EvalDiagnostics,
    OutsideDerivativeBallError,
    OutsideRadiusError,
    PowerSeries,
    SeriesError,
    TruncationPolicy,
    _detail_from_terms,
    _SCAN_MARGIN,
    _truncation_detail,
    derivative_series,
    eval_matrix,
)

__all__ = [
    "Algorithm",
    "DifferentialResult",
    "CompareReport",
    "SkipRecord",
    "PairwiseDifference",
    "MatrixCurve",
    "CurveDomainError",
    "polynomial_curve",
    "monomial_differential",
    "monomial_differential_forms",
    "frechet_direct",
    "frechet_commutant",
    "frechet_power_commutant",
    "frechet_derivative_series",
    "frechet_compare",
    "curve_derivative",
    "integral_identity_check",
    "derivative_series_growth",
    "relative_difference",
]


class CurveDomainError(ValueError):
    """Parameter value outside the curve's open domain interval."""


class Algorithm(enum.Enum):
    DIRECT = "direct"
    COMMUTANT_FORM = "commutant"
    POWER_COMMUTANT_FORM = "power-commutant"
    DERIVATIVE_SERIES_FORM = "derivative-series"


@dataclass(frozen=True)
class DifferentialResult:
    """Value of g'(T)(h) plus which algorithm produced it and how hard it worked."""

    value: MatrixElement
    algorithm: Algorithm
    diagnostics: EvalDiagnostics


@dataclass(frozen=True)
class SkipRecord:
    algorithm: Algorithm
    reason: str


@dataclass(frozen=True)
class PairwiseDifference:
    first: Algorithm
    second: Algorithm
    relative_difference: float


@dataclass(frozen=True)
class CompareReport:
    results: tuple[DifferentialResult, ...]
    skipped: tuple[SkipRecord, ...]
    pairwise: tuple[PairwiseDifference, ...]
    max_relative_difference: float


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------

def _check_pair(t: MatrixElement, h: MatrixElement) -> tuple[np.ndarray, np.ndarray]:
    if t.field is not h.field:
        raise FieldMismatchError(
            f"mixed-field arithmetic is rejected: {t.field.value} vs {h.field.value}"
        )
    if t.dim != h.dim:
        raise DimensionMismatchError(f"dimension mismatch: {t.dim} vs {h.dim}")
    return t.entries, h.entries


def _out_field(g: PowerSeries, t: MatrixElement) -> ScalarField:
    if t.field is ScalarField.COMPLEX or g.complex_coefficients:
        return ScalarField.COMPLEX
    return ScalarField.REAL


def _powers(ta: np.ndarray, count: int) -> list[np.ndarray]:
    """[T^0, T^1, ..., T^count]."""
    out = [np.eye(ta.shape[0], dtype=ta.dtype)]
    for _ in range(count):
        out.append(out[-1] @ ta)
    return out


def relative_difference(a: MatrixElement, b: MatrixElement) -> float:
    """``norm(a - b) / max(norm(a), norm(b))``; zero when both vanish."""
    na = algebra_norm(a)
    nb = algebra_norm(b)
    scale = max(na, nb)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(a.entries - b.entries)) / scale


# ---------------------------------------------------------------------------
# Monomial differentials
# ---------------------------------------------------------------------------

def monomial_differential(n: int, t: MatrixElement, h: MatrixElement) -> MatrixElement:
    """Differential of ``T -> T^n`` at ``T`` applied to ``h``.

    ``u_n(T, h) = sum_{p=1..n} T^(n-p) h T^(p-1)`` with ``u_0 = 0`` and
    ``u_1 = h``.  Satisfies ``norm(u_n(T, h)) <= n norm(T)^(n-1) norm(h)``.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 0):
        raise ValueError(f"monomial degree must be a nonnegative integer, got {n!r}")
    ta, ha = _check_pair(t, h)
    if n == 0:
        return MatrixElement(np.zeros_like(ta), t.field)
    if n == 1:
        return h
    pows = _powers(ta, n - 1)
    acc = np.zeros_like(ta)
    for p in range(1, n + 1):
        acc = acc + pows[n - p] @ ha @ pows[p - 1]
    return MatrixElement(acc, t.field)


def monomial_differential_forms(
    n: int, t: MatrixElement, h: MatrixElement
) -> tuple[MatrixElement, MatrixElement, MatrixElement, MatrixElement]:
    """The four equivalent forms of the monomial differential (n >= 2).

    1. direct:          ``sum_p T^(n-p) h T^(p-1)``
    2. power commutant: ``n h T^(n-1) - sum_{k=2..n} (h T^(k-1) - T^(k-1) h) T^(n-k)``
    3. nested commutant: ``sum_{p=1..n} binom(n,p) T^(n-p) C(T)^(p-1)(h)``
    4. single commutant: ``n h T^(n-1) - sum_{s=0..n-2} (n-s-1) T^s (hT - Th) T^(n-2-s)``

    All four agree to rounding; with ``[T, h] = 0`` they all collapse to
    ``n h T^(n-1)``.
    """
    if n < 2:
        raise ValueError(f"the four-form decomposition needs n >= 2, got {n}")
    ta, ha = _check_pair(t, h)
    pows = _powers(ta, n - 1)

    f1 = np.zeros_like(ta)
    for p in range(1, n + 1):
        f1 = f1 + pows[n - p] @ ha @ pows[p - 1]

    lead = n * (ha @ pows[n - 1])
    f2 = lead.copy()
    for k in range(2, n + 1):
        f2 = f2 - (ha @ pows[k - 1] - pows[k - 1] @ ha) @ pows[n - k]

    f3 = np.zeros_like(ta)
    commutant = ha
    for p in range(1, n + 1):
        f3 = f3 + math.comb(n, p) * (pows[n - p] @ commutant)
        if p < n:
            commutant = commutant @ ta - ta @ commutant

    bracket = ha @ ta - ta @ ha
    f4 = lead.copy()
    for s in range(0, n - 1):
        f4 = f4 - (n - s - 1) * (pows[s] @ bracket @ pows[n - 2 - s])

    fld = t.field
    return (MatrixElement(f1, fld), MatrixElement(f2, fld),
            MatrixElement(f3, fld), MatrixElement(f4, fld))


# ---------------------------------------------------------------------------
# Inner-series helpers (shifted coefficient sums evaluated at T)
# ---------------------------------------------------------------------------

def _shift_detail(g: PowerSeries, shift: int, weighted: bool, s: float,
                  tolerance: float, max_terms: int) -> tuple[int, float, bool]:
    """Truncation detail for ``sum_m w_m a_(m+shift) s^m`` with w_m = m+1 or 1."""
    cap = g.coeff_cap - shift
    if cap < 0:
        raise SeriesError(f"coefficient cap {g.coeff_cap} too small for shift {shift}")
    limit = min(max_terms, cap)
    if weighted:
        term = lambda m: (m + 1) * abs(g.coefficient(m + shift)) * s**m
    else:
        term = lambda m: abs(g.coefficient(m + shift)) * s**m
    return _detail_from_terms(term, tolerance, limit, min(limit + _SCAN_MARGIN, cap))


def _shift_vector(g: PowerSeries, shift: int, weighted: bool, count: int) -> np.ndarray:
    dtype = np.complex128 if g.complex_coefficients else np.float64
    vec = np.array([g.coefficient(m + shift) for m in range(count)], dtype=dtype)
    if weighted:
        vec = vec * (np.arange(count, dtype=np.float64) + 1.0)
    return vec


# ---------------------------------------------------------------------------
# The four differential algorithms
# ---------------------------------------------------------------------------

def frechet_direct(g: PowerSeries, t: MatrixElement, h: MatrixElement,
                   policy: TruncationPolicy = DEFAULT_POLICY) -> DifferentialResult:
    """Differential as the termwise sum ``sum_{n=1..N} a_n u_n(T, h)``.

    N comes from the first-derivative majorant ``sum_{n>N} n |a_n| s^(n-1)``.
    The monomial differentials are accumulated with the recurrence
    ``u_(n+1)(T, h) = T u_n(T, h) + h T^n`` (two products per term).
    """
    ta, ha = _check_pair(t, h)
    s = algebra_norm(t)
    n_stop, tail, cap_hit = _truncation_detail(g, s, policy.tolerance, policy.max_terms,
                                               BoundKind.FIRST_DERIVATIVE)
    field = _out_field(g, t)
    ta = ta.astype(field.dtype, copy=False)
    ha = ha.astype(field.dtype, copy=False)
    acc = np.zeros_like(ta)
    if n_stop >= 1:
        u = ha
        acc = acc + g.coefficient(1) * u
        tpow = np.eye(ta.shape[0], dtype=ta.dtype)
        for n in range(2, n_stop + 1):
            tpow = tpow @ ta
            u = ta @ u + ha @ tpow
            acc = acc + g.coefficient(n) * u
    diag = EvalDiagnostics(terms_used=n_stop, tail_bound=tail, ball_radius_used=s,
                           within_radius=True, cap_hit=cap_hit)
    return DifferentialResult(MatrixElement(acc, field), Algorithm.DIRECT, diag)


def frechet_commutant(g: PowerSeries, t: MatrixElement, h: MatrixElement,
                      policy: TruncationPolicy = DEFAULT_POLICY) -> DifferentialResult:
    """Differential in the single-commutant form.

    ``g'(T)(h) = h g'(T) - sum_{p=0..P} T^p (hT - Th) G_p(T)`` with
    ``G_p(T) = sum_m (m+1) a_(m+p+2) T^m``.  The outer sum is cut at
    ``P = N - 2`` where N satisfies the second-order majorant
    ``sum_{n>N} n (n-1) |a_n| s^(n-1) < tol``; each ``G_p`` is cut by the
    value bound of its own coefficient sequence.  When ``[T, h] = 0`` the
    subtrahend vanishes and only ``h g'(T)`` remains.
    """
    ta, ha = _check_pair(t, h)
    s = algebra_norm(t)
    n_so, tail, cap_hit = _truncation_detail(g, s, policy.tolerance, policy.max_terms,
                                             BoundKind.SECOND_ORDER)
    field = _out_field(g, t)
    ta = ta.astype(field.dtype, copy=False)
    ha = ha.astype(field.dtype, copy=False)

    m_d, _tail_d, cap_d = _shift_detail(g, 1, True, s, policy.tolerance, policy.max_terms)
    p_stop = n_so - 2
    inner: list[tuple[int, bool]] = []
    for p in range(0, p_stop + 1):
        m_p, _tp, cap_p = _shift_detail(g, p + 2, True, s, policy.tolerance, policy.max_terms)
        inner.append((m_p, cap_p))
    max_pow = max([m_d, p_stop] + [m for m, _ in inner]) if inner else m_d
    stack = np.stack(_powers(ta, max(max_pow, 0)))

    gprime = np.tensordot(_shift_vector(g, 1, True, m_d + 1), stack[: m_d + 1], axes=1)
    acc = ha @ gprime
    inner_caps = cap_d
    if p_stop >= 0:
        bracket = ha @ ta - ta @ ha
        for p, (m_p, cap_p) in enumerate(inner):
            g_p = np.tensordot(_shift_vector(g, p + 2, True, m_p + 1), stack[: m_p + 1], axes=1)
            acc = acc - stack[p] @ bracket @ g_p
            inner_caps = inner_caps or cap_p
    inner_used = max([m_d] + [m for m, _ in inner]) if inner else m_d
    diag = EvalDiagnostics(terms_used=n_so, tail_bound=tail, ball_radius_used=s,
                           within_radius=True, cap_hit=cap_hit or inner_caps,
                           inner_terms_used=inner_used)
    return DifferentialResult(MatrixElement(acc, field), Algorithm.COMMUTANT_FORM, diag)


def frechet_power_commutant(g: PowerSeries, t: MatrixElement, h: MatrixElement,
                            policy: TruncationPolicy = DEFAULT_POLICY) -> DifferentialResult:
    """Differential in the matrix-power commutant form.

    ``g'(T)(h) = h g'(T) - sum_{k=2..K} (h T^(k-1) - T^(k-1) h) B_k(T)``
    with ``B_k(T) = sum_m a_(m+k) T^m``.  K is the second-order majorant
    index; each ``B_k`` is cut by its own value bound.
    """
    ta, ha = _check_pair(t, h)
    s = algebra_norm(t)
    n_so, tail, cap_hit = _truncation_detail(g, s, policy.tolerance, policy.max_terms,
                                             BoundKind.SECOND_ORDER)
    field = _out_field(g, t)
    ta = ta.astype(field.dtype, copy=False)
    ha = ha.astype(field.dtype, copy=False)

    m_d, _tail_d, cap_d = _shift_detail(g, 1, True, s, policy.tolerance, policy.max_terms)
    k_stop = n_so
    inner: list[tuple[int, bool]] = []
    for k in range(2, k_stop + 1):
        m_k, _tk, cap_k = _shift_detail(g, k, False, s, policy.tolerance, policy.max_terms)
        inner.append((m_k, cap_k))
    max_pow = max([m_d, k_stop - 1] + [m for m, _ in inner]) if inner else m_d
    stack = np.stack(_powers(ta, max(max_pow, 0)))

    gprime = np.tensordot(_shift_vector(g, 1, True, m_d + 1), stack[: m_d + 1], axes=1)
    acc = ha @ gprime
    inner_caps = cap_d
    for k, (m_k, cap_k) in zip(range(2, k_stop + 1), inner):
        b_k = np.tensordot(_shift_vector(g, k, False, m_k + 1), stack[: m_k + 1], axes=1)
        acc = acc - (ha @ stack[k - 1] - stack[k - 1] @ ha) @ b_k
        inner_caps = inner_caps or cap_k
    inner_used = max([m_d] + [m for m, _ in inner]) if inner else m_d
    diag = EvalDiagnostics(terms_used=n_so, tail_bound=tail, ball_radius_used=s,
                           within_radius=True, cap_hit=cap_hit or inner_caps,
                           inner_terms_used=inner_used)
    return DifferentialResult(MatrixElement(acc, field), Algorithm.POWER_COMMUTANT_FORM, diag)


def _binom_scale(p: int, s: float, count: int) -> np.ndarray:
    """``binom(m+p, p) * s^(m+p-1)`` for m = 0..count-1, overflow hardened."""
    m = np.arange(1, count, dtype=np.float64)
    scale = s ** (p - 1)
    with np.errstate(over="ignore", invalid="ignore"):
        grow = np.cumprod((m + p) / m * s) if count > 1 else np.empty(0)
        base = np.concatenate(([1.0], grow)) * scale
    if np.all(np.isfinite(base)):
        return base
    # rare fallback (huge norms of entire series): log-space, vectorized lgamma
    lg = math.lgamma
    logs = np.array([lg(mm + p + 1) - lg(p + 1) - lg(mm + 1) for mm in range(count)])
    return np.exp(logs + (np.arange(count) + p - 1) * math.log(s))


def frechet_derivative_series(g: PowerSeries, t: MatrixElement, h: MatrixElement,
                              policy: TruncationPolicy = DEFAULT_POLICY) -> DifferentialResult:
    """Differential as the nested-commutant derivative expansion.

    ``g'(T)(h) = sum_{p=1..P} (1/p!) g^(p)(T) K_(p-1)`` with ``K_0 = h``
    and ``K_j = K_(j-1) T - T K_(j-1)``.  Requires ``norm(T) < R/3``
    strictly; otherwise :class:`OutsideDerivativeBallError` is raised (the
    series may diverge there, so no extrapolation is attempted; see
    :func:`derivative_series_growth` for a diagnostic probe).

    Expanding ``(1/p!) g^(p)(T) = sum_m binom(m+p, p) a_(m+p) T^m`` turns
    the whole expression into a double sum over ``(p, m)``; it is truncated
    jointly over ``m + p <= N`` with N from the ``THREE_S`` majorant, which
    dominates everything discarded.
    """
    ta, ha = _check_pair(t, h)
    s = algebra_norm(t)
    n_stop, tail, cap_hit = _truncation_detail(g, s, policy.tolerance, policy.max_terms,
                                               BoundKind.THREE_S)
    field = _out_field(g, t)
    ta = ta.astype(field.dtype, copy=False)
    ha = ha.astype(field.dtype, copy=False)

    diag = EvalDiagnostics(terms_used=n_stop, tail_bound=tail, ball_radius_used=s,
                           within_radius=True, cap_hit=cap_hit,
                           inner_terms_used=max(n_stop - 1, 0))
    if n_stop == 0:
        return DifferentialResult(MatrixElement(np.zeros_like(ta), field),
                                  Algorithm.DERIVATIVE_SERIES_FORM, diag)
    if s == 0.0:
        # T is the zero matrix: only the p = 1 term survives.
        return DifferentialResult(MatrixElement(g.coefficient(1) * ha, field),
                                  Algorithm.DERIVATIVE_SERIES_FORM, diag)

    alphas = g.coefficients(n_stop + 1)
    unit = ta / s
    stack = np.stack(_powers(unit, n_stop - 1))
    acc = np.zeros_like(ta)
    nested = ha  # C(T/s)^(p-1) applied to h
    for p in range(1, n_stop + 1):
        m_count = n_stop - p + 1
        weights = _binom_scale(p, s, m_count) * alphas[p: p + m_count]
        deriv_p = np.tensordot(weights, stack[:m_count], axes=1)
        acc = acc + deriv_p @ nested
        if p < n_stop:
            nested = nested @ unit - unit @ nested
    return DifferentialResult(MatrixElement(acc, field),
                              Algorithm.DERIVATIVE_SERIES_FORM, diag)


_ALGORITHMS: dict[Algorithm, Callable] = {
    Algorithm.DIRECT: frechet_direct,
    Algorithm.COMMUTANT_FORM: frechet_commutant,
    Algorithm.POWER_COMMUTANT_FORM: frechet_power_commutant,
    Algorithm.DERIVATIVE_SERIES_FORM: frechet_derivative_series,
}


def frechet_compare(g: PowerSeries, t: MatrixElement, h: MatrixElement,
                    policy: TruncationPolicy = DEFAULT_POLICY) -> CompareReport:
    """Run every applicable algorithm and report pairwise relative differences.

    The direct, commutant and power-commutant forms always run (they
    converge on the whole ball ``norm(T) < R``); the derivative-series form
    runs only for ``norm(T) < R/3`` and is otherwise listed as skipped with
    the reason.
    """
    s = algebra_norm(t)
    if not s < g.radius:
        raise OutsideRadiusError(
            f"norm {s:.6g} is not inside the radius of convergence {g.radius:.6g}"
        )
    results = [
        frechet_direct(g, t, h, policy),
        frechet_commutant(g, t, h, policy),
        frechet_power_commutant(g, t, h, policy),
    ]
    skipped = []
    if s < g.radius / 3.0:
        results.append(frechet_derivative_series(g, t, h, policy))
    else:
        skipped.append(SkipRecord(
            Algorithm.DERIVATIVE_SERIES_FORM,
            f"norm(T) = {s:.6g} is not below R/3 = {g.radius / 3.0:.6g}; the "
            "nested-commutant derivative expansion is only guaranteed to "
            "converge inside that ball and may diverge outside it",
        ))
    pairwise = []
    worst = 0.0
    for i in range(len(results)):
        for j in range(i + 1, len(results)):
            d = relative_difference(results[i].value, results[j].value)
            pairwise.append(PairwiseDifference(results[i].algorithm,
                                               results[j].algorithm, d))
            worst = max(worst, d)
    return CompareReport(tuple(results), tuple(skipped), tuple(pairwise), worst)


def derivative_series_growth(g: PowerSeries, t: MatrixElement, h: MatrixElement,
                             max_p: int = 40,
                             policy: TruncationPolicy = DEFAULT_POLICY) -> list[float]:
    """Diagnostic: partial-sum norms of the derivative expansion, no R/3 guard.

    For ``R/3 <= norm(T) < R`` the expansion may diverge; this probe
    evaluates the partial sums anyway (each ``g^(p)(T)`` still converges
    for ``norm(T) < R``) so callers can inspect growth.  Off the normal
    code path on purpose; :func:`frechet_derivative_series` never calls it.
    """
    ta, ha = _check_pair(t, h)
    s = algebra_norm(t)
    if not s < g.radius:
        raise OutsideRadiusError(
            f"norm {s:.6g} is not inside the radius of convergence {g.radius:.6g}"
        )
    acc = np.zeros_like(ta.astype(_out_field(g, t).dtype, copy=False))
    nested = ha.astype(acc.dtype, copy=False)
    norms = []
    fact = 1.0
    for p in range(1, max_p + 1):
        fact *= p
        deriv_p, _diag = eval_matrix(derivative_series(g, p), t, policy)
        acc = acc + (deriv_p.entries / fact) @ nested
        norms.append(float(np.linalg.norm(acc)))
        nested = nested @ ta - ta @ nested
    return norms


# ---------------------------------------------------------------------------
# Curves and the integral identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixCurve:
    """Parametric path ``t -> T(t)`` on an open interval.

    ``derivative_at`` may be omitted, in which case the derivative is the
    central finite difference of ``value_at`` with step
    ``max(1e-6, 1e-8 * (1 + |t|))``; an analytic rule always wins when
    available (see :func:`polynomial_curve`).
    """

    value_at: Callable[[float], MatrixElement]
    derivative_at: Callable[[float], MatrixElement] | None = None
    domain: tuple[float, float] = (-math.inf, math.inf)

    def contains(self, t: float) -> bool:
        lo, hi = self.domain
        return lo < t < hi

    def value(self, t: float) -> MatrixElement:
        if not self.contains(t):
            raise CurveDomainError(f"t = {t!r} outside the open domain {self.domain}")
        return self.value_at(t)

    def derivative(self, t: float) -> MatrixElement:
        if not self.contains(t):
            raise CurveDomainError(f"t = {t!r} outside the open domain {self.domain}")
        if self.derivative_at is not None:
            return self.derivative_at(t)
        step = max(1e-6, 1e-8 * (1.0 + abs(t)))
        plus = self.value_at(t + step)
        minus = self.value_at(t - step)
        return MatrixElement((plus.entries - minus.entries) / (2.0 * step), plus.field)


def polynomial_curve(coefficients: list[MatrixElement],
                     domain: tuple[float, float] = (-math.inf, math.inf)) -> MatrixCurve:
    """Curve ``T(t) = sum_i t^i A_i`` with its exact derivative rule."""
    if not coefficients:
        raise ValueError("a polynomial curve needs at least one coefficient matrix")
    first = coefficients[0]
    for c in coefficients[1:]:
        if c.dim != first.dim:
            raise DimensionMismatchError("curve coefficient matrices must share a dimension")
        if c.field is not first.field:
            raise FieldMismatchError("curve coefficient matrices must share a field")
    arrs = [c.entries for c in coefficients]
    field = first.field

    def value_at(t: float) -> MatrixElement:
        acc = arrs[-1]
        for a in reversed(arrs[:-1]):
            acc = acc * t + a
        return MatrixElement(acc, field)

    def derivative_at(t: float) -> MatrixElement:
        if len(arrs) == 1:
            return MatrixElement(np.zeros_like(arrs[0]), field)
        acc = len(arrs[1:]) * arrs[-1]
        for i in range(len(arrs) - 2, 0, -1):
            acc = acc * t + i * arrs[i]
        return MatrixElement(acc, field)

    return MatrixCurve(value_at=value_at, derivative_at=derivative_at, domain=domain)


def curve_derivative(g: PowerSeries, curve: MatrixCurve, t: float,
                     policy: TruncationPolicy = DEFAULT_POLICY) -> MatrixElement:
    """``d/dt g(T(t)) = sum_p (1/p!) g^(p)(T(t)) C(T(t))^(p-1)(T'(t))``.

    Checked pointwise: requires ``t`` inside the curve domain and
    ``norm(T(t)) < R/3``.  When ``[T'(t), T(t)] = 0`` this reduces to
    ``g'(T(t)) T'(t)``.
    """
    value = curve.value(t)
    slope = curve.derivative(t)
    return frechet_derivative_series(g, value, slope, policy).value


def _adaptive_simpson(f: Callable[[float], np.ndarray], a: float, b: float,
                      tol: float, max_depth: int) -> np.ndarray:
    fa, fb = f(a), f(b)
    if a == b:
        return np.zeros_like(fa)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or float(np.linalg.norm(delta)) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


#: Quadrature controls for the integral identity; the integrand is analytic
#: in t, so adaptive Simpson converges fast at desk scale.
_QUAD_TOL = 1e-10
_QUAD_MAX_DEPTH = 30


def integral_identity_check(g: PowerSeries, w: MatrixElement, u1: float, u2: float,
                            policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Residual norm of ``W @ integral_{u1}^{u2} g'(t W) dt - (g(u2 W) - g(u1 W))``.

    Both endpoints must satisfy ``|u| * norm(W) < R`` (the admissible
    parameter interval for the ray ``t -> t W``).  The integral is computed
    by adaptive Simpson quadrature with absolute tolerance ``1e-10`` on the
    Frobenius norm of the local error estimate.
    """
    nw = algebra_norm(w)
    if nw == 0.0:
        raise ValueError("W must be nonzero")
    for u in (u1, u2):
        if not abs(u) * nw < g.radius:
            raise OutsideRadiusError(
                f"endpoint {u!r} leaves the admissible interval: |u| norm(W) = "
                f"{abs(u) * nw:.6g} >= R = {g.radius:.6g}"
            )
    dg = derivative_series(g, 1)

    def integrand(t: float) -> np.ndarray:
        point = MatrixElement(t * w.entries, w.field)
        return eval_matrix(dg, point, policy)[0].entries

    integral = _adaptive_simpson(integrand, u1, u2, _QUAD_TOL, _QUAD_MAX_DEPTH)
    lhs = w.entries @ integral
    hi, _ = eval_matrix(g, MatrixElement(u2 * w.entries, w.field), policy)
    lo, _ = eval_matrix(g, MatrixElement(u1 * w.entries, w.field), policy)
    rhs = hi.entries - lo.entries
    return float(np.linalg.norm(lhs - rhs))
