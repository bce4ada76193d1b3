"""Heat kernel, heat trace and the small-t heat-trace expansion.

The trace is sum_M N_M e^{-t lambda_M} with N_M = |k| + 2M + 1 and
lambda_M = N_M^2 - 1 - k^2.  Writing x0 = (1 + |k|)/2, the trace equals
2 e^{t(k^2+1)} f(4t) with f(x) = sum_M (M + x0) e^{-x (M + x0)^2}, and f has
the asymptotic series 1/(2x) + sum_r zeta(x0, -1-2r) (-x)^r / r!.
Coefficients are produced exactly, as polynomials in |k|, then evaluated.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import DomainError, SizeError
from .specialfns import (RationalPolynomial, hurwitz_zeta_neg, hurwitz_zeta_neg_poly,
                         riemann_zeta_neg)
from .spectrum import eigenvalue, multiplicity
from .su2 import GroupElement, inverse, multiply, scalarize
from .wigner import charge_diagonal

MAX_ORDER = 16


class TruncationWarning(RuntimeWarning):
    """A series hit ``max_terms`` before its term bound fell below tolerance."""


@dataclass(frozen=True)
class SeriesControl:
    tolerance: float = 1e-16
    max_terms: int = 200_000

    def __post_init__(self):
        if not self.tolerance > 0 or self.max_terms < 1:
            raise DomainError("series tolerance and max_terms must be positive")


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    terms: int
    truncated: bool


def terms_needed(bound, ctl: SeriesControl) -> tuple[int, bool]:
    """Number of leading terms after which ``bound(M)`` stays below tolerance.

    ``bound`` must be eventually decreasing; the scan stops at the first M
    where the bound is below tolerance and no longer increasing.
    """
    prev = math.inf
    for M in range(ctl.max_terms):
        b = bound(M)
        if b < ctl.tolerance and b <= prev:
            return M, False
        prev = b
    return ctl.max_terms, True


def _warn_truncated(what: str, ctl: SeriesControl):
    warnings.warn(f"{what}: max_terms={ctl.max_terms} reached before tolerance "
                  f"{ctl.tolerance:g}", TruncationWarning, stacklevel=3)


def zonal_series(k: int, weights: np.ndarray, u: GroupElement):
    """sum_M weights[M] t^{M+|k|/2}_{k/2,k/2}(u); broadcasts over ``u``."""
    if len(weights) == 0:
        return np.zeros(np.shape(u.a), dtype=complex)
    diag = charge_diagonal(k, len(weights), u)
    val = np.tensordot(np.asarray(weights), diag, axes=(0, 0))
    return scalarize(val)


def heat_kernel(k: int, t: float, g: GroupElement, g2: GroupElement,
                ctl: SeriesControl = SeriesControl()) -> SeriesResult:
    """k_t(g, g') = sum_M N_M e^{-t lambda_M} t^{M+|k|/2}_{k/2,k/2}(g g'^{-1})."""
    if not t > 0:
        raise DomainError(f"heat kernel needs t > 0, got {t}")
    n, truncated = terms_needed(lambda M: multiplicity(k, M) * math.exp(-t * eigenvalue(k, M)), ctl)
    if truncated:
        _warn_truncated("heat_kernel", ctl)
    w = np.array([multiplicity(k, M) * math.exp(-t * eigenvalue(k, M)) for M in range(n)])
    return SeriesResult(zonal_series(k, w, multiply(g, inverse(g2))), n, truncated)


def heat_kernel_explicit(k: int, t: float, g: GroupElement, g2: GroupElement, max_m: int):
    """Double-sum form sum_M e^{-t lambda} (2l+1) sum_n t_{k/2,n}(g) conj(t_{k/2,n}(g')).

    Truncated at ``max_m``; evaluated entry by entry with no addition formula.
    """
    from .wigner import RepIndex, wigner_t
    total = 0j
    for M in range(max_m + 1):
        l2 = 2 * M + abs(k)
        inner = sum(wigner_t(RepIndex(l2, k, n2), g) * np.conj(wigner_t(RepIndex(l2, k, n2), g2))
                    for n2 in range(-l2, l2 + 1, 2))
        total += math.exp(-t * eigenvalue(k, M)) * (l2 + 1) * inner
    return total


def heat_trace_direct(k: int, t: float, ctl: SeriesControl = SeriesControl()) -> float:
    if not t > 0:
        raise DomainError(f"heat trace needs t > 0, got {t}")
    n, truncated = terms_needed(lambda M: multiplicity(k, M) * math.exp(-t * eigenvalue(k, M)), ctl)
    if truncated:
        _warn_truncated("heat_trace_direct", ctl)
    return math.fsum(multiplicity(k, M) * math.exp(-t * eigenvalue(k, M)) for M in range(n))


@dataclass(frozen=True)
class TraceExpansion:
    """Coefficients of t^-1, t^0, ..., t^R in the small-t trace expansion."""

    k: int
    coefficients: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 2

    def coefficient(self, power: int) -> Fraction:
        return self.coefficients[power + 1]

    def evaluate(self, t: float) -> float:
        return math.fsum(float(c) * t ** (j - 1) for j, c in enumerate(self.coefficients))


_ABS_K = RationalPolynomial((Fraction(0), Fraction(1)))


@lru_cache(maxsize=None)
def trace_coefficient_polynomials(R: int) -> tuple[RationalPolynomial, ...]:
    """Exact coefficients of t^-1..t^R as polynomials in K = |k|.

    Cauchy product of e^{t(K^2+1)} with 2(1/(8t) + sum_j zeta(x0, -1-2j)(-4t)^j/j!),
    x0 = (1+K)/2.
    """
    if R > MAX_ORDER:
        raise SizeError(f"expansion order {R} exceeds maximum {MAX_ORDER}")
    shift = _ABS_K * _ABS_K + 1
    offset = (_ABS_K + 1) * Fraction(1, 2)
    zetas = [hurwitz_zeta_neg_poly(offset, 1 + 2 * j) * Fraction((-4) ** j, math.factorial(j))
             for j in range(R + 1)]
    powers = [shift ** i * Fraction(1, math.factorial(i)) for i in range(R + 2)]
    out = [RationalPolynomial.constant(Fraction(1, 4))]
    for r in range(R + 1):
        acc = powers[r + 1] * Fraction(1, 8)
        for j in range(r + 1):
            acc = acc + powers[r - j] * zetas[j]
        out.append(acc * 2)
    return tuple(out)


def heat_trace_coefficients(k: int, R: int) -> TraceExpansion:
    polys = trace_coefficient_polynomials(R)
    ak = Fraction(abs(k))
    return TraceExpansion(k, tuple(p(ak) for p in polys))


def _exp_series(c: Fraction, n: int) -> list[Fraction]:
    """Taylor coefficients of e^{c t} up to t^(n-1)."""
    return [c ** i / math.factorial(i) for i in range(n)]


def heat_trace_coefficients_split(k: int, R: int) -> TraceExpansion:
    """Alternative route through Riemann zeta (odd k) or zeta(1/2, .) (even k).

    The shifted Hurwitz sum is rewritten as the base series at offset 1 or 1/2
    minus finitely many Gaussian terms, each expanded exactly in t.
    """
    if R > MAX_ORDER:
        raise SizeError(f"expansion order {R} exceeds maximum {MAX_ORDER}")
    ak = abs(k)
    # inner[j] = coefficient of t^(j-1) in sum_M (M+x0) e^{-4t(M+x0)^2}
    inner = [Fraction(1, 8)] + [Fraction(0)] * (R + 1)
    if ak % 2:
        base = [riemann_zeta_neg(1 + 2 * r) for r in range(R + 1)]
        removed = [Fraction(M) for M in range(1, (ak - 1) // 2 + 1)]
    else:
        base = [(Fraction(2) ** (-1 - 2 * r) - 1) * riemann_zeta_neg(1 + 2 * r) for r in range(R + 1)]
        removed = [Fraction(2 * M + 1, 2) for M in range(ak // 2)]
    for r in range(R + 1):
        inner[r + 1] += base[r] * Fraction((-4) ** r, math.factorial(r))
    for y in removed:
        for r, c in enumerate(_exp_series(-4 * y * y, R + 1)):
            inner[r + 1] -= y * c
    prefactor = [2 * c for c in _exp_series(Fraction(k * k + 1), R + 2)]
    coeffs = []
    for j in range(R + 2):
        coeffs.append(sum(prefactor[i] * inner[j - i] for i in range(j + 1)))
    return TraceExpansion(k, tuple(coeffs))


def heat_trace_asymptotic(k: int, t: float, R: int) -> float:
    if not t > 0:
        raise DomainError(f"needs t > 0, got {t}")
    return heat_trace_coefficients(k, R).evaluate(t)


def _x0(k: int) -> Fraction:
    return Fraction(1 + abs(k), 2)


def appendix_f_direct(k: int, x: float, ctl: SeriesControl = SeriesControl(), dps: int | None = None):
    """f(x) = sum_M (M + x0) e^{-x (M + x0)^2}, x0 = (1+|k|)/2.

    With ``dps`` the sum is carried in mpmath at that many digits and an
    mpf is returned; the default is double precision.
    """
    if not x > 0:
        raise DomainError(f"needs x > 0, got {x}")
    x0 = float(_x0(k))
    tol = ctl.tolerance if dps is None else min(ctl.tolerance, 10.0 ** (-dps))
    n, truncated = terms_needed(lambda M: (M + x0) * math.exp(-x * (M + x0) ** 2),
                                SeriesControl(tol, ctl.max_terms))
    if truncated:
        _warn_truncated("appendix_f_direct", ctl)
    if dps is None:
        return math.fsum((M + x0) * math.exp(-x * (M + x0) ** 2) for M in range(n))
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        x0m = mpmath.mpf(_x0(k).numerator) / _x0(k).denominator
        return +mpmath.fsum((M + x0m) * mpmath.exp(-xm * (M + x0m) ** 2) for M in range(n))


def appendix_f_coefficients(k: int, R: int) -> list[Fraction]:
    """zeta(x0, -1-2r) (-1)^r / r! for r = 0..R (coefficients of x^r)."""
    x0 = _x0(k)
    return [hurwitz_zeta_neg(x0, 1 + 2 * r) * Fraction((-1) ** r, math.factorial(r))
            for r in range(R + 1)]


def appendix_f_asymptotic(k: int, x: float, R: int, dps: int | None = None):
    """1/(2x) + sum_{r<=R} zeta(x0, -1-2r) (-x)^r / r!."""
    if not x > 0:
        raise DomainError(f"needs x > 0, got {x}")
    coeffs = appendix_f_coefficients(k, R)
    if dps is None:
        return 1 / (2 * x) + math.fsum(float(c) * x ** r for r, c in enumerate(coeffs))
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        return 1 / (2 * xm) + mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * xm ** r
                                          for r, c in enumerate(coeffs))
