"""Poisson kernels, Green functions G and G^#, contraction constants c_k,
Sobolev and exponential-integrability bounds.

Massive variant: G^# = (Delta^H + k^2 + 1)^{-1/2}, multiplier 1/N_M on the
orthonormal frame.  Massless variant: G = (Delta^H)^{-1/2}, multiplier
lambda_M^{-1/2}; only defined for k != 0 (k = 0 has a zero mode).
"""
from __future__ import annotations

import enum
import math
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate

from .errors import DomainError, SingularityError
from .heat import SeriesControl, SeriesResult, _warn_truncated, terms_needed, zonal_series
from .quadrature import HaarGrid
from .spectrum import Section, apply_multiplier, eigenvalue, multiplicity
from .su2 import GroupElement, conjugate_flip, inverse, multiply, scalarize, to_euler
from .wigner import charge_diagonal

SINGULAR_THETA = 1e-10
ABEL_EPSILONS = (0.01, 0.005, 0.0025, 0.00125)


class GreenVariant(enum.Enum):
    MASSIVE = "massive"    # G^#, mass^2 = k^2 + 1
    MASSLESS = "massless"  # G


def _check_variant(variant: GreenVariant, k: int):
    if variant is GreenVariant.MASSLESS and k == 0:
        raise DomainError("massless Green function is undefined for k = 0 (zero mode)")


def _rate(variant: GreenVariant, k: int, M: int) -> float:
    if variant is GreenVariant.MASSIVE:
        return float(multiplicity(k, M))
    return math.sqrt(eigenvalue(k, M))


def poisson_kernel(variant: GreenVariant, k: int, t: float, g: GroupElement, g2: GroupElement,
                   ctl: SeriesControl = SeriesControl()) -> SeriesResult:
    """Kernel of e^{-t A^{1/2}}, A = Delta^H (massless) or Delta^H + k^2 + 1 (massive)."""
    _check_variant(variant, k)
    if not t > 0:
        raise DomainError(f"Poisson kernel needs t > 0, got {t}")
    n, truncated = terms_needed(lambda M: multiplicity(k, M) * math.exp(-t * _rate(variant, k, M)), ctl)
    if truncated:
        _warn_truncated("poisson_kernel", ctl)
    w = np.array([multiplicity(k, M) * math.exp(-t * _rate(variant, k, M)) for M in range(n)])
    return SeriesResult(zonal_series(k, w, multiply(g, inverse(g2))), n, truncated)


def _green_closed_positive(k: int, u: GroupElement, check: bool):
    e = to_euler(u)
    theta = np.asarray(e.theta)
    if check and np.any(theta < SINGULAR_THETA):
        raise SingularityError("G^# evaluated at coincident points")
    s = np.sin(theta / 2)
    c = np.cos(theta / 2)
    phase = np.exp(-0.5j * k * (np.asarray(e.phi) + np.asarray(e.psi)))
    with np.errstate(divide="ignore", invalid="ignore"):
        val = phase / (2 * s) * (c / (1 + s)) ** k
    return val


def green_closed_relative(k: int, u: GroupElement, check: bool = True):
    """G^# as a function of u = g g'^{-1}.

    For k < 0 the value is (-1)^k times the |k| formula at F u F, F = [[0, i], [i, 0]]:
    t^l_{mn}(F u F) = (-1)^{2l} t^l_{-m,-n}(u), and 2l has the parity of k.
    """
    if k == 0:
        raise DomainError("G^# closed form requires k != 0 (the k = 0 series diverges)")
    if k > 0:
        val = _green_closed_positive(k, u, check)
    else:
        val = (-1) ** (-k % 2) * _green_closed_positive(-k, conjugate_flip(u), check)
    return scalarize(val)


def green_closed(k: int, g: GroupElement, g2: GroupElement, check: bool = True):
    """Closed form of G^#(g, g'); broadcasts over batched elements."""
    return green_closed_relative(k, multiply(g, inverse(g2)), check)


def green_series_abel(k: int, g: GroupElement, g2: GroupElement, epsilon: float,
                      ctl: SeriesControl = SeriesControl()) -> SeriesResult:
    """sum_M e^{-epsilon N_M} t^{M+|k|/2}_{k/2,k/2}(g g'^{-1}) at fixed epsilon."""
    if k == 0:
        raise DomainError("G^# series requires k != 0")
    if not epsilon > 0:
        raise DomainError("Abel damping must be positive")
    u = multiply(g, inverse(g2))
    if np.any(np.asarray(to_euler(u).theta) < SINGULAR_THETA):
        raise SingularityError("G^# evaluated at coincident points")
    n, truncated = terms_needed(lambda M: math.exp(-epsilon * multiplicity(k, M)), ctl)
    if truncated:
        _warn_truncated("green_series_abel", ctl)
    w = np.exp(-epsilon * (abs(k) + 1 + 2 * np.arange(n)))
    return SeriesResult(zonal_series(k, w, u), n, truncated)


def green_abel_extrapolated(k: int, g: GroupElement, g2: GroupElement,
                            epsilons=ABEL_EPSILONS, ctl: SeriesControl = SeriesControl()):
    """Richardson extrapolation epsilon -> 0 of the Abel-damped series.

    ``epsilons`` must halve successively; the damped sum is analytic in
    epsilon away from the diagonal, and each elimination round removes the
    next power of epsilon.  The radius of analyticity shrinks with the
    distance to the diagonal, which is why the default starts at 0.01.
    """
    vals = [green_series_abel(k, g, g2, eps, ctl).value for eps in epsilons]
    table = list(vals)
    for order in range(1, len(epsilons)):
        f = 2.0 ** order
        table = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
    return table[0]


def green_poisson_integral(k: int, g: GroupElement, g2: GroupElement, n_nodes: int = 60,
                           t_min: float = 1e-4, t_max: float | None = None,
                           tolerance: float = 1e-17):
    """G^# as the time integral of the massive Poisson kernel.

    Gauss-Legendre in s = ln t on [ln t_min, ln t_max]; the integrand t h_t
    vanishes like t^2 at the lower end away from the diagonal and decays like
    e^{-t(|k|+1)} at the upper end.
    """
    if k == 0:
        raise DomainError("G^# requires k != 0")
    ak = abs(k)
    if t_max is None:
        t_max = 45.0 / (ak + 1)
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    lo, hi = math.log(t_min), math.log(t_max)
    s = (hi - lo) / 2 * x + (hi + lo) / 2
    t = np.exp(s)
    w = w * (hi - lo) / 2 * t
    u = multiply(g, inverse(g2))
    # enough levels for the smallest t node
    n_levels = int(math.ceil((-math.log(tolerance) / t.min() - ak - 1) / 2)) + 1
    diag = charge_diagonal(k, n_levels, u)
    N = ak + 1 + 2 * np.arange(n_levels)
    weights = np.exp(-np.outer(t, N)) * N          # (nodes, levels)
    h = weights @ diag.reshape(n_levels, -1)        # (nodes, points)
    val = (w @ h).reshape(np.shape(u.a))
    return scalarize(val)


def green_apply(variant: GreenVariant, s: Section) -> Section:
    _check_variant(variant, s.k)
    if variant is GreenVariant.MASSIVE:
        return apply_multiplier(s, lambda M: 1.0 / multiplicity(s.k, M))
    return apply_multiplier(s, lambda M: eigenvalue(s.k, M) ** -0.5)


def green_apply_quadrature(k: int, f, g: GroupElement, grid: HaarGrid):
    """Integral of G^#(g, g') f(g') dg' on a grid.

    The grid is laid over u = g g'^{-1} (so g' = u^{-1} g), which by Haar
    invariance leaves the integral unchanged and puts the integrable
    singularity at theta = 0, where a ``"theta"`` rule resolves it.
    """
    kernel = green_closed_relative(k, grid.elements)
    gprime = multiply(inverse(grid.elements), g)
    values = kernel * f(gprime)
    return complex(np.dot(values, grid.weights))


def ck_closed(k: int) -> float:
    """L^1 norm of G^#(g, .) in closed form."""
    if k == 0:
        raise DomainError("c_k is defined for k != 0")
    ak = abs(k)
    if ak % 2 == 0:
        m = ak // 2
        partial = math.fsum((-1) ** (n - 1) / n for n in range(1, m))
        return 2 * m * abs(math.log(2) - partial) - 1
    m = (ak - 1) // 2
    partial = math.fsum((-1) ** n / (2 * n + 1) for n in range(m))
    return 2 * (2 * m + 1) * abs(math.pi / 4 - partial) - 1


def ck_alternating(k: int) -> float:
    """c_k = 2|k| sum_n (-1)^n / (2n + |k|) - 1, summed with series acceleration."""
    if k == 0:
        raise DomainError("c_k is defined for k != 0")
    ak = abs(k)
    with mpmath.workdps(30):
        s = mpmath.nsum(lambda n: (-1) ** n / (2 * n + ak), [0, mpmath.inf])
        return float(2 * ak * s - 1)


def ck_quadrature(k: int) -> float:
    """c_k = 4 int_0^1 x^{1+|k|} / (1 + x^2)^2 dx by adaptive quadrature."""
    if k == 0:
        raise DomainError("c_k is defined for k != 0")
    ak = abs(k)
    val, _ = integrate.quad(lambda x: 4 * x ** (1 + ak) / (1 + x * x) ** 2, 0.0, 1.0,
                            epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def ck_haar(k: int, grid: HaarGrid, g: GroupElement | None = None) -> float:
    """c_k as the Haar integral of |G^#(g, g')| over g', for a given base point g."""
    if k == 0:
        raise DomainError("c_k is defined for k != 0")
    g = GroupElement.identity() if g is None else g
    gprime = multiply(inverse(grid.elements), g)
    vals = np.abs(green_closed(k, g, gprime))
    return float(np.dot(vals, grid.weights))


def ck_bounds(k: int) -> tuple[float, float]:
    """(1/(1+|k|), 1/|k|): c_k lies in [lower, upper)."""
    ak = abs(k)
    return 1.0 / (1 + ak), 1.0 / ak


def sobolev_bound(k: int, p: float, variant: GreenVariant) -> float:
    """Upper bound on ||G f||_p^p (massless) or ||G^# f||_p^p (massive) for ||f||_2 = 1."""
    if k == 0:
        raise DomainError("Sobolev bounds need k != 0")
    if not p > 2:
        raise DomainError(f"Sobolev bounds need p > 2, got {p}")
    ak = abs(k)
    e = (p - 2) / 2
    if variant is GreenVariant.MASSLESS:
        return ak ** (-1 / 3) * (1 + 2 ** ((1 - p) / (p - 2)) * (p - 2)) ** e
    return ((p - 2) / 2) ** e / ak


def b_m(k: int, M: int) -> float:
    """eigenvalue / (|k| + 2M + 1) = N - (k^2 + 1)/N."""
    return eigenvalue(k, M) / multiplicity(k, M)


def b_m_lower(k: int, M: int) -> float:
    ak = abs(k)
    return 2 * M + 1 + (ak - 1) / (ak + 1)


def log_constant_terms(variant: GreenVariant, n_max: int = 60) -> list[float]:
    """Terms n = 3..n_max of the exponential-bound series."""
    out = []
    for n in range(3, n_max + 1):
        if variant is GreenVariant.MASSLESS:
            base = (1 + 2 ** ((1 - n) / (n - 2)) * (n - 2)) ** ((n - 2) / 2)
        else:
            base = ((n - 2) / 2) ** ((n - 2) / 2)
        out.append(math.exp(math.log(base) - math.lgamma(n + 1)))
    return out


@lru_cache(maxsize=None)
def _log_tail(variant: GreenVariant) -> float:
    terms = log_constant_terms(variant, 200)
    return math.fsum(terms)


def log_constant(k: int, variant: GreenVariant) -> float:
    """C (massless, independent of k) or C^# (massive) of the exponential bounds."""
    if k == 0:
        raise DomainError("exponential bounds need k != 0")
    if variant is GreenVariant.MASSLESS:
        return 1 + _log_tail(variant)
    return ck_closed(k) + 1 / (8 * k * k) + _log_tail(variant)


def log_bound(k: int, variant: GreenVariant) -> float:
    """Right-hand side |k|^{-1/3} C or |k|^{-1} C^#."""
    ak = abs(k)
    if variant is GreenVariant.MASSLESS:
        return ak ** (-1 / 3) * log_constant(k, variant)
    return log_constant(k, variant) / ak
