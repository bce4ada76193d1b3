"""Matrix entries t^l_{mn} of the irreducible unitary representations of SU(2).

Half-integers are carried doubled: ``RepIndex(l2, m2, n2)`` stands for
(l, m, n) = (l2/2, m2/2, n2/2).  Two independent evaluations exist:

* :func:`wigner_t_homogeneous` differentiates the homogeneous polynomial
  (a x - conj b)^(l-n) (b x + conj a)^(l+n) at x = 0 by coefficient extraction;
* :func:`wigner_t` uses Euler angles, t = e^{-i(m phi + n psi)} P^l_{mn}(cos theta),
  with P written through a Jacobi polynomial.

Matrices from :func:`t_matrix` are indexed by m, n ascending from -l to l.
With this ordering t^{1/2}(g) is the defining 2x2 matrix of g.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, lgamma, sqrt

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, SizeError
from .specialfns import jacobi_sequence
from .su2 import GroupElement, scalarize, to_euler

HOMOGENEOUS_MAX_L2 = 24
T_MATRIX_MAX_DIM = 201
# reference abscissa for pinning the Jacobi-form constant
_PIN_Z = 0.2718281828459045


@dataclass(frozen=True)
class RepIndex:
    l2: int
    m2: int
    n2: int

    def __post_init__(self):
        l2, m2, n2 = self.l2, self.m2, self.n2
        if l2 < 0 or abs(m2) > l2 or abs(n2) > l2 or (l2 + m2) % 2 or (l2 + n2) % 2:
            raise DomainError(f"invalid representation index (2l, 2m, 2n) = {(l2, m2, n2)}")

    @classmethod
    def from_halves(cls, l, m, n) -> "RepIndex":
        def doubled(v):
            q = Fraction(v) * 2
            if q.denominator != 1:
                raise DomainError(f"{v} is not a multiple of 1/2")
            return int(q)
        return cls(doubled(l), doubled(m), doubled(n))

    @property
    def l(self) -> Fraction:
        return Fraction(self.l2, 2)

    @property
    def m(self) -> Fraction:
        return Fraction(self.m2, 2)

    @property
    def n(self) -> Fraction:
        return Fraction(self.n2, 2)


def _i_power(e: int) -> complex:
    return (1, 1j, -1, -1j)[e % 4]


def _halves(z, halves=None):
    """(sin^2(theta/2), cos^2(theta/2)), from z = cos(theta) unless given directly.

    Passing |b|^2 and |a|^2 avoids the cancellation in (1 +- z)/2 near the
    poles, where half-integer powers would amplify it to ~1e-8.
    """
    if halves is not None:
        return np.asarray(halves[0], dtype=float), np.asarray(halves[1], dtype=float)
    return np.clip((1 - z) / 2, 0.0, None), np.clip((1 + z) / 2, 0.0, None)


def _shape_factor(l2, m2, n2, z, halves=None):
    """sin(th/2)^(m-n) cos(th/2)^(m+n) P_{l-m}^{(m-n, m+n)}(z), for m >= |n|."""
    deg = (l2 - m2) // 2
    alpha = (m2 - n2) // 2
    beta = (m2 + n2) // 2
    jac = jacobi_sequence(deg, alpha, beta, z)[deg]
    half_minus, half_plus = _halves(z, halves)
    return half_minus ** (alpha / 2) * half_plus ** (beta / 2) * jac


def _log_ratio(l2, m2, n2):
    # log sqrt((l-m)! (l+m)! / ((l-n)! (l+n)!))
    return 0.5 * (lgamma((l2 - m2) / 2 + 1) + lgamma((l2 + m2) / 2 + 1)
                  - lgamma((l2 - n2) / 2 + 1) - lgamma((l2 + n2) / 2 + 1))


def jacobi_constant(idx: RepIndex) -> complex:
    """Constant c with P^l_{mn}(z) = c * _shape_factor(z), for m >= |n|.

    Equals i^(m-n) sqrt((l-m)!(l+m)!/((l-n)!(l+n)!)), the 2^(-m) being folded
    into the half-angle powers of the shape factor.
    """
    l2, m2, n2 = idx.l2, idx.m2, idx.n2
    if m2 < abs(n2):
        raise DomainError("constant is only defined on the reduced range m >= |n|")
    return _i_power((m2 - n2) // 2) * np.exp(_log_ratio(l2, m2, n2))


_pin_lock = threading.Lock()
_pinned: dict[tuple[int, int, int], complex] = {}


def pinned_constant(idx: RepIndex) -> complex:
    """The Jacobi-form constant fixed numerically against the homogeneous formula.

    Computed once per index at a reference point (theta = arccos z0, phi = psi = 0)
    and cached; only available within the homogeneous size guard.
    """
    key = (idx.l2, idx.m2, idx.n2)
    with _pin_lock:
        if key in _pinned:
            return _pinned[key]
    if idx.m2 < abs(idx.n2):
        raise DomainError("constant is only defined on the reduced range m >= |n|")
    from .su2 import euler

    z = _PIN_Z
    ref = wigner_t_homogeneous(idx, euler(0.0, 0.0, np.arccos(z)))
    shape = _shape_factor(idx.l2, idx.m2, idx.n2, np.asarray(z))
    value = complex(ref / shape)
    with _pin_lock:
        _pinned.setdefault(key, value)
        return _pinned[key]


def wigner_p(idx: RepIndex, z, halves=None):
    """P^l_{mn}(z) including its i-power phase; broadcasts over ``z``.

    Indices outside m >= |n| are reduced with
    P_{nm} = (-1)^(m-n) conj(P_{mn}) and P_{-m,-n} = P_{mn}.  ``halves``
    optionally supplies (sin^2(theta/2), cos^2(theta/2)) exactly.
    """
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1 + 1e-12):
        raise DomainError("wigner_p needs z in [-1, 1]")
    z = np.clip(z, -1.0, 1.0)
    l2, m2, n2 = idx.l2, idx.m2, idx.n2
    swapped = abs(n2) > abs(m2)
    if swapped:
        m2, n2 = n2, m2
    if m2 < 0:
        m2, n2 = -m2, -n2
    val = jacobi_constant(RepIndex(l2, m2, n2)) * _shape_factor(l2, m2, n2, z, halves)
    if swapped:
        # undo P_{nm} -> P_{mn}; (m-n) refers to the original index order
        val = (-1) ** (((idx.m2 - idx.n2) // 2) % 2) * np.conj(val)
    return scalarize(val)


def wigner_t_euler(idx: RepIndex, phi, psi, z, halves=None):
    """t^l_{mn} from Euler data with z = cos(theta)."""
    phase = np.exp(-0.5j * (idx.m2 * np.asarray(phi) + idx.n2 * np.asarray(psi)))
    val = phase * wigner_p(idx, z, halves)
    return scalarize(val)


def _cos_theta(g: GroupElement):
    return np.abs(g.a) ** 2 - np.abs(g.b) ** 2


def chart_data(g: GroupElement):
    """(phi, psi, z, halves) for evaluating many t^l_{mn} at the same points."""
    e = to_euler(g)
    halves = (np.abs(g.b) ** 2, np.abs(g.a) ** 2)
    return e.phi, e.psi, np.clip(_cos_theta(g), -1.0, 1.0), halves


def wigner_t(idx: RepIndex, g: GroupElement):
    return wigner_t_euler(idx, *chart_data(g))


def wigner_t_homogeneous(idx: RepIndex, g: GroupElement):
    """t^l_{mn}(g) from the homogeneous-polynomial formula.

    The (l-m)-th derivative at 0 is (l-m)! times the coefficient of x^(l-m) in
    (a x - conj b)^(l-n) (b x + conj a)^(l+n), expanded binomially.
    """
    if idx.l2 > HOMOGENEOUS_MAX_L2:
        raise SizeError(f"2l = {idx.l2} exceeds homogeneous-formula guard {HOMOGENEOUS_MAX_L2}")
    a = np.asarray(g.a, dtype=complex)
    b = np.asarray(g.b, dtype=complex)
    lm = (idx.l2 - idx.m2) // 2
    lpm = (idx.l2 + idx.m2) // 2
    p = (idx.l2 - idx.n2) // 2
    q = (idx.l2 + idx.n2) // 2
    total = np.zeros(np.broadcast(a, b).shape, dtype=complex)
    for i in range(max(0, lm - q), min(p, lm) + 1):
        j = lm - i
        total = total + (comb(p, i) * comb(q, j)
                         * a ** i * (-np.conj(b)) ** (p - i) * b ** j * np.conj(a) ** (q - j))
    norm = factorial(lm) * sqrt(factorial(lpm) / (factorial(p) * factorial(q) * factorial(lm)))
    val = norm * total
    return scalarize(val)


def wigner_p_rodrigues(idx: RepIndex, z):
    """P^l_{mn}(z) by literal differentiation of (1-z)^(l-n) (1+z)^(l+n).

    Small degrees only; exact polynomial calculus followed by the half-integer
    power prefactors.  Used as an oracle.
    """
    if idx.l2 > HOMOGENEOUS_MAX_L2:
        raise SizeError("Rodrigues route limited to small degree")
    l2, m2, n2 = idx.l2, idx.m2, idx.n2
    lm, lpm = (l2 - m2) // 2, (l2 + m2) // 2
    ln, lpn = (l2 - n2) // 2, (l2 + n2) // 2
    poly = npoly.polymul(npoly.polypow([1.0, -1.0], ln), npoly.polypow([1.0, 1.0], lpn))
    deriv = npoly.polyder(poly, lm) if lm else poly
    z = np.asarray(z, dtype=float)
    sign = -1 if ((l2 - n2) // 2) % 2 else 1
    const = sign * _i_power((n2 - m2) // 2) / 2 ** (l2 / 2) * sqrt(
        factorial(lpm) / (factorial(ln) * factorial(lpn) * factorial(lm)))
    val = (const * (1 + z) ** (-(m2 + n2) / 4) * (1 - z) ** ((n2 - m2) / 4)
           * npoly.polyval(z, deriv))
    return scalarize(val)


def t_matrix(l2: int, g: GroupElement, cap: int = T_MATRIX_MAX_DIM) -> np.ndarray:
    """Full representation matrix, shape ``g.shape + (2l+1, 2l+1)``."""
    dim = l2 + 1
    if dim > cap:
        raise SizeError(f"representation dimension {dim} exceeds cap {cap}")
    data = chart_data(g)
    out = np.empty(np.shape(data[2]) + (dim, dim), dtype=complex)
    for i, m2 in enumerate(range(-l2, l2 + 1, 2)):
        for j, n2 in enumerate(range(-l2, l2 + 1, 2)):
            out[..., i, j] = wigner_t_euler(RepIndex(l2, m2, n2), *data)
    return out


def charge_diagonal(k: int, n_levels: int, g: GroupElement) -> np.ndarray:
    """t^{M+|k|/2}_{k/2,k/2}(g) for M = 0..n_levels-1, stacked along axis 0.

    These are the zonal functions that every heat, Poisson and Green kernel
    of charge k is built from; one Jacobi recurrence yields all levels.
    """
    e = to_euler(g)
    z = np.clip(_cos_theta(g), -1.0, 1.0)
    ak = abs(k)
    jac = jacobi_sequence(max(n_levels - 1, 0), 0, ak, z)[:n_levels]
    radial = (np.abs(g.a) ** 2) ** (ak / 2) * jac
    phase = np.exp(-0.5j * k * (np.asarray(e.phi) + np.asarray(e.psi)))
    return radial * phase
