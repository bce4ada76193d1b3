"""Bernoulli polynomials, zeta values at negative integers, Jacobi polynomials.

Exact work uses :class:`fractions.Fraction`; Jacobi polynomials are evaluated in
floating point by the three-term recurrence.

Zeta argument order
-------------------
Throughout this package ``zeta(x, s) = sum_{n>=0} (n + x)**(-s)`` takes the
*offset first* and the exponent second, which is the reverse of the
``scipy.special.zeta(s, q)`` / mpmath ``zeta(s, a)`` order.  The continuation
to ``s = -m`` is ``-B_{m+1}(x) / (m + 1)``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Union

import numpy as np

from .errors import DomainError, SizeError

Rational = Fraction
RationalLike = Union[int, Fraction]

MAX_BERNOULLI_DEGREE = 64


def _trim(coeffs: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out) if out else (Fraction(0),)


@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial with exact rational coefficients, stored lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def constant(cls, c: RationalLike) -> "RationalPolynomial":
        return cls((Fraction(c),))

    @classmethod
    def monomial(cls, degree: int, c: RationalLike = 1) -> "RationalPolynomial":
        return cls((Fraction(0),) * degree + (Fraction(c),))

    @property
    def degree(self) -> int:
        return 0 if self.is_zero() else len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def coefficient(self, j: int) -> Fraction:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> "RationalPolynomial":
        if isinstance(other, RationalPolynomial):
            return other
        return RationalPolynomial.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPolynomial(tuple(self.coefficient(j) + other.coefficient(j) for j in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = RationalPolynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def compose(self, inner: "RationalPolynomial") -> "RationalPolynomial":
        """Return ``self(inner(x))`` (Horner in polynomial arithmetic)."""
        acc = RationalPolynomial.constant(0)
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial(tuple(j * c for j, c in enumerate(self.coeffs))[1:] or (0,))

    def antiderivative(self) -> "RationalPolynomial":
        return RationalPolynomial((Fraction(0),) + tuple(c / (j + 1) for j, c in enumerate(self.coeffs)))

    def shift(self, h: RationalLike) -> "RationalPolynomial":
        """``x -> p(x + h)``."""
        return self.compose(RationalPolynomial((Fraction(h), Fraction(1))))

    def even_part_in_square(self) -> "RationalPolynomial":
        """Rewrite an even polynomial p(x) as q(x^2); raises if odd terms are present."""
        if any(c != 0 for c in self.coeffs[1::2]):
            raise ValueError("polynomial has odd-degree terms")
        return RationalPolynomial(self.coeffs[0::2])

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial.constant(other)
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*k^{j}" for j, c in enumerate(self.coeffs) if c != 0]
        return "RationalPolynomial(" + (" + ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class BernoulliPolynomial:
    """B_n(x) with coefficients listed in ascending powers of x."""

    degree: int
    coefficients: tuple[Fraction, ...]

    def __call__(self, x: RationalLike):
        return self.as_polynomial()(Fraction(x) if isinstance(x, int) else x)

    def as_polynomial(self) -> RationalPolynomial:
        return RationalPolynomial(self.coefficients)


_bernoulli_lock = threading.Lock()
_bernoulli_cache: dict[int, RationalPolynomial] = {0: RationalPolynomial.constant(1)}


def bernoulli_polynomial(n: int, max_degree: int = MAX_BERNOULLI_DEGREE) -> BernoulliPolynomial:
    """Exact Bernoulli polynomial B_n.

    Built upward by B_n' = n B_{n-1} with the integration constant fixed by
    the zero-mean condition on [0, 1].
    """
    if n < 0:
        raise DomainError(f"Bernoulli index must be nonnegative, got {n}")
    if n > max_degree:
        raise SizeError(f"Bernoulli degree {n} exceeds maximum {max_degree}")
    with _bernoulli_lock:
        top = max(_bernoulli_cache)
        while top < n:
            prim = (_bernoulli_cache[top] * (top + 1)).antiderivative()
            mean = prim.antiderivative()(Fraction(1))
            top += 1
            _bernoulli_cache[top] = prim - mean
        poly = _bernoulli_cache[n]
    coeffs = tuple(poly.coefficient(j) for j in range(n + 1))
    return BernoulliPolynomial(n, coeffs)


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("exact zeta values need an int or Fraction offset")
    return Fraction(x)


def hurwitz_zeta_neg(x: RationalLike, m: int) -> Fraction:
    """Continued Hurwitz zeta ``zeta(x, -m)`` for offset ``x > 0`` (offset first)."""
    x = _as_fraction(x)
    if x <= 0:
        raise DomainError(f"Hurwitz offset must be positive, got {x}")
    if m < 0:
        raise DomainError("only nonpositive integer exponents are supported")
    return -bernoulli_polynomial(m + 1)(x) / (m + 1)


def hurwitz_zeta_neg_poly(offset: RationalPolynomial, m: int) -> RationalPolynomial:
    """``zeta(offset(k), -m)`` as an exact polynomial in the variable of ``offset``.

    Valid wherever ``offset(k) > 0``; the positivity is the caller's responsibility.
    """
    return bernoulli_polynomial(m + 1).as_polynomial().compose(offset) * Fraction(-1, m + 1)


def riemann_zeta_neg(m: int) -> Fraction:
    """Riemann zeta at ``-m``, i.e. ``zeta(1, -m)``."""
    return hurwitz_zeta_neg(1, m)


def bernoulli_number(n: int) -> Fraction:
    """B_n = B_n(0)."""
    return bernoulli_polynomial(n)(Fraction(0))


def binomial_bernoulli(n: int, x: RationalLike) -> Fraction:
    """B_n(x) = sum_j C(n, j) B_j x^(n-j), with B_j from the number recurrence.

    Independent of :func:`bernoulli_polynomial`; kept as a cross-check.
    """
    x = Fraction(x)
    numbers = [Fraction(1)]
    for j in range(1, n + 1):
        numbers.append(-sum(comb(j + 1, i) * numbers[i] for i in range(j)) / (j + 1))
    return sum(comb(n, j) * numbers[j] * x ** (n - j) for j in range(n + 1))


def jacobi_sequence(nmax: int, alpha: float, beta: float, z) -> np.ndarray:
    """Values P_n^(alpha, beta)(z) for n = 0..nmax, stacked along axis 0."""
    z = np.asarray(z, dtype=float)
    out = np.empty((nmax + 1,) + z.shape)
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = (alpha + 1) + (alpha + beta + 2) * (z - 1) / 2
    ab = alpha + beta
    a2b2 = alpha * alpha - beta * beta
    for n in range(2, nmax + 1):
        c = 2 * n + ab
        lead = 2 * n * (n + ab) * (c - 2)
        mid = (c - 1) * (c * (c - 2) * z + a2b2)
        back = 2 * (n + alpha - 1) * (n + beta - 1) * c
        out[n] = (mid * out[n - 1] - back * out[n - 2]) / lead
    return out


def jacobi_polynomial(n: int, alpha: float, beta: float, z):
    """P_n^(alpha, beta)(z) by the three-term recurrence; broadcasts over ``z``."""
    if n < 0:
        raise DomainError("Jacobi degree must be nonnegative")
    if alpha <= -1 or beta <= -1:
        raise DomainError("Jacobi parameters must exceed -1")
    val = jacobi_sequence(n, alpha, beta, z)[n]
    return float(val) if val.ndim == 0 else val


def jacobi_generating_function(alpha: float, beta: float, z: float, r):
    """sum_n P_n^(alpha, beta)(z) r^n in closed form, for |r| < 1."""
    r = np.asarray(r)
    r = r.astype(np.result_type(r, float))
    big_r = np.sqrt(1 - 2 * z * r + r * r)
    return 2.0 ** (alpha + beta) / big_r * (1 - r + big_r) ** (-alpha) * (1 + r + big_r) ** (-beta)


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"
