"""SU(2) = S^3 arithmetic, the Euler-angle chart and the flows of K_x, K_y, K_z.

A group element is the pair (a, b) with |a|^2 + |b|^2 = 1, standing for the
matrix [[a, b], [-conj(b), conj(a)]].  Real coordinates are
a = x1 + i x2, b = x3 + i x4.  All functions broadcast: ``a`` and ``b`` may be
numpy arrays of a common shape, which is how quadrature grids are evaluated.

Euler angles follow the triple product

    diag(e^{i phi/2}, e^{-i phi/2}) . [[cos th/2, i sin th/2], [i sin th/2, cos th/2]]
        . diag(e^{i psi/2}, e^{-i psi/2}),

giving a = e^{i(phi+psi)/2} cos(theta/2) and b = i e^{i(phi-psi)/2} sin(theta/2),
with phi in [0, 2pi), psi in [-2pi, 2pi), theta in [0, pi].
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

TWO_PI = 2 * np.pi
FOUR_PI = 4 * np.pi
# |b| or |a| below this is treated as a chart-degenerate point
DEGENERATE_TOL = 1e-14


def scalarize(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


@dataclass(frozen=True, eq=False)
class GroupElement:
    a: complex
    b: complex

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        norm = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
        object.__setattr__(self, "a", scalarize(a / norm))
        object.__setattr__(self, "b", scalarize(b / norm))

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1.0, 0.0)

    @classmethod
    def from_coords(cls, x) -> "GroupElement":
        x = np.asarray(x, dtype=float)
        return cls(x[0] + 1j * x[1], x[2] + 1j * x[3])

    @classmethod
    def from_matrix(cls, m) -> "GroupElement":
        m = np.asarray(m)
        return cls(m[..., 0, 0], m[..., 0, 1])

    @property
    def shape(self) -> tuple:
        return np.shape(self.a)

    def coords(self) -> np.ndarray:
        a, b = np.asarray(self.a), np.asarray(self.b)
        return np.stack([a.real, a.imag, b.real, b.imag])

    def matrix(self) -> np.ndarray:
        a, b = np.asarray(self.a), np.asarray(self.b)
        row0 = np.stack([a, b], axis=-1)
        row1 = np.stack([-np.conj(b), np.conj(a)], axis=-1)
        return np.stack([row0, row1], axis=-2)

    def __getitem__(self, idx) -> "GroupElement":
        return GroupElement(np.asarray(self.a)[idx], np.asarray(self.b)[idx])

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __neg__(self) -> "GroupElement":
        return GroupElement(-np.asarray(self.a), -np.asarray(self.b))

    def allclose(self, other: "GroupElement", atol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.asarray(self.a) - other.a) <= atol)
                    and np.all(np.abs(np.asarray(self.b) - other.b) <= atol))

    def __repr__(self):
        return f"GroupElement(a={self.a!r}, b={self.b!r})"


@dataclass(frozen=True)
class EulerAngles:
    phi: float
    psi: float
    theta: float

    @property
    def degenerate(self):
        """True where theta is 0 or pi and only one phase combination is determined."""
        return scalarize((np.asarray(self.theta) <= 0) | (np.asarray(self.theta) >= np.pi))

    def as_tuple(self):
        return self.phi, self.psi, self.theta


class VectorField(enum.Enum):
    """K_x = D14 + D23, K_y = D31 + D24, K_z = D12 + D34 (0-based coordinate pairs)."""

    Kx = ((0, 3), (1, 2))
    Ky = ((2, 0), (1, 3))
    Kz = ((0, 1), (2, 3))


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    ga, gb = np.asarray(g.a), np.asarray(g.b)
    ha, hb = np.asarray(h.a), np.asarray(h.b)
    return GroupElement(ga * ha - gb * np.conj(hb), ga * hb + gb * np.conj(ha))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(np.conj(g.a), -np.asarray(g.b))


def from_euler(e: EulerAngles) -> GroupElement:
    phi, psi, theta = (np.asarray(v, dtype=float) for v in e.as_tuple())
    a = np.exp(0.5j * (phi + psi)) * np.cos(theta / 2)
    b = 1j * np.exp(0.5j * (phi - psi)) * np.sin(theta / 2)
    return GroupElement(a, b)


def euler(phi, psi, theta) -> GroupElement:
    return from_euler(EulerAngles(phi, psi, theta))


def _wrap_pair(phi, psi):
    """Move (phi, psi) into phi in [0, 2pi) using only lattice shifts.

    Every shift of phi is paired with the same shift of psi, so that
    half-integer phases e^{-i(m phi + n psi)} are unchanged; the explicit
    comparisons after ``mod`` catch round-off landing on an excluded endpoint.
    """
    phi = np.mod(phi, FOUR_PI)
    phi = np.where(phi >= FOUR_PI, phi - FOUR_PI, phi)
    wrap = phi >= TWO_PI
    phi = np.where(wrap, phi - TWO_PI, phi)
    psi = np.where(wrap, psi - TWO_PI, psi)
    # phi - 2pi can round back up to 2pi; step down once more along (2pi, 2pi)
    again = phi >= TWO_PI
    phi = np.where(again, 0.0, phi)
    psi = np.where(again, psi - TWO_PI, psi)
    return phi, psi


def to_euler(g: GroupElement) -> EulerAngles:
    """Invert :func:`from_euler`.

    At theta = 0 (b = 0) only phi + psi is determined and at theta = pi
    (a = 0) only phi - psi; there psi is set to 0, or to -2pi when the
    determined phase does not fit phi in [0, 2pi).
    """
    a = np.asarray(g.a, dtype=complex)
    b = np.asarray(g.b, dtype=complex)
    abs_a, abs_b = np.abs(a), np.abs(b)
    theta = 2 * np.arctan2(abs_b, abs_a)
    half_sum = np.angle(a)           # (phi + psi) / 2
    half_diff = np.angle(-1j * b)    # (phi - psi) / 2
    phi = half_sum + half_diff
    psi = half_sum - half_diff
    # lattice of ambiguity: (4pi, 0), (0, 4pi), (2pi, 2pi)
    phi, psi = _wrap_pair(phi, psi)

    at_zero = abs_b <= DEGENERATE_TOL
    at_pi = abs_a <= DEGENERATE_TOL
    s_zero = np.mod(2 * half_sum, FOUR_PI)
    s_pi = np.mod(2 * half_diff, FOUR_PI)
    s = np.where(at_zero, s_zero, s_pi)
    s = np.where(s >= FOUR_PI, 0.0, s)
    deg_phi = np.where(s >= TWO_PI, s - TWO_PI, s)
    deg_psi_mag = np.where(s >= TWO_PI, -TWO_PI, 0.0)
    deg = at_zero | at_pi
    phi = np.where(deg, deg_phi, phi)
    psi = np.where(deg, deg_psi_mag, psi)
    theta = np.where(at_zero, 0.0, np.where(at_pi, np.pi, theta))

    psi = np.mod(psi + TWO_PI, FOUR_PI) - TWO_PI
    psi = np.where(psi >= TWO_PI, psi - FOUR_PI, psi)
    return EulerAngles(scalarize(phi), scalarize(psi), scalarize(theta))


def circle_action(g: GroupElement, t) -> GroupElement:
    """Right S^1 action (a, b) u = (a u, b u) with u = e^{it}."""
    u = np.exp(1j * np.asarray(t, dtype=float))
    return GroupElement(np.asarray(g.a) * u, np.asarray(g.b) * u)


FLIP = GroupElement(0.0, 1j)  # [[0, i], [i, 0]]


def conjugate_flip(g: GroupElement) -> GroupElement:
    """F g F with F = [[0, i], [i, 0]].  Since F^2 = -I this is an involution."""
    return multiply(multiply(FLIP, g), FLIP)


def flow(g: GroupElement, field: VectorField, s) -> GroupElement:
    """Exact flow of a K field: rotation by ``s`` in both of its coordinate planes."""
    x = g.coords().astype(float)
    y = x.copy()
    c, sn = np.cos(s), np.sin(s)
    for alpha, beta in field.value:
        y[alpha] = x[alpha] * c + x[beta] * sn
        y[beta] = x[beta] * c - x[alpha] * sn
    return GroupElement.from_coords(y)


def derivative_along(f: Callable[[GroupElement], complex], g: GroupElement,
                     field: VectorField, h: float = 1e-4) -> complex:
    """Central first difference of ``f`` along the flow of ``field``."""
    return (f(flow(g, field, h)) - f(flow(g, field, -h))) / (2 * h)


def second_derivative_along(f: Callable[[GroupElement], complex], g: GroupElement,
                            field: VectorField, h: float = 1e-4) -> complex:
    if h <= 0:
        raise ValueError("step must be positive")
    return (f(flow(g, field, h)) - 2 * f(g) + f(flow(g, field, -h))) / (h * h)


def horizontal_laplacian_fd(f: Callable[[GroupElement], complex], g: GroupElement,
                            h: float = 1e-4, richardson: bool = False) -> complex:
    """-(K_x^2 + K_y^2) f at g by central differences.

    With ``richardson`` the h and h/2 stencils are combined to cancel the
    O(h^2) term.
    """
    def lap(step):
        return -(second_derivative_along(f, g, VectorField.Kx, step)
                 + second_derivative_along(f, g, VectorField.Ky, step))

    if not richardson:
        return lap(h)
    return (4 * lap(h / 2) - lap(h)) / 3


def random_elements(n: int, seed: int) -> GroupElement:
    """``n`` Haar-distributed elements (normalized Gaussian 4-vectors), as one batched element."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(4, n))
    return GroupElement.from_coords(x)
