"""Product quadrature for normalized Haar measure on SU(2).

dg = sin(theta) dtheta dphi dpsi / (16 pi^2) over phi in [0, 2pi),
psi in [-2pi, 2pi), theta in [0, pi].  The phi and psi rules are uniform
(exact for trigonometric polynomials of degree below the node count).  In
theta two Gauss-Legendre rules are available:

``"cos"``    nodes in z = cos(theta); exact for polynomials in z of degree
             < 2 n_theta, which covers products of matrix entries.
``"theta"``  nodes in theta with the sin(theta) factor in the weights; this
             keeps integrands like sin(theta)/sin(theta/2) smooth, which is
             what the Green function needs near its singular point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .su2 import GroupElement, from_euler, EulerAngles

DEFAULT_RESOLUTION = (64, 64, 128)


@dataclass(frozen=True, eq=False)
class HaarGrid:
    elements: GroupElement
    phi: np.ndarray
    psi: np.ndarray
    theta: np.ndarray
    weights: np.ndarray
    resolution: tuple[int, int, int]
    rule: str

    @property
    def size(self) -> int:
        return self.weights.size

    def describe(self) -> str:
        nt, nf, ns = self.resolution
        return f"{nt}x{nf}x{ns}/{self.rule}"


def _theta_rule(n_theta: int, rule: str):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    if rule == "cos":
        # z = cos(theta); dz absorbs sin(theta) dtheta
        return np.arccos(x[::-1]), w[::-1]
    if rule == "theta":
        theta = (x + 1) * np.pi / 2
        return theta, w * np.sin(theta) * np.pi / 2
    raise DomainError(f"unknown theta rule {rule!r}")


def haar_grid(n_theta: int, n_phi: int, n_psi: int, rule: str = "cos") -> HaarGrid:
    if min(n_theta, n_phi, n_psi) < 1:
        raise DomainError("grid resolutions must be positive")
    theta_1d, w_theta = _theta_rule(n_theta, rule)
    phi_1d = 2 * np.pi * np.arange(n_phi) / n_phi
    psi_1d = -2 * np.pi + 4 * np.pi * np.arange(n_psi) / n_psi
    th, ph, ps = np.meshgrid(theta_1d, phi_1d, psi_1d, indexing="ij")
    w = (w_theta[:, None, None] * (2 * np.pi / n_phi) * (4 * np.pi / n_psi)
         / (16 * np.pi ** 2)) * np.ones_like(th)
    ph, ps, th, w = (v.ravel() for v in (ph, ps, th, w))
    elements = from_euler(EulerAngles(ph, ps, th))
    return HaarGrid(elements, ph, ps, th, w, (n_theta, n_phi, n_psi), rule)


def parse_resolution(text: str) -> tuple[int, int, int]:
    """'64x64x128' -> (64, 64, 128)."""
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise ValueError(f"grid must look like NthetaxNphixNpsi, got {text!r}")
    res = tuple(int(p) for p in parts)
    if min(res) < 1:
        raise ValueError("grid resolutions must be positive")
    return res


def integrate_values(values, grid: HaarGrid):
    val = np.dot(np.asarray(values).ravel(), grid.weights)
    return complex(val) if np.iscomplexobj(val) else float(val)


def integrate(f: Callable[[GroupElement], complex], grid: HaarGrid):
    """Weighted sum of ``f`` over the grid nodes; ``f`` receives the batched nodes."""
    values = np.broadcast_to(f(grid.elements), grid.weights.shape)
    return integrate_values(values, grid)


def lp_norm_values(values, p: float, grid: HaarGrid) -> float:
    if p < 1:
        raise DomainError(f"L^p norm needs p >= 1, got {p}")
    mod = np.abs(np.asarray(values)).ravel()
    return float(np.dot(mod ** p, grid.weights) ** (1.0 / p))


def lp_norm(f: Callable[[GroupElement], complex], p: float, grid: HaarGrid) -> float:
    if p < 1:
        raise DomainError(f"L^p norm needs p >= 1, got {p}")
    values = np.broadcast_to(f(grid.elements), grid.weights.shape)
    return lp_norm_values(values, p, grid)
