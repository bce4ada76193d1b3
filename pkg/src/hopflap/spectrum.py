"""Spectrum of the horizontal Laplacian on sections of E_k, and section objects.

Level M of charge k has l = M + |k|/2, N = 2l + 1 = |k| + 2M + 1, eigenvalue
N^2 - 1 - k^2 and eigenspace spanned by t^l_{k/2, n}, -l <= n <= l.

A :class:`Section` stores coefficients against the orthonormal frame
sqrt(2l+1) t^l_{k/2,n}, so its L^2 norm is the Euclidean norm of the
coefficients.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DomainError
from .su2 import GroupElement, scalarize
from .wigner import RepIndex, chart_data, wigner_t_euler

DEFAULT_MAX_M = 32


def eigenvalue(k: int, M: int) -> int:
    if M < 0:
        raise DomainError("level index M must be nonnegative")
    ak = abs(k)
    return 4 * M * M + 4 * (1 + ak) * M + 2 * ak


def eigenvalue_from_dimension(k: int, M: int) -> int:
    N = abs(k) + 1 + 2 * M
    return N * N - 1 - k * k


def multiplicity(k: int, M: int) -> int:
    if M < 0:
        raise DomainError("level index M must be nonnegative")
    return 2 * M + 1 + abs(k)


@dataclass(frozen=True)
class SpectralLevel:
    k: int
    M: int

    @property
    def l2(self) -> int:
        return 2 * self.M + abs(self.k)

    @property
    def l(self) -> Fraction:
        return Fraction(self.l2, 2)

    @property
    def N(self) -> int:
        return self.l2 + 1

    @property
    def eigenvalue(self) -> int:
        return eigenvalue(self.k, self.M)

    @property
    def multiplicity(self) -> int:
        return multiplicity(self.k, self.M)

    def n2_values(self) -> range:
        return range(-self.l2, self.l2 + 1, 2)


def enumerate_levels(k: int, max_m: int) -> list[SpectralLevel]:
    return [SpectralLevel(k, M) for M in range(max_m + 1)]


@dataclass(frozen=True, eq=False)
class Section:
    """Finitely supported section of E_k.

    ``blocks[M]`` holds a_{l,n} for n = -l, ..., l (length |k| + 2M + 1).
    """

    k: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=complex).copy() for b in self.blocks)
        for M, blk in enumerate(blocks):
            if blk.shape != (multiplicity(self.k, M),):
                raise DomainError(f"level {M} of charge {self.k} needs {multiplicity(self.k, M)} "
                                  f"coefficients, got shape {blk.shape}")
            blk.flags.writeable = False
        object.__setattr__(self, "blocks", blocks)

    @property
    def max_m(self) -> int:
        return len(self.blocks) - 1

    @classmethod
    def zeros(cls, k: int, max_m: int) -> "Section":
        return cls(k, tuple(np.zeros(multiplicity(k, M)) for M in range(max_m + 1)))

    @classmethod
    def unit(cls, k: int, M: int, n2: int, max_m: int | None = None) -> "Section":
        """Single unit coefficient at level M, index n = n2/2."""
        max_m = M if max_m is None else max_m
        blocks = [np.zeros(multiplicity(k, j), dtype=complex) for j in range(max_m + 1)]
        l2 = 2 * M + abs(k)
        if abs(n2) > l2 or (l2 + n2) % 2:
            raise DomainError(f"n = {n2}/2 outside level {M} of charge {k}")
        blocks[M][(n2 + l2) // 2] = 1.0
        return cls(k, tuple(blocks))

    def coefficient(self, M: int, n2: int) -> complex:
        l2 = 2 * M + abs(self.k)
        return complex(self.blocks[M][(n2 + l2) // 2])

    def entries(self):
        for M, blk in enumerate(self.blocks):
            l2 = 2 * M + abs(self.k)
            for j, c in enumerate(blk):
                yield M, 2 * j - l2, complex(c)

    def allclose(self, other: "Section", atol: float = 1e-12) -> bool:
        if self.k != other.k or len(self.blocks) != len(other.blocks):
            return False
        return all(np.allclose(x, y, atol=atol, rtol=0) for x, y in zip(self.blocks, other.blocks))

    def to_json(self) -> str:
        entries = []
        for M, n2, c in self.entries():
            n = n2 // 2 if n2 % 2 == 0 else n2 / 2
            entries.append({"M": M, "n": n, "re": c.real, "im": c.imag})
        return json.dumps({"k": self.k, "maxM": self.max_m, "entries": entries})

    @classmethod
    def from_json(cls, text: str) -> "Section":
        obj = json.loads(text)
        k, max_m = int(obj["k"]), int(obj["maxM"])
        blocks = [np.zeros(multiplicity(k, M), dtype=complex) for M in range(max_m + 1)]
        for ent in obj["entries"]:
            M = int(ent["M"])
            if not 0 <= M <= max_m:
                raise DomainError(f"entry level {M} outside 0..{max_m}")
            n2 = int(Fraction(ent["n"]) * 2)
            l2 = 2 * M + abs(k)
            if abs(n2) > l2 or (l2 + n2) % 2:
                raise DomainError(f"entry n = {ent['n']} invalid at level {M}")
            blocks[M][(n2 + l2) // 2] = complex(ent["re"], ent["im"])
        return cls(k, tuple(blocks))


def synthesize(s: Section, g: GroupElement):
    """f(g) = sum_{M,n} sqrt(2l+1) a_{l,n} t^l_{k/2,n}(g); broadcasts over ``g``."""
    data = chart_data(g)
    total = np.zeros(np.shape(data[2]), dtype=complex)
    m2 = s.k
    for M, blk in enumerate(s.blocks):
        l2 = 2 * M + abs(s.k)
        scale = np.sqrt(l2 + 1)
        for j, c in enumerate(blk):
            if c == 0:
                continue
            total = total + scale * c * wigner_t_euler(RepIndex(l2, m2, 2 * j - l2), *data)
    return scalarize(total)


def l2_norm(s: Section) -> float:
    return float(np.sqrt(sum(float(np.vdot(b, b).real) for b in s.blocks)))


def apply_multiplier(s: Section, mult: Callable[[int], float]) -> Section:
    return Section(s.k, tuple(mult(M) * blk for M, blk in enumerate(s.blocks)))


def random_section(k: int, max_m: int = DEFAULT_MAX_M, seed: int = 0) -> Section:
    """Complex Gaussian coefficients at every level up to ``max_m``, scaled to unit L^2 norm."""
    rng = np.random.default_rng(seed)
    blocks = []
    for M in range(max_m + 1):
        n = multiplicity(k, M)
        blocks.append(rng.normal(size=n) + 1j * rng.normal(size=n))
    s = Section(k, tuple(blocks))
    norm = l2_norm(s)
    return Section(k, tuple(b / norm for b in s.blocks))


def coefficient_vector(s: Section) -> np.ndarray:
    """All coefficients concatenated level by level, in :meth:`Section.entries` order."""
    return np.concatenate(s.blocks) if s.blocks else np.zeros(0, dtype=complex)


def section_basis(k: int, max_m: int, g: GroupElement) -> np.ndarray:
    """Frame functions sqrt(2l+1) t^l_{k/2,n} at the points ``g``.

    Returns an array of shape ``(npoints, ncoeffs)`` whose columns follow
    :func:`coefficient_vector`, so that ``basis @ coefficient_vector(s)``
    synthesizes ``s`` at every point.  Building it once makes it cheap to
    evaluate many sections of the same charge on one grid.
    """
    phi, psi, z, (s2, c2) = chart_data(g)
    phi, psi, z = np.ravel(phi), np.ravel(psi), np.ravel(z)
    halves = (np.ravel(s2), np.ravel(c2))
    cols = []
    for M in range(max_m + 1):
        l2 = 2 * M + abs(k)
        scale = np.sqrt(l2 + 1)
        for n2 in range(-l2, l2 + 1, 2):
            cols.append(scale * np.asarray(wigner_t_euler(RepIndex(l2, k, n2), phi, psi, z, halves)))
    return np.stack(cols, axis=-1)
