"""Inequality audits over seeded random sections.

Every audit evaluates both sides of one inequality for one random
normalized section and reports the slack rhs - lhs.  Pointwise values of
G f and G^# f come from a precomputed frame basis on a Haar grid, so one
matrix product evaluates all sections of a given charge at once.

|f| is constant along the fibers (the circle action only rotates the phase
of a section), and the fiber direction is phi in the Euler chart, so the
grids used here carry a single phi node.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .green import GreenVariant, ck_closed, green_apply, log_bound, sobolev_bound
from .quadrature import HaarGrid, haar_grid
from .spectrum import coefficient_vector, l2_norm, random_section, section_basis

CONTRACTION_P = (1.0, 2.0, 4.0)
SOBOLEV_P = (2.5, 3.0, 4.0, 6.0)


@dataclass(frozen=True)
class AuditConfig:
    ks: tuple[int, ...] = (1, 2, 3)
    n_sections: int = 100
    max_m: int = 32
    n_theta: int = 96
    n_psi: int = 192
    seed: int = 0
    contraction_p: tuple[float, ...] = CONTRACTION_P
    sobolev_p: tuple[float, ...] = SOBOLEV_P


@dataclass(frozen=True)
class AuditRecord:
    inequality: str
    k: int
    p: float | None
    seed: int
    lhs: float
    rhs: float
    slack: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "slack", self.rhs - self.lhs)

    @property
    def holds(self) -> bool:
        return self.slack >= 0

    def as_dict(self) -> dict:
        return asdict(self)


def fiber_grid(n_theta: int, n_psi: int) -> HaarGrid:
    """Haar grid with one phi node, adequate for fiber-invariant integrands."""
    return haar_grid(n_theta, 1, n_psi)


def _norms(values: np.ndarray, w: np.ndarray, p: float) -> np.ndarray:
    return (np.abs(values) ** p).T @ w


def audit_charge(k: int, cfg: AuditConfig, grid: HaarGrid | None = None) -> list[AuditRecord]:
    grid = fiber_grid(cfg.n_theta, cfg.n_psi) if grid is None else grid
    w = grid.weights
    basis = section_basis(k, cfg.max_m, grid.elements)
    seeds = [cfg.seed + i for i in range(cfg.n_sections)]
    sections = [random_section(k, cfg.max_m, s) for s in seeds]
    massive = [green_apply(GreenVariant.MASSIVE, s) for s in sections]
    massless = [green_apply(GreenVariant.MASSLESS, s) for s in sections]

    # columns are sections
    f_vals = basis @ np.stack([coefficient_vector(s) for s in sections], axis=1)
    gs_vals = basis @ np.stack([coefficient_vector(s) for s in massive], axis=1)
    g_vals = basis @ np.stack([coefficient_vector(s) for s in massless], axis=1)

    ck = ck_closed(k)
    ak = abs(k)
    records: list[AuditRecord] = []

    def add(name, p, lhs, rhs):
        for seed, a, b in zip(seeds, np.atleast_1d(lhs), np.atleast_1d(rhs)):
            records.append(AuditRecord(name, k, p, seed, float(a), float(b)))

    for p in cfg.contraction_p:
        lhs = _norms(gs_vals, w, p) ** (1 / p)
        rhs = ck * _norms(f_vals, w, p) ** (1 / p)
        add("massive_contraction", p, lhs, rhs)

    add("massless_l2", 2.0, [l2_norm(s) ** 2 for s in massless], [1 / (2 * ak)] * len(seeds))
    add("massless_l1", 1.0, _norms(g_vals, w, 1.0), [(2 * ak) ** -0.5] * len(seeds))

    for p in cfg.sobolev_p:
        add("sobolev_massless", p, _norms(g_vals, w, p),
            [sobolev_bound(k, p, GreenVariant.MASSLESS)] * len(seeds))
        add("sobolev_massive", p, _norms(gs_vals, w, p),
            [sobolev_bound(k, p, GreenVariant.MASSIVE)] * len(seeds))

    add("log_massless", None, np.log(np.exp(np.abs(g_vals)).T @ w),
        [log_bound(k, GreenVariant.MASSLESS)] * len(seeds))
    add("log_massive", None, np.log(np.exp(np.abs(gs_vals)).T @ w),
        [log_bound(k, GreenVariant.MASSIVE)] * len(seeds))
    return records


def run_audits(cfg: AuditConfig = AuditConfig()) -> list[AuditRecord]:
    grid = fiber_grid(cfg.n_theta, cfg.n_psi)
    out: list[AuditRecord] = []
    for k in cfg.ks:
        out.extend(audit_charge(k, cfg, grid))
    return out


def summarize(records: list[AuditRecord]) -> dict[tuple[str, int, float | None], dict]:
    """Violation count and minimum slack per (inequality, k, p)."""
    out: dict = {}
    for r in records:
        key = (r.inequality, r.k, r.p)
        entry = out.setdefault(key, {"count": 0, "violations": 0, "min_slack": math.inf})
        entry["count"] += 1
        entry["violations"] += not r.holds
        entry["min_slack"] = min(entry["min_slack"], r.slack)
    return out
