"""Command-line front end: table generators and verification runs.

Every table starts with a header carrying the toolkit version, a hash of
the run configuration and tags naming the quantities in the table.  CSV
output writes that header as a ``#`` comment line; JSON output is one
object per line, the first being the header.  No timestamps are written,
so identical configurations give identical files.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .audits import AuditConfig, run_audits
from .errors import HopfError, SingularityError
from .green import (GreenVariant, ck_bounds, ck_closed, ck_quadrature, green_abel_extrapolated,
                    green_apply, green_closed_relative)
from .heat import SeriesControl, heat_trace_asymptotic, heat_trace_coefficients, heat_trace_direct
from .quadrature import parse_resolution
from .specialfns import fraction_str
from .spectrum import Section, enumerate_levels
from .su2 import GroupElement, euler
from .verify import SUITES, VerifyConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
FORMATS = ("csv", "json")
DEFAULT_MAX_M = {"spectrum": 5, "audit": 32}


class CliIOError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    k: int = 1
    max_m: int = 5
    order: int = 5
    tol: float = 1e-16
    max_terms: int = 200_000
    grid: tuple[int, int, int] = (64, 64, 128)
    seed: int = 0
    format: str = "csv"
    out: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.max_m < 0 or self.order < -1:
            raise ValueError("--max-m must be >= 0 and --order >= -1")
        if not self.tol > 0 or self.max_terms < 1:
            raise ValueError("--tol and --max-terms must be positive")

    @property
    def series(self) -> SeriesControl:
        return SeriesControl(self.tol, self.max_terms)

    def digest(self) -> str:
        payload = {k: v for k, v in asdict(self).items() if k != "out"}
        text = json.dumps(payload, sort_keys=True, default=str)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _header(cfg: RunConfig, tags: list[str]) -> dict:
    return {"toolkit": "hopflap", "version": __version__, "config": cfg.digest(),
            "command": cfg.command, "k": cfg.k, "tags": tags}


def _fmt(v):
    if isinstance(v, Fraction):
        return fraction_str(v)
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return fraction_str(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def render(cfg: RunConfig, tags: list[str], columns: list[str], rows: list[dict]) -> str:
    header = _header(cfg, tags)
    buf = io.StringIO()
    if cfg.format == "csv":
        buf.write("# " + " ".join(f"{k}={v if not isinstance(v, list) else ','.join(v)}"
                                  for k, v in header.items()) + "\r\n")
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c)) for c in columns])
    else:
        buf.write(json.dumps({"header": header}, sort_keys=True) + "\n")
        for row in rows:
            buf.write(json.dumps({c: _jsonable(row.get(c)) for c in columns}) + "\n")
    return buf.getvalue()


def emit(cfg: RunConfig, text: str):
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        Path(cfg.out).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise CliIOError(f"cannot write {cfg.out}: {exc.strerror or exc}") from exc


# commands ------------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig) -> tuple[list, list, list]:
    rows = []
    for lev in enumerate_levels(cfg.k, cfg.max_m):
        rows.append({"M": lev.M, "l": lev.l, "N": lev.N, "eigenvalue": lev.eigenvalue,
                     "multiplicity": lev.multiplicity, "parity_ok": (lev.N - 1 - cfg.k) % 2 == 0})
    return (["eigenvalue", "multiplicity"],
            ["M", "l", "N", "eigenvalue", "multiplicity", "parity_ok"], rows)


TRACE_COLUMNS = ["section", "order", "numerator", "denominator", "decimal",
                 "t", "direct", "asymptotic", "gap"]


def cmd_trace(cfg: RunConfig) -> tuple[list, list, list]:
    exp = heat_trace_coefficients(cfg.k, cfg.order)
    rows = []
    for power in range(-1, cfg.order + 1):
        c = exp.coefficient(power)
        rows.append({"section": "coefficient", "order": power, "numerator": c.numerator,
                     "denominator": c.denominator, "decimal": float(c)})
    for t in cfg.extra.get("t", (0.1, 0.05, 0.025)):
        direct = heat_trace_direct(cfg.k, t, cfg.series)
        asym = heat_trace_asymptotic(cfg.k, t, cfg.order)
        rows.append({"section": "evaluation", "order": cfg.order, "t": t, "direct": direct,
                     "asymptotic": asym, "gap": abs(direct - asym)})
    tags = ["heat_trace_coefficients", "heat_trace_direct", "heat_trace_asymptotic",
            f"tolerance={cfg.tol:g}"]
    return tags, TRACE_COLUMNS, rows


def cmd_ck(cfg: RunConfig) -> tuple[list, list, list]:
    rows = []
    for k in range(1, cfg.extra.get("k_max", 10) + 1):
        closed, quad = ck_closed(k), ck_quadrature(k)
        lo, hi = ck_bounds(k)
        rows.append({"k": k, "closed": closed, "quadrature": quad, "lower": lo, "upper": hi,
                     "bounds_ok": lo <= closed < hi})
    return (["contraction_constant", "contraction_bounds"],
            ["k", "closed", "quadrature", "lower", "upper", "bounds_ok"], rows)


def cmd_green_eval(cfg: RunConfig) -> tuple[list, list, list]:
    rows = []
    ident = GroupElement.identity()
    for phi, psi, theta in cfg.extra.get("points", ()):
        row = {"phi": phi, "psi": psi, "theta": theta}
        try:
            g = euler(phi, psi, theta)
            val = complex(green_closed_relative(cfg.k, g))
            abel = complex(green_abel_extrapolated(cfg.k, g, ident, ctl=cfg.series))
            row.update(re=val.real, im=val.imag, abs=abs(val), abel_gap=abs(val - abel), error="")
        except SingularityError as exc:
            row["error"] = str(exc)
        rows.append(row)
    return (["massive_green_closed_form", "abel_series_gap"],
            ["phi", "psi", "theta", "re", "im", "abs", "abel_gap", "error"], rows)


def cmd_audit(cfg: RunConfig) -> tuple[list, list, list]:
    acfg = AuditConfig(ks=tuple(cfg.extra.get("ks", (cfg.k,))), seed=cfg.seed,
                       n_sections=cfg.extra.get("sections", 100), max_m=cfg.max_m)
    records = run_audits(acfg)
    rows = [r.as_dict() for r in records]
    return (["inequality_audit"], ["inequality", "k", "p", "seed", "lhs", "rhs", "slack"], rows)


def cmd_green_apply(cfg: RunConfig) -> str:
    path = cfg.extra["input"]
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    section = Section.from_json(text)
    variant = GreenVariant(cfg.extra.get("variant", "massive"))
    return green_apply(variant, section).to_json() + "\n"


# argument parsing -----------------------------------------------------------

def _point(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"point must be phi,psi,theta; got {text!r}")
    return tuple(float(p) for p in parts)


def _grid(text: str):
    try:
        return parse_resolution(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=1, help="bundle charge")
    common.add_argument("--max-m", type=int, default=None,
                        help="highest spectral level M (spectrum: 5, audit: 32)")
    common.add_argument("--order", type=int, default=5, help="highest power of t in expansions")
    common.add_argument("--tol", type=float, default=1e-16, help="series term tolerance")
    common.add_argument("--max-terms", type=int, default=200_000, help="series term cap")
    common.add_argument("--grid", type=_grid, default=(64, 64, 128), help="NthetaxNphixNpsi")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--out", help="output path (default stdout)")

    p = argparse.ArgumentParser(prog="hopflap", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hopflap {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="eigenvalues and multiplicities")
    tr = sub.add_parser("trace", parents=[common], help="heat trace: exact coefficients and gaps")
    tr.add_argument("--t", type=float, nargs="+", default=[0.1, 0.05, 0.025])
    ck = sub.add_parser("ck", parents=[common], help="contraction constants c_k")
    ck.add_argument("--k-max", type=int, default=10)
    ver = sub.add_parser("verify", parents=[common], help="run verification suites")
    ver.add_argument("suite", nargs="?", default="all", choices=SUITES + ("all",))
    ge = sub.add_parser("green-eval", parents=[common], help="closed-form G^# at Euler points")
    ge.add_argument("--point", type=_point, action="append", default=[],
                    help="phi,psi,theta (repeatable)")
    au = sub.add_parser("audit", parents=[common], help="inequality audits on random sections")
    au.add_argument("--ks", type=int, nargs="+")
    au.add_argument("--sections", type=int, default=100)
    ga = sub.add_parser("green-apply", parents=[common], help="apply G or G^# to a section file")
    ga.add_argument("input", help="section JSON file")
    ga.add_argument("--variant", choices=[v.value for v in GreenVariant], default="massive")
    return p


def _config(args) -> RunConfig:
    extra = {}
    if args.command == "trace":
        extra["t"] = tuple(args.t)
    elif args.command == "ck":
        extra["k_max"] = args.k_max
    elif args.command == "green-eval":
        extra["points"] = tuple(args.point)
    elif args.command == "audit":
        extra["ks"] = tuple(args.ks) if args.ks else (args.k,)
        extra["sections"] = args.sections
    elif args.command == "green-apply":
        extra["input"] = args.input
        extra["variant"] = args.variant
    elif args.command == "verify":
        extra["suite"] = args.suite
    max_m = args.max_m if args.max_m is not None else DEFAULT_MAX_M.get(args.command, 5)
    return RunConfig(args.command, args.k, max_m, args.order, args.tol, args.max_terms,
                     tuple(args.grid), args.seed, args.format, args.out, extra)


_TABLES = {"spectrum": cmd_spectrum, "trace": cmd_trace, "ck": cmd_ck,
           "green-eval": cmd_green_eval, "audit": cmd_audit}


def run(cfg: RunConfig) -> int:
    if cfg.command in _TABLES:
        tags, columns, rows = _TABLES[cfg.command](cfg)
        emit(cfg, render(cfg, tags, columns, rows))
        if cfg.command == "audit" and any(r["slack"] < 0 for r in rows):
            return EXIT_FAIL
        return EXIT_OK
    if cfg.command == "green-apply":
        emit(cfg, cmd_green_apply(cfg))
        return EXIT_OK
    # verify
    vcfg = VerifyConfig(seed=cfg.seed, grid=cfg.grid)
    checks = run_suite(cfg.extra["suite"], vcfg)
    rows = [c.as_dict() for c in checks]
    cfg_json = RunConfig(**{**asdict(cfg), "format": "json"})
    emit(cfg, render(cfg_json, ["verification_report"],
                     ["check", "params", "lhs", "rhs", "tol", "pass"], rows))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        return run(cfg)
    except ValueError as exc:  # includes DomainError
        print(f"hopflap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CliIOError as exc:
        print(f"hopflap: {exc}", file=sys.stderr)
        return EXIT_IO
    except HopfError as exc:
        print(f"hopflap: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
