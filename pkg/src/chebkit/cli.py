"""Command-line front end.

Exit status is 0 on certified success, 2 on solver or descriptor errors
(with a machine-readable code in the output document) and 3 on I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import emit
from .closed_forms import closed_form_capacity
from .complex_solver import MAX_COMPLEX_DEGREE, solve_complex
from .errors import ChebkitError, DegreeError, ParseError
from .faber import DiskImage, JoukowskiEllipse, faber_norm_check, faber_poly, model_boundary, parse_model
from .potential import capacity, green_function
from .remez import solve_real
from .sets_weights import (
    Circle,
    IntervalUnion,
    One,
    SetDescriptor,
    WeightDescriptor,
    _complex,
    _real,
    boundary_points,
    discretize,
    parse_set,
    parse_weight,
    set_to_dict,
    weight_to_dict,
)
from .zeros import jentzsch_demo, zero_report

log = logging.getLogger(__name__)

EXIT_OK, EXIT_SOLVER, EXIT_IO = 0, 2, 3
MAX_CLI_DEGREE = MAX_COMPLEX_DEGREE

COMMANDS = ("solve", "sweep", "zeros", "capacity", "green", "faber", "jentzsch")


class InputOutputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    set_path: str | None = None
    weight_path: str | None = None
    degree: int | None = None
    degrees: tuple[int, int] | None = None
    tol: float = 1e-9
    grid: int | None = None
    out: str | None = None
    svg: str | None = None
    at: list[complex] = field(default_factory=list)
    series_path: str | None = None

    def __post_init__(self) -> None:
        if self.degrees is not None:
            lo, hi = self.degrees
            if lo < 1 or hi < lo:
                raise DegreeError(f"empty degree range {lo}..{hi}")
            if hi > MAX_CLI_DEGREE:
                raise DegreeError(f"degrees are capped at {MAX_CLI_DEGREE}")
        if self.degree is not None and not 1 <= self.degree <= MAX_CLI_DEGREE:
            raise DegreeError(f"degree must lie in 1..{MAX_CLI_DEGREE}")

    def degree_list(self) -> list[int]:
        if self.degrees is not None:
            return list(range(self.degrees[0], self.degrees[1] + 1))
        if self.degree is not None:
            return [self.degree]
        raise DegreeError("give --degree N or --degrees A..B")


# ------------------------------------------------------------------ helpers


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputOutputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputOutputError(f"cannot write {path}: {exc.strerror or exc}") from None


def _load_set(cfg: RunConfig) -> SetDescriptor:
    if cfg.set_path is None:
        raise ParseError("--set is required")
    return parse_set(_read(cfg.set_path))


def _load_weight(cfg: RunConfig) -> WeightDescriptor:
    return One() if cfg.weight_path is None else parse_weight(_read(cfg.weight_path))


def _pairs(values) -> list[list[float]]:
    return [emit.complex_pair(v) for v in values]


def _sorted_zeros(z) -> list[complex]:
    return sorted((complex(v) for v in z), key=lambda v: (v.real, v.imag))


def solve_any(s: SetDescriptor, w: WeightDescriptor, n: int, tol: float, grid: int | None):
    """Real exchange on interval unions, Lawson otherwise; returns (solution, certificate)."""
    if isinstance(s, IntervalUnion):
        sol = solve_real(s, w, n, tol=min(tol, 1e-12), grid_points=grid)
        cert = {
            "kind": "alternation",
            "reference": [[x, sg] for x, sg in sol.reference],
            "equioscillation_defect": sol.equioscillation_defect,
            "leveled_error": sol.leveled_error,
            "verified_norm": sol.verified_norm,
            "certified": bool(sol.equioscillation_defect <= tol),
        }
        return sol, cert
    sol = solve_complex(s, w, n, tol=tol, grid_points=grid)
    cert = {
        "kind": "duality",
        "dual_bound": sol.dual_bound,
        "gap": sol.gap,
        "fine_norm": sol.fine_norm,
        "equimodularity_defect": sol.equimodularity_defect,
        "iterations": sol.iterations,
        "certified": bool(sol.certified),
    }
    if sol.lower_bound is not None:
        cert["szego_lower_bound"] = sol.lower_bound
    return sol, cert


def _capacity_fields(s: SetDescriptor, n: int, norm: float) -> dict:
    cap = closed_form_capacity(s)
    if cap is None:
        return {}
    return {"capacity": {"value": cap, "method": "closed_form"}, "widom_factor": norm / cap**n}


# ----------------------------------------------------------------- commands


def cmd_solve(cfg: RunConfig) -> tuple[int, str]:
    s, w = _load_set(cfg), _load_weight(cfg)
    n = cfg.degree_list()[0]
    sol, cert = solve_any(s, w, n, cfg.tol, cfg.grid)
    doc = {
        "command": "solve",
        "set": set_to_dict(s),
        "weight": weight_to_dict(w),
        "degree": n,
        "coefficients": _pairs(sol.poly.low_coeffs),
        "norm": sol.norm,
    }
    doc.update(_capacity_fields(s, n, sol.norm))
    doc["certificate"] = cert
    status = EXIT_OK if cert["certified"] else EXIT_SOLVER
    if status != EXIT_OK:
        doc["error"] = {"code": "not_certified", "message": "certificate tolerance not met"}
    return status, emit.dumps(doc)


def cmd_sweep(cfg: RunConfig) -> tuple[int, str]:
    s, w = _load_set(cfg), _load_weight(cfg)
    cap = closed_form_capacity(s)
    rows, status = [], EXIT_OK
    for n in cfg.degree_list():
        try:
            sol, cert = solve_any(s, w, n, cfg.tol, cfg.grid)
        except ChebkitError as exc:
            log.info("degree %d failed: %s", n, exc)
            rows.append([n, None, None, None, exc.code])
            status = EXIT_SOLVER
            continue
        cap_pow = None if cap is None else cap**n
        widom = None if cap is None else sol.norm / cap_pow
        err = None if cert["certified"] else "not_certified"
        if err:
            status = EXIT_SOLVER
        rows.append([n, sol.norm, cap_pow, widom, err])
    return status, emit.csv_text(["degree", "t_n", "cap_pow", "widom", "error"], rows)


def _boundary(s: SetDescriptor) -> list[np.ndarray]:
    return boundary_points(s, 400)


def cmd_zeros(cfg: RunConfig) -> tuple[int, str]:
    s, w = _load_set(cfg), _load_weight(cfg)
    n = cfg.degree_list()[0]
    sol, cert = solve_any(s, w, n, cfg.tol, cfg.grid)
    rep = zero_report(sol, s, w)
    z = _sorted_zeros(rep.zeros)
    if cfg.svg is not None:
        _write(cfg.svg, emit.svg_scatter(_boundary(s), z))
    text = emit.csv_text(["re", "im"], [[v.real, v.imag] for v in z])
    return (EXIT_OK if cert["certified"] else EXIT_SOLVER), text


def cmd_capacity(cfg: RunConfig) -> tuple[int, str]:
    s = _load_set(cfg)
    cap = capacity(s)
    doc = {"command": "capacity", "set": set_to_dict(s), "value": cap.value, "method": cap.method}
    if cap.degree_used is not None:
        doc["degree_used"] = cap.degree_used
    return EXIT_OK, emit.dumps(doc)


def cmd_green(cfg: RunConfig) -> tuple[int, str]:
    s = _load_set(cfg)
    if not cfg.at:
        raise ParseError("green needs at least one --at RE,IM point")
    pts = np.array(cfg.at, dtype=complex)
    vals = np.atleast_1d(green_function(s, pts))
    doc = {"command": "green", "set": set_to_dict(s), "points": _pairs(pts), "values": [float(v) for v in vals]}
    return EXIT_OK, emit.dumps(doc)


def cmd_faber(cfg: RunConfig) -> tuple[int, str]:
    if cfg.set_path is None:
        raise ParseError("--set must name an exterior-map model document")
    model = parse_model(_read(cfg.set_path))
    n = cfg.degree_list()[0]
    F = faber_poly(model, n)
    doc = {"command": "faber", "degree": n, "coefficients": _pairs(F.low_coeffs)}
    if isinstance(model, (DiskImage, JoukowskiEllipse)):
        pts = discretize(model_boundary(model), cfg.grid or 2048).points
        chk = faber_norm_check(model, pts, n)
        doc.update({"faber_sup": chk.faber_sup, "scaled_sup": chk.scaled_sup, "bound": chk.bound,
                    "satisfied": chk.satisfied})
    return EXIT_OK, emit.dumps(doc)


def _series(doc: dict, n: int) -> tuple[list[complex], float]:
    kind = doc.get("kind", "coefficients")
    if kind == "geometric":
        q = float(doc.get("ratio", 1.0))
        return [q**k for k in range(n + 1)], 1.0 / q
    if kind == "exponential":
        return [1.0 / math.factorial(k) for k in range(n + 1)], float("inf")
    if kind == "coefficients":
        radius = doc.get("radius")
        return [_complex(a) for a in doc.get("coeffs", [])], math.inf if radius == "inf" else _real(radius, "radius")
    raise ParseError(f"unknown series kind {kind!r}")


def cmd_jentzsch(cfg: RunConfig) -> tuple[int, str]:
    if cfg.series_path is None:
        raise ParseError("--series is required")
    try:
        doc = json.loads(_read(cfg.series_path))
    except ValueError as exc:
        raise ParseError(f"malformed series document: {exc}") from None
    n = cfg.degree_list()[0]
    coeffs, r = _series(doc, n)
    rep = jentzsch_demo(coeffs, n, r)
    z = _sorted_zeros(rep.zeros)
    if cfg.svg is not None:
        _write(cfg.svg, emit.svg_scatter(_boundary(Circle(0, r)), z))
    out = {"command": "jentzsch", "degree": n, "radius": r, "delta": rep.delta, "zeros": _pairs(z),
           "annulus_fraction": rep.annulus_fraction, "angular_KS": rep.angular_KS}
    return EXIT_OK, emit.dumps(out)


HANDLERS: dict[str, Callable[[RunConfig], tuple[int, str]]] = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "zeros": cmd_zeros,
    "capacity": cmd_capacity,
    "green": cmd_green,
    "faber": cmd_faber,
    "jentzsch": cmd_jentzsch,
}


# ------------------------------------------------------------------ parsing


def _degree_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None


def _point(text: str) -> complex:
    try:
        parts = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}") from None
    if len(parts) == 1:
        return complex(parts[0])
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chebkit", description="Weighted Chebyshev polynomials on real and complex sets.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--set", dest="set_path", metavar="PATH")
    p.add_argument("--weight", dest="weight_path", metavar="PATH")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--degree", type=int, metavar="N")
    g.add_argument("--degrees", type=_degree_range, metavar="A..B")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--grid", type=int, metavar="M")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--at", type=_point, action="append", default=[], metavar="RE,IM",
                   help="evaluation point for green (repeatable)")
    p.add_argument("--series", dest="series_path", metavar="PATH", help="series document for jentzsch")
    return p


def run(cfg: RunConfig) -> int:
    try:
        status, text = HANDLERS[cfg.command](cfg)
    except InputOutputError as exc:
        print(f"chebkit: {exc}", file=sys.stderr)
        return EXIT_IO
    except ChebkitError as exc:
        doc = {"command": cfg.command, "error": {"code": exc.code, "message": str(exc)}}
        try:
            _write(cfg.out, emit.dumps(doc))
        except InputOutputError as io_exc:
            print(f"chebkit: {io_exc}", file=sys.stderr)
            return EXIT_IO
        return EXIT_SOLVER
    try:
        _write(cfg.out, text)
    except InputOutputError as exc:
        print(f"chebkit: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
    except ChebkitError as exc:
        sys.stdout.write(emit.dumps({"command": args.command, "error": {"code": exc.code, "message": str(exc)}}))
        return EXIT_SOLVER
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
