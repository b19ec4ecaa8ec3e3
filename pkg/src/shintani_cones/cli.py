"""Command line front end: ``domain``, ``verify``, ``zeta`` and ``slice``.

Standard output carries exactly one document (JSON, or a text table for
``slice``); logs go to standard error. Failures print a JSON error object
``{"error": {"code", "message", "exit_code"}}`` and exit with

    2  invalid input        3  precision cap reached
    4  coverage check failed 5  shell cap reached before tolerance
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import flint

from . import __version__
from .errors import ConfigError, ShellCapReached, ShintaniError, ValidationError
from .nf_core import NumberField, project_ell
from .nf_core.precision import DEFAULT_PRECISION_BITS, GUARD_BITS, MAX_PRECISION_BITS
from .serialize import RunConfig, document_to_domain, domain_to_document, dumps, parse_rational
from .shintani import AlphaTable, SignedDomain, UnitSystem, auto_select_alphas, build_signed_domain
from .verify import SamplerParams, check_coverage_batch
from .zeta import IdealLattice, ZetaJob, partial_zeta
from .zeta.series import REAL_PLACE_PRODUCT

log = logging.getLogger("shintani_cones")

EXIT_VERIFY_FAILED = 4
DEFAULT_SAMPLES = 100
DEFAULT_S = 2.0
DEFAULT_TOL = 1e-5
DEFAULT_SHELL_CAP = 2000


# ---------------------------------------------------------------------------
# loading


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", code="config.read") from None
    return RunConfig.from_json(text)


def load_domain_document(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read domain document: {exc}", code="domain.read") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", code="domain.json") from None


def build_domain(cfg: RunConfig, precision_bits: int | None = None) -> SignedDomain:
    prec = precision_bits or cfg.precision_bits or DEFAULT_PRECISION_BITS
    cap = max(cfg.max_precision_bits or MAX_PRECISION_BITS, prec)
    field = NumberField(cfg.min_poly, cfg.tau1_im_sign or "negative", precision_bits=prec, max_precision_bits=cap)
    unit_system = UnitSystem.from_units([field.element(u) for u in cfg.units])
    if cfg.alphas is not None:
        alpha_table = AlphaTable.from_alphas([field.element(a) for a in cfg.alphas], cfg.effective_N)
        source = "config"
    else:
        alpha_table = auto_select_alphas(field, cfg.effective_N, cfg.alpha_search_bound or 4)
        source = "search"
    domain = build_signed_domain(field, unit_system, alpha_table)
    return dataclasses.replace(domain, metadata={**domain.metadata, "alpha_source": source})


def _domain_from_args(args) -> tuple[SignedDomain, RunConfig | None]:
    if args.domain:
        return document_to_domain(load_domain_document(args.domain)), (
            load_config(args.config) if args.config else None)
    if not args.config:
        raise ConfigError("either --config or --domain is required", code="cli.input")
    cfg = load_config(args.config)
    return build_domain(cfg, args.precision_bits), cfg


# ---------------------------------------------------------------------------
# subcommands


def run_domain(cfg: RunConfig, precision_bits: int | None = None) -> dict:
    domain = build_domain(cfg, precision_bits)
    doc = domain_to_document(domain)
    doc["config"] = cfg.to_dict()
    return doc


def run_verify(domain: SignedDomain, cfg: RunConfig | None = None, samples: int | None = None,
               seed: int | None = None) -> dict:
    block = (cfg.verify if cfg else None) or {}
    samples = samples if samples is not None else block.get("samples", DEFAULT_SAMPLES)
    seed = seed if seed is not None else (cfg.seed if cfg and cfg.seed is not None else 0)
    params = SamplerParams(block.get("numerator_bound", 50), block.get("denominator_bound", 20))
    summary = check_coverage_batch(domain, samples, seed, params, block.get("margin", 1e-6))
    return {
        "command": "verify",
        "field": {"min_poly": [int(c) for c in domain.field.min_poly], "tau1_im_sign": domain.field.tau1_im_sign},
        "N": domain.N,
        "alphas": [a.to_strings() for a in domain.alpha_table.alphas],
        **summary,
        "status": "pass" if summary["failed"] == 0 else "fail",
    }


def run_zeta(domain: SignedDomain, cfg: RunConfig | None, s: float | None = None,
             tol: float | None = None) -> dict:
    block = (cfg.zeta if cfg else None) or {}
    s = float(s if s is not None else block.get("s", DEFAULT_S))
    tol = float(tol if tol is not None else block.get("tol", DEFAULT_TOL))
    field = domain.field
    if "lattice_basis" in block:
        basis = tuple(field.element([parse_rational(v) for v in b]) for b in block["lattice_basis"])
        lattice = IdealLattice(basis, parse_rational(block.get("norm_a", 1)))
    else:
        lattice = IdealLattice.power_basis(field, norm_a=parse_rational(block.get("norm_a", 1)))
    job = ZetaJob(domain, lattice, s, tol, int(block.get("shell_cap", DEFAULT_SHELL_CAP)))
    result = partial_zeta(job)
    log.info("zeta evaluated with the %s backend", result.backend)
    return {
        "command": "zeta",
        "field": {"min_poly": [int(c) for c in field.min_poly], "tau1_im_sign": field.tau1_im_sign},
        "N": domain.N,
        "alphas": [a.to_strings() for a in domain.alpha_table.alphas],
        "lattice_basis": [b.to_strings() for b in lattice.basis],
        "norm_a": str(lattice.norm_a),
        "s": s,
        "tol": tol,
        "value": result.value,
        "error_estimate": result.error_estimate,
        "shells": result.shells,
        "cones": [
            {"sigma": list(c.mu[0]), "q": c.mu[1], "n": c.mu[2], "weight": c.weight, "residues": c.residues,
             "value": c.value, "error_estimate": c.error_estimate, "shells": c.shells}
            for c in result.cones
        ],
        "real_place_product": REAL_PLACE_PRODUCT,
    }


def slice_rows(domain: SignedDomain, plane: Fraction = Fraction(1), clip: float | None = None) -> list[dict]:
    """Triangles cut from each active cone by ``last real coordinate = plane`` (``r = 1``)."""
    if domain.field.r != 1:
        raise ValidationError(f"slices are defined for r = 1 only (this field has r = {domain.field.r})",
                              code="slice.rank")
    if plane <= 0:
        raise ValidationError("plane value must be positive", code="slice.plane")
    prec = domain.field.precision_bits
    rows = []
    for cone in domain.active_cones:
        verts, clipped = [], False
        for f in cone.generators:
            with flint.ctx.workprec(prec + GUARD_BITS):
                z = project_ell(f, prec).complex_part * flint.arb(flint.fmpq(plane.numerator, plane.denominator))
            x, y = float(z.real.mid()), float(z.imag.mid())
            if clip is not None and (x * x + y * y) ** 0.5 > clip:
                scale = clip / (x * x + y * y) ** 0.5
                x, y, clipped = x * scale, y * scale, True
            verts.append((x, y))
        rows.append({"cone": cone.label, "weight": cone.weight, "flags": cone.closure_flags,
                     "vertices": verts, "clipped": clipped})
    return rows


def format_slice(rows: list[dict], plane: Fraction) -> str:
    lines = [f"# plane x_last = {plane}; flags C = closed, O = open",
             "cone\tweight\tflags\tclipped\tvertices"]
    for row in rows:
        flags = ",".join("C" if f else "O" for f in row["flags"])
        verts = ";".join(f"{x:.12g},{y:.12g}" for x, y in row["vertices"])
        lines.append(f"{row['cone']}\t{row['weight']:+d}\t{flags}\t{int(row['clipped'])}\t{verts}")
    return "\n".join(lines) + "\n"


def run_slice(domain: SignedDomain, cfg: RunConfig | None = None, plane=None, clip: float | None = None) -> str:
    block = (cfg.slice if cfg else None) or {}
    plane = parse_rational(plane if plane is not None else block.get("plane", 1))
    clip = clip if clip is not None else block.get("clip")
    return format_slice(slice_rows(domain, plane, clip), plane)


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shintani-cones",
                                     description="Signed cone domains for fields with one complex place.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, domain_input: bool):
        p.add_argument("--config", help="run configuration (JSON)")
        if domain_input:
            p.add_argument("--domain", help="domain document produced by the domain subcommand")
        p.add_argument("--out", help="write the document here instead of standard output")
        p.add_argument("--precision-bits", type=int, help="starting ball precision in bits")
        p.add_argument("-v", "--verbose", action="count", default=0)

    p = sub.add_parser("domain", help="build the signed domain")
    common(p, domain_input=False)
    p = sub.add_parser("verify", help="check signed coverage counts on random points")
    common(p, domain_input=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p = sub.add_parser("zeta", help="partial zeta value at real s > 1")
    common(p, domain_input=True)
    p.add_argument("--s", type=float)
    p.add_argument("--tol", type=float)
    p = sub.add_parser("slice", help="cross-section of the cones for r = 1 as a text table")
    common(p, domain_input=True)
    p.add_argument("--plane", help="value of the last real coordinate (default 1)")
    p.add_argument("--clip", type=float, help="cap vertex moduli at this radius")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _error_document(exc: ShintaniError) -> dict:
    err = {"code": exc.code, "message": str(exc), "exit_code": exc.exit_code}
    if isinstance(exc, ShellCapReached):
        err.update(partial_value=exc.partial_value, error_estimate=exc.error_estimate, shells=exc.shells)
    return {"error": err}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        level=logging.WARNING - 10 * min(args.verbose, 2))
    try:
        if args.command == "domain":
            if not args.config:
                raise ConfigError("--config is required", code="cli.input")
            _emit(dumps(run_domain(load_config(args.config), args.precision_bits)), args.out)
            return 0
        if args.command == "zeta" and args.s is not None and not args.s > 1:
            raise ValidationError(f"s = {args.s} is outside the region s > 1", code="zeta.s.range")
        domain, cfg = _domain_from_args(args)
        if args.command == "verify":
            doc = run_verify(domain, cfg, args.samples, args.seed)
            _emit(dumps(doc), args.out)
            return 0 if doc["failed"] == 0 else EXIT_VERIFY_FAILED
        if args.command == "zeta":
            _emit(dumps(run_zeta(domain, cfg, args.s, args.tol)), args.out)
            return 0
        _emit(run_slice(domain, cfg, args.plane, args.clip), args.out)
        return 0
    except ShintaniError as exc:
        log.error("%s", exc)
        sys.stdout.write(dumps(_error_document(exc)))
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
