"""JSON documents for run configurations and signed domains.

Rationals are written as ``"p"`` or ``"p/q"`` strings, integers natively, and
keys in a fixed order so that equal inputs give byte-identical output.
Polynomial coefficients are listed constant term first.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any

import jsonschema

from .errors import ConfigError
from .nf_core import FieldElement, NumberField, format_rational
from .shintani import AlphaTable, OrderContext, SignedCone, SignedDomain, UnitSystem, cycle_notation

DOMAIN_FORMAT = "shintani-cones/domain"
DOMAIN_FORMAT_VERSION = 1

_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*-?\d+)?\s*$"},
    ]
}
_VECTOR = {"type": "array", "items": _RATIONAL, "minItems": 1}

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["field", "units"],
    "properties": {
        "field": {
            "type": "object",
            "additionalProperties": False,
            "required": ["min_poly"],
            "properties": {
                "min_poly": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
                "tau1_im_sign": {"enum": ["negative", "positive"]},
            },
        },
        "units": {"type": "array", "items": _VECTOR},
        "N": {"type": "integer"},
        "alphas": {"type": "array", "items": _VECTOR},
        "alpha_search_bound": {"type": "integer", "minimum": 1},
        "precision_bits": {"type": "integer", "minimum": 64},
        "max_precision_bits": {"type": "integer", "minimum": 64},
        "seed": {"type": "integer"},
        "verify": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "samples": {"type": "integer", "minimum": 0},
                "numerator_bound": {"type": "integer", "minimum": 1},
                "denominator_bound": {"type": "integer", "minimum": 1},
                "margin": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "zeta": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "lattice_basis": {"type": "array", "items": _VECTOR},
                "norm_a": _RATIONAL,
                "s": {"type": "number"},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "shell_cap": {"type": "integer", "minimum": 1},
            },
        },
        "slice": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "plane": _RATIONAL,
                "clip": {"type": "number", "exclusiveMinimum": 0},
            },
        },
    },
}

# emission order of the top-level keys
_CONFIG_KEYS = ("field", "units", "N", "alphas", "alpha_search_bound", "precision_bits",
                "max_precision_bits", "seed", "verify", "zeta", "slice")


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(str(value).replace(" ", ""))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a rational: {value!r}") from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# run configuration


@dataclass(frozen=True)
class RunConfig:
    min_poly: tuple[int, ...]
    units: tuple[tuple[Fraction, ...], ...]
    tau1_im_sign: str | None = None
    N: int | None = None
    alphas: tuple[tuple[Fraction, ...], ...] | None = None
    alpha_search_bound: int | None = None
    precision_bits: int | None = None
    max_precision_bits: int | None = None
    seed: int | None = None
    verify: dict | None = None
    zeta: dict | None = None
    slice: dict | None = None
    _raw_rationals: dict = dc_field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_dict(cls, data: Any) -> RunConfig:
        """Schema validation first, then semantic checks with stable error codes."""
        try:
            jsonschema.validate(data, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"{path}: {exc.message}", code="config.schema") from None
        poly = tuple(data["field"]["min_poly"])
        if len(poly) < 4:
            raise ConfigError("min_poly must have degree at least 3", code="field.min_poly.degree")
        if poly[-1] != 1:
            raise ConfigError("min_poly must be monic (leading coefficient 1, listed last)",
                              code="field.min_poly.monic")
        n = len(poly) - 1
        units = tuple(_parse_vector(u, n, "units") for u in data["units"])
        alphas = None
        if "alphas" in data:
            alphas = tuple(_parse_vector(a, n, "alphas") for a in data["alphas"])
        N = data.get("N")
        if N is not None and N < 3:
            raise ConfigError("N must be at least 3", code="N.range")
        if alphas is not None and N is not None and len(alphas) != N:
            raise ConfigError(f"{len(alphas)} anchors given for N = {N}", code="alphas.count")
        zeta = data.get("zeta")
        if zeta is not None and "lattice_basis" in zeta:
            for b in zeta["lattice_basis"]:
                _parse_vector(b, n, "zeta.lattice_basis")
        return cls(poly, units, data["field"].get("tau1_im_sign"), N, alphas,
                   data.get("alpha_search_bound"), data.get("precision_bits"),
                   data.get("max_precision_bits"), data.get("seed"),
                   data.get("verify"), zeta, data.get("slice"),
                   {"units": data["units"], "alphas": data.get("alphas")})

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}", code="config.json") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        fld: dict[str, Any] = {"min_poly": list(self.min_poly)}
        if self.tau1_im_sign is not None:
            fld["tau1_im_sign"] = self.tau1_im_sign
        values = {
            "field": fld,
            "units": self._raw_rationals.get("units") or _vectors_out(self.units),
            "N": self.N,
            "alphas": None if self.alphas is None else
            self._raw_rationals.get("alphas") or _vectors_out(self.alphas),
            "alpha_search_bound": self.alpha_search_bound,
            "precision_bits": self.precision_bits,
            "max_precision_bits": self.max_precision_bits,
            "seed": self.seed,
            "verify": self.verify,
            "zeta": self.zeta,
            "slice": self.slice,
        }
        for key in _CONFIG_KEYS:
            if values[key] is not None:
                out[key] = values[key]
        return out

    @property
    def effective_N(self) -> int:
        if self.N is not None:
            return self.N
        return len(self.alphas) if self.alphas is not None else 3


def _vectors_out(vectors) -> list[list[str]]:
    return [[format_rational(c) for c in v] for v in vectors]


def _parse_vector(values: Sequence, n: int, where: str) -> tuple[Fraction, ...]:
    vec = tuple(parse_rational(v) for v in values)
    if len(vec) > n:
        raise ConfigError(f"{where}: {len(vec)} coordinates for a degree-{n} field", code=f"{where}.length")
    return vec + (Fraction(0),) * (n - len(vec))


# ---------------------------------------------------------------------------
# domain documents


def _element_doc(x: FieldElement) -> list[str]:
    return x.to_strings()


def domain_to_document(domain: SignedDomain) -> dict:
    field = domain.field
    cones = []
    for c in domain.cones:
        sigma, q, n = c.mu
        cones.append({
            "sigma": list(sigma),
            "sigma_cycles": cycle_notation(sigma),
            "q": q,
            "n": n,
            "generators": [_element_doc(f) for f in c.generators],
            "weight": c.weight,
            "flags": None if c.closure_flags is None else list(c.closure_flags),
        })
    orders = []
    for sigma, ctx in domain.orders.items():
        size = ctx.size
        orders.append({
            "sigma": list(sigma),
            "m_single": list(ctx.m_single),
            "m_pair": [[ctx.m_pair[t, tp] for tp in range(1, size + 1)] for t in range(1, size + 1)],
            "order": list(ctx.order),
        })
    return {
        "format": DOMAIN_FORMAT,
        "format_version": DOMAIN_FORMAT_VERSION,
        "field": {"min_poly": [int(c) for c in field.min_poly], "tau1_im_sign": field.tau1_im_sign},
        "units": [_element_doc(u) for u in domain.unit_system.units],
        "regulator_sign": domain.regulator_sign,
        "N": domain.N,
        "alphas": [_element_doc(a) for a in domain.alpha_table.alphas],
        "cone_count": len(domain.cones),
        "active_cone_count": len(domain.active_cones),
        "true_domain": domain.is_true_domain,
        "orders": orders,
        "cones": cones,
        "metadata": dict(domain.metadata),
    }


def document_to_domain(doc: dict, *, revalidate: bool = True) -> SignedDomain:
    """Rebuild a :class:`SignedDomain` from :func:`domain_to_document` output."""
    if doc.get("format") != DOMAIN_FORMAT:
        raise ConfigError("not a domain document", code="domain.format")
    meta = doc.get("metadata", {})
    field = NumberField(doc["field"]["min_poly"], doc["field"]["tau1_im_sign"],
                        precision_bits=meta.get("precision_bits", 192),
                        max_precision_bits=meta.get("max_precision_bits", 8192))
    units = [FieldElement.from_strings(field, u) for u in doc["units"]]
    alphas = [FieldElement.from_strings(field, a) for a in doc["alphas"]]
    if revalidate:
        unit_system = UnitSystem.from_units(units)
        alpha_table = AlphaTable.from_alphas(alphas, doc["N"])
    else:
        unit_system = UnitSystem(field, tuple(units), int(doc["regulator_sign"]))
        alpha_table = AlphaTable(int(doc["N"]), tuple(alphas))
    if unit_system.regulator_sign != doc["regulator_sign"]:
        raise ConfigError("regulator sign in the document disagrees with the units", code="domain.regulator_sign")
    orders = {}
    for o in doc["orders"]:
        sigma = tuple(o["sigma"])
        size = len(o["m_single"])
        m_pair = {(t, tp): o["m_pair"][t - 1][tp - 1] for t in range(1, size + 1) for tp in range(1, size + 1)}
        orders[sigma] = OrderContext(sigma, alpha_table.N, tuple(o["m_single"]), m_pair, tuple(o["order"]))
    cones = tuple(
        SignedCone((tuple(c["sigma"]), c["q"], c["n"]),
                   tuple(FieldElement.from_strings(field, g) for g in c["generators"]),
                   c["weight"], None if c["flags"] is None else tuple(c["flags"]))
        for c in doc["cones"])
    return SignedDomain(field, unit_system, alpha_table, cones, orders, dict(meta))
