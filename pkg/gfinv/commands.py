"""
Subcommand handlers. Each handler takes a RunConfig plus its own options, does the work,
and hands a JSON-ready payload to `_emit`, which prints JSON or renders the text template.
The return value is the process exit code.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from . import certify, inv_map, scan, storage
from .errors import ConsistencyError, ParseError
from .gf_core import (
    FieldElement,
    FieldSpec,
    aes_field,
    divisors,
    format_element,
    format_poly,
    format_poly_coeffs,
    frobenius,
    in_f_circle,
    inv0,
    make_field,
    parse_element,
    parse_poly_terms,
)
from .linear_map import LinearMap, aes_affine, frobenius_power, from_rows, identity, multiplication
from .render import render
from .subspaces import AffineSubspace, coset_values

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INCONCLUSIVE = 3


# ── Run configuration ──────────────────────────────────────────

@dataclass(frozen=True)
class RunConfig:
    spec: FieldSpec
    field_source: str = "inline"
    worker_count: int = 1
    cap_override: int | None = None
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.worker_count < 1:
            raise ParseError(f"worker count must be at least 1, got {self.worker_count}")
        if self.cap_override is not None and self.cap_override < 1:
            raise ParseError(f"cap must be at least 1, got {self.cap_override}")
        if self.format not in ("json", "text"):
            raise ParseError(f"unknown output format {self.format!r}")
        if self.output not in (None, "-") and not Path(self.output).parent.is_dir():
            raise ParseError(f"output directory {Path(self.output).parent} does not exist")


def parse_modulus(text: str, p: int) -> list[int]:
    """Coefficients constant term first, from '1,1,0,1,1,0,0,0,1', 'x^8 + x^4 + x^3 + x + 1' or a p = 2 bitmask '0x11B'."""
    raw = text.strip().lower().replace(" ", "")
    if not raw:
        raise ParseError("empty modulus")
    if "," in raw:
        try:
            return [int(c) for c in raw.split(",")]
        except ValueError as e:
            raise ParseError(f"bad modulus coefficient list {text!r}") from e
    if raw.startswith("0x"):
        if p != 2:
            raise ParseError("bitmask moduli are only meaningful for p = 2")
        mask = int(raw, 16)
        return [(mask >> i) & 1 for i in range(mask.bit_length())]
    coeffs = parse_poly_terms(raw)
    return [coeffs.get(i, 0) % p for i in range(max(coeffs) + 1)]


def resolve_field(field: str | None, p: int | None, n: int | None, modulus: str | None,
                  default_field: str = "aes") -> tuple[FieldSpec, str]:
    if p is not None or n is not None:
        if p is None or n is None:
            raise ParseError("--p and --n go together")
        return make_field(p, n, parse_modulus(modulus, p) if modulus else None), "inline"
    source = field or default_field
    return storage.load_field(source), source


def _emit(config: RunConfig, template: str, payload: dict):
    if config.format == "json":
        text = json.dumps(payload, indent=2, ensure_ascii=False)
    else:
        text = render(template, payload)
    storage.emit(text, config.output)


def _element(spec: FieldSpec, text: str | None, name: str) -> FieldElement:
    if text is None:
        raise ParseError(f"--{name} is required")
    return parse_element(spec, text)


# ── field ──────────────────────────────────────────────────────

def cmd_field(config: RunConfig, write: str | None = None) -> int:
    spec = config.spec
    payload = {
        **storage.field_to_json(spec),
        "name": str(spec),
        "modulus_poly": format_poly_coeffs(spec.modulus),
        "order": spec.order,
        "subfields": divisors(spec.n),
        "f_circle": certify.f_circle_size(spec),
        "source": config.field_source,
    }
    if write:
        storage.save_field(write, spec)
        logger.info("field description written to %s", write)
    _emit(config, "field", payload)
    return EXIT_OK


# ── classify ───────────────────────────────────────────────────

def cmd_classify(config: RunConfig, brute: bool = False) -> int:
    report = inv_map.classify(config.spec, brute=brute, workers=config.worker_count, cap=config.cap_override)
    _emit(config, "classify", {"name": str(config.spec), **report.to_json()})
    if report.agree is False:
        raise ConsistencyError(f"exhaustive classification of {config.spec} disagrees with the prediction")
    return EXIT_OK


# ── certify ────────────────────────────────────────────────────

def load_matrix(spec: FieldSpec, source: str) -> LinearMap:
    """builtin:aes, builtin:identity, builtin:mul:<gamma>, builtin:frobenius:<k>, or a JSON file of rows."""
    if source == "builtin:aes":
        return aes_affine(spec)
    if source == "builtin:identity":
        return identity(spec)
    if source.startswith("builtin:mul:"):
        return multiplication(parse_element(spec, source.removeprefix("builtin:mul:")))
    if source.startswith("builtin:frobenius:"):
        try:
            return frobenius_power(spec, int(source.removeprefix("builtin:frobenius:")))
        except ValueError as e:
            raise ParseError(f"bad Frobenius power in {source!r}") from e
    if source.startswith("builtin:"):
        raise ParseError(f"unknown builtin matrix {source!r}")
    try:
        rows = json.loads(Path(source).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read matrix {source}: {e}") from e
    if isinstance(rows, dict):
        rows = rows.get("matrix")
    if not isinstance(rows, list):
        raise ParseError(f"{source} must hold a list of rows")
    return from_rows(spec, rows)


def cmd_certify(config: RunConfig, b: str | None, matrix: str | None = None, alpha: str | None = None,
                sbox: str | None = None, brute_check: bool = False) -> int:
    spec = config.spec
    opts = dict(brute_check=brute_check, workers=config.worker_count, cap=config.cap_override)
    if alpha is not None:
        report = certify.certify_scalar(parse_element(spec, alpha), _element(spec, b, "b"), **opts)
    elif matrix is not None:
        report = certify.certify_general(load_matrix(spec, matrix), _element(spec, b, "b"), **opts)
    elif sbox is not None:
        f = load_sbox_source(spec, sbox)
        report = certify.certify_via_value(f, _element(f.spec, b, "b"), **opts)
    else:
        raise ParseError("certify needs one of --matrix, --alpha or --sbox")
    _emit(config, "certify", report.to_json())
    if not report.decisive and not brute_check:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ── construct ──────────────────────────────────────────────────

def construct_pairs(spec: FieldSpec, b: FieldElement | None = None, all_b: bool = False,
                    limit: int | None = None) -> list[tuple[FieldElement, FieldElement]]:
    """(alpha, b) = (c * b^2, b) for every admissible c; b defaults to 1."""
    if spec.p == 2:
        cs = certify.m2_set(spec)
    else:
        quarter = certify.quarter(spec)
        cs = [m - quarter for m in certify.mp_set(spec)]
    cs = [c for c in cs if c]
    if all_b:
        bs = [FieldElement(spec, v) for v in range(1, spec.order)]
    else:
        bs = [b if b is not None else FieldElement(spec, 1)]
    pairs = []
    for b_el in bs:
        for c in cs:
            pairs.append((c * b_el * b_el, b_el))
            if limit is not None and len(pairs) >= limit:
                return pairs
    return pairs


def cmd_construct(config: RunConfig, b: str | None = None, all_b: bool = False, limit: int | None = None,
                  brute_check: bool = False) -> int:
    spec = config.spec
    b_el = parse_element(spec, b) if b is not None else None
    pairs = construct_pairs(spec, b_el, all_b=all_b, limit=limit)
    if not pairs:
        raise ConsistencyError(f"no admissible parameters in {spec}")
    for alpha, b_val in pairs:
        report = certify.certify_scalar(alpha, b_val, brute_check=brute_check,
                                        workers=config.worker_count, cap=config.cap_override)
        if report.overall != certify.Overall.NO_INVARIANT:
            raise ConsistencyError(f"constructed pair ({format_element(alpha)}, {format_element(b_val)}) "
                                   f"certifies as {report.overall.value}")
    payload = {
        "field": storage.field_to_json(spec),
        "count": len(pairs),
        "verified_by_scan": brute_check,
        "pairs": [{"alpha": format_element(a), "b": format_element(bb)} for a, bb in pairs],
    }
    _emit(config, "construct", payload)
    return EXIT_OK


# ── scan ───────────────────────────────────────────────────────

def load_sbox_source(spec: FieldSpec, source: str, fmt: str | None = None) -> scan.SBox:
    """builtin:aes, builtin:inv, builtin:identity, or a table file (json by suffix, hex otherwise)."""
    if source == "builtin:aes":
        return scan.build_aes_sbox()
    if source == "builtin:inv":
        return scan.inverse_sbox(spec)
    if source == "builtin:identity":
        return scan.identity_sbox(spec)
    if source.startswith("builtin:"):
        raise ParseError(f"unknown builtin table {source!r}")
    fmt = fmt or ("json" if source.endswith(".json") else "hex-table")
    return scan.load_sbox(source, fmt, spec)


def _parse_dims(dims: str | None) -> list[int] | None:
    if not dims:
        return None
    try:
        return [int(d) for d in dims.split(",") if d.strip()]
    except ValueError as e:
        raise ParseError(f"bad --dims {dims!r}") from e


def cmd_scan(config: RunConfig, sbox: str, fmt: str | None = None, dims: str | None = None,
             images: bool = False, min_card: int = 3, survey: bool = False) -> int:
    f = load_sbox_source(config.spec, sbox, fmt)
    opts = dict(workers=config.worker_count, cap=config.cap_override)
    if survey:
        rows = scan.coset_permutation_survey(f, nonempty_only=True, **opts)
        payload = {"sbox_id": f.digest, "field": storage.field_to_json(f.spec), "rows": scan.survey_to_json(rows)}
        _emit(config, "survey", payload)
        return EXIT_OK
    if images:
        report = scan.scan_affine_images(f, min_card=min_card, **opts)
    else:
        report = scan.scan_invariant(f, dims=_parse_dims(dims), **opts)
    logger.info("scan finished in %.1fs", report.elapsed)
    _emit(config, "scan", report.to_json())
    return EXIT_OK


# ── aes-demo ───────────────────────────────────────────────────

def _members(U: AffineSubspace) -> list[str]:
    if U.cardinality == U.spec.order:
        return ["whole field"]
    if U.cardinality > 16:
        return [f"{U.cardinality} elements"]
    return [format_element(FieldElement(U.spec, v)) for v in sorted(coset_values(U))]


def aes_chain(skip_scan: bool = False, workers: int = 1, cap: int | None = None) -> dict:
    spec = aes_field()
    A = aes_affine(spec)
    b = FieldElement(spec, scan.AES_B)
    f = scan.build_aes_sbox()
    s_of_b = f(b)
    t = inv0(b) * s_of_b
    steps = []
    for k in divisors(spec.n)[:-1]:
        value = frobenius(t, k)
        steps.append({"power": spec.p ** k, "value": format_element(value), "differs": value != t})
    general = certify.certify_general(A, b)
    chain = {
        "modulus": format_poly_coeffs(spec.modulus),
        "b": format_element(b),
        "b_poly": format_poly(b),
        "s_of_b": format_element(s_of_b),
        "s_of_b_poly": format_poly(s_of_b),
        "t": format_element(t),
        "t_poly": format_poly(t),
        "frobenius": steps,
        "t_in_f_circle": in_f_circle(t),
        "general_t": format_element(general.t_value),
        "verdict": general.nontrivial_verdict.value,
        "overall": general.overall.value,
        "fixed_points": [format_element(x) for x in general.fixed_points],
        "two_cycles": [[format_element(u), format_element(v)] for u, v in general.two_cycles],
        "scan": None,
    }
    if not skip_scan:
        report = scan.scan_invariant(f, workers=workers, cap=cap)
        chain["scan"] = {
            **report.to_json(),
            "found": [{**hit.to_json(), "members": _members(hit.subspace)} for hit in report.found],
        }
    return chain


def cmd_aes_demo(config: RunConfig, skip_scan: bool = False) -> int:
    chain = aes_chain(skip_scan=skip_scan, workers=config.worker_count, cap=config.cap_override)
    _emit(config, "aes_demo", chain)
    return EXIT_OK
