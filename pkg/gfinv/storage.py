"""
File I/O: field description files, S-box tables (hex and JSON), run defaults and report
output. Everything on disk is UTF-8 JSON written with indent=2, except the hex table.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING

from .errors import ParseError
from .gf_core import FieldSpec, make_field

if TYPE_CHECKING:
    from .scan import SBox

BASE_DIR = Path(__file__).resolve().parent.parent
RUN_DEFAULTS_PATH = BASE_DIR / "config.json"
FIELDS_DIR = BASE_DIR / "fields"


def _read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e


def _read_json(path: str | Path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e}") from e


def _write_text(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot write {path}: {e}") from e


def write_json(path: str | Path, data) -> None:
    _write_text(path, json.dumps(data, indent=2, ensure_ascii=False) + "\n")


# ── Run defaults ───────────────────────────────────────────────

def load_run_defaults(path: str | Path | None = None) -> dict:
    target = Path(path) if path else RUN_DEFAULTS_PATH
    if not target.exists():
        return {}
    data = _read_json(target)
    if not isinstance(data, dict):
        raise ParseError(f"{target} must hold a JSON object")
    return data


# ── Fields ─────────────────────────────────────────────────────

def field_to_json(spec: FieldSpec) -> dict:
    return {"p": spec.p, "n": spec.n, "modulus": list(spec.modulus)}


def field_from_json(data) -> FieldSpec:
    if not isinstance(data, dict):
        raise ParseError("a field description must be a JSON object")
    try:
        p = int(data["p"])
        n = int(data["n"])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"field description needs integer 'p' and 'n': {e}") from e
    modulus = data.get("modulus")
    if modulus is not None and not isinstance(modulus, list):
        raise ParseError("'modulus' must be a list of coefficients, constant term first")
    return make_field(p, n, modulus)


def load_field(path: str | Path) -> FieldSpec:
    """Reads a field file. A bare name such as 'aes' resolves to fields/<name>.json."""
    target = Path(path)
    if not target.exists() and not target.suffix:
        target = FIELDS_DIR / f"{path}.json"
    return field_from_json(_read_json(target))


def save_field(path: str | Path, spec: FieldSpec) -> None:
    write_json(path, field_to_json(spec))


# ── S-box tables ───────────────────────────────────────────────

def read_hex_table(path: str | Path) -> list[int]:
    values = []
    for token in _read_text(path).split():
        digits = token.lower().removeprefix("0x").rstrip(",")
        try:
            values.append(int(digits, 16))
        except ValueError as e:
            raise ParseError(f"bad table entry {token!r} in {path}") from e
    return values


def read_json_table(path: str | Path) -> tuple[FieldSpec | None, list[int]]:
    data = _read_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("table"), list):
        raise ParseError(f"{path} must hold an object with a 'table' list")
    spec = field_from_json(data["field"]) if "field" in data else None
    try:
        table = [int(v) for v in data["table"]]
    except (TypeError, ValueError) as e:
        raise ParseError(f"non-integer table entry in {path}") from e
    return spec, table


def save_sbox(path: str | Path, sbox: SBox, fmt: str = "json") -> None:
    if fmt == "json":
        write_json(path, {"field": field_to_json(sbox.spec), "table": list(sbox.table)})
        return
    if fmt != "hex-table":
        raise ParseError(f"unknown table format {fmt!r}")
    width = max(2, -(-(sbox.spec.order - 1).bit_length() // 4))
    lines = []
    for start in range(0, len(sbox.table), 16):
        lines.append(" ".join(f"0x{v:0{width}X}" for v in sbox.table[start:start + 16]))
    _write_text(path, "\n".join(lines) + "\n")


# ── Output ─────────────────────────────────────────────────────

def emit(text: str, output: str | Path | None) -> None:
    """Print to standard output, or write to a file when an output path is configured."""
    if output is None or str(output) == "-":
        print(text)
        return
    _write_text(output, text if text.endswith("\n") else text + "\n")
