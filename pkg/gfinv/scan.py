"""
Brute-force oracle over S-box lookup tables.

For a linear subspace L, every element is reduced to its canonical coset representative
with a handful of vectorized row operations over the digit matrix of the whole field.
A coset a + L is invariant exactly when no member x has key(f(x)) != key(x), so one pass
per L settles all p^(n-k) cosets at once. Reported subspaces are re-verified element by
element before they leave this module.
"""
from __future__ import annotations

import hashlib
import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Callable

import numpy as np

from . import storage
from .errors import ConsistencyError, FieldMismatch, OutOfRangeEntry, ParseError, SingularMap, WrongLength
from .gf_core import FieldElement, FieldSpec, aes_field, format_element
from .linear_map import LinearMap, aes_affine
from .subspaces import (
    AffineSubspace,
    LinearSubspace,
    affine_count,
    check_cap,
    coset_values,
    enumerate_linear,
    flat_from_values,
    gaussian_binomial,
    to_json,
)
from .workers import partition, run_chunks

logger = logging.getLogger(__name__)

AES_B = 0x63


# ── S-boxes ────────────────────────────────────────────────────

@dataclass(frozen=True)
class SBox:
    """A map of GF(p^n) given by its table, indexed by canonical integer."""

    spec: FieldSpec
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.spec.order:
            raise WrongLength(f"table has {len(self.table)} entries, {self.spec} needs {self.spec.order}")
        bad = next((v for v in self.table if not 0 <= v < self.spec.order), None)
        if bad is not None:
            raise OutOfRangeEntry(f"table entry {bad} is not an element of {self.spec}")

    @cached_property
    def is_permutation(self) -> bool:
        return len(set(self.table)) == len(self.table)

    @cached_property
    def digest(self) -> str:
        payload = f"{self.spec.p},{self.spec.n}:" + ",".join(map(str, self.table))
        return hashlib.sha256(payload.encode("ascii")).hexdigest()

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.spec != self.spec:
            raise FieldMismatch(f"{x.spec} and {self.spec} differ")
        return FieldElement(self.spec, self.table[x.value])


def sbox_from_function(spec: FieldSpec, fn: Callable[[FieldElement], FieldElement]) -> SBox:
    return SBox(spec, tuple(fn(FieldElement(spec, v)).value for v in range(spec.order)))


def identity_sbox(spec: FieldSpec) -> SBox:
    return SBox(spec, tuple(range(spec.order)))


def inverse_sbox(spec: FieldSpec) -> SBox:
    return SBox(spec, tuple(spec.inv(v) for v in range(spec.order)))


def general_form_sbox(A: LinearMap, b: FieldElement) -> SBox:
    """x -> A(inv0(x)) + b."""
    if not A.is_invertible:
        raise SingularMap(f"linear map has rank {A.rank} < {A.spec.n}")
    if b.spec != A.spec:
        raise FieldMismatch(f"{b.spec} and {A.spec} differ")
    spec = A.spec
    return SBox(spec, tuple(spec.add(A.apply_value(spec.inv(v)), b.value) for v in range(spec.order)))


def scalar_form_sbox(alpha: FieldElement, b: FieldElement) -> SBox:
    """x -> alpha * inv0(x) + b."""
    if alpha.spec != b.spec:
        raise FieldMismatch(f"{alpha.spec} and {b.spec} differ")
    spec = alpha.spec
    return SBox(spec, tuple(spec.add(spec.mul(alpha.value, spec.inv(v)), b.value) for v in range(spec.order)))


def build_aes_sbox() -> SBox:
    spec = aes_field()
    return general_form_sbox(aes_affine(spec), FieldElement(spec, AES_B))


def load_sbox(path: str | Path, fmt: str = "hex-table", spec: FieldSpec | None = None) -> SBox:
    """Hex tables carry no field, so they default to the AES field; JSON tables name their own."""
    if fmt == "hex-table":
        return SBox(spec or aes_field(), tuple(storage.read_hex_table(path)))
    if fmt == "json":
        stored, table = storage.read_json_table(path)
        target = stored or spec
        if target is None:
            raise ParseError(f"{path} names no field and none was given")
        return SBox(target, tuple(table))
    raise ParseError(f"unknown table format {fmt!r}")


# ── Reports ────────────────────────────────────────────────────

class FindingKind(str, Enum):
    INVARIANT = "Invariant"
    AFFINE_IMAGE = "AffineImage"


@dataclass(frozen=True)
class Finding:
    subspace: AffineSubspace
    kind: FindingKind
    image: AffineSubspace | None = None

    @property
    def small(self) -> bool:
        """Points and two-element sets, unless the set is the whole field."""
        U = self.subspace
        return U.cardinality <= 2 and U.cardinality < U.spec.order

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "small": self.small, "subspace": to_json(self.subspace)}
        if self.image is not None:
            out["image"] = to_json(self.image)
        return out


@dataclass
class ScanReport:
    sbox_id: str
    spec: FieldSpec
    found: list[Finding]
    dims_scanned: list[int]
    subspace_count_scanned: int
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    def subspaces(self, kind: FindingKind | None = None) -> list[AffineSubspace]:
        return [f.subspace for f in self.found if kind is None or f.kind == kind]

    def to_json(self) -> dict:
        """JSON form without `elapsed`; identical inputs give identical reports."""
        return {
            "sbox_id": self.sbox_id,
            "field": storage.field_to_json(self.spec),
            "dims_scanned": self.dims_scanned,
            "subspace_count_scanned": self.subspace_count_scanned,
            "found": [f.to_json() for f in self.found],
            **self.extra,
        }


# ── Vectorized coset keys ──────────────────────────────────────

@lru_cache(maxsize=16)
def _digit_matrix(spec: FieldSpec) -> np.ndarray:
    D = np.array([spec.to_digits(v) for v in range(spec.order)], dtype=np.int64)
    D.setflags(write=False)
    return D


@lru_cache(maxsize=16)
def _place_values(spec: FieldSpec) -> np.ndarray:
    return spec.p ** np.arange(spec.n, dtype=np.int64)


def coset_keys(L: LinearSubspace) -> np.ndarray:
    """keys[v] = canonical integer of the representative of v + L."""
    spec = L.spec
    D = _digit_matrix(spec)
    for row, c in zip(L.rows, L.pivots):
        D = (D - D[:, c:c + 1] * np.asarray(row, dtype=np.int64)) % spec.p
    return D @ _place_values(spec)


def _grouped_cosets(L: LinearSubspace) -> tuple[np.ndarray, np.ndarray]:
    """(keys, groups): groups[i] lists the members of the i-th coset in ascending key order."""
    keys = coset_keys(L)
    order = np.argsort(keys, kind="stable")
    return keys, order.reshape(-1, L.cardinality)


def _check_dims(spec: FieldSpec, dims) -> list[int]:
    if dims is None:
        return list(range(spec.n + 1))
    out = sorted(set(int(k) for k in dims))
    if any(not 0 <= k <= spec.n for k in out):
        raise ParseError(f"dimensions must lie in 0..{spec.n}, got {out}")
    return out


def _linear_tasks(f: SBox, dims: list[int], workers: int) -> list[tuple]:
    spec = f.spec
    tasks = []
    for k in dims:
        for start, stop in partition(gaussian_binomial(spec.n, k, spec.p), workers):
            tasks.append((f, k, start, stop))
    return tasks


# ── Chunk workers (top level so the process pool can pickle them) ──

def _invariant_chunk(task) -> list[AffineSubspace]:
    f, k, start, stop = task
    spec = f.spec
    table = f.array
    found = []
    for L in enumerate_linear(spec, k, start, stop, cap=math.inf):
        keys = coset_keys(L)
        moved = keys[table] != keys
        for rep in np.setdiff1d(keys, keys[moved]).tolist():
            found.append(AffineSubspace(L, FieldElement(spec, rep)))
    return found


def _image_chunk(task) -> list[Finding]:
    f, k, start, stop = task
    spec = f.spec
    table = f.array
    found = []
    for L in enumerate_linear(spec, k, start, stop, cap=math.inf):
        keys, groups = _grouped_cosets(L)
        for members in groups.tolist():
            image = flat_from_values(spec, table[members].tolist())
            if image is not None:
                rep = FieldElement(spec, int(keys[members[0]]))
                found.append(Finding(AffineSubspace(L, rep), FindingKind.AFFINE_IMAGE, image))
    return found


def _survey_chunk(task) -> list[tuple[LinearSubspace, list[tuple[int, int]]]]:
    f, k, start, stop = task
    spec = f.spec
    table = f.array
    size = spec.p ** k
    out = []
    for L in enumerate_linear(spec, k, start, stop, cap=math.inf):
        keys, groups = _grouped_cosets(L)
        images = table[groups]
        image_keys = keys[images]
        onto = (image_keys == image_keys[:, :1]).all(axis=1)
        if not f.is_permutation:
            onto &= np.array([len(set(row)) == size for row in images.tolist()], dtype=bool)
        pairs = [(int(keys[groups[i, 0]]), int(image_keys[i, 0])) for i in np.flatnonzero(onto).tolist()]
        out.append((L, pairs))
    return out


# ── Scans ──────────────────────────────────────────────────────

def verify_invariant(f: SBox, U: AffineSubspace) -> bool:
    """f(U) within U by direct evaluation, members visited in ascending order."""
    values = sorted(coset_values(U))
    for v in values:
        if U.linear.reduce_value(f.table[v]) != U.rep.value:
            return False
    if f.is_permutation and len({f.table[v] for v in values}) != len(values):
        raise ConsistencyError(f"permutation collapses {to_json(U)}")
    return True


def scan_invariant(f: SBox, dims=None, workers: int = 1, cap: int | None = None) -> ScanReport:
    """Every affine U in the requested dimensions with f(u) in U for all u in U."""
    spec = f.spec
    dims = _check_dims(spec, dims)
    total = affine_count(spec, dims)
    check_cap(total, cap, f"invariant scan of {spec}")
    t0 = time.perf_counter()
    found: list[AffineSubspace] = []
    for k in dims:
        chunk_results = run_chunks(_invariant_chunk, _linear_tasks(f, [k], workers), workers)
        hits = [U for chunk in chunk_results for U in chunk]
        logger.info("dim %d: %d candidates, %d invariant", k, affine_count(spec, [k]), len(hits))
        found.extend(hits)
    found.sort(key=lambda U: U.sort_key)
    for U in found:
        if not verify_invariant(f, U):
            raise ConsistencyError(f"scanner reported {to_json(U)} but direct evaluation disagrees")
    return ScanReport(
        sbox_id=f.digest,
        spec=spec,
        found=[Finding(U, FindingKind.INVARIANT) for U in found],
        dims_scanned=dims,
        subspace_count_scanned=total,
        elapsed=time.perf_counter() - t0,
    )


def scan_affine_images(f: SBox, min_card: int = 3, workers: int = 1, cap: int | None = None) -> ScanReport:
    """Every affine U with |U| >= min_card whose image set is again an affine subspace."""
    spec = f.spec
    dims = [k for k in range(spec.n + 1) if spec.p ** k >= min_card]
    total = affine_count(spec, dims)
    check_cap(total, cap, f"image scan of {spec}")
    t0 = time.perf_counter()
    found: list[Finding] = []
    for k in dims:
        chunk_results = run_chunks(_image_chunk, _linear_tasks(f, [k], workers), workers)
        hits = [hit for chunk in chunk_results for hit in chunk]
        logger.info("dim %d: %d candidates, %d affine images", k, affine_count(spec, [k]), len(hits))
        found.extend(hits)
    found.sort(key=lambda hit: hit.subspace.sort_key)
    return ScanReport(
        sbox_id=f.digest,
        spec=spec,
        found=found,
        dims_scanned=dims,
        subspace_count_scanned=total,
        elapsed=time.perf_counter() - t0,
        extra={"min_card": min_card},
    )


def coset_permutation_survey(f: SBox, workers: int = 1, cap: int | None = None,
                             nonempty_only: bool = False) -> list[tuple[LinearSubspace, list[tuple[FieldElement, FieldElement]]]]:
    """For each proper nonzero linear L, the coset pairs (u, v) with f(u + L) = v + L."""
    spec = f.spec
    dims = list(range(1, spec.n))
    check_cap(sum(gaussian_binomial(spec.n, k, spec.p) for k in dims), cap, f"coset survey of {spec}")
    out = []
    for k in dims:
        chunk_results = run_chunks(_survey_chunk, _linear_tasks(f, [k], workers), workers)
        rows = [row for chunk in chunk_results for row in chunk]
        logger.info("dim %d: %d subspaces, %d with a coset mapped onto a coset",
                    k, len(rows), sum(1 for _, pairs in rows if pairs))
        for L, pairs in rows:
            if pairs or not nonempty_only:
                out.append((L, [(FieldElement(spec, u), FieldElement(spec, v)) for u, v in pairs]))
    return out


def survey_to_json(survey) -> list[dict]:
    return [
        {
            "linear": to_json(L),
            "pairs": [[format_element(u), format_element(v)] for u, v in pairs],
        }
        for L, pairs in survey
    ]
