"""
F_p-linear and affine subspaces of GF(p^n).

A linear subspace is stored as its reduced row echelon basis (pivot = lowest nonzero
coordinate, pivot columns increasing), so two subspaces are equal exactly when their
bases are. An affine subspace is a linear part plus the unique coset representative
whose pivot coordinates are all zero.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from . import settings
from .errors import CapExceeded, EmptySet, FieldMismatch, NotADivisor, ConsistencyError, ZeroScalar
from .gf_core import FieldElement, FieldSpec, frobenius


# ── Counting ───────────────────────────────────────────────────

def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional F_p-space."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def affine_count(spec: FieldSpec, dims: Iterable[int]) -> int:
    return sum(gaussian_binomial(spec.n, k, spec.p) * spec.p ** (spec.n - k) for k in dims)


def check_cap(count: int, cap: int | None, what: str):
    limit = settings.ENUMERATION_CAP if cap is None else cap
    if count > limit:
        raise CapExceeded(f"{what}: {count} exceeds the enumeration cap {limit}")


# ── Types ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class LinearSubspace:
    spec: FieldSpec
    rows: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def cardinality(self) -> int:
        return self.spec.p ** self.dim

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, a in enumerate(row) if a) for row in self.rows)

    @property
    def basis(self) -> list[FieldElement]:
        return [FieldElement(self.spec, self.spec.from_digits(row)) for row in self.rows]

    @cached_property
    def sort_key(self) -> tuple:
        return (self.dim, tuple(self.spec.from_digits(row) for row in self.rows))

    def reduce(self, digits) -> tuple[int, ...]:
        """Zero the pivot coordinates of a vector by subtracting basis rows."""
        p = self.spec.p
        vec = list(digits)
        for row, c in zip(self.rows, self.pivots):
            f = vec[c]
            if f:
                vec = [(a - f * r) % p for a, r in zip(vec, row)]
        return tuple(vec)

    def reduce_value(self, value: int) -> int:
        return self.spec.from_digits(self.reduce(self.spec.to_digits(value)))


@dataclass(frozen=True)
class AffineSubspace:
    linear: LinearSubspace
    rep: FieldElement

    @property
    def spec(self) -> FieldSpec:
        return self.linear.spec

    @property
    def dim(self) -> int:
        return self.linear.dim

    @property
    def cardinality(self) -> int:
        return self.linear.cardinality

    @property
    def is_linear(self) -> bool:
        return self.rep.value == 0

    @cached_property
    def sort_key(self) -> tuple:
        return self.linear.sort_key + (self.rep.value,)


# ── Incremental elimination ────────────────────────────────────

class Echelon:
    """Row-reduced basis grown one vector at a time; rows keyed by pivot column."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.rows: dict[int, list[int]] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def insert(self, digits) -> bool:
        p = self.spec.p
        vec = list(digits)
        for c, row in self.rows.items():
            f = vec[c]
            if f:
                vec = [(a - f * r) % p for a, r in zip(vec, row)]
        c = next((i for i, a in enumerate(vec) if a), None)
        if c is None:
            return False
        scale = pow(vec[c], -1, p)
        vec = [a * scale % p for a in vec]
        for pc, row in self.rows.items():
            f = row[c]
            if f:
                self.rows[pc] = [(a - f * r) % p for a, r in zip(row, vec)]
        self.rows[c] = vec
        return True

    def subspace(self) -> LinearSubspace:
        return LinearSubspace(self.spec, tuple(tuple(self.rows[c]) for c in sorted(self.rows)))


# ── Construction ───────────────────────────────────────────────

def _field_of(items: Iterable[FieldElement], spec: FieldSpec | None = None) -> FieldSpec | None:
    for x in items:
        if spec is None:
            spec = x.spec
        elif x.spec != spec:
            raise FieldMismatch(f"{x.spec} and {spec} differ")
    return spec


def span(vectors: list[FieldElement], spec: FieldSpec | None = None) -> LinearSubspace:
    """F_p-span of `vectors`. An empty list gives the zero subspace of `spec`, which is then required."""
    spec = _field_of(vectors, spec)
    if spec is None:
        raise EmptySet("span of an empty list needs an explicit field")
    ech = Echelon(spec)
    for v in vectors:
        if ech.dim == spec.n:
            break
        ech.insert(v.coeffs)
    return ech.subspace()


def zero_subspace(spec: FieldSpec) -> LinearSubspace:
    return LinearSubspace(spec, ())


def whole_space(spec: FieldSpec) -> LinearSubspace:
    return LinearSubspace(spec, tuple(tuple(int(i == j) for j in range(spec.n)) for i in range(spec.n)))


def canonicalize_affine(point: FieldElement, linear: LinearSubspace) -> AffineSubspace:
    if point.spec != linear.spec:
        raise FieldMismatch(f"{point.spec} and {linear.spec} differ")
    return AffineSubspace(linear, FieldElement(point.spec, linear.reduce_value(point.value)))


def coset_values(U: AffineSubspace) -> list[int]:
    """Canonical integers of the elements of U, rep + sum c_i b_i over c in lexicographic order."""
    spec = U.spec
    out = [U.rep.value]
    # last basis row varies fastest
    for row in reversed(U.linear.rows):
        r = spec.from_digits(row)
        steps = [spec.scale(c, r) for c in range(spec.p)]
        out = [spec.add(v, s) for s in steps for v in out]
    return out


def elements(U: AffineSubspace, cap: int | None = None) -> list[FieldElement]:
    check_cap(U.cardinality, cap, "subspace elements")
    return [FieldElement(U.spec, v) for v in coset_values(U)]


def contains(U: AffineSubspace, x: FieldElement) -> bool:
    if x.spec != U.spec:
        raise FieldMismatch(f"{x.spec} and {U.spec} differ")
    return U.linear.reduce_value(x.value) == U.rep.value


def flat_from_values(spec: FieldSpec, values: Iterable[int]) -> AffineSubspace | None:
    """The affine subspace whose elements are exactly `values`, or None if they do not form one."""
    distinct = sorted(set(values))
    if not distinct:
        raise EmptySet("an affine subspace is never empty")
    size = len(distinct)
    target = round(math.log(size, spec.p))
    if spec.p ** target != size:
        return None
    origin = distinct[0]
    ech = Echelon(spec)
    for v in distinct[1:]:
        ech.insert(spec.to_digits(spec.sub(v, origin)))
        if ech.dim > target:
            return None
    linear = ech.subspace()
    return AffineSubspace(linear, FieldElement(spec, linear.reduce_value(origin)))


def as_affine_subspace(S: set[FieldElement] | Iterable[FieldElement]) -> AffineSubspace | None:
    items = list(S)
    spec = _field_of(items)
    if spec is None:
        raise EmptySet("an affine subspace is never empty")
    return flat_from_values(spec, (x.value for x in items))


# ── Enumeration ────────────────────────────────────────────────

def _free_positions(n: int, pivots: tuple[int, ...]) -> list[tuple[int, int]]:
    pivot_set = set(pivots)
    return [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivot_set]


def _build_linear(spec: FieldSpec, pivots: tuple[int, ...], free: list[tuple[int, int]], offset: int) -> LinearSubspace:
    p = spec.p
    rows = [[0] * spec.n for _ in pivots]
    for i, c in enumerate(pivots):
        rows[i][c] = 1
    for i, j in reversed(free):
        offset, d = divmod(offset, p)
        rows[i][j] = d
    return LinearSubspace(spec, tuple(tuple(r) for r in rows))


def _check_dim(spec: FieldSpec, k: int):
    if not 0 <= k <= spec.n:
        raise ValueError(f"dimension {k} outside 0..{spec.n}")


def enumerate_linear(spec: FieldSpec, k: int, start: int = 0, stop: int | None = None,
                     cap: int | None = None) -> Iterator[LinearSubspace]:
    """Every k-dimensional subspace once: pivot sets in lexicographic order, then free entries.

    `start`/`stop` select an index range of the full stream so workers can split it.
    """
    _check_dim(spec, k)
    total = gaussian_binomial(spec.n, k, spec.p)
    check_cap(total, cap, f"{k}-dimensional linear subspaces of {spec}")
    stop = total if stop is None else min(stop, total)
    index = 0
    for pivots in itertools.combinations(range(spec.n), k):
        if index >= stop:
            return
        free = _free_positions(spec.n, pivots)
        block = spec.p ** len(free)
        if index + block > start:
            for offset in range(max(start - index, 0), min(stop - index, block)):
                yield _build_linear(spec, pivots, free, offset)
        index += block


def coset_reps(L: LinearSubspace) -> list[int]:
    """Canonical representatives of F / L, ascending."""
    spec = L.spec
    pivot_set = set(L.pivots)
    open_cols = [j for j in range(spec.n) if j not in pivot_set]
    reps = []
    for vals in itertools.product(range(spec.p), repeat=len(open_cols)):
        vec = [0] * spec.n
        for j, d in zip(open_cols, vals):
            vec[j] = d
        reps.append(spec.from_digits(vec))
    return sorted(reps)


def enumerate_affine(spec: FieldSpec, k: int, start: int = 0, stop: int | None = None,
                     cap: int | None = None) -> Iterator[AffineSubspace]:
    """Linear part major (same order and index range as enumerate_linear), canonical rep minor."""
    _check_dim(spec, k)
    check_cap(affine_count(spec, [k]), cap, f"{k}-dimensional affine subspaces of {spec}")
    for L in enumerate_linear(spec, k, start, stop, cap=math.inf):
        for rep in coset_reps(L):
            yield AffineSubspace(L, FieldElement(spec, rep))


# ── Field-structured subspaces ─────────────────────────────────

def scale_subspace(q: FieldElement, U: AffineSubspace) -> AffineSubspace:
    if not q:
        raise ZeroScalar("cannot scale a subspace by 0")
    if q.spec != U.spec:
        raise FieldMismatch(f"{q.spec} and {U.spec} differ")
    linear = span([q * b for b in U.linear.basis], spec=U.spec)
    return canonicalize_affine(q * U.rep, linear)


def kernel(spec: FieldSpec, images: list[tuple[int, ...]]) -> LinearSubspace:
    """Kernel of the F_p-linear map sending the j-th coordinate vector to images[j]."""
    p, n = spec.p, spec.n
    pending = [list(img) + [int(i == j) for i in range(n)] for j, img in enumerate(images)]
    pivot_rows: dict[int, list[int]] = {}
    null = Echelon(spec)
    for vec in pending:
        for c, row in pivot_rows.items():
            f = vec[c]
            if f:
                vec = [(a - f * r) % p for a, r in zip(vec, row)]
        c = next((i for i in range(n) if vec[i]), None)
        if c is None:
            null.insert(vec[n:])
            continue
        scale = pow(vec[c], -1, p)
        pivot_rows[c] = [a * scale % p for a in vec]
    return null.subspace()


def subfield_as_subspace(spec: FieldSpec, k: int) -> LinearSubspace:
    """F_{p^k} as the fixed space of x -> x^(p^k), computed as a kernel over F_p."""
    if k < 1 or spec.n % k:
        raise NotADivisor(f"{k} does not divide {spec.n}")
    images = []
    for j in range(spec.n):
        e = FieldElement(spec, spec.p ** j)
        images.append(tuple((a - b) % spec.p for a, b in zip(frobenius(e, k).coeffs, e.coeffs)))
    K = kernel(spec, images)
    if K.dim != k:
        raise ConsistencyError(f"fixed space of Frobenius^{k} has dimension {K.dim}, expected {k}")
    zero_coset = AffineSubspace(K, FieldElement(spec, 0))
    for a in K.basis:
        for b in K.basis:
            if not contains(zero_coset, a * b):
                raise ConsistencyError(f"F_{spec.p}^{k} subspace is not closed under multiplication")
    return K


def sum_of_elements(L: LinearSubspace, cap: int | None = None) -> FieldElement:
    check_cap(L.cardinality, cap, "subspace elements")
    spec = L.spec
    total = 0
    for v in coset_values(AffineSubspace(L, FieldElement(spec, 0))):
        total = spec.add(total, v)
    return FieldElement(spec, total)


# ── Serialization ──────────────────────────────────────────────

def to_json(U: AffineSubspace | LinearSubspace) -> dict:
    if isinstance(U, LinearSubspace):
        U = AffineSubspace(U, FieldElement(U.spec, 0))
    return {
        "dim": U.dim,
        "basis": [U.spec.from_digits(row) for row in U.linear.rows],
        "rep": U.rep.value,
    }


def from_json(spec: FieldSpec, data: dict) -> AffineSubspace:
    linear = span([FieldElement(spec, int(v)) for v in data.get("basis", [])], spec=spec)
    if linear.dim != int(data.get("dim", linear.dim)):
        raise ConsistencyError(f"basis spans dimension {linear.dim}, record says {data['dim']}")
    return canonicalize_affine(FieldElement(spec, int(data.get("rep", 0))), linear)
