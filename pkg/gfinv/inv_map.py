"""
Affine subspaces whose image under field inversion is again affine.

Beyond the points and two-element sets, these are exactly the scaled subfields q * F_{p^k}
for k | n. `predicted_stable` builds that list directly; `brute_force_stable` is the
exhaustive oracle it is checked against. The oracle runs on plain Python integers and
shares no code with the numpy scanner in scan.py.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from . import storage
from .errors import ConsistencyError, PreconditionViolated, WrongCharacteristic
from .gf_core import FieldElement, FieldSpec, divisors, inv0
from .scan import SBox
from .subspaces import (
    AffineSubspace,
    LinearSubspace,
    affine_count,
    check_cap,
    coset_reps,
    coset_values,
    enumerate_affine,
    enumerate_linear,
    flat_from_values,
    gaussian_binomial,
    scale_subspace,
    subfield_as_subspace,
    to_json,
)
from .workers import partition, run_chunks

logger = logging.getLogger(__name__)


@dataclass
class StableSubspaceReport:
    spec: FieldSpec
    predicted: list[AffineSubspace]
    brute: list[AffineSubspace] | None = None
    agree: bool | None = None

    def to_json(self) -> dict:
        out = {
            "field": storage.field_to_json(self.spec),
            "predicted_count": len(self.predicted),
            "predicted": [to_json(U) for U in self.predicted],
        }
        if self.brute is not None:
            out["brute_count"] = len(self.brute)
            out["brute"] = [to_json(U) for U in self.brute]
            out["agree"] = self.agree
        return out


# ── Images ─────────────────────────────────────────────────────

def image_under_inv(U: AffineSubspace, cap: int | None = None) -> set[FieldElement]:
    check_cap(U.cardinality, cap, "subspace elements")
    spec = U.spec
    return {FieldElement(spec, spec.inv(v)) for v in coset_values(U)}


def _inverted_flat(spec: FieldSpec, values: list[int]) -> AffineSubspace | None:
    return flat_from_values(spec, [spec.inv(v) for v in values])


def classify_subspace(U: AffineSubspace, cap: int | None = None) -> AffineSubspace | None:
    """Inv(U) as an affine subspace, or None when it is not one. Total in |U|."""
    check_cap(U.cardinality, cap, "subspace elements")
    return _inverted_flat(U.spec, coset_values(U))


# ── Prediction ─────────────────────────────────────────────────

def theorem_count(spec: FieldSpec) -> int:
    """Number of distinct q * F_{p^k} with k | n and p^k > 2."""
    return sum((spec.order - 1) // (spec.p ** k - 1) for k in divisors(spec.n) if spec.p ** k > 2)


def predicted_stable(spec: FieldSpec) -> list[AffineSubspace]:
    found: dict[tuple, AffineSubspace] = {}
    for k in divisors(spec.n):
        if spec.p ** k <= 2:
            continue
        K = AffineSubspace(subfield_as_subspace(spec, k), FieldElement(spec, 0))
        before = len(found)
        for q in range(1, spec.order):
            U = scale_subspace(FieldElement(spec, q), K)
            found.setdefault(U.sort_key, U)
        expected = (spec.order - 1) // (spec.p ** k - 1)
        if len(found) - before != expected:
            raise ConsistencyError(f"{len(found) - before} scalings of F_{spec.p}^{k}, expected {expected}")
    if len(found) != theorem_count(spec):
        raise ConsistencyError(f"{len(found)} predicted subspaces, closed form gives {theorem_count(spec)}")
    return [found[key] for key in sorted(found)]


# ── Exhaustive oracle ──────────────────────────────────────────

def _stable_chunk(task) -> list[AffineSubspace]:
    spec, k, start, stop = task
    out = []
    for L in enumerate_linear(spec, k, start, stop, cap=math.inf):
        offsets = coset_values(AffineSubspace(L, FieldElement(spec, 0)))
        for rep in coset_reps(L):
            if _inverted_flat(spec, [spec.add(rep, s) for s in offsets]) is not None:
                out.append(AffineSubspace(L, FieldElement(spec, rep)))
    return out


def _stable_dims(spec: FieldSpec) -> list[int]:
    return [k for k in range(spec.n + 1) if spec.p ** k > 2]


def brute_force_stable(spec: FieldSpec, workers: int = 1, cap: int | None = None) -> list[AffineSubspace]:
    """Every affine U with |U| > 2 whose inverse image set is affine, in canonical order."""
    dims = _stable_dims(spec)
    check_cap(affine_count(spec, dims), cap, f"affine subspaces of {spec}")
    found: list[AffineSubspace] = []
    for k in dims:
        tasks = [(spec, k, start, stop) for start, stop in partition(gaussian_binomial(spec.n, k, spec.p), workers)]
        hits = [U for chunk in run_chunks(_stable_chunk, tasks, workers) for U in chunk]
        logger.info("dim %d: %d candidates, %d stable", k, affine_count(spec, [k]), len(hits))
        found.extend(hits)
    return sorted(found, key=lambda U: U.sort_key)


def classify(spec: FieldSpec, brute: bool = False, workers: int = 1, cap: int | None = None) -> StableSubspaceReport:
    report = StableSubspaceReport(spec=spec, predicted=predicted_stable(spec))
    if brute:
        report.brute = brute_force_stable(spec, workers=workers, cap=cap)
        report.agree = [U.sort_key for U in report.brute] == [U.sort_key for U in report.predicted]
    return report


# ── Properties of stable subspaces ─────────────────────────────

def eq1_identity_check(U: AffineSubspace) -> bool:
    """For every x in U, the inverses of x + L sum to zero (L the linear part of U)."""
    if U.cardinality <= 2 or classify_subspace(U) is None:
        raise PreconditionViolated("needs |U| > 2 with an affine image under inversion")
    spec = U.spec
    offsets = coset_values(AffineSubspace(U.linear, FieldElement(spec, 0)))
    for x in coset_values(U):
        total = 0
        for s in offsets:
            total = spec.add(total, spec.inv(spec.add(x, s)))
        if total:
            return False
    return True


def hua_lemma_closure_check(L: LinearSubspace) -> bool:
    """a^2 * inv0(b) in L for all a, b in L; requires Inv(L) to be linear too."""
    spec = L.spec
    U = AffineSubspace(L, FieldElement(spec, 0))
    image = classify_subspace(U)
    if image is None or not image.is_linear:
        raise PreconditionViolated("the closure law needs L and Inv(L) both linear")
    members = coset_values(U)
    for a in members:
        square = spec.mul(a, a)
        for b in members:
            if L.reduce_value(spec.mul(square, spec.inv(b))) != 0:
                return False
    return True


def is_apn_by_subspaces(f: SBox) -> bool:
    """No 2-dimensional affine subspace whose images sum to zero.

    For a permutation this says no 2-flat is mapped onto a 2-flat.
    """
    spec = f.spec
    if spec.p != 2:
        raise WrongCharacteristic("APN is a characteristic 2 notion here")
    if spec.n < 2:
        return True
    for U in enumerate_affine(spec, 2, cap=math.inf):
        total = 0
        for v in coset_values(U):
            total ^= f.table[v]
        if total == 0:
            return False
    return True


def image_of_scaled_subfield(q: FieldElement, k: int) -> AffineSubspace:
    """inv0(q) * F_{p^k}, the image of q * F_{p^k} under inversion."""
    K = AffineSubspace(subfield_as_subspace(q.spec, k), FieldElement(q.spec, 0))
    return scale_subspace(inv0(q), K)
