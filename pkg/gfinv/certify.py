"""
Certification of S-boxes x -> A(inv0(x)) + b and x -> alpha * inv0(x) + b against invariant
affine subspaces.

For the general form the test t = b^-1 * A(b^-1) in F° is sufficient only, so a failing
test yields Inconclusive and never claims existence. For the scalar form the criterion on
c = alpha * b^-2 is exact, and the report also carries the fixed points, the two-cycles and
a verified witness subspace whenever c lies in a proper subfield.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from . import storage
from .errors import AlphaNotInFCircle, ConsistencyError, FieldMismatch, SingularMap, WrongCharacteristic, ZeroAlpha, ZeroB
from .gf_core import (
    FieldElement,
    FieldSpec,
    divisors,
    format_element,
    in_f_circle,
    inv0,
    is_square,
    neg,
    one,
    subfield_divisors,
    trace,
)
from .linear_map import LinearMap
from .scan import (
    SBox,
    general_form_sbox,
    scalar_form_sbox,
    scan_invariant,
    verify_invariant,
)
from .subspaces import (
    AffineSubspace,
    canonicalize_affine,
    flat_from_values,
    scale_subspace,
    subfield_as_subspace,
    to_json,
    whole_space,
    zero_subspace,
)

logger = logging.getLogger(__name__)


class NontrivialVerdict(str, Enum):
    CERTIFIED_NONE = "CertifiedNone"
    INCONCLUSIVE = "Inconclusive"
    EXISTS_WITH_WITNESS = "ExistsWithWitness"


class Overall(str, Enum):
    NO_INVARIANT = "NoInvariantExceptWholeField"
    HAS_SMALL = "HasSmallInvariant"
    HAS_NONTRIVIAL = "HasNontrivialInvariant"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class CertReport:
    spec: FieldSpec
    form: dict
    t_value: FieldElement
    t_divisors: set[int]
    nontrivial_verdict: NontrivialVerdict
    witness: AffineSubspace | None
    fixed_points: list[FieldElement]
    two_cycles: list[tuple[FieldElement, FieldElement]]
    overall: Overall
    value_form_t: FieldElement | None = None
    small_cases_checked: bool = True
    degenerate_n1: bool = False
    ground_truth: Overall | None = None
    brute: list[AffineSubspace] | None = None

    @property
    def decisive(self) -> bool:
        return self.overall != Overall.INCONCLUSIVE

    def to_json(self) -> dict:
        out = {
            "field": storage.field_to_json(self.spec),
            "form": self.form,
            "t_value": format_element(self.t_value),
            "t_divisors": sorted(self.t_divisors),
            "nontrivial_verdict": self.nontrivial_verdict.value,
            "witness": to_json(self.witness) if self.witness is not None else None,
            "fixed_points": [format_element(x) for x in self.fixed_points],
            "two_cycles": [[format_element(u), format_element(v)] for u, v in self.two_cycles],
            "overall": self.overall.value,
            "small_cases_checked": self.small_cases_checked,
            "degenerate_n1": self.degenerate_n1,
        }
        if self.value_form_t is not None:
            out["value_form_t"] = format_element(self.value_form_t)
        if self.ground_truth is not None:
            out["ground_truth"] = self.ground_truth.value
            out["brute"] = [to_json(U) for U in self.brute or []]
        return out


# ── Small invariants ───────────────────────────────────────────

def fixed_points(f: SBox) -> list[FieldElement]:
    return [FieldElement(f.spec, v) for v, w in enumerate(f.table) if v == w]


def two_cycles(f: SBox) -> list[tuple[FieldElement, FieldElement]]:
    """Unordered pairs u < v with f(u) = v and f(v) = u."""
    spec = f.spec
    return [
        (FieldElement(spec, u), FieldElement(spec, v))
        for u, v in enumerate(f.table)
        if u < v and f.table[v] == u
    ]


def _small_blocking(spec: FieldSpec, fixed: list, cycles: list) -> bool:
    """Whether the fixed points or two-cycles give an invariant affine subspace other than the whole field."""
    if fixed and spec.order > 1:
        return True
    # two-element sets are affine subspaces only in characteristic 2
    return bool(cycles) and spec.p == 2 and spec.order > 2


def _ground_truth(spec: FieldSpec, found: list[AffineSubspace]) -> Overall:
    if any(2 < U.cardinality < spec.order for U in found):
        return Overall.HAS_NONTRIVIAL
    if any(U.cardinality < spec.order for U in found):
        return Overall.HAS_SMALL
    return Overall.NO_INVARIANT


# ── General form ───────────────────────────────────────────────

def _check_general(A: LinearMap, b: FieldElement):
    if not A.is_invertible:
        raise SingularMap(f"linear map has rank {A.rank} < {A.spec.n}")
    if b.spec != A.spec:
        raise FieldMismatch(f"{b.spec} and {A.spec} differ")
    if not b:
        raise ZeroB("b must be nonzero")


def apply_form(A: LinearMap, b: FieldElement, x: FieldElement) -> FieldElement:
    """A(inv0(x)) + b."""
    if not A.is_invertible:
        raise SingularMap(f"linear map has rank {A.rank} < {A.spec.n}")
    return A(inv0(x)) + b


def _verdict_for(t: FieldElement) -> NontrivialVerdict:
    return NontrivialVerdict.CERTIFIED_NONE if in_f_circle(t) else NontrivialVerdict.INCONCLUSIVE


def _finish_table_report(report: CertReport, f: SBox | None, brute_check: bool, workers: int,
                         cap: int | None) -> CertReport:
    """Fill small cases from the table, settle the overall verdict, and optionally run the scanner."""
    spec = report.spec
    if f is None:
        report.small_cases_checked = False
    else:
        report.fixed_points = fixed_points(f)
        report.two_cycles = two_cycles(f)
    blocking = _small_blocking(spec, report.fixed_points, report.two_cycles)

    if report.nontrivial_verdict == NontrivialVerdict.CERTIFIED_NONE:
        if blocking:
            report.overall = Overall.HAS_SMALL
        elif report.small_cases_checked:
            report.overall = Overall.NO_INVARIANT
        else:
            report.overall = Overall.INCONCLUSIVE
    else:
        report.overall = Overall.INCONCLUSIVE

    if brute_check and f is not None:
        found = scan_invariant(f, workers=workers, cap=cap).subspaces()
        report.brute = found
        report.ground_truth = _ground_truth(spec, found)
        nontrivial = [U for U in found if 2 < U.cardinality < spec.order]
        if report.nontrivial_verdict == NontrivialVerdict.CERTIFIED_NONE and nontrivial:
            raise ConsistencyError(f"certified map has invariant subspace {to_json(nontrivial[0])}")
        if report.nontrivial_verdict == NontrivialVerdict.INCONCLUSIVE and nontrivial:
            report.nontrivial_verdict = NontrivialVerdict.EXISTS_WITH_WITNESS
            report.witness = nontrivial[0]
            report.overall = Overall.HAS_NONTRIVIAL
    return report


def certify_general(A: LinearMap, b: FieldElement, brute_check: bool = False, workers: int = 1,
                    cap: int | None = None) -> CertReport:
    _check_general(A, b)
    spec = A.spec
    b_inv = inv0(b)
    t = b_inv * A(b_inv)
    f = general_form_sbox(A, b) if spec.tabulated else None
    report = CertReport(
        spec=spec,
        form={"kind": "general", "matrix": A.to_json(), "b": format_element(b)},
        t_value=t,
        t_divisors=subfield_divisors(t),
        nontrivial_verdict=_verdict_for(t),
        witness=None,
        fixed_points=[],
        two_cycles=[],
        overall=Overall.INCONCLUSIVE,
        value_form_t=b_inv * apply_form(A, b, b),
        degenerate_n1=spec.n == 1,
    )
    logger.debug("general form: t = %s, divisors %s", format_element(t), sorted(report.t_divisors))
    return _finish_table_report(report, f, brute_check, workers, cap)


def certify_via_value(f: SBox, b: FieldElement, brute_check: bool = False, workers: int = 1,
                      cap: int | None = None) -> CertReport:
    """Tests u = b^-1 * f(b), which equals t + 1 when f is built from (A, b)."""
    if b.spec != f.spec:
        raise FieldMismatch(f"{b.spec} and {f.spec} differ")
    if not b:
        raise ZeroB("b must be nonzero")
    u = inv0(b) * f(b)
    report = CertReport(
        spec=f.spec,
        form={"kind": "table", "sbox_id": f.digest, "b": format_element(b)},
        t_value=u,
        t_divisors=subfield_divisors(u),
        nontrivial_verdict=_verdict_for(u),
        witness=None,
        fixed_points=[],
        two_cycles=[],
        overall=Overall.INCONCLUSIVE,
        value_form_t=u,
        degenerate_n1=f.spec.n == 1,
    )
    return _finish_table_report(report, f, brute_check, workers, cap)


def repair_transform(A: LinearMap, b: FieldElement, alpha: FieldElement) -> LinearMap:
    """A'(x) = alpha * beta * A(x) with beta = t^-1, so that b^-1 * A'(b^-1) = alpha."""
    _check_general(A, b)
    if alpha.spec != A.spec:
        raise FieldMismatch(f"{alpha.spec} and {A.spec} differ")
    if not in_f_circle(alpha):
        raise AlphaNotInFCircle(f"{format_element(alpha)} lies in a proper subfield")
    b_inv = inv0(b)
    beta = inv0(b_inv * A(b_inv))
    repaired = A.scale_output(alpha * beta)
    if inv0(b) * repaired(b_inv) != alpha:
        raise ConsistencyError("repaired map misses its target value")
    return repaired


# ── Parameter sets ─────────────────────────────────────────────

def m2_member(x: FieldElement) -> bool:
    if x.spec.p != 2:
        raise WrongCharacteristic("M2 is defined for characteristic 2")
    return in_f_circle(x) and trace(x).value == 1


def mp_member(x: FieldElement) -> bool:
    if x.spec.p == 2:
        raise WrongCharacteristic("Mp is defined for odd characteristic")
    return in_f_circle(x) and not is_square(x)


def m2_set(spec: FieldSpec) -> list[FieldElement]:
    return [FieldElement(spec, v) for v in range(1, spec.order) if m2_member(FieldElement(spec, v))]


def mp_set(spec: FieldSpec) -> list[FieldElement]:
    return [FieldElement(spec, v) for v in range(1, spec.order) if mp_member(FieldElement(spec, v))]


def _mobius(m: int) -> int:
    result = 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            result = -result
        d += 1
    return -result if m > 1 else result


def f_circle_size(spec: FieldSpec) -> int:
    """Number of elements in no proper subfield; the whole field when n = 1."""
    if spec.n == 1:
        return spec.order
    return sum(_mobius(d) * spec.p ** (spec.n // d) for d in divisors(spec.n))


def subfield_union_size(spec: FieldSpec) -> int:
    return spec.order - f_circle_size(spec)


def nonempty_bound(spec: FieldSpec) -> int:
    """1 + p + ... + p^(n-2): the union of proper subfields stays below this for n >= 3."""
    return sum(spec.p ** i for i in range(spec.n - 1))


# ── Scalar form ────────────────────────────────────────────────

def quarter(spec: FieldSpec) -> FieldElement:
    o = one(spec)
    return inv0(o + o + o + o)


def _scalar_parameters(alpha: FieldElement, b: FieldElement) -> FieldElement:
    if alpha.spec != b.spec:
        raise FieldMismatch(f"{alpha.spec} and {b.spec} differ")
    if not alpha:
        raise ZeroAlpha("alpha must be nonzero")
    if not b:
        raise ZeroB("b must be nonzero")
    b_inv = inv0(b)
    return alpha * b_inv * b_inv


def _witness_degrees(c: FieldElement) -> list[int]:
    """Degrees k of proper subfields containing c whose scaled copy is nontrivial."""
    spec = c.spec
    return sorted(k for k in subfield_divisors(c) if k < spec.n and spec.p ** k > 2)


def certify_scalar(alpha: FieldElement, b: FieldElement, brute_check: bool = False, workers: int = 1,
                   cap: int | None = None) -> CertReport:
    c = _scalar_parameters(alpha, b)
    spec = c.spec
    minus_one = neg(one(spec))

    if spec.p == 2:
        decisive_none = m2_member(c)
        fixed_expected = trace(c).value == 0
        form = {"kind": "scalar", "alpha": format_element(alpha), "b": format_element(b)}
    else:
        shifted = c + quarter(spec)
        decisive_none = mp_member(shifted)
        fixed_expected = is_square(shifted)
        form = {"kind": "scalar", "alpha": format_element(alpha), "b": format_element(b),
                "shifted_value": format_element(shifted)}
    cycle_expected = c == minus_one

    witness = None
    degrees = _witness_degrees(c)
    if degrees:
        witness = scale_subspace(b, _subfield_coset(spec, degrees[0]))
        verdict = NontrivialVerdict.EXISTS_WITH_WITNESS
    elif in_f_circle(c):
        verdict = NontrivialVerdict.CERTIFIED_NONE
    else:
        # c = 1 in characteristic 2 with n prime: only F_2 contains it, and b * F_2 is the pair {0, b}
        verdict = NontrivialVerdict.INCONCLUSIVE

    f = scalar_form_sbox(alpha, b) if spec.tabulated else None
    fixed: list[FieldElement] = []
    cycles: list[tuple[FieldElement, FieldElement]] = []
    if f is not None:
        fixed = fixed_points(f)
        cycles = two_cycles(f)
        if bool(fixed) != fixed_expected:
            raise ConsistencyError(f"fixed points {len(fixed)} disagree with the analytic criterion for c = {format_element(c)}")
        pair = tuple(sorted((0, b.value)))
        for u, v in cycles:
            if (u.value, v.value) != pair:
                raise ConsistencyError(f"unexpected two-cycle {{{format_element(u)}, {format_element(v)}}}")
        if bool(cycles) != cycle_expected:
            raise ConsistencyError(f"two-cycle {{0, b}} disagrees with c = -1 test for c = {format_element(c)}")
        if witness is not None and not verify_invariant(f, witness):
            raise ConsistencyError(f"witness {to_json(witness)} is not invariant")

    small = fixed_expected or (cycle_expected and spec.p == 2 and spec.order > 2)
    if decisive_none:
        overall = Overall.NO_INVARIANT
    elif verdict == NontrivialVerdict.EXISTS_WITH_WITNESS:
        overall = Overall.HAS_NONTRIVIAL
    elif small:
        overall = Overall.HAS_SMALL
    else:
        raise ConsistencyError(f"criterion fails for c = {format_element(c)} with no invariant to show")

    report = CertReport(
        spec=spec,
        form=form,
        t_value=c,
        t_divisors=subfield_divisors(c),
        nontrivial_verdict=verdict,
        witness=witness,
        fixed_points=fixed,
        two_cycles=cycles,
        overall=overall,
        small_cases_checked=f is not None,
        degenerate_n1=spec.n == 1,
    )
    if brute_check and f is not None:
        found = scan_invariant(f, workers=workers, cap=cap).subspaces()
        report.brute = found
        report.ground_truth = _ground_truth(spec, found)
        if (report.ground_truth == Overall.NO_INVARIANT) != (overall == Overall.NO_INVARIANT):
            raise ConsistencyError(
                f"criterion says {overall.value}, scanner says {report.ground_truth.value} "
                f"for alpha = {format_element(alpha)}, b = {format_element(b)}"
            )
    return report


def _subfield_coset(spec: FieldSpec, k: int) -> AffineSubspace:
    return AffineSubspace(subfield_as_subspace(spec, k), FieldElement(spec, 0))


def invariant_subspaces_of_scalar_form(alpha: FieldElement, b: FieldElement) -> list[AffineSubspace]:
    """Invariant subspaces of x -> alpha * inv0(x) + b that follow from c = alpha * b^-2 alone.

    The whole field, b * K for every proper subfield K containing c, each fixed point, the
    line through two fixed points in characteristic 2, and {0, b} when c = -1 there.
    """
    c = _scalar_parameters(alpha, b)
    spec = c.spec
    found = {whole_space(spec).sort_key: AffineSubspace(whole_space(spec), FieldElement(spec, 0))}

    for k in subfield_divisors(c):
        if k < spec.n:
            U = scale_subspace(b, _subfield_coset(spec, k))
            found[U.sort_key] = U

    # fixed points solve x^2 - b x - alpha = 0 after clearing x
    roots = [x for x in (FieldElement(spec, v) for v in range(1, spec.order)) if alpha * inv0(x) + b == x]
    for x in roots:
        U = canonicalize_affine(x, zero_subspace(spec))
        found[U.sort_key] = U
    if spec.p == 2 and len(roots) == 2:
        U = flat_from_values(spec, [r.value for r in roots])
        found[U.sort_key] = U
    if spec.p == 2 and c == neg(one(spec)) and spec.order > 2:
        U = flat_from_values(spec, [0, b.value])
        found[U.sort_key] = U
    return [found[key] for key in sorted(found)]
