import math

import pytest

from gfinv.errors import CapExceeded, EmptySet, NotADivisor, ZeroScalar
from gfinv.gf_core import FieldElement, nonzero
from gfinv.subspaces import (
    AffineSubspace,
    affine_count,
    as_affine_subspace,
    canonicalize_affine,
    contains,
    coset_reps,
    coset_values,
    elements,
    enumerate_affine,
    enumerate_linear,
    flat_from_values,
    from_json,
    gaussian_binomial,
    kernel,
    scale_subspace,
    span,
    subfield_as_subspace,
    sum_of_elements,
    to_json,
    whole_space,
    zero_subspace,
)


def test_gaussian_binomials_over_f2():
    assert [gaussian_binomial(8, k, 2) for k in range(9)] == [1, 255, 10795, 97155, 200787, 97155, 10795, 255, 1]
    assert gaussian_binomial(4, 5, 2) == 0


def test_affine_counts(aes, gf16, gf64, gf27, gf25):
    assert affine_count(aes, range(9)) == 7_866_259
    assert affine_count(gf16, range(5)) == 307
    assert affine_count(gf64, range(7)) == 26_387
    assert affine_count(gf27, range(4)) == 184
    assert affine_count(gf25, range(3)) == 56


@pytest.mark.parametrize("name", ["gf16", "gf9", "gf27"])
def test_enumeration_is_complete_and_duplicate_free(name, request):
    spec = request.getfixturevalue(name)
    for k in range(spec.n + 1):
        found = list(enumerate_linear(spec, k))
        assert len(found) == gaussian_binomial(spec.n, k, spec.p)
        assert len({L.rows for L in found}) == len(found)
        assert all(L.dim == k for L in found)
        # each one is already in canonical form
        assert all(span(L.basis, spec=spec) == L for L in found)


def test_enumeration_ranges_concatenate(gf64):
    total = gaussian_binomial(6, 3, 2)
    cuts = [0, 17, 400, 1000, total]
    pieces = []
    for start, stop in zip(cuts, cuts[1:]):
        pieces.extend(enumerate_linear(gf64, 3, start, stop))
    assert pieces == list(enumerate_linear(gf64, 3))


def test_affine_enumeration_count(gf16, gf9):
    assert sum(1 for k in range(5) for _ in enumerate_affine(gf16, k)) == 307
    assert sum(1 for k in range(3) for _ in enumerate_affine(gf9, k)) == affine_count(gf9, range(3))


def test_cap_is_enforced(aes):
    with pytest.raises(CapExceeded):
        list(enumerate_linear(aes, 4, cap=1000))
    with pytest.raises(CapExceeded):
        elements(AffineSubspace(whole_space(aes), FieldElement(aes, 0)), cap=10)


def test_canonical_representative_does_not_depend_on_the_point(gf16):
    L = span([FieldElement(gf16, 3), FieldElement(gf16, 5)])
    U = canonicalize_affine(FieldElement(gf16, 8), L)
    for v in coset_values(U):
        assert canonicalize_affine(FieldElement(gf16, v), L) == U
        assert contains(U, FieldElement(gf16, v))
    assert len(set(coset_values(U))) == 4


def test_coset_reps_partition_the_field(gf27):
    L = span([FieldElement(gf27, 4)])
    values = []
    for rep in coset_reps(L):
        values.extend(coset_values(AffineSubspace(L, FieldElement(gf27, rep))))
    assert sorted(values) == list(range(27))


def test_flat_recognition(aes, gf16):
    pair = flat_from_values(aes, [0x73, 0x8F])
    assert pair is not None and pair.dim == 1
    assert flat_from_values(gf16, [0, 1, 2]) is None
    assert flat_from_values(gf16, [0, 1, 2, 4]) is None
    assert flat_from_values(gf16, [1, 2, 4, 7]).dim == 2
    with pytest.raises(EmptySet):
        as_affine_subspace([])


def test_subfield_subspaces(gf16, gf9, aes):
    F4 = subfield_as_subspace(gf16, 2)
    assert sorted(coset_values(AffineSubspace(F4, FieldElement(gf16, 0)))) == [0, 1, 6, 7]
    assert subfield_as_subspace(gf9, 1).dim == 1
    assert subfield_as_subspace(aes, 4).dim == 4
    with pytest.raises(NotADivisor):
        subfield_as_subspace(gf16, 3)


def test_scaling(gf16):
    F4 = AffineSubspace(subfield_as_subspace(gf16, 2), FieldElement(gf16, 0))
    scaled = {scale_subspace(q, F4).sort_key for q in nonzero(gf16)}
    assert len(scaled) == 5
    with pytest.raises(ZeroScalar):
        scale_subspace(FieldElement(gf16, 0), F4)


def test_kernel_of_trace_like_map(gf16):
    # x -> x_0 + x_1 on coordinates: kernel has dimension 3
    images = [(1, 0, 0, 0), (1, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)]
    assert kernel(gf16, images).dim == 3


@pytest.mark.parametrize("name", ["gf16", "gf64", "gf9"])
def test_linear_subspaces_with_more_than_two_elements_sum_to_zero(name, request):
    spec = request.getfixturevalue(name)
    for k in range(1, spec.n + 1):
        if spec.p ** k <= 2:
            continue
        for L in enumerate_linear(spec, k, cap=math.inf):
            assert sum_of_elements(L).value == 0


def test_json_form(gf16):
    U = canonicalize_affine(FieldElement(gf16, 9), span([FieldElement(gf16, 6)]))
    data = to_json(U)
    assert data == {"dim": 1, "basis": [6], "rep": U.rep.value}
    assert from_json(gf16, data) == U
    assert to_json(zero_subspace(gf16)) == {"dim": 0, "basis": [], "rep": 0}


def test_span_examples(gf9, gf27, gf16):
    v = FieldElement(gf9, 4)
    assert span([v, v, v + v]).dim == 1
    assert span([], spec=gf16) == zero_subspace(gf16)
    with pytest.raises(EmptySet):
        span([])
    assert len(elements(AffineSubspace(span([FieldElement(gf9, 1), FieldElement(gf9, 3)]), FieldElement(gf9, 0)))) == 9
    plane = AffineSubspace(span([FieldElement(gf27, 1), FieldElement(gf27, 3)]), FieldElement(gf27, 0))
    assert len(elements(plane)) == 9


def test_lines_of_gf16(gf16):
    assert sum(1 for _ in enumerate_affine(gf16, 1)) == 120


# ── Invariants over every affine subspace ──────────────────────

def _all_affine(spec):
    return [U for k in range(spec.n + 1) for U in enumerate_affine(spec, k)]


@pytest.mark.parametrize("name", ["gf16", "gf27", "gf25"])
def test_element_set_determines_the_subspace(name, request):
    spec = request.getfixturevalue(name)
    for U in _all_affine(spec):
        points = elements(U)
        assert as_affine_subspace(points) == U
        for u in points:
            assert canonicalize_affine(u, U.linear) == U


@pytest.mark.parametrize("name", ["gf16", "gf27", "gf25"])
def test_contains_matches_elements(name, request):
    spec = request.getfixturevalue(name)
    for U in _all_affine(spec):
        members = {x.value for x in elements(U)}
        for v in range(spec.order):
            assert contains(U, FieldElement(spec, v)) == (v in members)


@pytest.mark.parametrize("name", ["gf16", "gf27", "gf25"])
def test_scaling_multiplies_every_element(name, request):
    spec = request.getfixturevalue(name)
    for U in _all_affine(spec):
        points = elements(U)
        for q in nonzero(spec):
            assert set(elements(scale_subspace(q, U))) == {q * u for u in points}
