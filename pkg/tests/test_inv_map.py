import pytest

from gfinv.errors import CapExceeded, PreconditionViolated, WrongCharacteristic
from gfinv.gf_core import FieldElement, inv0, nonzero
from gfinv.inv_map import (
    brute_force_stable,
    classify,
    classify_subspace,
    eq1_identity_check,
    hua_lemma_closure_check,
    image_of_scaled_subfield,
    image_under_inv,
    is_apn_by_subspaces,
    predicted_stable,
    theorem_count,
)
from gfinv.scan import build_aes_sbox, inverse_sbox
from gfinv.subspaces import (
    AffineSubspace,
    canonicalize_affine,
    scale_subspace,
    span,
    subfield_as_subspace,
    whole_space,
    zero_subspace,
)


def _flat(L):
    return AffineSubspace(L, FieldElement(L.spec, 0))


def _f4(gf16):
    return _flat(subfield_as_subspace(gf16, 2))


# ── Images ─────────────────────────────────────────────────────

def test_image_under_inv(gf16, gf9):
    zero = _flat(zero_subspace(gf16))
    assert image_under_inv(zero) == {FieldElement(gf16, 0)}
    whole = _flat(whole_space(gf9))
    assert {x.value for x in image_under_inv(whole)} == set(range(9))
    assert {x.value for x in image_under_inv(_f4(gf16))} == {0, 1, 6, 7}


def test_scaled_subfields_map_to_inverse_scalings(gf16, gf64):
    for spec, k in ((gf16, 2), (gf64, 2), (gf64, 3)):
        K = _flat(subfield_as_subspace(spec, k))
        for q in nonzero(spec):
            assert classify_subspace(scale_subspace(q, K)) == scale_subspace(inv0(q), K)
            assert classify_subspace(scale_subspace(q, K)) == image_of_scaled_subfield(q, k)


def test_non_linear_cosets_have_non_affine_images(gf16):
    L = span([FieldElement(gf16, 1), FieldElement(gf16, 2)])
    U = canonicalize_affine(FieldElement(gf16, 4), L)
    assert not U.is_linear
    assert classify_subspace(U) is None


def test_classify_subspace_is_total(gf16):
    point = canonicalize_affine(FieldElement(gf16, 5), zero_subspace(gf16))
    assert classify_subspace(point).dim == 0


# ── Prediction against the oracle ──────────────────────────────

def test_predicted_counts(gf16, gf9, gf32, gf8):
    assert len(predicted_stable(gf16)) == 6 == theorem_count(gf16)
    assert len(predicted_stable(gf9)) == 5 == theorem_count(gf9)
    assert len(predicted_stable(gf32)) == 1
    assert len(predicted_stable(gf8)) == 1
    assert all(U.cardinality > 2 for U in predicted_stable(gf16))


@pytest.mark.parametrize("name", ["gf8", "gf16", "gf32", "gf64", "gf9", "gf27", "gf25"])
def test_oracle_equals_prediction(name, request):
    spec = request.getfixturevalue(name)
    brute = brute_force_stable(spec)
    assert [U.sort_key for U in brute] == [U.sort_key for U in predicted_stable(spec)]
    # every stable subspace is linear
    assert all(U.is_linear for U in brute)


def test_oracle_does_not_depend_on_worker_count(gf64):
    assert brute_force_stable(gf64, workers=1) == brute_force_stable(gf64, workers=3)


def test_classify_report(gf16):
    report = classify(gf16, brute=True)
    assert report.agree is True
    data = report.to_json()
    assert data["predicted_count"] == data["brute_count"] == 6
    assert classify(gf16).agree is None
    with pytest.raises(CapExceeded):
        classify(gf16, brute=True, cap=100)


@pytest.mark.slow
def test_oracle_on_gf256(aes):
    brute = brute_force_stable(aes, workers=4)
    assert [U.sort_key for U in brute] == [U.sort_key for U in predicted_stable(aes)]
    assert len(brute) == theorem_count(aes) == 85 + 17 + 1


# ── APN ────────────────────────────────────────────────────────

@pytest.mark.parametrize("name", ["gf8", "gf32"])
def test_inversion_is_apn_for_odd_degree(name, request):
    spec = request.getfixturevalue(name)
    assert is_apn_by_subspaces(inverse_sbox(spec))
    assert [U.dim for U in brute_force_stable(spec)] == [spec.n]


def test_inversion_is_not_apn_for_even_degree(gf16, gf9):
    assert not is_apn_by_subspaces(inverse_sbox(gf16))
    assert not is_apn_by_subspaces(build_aes_sbox())
    with pytest.raises(WrongCharacteristic):
        is_apn_by_subspaces(inverse_sbox(gf9))


@pytest.mark.slow
def test_inversion_on_gf128_is_apn():
    from gfinv.gf_core import make_field

    spec = make_field(2, 7)
    assert is_apn_by_subspaces(inverse_sbox(spec))
    assert [U.dim for U in brute_force_stable(spec, workers=4)] == [7]


# ── Identities on stable subspaces ─────────────────────────────

@pytest.mark.parametrize("name", ["gf16", "gf64", "gf9"])
def test_inverse_sums_vanish_on_stable_subspaces(name, request):
    spec = request.getfixturevalue(name)
    for U in brute_force_stable(spec):
        assert eq1_identity_check(U)


def test_eq1_needs_a_stable_subspace(gf16):
    with pytest.raises(PreconditionViolated):
        eq1_identity_check(_flat(span([FieldElement(gf16, 1), FieldElement(gf16, 2)])))
    with pytest.raises(PreconditionViolated):
        eq1_identity_check(_flat(span([FieldElement(gf16, 1)])))


def test_closure_law(gf16, gf9):
    assert hua_lemma_closure_check(subfield_as_subspace(gf16, 2))
    assert hua_lemma_closure_check(subfield_as_subspace(gf9, 1))
    with pytest.raises(PreconditionViolated):
        # {0, 1, x, x + 1} inverts to {0, 1, 9, 14}
        hua_lemma_closure_check(span([FieldElement(gf16, 1), FieldElement(gf16, 2)]))


@pytest.mark.parametrize("name", ["gf16", "gf64", "gf9"])
def test_closure_law_holds_on_every_scaled_subfield(name, request):
    spec = request.getfixturevalue(name)
    for U in predicted_stable(spec):
        assert hua_lemma_closure_check(U.linear)
