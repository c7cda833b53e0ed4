import pytest

from gfinv.errors import DegreeMismatch, FieldMismatch, NonPrime, OutOfRangeEntry, ParseError, Reducible
from gfinv.gf_core import (
    AES_MODULUS,
    FieldElement,
    add,
    default_modulus,
    divisors,
    elements,
    format_element,
    format_poly,
    frobenius,
    hua_identity_holds,
    hua_precondition,
    in_f_circle,
    inv0,
    inv_by_power,
    is_irreducible,
    is_square,
    make_field,
    mul,
    nonzero,
    one,
    parse_element,
    parse_poly_terms,
    power,
    subfield_divisors,
    trace,
    zero,
)


# ── Construction ───────────────────────────────────────────────

def test_make_field_rejects_bad_parameters():
    with pytest.raises(NonPrime):
        make_field(4, 2)
    with pytest.raises(DegreeMismatch):
        make_field(2, 4, [1, 1, 0, 1, 1, 0, 0, 0, 1])
    with pytest.raises(DegreeMismatch):
        make_field(3, 2, [1, 0, 2])
    with pytest.raises(Reducible):
        # x^4 + x^2 + 1 = (x^2 + x + 1)^2
        make_field(2, 4, [1, 0, 1, 0, 1])


def test_default_modulus_is_smallest_irreducible():
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(2, 4) == (1, 0, 0, 1, 1)
    assert default_modulus(3, 2) == (1, 0, 1)
    assert is_irreducible(AES_MODULUS, 2)
    assert not is_irreducible([0, 1, 1], 2)


def test_element_range_is_checked(gf16):
    with pytest.raises(OutOfRangeEntry):
        FieldElement(gf16, 16)


def test_mixed_fields_are_rejected(gf16, gf9):
    with pytest.raises(FieldMismatch):
        FieldElement(gf16, 3) + FieldElement(gf9, 1)


# ── Arithmetic ─────────────────────────────────────────────────

def test_aes_multiplication_and_inverse(aes):
    assert (FieldElement(aes, 0x57) * FieldElement(aes, 0x83)).value == 0xC1
    assert inv0(FieldElement(aes, 0x53)).value == 0xCA
    assert inv0(zero(aes)) == zero(aes)


@pytest.mark.parametrize("name", ["gf8", "gf16", "gf9", "gf27", "gf25", "gf5", "aes"])
def test_inverse_agrees_with_exponentiation(name, request):
    spec = request.getfixturevalue(name)
    for x in elements(spec):
        assert inv0(x) == inv_by_power(x)
        if x:
            assert (x * inv0(x)) == one(spec)


def test_additive_group_in_odd_characteristic(gf25):
    x = FieldElement(gf25, 17)
    assert (x - x) == zero(gf25)
    assert (x + (-x)) == zero(gf25)
    assert sum((x for _ in range(5)), zero(gf25)) == zero(gf25)


def test_frobenius_chain_of_aes_value(aes):
    t = parse_element(aes, "x^7 + x^6 + x^3")
    assert t.value == 0xC8
    assert frobenius(t, 1).value == 0x71
    assert frobenius(t, 2).value == 0xDD
    assert frobenius(t, 4).value == 0x99
    assert frobenius(t, 8) == t
    assert in_f_circle(t)


@pytest.mark.parametrize("name", ["gf16", "gf64", "gf27", "gf25", "aes"])
def test_frobenius_is_a_field_automorphism(name, request, rng):
    spec = request.getfixturevalue(name)
    for _ in range(500):
        a = FieldElement(spec, rng.randrange(spec.order))
        b = FieldElement(spec, rng.randrange(spec.order))
        for k in range(spec.n):
            assert frobenius(add(a, b), k) == add(frobenius(a, k), frobenius(b, k))
            assert frobenius(mul(a, b), k) == mul(frobenius(a, k), frobenius(b, k))


def test_power_by_name(gf25):
    x = FieldElement(gf25, 13)
    assert power(x, 0) == one(gf25)
    assert power(x, gf25.order - 1) == one(gf25)
    assert power(x, 3) == mul(mul(x, x), x)
    with pytest.raises(ValueError):
        power(x, -1)


# ── Subfields, trace, squares ──────────────────────────────────

def test_subfield_membership(gf16):
    assert subfield_divisors(one(gf16)) == {1, 2, 4}
    assert subfield_divisors(FieldElement(gf16, 6)) == {2, 4}
    assert not in_f_circle(FieldElement(gf16, 7))
    assert in_f_circle(FieldElement(gf16, 2))


@pytest.mark.parametrize("name", ["gf16", "gf64", "gf27", "aes"])
def test_smallest_subfield_degree_divides_the_rest(name, request):
    spec = request.getfixturevalue(name)
    for x in elements(spec):
        degrees = subfield_divisors(x)
        assert spec.n in degrees
        assert all(k % min(degrees) == 0 for k in degrees)


def test_n1_treats_every_element_as_f_circle(gf5):
    assert all(in_f_circle(x) for x in elements(gf5))


@pytest.mark.parametrize("name", ["gf4", "gf16", "gf64", "gf9", "gf27", "aes"])
def test_shift_by_one_keeps_f_circle(name, request):
    spec = request.getfixturevalue(name)
    for x in elements(spec):
        assert in_f_circle(x) == in_f_circle(x + one(spec))


@pytest.mark.parametrize("name", ["gf16", "gf9", "gf27", "gf25", "aes"])
def test_trace_fibers_have_equal_size(name, request):
    spec = request.getfixturevalue(name)
    counts = {}
    for x in elements(spec):
        value = trace(x)
        assert value.value < spec.p
        counts[value.value] = counts.get(value.value, 0) + 1
    assert counts == {c: spec.order // spec.p for c in range(spec.p)}


@pytest.mark.parametrize("name", ["gf9", "gf27", "gf25", "gf5"])
def test_square_count(name, request):
    spec = request.getfixturevalue(name)
    squares = {(x * x).value for x in elements(spec)}
    assert len(squares) == (spec.order + 1) // 2
    assert all(is_square(FieldElement(spec, v)) == (v in squares) for v in range(spec.order))


@pytest.mark.parametrize("name", ["gf16", "gf64", "gf9", "gf25", "aes"])
def test_hua_identity_on_random_samples(name, request, rng):
    spec = request.getfixturevalue(name)
    checked = 0
    while checked < 10_000:
        a = FieldElement(spec, rng.randrange(spec.order))
        b = FieldElement(spec, rng.randrange(spec.order))
        if not hua_precondition(a, b):
            continue
        assert hua_identity_holds(a, b)
        checked += 1


def test_divisors():
    assert divisors(8) == [1, 2, 4, 8]
    assert divisors(6) == [1, 2, 3, 6]


# ── Text forms ─────────────────────────────────────────────────

def test_parse_and_format(aes, gf9):
    assert parse_element(aes, "0x63").value == 0x63
    assert parse_element(aes, "99").value == 0x63
    assert format_element(FieldElement(aes, 0xFB)) == "0xFB"
    assert format_poly(FieldElement(aes, 0x63)) == "x^6 + x^5 + x + 1"
    assert parse_element(gf9, "2x + 1").value == 7
    assert format_element(FieldElement(gf9, 7)) == "7"
    assert [x.value for x in nonzero(gf9)] == list(range(1, 9))


@pytest.mark.parametrize("text", ["", "0xZZ", "x^9 + 1", "y + 1"])
def test_parse_rejects_garbage(aes, text):
    with pytest.raises(ParseError):
        parse_element(aes, text)


def test_poly_terms_sum_repeated_exponents():
    assert parse_poly_terms("2x^2 + x + 1") == {2: 2, 1: 1, 0: 1}
    assert parse_poly_terms("x + X + 3") == {1: 2, 0: 3}
    with pytest.raises(ParseError):
        parse_poly_terms("x^")
