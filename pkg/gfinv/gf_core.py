"""
GF(p^n) arithmetic: field construction, ring operations, Frobenius, trace,
subfield membership and quadratic residues.

Elements are stored by their canonical integer encoding sum(c_i * p^i) over the
coefficient vector (constant term first). For p = 2 that is the usual bit-packed byte,
so 0x63 in the AES field is x^6 + x^5 + x + 1.
"""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

from . import settings
from .errors import CapExceeded, DegreeMismatch, FieldMismatch, NonPrime, OutOfRangeEntry, ParseError, Reducible

logger = logging.getLogger(__name__)

# x^8 + x^4 + x^3 + x + 1
AES_MODULUS = (1, 1, 0, 1, 1, 0, 0, 0, 1)


# ── Integers and polynomials over F_p ──────────────────────────

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    size = max(len(a), len(b))
    a = a + [0] * (size - len(a))
    b = b + [0] * (size - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    """Quotient and remainder of a / b over F_p; b must be nonzero."""
    a = _trim(list(a))
    b = _trim(list(b))
    db = len(b) - 1
    lead_inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 1)
    while a and len(a) - 1 >= db:
        shift = len(a) - 1 - db
        f = a[-1] * lead_inv % p
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return _trim(q), a


def is_irreducible(coeffs: tuple[int, ...] | list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    f = _trim([c % p for c in coeffs])
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if deg > settings.MAX_DEGREE:
        raise CapExceeded(f"irreducibility test is capped at degree {settings.MAX_DEGREE}")
    if f[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            _, r = _poly_divmod(f, list(low) + [1], p)
            if not r:
                return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n, constant term compared first."""
    for low in itertools.product(range(p), repeat=n):
        candidate = low + (1,)
        if is_irreducible(candidate, p):
            return candidate
    raise Reducible(f"no irreducible polynomial of degree {n} over F_{p}")  # unreachable


def _int_to_digits(value: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        value, d = divmod(value, p)
        out.append(d)
    return tuple(out)


# ── Field description ──────────────────────────────────────────

@dataclass(frozen=True)
class FieldSpec:
    """GF(p^n) as F_p[x] / (modulus). Arithmetic methods act on canonical integers."""

    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.n

    @property
    def tabulated(self) -> bool:
        return self.order <= settings.TABLE_CAP

    def __str__(self) -> str:
        return f"GF({self.p}^{self.n})"

    # ── encoding ──

    @cached_property
    def _digit_table(self) -> list[tuple[int, ...]] | None:
        if not self.tabulated:
            return None
        return [_int_to_digits(v, self.p, self.n) for v in range(self.order)]

    def to_digits(self, value: int) -> tuple[int, ...]:
        table = self._digit_table
        if table is not None:
            return table[value]
        return _int_to_digits(value, self.p, self.n)

    def from_digits(self, digits) -> int:
        value = 0
        for d in reversed(tuple(digits)):
            value = value * self.p + d % self.p
        return value

    # ── additive structure ──

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        return self.from_digits(tuple((x + y) % p for x, y in zip(self.to_digits(a), self.to_digits(b))))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        return self.from_digits(tuple(-x % p for x in self.to_digits(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale(self, c: int, a: int) -> int:
        """Multiply by the prime-field scalar c."""
        p = self.p
        return self.from_digits(tuple(c * x % p for x in self.to_digits(a)))

    # ── multiplicative structure ──

    def _mulmod(self, a: int, b: int) -> int:
        prod = _poly_mul(_trim(list(self.to_digits(a))), _trim(list(self.to_digits(b))), self.p)
        _, r = _poly_divmod(prod, list(self.modulus), self.p)
        return self.from_digits(r + [0] * (self.n - len(r)))

    @cached_property
    def _log_tables(self) -> tuple[list[int], list[int]] | None:
        """(antilog, log) for a primitive element, or None for untabulated fields."""
        if not self.tabulated:
            return None
        q = self.order
        for g in range(1, q):
            powers = [1]
            x = g
            while x not in (0, 1) and len(powers) < q:
                powers.append(x)
                x = self._mulmod(x, g)
            if len(powers) == q - 1:
                log = [-1] * q
                for i, v in enumerate(powers):
                    log[v] = i
                logger.debug("log tables for %s built from generator %d", self, g)
                return powers, log
        raise Reducible(f"{self} has no primitive element; modulus is reducible")

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        tables = self._log_tables
        if tables is None:
            return self._mulmod(a, b)
        antilog, log = tables
        return antilog[(log[a] + log[b]) % (self.order - 1)]

    def power(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e > 0:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def _euclid_inverse(self, a: int) -> int:
        p = self.p
        r0, r1 = list(self.modulus), _trim(list(self.to_digits(a)))
        t0, t1 = [], [1]
        while r1:
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1, p), p)
        # r0 is a nonzero constant because the modulus is irreducible
        c = pow(r0[0], -1, p)
        inv = [x * c % p for x in t0]
        return self.from_digits(inv + [0] * (self.n - len(inv)))

    @cached_property
    def _inverse_table(self) -> list[int] | None:
        if not self.tabulated:
            return None
        return [0] + [self._euclid_inverse(v) for v in range(1, self.order)]

    def inv(self, a: int) -> int:
        """Inversion extended by 0 -> 0."""
        if a == 0:
            return 0
        table = self._inverse_table
        if table is not None:
            return table[a]
        return self._euclid_inverse(a)


def make_field(p: int, n: int, modulus: list[int] | tuple[int, ...] | None = None) -> FieldSpec:
    if not is_prime(p):
        raise NonPrime(f"p = {p} is not prime")
    if n < 1:
        raise DegreeMismatch(f"extension degree must be >= 1, got {n}")
    if modulus is None:
        return FieldSpec(p, n, default_modulus(p, n))
    coeffs = _trim([int(c) % p for c in modulus])
    if len(coeffs) - 1 != n:
        raise DegreeMismatch(f"modulus has degree {len(coeffs) - 1}, expected {n}")
    if coeffs[-1] != 1:
        raise DegreeMismatch("modulus must be monic")
    if not is_irreducible(coeffs, p):
        raise Reducible(f"modulus {format_poly_coeffs(coeffs)} is reducible over F_{p}")
    return FieldSpec(p, n, tuple(coeffs))


@lru_cache(maxsize=None)
def aes_field() -> FieldSpec:
    return make_field(2, 8, AES_MODULUS)


# ── Elements ───────────────────────────────────────────────────

@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.order:
            raise OutOfRangeEntry(f"{self.value} is not an element of {self.spec}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.to_digits(self.value)

    def __index__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.spec}<{format_element(self)}>"

    def __add__(self, other: FieldElement) -> FieldElement:
        return add(self, other)

    def __sub__(self, other: FieldElement) -> FieldElement:
        return sub(self, other)

    def __neg__(self) -> FieldElement:
        return neg(self)

    def __mul__(self, other: FieldElement) -> FieldElement:
        return mul(self, other)

    def __pow__(self, e: int) -> FieldElement:
        return power(self, e)


def element(spec: FieldSpec, value: int) -> FieldElement:
    return FieldElement(spec, value)


def zero(spec: FieldSpec) -> FieldElement:
    return FieldElement(spec, 0)


def one(spec: FieldSpec) -> FieldElement:
    return FieldElement(spec, 1)


def elements(spec: FieldSpec) -> Iterator[FieldElement]:
    for v in range(spec.order):
        yield FieldElement(spec, v)


def nonzero(spec: FieldSpec) -> Iterator[FieldElement]:
    for v in range(1, spec.order):
        yield FieldElement(spec, v)


def _check_same(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.spec != b.spec:
        raise FieldMismatch(f"{a.spec} and {b.spec} differ")
    return a.spec


# ── Ring operations ────────────────────────────────────────────

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _check_same(a, b)
    return FieldElement(spec, spec.add(a.value, b.value))


def neg(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, a.spec.neg(a.value))


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _check_same(a, b)
    return FieldElement(spec, spec.sub(a.value, b.value))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _check_same(a, b)
    return FieldElement(spec, spec.mul(a.value, b.value))


def power(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return FieldElement(a.spec, a.spec.power(a.value, e))


def inv0(x: FieldElement) -> FieldElement:
    return FieldElement(x.spec, x.spec.inv(x.value))


def inv_by_power(x: FieldElement) -> FieldElement:
    """x^(p^n - 2): the exponentiation form of inv0, kept as an independent oracle."""
    return power(x, x.spec.order - 2)


# ── Frobenius, subfields, trace, squares ───────────────────────

def frobenius(x: FieldElement, k: int) -> FieldElement:
    """x^(p^k)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    spec = x.spec
    return power(x, spec.p ** (k % spec.n))


def subfield_divisors(x: FieldElement) -> set[int]:
    """Degrees k | n of the subfields F_{p^k} that contain x."""
    return {k for k in divisors(x.spec.n) if frobenius(x, k) == x}


def in_f_circle(x: FieldElement) -> bool:
    """True when x lies in no proper subfield. For n = 1 every element qualifies."""
    if x.spec.n == 1:
        return True
    return subfield_divisors(x) == {x.spec.n}


def trace(x: FieldElement) -> FieldElement:
    total = zero(x.spec)
    for i in range(x.spec.n):
        total = total + frobenius(x, i)
    return total


def is_square(x: FieldElement) -> bool:
    spec = x.spec
    if spec.p == 2 or x.value == 0:
        return True
    return spec.power(x.value, (spec.order - 1) // 2) == 1


def hua_precondition(a: FieldElement, b: FieldElement) -> bool:
    return bool(a) and bool(b) and (a * b).value != 1


def hua_identity_holds(a: FieldElement, b: FieldElement) -> bool:
    """a - (a^-1 + (b^-1 - a)^-1)^-1 == a*b*a, for a, b != 0 and ab != 1."""
    lhs = a - inv0(inv0(a) + inv0(inv0(b) - a))
    return lhs == a * b * a


# ── Text forms ─────────────────────────────────────────────────

_TERM = re.compile(r"^(\d*)\*?(x(?:\^(\d+))?)?$")


def format_element(x: FieldElement) -> str:
    if x.spec.p == 2:
        width = max(2, -(-x.spec.n // 4))
        return f"0x{x.value:0{width}X}"
    return str(x.value)


def format_poly_coeffs(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
        terms.append(mono if c == 1 else (f"{c}" if i == 0 else f"{c}{mono}"))
    return " + ".join(terms) or "0"


def format_poly(x: FieldElement) -> str:
    return format_poly_coeffs(x.coeffs)


def parse_poly_terms(text: str) -> dict[int, int]:
    """Exponent to summed integer coefficient for a polynomial such as '2x^2 + x + 1'."""
    coeffs: dict[int, int] = {}
    for term in text.replace(" ", "").lower().split("+"):
        m = _TERM.match(term)
        if not m or (not m.group(1) and not m.group(2)):
            raise ParseError(f"cannot parse term {term!r} in {text!r}")
        exp = 0 if not m.group(2) else int(m.group(3) or 1)
        coeffs[exp] = coeffs.get(exp, 0) + (int(m.group(1)) if m.group(1) else 1)
    return coeffs


def parse_element(spec: FieldSpec, text: str) -> FieldElement:
    """Accepts decimal, 0x-hex, or a polynomial such as 'x^7 + x^6 + x^3'."""
    raw = str(text).strip().lower()
    if not raw:
        raise ParseError("empty element")
    try:
        if "x" not in raw or raw.startswith("0x"):
            return FieldElement(spec, int(raw, 0))
    except ValueError as e:
        raise ParseError(f"cannot parse element {text!r}: {e}") from e
    digits = [0] * spec.n
    for exp, coef in parse_poly_terms(raw).items():
        if exp >= spec.n:
            raise ParseError(f"degree {exp} exceeds field degree {spec.n - 1}")
        digits[exp] = coef % spec.p
    return FieldElement(spec, spec.from_digits(digits))
