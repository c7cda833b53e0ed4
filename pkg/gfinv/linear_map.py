"""
F_p-linear maps of GF(p^n), as n x n matrices acting on coefficient vectors:
y_i = sum_j matrix[i][j] * x_j.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

from .errors import DegreeMismatch, FieldMismatch, ParseError, WrongCharacteristic
from .gf_core import FieldElement, FieldSpec, frobenius
from .subspaces import Echelon


@dataclass(frozen=True)
class LinearMap:
    spec: FieldSpec
    matrix: tuple[tuple[int, ...], ...]

    @cached_property
    def rank(self) -> int:
        ech = Echelon(self.spec)
        for row in self.matrix:
            ech.insert(row)
        return ech.dim

    @property
    def is_invertible(self) -> bool:
        return self.rank == self.spec.n

    @cached_property
    def _columns(self) -> list[int]:
        n = self.spec.n
        return [self.spec.from_digits(self.matrix[i][j] for i in range(n)) for j in range(n)]

    def apply_value(self, value: int) -> int:
        spec = self.spec
        out = 0
        for coeff, col in zip(spec.to_digits(value), self._columns):
            if coeff:
                out = spec.add(out, spec.scale(coeff, col))
        return out

    def apply(self, x: FieldElement) -> FieldElement:
        if x.spec != self.spec:
            raise FieldMismatch(f"{x.spec} and {self.spec} differ")
        return FieldElement(self.spec, self.apply_value(x.value))

    def __call__(self, x: FieldElement) -> FieldElement:
        return self.apply(x)

    def compose(self, inner: LinearMap) -> LinearMap:
        """self after inner."""
        if inner.spec != self.spec:
            raise FieldMismatch(f"{inner.spec} and {self.spec} differ")
        n, p = self.spec.n, self.spec.p
        rows = tuple(
            tuple(sum(self.matrix[i][t] * inner.matrix[t][j] for t in range(n)) % p for j in range(n))
            for i in range(n)
        )
        return LinearMap(self.spec, rows)

    def scale_output(self, gamma: FieldElement) -> LinearMap:
        """x -> gamma * A(x)."""
        return multiplication(gamma).compose(self)

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.matrix]


def _from_columns(spec: FieldSpec, columns: list[int]) -> LinearMap:
    digits = [spec.to_digits(c) for c in columns]
    rows = tuple(tuple(digits[j][i] for j in range(spec.n)) for i in range(spec.n))
    return LinearMap(spec, rows)


def from_rows(spec: FieldSpec, rows) -> LinearMap:
    rows = [list(r) for r in rows]
    if len(rows) != spec.n or any(len(r) != spec.n for r in rows):
        raise ParseError(f"matrix must be {spec.n}x{spec.n}")
    return LinearMap(spec, tuple(tuple(int(a) % spec.p for a in r) for r in rows))


def identity(spec: FieldSpec) -> LinearMap:
    return _from_columns(spec, [spec.p ** j for j in range(spec.n)])


def multiplication(gamma: FieldElement) -> LinearMap:
    """x -> gamma * x."""
    spec = gamma.spec
    return _from_columns(spec, [spec.mul(gamma.value, spec.p ** j) for j in range(spec.n)])


def frobenius_power(spec: FieldSpec, k: int) -> LinearMap:
    """x -> x^(p^k)."""
    return _from_columns(spec, [frobenius(FieldElement(spec, spec.p ** j), k).value for j in range(spec.n)])


def aes_affine(spec: FieldSpec) -> LinearMap:
    """The AES bit matrix: output bit i is b_i + b_{i+4} + b_{i+5} + b_{i+6} + b_{i+7} (indices mod 8)."""
    if spec.p != 2:
        raise WrongCharacteristic("the AES affine layer is defined over F_2")
    if spec.n != 8:
        raise DegreeMismatch("the AES affine layer acts on bytes")
    rows = tuple(tuple(int((j - i) % 8 in (0, 4, 5, 6, 7)) for j in range(8)) for i in range(8))
    return LinearMap(spec, rows)


def random_invertible(spec: FieldSpec, rng: random.Random) -> LinearMap:
    while True:
        A = LinearMap(spec, tuple(tuple(rng.randrange(spec.p) for _ in range(spec.n)) for _ in range(spec.n)))
        if A.is_invertible:
            return A
