"""Exact dense linear algebra over the prime field F_l.

Everything here is pure integer arithmetic: matrices store residues in
``[0, l)`` and every operation reduces mod ``l``.  No floating point, no
sparse formats; the degreewise spaces this package handles stay small.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

_PRIME_CACHE: set[int] = set()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n in _PRIME_CACHE:
        return True
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    _PRIME_CACHE.add(n)
    return True


def check_prime(modulus: int) -> int:
    if not is_prime(modulus):
        raise ValueError(f"modulus {modulus} is not prime")
    return modulus


@dataclass(frozen=True)
class FieldScalar:
    """A residue in F_l; the modulus must be prime."""

    residue: int
    modulus: int

    def __post_init__(self) -> None:
        check_prime(self.modulus)
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def _coerce(self, other) -> "FieldScalar | None":
        if isinstance(other, FieldScalar):
            if other.modulus != self.modulus:
                raise ValueError("modulus mismatch")
            return other
        if isinstance(other, int):
            return FieldScalar(other, self.modulus)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FieldScalar(self.residue + other.residue, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FieldScalar(self.residue - other.residue, self.modulus)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FieldScalar(self.residue * other.residue, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(-self.residue, self.modulus)

    def __bool__(self) -> bool:
        return self.residue != 0

    def inverse(self) -> "FieldScalar":
        if self.residue == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldScalar(pow(self.residue, self.modulus - 2, self.modulus), self.modulus)


def _inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    return pow(a, p - 2, p)


class FieldMatrix:
    """Dense row-major matrix over F_l with exact arithmetic."""

    __slots__ = ("rows", "cols", "modulus", "entries")

    def __init__(self, entries: Sequence[Sequence[int]], modulus: int):
        check_prime(modulus)
        rows = tuple(tuple(int(x) % modulus for x in row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must be nonempty")
        cols = len(rows[0])
        if any(len(row) != cols for row in rows):
            raise ValueError("ragged rows")
        self.rows = len(rows)
        self.cols = cols
        self.modulus = modulus
        self.entries = rows

    @classmethod
    def identity(cls, n: int, modulus: int) -> "FieldMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], modulus)

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus: int) -> "FieldMatrix":
        return cls([[0] * cols for _ in range(rows)], modulus)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldMatrix)
            and self.modulus == other.modulus
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.entries, self.modulus))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"FieldMatrix[{body}] mod {self.modulus}"

    def _check_same(self, other: "FieldMatrix") -> None:
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        p = self.modulus
        return FieldMatrix(
            [
                [(a + b) % p for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            p,
        )

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        p = self.modulus
        return FieldMatrix(
            [
                [(a - b) % p for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            p,
        )

    def __mul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        p = self.modulus
        bt = list(zip(*other.entries))
        out = [
            [sum(a * b for a, b in zip(row, col)) % p for col in bt]
            for row in self.entries
        ]
        return FieldMatrix(out, p)

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(list(zip(*self.entries)), self.modulus)

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.cols:
            raise ValueError("dimension mismatch")
        p = self.modulus
        return tuple(sum(a * v for a, v in zip(row, vector)) % p for row in self.entries)

    def rank(self) -> int:
        return rref(self)[0]

    def inverse(self) -> "FieldMatrix":
        if self.rows != self.cols:
            raise ValueError("not square")
        n, p = self.rows, self.modulus
        aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(self.entries)]
        _, reduced = _rref_rows(aug, p)
        left = [row[:n] for row in reduced]
        if left != [[1 if i == j else 0 for j in range(n)] for i in range(n)]:
            raise ValueError("matrix is singular")
        return FieldMatrix([row[n:] for row in reduced], p)


def _rref_rows(rows: list[list[int]], p: int) -> tuple[int, list[list[int]]]:
    rows = [list(r) for r in rows]
    nrows, ncols = len(rows), len(rows[0])
    pivot_row = 0
    for col in range(ncols):
        pr = None
        for r in range(pivot_row, nrows):
            if rows[r][col] % p:
                pr = r
                break
        if pr is None:
            continue
        rows[pivot_row], rows[pr] = rows[pr], rows[pivot_row]
        inv = _inv_mod(rows[pivot_row][col], p)
        rows[pivot_row] = [(x * inv) % p for x in rows[pivot_row]]
        for r in range(nrows):
            if r != pivot_row and rows[r][col] % p:
                factor = rows[r][col]
                rows[r] = [(a - factor * b) % p for a, b in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == nrows:
            break
    return pivot_row, rows


def rref(m: FieldMatrix) -> tuple[int, FieldMatrix]:
    """Reduced row-echelon form; returns (rank, reduced).  Row space preserved."""
    rank, rows = _rref_rows([list(r) for r in m.entries], m.modulus)
    return rank, FieldMatrix(rows, m.modulus)


def nullspace(m: FieldMatrix) -> list[tuple[int, ...]]:
    """Canonical basis of ``{v : m v = 0}``, one vector per free column."""
    p = m.modulus
    rank, red = rref(m)
    pivots: dict[int, int] = {}
    for r in range(rank):
        for c in range(m.cols):
            if red.entries[r][c]:
                pivots[c] = r
                break
    basis = []
    for free in range(m.cols):
        if free in pivots:
            continue
        v = [0] * m.cols
        v[free] = 1
        for col, r in pivots.items():
            v[col] = (-red.entries[r][free]) % p
        basis.append(tuple(v))
    return basis


def row_space_basis(vectors: Iterable[Sequence[int]], modulus: int) -> list[tuple[int, ...]]:
    """Canonical (rref) basis of the span of the given vectors."""
    vecs = [tuple(v) for v in vectors]
    if not vecs:
        return []
    rank, red = rref(FieldMatrix(vecs, modulus))
    return [red.entries[r] for r in range(rank)]


def in_span(vector: Sequence[int], basis: Sequence[Sequence[int]], modulus: int) -> bool:
    if not any(x % modulus for x in vector):
        return True
    if not basis:
        return False
    with_v = row_space_basis(list(basis) + [tuple(vector)], modulus)
    return len(with_v) == len(row_space_basis(basis, modulus))


def spans_equal(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], modulus: int) -> bool:
    return row_space_basis(a, modulus) == row_space_basis(b, modulus)


def subspace_intersection(
    bases: Sequence[Sequence[Sequence[int]]], modulus: int
) -> list[tuple[int, ...]]:
    """Canonical basis of the intersection of the spans of vector lists.

    Each subspace is converted to its annihilating equations (the nullspace of
    the matrix whose rows span it); the intersection is the joint kernel.
    """
    check_prime(modulus)
    if not bases:
        raise ValueError("need at least one subspace")
    dim = None
    for basis in bases:
        for v in basis:
            if dim is None:
                dim = len(v)
            elif len(v) != dim:
                raise ValueError("ambient dimension mismatch")
    if any(not basis for basis in bases):
        return []
    assert dim is not None
    constraints: list[tuple[int, ...]] = []
    for basis in bases:
        constraints.extend(nullspace(FieldMatrix([tuple(v) for v in basis], modulus)))
    if not constraints:
        return [tuple(FieldMatrix.identity(dim, modulus).entries[i]) for i in range(dim)]
    return nullspace(FieldMatrix(constraints, modulus))
