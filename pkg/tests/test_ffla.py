import itertools

import pytest
from hypothesis import given, strategies as st

from milnor_forge.ffla import (
    FieldMatrix,
    FieldScalar,
    in_span,
    is_prime,
    nullspace,
    row_space_basis,
    rref,
    spans_equal,
    subspace_intersection,
)


def leibniz_det(entries, p):
    """Independent determinant by permutation expansion (oracle)."""
    n = len(entries)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        prod = sign
        for i in range(n):
            prod *= entries[i][perm[i]]
        total += prod
    return total % p


def minor_rank(entries, p):
    """Independent rank: size of the largest nonsingular square minor."""
    rows, cols = len(entries), len(entries[0])
    for k in range(min(rows, cols), 0, -1):
        for rsel in itertools.combinations(range(rows), k):
            for csel in itertools.combinations(range(cols), k):
                minor = [[entries[i][j] for j in csel] for i in rsel]
                if leibniz_det(minor, p) != 0:
                    return k
    return 0


@st.composite
def field_matrices(draw, max_dim=4, primes=(2, 3, 5, 7)):
    p = draw(st.sampled_from(primes))
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    entries = [
        [draw(st.integers(0, p - 1)) for _ in range(cols)] for _ in range(rows)
    ]
    return FieldMatrix(entries, p)


class TestFieldScalar:
    def test_rejects_composite_modulus(self):
        with pytest.raises(ValueError):
            FieldScalar(1, 4)

    def test_arithmetic(self):
        a = FieldScalar(3, 5)
        b = FieldScalar(4, 5)
        assert (a + b).residue == 2
        assert (a * b).residue == 2
        assert (a - b).residue == 4
        assert (-a).residue == 2

    def test_inverse(self):
        a = FieldScalar(3, 7)
        assert (a * a.inverse()).residue == 1
        with pytest.raises(ZeroDivisionError):
            FieldScalar(0, 7).inverse()

    def test_normalizes_residue(self):
        assert FieldScalar(12, 5).residue == 2


class TestRref:
    def test_identity_unchanged(self):
        m = FieldMatrix.identity(3, 5)
        rank, red = rref(m)
        assert rank == 3
        assert red == m

    def test_zero_matrix(self):
        m = FieldMatrix.zeros(2, 4, 3)
        rank, red = rref(m)
        assert rank == 0
        assert red == m

    def test_dependent_rows(self):
        # row2 = 2*row1 over F_3
        rank, _ = rref(FieldMatrix([[1, 1], [2, 2]], 3))
        assert rank == 1

    def test_row_space_preserved(self):
        m = FieldMatrix([[1, 2, 3], [4, 0, 1], [2, 1, 2]], 5)
        _, red = rref(m)
        assert spans_equal(m.entries, red.entries, 5)


class TestNullspace:
    def test_identity_has_trivial_kernel(self):
        assert nullspace(FieldMatrix.identity(4, 3)) == []

    def test_zero_has_full_kernel(self):
        basis = nullspace(FieldMatrix.zeros(3, 3, 5))
        assert len(basis) == 3

    def test_hand_solved_kernel(self):
        # 1*3 + 2*1 = 5 = 0 over F_5
        basis = nullspace(FieldMatrix([[1, 2, 0], [0, 0, 1]], 5))
        assert basis == [(3, 1, 0)]


class TestSubspaceIntersection:
    def test_self_intersection(self):
        basis = [(1, 0, 1), (0, 1, 0)]
        result = subspace_intersection([basis, basis], 3)
        assert len(result) == 2
        assert spans_equal(result, basis, 3)

    def test_with_full_space(self):
        basis = [(1, 2), (0, 1)]
        sub = [(1, 1)]
        result = subspace_intersection([sub, basis], 5)
        assert len(result) == 1
        assert spans_equal(result, sub, 5)

    def test_plane_meets_line(self):
        result = subspace_intersection([[(1, 0), (0, 1)], [(1, 1)]], 3)
        assert len(result) == 1
        assert in_span((1, 1), result, 3)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            subspace_intersection([[(1, 0)], [(1, 0, 0)]], 3)

    def test_empty_subspace(self):
        assert subspace_intersection([[], [(1, 0)]], 3) == []


class TestMatrixOps:
    def test_inverse(self):
        m = FieldMatrix([[1, 1], [0, 1]], 5)
        assert m * m.inverse() == FieldMatrix.identity(2, 5)

    def test_singular_inverse_raises(self):
        with pytest.raises(ValueError):
            FieldMatrix([[1, 1], [2, 2]], 3).inverse()

    def test_apply(self):
        m = FieldMatrix([[1, 2], [3, 4]], 5)
        assert m.apply((1, 1)) == (3, 2)


@given(field_matrices())
def test_rank_nullity(m):
    rank, red = rref(m)
    kernel = nullspace(m)
    assert rank + len(kernel) == m.cols
    assert red.rank() == rank


@given(field_matrices())
def test_nullspace_vectors_annihilated(m):
    for v in nullspace(m):
        assert not any(m.apply(v))


@given(field_matrices(max_dim=4))
def test_rank_matches_minor_oracle(m):
    rank, _ = rref(m)
    assert rank == minor_rank([list(r) for r in m.entries], m.modulus)


@given(field_matrices(max_dim=3), field_matrices(max_dim=3))
def test_intersection_commutative_in_dimension(a, b):
    if a.modulus != b.modulus or a.cols != b.cols:
        return
    p = a.modulus
    lhs = subspace_intersection([list(a.entries), list(b.entries)], p)
    rhs = subspace_intersection([list(b.entries), list(a.entries)], p)
    assert len(lhs) == len(rhs)
    assert spans_equal(lhs, rhs, p)


@given(field_matrices(max_dim=3))
def test_intersection_idempotent_in_dimension(m):
    basis = row_space_basis(m.entries, m.modulus)
    if not basis:
        return
    result = subspace_intersection([basis, basis], m.modulus)
    assert len(result) == len(basis)


def enumerate_span(basis, p):
    """Every vector of the span, by brute force over coefficient tuples."""
    dim = len(basis[0])
    vectors = {tuple([0] * dim)}
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = tuple(
            sum(c * row[i] for c, row in zip(coeffs, basis)) % p for i in range(dim)
        )
        vectors.add(v)
    return vectors


@given(field_matrices(max_dim=3, primes=(2, 3, 5)), field_matrices(max_dim=3, primes=(2, 3, 5)))
def test_intersection_matches_brute_force_enumeration(a, b):
    if a.modulus != b.modulus or a.cols != b.cols:
        return
    p = a.modulus
    basis_a = row_space_basis(a.entries, p)
    basis_b = row_space_basis(b.entries, p)
    if not basis_a or not basis_b:
        return
    result = subspace_intersection([basis_a, basis_b], p)
    common = enumerate_span(basis_a, p) & enumerate_span(basis_b, p)
    if result:
        assert enumerate_span(result, p) == common
    else:
        assert common == {tuple([0] * a.cols)}


def test_single_subspace_preserves_span():
    basis = [(2, 4, 0), (0, 0, 3)]
    result = subspace_intersection([basis], 5)
    assert len(result) == 2
    assert spans_equal(result, basis, 5)


def test_is_prime_small_values():
    assert [n for n in range(2, 20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
