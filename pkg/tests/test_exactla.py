import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

from quasitoric import exactla as la
from quasitoric.errors import InvalidInput


def small_matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


def square_matrices(max_size=5, lo=-5, hi=5):
    return st.integers(1, max_size).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n))


def diag_of(d, rows, cols):
    D = la.zeros(rows, cols)
    for i, x in enumerate(d):
        D[i][i] = x
    return D


def check_smith(M):
    S = la.smith_normal_form(M)
    r, c = la.shape(M)
    assert la.matmul(la.matmul(S.U, M), S.V) == diag_of(S.diagonal, r, c)
    assert abs(la.det(S.U)) == 1 and abs(la.det(S.V)) == 1
    nz = [d for d in S.diagonal if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert S.diagonal[len(nz):] == [0] * (len(S.diagonal) - len(nz))
    return S


class TestDeterminant:
    def test_identity(self):
        assert la.det(la.identity(3)) == 1

    def test_singular_columns(self):
        assert la.det([[1, 1, 0], [0, 1, 1], [0, 1, 1]]) == 0

    def test_hand_example(self):
        assert la.det([[1, -1, 0], [0, -1, 1], [0, 2, -1]]) == -1

    def test_big_entries_stay_exact(self):
        big = 10 ** 40
        assert la.det([[big, 1], [1, big]]) == big * big - 1

    def test_non_square_rejected(self):
        with pytest.raises(InvalidInput):
            la.det([[1, 2, 3]])

    @given(square_matrices())
    def test_matches_sympy(self, M):
        assert la.det(M) == sympy.Matrix(M).det()

    @given(square_matrices(4), square_matrices(4))
    def test_multiplicative(self, A, B):
        if len(A) != len(B):
            return
        assert la.det(la.matmul(A, B)) == la.det(A) * la.det(B)

    @given(square_matrices(4))
    def test_adjugate_identity(self, M):
        n = len(M)
        d = la.det(M)
        expected = [[d if i == j else 0 for j in range(n)] for i in range(n)]
        assert la.matmul(M, la.adjugate(M)) == expected


class TestSmith:
    def test_diag_2_3(self):
        S = check_smith([[2, 0], [0, 3]])
        assert S.diagonal == [1, 6]

    def test_zero_matrix(self):
        assert la.smith_normal_form([[0, 0], [0, 0]]).diagonal == [0, 0]

    def test_two_by_two(self):
        assert check_smith([[2, 4], [6, 8]]).diagonal == [2, 4]

    def test_right_only_transform(self):
        M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
        full = la.smith_normal_form(M)
        right = la.smith_normal_form(M, transforms="right")
        bare = la.smith_normal_form(M, transforms=False)
        assert full.diagonal == right.diagonal == bare.diagonal == [2, 6, 12]
        assert right.U is None and right.V is not None
        assert bare.U is None and bare.V is None

    @settings(max_examples=150)
    @given(small_matrices())
    def test_transforms_and_divisibility(self, M):
        check_smith(M)

    @settings(max_examples=150)
    @given(small_matrices())
    def test_invariant_factors_match_sympy(self, M):
        ours = [d for d in la.invariant_factors(M) if d]
        theirs = [abs(int(d)) for d in sympy_invariant_factors(sympy.Matrix(M), domain=sympy.ZZ) if d]
        assert ours == theirs

    @given(small_matrices())
    def test_rank_matches_rational_rank(self, M):
        assert la.smith_normal_form(M, transforms=False).rank == la.rational_rank(M) == sympy.Matrix(M).rank()


class TestRank:
    def test_identity(self):
        assert la.rational_rank(la.identity(4)) == 4

    def test_outer_product(self):
        assert la.rational_rank([[3, 4], [6, 8]]) == 1


class TestHermite:
    @settings(max_examples=150)
    @given(small_matrices())
    def test_transform_and_shape(self, M):
        H, U = la.hermite_normal_form(M)
        assert la.matmul(U, M) == H
        assert abs(la.det(U)) == 1
        last = -1
        for row in H:
            lead = next((j for j, x in enumerate(row) if x), None)
            if lead is None:
                continue
            assert lead > last and row[lead] > 0
            last = lead


class TestLattice:
    def test_zero_vector(self):
        assert la.lattice_member([0, 0], [[2, 0], [0, 1]])

    def test_parity_obstruction(self):
        assert not la.lattice_member([1, 0], [[2, 0], [0, 1]])

    def test_member(self):
        assert la.lattice_member([2, 1], [[2, 0], [0, 1]])

    def test_solve_gives_witness(self):
        rows = [[2, 4, 0], [0, 3, 3], [1, 1, 1]]
        L = la.Lattice(rows)
        v = [1, 9, 5]
        x = L.solve(v)
        assert x is not None and la.vecmat(x, rows) == v

    def test_wrong_length(self):
        with pytest.raises(InvalidInput):
            la.Lattice([[1, 0]]).solve([1, 0, 0])

    @settings(max_examples=60)
    @given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=1, max_size=3),
           st.lists(st.integers(-4, 4), min_size=2, max_size=2))
    def test_against_brute_force(self, rows, v):
        reachable = {
            tuple(sum(c * r[k] for c, r in zip(cs, rows)) for k in range(2))
            for cs in itertools.product(range(-12, 13), repeat=len(rows))
        }
        if tuple(v) in reachable:
            assert la.lattice_member(v, rows)
        L = la.Lattice(rows)
        x = L.solve(v)
        if x is not None:
            assert la.vecmat(x, rows) == v
        else:
            assert tuple(v) not in reachable


class TestHelpers:
    def test_xgcd(self):
        g, x, y = la.xgcd(240, 46)
        assert g == 2 and 240 * x + 46 * y == 2

    @given(st.integers(-500, 500), st.integers(-500, 500))
    def test_xgcd_bezout(self, a, b):
        g, x, y = la.xgcd(a, b)
        assert g >= 0 and a * x + b * y == g
        if a or b:
            assert a % g == 0 and b % g == 0

    def test_unimodular_inverse(self):
        M = [[1, -1, 0], [0, -1, 1], [0, 2, -1]]
        assert la.matmul(M, la.unimodular_inverse(M)) == la.identity(3)

    def test_principal_submatrix(self):
        A = [[1, 2], [3, 4], [5, 6]]
        assert la.principal_submatrix(A, (2, 1), (1, 1)) == [[1, 2], [5, 6]]
        assert la.principal_submatrix(A, (2, 1), (2, 1)) == [[3, 4], [5, 6]]
        C = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
        assert la.principal_submatrix(C, (1, 1, 1), (1, 1, 1)) == C
