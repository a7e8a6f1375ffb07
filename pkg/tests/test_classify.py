import functools
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasitoric import exactla as la
from quasitoric.charpair import CharPair
from quasitoric.classify import (
    CYCLIC,
    UPPER,
    check_minor_one_form,
    classification_report,
    classify_A_tilde,
    cyclic_scalars,
    enumerate_pairs,
    expected_b,
    has_cyclic_pattern,
    has_upper_pattern,
    permute_factors,
    verify_b,
)
from quasitoric.errors import InvalidInput, NoValidB, PreconditionError
from quasitoric.polytope import build_product, vertex_cut

CUT_PRISM = vertex_cut(build_product((2, 1)))
A_UPPER = [(-1, -1, 0), (0, 0, -1)]
A_ZERO = [(-1, -1, 1), (0, 1, -1)]
A_MINUS = [(-1, -1, 2), (0, 1, -1)]


@functools.lru_cache(maxsize=None)
def sorted_pairs(dims, bound):
    pairs = enumerate_pairs(vertex_cut(build_product(dims)), bound)
    return sorted(pairs, key=lambda p: str(p.to_json()))


def brute_force_pairs(dims, bound):
    """Every normalized pair with entries in [-bound, bound] passing the vertex checks, no shortcuts."""
    Q = vertex_cut(build_product(dims))
    rng = range(-bound, bound + 1)
    found = set()
    for entries in itertools.product(rng, repeat=Q.n * Q.m + Q.n):
        cols = [entries[j * Q.n:(j + 1) * Q.n] for j in range(Q.m)]
        b = entries[Q.m * Q.n:]
        p = CharPair.from_matrix(Q, cols, b)
        if p.is_characteristic()[0] and p.det_hypothesis():
            found.add(p)
    return found


class TestMinorForm:
    def test_upper(self):
        assert check_minor_one_form([[1, 1], [0, 1]]).form == UPPER

    def test_identity(self):
        assert check_minor_one_form([[1, 0], [0, 1]]).form == UPPER

    def test_off_hypothesis_matrix(self):
        # det 3 and product -2: the product condition cannot hold
        res = check_minor_one_form([[1, -1], [2, 1]])
        assert res.form == CYCLIC
        assert res.determinants == (3,)
        assert res.product_condition is False


class TestClassify:
    def test_upper(self):
        res = classify_A_tilde(CharPair.from_matrix(CUT_PRISM, A_UPPER, (0, -1, -1)))
        assert (res.case, res.det) == (UPPER, 1)

    def test_cyclic(self):
        res = classify_A_tilde(CharPair.from_matrix(CUT_PRISM, A_MINUS, (0, 0, -1)))
        assert (res.case, res.det, res.cyclic_scalars) == (CYCLIC, -1, (1, 2))

    def test_square_det_zero(self):
        Q = vertex_cut(build_product((1, 1)))
        res = classify_A_tilde(CharPair.from_matrix(Q, [(-1, 1), (1, -1)], (0, -1)))
        assert (res.case, res.det) == (CYCLIC, 0)

    def test_report(self):
        rep = classification_report(CharPair.from_matrix(CUT_PRISM, A_UPPER, (0, -1, -1)))
        assert rep["case"] == "upper_triangular" and rep["verified"]
        assert rep["b_constraint"] == {"case": "det_nonzero", "b": [0, -1, -1]}


class TestExpectedB:
    def test_det_one(self):
        assert expected_b(CharPair.from_matrix(CUT_PRISM, A_UPPER, (0, 0, 0))).b == (0, -1, -1)

    def test_det_minus_one(self):
        assert expected_b(CharPair.from_matrix(CUT_PRISM, A_MINUS, (0, 0, 0))).b == (0, 0, -1)

    def test_det_zero(self):
        c = expected_b(CharPair.from_matrix(CUT_PRISM, A_ZERO, (0, 0, -1)))
        assert (c.case, c.positions, c.total) == ("det_zero", (2, 3), -1)

    def test_not_divisible(self):
        with pytest.raises(NoValidB):
            expected_b(CharPair.from_matrix(CUT_PRISM, [(-1, -1, 2), (0, 2, -1)], (0, 0, 0)))

    def test_wrong_b_breaks_alternation(self):
        with pytest.raises(PreconditionError):
            verify_b(CharPair.from_matrix(CUT_PRISM, A_UPPER, (0, 0, -1)))


class TestEnumeration:
    def test_square_counts(self):
        assert len(list(enumerate_pairs(vertex_cut(build_product((1, 1))), 2))) == 18

    def test_rejects_uncut(self):
        with pytest.raises(InvalidInput):
            list(enumerate_pairs(build_product((1, 1)), 2))

    def test_rejects_zero_bound(self):
        with pytest.raises(InvalidInput):
            list(enumerate_pairs(vertex_cut(build_product((1, 1))), 0))

    @pytest.mark.parametrize("dims,bound", [((1, 1), 2), ((2, 1), 1), ((1, 2), 1)])
    def test_matches_brute_force(self, dims, bound):
        Q = vertex_cut(build_product(dims))
        assert set(enumerate_pairs(Q, bound)) == brute_force_pairs(dims, bound)

    @pytest.mark.parametrize("dims", [(1, 1), (2, 1), (1, 1, 1)])
    def test_every_pair_classifies_with_literal_pattern(self, dims):
        for pair in enumerate_pairs(vertex_cut(build_product(dims)), 1):
            res = classify_A_tilde(pair)
            p = permute_factors(pair, res.sigma)
            if res.case == UPPER:
                assert has_upper_pattern(p) and res.det == (-1) ** pair.m
            else:
                assert has_cyclic_pattern(p)
                scalars = cyclic_scalars(p)
                prod = 1
                for s in scalars:
                    prod *= s
                assert res.det == (-1) ** pair.m + (-1) ** (pair.m - 1) * prod
            assert verify_b(pair).verified


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_factor_permutation_keeps_validity_and_det(data):
    dims = data.draw(st.sampled_from([(2, 1), (1, 1, 1), (1, 2)]))
    pair = data.draw(st.sampled_from(sorted_pairs(dims, 1)))
    sigma = data.draw(st.permutations(range(1, pair.m + 1)))
    moved = permute_factors(pair, sigma)
    assert moved.is_characteristic()[0]
    assert moved.det_A_tilde == pair.det_A_tilde
    assert permute_factors(moved, [sigma.index(i) + 1 for i in range(1, pair.m + 1)]) == pair


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_adjoint_identity_holds_for_enumerated_pairs(data):
    dims = data.draw(st.sampled_from([(1, 1), (2, 1), (1, 1, 1)]))
    pair = data.draw(st.sampled_from(sorted_pairs(dims, 2)))
    adj = la.adjugate(pair.matrix_A_tilde())
    assert la.matvec(adj, pair.b) == [(-1) ** pair.m] * pair.n
