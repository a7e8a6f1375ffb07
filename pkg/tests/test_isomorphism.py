import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasitoric import exactla as la
from quasitoric.acceptance import admissible_b, enumerated
from quasitoric.charpair import CharPair
from quasitoric.classify import permute_factors
from quasitoric.cohomology import eliminated_presentation
from quasitoric.errors import InvalidInput, NotAnIso
from quasitoric.isomorphism import (
    LinearSubstitution,
    build_det0_isomorphism,
    build_shear_substitution,
    certificate_for_shear,
    factor_relabeling,
    iso_transfer_check,
    cumulative_shear_coefficients,
    search_ring_map,
    shear,
    shear_coefficients,
    verify_ring_map,
)
from quasitoric.polytope import build_product, vertex_cut

CUT_PRISM = vertex_cut(build_product((2, 1)))
A_ZERO = [(-1, -1, 1), (0, 1, -1)]
CUBE_A = [(-1, 1, 0), (0, -1, 1), (1, 0, -1)]
CUBE = vertex_cut(build_product((1, 1, 1)))


def prism_zero(b):
    return CharPair.from_matrix(CUT_PRISM, A_ZERO, b)


def cube_zero(b):
    return CharPair.from_matrix(CUBE, CUBE_A, b)


def general_candidates(nvars, bound):
    rows = list(itertools.product(range(-bound, bound + 1), repeat=nvars))
    return [rows for _ in range(nvars)]


def unimodular_matrices(n):
    """Products of elementary operations; always determinant +-1."""
    op = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-2, 2), st.booleans())

    def build(ops):
        M = la.identity(n)
        for i, j, c, flip in ops:
            if i != j:
                M[i] = [a + c * b for a, b in zip(M[i], M[j])]
            elif flip:
                M[i] = [-a for a in M[i]]
        return LinearSubstitution(tuple(map(tuple, M)))

    return st.lists(op, max_size=8).map(build)


class TestSubstitution:
    def test_identity(self):
        I = LinearSubstitution.identity(3)
        assert I.det == 1 and I.unimodular

    def test_not_square(self):
        with pytest.raises(InvalidInput):
            LinearSubstitution(((1, 0),))

    @given(unimodular_matrices(3))
    def test_inverse(self, S):
        assert S.unimodular
        assert S.compose(S.inverse()) == LinearSubstitution.identity(3)
        assert S.inverse().compose(S) == LinearSubstitution.identity(3)

    @given(unimodular_matrices(3), unimodular_matrices(3))
    def test_compose_applies_in_order(self, S, T):
        pres = eliminated_presentation(prism_zero((0, 0, -1)))
        g = pres.generators[1].poly
        step = S.apply(g)
        assert S.compose(T).apply(g) == step.substitute(T.images(pres.variables))


class TestVerify:
    def test_identity_certificate(self):
        pres = eliminated_presentation(prism_zero((0, 0, -1)))
        cert = verify_ring_map(LinearSubstitution.identity(3), pres, pres)
        assert len(cert.witnesses) == len(pres.generators)

    def test_singular_rejected(self):
        pres = eliminated_presentation(prism_zero((0, 0, -1)))
        with pytest.raises(NotAnIso):
            verify_ring_map(LinearSubstitution(((1, 0, 0), (1, 0, 0), (0, 0, 1))), pres, pres)

    def test_size_mismatch(self):
        pres = eliminated_presentation(prism_zero((0, 0, -1)))
        with pytest.raises(InvalidInput):
            verify_ring_map(LinearSubstitution.identity(4), pres, pres)


class TestShear:
    def test_same_b(self):
        p = prism_zero((0, 0, -1))
        data = shear_coefficients(p, p)
        assert data.c == (0, 0)
        assert build_shear_substitution(p, p) == LinearSubstitution.identity(3)

    def test_round_trip_is_identity(self):
        p, q = cube_zero((-2, -1, 2)), cube_zero((-2, 2, -1))
        there, back = build_shear_substitution(p, q), build_shear_substitution(q, p)
        assert there.compose(back) == LinearSubstitution.identity(4)

    def test_certificate_within_a_shear_class(self):
        p, q = cube_zero((-2, -1, 2)), cube_zero((-2, 2, -1))
        cert = certificate_for_shear(p, q)
        assert cert.substitution.unimodular

    def test_perturbed_shear_fails(self):
        p, q = cube_zero((-2, -1, 2)), cube_zero((-2, 2, -1))
        c = list(shear_coefficients(p, q).c)
        c[0] += 1
        with pytest.raises(NotAnIso):
            verify_ring_map(shear(c), eliminated_presentation(q), eliminated_presentation(p))

    def test_literal_rule_is_off_by_one_factor(self):
        p, q = cube_zero((-2, -1, 2)), cube_zero((-2, 2, -1))
        lit = cumulative_shear_coefficients(p, q)
        assert lit != shear_coefficients(p, q).c
        with pytest.raises(NotAnIso):
            verify_ring_map(shear(lit), eliminated_presentation(q), eliminated_presentation(p))

    def test_prism_shear_needs_divisibility(self):
        data = shear_coefficients(prism_zero((0, 0, -1)), prism_zero((0, -1, 0)))
        assert data.c is None and data.weighted_total == 1


class TestDetZeroConstruction:
    def test_cube_classes_joined_by_rotation(self):
        p = cube_zero((-2, -1, 2))
        for b in ((-2, 0, 1), (-2, 1, 0)):
            sub = build_det0_isomorphism(p, cube_zero(b))
            verify_ring_map(sub, eliminated_presentation(cube_zero(b)), eliminated_presentation(p))

    def test_every_cube_target_certifies(self):
        for pair in enumerated((1, 1, 1)):
            if pair.det_A_tilde != 0 or any(pair.b[i] for i in range(3) if i + 1 not in pair.N[1:]):
                continue
            dst = eliminated_presentation(pair)
            for b2 in admissible_b(CUBE):
                other = CharPair.from_matrix(CUBE, [list(a) for a in pair.a], b2)
                verify_ring_map(build_det0_isomorphism(pair, other), eliminated_presentation(other), dst)
            break

    def test_relabeling_matrix(self):
        M = factor_relabeling(3, (2, 3, 1)).matrix
        assert M == ((0, 0, 1, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1))

    def test_prism_construction_fails(self):
        with pytest.raises(NotAnIso):
            build_det0_isomorphism(prism_zero((0, 0, -1)), prism_zero((0, -1, 0)))


class TestPrismSearch:
    def test_isomorphic_classes_are_found(self):
        src = eliminated_presentation(prism_zero((0, -2, 1)))
        dst = eliminated_presentation(prism_zero((0, 0, -1)))
        res = search_ring_map(src, dst, general_candidates(3, 2))
        assert res.found is not None
        verify_ring_map(res.found, src, dst)

    def test_isolated_class(self):
        # b = (0, -1, 0) has no ring map to b = (0, 0, -1) with coefficients in [-2, 2]
        src = eliminated_presentation(prism_zero((0, -1, 0)))
        dst = eliminated_presentation(prism_zero((0, 0, -1)))
        res = search_ring_map(src, dst, general_candidates(3, 2))
        assert res.found is None and res.complete_within_bounds


class TestTransfer:
    def test_same_pair(self):
        pair = next(q for q in enumerated((2, 1)) if q.det_A_tilde == 1)
        rep = iso_transfer_check(pair, pair, 1)
        assert rep["cut_iso_found"] and rep["base_iso_found"] and rep["consistent"]

    def test_factor_permutation(self):
        pair = next(q for q in enumerated((1, 1, 1)) if q.det_A_tilde == -1 and q.det_hypothesis())
        moved = permute_factors(pair, (2, 3, 1))
        rep = iso_transfer_check(pair, moved, 1)
        assert rep["cut_iso_found"] and rep["base_iso_found"]

    def test_different_polytopes(self):
        a = next(q for q in enumerated((2, 1)) if q.det_A_tilde == 1)
        b = next(q for q in enumerated((1, 1, 1)) if q.det_A_tilde == -1)
        with pytest.raises(InvalidInput):
            iso_transfer_check(a, b)
