import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasitoric.errors import InvalidInput, NotFound
from quasitoric.polytope import (
    CUT,
    Core,
    CutVertex,
    Grid,
    build_product,
    facet_from_json,
    polytope_from_json,
    vertex_cut,
    vertex_from_json,
)

DIMS = [(1,), (2,), (3,), (1, 1), (2, 1), (1, 2), (1, 1, 1), (2, 2), (3, 1), (1, 1, 1, 1)]

dims_strategy = st.lists(st.integers(1, 3), min_size=1, max_size=3).filter(lambda d: sum(d) <= 6).map(tuple)
cut_dims_strategy = dims_strategy.filter(lambda d: sum(d) >= 2)


def parity(order, reference):
    pos = {f: i for i, f in enumerate(reference)}
    perm = [pos[f] for f in order]
    seen = [False] * len(perm)
    sign = 0
    for i in range(len(perm)):
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length:
            sign += length - 1
    return sign % 2


class TestCounts:
    @pytest.mark.parametrize("dims,facets,vertices", [((2, 1), 5, 6), ((1, 1, 1), 6, 8), ((3,), 4, 4)])
    def test_product(self, dims, facets, vertices):
        P = build_product(dims)
        assert (len(P.facets), len(P.vertices)) == (facets, vertices)

    @pytest.mark.parametrize("dims,facets,vertices", [((2, 1), 6, 8), ((1, 1), 5, 5), ((1, 1, 1), 7, 10)])
    def test_cut(self, dims, facets, vertices):
        Q = vertex_cut(build_product(dims))
        assert (len(Q.facets), len(Q.vertices)) == (facets, vertices)

    @given(dims_strategy)
    def test_general_product(self, dims):
        P = build_product(dims)
        assert len(P.facets) == P.n + P.m
        assert len(P.vertices) == math.prod(d + 1 for d in dims)

    @given(cut_dims_strategy)
    def test_general_cut(self, dims):
        Q = vertex_cut(build_product(dims))
        assert len(Q.facets) == Q.n + Q.m + 1
        assert len(Q.vertices) == math.prod(d + 1 for d in dims) - 1 + Q.n


class TestIncidence:
    def test_base_vertex(self):
        P = build_product((2, 1))
        assert P.vertex_facets(Grid((0, 0))) == {Core(1, 1), Core(1, 2), Core(2, 1)}

    def test_cut_vertex_facets(self):
        Q = vertex_cut(build_product((2, 1)))
        assert Q.vertex_facets(CutVertex(1)) == {CUT, Core(1, 1), Core(2, 0)}

    def test_square_corner(self):
        assert build_product((1, 1)).vertex_facets(Grid((1, 1))) == {Core(1, 0), Core(2, 0)}

    def test_removed_vertex(self):
        Q = vertex_cut(build_product((2, 1)))
        with pytest.raises(NotFound):
            Q.vertex_facets(Grid((2, 1)))

    def test_cut_vertex_on_product(self):
        with pytest.raises(NotFound):
            build_product((2, 1)).vertex_facets(CutVertex(1))

    @given(cut_dims_strategy, st.booleans())
    def test_simple(self, dims, cut):
        Q = vertex_cut(build_product(dims)) if cut else build_product(dims)
        for v in Q.vertices:
            assert len(Q.vertex_facets(v)) == Q.n
        for u, nbrs in Q.adjacency.items():
            assert len(nbrs) == Q.n
            for v in nbrs:
                assert len(Q.vertex_facets(u) & Q.vertex_facets(v)) == Q.n - 1

    @given(dims_strategy)
    def test_grid_rule(self, dims):
        P = build_product(dims)
        for v in P.vertices:
            for f in P.facets:
                assert (f in P.vertex_facets(v)) == (f.k != v.coords[f.j - 1])


class TestDistance:
    def test_product(self):
        assert build_product((2, 1)).distance(Grid((0, 0)), Grid((1, 1))) == 2

    def test_cut_vertices(self):
        Q = vertex_cut(build_product((2, 1)))
        assert Q.distance(Q.base_vertex, CutVertex(1)) == 2
        assert Q.distance(Q.base_vertex, CutVertex(3)) == 3

    @given(cut_dims_strategy)
    def test_cut_vertex_distances(self, dims):
        Q = vertex_cut(build_product(dims))
        for i in range(1, Q.n + 1):
            expected = Q.m if i <= Q.m else Q.m + 1
            assert Q.distance(Q.base_vertex, CutVertex(i)) == expected


class TestHVector:
    def test_prism(self):
        assert build_product((2, 1)).h_vector() == [1, 2, 2, 1]

    def test_cut_prism(self):
        assert vertex_cut(build_product((2, 1))).h_vector() == [1, 3, 3, 1]

    def test_cube(self):
        assert build_product((1, 1, 1)).h_vector() == [1, 3, 3, 1]

    @given(cut_dims_strategy, st.booleans())
    def test_dehn_sommerville(self, dims, cut):
        Q = vertex_cut(build_product(dims)) if cut else build_product(dims)
        h = Q.h_vector()
        assert h == h[::-1]
        assert sum(h) == len(Q.vertices)
        assert Q.f_vector()[0] == len(Q.vertices)

    @given(dims_strategy)
    def test_product_h_polynomial(self, dims):
        # h-polynomial of a product of simplices is the product of 1 + t + ... + t^n_j
        coeffs = [1]
        for d in dims:
            new = [0] * (len(coeffs) + d)
            for i, c in enumerate(coeffs):
                for k in range(d + 1):
                    new[i + k] += c
            coeffs = new
        assert build_product(dims).h_vector() == coeffs


class TestNonFaces:
    def test_prism(self):
        P = build_product((2, 1))
        assert set(P.minimal_nonfaces()) == {
            frozenset({Core(1, 0), Core(1, 1), Core(1, 2)}), frozenset({Core(2, 0), Core(2, 1)})}

    def test_cut_prism_additions(self):
        Q = vertex_cut(build_product((2, 1)))
        extra = set(Q.minimal_nonfaces()) - set(build_product((2, 1)).minimal_nonfaces())
        assert extra == {frozenset({CUT, Core(1, 2)}), frozenset({CUT, Core(2, 1)}),
                         frozenset({Core(1, 0), Core(1, 1), Core(2, 0)})}

    def test_pentagon(self):
        nf = vertex_cut(build_product((1, 1))).minimal_nonfaces()
        assert len(nf) == 5 and all(len(s) == 2 for s in nf)

    @pytest.mark.parametrize("dims", [d for d in DIMS if sum(d) >= 2])
    def test_closed_form_matches_brute_force(self, dims):
        for Q in (build_product(dims), vertex_cut(build_product(dims))):
            assert set(Q.minimal_nonfaces_closed_form()) == set(Q.minimal_nonfaces_brute_force())


class TestFacetOrder:
    @pytest.mark.parametrize("dims", [(2, 1), (1, 1, 1), (2, 2), (3, 1), (1, 2)])
    def test_path_orderings_agree_in_parity(self, dims):
        Q = vertex_cut(build_product(dims))
        for v in Q.vertices:
            ref = Q.facet_order(v)
            orders = Q.path_orderings(v)
            assert ref in orders
            assert all(parity(o, ref) == 0 for o in orders)

    def test_base_order(self):
        P = build_product((2, 1))
        assert P.base_order() == (Core(1, 1), Core(1, 2), Core(2, 1))


class TestCut:
    def test_segment_rejected(self):
        with pytest.raises(InvalidInput):
            vertex_cut(build_product((1,)))

    def test_double_cut_rejected(self):
        with pytest.raises(InvalidInput):
            vertex_cut(vertex_cut(build_product((2, 1))))

    def test_bad_dims(self):
        with pytest.raises(InvalidInput):
            build_product((0, 1))
        with pytest.raises(InvalidInput):
            build_product(())

    @pytest.mark.parametrize("dims", DIMS[1:])
    def test_cut_adds_one_to_middle_h(self, dims):
        P = build_product(dims)
        h, hc = P.h_vector(), vertex_cut(P).h_vector()
        assert [b - a for a, b in zip(h, hc)] == [0] + [1] * (P.n - 1) + [0]


class TestJson:
    def test_round_trip(self):
        for Q in (build_product((2, 1)), vertex_cut(build_product((2, 1)))):
            assert polytope_from_json(Q.to_json()) == Q
            for f in Q.facets:
                assert facet_from_json(f.to_json()) == f
            for v in Q.vertices:
                assert vertex_from_json(v.to_json()) == v

    def test_malformed(self):
        with pytest.raises(InvalidInput):
            polytope_from_json({"dims": "21"})
