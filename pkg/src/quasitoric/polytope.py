"""Combinatorics of a product of simplices and of its vertex cut.

A product ``P = Δ^{n_1} x ... x Δ^{n_m}`` has facets ``Core(j, k)`` (the
k-th facet of the j-th simplex, 0 <= k <= n_j) and vertices ``Grid(k_1..k_m)``.
The vertex ``Grid(k)`` lies on ``Core(j, t)`` exactly when ``t != k_j``.

Cutting off the vertex ``Grid(n_1, ..., n_m)`` adds one facet ``Cut`` and
replaces the removed vertex by the n vertices ``CutVertex(1..n)`` of the new
simplex facet.  ``CutVertex(j)`` for ``j <= m`` sits on the edge that leaves
the cut vertex by dropping ``Core(j, 0)``; the remaining ``CutVertex(m + a)``
sit on the edges that drop ``Core(j, k)`` with ``1 <= k < n_j``, enumerated
in increasing order of the coordinate ``N_{j-1} + k``.

Faces are handled through their vertex sets; edges are derived from
incidence (two vertices sharing n - 1 facets).
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import InternalConsistencyError, InvalidInput, NotFound


@dataclass(frozen=True)
class Core:
    j: int
    k: int

    def sort_key(self):
        return (0, self.j, self.k)

    def to_json(self):
        return ["core", self.j, self.k]

    def __repr__(self):
        return f"Core({self.j},{self.k})"


@dataclass(frozen=True)
class Cut:
    def sort_key(self):
        return (1, 0, 0)

    def to_json(self):
        return ["cut"]

    def __repr__(self):
        return "Cut"


@dataclass(frozen=True)
class Grid:
    coords: tuple[int, ...]

    def sort_key(self):
        return (0, self.coords)

    def to_json(self):
        return ["grid", list(self.coords)]

    def __repr__(self):
        return "Grid(" + ",".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class CutVertex:
    i: int

    def sort_key(self):
        return (1, (self.i,))

    def to_json(self):
        return ["cutv", self.i]

    def __repr__(self):
        return f"CutVertex({self.i})"


FacetId = Union[Core, Cut]
VertexId = Union[Grid, CutVertex]
CUT = Cut()


def facet_from_json(obj) -> FacetId:
    if obj == ["cut"]:
        return CUT
    if isinstance(obj, list) and len(obj) == 3 and obj[0] == "core":
        return Core(int(obj[1]), int(obj[2]))
    raise InvalidInput(f"not a facet id: {obj!r}")


def vertex_from_json(obj) -> VertexId:
    if isinstance(obj, list) and len(obj) == 2:
        if obj[0] == "grid":
            return Grid(tuple(int(x) for x in obj[1]))
        if obj[0] == "cutv":
            return CutVertex(int(obj[1]))
    raise InvalidInput(f"not a vertex id: {obj!r}")


@dataclass(frozen=True)
class SimplexProduct:
    dims: tuple[int, ...]

    def __post_init__(self):
        if not self.dims or any((not isinstance(d, int)) or d < 1 for d in self.dims):
            raise InvalidInput(f"dims must be a nonempty list of positive integers, got {self.dims!r}")

    is_cut = False

    @property
    def base(self) -> "SimplexProduct":
        return self

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def n(self) -> int:
        return sum(self.dims)

    @cached_property
    def N(self) -> tuple[int, ...]:
        """Prefix sums ``(N_0, ..., N_m)`` with ``N_0 = 0``."""
        return (0, *itertools.accumulate(self.dims))

    def coordinate(self, facet: Core) -> int:
        """1-based coordinate ``N_{j-1} + k`` of a facet ``Core(j, k)`` with ``k >= 1``."""
        return self.N[facet.j - 1] + facet.k

    def block_of(self, position: int) -> tuple[int, int]:
        """Map a 1-based coordinate to ``(j, k)`` with ``position = N_{j-1} + k``."""
        for j in range(1, self.m + 1):
            if position <= self.N[j]:
                return j, position - self.N[j - 1]
        raise InvalidInput(f"coordinate {position} outside 1..{self.n}")

    @cached_property
    def facets(self) -> tuple[FacetId, ...]:
        return tuple(Core(j, k) for j in range(1, self.m + 1) for k in range(self.dims[j - 1] + 1))

    @cached_property
    def grid_vertices(self) -> tuple[Grid, ...]:
        return tuple(Grid(c) for c in itertools.product(*(range(d + 1) for d in self.dims)))

    @cached_property
    def vertices(self) -> tuple[VertexId, ...]:
        return self.grid_vertices

    @property
    def base_vertex(self) -> Grid:
        return Grid((0,) * self.m)

    def _check_vertex(self, v) -> None:
        if not (isinstance(v, Grid) and len(v.coords) == self.m
                and all(0 <= c <= d for c, d in zip(v.coords, self.dims))):
            raise NotFound(f"{v!r} is not a vertex of {self!r}")

    def vertex_facets(self, v: VertexId) -> frozenset:
        return self._incidence[v] if v in self._incidence else self._missing(v)

    def _missing(self, v):
        self._check_vertex(v)
        raise NotFound(f"{v!r} is not a vertex of {self!r}")

    def _grid_facets(self, v: Grid) -> frozenset:
        return frozenset(Core(j, t) for j in range(1, self.m + 1)
                         for t in range(self.dims[j - 1] + 1) if t != v.coords[j - 1])

    @cached_property
    def _incidence(self) -> dict:
        return {v: self._grid_facets(v) for v in self.grid_vertices}

    @cached_property
    def facet_vertices(self) -> dict:
        out = {f: set() for f in self.facets}
        for v in self.vertices:
            for f in self.vertex_facets(v):
                out[f].add(v)
        return {f: frozenset(vs) for f, vs in out.items()}

    @cached_property
    def adjacency(self) -> dict:
        n = self.n
        verts = self.vertices
        adj = {v: [] for v in verts}
        for u, w in itertools.combinations(verts, 2):
            if len(self.vertex_facets(u) & self.vertex_facets(w)) == n - 1:
                adj[u].append(w)
                adj[w].append(u)
        return adj

    @cached_property
    def _distances_from_base(self) -> dict:
        return self._bfs(self.base_vertex)

    def _bfs(self, source) -> dict:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def distance(self, u: VertexId, v: VertexId) -> int:
        self.vertex_facets(u)
        self.vertex_facets(v)
        if u == self.base_vertex:
            return self._distances_from_base[v]
        if v == self.base_vertex:
            return self._distances_from_base[u]
        return self._bfs(u)[v]

    # --- faces -------------------------------------------------------------

    def intersect(self, facets: Iterable[FacetId]) -> frozenset:
        """Vertex set of the intersection of the given facets (all vertices if none)."""
        result = None
        for f in facets:
            vs = self.facet_vertices[f]
            result = vs if result is None else result & vs
            if not result:
                return frozenset()
        return frozenset(self.vertices) if result is None else result

    @cached_property
    def faces(self) -> dict:
        """Map each nonempty face (as a vertex set) to its codimension.

        Exhaustive over facet subsets; the codimension of a face is the
        number of facets containing it.
        """
        out = {}
        for size in range(len(self.facets) + 1):
            for S in itertools.combinations(self.facets, size):
                vs = self.intersect(S)
                if vs and vs not in out:
                    containing = [f for f in self.facets if vs <= self.facet_vertices[f]]
                    out[vs] = len(containing)
        return out

    def f_vector(self) -> list[int]:
        """``[f_0, ..., f_n]`` where ``f_i`` counts i-dimensional faces."""
        f = [0] * (self.n + 1)
        for codim in self.faces.values():
            f[self.n - codim] += 1
        return f

    def h_vector(self) -> list[int]:
        n = self.n
        f = self.f_vector()
        # faces of codimension i play the role of (i-1)-simplices of the dual complex
        g = [f[n - i] for i in range(n + 1)]
        h = []
        for k in range(n + 1):
            h.append(sum((-1) ** (k - i) * math.comb(n - i, k - i) * g[i] for i in range(k + 1)))
        return h

    def minimal_nonfaces_closed_form(self) -> list[frozenset]:
        return [frozenset(Core(j, k) for k in range(self.dims[j - 1] + 1)) for j in range(1, self.m + 1)]

    def minimal_nonfaces(self) -> list[frozenset]:
        """Minimal facet sets with empty intersection, each verified against incidence."""
        families = self.minimal_nonfaces_closed_form()
        for S in families:
            if not self.is_minimal_nonface(S):
                raise InternalConsistencyError(f"{sorted(S, key=_key)} is not a minimal non-face")
        return families

    def is_minimal_nonface(self, S) -> bool:
        if self.intersect(S):
            return False
        return all(self.intersect(S - {f}) for f in S)

    def minimal_nonfaces_brute_force(self) -> list[frozenset]:
        out = []
        for size in range(1, len(self.facets) + 1):
            for S in itertools.combinations(self.facets, size):
                S = frozenset(S)
                if self.is_minimal_nonface(S):
                    out.append(S)
        return out

    # --- column ordering at vertices ----------------------------------------

    def base_order(self) -> tuple[FacetId, ...]:
        return tuple(Core(j, k) for j in range(1, self.m + 1) for k in range(1, self.dims[j - 1] + 1))

    def facet_order(self, v: VertexId) -> tuple[FacetId, ...]:
        """Facets at ``v`` in column order, by the closed-form coordinate rule.

        Column ``N_{j-1} + i`` holds ``Core(j, 0)`` when the j-th grid
        coordinate of ``v`` equals ``i``, and ``Core(j, i)`` otherwise.
        """
        self.vertex_facets(v)
        return self._grid_order(v)

    def _grid_order(self, v: Grid) -> tuple[FacetId, ...]:
        cols = []
        for j in range(1, self.m + 1):
            lj = v.coords[j - 1]
            cols.extend(Core(j, 0) if i == lj else Core(j, i) for i in range(1, self.dims[j - 1] + 1))
        return tuple(cols)

    def path_orderings(self, v: VertexId) -> set[tuple[FacetId, ...]]:
        """All column orderings reached along shortest edge paths from the base vertex.

        Each edge step puts the facet entered into the column of the facet
        left.  Serves as an independent check of :meth:`facet_order`.
        """
        dist = self._distances_from_base
        memo = {self.base_vertex: {self.base_order()}}
        for w in sorted(self.vertices, key=lambda x: dist[x]):
            if w in memo:
                continue
            found = set()
            for u in self.adjacency[w]:
                if dist[u] != dist[w] - 1:
                    continue
                (left,) = self.vertex_facets(u) - self.vertex_facets(w)
                (entered,) = self.vertex_facets(w) - self.vertex_facets(u)
                for order in memo[u]:
                    found.add(tuple(entered if f == left else f for f in order))
            memo[w] = found
            if w == v:
                break
        return memo[v]

    def to_json(self):
        return {"dims": list(self.dims), "cut": False}

    def __repr__(self):
        return f"SimplexProduct{self.dims}"


@dataclass(frozen=True)
class CutPolytope(SimplexProduct):
    """Vertex cut of ``SimplexProduct(dims)`` at ``Grid(n_1, ..., n_m)``."""

    is_cut = True

    @property
    def base(self) -> SimplexProduct:
        return SimplexProduct(self.dims)

    @property
    def cut_vertex(self) -> Grid:
        return Grid(self.dims)

    @cached_property
    def facets(self) -> tuple[FacetId, ...]:
        return super().facets + (CUT,)

    @cached_property
    def off_positions(self) -> tuple[int, ...]:
        """Coordinates not of the form ``N_j``, ascending; they index ``CutVertex(m + a)``."""
        ends = set(self.N[1:])
        return tuple(p for p in range(1, self.n + 1) if p not in ends)

    @cached_property
    def vertices(self) -> tuple[VertexId, ...]:
        grid = tuple(v for v in self.grid_vertices if v != self.cut_vertex)
        return grid + tuple(CutVertex(i) for i in range(1, self.n + 1))

    def dropped_facet(self, v: CutVertex) -> Core:
        """The facet at the cut vertex that ``v`` does not lie on."""
        if v.i <= self.m:
            return Core(v.i, 0)
        j, k = self.block_of(self.off_positions[v.i - self.m - 1])
        return Core(j, k)

    @cached_property
    def _incidence(self) -> dict:
        inc = {v: self._grid_facets(v) for v in self.grid_vertices if v != self.cut_vertex}
        at_cut = self._grid_facets(self.cut_vertex)
        for i in range(1, self.n + 1):
            v = CutVertex(i)
            inc[v] = (at_cut - {self.dropped_facet(v)}) | {CUT}
        return inc

    def _check_vertex(self, v) -> None:
        if isinstance(v, CutVertex) and 1 <= v.i <= self.n:
            return
        if v == self.cut_vertex:
            raise NotFound(f"{v!r} was removed by the cut")
        super()._check_vertex(v)

    def minimal_nonfaces_closed_form(self) -> list[frozenset]:
        out = super().minimal_nonfaces_closed_form()
        out += [frozenset({CUT, Core(j, self.dims[j - 1])}) for j in range(1, self.m + 1)]
        out.append(frozenset(Core(j, k) for j in range(1, self.m + 1) for k in range(self.dims[j - 1])))
        # with a single factor the last family sits inside the first one
        return [S for S in out if not any(T < S for T in out)]

    def facet_order(self, v: VertexId) -> tuple[FacetId, ...]:
        """Column order at ``v``; cut-facet vertices follow the edge they sit on.

        ``CutVertex(j)``, ``j <= m``: the cut-vertex order with ``Core(j, 0)``
        (column ``N_j``) replaced by ``Cut``.  ``CutVertex(m + a)`` dropping
        ``Core(j, k)``: ``Core(j, 0)`` moves into column ``N_{j-1} + k`` and
        ``Cut`` takes column ``N_j``.
        """
        self.vertex_facets(v)
        if isinstance(v, Grid):
            return self._grid_order(v)
        cols = list(self._grid_order(self.cut_vertex))
        dropped = self.dropped_facet(v)
        if dropped.k == 0:
            cols[self.N[dropped.j] - 1] = CUT
        else:
            cols[self.coordinate(dropped) - 1] = Core(dropped.j, 0)
            cols[self.N[dropped.j] - 1] = CUT
        return tuple(cols)

    def to_json(self):
        return {"dims": list(self.dims), "cut": True}

    def __repr__(self):
        return f"CutPolytope{self.dims}"


Polytope = Union[SimplexProduct, CutPolytope]


def _key(x):
    return x.sort_key()


def sort_facets(facets: Iterable[FacetId]) -> list[FacetId]:
    return sorted(facets, key=_key)


def build_product(dims: Sequence[int]) -> SimplexProduct:
    try:
        dims = tuple(int(d) if not isinstance(d, bool) else d for d in dims)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad dims {dims!r}") from exc
    return SimplexProduct(dims)


def vertex_cut(P: SimplexProduct) -> CutPolytope:
    if P.is_cut:
        raise InvalidInput("polytope is already cut")
    if P.n < 2:
        raise InvalidInput("cutting a vertex of a segment leaves an empty facet; need n >= 2")
    return CutPolytope(P.dims)


def polytope_from_json(obj) -> Polytope:
    try:
        dims = obj["dims"]
    except (TypeError, KeyError) as exc:
        raise InvalidInput("polytope description needs 'dims'") from exc
    if not isinstance(dims, list):
        raise InvalidInput("'dims' must be a list")
    P = build_product(dims)
    return vertex_cut(P) if obj.get("cut", False) else P


def vertex_facets(Q: Polytope, v: VertexId) -> frozenset:
    return Q.vertex_facets(v)


def distance(Q: Polytope, u: VertexId, v: VertexId) -> int:
    return Q.distance(u, v)


def f_vector(Q: Polytope) -> list[int]:
    return Q.f_vector()


def h_vector(Q: Polytope) -> list[int]:
    return Q.h_vector()


def minimal_nonfaces(Q: Polytope) -> list[frozenset]:
    return Q.minimal_nonfaces()
