"""Characteristic functions on a product of simplices and on its vertex cut.

A pair assigns an integer n-vector to every facet.  Once normalized at the
base vertex ``Grid(0, ..., 0)`` the facets ``Core(j, k)`` with ``k >= 1``
carry standard basis vectors, so the data left is the n x m matrix ``A``
(column j is the vector on ``Core(j, 0)``) and, on a cut polytope, the
vector ``b`` on ``Cut``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from . import exactla as la
from .errors import InternalConsistencyError, InvalidInput, NotNormalizable, PreconditionError
from .polytope import (
    CUT,
    Core,
    CutPolytope,
    FacetId,
    Grid,
    Polytope,
    SimplexProduct,
    VertexId,
    polytope_from_json,
    vertex_cut,
)


def unit(n: int, i: int) -> tuple[int, ...]:
    """Standard basis vector ``e_i`` of length n (1-based)."""
    return tuple(int(t == i - 1) for t in range(n))


@dataclass(frozen=True)
class VertexMatrix:
    vertex: VertexId
    columns: tuple[tuple[int, ...], ...]
    facet_of_column: tuple[FacetId, ...]

    @property
    def matrix(self) -> la.Matrix:
        return la.from_columns(self.columns)

    @cached_property
    def det(self) -> int:
        return la.det(self.matrix)


@dataclass(frozen=True)
class CharPair:
    polytope: Polytope
    assignment: Mapping[FacetId, tuple[int, ...]] = field(hash=False)

    def __post_init__(self):
        Q = self.polytope
        vectors = {}
        for f in Q.facets:
            if f not in self.assignment:
                raise InvalidInput(f"no vector assigned to {f!r}")
            v = tuple(int(x) for x in self.assignment[f])
            if len(v) != Q.n:
                raise InvalidInput(f"vector on {f!r} has length {len(v)}, expected {Q.n}")
            vectors[f] = v
        extra = set(self.assignment) - set(Q.facets)
        if extra:
            raise InvalidInput(f"vectors assigned to non-facets {sorted(map(repr, extra))}")
        object.__setattr__(self, "assignment", vectors)

    @classmethod
    def from_matrix(cls, polytope: Polytope, A_columns: Sequence[Sequence[int]], b=None) -> "CharPair":
        """Normalized pair from the columns ``a_1..a_m`` and, on a cut polytope, ``b``."""
        Q = polytope
        if len(A_columns) != Q.m:
            raise InvalidInput(f"expected {Q.m} columns a_j, got {len(A_columns)}")
        assignment = {}
        for j in range(1, Q.m + 1):
            assignment[Core(j, 0)] = tuple(A_columns[j - 1])
            for k in range(1, Q.dims[j - 1] + 1):
                assignment[Core(j, k)] = unit(Q.n, Q.N[j - 1] + k)
        if Q.is_cut:
            if b is None:
                raise InvalidInput("a cut polytope needs the vector b")
            assignment[CUT] = tuple(b)
        elif b is not None:
            raise InvalidInput("b given for a polytope without a cut facet")
        return cls(Q, assignment)

    # --- derived data ------------------------------------------------------

    @property
    def n(self) -> int:
        return self.polytope.n

    @property
    def m(self) -> int:
        return self.polytope.m

    @property
    def dims(self) -> tuple[int, ...]:
        return self.polytope.dims

    @property
    def N(self) -> tuple[int, ...]:
        return self.polytope.N

    @property
    def a(self) -> list[tuple[int, ...]]:
        """The columns ``a_1..a_m``."""
        return [self.assignment[Core(j, 0)] for j in range(1, self.m + 1)]

    @property
    def A(self) -> la.Matrix:
        """The n x m matrix with column j equal to ``a_j``."""
        return la.from_columns(self.a)

    @property
    def b(self) -> tuple[int, ...] | None:
        return self.assignment.get(CUT)

    def entry(self, j: int, ell: int) -> int:
        """Coordinate ``ell`` (1-based) of ``a_j``."""
        return self.assignment[Core(j, 0)][ell - 1]

    @property
    def is_normalized(self) -> bool:
        Q = self.polytope
        return all(self.assignment[f] == unit(Q.n, Q.coordinate(f)) for f in Q.base_order())

    def _require_normalized(self):
        if not self.is_normalized:
            raise PreconditionError("pair is not normalized at the base vertex")

    # --- vertex matrices ---------------------------------------------------

    def vertex_matrix(self, u: VertexId) -> VertexMatrix:
        self._require_normalized()
        order = self.polytope.facet_order(u)
        return VertexMatrix(u, tuple(self.assignment[f] for f in order), order)

    def vertex_matrix_by_paths(self, u: VertexId) -> list[VertexMatrix]:
        """Vertex matrices from every shortest edge path out of the base vertex."""
        self._require_normalized()
        return [VertexMatrix(u, tuple(self.assignment[f] for f in order), order)
                for order in sorted(self.polytope.path_orderings(u), key=lambda o: [f.sort_key() for f in o])]

    @cached_property
    def vertex_determinants(self) -> dict:
        return {u: self.vertex_matrix(u).det for u in self.polytope.vertices}

    def is_characteristic(self) -> tuple[bool, list]:
        """Unimodularity at every vertex; returns ``(ok, failing vertices)``.

        On an uncut product the answer is cross-checked against the
        principal-minor criterion on ``A``.
        """
        failing = [u for u, d in self.vertex_determinants.items() if d not in (1, -1)]
        ok = not failing
        if not self.polytope.is_cut and principal_minor_criterion(self) != ok:
            raise InternalConsistencyError(
                "vertex determinants and principal minors disagree on unimodularity")
        return ok, failing

    def det_hypothesis(self) -> bool:
        """Every vertex determinant equals ``(-1)^d`` with d the distance to the base vertex."""
        Q = self.polytope
        u0 = Q.base_vertex
        return all(d == (-1) ** Q.distance(u0, u) for u, d in self.vertex_determinants.items())

    def det_hypothesis_failures(self) -> list:
        Q = self.polytope
        u0 = Q.base_vertex
        return [u for u, d in self.vertex_determinants.items() if d != (-1) ** Q.distance(u0, u)]

    # --- the matrices at the cut vertex ------------------------------------

    def matrix_A_tilde(self) -> la.Matrix:
        """Matrix at ``Grid(n_1..n_m)``: ``a_j`` sits in column ``N_j``, unit vectors elsewhere."""
        self._require_normalized()
        cols = [unit(self.n, i) for i in range(1, self.n + 1)]
        for j in range(1, self.m + 1):
            cols[self.N[j] - 1] = self.a[j - 1]
        return la.from_columns(cols)

    def matrix_A_prime(self) -> la.Matrix:
        """The m x m block of rows and columns ``N_1..N_m`` of :meth:`matrix_A_tilde`."""
        At = self.matrix_A_tilde()
        ends = [t - 1 for t in self.N[1:]]
        Ap = [[At[r][c] for c in ends] for r in ends]
        if la.det(At) != la.det(Ap):
            raise InternalConsistencyError("det of the reduced cut-vertex matrix differs")
        return Ap

    @cached_property
    def det_A_tilde(self) -> int:
        return la.det(self.matrix_A_tilde())

    def induced_on_base(self) -> "CharPair":
        """Forget the cut facet; the result need not be characteristic."""
        Q = self.polytope
        if not Q.is_cut:
            raise InvalidInput("pair is not on a cut polytope")
        base = Q.base
        return CharPair(base, {f: v for f, v in self.assignment.items() if f != CUT})

    def lift_to_cut(self, b) -> "CharPair":
        Q = self.polytope
        if Q.is_cut:
            raise InvalidInput("pair is already on a cut polytope")
        assignment = dict(self.assignment)
        assignment[CUT] = tuple(b)
        return CharPair(vertex_cut(Q), assignment)

    # --- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        self._require_normalized()
        return {"dims": list(self.dims), "cut": self.polytope.is_cut,
                "A": [list(a) for a in self.a], "b": list(self.b) if self.b is not None else None}

    def __repr__(self):
        b = f", b={list(self.b)}" if self.b is not None else ""
        return f"CharPair({self.polytope!r}, A={[list(a) for a in self.a]}{b})"

    def __eq__(self, other):
        return (isinstance(other, CharPair) and self.polytope == other.polytope
                and self.assignment == other.assignment)

    def __hash__(self):
        return hash((self.polytope, tuple(sorted((f.sort_key(), v) for f, v in self.assignment.items()))))


def normalize_at_base(pair: CharPair) -> CharPair:
    """Change basis so the facets at the base vertex carry the standard basis."""
    Q = pair.polytope
    M = la.from_columns([pair.assignment[f] for f in Q.base_order()])
    d = la.det(M)
    if d not in (1, -1):
        raise NotNormalizable(f"base vertex matrix has determinant {d}")
    Minv = la.unimodular_inverse(M)
    return CharPair(Q, {f: tuple(la.matvec(Minv, v)) for f, v in pair.assignment.items()})


def principal_minor_criterion(pair: CharPair) -> bool:
    """Every principal minor of every ``A_{k_1..k_m}`` (including the full one) is +-1.

    A principal minor picks a set S of factors, one row ``N_{j-1} + k_j`` per
    factor in S, and the columns indexed by S.
    """
    A = pair.A
    dims = pair.dims
    m = len(dims)
    for size in range(1, m + 1):
        for S in itertools.combinations(range(m), size):
            for ks in itertools.product(*(range(1, dims[j] + 1) for j in S)):
                rows = [pair.N[j] + k - 1 for j, k in zip(S, ks)]
                sub = [[A[r][c] for c in S] for r in rows]
                if la.det(sub) not in (1, -1):
                    return False
    return True


def pair_from_json(obj) -> CharPair:
    """Read ``{"dims", "cut", "A", "b"}``; a nested ``"polytope"`` object is also accepted."""
    if not isinstance(obj, dict):
        raise InvalidInput("pair description must be a JSON object")
    poly = obj.get("polytope", obj)
    Q = polytope_from_json(poly)
    if "A" not in obj:
        raise InvalidInput("pair description needs 'A'")
    A = obj["A"]
    if not isinstance(A, list) or not all(isinstance(col, list) for col in A):
        raise InvalidInput("'A' must be a list of columns")
    try:
        cols = [[int(x) for x in col] for col in A]
        b = obj.get("b")
        b = None if b is None else [int(x) for x in b]
    except (TypeError, ValueError) as exc:
        raise InvalidInput("entries of 'A' and 'b' must be integers") from exc
    return CharPair.from_matrix(Q, cols, b)


def standard_pair(polytope: Polytope, b=None) -> CharPair:
    """``a_j = -(e_{N_{j-1}+1} + ... + e_{N_j})``; on the uncut product this is a product of projective spaces."""
    cols = []
    for j in range(1, polytope.m + 1):
        cols.append(tuple(-1 if polytope.N[j - 1] < i <= polytope.N[j] else 0 for i in range(1, polytope.n + 1)))
    return CharPair.from_matrix(polytope, cols, b)


# re-exported helpers
def vertex_matrix(pair: CharPair, u: VertexId) -> VertexMatrix:
    return pair.vertex_matrix(u)


def is_characteristic(pair: CharPair) -> tuple[bool, list]:
    return pair.is_characteristic()


def det_hypothesis(pair: CharPair) -> bool:
    return pair.det_hypothesis()


def matrix_A_tilde(pair: CharPair) -> la.Matrix:
    return pair.matrix_A_tilde()


def matrix_A_prime(pair: CharPair) -> la.Matrix:
    return pair.matrix_A_prime()


def induced_on_base(pair: CharPair) -> CharPair:
    return pair.induced_on_base()


__all__ = [
    "CharPair", "VertexMatrix", "normalize_at_base", "principal_minor_criterion", "pair_from_json",
    "standard_pair", "vertex_matrix", "is_characteristic", "det_hypothesis", "matrix_A_tilde",
    "matrix_A_prime", "induced_on_base", "unit", "Grid", "SimplexProduct", "CutPolytope",
]
