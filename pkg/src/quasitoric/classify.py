"""Normal forms of the matrix ``A``, the constraint on ``b``, and bounded enumeration.

Pairs on a cut polytope whose vertex determinants alternate with the distance
to the base vertex fall into two shapes once the simplex factors are
reordered:

* upper triangular: ``a_j`` is ``-1`` on its own block and vanishes on every
  later block (this happens exactly when ``det A_tilde = (-1)^m``);
* cyclic: ``a_j`` is ``-1`` on its own block and otherwise nonzero only in
  the last coordinate of the previous block (cyclically).

The vector ``b`` is then pinned down by ``adj(A_tilde) b = (-1)^m (1, ..., 1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import exactla as la
from .charpair import CharPair, unit
from .errors import ClassificationFailure, InvalidInput, NoValidB, PreconditionError, TheoremViolation
from .polytope import CUT, Core, CutPolytope, SimplexProduct

UPPER = "upper_triangular"
CYCLIC = "cyclic"


# --- factor permutations ------------------------------------------------------

def coordinate_permutation(dims: Sequence[int], sigma: Sequence[int]) -> list[int]:
    """0-based old coordinate for each new coordinate when factor i becomes old factor ``sigma[i]``.

    ``sigma`` is 1-based; order inside each block is kept.
    """
    N = [0, *itertools.accumulate(dims)]
    out = []
    for s in sigma:
        out.extend(range(N[s - 1], N[s]))
    return out


def permute_factors(pair: CharPair, sigma: Sequence[int]) -> CharPair:
    """Relabel the simplex factors so that new factor i is old factor ``sigma[i-1]``."""
    m = pair.m
    if sorted(sigma) != list(range(1, m + 1)):
        raise InvalidInput(f"{list(sigma)} is not a permutation of 1..{m}")
    pair._require_normalized()
    dims = tuple(pair.dims[s - 1] for s in sigma)
    perm = coordinate_permutation(pair.dims, sigma)
    Q = CutPolytope(dims) if pair.polytope.is_cut else SimplexProduct(dims)
    cols = [tuple(pair.a[s - 1][p] for p in perm) for s in sigma]
    b = tuple(pair.b[p] for p in perm) if pair.b is not None else None
    return CharPair.from_matrix(Q, cols, b)


# --- the minor-one normal form for vector matrices ----------------------------

@dataclass(frozen=True)
class MinorFormResult:
    form: str
    sigma: tuple[int, ...]
    determinants: tuple[int, ...]
    product_condition: bool | None = None
    entry_condition: bool | None = None


def _blocks(B, dims):
    """Block ``(k, j)`` of a vector matrix: rows of block k in column j."""
    N = [0, *itertools.accumulate(dims)]
    m = len(dims)
    return {(k, j): tuple(B[r][j] for r in range(N[k], N[k + 1])) for k in range(m) for j in range(m)}


def _all_determinants(B, dims):
    return [la.det(la.principal_submatrix(B, dims, ks))
            for ks in itertools.product(*(range(1, d + 1) for d in dims))]


def _proper_principal_minors(M):
    m = len(M)
    for size in range(1, m):
        for S in itertools.combinations(range(m), size):
            yield la.det([[M[r][c] for c in S] for r in S])


def check_minor_one_form(B: Sequence[Sequence[int]], dims: Sequence[int] | None = None) -> MinorFormResult:
    """Match an n x m vector matrix with all proper principal minors 1 to a normal form.

    Tries every reordering of the factors.  ``UpperTriangular`` means block
    ``(k, j)`` vanishes for ``k > j``.  ``Cyclic`` means the only nonzero
    off-diagonal blocks are ``(j-1, j)`` and ``(m, 1)``; the result then
    reports whether the product of one nonzero entry from each of them
    equals ``(-1)^m * 2`` for every choice, and whether each such block has
    all its nonzero entries equal to a single value in ``{+-1, +-2}``.
    """
    B = la.as_matrix(B)
    m = len(B[0]) if B else 0
    dims = tuple(dims) if dims is not None else (1,) * m
    if len(dims) != m or sum(dims) != len(B):
        raise InvalidInput("dims do not match the shape of the vector matrix")
    for ks in itertools.product(*(range(1, d + 1) for d in dims)):
        sub = la.principal_submatrix(B, dims, ks)
        if any(x != 1 for x in _proper_principal_minors(sub)):
            raise PreconditionError(f"submatrix at rows {ks} has a proper principal minor different from 1")
    dets = tuple(_all_determinants(B, dims))
    for sigma in itertools.permutations(range(1, m + 1)):
        perm = coordinate_permutation(dims, sigma)
        P = [[B[p][s - 1] for s in sigma] for p in perm]
        pd = tuple(dims[s - 1] for s in sigma)
        blocks = _blocks(P, pd)
        if all(not any(blocks[k, j]) for k in range(m) for j in range(k)):
            return MinorFormResult(UPPER, sigma, dets)
    for sigma in itertools.permutations(range(1, m + 1)):
        perm = coordinate_permutation(dims, sigma)
        P = [[B[p][s - 1] for s in sigma] for p in perm]
        pd = tuple(dims[s - 1] for s in sigma)
        blocks = _blocks(P, pd)
        allowed = {((j - 1) % m, j) for j in range(m)}
        if any(any(blocks[k, j]) for k in range(m) for j in range(m) if k != j and (k, j) not in allowed):
            continue
        cyc = [blocks[(j - 1) % m, j] for j in range(m)]
        if not all(any(v) for v in cyc):
            continue
        choices = itertools.product(*([x for x in v if x] for v in cyc))
        product_ok = all(_prod(c) == (-1) ** m * 2 for c in choices)
        entry_ok = all(len({x for x in v if x}) == 1 and {x for x in v if x} <= {1, -1, 2, -2} for v in cyc)
        return MinorFormResult(CYCLIC, sigma, dets, product_ok, entry_ok)
    raise ClassificationFailure("normal form for matrices with proper principal minors 1",
                                "no factor order gives the upper triangular or the cyclic shape",
                                witness=B)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


# --- classification of the cut-vertex matrix ----------------------------------

@dataclass(frozen=True)
class ClassificationResult:
    case: str
    det: int
    sigma: tuple[int, ...]
    cyclic_scalars: tuple[int, ...] | None = None

    def to_json(self):
        out = {"case": self.case, "det": self.det, "sigma": list(self.sigma)}
        if self.cyclic_scalars is not None:
            out["cyclic_scalars"] = list(self.cyclic_scalars)
        return out


def has_upper_pattern(pair: CharPair) -> bool:
    """``a_j`` is -1 on block j and zero on every later block."""
    N = pair.N
    for j in range(1, pair.m + 1):
        a = pair.a[j - 1]
        if any(a[i] != -1 for i in range(N[j - 1], N[j])):
            return False
        if any(a[i] for i in range(N[j], pair.n)):
            return False
    return True


def cyclic_previous_end(pair: CharPair, j: int) -> int:
    """1-based coordinate ``N_{j-1}``, read cyclically so that factor 1 uses ``N_m``."""
    return pair.N[j - 1] if j > 1 else pair.N[pair.m]


def has_cyclic_pattern(pair: CharPair) -> bool:
    """``a_j`` is -1 on block j and otherwise supported on coordinate ``N_{j-1}`` (cyclically)."""
    N = pair.N
    for j in range(1, pair.m + 1):
        a = pair.a[j - 1]
        if any(a[i] != -1 for i in range(N[j - 1], N[j])):
            return False
        keep = cyclic_previous_end(pair, j) - 1
        if any(a[i] for i in range(pair.n) if not (N[j - 1] <= i < N[j]) and i != keep):
            return False
    return True


def cyclic_scalars(pair: CharPair) -> tuple[int, ...]:
    """``a_{2,N_1}, ..., a_{m,N_{m-1}}, a_{1,N_m}``."""
    m = pair.m
    order = list(range(2, m + 1)) + [1]
    return tuple(pair.entry(j, cyclic_previous_end(pair, j)) for j in order)


def classify_A_tilde(pair: CharPair) -> ClassificationResult:
    """Certify the upper triangular or cyclic shape of ``A`` after reordering factors."""
    if not pair.polytope.is_cut:
        raise PreconditionError("classification needs a pair on a cut polytope")
    if not pair.det_hypothesis():
        raise PreconditionError("vertex determinants do not alternate with the distance to the base vertex")
    m, N = pair.m, pair.N
    for j in range(1, m + 1):
        for ell in range(N[j - 1] + 1, N[j] + 1):
            if pair.entry(j, ell) != -1:
                raise TheoremViolation("diagonal blocks of A are all -1",
                                       f"a_{j} has entry {pair.entry(j, ell)} at coordinate {ell}",
                                       witness=pair.to_json())
    d = pair.det_A_tilde
    sign = (-1) ** m
    if d == sign:
        for sigma in itertools.permutations(range(1, m + 1)):
            if has_upper_pattern(permute_factors(pair, sigma)):
                return ClassificationResult(UPPER, d, sigma)
        raise ClassificationFailure("upper triangular shape when det A_tilde = (-1)^m",
                                    "no reordering of factors gives the pattern", witness=pair.to_json())
    for sigma in itertools.permutations(range(1, m + 1)):
        p = permute_factors(pair, sigma)
        if has_cyclic_pattern(p):
            scalars = cyclic_scalars(p)
            expected = sign + (-1) ** (m - 1) * _prod(scalars)
            if expected != d:
                raise TheoremViolation("det A_tilde = (-1)^m + (-1)^(m-1) * product of cyclic scalars",
                                       f"got {d}, formula gives {expected}", witness=pair.to_json())
            return ClassificationResult(CYCLIC, d, sigma, scalars)
    raise ClassificationFailure("cyclic shape when det A_tilde != (-1)^m",
                                "no reordering of factors gives the pattern", witness=pair.to_json())


# --- the vector b ---------------------------------------------------------------

@dataclass(frozen=True)
class BConstraint:
    case: str  # "det_zero" or "det_nonzero"
    b: tuple[int, ...] | None = None
    positions: tuple[int, ...] | None = None
    total: int | None = None

    def to_json(self):
        if self.case == "det_nonzero":
            return {"case": self.case, "b": list(self.b)}
        return {"case": self.case, "positions": list(self.positions), "sum": self.total}


def expected_b(pair: CharPair) -> BConstraint:
    """Either the unique ``b`` (det A_tilde != 0) or the linear condition ``sum b_{N_j} = -1``."""
    At = pair.matrix_A_tilde()
    d = la.det(At)
    m = pair.m
    if d == 0:
        return BConstraint("det_zero", positions=tuple(pair.N[1:]), total=-1)
    b = []
    for row in At:
        s = (-1) ** m * sum(row)
        if s % d:
            raise NoValidB(f"row sum {sum(row)} is not divisible by det A_tilde = {d}")
        b.append(s // d)
    return BConstraint("det_nonzero", b=tuple(b))


@dataclass(frozen=True)
class BCheck:
    verified: bool
    adjoint_identity: bool
    formula: bool
    extra: dict


def verify_b(pair: CharPair) -> BCheck:
    """Check ``b`` against :func:`expected_b` and independently against the adjoint identity."""
    if pair.b is None:
        raise PreconditionError("pair has no cut facet")
    if not pair.det_hypothesis():
        raise PreconditionError("vertex determinants do not alternate with the distance to the base vertex")
    At = pair.matrix_A_tilde()
    m = pair.m
    adj_b = la.matvec(la.adjugate(At), pair.b)
    adjoint_ok = all(x == (-1) ** m for x in adj_b)
    con = expected_b(pair)
    extra = {}
    if con.case == "det_nonzero":
        formula_ok = tuple(pair.b) == con.b
        if pair.det_A_tilde != (-1) ** m:
            ends = set(pair.N[1:])
            extra["zero_off_ends"] = all(pair.b[i - 1] == 0 for i in range(1, pair.n + 1) if i not in ends)
    else:
        formula_ok = sum(pair.b[t - 1] for t in con.positions) == con.total
        res = classify_A_tilde(pair)
        p = permute_factors(pair, res.sigma)
        extra["unit_cyclic_scalars"] = all(x == 1 for x in cyclic_scalars(p))
    verified = adjoint_ok and formula_ok and all(extra.values())
    if adjoint_ok != formula_ok:
        raise TheoremViolation("adjoint identity agrees with the formula for b",
                               f"adjoint {adjoint_ok}, formula {formula_ok}", witness=pair.to_json())
    return BCheck(verified, adjoint_ok, formula_ok, extra)


def classification_report(pair: CharPair) -> dict:
    res = classify_A_tilde(pair)
    check = verify_b(pair)
    out = res.to_json()
    out["b_constraint"] = expected_b(pair).to_json()
    out["verified"] = check.verified
    return out


# --- enumeration ------------------------------------------------------------------

def enumerate_pairs(Q: CutPolytope, bound: int) -> Iterator[CharPair]:
    """All normalized pairs with entries in ``[-bound, bound]`` that are characteristic
    and whose vertex determinants alternate with the distance to the base vertex.

    Diagonal blocks of ``A`` are fixed to -1 up front: a vertex next to the
    base vertex has determinant equal to a single diagonal entry, which the
    alternating condition forces to be -1.
    """
    if not isinstance(Q, CutPolytope):
        raise InvalidInput("enumeration runs over a cut polytope")
    if bound < 1:
        raise InvalidInput("bound must be at least 1")
    n, m, N = Q.n, Q.m, Q.N
    free = [(j, i) for j in range(m) for i in range(n) if not (N[j] <= i < N[j + 1])]
    rng = range(-bound, bound + 1)
    u0 = Q.base_vertex
    grid = [(v, (-1) ** Q.distance(u0, v)) for v in Q.vertices if not hasattr(v, "i")]
    cut = [(v, (-1) ** Q.distance(u0, v)) for v in Q.vertices if hasattr(v, "i")]
    zero_b = (0,) * n
    for values in itertools.product(rng, repeat=len(free)):
        cols = [[-1 if N[j] <= i < N[j + 1] else 0 for i in range(n)] for j in range(m)]
        for (j, i), x in zip(free, values):
            cols[j][i] = x
        probe = CharPair.from_matrix(Q, cols, zero_b)
        if any(probe.vertex_matrix(v).det != s for v, s in grid):
            continue
        # each cut-vertex determinant is linear in b: det = c . b
        functionals = []
        for v, s in cut:
            vm = probe.vertex_matrix(v)
            col = vm.facet_of_column.index(CUT)
            adj = la.adjugate(vm.matrix)
            functionals.append((adj[col], s))
        for b in itertools.product(rng, repeat=n):
            if all(sum(c * x for c, x in zip(row, b)) == s for row, s in functionals):
                yield CharPair.from_matrix(Q, cols, b)
