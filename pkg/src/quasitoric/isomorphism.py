"""Explicit graded ring maps between reduced presentations, and their certificates.

A map is given by a linear substitution of the degree-2 generators
``(y_1, ..., y_m, y)``.  It induces a ring map ``Z[y]/I_src -> Z[y]/I_dst``
exactly when every generator of ``I_src`` lands in ``I_dst``; each such
membership comes with an explicit integer combination of relation rows.
A unimodular substitution that passes and sees equal ranks in every degree
of torsion-free rings is an isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import exactla as la
from .charpair import CharPair
from .classify import permute_factors
from .cohomology import GradedPresentation, eliminated_presentation
from .errors import InvalidInput, NotAnIso, PreconditionError
from .poly import Poly


@dataclass(frozen=True)
class LinearSubstitution:
    """Row i holds the coefficients of the image of variable i."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.matrix)
        if any(len(r) != len(rows) for r in rows):
            raise InvalidInput("substitution matrix must be square")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def identity(cls, size: int) -> "LinearSubstitution":
        return cls(tuple(map(tuple, la.identity(size))))

    @property
    def size(self) -> int:
        return len(self.matrix)

    @property
    def det(self) -> int:
        return la.det([list(r) for r in self.matrix])

    @property
    def unimodular(self) -> bool:
        return self.det in (1, -1)

    def images(self, variables: Sequence[str]) -> list[Poly]:
        return [Poly.linear(variables, row) for row in self.matrix]

    def apply(self, p: Poly) -> Poly:
        if len(p.variables) != self.size:
            raise InvalidInput("substitution and polynomial disagree on the number of variables")
        return p.substitute(self.images(p.variables))

    def compose(self, other: "LinearSubstitution") -> "LinearSubstitution":
        """``self`` after ``other``: variable i goes to ``other``'s image of ``self``'s image."""
        return LinearSubstitution(tuple(map(tuple, la.matmul(self.matrix, other.matrix))))

    def inverse(self) -> "LinearSubstitution":
        return LinearSubstitution(tuple(map(tuple, la.unimodular_inverse(self.matrix))))

    def to_json(self):
        return [list(r) for r in self.matrix]


@dataclass(frozen=True)
class IsoCertificate:
    substitution: LinearSubstitution
    witnesses: tuple

    def to_json(self):
        return {"substitution": self.substitution.to_json(),
                "witnesses": [{"generator": g, "combination": c} for g, c in self.witnesses]}


def _nonzero_combination(pres: GradedPresentation, deg: int, coeffs: Sequence[int]) -> list:
    """Readable form of a witness: ``[coefficient, generator index, multiplier exponents]``."""
    piece = pres.piece(deg)
    out = []
    for c, (gi, mu) in zip(coeffs, piece.row_sources):
        if c:
            out.append([c, gi, list(mu)])
    return out


def verify_ring_map(sub: LinearSubstitution, src: GradedPresentation, dst: GradedPresentation,
                    check_ranks: bool = True) -> IsoCertificate:
    """Certify that ``sub`` carries every generator of ``src`` into the ideal of ``dst``.

    Raises :class:`NotAnIso` naming the first generator that fails, or when
    the substitution is not unimodular or the two rings have different ranks.
    """
    if len(src.variables) != len(dst.variables) or sub.size != len(src.variables):
        raise InvalidInput("presentations and substitution must use the same number of variables")
    if not sub.unimodular:
        raise NotAnIso(f"substitution has determinant {sub.det}")
    images = sub.images(dst.variables)
    witnesses = []
    for g in src.generators:
        image = g.poly.substitute(images)
        coeffs = dst.witness(image)
        if coeffs is None:
            raise NotAnIso(f"image of {g.poly} is not in the target ideal", generator=str(g.poly))
        if coeffs:
            piece = dst.piece(image.degree)
            if la.vecmat(coeffs, piece.relations) != piece.vector(image):
                raise NotAnIso("membership witness does not reproduce the image", generator=str(g.poly))
        witnesses.append((str(g.poly), _nonzero_combination(dst, image.degree, coeffs) if coeffs else []))
    if check_ranks:
        top = max(src.top_degree or 0, dst.top_degree or 0)
        for k in range(top + 2):
            a, b = src.piece(k), dst.piece(k)
            if a.rank != b.rank or a.torsion or b.torsion:
                raise NotAnIso(f"graded pieces of degree {k} differ: ranks {a.rank} and {b.rank}")
    return IsoCertificate(sub, tuple(witnesses))


# --- shears for det A_tilde = 0 ------------------------------------------------------

def _shear_preconditions(pair: CharPair, other: CharPair):
    if pair.polytope != other.polytope or not pair.polytope.is_cut:
        raise InvalidInput("both pairs must live on the same cut polytope")
    if pair.A != other.A:
        raise InvalidInput("the two pairs must share the matrix A")
    for p in (pair, other):
        if p.det_A_tilde != 0:
            raise InvalidInput("shears are built for det A_tilde = 0")
        ends = set(p.N[1:])
        if any(p.b[i - 1] for i in range(1, p.n + 1) if i not in ends):
            raise InvalidInput("b must vanish off the block ends")
        if sum(p.b[t - 1] for t in ends) != -1:
            raise InvalidInput("the block-end entries of b must sum to -1")


def successor(pair: CharPair, j: int) -> int:
    """The factor k != j with ``a_{k,N_j}`` nonzero (it equals 1 when det A_tilde = 0)."""
    ks = [k for k in range(1, pair.m + 1) if k != j and pair.entry(k, pair.N[j])]
    if len(ks) != 1:
        raise PreconditionError(f"factor {j} has no unique successor")
    return ks[0]


@dataclass(frozen=True)
class ShearData:
    c: tuple[int, ...] | None
    differences: tuple[int, ...]
    weighted_total: int
    reason: str = ""


def shear_coefficients(pair: CharPair, other: CharPair) -> ShearData:
    """Solve for ``c`` with ``c_{succ(j)} - c_j = b_{N_j} - b'_{N_j}`` and ``sum_j n_j c_j = 0``.

    The first family makes ``y (y_j - y_{succ(j)} - b'_{N_j} y)`` map onto the
    matching relation for b.  The second makes the image of
    ``prod_j y_j^{n_j}`` vanish, since ``y^2 = 0`` and all ``y y_j`` agree, so
    that image is ``(sum_j n_j c_j) * y * y_1^{n-1}``.
    """
    _shear_preconditions(pair, other)
    m, N = pair.m, pair.N
    delta = [pair.b[N[j] - 1] - other.b[N[j] - 1] for j in range(1, m + 1)]
    offset = {1: 0}
    j = 1
    for _ in range(m - 1):
        k = successor(pair, j)
        offset[k] = offset[j] + delta[j - 1]
        j = k
    if len(offset) != m or offset[1] != offset[j] + delta[j - 1] - sum(delta):
        raise PreconditionError("successor map is not a single cycle")
    weighted = sum(pair.dims[k - 1] * offset[k] for k in range(1, m + 1))
    if weighted % pair.n:
        return ShearData(None, tuple(delta), weighted,
                         f"need n = {pair.n} to divide {weighted}; no integral shear exists")
    t = -weighted // pair.n
    return ShearData(tuple(t + offset[k] for k in range(1, m + 1)), tuple(delta), weighted)


def cumulative_shear_coefficients(pair: CharPair, other: CharPair) -> tuple[int, ...]:
    """``c_j = sum_{i<=j} delta_i + k`` for j < m and ``c_m = k``, with k from the mod-m congruence.

    Kept for comparison: these satisfy ``c_j - c_{j-1} = delta_j`` and
    ``sum_j c_j = 0``, which is one index off from what the relations need
    and ignores the weights ``n_j``.
    """
    _shear_preconditions(pair, other)
    m, N = pair.m, pair.N
    delta = [pair.b[N[j] - 1] - other.b[N[j] - 1] for j in range(1, m + 1)]
    s = sum((m - j) * (pair.b[N[j] - 1] - other.b[N[j] - 1]) for j in range(1, m))
    if s % m:
        raise PreconditionError("congruence has no integral solution")
    k = -s // m
    return tuple(sum(delta[:j]) + k for j in range(1, m)) + (k,)


def shear(c: Sequence[int]) -> LinearSubstitution:
    """``y_j -> y_j + c_j y`` and ``y -> y``."""
    m = len(c)
    rows = []
    for j in range(m):
        row = [0] * (m + 1)
        row[j] = 1
        row[m] = c[j]
        rows.append(tuple(row))
    rows.append(tuple([0] * m + [1]))
    return LinearSubstitution(tuple(rows))


def build_shear_substitution(pair: CharPair, other: CharPair) -> LinearSubstitution:
    """Shear taking the ideal for ``other`` (b') into the ideal for ``pair`` (b).

    Raises :class:`NotAnIso` when the coefficient equations have no integral
    solution.
    """
    data = shear_coefficients(pair, other)
    if data.c is None:
        raise NotAnIso(data.reason)
    return shear(data.c)


def factor_relabeling(m: int, sigma: Sequence[int]) -> LinearSubstitution:
    """Ring map sending ``y_{sigma(i)}`` to ``y_i`` (and ``y`` to ``y``)."""
    rows = [[0] * (m + 1) for _ in range(m + 1)]
    for i, s in enumerate(sigma, start=1):
        rows[s - 1][i - 1] = 1
    rows[m][m] = 1
    return LinearSubstitution(tuple(map(tuple, rows)))


def build_det0_isomorphism(pair: CharPair, other: CharPair) -> LinearSubstitution:
    """Ring map from the presentation for ``other`` to the one for ``pair``.

    Tries every relabeling of the factors that keeps the dimensions and the
    matrix ``A``, followed by a shear.  Relabeling matters: a shear alone only
    connects values of b in one residue class, while rotating the factors of
    a cube moves between classes.
    """
    _shear_preconditions(pair, other)
    m = pair.m
    reasons = []
    for sigma in itertools.permutations(range(1, m + 1)):
        moved = permute_factors(other, sigma)
        if moved.dims != pair.dims or moved.A != pair.A:
            continue
        data = shear_coefficients(pair, moved)
        if data.c is None:
            reasons.append(f"{list(sigma)}: {data.reason}")
            continue
        return factor_relabeling(m, sigma).compose(shear(data.c))
    raise NotAnIso("no factor relabeling followed by a shear works; " + "; ".join(reasons))


# --- bounded search ------------------------------------------------------------------

@dataclass
class SearchResult:
    found: LinearSubstitution | None
    candidates_tried: int
    complete_within_bounds: bool

    def to_json(self):
        return {"found": self.found.to_json() if self.found else None, "tried": self.candidates_tried,
                "complete_within_bounds": self.complete_within_bounds}


def search_ring_map(src: GradedPresentation, dst: GradedPresentation,
                    candidates: Sequence[Iterable[Sequence[int]]], limit: int | None = None) -> SearchResult:
    """Backtracking search over images of each variable, pruning on generators already determined.

    ``candidates[i]`` lists allowed coefficient rows for variable i.  A
    generator is tested as soon as all of its variables have images.
    """
    nv = len(src.variables)
    if len(candidates) != nv:
        raise InvalidInput("need candidate images for every variable")
    cand = [list(c) for c in candidates]
    order = sorted(range(nv), key=lambda i: len(cand[i]))
    ready = {}
    assigned = set()
    for depth, i in enumerate(order):
        assigned.add(i)
        ready[depth] = [g for g in src.generators if g.poly.support() <= assigned
                        and not any(g is h for d in range(depth) for h in ready[d])]
    rows = [None] * nv
    tried = 0

    def images():
        return [Poly.linear(dst.variables, rows[i]) if rows[i] is not None else Poly.zero(dst.variables)
                for i in range(nv)]

    def rec(depth):
        nonlocal tried
        if depth == nv:
            tried += 1
            sub = LinearSubstitution(tuple(tuple(r) for r in rows))
            if not sub.unimodular:
                return None
            try:
                verify_ring_map(sub, src, dst)
            except NotAnIso:
                return None
            return sub
        i = order[depth]
        for row in cand[i]:
            rows[i] = tuple(row)
            ims = images()
            if all(dst.member(g.poly.substitute(ims)) for g in ready[depth]):
                found = rec(depth + 1)
                if found is not None:
                    return found
            if limit is not None and tried >= limit:
                break
        rows[i] = None
        return None

    found = rec(0)
    return SearchResult(found, tried, limit is None or tried < limit)


def structured_candidates(m: int, bound: int, with_cut: bool) -> list[list[tuple[int, ...]]]:
    """Images ``y_j -> sum_k c_k y_k (+ c y)`` with ``|c| <= bound`` and ``y -> +-y``."""
    size = m + 1 if with_cut else m
    rng = range(-bound, bound + 1)
    general = [v for v in itertools.product(rng, repeat=size) if any(v[:m])]
    general.sort(key=lambda v: (sum(map(abs, v)), [-x for x in v]))
    out = [general for _ in range(m)]
    if with_cut:
        out.append([tuple([0] * m + [1]), tuple([0] * m + [-1])])
    return out


def iso_transfer_check(pair: CharPair, other: CharPair, bound: int = 2) -> dict:
    """Search for ring isomorphisms between the cut presentations and between the induced base ones.

    Both searches are bounded, so "none found" is not a proof of
    non-isomorphism; disagreement between the two sides is flagged only as
    a soft alarm.
    """
    if pair.polytope != other.polytope:
        raise InvalidInput("pairs live on different polytopes")
    Q = pair.polytope
    if not Q.is_cut or Q.m < 2 or Q.n < 3:
        raise InvalidInput("needs a cut polytope with at least two factors and dimension at least 3")
    for p in (pair, other):
        if not p.det_hypothesis() or p.det_A_tilde != (-1) ** p.m:
            raise InvalidInput("both pairs need alternating vertex determinants and det A_tilde = (-1)^m")
    m = Q.m
    cut_src, cut_dst = eliminated_presentation(other), eliminated_presentation(pair)
    base_src = eliminated_presentation(other.induced_on_base())
    base_dst = eliminated_presentation(pair.induced_on_base())
    cut = search_ring_map(cut_src, cut_dst, structured_candidates(m, bound, True))
    base = search_ring_map(base_src, base_dst, structured_candidates(m, bound, False))
    report = {
        "bound": bound,
        "cut": cut.to_json(),
        "base": base.to_json(),
        "cut_iso_found": cut.found is not None,
        "base_iso_found": base.found is not None,
    }
    report["consistent"] = report["cut_iso_found"] == report["base_iso_found"]
    report["note"] = "bounded search; an empty result does not rule out an isomorphism"
    return report


def certificate_for_shear(pair: CharPair, other: CharPair) -> IsoCertificate:
    """Build the shear and certify it from the presentation for ``other`` to the one for ``pair``."""
    sub = build_det0_isomorphism(pair, other)
    return verify_ring_map(sub, eliminated_presentation(other), eliminated_presentation(pair))


__all__ = [
    "LinearSubstitution", "IsoCertificate", "verify_ring_map", "shear_coefficients", "cumulative_shear_coefficients",
    "shear", "build_shear_substitution", "build_det0_isomorphism", "factor_relabeling", "search_ring_map", "structured_candidates", "iso_transfer_check",
    "certificate_for_shear",
]
