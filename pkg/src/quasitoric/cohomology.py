"""Integral cohomology rings of the quasitoric manifolds over P and its vertex cut.

The ring is ``Z[facet variables] / (I + J)`` with ``I`` the Stanley-Reisner
ideal (one monomial per minimal non-face) and ``J`` the linear ideal spanned
by the coordinates of ``sum_F lambda(F) x_F``.  For a normalized pair the
linear forms solve for ``x_1..x_n``, leaving a presentation in
``y_1..y_m`` (the variables of ``Core(j, 0)``) and ``y`` (the cut facet).

Every ideal here is homogeneous, so each graded piece is computed on its
own as the cokernel of an integer matrix: monomials of degree k modulo all
products ``g * mu`` of a generator g with a monomial mu of complementary
degree.  Smith normal form then gives rank and torsion.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import exactla as la
from .charpair import CharPair
from .classify import CYCLIC, UPPER, classify_A_tilde, permute_factors
from .errors import InvalidInput, PreconditionError, TheoremViolation
from .poly import Poly, monomials, product
from .polytope import CUT, Core


@dataclass(frozen=True)
class Generator:
    poly: Poly
    source: str

    @property
    def degree(self) -> int:
        return self.poly.degree

    def to_json(self):
        return {"poly": self.poly.to_json(), "degree": self.degree, "source": self.source}


@dataclass
class GradedPieceBasis:
    degree: int
    monomials: list[tuple[int, ...]]
    relations: la.Matrix
    diagonal: list[int]
    V: la.Matrix
    relation_rank: int
    rank: int
    torsion: list[int]
    row_sources: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    def vector(self, p: Poly) -> list[int]:
        index = {e: i for i, e in enumerate(self.monomials)}
        v = [0] * len(self.monomials)
        for e, c in p.terms.items():
            if sum(e) != self.degree:
                raise InvalidInput(f"term of degree {sum(e)} in degree {self.degree} piece")
            v[index[e]] = c
        return v

    def coordinates(self, p: Poly) -> list[int]:
        """Coordinates of the class of ``p`` in the free part of this graded piece."""
        if self.torsion:
            raise PreconditionError("graded piece has torsion; free coordinates are not enough")
        w = la.vecmat(self.vector(p), self.V) if self.monomials else []
        return w[self.relation_rank:]

    def to_json(self):
        return {"degree": 2 * self.degree, "algebraic_degree": self.degree,
                "monomials": [list(e) for e in self.monomials], "rank": self.rank,
                "torsion": self.torsion}


class GradedPresentation:
    """A homogeneous ideal in a polynomial ring, with graded pieces computed on demand."""

    def __init__(self, variables: Sequence[str], generators: Sequence[Generator], top_degree: int | None = None):
        self.variables = tuple(variables)
        self.generators = tuple(generators)
        for g in self.generators:
            if g.poly.variables != self.variables:
                raise InvalidInput("generator lives in a different ring")
            if not g.poly.is_homogeneous():
                raise InvalidInput(f"generator {g.poly} is not homogeneous")
        self.top_degree = top_degree
        self._pieces = {}
        self._lattices = {}

    def piece(self, k: int) -> GradedPieceBasis:
        if k < 0:
            raise InvalidInput("degree must be nonnegative")
        if k not in self._pieces:
            self._pieces[k] = _graded_piece(self, k)
        return self._pieces[k]

    def relation_lattice(self, k: int) -> la.Lattice:
        if k not in self._lattices:
            piece = self.piece(k)
            self._lattices[k] = la.Lattice(piece.relations, dim=len(piece.monomials))
        return self._lattices[k]

    def member(self, p: Poly) -> bool:
        return self.witness(p) is not None

    def witness(self, p: Poly) -> list[int] | None:
        """Integer coefficients over the degree-k relation rows that produce ``p``, or ``None``.

        Row i is generator ``g`` times monomial ``mu`` with ``(g, mu) = piece(k).row_sources[i]``.
        """
        if p.variables != self.variables:
            raise InvalidInput("polynomial lives in a different ring")
        if not p.is_homogeneous():
            raise InvalidInput("membership is only decided for homogeneous polynomials")
        if p.is_zero():
            return []
        k = p.degree
        piece = self.piece(k)
        if not piece.relations:
            return None
        return self.relation_lattice(k).solve(piece.vector(p))

    def relation_products(self, k: int) -> list[tuple[int, tuple[int, ...]]]:
        """``(generator index, multiplier exponent)`` for each relation row in degree k."""
        out = []
        for gi, g in enumerate(self.generators):
            d = g.degree
            if d <= k:
                out.extend((gi, mu) for mu in monomials(len(self.variables), k - d))
        return out

    def ranks(self, top: int) -> list[int]:
        return [self.piece(k).rank for k in range(top + 1)]

    def to_json(self):
        return {"vars": list(self.variables), "generators": [g.to_json() for g in self.generators]}


def _graded_piece(pres: GradedPresentation, k: int) -> GradedPieceBasis:
    nv = len(pres.variables)
    monos = monomials(nv, k)
    index = {e: i for i, e in enumerate(monos)}
    rows = []
    sources = []
    seen = set()
    for gi, mu in pres.relation_products(k):
        g = pres.generators[gi].poly
        row = [0] * len(monos)
        for e, c in g.terms.items():
            row[index[tuple(a + b for a, b in zip(e, mu))]] += c
        key = tuple(row)
        if any(row) and key not in seen:
            seen.add(key)
            rows.append(row)
            sources.append((gi, mu))
    if not rows:
        return GradedPieceBasis(k, monos, [], [], la.identity(len(monos)), 0, len(monos), [])
    snf = la.smith_normal_form(rows, transforms="right")
    r = snf.rank
    torsion = [abs(d) for d in snf.diagonal[:r] if abs(d) > 1]
    return GradedPieceBasis(k, monos, rows, snf.diagonal, snf.V, r, len(monos) - r, torsion, sources)


# --- presentations of a pair ----------------------------------------------------

def full_variables(pair: CharPair) -> tuple[str, ...]:
    names = [f"x{i}" for i in range(1, pair.n + pair.m + 1)]
    if pair.polytope.is_cut:
        names.append("x")
    return tuple(names)


def reduced_variables(pair: CharPair) -> tuple[str, ...]:
    names = [f"y{j}" for j in range(1, pair.m + 1)]
    if pair.polytope.is_cut:
        names.append("y")
    return tuple(names)


def facet_variable(pair: CharPair, f) -> int:
    """0-based index of the x-variable of a facet."""
    if f == CUT:
        return pair.n + pair.m
    if f.k == 0:
        return pair.n + f.j - 1
    return pair.N[f.j - 1] + f.k - 1


def nonface_source(pair: CharPair, S) -> str:
    if CUT in S:
        return "cut_adjacent"
    js = {f.j for f in S}
    if len(js) == 1 and len(S) == pair.dims[next(iter(js)) - 1] + 1:
        return "simplex_block"
    return "far_face"


def full_presentation(pair: CharPair) -> GradedPresentation:
    """Stanley-Reisner monomials plus the n linear forms, in x-variables."""
    variables = full_variables(pair)
    nv = len(variables)
    gens = []
    for S in pair.polytope.minimal_nonfaces():
        e = [0] * nv
        for f in S:
            e[facet_variable(pair, f)] = 1
        gens.append(Generator(Poly.monomial(variables, e), nonface_source(pair, S)))
    for i in range(pair.n):
        coeffs = [0] * nv
        for f, v in pair.assignment.items():
            coeffs[facet_variable(pair, f)] += v[i]
        gens.append(Generator(Poly.linear(variables, coeffs), "linear"))
    return GradedPresentation(variables, gens, top_degree=pair.n)


def elimination_images(pair: CharPair) -> list[Poly]:
    """Image of each x-variable: ``x_i -> -sum_j a_{j,i} y_j - b_i y``, ``x_{n+j} -> y_j``, ``x -> y``."""
    pair._require_normalized()
    variables = reduced_variables(pair)
    m = pair.m
    images = []
    for i in range(pair.n):
        coeffs = [-pair.a[j][i] for j in range(m)]
        if pair.polytope.is_cut:
            coeffs.append(-pair.b[i])
        images.append(Poly.linear(variables, coeffs))
    for j in range(m):
        images.append(Poly.var(variables, j))
    if pair.polytope.is_cut:
        images.append(Poly.var(variables, m))
    return images


def eliminated_presentation(pair: CharPair) -> GradedPresentation:
    """Substitute the solved linear forms into the Stanley-Reisner monomials.

    Valid for every normalized pair: the i-th linear form is ``x_i`` plus
    terms in the variables of ``Core(j, 0)`` and the cut facet only.
    """
    full = full_presentation(pair)
    images = elimination_images(pair)
    variables = reduced_variables(pair)
    gens = []
    for g in full.generators:
        if g.source == "linear":
            continue
        p = g.poly.substitute(images)
        if not p.is_zero():
            gens.append(Generator(p, g.source))
    return GradedPresentation(variables, gens, top_degree=pair.n)


# --- the closed-form generator lists ---------------------------------------------

def _off_end_b_zero(pair: CharPair) -> bool:
    ends = set(pair.N[1:])
    return all(pair.b[i - 1] == 0 for i in range(1, pair.n + 1) if i not in ends)


def display_generators(pair: CharPair, literal: bool = False) -> list[Generator]:
    """Closed-form generators in the factor order that puts ``A`` in normal form.

    Upper triangular case, with ``L_i = y_j - sum_{k>j} a_{k,i} y_k - b_i y`` for
    i in block j: ``y_j * prod_{i in block j} L_i``, ``y * L_{N_j}``, and
    ``prod_j y_j * prod_{i != N_j} L_i``.  With ``literal=True`` the factor
    ``prod_j y_j`` is left off the last generator, which then describes the
    wrong ideal (for the cube it is the unit ideal).

    Cyclic case, with ``L_j = y_j - a_{j+1,N_j} y_{j+1} - b_{N_j} y`` (indices
    mod m): ``y_j^{n_j} L_j``, ``y L_j`` and ``prod_j y_j^{n_j}``.
    """
    res = classify_A_tilde(pair)
    p = permute_factors(pair, res.sigma)
    m, n, N = p.m, p.n, p.N
    variables = reduced_variables(p)
    Y = [Poly.var(variables, j) for j in range(m)]
    y = Poly.var(variables, m)
    gens = []
    if res.case == UPPER:
        def L(i):  # 1-based coordinate i in block j
            j = next(t for t in range(1, m + 1) if N[t - 1] < i <= N[t])
            out = Y[j - 1] - p.b[i - 1] * y
            for k in range(j + 1, m + 1):
                out = out - p.entry(k, i) * Y[k - 1]
            return out
        for j in range(1, m + 1):
            gens.append(Generator(Y[j - 1] * product((L(i) for i in range(N[j - 1] + 1, N[j] + 1)), variables),
                                  "simplex_block"))
        for j in range(1, m + 1):
            gens.append(Generator(y * L(N[j]), "cut_adjacent"))
        ends = set(N[1:])
        far = product((L(i) for i in range(1, n + 1) if i not in ends), variables)
        if not literal:
            far = far * product(Y, variables)
        gens.append(Generator(far, "far_face"))
    else:
        if res.det == 0 and not _off_end_b_zero(p):
            raise PreconditionError("closed-form list assumes b vanishes off the block ends when det A_tilde = 0")

        def L(j):
            nxt = j % m + 1
            return Y[j - 1] - p.entry(nxt, N[j]) * Y[nxt - 1] - p.b[N[j] - 1] * y
        for j in range(1, m + 1):
            gens.append(Generator(Y[j - 1] ** p.dims[j - 1] * L(j), "simplex_block"))
        for j in range(1, m + 1):
            gens.append(Generator(y * L(j), "cut_adjacent"))
        gens.append(Generator(product((Y[j] ** p.dims[j] for j in range(m)), variables), "far_face"))
    # back to the original factor order: new variable i is old variable sigma[i]
    orig = reduced_variables(pair)
    images = [Poly.var(orig, s - 1) for s in res.sigma] + [Poly.var(orig, m)]
    return [Generator(g.poly.substitute(images), g.source) for g in gens]


@dataclass
class DisplayComparison:
    literal: bool
    matches: bool
    display_not_in_elimination: list = field(default_factory=list)
    elimination_not_in_display: list = field(default_factory=list)

    def to_json(self):
        return {"literal": self.literal, "matches": self.matches,
                "display_not_in_elimination": [str(p) for p in self.display_not_in_elimination],
                "elimination_not_in_display": [str(p) for p in self.elimination_not_in_display]}


def compare_with_display(pair: CharPair, literal: bool = False) -> DisplayComparison:
    """Mutual membership between the eliminated generators and the closed-form list."""
    elim = eliminated_presentation(pair)
    disp = GradedPresentation(elim.variables, display_generators(pair, literal), top_degree=pair.n)
    a = [g.poly for g in disp.generators if not elim.member(g.poly)]
    b = [g.poly for g in elim.generators if not disp.member(g.poly)]
    return DisplayComparison(literal, not a and not b, a, b)


def reduced_presentation(pair: CharPair) -> GradedPresentation:
    """Eliminated presentation, certified equal to the closed-form generator list."""
    if not pair.polytope.is_cut:
        raise PreconditionError("the y-presentation with a cut variable needs a cut polytope")
    if not pair.det_hypothesis():
        raise PreconditionError("vertex determinants do not alternate with the distance to the base vertex")
    if pair.det_A_tilde == 0 and not _off_end_b_zero(pair):
        raise PreconditionError("when det A_tilde = 0 the closed-form list assumes b vanishes off the block ends")
    cmp = compare_with_display(pair)
    if not cmp.matches:
        raise TheoremViolation("closed-form generator list of the reduced presentation",
                               "ideals differ", witness=cmp.to_json())
    return eliminated_presentation(pair)


# --- ranks ------------------------------------------------------------------------

def graded_basis(pres: GradedPresentation, k: int) -> GradedPieceBasis:
    return pres.piece(k)


def betti(pair: CharPair, full: bool = False) -> list[int]:
    """Ranks of ``H^{2k}`` for k = 0..n, checked against the h-vector and for torsion."""
    pres = full_presentation(pair) if full else eliminated_presentation(pair)
    ranks, torsion = [], []
    for k in range(pair.n + 1):
        piece = pres.piece(k)
        ranks.append(piece.rank)
        torsion.extend((k, t) for t in piece.torsion)
    h = pair.polytope.h_vector()
    if torsion:
        raise TheoremViolation("torsion-free cohomology", f"torsion {torsion}", witness=pair.to_json())
    if ranks != h:
        raise TheoremViolation("even Betti numbers equal the h-vector", f"ranks {ranks}, h-vector {h}",
                               witness=pair.to_json())
    if pres.piece(pair.n + 1).rank != 0:
        raise TheoremViolation("cohomology vanishes above the top degree", witness=pair.to_json())
    return ranks


def ideal_member(pres: GradedPresentation, p: Poly) -> bool:
    return pres.member(p)


# --- relations in degree 4 -----------------------------------------------------------

def _yvars(pair: CharPair):
    variables = reduced_variables(pair)
    return variables, [Poly.var(variables, j) for j in range(pair.m)], Poly.var(variables, pair.m)


def check_cut_relations(pair: CharPair, strict: bool = True) -> dict:
    """Check ``y*y_i = y*y_j`` and ``y^2 = (-1)^(m+1) det(A_tilde) y*y_1`` (and ``y^2 = 0`` when det is 0)."""
    if not pair.polytope.is_cut:
        raise PreconditionError("relations involve the cut variable")
    pres = eliminated_presentation(pair)
    _, Y, y = _yvars(pair)
    m = pair.m
    d = pair.det_A_tilde
    report = {"det": d, "equal_products": {}, "square": None, "square_zero": None}
    for i, j in itertools.combinations(range(m), 2):
        report["equal_products"][f"y*y{i + 1} - y*y{j + 1}"] = pres.member(y * Y[i] - y * Y[j])
    report["square"] = pres.member(y * y - (-1) ** (m + 1) * d * (y * Y[0]))
    if d == 0:
        report["square_zero"] = pres.member(y * y)
    ok = all(report["equal_products"].values()) and report["square"] and report["square_zero"] in (None, True)
    report["verified"] = ok
    if strict and not ok:
        raise TheoremViolation("relations y*y_i = y*y_j and y^2 = (-1)^(m+1) det(A_tilde) y*y_j",
                               witness={"pair": pair.to_json(), "report": report})
    return report


def count_long_factors(pair: CharPair) -> int:
    return sum(1 for d in pair.dims if d > 1)


def h4_basis(pair: CharPair) -> dict:
    """Degree-4 basis ``{y_i y_j : i<j} + {y_j^2 : n_j >= 2} + {y y_1}``, certified as a lattice basis."""
    if not pair.polytope.is_cut:
        raise PreconditionError("basis uses the cut variable")
    if pair.n < 3:
        raise PreconditionError("degree 4 is the top degree when n = 2; the count needs n >= 3")
    variables, Y, y = _yvars(pair)
    m = pair.m
    basis = [Y[i] * Y[j] for i, j in itertools.combinations(range(m), 2)]
    basis += [Y[j] * Y[j] for j in range(m) if pair.dims[j] >= 2]
    basis.append(y * Y[0])
    s = count_long_factors(pair)
    expected = math.comb(m, 2) + s + 1
    piece = eliminated_presentation(pair).piece(2)
    coords = [piece.coordinates(p) for p in basis]
    square = len(basis) == piece.rank == expected
    unimodular = square and la.det(coords) in (1, -1)
    diag = la.invariant_factors(coords) if coords and coords[0] else []
    result = {"basis": [str(p) for p in basis], "count": len(basis), "formula": expected,
              "rank": piece.rank, "invariant_factors": diag, "verified": bool(unimodular)}
    if not unimodular:
        raise TheoremViolation("additive basis of degree 4", witness=result)
    return result


def h2_products(pair: CharPair) -> tuple[GradedPieceBasis, list[list[list[int]]]]:
    """For basis elements ``u, w`` of ``(y_1..y_m, y)``, the degree-4 coordinates of ``u*w``."""
    variables, Y, y = _yvars(pair)
    gens = Y + [y]
    pres = eliminated_presentation(pair)
    h2 = pres.piece(1)
    if h2.rank != pair.m + 1:
        raise TheoremViolation("degree 2 has rank m + 1", f"rank {h2.rank}")
    piece = pres.piece(2)
    table = [[piece.coordinates(u * w) for w in gens] for u in gens]
    return piece, table


def top_degree_form(pres: GradedPresentation, n: int) -> Poly:
    """``F(w) = (sum_i w_i v_i)^n`` read in the rank-one top piece, as a form in the ``w_i``.

    The sign depends on the chosen generator of the top piece.
    """
    top = pres.piece(n)
    if top.rank != 1:
        raise PreconditionError(f"top piece has rank {top.rank}, expected 1")
    k = len(pres.variables)
    terms = {}
    for e in monomials(k, n):
        mono = Poly.monomial(pres.variables, e)
        multinomial = math.factorial(n)
        for x in e:
            multinomial //= math.factorial(x)
        value = top.coordinates(mono)[0]
        if value:
            terms[e] = multinomial * value
    return Poly([f"w{i + 1}" for i in range(k)], terms)


def ann_rank(pair: CharPair, z: Sequence[int], _table=None) -> int:
    """Rank of ``{w in H^2 : z w = 0}``, with ``z`` given over ``(y_1..y_m, y)``."""
    if len(z) != pair.m + 1:
        raise InvalidInput(f"z needs {pair.m + 1} coefficients")
    table = _table if _table is not None else h2_products(pair)[1]
    size = pair.m + 1
    rows = []
    for w in range(size):
        row = [0] * len(table[0][0])
        for u in range(size):
            if z[u]:
                for t, x in enumerate(table[u][w]):
                    row[t] += z[u] * x
        rows.append(row)
    return size - la.rational_rank(rows)


def check_annihilator_converse(pair: CharPair, bound: int = 2, require_det: bool = True) -> dict:
    """Over all ``z`` with coefficients in ``[-bound, bound]``: rank m exactly for nonzero multiples of y."""
    m = pair.m
    if m < 2 or pair.n < 3:
        raise PreconditionError("needs at least two factors and dimension at least 3")
    if require_det and pair.det_A_tilde != (-1) ** m:
        raise PreconditionError("needs det A_tilde = (-1)^m")
    _, table = h2_products(pair)
    counter = []
    forward_failures = []
    checked = 0
    for z in itertools.product(range(-bound, bound + 1), repeat=m + 1):
        if not any(z):
            continue
        checked += 1
        r = ann_rank(pair, z, table)
        on_y = not any(z[:m])
        if r == m and not on_y:
            counter.append(list(z))
        if on_y and r != m:
            forward_failures.append(list(z))
    report = {"checked": checked, "counterexamples": counter, "multiples_of_y_with_other_rank": forward_failures,
              "verified": not counter and not forward_failures}
    return report
