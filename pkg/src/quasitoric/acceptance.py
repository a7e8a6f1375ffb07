"""Acceptance checks: each one exercises a claim exhaustively on small instances.

Every ``criterion_*`` function returns a :class:`CriterionResult`; a check
that finds a counterexample reports it in ``detail`` and does not raise.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from . import exactla as la
from .charpair import CharPair, standard_pair
from .classify import (
    CYCLIC,
    UPPER,
    classify_A_tilde,
    cyclic_scalars,
    expected_b,
    has_cyclic_pattern,
    has_upper_pattern,
    permute_factors,
    verify_b,
)
from .classify import enumerate_pairs
from .cohomology import betti, check_annihilator_converse, check_cut_relations, count_long_factors, h4_basis
from .errors import QuasitoricError
from .isomorphism import LinearSubstitution, build_det0_isomorphism, verify_ring_map
from .cohomology import eliminated_presentation
from .polytope import Grid, build_product, vertex_cut

BETTI_DIMS = [(1, 1), (2, 1), (1, 1, 1), (2, 2), (3, 1)]
ENUM_DIMS = [(1, 1), (2, 1), (1, 1, 1)]
H4_DIMS = [(2, 1), (1, 1, 1), (2, 2), (3, 1)]
SHEAR_DIMS = [(2, 1), (1, 1, 1)]
ANN_DIMS = [(2, 1), (1, 1, 1)]


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name} ({self.seconds:.2f}s)"

    def to_json(self):
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "seconds": round(self.seconds, 3), "detail": self.detail}


def _timed(number, name):
    def wrap(fn):
        def run(*args, **kwargs):
            t = time.perf_counter()
            passed, detail = fn(*args, **kwargs)
            return CriterionResult(number, name, passed, detail, time.perf_counter() - t)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


_ENUM_CACHE = {}


def enumerated(dims, bound=2) -> list[CharPair]:
    key = (tuple(dims), bound)
    if key not in _ENUM_CACHE:
        _ENUM_CACHE[key] = list(enumerate_pairs(vertex_cut(build_product(dims)), bound))
    return _ENUM_CACHE[key]


def standard_cut_pair(dims) -> CharPair:
    """Standard ``A`` on the cut polytope with its forced ``b = -sum_j e_{N_j}``."""
    Q = vertex_cut(build_product(dims))
    b = [-1 if i in Q.N[1:] else 0 for i in range(1, Q.n + 1)]
    return standard_pair(Q, b)


@_timed(1, "Betti numbers equal the h-vector, no torsion")
def criterion_1():
    """SNF ranks of every graded piece against face enumeration, with and without the cut."""
    rows = []
    ok = True
    for dims in BETTI_DIMS:
        P = build_product(dims)
        cases = [("base", standard_pair(P)), ("cut", standard_cut_pair(dims))]
        cases += [("cut", p) for p in enumerated(dims, 1)[:3]] if dims in ENUM_DIMS else []
        for label, pair in cases:
            try:
                ranks = betti(pair)
                good = True
            except QuasitoricError as exc:
                ranks, good = str(exc), False
            ok = ok and good
            rows.append({"dims": list(dims), "polytope": label, "ranks": ranks,
                         "h": pair.polytope.h_vector(), "ok": good})
    return ok, {"cases": rows}


@_timed(2, "Normal form of A for every enumerated pair")
def criterion_2():
    """Every pair classifies, and its reordered matrix shows the literal pattern."""
    counts = {}
    failures = []
    for dims in ENUM_DIMS:
        for pair in enumerated(dims):
            try:
                res = classify_A_tilde(pair)
                p = permute_factors(pair, res.sigma)
                pattern = has_upper_pattern(p) if res.case == UPPER else has_cyclic_pattern(p)
                if res.case == UPPER and res.det != (-1) ** pair.m:
                    pattern = False
                if not pattern:
                    failures.append(pair.to_json())
                key = f"{dims}:{res.case}"
                counts[key] = counts.get(key, 0) + 1
            except QuasitoricError as exc:
                failures.append({"pair": pair.to_json(), "error": str(exc)})
    return not failures, {"counts": counts, "failures": failures[:5]}


@_timed(3, "Vector b is determined by A")
def criterion_3():
    """Row-sum formula, adjoint identity and the det-zero conditions, entrywise."""
    failures = []
    checked = {"det_zero": 0, "det_nonzero": 0}
    for dims in ENUM_DIMS:
        for pair in enumerated(dims):
            m = pair.m
            At = pair.matrix_A_tilde()
            adj_b = la.matvec(la.adjugate(At), pair.b)
            good = all(x == (-1) ** m for x in adj_b)
            try:
                good = good and verify_b(pair).verified
            except QuasitoricError:
                good = False
            d = pair.det_A_tilde
            if d == 0:
                checked["det_zero"] += 1
                good = good and sum(pair.b[t - 1] for t in pair.N[1:]) == -1
                p = permute_factors(pair, classify_A_tilde(pair).sigma)
                good = good and all(x == 1 for x in cyclic_scalars(p))
            else:
                checked["det_nonzero"] += 1
                good = good and list(pair.b) == list(expected_b(pair).b)
            if not good:
                failures.append(pair.to_json())
    return not failures, {"checked": checked, "failures": failures[:5]}


@_timed(4, "Degree-4 relations among y and y_j")
def criterion_4():
    """``y y_i - y y_j`` and ``y^2 - (-1)^(m+1) det y y_1`` lie in the relation lattice; ``y^2`` too when det is 0."""
    failures = []
    total = 0
    for dims in ENUM_DIMS:
        for pair in enumerated(dims):
            total += 1
            rep = check_cut_relations(pair, strict=False)
            if not rep["verified"]:
                failures.append({"pair": pair.to_json(), "report": rep})
    return not failures, {"pairs": total, "failures": failures[:5]}


def admissible_b(Q, bound=2):
    out = []
    for values in itertools.product(range(-bound, bound + 1), repeat=Q.m):
        if sum(values) != -1:
            continue
        b = [0] * Q.n
        for t, x in zip(Q.N[1:], values):
            b[t - 1] = x
        out.append(b)
    return out


@_timed(5, "Shear maps between det-zero presentations")
def criterion_5():
    """For every det-zero pair and every admissible b', certify the relabel-and-shear map."""
    certified = 0
    failures = []
    inverse_ok = True
    per_dims = {}
    for dims in SHEAR_DIMS:
        Q = vertex_cut(build_product(dims))
        ends = set(Q.N[1:])
        good = bad = off_end = 0
        for pair in enumerated(dims):
            if pair.det_A_tilde != 0:
                continue
            if any(pair.b[i - 1] for i in range(1, Q.n + 1) if i not in ends):
                # the construction needs b supported on the block ends
                off_end += 1
                bad += len(admissible_b(Q))
                continue
            dst = eliminated_presentation(pair)
            for b2 in admissible_b(Q):
                other = CharPair.from_matrix(Q, [list(a) for a in pair.a], b2)
                try:
                    sub = build_det0_isomorphism(pair, other)
                    verify_ring_map(sub, eliminated_presentation(other), dst)
                    inverse_ok = inverse_ok and sub.compose(sub.inverse()) == LinearSubstitution.identity(sub.size)
                    good += 1
                except QuasitoricError as exc:
                    bad += 1
                    if len(failures) < 5:
                        failures.append({"dims": list(dims), "b": list(pair.b), "b_prime": b2, "error": str(exc)})
        per_dims[str(dims)] = {"certified": good, "failed": bad, "pairs_with_b_off_the_ends": off_end}
        certified += good
    passed = not failures and inverse_ok and certified > 0
    return passed, {"per_dims": per_dims, "inverse_ok": inverse_ok, "failures": failures}


@_timed(6, "Degree-4 additive basis")
def criterion_6():
    rows = []
    ok = True
    for dims in H4_DIMS:
        pairs = [standard_cut_pair(dims)]
        pairs += enumerated(dims, 1)[:3] if dims in ENUM_DIMS else []
        for pair in pairs:
            try:
                rep = h4_basis(pair)
                good = rep["verified"] and all(x == 1 for x in rep["invariant_factors"])
            except QuasitoricError as exc:
                rep, good = {"error": str(exc)}, False
            ok = ok and good
            rows.append({"dims": list(dims), "s": count_long_factors(pair), "report": rep})
    return ok, {"cases": rows}


@_timed(7, "Rank-m annihilators come only from multiples of y")
def criterion_7():
    """Exhaustive z in [-2, 2]^(m+1) for det = (-1)^m pairs; cube pairs also without that condition."""
    summary = {}
    counterexamples = []
    for dims in ANN_DIMS:
        cube = all(d == 1 for d in dims)
        tested = bad = 0
        for pair in enumerated(dims):
            hyp = pair.det_A_tilde == (-1) ** pair.m
            if not hyp and not cube:
                continue
            rep = check_annihilator_converse(pair, 2, require_det=hyp)
            tested += 1
            if not rep["verified"]:
                bad += 1
                if len(counterexamples) < 5:
                    counterexamples.append({"pair": pair.to_json(), "z": rep["counterexamples"][:4],
                                            "multiples_of_y_failing": rep["multiples_of_y_with_other_rank"][:4]})
        summary[str(dims)] = {"pairs": tested, "with_counterexample": bad}
    return not counterexamples, {"summary": summary, "counterexamples": counterexamples}


FIGURE_PAIR = {"dims": [2, 1], "cut": True, "A": [[1, 1, 1], [0, 1, 1]], "b": [1, 1, 0]}


@_timed(8, "Induced function on the uncut product can fail")
def criterion_8():
    """The six given facet vectors: valid on the cut polytope, determinant 0 at the cut vertex once induced."""
    Q = vertex_cut(build_product((2, 1)))
    pair = CharPair.from_matrix(Q, FIGURE_PAIR["A"], FIGURE_PAIR["b"])
    ok_cut, failing_cut = pair.is_characteristic()
    induced = pair.induced_on_base()
    ok_base, failing = induced.is_characteristic()
    v = Grid((2, 1))
    d = induced.vertex_matrix(v).det
    passed = ok_cut and not ok_base and failing == [v] and d == 0
    return passed, {"cut_valid": ok_cut, "induced_valid": ok_base, "failing": [repr(u) for u in failing],
                    "det_at_cut_vertex": d}


@_timed(9, "Cutting a vertex adds one to each middle h-number")
def criterion_9():
    rows = []
    ok = True
    for dims in BETTI_DIMS + [(3,), (2,), (1, 2), (1, 1, 1, 1)]:
        P = build_product(dims)
        hP, hQ = P.h_vector(), vertex_cut(P).h_vector()
        n = P.n
        good = all(hQ[i] == hP[i] + (1 if 0 < i < n else 0) for i in range(n + 1))
        ok = ok and good
        rows.append({"dims": list(dims), "h": hP, "h_cut": hQ, "ok": good})
    return ok, {"cases": rows}


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def run_all() -> list[CriterionResult]:
    return [c() for c in CRITERIA]
