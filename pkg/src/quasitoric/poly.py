"""Sparse multivariate polynomials with integer coefficients.

A polynomial is a map from exponent tuples to nonzero ints over a fixed,
named list of variables.  Only what the cohomology code needs is here:
ring arithmetic, linear substitution and homogeneity.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence


class Poly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], int] | None = None):
        self.variables = tuple(variables)
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != len(self.variables):
                raise ValueError(f"exponent {e} does not match {len(self.variables)} variables")
            if c:
                clean[tuple(e)] = clean.get(tuple(e), 0) + int(c)
        self.terms = {e: c for e, c in clean.items() if c}

    # constructors
    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def const(cls, variables, c: int):
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, i: int):
        e = [0] * len(variables)
        e[i] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def monomial(cls, variables, exps: Sequence[int], c: int = 1):
        return cls(variables, {tuple(exps): c})

    @classmethod
    def linear(cls, variables, coeffs: Sequence[int]):
        out = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * len(variables)
                e[i] = 1
                out[tuple(e)] = c
        return cls(variables, out)

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def support(self) -> set[int]:
        """Indices of variables that occur."""
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def _check(self, other):
        if isinstance(other, int):
            return Poly.const(self.variables, other)
        if other.variables != self.variables:
            raise ValueError("polynomials live in different rings")
        return other

    # arithmetic
    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(self.variables, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.variables, other)
        return isinstance(other, Poly) and self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable i by ``images[i]``; the images fix the target ring."""
        if len(images) != len(self.variables):
            raise ValueError("need one image per variable")
        target = images[0].variables if images else self.variables
        out = Poly.zero(target)
        cache = {}
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[i, k] = images[i] ** k
                    term = term * cache[i, k]
            out = out + term
        return out

    def rename(self, variables: Sequence[str]) -> "Poly":
        return Poly(variables, self.terms)

    # output
    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def to_json(self) -> list:
        return [[c, list(e)] for e, c in self.sorted_terms()]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self})"


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the given total degree, in a fixed (lexicographically descending) order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def product(polys: Iterable[Poly], variables: Sequence[str]) -> Poly:
    out = Poly.const(variables, 1)
    for p in polys:
        out = out * p
    return out
