"""Graded bimodules over a vertex ring, with finite tagged bases.

Every basis element carries (source vertex, target vertex, degree) plus a
structural identity key and a display name.  Composability follows the path
convention: x followed by y composes exactly when source(x) = target(y), so
words read left to right travel from target back to source.

Constructors cover the operations the bar/cobar machinery needs: suspension
s with (sM)^n = M^{n+1}, integer shift [n] with (M[n])^i = M^{i+n}, graded
dual (degrees negated, source/target swapped), tensor over the vertex ring
(composable pairs only) and direct sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True, eq=False)
class BasisElement:
    key: tuple
    source: str
    target: str
    degree: int
    name: str

    # identity is structural and class-independent: a path, its re-creation,
    # and a wrapped copy with the same key all denote the same element
    def __eq__(self, other):
        return (isinstance(other, BasisElement) and self.key == other.key
                and self.source == other.source and self.target == other.target
                and self.degree == other.degree)

    def __hash__(self):
        return hash((self.key, self.source, self.target, self.degree))

    def sort_key(self):
        return (self.degree, str(self.source), str(self.target), self.name)

    def __repr__(self):
        return f"<{self.name}:{self.degree}@{self.source}->{self.target}>"


@dataclass(frozen=True, eq=False)
class TensorWord(BasisElement):
    """A composable word in a tensor (co)algebra; empty words have no factors."""

    factors: tuple = ()

    @property
    def length(self):
        return len(self.factors)


@dataclass(frozen=True, eq=False)
class TensorPair(BasisElement):
    """A composable pair x (x) y with source(x) = target(y)."""

    left: BasisElement = None
    right: BasisElement = None


def suspend(x: BasisElement) -> BasisElement:
    """s: degree -1, (sM)^n = M^{n+1}."""
    return BasisElement(("s", x.key), x.source, x.target, x.degree - 1, f"s({x.name})")


def desuspend(x: BasisElement) -> BasisElement:
    """s^{-1}: degree +1."""
    if x.key[0] == "s":
        raise ValueError("desuspend of a suspension: unwrap with unsuspend()")
    return BasisElement(("si", x.key), x.source, x.target, x.degree + 1, f"si({x.name})")


def dual_element(x: BasisElement) -> BasisElement:
    """D: degree negated, source and target swapped."""
    return BasisElement(("D", x.key), x.target, x.source, -x.degree, f"D({x.name})")


def shifted_element(x: BasisElement, n: int) -> BasisElement:
    if n == 0:
        return x
    return BasisElement(("shift", n, x.key), x.source, x.target, x.degree - n,
                        f"{x.name}[{n}]")


def tensor_element(x: BasisElement, y: BasisElement) -> TensorPair:
    if x.source != y.target:
        raise ValueError(f"non-composable tensor pair {x.name} (x) {y.name}")
    return TensorPair(("tens", x.key, y.key), y.source, x.target,
                      x.degree + y.degree, f"{x.name}(x){y.name}", x, y)


def make_word(vertex: str, factors: tuple) -> TensorWord:
    """A composable word [a1|...|ak]; with no factors, the empty word at vertex."""
    if not factors:
        return TensorWord(("w", vertex), vertex, vertex, 0, f"[]_{vertex}")
    for a, b in zip(factors, factors[1:]):
        if a.source != b.target:
            raise ValueError(f"non-composable word factors {a.name}, {b.name}")
    key = ("w",) + tuple(f.key for f in factors)
    name = "[" + "|".join(f.name for f in factors) + "]"
    return TensorWord(key, factors[-1].source, factors[0].target,
                      sum(f.degree for f in factors), name, factors)


class GradedBimodule:
    """Finite ordered basis of tagged elements over a fixed vertex list."""

    def __init__(self, vertices, basis, sort: bool = True):
        self.vertices = tuple(vertices)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        for x in basis:
            if x.source not in self._vindex or x.target not in self._vindex:
                raise ValueError(f"element {x.name} tagged with undeclared vertex")
        if sort:
            basis = sorted(basis, key=self._order)
        self.basis = tuple(basis)
        self.index = {x: i for i, x in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise ValueError("duplicate basis elements")

    def _order(self, x: BasisElement):
        return (x.degree, self._vindex[x.source], self._vindex[x.target], x.name)

    def __len__(self):
        return len(self.basis)

    def __contains__(self, x):
        return x in self.index

    def __iter__(self):
        return iter(self.basis)

    def dim_table(self) -> dict:
        table = {}
        for x in self.basis:
            k = (x.source, x.target, x.degree)
            table[k] = table.get(k, 0) + 1
        return table

    def degree_dims(self) -> dict:
        dims = {}
        for x in self.basis:
            dims[x.degree] = dims.get(x.degree, 0) + 1
        return dims

    def degrees(self):
        return sorted({x.degree for x in self.basis})

    def by_degree(self, n: int):
        return [x for x in self.basis if x.degree == n]

    def suspended(self) -> "GradedBimodule":
        return GradedBimodule(self.vertices, [suspend(x) for x in self.basis])

    def shifted(self, n: int) -> "GradedBimodule":
        return GradedBimodule(self.vertices, [shifted_element(x, n) for x in self.basis])

    def dual(self) -> "GradedBimodule":
        return GradedBimodule(self.vertices, [dual_element(x) for x in self.basis])

    def tensor(self, other: "GradedBimodule") -> "GradedBimodule":
        if self.vertices != other.vertices:
            raise ValueError("tensor over different vertex rings")
        pairs = [tensor_element(x, y)
                 for x in self.basis for y in other.basis if x.source == y.target]
        return GradedBimodule(self.vertices, pairs)

    def direct_sum(self, other: "GradedBimodule") -> "GradedBimodule":
        if self.vertices != other.vertices:
            raise ValueError("direct sum over different vertex rings")
        return GradedBimodule(self.vertices, list(self.basis) + list(other.basis))
