"""Finite positively graded quivers and their path algebras.

Arrows carry strictly positive degrees; vertices sit in degree 0.  The
product xy of two paths is defined when source(x) = target(y), so a path word
written left to right travels from its target back to its source (this is
what makes a bridging operation like m_3(x, y, z) land in the block of the
composite path x*y*z).

``enumerate_paths`` yields the canonical basis of the path algebra, sorted by
(degree, source index, target index, lexicographic word).  Cyclic quivers are
supported only under an explicit bound, and everything derived from a bounded
enumeration is stamped with it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ainf import AInfinityStructure, DgAlgebra, UnitAugmentation
from .fields import QQ
from .graded import BasisElement, GradedBimodule, tensor_element
from .linalg import Bound, ChainComplexView


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int


@dataclass(frozen=True, eq=False)
class PathElement(BasisElement):
    arrows: tuple = ()

    @property
    def length(self):
        return len(self.arrows)


def trivial_path(v) -> PathElement:
    return PathElement(("e", v), v, v, 0, f"e{v}", ())


def path_from_arrows(arrows) -> PathElement:
    arrows = tuple(arrows)
    if not arrows:
        raise QuiverError("empty arrow word; use trivial_path")
    for a, b in zip(arrows, arrows[1:]):
        if a.source != b.target:
            raise QuiverError(f"arrows {a.name}, {b.name} do not compose")
    key = ("p",) + tuple(a.name for a in arrows)
    name = "*".join(a.name for a in arrows)
    return PathElement(key, arrows[-1].source, arrows[0].target,
                       sum(a.degree for a in arrows), name, arrows)


def concatenate(x: PathElement, y: PathElement) -> PathElement:
    if x.source != y.target:
        raise QuiverError(f"paths {x.name}, {y.name} do not compose")
    if not x.arrows:
        return y
    if not y.arrows:
        return x
    return path_from_arrows(x.arrows + y.arrows)


class GradedQuiver:
    """Ordered vertices plus uniquely named arrows in positive degrees."""

    def __init__(self, vertices, arrows, label: str = ""):
        self.vertices = tuple(str(v) for v in vertices)
        self.label = label
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertices")
        if not self.vertices:
            raise QuiverError("no vertices")
        seen = set()
        norm = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            a = Arrow(str(a.name), str(a.source), str(a.target), int(a.degree))
            if a.degree < 1:
                raise QuiverError(f"arrow {a.name} has degree {a.degree} < 1")
            if a.name in seen:
                raise QuiverError(f"duplicate arrow name {a.name}")
            if a.source not in self.vertices or a.target not in self.vertices:
                raise QuiverError(f"arrow {a.name} uses an undeclared vertex")
            seen.add(a.name)
            norm.append(a)
        self.arrows = tuple(norm)
        self.arrow_by_name = {a.name: a for a in self.arrows}
        self.is_acyclic = self._acyclic()

    def _acyclic(self) -> bool:
        out = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a.target)
        state = {v: 0 for v in self.vertices}  # 0 new, 1 active, 2 done

        def visit(v):
            state[v] = 1
            for w in out[v]:
                if state[w] == 1:
                    return False
                if state[w] == 0 and not visit(w):
                    return False
            state[v] = 2
            return True

        return all(state[v] or visit(v) for v in self.vertices)

    def arrows_into(self, v):
        return [a for a in self.arrows if a.target == v]


def enumerate_paths(Q: GradedQuiver, bound: Bound | None = None):
    """All composable paths (trivial paths included) within the bound, in the
    canonical order.  Unbounded enumeration on a cyclic quiver is rejected."""
    limited = bound is not None and (bound.max_length is not None
                                     or bound.degree_hi is not None)
    if not Q.is_acyclic and not limited:
        raise QuiverError("cyclic quiver: supply a (length, degree) bound")
    max_len = bound.max_length if bound else None
    max_deg = bound.degree_hi if bound else None

    paths = [trivial_path(v) for v in Q.vertices]
    frontier = [path_from_arrows((a,)) for a in Q.arrows]
    while frontier:
        keep = []
        for p in frontier:
            if max_len is not None and p.length > max_len:
                continue
            if max_deg is not None and p.degree > max_deg:
                continue
            keep.append(p)
        paths.extend(keep)
        frontier = [path_from_arrows(p.arrows + (a,))
                    for p in keep for a in Q.arrows if a.target == p.source]
    module = GradedBimodule(Q.vertices, paths)
    return list(module.basis)


def kq_dim_table(Q: GradedQuiver, bound: Bound | None = None) -> dict:
    """(source, target, degree) -> number of paths; the graded dims of kQ."""
    table = {}
    for p in enumerate_paths(Q, bound):
        k = (p.source, p.target, p.degree)
        table[k] = table.get(k, 0) + 1
    return table


def path_algebra(Q: GradedQuiver, field=QQ, bound: Bound | None = None) -> DgAlgebra:
    """The graded path algebra as a dg algebra with zero differential.

    Under a bound the algebra is the quotient by paths beyond the bound
    (a graded ideal), and the result carries the truncation stamp.
    """
    basis = enumerate_paths(Q, bound)
    module = GradedBimodule(Q.vertices, basis, sort=False)
    index = module.index
    one = field.one
    m2 = {}
    for x in basis:
        for y in basis:
            if x.source != y.target:
                continue
            z = concatenate(x, y)
            if z in index:
                m2[(x, y)] = {z: one}
            # beyond the bound: product truncates to zero
    structure = AInfinityStructure(module, {2: m2}, field, arity_max=2)
    eta = {v: trivial_path(v) for v in Q.vertices}
    eps = {trivial_path(v): one for v in Q.vertices}
    alg = DgAlgebra(structure, UnitAugmentation(eta, eps),
                    label=f"k[{Q.label or 'Q'}]")
    alg.bound = bound
    return alg


@dataclass
class CanonicalResolution:
    """The resolution V (x) kQ -> kQ -> R of the vertex ring.

    ``two_term()`` is the complex [V (x) kQ -> kQ] in chain degrees (-1, 0):
    exactness of the short exact sequence says its homology is 0 at -1 and a
    copy of R (one dimension per vertex, internal degree 0) at 0, realized by
    the canonical projection.  ``augmented()`` appends R and is exact
    everywhere.  Blocks refine by (source, target, internal degree).
    """

    quiver: GradedQuiver
    field: object
    algebra: DgAlgebra
    tensor_basis: list
    mu: dict          # V (x) kQ -> kQ
    r_basis: list
    epsilon: dict     # kQ -> R
    bound: Bound | None = None

    def _block(self, x):
        return (x.source, x.target, x.degree)

    def two_term(self) -> ChainComplexView:
        spaces = {-1: self.tensor_basis, 0: list(self.algebra.module.basis)}
        return ChainComplexView(self.field, spaces, dict(self.mu),
                                block_of=self._block, bound=self.bound,
                                label="V(x)kQ->kQ")

    def augmented(self) -> ChainComplexView:
        spaces = {-2: self.tensor_basis, -1: list(self.algebra.module.basis),
                  0: self.r_basis}
        diff = dict(self.mu)
        diff.update(self.epsilon)
        return ChainComplexView(self.field, spaces, diff,
                                block_of=self._block, bound=self.bound,
                                label="V(x)kQ->kQ->R")

    def r_table(self) -> dict:
        return {(v, v, 0, 0): 1 for v in self.quiver.vertices}


def canonical_resolution(Q: GradedQuiver, field=QQ,
                         bound: Bound | None = None) -> CanonicalResolution:
    alg = path_algebra(Q, field, bound)
    index = alg.module.index
    one = field.one
    arrow_paths = [path_from_arrows((a,)) for a in Q.arrows]
    tensor_basis = []
    mu = {}
    for a in arrow_paths:
        for p in alg.module.basis:
            if a.source != p.target:
                continue
            t = tensor_element(a, p)
            tensor_basis.append(t)
            z = concatenate(a, p)
            if z in index:
                mu[t] = {z: one}
    tensor_module = GradedBimodule(Q.vertices, tensor_basis)
    tensor_basis = list(tensor_module.basis)
    r_basis = [BasisElement(("r", v), v, v, 0, f"r{v}") for v in Q.vertices]
    r_by_vertex = {v: r for v, r in zip(Q.vertices, r_basis)}
    epsilon = {trivial_path(v): {r_by_vertex[v]: one} for v in Q.vertices}
    return CanonicalResolution(Q, field, alg, tensor_basis, mu, r_basis,
                               epsilon, bound)
