"""The fixture corpus: small graded quivers with path or near-path structures.

These are the instances the verification pipeline runs on: linear quivers,
a four-vertex line with a degree-2 bridging arrow hit by a ternary operation,
its five-vertex cousins (one violating the defining identities, one repaired),
stars, and a two-vertex structure whose ternary operation takes a unit
argument and therefore fails strict unitality over the vertex ring (it is
only k-linear, not a bimodule map family, so it is stored with
``enforce_blocks=False``).
"""

from __future__ import annotations

from dataclasses import dataclass

from .ainf import AInfinityAlgebra, AInfinityStructure, UnitAugmentation
from .fields import QQ
from .graded import GradedBimodule
from .quiver import Arrow, GradedQuiver, enumerate_paths, path_algebra, \
    path_from_arrows, trivial_path


@dataclass
class Fixture:
    name: str
    quiver: GradedQuiver
    algebra: AInfinityAlgebra

    @property
    def is_dg(self):
        return self.algebra.structure.arity_max <= 2


def _path_ainfinity(Q, higher, field, label):
    """Path algebra structure plus higher operations given on basis paths."""
    base = path_algebra(Q, field)
    ops = {2: dict(base.structure.ops[2])}
    for n, table in higher.items():
        ops[n] = table
    structure = AInfinityStructure(base.module, ops, field)
    return AInfinityAlgebra(structure, base.unit_aug, label=label)


def linear(k: int, field=QQ) -> Fixture:
    """A_k: vertices 1..k, arrows a1: 2->1, ..., a_{k-1}: k->k-1, degree 1."""
    vertices = [str(i) for i in range(1, k + 1)]
    arrows = [Arrow(f"a{i}", str(i + 1), str(i), 1) for i in range(1, k)]
    Q = GradedQuiver(vertices, arrows, label=f"A{k}")
    return Fixture(f"a{k}", Q, path_algebra(Q, field))


def a2(field=QQ):
    return linear(2, field)


def a3(field=QQ):
    return linear(3, field)


def a4(field=QQ):
    return linear(4, field)


def one_vertex(field=QQ) -> Fixture:
    Q = GradedQuiver(["1"], [], label="pt")
    return Fixture("point", Q, path_algebra(Q, field))


def bridge4(field=QQ) -> Fixture:
    """4 -> 3 -> 2 -> 1 with a degree-2 bridge tau: 4 -> 1, and
    m_3(alpha, beta, gamma) = tau."""
    Q = GradedQuiver(
        ["1", "2", "3", "4"],
        [Arrow("alpha", "2", "1", 1), Arrow("beta", "3", "2", 1),
         Arrow("gamma", "4", "3", 1), Arrow("tau", "4", "1", 2)],
        label="bridge4")
    al, be, ga, ta = (path_from_arrows((Q.arrow_by_name[n],))
                      for n in ("alpha", "beta", "gamma", "tau"))
    m3 = {(al, be, ga): {ta: field.one}}
    return Fixture("bridge4", Q, _path_ainfinity(Q, {3: m3}, field, "bridge4"))


def line5_arrows():
    return [Arrow("a", "2", "1", 1), Arrow("b", "3", "2", 1),
            Arrow("c", "4", "3", 1), Arrow("d", "5", "4", 1),
            Arrow("t", "4", "1", 2), Arrow("u", "5", "2", 2)]


def line5_bad(field=QQ) -> Fixture:
    """Two overlapping bridges with m_3(a,b,c) = t and m_3(b,c,d) = u: the
    n = 4 identity fails on (a,b,c,d) with residual on {t*d, a*u}."""
    Q = GradedQuiver([str(i) for i in range(1, 6)], line5_arrows(), label="line5")
    ar = {x.name: path_from_arrows((x,)) for x in Q.arrows}
    m3 = {(ar["a"], ar["b"], ar["c"]): {ar["t"]: field.one},
          (ar["b"], ar["c"], ar["d"]): {ar["u"]: field.one}}
    return Fixture("line5_bad", Q, _path_ainfinity(Q, {3: m3}, field, "line5_bad"))


def line5_fixed(field=QQ) -> Fixture:
    """Same quiver, with the extra value m_3(a*b, c, d) = t*d - a*u that closes
    the n = 4 identity (and all higher ones)."""
    Q = GradedQuiver([str(i) for i in range(1, 6)], line5_arrows(), label="line5")
    A = {x.name: Q.arrow_by_name[x.name] for x in Q.arrows}
    ar = {n: path_from_arrows((A[n],)) for n in A}
    ab = path_from_arrows((A["a"], A["b"]))
    td = path_from_arrows((A["t"], A["d"]))
    au = path_from_arrows((A["a"], A["u"]))
    m3 = {(ar["a"], ar["b"], ar["c"]): {ar["t"]: field.one},
          (ar["b"], ar["c"], ar["d"]): {ar["u"]: field.one},
          (ab, ar["c"], ar["d"]): {td: field.one, au: -field.one}}
    return Fixture("line5_fixed", Q, _path_ainfinity(Q, {3: m3}, field, "line5_fixed"))


def star_in(field=QQ) -> Fixture:
    """Three arrows of degrees 1, 2, 3 into a center: no composable arrow pairs."""
    Q = GradedQuiver(
        ["0", "1", "2", "3"],
        [Arrow("x1", "1", "0", 1), Arrow("x2", "2", "0", 2), Arrow("x3", "3", "0", 3)],
        label="star_in")
    return Fixture("star_in", Q, path_algebra(Q, field))


def star_mixed(field=QQ) -> Fixture:
    """Arrows into and out of the center, giving length-2 paths leaf -> leaf."""
    Q = GradedQuiver(
        ["0", "1", "2", "3"],
        [Arrow("p", "1", "0", 1), Arrow("q", "2", "0", 2), Arrow("r", "0", "3", 1)],
        label="star_mixed")
    return Fixture("star_mixed", Q, path_algebra(Q, field))


def unit_defect2(field=QQ) -> Fixture:
    """Two vertices, one arrow, and m_3(alpha, e2, alpha) = alpha: a k-linear
    structure that is not strictly unital over the vertex ring."""
    Q = GradedQuiver(["1", "2"], [Arrow("alpha", "2", "1", 1)], label="A2")
    al = path_from_arrows((Q.arrow_by_name["alpha"],))
    e1, e2 = trivial_path("1"), trivial_path("2")
    basis = enumerate_paths(Q)
    module = GradedBimodule(Q.vertices, basis, sort=False)
    one = field.one
    m2 = {}
    for x in basis:
        for y in basis:
            if x.source != y.target:
                continue
            if not x.arrows:
                m2[(x, y)] = {y: one}
            elif not y.arrows:
                m2[(x, y)] = {x: one}
    m3 = {(al, e2, al): {al: one}}
    structure = AInfinityStructure(module, {2: m2, 3: m3}, field,
                                  enforce_blocks=False)
    ua = UnitAugmentation({"1": e1, "2": e2}, {e1: one, e2: one})
    return Fixture("unit_defect2", Q, AInfinityAlgebra(structure, ua,
                                                       label="unit_defect2"))


def corpus(field=QQ):
    """The acyclic fixtures the theorem pipeline must pass on."""
    return [one_vertex(field), a2(field), a3(field), a4(field),
            bridge4(field), line5_fixed(field), star_in(field),
            star_mixed(field)]


def random_candidate(seed: int, field=QQ) -> Fixture:
    """A small random augmented structure: a path algebra on an acyclic
    quiver (<= 3 vertices, <= 4 arrows, degrees 1-2) with random sparse m_1
    and m_3 entries on non-unit tuples.  Most draws violate the defining
    identities; some do not.  Used to cross-check the identity verifier
    against the bar differential squaring to zero."""
    import random
    rng = random.Random(seed)
    nv = rng.choice([1, 2, 2, 3, 3, 3])
    vertices = [str(i) for i in range(1, nv + 1)]
    arrows = []
    if nv > 1:
        for i in range(rng.choice([0, 2, 3, 4, 4])):
            t = rng.randint(1, nv - 1)
            s = rng.randint(t + 1, nv)   # source above target: acyclic
            arrows.append(Arrow(f"x{i}", str(s), str(t), rng.choice([1, 1, 2, 2, 3])))
    Q = GradedQuiver(vertices, arrows, label=f"rand{seed}")
    base = path_algebra(Q, field)
    basis = list(base.module.basis)
    units = base.unit_aug.unit_elements()
    nonunits = [x for x in basis if x not in units]
    by_block_deg = {}
    for x in nonunits:
        by_block_deg.setdefault((x.source, x.target, x.degree), []).append(x)

    def targets(src, tgt, deg):
        return by_block_deg.get((src, tgt, deg), [])

    m1 = {}
    for x in nonunits:
        combo = {}
        for y in targets(x.source, x.target, x.degree + 1):
            c = field.scalar(rng.choice([0, 1, 1, -1, 2]))
            if c:
                combo[y] = c
        if combo:
            m1[(x,)] = combo
    m2 = dict(base.structure.ops[2])
    for x in nonunits:
        for y in nonunits:
            if x.source != y.target:
                continue
            combo = dict(m2.get((x, y), {}))
            for z in targets(y.source, x.target, x.degree + y.degree):
                c = field.scalar(rng.choice([0, 0, 0, 0, 1, -1]))
                if c:
                    cur = combo.get(z, field.zero)
                    new = cur + c
                    if new:
                        combo[z] = new
                    else:
                        combo.pop(z, None)
            if combo:
                m2[(x, y)] = combo
            else:
                m2.pop((x, y), None)
    m3 = {}
    for x1 in nonunits:
        for x2 in nonunits:
            if x2.target != x1.source:
                continue
            for x3 in nonunits:
                if x3.target != x2.source:
                    continue
                deg = x1.degree + x2.degree + x3.degree - 1
                combo = {}
                for y in targets(x3.source, x1.target, deg):
                    c = field.scalar(rng.choice([0, 0, 0, 1, -1]))
                    if c:
                        combo[y] = c
                if combo:
                    m3[(x1, x2, x3)] = combo
    ops = {2: m2}
    if m1:
        ops[1] = m1
    if m3:
        ops[3] = m3
    structure = AInfinityStructure(base.module, ops, field, arity_max=3)
    alg = AInfinityAlgebra(structure, base.unit_aug, label=f"rand{seed}")
    return Fixture(f"rand{seed}", Q, alg)
