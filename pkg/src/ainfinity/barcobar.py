"""Bar and cobar constructions, the enveloping dg algebra, the twisted
tensor product, and graded duals of tensor coalgebras.

The bar coalgebra of an augmented structure is the tensor coalgebra on the
suspended augmentation ideal, with deconcatenation comultiplication and the
coderivation assembled from d_n = -s o m_n o (s^{-1})^{(x)n}.  Its d^2 = 0
certificate is exactly the defining identities of the input, and every
construction here re-checks d^2 = 0 on the nose instead of trusting sign
derivations.

Word spaces are finite for acyclic composability graphs; otherwise a length
bound is required and results carry the truncation stamp.  Length truncation
is safe on both sides: the bar differential never lengthens a word (the
truncation is a subcomplex) and the cobar differential never shortens one
(the truncation is a quotient complex).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ainf import (AInfinityAlgebra, AInfinityStructure, DgAlgebra,
                   StructureError, UnitAugmentation, koszul_sign)
from .graded import (GradedBimodule, TensorWord, desuspend, dual_element,
                     make_word, suspend, tensor_element)
from .linalg import Bound, ChainComplexView
from .lincomb import add_term


class ConstructionError(ValueError):
    pass


class BarDifferentialError(ConstructionError):
    """d^2 != 0: the input violates its defining identities."""

    def __init__(self, failures):
        self.failures = failures
        x, res = failures[0]
        super().__init__(f"d^2 != 0 on {x.name} ({len(failures)} words fail)")


def _word_space(vertices, generators, bound: Bound | None, what: str):
    """Empty words plus all composable words over the generators.

    Rejects unbounded enumeration when the composability graph has a cycle.
    """
    max_len = bound.max_length if bound else None
    if max_len is None and _composability_cycle(generators):
        raise ConstructionError(
            f"{what}: unbounded word space (cyclic composability); supply a bound")
    words = [make_word(v, ()) for v in vertices]
    frontier = [make_word(g.source, (g,)) for g in generators]
    by_target = {}
    for g in generators:
        by_target.setdefault(g.target, []).append(g)
    while frontier:
        keep = [w for w in frontier if max_len is None or w.length <= max_len]
        words.extend(keep)
        frontier = [make_word(g.source, w.factors + (g,))
                    for w in keep for g in by_target.get(w.source, [])]
    return words


def _composability_cycle(generators) -> bool:
    # edge x -> y whenever the word [x|y] composes
    by_target = {}
    for g in generators:
        by_target.setdefault(g.target, []).append(g)
    state = {}

    def visit(x):
        state[x] = 1
        for y in by_target.get(x.source, []):
            s = state.get(y, 0)
            if s == 1:
                return True
            if s == 0 and visit(y):
                return True
        state[x] = 2
        return False

    return any(state.get(g, 0) == 0 and visit(g) for g in generators)


@dataclass
class DgCoalgebra:
    """Tensor coalgebra with deconcatenation and a coderivation differential."""

    vertices: tuple
    field: object
    module: GradedBimodule
    diff: dict
    label: str = ""
    bound: Bound | None = None
    certificates: dict = field(default_factory=dict)

    def words(self):
        return self.module.basis

    def reduced_basis(self):
        return [w for w in self.module.basis if w.factors]

    def differential_of(self, w) -> dict:
        return self.diff.get(w, {})

    def comultiplication(self, w):
        """Deconcatenation splittings (prefix, suffix), coefficient 1 each."""
        out = []
        fs = w.factors
        for i in range(len(fs) + 1):
            left = make_word(fs[i - 1].source if i else w.target, fs[:i])
            right = make_word(w.source if i == len(fs) else fs[-1].source, fs[i:])
            out.append((left, right))
        return out

    def complex(self) -> ChainComplexView:
        spaces = {}
        for w in self.module.basis:
            spaces.setdefault(w.degree, []).append(w)
        return ChainComplexView(self.field, spaces, self.diff, bound=self.bound,
                                label=self.label)

    def check_coderivation(self):
        """Delta o d = (d (x) id + id (x) d) o Delta, with Koszul signs."""
        bad = []
        for w in self.module.basis:
            lhs = {}
            for y, c in self.differential_of(w).items():
                for l, r in self.comultiplication(y):
                    add_term(lhs, (l, r), c)
            rhs = {}
            for l, r in self.comultiplication(w):
                for y, c in self.differential_of(l).items():
                    add_term(rhs, (y, r), c)
                sgn = koszul_sign(1, l.degree)
                for y, c in self.differential_of(r).items():
                    add_term(rhs, (l, y), sgn * c)
            for k, v in rhs.items():
                add_term(lhs, k, -v)
            if lhs:
                bad.append((w, lhs))
        return bad


def bar_construct(A: AInfinityAlgebra, bound: Bound | None = None,
                  strict: bool = True) -> DgCoalgebra:
    """The bar coalgebra of an augmented structure.

    With ``strict`` the d^2 = 0 certificate is enforced (a failure means the
    input violates its defining identities and is reported as such); pass
    ``strict=False`` to obtain the raw object and inspect the certificate.
    """
    S = A.structure
    if not S.enforce_blocks:
        raise ConstructionError("bar construction needs a bimodule structure")
    reduced = A.reduced_basis()
    gens = [suspend(x) for x in reduced]
    unsus = {suspend(x): x for x in reduced}
    words = _word_space(A.vertices, gens, bound, "bar")
    module = GradedBimodule(A.vertices, words)

    eps = A.unit_aug.eps
    diff = {}
    for w in module.basis:
        fs = w.factors
        out = {}
        for i in range(len(fs)):
            prefix_deg = sum(f.degree for f in fs[:i])
            for n in range(1, min(S.arity_max, len(fs) - i) + 1):
                sub = fs[i:i + n]
                xs = tuple(unsus[f] for f in sub)
                val = S.op_value(n, xs)
                if not val:
                    continue
                desus_parity = sum(f.degree * (n - 1 - j) for j, f in enumerate(sub))
                sign = -koszul_sign(1, prefix_deg) * (-1) ** (desus_parity % 2)
                for y, c in val.items():
                    if eps.get(y):
                        raise StructureError(
                            f"operation output hits the unit {y.name}: "
                            "input is not augmented")
                    nw = make_word(w.source, fs[:i] + (suspend(y),) + fs[i + n:])
                    add_term(out, nw, sign * c)
        if out:
            diff[w] = out

    C = DgCoalgebra(A.vertices, A.field, module, diff,
                    label=f"B({A.label or 'A'})", bound=bound)
    bad = C.complex().check_d_squared()
    C.certificates["d_squared"] = not bad
    if bad and strict:
        raise BarDifferentialError(bad)
    return C


def cobar_construct(C: DgCoalgebra, bound: Bound | None = None,
                    strict: bool = True) -> DgAlgebra:
    """The cobar dg algebra on the desuspended reduced part of a coalgebra."""
    reduced = C.reduced_basis()
    gens = [desuspend(w) for w in reduced]
    resus = {desuspend(w): w for w in reduced}
    words = _word_space(C.vertices, gens, bound, "cobar")
    module = GradedBimodule(C.vertices, words)
    index = module.index
    one = C.field.one
    max_len = bound.max_length if bound else None

    gen_diff = {}
    for g in gens:
        w = resus[g]
        out = {}
        for y, c in C.differential_of(w).items():
            add_term(out, (desuspend(y),), -c)
        for left, right in C.comultiplication(w):
            if not left.factors or not right.factors:
                continue
            sgn = koszul_sign(1, left.degree)
            add_term(out, (desuspend(left), desuspend(right)), sgn * one)
        gen_diff[g] = out

    diff = {}
    for word in module.basis:
        fs = word.factors
        out = {}
        for i, g in enumerate(fs):
            prefix_deg = sum(f.degree for f in fs[:i])
            sgn = koszul_sign(1, prefix_deg)
            for piece, c in gen_diff.get(g, {}).items():
                nfs = fs[:i] + piece + fs[i + 1:]
                if max_len is not None and len(nfs) > max_len:
                    continue  # quotient truncation
                nw = make_word(word.source, nfs)
                add_term(out, nw, sgn * c)
        if out:
            diff[word] = out

    m1 = {(w,): v for w, v in diff.items()}
    m2 = {}
    for x in module.basis:
        for y in module.basis:
            if x.source != y.target:
                continue
            nfs = x.factors + y.factors
            if max_len is not None and len(nfs) > max_len:
                continue
            z = make_word(y.source, nfs)
            m2[(x, y)] = {index_lookup(index, z): one}
    structure = AInfinityStructure(module, {1: m1, 2: m2}, C.field, arity_max=2)
    eta = {v: make_word(v, ()) for v in C.vertices}
    eps = {make_word(v, ()): one for v in C.vertices}
    alg = DgAlgebra(structure, UnitAugmentation(eta, eps),
                    label=f"Omega({C.label or 'C'})")
    alg.bound = bound or C.bound
    bad = alg.complex().check_d_squared()
    alg.certificates["d_squared"] = not bad
    alg.certificates.update({f"input:{k}": v for k, v in C.certificates.items()})
    if bad and strict:
        raise BarDifferentialError(bad)
    return alg


def index_lookup(index, el):
    if el not in index:
        raise ConstructionError(f"element {el.name} missing from word space")
    return el


def enveloping_algebra(A: AInfinityAlgebra, bound: Bound | None = None) -> DgAlgebra:
    """Cobar of bar: the enveloping dg algebra, with both certificates."""
    C = bar_construct(A, bound)
    U = cobar_construct(C, bound)
    U.label = f"U({A.label or 'A'})"
    return U


def graded_dual_algebra(C: DgCoalgebra) -> DgAlgebra:
    """The linear dual of a finite coalgebra slice, with convolution product.

    Degrees are negated and source/target swapped; the product of dual basis
    vectors pairs against deconcatenation, so D(x) . D(y) is +-D(y.x) when the
    words concatenate, with the Koszul sign of the pairing.
    """
    words = list(C.module.basis)
    duals = {w: dual_element(w) for w in words}
    module = GradedBimodule(C.vertices, list(duals.values()))
    one = C.field.one

    m1 = {}
    for w in words:
        for y, c in C.differential_of(w).items():
            # dual differential: (df*)(w) = -(-1)^{|f*|} f*(dw)
            x = duals[y]
            sgn = -koszul_sign(1, x.degree)
            cur = m1.setdefault((x,), {})
            add_term(cur, duals[w], sgn * c)
    m1 = {k: v for k, v in m1.items() if v}

    index = {w: w for w in words}
    m2 = {}
    for x in words:
        for y in words:
            # D(x) . D(y) pairs against deconcatenation through the bimodule
            # flip D(M (x) N) = D(N) (x) D(M); with the dual differential
            # -(-1)^{|f|} f o d this makes D(x) . D(y) = +D(y.x), no sign
            # (any other sign breaks the Leibniz rule on odd-odd pairs)
            if y.source != x.target:
                continue
            z = make_word(x.source, y.factors + x.factors)
            if z not in index:
                continue  # truncated away
            m2[(duals[x], duals[y])] = {duals[z]: one}

    structure = AInfinityStructure(module, {1: m1, 2: m2}, C.field, arity_max=2)
    eta = {v: dual_element(make_word(v, ())) for v in C.vertices}
    eps = {dual_element(make_word(v, ())): one for v in C.vertices}
    alg = DgAlgebra(structure, UnitAugmentation(eta, eps),
                    label=f"D({C.label or 'C'})")
    alg.bound = C.bound
    bad = alg.complex().check_d_squared()
    alg.certificates["d_squared"] = not bad
    if bad:
        raise BarDifferentialError(bad)
    from .ainf import stasheff_check
    axioms = stasheff_check(structure)
    alg.certificates["dg_axioms"] = axioms.passed
    if not axioms.passed:
        raise ConstructionError(
            f"dual algebra violates dg axioms: {axioms.failures[0].describe()}")
    return alg


@dataclass
class TwistedTensorComplex:
    """BA (x) A with the twisted differential; acyclic onto the vertex ring."""

    algebra: DgAlgebra
    coalgebra: DgCoalgebra
    basis: list
    diff: dict
    field: object
    vertices: tuple
    bound: Bound | None = None
    certificates: dict = None

    def complex(self) -> ChainComplexView:
        spaces = {}
        for z in self.basis:
            spaces.setdefault(z.degree, []).append(z)
        return ChainComplexView(self.field, spaces, self.diff, bound=self.bound,
                                label="B(x)A")

    def right_action(self, z, b) -> dict:
        """(w (x) a) . b = w (x) ab."""
        out = {}
        for y, c in self.algebra.product(z.right, b).items():
            add_term(out, tensor_element(z.left, y), c)
        return out

    def expected_r_table(self) -> dict:
        return {(v, v, 0): 1 for v in self.vertices}

    def comparison_to_r(self, z) -> dict:
        """eps_B (x) eps_A, landing on the vertex ring summand."""
        w, a = z.left, z.right
        if w.factors:
            return {}
        e = self.algebra.unit_aug.eps.get(a)
        if not e:
            return {}
        return {w.target: e}


def twisted_tensor(A: DgAlgebra, bound: Bound | None = None) -> TwistedTensorComplex:
    """The twisted tensor product of the bar coalgebra against the algebra.

    d = d_B (x) id + id (x) d_A + (id (x) mu)(id (x) pi (x) id)(Delta (x) id),
    where pi projects a bar word to its length-one part and desuspends.
    """
    C = bar_construct(A, bound)
    basis = [tensor_element(w, a)
             for w in C.module.basis for a in A.module.basis
             if w.source == a.target]
    diff = {}
    for z in basis:
        w, a = z.left, z.right
        out = {}
        for y, c in C.differential_of(w).items():
            add_term(out, tensor_element(y, a), c)
        sgn_w = koszul_sign(1, w.degree)
        for y, c in A.differential(a).items():
            add_term(out, tensor_element(w, y), sgn_w * c)
        if w.factors:
            *head, last = w.factors
            prefix = make_word(last.target if head else w.target, tuple(head))
            x = desuspend_factor(last)
            sgn = koszul_sign(1, prefix.degree)
            for y, c in A.product(x, a).items():
                add_term(out, tensor_element(prefix, y), sgn * c)
        if out:
            diff[z] = out

    tw = TwistedTensorComplex(A, C, basis, diff, A.field, A.vertices,
                              bound, certificates={})
    bad = tw.complex().check_d_squared()
    tw.certificates["d_pi_squared"] = not bad
    tw.certificates.update({f"bar:{k}": v for k, v in C.certificates.items()})
    if bad:
        raise BarDifferentialError(bad)
    return tw


def desuspend_factor(f):
    """Undo the suspension on a bar-word factor s(x), recovering x."""
    if f.key[0] != "s":
        raise ConstructionError(f"factor {f.name} is not a suspension")
    from .graded import BasisElement
    return BasisElement(f.key[1], f.source, f.target, f.degree + 1,
                        f.name[2:-1])
