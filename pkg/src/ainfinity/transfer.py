"""Minimal models via homotopy transfer.

A contraction packages a deformation retract of a complex onto its homology:
iota and pi with pi o iota = id, a degree -1 homotopy h with
iota o pi = id - (dh + hd), and the side conditions h^2 = 0, h iota = 0,
pi h = 0.  It is built blockwise by exact Gaussian elimination: echelon bases
for the image and for homology representatives, and preimages of the image
basis for the homotopy.  A seed perturbs the choices (representatives by
boundaries, preimages by cycles), which changes the contraction but never the
side conditions.

The transfer itself runs in the suspended picture, where the recursion over
planar binary trees carries no signs at all: with I, P the suspended
(co)inclusions, Htilde = -s h s^{-1}, and b_2 the suspended product,

    phi_1 = I,   phi_n = Htilde ( sum_{i+j=n} b_2 (phi_i (x) phi_j) ),
    b'_n = P ( sum_{i+j=n} b_2 (phi_i (x) phi_j) ),

and the operations and morphism components are unsuspended afterwards.
Binary vertices suffice because transfer inputs are dg algebras.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ainf import (AInfinityAlgebra, AInfinityMorphism, AInfinityStructure,
                   DgAlgebra, UnitAugmentation, koszul_sign)
from .graded import BasisElement, GradedBimodule, suspend
from .linalg import ChainComplexView, EchelonSpace, SparseMatrix, solve_columns
from .lincomb import add_scaled, add_term


class TransferError(ValueError):
    pass


@dataclass
class Contraction:
    complex: ChainComplexView
    h_module: GradedBimodule
    iota: dict      # H basis element -> combo in C
    pi: dict        # C basis element -> combo in H
    h: dict         # C basis element -> combo in C, degree -1
    field: object

    def apply_iota(self, combo: dict) -> dict:
        out = {}
        for x, c in combo.items():
            add_scaled(out, self.iota.get(x, {}), c)
        return out

    def apply_pi(self, combo: dict) -> dict:
        out = {}
        for x, c in combo.items():
            add_scaled(out, self.pi.get(x, {}), c)
        return out

    def apply_h(self, combo: dict) -> dict:
        out = {}
        for x, c in combo.items():
            add_scaled(out, self.h.get(x, {}), c)
        return out

    def apply_d(self, combo: dict) -> dict:
        out = {}
        for x, c in combo.items():
            add_scaled(out, self.complex.differential_of(x), c)
        return out

    def verify(self) -> list:
        """Names of violated contraction conditions (empty = valid)."""
        bad = []
        one = self.field.one
        for x in self.h_module.basis:
            if self.apply_pi(self.iota.get(x, {})) != {x: one}:
                bad.append("pi_iota_identity")
            if self.apply_d(self.iota.get(x, {})):
                bad.append("iota_chain_map")
            if self.apply_h(self.iota.get(x, {})):
                bad.append("h_iota")
        for n in self.complex.support():
            for x in self.complex.spaces[n]:
                lhs = dict(self.apply_iota(self.pi.get(x, {})))
                add_term(lhs, x, -one)
                dh = self.apply_d(self.h.get(x, {}))
                hd = self.apply_h(self.complex.differential_of(x))
                for y, c in dh.items():
                    add_term(lhs, y, c)
                for y, c in hd.items():
                    add_term(lhs, y, c)
                if lhs:
                    bad.append("homotopy_identity")
                if self.apply_h(self.h.get(x, {})):
                    bad.append("h_squared")
                if self.apply_pi(self.h.get(x, {})):
                    bad.append("pi_h")
                if self.apply_pi(self.complex.differential_of(x)):
                    bad.append("pi_chain_map")
        return sorted(set(bad))


def build_contraction(C: ChainComplexView, vertices, seed: int | None = None) -> Contraction:
    """Blockwise echelon contraction of a finite complex onto its homology.

    With a seed, homology representatives are perturbed by boundaries and
    homotopy preimages by cycles; the side conditions hold by construction
    for every choice.
    """
    bad = C.check_d_squared()
    if bad:
        raise TransferError(f"d^2 != 0 on {bad[0][0].name}")
    rng = random.Random(seed) if seed is not None else None
    field = C.field
    one = field.one

    if not any(C.diff.get(x) for n in C.support() for x in C.spaces[n]):
        # zero differential: the identity contraction, h = 0
        els = [x for n in C.support() for x in C.spaces[n]]
        ident = {x: {x: one} for x in els}
        return Contraction(C, GradedBimodule(tuple(vertices), els),
                           dict(ident), dict(ident), {}, field)

    blocks = {}
    for n in C.support():
        for x in C.spaces[n]:
            blocks.setdefault(C.block_of(x), set()).add(n)

    iota, pi, h = {}, {}, {}
    h_elements = []
    for b in sorted(blocks, key=lambda k: tuple(str(p) for p in k)):
        degs = sorted(blocks[b])
        lo, hi = degs[0], degs[-1]
        dom = {n: [x for x in C.spaces.get(n, []) if C.block_of(x) == b]
               for n in range(lo - 1, hi + 2)}
        mat = {n: C.block_matrix(n, b) for n in range(lo - 1, hi + 1)}

        image = {}    # degree -> EchelonSpace of im d^{n-1} in C^n
        kernel = {}   # degree -> list of kernel vectors of d^n
        for n in range(lo, hi + 1):
            sp = EchelonSpace(field)
            for col in mat[n - 1].columns():
                if col:
                    sp.add(col)
            image[n] = sp
            kernel[n] = mat[n].kernel_basis()

        reps = {}
        for n in range(lo, hi + 1):
            red = EchelonSpace(field)
            for vec in kernel[n]:
                red.add(image[n].reduce(vec))
            rows = [dict(r) for r in red.rows]
            if rng is not None:
                for r in rows:
                    for img_row in image[n].rows:
                        c = field.scalar(rng.randint(-2, 2))
                        if c:
                            add_scaled(r, img_row, c)
            reps[n] = rows

        w_vecs = {}   # degree n -> preimages of the image basis in C^{n+1}
        for n in range(lo - 1, hi + 1):
            target_rows = image.get(n + 1)
            if target_rows is None or not target_rows.rows:
                w_vecs[n] = []
                continue
            sols = solve_columns(mat[n], [dict(r) for r in target_rows.rows])
            if rng is not None:
                zsp = kernel.get(n, mat[n].kernel_basis())
                for s in sols:
                    for z in zsp:
                        c = field.scalar(rng.randint(-2, 2))
                        if c:
                            add_scaled(s, z, c)
            w_vecs[n] = sols

        for n in range(lo, hi + 1):
            els = dom[n]
            if not els:
                continue
            h_els = []
            for i, r in enumerate(reps[n]):
                lead = els[min(r)]
                he = BasisElement(("H", b, n, i), lead.source, lead.target, n,
                                  f"[{lead.name}]")
                h_els.append(he)
                h_elements.append(he)
                iota[he] = {els[j]: v for j, v in sorted(r.items())}
            # decomposition C^n = B ^n (+) reps (+) W^n
            cols = ([dict(r) for r in image[n].rows]
                    + [dict(r) for r in reps[n]]
                    + [dict(w) for w in w_vecs[n]])
            nb, nr = len(image[n].rows), len(reps[n])
            if len(cols) != len(els):
                raise TransferError(f"splitting dimension mismatch in block {b}")
            S = SparseMatrix(len(els), len(cols),
                             {(r, c): v for c, col in enumerate(cols)
                              for r, v in col.items()}, field)
            coords = solve_columns(S, [{j: one} for j in range(len(els))])
            prev_w = w_vecs.get(n - 1, [])
            prev_els = dom.get(n - 1, [])
            for j, x in enumerate(els):
                co = coords[j]
                pi_x = {}
                for i in range(nr):
                    v = co.get(nb + i)
                    if v:
                        add_term(pi_x, h_els[i], v)
                if pi_x:
                    pi[x] = pi_x
                h_x = {}
                for i in range(nb):
                    v = co.get(i)
                    if v:
                        for jj, vv in prev_w[i].items():
                            add_term(h_x, prev_els[jj], v * vv)
                if h_x:
                    h[x] = h_x

    h_module = GradedBimodule(tuple(vertices), h_elements)
    return Contraction(C, h_module, iota, pi, h, field)


def reduced_complex(A: AInfinityAlgebra) -> ChainComplexView:
    """The complex (Abar, m_1) of the augmentation ideal."""
    reduced = A.reduced_basis()
    spaces = {}
    for x in reduced:
        spaces.setdefault(x.degree, []).append(x)
    rset = set(reduced)
    diff = {}
    for x in reduced:
        val = A.structure.op_value(1, (x,))
        if val:
            if any(y not in rset for y in val):
                raise TransferError("differential leaves the augmentation ideal")
            diff[x] = val
    return ChainComplexView(A.field, spaces, diff, label=f"{A.label}bar")


@dataclass
class MinimalModel:
    algebra: AInfinityAlgebra
    morphism: AInfinityMorphism
    contraction: Contraction
    arity_cutoff: int
    truncated: bool


def minimal_model(A: DgAlgebra, K: Contraction | None = None,
                  seed: int | None = None, n_max: int = 16) -> MinimalModel:
    """Transfer a dg algebra onto its homology as a minimal structure.

    Works on the augmentation ideal and re-adjoins the vertex ring, so the
    output is strictly unital and augmented, with a strictly unital morphism
    back to the input whose first component is the homology inclusion.

    The arity cutoff is the length of the longest composable chain in the
    reduced homology basis: beyond it no tuple composes, so every higher
    operation vanishes identically.  If that natural cutoff exceeds ``n_max``
    the result is flagged as truncated.
    """
    field = A.field
    one = field.one
    if K is None:
        K = build_contraction(reduced_complex(A), A.vertices, seed)

    hbar = list(K.h_module.basis)
    sus = {x: suspend(x) for x in hbar}

    # suspended structure maps on s(Abar)
    def b_pair(left_combo, right_combo):
        """b_2 = -s o m_2 o (s^{-1} (x) s^{-1}) on combos of suspended elements."""
        out = {}
        for (xs, cx) in left_combo.items():
            sgn = -koszul_sign(1, xs.degree)
            for (ys, cy) in right_combo.items():
                prod = A.product(_unsus(xs), _unsus(ys))
                for z, cz in prod.items():
                    add_term(out, suspend(z), sgn * cx * cy * cz)
        return out

    def _unsus(sx):
        return BasisElement(sx.key[1], sx.source, sx.target, sx.degree + 1,
                            sx.name[2:-1])

    def apply_Htilde(combo):
        # suspended homotopy with the IP - id side convention: +s o h o s^{-1}
        # (the recursion closes the coalgebra-morphism property with this sign)
        out = {}
        for sx, c in combo.items():
            for y, v in K.h.get(_unsus(sx), {}).items():
                add_term(out, suspend(y), c * v)
        return out

    def apply_P(combo):
        out = {}
        for sx, c in combo.items():
            for y, v in K.pi.get(_unsus(sx), {}).items():
                add_term(out, suspend(y), c * v)
        return out

    phi_memo = {}
    lam_memo = {}

    def phi(tup):
        if len(tup) == 1:
            sx = tup[0]
            return {suspend(y): v
                    for y, v in K.iota.get(_unsus(sx), {}).items()}
        got = phi_memo.get(tup)
        if got is None:
            got = apply_Htilde(lam(tup))
            phi_memo[tup] = got
        return got

    def lam(tup):
        got = lam_memo.get(tup)
        if got is not None:
            return got
        out = {}
        for i in range(1, len(tup)):
            left = phi(tup[:i])
            right = phi(tup[i:])
            if left and right:
                for z, c in b_pair(left, right).items():
                    add_term(out, z, c)
        lam_memo[tup] = out
        return out

    # composable-chain bound on the reduced homology basis
    chain_bound = _longest_chain(hbar)
    cutoff = min(chain_bound, n_max)
    truncated = chain_bound > n_max

    def unsus_sign(tup):
        n = len(tup)
        parity = sum(sus[x].degree * (n - 1 - j) for j, x in enumerate(tup)) % 2
        return -1 if parity else 1

    ops_bar = {}
    f_comp = {}
    by_target = {}
    for x in hbar:
        by_target.setdefault(x.target, []).append(x)

    def tuples(n):
        def extend(tup):
            if len(tup) == n:
                yield tup
                return
            for x in by_target.get(tup[-1].source, []):
                yield from extend(tup + (x,))
        for x in hbar:
            yield from extend((x,))

    for n in range(2, cutoff + 1):
        mtab = {}
        ftab = {}
        for tup in tuples(n):
            stup = tuple(sus[x] for x in tup)
            L = lam(stup)
            sgn = unsus_sign(tup)
            if L:
                bp = apply_P(L)
                if bp:
                    mtab[tup] = {_unsus(z): -sgn * c for z, c in bp.items()}
                fval = apply_Htilde(L)
                if fval and n >= 2:
                    ftab[tup] = {_unsus(z): sgn * c for z, c in fval.items()}
        if mtab:
            ops_bar[n] = mtab
        if ftab:
            f_comp[n] = ftab

    # re-adjoin the vertex ring: units, unit products, augmentation
    units = {v: A.unit_aug.eta[v] for v in A.vertices}
    unit_els = {v: BasisElement(("e", v), v, v, 0, f"e{v}") for v in A.vertices}
    basis = list(unit_els.values()) + hbar
    module = GradedBimodule(A.vertices, basis)
    m2 = dict(ops_bar.get(2, {}))
    for v, e in unit_els.items():
        m2[(e, e)] = {e: one}
    for x in hbar:
        m2[(unit_els[x.target], x)] = {x: one}
        m2[(x, unit_els[x.source])] = {x: one}
    ops = dict(ops_bar)
    ops[2] = m2
    structure = AInfinityStructure(module, ops, field)
    eta = dict(unit_els)
    eps = {e: one for e in unit_els.values()}
    Aprime = AInfinityAlgebra(structure, UnitAugmentation(eta, eps),
                              label=f"min({A.label or 'A'})")

    f_table = {1: {}}
    for v, e in unit_els.items():
        f_table[1][(e,)] = {units[v]: one}
    for x in hbar:
        f_table[1][(x,)] = dict(K.iota.get(x, {}))
    for n, tab in f_comp.items():
        f_table[n] = tab
    morphism = AInfinityMorphism(Aprime, A, f_table, label="transfer")
    return MinimalModel(Aprime, morphism, K, cutoff, truncated)


def _longest_chain(elements) -> int:
    """Longest composable chain; large chains on cyclic graphs cap at 64."""
    by_target = {}
    for x in elements:
        by_target.setdefault(x.target, []).append(x)
    memo = {}

    def depth(x, stack):
        if x in memo:
            return memo[x]
        if x in stack or len(stack) > 64:
            return 64
        stack = stack | {x}
        best = 1
        for y in by_target.get(x.source, []):
            best = max(best, 1 + depth(y, stack))
            if best >= 64:
                break
        memo[x] = best
        return best

    return max((depth(x, frozenset()) for x in elements), default=0)
