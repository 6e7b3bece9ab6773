"""Exact sparse linear algebra and homology of finite complexes.

Matrices are dicts of nonzero entries over a configured exact field (the
rationals or a prime field).  Elimination is plain Gaussian reduction to the
reduced row echelon form, processing columns left to right and picking,
within each column, the candidate pivot with the smallest numerator magnitude
(smallest canonical representative over F_p), lowest row index on ties.  The
reduced echelon form is unique, so ranks, kernel bases, and homology
representatives are canonical and byte-stable across runs.

Complexes are graded spaces with a degree +1 differential.  Every map in this
system is a bimodule map, so matrices are stored and eliminated blockwise by
(source vertex, target vertex); the homology report refines dimensions by
block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fields import QQ
from .graded import BasisElement
from .lincomb import add_term


class HomologyError(ValueError):
    """d^2 != 0, a clipped window, or a block-mixing differential."""


@dataclass(frozen=True)
class Bound:
    """Truncation stamp: max word length and/or a degree window."""

    max_length: int | None = None
    degree_lo: int | None = None
    degree_hi: int | None = None

    def stamp(self) -> str:
        parts = []
        if self.max_length is not None:
            parts.append(f"length<={self.max_length}")
        if self.degree_lo is not None or self.degree_hi is not None:
            parts.append(f"degree in [{self.degree_lo},{self.degree_hi}]")
        return "truncated: " + ", ".join(parts) if parts else "none"


class SparseMatrix:
    """rows x cols matrix with a mapping (row, col) -> nonzero scalar."""

    def __init__(self, rows: int, cols: int, entries: dict, field=QQ):
        self.rows = rows
        self.cols = cols
        self.field = field
        self.entries = {}
        for (r, c), v in entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) outside {rows}x{cols}")
            if v:
                self.entries[(r, c)] = v

    @classmethod
    def identity(cls, n: int, field=QQ):
        return cls(n, n, {(i, i): field.one for i in range(n)}, field)

    @classmethod
    def zero(cls, rows: int, cols: int, field=QQ):
        return cls(rows, cols, {}, field)

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def columns(self):
        cols = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def rref(self):
        """Reduced row echelon form: (rows as col->val dicts, pivot columns)."""
        return _rref_rows(self.row_dicts(), self.cols, self.field)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self):
        """Canonical basis of the null space; size = cols - rank."""
        rows, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            vec = {free: self.field.one}
            for prow, pcol in enumerate(pivots):
                coeff = rows[prow].get(free)
                if coeff:
                    vec[pcol] = -coeff
            basis.append(vec)
        return basis

    def apply(self, vec: dict) -> dict:
        """Matrix times a sparse column vector (col -> scalar)."""
        out = {}
        cols = None
        for c, x in vec.items():
            if cols is None:
                cols = self.columns()
            for r, v in cols[c].items():
                add_term(out, r, v * x)
        return out


def _rref_rows(rows, ncols, field):
    nrows = len(rows)
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        best = None
        best_w = None
        for i in range(r, nrows):
            v = rows[i].get(col)
            if v:
                w = field.abs_numerator(v)
                if best is None or w < best_w:
                    best, best_w = i, w
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        pv = rows[r][col]
        if pv != field.one:
            rows[r] = {c: v / pv for c, v in rows[r].items()}
        lead = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i].get(col)
            if not f:
                continue
            tgt = rows[i]
            for c, v in lead.items():
                cur = tgt.get(c)
                new = (cur - f * v) if cur is not None else -f * v
                if new:
                    tgt[c] = new
                else:
                    tgt.pop(c, None)
        pivots.append(col)
        r += 1
    return rows[:r], pivots


class EchelonSpace:
    """A row space kept in reduced echelon form, for reduction/membership."""

    def __init__(self, field=QQ):
        self.field = field
        self.rows = []   # sorted by pivot column
        self.pivots = []

    def reduce(self, vec: dict) -> dict:
        vec = dict(vec)
        for row, p in zip(self.rows, self.pivots):
            c = vec.get(p)
            if c:
                for col, v in row.items():
                    cur = vec.get(col)
                    new = (cur - c * v) if cur is not None else -c * v
                    if new:
                        vec[col] = new
                    else:
                        vec.pop(col, None)
        return vec

    def add(self, vec: dict) -> bool:
        """Insert vec; True if it enlarged the space."""
        red = self.reduce(vec)
        if not red:
            return False
        p = min(red)
        pv = red[p]
        if pv != self.field.one:
            red = {c: v / pv for c, v in red.items()}
        # back-eliminate p from existing rows to keep the reduced form
        for i, row in enumerate(self.rows):
            c = row.get(p)
            if c:
                for col, v in red.items():
                    cur = row.get(col)
                    new = (cur - c * v) if cur is not None else -c * v
                    if new:
                        row[col] = new
                    else:
                        row.pop(col, None)
        at = 0
        while at < len(self.pivots) and self.pivots[at] < p:
            at += 1
        self.rows.insert(at, red)
        self.pivots.insert(at, p)
        return True

    @property
    def dim(self):
        return len(self.rows)


def solve_columns(M: SparseMatrix, targets):
    """Particular solutions x of M x = t for each target; free variables 0.

    Raises HomologyError if some target is not in the column span.
    """
    ncols = M.cols
    rows = M.row_dicts()
    for j, t in enumerate(targets):
        for r, v in t.items():
            if v:
                rows[r][ncols + j] = v
    red, pivots = _rref_rows(rows, ncols + len(targets), M.field)
    sols = []
    for j in range(len(targets)):
        col = ncols + j
        if col in pivots:
            raise HomologyError("inconsistent linear system in solve_columns")
        sol = {}
        for prow, pcol in enumerate(pivots):
            if pcol >= ncols:
                continue
            v = red[prow].get(col)
            if v:
                sol[pcol] = v
        sols.append(sol)
    return sols


@dataclass
class HomologyReport:
    """Homology dimensions and canonical representatives per degree and block."""

    field_name: str
    window: tuple
    by_degree: dict          # degree -> (dim, list of representative combos)
    by_block: dict           # block key + (degree,) -> dim
    bound: Bound | None = None

    def dims_by_degree(self) -> dict:
        return {n: d for n, (d, _) in sorted(self.by_degree.items()) if d}

    def table(self) -> dict:
        """(block..., degree) -> dim, nonzero cells only."""
        return {k: v for k, v in sorted(self.by_block.items()) if v}

    def total_dim(self) -> int:
        return sum(d for d, _ in self.by_degree.values())


class ChainComplexView:
    """A finite graded space with a degree +1 differential.

    ``spaces`` maps each chain degree to its ordered basis; ``diff`` maps a
    basis element to a combination in the next degree (missing = zero).  The
    block of an element defaults to (source, target); pass ``block_of`` to
    refine (the resolution complex also splits by internal degree).  If
    ``known_window`` is set, data outside it is unavailable and homology
    windows needing it are rejected.
    """

    def __init__(self, field, spaces: dict, diff: dict, block_of=None,
                 bound: Bound | None = None, known_window: tuple | None = None,
                 label: str = ""):
        self.field = field
        self.spaces = {n: list(els) for n, els in spaces.items() if els}
        self.diff = diff
        self.block_of = block_of or (lambda x: (x.source, x.target))
        self.bound = bound
        self.known_window = known_window
        self.label = label

    def support(self):
        return sorted(self.spaces)

    def dim(self) -> int:
        return sum(len(els) for els in self.spaces.values())

    def differential_of(self, x) -> dict:
        return self.diff.get(x, {})

    def check_d_squared(self):
        """Elements whose d(d(x)) is nonzero, with the residual combos."""
        bad = []
        for n in self.support():
            for x in self.spaces[n]:
                out = {}
                for y, c in self.differential_of(x).items():
                    for z, v in self.differential_of(y).items():
                        add_term(out, z, c * v)
                if out:
                    bad.append((x, out))
        return bad

    def block_split(self, n: int) -> dict:
        blocks = {}
        for x in self.spaces.get(n, []):
            blocks.setdefault(self.block_of(x), []).append(x)
        return blocks

    def block_matrix(self, n: int, block) -> SparseMatrix:
        dom = [x for x in self.spaces.get(n, []) if self.block_of(x) == block]
        cod = [y for y in self.spaces.get(n + 1, []) if self.block_of(y) == block]
        cod_index = {y: i for i, y in enumerate(cod)}
        entries = {}
        for j, x in enumerate(dom):
            for y, v in self.differential_of(x).items():
                i = cod_index.get(y)
                if i is None:
                    if self.block_of(y) != block:
                        raise HomologyError(
                            f"differential mixes blocks at {x.name} -> {y.name}")
                    raise HomologyError(f"differential target {y.name} not in complex")
                entries[(i, j)] = v
        return SparseMatrix(len(cod), len(dom), entries, self.field)


def homology(C: ChainComplexView, window: tuple | None = None) -> HomologyReport:
    """Blockwise homology with canonical representatives.

    The window defaults to the full support.  A restricted window needs one
    degree of padding inside the complex's known data on each side (or the
    complex must vanish there); otherwise the computation would clip a
    boundary and the report would be wrong, so it is rejected.
    """
    support = C.support()
    if window is None:
        if not support:
            return HomologyReport(C.field.name, (0, -1), {}, {}, C.bound)
        window = (support[0], support[-1])
    lo, hi = window
    if C.known_window is not None:
        klo, khi = C.known_window
        if lo - 1 < klo:
            raise HomologyError(
                f"window [{lo},{hi}] clips incoming boundary at degree {lo-1}")
        if hi + 1 > khi:
            raise HomologyError(
                f"window [{lo},{hi}] clips outgoing boundary at degree {hi+1}")

    bad = C.check_d_squared()
    if bad:
        x, res = bad[0]
        raise HomologyError(
            f"d^2 != 0 on {x.name} (and {len(bad)-1} more): residual {len(res)} terms")

    blocks = set()
    for n in range(lo - 1, hi + 2):
        blocks.update(C.block_split(n).keys())

    by_degree = {}
    by_block = {}
    for n in range(lo, hi + 1):
        reps_n = []
        dim_n = 0
        for b in sorted(blocks, key=lambda k: tuple(str(p) for p in k)):
            dom = [x for x in C.spaces.get(n, []) if C.block_of(x) == b]
            if not dom:
                by_block[b + (n,)] = 0
                continue
            mat = C.block_matrix(n, b)
            kernel = mat.kernel_basis()
            prev = C.block_matrix(n - 1, b)
            # image of d^{n-1} inside this block, as an echelon row space
            image = EchelonSpace(C.field)
            for colvec in prev.columns():
                if colvec:
                    image.add(colvec)
            reduced = EchelonSpace(C.field)
            for vec in kernel:
                reduced.add(image.reduce(vec))
            dim_b = reduced.dim
            by_block[b + (n,)] = dim_b
            dim_n += dim_b
            for row in reduced.rows:
                combo = {dom[i]: v for i, v in sorted(row.items())}
                reps_n.append(combo)
        by_degree[n] = (dim_n, reps_n)
    return HomologyReport(C.field.name, (lo, hi), by_degree, by_block, C.bound)


def mapping_cone(f_map: dict, dom: ChainComplexView, cod: ChainComplexView) -> ChainComplexView:
    """Cone of a chain map f: dom -> cod; acyclic iff f is a quasi-isomorphism."""
    if dom.field != cod.field:
        raise ValueError("mapping cone over mixed fields")
    wrap_d = {}
    wrap_c = {}
    spaces = {}
    for n, els in dom.spaces.items():
        for x in els:
            w = BasisElement(("coneD", x.key), x.source, x.target, x.degree - 1,
                             f"cd({x.name})")
            wrap_d[x] = w
            spaces.setdefault(n - 1, []).append(w)
    for n, els in cod.spaces.items():
        for y in els:
            w = BasisElement(("coneC", y.key), y.source, y.target, y.degree,
                             f"cc({y.name})")
            wrap_c[y] = w
            spaces.setdefault(n, []).append(w)
    diff = {}
    for x, w in wrap_d.items():
        out = {}
        for y, v in dom.differential_of(x).items():
            add_term(out, wrap_d[y], -v)
        for y, v in f_map.get(x, {}).items():
            add_term(out, wrap_c[y], v)
        if out:
            diff[w] = out
    for y, w in wrap_c.items():
        out = {}
        for z, v in cod.differential_of(y).items():
            add_term(out, wrap_c[z], v)
        if out:
            diff[w] = out
    return ChainComplexView(dom.field, spaces, diff, bound=dom.bound or cod.bound,
                            label=f"cone({dom.label}->{cod.label})")
