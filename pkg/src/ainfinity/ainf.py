"""A-infinity structures as finite structure-constant families, and their
verifiers: the defining quadratic identities, strict unitality with an
augmentation, morphism identities, and right modules.

Sign conventions.  Identities are stated at map level with the textbook sign
(-1)^{rs+t}; evaluating a tensor product of graded maps on graded elements
uses the Koszul rule, and this module is the single sign authority for the
whole codebase: when a map g of degree |g| passes elements of total degree d,
a sign (-1)^{|g| d} is introduced.  Every other construction (bar, cobar,
duals, transfer) routes its signs through the helpers here, and internal
consistency is enforced by d^2 = 0 certificates rather than hand derivations.

Structure constants are recorded on composable basis tuples only;
non-composable tuples are implicitly zero.  A structure built with
``enforce_blocks=False`` is treated k-linearly (no composability constraint);
this is needed for structures whose operations are not bimodule maps, which
can fail strict unitality over the vertex ring even when they are A-infinity
over the ground field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graded import BasisElement, GradedBimodule
from .fields import QQ
from .lincomb import add_term, add_scaled, format_combo


class StructureError(ValueError):
    """Degree, arity, composability, or block violations in input data."""


def koszul_sign(op_degree: int, passed_degree: int) -> int:
    return -1 if (op_degree % 2) and (passed_degree % 2) else 1


def composable_tuples(elements, n: int, enforce_blocks: bool = True):
    """All length-n tuples composable as a chain: source(x_i) = target(x_{i+1})."""
    if n == 0:
        yield ()
        return
    if not enforce_blocks:
        stack = [()]
        while stack:
            tup = stack.pop()
            if len(tup) == n:
                yield tup
            else:
                for x in elements:
                    stack.append(tup + (x,))
        return
    by_target = {}
    for x in elements:
        by_target.setdefault(x.target, []).append(x)

    def extend(tup):
        if len(tup) == n:
            yield tup
            return
        for x in by_target.get(tup[-1].source, []):
            yield from extend(tup + (x,))

    for x in elements:
        yield from extend((x,))


@dataclass(frozen=True)
class Failure:
    kind: str
    arity: int | None = None
    tup: tuple = ()
    residual: tuple = ()     # sorted ((name, coeff-as-str), ...) for determinism
    note: str = ""

    def describe(self) -> str:
        where = ",".join(x.name for x in self.tup) if self.tup else ""
        res = " + ".join(f"{c} {n}" for n, c in self.residual)
        parts = [self.kind]
        if self.arity is not None:
            parts.append(f"n={self.arity}")
        if where:
            parts.append(f"on ({where})")
        if res:
            parts.append(f"residual {res}")
        if self.note:
            parts.append(self.note)
        return " ".join(parts)


@dataclass
class CheckResult:
    passed: bool
    failures: tuple
    checked: str

    def __bool__(self):
        return self.passed

    def describe(self) -> str:
        if self.passed:
            return f"pass ({self.checked})"
        lines = [f"FAIL ({self.checked})"]
        lines += ["  " + f.describe() for f in self.failures]
        return "\n".join(lines)


def _residual_failure(kind, n, tup, residual, note=""):
    frozen = tuple((x.name, str(c)) for x, c in
                   sorted(residual.items(), key=lambda kv: kv[0].sort_key()))
    return Failure(kind, n, tup, frozen, note)


class AInfinityStructure:
    """Finitely supported operations m_n of degree 2-n on a graded bimodule."""

    def __init__(self, module: GradedBimodule, ops: dict, field=QQ,
                 arity_max: int | None = None, enforce_blocks: bool = True):
        self.module = module
        self.field = field
        self.enforce_blocks = enforce_blocks
        self.ops = {}
        for n, table in ops.items():
            clean = {}
            for tup, combo in table.items():
                combo = {x: c for x, c in combo.items() if c}
                if combo:
                    clean[tuple(tup)] = combo
            if clean:
                self.ops[n] = clean
        computed = max(self.ops, default=1)
        self.arity_max = arity_max if arity_max is not None else computed
        if computed > self.arity_max:
            raise StructureError(
                f"operation arity {computed} exceeds declared maximum {self.arity_max}")
        self.validate()

    def validate(self):
        index = self.module.index
        for n, table in self.ops.items():
            if n < 1:
                raise StructureError(f"operation arity {n} < 1")
            for tup, combo in table.items():
                if len(tup) != n:
                    raise StructureError(f"m_{n} keyed by a {len(tup)}-tuple")
                for x in tup:
                    if x not in index:
                        raise StructureError(f"unknown basis element {x.name} in m_{n}")
                if self.enforce_blocks:
                    for a, b in zip(tup, tup[1:]):
                        if a.source != b.target:
                            raise StructureError(
                                f"non-composable tuple ({','.join(t.name for t in tup)}) in m_{n}")
                want_deg = sum(x.degree for x in tup) + 2 - n
                for y, c in combo.items():
                    if y not in index:
                        raise StructureError(f"unknown output element {y.name} in m_{n}")
                    if y.degree != want_deg:
                        raise StructureError(
                            f"m_{n}({','.join(t.name for t in tup)}) output {y.name} "
                            f"has degree {y.degree}, expected {want_deg}")
                    if self.enforce_blocks:
                        if y.source != tup[-1].source or y.target != tup[0].target:
                            raise StructureError(
                                f"m_{n} output {y.name} leaves the "
                                f"({tup[-1].source},{tup[0].target}) block")

    def op_value(self, n: int, tup: tuple) -> dict:
        if n > self.arity_max:
            return {}
        table = self.ops.get(n)
        if not table:
            return {}
        return table.get(tup, _EMPTY)

    def is_minimal(self) -> bool:
        return 1 not in self.ops

    def with_field(self, new_field) -> "AInfinityStructure":
        ops = {n: {tup: {x: new_field.scalar(c) for x, c in combo.items()}
                   for tup, combo in table.items()}
               for n, table in self.ops.items()}
        return AInfinityStructure(self.module, ops, new_field, self.arity_max,
                                  self.enforce_blocks)


_EMPTY = {}


def stasheff_residual(A: AInfinityStructure, tup: tuple) -> dict:
    """Sum over r+s+t=n of (-1)^{rs+t} m_{r+1+t}(id^r (x) m_s (x) id^t) at tup."""
    n = len(tup)
    residual = {}
    N = A.arity_max
    for r in range(n):
        prefix_deg = sum(x.degree for x in tup[:r])
        for s in range(1, n - r + 1):
            t = n - r - s
            outer = r + 1 + t
            if s > N or outer > N:
                continue
            inner = A.op_value(s, tup[r:r + s])
            if not inner:
                continue
            sign = (-1) ** ((r * s + t) % 2) * koszul_sign(2 - s, prefix_deg)
            tail = tup[r + s:]
            head = tup[:r]
            for y, c in inner.items():
                out = A.op_value(outer, head + (y,) + tail)
                if out:
                    add_scaled(residual, out, sign * c)
    return residual


def stasheff_check(A: AInfinityStructure, report_all: bool = False) -> CheckResult:
    """Verify the defining identities for n = 1 .. 2N-1 on all composable tuples.

    For n >= 2N every summand needs s <= N and r+1+t <= N with r+s+t = n, which
    is impossible, so those identities hold automatically and are skipped.
    """
    A.validate()
    N = A.arity_max
    top = 2 * N - 1
    failures = []
    for n in range(1, top + 1):
        for tup in composable_tuples(A.module.basis, n, A.enforce_blocks):
            res = stasheff_residual(A, tup)
            if res:
                failures.append(_residual_failure("stasheff", n, tup, res))
                if not report_all:
                    return CheckResult(False, tuple(failures),
                                       f"identities n <= {top}; n >= {2*N} vacuous")
    failures.sort(key=lambda f: (f.arity, tuple(x.sort_key() for x in f.tup)))
    return CheckResult(not failures, tuple(failures),
                       f"identities n <= {top}; n >= {2*N} vacuous")


@dataclass
class UnitAugmentation:
    """Strict unit eta (vertex -> degree-0 basis idempotent) and augmentation
    eps (basis element -> its coefficient on the vertex idempotent)."""

    eta: dict
    eps: dict

    def unit_elements(self):
        return set(self.eta.values())

    def eps_of(self, x, field):
        return self.eps.get(x, field.zero)


def unitality_check(A: AInfinityStructure, U: UnitAugmentation) -> CheckResult:
    """Strict unitality plus augmentation axioms, on basis elements.

    Failures name the offending tuple: unit axioms for m_2, the vanishing of
    every other operation on tuples with a unit argument, eps o eta = id, and
    eps being a strict morphism.
    """
    field = A.field
    one = field.one
    failures = []
    units = U.unit_elements()

    for v, e in sorted(U.eta.items(), key=lambda kv: str(kv[0])):
        if e not in A.module.index:
            failures.append(Failure("unit-missing", None, (), (), f"eta({v}) not in basis"))
            continue
        if e.degree != 0 or e.source != v or e.target != v:
            failures.append(Failure("unit-shape", None, (e,), (),
                                    f"eta({v}) must be a degree-0 idempotent at {v}"))
        if U.eps_of(e, field) != one:
            failures.append(Failure("eps-eta", None, (e,), (),
                                    f"eps(eta({v})) != 1"))

    # m_2(eta (x) id) = id = m_2(id (x) eta)
    for x in A.module.basis:
        for (e, tup, side) in (((U.eta.get(x.target)), None, "left"),
                               ((U.eta.get(x.source)), None, "right")):
            if e is None:
                continue
            pair = (e, x) if side == "left" else (x, e)
            got = A.op_value(2, pair)
            if got != {x: one}:
                failures.append(_residual_failure(f"unit-axiom-{side}", 2, pair, got))
    if not A.enforce_blocks:
        # k-linear storage may carry off-vertex unit products; those must vanish
        for (x, y), combo in A.ops.get(2, {}).items():
            if x in units and x.target != y.target and combo:
                failures.append(_residual_failure("unit-axiom-left", 2, (x, y), combo))
            if y in units and y.source != x.source and combo:
                failures.append(_residual_failure("unit-axiom-right", 2, (x, y), combo))

    # m_n with a unit argument vanishes for n != 2
    for n, table in sorted(A.ops.items()):
        if n == 2:
            continue
        for tup, combo in table.items():
            if any(x in units for x in tup) and combo:
                failures.append(_residual_failure("unit-higher", n, tup, combo))

    # eps is a strict morphism: eps m_1 = 0, eps m_2 = mult_R (eps (x) eps), eps m_n = 0
    for n, table in sorted(A.ops.items()):
        for tup, combo in table.items():
            lhs = field.zero
            for y, c in combo.items():
                lhs = lhs + c * U.eps_of(y, field)
            if n == 2:
                x, y = tup
                rhs = field.zero
                if x.source == x.target and y.source == y.target and x.source == y.source:
                    rhs = U.eps_of(x, field) * U.eps_of(y, field)
                if lhs != rhs:
                    failures.append(Failure("eps-product", 2, tup, (),
                                            f"eps(m_2) = {lhs}, eps*eps = {rhs}"))
            elif lhs:
                failures.append(Failure("eps-higher", n, tup, (),
                                        f"eps(m_{n}) = {lhs} != 0"))

    failures.sort(key=lambda f: (f.kind, f.arity or 0,
                                 tuple(x.sort_key() for x in f.tup)))
    return CheckResult(not failures, tuple(failures),
                       "unit axioms, higher-unit vanishing, augmentation strictness")


class AInfinityAlgebra:
    """An A-infinity structure together with its strict unit and augmentation."""

    def __init__(self, structure: AInfinityStructure, unit_aug: UnitAugmentation,
                 label: str = ""):
        self.structure = structure
        self.unit_aug = unit_aug
        self.label = label
        self.bound = None

    @property
    def module(self):
        return self.structure.module

    @property
    def field(self):
        return self.structure.field

    @property
    def vertices(self):
        return self.module.vertices

    def reduced_basis(self):
        """Basis of the augmentation ideal: the non-unit basis elements.

        Requires the basis-adapted augmentation this codebase works with:
        eps vanishes off the designated unit idempotents.
        """
        units = self.unit_aug.unit_elements()
        for x in self.module.basis:
            if x not in units and self.unit_aug.eps.get(x):
                raise StructureError(
                    f"augmentation not basis-adapted: eps({x.name}) != 0")
        return [x for x in self.module.basis if x not in units]

    def with_field(self, new_field) -> "AInfinityAlgebra":
        ua = UnitAugmentation(dict(self.unit_aug.eta),
                              {x: new_field.scalar(c)
                               for x, c in self.unit_aug.eps.items()})
        return type(self)(self.structure.with_field(new_field), ua, self.label)


class DgAlgebra(AInfinityAlgebra):
    """Arity <= 2 specialization: differential m_1 and associative product m_2."""

    def __init__(self, structure, unit_aug, label="", certificates=None):
        if structure.arity_max > 2 or any(n > 2 for n in structure.ops):
            raise StructureError("dg algebra with operations above arity 2")
        super().__init__(structure, unit_aug, label)
        self.certificates = dict(certificates or {})

    def differential(self, x) -> dict:
        return self.structure.op_value(1, (x,))

    def product(self, x, y) -> dict:
        return self.structure.op_value(2, (x, y))

    def complex(self):
        from .linalg import ChainComplexView
        spaces = {}
        for x in self.module.basis:
            spaces.setdefault(x.degree, []).append(x)
        diff = {x: self.differential(x) for x in self.module.basis
                if self.differential(x)}
        return ChainComplexView(self.field, spaces, diff, label=self.label)


class AInfinityMorphism:
    """Components f_n of degree 1-n from domain tuples to codomain combinations."""

    def __init__(self, domain: AInfinityAlgebra, codomain: AInfinityAlgebra,
                 components: dict, label: str = ""):
        self.domain = domain
        self.codomain = codomain
        self.label = label
        self.components = {}
        for n, table in components.items():
            clean = {}
            for tup, combo in table.items():
                combo = {x: c for x, c in combo.items() if c}
                if combo:
                    clean[tuple(tup)] = combo
            if clean:
                self.components[n] = clean
        self.arity_max = max(self.components, default=1)
        self.validate()

    def validate(self):
        dom_index = self.domain.module.index
        cod_index = self.codomain.module.index
        for n, table in self.components.items():
            if n < 1:
                raise StructureError(f"morphism component arity {n} < 1")
            for tup, combo in table.items():
                if len(tup) != n:
                    raise StructureError(f"f_{n} keyed by a {len(tup)}-tuple")
                for x in tup:
                    if x not in dom_index:
                        raise StructureError(f"unknown domain element {x.name} in f_{n}")
                if self.domain.structure.enforce_blocks:
                    for a, b in zip(tup, tup[1:]):
                        if a.source != b.target:
                            raise StructureError(
                                f"non-composable tuple in f_{n}")
                want = sum(x.degree for x in tup) + 1 - n
                for y, c in combo.items():
                    if y not in cod_index:
                        raise StructureError(f"unknown codomain element {y.name} in f_{n}")
                    if y.degree != want:
                        raise StructureError(
                            f"f_{n}({','.join(t.name for t in tup)}) output {y.name} "
                            f"has degree {y.degree}, expected {want}")

    def is_strict(self) -> bool:
        return all(n == 1 for n in self.components)

    def component(self, n: int, tup: tuple) -> dict:
        table = self.components.get(n)
        if not table:
            return {}
        return table.get(tup, _EMPTY)

    def f1_map(self) -> dict:
        return dict(self.components.get(1, {}))


def _compositions(n: int, max_part: int):
    """Ordered compositions of n with parts <= max_part."""
    if n == 0:
        yield ()
        return
    for first in range(1, min(n, max_part) + 1):
        for rest in _compositions(n - first, max_part):
            yield (first,) + rest


def morphism_residual(f: AInfinityMorphism, tup: tuple) -> dict:
    """LHS - RHS of the morphism identity at a composable domain tuple."""
    n = len(tup)
    dom = f.domain.structure
    cod = f.codomain.structure
    residual = {}

    # LHS: sum (-1)^{rs+t} f_{r+1+t} (id^r (x) m_s (x) id^t)
    for r in range(n):
        prefix_deg = sum(x.degree for x in tup[:r])
        for s in range(1, n - r + 1):
            t = n - r - s
            outer = r + 1 + t
            if s > dom.arity_max or outer > f.arity_max:
                continue
            inner = dom.op_value(s, tup[r:r + s])
            if not inner:
                continue
            sign = (-1) ** ((r * s + t) % 2) * koszul_sign(2 - s, prefix_deg)
            for y, c in inner.items():
                out = f.component(outer, tup[:r] + (y,) + tup[r + s:])
                if out:
                    add_scaled(residual, out, sign * c)

    # RHS: sum (-1)^omega m_p (f_{i_1} (x) ... (x) f_{i_p})
    for parts in _compositions(n, f.arity_max):
        p = len(parts)
        if p <= cod.arity_max:
            omega = 0
            for a in range(p):
                for b in range(a + 1, p):
                    omega += parts[a] * parts[b]
            for j in range(p - 1):
                omega += parts[j] * (p - 1 - j)
            sign = (-1) ** (omega % 2)
            partial = [((), 1)]
            pos = 0
            passed_deg = 0
            dead = False
            for i_j in parts:
                block = tup[pos:pos + i_j]
                kos = koszul_sign(1 - i_j, passed_deg)
                vals = f.component(i_j, block)
                if not vals:
                    dead = True
                    break
                partial = [(tp + (y,), coeff * c * kos)
                           for tp, coeff in partial for y, c in vals.items()]
                passed_deg += sum(x.degree for x in block)
                pos += i_j
            if dead:
                continue
            for tp, coeff in partial:
                out = cod.op_value(p, tp)
                if out:
                    add_scaled(residual, out, -(sign * coeff))
    return residual


def morphism_check(f: AInfinityMorphism) -> CheckResult:
    """Morphism identities on all composable tuples, plus unit and augmentation
    preservation when both sides carry them."""
    f.validate()
    dom, cod = f.domain, f.codomain
    top = max(f.arity_max + dom.structure.arity_max - 1,
              cod.structure.arity_max * f.arity_max)
    failures = []
    for n in range(1, top + 1):
        for tup in composable_tuples(dom.module.basis, n,
                                     dom.structure.enforce_blocks):
            res = morphism_residual(f, tup)
            if res:
                failures.append(_residual_failure("morphism", n, tup, res))

    one = cod.field.one
    units_dom = dom.unit_aug.unit_elements()
    for v in dom.vertices:
        e_dom = dom.unit_aug.eta.get(v)
        e_cod = cod.unit_aug.eta.get(v)
        if e_dom is None or e_cod is None:
            continue
        if f.component(1, (e_dom,)) != {e_cod: one}:
            failures.append(Failure("unit-preservation", 1, (e_dom,), (),
                                    f"f_1(eta({v})) != eta'({v})"))
    for n, table in sorted(f.components.items()):
        for tup, combo in table.items():
            if n >= 2 and any(x in units_dom for x in tup) and combo:
                failures.append(_residual_failure("unit-strictness", n, tup, combo))
            eps_out = cod.field.zero
            for y, c in combo.items():
                eps_out = eps_out + c * cod.unit_aug.eps_of(y, cod.field)
            eps_in = dom.unit_aug.eps_of(tup[0], dom.field) if n == 1 else dom.field.zero
            if eps_out != eps_in:
                failures.append(Failure("augmentation-preservation", n, tup, (),
                                        f"eps(f_{n}) = {eps_out}, expected {eps_in}"))

    failures.sort(key=lambda fl: (fl.kind, fl.arity or 0,
                                  tuple(x.sort_key() for x in fl.tup)))
    return CheckResult(not failures, tuple(failures),
                       f"identities n <= {top}; unit/augmentation preservation")


def identity_morphism(A: AInfinityAlgebra) -> AInfinityMorphism:
    one = A.field.one
    return AInfinityMorphism(A, A, {1: {(x,): {x: one} for x in A.module.basis}},
                             label="id")


class AInfinityModule:
    """A right module: actions m_n^M : M (x) A^{(x)(n-1)} -> M of degree 2-n."""

    def __init__(self, space: GradedBimodule, algebra: AInfinityAlgebra,
                 actions: dict, strict_unital: bool = True, label: str = ""):
        self.space = space
        self.algebra = algebra
        self.strict_unital = strict_unital
        self.label = label
        self.actions = {}
        for n, table in actions.items():
            clean = {}
            for tup, combo in table.items():
                combo = {x: c for x, c in combo.items() if c}
                if combo:
                    clean[tuple(tup)] = combo
            if clean:
                self.actions[n] = clean
        self.arity_max = max(self.actions, default=1)
        self.validate()

    def validate(self):
        m_index = self.space.index
        a_index = self.algebra.module.index
        for n, table in self.actions.items():
            for tup, combo in table.items():
                if len(tup) != n:
                    raise StructureError(f"m^M_{n} keyed by a {len(tup)}-tuple")
                if tup[0] not in m_index:
                    raise StructureError(f"unknown module element {tup[0].name}")
                for x in tup[1:]:
                    if x not in a_index:
                        raise StructureError(f"unknown algebra element {x.name}")
                for a, b in zip(tup, tup[1:]):
                    if a.source != b.target:
                        raise StructureError(f"non-composable module tuple in m^M_{n}")
                want = sum(x.degree for x in tup) + 2 - n
                for y, c in combo.items():
                    if y not in m_index:
                        raise StructureError(f"unknown module output {y.name}")
                    if y.degree != want:
                        raise StructureError(
                            f"m^M_{n} output {y.name} has degree {y.degree}, "
                            f"expected {want}")

    def action_value(self, n: int, tup: tuple) -> dict:
        table = self.actions.get(n)
        if not table:
            return {}
        return table.get(tup, _EMPTY)

    def module_tuples(self, n: int):
        alg = self.algebra.module.basis
        by_target = {}
        for x in alg:
            by_target.setdefault(x.target, []).append(x)

        def extend(tup):
            if len(tup) == n:
                yield tup
                return
            for x in by_target.get(tup[-1].source, []):
                yield from extend(tup + (x,))

        for m in self.space.basis:
            yield from extend((m,))


def module_stasheff_residual(M: AInfinityModule, tup: tuple) -> dict:
    n = len(tup)
    A = M.algebra.structure
    residual = {}
    for r in range(n):
        prefix_deg = sum(x.degree for x in tup[:r])
        for s in range(1, n - r + 1):
            t = n - r - s
            outer = r + 1 + t
            if outer > M.arity_max:
                continue
            if r == 0:
                inner = M.action_value(s, tup[:s])
            else:
                if s > A.arity_max:
                    continue
                inner = A.op_value(s, tup[r:r + s])
            if not inner:
                continue
            sign = (-1) ** ((r * s + t) % 2) * koszul_sign(2 - s, prefix_deg)
            for y, c in inner.items():
                out = M.action_value(outer, tup[:r] + (y,) + tup[r + s:])
                if out:
                    add_scaled(residual, out, sign * c)
    return residual


def module_stasheff_check(M: AInfinityModule) -> CheckResult:
    """Module identities (leftmost factor in M), plus strict unitality."""
    M.validate()
    top = M.arity_max - 1 + max(M.arity_max, M.algebra.structure.arity_max)
    failures = []
    for n in range(1, top + 1):
        for tup in M.module_tuples(n):
            res = module_stasheff_residual(M, tup)
            if res:
                failures.append(_residual_failure("module-stasheff", n, tup, res))
    if M.strict_unital:
        one = M.algebra.field.one
        units = M.algebra.unit_aug.unit_elements()
        for m in M.space.basis:
            e = M.algebra.unit_aug.eta.get(m.source)
            if e is None:
                continue
            got = M.action_value(2, (m, e))
            if got != {m: one}:
                failures.append(_residual_failure("module-unit-axiom", 2, (m, e), got))
        for n, table in sorted(M.actions.items()):
            if n == 2:
                continue
            for tup, combo in table.items():
                if any(x in units for x in tup[1:]) and combo:
                    failures.append(_residual_failure("module-unit-higher", n, tup, combo))
    failures.sort(key=lambda fl: (fl.kind, fl.arity or 0,
                                  tuple(x.sort_key() for x in fl.tup)))
    return CheckResult(not failures, tuple(failures),
                       f"module identities n <= {top}")


def format_residual(res: dict) -> str:
    return format_combo(res)
