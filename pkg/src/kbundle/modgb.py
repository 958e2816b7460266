"""Graded free modules over the polynomial ring, Buchberger's algorithm with
syzygy extraction, graded-piece dimensions by two independent engines, and
ideal-theoretic tests.

Grading convention: a sheaf twist a corresponds to module generator degree -a,
so global sections of the kernel sheaf twisted by k are exactly the degree-k
piece of the kernel module.  Only this module speaks generator degrees; the
bundle layer converts at the boundary.

The module order is position-over-term: basis vectors compared by generator
index ascending (e_0 largest), ties broken by the ring's monomial order.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .algebra import (
    AlgebraError,
    Poly,
    PolyRing,
    mono_deg,
    mono_divides,
    mono_lcm,
    mono_mul,
    mono_quot,
    monomials_of_degree,
)


class GradingError(AlgebraError):
    """Matrix entry degree inconsistent with the source/target grading."""


class ResourceCapError(RuntimeError):
    """A configured resource cap was exceeded; the result is indeterminate."""


@dataclass
class Caps:
    """Resource guards.  Exceeding any cap aborts, never returns a wrong answer."""

    max_degree: Optional[int] = None
    max_pairs: Optional[int] = None
    timeout_seconds: Optional[float] = None
    _deadline: Optional[float] = field(default=None, repr=False)

    def start(self) -> "Caps":
        if self.timeout_seconds is not None and self._deadline is None:
            self._deadline = time.monotonic() + self.timeout_seconds
        return self

    def check_time(self):
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise ResourceCapError("timeout exceeded")

    def check_degree(self, d: int):
        if self.max_degree is not None and d > self.max_degree:
            raise ResourceCapError(
                f"degree cap exceeded ({d} > {self.max_degree})")

    def check_pairs(self, n: int):
        if self.max_pairs is not None and n > self.max_pairs:
            raise ResourceCapError(
                f"pair cap exceeded ({n} > {self.max_pairs})")


NO_CAPS = Caps()


@dataclass(frozen=True)
class GradedFreeModule:
    """Free module with one integer degree per basis vector."""

    ring: PolyRing
    generator_degrees: tuple

    @property
    def rank(self) -> int:
        return len(self.generator_degrees)

    def basis_element(self, i: int) -> "ModuleElement":
        mono = (0,) * self.ring.nvars
        return ModuleElement(self, {(i, mono): self.ring.field.one()})

    def term_key(self):
        mk = self.ring.mono_key
        return lambda t: (-t[0], mk(t[1]))


class ModuleElement:
    """Homogeneous-friendly element of a graded free module.

    Stored flat as {(component index, monomial): coefficient}.
    """

    __slots__ = ("module", "terms")

    def __init__(self, module: GradedFreeModule, terms: dict):
        self.module = module
        self.terms = {t: c for t, c in terms.items() if c}

    @classmethod
    def from_components(cls, module: GradedFreeModule, components: dict) -> "ModuleElement":
        terms = {}
        for i, poly in components.items():
            for m, c in poly.terms.items():
                terms[(i, m)] = c
        return cls(module, terms)

    def components(self) -> dict:
        """Sparse map component index -> Poly."""
        ring = self.module.ring
        out: dict = {}
        for (i, m), c in self.terms.items():
            out.setdefault(i, {})[m] = c
        return {i: Poly(ring, d) for i, d in out.items()}

    def is_zero(self) -> bool:
        return not self.terms

    def term_degree(self, t) -> int:
        return mono_deg(t[1]) + self.module.generator_degrees[t[0]]

    def is_homogeneous(self) -> bool:
        degs = {self.term_degree(t) for t in self.terms}
        return len(degs) <= 1

    def degree(self):
        """Module degree of a homogeneous element; None for zero."""
        degs = {self.term_degree(t) for t in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError("module element is not homogeneous")
        return degs.pop()

    def leading(self):
        if not self.terms:
            raise AlgebraError("zero element has no leading term")
        t = max(self.terms, key=self.module.term_key())
        return t, self.terms[t]

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        fld = self.module.ring.field
        out = dict(self.terms)
        for t, c in other.terms.items():
            s = fld.add(out.get(t, fld.zero()), c)
            if s:
                out[t] = s
            else:
                out.pop(t, None)
        return ModuleElement(self.module, out)

    def __neg__(self) -> "ModuleElement":
        fld = self.module.ring.field
        return ModuleElement(self.module, {t: fld.neg(c) for t, c in self.terms.items()})

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def scale(self, c) -> "ModuleElement":
        fld = self.module.ring.field
        if not c:
            return ModuleElement(self.module, {})
        return ModuleElement(self.module, {t: fld.mul(v, c) for t, v in self.terms.items()})

    def mul_monomial(self, mono: tuple, coeff=None) -> "ModuleElement":
        fld = self.module.ring.field
        coeff = fld.one() if coeff is None else coeff
        if not coeff:
            return ModuleElement(self.module, {})
        return ModuleElement(
            self.module,
            {(i, mono_mul(m, mono)): fld.mul(c, coeff)
             for (i, m), c in self.terms.items()})

    def monic(self) -> "ModuleElement":
        if not self.terms:
            return self
        _, lc = self.leading()
        return self.scale(self.module.ring.field.inv(lc))

    def __eq__(self, other):
        return (isinstance(other, ModuleElement) and self.module == other.module
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.module, frozenset(self.terms.items())))

    def __str__(self):
        comps = self.components()
        if not comps:
            return "0"
        return "(" + ", ".join(
            str(comps.get(i, self.module.ring.zero()))
            for i in range(self.module.rank)) + ")"

    def __repr__(self):
        return f"ModuleElement{self}"


# ---------------------------------------------------------------------------
# Buchberger with optional Schreyer-style cofactor tracking.
# ---------------------------------------------------------------------------

def _axpy(dst: dict, src: dict, mono: tuple, coeff, fld):
    """dst -= coeff * x^mono * src, on raw term dicts."""
    zero = fld.zero()
    for (i, m), c in src.items():
        t = (i, mono_mul(m, mono))
        s = fld.sub(dst.get(t, zero), fld.mul(c, coeff))
        if s:
            dst[t] = s
        else:
            dst.pop(t, None)


def _integerize(*dicts):
    """Scale term dicts jointly so all coefficients become integers.

    Returns the common positive multiplier applied.
    """
    from math import lcm
    dens = [c.denominator for d in dicts if d is not None
            for c in d.values() if isinstance(c, Fraction)]
    if not dens:
        return 1
    scale = lcm(*dens) if len(dens) > 1 else dens[0]
    if scale == 1:
        for d in dicts:
            if d is not None:
                for t in d:
                    if isinstance(d[t], Fraction):
                        d[t] = d[t].numerator
        return 1
    for d in dicts:
        if d is not None:
            for t in d:
                v = d[t] * scale
                d[t] = v.numerator if isinstance(v, Fraction) else v
    return scale


def _strip_content(*dicts):
    """Divide term dicts jointly by the gcd of all integer coefficients."""
    from math import gcd
    g = 0
    for d in dicts:
        if d is not None:
            for c in d.values():
                g = gcd(g, c)
    if g > 1:
        for d in dicts:
            if d is not None:
                for t in d:
                    d[t] //= g
    return g if g else 1


def _normal_form_terms_zz(terms: dict, rep, basis_by_comp: dict, module, caps: Caps,
                          true_scale: bool = True):
    """Fraction-free normal form over the rationals.

    Reducers are primitive integer vectors with positive leading coefficient;
    cross-multiplication keeps all arithmetic in the integers.  With true_scale
    the accumulated multiplier is divided out at the end so the exact normal
    form is returned; without it the result is a positive scalar multiple
    (enough for basis building, which re-normalizes anyway).
    """
    from math import gcd
    from .algebra import monomial_heap_key
    hkey = monomial_heap_key(module.ring.order)
    work = dict(terms)
    rep = dict(rep) if rep is not None else None
    multiplier = _integerize(work, rep)
    heap = [(i, hkey(m), (i, m)) for (i, m) in work]
    heapq.heapify(heap)
    done: dict = {}
    while heap:
        caps.check_time()
        _, _, t = heapq.heappop(heap)
        c = work.get(t)
        if not c:
            continue
        del work[t]
        comp, mono = t
        reducer = None
        for b in basis_by_comp.get(comp, ()):
            if mono_divides(b["ltmono"], mono):
                reducer = b
                break
        if reducer is None:
            done[t] = c
            continue
        q = mono_quot(mono, reducer["ltmono"])
        lead = reducer["ltcoeff"]
        g = gcd(c, lead)
        cc = c // g
        ll = lead // g
        if ll != 1:
            multiplier *= ll
            for d in (work, done, rep):
                if d is not None:
                    for tt in d:
                        d[tt] *= ll
        for (ri, rm), rc in reducer["terms"].items():
            tt = (ri, mono_mul(rm, q))
            if tt == t:
                continue
            s = work.get(tt, 0) - cc * rc
            if s:
                work[tt] = s
                heapq.heappush(heap, (tt[0], hkey(tt[1]), tt))
            else:
                work.pop(tt, None)
        if rep is not None:
            for (ri, rm), rc in reducer["rep"].items():
                tt = (ri, mono_mul(rm, q))
                s = rep.get(tt, 0) - cc * rc
                if s:
                    rep[tt] = s
                else:
                    rep.pop(tt, None)
    if true_scale and multiplier != 1:
        for d in (done, rep):
            if d is not None:
                for t in d:
                    d[t] = Fraction(d[t], multiplier)
    return done, rep


def _normal_form_terms(terms: dict, rep, basis_by_comp: dict, module, caps: Caps,
                       true_scale: bool = True):
    """Full normal form on raw term dicts; rep (raw dict or None) tracks cofactors.

    Terms are consumed largest-first through a lazy heap, so each reduction
    cancels the current maximum and the loop terminates degreewise.
    """
    from .algebra import monomial_heap_key
    fld = module.ring.field
    if fld.char == 0:
        return _normal_form_terms_zz(terms, rep, basis_by_comp, module, caps,
                                     true_scale)
    hkey = monomial_heap_key(module.ring.order)
    work = dict(terms)
    rep = dict(rep) if rep is not None else None
    heap = [(i, hkey(m), (i, m)) for (i, m) in work]
    heapq.heapify(heap)
    done: dict = {}
    while heap:
        caps.check_time()
        _, _, t = heapq.heappop(heap)
        c = work.get(t)
        if not c:
            continue
        del work[t]
        comp, mono = t
        reducer = None
        for b in basis_by_comp.get(comp, ()):
            if mono_divides(b["ltmono"], mono):
                reducer = b
                break
        if reducer is None:
            done[t] = c
            continue
        q = mono_quot(mono, reducer["ltmono"])
        c = fld.div(c, reducer["ltcoeff"])
        for (ri, rm), rc in reducer["terms"].items():
            tt = (ri, mono_mul(rm, q))
            if tt == t:
                continue
            s = fld.sub(work.get(tt, fld.zero()), fld.mul(rc, c))
            if s:
                work[tt] = s
                heapq.heappush(heap, (tt[0], hkey(tt[1]), tt))
            else:
                work.pop(tt, None)
        if rep is not None:
            _axpy(rep, reducer["rep"], q, c, fld)
    return done, rep


def _scale_terms(terms: dict, coeff, fld):
    return {t: fld.mul(c, coeff) for t, c in terms.items()}


def _combine_shifted(ta: dict, qa: tuple, ca, tb: dict, qb: tuple, cb, fld):
    """ca * x^qa * ta - cb * x^qb * tb on raw term dicts."""
    out = {}
    for (i, m), c in ta.items():
        v = fld.mul(c, ca)
        if v:
            out[(i, mono_mul(m, qa))] = v
    zero = fld.zero()
    for (i, m), c in tb.items():
        t = (i, mono_mul(m, qb))
        s = fld.sub(out.get(t, zero), fld.mul(c, cb))
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def _lead_term(terms: dict, module: GradedFreeModule):
    key = module.term_key()
    return max(terms, key=key)


def _reducer_entry(terms: dict, module: GradedFreeModule) -> dict:
    """Normalize a term dict into a reducer entry for the normal-form loops."""
    fld = module.ring.field
    lt = _lead_term(terms, module)
    if fld.char == 0:
        terms = dict(terms)
        _integerize(terms)
        _strip_content(terms)
        if terms[lt] < 0:
            for t in terms:
                terms[t] = -terms[t]
    else:
        terms = _scale_terms(terms, fld.inv(terms[lt]), fld)
    return {"terms": terms, "ltcomp": lt[0], "ltmono": lt[1],
            "ltcoeff": terms[lt], "rep": None}


def _gb_core(inputs, module: GradedFreeModule, caps: Caps, source: Optional[GradedFreeModule]):
    """Shared Buchberger driver on raw term dicts.

    With source set, every input carries its basis vector as cofactor and every
    S-pair (or dependent input) that reduces to zero contributes one homogeneous
    syzygy; processing every same-component pair keeps the output generating.
    """
    caps.start()
    fld = module.ring.field
    track = source is not None
    basis: list = []
    by_comp: dict = {}
    syzygies: list = []
    heap: list = []
    processed_pairs = 0

    def term_degree(t):
        return mono_deg(t[1]) + module.generator_degrees[t[0]]

    def add_element(terms, rep):
        nf, nfrep = _normal_form_terms(terms, rep, by_comp, module, caps,
                                       true_scale=False)
        if not nf:
            if track and nfrep:
                syzygies.append(nfrep)
            return
        lt = _lead_term(nf, module)
        caps.check_degree(term_degree(lt))
        if fld.char == 0:
            # primitive integer vector with positive leading coefficient
            nf = dict(nf)
            nfrep = dict(nfrep) if track else None
            _integerize(nf, nfrep)
            _strip_content(nf, nfrep)
            if nf[lt] < 0:
                for d in (nf, nfrep):
                    if d is not None:
                        for t in d:
                            d[t] = -d[t]
        else:
            inv = fld.inv(nf[lt])
            nf = _scale_terms(nf, inv, fld)
            nfrep = _scale_terms(nfrep, inv, fld) if track else None
        entry = {"terms": nf,
                 "ltcomp": lt[0],
                 "ltmono": lt[1],
                 "ltcoeff": nf[lt],
                 "rep": nfrep}
        idx = len(basis)
        for i, b in enumerate(basis):
            if b["ltcomp"] != lt[0]:
                continue
            lcm = mono_lcm(b["ltmono"], lt[1])
            deg = mono_deg(lcm) + module.generator_degrees[lt[0]]
            heapq.heappush(heap, (deg, i, idx))
        basis.append(entry)
        by_comp.setdefault(lt[0], []).append(entry)

    for gen, rep in inputs:
        if not gen.is_homogeneous():
            raise AlgebraError("generators must be homogeneous")
        rep_terms = dict(rep.terms) if (track and rep is not None) else None
        if gen.is_zero():
            if track and rep_terms:
                syzygies.append(rep_terms)
            continue
        add_element(dict(gen.terms), rep_terms)

    while heap:
        deg, i, j = heapq.heappop(heap)
        processed_pairs += 1
        caps.check_pairs(processed_pairs)
        caps.check_degree(deg)
        caps.check_time()
        a, b = basis[i], basis[j]
        lcm = mono_lcm(a["ltmono"], b["ltmono"])
        qa = mono_quot(lcm, a["ltmono"])
        qb = mono_quot(lcm, b["ltmono"])
        if fld.char == 0:
            from math import gcd
            g = gcd(a["ltcoeff"], b["ltcoeff"])
            ca = b["ltcoeff"] // g
            cb = a["ltcoeff"] // g
        else:
            ca = cb = fld.one()
        spair = _combine_shifted(a["terms"], qa, ca, b["terms"], qb, cb, fld)
        sprep = (_combine_shifted(a["rep"], qa, ca, b["rep"], qb, cb, fld)
                 if track else None)
        add_element(spair, sprep)

    syz_elements = [ModuleElement(source, s) for s in syzygies] if track else []
    return basis, syz_elements


def _reduce_basis(basis, module: GradedFreeModule, caps: Caps):
    """Minimalize and tail-reduce into the canonical reduced basis."""
    key = module.term_key()
    ordered = sorted(basis, key=lambda b: key((b["ltcomp"], b["ltmono"])))
    kept = []
    for b in ordered:
        if any(k["ltcomp"] == b["ltcomp"] and mono_divides(k["ltmono"], b["ltmono"])
               for k in kept):
            continue
        kept.append(b)
    reduced = []
    for b in kept:
        by_comp: dict = {}
        for k in kept:
            if k is not b:
                by_comp.setdefault(k["ltcomp"], []).append(k)
        nf, _ = _normal_form_terms(b["terms"], None, by_comp, module, caps,
                                   true_scale=False)
        reduced.append(ModuleElement(module, nf).monic())
    reduced.sort(key=lambda e: key(e.leading()[0]), reverse=True)
    return tuple(reduced)


@dataclass(frozen=True)
class GroebnerBasis:
    """Canonical reduced Groebner basis: monic, auto-reduced, unique per order."""

    module: GradedFreeModule
    elements: tuple

    def leading_terms(self):
        return tuple(e.leading()[0] for e in self.elements)

    def __len__(self):
        return len(self.elements)


def buchberger(generators: Sequence[ModuleElement], caps: Caps = NO_CAPS) -> GroebnerBasis:
    """Canonical reduced Groebner basis of the submodule the generators span."""
    gens = [g for g in generators]
    if not gens:
        raise AlgebraError("buchberger needs at least one generator (may be zero)")
    module = gens[0].module
    for g in gens:
        if g.module != module:
            raise AlgebraError("generators live in different modules")
    basis, _ = _gb_core([(g, None) for g in gens], module, caps, None)
    return GroebnerBasis(module, _reduce_basis(basis, module, caps))


def ideal_groebner(polys: Sequence[Poly], caps: Caps = NO_CAPS) -> GroebnerBasis:
    """Groebner basis of an ideal, as the rank-one module in degree zero."""
    if not polys:
        raise AlgebraError("empty generating set")
    ring = polys[0].ring
    module = GradedFreeModule(ring, (0,))
    gens = [ModuleElement.from_components(module, {0: p}) for p in polys]
    return buchberger(gens, caps)


@dataclass(frozen=True)
class SyzygyGenerators:
    """Homogeneous generating set of the kernel of a graded matrix."""

    module: GradedFreeModule          # the source module the syzygies live in
    elements: tuple

    def degrees(self):
        return tuple(e.degree() for e in self.elements)

    def __len__(self):
        return len(self.elements)


def initial_degree(syz: SyzygyGenerators):
    """Smallest t with a nonzero degree-t piece; None for the zero module.

    The ring is standard graded, so the minimum over any homogeneous
    generating set equals the true initial degree.
    """
    degs = [e.degree() for e in syz.elements if not e.is_zero()]
    return min(degs) if degs else None


def _validate_columns(columns, source: GradedFreeModule, target: GradedFreeModule):
    for i, col in enumerate(columns):
        for j, p in col:
            if p.ring != source.ring:
                raise GradingError(f"entry ({j},{i}) lives in the wrong ring")
            if p.is_zero():
                continue
            want = source.generator_degrees[i] - target.generator_degrees[j]
            if not p.is_homogeneous() or p.homogeneous_degree() != want:
                raise GradingError(
                    f"entry ({j},{i}) must be homogeneous of degree {want}")


def _matrix_columns(matrix) -> list:
    """Dense m x n matrix -> sparse columns [(row index, entry), ...]."""
    if not matrix:
        return []
    m = len(matrix)
    n = len(matrix[0])
    cols = []
    for i in range(n):
        col = []
        for j in range(m):
            p = matrix[j][i]
            if not p.is_zero():
                col.append((j, p))
        cols.append(col)
    return cols


def syzygy_module_columns(columns, source: GradedFreeModule,
                          target: GradedFreeModule,
                          caps: Caps = NO_CAPS) -> SyzygyGenerators:
    """Homogeneous generators of the kernel, via Buchberger with cofactors.

    Zero columns contribute their basis vectors directly; every S-pair or
    dependent input that reduces to zero yields one syzygy.
    """
    _validate_columns(columns, source, target)
    syzygies: list = []
    inputs = []
    for i, col in enumerate(columns):
        rep = source.basis_element(i)
        if not col:
            syzygies.append(rep)
            continue
        elt = ModuleElement.from_components(target, dict(col))
        inputs.append((elt, rep))
    if inputs:
        _, more = _gb_core(inputs, target, caps, source)
        syzygies.extend(more)
    key = source.term_key()
    ordered = tuple(sorted((s.monic() for s in syzygies),
                           key=lambda e: (e.degree(), key(e.leading()[0]))))
    return SyzygyGenerators(source, ordered)


def syzygy_module(matrix, source: GradedFreeModule, target: GradedFreeModule,
                  caps: Caps = NO_CAPS) -> SyzygyGenerators:
    """Kernel generators of the map given by a dense homogeneous matrix."""
    return syzygy_module_columns(_matrix_columns(matrix), source, target, caps)


def apply_columns(columns, target: GradedFreeModule, element: ModuleElement) -> ModuleElement:
    """Image of a source element under the map with the given sparse columns."""
    comps = element.components()
    out = ModuleElement(target, {})
    for i, poly in comps.items():
        for j, entry in columns[i]:
            prod = entry * poly
            out = out + ModuleElement.from_components(target, {j: prod})
    return out


# ---------------------------------------------------------------------------
# Graded piece dimensions: leading-term counting and exact linear algebra.
# ---------------------------------------------------------------------------

def _count_ideal_monomials(gens, d: int, nvars: int) -> int:
    """Monomials of degree d divisible by at least one generator.

    Inclusion-exclusion over lcms, pruned once the lcm degree exceeds d.
    """
    if d < 0 or not gens:
        return 0
    minimal = []
    for g in sorted(gens, key=mono_deg):
        if not any(mono_divides(h, g) for h in minimal):
            minimal.append(g)
    total = 0

    def rec(start, lcm, size):
        nonlocal total
        for k in range(start, len(minimal)):
            new = mono_lcm(lcm, minimal[k]) if size else minimal[k]
            e = d - mono_deg(new)
            if e < 0:
                continue
            total += (1 if size % 2 == 0 else -1) * comb(e + nvars - 1, nvars - 1)
            rec(k + 1, new, size + 1)

    rec(0, (0,) * nvars, 0)
    return total


def graded_piece_dim(gb: GroebnerBasis, t: int) -> int:
    """Dimension of the degree-t piece of the submodule a Groebner basis spans.

    By Macaulay's principle this equals the count of degree-t monomial terms
    in the leading-term module, computed per component.
    """
    module = gb.module
    nvars = module.ring.nvars
    by_component: dict = {}
    for e in gb.elements:
        (c, m), _ = e.leading(), None
        comp, mono = e.leading()[0]
        by_component.setdefault(comp, []).append(mono)
    return sum(
        _count_ideal_monomials(monos, t - module.generator_degrees[comp], nvars)
        for comp, monos in by_component.items())


def _echelon_kernel(vectors, fld, caps: Caps, want_vectors: bool = False):
    """Kernel dimension (and optionally combination vectors) of sparse columns.

    Each vector is a dict keyed by comparable row keys.  Pivots are chosen at
    the maximal row key, which makes every reduction strictly decrease the
    current maximum and guarantees termination.
    """
    caps.start()
    pivots: dict = {}
    kernel_dim = 0
    combos = []
    for idx, vec in enumerate(vectors):
        caps.check_time()
        v = dict(vec)
        combo = {idx: fld.one()} if want_vectors else None
        while v:
            lead = max(v)
            hit = pivots.get(lead)
            if hit is None:
                break
            pv, pcombo = hit
            c = v[lead]
            for t, pc in pv.items():
                s = fld.sub(v.get(t, fld.zero()), fld.mul(c, pc))
                if s:
                    v[t] = s
                else:
                    v.pop(t, None)
            if want_vectors:
                for t, pc in pcombo.items():
                    s = fld.sub(combo.get(t, fld.zero()), fld.mul(c, pc))
                    if s:
                        combo[t] = s
                    else:
                        combo.pop(t, None)
        if v:
            lead = max(v)
            inv = fld.inv(v[lead])
            v = {t: fld.mul(c, inv) for t, c in v.items()}
            if want_vectors:
                combo = {t: fld.mul(c, inv) for t, c in combo.items()}
            pivots[lead] = (v, combo)
        else:
            kernel_dim += 1
            if want_vectors:
                combos.append(combo)
    return kernel_dim, combos


def _degree_columns(columns, source: GradedFreeModule, target: GradedFreeModule, t: int):
    """Scalar columns of the degree-t piece of the map, with their labels.

    Column labels are (source component, monomial); row keys are
    (target component, monomial).
    """
    ring = source.ring
    labels = []
    vectors = []
    for i, col in enumerate(columns):
        d = t - source.generator_degrees[i]
        if d < 0:
            continue
        for mono in monomials_of_degree(ring.nvars, d):
            vec = {}
            for j, entry in col:
                for em, ec in entry.terms.items():
                    vec[(j, mono_mul(em, mono))] = ec
            labels.append((i, mono))
            vectors.append(vec)
    return labels, vectors


def kernel_dim_linalg(columns, source: GradedFreeModule, target: GradedFreeModule,
                      t: int, caps: Caps = NO_CAPS) -> int:
    """Dimension of the degree-t kernel piece by exact elimination.

    This is the independent oracle for section dimensions: it never touches
    Groebner bases, only the scalar matrix of the degree-t component.
    """
    _validate_columns(columns, source, target)
    _, vectors = _degree_columns(columns, source, target, t)
    dim, _ = _echelon_kernel(vectors, source.ring.field, caps)
    return dim


def kernel_dim_linalg_matrix(matrix, source: GradedFreeModule,
                             target: GradedFreeModule, t: int,
                             caps: Caps = NO_CAPS) -> int:
    return kernel_dim_linalg(_matrix_columns(matrix), source, target, t, caps)


def kernel_sections_linalg(columns, source: GradedFreeModule,
                           target: GradedFreeModule, t: int,
                           caps: Caps = NO_CAPS):
    """Degree-t kernel dimension together with explicit kernel elements."""
    _validate_columns(columns, source, target)
    labels, vectors = _degree_columns(columns, source, target, t)
    dim, combos = _echelon_kernel(vectors, source.ring.field, caps, want_vectors=True)
    elements = []
    for combo in combos:
        terms = {labels[idx]: c for idx, c in combo.items()}
        elements.append(ModuleElement(source, terms))
    return dim, elements


# ---------------------------------------------------------------------------
# Ideal-theoretic tests.
# ---------------------------------------------------------------------------

def normal_form_poly(f: Poly, gb: GroebnerBasis, caps: Caps = NO_CAPS) -> Poly:
    if gb.module.rank != 1:
        raise AlgebraError("polynomial normal form needs a rank-one module")
    elt = ModuleElement.from_components(gb.module, {0: f})
    by_comp: dict = {}
    for e in gb.elements:
        entry = _reducer_entry(dict(e.terms), gb.module)
        by_comp.setdefault(entry["ltcomp"], []).append(entry)
    nf, _ = _normal_form_terms(dict(elt.terms), None, by_comp, gb.module, caps)
    return ModuleElement(gb.module, nf).components().get(0, f.ring.zero())


def ideal_membership(f: Poly, gb: GroebnerBasis, caps: Caps = NO_CAPS) -> bool:
    """True iff the normal form of f against the ideal's basis vanishes."""
    return normal_form_poly(f, gb, caps).is_zero()


def is_irrelevant_primary(generators: Sequence[Poly], caps: Caps = NO_CAPS) -> bool:
    """True iff the homogeneous ideal has radical equal to (X_0, ..., X_N).

    Zero-dimensionality test: the leading-term ideal of the reduced basis must
    contain a pure power of every variable.  The unit ideal fails the test.
    """
    polys = [p for p in generators if not p.is_zero()]
    if not polys:
        return False
    for p in polys:
        if not p.is_homogeneous():
            raise AlgebraError("primary test requires homogeneous generators")
    gb = ideal_groebner(polys, caps)
    nvars = polys[0].ring.nvars
    covered = [False] * nvars
    for e in gb.elements:
        (_, mono), _ = e.leading()
        if mono_deg(mono) == 0:
            return False
        support = [k for k, exp in enumerate(mono) if exp > 0]
        if len(support) == 1:
            covered[support[0]] = True
    return all(covered)
