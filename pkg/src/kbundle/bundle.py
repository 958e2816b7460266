"""Kernel-bundle data model: validation, exact numeric invariants, twisting,
and pullback along coordinate-power morphisms.

A kernel bundle on P^N is the kernel of a surjective map between splitting
bundles, recorded as twist lists a_1 >= ... >= a_n, b_1 >= ... >= b_m and an
m x n matrix whose (j,i) entry is zero or homogeneous of degree b_j - a_i.
Entry degrees are always dictated by the twist lists, never inferred from the
entries, so zero entries are meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import AlgebraError, Poly, PolyRing, substitute_powers
from .modgb import Caps, GradedFreeModule, NO_CAPS, is_irrelevant_primary


class BundleError(AlgebraError):
    pass


def module_from_twists(ring: PolyRing, twists: Sequence[int]) -> GradedFreeModule:
    """Sheaf twist a corresponds to module generator degree -a."""
    return GradedFreeModule(ring, tuple(-t for t in twists))


@dataclass(frozen=True)
class KernelBundle:
    """Presentation 0 -> E -> (+) O(a_i) -> (+) O(b_j) -> 0 on P^N."""

    ring: PolyRing
    twists_a: tuple
    twists_b: tuple
    matrix: tuple  # m rows, each a tuple of n Poly entries

    @property
    def N(self) -> int:
        return self.ring.nvars - 1

    @property
    def n(self) -> int:
        return len(self.twists_a)

    @property
    def m(self) -> int:
        return len(self.twists_b)

    @property
    def rank(self) -> int:
        return self.n - self.m

    def source_module(self) -> GradedFreeModule:
        return module_from_twists(self.ring, self.twists_a)

    def target_module(self) -> GradedFreeModule:
        return module_from_twists(self.ring, self.twists_b)

    def columns(self):
        """Sparse columns [(row index, nonzero entry), ...] per source index."""
        cols = []
        for i in range(self.n):
            col = [(j, self.matrix[j][i]) for j in range(self.m)
                   if not self.matrix[j][i].is_zero()]
            cols.append(col)
        return cols

    def entry(self, j: int, i: int) -> Poly:
        return self.matrix[j][i]

    def describe(self) -> str:
        return (f"kernel bundle on P^{self.N}: a={list(self.twists_a)}, "
                f"b={list(self.twists_b)}, rank {self.rank}")


@dataclass(frozen=True)
class SyzygyBundleSpec:
    """Syz(f_1, ..., f_n) twisted by c: the single-row kernel presentation."""

    ring: PolyRing
    generators: tuple
    twist: int = 0

    @property
    def degrees(self) -> tuple:
        return tuple(f.homogeneous_degree() for f in self.generators)


def make_kernel_bundle(ring: PolyRing, twists_a, twists_b, matrix,
                       canonicalize: bool = True) -> KernelBundle:
    """Assemble a bundle, optionally sorting both twist lists (matrix permuted
    consistently) so equal presentations compare equal."""
    twists_a = list(twists_a)
    twists_b = list(twists_b)
    rows = [list(r) for r in matrix]
    if len(rows) != len(twists_b) or any(len(r) != len(twists_a) for r in rows):
        raise BundleError("matrix shape does not match the twist lists")
    if canonicalize:
        col_perm = sorted(range(len(twists_a)), key=lambda i: (-twists_a[i], i))
        row_perm = sorted(range(len(twists_b)), key=lambda j: (-twists_b[j], j))
        twists_a = [twists_a[i] for i in col_perm]
        twists_b = [twists_b[j] for j in row_perm]
        rows = [[rows[j][i] for i in col_perm] for j in row_perm]
    return KernelBundle(ring, tuple(twists_a), tuple(twists_b),
                        tuple(tuple(r) for r in rows))


def from_syzygy(spec: SyzygyBundleSpec) -> KernelBundle:
    """Kernel presentation of Syz(f_1..f_n)(c): a_i = c - deg f_i, b = (c)."""
    ring = spec.ring
    if len(spec.generators) < 2:
        raise BundleError("a syzygy bundle needs at least two generators")
    for f in spec.generators:
        if f.is_zero() or not f.is_homogeneous():
            raise BundleError("syzygy generators must be nonzero homogeneous")
        if f.is_constant():
            raise BundleError("constant syzygy generator gives a split summand")
    a = [spec.twist - d for d in spec.degrees]
    return make_kernel_bundle(ring, a, (spec.twist,), [list(spec.generators)])


@dataclass
class ValidationProblem:
    code: str
    location: tuple
    message: str

    def __str__(self):
        where = f" at {self.location}" if self.location else ""
        return f"{self.code}{where}: {self.message}"


@dataclass
class ValidationReport:
    problems: list
    surjective: bool | None = None

    @property
    def ok(self) -> bool:
        return not self.problems


def _minor_determinant(bundle: KernelBundle, rows, cols) -> Poly:
    """Determinant by cofactor expansion; m is small for these presentations."""
    ring = bundle.ring
    if len(rows) == 1:
        return bundle.entry(rows[0], cols[0])
    total = ring.zero()
    r0 = rows[0]
    rest = rows[1:]
    for k, c in enumerate(cols):
        e = bundle.entry(r0, c)
        if e.is_zero():
            continue
        sub = _minor_determinant(bundle, rest, cols[:k] + cols[k + 1:])
        term = e * sub
        total = total + (term if k % 2 == 0 else -term)
    return total


def maximal_minors(bundle: KernelBundle):
    """All m x m minors of the presenting matrix."""
    rows = tuple(range(bundle.m))
    return [_minor_determinant(bundle, rows, cols)
            for cols in combinations(range(bundle.n), bundle.m)]


def validate(bundle: KernelBundle, check_surjectivity: bool = False,
             caps: Caps = NO_CAPS) -> ValidationReport:
    """Check the presentation invariants; optionally certify surjectivity.

    Surjectivity holds iff the ideal of all m x m minors has radical
    (X_0, ..., X_N), which is decided by the zero-dimensionality test.
    """
    problems = []
    n, m = bundle.n, bundle.m
    if not (n > m >= 1):
        problems.append(ValidationProblem(
            "shape", (), f"need n > m >= 1, got n={n}, m={m}"))
    if bundle.N < 2:
        problems.append(ValidationProblem(
            "dimension", (), f"need projective dimension N >= 2, got {bundle.N}"))
    if list(bundle.twists_a) != sorted(bundle.twists_a, reverse=True):
        problems.append(ValidationProblem(
            "unsorted", (), "twists a must be non-increasing"))
    if list(bundle.twists_b) != sorted(bundle.twists_b, reverse=True):
        problems.append(ValidationProblem(
            "unsorted", (), "twists b must be non-increasing"))
    for j in range(m):
        for i in range(n):
            p = bundle.matrix[j][i]
            if p.ring != bundle.ring:
                problems.append(ValidationProblem(
                    "ring-mismatch", (j, i), "entry in a different ring"))
                continue
            if p.is_zero():
                continue
            want = bundle.twists_b[j] - bundle.twists_a[i]
            if not p.is_homogeneous() or p.homogeneous_degree() != want:
                problems.append(ValidationProblem(
                    "degree-mismatch", (j, i),
                    f"entry must be homogeneous of degree {want}"))
                continue
            if p.is_constant():
                problems.append(ValidationProblem(
                    "constant-entry", (j, i),
                    "nonzero constant entries are not allowed"))
    surjective = None
    if check_surjectivity and not problems:
        surjective = is_irrelevant_primary(
            [p for p in maximal_minors(bundle) if not p.is_zero()] or
            [bundle.ring.zero()], caps)
        if not surjective:
            problems.append(ValidationProblem(
                "not-surjective", (),
                "the ideal of maximal minors is not irrelevant-primary"))
    return ValidationReport(problems, surjective)


def require_valid(bundle: KernelBundle, check_surjectivity: bool = False,
                  caps: Caps = NO_CAPS) -> KernelBundle:
    report = validate(bundle, check_surjectivity, caps)
    if not report.ok:
        raise BundleError("; ".join(str(p) for p in report.problems))
    return bundle


@dataclass(frozen=True)
class Invariants:
    """rank, c1, slope, c2 and discriminant, all exact."""

    rank: int
    c1: int
    mu: Fraction
    c2: Fraction
    delta: Fraction


def invariants(bundle: KernelBundle) -> Invariants:
    """Chern data from multiplicativity of the Chern polynomial on the
    presenting sequence:

        c1 = sum(a) - sum(b)
        c2 = (sum(a)^2 - sum(a^2))/2 + (sum(b)^2 + sum(b^2))/2 - sum(a)*sum(b)
        delta = 2*rank*c2 - (rank-1)*c1^2
    """
    a, b = bundle.twists_a, bundle.twists_b
    r = bundle.rank
    sa, sb = sum(a), sum(b)
    sa2 = sum(x * x for x in a)
    sb2 = sum(x * x for x in b)
    c1 = sa - sb
    c2 = Fraction(sa * sa - sa2, 2) + Fraction(sb * sb + sb2, 2) - sa * sb
    delta = 2 * r * c2 - (r - 1) * c1 * c1
    return Invariants(rank=r, c1=c1, mu=Fraction(c1, r), c2=c2, delta=delta)


def syzygy_delta(degrees: Sequence[int]) -> int:
    """Discriminant of a syzygy bundle directly from the generator degrees."""
    s = sum(degrees)
    return s * s - (len(degrees) - 1) * sum(d * d for d in degrees)


def twist(bundle: KernelBundle, c: int) -> KernelBundle:
    """Tensor by O(c): all twists shift by c, the matrix is unchanged."""
    return KernelBundle(bundle.ring,
                        tuple(a + c for a in bundle.twists_a),
                        tuple(b + c for b in bundle.twists_b),
                        bundle.matrix)


def pullback_powers(bundle: KernelBundle, k: int) -> KernelBundle:
    """Pullback along X_i -> X_i^k: twists scale by k, entries substitute."""
    if k < 1:
        raise BundleError(f"pullback power must be >= 1, got {k}")
    rows = tuple(tuple(substitute_powers(p, k) for p in row)
                 for row in bundle.matrix)
    return KernelBundle(bundle.ring,
                        tuple(a * k for a in bundle.twists_a),
                        tuple(b * k for b in bundle.twists_b),
                        rows)
