"""The semistability decision engine.

The driver applies Hoppe's criterion: E is semistable iff for every exterior
rank q below the rank and every integer k strictly below -q*mu(E) the twisted
exterior power (wedge^q E)(k) has no nonzero global section.  Sections are
read off the kernel presentations of the exterior powers, through either the
Groebner engine (syzygy module, initial degree) or the linear-algebra engine
(exact elimination degree by degree); a numeric slope gate handles line-bundle
quotients, which covers the top exterior rank.

All slope comparisons are exact rational arithmetic.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, floor
from typing import Optional

from .algebra import AlgebraError, monomial_family_gcd, mono_deg
from .bundle import (
    KernelBundle,
    SyzygyBundleSpec,
    invariants,
    pullback_powers,
    require_valid,
    twist,
    validate,
)
from .modgb import (
    Caps,
    NO_CAPS,
    ModuleElement,
    apply_columns,
    initial_degree,
    is_irrelevant_primary,
    kernel_dim_linalg,
    kernel_sections_linalg,
    syzygy_module_columns,
)
from .powers import exterior_power_matrix
from . import tannaka


class StabilityError(AlgebraError):
    pass


class InternalCheckError(RuntimeError):
    """Two supposedly-equivalent computations disagreed; never a verdict."""


MODES = ("semistability", "stability_evidence")
ENGINES = ("gb", "linalg", "both")


@dataclass
class PowerCheck:
    """Outcome of one exterior rank q.

    relation "<" means a section strictly below the threshold -q*mu exists
    (witnessed), "=" means the first section sits exactly at the threshold,
    ">" means no section up to window_top (the scanned boundary).
    """

    q: int
    alpha: Optional[int]
    threshold: Fraction
    relation: str
    window_top: int
    window_low: int


@dataclass
class Witness:
    q: int
    degree: int
    element: ModuleElement
    verified: bool = False


@dataclass
class StabilityReport:
    verdict: str                      # "unstable" | "semistable"
    stability: Optional[str]          # meaningful only when semistable
    rank: int
    mu: Fraction
    gate: str                         # "pass_strict" | "pass" | "fail"
    mode: str
    engine: str
    per_power: list = field(default_factory=list)
    witness: Optional[Witness] = None
    criteria_trace: list = field(default_factory=list)

    @property
    def is_semistable(self) -> bool:
        return self.verdict == "semistable"

    @property
    def is_stable_proven(self) -> bool:
        return self.stability in ("proven_stable", "proven_via_selfduality")


def numeric_slope_gate(bundle: KernelBundle) -> str:
    """Compare the smallest source twist with the slope, exactly.

    a_n > mu rules out all maps to line bundles contradicting stability;
    a_n = mu still rules out those contradicting semistability; a_n < mu is a
    violation only when the presentation dualizes to a minimal resolution.
    """
    mu = invariants(bundle).mu
    a_min = bundle.twists_a[-1]
    if a_min > mu:
        return "pass_strict"
    if a_min == mu:
        return "pass"
    return "fail"


def _verify_witness(pres, element: ModuleElement, degree: int,
                    threshold: Fraction) -> bool:
    if element.is_zero() or not element.is_homogeneous():
        return False
    if element.degree() != degree or not Fraction(degree) < threshold:
        return False
    image = apply_columns(pres.columns_list(), pres.target_module(), element)
    return image.is_zero()


def _scan_exterior(bundle: KernelBundle, q: int, mu: Fraction, mode: str,
                   engine: str, caps: Caps):
    """Check one exterior rank; returns (PowerCheck, witness element or None)."""
    threshold = -q * mu
    semi_top = ceil(threshold) - 1
    top = floor(threshold) if mode == "stability_evidence" else semi_top
    pres = exterior_power_matrix(bundle, q)
    low = -max(pres.source_twists)
    source = pres.source_module()
    target = pres.target_module()
    cols = pres.columns_list()

    def result(alpha, relation, element=None):
        check = PowerCheck(q, alpha, threshold, relation, top, low)
        return check, element

    if low > top:
        return result(None, ">")

    if engine == "gb":
        syz = syzygy_module_columns(cols, source, target, caps)
        alpha = initial_degree(syz)
        if alpha is None or alpha > top:
            return result(None, ">")
        element = min((e for e in syz.elements if e.degree() == alpha),
                      key=lambda e: sorted(e.terms))
        if Fraction(alpha) < threshold:
            return result(alpha, "<", element)
        return result(alpha, "=", element)

    if engine == "linalg":
        for k in range(low, top + 1):
            dim = kernel_dim_linalg(cols, source, target, k, caps)
            if dim == 0:
                continue
            _, elements = kernel_sections_linalg(cols, source, target, k, caps)
            element = elements[0]
            if Fraction(k) < threshold:
                return result(k, "<", element)
            return result(k, "=", element)
        return result(None, ">")

    raise StabilityError(f"unknown engine {engine!r}")


def _scan_with_engines(bundle, q, mu, mode, engine, caps):
    if engine != "both":
        return _scan_exterior(bundle, q, mu, mode, engine, caps)
    check_gb, elt_gb = _scan_exterior(bundle, q, mu, mode, "gb", caps)
    check_la, elt_la = _scan_exterior(bundle, q, mu, mode, "linalg", caps)
    if (check_gb.alpha, check_gb.relation) != (check_la.alpha, check_la.relation):
        raise InternalCheckError(
            f"engine mismatch at q={q}: gb found ({check_gb.alpha}, "
            f"{check_gb.relation}), linalg found ({check_la.alpha}, "
            f"{check_la.relation})")
    return check_la, elt_la


def hoppe_check(bundle: KernelBundle, engine: str = "linalg",
                mode: str = "stability_evidence",
                caps: Caps = NO_CAPS) -> StabilityReport:
    """Decide semistability; in stability_evidence mode also gather the
    boundary data that can prove stability.

    The loop runs q = 1 .. rank-2 (with a lone q = 1 for rank <= 3) when the
    slope gate passes, since the gate covers rank-1 quotients and hence the
    top exterior rank; when the gate fails, the loop extends to rank-1 and a
    found section is returned as an explicit verified witness.
    """
    if mode not in MODES:
        raise StabilityError(f"unknown mode {mode!r}")
    if engine not in ENGINES:
        raise StabilityError(f"unknown engine {engine!r}")
    require_valid(bundle)
    caps.start()
    inv = invariants(bundle)
    mu = inv.mu
    r = inv.rank
    gate = numeric_slope_gate(bundle)
    trace = [f"slope gate: a_n = {bundle.twists_a[-1]} vs mu = {mu} -> {gate}"]
    if gate == "fail":
        q_list = list(range(1, r))
        trace.append(
            "gate failed: scanning every exterior rank (including rank-1) "
            "for an explicit destabilizing section; the no-constant-entries "
            "contract stands in for minimality of the dual resolution")
    else:
        q_list = list(range(1, max(1, r - 2) + 1))
        if r >= 3:
            trace.append(
                f"q = {r - 1} is covered by the slope gate (maps to line "
                "bundles cannot destabilize)")
    if r == 2:
        q_list = [1]
        trace.append("rank 2: sections of E itself decide both semistability "
                     "and stability")
    elif r == 3 and gate != "fail":
        trace.append("rank 3: sections of E plus the slope gate decide "
                     "semistability")

    report = StabilityReport(verdict="semistable", stability=None, rank=r,
                             mu=mu, gate=gate, mode=mode, engine=engine,
                             criteria_trace=trace)

    for q in q_list:
        check, element = _scan_with_engines(bundle, q, mu, mode, engine, caps)
        report.per_power.append(check)
        if check.relation == "<":
            pres = exterior_power_matrix(bundle, q)
            witness = Witness(q, check.alpha, element)
            witness.verified = _verify_witness(pres, element, check.alpha,
                                               check.threshold)
            if not witness.verified:
                raise InternalCheckError(
                    f"witness at q={q}, degree {check.alpha} failed verification")
            report.verdict = "unstable"
            report.stability = None
            report.witness = witness
            trace.append(
                f"q = {q}: section of (wedge^{q} E)({check.alpha}) with "
                f"{check.alpha} < {check.threshold}; unstable")
            return report

    if gate == "fail":
        trace.append(
            "gate failed but no exterior-power section violates the "
            "thresholds: the dualized presentation is not minimal; the "
            "exhaustive exterior checks prove semistability")

    # stability grading
    if mode == "semistability":
        report.stability = "undetermined"
        trace.append("stability not assessed in semistability mode")
        return report

    equalities = [c.q for c in report.per_power if c.relation == "="]
    if r == 2:
        if equalities:
            report.stability = "not_stable"
            trace.append("rank 2: a section at the boundary degree shows the "
                         "bundle is strictly semistable")
        else:
            report.stability = "proven_stable"
            trace.append("rank 2: no sections at or below -mu; stable")
        return report

    if not equalities and gate == "pass_strict":
        report.stability = "proven_stable"
        trace.append("all exterior ranks strict and slope gate strict: stable")
    else:
        report.stability = "undetermined"
        if equalities:
            trace.append(
                f"sections at the boundary for q in {equalities}: stability "
                "undetermined (the boundary criterion is sufficient only)")
        if gate != "pass_strict":
            trace.append("slope gate not strict: stability undetermined")
    return report


# ---------------------------------------------------------------------------
# Combinatorial and numerical criteria.
# ---------------------------------------------------------------------------

@dataclass
class BrennerResult:
    verdict: str                  # "stable" | "semistable" | "inconclusive"
    bound: Fraction               # right-hand side -sum(d_i)/(n-1)
    violations: list              # (indices, d_J, lhs) with lhs > bound
    has_equality: bool


def brenner_monomial(spec: SyzygyBundleSpec, caps: Caps = NO_CAPS,
                     max_generators: int = 25) -> BrennerResult:
    """Subset criterion for monomial families.

    For every subset J of at least two generators compare
    (deg gcd(J) - sum_J d_i) / (|J| - 1) with -sum_I d_i / (n - 1): all below
    gives semistable, strictly below gives stable, any excess is inconclusive
    (the criterion is sufficient only).
    """
    gens = spec.generators
    n = len(gens)
    if n > max_generators:
        raise StabilityError(
            f"{n} generators exceed the subset enumeration cap {max_generators}")
    for g in gens:
        if not g.is_monomial():
            raise StabilityError("the monomial criterion needs monomial generators")
    if not is_irrelevant_primary(list(gens), caps):
        raise StabilityError("the monomial family must be irrelevant-primary")
    degrees = spec.degrees
    bound = Fraction(-sum(degrees), n - 1)
    violations = []
    has_equality = False
    for size in range(2, n + 1):
        for subset in combinations(range(n), size):
            caps.check_time()
            d_j = mono_deg(monomial_family_gcd([gens[i] for i in subset]))
            lhs = Fraction(d_j - sum(degrees[i] for i in subset), size - 1)
            if lhs > bound:
                violations.append((subset, d_j, lhs))
            elif lhs == bound and size < n:
                # the full subset always lands exactly on the bound (a primary
                # family has trivial gcd) and corresponds to the bundle itself,
                # not a proper subsheaf, so it never obstructs strictness
                has_equality = True
    if violations:
        verdict = "inconclusive"
    elif has_equality:
        verdict = "semistable"
    else:
        verdict = "stable"
    return BrennerResult(verdict, bound, violations, has_equality)


@dataclass
class NumericCriterionResult:
    verdict: str
    detail: str


def bohnhorst_spindler(bundle: KernelBundle) -> NumericCriterionResult:
    """Twist criterion for rank-N bundles on P^N in characteristic 0.

    Applicable when b_j > a_j for j = 1..m with both lists sorted; then the
    bundle is semistable (stable) iff a_n >= (>) mu, and unstable otherwise.
    """
    if bundle.ring.field.char != 0:
        return NumericCriterionResult(
            "not_applicable", "requires characteristic 0")
    if bundle.rank != bundle.N:
        return NumericCriterionResult(
            "not_applicable",
            f"rank {bundle.rank} differs from the dimension {bundle.N}")
    for j in range(bundle.m):
        if not bundle.twists_b[j] > bundle.twists_a[j]:
            return NumericCriterionResult(
                "not_applicable",
                f"interlacing fails: b_{j + 1} = {bundle.twists_b[j]} is not "
                f"greater than a_{j + 1} = {bundle.twists_a[j]}")
    mu = invariants(bundle).mu
    a_min = bundle.twists_a[-1]
    if a_min > mu:
        return NumericCriterionResult("stable", f"a_n = {a_min} > mu = {mu}")
    if a_min == mu:
        return NumericCriterionResult(
            "semistable", f"a_n = {a_min} = mu (semistable, not stable)")
    return NumericCriterionResult("unstable", f"a_n = {a_min} < mu = {mu}")


def parameter_criterion(N: int, degrees) -> NumericCriterionResult:
    """Degree test for syzygy bundles of N+1 homogeneous parameters on P^N:
    sum of the N smallest degrees at least (N-1) times the largest gives
    semistable, strictly larger gives stable.
    """
    degrees = sorted(degrees)
    if len(degrees) != N + 1:
        raise StabilityError(
            f"need exactly N+1 = {N + 1} degrees, got {len(degrees)}")
    lhs = sum(degrees[:-1])
    rhs = (N - 1) * degrees[-1]
    if lhs > rhs:
        return NumericCriterionResult("stable", f"{lhs} > {rhs}")
    if lhs == rhs:
        return NumericCriterionResult("semistable", f"{lhs} = {rhs}")
    return NumericCriterionResult("inconclusive", f"{lhs} < {rhs}")


# ---------------------------------------------------------------------------
# Self-duality upgrade and the orchestrating driver.
# ---------------------------------------------------------------------------

def selfdual_upgrade(bundle: KernelBundle, report: StabilityReport,
                     caps: Caps = NO_CAPS) -> StabilityReport:
    """Upgrade a semistable-undetermined verdict to stable via self-duality.

    For a degree-0 normalized bundle of rank 4 or 6: if the only boundary
    sections sit at exterior ranks 2 and rank-2, the bundle carries a
    certified nondegenerate pairing (so it is isomorphic to its dual), and
    h^0(E (x) E) = 1 (simple), then a slope-0 stable subsheaf could only have
    rank 2, would be self-dual itself, and would induce a non-scalar
    endomorphism; hence none exists and the bundle is stable.
    """
    trace = list(report.criteria_trace)

    def unchanged(reason):
        trace.append(f"self-duality upgrade not applied: {reason}")
        return dataclasses.replace(report, criteria_trace=trace)

    if report.verdict != "semistable" or report.stability != "undetermined":
        return unchanged("only semistable bundles with undetermined stability "
                         "are eligible")
    if report.mode != "stability_evidence":
        return unchanged("boundary data requires stability_evidence mode")
    if bundle.ring.field.char != 0:
        return unchanged("requires characteristic 0")
    r = report.rank
    if r not in (4, 6):
        return unchanged(f"rank {r} is outside the decided cases (4 and 6)")
    mu = report.mu
    if mu.denominator != 1:
        return unchanged(f"slope {mu} admits no degree-0 normalizing twist")
    if report.gate != "pass_strict":
        return unchanged("the slope gate is not strict, so a corank-1 "
                         "boundary subsheaf is not excluded")
    allowed = {2, r - 2}
    equalities = {c.q for c in report.per_power if c.relation == "="}
    if not equalities <= allowed:
        return unchanged(
            f"boundary sections at q = {sorted(equalities - allowed)} are not "
            "of the self-dual pairing type")
    bundle0 = twist(bundle, -int(mu))
    ok, h0 = tannaka.selfdual_certify(bundle0, caps)
    if h0 != 1:
        return unchanged(f"h0(E0 (x) E0) = {h0} != 1: not simple")
    if not ok:
        return unchanged("the section of E0 (x) E0 is a degenerate pairing")
    trace.append(
        "self-duality upgrade: certified nondegenerate pairing (E0 = E0*), "
        "h0(E0 (x) E0) = 1, boundary sections only at q in "
        f"{sorted(equalities)}; stable")
    return dataclasses.replace(report, stability="proven_via_selfduality",
                               criteria_trace=trace)


@dataclass
class Analysis:
    bundle: KernelBundle
    report: StabilityReport
    criteria: dict = field(default_factory=dict)
    pullback: Optional["Analysis"] = None


def _check_criteria_consistency(report: StabilityReport, criteria: dict):
    for name, res in criteria.items():
        verdict = res.verdict
        if verdict in ("stable", "semistable") and report.verdict == "unstable":
            raise InternalCheckError(
                f"{name} says {verdict} but the exterior-power driver says "
                "unstable")
        if verdict == "unstable" and report.verdict == "semistable":
            raise InternalCheckError(
                f"{name} says unstable but the exterior-power driver says "
                "semistable")
        if verdict == "stable" and report.stability == "not_stable":
            raise InternalCheckError(
                f"{name} says stable but the driver proved strict "
                "semistability")


def analyze_bundle(bundle: KernelBundle, *, engine: str = "linalg",
                   mode: str = "stability_evidence",
                   upgrade_selfdual: bool = True,
                   via_pullback: Optional[int] = None,
                   spec: Optional[SyzygyBundleSpec] = None,
                   run_criteria: bool = True,
                   caps: Caps = NO_CAPS) -> Analysis:
    """Full driver: slope gate + exterior loop, auxiliary criteria, the
    self-duality upgrade, and stability descent along coordinate-power
    pullbacks (stability of the pullback implies stability downstairs)."""
    report = hoppe_check(bundle, engine, mode, caps)
    analysis = Analysis(bundle=bundle, report=report)

    if run_criteria:
        criteria = {}
        bs = bohnhorst_spindler(bundle)
        if bs.verdict != "not_applicable":
            criteria["bohnhorst_spindler"] = bs
        if spec is not None:
            if all(g.is_monomial() for g in spec.generators):
                try:
                    criteria["brenner_monomial"] = brenner_monomial(spec, caps)
                except StabilityError:
                    pass
            if len(spec.generators) == bundle.N + 1 and \
                    is_irrelevant_primary(list(spec.generators), caps):
                criteria["parameter_criterion"] = parameter_criterion(
                    bundle.N, spec.degrees)
        _check_criteria_consistency(report, criteria)
        analysis.criteria = criteria
        for name, res in criteria.items():
            report.criteria_trace.append(f"{name}: {res.verdict}")
        if report.is_semistable and report.stability == "undetermined":
            decided = {res.verdict for res in criteria.values()}
            if "stable" in decided:
                report.stability = "proven_stable"
                report.criteria_trace.append(
                    "stability from an auxiliary criterion")

    if upgrade_selfdual and report.is_semistable \
            and report.stability == "undetermined":
        analysis.report = report = selfdual_upgrade(bundle, report, caps)

    if via_pullback and report.is_semistable \
            and report.stability == "undetermined":
        pb_bundle = pullback_powers(bundle, via_pullback)
        pb = analyze_bundle(pb_bundle, engine=engine, mode=mode,
                            upgrade_selfdual=upgrade_selfdual,
                            via_pullback=None, spec=None,
                            run_criteria=run_criteria, caps=caps)
        analysis.pullback = pb
        if pb.report.is_stable_proven:
            report.stability = pb.report.stability
            report.criteria_trace.append(
                f"stability descends from the coordinate-power pullback "
                f"(k = {via_pullback}): a destabilizing subsheaf would pull "
                f"back to one upstairs ({pb.report.stability})")
        elif pb.report.is_semistable:
            report.criteria_trace.append(
                f"pullback (k = {via_pullback}) is semistable but its "
                "stability is also undetermined")
        else:
            report.criteria_trace.append(
                f"pullback (k = {via_pullback}) is unstable; this gives no "
                "information downstairs")
    return analysis
