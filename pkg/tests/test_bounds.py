import random
from fractions import Fraction

import pytest

from kbundle.algebra import FieldSpec, make_ring, parse_many, parse_polynomial
from kbundle.bounds import (
    BoundsError,
    ClosureQuery,
    closure_threshold,
    frobenius_membership,
    genus_plane_curve,
    restriction_bound,
)

from sample_bundles import P


def test_flenner_example():
    # N=2, c=1, r=4: the inequality reduces to (k+1)/2 > 15/4, so k_min = 7
    b = restriction_bound("flenner", 2, 4, 0, c=1, certificate="semistable")
    assert b.k_min == 7
    assert b.predicate(7) and not b.predicate(6)


def test_langer_five_quartics():
    # r=4, delta=80: k > 60 + 1/12 forces k_min = 61
    b = restriction_bound("langer", 2, 4, 80, certificate="stable")
    assert b.k_min == 61
    assert b.predicate(61) and not b.predicate(60)


def test_langer_cotangent():
    b = restriction_bound("langer", 2, 2, 3, certificate="stable")
    assert b.k_min == 3


def test_langer_strong_requires_positive_characteristic():
    with pytest.raises(BoundsError):
        restriction_bound("langer_strong", 2, 4, 80, certificate="semistable")
    b = restriction_bound("langer_strong", 2, 4, 80, field_char=7,
                          certificate="semistable")
    assert b.predicate(b.k_min) and not b.predicate(b.k_min - 1)


def test_hypothesis_enforcement():
    with pytest.raises(BoundsError):
        restriction_bound("langer", 2, 4, 80, certificate="semistable")
    with pytest.raises(BoundsError):
        restriction_bound("flenner", 2, 4, 0, c=2, certificate="semistable")
    with pytest.raises(BoundsError):
        restriction_bound("flenner", 2, 4, 0, c=1, field_char=5,
                          certificate="semistable")


def test_boundary_reevaluation_randomized():
    rng = random.Random(61803)
    for _ in range(100):
        theorem = rng.choice(["flenner", "langer", "langer_strong"])
        N = rng.randint(2, 4)
        r = rng.randint(2, 6)
        delta = Fraction(rng.randint(0, 120))
        if theorem == "flenner":
            b = restriction_bound(theorem, N, r, delta, c=rng.randint(1, N - 1),
                                  certificate="semistable")
        elif theorem == "langer":
            b = restriction_bound(theorem, N, r, delta, certificate="stable")
        else:
            b = restriction_bound(theorem, N, r, delta, field_char=5,
                                  certificate="semistable")
        assert b.predicate(b.k_min)
        assert not b.predicate(b.k_min - 1)


FIVE_QUADRICS = ["X^2 - Y^2", "X^2 - Z^2", "X*Y", "X*Z", "Y*Z"]


def quadrics_query(**kw):
    gens = parse_many(FIVE_QUADRICS, make_ring(3))
    return ClosureQuery(generators=gens, **kw)


def test_closure_threshold_five_quadrics():
    rep = closure_threshold(quadrics_query(certificate="semistable"))
    assert rep.tau == Fraction(5, 2)
    assert rep.m_min == 3


def test_closure_threshold_integral_boundary_included():
    ring = make_ring(3)
    gens = parse_many(["X^2", "Y^2", "Z^2"], ring)
    rep = closure_threshold(ClosureQuery(generators=gens, certificate="semistable"))
    assert rep.tau == 3
    assert rep.m_min == 3


def test_closure_threshold_requires_certificate():
    with pytest.raises(BoundsError):
        closure_threshold(quadrics_query())


def test_closure_threshold_requires_primary():
    ring = make_ring(3)
    gens = parse_many(["X^2", "X*Y"], ring)
    with pytest.raises(BoundsError):
        closure_threshold(ClosureQuery(generators=gens, certificate="semistable"))


def test_closure_threshold_permutation_and_scaling():
    ring = make_ring(3)
    base = closure_threshold(ClosureQuery(
        generators=parse_many(["X^2", "Y^3", "Z^2"], ring),
        certificate="semistable")).tau
    perm = closure_threshold(ClosureQuery(
        generators=parse_many(["Z^2", "X^2", "Y^3"], ring),
        certificate="semistable")).tau
    assert base == perm
    doubled = closure_threshold(ClosureQuery(
        generators=parse_many(["X^4", "Y^6", "Z^4"], ring),
        certificate="semistable")).tau
    assert doubled == 2 * base


def ring7():
    return make_ring(3, FieldSpec(7))


def fp_query(gens, candidate=None, e=1, genus=None, plane_degree=None):
    ring = ring7()
    return ClosureQuery(
        generators=parse_many(gens, ring),
        strong_flag="user-asserted strong semistability",
        genus=genus,
        plane_curve_degree=plane_degree,
        candidate=parse_polynomial(candidate, ring) if candidate else None,
        frobenius_exponent=e,
    )


def test_frobenius_membership_ideal_element():
    # f = X^2 * Y lies in the ideal, so every Frobenius power stays inside
    q = fp_query(["X^2", "Y^2", "Z^2"], candidate="X^2*Y", genus=3)
    rep = frobenius_membership(q)
    assert rep.member


def test_frobenius_short_circuit_above_threshold():
    q = fp_query(["X^2", "Y^2", "Z^2"], candidate="X*Y*Z", genus=3)
    rep = frobenius_membership(q)
    assert rep.member and rep.decisive
    assert rep.via == "threshold"


def test_frobenius_non_member_below_threshold():
    q = fp_query(["X^2", "Y^2", "Z^2"], candidate="X*Y", genus=0)
    rep = frobenius_membership(q)
    assert not rep.member
    # q = 7 > 6g = 0: the test decides tight closure
    assert rep.decisive


def test_frobenius_regime_labels():
    # small prime, positive genus, e=1: q = 7 <= 6g and p <= 4(g-1)(n-1)^3
    q = fp_query(["X^2", "Y^2", "Z^2"], candidate="X*Y", genus=3)
    rep = frobenius_membership(q)
    assert not rep.decisive
    assert "necessary-condition" in rep.regime
    # raising the exponent past 6g makes it decisive: 7^2 = 49 > 18
    q2 = fp_query(["X^2", "Y^2", "Z^2"], candidate="X*Y", e=2, genus=3)
    rep2 = frobenius_membership(q2)
    assert rep2.decisive


def test_frobenius_monotone_in_generators():
    small = fp_query(["X^2", "Y^2", "Z^4"], candidate="Z^3", genus=3)
    large = fp_query(["X^2", "Y^2", "Z^4", "Z^3"], candidate="Z^3", genus=3)
    rep_small = frobenius_membership(small)
    rep_large = frobenius_membership(large)
    assert rep_large.member
    assert (not rep_small.member) or rep_large.member


def test_genus_helper():
    assert genus_plane_curve(1) == 0
    assert genus_plane_curve(3) == 1
    assert genus_plane_curve(4) == 3
    q = fp_query(["X^2", "Y^2", "Z^2"], candidate="X*Y", plane_degree=4)
    assert q.resolved_genus() == 3


def test_frobenius_requires_positive_characteristic():
    ring = make_ring(3)
    q = ClosureQuery(generators=parse_many(["X^2", "Y^2", "Z^2"], ring),
                     certificate="semistable", candidate=P("X*Y"))
    with pytest.raises(BoundsError):
        frobenius_membership(q)
