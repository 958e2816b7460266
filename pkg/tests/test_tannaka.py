import pytest
from fractions import Fraction

from kbundle.algebra import Poly
from kbundle.bundle import twist
from kbundle.tannaka import (
    DimCell,
    GroupGuess,
    PrimeUnusableError,
    TannakaError,
    TannakaFingerprint,
    classify_group,
    fingerprint,
    reduce_bundle_mod_p,
    reduce_poly_mod_p,
    section_dim_power,
    section_dim_table,
    selfdual_certify,
    selfdual_detect,
    tensor_dim_cell,
)

from sample_bundles import (
    P,
    RING_QQ3,
    double_rank2_bundle,
    dual_five_monomials,
    five_quadrics,
    five_quartics,
    rank2_degree0_bundle,
    sl3_bundle,
)


def test_engines_agree_on_small_cells():
    b = rank2_degree0_bundle()
    for q, k in ((1, 0), (1, 2), (2, 0), (2, 1)):
        linalg = section_dim_power(b, "tensor", q, k, "linalg")
        gb = section_dim_power(b, "tensor", q, k, "gb")
        staged = section_dim_power(b, "tensor", q, k, "staged")
        assert linalg == gb == staged
    d = dual_five_monomials()
    for k in (-3, -2, -1):
        assert section_dim_power(d, "tensor", 1, k, "linalg") == \
               section_dim_power(d, "tensor", 1, k, "staged")


def test_simplicity_of_normalized_quartics():
    b0 = five_quartics(twist=5)
    assert section_dim_power(b0, "tensor", 2, 0) == 1


def test_quartics_fourth_power_invariants():
    cell = tensor_dim_cell(five_quartics(twist=5), 4, 0, method="two_prime")
    assert cell.value == 3
    assert cell.certified


def test_sl3_third_power_invariant():
    cell = tensor_dim_cell(sl3_bundle(), 3, 0, method="two_prime")
    assert cell.value == 1


def test_exact_method_matches_two_prime():
    b0 = five_quartics(twist=5)
    exact = tensor_dim_cell(b0, 4, 0, method="exact")
    pref = tensor_dim_cell(b0, 4, 0, method="two_prime")
    assert exact.value == pref.value == 3
    assert exact.evidence == "exact-rational"
    assert pref.evidence.startswith("two-prime")


def test_single_prime_is_evidence_only():
    cell = tensor_dim_cell(five_quartics(twist=5), 4, 0, method=("prime", 1000003))
    assert cell.value == 3
    assert not cell.certified


def test_stable_degree_zero_bundle_has_no_sections():
    # dims[1] = 0 for every stable degree-0 bundle of rank >= 2
    for b0 in (rank2_degree0_bundle(), five_quartics(twist=5), sl3_bundle()):
        assert section_dim_power(b0, "tensor", 1, 0) == 0


def test_selfdual_detect_quartics():
    flag, reason = selfdual_detect(five_quartics(twist=5))
    assert flag
    assert "h0" in reason


def test_selfdual_detect_odd_rank_plane_syzygy():
    flag, reason = selfdual_detect(sl3_bundle())
    assert not flag
    assert "odd-rank" in reason


def test_selfdual_detect_rank_two():
    flag, reason = selfdual_detect(rank2_degree0_bundle())
    assert flag and "rank-2" in reason


def test_selfdual_detect_twist_invariant():
    base = selfdual_detect(five_quartics(twist=5))[0]
    shifted = selfdual_detect(five_quartics(twist=2))[0]
    assert base == shifted


def test_selfdual_slope_obstruction():
    flag, reason = selfdual_detect(dual_five_monomials())
    # mu = 5/2, so 2*mu = 5 is integral and the tensor test runs; rank 4 even
    assert isinstance(flag, bool)
    bundle = five_quartics(twist=5)
    assert selfdual_detect(bundle)[0]


def test_selfdual_certify_quartics():
    ok, h0 = selfdual_certify(five_quartics(twist=5))
    assert ok and h0 == 1


def test_selfdual_certify_rejects_unnormalized():
    with pytest.raises(TannakaError):
        selfdual_certify(five_quartics())


def test_selfdual_certify_double_bundle_not_simple():
    ok, h0 = selfdual_certify(double_rank2_bundle())
    assert h0 == 4


def test_fingerprint_rank2():
    fp = fingerprint(rank2_degree0_bundle(), "proven_stable", q_max=4)
    assert fp.rank == 2
    assert fp.dim_value(1) == 0
    assert fp.dim_value(2) == 1
    assert fp.simplicity.value == 1
    assert fp.selfdual
    guess = classify_group(fp)
    assert (guess.group, guess.degree) == ("SL", 2)


def test_fingerprint_requires_integral_slope():
    with pytest.raises(TannakaError):
        fingerprint(five_quadrics(), "proven_stable")


def test_classify_requires_proven_stability():
    fp = fingerprint(rank2_degree0_bundle(), "undetermined")
    with pytest.raises(TannakaError):
        classify_group(fp)


def synthetic_fp(rank, dims, selfdual, stability="proven_stable"):
    cells = {q: DimCell(v, "two-prime(1000003, 1000033)")
             for q, v in dims.items()}
    return TannakaFingerprint(rank=rank, normalizing_twist=0, dims=cells,
                              simplicity=cells.get(2, DimCell(1, "exact-rational")),
                              selfdual=selfdual, selfdual_reason="synthetic",
                              stability=stability)


def test_classify_rule_table():
    assert classify_group(synthetic_fp(4, {2: 1, 4: 3}, True)).label() == "Sp(4)"
    assert classify_group(synthetic_fp(6, {2: 1, 4: 3}, True)).label() == "Sp(6)"
    assert classify_group(synthetic_fp(3, {2: 0, 3: 1}, False)).label() == "SL(3)"
    guess = classify_group(synthetic_fp(4, {2: 1, 4: 4}, False))
    assert guess.group == "unknown"
    assert "type-A" in guess.justification


def test_classify_rejects_single_prime_evidence():
    cells = {3: DimCell(1, "single-prime(1000003)")}
    fp = TannakaFingerprint(rank=3, normalizing_twist=0, dims=cells,
                            simplicity=DimCell(0, "exact-rational"),
                            selfdual=False, selfdual_reason="",
                            stability="proven_stable")
    guess = classify_group(fp)
    assert guess.group == "unknown"
    assert "single-prime" in guess.justification


def test_fingerprint_quartics_full_pipeline():
    fp = fingerprint(five_quartics(twist=5), "proven_via_selfduality", q_max=4)
    assert fp.dim_value(2) == 1
    assert fp.dim_value(4) == 3
    assert fp.selfdual
    guess = classify_group(fp)
    assert guess.label() == "Sp(4)"


def test_reduce_poly_prime_unusable():
    p = Poly(RING_QQ3, {(1, 0, 0): Fraction(1, 5)})
    ring5 = reduce_bundle_mod_p(rank2_degree0_bundle(), 5).ring
    with pytest.raises(PrimeUnusableError):
        reduce_poly_mod_p(p, ring5)


def test_section_dim_table_gb_reuses_basis():
    b = dual_five_monomials()
    table = section_dim_table(b, "exterior", 2, range(-7, -3), engine="gb")
    direct = {k: section_dim_power(b, "exterior", 2, k, "linalg")
              for k in range(-7, -3)}
    assert table == direct
    assert table[-7] == 0 and table[-6] == 0
    assert table[-5] > 0


def test_staged_respects_m_greater_one():
    b = dual_five_monomials()
    for q, k in ((2, -7), (2, -6), (2, -5)):
        assert section_dim_power(b, "tensor", q, k, "staged") == \
               section_dim_power(b, "tensor", q, k, "linalg")
