"""Tests for the cohomology rings of BZ/4, the product, and the smash factor."""

import pytest

from glr44 import group_cohomology as gc


def sq2_labels(h, label):
    d, vec = h.vector_of(label)
    img = h.module.act_vector("Sq2", d, vec)
    return {h.module.basis(d + 2)[k] for k in range(h.module.dim(d + 2)) if (img >> k) & 1}


def test_bz4_sq2_values():
    h = gc.cohomology_Z4(20)
    assert sq2_labels(h, "T0") == {"T0^2"}
    assert sq2_labels(h, "T0^2") == set()
    assert sq2_labels(h, "x0") == set()
    assert sq2_labels(h, "x0T0") == {"x0T0^2"}
    for d in range(1, 15):
        assert h.dim(d) == 1


def test_product_sq2_values():
    h = gc.cohomology_product(16)
    assert sq2_labels(h, "T0T1") == {"T0^2T1", "T0T1^2"}
    assert sq2_labels(h, "T0^2T1^2") == set()
    assert sq2_labels(h, "x0x1") == set()


def test_smash_low_degrees():
    h = gc.reduced_smash(16)
    assert h.basis(2) == ("x0x1",)
    assert set(h.basis(3)) == {"x0T1", "T0x1"}
    assert set(h.basis(4)) == {"T0T1", "x0x1T1", "x0T0x1"}
    for n in range(2, 14):
        assert h.dim(n) == n - 1


def test_splitting_dimension_count():
    top = 20
    smash = gc.reduced_smash(top)
    factor = gc.cohomology_Z4(top)
    product = gc.cohomology_product(top)
    for d in range(1, top - 5):
        assert smash.dim(d) + 2 * factor.dim(d) == product.dim(d)


def test_cartan_matches_closed_formula():
    assert gc.cartan_matches_closed_formula(18)


def test_decompose_bz4():
    h = gc.cohomology_Z4(30)
    report = gc.decompose(h, gc.bz4_claims(22), max_degree=22)
    assert report.ok, report.failures


def test_decompose_smash():
    h = gc.reduced_smash(30)
    report = gc.decompose(h, gc.smash_claims(22), max_degree=22)
    assert report.ok, report.failures


def test_decompose_product():
    h = gc.cohomology_product(26)
    report = gc.decompose(h, gc.product_claims(18), max_degree=18)
    assert report.ok, report.failures


def test_decompose_rejects_wrong_kind():
    h = gc.reduced_smash(20)
    # A point claim on a class with nonzero Sq2 fails outright.
    report = gc.decompose(h, [(4, "point", "T0T1")], max_degree=4)
    assert not report.claims[0].ok
    # A bow claim on the double-bow generator misses two monomials.
    report2 = gc.decompose(
        h,
        [(4, "MB", "T0T1"), (4, "MB", "x0x1T1"), (4, "MB", "x0T0x1")],
        max_degree=4,
    )
    assert all(c.ok for c in report2.claims)
    assert not report2.exhaustive


def test_generator_counts_bz4():
    h = gc.cohomology_Z4(20)
    assert gc.generator_count(h, 1) == 1
    assert gc.generator_count(h, 2) == 1
    assert gc.generator_count(h, 4) == 0


def test_generator_counts_smash():
    h = gc.reduced_smash(30)
    assert gc.generator_count(h, 2) == 1
    # Module generators = summand bottoms plus the second generator each
    # double bow carries two degrees up: degree 4k has 2 bows + k double-bow
    # bottoms + (k-1) second generators from degree 4k-2, and so on.
    for k in (1, 2, 3, 4):
        assert gc.generator_count(h, 4 * k) == 2 * k + 1
        assert gc.generator_count(h, 4 * k + 1) == 2 * k
        assert gc.generator_count(h, 4 * k + 2) == 2 * k
        assert gc.generator_count(h, 4 * k + 3) == 2 * k + 2
    assert gc.generator_count(h, 3) == 2
    # Hand-enumerated quotients in degrees 5, 6, 7.
    assert gc.generator_count(h, 5) == 2
    assert gc.generator_count(h, 6) == 2
    assert gc.generator_count(h, 7) == 4


def test_smash_multiplicities_match_product_display():
    # Product multiplicities: degree 4k carries MB^2 + MSB^k, degree 4k+1
    # carries MSB^(2k), degree 4k+2 MB^2 + MSB^k, degree 4k+3 MB^4.
    mult = gc.summand_multiplicities(gc.product_claims(19))
    assert mult[(1, "point")] == 2
    assert mult[(2, "point")] == 1
    assert mult[(2, "MB")] == 2
    assert mult[(3, "MB")] == 4
    for k in (1, 2, 3, 4):
        assert mult[(4 * k, "MB")] == 2
        assert mult[(4 * k, "MSB")] == k
        if 4 * k + 1 <= 19:
            assert mult.get((4 * k + 1, "MSB"), 0) == 2 * k
        if 4 * k + 2 <= 19:
            assert mult[(4 * k + 2, "MB")] == 2
            assert mult[(4 * k + 2, "MSB")] == k
        if 4 * k + 3 <= 19:
            assert mult[(4 * k + 3, "MB")] == 4


def test_label_roundtrip():
    for label in ("x0", "T0^3", "x0T0x1T1^2", "T0T1", "x0x1"):
        assert gc.monomial_label(gc.parse_label(label)) == label
