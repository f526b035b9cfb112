"""Closed-form d=2/d=3 classification tests.

Worked values used below:
  * sigma=(0,-1,0) is z^3 - z with roots -1,0,1: three distinct real roots,
    so the sign-flipped discriminant must be negative; plugging into the
    formula gives 4*(-1)^3 = -4.  sigma=(0,1,0) is z^3 + z (one real root),
    value +4.
  * mu=(1,0,1,0,1): the three 2x2 Hankel determinants are 1, -1, 0, so
    P8 = 4*1^3*(-1) - 1^2*0^2 = -4 exactly.
  * mu=(3,3,5,9,17) are the moments of amplitudes (1,1,1) at nodes (0,1,2)
    up to order 4.  The determinants are d1=6, d2=2, d3=12, so
    P8 = 4*216*2 - 36*144 = -3456, and the ratio vector (3mu1/mu0, 3mu2/mu0,
    mu3/mu0) = (3,5,3) gives K = 243 + 500 - 225 + 324 - 810 = 32, all exact
    in floating point.
  * mu=(3,-4,5,-6,0): the ratios (-4,5,-2) are the coefficients of
    (z-1)^2 (z-2), a cubic with a double root, so K = 0 exactly and with it
    P8 = -(mu0^4/27) d1^2 K = 0: both verdicts must abstain.
"""

import json
import pathlib

import numpy as np
import pytest

from prony import closed_forms as cf
from prony import curve_analysis as ca
from prony import poly_engine as pe
from prony import prony_line as pl
from prony.errors import DegenerateHankel
from prony.signal_model import Signal, compute_moments, elementary_symmetric

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def _domain_summary(mu):
    dom = pl.hyperbolic_domain(pl.line_params(mu))
    ends = sorted(ep.t0 for ep in dom.endpoints)
    all_bounded = all(np.isfinite(lo) and np.isfinite(hi)
                      for lo, hi in dom.intervals)
    return dom, ends, all_bounded


# ---------------------------------------------------------------------------
# discriminant_cubic_paper


def test_discriminant_worked_values():
    assert cf.discriminant_cubic_paper((0.0, -1.0, 0.0)) == -4.0
    assert cf.discriminant_cubic_paper((0.0, 0.0, 0.0)) == 0.0
    assert cf.discriminant_cubic_paper((0.0, 1.0, 0.0)) == 4.0


def test_discriminant_is_negative_standard():
    rng = np.random.default_rng(11)
    for _ in range(200):
        sigma = rng.uniform(-3, 3, 3)
        a = cf.discriminant_cubic_paper(sigma)
        b = pe.discriminant(pe.monic_from_sigma(sigma))
        assert abs(a + b) <= 1e-9 * max(1.0, abs(a), abs(b))


def test_discriminant_sign_detects_distinct_real_roots():
    rng = np.random.default_rng(12)
    for _ in range(100):
        roots = np.sort(rng.uniform(-2, 2, 3))
        if np.min(np.diff(roots)) < 1e-2:
            continue
        sigma = elementary_symmetric(roots).sigma
        assert cf.discriminant_cubic_paper(sigma) < 0.0


def test_discriminant_validation():
    with pytest.raises(ValueError):
        cf.discriminant_cubic_paper((1.0, 2.0))
    with pytest.raises(ValueError):
        cf.discriminant_cubic_paper((np.nan, 0.0, 0.0))


# ---------------------------------------------------------------------------
# P8 and K


def test_p8_hand_anchor():
    assert cf.P8_closed_form((1.0, 0.0, 1.0, 0.0, 1.0)) == -4.0


def test_p8_two_forms_agree():
    rng = np.random.default_rng(13)
    checked = 0
    while checked < 1000:
        mu = rng.uniform(-2, 2, 5)
        if abs(mu[0]) < 1e-3:
            continue
        checked += 1
        a = cf.P8_closed_form(mu)
        b = cf.P8_second_form(mu)
        assert abs(a - b) <= 1e-9 * max(abs(a), abs(b), 1e-300)


def test_p8_homogeneity_degree_8():
    rng = np.random.default_rng(14)
    for _ in range(50):
        mu = rng.uniform(-2, 2, 5)
        a = cf.P8_closed_form(2.0 * mu)
        b = 2.0 ** 8 * cf.P8_closed_form(mu)
        assert abs(a - b) <= 1e-12 * max(abs(a), abs(b), 1e-300)


def test_p8_and_k_validation():
    with pytest.raises(ValueError):
        cf.P8_closed_form((1.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        cf.P8_second_form((0.0, 1.0, 0.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        cf.K_value((0.0, 1.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        cf.K_value((1.0, 2.0))


def test_k_value_worked():
    assert cf.K_value((3.0, 3.0, 5.0, 9.0)) == 32.0
    assert cf.K_value((3.0, -4.0, 5.0, -6.0)) == 0.0


# ---------------------------------------------------------------------------
# quartic_Pmu


def test_quartic_leading_coefficient_is_p8():
    rng = np.random.default_rng(15)
    checked = 0
    while checked < 100:
        mu = rng.uniform(-2, 2, 5)
        try:
            q = cf.quartic_Pmu(mu)
        except DegenerateHankel:
            continue
        checked += 1
        assert q.degree <= 4
        p8 = cf.P8_closed_form(mu)
        if q.degree == 4:
            lead = q.coefficients[-1]
            assert abs(lead - p8) <= 1e-8 * max(abs(p8), 1e-300)


def test_quartic_homogeneity_sweep():
    # coefficient of t^k is homogeneous of degree 12-k in mu, and the whole
    # polynomial satisfies q_{2mu}(2t) = 2^12 q_mu(t)
    rng = np.random.default_rng(16)
    for _ in range(25):
        mu = rng.uniform(-2, 2, 5)
        try:
            q1 = cf.quartic_Pmu(mu)
            q2 = cf.quartic_Pmu(2.0 * mu)
        except DegenerateHankel:
            continue
        c1 = np.zeros(5)
        c2 = np.zeros(5)
        c1[: len(q1.coefficients)] = q1.coefficients
        c2[: len(q2.coefficients)] = q2.coefficients
        for k in range(5):
            want = 2.0 ** (12 - k) * c1[k]
            assert abs(c2[k] - want) <= 1e-9 * max(abs(want), np.max(np.abs(c2)))
        for t in (-1.3, 0.4, 2.1):
            a = q2(2.0 * t)
            b = 2.0 ** 12 * q1(t)
            assert abs(a - b) <= 1e-9 * max(abs(a), abs(b), 1e-300)


def test_quartic_roots_are_domain_endpoints():
    rng = np.random.default_rng(17)
    checked = 0
    while checked < 60:
        mu = rng.uniform(-2, 2, 5)
        try:
            line = pl.line_params(mu)
        except DegenerateHankel:
            continue
        if abs(line.detM) < 1e-2:
            continue
        checked += 1
        q = cf.quartic_Pmu(mu)
        roots = pe.real_roots(q)
        _, ends, _ = _domain_summary(mu)
        for t in ends:
            assert len(roots)
            assert min(abs(t - r) for r in roots) <= 1e-8 * max(1.0, abs(t))
        for r in roots:
            assert ends
            assert min(abs(t - r) for t in ends) <= 1e-8 * max(1.0, abs(r))


def test_quartic_validation():
    with pytest.raises(ValueError):
        cf.quartic_Pmu((1.0, 0.0, 1.0))
    with pytest.raises(DegenerateHankel):
        cf.quartic_Pmu((1.0, 1.0, 1.0, 1.0, 1.0))


# ---------------------------------------------------------------------------
# classify_d2


def test_classify_d2_worked_examples():
    c = cf.classify_d2((0.0, 1.0, 0.0))
    assert (c.d, c.collision, c.bounded) == (2, "yes", "no")
    assert c.evidence["detM"] == -1.0
    c = cf.classify_d2((1.0, 0.0, 1.0))
    assert (c.collision, c.bounded) == ("no", "no")
    c = cf.classify_d2((2.0, 0.0, 2.0))
    assert c.collision == "no"
    assert c.evidence["detM"] == 4.0


def test_classify_d2_indeterminate_zone():
    # detM = 5e-7 sits inside the 1e-6 * (|mu0 mu2| + mu1^2) = 2e-6 band
    c = cf.classify_d2((1.0, 1.0, 1.0 + 5e-7))
    assert c.collision == "indeterminate"
    assert c.bounded == "no"


def test_classify_d2_degenerate():
    with pytest.raises(DegenerateHankel):
        cf.classify_d2((0.0, 0.0, 0.0))
    with pytest.raises(DegenerateHankel):
        cf.classify_d2((1.0, 1.0, 1.0))


def test_classify_d2_against_numeric_oracle():
    rng = np.random.default_rng(18)
    checked = 0
    while checked < 200:
        mu = rng.uniform(-2, 2, 3)
        if abs(pl.hankel(mu).determinant) <= 1e-3:
            continue
        checked += 1
        c = cf.classify_d2(mu)
        assert c.collision in ("yes", "no")
        reports = ca.detect_collisions(mu)
        assert (c.collision == "yes") == (len(reports) > 0)
        _, _, all_bounded = _domain_summary(mu)
        assert not all_bounded  # bounded="no" must be backed by the domain


# ---------------------------------------------------------------------------
# classify_d3


def test_classify_d3_moment_anchor():
    mu = compute_moments(Signal(np.array([1.0, 1.0, 1.0]),
                                np.array([0.0, 1.0, 2.0])), 4)
    assert np.array_equal(mu.values, [3.0, 3.0, 5.0, 9.0, 17.0])
    c = cf.classify_d3(mu)
    assert c.evidence["P8"] == -3456.0
    assert c.evidence["K"] == 32.0
    # the curve through this signal never leaves the hyperbolic set: the
    # quartic has no real roots and the domain is a single unbounded interval
    q = cf.quartic_Pmu(mu)
    roots = pe.real_roots(q)
    _, ends, all_bounded = _domain_summary(mu)
    assert len(roots) == 0 and len(ends) == 0
    assert c.collision == "no"
    assert c.bounded == "no" and not all_bounded


def test_classify_d3_abstains_on_vanishing_p8():
    c = cf.classify_d3((3.0, -4.0, 5.0, -6.0, 0.0))
    assert c.collision == "indeterminate"
    assert c.bounded == "indeterminate"
    assert c.evidence["P8"] == 0.0
    assert not c.evidence["p8_ok"]
    assert c.evidence["domain_intervals"] is not None


def test_classify_d3_abstains_on_zero_leading_moment():
    c = cf.classify_d3((0.0, 1.0, 2.0, 5.0, 4.0))
    assert c.bounded == "indeterminate"
    assert not c.evidence["mu0_ok"]
    assert c.evidence["K"] is None
    assert c.collision in ("yes", "no")  # P8 = -8 still decides collision


def test_classify_d3_fixture_instances():
    data = json.loads((FIXTURES / "d3_classify.json").read_text())
    for group, expect_bounded in (("bounded", "yes"), ("unbounded", "no")):
        for rec in data[group]:
            mu = np.array(rec["mu"])
            c = cf.classify_d3(mu)
            assert c.bounded == expect_bounded
            assert c.collision == rec["collision"]
            assert abs(c.evidence["K"] - rec["K"]) <= 1e-12 * abs(rec["K"])
            assert abs(c.evidence["P8"] - rec["P8"]) <= 1e-12 * abs(rec["P8"])
            assert abs(c.evidence["detM"] - rec["detM"]) <= 1e-12 * abs(rec["detM"])
            _, ends, all_bounded = _domain_summary(mu)
            assert all_bounded == (expect_bounded == "yes")
            assert len(ends) == rec["n_endpoints"]


def test_classify_d3_evidence_shape():
    c = cf.classify_d3((3.0, 3.0, 5.0, 9.0, 17.0))
    for key in ("detM", "quartic_coefficients", "P8", "K", "real_root_count",
                "mu0_ok", "d1_ok", "p8_ok", "domain_intervals",
                "domain_all_bounded"):
        assert key in c.evidence
    assert len(c.evidence["quartic_coefficients"]) == 5
    # descending order: first entry is the interpolated t^4 coefficient
    lead = c.evidence["quartic_coefficients"][0]
    assert abs(lead - c.evidence["P8"]) <= 1e-8 * abs(c.evidence["P8"])


def test_classify_d3_degenerate():
    with pytest.raises(DegenerateHankel):
        cf.classify_d3((1.0, 1.0, 1.0, 1.0, 1.0))


def test_classification_validation():
    with pytest.raises(ValueError):
        cf.Classification(d=4, collision="yes", bounded="no", evidence={})
    with pytest.raises(ValueError):
        cf.Classification(d=2, collision="maybe", bounded="no", evidence={})
    with pytest.raises(ValueError):
        cf.Classification(d=2, collision="yes", bounded="sometimes",
                          evidence={})
