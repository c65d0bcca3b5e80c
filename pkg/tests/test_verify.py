import math

import jsonschema
import numpy as np
import pytest

from fockzeros import (
    ALSProductEvaluator,
    LatticeProductEvaluator,
    REPORT_SCHEMA,
    ShellFamily,
    admissible_range,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    envelope_verify_als,
    envelope_verify_lattice,
    gen_als,
    gen_gamma_nu,
    gen_integer_ray,
    gen_zeros_of_s,
    lindelof_check,
    make_point_set,
    perturb,
    sector_lemma_demo,
    zero_excess_demo,
)


def _cond(report, name):
    for c in report.conditions:
        if c.name == name:
            return c
    raise AssertionError(f"no condition named {name!r} in {report.theorem}")


def _check_report_doc(report):
    doc = report.to_json_dict()
    jsonschema.validate(doc, REPORT_SCHEMA)
    names = {c["name"] for c in doc["conditions"]}
    assert set(doc["configs"]) <= names
    txt = report.to_text()
    assert ("verdict: PASS" in txt) == report.verdict
    return doc


@pytest.fixture(scope="module")
def lattice_half():
    return gen_gamma_nu(0.5, 256.0)


@pytest.fixture(scope="module")
def lattice_zero():
    return gen_gamma_nu(0.0, 256.0)


# --------------------------------------------------------------------------
# admissibility window
# --------------------------------------------------------------------------

def test_admissible_range():
    lo, hi = admissible_range(0.0)
    assert lo == pytest.approx(2.0) and hi == math.inf
    assert admissible_range(0.5) == pytest.approx((4.0 / 3.0, 4.0))
    assert admissible_range(1.0) == pytest.approx((1.0, 2.0))


# --------------------------------------------------------------------------
# density window criterion
# --------------------------------------------------------------------------

def test_theorem1_flip_nu_half(lattice_half):
    # window for (nu, p) = (0.5, 2) is (-1/2, 1/2); 2 pi c crosses it
    ok = check_theorem1(perturb(lattice_half, ("inverse-square", 0.05)), 2.0)
    assert ok.verdict
    bad = check_theorem1(perturb(lattice_half, ("inverse-square", 0.15)), 2.0)
    assert not bad.verdict
    assert not _cond(bad, "upper density proxy below window ceiling").passed
    # the proxies should sit near 2 pi c
    c = _cond(ok, "upper density proxy below window ceiling")
    assert c.value == pytest.approx(2.0 * math.pi * 0.05, rel=0.1)
    assert c.threshold == pytest.approx(0.5)
    _check_report_doc(ok)
    _check_report_doc(bad)


def test_theorem1_flip_nu_zero_p3(lattice_zero):
    # window for (nu, p) = (0, 3) is (-2/3, 1/3)
    ok = check_theorem1(perturb(lattice_zero, ("inverse-square", 0.04)), 3.0)
    assert ok.verdict
    bad = check_theorem1(perturb(lattice_zero, ("inverse-square", 0.07)), 3.0)
    assert not bad.verdict
    assert _cond(ok, "upper density proxy below window ceiling"
                 ).threshold == pytest.approx(1.0 / 3.0)


def test_theorem1_inadmissible_p(lattice_half):
    rep = check_theorem1(perturb(lattice_half, "zero"), 8.0)
    assert not rep.verdict
    assert not _cond(rep, "p admissible").passed


def test_theorem1_small_radius_guard():
    s = perturb(gen_gamma_nu(0.5, 64.0), "zero")
    with pytest.raises(ValueError, match="radius >= 198"):
        check_theorem1(s, 2.0)


# --------------------------------------------------------------------------
# shell-sum criterion
# --------------------------------------------------------------------------

def test_theorem2_flip():
    base = gen_als(120.0)
    ok = check_theorem2(perturb(base, ("shell", 0.2)), 2.0)
    assert ok.verdict
    c = _cond(ok, "shell-sum slope proxy below threshold")
    assert c.threshold == pytest.approx(0.25)
    assert c.value == pytest.approx(0.2, rel=0.1)
    bad = check_theorem2(perturb(base, ("shell", 0.3)), 2.0)
    assert not bad.verdict
    _check_report_doc(ok)
    _check_report_doc(bad)


def test_theorem2_p_validation():
    s = perturb(gen_als(30.0), "zero")
    with pytest.raises(ValueError):
        check_theorem2(s, 1.0)


# --------------------------------------------------------------------------
# inverse-square summability
# --------------------------------------------------------------------------

def test_theorem3_integers_converge():
    rep = check_theorem3(make_point_set(gen_integer_ray(1.0e4).points,
                                        family="custom"))
    assert rep.verdict
    total = _cond(rep, "inverse-square sum").value
    assert total == pytest.approx(math.pi ** 2 / 6.0, abs=1e-6)
    _check_report_doc(rep)


def test_theorem3_shell_moduli_diverge():
    rep = check_theorem3(gen_zeros_of_s(200.0))
    assert not rep.verdict
    assert not _cond(rep, "inverse-square tail decay").passed
    # a genuinely divergent sum is classified, not inconclusive
    assert all(c.name != "classification conclusive"
               for c in rep.conditions)
    # the streaming route agrees
    rep2 = check_theorem3(ShellFamily(20000))
    assert not rep2.verdict


def test_theorem3_fractional_rays():
    conv = check_theorem3(gen_integer_ray(1000.0, exponent=0.6))
    assert conv.verdict
    div = check_theorem3(gen_integer_ray(300.0, exponent=0.5))
    assert not div.verdict


def test_theorem3_span_guard():
    with pytest.raises(ValueError, match="decades"):
        check_theorem3(gen_integer_ray(50.0))


# --------------------------------------------------------------------------
# envelope regressions
# --------------------------------------------------------------------------

def test_envelope_lattice_flat_diagonal():
    ev = LatticeProductEvaluator(gen_gamma_nu(0.0, 64.0))
    fit = envelope_verify_lattice(ev)
    assert abs(fit.diagonal_slope) <= 0.2
    assert fit.passed
    assert fit.n_points > 1000


def test_envelope_lattice_needs_room():
    ev = LatticeProductEvaluator(gen_gamma_nu(0.0, 32.0), r_max=4.0)
    with pytest.raises(ValueError):
        envelope_verify_lattice(ev)


def test_envelope_als_unperturbed_is_exact():
    fit = envelope_verify_als(ALSProductEvaluator(gen_als(40.0)))
    assert fit.min_ratio == pytest.approx(1.0, abs=1e-6)
    assert fit.max_ratio == pytest.approx(1.0, abs=1e-6)
    assert fit.passed


# --------------------------------------------------------------------------
# one-zero membership sensitivity
# --------------------------------------------------------------------------

def test_zero_excess_inadmissible_precondition():
    s = perturb(gen_gamma_nu(0.0, 32.0), "zero")
    rep = zero_excess_demo(s, 2.0)  # p must exceed 2/(1+nu) = 2 strictly
    assert not rep.verdict
    assert len(rep.conditions) == 1
    assert rep.conditions[0].name == "p admissible"
    _check_report_doc(rep)


def test_zero_excess_lam_must_be_a_zero():
    s = perturb(gen_als(30.0), "zero")
    with pytest.raises(ValueError, match="window zeros"):
        zero_excess_demo(s, 2.0, lam=0.7)


def test_zero_excess_shell_family():
    rep = zero_excess_demo(perturb(gen_als(40.0), "zero"), 2.0, lam=1.0)
    assert rep.verdict
    assert _cond(rep, "trend after removing one zero").passed
    assert _cond(rep, "trend after adding one zero").passed
    _check_report_doc(rep)


# --------------------------------------------------------------------------
# growth-from-counting
# --------------------------------------------------------------------------

def test_lindelof_shells_pass():
    rep = lindelof_check(ShellFamily(100000))
    assert rep.verdict
    assert _cond(rep, "counting growth at the stated order"
                 ).value == pytest.approx(2.0, abs=0.05)
    _check_report_doc(rep)


def test_lindelof_dense_ray_fails():
    rep = lindelof_check(gen_integer_ray(40.0, exponent=0.4))
    assert not rep.verdict
    assert not _cond(rep, "counting growth at the stated order").passed


# --------------------------------------------------------------------------
# sector wedge
# --------------------------------------------------------------------------

def _real_shell_points(R):
    s = gen_zeros_of_s(R)
    return s.points[s.points.imag == 0.0]


def test_sector_real_axis_passes():
    rep = sector_lemma_demo(make_point_set(_real_shell_points(300.0)),
                            0.0, 0.1)
    assert rep.verdict
    assert _cond(rep, "wedge inequality at every radius").passed
    assert _cond(rep, "wedge inequality at every radius").value >= 0.0
    _check_report_doc(rep)


def test_sector_rotated_axis_passes():
    pts = _real_shell_points(300.0) * np.exp(0.25j)
    rep = sector_lemma_demo(make_point_set(pts), 0.25, 0.05)
    assert rep.verdict


def test_sector_rejections():
    full = gen_zeros_of_s(300.0)
    with pytest.raises(ValueError, match="not inside"):
        sector_lemma_demo(full, 0.0, 0.1)
    pts = make_point_set(_real_shell_points(300.0))
    with pytest.raises(ValueError, match="pi/4"):
        sector_lemma_demo(pts, 0.0, math.pi / 4.0)
