"""End-to-end acceptance checks, one test per shipped claim.

Each test pins the documented tolerance and time budget; run with -s to see
the measured values alongside the pass lines."""
import math
import time

import numpy as np
import pytest

from fockzeros import (
    ALSProductEvaluator,
    LatticeProductEvaluator,
    NuMeasure,
    QuadratureSpec,
    ShellFamily,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    delta_stats,
    dist_to_set,
    envelope_verify_lattice,
    eval_closed,
    fock_p_norm,
    gen_als,
    gen_gamma_nu,
    gen_integer_ray,
    gen_zeros_of_s,
    lindelof_curve,
    lindelof_sum,
    log_abs_closed,
    log_abs_sigma,
    make_point_set,
    nu_integral,
    order_type_estimate,
    perturb,
    shell_delta_stats,
    zero_excess_demo,
)


def _sample(rng, s, r, n, min_dist):
    out = []
    while sum(a.size for a in out) < n:
        z = rng.uniform(-r, r, 4 * n) + 1j * rng.uniform(-r, r, 4 * n)
        z = z[np.abs(z) <= r]
        z = z[dist_to_set(s, z) >= min_dist]
        out.append(z)
    return np.concatenate(out)[:n]


def test_acceptance_01_shell_product_identity():
    t0 = time.perf_counter()
    base = gen_als(16.0)
    ev = ALSProductEvaluator(base)
    z = _sample(np.random.default_rng(1), base, 6.0, 1000, 0.1)
    err = np.max(np.abs(ev.log_abs(z)
                        - (math.log(2.0) + log_abs_closed("S", z))))
    # the scalar path also carries the sign: the products differ by -2
    for zi in z[:20]:
        lc = ev.log_complex(complex(zi))
        ref = eval_closed("S", complex(zi)).arg + math.pi
        d = abs(lc.arg - ref) % (2.0 * math.pi)
        assert min(d, 2.0 * math.pi - d) < 1e-8
    dt = time.perf_counter() - t0
    assert err <= 1e-8
    assert dt < 10.0
    print(f"\n[ACCEPTANCE 1] window product vs closed shell form: "
          f"max log err {err:.3e} on 1000 pts in {dt:.1f}s  PASS")


def test_acceptance_02_square_lattice_closed_form():
    t0 = time.perf_counter()
    base = gen_gamma_nu(0.0, 64.0)
    ev = LatticeProductEvaluator(base)
    z = _sample(np.random.default_rng(2), base, 5.0, 100, 0.05)
    err = np.max(np.abs(ev.log_abs(z) - log_abs_sigma(z)))
    dt = time.perf_counter() - t0
    assert err <= 1e-6
    print(f"\n[ACCEPTANCE 2] nu=0 window product vs sigma closed form: "
          f"max log err {err:.3e} on 100 pts in {dt:.1f}s  PASS")


def test_acceptance_03_reference_norms():
    t0 = time.perf_counter()
    for p in (1.0, 2.0, 3.0):
        est = fock_p_norm(lambda z: np.zeros(np.shape(z)), p,
                          QuadratureSpec(8.0))
        assert est.value == pytest.approx(1.0, abs=1e-10)
    worst_k = 0.0
    for k in range(11):
        est = fock_p_norm(lambda z, k=k: k * np.log(np.abs(z)), 2.0,
                          QuadratureSpec(9.0))
        want = math.factorial(k) / math.pi ** k
        worst_k = max(worst_k, abs(est.value ** 2 / want - 1.0))
    assert worst_k <= 1e-8
    worst_w = 0.0
    for w in (0.5, 1.0 + 1.0j, -2.0j, 2.0, 1.5 - 1.0j):
        est = fock_p_norm(lambda z: log_abs_closed("kernel", z, w=w), 2.0,
                          QuadratureSpec(10.0 + 2.0 * abs(w)))
        want = math.exp(0.5 * math.pi * abs(w) ** 2)
        worst_w = max(worst_w, abs(est.value / want - 1.0))
    assert worst_w <= 1e-6
    dt = time.perf_counter() - t0
    assert dt < 30.0
    print(f"\n[ACCEPTANCE 3] reference norms: unit 1e-10, monomial rel "
          f"{worst_k:.2e}, kernel rel {worst_w:.2e} in {dt:.1f}s  PASS")


def test_acceptance_04_weighted_membership_dichotomy():
    t0 = time.perf_counter()
    ests = {b: nu_integral("S", NuMeasure(2.0, 1.0, b))
            for b in (0.75, 0.55, 0.45, 0.3)}
    assert ests[0.75].verdict == "converged"
    assert ests[0.75].exponent == pytest.approx(-0.5, abs=0.1)
    assert ests[0.3].verdict == "diverging"
    assert ests[0.3].exponent == pytest.approx(0.4, abs=0.1)
    # the fitted exponent changes sign across the critical weight 1/2
    assert ests[0.55].exponent < 0.0 < ests[0.45].exponent
    dt = time.perf_counter() - t0
    assert dt < 180.0
    exps = {b: round(e.exponent, 3) for b, e in ests.items()}
    print(f"\n[ACCEPTANCE 4] weighted-measure dichotomy: exponents {exps} "
          f"in {dt:.1f}s  PASS")


def test_acceptance_05_shell_sums():
    t0 = time.perf_counter()
    # materialized: the inverse-square sum telescopes to 0 at every cut
    s = gen_zeros_of_s(300.0)
    for r in (10.0, 50.0, 300.0):
        v = lindelof_sum(s, 2, r)
        assert v == 0.0 + 0.0j
    # streamed to radius 1e4: still exactly zero
    radii = np.geomspace(100.0, 1.0e4, 9)
    re, im = lindelof_curve(ShellFamily(50_000_000), 2.0, radii)
    assert float(np.max(np.hypot(re.values, im.values))) == 0.0
    # dropping the imaginary axis exposes harmonic growth ~ 2 log r
    re2, im2 = lindelof_curve(ShellFamily(50_000_000,
                                          include_imaginary=False),
                              2.0, radii)
    slope = float(np.polyfit(np.log(radii),
                             np.hypot(re2.values, im2.values), 1)[0])
    assert slope == pytest.approx(2.0, abs=0.05)
    # summability contrast: shells diverge, the integer ray sums to pi^2/6
    assert not check_theorem3(gen_zeros_of_s(200.0)).verdict
    rep = check_theorem3(make_point_set(gen_integer_ray(1.0e4).points))
    assert rep.verdict
    total = next(c.value for c in rep.conditions
                 if c.name == "inverse-square sum")
    assert total == pytest.approx(math.pi ** 2 / 6.0, abs=1e-6)
    dt = time.perf_counter() - t0
    assert dt < 10.0
    print(f"\n[ACCEPTANCE 5] shell sums: S(r) = 0 exactly, half-family "
          f"slope {slope:.3f}, integer ray -> pi^2/6 in {dt:.1f}s  PASS")


_ADMISSIBLE = [(0.0, 3.0), (0.5, 1.5), (0.5, 2.0), (0.5, 3.0), (1.0, 1.5)]


def test_acceptance_06_density_window_flips():
    t0 = time.perf_counter()
    c0 = 0.05
    base = {nu: gen_gamma_nu(nu, 500.0) for nu in (0.0, 0.5, 1.0)}
    s = perturb(base[0.5], ("inverse-square", c0))
    ds = delta_stats(s, np.geomspace(4.0, 500.0, 25))
    target = 2.0 * math.pi * c0
    assert ds.delta_hat_proxy == pytest.approx(target, rel=0.05)
    assert ds.delta_sup_proxy == pytest.approx(target, rel=0.05)
    for nu, p in _ADMISSIBLE:
        ceiling = nu + 1.0 - 2.0 / p
        c_in = 0.55 * ceiling / (2.0 * math.pi)
        c_out = 1.45 * ceiling / (2.0 * math.pi)
        rep_in = check_theorem1(perturb(base[nu], ("inverse-square", c_in)),
                                p)
        rep_out = check_theorem1(perturb(base[nu], ("inverse-square", c_out)),
                                 p)
        assert rep_in.verdict, (nu, p)
        assert not rep_out.verdict, (nu, p)
    dt = time.perf_counter() - t0
    assert dt < 60.0
    print(f"\n[ACCEPTANCE 6] density window: proxies "
          f"[{ds.delta_hat_proxy:.4f}, {ds.delta_sup_proxy:.4f}] ~ "
          f"{target:.4f}, 5 admissible pairs flip in {dt:.1f}s  PASS")


def test_acceptance_07_envelope_diagonal_slopes():
    t0 = time.perf_counter()
    slopes = {}
    for nu in (0.0, 0.5, 1.0):
        ev = LatticeProductEvaluator(gen_gamma_nu(nu, 64.0))
        fit = envelope_verify_lattice(ev)
        assert fit.passed
        assert fit.diagonal_slope == pytest.approx(-nu, abs=0.2)
        slopes[nu] = round(fit.diagonal_slope, 3)
    dt = time.perf_counter() - t0
    assert dt < 120.0
    print(f"\n[ACCEPTANCE 7] diagonal envelope slopes {slopes} "
          f"in {dt:.1f}s  PASS")


def test_acceptance_08_one_zero_membership_sensitivity():
    t0 = time.perf_counter()
    rep_l = zero_excess_demo(gen_gamma_nu(0.5, 64.0), 2.0)
    assert rep_l.verdict
    div = next(c for c in rep_l.conditions
               if c.name == "trend after removing one zero")
    mul = next(c for c in rep_l.conditions
               if c.name == "trend after adding one zero")
    rep_a = zero_excess_demo(gen_als(40.0), 2.0, lam=1.0)
    assert rep_a.verdict
    dt = time.perf_counter() - t0
    assert dt < 180.0
    print(f"\n[ACCEPTANCE 8] one-zero sensitivity: lattice exponents "
          f"({div.value:.3f}, {mul.value:.3f}), shell family PASS "
          f"in {dt:.1f}s  PASS")


def test_acceptance_09_order_and_type():
    t0 = time.perf_counter()
    rho, tau = order_type_estimate("S", np.geomspace(6.0, 12.0, 5))
    assert rho == pytest.approx(2.0, abs=0.05)
    assert tau == pytest.approx(math.pi / 2.0, rel=0.05)
    dt = time.perf_counter() - t0
    print(f"\n[ACCEPTANCE 9] growth scale: order {rho:.4f}, type "
          f"{tau:.4f} vs pi/2 = {math.pi / 2:.4f} in {dt:.1f}s  PASS")


def test_acceptance_10_shell_average_criterion():
    t0 = time.perf_counter()
    base = gen_als(math.sqrt(20000.0) + 1e-9)  # ten thousand shells
    ok = check_theorem2(perturb(base, ("shell", 0.2)), 2.0)
    bad = check_theorem2(perturb(base, ("shell", 0.3)), 2.0)
    assert ok.verdict and not bad.verdict
    c = next(c for c in ok.conditions
             if c.name == "shell-sum slope proxy below threshold")
    assert c.threshold == pytest.approx(0.25)
    assert c.value == pytest.approx(0.2, rel=0.05)
    st = shell_delta_stats(perturb(base, ("shell", 0.2)))
    assert st.avdonin_sup == pytest.approx(0.2, rel=0.05)
    dt = time.perf_counter() - t0
    assert dt < 60.0
    print(f"\n[ACCEPTANCE 10] shell-average criterion: proxy {c.value:.4f} "
          f"vs 0.25, flip at d = 0.3, in {dt:.1f}s  PASS")
