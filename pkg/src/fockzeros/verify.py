"""Structured checkers for the zero-set stability statements.

Each checker evaluates the hypotheses of one statement on a concrete point
set and returns a ``TheoremReport``: one record per condition with the
computed value, the threshold it was compared against, and the comparison
outcome, plus a ``configs`` block recording how each value was produced.
Preconditions that fail (an inadmissible exponent, say) come back as failed
condition records rather than exceptions, so runs can be batched.

Boundedness and convergence verdicts are slope-based with threshold 0.15 on
fitted log-log slopes, except where a statistic decays too slowly for that
margin (noted locally).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measures import LadderSpec, membership_trend, polar_grid
from .products import (ALSProductEvaluator, LatticeProductEvaluator,
                       dist_to_set, log_abs_closed, log_abs_lattice_closed,
                       weighted_log_mag)
from .sequences import (PerturbedSet, PointSet, ShellFamily, counting_function,
                        delta_stats, lindelof_curve, make_point_set, perturb,
                        power_sum_curve, separation, als_separation_constant,
                        shell_delta_stats, _coords, _sorted_order)

__all__ = [
    "ConditionRecord",
    "TheoremReport",
    "EnvelopeFit",
    "REPORT_SCHEMA",
    "admissible_range",
    "check_theorem1",
    "check_theorem2",
    "check_theorem3",
    "envelope_verify_lattice",
    "envelope_verify_als",
    "zero_excess_demo",
    "lindelof_check",
    "sector_lemma_demo",
]

SLOPE_TOL = 0.15


@dataclass(frozen=True)
class ConditionRecord:
    name: str
    value: float
    threshold: float | None
    passed: bool

    def to_json_dict(self) -> dict:
        return {"name": self.name, "value": float(self.value),
                "threshold": None if self.threshold is None
                else float(self.threshold),
                "pass": bool(self.passed)}


@dataclass
class TheoremReport:
    theorem: str
    conditions: list
    verdict: bool
    configs: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {"theorem": self.theorem,
                "conditions": [c.to_json_dict() for c in self.conditions],
                "verdict": bool(self.verdict),
                "configs": self.configs}

    def to_text(self) -> str:
        lines = [f"report: {self.theorem}"]
        for c in self.conditions:
            thr = "-" if c.threshold is None else f"{c.threshold:.6g}"
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  {mark}  {c.name}: value={c.value:.6g} "
                         f"threshold={thr}")
        lines.append(f"verdict: {'PASS' if self.verdict else 'FAIL'}")
        return "\n".join(lines)


REPORT_SCHEMA = {
    "type": "object",
    "required": ["theorem", "conditions", "verdict", "configs"],
    "additionalProperties": False,
    "properties": {
        "theorem": {"type": "string"},
        "verdict": {"type": "boolean"},
        "conditions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "value", "threshold", "pass"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "value": {"type": ["number", "null"]},
                    "threshold": {"type": ["number", "null"]},
                    "pass": {"type": "boolean"},
                },
            },
        },
        "configs": {"type": "object"},
    },
}


def admissible_range(nu: float) -> tuple[float, float]:
    """Open interval of exponents p for which the shifted-row lattice is a
    uniqueness-critical family: 2/(1+nu) < p < 2/nu (upper bound infinite
    at nu = 0)."""
    lo = 2.0 / (1.0 + nu)
    hi = math.inf if nu == 0 else 2.0 / nu
    return lo, hi


def _as_lattice_set(s) -> PerturbedSet:
    if isinstance(s, PointSet):
        if s.family != "gamma-nu":
            raise ValueError("expected the shifted-row lattice family")
        s = perturb(s)
    if not isinstance(s, PerturbedSet) or s.family != "lattice":
        raise ValueError("expected a lattice point set")
    return s


def _as_shell_set(s) -> PerturbedSet:
    if isinstance(s, PointSet):
        if s.family not in ("als", "zeros-of-s"):
            raise ValueError("expected a shell family")
        s = perturb(s)
    if not isinstance(s, PerturbedSet) or s.family not in ("als",
                                                           "zeros-of-s"):
        raise ValueError("expected a shell-family point set")
    return s


# --------------------------------------------------------------------------
# density-window criterion for the perturbed lattice
# --------------------------------------------------------------------------

def check_theorem1(s, p: float, radii=None) -> TheoremReport:
    """Stability of the shifted-row lattice as a uniqueness set under
    multiplicative perturbations: separation, boundedness of
    |gamma|^2 (delta, theta), and the logarithmic-density window
    nu - 2/p < lower proxy <= upper proxy < nu + 1 - 2/p.
    """
    s = _as_lattice_set(s)
    nu = float(s.nu if s.nu is not None else 0.0)
    R = float(s.radius)
    if radii is None:
        lo = max(2.0, R / 150.0)
        if R < 99.0 * lo:
            raise ValueError(
                "window radius too small for the density proxies; "
                "generate the lattice with radius >= 198 (or pass radii)")
        radii = np.geomspace(lo, R, 25)
    lo_p, hi_p = admissible_range(nu)
    win_lo = nu - 2.0 / p
    win_hi = nu + 1.0 - 2.0 / p

    sep = separation(s)
    ds = delta_stats(s, radii)

    conds = [
        ConditionRecord("separation positive", sep, 0.0, sep > 0.0),
        ConditionRecord("p admissible", p, None, lo_p < p < hi_p),
        ConditionRecord("sup |g|^2 |delta| finite", s.sup_gamma2_delta, None,
                        math.isfinite(s.sup_gamma2_delta)),
        ConditionRecord("sup |g|^2 |theta| finite", s.sup_gamma2_theta, None,
                        math.isfinite(s.sup_gamma2_theta)),
        ConditionRecord("lower density proxy above window floor",
                        ds.delta_hat_proxy, win_lo,
                        ds.delta_hat_proxy > win_lo),
        ConditionRecord("upper density proxy below window ceiling",
                        ds.delta_sup_proxy, win_hi,
                        ds.delta_sup_proxy < win_hi),
    ]
    configs = {
        "separation positive": {"statistic": "min pairwise distance",
                                "window_radius": R},
        "p admissible": {"interval": [lo_p, None if nu == 0 else hi_p],
                         "nu": nu},
        "sup |g|^2 |delta| finite": {"statistic": "window supremum"},
        "sup |g|^2 |theta| finite": {"statistic": "window supremum"},
        "lower density proxy above window floor": {
            "statistic": "min local log-slope of cumulative delta sum",
            "grid": [float(radii[0]), float(radii[-1]), int(len(radii))],
            "proxy_half": "top"},
        "upper density proxy below window ceiling": {
            "statistic": "max local log-slope of cumulative delta sum",
            "grid": [float(radii[0]), float(radii[-1]), int(len(radii))],
            "proxy_half": "top"},
    }
    return TheoremReport("lattice density window", conds,
                         all(c.passed for c in conds), configs)


# --------------------------------------------------------------------------
# shell-sum criterion for the perturbed shell family
# --------------------------------------------------------------------------

def check_theorem2(s, p: float, N: int = 1) -> TheoremReport:
    """Stability of the four-fold shell family: weighted separation,
    boundedness, and the shell-sum statistics against 1/(2 max(p, q))."""
    s = _as_shell_set(s)
    if p <= 1:
        raise ValueError("p must exceed 1")
    q = p / (p - 1.0)
    thr = 1.0 / (2.0 * max(p, q))
    c_sep = als_separation_constant(s)
    st = shell_delta_stats(s, N=N)
    conds = [
        ConditionRecord("weighted separation constant positive", c_sep, 0.0,
                        c_sep > 0.0),
        ConditionRecord("sup |g|^2 |delta| finite", s.sup_gamma2_delta, None,
                        math.isfinite(s.sup_gamma2_delta)),
        ConditionRecord("sup |g|^2 |theta| finite", s.sup_gamma2_theta, None,
                        math.isfinite(s.sup_gamma2_theta)),
        ConditionRecord("shell-sum slope proxy below threshold",
                        st.delta_proxy, thr, st.delta_proxy < thr),
        ConditionRecord("windowed shell average below threshold",
                        st.avdonin_sup, thr, st.avdonin_sup < thr),
    ]
    configs = {
        "weighted separation constant positive": {
            "statistic": "min |l - l'| * min(|g|, |g'|)"},
        "sup |g|^2 |delta| finite": {"statistic": "window supremum"},
        "sup |g|^2 |theta| finite": {"statistic": "window supremum"},
        "shell-sum slope proxy below threshold": {
            "statistic": "|slope| of cumulative shell sums vs log n",
            "threshold_rule": "1/(2 max(p,q))", "p": p, "q": q},
        "windowed shell average below threshold": {
            "statistic": "sup (n+1)/N |sum of N consecutive shell sums|",
            "N": int(N), "threshold_rule": "1/(2 max(p,q))"},
    }
    return TheoremReport("shell-family shell-sum criterion", conds,
                         all(c.passed for c in conds), configs)


# --------------------------------------------------------------------------
# inverse-square summability criterion
# --------------------------------------------------------------------------

def check_theorem3(s, radii=None, eps: float = 0.1) -> TheoremReport:
    """All subsets of the set are zero sets exactly when sum |z_n|^-2
    converges.  The verdict classifies that sum from the decay of its
    tail increments on a geometric radius ladder; a convergent sum also
    gets a ratio-extrapolated value.

    Thresholds are asymmetric: increments falling like r^-0.15 or faster
    read as convergence, increments flatter than r^-0.05 as divergence
    (log-divergent sums have increment slope -> 0 from below)."""
    if isinstance(s, ShellFamily):
        r_hi = s.radius()
        r_lo = max(2.0, r_hi / 100.0)
    else:
        pts, mult = _coords(s)
        a = np.abs(pts)
        a = a[a > 0]
        if a.size < 2 or a.max() < 99.0 * a.min():
            raise ValueError("moduli must span at least two decades")
        r_hi = float(a.max())
        r_lo = max(float(a.min()) * 1.5, r_hi / 100.0)
    if radii is None:
        radii = np.geomspace(r_lo, r_hi, 17)
    radii = np.asarray(radii, dtype=float)

    curve = power_sum_curve(s, 2.0, radii)
    incs = np.diff(curve.values)
    pos = incs > 0
    if np.count_nonzero(pos) < 3:
        slope = -math.inf  # the tail is already identically zero
    else:
        x = np.log(radii[1:][pos])
        y = np.log(incs[pos])
        k = min(8, y.size)
        slope = float(np.polyfit(x[-k:], y[-k:], 1)[0])

    total = float(curve.values[-1])
    convergent = slope < -SLOPE_TOL
    divergent = slope > -0.05
    if convergent and np.count_nonzero(pos) >= 2:
        ii = np.nonzero(pos)[0]
        ratio = incs[ii[-1]] / incs[ii[-2]] if incs[ii[-2]] > 0 else 0.0
        if 0.0 < ratio < 1.0:
            total = total + incs[ii[-1]] * ratio / (1.0 - ratio)

    aux = power_sum_curve(s, 2.0 + eps, radii)
    conds = [
        ConditionRecord("inverse-square tail decay", slope, -SLOPE_TOL,
                        convergent),
        ConditionRecord("inverse-square sum", total, None, True),
        ConditionRecord(f"necessary-condition sum at exponent {2 + eps:g}",
                        float(aux.values[-1]), None, True),
    ]
    configs = {
        "inverse-square tail decay": {
            "statistic": "log-log slope of ladder increments",
            "grid": [float(radii[0]), float(radii[-1]), int(radii.size)],
            "divergence_floor": -0.05},
        "inverse-square sum": {
            "statistic": "partial sum plus geometric-ratio tail"
            if convergent else "partial sum (no tail correction)"},
        f"necessary-condition sum at exponent {2 + eps:g}": {
            "statistic": "partial sum", "eps": eps},
    }
    if not convergent and not divergent:
        conds.append(ConditionRecord("classification conclusive", slope,
                                     -0.05, False))
        configs["classification conclusive"] = {
            "statistic": "slope between the convergence and divergence cuts"}
    return TheoremReport("inverse-square summability", conds, convergent,
                         configs)


# --------------------------------------------------------------------------
# envelope regressions
# --------------------------------------------------------------------------

@dataclass
class EnvelopeFit:
    """Least-squares fit of a weighted log magnitude against the envelope
    model; ``min_ratio``/``max_ratio`` exponentiate the residual extremes."""

    exponents: dict
    m_fit: float
    min_ratio: float
    max_ratio: float
    diagonal_slope: float
    excluded_disk: float
    n_points: int
    passed: bool

    def to_json_dict(self) -> dict:
        return {"exponents": {k: float(v) for k, v in self.exponents.items()},
                "m_fit": float(self.m_fit),
                "min_ratio": float(self.min_ratio),
                "max_ratio": float(self.max_ratio),
                "diagonal_slope": float(self.diagonal_slope),
                "excluded_disk": float(self.excluded_disk),
                "n_points": int(self.n_points)}


def _admissible(grid, dists, excluded: float):
    z = np.asarray(grid, dtype=complex).ravel()
    keep = np.ones(z.size, dtype=bool)
    for d in dists:
        keep &= np.asarray(d).ravel() >= excluded
    z = z[keep]
    if z.size < 500:
        raise ValueError("grid too sparse: need at least 500 admissible "
                         "points outside the excluded disks")
    return z


def envelope_verify_lattice(ev, grid=None, excluded: float = 0.1
                            ) -> EnvelopeFit:
    """Fit log(weighted |G|) - log dist against c + a log(|z|+1)
    + b log(|Im z|+1); b estimates the polynomial weight exponent M
    (clamped to [0, 10]) and the diagonal-ray slope estimates -nu."""
    if not isinstance(ev, LatticeProductEvaluator):
        ev = LatticeProductEvaluator(ev)
    if ev.r_max < 4.5:
        raise ValueError("window too small for the diagonal-ray fit")
    if grid is None:
        grid = polar_grid(2.0, ev.r_max * 0.98, 28, 96)
    z = _admissible(grid, [dist_to_set(ev.set, grid)], excluded)
    y = (np.asarray(weighted_log_mag(ev, z), dtype=float)
         - np.log(dist_to_set(ev.set, z)))
    X = np.column_stack([np.ones(z.size),
                         np.log1p(np.abs(z)),
                         np.log1p(np.abs(z.imag))])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    m_fit = float(np.clip(coef[2], 0.0, 10.0))

    t = np.linspace(max(4.0, ev.r_max / 4.0), min(12.0, ev.r_max * 0.98), 48)
    ray = t * np.exp(1j * math.pi / 4.0)
    dr = dist_to_set(ev.set, ray)
    keep = dr >= excluded
    yr = (np.asarray(weighted_log_mag(ev, ray[keep]), dtype=float)
          - np.log(dr[keep]))
    diag = float(np.polyfit(np.log(t[keep]), yr, 1)[0])

    return EnvelopeFit(
        exponents={"radial": float(coef[1]), "imag": float(coef[2]),
                   "offset": float(coef[0])},
        m_fit=m_fit,
        min_ratio=float(np.exp(res.min())),
        max_ratio=float(np.exp(res.max())),
        diagonal_slope=diag,
        excluded_disk=excluded,
        n_points=int(z.size),
        passed=bool(np.all(np.isfinite(res))))


def envelope_verify_als(ev, grid=None, excluded: float = 0.1) -> EnvelopeFit:
    """Fit log|G_pert| - log|G_closed| + log(dist(z, base)/dist(z, pert))
    against c + m log(|Im z^2|+1) + b log(|z|+1).  For the unperturbed
    family the comparison collapses to the constant log 2."""
    if not isinstance(ev, ALSProductEvaluator):
        ev = ALSProductEvaluator(ev)
    base_set = make_point_set(ev.set.base, family="als",
                              radius=ev.set.radius)
    if grid is None:
        grid = polar_grid(2.0, ev.r_max * 0.98, 28, 96)
    d_pert = dist_to_set(ev.set, grid)
    d_base = dist_to_set(base_set, grid)
    z = _admissible(grid, [d_pert, d_base], excluded)
    d_pert = dist_to_set(ev.set, z)
    d_base = dist_to_set(base_set, z)
    y = (np.asarray(ev.log_abs(z), dtype=float)
         - np.asarray(log_abs_closed("S", z), dtype=float)
         + np.log(d_base) - np.log(d_pert))
    X = np.column_stack([np.ones(z.size),
                         np.log1p(np.abs(np.imag(z * z))),
                         np.log1p(np.abs(z))])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    return EnvelopeFit(
        exponents={"imag_sq": float(coef[1]), "radial": float(coef[2]),
                   "offset": float(coef[0])},
        m_fit=float(np.clip(coef[1], 0.0, 10.0)),
        min_ratio=float(np.exp(res.min())),
        max_ratio=float(np.exp(res.max())),
        diagonal_slope=float("nan"),
        excluded_disk=excluded,
        n_points=int(z.size),
        passed=bool(np.all(np.isfinite(res))))


# --------------------------------------------------------------------------
# zero-excess membership demo
# --------------------------------------------------------------------------

def _fast_log_abs(s: PerturbedSet):
    """Closed form when the set is unperturbed (fast, unlimited radius);
    the window evaluator otherwise (radius-limited)."""
    unpert = not (np.any(s.delta != 0) or np.any(s.theta != 0))
    if s.family == "lattice":
        nu = float(s.nu if s.nu is not None else 0.0)
        if unpert:
            return (lambda z: log_abs_lattice_closed(z, nu)), math.inf
        ev = LatticeProductEvaluator(s)
        return ev.log_abs, ev.r_max
    if unpert:
        return (lambda z: math.log(2.0) + log_abs_closed("S", z)), math.inf
    ev = ALSProductEvaluator(s)
    return ev.log_abs, ev.r_max


def zero_excess_demo(s, p: float, lam: complex | None = None,
                     ladder: LadderSpec | None = None) -> TheoremReport:
    """One-zero sensitivity of membership: removing a single zero from the
    family's product makes the quotient integrable, while adding one
    (multiplying by z) makes it grow too fast.  Reports the two ladder
    trends."""
    try:
        s = _as_lattice_set(s)
        family = "lattice"
    except ValueError:
        s = _as_shell_set(s)
        family = "shell"

    if family == "lattice":
        nu = float(s.nu if s.nu is not None else 0.0)
        lo_p, hi_p = admissible_range(nu)
        if not lo_p < p < hi_p:
            rec = ConditionRecord("p admissible", p, None, False)
            return TheoremReport(
                "one-zero membership sensitivity", [rec], False,
                {"p admissible": {"interval": [lo_p,
                                               None if nu == 0 else hi_p],
                                  "nu": nu}})
        lam = complex(nu) if lam is None else complex(lam)
    else:
        if not p > 1:
            rec = ConditionRecord("p admissible", p, None, False)
            return TheoremReport("one-zero membership sensitivity", [rec],
                                 False, {"p admissible": {"interval":
                                                          [1.0, None]}})
        lam = complex(1.0) if lam is None else complex(lam)

    pts = s.points
    if not np.any(np.isclose(pts, lam, rtol=0, atol=1e-9)):
        raise ValueError("lam must be one of the window zeros")

    log_g, r_cap = _fast_log_abs(s)
    if ladder is None:
        count = 10
        if math.isfinite(r_cap):
            count = max(4, min(10, int(2 * math.log2(r_cap * 0.98 / 4.0))))
        ladder = LadderSpec(count=count, n_theta_scale=16.0,
                            diagonal_refine=True)

    def li_div(z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return (np.asarray(log_g(z), dtype=float)
                    - np.log(np.abs(z - lam)))

    def li_mul(z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return (np.asarray(log_g(z), dtype=float)
                    + np.log(np.abs(z)))

    t_div = membership_trend(li_div, p, ladder)
    t_mul = membership_trend(li_mul, p, ladder)
    conds = [
        ConditionRecord("trend after removing one zero",
                        t_div.exponent, ladder.lower,
                        t_div.verdict == "converged"),
        ConditionRecord("trend after adding one zero",
                        t_mul.exponent, ladder.upper,
                        t_mul.verdict == "diverging"),
    ]
    configs = {
        "trend after removing one zero": {
            "statistic": "ladder increment exponent",
            "divisor_zero": [lam.real, lam.imag], "p": p,
            "ladder_top": float(ladder.radii()[-1]),
            "verdict": t_div.verdict},
        "trend after adding one zero": {
            "statistic": "ladder increment exponent", "p": p,
            "ladder_top": float(ladder.radii()[-1]),
            "verdict": t_mul.verdict},
    }
    return TheoremReport("one-zero membership sensitivity", conds,
                         all(c.passed for c in conds), configs)


# --------------------------------------------------------------------------
# growth-from-counting check
# --------------------------------------------------------------------------

def lindelof_check(s, rho: int = 2, radii=None) -> TheoremReport:
    """Finite type at integer order rho needs n(r) = O(r^rho) together with
    bounded partial power sums S(r) = sum z_n^(-rho).  Both are checked by
    slope fits; the counting ratio at the top radius is reported as
    context."""
    if rho < 1 or rho != int(rho):
        raise ValueError("rho must be a positive integer")
    if isinstance(s, ShellFamily):
        r_hi = s.radius()
    else:
        pts, _ = _coords(s)
        a = np.abs(pts)
        a = a[a > 0]
        if a.size < 8:
            raise ValueError("too few points for growth statistics")
        r_hi = float(a.max())
    if radii is None:
        radii = np.geomspace(max(2.0, r_hi / 100.0), r_hi, 13)
    radii = np.asarray(radii, dtype=float)

    counting = counting_function(s, radii)
    n_pos = counting.values > 0
    if np.count_nonzero(n_pos) < 4:
        raise ValueError("radius grid misses the set")
    slope_n = float(np.polyfit(np.log(radii[n_pos]),
                               np.log(counting.values[n_pos]), 1)[0])

    s_re, s_im = lindelof_curve(s, int(rho), radii)
    s_abs = np.hypot(s_re.values, s_im.values)
    slope_s = float(np.polyfit(np.log(radii), s_abs, 1)[0])

    ratio_top = float(counting.values[-1] / radii[-1] ** rho)
    conds = [
        ConditionRecord("counting growth at the stated order", slope_n,
                        rho + SLOPE_TOL, slope_n <= rho + SLOPE_TOL),
        ConditionRecord("power-sum partials bounded", slope_s, SLOPE_TOL,
                        abs(slope_s) <= SLOPE_TOL),
        ConditionRecord("counting ratio at top radius", ratio_top, None,
                        True),
    ]
    configs = {
        "counting growth at the stated order": {
            "statistic": "log-log slope of n(r)", "rho": int(rho),
            "grid": [float(radii[0]), float(radii[-1]), int(radii.size)]},
        "power-sum partials bounded": {
            "statistic": "slope of |S(r)| against log r",
            "summation": "modulus order, compensated"},
        "counting ratio at top radius": {"statistic": "n(r)/r^rho"},
    }
    return TheoremReport("growth from counting and power sums", conds,
                         conds[0].passed and conds[1].passed, configs)


# --------------------------------------------------------------------------
# sector divergence demo
# --------------------------------------------------------------------------

def sector_lemma_demo(s, beta: float, theta: float, radii=None
                      ) -> TheoremReport:
    """Sets inside a closed double cone of half-angle theta < pi/4 satisfy
    |S(r)| >= cos(2 theta) * sum |z_n|^-2 at every radius. The inequality is
    certified with compensated sums; the growth of |S(r)| is reported as the
    divergence exhibit."""
    if not 0.0 <= theta < math.pi / 4.0:
        raise ValueError("the wedge bound needs 0 <= theta < pi/4")
    pts, mult = _coords(s)
    a = np.abs(pts)
    keep = a > 0
    pts, mult, a = pts[keep], mult[keep], a[keep]
    if pts.size < 4:
        raise ValueError("too few points")
    dev1 = np.abs(_wrap_pi(np.angle(pts) - beta))
    dev2 = np.abs(_wrap_pi(np.angle(pts) + math.pi - beta))
    max_dev = float(np.max(np.minimum(dev1, dev2)))
    if max_dev > theta + 1e-12:
        raise ValueError("the set is not inside the stated double cone")

    r_hi = float(a.max())
    r_lo = float(a.min())
    if r_hi < 10.0 * r_lo:
        raise ValueError("moduli span too small for a growth exhibit")
    if radii is None:
        radii = np.geomspace(max(r_lo * 2.0, r_hi / 30.0), r_hi, 9)
    radii = np.asarray(radii, dtype=float)

    order = _sorted_order(pts)
    pts, mult, a = pts[order], mult[order], a[order]
    from .sequences import _int_power
    vals = mult * (1.0 / _int_power(pts, 2))
    inv2 = mult * a ** (-2.0)
    cos2t = math.cos(2.0 * theta)
    margins = []
    s_abs = []
    cuts = np.searchsorted(a, radii, side="right")
    for c in cuts:
        s_r = complex(math.fsum(vals.real[:c]), math.fsum(vals.imag[:c]))
        p_r = math.fsum(inv2[:c])
        margins.append(abs(s_r) - cos2t * p_r)
        s_abs.append(abs(s_r))
    margins = np.array(margins)
    s_abs = np.array(s_abs)
    tol = 64.0 * np.finfo(float).eps * max(1.0, float(np.max(s_abs)))
    growth = float(np.polyfit(np.log(radii), s_abs, 1)[0])

    conds = [
        ConditionRecord("containment in the double cone", max_dev, theta,
                        True),
        ConditionRecord("wedge inequality at every radius",
                        float(margins.min()), 0.0,
                        bool(np.all(margins >= -tol))),
        ConditionRecord("partial-sum growth per log r", growth, None, True),
    ]
    configs = {
        "containment in the double cone": {
            "statistic": "max angular deviation", "beta": beta,
            "theta": theta},
        "wedge inequality at every radius": {
            "statistic": "min |S(r)| - cos(2 theta) * sum |z|^-2",
            "summation": "compensated, modulus order",
            "radii": [float(radii[0]), float(radii[-1]), int(radii.size)]},
        "partial-sum growth per log r": {
            "statistic": "slope of |S(r)| against log r"},
    }
    return TheoremReport("sector wedge divergence", conds,
                         conds[0].passed and conds[1].passed, configs)


def _wrap_pi(x):
    return (np.asarray(x) + math.pi) % (2.0 * math.pi) - math.pi
