"""Planar point families and the scalar statistics defined on them.

Three generators cover the families of interest: the square lattice with its
nonnegative real row shifted by ``nu`` (``gen_gamma_nu``), the four-fold
sqrt-shell family with the extra pair at +-1 (``gen_als``, after
Ascensi-Lyubarskii-Seip), and the bare shell family, which is the zero set of
``sin(pi z^2/2)/z^2`` (``gen_zeros_of_s``).

Perturbations act multiplicatively: ``lambda = gamma * exp(delta) * exp(i*theta)``.

Conditionally convergent statistics fix a summation order: increasing modulus,
ties broken by increasing principal argument. Power sums of the form
``sum z^(-rho)`` are accumulated with compensated summation so that exact
symmetry cancellations survive in floating point.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "PointSet",
    "PerturbedSet",
    "RadialStats",
    "ShellFamily",
    "DeltaStats",
    "ShellDeltaStats",
    "ExponentFit",
    "gen_gamma_nu",
    "gen_als",
    "gen_zeros_of_s",
    "gen_integer_ray",
    "make_point_set",
    "perturb",
    "separation",
    "als_separation_constant",
    "counting_function",
    "power_sum",
    "power_sum_curve",
    "lindelof_sum",
    "lindelof_curve",
    "convergence_exponent",
    "delta_stats",
    "shell_delta_stats",
    "sector_partition",
    "in_sector",
    "points_to_json",
    "points_from_json",
]

_TWO_PI = 2.0 * math.pi


def _sorted_order(points: np.ndarray) -> np.ndarray:
    # modulus first, argument second: the deterministic summation order used
    # throughout this module. Keyed on |z|^2, which is exact for
    # integer-coordinate points, so equal-modulus ties stay ties (np.abs can
    # be a last-bit off the correctly rounded hypot and would split them).
    a2 = points.real ** 2 + points.imag ** 2
    return np.lexsort((np.angle(points), a2))


@dataclass(frozen=True)
class PointSet:
    """A finite multiset of complex points, duplicates merged into multiplicities.

    Points are stored sorted by (modulus, argument).
    """

    points: np.ndarray
    multiplicities: np.ndarray
    family: str = "custom"
    nu: float | None = None
    radius: float | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        mult = np.asarray(self.multiplicities, dtype=np.int64)
        if pts.shape != mult.shape:
            raise ValueError("points and multiplicities must align")
        if pts.size and not np.all(np.isfinite(pts.view(float))):
            raise ValueError("points must be finite")
        if np.any(mult < 1):
            raise ValueError("multiplicities must be >= 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", mult)

    @property
    def includes_origin(self) -> bool:
        return bool(np.any(self.points == 0))

    def __len__(self) -> int:
        return int(self.multiplicities.sum())

    def moduli(self) -> np.ndarray:
        return np.abs(self.points)

    def _kd_tree(self) -> cKDTree:
        tree = self.__dict__.get("_tree")
        if tree is None:
            xy = np.column_stack([self.points.real, self.points.imag])
            tree = cKDTree(xy)
            object.__setattr__(self, "_tree", tree)
        return tree


def make_point_set(points, family: str = "custom", nu: float | None = None,
                   radius: float | None = None) -> PointSet:
    """Build a PointSet from raw complex values, merging exact duplicates."""
    pts = np.asarray(points, dtype=complex).ravel()
    order = _sorted_order(pts)
    pts = pts[order]
    if pts.size:
        uniq, counts = np.unique(pts, return_counts=True)
        order = _sorted_order(uniq)
        pts, mult = uniq[order], counts[order]
    else:
        mult = np.zeros(0, dtype=np.int64)
    return PointSet(pts, mult, family=family, nu=nu, radius=radius)


@dataclass(frozen=True)
class PerturbedSet:
    """Pairs (base gamma, perturbed lambda) with the (delta, theta) data.

    ``points`` always equals ``base * exp(delta) * exp(1j*theta)`` entrywise;
    the sup statistics ``sup |gamma|^2 |delta|`` and ``sup |gamma|^2 |theta|``
    are precomputed because they are the boundedness hypotheses of the
    stability results this package checks.
    """

    base: np.ndarray
    delta: np.ndarray
    theta: np.ndarray
    points: np.ndarray
    family: str  # "lattice" | "als" | "zeros-of-s"
    nu: float | None = None
    radius: float | None = None
    sup_gamma2_delta: float = 0.0
    sup_gamma2_theta: float = 0.0

    def __len__(self) -> int:
        return self.base.size

    def moduli(self) -> np.ndarray:
        return np.abs(self.points)

    def perturbation_at(self, base_point: complex) -> tuple[float, float]:
        idx = np.nonzero(self.base == base_point)[0]
        if idx.size == 0:
            raise KeyError(f"{base_point} is not a base point of this set")
        i = int(idx[0])
        return float(self.delta[i]), float(self.theta[i])


AnySet = Union[PointSet, PerturbedSet]


@dataclass(frozen=True)
class RadialStats:
    """A scalar statistic sampled on an increasing radius grid."""

    radii: np.ndarray
    values: np.ndarray
    tag: str

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape:
            raise ValueError("radii and values must be matching 1-d arrays")
        if r.size > 1 and not np.all(np.diff(r) > 0):
            raise ValueError("radii must be strictly increasing")
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "values", v)

    def to_csv(self) -> str:
        lines = ["r,value"]
        lines += [f"{float(r)!r},{float(v)!r}"
                  for r, v in zip(self.radii, self.values)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, tag: str = "custom") -> "RadialStats":
        rows = [ln for ln in text.strip().splitlines()[1:] if ln]
        data = np.array([[float(x) for x in ln.split(",")] for ln in rows])
        if data.size == 0:
            return cls(np.zeros(0), np.zeros(0), tag)
        return cls(data[:, 0], data[:, 1], tag)


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------

def gen_gamma_nu(nu: float, R: float) -> PointSet:
    """Square-lattice family: off-axis Gauss integers, the strictly negative
    integers, and the nonnegative real row shifted to ``m + nu``.

    ``nu = 0`` gives the full square lattice; ``nu = 1`` the lattice without
    the origin.
    """
    if not 0.0 <= nu <= 1.0:
        raise ValueError("nu must lie in [0, 1]")
    if R < 1:
        raise ValueError("R must be >= 1")
    M = int(math.floor(R))
    m = np.arange(-M, M + 1)
    n = np.arange(1, M + 1)
    mm, nn = np.meshgrid(m, np.concatenate([-n[::-1], n]))
    off_axis = (mm + 1j * nn).ravel()
    off_axis = off_axis[np.abs(off_axis) <= R]
    neg_row = -np.arange(1, M + 1, dtype=float)
    pos_row = nu + np.arange(0.0, math.floor(R - nu) + 1.0)
    pos_row = pos_row[pos_row <= R]
    pts = np.concatenate([off_axis, neg_row.astype(complex),
                          pos_row.astype(complex)])
    order = _sorted_order(pts)
    return PointSet(pts[order], np.ones(pts.size, dtype=np.int64),
                    family="gamma-nu", nu=float(nu), radius=float(R))


def _shell_points(R: float, include_imaginary: bool = True) -> np.ndarray:
    n_max = int(math.floor(R * R / 2.0))
    a = np.sqrt(2.0 * np.arange(1, n_max + 1, dtype=float))
    pts = [a.astype(complex), (-a).astype(complex)]
    if include_imaginary:
        pts += [1j * a, -1j * a]
    return np.concatenate(pts) if pts else np.zeros(0, dtype=complex)


def gen_als(R: float) -> PointSet:
    """Shells +-sqrt(2n), +-i sqrt(2n) up to modulus R, plus the pair +-1."""
    if R < 1:
        raise ValueError("R must be >= 1")
    pts = np.concatenate([_shell_points(R),
                          np.array([1.0 + 0j, -1.0 + 0j])])
    order = _sorted_order(pts)
    return PointSet(pts[order], np.ones(pts.size, dtype=np.int64),
                    family="als", radius=float(R))


def gen_zeros_of_s(R: float) -> PointSet:
    """Zero set of sin(pi z^2/2)/z^2 up to modulus R (the origin is a
    removable singularity, not a zero)."""
    if R < math.sqrt(2.0):
        raise ValueError("R must be >= sqrt(2)")
    pts = _shell_points(R)
    order = _sorted_order(pts)
    return PointSet(pts[order], np.ones(pts.size, dtype=np.int64),
                    family="zeros-of-s", radius=float(R))


def gen_integer_ray(R: float, exponent: float = 1.0) -> PointSet:
    """The set {n^exponent : n >= 1} on the positive real axis, up to R."""
    if R < 1:
        raise ValueError("R must be >= 1")
    n_max = int(math.floor(R ** (1.0 / exponent)))
    pts = (np.arange(1, n_max + 1, dtype=float) ** exponent).astype(complex)
    return PointSet(pts, np.ones(pts.size, dtype=np.int64),
                    family="custom", radius=float(R))


@dataclass(frozen=True)
class ShellFamily:
    """Lazy description of the sqrt-shell families, for radii far beyond what
    can be materialized (the full family has ~2 r^2 points inside |z| <= r).

    Statistics accept this in place of a PointSet and stream over shells in
    chunks; per-shell grouping keeps the exact four-fold cancellations.
    """

    n_max: int
    include_real: bool = True
    include_imaginary: bool = True
    chunk: int = 1 << 22

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if not (self.include_real or self.include_imaginary):
            raise ValueError("family must contain at least one axis")

    @property
    def points_per_shell(self) -> int:
        return 2 * self.include_real + 2 * self.include_imaginary

    def radius(self) -> float:
        return math.sqrt(2.0 * self.n_max)

    def shell_power_coeffs(self, rho: int) -> tuple[float, float]:
        """(real, imag) parts of sum over one unit shell of (unit)^-rho,
        where the units are the shell directions present in the family.

        These are exact small integers: the real pair contributes
        1 + (-1)^rho and the imaginary pair i^-rho + (-i)^-rho = 2 cos(rho pi/2).
        """
        cr = ci = 0.0
        if self.include_real:
            cr += 1.0 + (-1.0) ** rho
        if self.include_imaginary:
            k = rho % 4
            cr += {0: 2.0, 1: 0.0, 2: -2.0, 3: 0.0}[k]
            # odd rho leaves an imaginary residue only when a single axis is
            # present; for the two-point imaginary pair it cancels exactly.
        return cr, ci


# --------------------------------------------------------------------------
# perturbations
# --------------------------------------------------------------------------

Spec = Union[str, tuple, Callable[[complex], float], Mapping]


def _shell_index(g: complex) -> int:
    """Shell number n for |g| = sqrt(2n); 0 if g is not a shell point."""
    h = abs(g) ** 2 / 2.0
    n = int(round(h))
    if n >= 1 and abs(h - n) < 1e-9:
        return n
    return 0


def _resolve_spec(spec: Spec, base: np.ndarray, family: str) -> np.ndarray:
    if spec is None or spec == "zero" or spec == ("zero",):
        return np.zeros(base.size)
    if isinstance(spec, tuple) and spec and spec[0] == "inverse-square":
        c = float(spec[1])
        a2 = np.abs(base) ** 2
        out = np.zeros(base.size)
        nz = a2 > 0
        out[nz] = c / a2[nz]  # the origin is exempt: its value stays 0
        return out
    if isinstance(spec, tuple) and spec and spec[0] == "shell":
        if family not in ("als", "zeros-of-s"):
            raise ValueError("shell schedules apply to shell families only")
        sched = spec[1]
        f = sched if callable(sched) else (lambda n, d=float(sched): d / n)
        out = np.zeros(base.size)
        on_pos_real = (base.imag == 0) & (base.real > 0)
        for i in np.nonzero(on_pos_real)[0]:
            n = _shell_index(base[i])
            if n >= 1:
                out[i] = float(f(n))
        return out
    if isinstance(spec, Mapping) or (isinstance(spec, tuple) and spec
                                     and spec[0] == "table"):
        table = spec if isinstance(spec, Mapping) else spec[1]
        lut = {complex(k): float(v) for k, v in table.items()}
        return np.array([lut.get(complex(g), 0.0) for g in base])
    if callable(spec):
        out = np.array([float(spec(complex(g))) for g in base])
        if not np.all(np.isfinite(out)):
            bad = base[~np.isfinite(out)][0]
            raise ValueError(f"perturbation spec undefined at base point {bad}")
        return out
    raise ValueError(f"unrecognized perturbation spec: {spec!r}")


def perturb(base: PointSet, delta_spec: Spec = "zero",
            theta_spec: Spec = "zero", on_collision: str = "raise"
            ) -> PerturbedSet:
    """Apply lambda = gamma * exp(delta) * exp(i*theta) pointwise.

    Built-in specs: ``"zero"``; ``("inverse-square", c)`` for c/|gamma|^2
    (the origin is exempt); ``("shell", d)`` for d/n at +sqrt(2n) on shell
    families (or a callable n -> value); ``("table", {point: value})`` with
    missing points defaulting to 0; or any callable on base points.

    Exactly colliding perturbed points are flagged as an error rather than
    merged (pass ``on_collision="keep"`` to build the degenerate set anyway,
    e.g. to show a separation checker failing).
    """
    if base.family not in ("gamma-nu", "als", "zeros-of-s"):
        raise ValueError("perturb expects a generated family")
    if np.any(base.multiplicities != 1):
        raise ValueError("base families are simple point sets")
    g = base.points
    delta = _resolve_spec(delta_spec, g, base.family)
    theta = _resolve_spec(theta_spec, g, base.family)
    at_origin = g == 0
    if np.any(at_origin & ((delta != 0) | (theta != 0))):
        raise ValueError("the origin admits no multiplicative perturbation")
    lam = g * np.exp(delta) * np.exp(1j * theta)
    if np.unique(lam).size != lam.size:
        if on_collision == "raise":
            raise ValueError("perturbation collides two points")
        # "keep": leave the collision in place for downstream checkers
    a2 = np.abs(g) ** 2
    family = "lattice" if base.family == "gamma-nu" else base.family
    return PerturbedSet(
        base=g, delta=delta, theta=theta, points=lam, family=family,
        nu=base.nu, radius=base.radius,
        sup_gamma2_delta=float(np.max(a2 * np.abs(delta), initial=0.0)),
        sup_gamma2_theta=float(np.max(a2 * np.abs(theta), initial=0.0)))


def _coords(s: AnySet) -> tuple[np.ndarray, np.ndarray]:
    """(points, multiplicities) of either set kind, base-sorted order."""
    if isinstance(s, PerturbedSet):
        return s.points, np.ones(s.points.size, dtype=np.int64)
    return s.points, s.multiplicities


# --------------------------------------------------------------------------
# separation statistics
# --------------------------------------------------------------------------

def separation(s: AnySet) -> float:
    """Minimum pairwise distance over the window."""
    pts, mult = _coords(s)
    if int(mult.sum()) < 2:
        raise ValueError("separation needs at least 2 points")
    if np.any(mult > 1):
        return 0.0
    if np.unique(pts).size != pts.size:
        return 0.0
    xy = np.column_stack([pts.real, pts.imag])
    d, _ = cKDTree(xy).query(xy, k=2)
    return float(d[:, 1].min())


def als_separation_constant(s: PerturbedSet) -> float:
    """Best c with |lambda - lambda'| >= c / min(|gamma|, |gamma'|) over the
    window, i.e. the minimum of |lambda - lambda'| * min(|gamma|, |gamma'|).
    """
    if not isinstance(s, PerturbedSet) or s.family not in ("als", "zeros-of-s"):
        raise ValueError("the weighted separation constant is defined for "
                         "shell families")
    lam, g = s.points, np.abs(s.base)
    if lam.size < 2:
        raise ValueError("window must contain at least 2 points")
    xy = np.column_stack([lam.real, lam.imag])
    tree = cKDTree(xy)
    k = min(8, lam.size)
    d, idx = tree.query(xy, k=k)
    gmin = np.minimum(g[:, None], g[idx])
    cand = d[:, 1:] * gmin[:, 1:]
    c0 = float(cand.min())
    # Verification sweep: any pair beating c0 must lie within c0/|gamma| of a
    # point, so a ball query per point makes the k-NN candidate exact.
    radius = c0 / np.maximum(g, 1e-300)
    best = c0
    for i, nbrs in enumerate(tree.query_ball_point(xy, r=radius)):
        for j in nbrs:
            if j == i:
                continue
            val = abs(lam[i] - lam[j]) * min(g[i], g[j])
            if val < best:
                best = val
    return best


# --------------------------------------------------------------------------
# counting and power sums
# --------------------------------------------------------------------------

def counting_function(s: Union[AnySet, ShellFamily], radii) -> RadialStats:
    """n(r): number of points with |z| <= r, counting multiplicity."""
    radii = np.asarray(radii, dtype=float)
    if isinstance(s, ShellFamily):
        n_shell = np.minimum(np.floor(radii ** 2 / 2.0), s.n_max)
        return RadialStats(radii, s.points_per_shell * n_shell, "counting")
    pts, mult = _coords(s)
    a = np.abs(pts)
    order = np.argsort(a, kind="stable")
    a, m = a[order], mult[order]
    cum = np.concatenate([[0], np.cumsum(m)])
    vals = cum[np.searchsorted(a, radii, side="right")]
    return RadialStats(radii, vals.astype(float), "counting")


def _int_power(z: np.ndarray, k: int) -> np.ndarray:
    """z**k by binary powering with componentwise multiplies.

    The component arithmetic (x*x' - y*y', x*y' + y*x' as separate numpy
    ops) negates and swaps exactly under z -> -z and z -> iz, so symmetric
    point sets keep their cancellations to the last bit. Neither pow() nor
    numpy's fused complex-multiply kernel guarantees that: a compiler may
    contract x*x - y*y to an fma, which breaks the sign antisymmetry.
    """
    x, y = z.real, z.imag
    out_r, out_i = np.ones_like(x), np.zeros_like(x)
    while k:
        if k & 1:
            out_r, out_i = out_r * x - out_i * y, out_r * y + out_i * x
        k >>= 1
        if k:
            x, y = x * x - y * y, x * y + y * x
    out = np.empty(x.shape, dtype=complex)
    out.real, out.imag = out_r, out_i
    return out


def power_sum(s: AnySet, sexp: float, r: float) -> float:
    """sum of |z|^(-sexp) over 0 < |z| <= r (multiplicity counted)."""
    if sexp <= 0:
        raise ValueError("exponent must be positive")
    pts, mult = _coords(s)
    a = np.abs(pts)
    sel = (a > 0) & (a <= r)
    a = np.sort(a[sel].repeat(mult[sel]))
    return float(np.sum(a ** (-sexp)))


def power_sum_curve(s: Union[AnySet, ShellFamily], sexp: float,
                    radii) -> RadialStats:
    radii = np.asarray(radii, dtype=float)
    if sexp <= 0:
        raise ValueError("exponent must be positive")
    if isinstance(s, ShellFamily):
        vals = _family_curves(s, radii, powers=[sexp])[0]
        return RadialStats(radii, vals, "power-sum")
    pts, mult = _coords(s)
    a = np.abs(pts)
    sel = a > 0
    a = a[sel].repeat(mult[sel])
    a = np.sort(a)
    terms = a ** (-sexp)
    cum = np.concatenate([[0.0], np.cumsum(terms)])
    vals = cum[np.searchsorted(a, radii, side="right")]
    return RadialStats(radii, vals, "power-sum")


def lindelof_sum(s: AnySet, rho: int, r: float) -> complex:
    """S(r) = sum of z^(-rho) over 0 < |z| <= r.

    Summed with math.fsum on real and imaginary parts separately, so sets
    closed under z -> iz cancel to exactly zero at rho = 2.
    """
    if rho < 1 or rho != int(rho):
        raise ValueError("rho must be a positive integer")
    pts, mult = _coords(s)
    a = np.abs(pts)
    sel = (a > 0) & (a <= r)
    pts, mult = pts[sel], mult[sel]
    order = _sorted_order(pts)
    pts, mult = pts[order], mult[order]
    vals = mult * (1.0 / _int_power(pts, int(rho)))
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


def lindelof_curve(s: Union[AnySet, ShellFamily], rho: int,
                   radii) -> tuple[RadialStats, RadialStats]:
    """S(r) on a radius grid, as (real part, imaginary part) curves."""
    radii = np.asarray(radii, dtype=float)
    if rho < 1 or rho != int(rho):
        raise ValueError("rho must be a positive integer")
    if isinstance(s, ShellFamily):
        re = _family_curves(s, radii, lindelof_rho=int(rho))[0]
        im = np.zeros_like(re)
        return (RadialStats(radii, re, "lindelof-real"),
                RadialStats(radii, im, "lindelof-imag"))
    pts, mult = _coords(s)
    a = np.abs(pts)
    sel = a > 0
    pts, mult = pts[sel], mult[sel]
    order = _sorted_order(pts)
    pts, mult = pts[order], mult[order]
    vals = mult * (1.0 / _int_power(pts, int(rho)))
    cuts = np.searchsorted(np.abs(pts), radii, side="right")
    re = [math.fsum(vals.real[:c]) for c in cuts]
    im = [math.fsum(vals.imag[:c]) for c in cuts]
    return (RadialStats(radii, np.array(re), "lindelof-real"),
            RadialStats(radii, np.array(im), "lindelof-imag"))


def _family_curves(fam: ShellFamily, radii: np.ndarray,
                   powers: Sequence[float] = (),
                   lindelof_rho: int | None = None) -> list[np.ndarray]:
    """Cumulative shell-family statistics at the given radii, streamed in
    chunks of shells so that n_max ~ 1e8 stays cheap.

    Radii below the first shell get 0; each radius is finalized in the chunk
    containing its shell cutoff."""
    cut = np.minimum(np.floor(radii ** 2 / 2.0).astype(np.int64), fam.n_max)
    npts = fam.points_per_shell
    n_stats = len(powers) + (lindelof_rho is not None)
    outs = [np.zeros(radii.size) for _ in range(n_stats)]
    acc = [0.0] * n_stats
    lo = 1
    while lo <= fam.n_max:
        hi = min(lo + fam.chunk - 1, fam.n_max)
        a2 = 2.0 * np.arange(lo, hi + 1, dtype=float)
        chunk_vals = [npts * a2 ** (-sexp / 2.0) for sexp in powers]
        if lindelof_rho is not None:
            cr, _ = fam.shell_power_coeffs(lindelof_rho)
            chunk_vals.append(cr * a2 ** (-lindelof_rho / 2.0))
        csums = [np.concatenate([[0.0], np.cumsum(v)]) for v in chunk_vals]
        for j in np.nonzero((cut >= lo) & (cut <= hi))[0]:
            for t in range(n_stats):
                outs[t][j] = acc[t] + csums[t][cut[j] - lo + 1]
        for t in range(n_stats):
            acc[t] += csums[t][-1]
        lo = hi + 1
    return outs


@dataclass(frozen=True)
class ExponentFit:
    value: float
    residual: float


def convergence_exponent(s: Union[AnySet, ShellFamily]) -> ExponentFit:
    """Least-squares slope of log n(r) against log r over the top decade."""
    if isinstance(s, ShellFamily):
        r_hi = math.sqrt(2.0 * s.n_max)
    else:
        pts, mult = _coords(s)
        if int(mult.sum()) < 100:
            raise ValueError("insufficient span: need at least 100 points")
        a = np.abs(pts)
        a = a[a > 0]
        if a.max() < 10.0 * a.min():
            raise ValueError("insufficient span: need a decade of moduli")
        r_hi = float(a.max())
    radii = np.geomspace(r_hi / 10.0, r_hi, 24)
    counts = counting_function(s, radii).values
    x = np.log(radii)
    y = np.log(np.maximum(counts, 1.0))
    coef = np.polyfit(x, y, 1)
    fit = np.polyval(coef, x)
    return ExponentFit(float(coef[0]), float(np.sqrt(np.mean((y - fit) ** 2))))


# --------------------------------------------------------------------------
# perturbation statistics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaStats:
    """D(R) = (1/log R) * sum of delta over |gamma| <= R, with window proxies
    for its liminf/limsup.

    The proxies are local log-slopes of the cumulative delta sum over the top
    half of the grid rather than raw min/max of D(R): D(R) carries an O(1/log R)
    offset from the small-|gamma| part of the sum (about +6.6% at R = 500 for
    the c/|gamma|^2 schedule), while the local slopes converge like a power of
    1/R. Window statistics, not certified limits.
    """

    curve: RadialStats
    delta_hat_proxy: float
    delta_sup_proxy: float


def delta_stats(s: PerturbedSet, radii) -> DeltaStats:
    radii = np.asarray(radii, dtype=float)
    if radii.size < 4:
        raise ValueError("radius grid needs at least 4 points")
    if np.any(radii <= 1.0):
        raise ValueError("radius grid must stay above 1")
    if radii[-1] < 99.0 * radii[0]:
        raise ValueError("radius grid must span at least two decades")
    a = np.abs(s.base)
    order = np.argsort(a, kind="stable")
    a, d = a[order], s.delta[order]
    cum = np.concatenate([[0.0], np.cumsum(d)])
    csum = cum[np.searchsorted(a, radii, side="right")]
    curve = RadialStats(radii, csum / np.log(radii), "delta-sum")
    ln_r = np.log(radii)
    slopes = np.diff(csum) / np.diff(ln_r)
    top = slopes[slopes.size // 2:]
    return DeltaStats(curve, float(top.min()), float(top.max()))


@dataclass(frozen=True)
class ShellDeltaStats:
    """Per-shell sums Delta_k and the two window statistics built on them."""

    delta_k: np.ndarray
    cumulative: RadialStats  # partial sums of Delta_k against shell number
    delta_proxy: float       # |slope| of cum Delta against log n, top half
    avdonin_sup: float       # sup over n of ((n+1)/N) |sum_{k=n+1}^{n+N} Delta_k|
    window: int              # the N used


def shell_delta_stats(s: PerturbedSet, N: int = 1) -> ShellDeltaStats:
    if s.family not in ("als", "zeros-of-s"):
        raise ValueError("shell statistics require a shell family")
    if N < 1:
        raise ValueError("window length N must be >= 1")
    n_max = 0
    shells = np.zeros(s.base.size, dtype=np.int64)
    for i, g in enumerate(s.base):
        shells[i] = _shell_index(g)
        n_max = max(n_max, shells[i])
    delta_k = np.zeros(n_max + 1)
    np.add.at(delta_k, shells, s.delta)
    delta_k = delta_k[1:]  # k = 1 .. n_max; the +-1 pair is not a shell
    cum = np.cumsum(delta_k)
    ks = np.arange(1, n_max + 1, dtype=float)
    curve = RadialStats(np.sqrt(2.0 * ks), cum, "shell-sum")
    # limsup proxy: |least-squares slope| of cum Delta against log n over the
    # top half of a log grid of shell numbers (raw |cum|/log n carries the
    # Euler-Mascheroni-type offset, ~6% at n = 1e4 for the d/n schedule).
    grid = np.unique(np.geomspace(max(2, math.sqrt(n_max)), n_max, 17)
                     .astype(np.int64))
    if grid.size >= 3:
        x = np.log(grid.astype(float))
        y = cum[grid - 1]
        slope = float(np.polyfit(x, y, 1)[0])
    else:
        slope = 0.0
    w = np.concatenate([[0.0], cum])
    n_idx = np.arange(0, n_max - N + 1)
    windows = (n_idx + 1.0) / N * np.abs(w[n_idx + N] - w[n_idx])
    avd = float(windows.max()) if windows.size else 0.0
    return ShellDeltaStats(delta_k, curve, abs(slope), avd, N)


# --------------------------------------------------------------------------
# sectors
# --------------------------------------------------------------------------

def _wrap(a):
    return (a + math.pi) % _TWO_PI - math.pi


def in_sector(z, beta: float, theta: float):
    """Closed symmetric double cone: z or -z within angle theta of beta."""
    if not 0.0 < theta <= math.pi:
        raise ValueError("theta must lie in (0, pi]")
    z = np.asarray(z, dtype=complex)
    d1 = np.abs(_wrap(np.angle(z) - beta))
    d2 = np.abs(_wrap(np.angle(-z) - beta))
    out = np.minimum(d1, d2) <= theta
    return bool(out) if out.ndim == 0 else out


def sector_partition(s: AnySet) -> list[PointSet]:
    """Split by direction into the eight half-open sectors centered at
    k*pi/4 with half-width pi/8, identifying z with -z (symmetric double
    cones). The identification makes cones k and k+4 coincide, so parts
    4..7 come out empty; they are kept so indices match the centers.
    """
    pts, mult = _coords(s)
    parts = [[] for _ in range(8)]
    marks = [[] for _ in range(8)]
    t = np.angle(pts) % math.pi  # fold the double cone: [0, pi)
    t = np.where(t >= math.pi - math.pi / 8, t - math.pi, t)
    k = np.floor((t + math.pi / 8) / (math.pi / 4)).astype(int)
    k = np.clip(k, 0, 3)
    for i in range(pts.size):
        parts[k[i]].append(pts[i])
        marks[k[i]].append(mult[i])
    out = []
    for j in range(8):
        p = np.asarray(parts[j], dtype=complex)
        m = np.asarray(marks[j], dtype=np.int64)
        order = _sorted_order(p)
        out.append(PointSet(p[order], m[order], family="custom"))
    return out


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def points_to_json(s: AnySet) -> str:
    """Stable JSON for point sets: {family, nu?, R, entries:[...]} with
    entries {base:[re,im], delta, theta, lambda:[re,im]}."""
    if isinstance(s, PerturbedSet):
        base, delta, theta, lam = s.base, s.delta, s.theta, s.points
        family, nu, R = s.family, s.nu, s.radius
    else:
        base = lam = s.points.repeat(s.multiplicities)
        delta = theta = np.zeros(base.size)
        family, nu, R = s.family, s.nu, s.radius
    doc = {"family": family, "R": R,
           "entries": [{"base": [g.real, g.imag], "delta": float(d),
                        "theta": float(t), "lambda": [l.real, l.imag]}
                       for g, d, t, l in zip(base, delta, theta, lam)]}
    if nu is not None:
        doc["nu"] = nu
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def points_from_json(text: str) -> AnySet:
    doc = json.loads(text)
    family = doc["family"]
    nu = doc.get("nu")
    R = doc.get("R")
    base = np.array([complex(e["base"][0], e["base"][1])
                     for e in doc["entries"]])
    delta = np.array([float(e["delta"]) for e in doc["entries"]])
    theta = np.array([float(e["theta"]) for e in doc["entries"]])
    lam = np.array([complex(e["lambda"][0], e["lambda"][1])
                    for e in doc["entries"]])
    perturbed = (family == "lattice" or np.any(delta != 0)
                 or np.any(theta != 0) or np.any(lam != base))
    if perturbed:
        a2 = np.abs(base) ** 2
        return PerturbedSet(
            base=base, delta=delta, theta=theta, points=lam,
            family=family if family != "gamma-nu" else "lattice",
            nu=nu, radius=R,
            sup_gamma2_delta=float(np.max(a2 * np.abs(delta), initial=0.0)),
            sup_gamma2_theta=float(np.max(a2 * np.abs(theta), initial=0.0)))
    return make_point_set(base, family=family, nu=nu, radius=R)
