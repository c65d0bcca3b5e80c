"""Command-line front end.

Subcommands: ``gen`` (point families to JSON), ``eval`` (grid evaluation of
the products to CSV), ``norm`` (integral estimates to JSON), ``check``
(theorem checkers on a saved point file), ``verify`` (self-contained checker
runs), and ``report`` (bundle saved artifacts into a summary with figures).

Exit codes: 0 success / verdict passed, 1 a verdict failed, 2 usage or
configuration errors, 3 evaluation outside a product's trusted disk.

Every file-writing run also writes ``<base>.manifest.json`` recording the
resolved configuration; ``--manifest FILE`` replays one, with explicit flags
taking precedence and unknown keys rejected.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .measures import (LadderSpec, NuMeasure, QuadratureSpec, fock_p_norm,
                       membership_trend, nu_integral, polar_grid)
from .products import (ALSProductEvaluator, EvaluationDomainError,
                       LatticeProductEvaluator, dist_to_set, eval_closed,
                       log_abs_closed, log_abs_lattice_closed)
from .report import bundle_report
from .sequences import (PerturbedSet, ShellFamily, gen_als, gen_gamma_nu,
                        gen_integer_ray, gen_zeros_of_s, make_point_set,
                        perturb, points_from_json, points_to_json)
from .verify import (check_theorem1, check_theorem2, check_theorem3,
                     envelope_verify_als, envelope_verify_lattice,
                     lindelof_check, sector_lemma_demo, zero_excess_demo)

SCHEMA_VERSION = 1

_MANIFEST_TOP_KEYS = {"schema_version", "command", "config", "outputs"}

# configuration keys each command accepts from a manifest
_COMMAND_KEYS = {
    "gen": {"family", "nu", "radius", "exponent", "delta", "theta"},
    "eval": {"points", "closed", "w", "family", "nu", "radius", "exponent",
             "delta", "theta", "truncation", "grid"},
    "norm": {"points", "closed", "w", "family", "nu", "radius", "exponent",
             "delta", "theta", "truncation", "p", "measure", "r_max",
             "count"},
    "check": {"points", "theorem", "p", "N", "eps"},
    "verify": {"theorem", "target", "family", "nu", "radius", "exponent",
               "delta", "theta", "p", "N", "eps", "rho", "beta",
               "half_angle", "restrict", "lam", "truncation"},
    "report": {"inputs"},
}


class _UsageError(ValueError):
    pass


def _die(msg: str):
    raise _UsageError(msg)


# --------------------------------------------------------------------------
# manifests
# --------------------------------------------------------------------------

def _known_suffix_base(name: str) -> str:
    for suffix in (".report.json", ".norm.json", ".grid.csv", ".points.json",
                   ".envelope.json", ".manifest.json"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return Path(name).stem


def _emit_manifest(command: str, cfg: dict, outputs: list, anchor: Path):
    doc = {"schema_version": SCHEMA_VERSION, "command": command,
           "config": {k: v for k, v in cfg.items() if v is not None},
           "outputs": [Path(o).name for o in outputs]}
    path = anchor.parent / f"{_known_suffix_base(anchor.name)}.manifest.json"
    path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return path


def _apply_manifest(args: argparse.Namespace, command: str):
    if getattr(args, "manifest", None) is None:
        return
    try:
        doc = json.loads(Path(args.manifest).read_text())
    except (OSError, json.JSONDecodeError) as e:
        _die(f"cannot read manifest: {e}")
    if not isinstance(doc, dict):
        _die("manifest must be a JSON object")
    unknown = set(doc) - _MANIFEST_TOP_KEYS
    if unknown:
        _die(f"unknown manifest keys: {sorted(unknown)}")
    cmd = doc.get("command")
    if cmd is not None and cmd != command:
        _die(f"manifest was written by {cmd!r}, not {command!r}")
    config = doc.get("config", {})
    if not isinstance(config, dict):
        _die("manifest config must be an object")
    allowed = _COMMAND_KEYS[command]
    unknown = set(config) - allowed
    if unknown:
        _die(f"unknown manifest config keys for {command}: "
             f"{sorted(unknown)}")
    for key, val in config.items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)


def _config_of(args: argparse.Namespace, command: str) -> dict:
    return {k: getattr(args, k, None) for k in sorted(_COMMAND_KEYS[command])}


# --------------------------------------------------------------------------
# shared option parsing
# --------------------------------------------------------------------------

def _parse_pspec(text):
    """Perturbation grammar: zero | inverse-square:C | shell:D | table:FILE."""
    if text is None or text == "zero":
        return "zero"
    if text.startswith("inverse-square:"):
        return ("inverse-square", float(text.split(":", 1)[1]))
    if text.startswith("shell:"):
        return ("shell", float(text.split(":", 1)[1]))
    if text.startswith("table:"):
        path = text.split(":", 1)[1]
        doc = json.loads(Path(path).read_text())
        if not isinstance(doc, dict):
            _die("a perturbation table must be a JSON object")
        table = {}
        for key, val in doc.items():
            re_s, _, im_s = key.partition(",")
            table[complex(float(re_s), float(im_s or 0.0))] = float(val)
        return ("table", table)
    _die(f"unrecognized perturbation spec {text!r}")


def _parse_complex(text) -> complex:
    re_s, _, im_s = str(text).partition(",")
    return complex(float(re_s), float(im_s or 0.0))


def _build_set(family: str, *, nu=None, radius=None, exponent=None,
               delta=None, theta=None):
    if family is None:
        _die("a point family is required (--family)")
    if radius is None:
        _die("a window radius is required (--radius)")
    radius = float(radius)
    if family == "gamma-nu":
        base = gen_gamma_nu(float(nu or 0.0), radius)
    elif family == "als":
        base = gen_als(radius)
    elif family == "zeros-of-s":
        base = gen_zeros_of_s(radius)
    elif family == "integers":
        base = gen_integer_ray(radius, float(exponent or 1.0))
    else:
        _die(f"unknown family {family!r}")
    d_spec = _parse_pspec(delta)
    t_spec = _parse_pspec(theta)
    if d_spec == "zero" and t_spec == "zero":
        return base
    if family == "integers":
        _die("the integer ray takes no perturbation")
    return perturb(base, d_spec, t_spec)


class _Source:
    """Resolved evaluation source: vectorized log magnitude, optional scalar
    log value with argument, the zero set for distances, and the radius cap."""

    def __init__(self, log_abs, scalar, zero_set, r_cap, label):
        self.log_abs = log_abs
        self.scalar = scalar
        self.zero_set = zero_set
        self.r_cap = r_cap
        self.label = label


def _source_from_set(s) -> _Source:
    family = s.family
    if family in ("gamma-nu", "lattice"):
        ev = LatticeProductEvaluator(s)
        return _Source(ev.log_abs, ev.log_complex, ev.set, ev.r_max,
                       "lattice product")
    if family == "als":
        ev = ALSProductEvaluator(s)
        return _Source(ev.log_abs, ev.log_complex, ev.set, ev.r_max,
                       "shell product")
    if family == "zeros-of-s":
        if isinstance(s, PerturbedSet) and (np.any(s.delta != 0)
                                            or np.any(s.theta != 0)):
            _die("no windowed product is defined for perturbed zeros-of-s; "
                 "perturb the als family instead")
        return _Source(lambda z: log_abs_closed("s", z),
                       lambda z: eval_closed("s", z), s, math.inf,
                       "closed form s")
    _die(f"no product is defined for family {family!r}")


def _resolve_source(args, *, need_radius_for_dist: float = 0.0) -> _Source:
    count = sum(x is not None for x in
                (getattr(args, "points", None), getattr(args, "closed", None),
                 getattr(args, "family", None)))
    if count != 1:
        _die("give exactly one source: --points, --closed, or --family")
    if getattr(args, "points", None) is not None:
        s = points_from_json(Path(args.points).read_text())
        return _source_from_set(s)
    if getattr(args, "closed", None) is not None:
        name = args.closed
        r_edge = need_radius_for_dist + 2.0
        if name in ("s",):
            zs = gen_zeros_of_s(max(r_edge, 2.0))
            return _Source(lambda z: log_abs_closed("s", z),
                           lambda z: eval_closed("s", z), zs, math.inf,
                           "closed form s")
        if name in ("S", "G-Gamma", "G_Gamma"):
            zs = gen_als(max(r_edge, 2.0))
            return _Source(lambda z: log_abs_closed("S", z),
                           lambda z: eval_closed("S", z), zs, math.inf,
                           "closed form S")
        if name == "kernel":
            if getattr(args, "w", None) is None:
                _die("the kernel needs --w RE,IM")
            w = _parse_complex(args.w)
            return _Source(lambda z: log_abs_closed("kernel", z, w=w),
                           lambda z: eval_closed("kernel", z, w=w),
                           None, math.inf, f"kernel at {w}")
        if name == "lattice":
            nu = float(getattr(args, "nu", None) or 0.0)
            zs = gen_gamma_nu(nu, max(r_edge, 2.0))
            return _Source(lambda z: log_abs_lattice_closed(z, nu),
                           None, zs, math.inf, "closed lattice product")
        _die(f"unknown closed form {name!r}")
    s = _build_set(args.family, nu=getattr(args, "nu", None),
                   radius=getattr(args, "radius", None),
                   exponent=getattr(args, "exponent", None),
                   delta=getattr(args, "delta", None),
                   theta=getattr(args, "theta", None))
    if getattr(args, "truncation", None) is not None and \
            s.family in ("gamma-nu", "lattice"):
        ev = LatticeProductEvaluator(s, r_max=float(args.truncation))
        return _Source(ev.log_abs, ev.log_complex, ev.set, ev.r_max,
                       "lattice product")
    return _source_from_set(s)


# --------------------------------------------------------------------------
# subcommand handlers
# --------------------------------------------------------------------------

def _cmd_gen(args) -> int:
    _apply_manifest(args, "gen")
    s = _build_set(args.family, nu=args.nu, radius=args.radius,
                   exponent=args.exponent, delta=args.delta,
                   theta=args.theta)
    text = points_to_json(s)
    if args.out is None:
        sys.stdout.write(text)
        return 0
    out = Path(args.out)
    out.write_text(text)
    _emit_manifest("gen", _config_of(args, "gen"), [out], out)
    print(f"wrote {out} ({len(s)} points)")
    return 0


def _parse_grid(text):
    parts = str(text).split(":")
    if len(parts) != 4:
        _die("grid must be RMIN:RMAX:NR:NTHETA")
    r0, r1 = float(parts[0]), float(parts[1])
    nr, nt = int(parts[2]), int(parts[3])
    return polar_grid(r0, r1, nr, nt), r1


def _cmd_eval(args) -> int:
    _apply_manifest(args, "eval")
    if args.grid is None:
        _die("--grid RMIN:RMAX:NR:NTHETA is required")
    if args.out is None:
        _die("--out FILE.grid.csv is required")
    grid, r_top = _parse_grid(args.grid)
    src = _resolve_source(args, need_radius_for_dist=r_top)
    z = grid.ravel()
    log_mag = np.asarray(src.log_abs(z), dtype=float)
    if src.scalar is not None:
        arg = np.array([src.scalar(zi).arg for zi in z])
    else:
        arg = np.full(z.size, math.nan)
    wlm = log_mag - 0.5 * math.pi * np.abs(z) ** 2
    if src.zero_set is not None:
        dist = np.asarray(dist_to_set(src.zero_set, z), dtype=float)
    else:
        dist = np.full(z.size, math.inf)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["z_re", "z_im", "log_mag", "arg", "weighted_log_mag",
                     "dist"])
    for i in range(z.size):
        writer.writerow([repr(float(z[i].real)), repr(float(z[i].imag)),
                         repr(float(log_mag[i])), repr(float(arg[i])),
                         repr(float(wlm[i])), repr(float(dist[i]))])
    out = Path(args.out)
    out.write_text(buf.getvalue())
    _emit_manifest("eval", _config_of(args, "eval"), [out], out)
    print(f"wrote {out} ({z.size} rows, {src.label})")
    return 0


def _cmd_norm(args) -> int:
    _apply_manifest(args, "norm")
    p = float(args.p if args.p is not None else 2.0)
    src = _resolve_source(args)
    measure = args.measure or "fock"
    if args.r_max is not None:
        r_max = float(args.r_max)
        if r_max > src.r_cap:
            raise EvaluationDomainError(
                f"source is only trusted for |z| <= {src.r_cap:g}")
        est = fock_p_norm(src.log_abs, p, QuadratureSpec(r_max=r_max))
    else:
        count = int(args.count if args.count is not None else 10)
        if math.isfinite(src.r_cap):
            count = max(2, min(count,
                               int(2 * math.log2(src.r_cap * 0.98 / 4.0))))
        if measure == "fock":
            ladder = LadderSpec(count=count)
            est = membership_trend(src.log_abs, p, ladder)
        else:
            parts = measure.split(":")
            if len(parts) != 3 or parts[0] != "nu":
                _die("measure must be 'fock' or 'nu:ALPHA:BETA'")
            mu = NuMeasure(p, float(parts[1]), float(parts[2]))
            ladder = LadderSpec(count=count, n_theta_scale=16.0,
                                diagonal_refine=True)
            est = nu_integral(src.log_abs, mu, ladder)
    doc = est.to_json_dict()
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        out = Path(args.out)
        out.write_text(text)
        _emit_manifest("norm", _config_of(args, "norm"), [out], out)
    print(f"verdict: {est.verdict} (exponent {est.exponent:.4g})",
          file=sys.stderr)
    return 0 if est.verdict == "converged" else 1


def _run_checker(s, args):
    theorem = int(args.theorem)
    p = float(args.p if args.p is not None else 2.0)
    if theorem == 1:
        return check_theorem1(s, p)
    if theorem == 2:
        return check_theorem2(s, p, N=int(args.N if args.N is not None
                                          else 1))
    if theorem == 3:
        return check_theorem3(s, eps=float(args.eps if args.eps is not None
                                           else 0.1))
    _die("theorem must be 1, 2, or 3")


def _finish_report(rep, args, command: str) -> int:
    print(rep.to_text())
    if getattr(args, "out", None) is not None:
        out = Path(args.out)
        if not out.name.endswith(".report.json"):
            out = out.parent / f"{out.name}.report.json"
        out.write_text(json.dumps(rep.to_json_dict(), sort_keys=True,
                                  indent=1) + "\n")
        _emit_manifest(command, _config_of(args, command), [out], out)
        print(f"wrote {out}", file=sys.stderr)
    return 0 if rep.verdict else 1


def _cmd_check(args) -> int:
    _apply_manifest(args, "check")
    if args.points is None:
        _die("--points FILE is required (use verify for self-generated runs)")
    if args.theorem is None:
        _die("--theorem {1,2,3} is required")
    s = points_from_json(Path(args.points).read_text())
    rep = _run_checker(s, args)
    return _finish_report(rep, args, "check")


_VERIFY_DEFAULTS = {
    ("theorem", 1): {"family": "gamma-nu", "radius": 256.0, "p": 2.0},
    ("theorem", 2): {"family": "als", "radius": 150.0, "p": 2.0, "N": 1},
    ("theorem", 3): {"family": "zeros-of-s", "radius": 200.0},
    ("target", "envelope-lattice"): {"family": "gamma-nu", "radius": 64.0},
    ("target", "envelope-als"): {"family": "als", "radius": 40.0},
    ("target", "zero-excess"): {"family": "gamma-nu", "nu": 0.5,
                                "radius": 64.0, "p": 2.0},
    ("target", "lindelof"): {"family": "zeros-of-s", "radius": 1e4,
                             "rho": 2},
    ("target", "sector"): {"family": "zeros-of-s", "radius": 300.0,
                           "restrict": "real", "beta": 0.0,
                           "half_angle": 0.1},
}


def _cmd_verify(args) -> int:
    _apply_manifest(args, "verify")
    if (args.theorem is None) == (args.target is None):
        _die("give exactly one of --theorem {1,2,3} or --target NAME")
    key = ("theorem", int(args.theorem)) if args.theorem is not None \
        else ("target", args.target)
    if key not in _VERIFY_DEFAULTS:
        _die(f"unknown verify mode {key[1]!r}")
    for name, val in _VERIFY_DEFAULTS[key].items():
        if getattr(args, name, None) is None:
            setattr(args, name, val)

    if key == ("target", "lindelof") and args.family == "zeros-of-s" \
            and _parse_pspec(args.delta) == "zero" \
            and _parse_pspec(args.theta) == "zero":
        # stream the family: the full set at radius 1e4 has ~2e8 points
        n_max = int(math.floor(float(args.radius) ** 2 / 2.0))
        s = ShellFamily(n_max=n_max)
    else:
        s = _build_set(args.family, nu=args.nu, radius=args.radius,
                       exponent=args.exponent, delta=args.delta,
                       theta=args.theta)

    if key[0] == "theorem":
        rep = _run_checker(s, args)
        return _finish_report(rep, args, "verify")

    target = key[1]
    if target in ("envelope-lattice", "envelope-als"):
        if target == "envelope-lattice":
            fit = envelope_verify_lattice(s)
        else:
            fit = envelope_verify_als(s)
        print(f"envelope fit ({target}): m_fit={fit.m_fit:.4g} "
              f"ratios [{fit.min_ratio:.4g}, {fit.max_ratio:.4g}] "
              f"diagonal slope={fit.diagonal_slope:.4g} "
              f"n={fit.n_points}")
        print(f"verdict: {'PASS' if fit.passed else 'FAIL'}")
        if args.out is not None:
            out = Path(args.out)
            if not out.name.endswith(".envelope.json"):
                out = out.parent / f"{out.name}.envelope.json"
            out.write_text(json.dumps(fit.to_json_dict(), sort_keys=True,
                                      indent=1) + "\n")
            _emit_manifest("verify", _config_of(args, "verify"), [out], out)
        return 0 if fit.passed else 1
    if target == "zero-excess":
        lam = None if args.lam is None else _parse_complex(args.lam)
        rep = zero_excess_demo(s, float(args.p), lam=lam)
        return _finish_report(rep, args, "verify")
    if target == "lindelof":
        rep = lindelof_check(s, rho=int(args.rho))
        return _finish_report(rep, args, "verify")
    if target == "sector":
        if args.restrict == "real":
            pts = s.points[s.points.imag == 0]
        elif args.restrict == "imag":
            pts = s.points[s.points.real == 0]
        else:
            pts = s.points
        sub = make_point_set(pts, family="custom")
        rep = sector_lemma_demo(sub, float(args.beta),
                                float(args.half_angle))
        return _finish_report(rep, args, "verify")
    _die(f"unknown target {target!r}")


def _cmd_report(args) -> int:
    _apply_manifest(args, "report")
    if not args.inputs:
        _die("at least one input artifact is required")
    missing = [p for p in args.inputs if not Path(p).exists()]
    if missing:
        _die(f"missing inputs: {missing}")
    out_dir = Path(args.out_dir)
    summary = bundle_report(args.inputs, out_dir)
    _emit_manifest("report", _config_of(args, "report"),
                   [out_dir / "summary.json", out_dir / "summary.csv"],
                   out_dir / "summary.json")
    n_fig = sum("figure" in a for a in summary["artifacts"])
    print(f"wrote {out_dir}/summary.json, summary.csv, {n_fig} figure(s)")
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_family_options(sp, with_perturbation=True):
    sp.add_argument("--family", "--set", dest="family",
                    choices=["gamma-nu", "als", "zeros-of-s", "integers"])
    sp.add_argument("--nu", type=float)
    sp.add_argument("--radius", type=float)
    sp.add_argument("--exponent", type=float,
                    help="ray spacing exponent for --family integers")
    if with_perturbation:
        sp.add_argument("--delta", help="zero | inverse-square:C | shell:D "
                                        "| table:FILE")
        sp.add_argument("--theta", help="same grammar as --delta")


def _add_source_options(sp):
    sp.add_argument("--points", help="point-set JSON written by gen")
    sp.add_argument("--closed", help="closed form: s | S | kernel | lattice")
    sp.add_argument("--w", help="kernel parameter RE,IM")
    _add_family_options(sp)
    sp.add_argument("--truncation", type=float,
                    help="evaluation radius cap for the lattice window")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockzeros",
        description="Zero sets of Gaussian-weighted entire functions: "
                    "generators, windowed products, norm estimates, and "
                    "stability checkers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a point family as JSON")
    _add_family_options(p_gen)
    p_gen.add_argument("--out", help="output file (stdout if omitted)")
    p_gen.add_argument("--manifest", help="replay a saved manifest")
    p_gen.set_defaults(func=_cmd_gen)

    p_eval = sub.add_parser("eval", help="evaluate a product on a polar grid")
    _add_source_options(p_eval)
    p_eval.add_argument("--grid", help="RMIN:RMAX:NR:NTHETA")
    p_eval.add_argument("--out", help="output CSV (…grid.csv)")
    p_eval.add_argument("--manifest", help="replay a saved manifest")
    p_eval.set_defaults(func=_cmd_eval)

    p_norm = sub.add_parser("norm", help="integral estimate / membership "
                                         "trend")
    _add_source_options(p_norm)
    p_norm.add_argument("--p", type=float)
    p_norm.add_argument("--measure", help="fock (default) or nu:ALPHA:BETA")
    p_norm.add_argument("--r-max", dest="r_max", type=float,
                        help="fixed-disk quadrature instead of a ladder")
    p_norm.add_argument("--count", type=int, help="ladder rung count")
    p_norm.add_argument("--out", help="output JSON (…norm.json)")
    p_norm.add_argument("--manifest", help="replay a saved manifest")
    p_norm.set_defaults(func=_cmd_norm)

    p_check = sub.add_parser("check", help="run a theorem checker on a "
                                           "saved point file")
    p_check.add_argument("--points")
    p_check.add_argument("--theorem", type=int, choices=[1, 2, 3])
    p_check.add_argument("--p", type=float)
    p_check.add_argument("--N", type=int, help="shell averaging window")
    p_check.add_argument("--eps", type=float,
                         help="auxiliary exponent offset for theorem 3")
    p_check.add_argument("--out", help="report base name (…report.json)")
    p_check.add_argument("--manifest", help="replay a saved manifest")
    p_check.set_defaults(func=_cmd_check)

    p_ver = sub.add_parser("verify", help="self-contained checker run")
    p_ver.add_argument("--theorem", type=int, choices=[1, 2, 3])
    p_ver.add_argument("--target",
                       choices=["envelope-lattice", "envelope-als",
                                "zero-excess", "lindelof", "sector"])
    _add_family_options(p_ver)
    p_ver.add_argument("--truncation", type=float)
    p_ver.add_argument("--p", type=float)
    p_ver.add_argument("--N", type=int)
    p_ver.add_argument("--eps", type=float)
    p_ver.add_argument("--rho", type=int)
    p_ver.add_argument("--lam", help="zero to divide out, RE,IM")
    p_ver.add_argument("--beta", type=float, help="sector axis angle")
    p_ver.add_argument("--half-angle", dest="half_angle", type=float)
    p_ver.add_argument("--restrict", choices=["none", "real", "imag"])
    p_ver.add_argument("--out", help="report base name")
    p_ver.add_argument("--manifest", help="replay a saved manifest")
    p_ver.set_defaults(func=_cmd_verify)

    p_rep = sub.add_parser("report", help="bundle artifacts into a summary "
                                          "with figures")
    p_rep.add_argument("--inputs", nargs="+")
    p_rep.add_argument("--out-dir", dest="out_dir", default="report")
    p_rep.add_argument("--manifest", help="replay a saved manifest")
    p_rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EvaluationDomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
