"""Command-line front end.

Exit-code contract: 0 success, 1 mathematical negative (unstable input,
constraint violation, failing suite), 2 usage or parse error.  All JSON
payloads carry "schema": 1 and serialize infinity as the string "inf".
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import continuity, dhym, proplab, stability, toymodel
from .errors import GiskError, IntegrabilityViolation
from .symmfunc import FullCoeffs, GiskCoeffs, sample_level_set

DEFAULT_SEED = 42


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(float(obj))
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    return obj


def _emit(payload):
    print(json.dumps(_jsonable(payload), sort_keys=True))


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_coeffs(path):
    """Reduced {"n","d"} or full {"n","c"} (auto-reduced); returns (c, shift)."""
    obj = _load_json(path)
    n = int(obj["n"])
    if "d" in obj:
        return GiskCoeffs(n, tuple(obj["d"])), None
    full = FullCoeffs(n, tuple(obj["c"]))
    reduced, shift = dhym.reduce_coefficients(full)
    return reduced, shift


def _load_roots(path):
    obj = _load_json(path)
    return stability.RootTuple(int(obj["n"]), tuple(obj["x"]))


def _seed_from(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("GISK_SEED")
    return int(env) if env else DEFAULT_SEED


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args):
    c, shift = _load_coeffs(args.coeffs)
    cert = stability.check_stability(c)
    payload = {
        "schema": 1,
        "n": c.n,
        "d": list(c.d),
        "status": cert.status,
        "roots": list(cert.roots.x) if cert.roots else None,
        "strata": (
            {"dimension": cert.strata.dimension, "signature": list(cert.strata.signature)}
            if cert.strata
            else None
        ),
    }
    if shift is not None:
        payload["shift"] = shift
    _emit(payload)
    return 0 if cert.is_strictly_stable else 1


def cmd_phi(args):
    c, _ = _load_coeffs(args.coeffs)
    roots = stability.phi(c)
    payload = {"schema": 1, "n": c.n, "x": list(roots.x)}
    if args.roundtrip:
        back = stability.psi(roots)
        err = max(
            abs(a - b) / max(1.0, abs(a), abs(b)) for a, b in zip(c.d, back.d)
        )
        payload["roundtrip_error"] = err
    _emit(payload)
    return 0


def cmd_psi(args):
    roots = _load_roots(args.roots)
    c = stability.psi(roots)
    payload = {"schema": 1, "n": c.n, "d": list(c.d)}
    if args.roundtrip:
        back = stability.phi(c)
        err = max(
            abs(a - b) / max(1.0, abs(a), abs(b)) for a, b in zip(roots.x, back.x)
        )
        payload["roundtrip_error"] = err
    _emit(payload)
    return 0


def cmd_tee(args):
    c, _ = _load_coeffs(args.coeffs)
    _emit({"schema": 1, "n": c.n, "tee": stability.tee(c)})
    return 0


def cmd_polyhedron(args):
    c, _ = _load_coeffs(args.c)
    d, _ = _load_coeffs(args.d)
    ok = stability.in_polyhedron(c, d)
    _emit({"schema": 1, "in_polyhedron": ok})
    return 0 if ok else 1


def cmd_dominance(args):
    c, _ = _load_coeffs(args.c)
    d, _ = _load_coeffs(args.d)
    verdict = stability.dominance(c, d)
    _emit(
        {
            "schema": 1,
            "dominates": verdict.dominates,
            "per_level_slack": list(verdict.per_level_slack),
        }
    )
    return 0 if verdict.dominates else 1


def cmd_dhym(args):
    spec = dhym.DhymSpec(args.n, args.theta)
    full = dhym.dhym_coefficients(spec)
    payload = {"schema": 1, "n": full.n, "c": list(full.c)}
    if args.reduce:
        reduced, shift = dhym.reduce_coefficients(full)
        payload["d"] = list(reduced.d)
        payload["shift"] = shift
    _emit(payload)
    return 0


def cmd_reduce(args):
    obj = _load_json(args.coeffs)
    full = FullCoeffs(int(obj["n"]), tuple(obj["c"]))
    reduced, shift = dhym.reduce_coefficients(full)
    _emit({"schema": 1, "n": reduced.n, "d": list(reduced.d), "shift": shift})
    return 0


def _report_payload(report):
    return {
        "schema": 1,
        "which": report.which,
        "all_pass": report.all_pass,
        "endpoint_check": report.endpoint_check,
        "samples": [
            {
                "t": s.t,
                "coeffs": [list(cf.d) for cf in s.coeffs],
                "topological": s.topological,
                "boundary": s.boundary,
                "positivstellensatz": s.positivstellensatz,
                "dominance": s.dominance,
                "passes": s.passes,
            }
            for s in report.samples
        ],
    }


def cmd_path(args):
    model = toymodel.ToyModel.from_json(open(args.model, encoding="utf-8").read())
    d, _ = _load_coeffs(args.coeffs)
    grid = [i / (args.grid - 1) for i in range(args.grid)]
    try:
        report = continuity.verify_path(d, model, args.which, grid, ell=args.ell)
    except IntegrabilityViolation as exc:
        _emit({"schema": 1, "error": "integrability", "detail": str(exc)})
        return 1
    _emit(_report_payload(report))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(continuity.report_csv(report, d.n))
    return 0 if report.all_pass else 1


def cmd_figures(args):
    lines = []
    if args.which == "map21":
        # straight rays x_0 = (16/t) x_1 and their bent coefficient images
        lines.append("ray_t,x1,x0,c1,c0")
        for t in range(4, 13):
            ratio = 16.0 / t
            for i in range(1, 61):
                x1 = 0.05 * i
                x0 = ratio * x1
                c1 = x1 * x1
                c0 = x0**3 - 3.0 * x0 * c1
                lines.append(f"{t},{x1!r},{x0!r},{c1!r},{c0!r}")
    elif args.which == "polyhedron22":
        d = GiskCoeffs(3, (args.d1, args.d0))
        stability.ensure_strictly_stable(d)
        lines.append("curve,c1,c0")
        for i in range(121):
            c1 = args.d1 * 1.5 * i / 120.0
            lines.append(f"boundary,{c1!r},{(-2.0 * c1 ** 1.5)!r}")
        lo = -2.0 * args.d1**1.5
        for i in range(121):
            c0 = lo + (args.d0 * 1.5 - lo) * i / 120.0
            lines.append(f"facet,{args.d1!r},{c0!r}")
    elif args.which == "path41":
        d = GiskCoeffs(4, (args.d2, args.d1, args.d0))
        if d.coeff(1) >= 0:
            print("path41 requires d_1 < 0", file=sys.stderr)
            return 2
        mu = args.mu if args.mu is not None else 1.0
        model = toymodel.ToyModel(4, (mu,) * 4, ((1.0, 1.0),))
        omega = toymodel.intersection_numbers(model)
        ell = args.ell if args.ell is not None else continuity.default_ell(d)
        lines.append("t,c2,c1,c0")
        for i in range(args.grid):
            t = i / (args.grid - 1)
            cf = continuity.fractional_power_path(d, omega, t, ell)
            if cf is None:
                continue
            lines.append(f"{t!r},{cf.coeff(2)!r},{cf.coeff(1)!r},{cf.coeff(0)!r}")
    print("\n".join(lines))
    return 0


def cmd_verify(args):
    if args.samples < 1:
        print("--samples must be >= 1", file=sys.stderr)
        return 2
    cfg = proplab.SuiteConfig(
        master_seed=_seed_from(args),
        samples_per_case=args.samples,
        dims=tuple(int(v) for v in args.dims.split(",")),
        tolerance=args.tolerance,
    )
    names = proplab.SUITE_NAMES if args.suite == "all" else (args.suite,)
    results = [proplab.run_suite(name, cfg, jobs=args.jobs) for name in names]
    _emit({"schema": 1, "results": [r.to_dict() for r in results]})
    if all(r.passed for r in results):
        return 0
    for r in results:
        for f in r.failures[:5]:
            print(
                f"replay: gisk verify --suite {r.suite_name} --seed "
                f"{cfg.master_seed} --samples {cfg.samples_per_case} --dims "
                f"{','.join(map(str, cfg.dims))}  # case n={f.n} idx={f.case_index}",
                file=sys.stderr,
            )
    return 1


def cmd_levelset(args):
    c, _ = _load_coeffs(args.coeffs)
    rng = np.random.default_rng(_seed_from(args))
    pts = sample_level_set(c, args.count, rng)
    if args.format == "csv":
        print(",".join(f"lam{i + 1}" for i in range(c.n)))
        for row in pts:
            print(",".join(repr(float(v)) for v in row))
    else:
        _emit({"schema": 1, "n": c.n, "points": [list(p) for p in pts]})
    return 0


# ---------------------------------------------------------------------------


def _build_parser():
    ap = argparse.ArgumentParser(prog="gisk", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="stability certificate for a coefficient file")
    p.add_argument("coeffs")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("phi", help="coefficients -> derivative root tuple")
    p.add_argument("coeffs")
    p.add_argument("--roundtrip", action="store_true")
    p.set_defaults(fn=cmd_phi)

    p = sub.add_parser("psi", help="root tuple -> coefficients")
    p.add_argument("roots")
    p.add_argument("--roundtrip", action="store_true")
    p.set_defaults(fn=cmd_psi)

    p = sub.add_parser("tee", help="largest admissible scaling T")
    p.add_argument("coeffs")
    p.set_defaults(fn=cmd_tee)

    p = sub.add_parser("polyhedron", help="is c in the admissible polyhedron of d")
    p.add_argument("--c", required=True)
    p.add_argument("--d", required=True)
    p.set_defaults(fn=cmd_polyhedron)

    p = sub.add_parser("dominance", help="cone dominance verdict")
    p.add_argument("--c", required=True)
    p.add_argument("--d", required=True)
    p.set_defaults(fn=cmd_dominance)

    p = sub.add_parser("dhym", help="expand the dHYM equation at a phase angle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--reduce", action="store_true")
    p.set_defaults(fn=cmd_dhym)

    p = sub.add_parser("reduce", help="full coefficients -> reduced + shift")
    p.add_argument("coeffs")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("path", help="build and verify a continuity path")
    p.add_argument("model")
    p.add_argument("coeffs")
    p.add_argument("--which", choices=("thm41", "p42", "eq48"), default="thm41")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--ell", type=float, default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=cmd_path)

    p = sub.add_parser("figures", help="plottable curve samples (CSV)")
    p.add_argument("--which", choices=("map21", "polyhedron22", "path41"), required=True)
    p.add_argument("--d2", type=float, default=4.0)
    p.add_argument("--d1", type=float, default=1.0)
    p.add_argument("--d0", type=float, default=2.0)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--ell", type=float, default=None)
    p.add_argument("--grid", type=int, default=101)
    p.set_defaults(fn=cmd_figures)

    p = sub.add_parser("verify", help="run the seeded property suites")
    p.add_argument("--suite", default="all", choices=("all",) + proplab.SUITE_NAMES)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--dims", default="3,4,5,6")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("levelset", help="emit sampled level-set points")
    p.add_argument("coeffs")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_levelset)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GiskError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
