"""Command-line surface.

Two families of subcommands:

    lefpen pencil {validate, hurwitz, matching, gamma-check}
    lefpen verify {cutoff, deform, localtrans, radial}

Reports are JSON on stdout (sorted keys, so identical inputs give
byte-identical output); --out redirects the report to a file.  Exit
codes: 0 success / verified, 1 a check ran and failed, 2 usage or input
error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .words import RankMismatch, braid_from_str, braid_to_str, word_to_str
from .fiber import ModelMismatch, UnsupportedCycle, cycle_to_json
from .pencil import (
    arc_labels,
    automorphism_from_json,
    classify_arc,
    enumerate_arcs,
    hurwitz_apply,
    in_gamma_detail,
    pencil_from_json,
    pencil_to_json,
)
from .transversal import (
    MorseModel,
    ThresholdError,
    VerificationError,
    ball_grid,
    build_cutoff,
    deform_grid,
    deform_morse,
    find_good_w0,
    min_admissible_k,
    power_profile,
    radial_map_check,
    random_instance,
    reverify,
    sigma_of,
    solve_w_residual,
    verify_deform_bounds,
)

OK, CHECK_FAILED, USAGE = 0, 1, 2


def _numpy_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError("not JSON serializable: %r" % (obj,))


def _emit(report, out_path):
    text = json.dumps(report, indent=2, sort_keys=True, default=_numpy_default) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(message):
    sys.stderr.write("error: %s\n" % message)
    return USAGE


def _load_pencil(path):
    with open(path) as fh:
        return pencil_from_json(json.load(fh))


def cmd_pencil_validate(args):
    try:
        P = _load_pencil(args.file)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        return _fail("invalid pencil file: %s" % e)
    report = {"ok": True, "r": P.r, "fiber": pencil_to_json(P)["fiber"]}
    if args.closed:
        try:
            closed = P.is_closed()
        except UnsupportedCycle as e:
            return _fail(str(e))
        report["closed"] = closed
        _emit(report, args.out)
        return OK if closed else CHECK_FAILED
    _emit(report, args.out)
    return OK


def cmd_pencil_hurwitz(args):
    try:
        P = _load_pencil(args.file)
        b = braid_from_str(P.r, args.braid)
    except (OSError, ValueError, json.JSONDecodeError) as e:
        return _fail(str(e))
    try:
        Q = hurwitz_apply(b, P)
        preserved = Q.total_monodromy() == P.total_monodromy()
    except (RankMismatch, ModelMismatch, UnsupportedCycle) as e:
        return _fail(str(e))
    report = dict(pencil_to_json(Q))
    report["total_monodromy_preserved"] = preserved
    _emit(report, args.out)
    return OK if preserved else CHECK_FAILED


def cmd_pencil_matching(args):
    try:
        P = _load_pencil(args.file)
    except (OSError, ValueError, json.JSONDecodeError) as e:
        return _fail(str(e))
    if args.max_len < 0:
        return _fail("--max-len must be >= 0")
    rows = []
    for a in enumerate_arcs(P, args.max_len):
        cls = classify_arc(a, P, trust_algebraic=args.trust_algebraic)
        eta1, eta2, s1, s2 = arc_labels(a, P)
        rows.append(
            {
                "base": a.base,
                "carrier": braid_to_str(a.carrier),
                "class": str(cls),
                "supporting_pair": [word_to_str(eta1.word()), word_to_str(eta2.word())],
                "labels": [cycle_to_json(s1), cycle_to_json(s2)],
            }
        )
    rows.sort(key=lambda row: (row["base"], row["carrier"]))
    _emit({"r": P.r, "max_len": args.max_len, "arcs": rows}, args.out)
    return OK


def cmd_pencil_gamma_check(args):
    try:
        P = _load_pencil(args.file)
        with open(args.auto) as fh:
            A = automorphism_from_json(P.fiber, P.r, json.load(fh))
    except (OSError, ValueError, json.JSONDecodeError) as e:
        return _fail(str(e))
    try:
        ok, detail = in_gamma_detail(A, P)
    except (RankMismatch, ModelMismatch, UnsupportedCycle) as e:
        return _fail(str(e))
    report = {"in_gamma": ok}
    if not ok:
        report["violation"] = detail
    _emit(report, args.out)
    return OK if ok else CHECK_FAILED


def cmd_verify_cutoff(args):
    try:
        profile = build_cutoff(args.k, args.D, args.c0)
    except ThresholdError as e:
        sys.stderr.write("error: %s\n" % e)
        return USAGE
    slope = profile.slope_check()
    endpoint_flat = profile.value(profile.t_flat)
    endpoint_one = profile.value(profile.t_one)
    hard = (
        slope["ok"]
        and endpoint_flat == profile.top
        and abs(endpoint_one - 1.0) < 1e-9
    )
    report = {
        "k": args.k,
        "D": args.D,
        "c0": args.c0,
        "eps": profile.eps,
        "a": profile.a,
        "min_admissible_k": min_admissible_k(args.D, args.c0),
        "endpoints": {
            "l_at_D": endpoint_flat,
            "k_quarter": profile.top,
            "l_at_outer": endpoint_one,
        },
        "slope": slope,
        "derivative_bounds": profile.derivative_bound_report(),
        "blend": profile.blend,
        "ok": hard,
    }
    _emit(report, args.out)
    return OK if hard else CHECK_FAILED


def cmd_verify_deform(args):
    try:
        profile = build_cutoff(args.k, args.D, args.c0)
    except ThresholdError as e:
        sys.stderr.write("error: %s\n" % e)
        return USAGE
    if args.n < 1:
        return _fail("--n must be a positive dimension")
    model = MorseModel.quadratic(args.n, value=0.5)
    h = deform_morse(model, profile)
    grid = deform_grid(model, profile)
    report = verify_deform_bounds(h, grid)
    fd = _deform_fd_check(h, profile)
    hard = report["etaObserved"] > 0.0 and fd["max_rel_err"] < 1e-5
    report.update(
        {
            "k": args.k,
            "D": args.D,
            "c0": args.c0,
            "n": args.n,
            "fd_check": fd,
            "ok": hard,
        }
    )
    _emit(report, args.out)
    return OK if hard else CHECK_FAILED


def _deform_fd_check(h, profile, samples=24, seed=7):
    """Gradient evaluator vs central differences at random interior points."""
    rng = np.random.default_rng(seed)
    n = h.model.n
    worst = 0.0
    for _ in range(samples):
        t = rng.uniform(profile.t_pow_lo * 1.05, profile.t_pow_hi * 0.95)
        d = rng.normal(size=n)
        x = t * d / np.linalg.norm(d)
        step = 1e-6 * max(t, 1.0)
        g = h.gradient(x)
        num = np.empty(n)
        for j in range(n):
            e = np.zeros(n)
            e[j] = step
            num[j] = (h.value(x + e) - h.value(x - e)) / (2.0 * step)
        worst = max(worst, float(np.max(np.abs(g - num)) / max(np.linalg.norm(g), 1e-12)))
    return {"samples": samples, "max_rel_err": worst}


def cmd_verify_localtrans(args):
    rng = np.random.default_rng(args.seed)
    successes = 0
    area_ok = 0
    worst_residual = 0.0
    certs = []
    grid = ball_grid(1.1, 101, 1)
    for index in range(args.trials):
        inst = random_instance(
            rng, kappa=args.kappa, delta=args.delta, pexp=args.pexp
        )
        residual = solve_w_residual(inst.p, inst.q, grid)
        worst_residual = max(worst_residual, residual)
        try:
            cert = find_good_w0(inst)
            if not reverify(inst, cert):
                raise VerificationError("finer-grid re-verification failed")
        except VerificationError as e:
            certs.append({"instance": index, "ok": False, "reason": str(e)})
            continue
        successes += 1
        area_ok += int(cert.area_claim_ok)
        certs.append(
            {
                "instance": index,
                "ok": True,
                "w0": [cert.w0.real, cert.w0.imag],
                "margin": cert.margin,
                "clearance_area": cert.clearance_area,
                "area_claim_ok": cert.area_claim_ok,
            }
        )
    rate = successes / args.trials if args.trials else 0.0
    hard = worst_residual < 1e-10 and rate >= 0.95
    report = {
        "seed": args.seed,
        "trials": args.trials,
        "kappa": args.kappa,
        "delta": args.delta,
        "pexp": args.pexp,
        "sigma": sigma_of(args.delta, args.pexp),
        "successes": successes,
        "success_rate": rate,
        "max_graph_residual": worst_residual,
        "area_claim_successes": area_ok,
        "area_claim_note": "warning-level: clearance area vs 0.9 pi delta^2",
        "certificates": certs,
        "ok": hard,
    }
    _emit(report, args.out)
    return OK if hard else CHECK_FAILED


def cmd_verify_radial(args):
    rng = np.random.default_rng(args.seed)
    worst = {"jacobian_rel_err": 0.0, "det_rel_err": 0.0, "eig_rel_err": 0.0}
    bounds_ok = True
    for _ in range(args.samples):
        alpha = rng.uniform(0.05, 0.7)
        c = rng.uniform(0.5, 2.0)
        n = int(rng.integers(1, 4))
        x = rng.normal(size=n)
        x *= rng.uniform(0.5, 5.0) / np.linalg.norm(x)
        l, dl = power_profile(c, alpha)
        rep = radial_map_check(l, dl, x)
        for key in worst:
            worst[key] = max(worst[key], rep[key])
        bounds_ok = bounds_ok and rep["det_lower_bound_ok"] and rep["min_eig_bound_ok"] and rep["operator_norm_ok"]
    hard = bounds_ok and all(v < 1e-6 for v in worst.values())
    report = {
        "seed": args.seed,
        "samples": args.samples,
        "worst_errors": worst,
        "bounds_ok": bounds_ok,
        "ok": hard,
    }
    _emit(report, args.out)
    return OK if hard else CHECK_FAILED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lefpen",
        description="Pencil monodromy calculus and numerical verification suites",
    )
    sub = parser.add_subparsers(dest="group", required=True)

    pencil = sub.add_parser("pencil", help="factorization operations on pencil files")
    psub = pencil.add_subparsers(dest="command", required=True)

    v = psub.add_parser("validate", help="check a pencil file's invariants")
    v.add_argument("file")
    v.add_argument("--closed", action="store_true", help="also require total monodromy = identity")
    v.add_argument("--out")
    v.set_defaults(func=cmd_pencil_validate)

    hw = psub.add_parser("hurwitz", help="apply a Hurwitz move")
    hw.add_argument("file")
    hw.add_argument("--braid", required=True, help='braid word, e.g. "s1 S2"')
    hw.add_argument("--out")
    hw.set_defaults(func=cmd_pencil_hurwitz)

    mt = psub.add_parser("matching", help="enumerate and classify arcs")
    mt.add_argument("file")
    mt.add_argument("--max-len", type=int, required=True)
    mt.add_argument("--trust-algebraic", action="store_true")
    mt.add_argument("--out")
    mt.set_defaults(func=cmd_pencil_matching)

    gc = psub.add_parser("gamma-check", help="test membership in the stabilizer")
    gc.add_argument("file")
    gc.add_argument("--auto", required=True, help="automorphism file")
    gc.add_argument("--out")
    gc.set_defaults(func=cmd_pencil_gamma_check)

    verify = sub.add_parser("verify", help="numerical verification suites")
    vsub = verify.add_subparsers(dest="command", required=True)

    co = vsub.add_parser("cutoff", help="cutoff profile invariants")
    co.add_argument("--k", type=float, required=True)
    co.add_argument("--D", type=float, required=True)
    co.add_argument("--c0", type=float, default=1.0)
    co.add_argument("--out")
    co.set_defaults(func=cmd_verify_cutoff)

    de = vsub.add_parser("deform", help="deformed Morse function bounds")
    de.add_argument("--k", type=float, required=True)
    de.add_argument("--D", type=float, required=True)
    de.add_argument("--c0", type=float, default=1.0)
    de.add_argument("--n", type=int, default=2)
    de.add_argument("--out")
    de.set_defaults(func=cmd_verify_deform)

    lt = vsub.add_parser("localtrans", help="symmetric local perturbation trials")
    lt.add_argument("--seed", type=int, required=True)
    lt.add_argument("--trials", type=int, required=True)
    lt.add_argument("--kappa", type=float, default=0.2)
    lt.add_argument("--delta", type=float, default=0.1)
    lt.add_argument("--pexp", type=int, default=2)
    lt.add_argument("--out")
    lt.set_defaults(func=cmd_verify_localtrans)

    ra = vsub.add_parser("radial", help="radial map linearization checks")
    ra.add_argument("--samples", type=int, required=True)
    ra.add_argument("--seed", type=int, default=0)
    ra.add_argument("--out")
    ra.set_defaults(func=cmd_verify_radial)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
