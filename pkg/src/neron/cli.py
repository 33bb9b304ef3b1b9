"""Command line driver.

Exit status: 0 on success, 2 when a gate rejects the input, 1 on any other
error.  ``NERON_CAPS`` (for example ``k=32,e=8``) overrides computation caps.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from neron.certificate import check_certificate
from neron.desing import HypothesisError, Rejection, verify_standard_smooth
from neron.estimator import NeronDesingularizer, apply_caps
from neron.groebner import CapExceeded, Ideal, NotMPrimary, min_power_k
from neron.polyring import format_poly, substitute
from neron.problem import ALGORITHMS, ProblemError, merge_hints, parse_problem

log = logging.getLogger("neron")

EXIT_OK, EXIT_ERROR, EXIT_REJECTED = 0, 1, 2


def env_caps():
    text = os.environ.get("NERON_CAPS", "").strip()
    caps = {}
    if not text:
        return caps
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep or not val.strip().isdigit():
            raise ValueError(f"NERON_CAPS: cannot read {item!r}")
        caps[key.strip()] = int(val)
    return caps


def _load(args):
    prob = parse_problem(args.problem)
    if getattr(args, "hints", None):
        merge_hints(prob, args.hints)
    return prob


def _estimator(args, algorithm=None):
    return NeronDesingularizer(
        algorithm=algorithm or getattr(args, "algorithm", None),
        precision=getattr(args, "precision", None), k=getattr(args, "k", None),
        c=getattr(args, "c", None), budget=getattr(args, "budget", None))


def _emit(args, est):
    if getattr(args, "emit_certificate", None):
        with open(args.emit_certificate, "w", encoding="utf-8") as fh:
            json.dump(est.certificate_, fh, indent=1)
            fh.write("\n")
        print(f"certificate: {args.emit_certificate} ({len(est.certificate_['claims'])} claims)")


def _report(est, out):
    pres = est.presentation_
    print(pres.describe(), file=out)
    ys = est.problem_.yvars
    for y in ys:
        if y in pres.lift:
            print(f"  {y} -> {format_poly(pres.lift[y].value)}", file=out)
    for note in pres.notes:
        print(f"note: {note}", file=out)


def cmd_desingularize(args):
    prob = _load(args)
    est = _estimator(args, args.algorithm or prob.algorithm or "neron").fit(prob)
    _report(est, sys.stdout)
    _emit(args, est)
    return EXIT_OK


def cmd_uniform(args):
    prob = _load(args)
    algorithm = args.algorithm or ("uniform" if prob.algorithm in (None, "neron") else prob.algorithm)
    est = _estimator(args, algorithm).fit(prob)
    _report(est, sys.stdout)
    print(f"parameters: {est.n_params_}")
    _emit(args, est)
    return EXIT_OK


def _parse_morphism(text):
    out = {}
    for item in text.split(";"):
        if item.strip():
            key, _, val = item.partition("=")
            out[key.strip()] = val.strip()
    return out


def cmd_lift(args):
    prob = _load(args)
    n = args.precision or prob.precision
    if n is None:
        raise ValueError("a precision is required")
    if args.morphism or args.params:
        algorithm = args.algorithm or prob.algorithm or "uniform"
        if algorithm == "neron":
            raise ValueError("factoring new morphisms needs --algorithm uniform or dim1")
        est = _estimator(args, algorithm).fit(prob)
        if args.morphism:
            w = est.transform([_parse_morphism(args.morphism)])[0]
            print(f"factorization modulo (x)^{w.prec}:")
            for name in est.presentation_.variables:
                if name in w.values:
                    print(f"  {name} -> {format_poly(w[name].value)}")
        if args.params:
            v = est.inverse_transform([[p.strip() for p in args.params.split(";")]])[0]
            print("induced morphism:")
            for y, jet in v.items():
                print(f"  {y} -> {format_poly(jet.value)}")
        return EXIT_OK
    from neron.desing import _unit_minor
    from neron.hensel import newton_lift
    alg = prob.algebra(n)
    point = {x: 0 for x in prob.xvars}
    point.update({y: alg.v[y].value.constant_term() for y in prob.yvars})
    if len(prob.I) > len(prob.yvars):
        raise ValueError("Newton lifting needs at most as many relations as variables")
    cols = _unit_minor(alg, point)
    if cols is None:
        raise HypothesisError("IFT hypothesis fails: no maximal minor is a unit at v")
    solve = [prob.yvars[j] for j in cols]
    start = {y: alg.v[y].value for y in prob.yvars}
    res = newton_lift(list(prob.I), solve, start, n)
    print(f"lift modulo (x)^{n}; residual orders {res.residual_orders}")
    for y in prob.yvars:
        print(f"  {y} -> {format_poly(res[y].value)}")
    return EXIT_OK


def cmd_smooth_locus(args):
    from neron.smoothlocus import smooth_locus_ideal
    prob = _load(args)
    H = smooth_locus_ideal(Ideal(prob.ring, list(prob.I)), list(prob.yvars))
    gens = []
    for g in H.gens:
        if not g.is_zero() and g not in gens and -g not in gens:
            gens.append(g)
    print("smooth-locus generators: " + ", ".join(format_poly(g) for g in gens))
    if not prob.v:
        return EXIT_OK
    xring = prob.ring.subring(prob.xvars)
    yp = prob.yprime()
    if prob.systems:
        from neron.desing import _P, _pick_systems
        alg = prob.algebra(prob.precision or 1)
        values = [substitute(_P(s, prob.ring), yp).restrict(xring)
                  for _, s in (_pick_systems(alg, ps) for ps in prob.param_systems())]
        label = "d"
    else:
        values = [substitute(g, yp).restrict(xring) for g in gens]
        label = "H(y′)"
    print(f"{label}: " + ", ".join(format_poly(v) for v in values))
    J = Ideal(xring, list(prob.J)) if prob.J else None
    try:
        res = min_power_k(Ideal(xring, values), J)
    except (NotMPrimary, CapExceeded) as exc:
        print(f"k: none ({exc})")
        return EXIT_OK
    print(f"k = {res.k}")
    if res.nonmember is not None:
        print(f"non-member of degree k - 1: {format_poly(res.nonmember)}")
    return EXIT_OK


def cmd_certify(args):
    path = args.target
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        report = check_certificate(json.loads(text))
        if report.ok:
            print(f"certificate OK: {report.checked} claims")
            return EXIT_OK
        name, why = report.failures[0]
        print(f"certificate FAILED at claim {name}: {why}")
        print(f"{len(report.failures)} of {report.checked} claims fail")
        return EXIT_ERROR
    args.problem = path
    prob = _load(args)
    est = _estimator(args, args.algorithm or prob.algorithm or "neron").fit(prob)
    smooth = verify_standard_smooth(est.presentation_)
    report = check_certificate(est.certificate_)
    print(f"standard smooth: {'yes' if smooth.ok else 'no'}")
    print(f"certificate: {'OK' if report.ok else 'FAILED'} ({report.checked} claims)")
    if not smooth.ok:
        print(f"first failure: {smooth.first}")
    if not report.ok:
        print(f"first failing claim: {report.failures[0][0]}: {report.failures[0][1]}")
    _emit(args, est)
    return EXIT_OK if smooth.ok and report.ok else EXIT_ERROR


def build_parser():
    p = argparse.ArgumentParser(prog="neron", description="Constructive Néron desingularization.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, target="problem"):
        sp.add_argument(target)
        sp.add_argument("--precision", type=int)
        sp.add_argument("--algorithm", choices=ALGORITHMS)
        sp.add_argument("--hints")
        sp.add_argument("--budget", type=int)
        sp.add_argument("--emit-certificate", metavar="PATH")
        sp.add_argument("--k", type=int)
        sp.add_argument("--c", type=int)

    sp = sub.add_parser("desingularize", help="factor v through a standard smooth algebra")
    common(sp)
    sp.set_defaults(func=cmd_desingularize)
    sp = sub.add_parser("uniform", help="one smooth algebra for all morphisms near y'")
    common(sp)
    sp.set_defaults(func=cmd_uniform)
    sp = sub.add_parser("lift", help="Newton lift of v, or factor/parametrize morphisms")
    common(sp)
    sp.add_argument("--morphism", help="images 'Y1=...; Y2=...' of a morphism to factor")
    sp.add_argument("--params", help="tail parameters 'p1; p2; ...' of a morphism to build")
    sp.set_defaults(func=cmd_lift)
    sp = sub.add_parser("smooth-locus", help="smooth-locus ideal and the exponent k at y'")
    common(sp)
    sp.set_defaults(func=cmd_smooth_locus)
    sp = sub.add_parser("certify", help="check a certificate (JSON) or rebuild and check a problem")
    common(sp, "target")
    sp.set_defaults(func=cmd_certify)
    return p


def run(subcommand, problem, *options):
    """Run one subcommand on a problem path; returns the exit status."""
    return main([subcommand, str(problem), *options])


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        old = apply_caps(env_caps())
        try:
            return args.func(args)
        finally:
            apply_caps(old)
    except Rejection as exc:
        print(exc.message)
        for key, val in exc.evidence.items():
            print(f"  {key}: {val}", file=sys.stderr)
        return EXIT_REJECTED
    except (ProblemError, OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
