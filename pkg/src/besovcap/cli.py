"""Command-line front end.

Subcommands: besov-norm, sigma-star-sweep, region-table, capacity-bounds,
wiener-cap, schaffer.  Each accepts --config <path> with plain key=value
lines plus flag overrides.  Exit codes: 0 success, 2 cost-guard rejection,
3 certificate or convergence failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import warnings

import numpy as np

from .besov import BesovParams, besov_norm, suggested_quadrature
from .capacity import capacity_bounds
from .circle import INF
from .disk import BlaschkeProduct, Monomial, interp_sequence, sigma_star_handle
from .harness import CostGuardError, SweepConfig, boundary_zeros, emit, \
    resolve_workers, run_region_table, run_sigma_star_sweep, \
    run_wiener_schaffer, summary_footer
from .matrices import companion_ratio, schaffer_bound
from .wiener import BasisPursuitProblem, CertificateError, \
    ConvergenceWarning, certificate_from_solution, solve_basis_pursuit

EXIT_OK = 0
EXIT_COST = 2
EXIT_CERT = 3


def _parse_float(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    return float(text)


def parse_config_file(path: str) -> dict:
    """key=value lines; blank lines and # comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError("%s:%d: expected key=value, got %r"
                                 % (path, lineno, line))
            key, _, val = line.partition("=")
            out[key.strip()] = val.strip()
    return out


def _parse_pq_list(text: str) -> tuple:
    pairs = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        p_txt, _, q_txt = item.partition(":")
        pairs.append((_parse_float(p_txt), _parse_float(q_txt)))
    if not pairs:
        raise ValueError("no (p,q) pairs in %r" % text)
    return tuple(pairs)


def _parse_int_list(text: str) -> tuple:
    return tuple(int(s) for s in text.split(",") if s.strip())


def _parse_zeros(text: str) -> np.ndarray:
    return np.asarray([complex(s.strip()) for s in text.split(",") if s.strip()])


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="path to key=value config file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--workers", type=int, default=None)


def _add_quad_flags(p: argparse.ArgumentParser):
    p.add_argument("--delta", default=None,
                   help="radial cutoff; 'auto' picks per handle")
    p.add_argument("--gauss-order", type=int, default=None)
    p.add_argument("--oversample", type=int, default=None)


def _setting(args, cfg_file: dict, key: str, default, convert):
    """Precedence: explicit flag > config file > default."""
    flag_val = getattr(args, key.replace("-", "_"), None)
    if flag_val is not None:
        return convert(flag_val) if isinstance(flag_val, str) else flag_val
    if key in cfg_file:
        return convert(cfg_file[key])
    return default


def _parse_delta(text):
    if text is None or str(text).strip().lower() == "auto":
        return None
    return float(text)


def _build_sweep_config(args, experiment: str, defaults: dict) -> SweepConfig:
    cfg_file = parse_config_file(args.config) if args.config else {}
    n_min = _setting(args, cfg_file, "n-min", defaults.get("n_min", 2), int)
    n_max = _setting(args, cfg_file, "n-max", defaults.get("n_max", 4), int)
    return SweepConfig(
        experiment=experiment,
        n_range=(n_min, n_max),
        size_list=_setting(args, cfg_file, "sizes",
                           defaults.get("sizes", ()), _parse_int_list),
        pq_list=_setting(args, cfg_file, "pq", defaults.get("pq", ((1.0, INF),)),
                         _parse_pq_list),
        families=_setting(args, cfg_file, "families",
                          defaults.get("families", ("sigma-star",)),
                          lambda s: tuple(f.strip() for f in s.split(","))),
        delta=_parse_delta(_setting(args, cfg_file, "delta", None, str)),
        gauss_order=_setting(args, cfg_file, "gauss-order", 16, int),
        oversample=_setting(args, cfg_file, "oversample", 8, int),
        seed=_setting(args, cfg_file, "seed", 20240801, int),
        workers=resolve_workers(_setting(args, cfg_file, "workers", 1, int)),
        cost_budget=_setting(args, cfg_file, "budget", 2.0e10, float),
        include_lower=bool(_setting(args, cfg_file, "include-lower", 0, int)),
        degree_mult=_setting(args, cfg_file, "degree-mult", 8, int),
    )


def _resolve_handle(args):
    """Handle + zeros for the single-shot subcommands."""
    if getattr(args, "zeros", None):
        zs = _parse_zeros(args.zeros)
        return BlaschkeProduct(zs), zs
    family = args.family
    if family == "sigma-star":
        h = sigma_star_handle(args.n)
        return h, h.zeros
    if family == "monomial":
        return Monomial(args.size), np.zeros(args.size, dtype=complex)
    if family == "interp":
        zs = interp_sequence(args.size)
        return BlaschkeProduct(zs), zs
    if family == "boundary-random":
        zs = boundary_zeros(args.size, args.seed)
        return BlaschkeProduct(zs), zs
    raise ValueError("unknown family %r" % (family,))


def _add_instance_flags(p: argparse.ArgumentParser):
    p.add_argument("--zeros", help="comma-separated complex zeros")
    p.add_argument("--family", default="sigma-star",
                   choices=("sigma-star", "monomial", "interp",
                            "boundary-random"))
    p.add_argument("--n", type=int, default=3, help="ring count (sigma-star)")
    p.add_argument("--size", type=int, default=16,
                   help="zero count (other families)")
    p.add_argument("--seed", type=int, default=20240801)


def _quad_for(args, handle):
    quad = suggested_quadrature(handle)
    changes = {}
    if getattr(args, "delta", None) is not None:
        d = _parse_delta(args.delta)
        if d is not None:
            changes["delta"] = d
    if getattr(args, "gauss_order", None) is not None:
        changes["gauss_order"] = args.gauss_order
    if getattr(args, "oversample", None) is not None:
        changes["oversample"] = args.oversample
    if changes:
        quad = dataclasses.replace(quad, **changes)
    return quad


def _cmd_besov_norm(args) -> int:
    handle, _ = _resolve_handle(args)
    params = BesovParams(_parse_float(args.p), _parse_float(args.q))
    rep = besov_norm(handle, params, _quad_for(args, handle))
    print("value=%.17g" % rep.value)
    print("tail_bound=%.17g" % rep.tail_bound)
    print("quad_error_est=%.17g" % rep.quad_error_est)
    print("nodes_used=%d" % rep.nodes_used)
    return EXIT_OK


def _cmd_capacity_bounds(args) -> int:
    handle, zeros = _resolve_handle(args)
    if args.family == "monomial" and not args.zeros:
        raise SystemExit("capacity bounds need nonzero zeros")
    params = BesovParams(_parse_float(args.p), _parse_float(args.q))
    rep = capacity_bounds(zeros, params, handle=handle)
    print("prod_moduli=%.17g" % rep.prod_moduli)
    print("upper=%.17g" % rep.upper)
    print("test_function=%s" % rep.test_function)
    print("lower_ratio=%.17g" % rep.lower_ratio)
    print("upper_tail_bound=%.17g" % rep.upper_report.tail_bound)
    return EXIT_OK


def _cmd_wiener_cap(args) -> int:
    _, zeros = _resolve_handle(args)
    degree = args.degree or 8 * len(zeros)
    problem = BasisPursuitProblem.build(zeros, degree)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConvergenceWarning)
        try:
            sol = solve_basis_pursuit(problem, tol=args.tol,
                                      max_iter=args.max_iter)
        except ConvergenceWarning as exc:
            print("convergence failure: %s" % exc, file=sys.stderr)
            return EXIT_CERT
    print("primal=%.17g" % sol.value)
    print("iterations=%d" % sol.iterations)
    try:
        lower, cert = certificate_from_solution(problem, sol)
    except CertificateError as exc:
        print("certificate failure: %s" % exc, file=sys.stderr)
        return EXIT_CERT
    print("certified_lower=%.17g" % lower)
    print("certified_gap=%.17g" % (sol.value - lower))
    print("tail_margin=%.17g" % cert.margin)
    print("verified_through=%d" % cert.verified_through)
    return EXIT_OK


def _cmd_schaffer(args) -> int:
    _, zeros = _resolve_handle(args)
    if args.family == "monomial" and not args.zeros:
        raise SystemExit("companion ratios need nonzero zeros")
    total = len(zeros)
    for kind in ("spectral", "col-sum", "row-sum"):
        print("ratio_%s=%.17g" % (kind.replace("-", "_"),
                                  companion_ratio(zeros, kind)))
    print("bound=%.17g" % schaffer_bound(total))
    return EXIT_OK


def _run_sweep(args, experiment: str, defaults: dict, runner) -> int:
    cfg = _build_sweep_config(args, experiment, defaults)
    errors = []
    try:
        if runner is run_wiener_schaffer:
            rows = runner(cfg, errors=errors)
        else:
            rows = runner(cfg)
    except CostGuardError as exc:
        print("cost guard: %s" % exc, file=sys.stderr)
        return EXIT_COST
    basename = args.basename or experiment
    paths = emit(rows, args.out, basename, cfg=cfg, svg=args.svg)
    for path in paths:
        print(path)
    sys.stdout.write(summary_footer(rows))
    if errors:
        for msg in errors:
            print(msg, file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="besovcap",
                                  description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("besov-norm", help="norm of one function")
    _add_common(p)
    _add_instance_flags(p)
    _add_quad_flags(p)
    p.add_argument("--p", default="2")
    p.add_argument("--q", default="2")
    p.set_defaults(fn=_cmd_besov_norm)

    p = sub.add_parser("capacity-bounds", help="upper/lower capacity bounds")
    _add_common(p)
    _add_instance_flags(p)
    p.add_argument("--p", default="2")
    p.add_argument("--q", default="2")
    p.set_defaults(fn=_cmd_capacity_bounds)

    p = sub.add_parser("wiener-cap", help="coefficient-algebra capacity")
    _add_common(p)
    _add_instance_flags(p)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=200000)
    p.set_defaults(fn=_cmd_wiener_cap)

    p = sub.add_parser("schaffer", help="companion inverse-norm ratios")
    _add_common(p)
    _add_instance_flags(p)
    p.set_defaults(fn=_cmd_schaffer)

    sweep_flags = [
        ("sigma-star-sweep", run_sigma_star_sweep,
         {"n_min": 2, "n_max": 4, "pq": ((1.0, INF),)}),
        ("region-table", run_region_table,
         {"sizes": (16, 64, 256), "pq": ((2.0, 4.0),),
          "families": ("sigma-star", "boundary-random", "interp",
                       "monomial")}),
        ("wiener-schaffer", run_wiener_schaffer,
         {"n_min": 2, "n_max": 4, "sizes": (4, 16, 64)}),
    ]
    for name, runner, defaults in sweep_flags:
        p = sub.add_parser(name, help="sweep: " + name)
        _add_common(p)
        _add_quad_flags(p)
        p.add_argument("--n-min", type=int, default=None)
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--sizes", default=None)
        p.add_argument("--pq", default=None)
        p.add_argument("--families", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--budget", type=float, default=None)
        p.add_argument("--include-lower", type=int, default=None)
        p.add_argument("--degree-mult", type=int, default=None)
        p.add_argument("--svg", action="store_true")
        p.add_argument("--basename", default=None)
        p.set_defaults(fn=lambda a, e=name, r=runner, d=defaults:
                       _run_sweep(a, e, d, r))

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
