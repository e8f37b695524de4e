"""Sweep engine: growth tables over zero configurations, CSV/SVG artifacts.

Rows are independent tasks distributed over a process pool; every numeric
result is identical for any worker count, so a fixed config reproduces its
CSV byte for byte.  Growth-law normalizers use natural logs throughout.
"""

from __future__ import annotations

import dataclasses
import hashlib
import math
import multiprocessing
import os
from dataclasses import dataclass

import numpy as np

from .besov import BesovParams, RadialQuadrature, besov_norm, besov_seminorm, \
    suggested_quadrature
from .capacity import conjugate_exponent
from .circle import INF, check_exponent, power_factor
from .disk import BlaschkeProduct, Monomial, SigmaStarSpec, interp_sequence, \
    sigma_star_handle
from .matrices import companion_ratio, schaffer_bound
from .wiener import BasisPursuitProblem, CertificateError, \
    certificate_from_solution, solve_basis_pursuit

WORKERS_ENV = "BESOVCAP_WORKERS"
DEFAULT_COST_BUDGET = 2.0e10

NORM_KINDS = ("spectral", "col-sum", "row-sum")

CSV_HEADER = "experiment,n,N,p,q,value,normalizer,ratio,tail_bound,quad_err"


class CostGuardError(RuntimeError):
    """Predicted sweep work exceeds the configured budget."""

    def __init__(self, predicted: float, budget: float):
        self.predicted = predicted
        self.budget = budget
        super().__init__(
            "predicted work %.3g factor-evaluations exceeds budget %.3g"
            % (predicted, budget))


@dataclass(frozen=True)
class SweepConfig:
    """One sweep request.

    pq_list entries are (p, q) pairs; their meaning depends on the sweep
    (seminorm side for the sigma-star sweep, norm/capacity side for the
    region table).  delta None means each handle picks its own graded
    cutoff.  Worker count must not influence any value, only wall time.
    """

    experiment: str
    n_range: tuple = (2, 4)
    size_list: tuple = ()
    pq_list: tuple = ((1.0, INF),)
    families: tuple = ("sigma-star",)
    delta: float = None
    gauss_order: int = 16
    oversample: int = 8
    seed: int = 20240801
    workers: int = 1
    cost_budget: float = DEFAULT_COST_BUDGET
    include_lower: bool = False
    degree_mult: int = 8

    def __post_init__(self):
        if self.n_range[0] > self.n_range[1]:
            raise ValueError("empty n range %r" % (self.n_range,))
        for p, q in self.pq_list:
            check_exponent(p)
            check_exponent(q)
        if not self.pq_list:
            raise ValueError("pq list must be non-empty")

    def quadrature_for(self, handle) -> RadialQuadrature:
        if self.delta is None:
            return suggested_quadrature(handle, gauss_order=self.gauss_order,
                                        oversample=self.oversample)
        return RadialQuadrature(delta=self.delta, gauss_order=self.gauss_order,
                                oversample=self.oversample)


@dataclass(frozen=True)
class SweepRow:
    """One CSV line.  ratio = value / normalizer must be finite and positive.

    tail_bound and quad_err carry the NormReport fields of the norm
    computation behind the value (for derived rows such as the duality
    lower bound they describe the underlying seminorm); rows with no
    quadrature behind them store solver gap information there instead.
    """

    experiment: str
    n: int
    size: int
    p: float
    q: float
    value: float
    normalizer: float
    ratio: float
    tail_bound: float
    quad_err: float

    def __post_init__(self):
        if not (math.isfinite(self.ratio) and self.ratio > 0.0):
            raise ValueError("ratio %r not finite positive in %s row"
                             % (self.ratio, self.experiment))

    def csv_line(self) -> str:
        parts = [self.experiment, "%d" % self.n, "%d" % self.size]
        for x in (self.p, self.q, self.value, self.normalizer, self.ratio,
                  self.tail_bound, self.quad_err):
            parts.append("%.17g" % x)
        return ",".join(parts)


def _make_row(experiment, n, size, p, q, value, normalizer, report=None,
              tail=0.0, qerr=0.0) -> SweepRow:
    if report is not None:
        tail, qerr = report.tail_bound, report.quad_error_est
    return SweepRow(experiment=experiment, n=int(n), size=int(size),
                    p=float(p), q=float(q), value=float(value),
                    normalizer=float(normalizer),
                    ratio=float(value) / float(normalizer),
                    tail_bound=float(tail), quad_err=float(qerr))


# ---------------------------------------------------------------------------
# growth-law normalizers (natural logarithm)

def _require_loggable(total: int):
    if total < 3:
        raise ValueError("growth laws need at least 3 points, got %d" % total)


def bstar_seminorm_law(total: int, p: float, q: float) -> float:
    """Predicted decay of the ring-product seminorm in B^0_{p,q}."""
    _require_loggable(total)
    p = check_exponent(p)
    q = check_exponent(q)
    ln = math.log(total)
    iq = 0.0 if q == INF else 1.0 / q
    if p == 1.0:
        return math.log(ln) / ln ** (1.0 - iq)
    ip = 0.0 if p == INF else 1.0 / p
    return ln ** (-(ip - iq))


def capacity_growth_law(total: int, p: float, q: float) -> float:
    """Predicted growth of prod|lambda| * capacity in B^0_{p,q}.

    Piecewise in (p, q); the pieces agree on their shared boundaries, so
    the chain order below is immaterial.
    """
    _require_loggable(total)
    p = check_exponent(p)
    q = check_exponent(q)
    ln = math.log(total)
    iq = 0.0 if q == INF else 1.0 / q
    if p == INF:
        return ln ** iq
    ip = 1.0 / p
    if p <= 2.0 and q <= 2.0:
        return ln ** (iq - 0.5)
    if p <= q:
        return 1.0
    return ln ** (iq - ip)


def blaschke_norm_law(total: int, p: float, q: float) -> float:
    """Predicted Besov-norm ceiling for degree-N products; N^{1/q} when
    p = inf with q finite, constant otherwise."""
    _require_loggable(total)
    p = check_exponent(p)
    q = check_exponent(q)
    if p == INF and q != INF:
        return float(total) ** (1.0 / q)
    return 1.0


def wiener_growth_law(total: int) -> float:
    """Predicted growth of prod|lambda| * cap_W on the ring configurations."""
    _require_loggable(total)
    ln = math.log(total)
    return ln / math.log(ln)


# ---------------------------------------------------------------------------
# random witness family

def boundary_zeros(total: int, seed: int, index: int = 0) -> np.ndarray:
    """total random-phase points of modulus 1 - 1/total.

    Counter-based generator keyed by (seed, total, index): the draw depends
    only on the key, never on sweep order or process layout.
    """
    if total < 1:
        raise ValueError("need at least one point")
    bits = np.random.Philox(np.random.SeedSequence((seed, total, index)))
    rng = np.random.Generator(bits)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=total)
    return (1.0 - 1.0 / total) * np.exp(1j * phases)


def _sigma_star_n_for(total: int) -> int:
    # nearest ring count whose configuration size 2^(n+1)-2 approximates total
    return max(2, int(round(math.log2(total + 2.0))) - 1)


def _family_handle(family: str, size: int, seed: int):
    """(handle, zeros, n, actual_size) for one witness family member."""
    if family == "sigma-star":
        n = _sigma_star_n_for(size)
        h = sigma_star_handle(n)
        return h, h.zeros, n, SigmaStarSpec(n).size
    if family == "boundary-random":
        zs = boundary_zeros(size, seed)
        return BlaschkeProduct(zs), zs, 0, size
    if family == "interp":
        zs = interp_sequence(size)
        return BlaschkeProduct(zs), zs, 0, size
    if family == "monomial":
        return Monomial(size), None, 0, size
    raise ValueError("unknown family %r" % (family,))


# ---------------------------------------------------------------------------
# cost guard

def _norm_cost(degree: int, factors: int, p: float, quad: RadialQuadrature) -> float:
    """Predicted factor-evaluations for one norm at exponent p."""
    pf = power_factor(p)
    total = 0.0
    us = quad.u_breakpoints()
    band_cap = degree + 1
    for lo, hi in zip(us[:-1], us[1:]):
        # G- and 2G-point rules both run; count 3G nodes at the midpoint band
        mid = 0.5 * (lo + hi)
        band = min(band_cap, int(math.ceil(4.0 / mid))) if quad.adaptive else band_cap
        m = max(16, quad.oversample * pf * band)
        total += 3.0 * quad.gauss_order * m
    return total * max(factors, 1)


def _handle_factors(handle) -> int:
    spec = getattr(handle, "spec", None)
    if isinstance(spec, SigmaStarSpec):
        return spec.n
    if isinstance(handle, Monomial):
        return 1
    deg = getattr(handle, "blaschke_degree", None)
    return int(deg) if deg else 1


def check_cost(predicted: float, budget: float):
    if predicted > budget:
        raise CostGuardError(predicted, budget)


# ---------------------------------------------------------------------------
# sweep tasks (module level so worker processes can unpickle them)

def _sigma_star_task(args) -> list:
    cfg, n, p, q = args
    handle = sigma_star_handle(n)
    size = handle.spec.size
    quad = cfg.quadrature_for(handle)
    pm = handle.prod_moduli()
    rows = []

    sem = besov_seminorm(handle, BesovParams(p, q), quad)
    rows.append(_make_row("bstar-seminorm", n, size, p, q, sem.value,
                          bstar_seminorm_law(size, p, q), report=sem))

    pc, qc = conjugate_exponent(p), conjugate_exponent(q)
    cap_law = capacity_growth_law(size, pc, qc)
    lower = (1.0 - pm * pm) / sem.value
    rows.append(_make_row("duality-lower", n, size, pc, qc, lower, cap_law,
                          report=sem))

    nrm = besov_norm(handle, BesovParams(pc, qc), quad)
    rows.append(_make_row("capacity-upper", n, size, pc, qc, nrm.value,
                          cap_law, report=nrm))
    return rows


def _region_task(args) -> list:
    cfg, family, size, p, q = args
    handle, zeros, n, actual = _family_handle(family, size, cfg.seed)
    quad = cfg.quadrature_for(handle)
    params = BesovParams(p, q)
    rows = []

    nrm = besov_norm(handle, params, quad)
    rows.append(_make_row("besov-norm-" + family, n, actual, p, q, nrm.value,
                          blaschke_norm_law(actual, p, q), report=nrm))

    # prod|lambda| * upper cancels to the plain norm; exact even for z^N
    rows.append(_make_row("capacity-upper-" + family, n, actual, p, q,
                          nrm.value, capacity_growth_law(actual, p, q),
                          report=nrm))

    if cfg.include_lower:
        pm = 0.0 if zeros is None else float(np.prod(np.abs(zeros)))
        dual = BesovParams(conjugate_exponent(p), conjugate_exponent(q))
        sem = besov_seminorm(handle, dual, cfg.quadrature_for(handle))
        lower = (1.0 - pm * pm) / sem.value
        rows.append(_make_row("duality-lower-" + family, n, actual, p, q,
                              lower, capacity_growth_law(actual, p, q),
                              report=sem))
    return rows


def _wiener_task(args) -> list:
    cfg, n = args
    spec = SigmaStarSpec(n)
    handle = sigma_star_handle(spec)
    zeros = handle.zeros
    size = spec.size
    pm = handle.prod_moduli()
    rows = []

    problem = BasisPursuitProblem.build(zeros, cfg.degree_mult * size)
    sol = solve_basis_pursuit(problem)
    rows.append(_make_row("wiener-primal", n, size, 0.0, 0.0, sol.value, 1.0,
                          tail=0.0, qerr=sol.gap))
    try:
        lower, cert = certificate_from_solution(problem, sol)
    except CertificateError as exc:
        rows.append(("error", "wiener certificate n=%d: %s" % (n, exc)))
    else:
        rows.append(_make_row("wiener-certified", n, size, 0.0, 0.0, lower,
                              1.0, tail=1.0 - cert.margin,
                              qerr=sol.value - lower))
        if lower > 1.0:
            rows.append(_make_row("wiener-growth", n, size, 0.0, 0.0,
                                  pm * (lower - 1.0), wiener_growth_law(size),
                                  tail=1.0 - cert.margin,
                                  qerr=sol.value - lower))
        else:
            rows.append(("error",
                         "wiener growth n=%d: certified bound %.6g not above 1"
                         % (n, lower)))

    for kind in NORM_KINDS:
        rows.append(_make_row("companion-ratio-" + kind, n, size, 0.0, 0.0,
                              companion_ratio(zeros, kind),
                              schaffer_bound(size)))
    return rows


def _companion_task(args) -> list:
    cfg, size = args
    zeros = boundary_zeros(size, cfg.seed)
    return [_make_row("companion-ratio-random-" + kind, 0, size, 0.0, 0.0,
                      companion_ratio(zeros, kind), schaffer_bound(size))
            for kind in NORM_KINDS]


def _run_tasks(task_fn, tasks, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        chunks = [task_fn(t) for t in tasks]
    else:
        with multiprocessing.Pool(min(workers, len(tasks))) as pool:
            chunks = pool.map(task_fn, tasks)  # order-preserving
    return [row for chunk in chunks for row in chunk]


def _split_errors(raw) -> tuple:
    rows = [r for r in raw if isinstance(r, SweepRow)]
    errors = [r[1] for r in raw if not isinstance(r, SweepRow)]
    return rows, errors


def resolve_workers(requested: int = None) -> int:
    """Env var wins over the flag; both default to 1."""
    env = os.environ.get(WORKERS_ENV)
    if env is not None:
        return max(1, int(env))
    return max(1, requested or 1)


# ---------------------------------------------------------------------------
# sweeps

def run_sigma_star_sweep(cfg: SweepConfig) -> list:
    """Rows per ring count n and per (p, q): the dual-side seminorm, the
    duality lower ratio for the conjugate capacity, and the product upper
    bound, each against its predicted law."""
    lo, hi = cfg.n_range
    if lo < 2 or hi > 16:
        raise CostGuardError(float("inf"), cfg.cost_budget)
    tasks = [(cfg, n, p, q) for n in range(lo, hi + 1) for p, q in cfg.pq_list]

    predicted = 0.0
    for _, n, p, q in tasks:
        handle = sigma_star_handle(n)
        quad = cfg.quadrature_for(handle)
        deg = handle.spec.size
        predicted += _norm_cost(deg, n, p, quad)
        predicted += _norm_cost(deg, n, conjugate_exponent(p), quad)
    check_cost(predicted, cfg.cost_budget)

    workers = resolve_workers(cfg.workers)
    rows, _ = _split_errors(_run_tasks(_sigma_star_task, tasks, workers))
    return rows


def run_region_table(cfg: SweepConfig) -> list:
    """Normalized norms and capacity bounds per witness family, size, (p,q)."""
    if not cfg.size_list:
        raise ValueError("region table needs a size list")
    tasks = [(cfg, fam, size, p, q) for fam in cfg.families
             for size in cfg.size_list for p, q in cfg.pq_list]

    predicted = 0.0
    for _, fam, size, p, q in tasks:
        handle, _, _, actual = _family_handle(fam, size, cfg.seed)
        quad = cfg.quadrature_for(handle)
        factors = _handle_factors(handle)
        predicted += _norm_cost(actual, factors, p, quad)
        if cfg.include_lower:
            predicted += _norm_cost(actual, factors, conjugate_exponent(p), quad)
    check_cost(predicted, cfg.cost_budget)

    workers = resolve_workers(cfg.workers)
    rows, _ = _split_errors(_run_tasks(_region_task, tasks, workers))
    return rows


def run_wiener_schaffer(cfg: SweepConfig, errors: list = None) -> list:
    """Certified capacity lower bounds plus companion-matrix ratios.

    Certificate failures append a message to errors (when given) and drop
    the affected rows; the sweep itself keeps going.
    """
    lo, hi = cfg.n_range
    if lo < 2 or hi > 5:
        raise CostGuardError(float("inf"), cfg.cost_budget)
    tasks = [(cfg, n) for n in range(lo, hi + 1)]
    workers = resolve_workers(cfg.workers)
    rows, errs = _split_errors(_run_tasks(_wiener_task, tasks, workers))
    if cfg.size_list:
        ctasks = [(cfg, size) for size in cfg.size_list]
        crows, cerrs = _split_errors(_run_tasks(_companion_task, ctasks, workers))
        rows.extend(crows)
        errs.extend(cerrs)
    if errors is not None:
        errors.extend(errs)
    return rows


# ---------------------------------------------------------------------------
# emission

def rows_to_csv(rows) -> str:
    if not rows:
        raise ValueError("no rows to emit")
    return "\n".join([CSV_HEADER] + [r.csv_line() for r in rows]) + "\n"


def consistency_constant(rows) -> float:
    """Run-wide C with upper * prod|lambda| >= lower / C across paired rows.

    Pairs duality-lower with capacity-upper rows sharing (n, size, p, q);
    returns 1.0 when no pairs exist (the guarantee is vacuous).
    """
    uppers = {}
    for r in rows:
        if r.experiment.startswith("capacity-upper"):
            fam = r.experiment[len("capacity-upper"):]
            uppers[(fam, r.n, r.size, r.p, r.q)] = r.value
    c = 1.0
    for r in rows:
        if r.experiment.startswith("duality-lower"):
            fam = r.experiment[len("duality-lower"):]
            up = uppers.get((fam, r.n, r.size, r.p, r.q))
            if up and up > 0.0:
                c = max(c, r.value / up)
    return c


def summary_footer(rows) -> str:
    return ("rows=%d consistency_C=%.6g\n" % (len(rows), consistency_constant(rows)))


def config_hash(cfg: SweepConfig) -> str:
    text = "\n".join("%s=%r" % (f.name, getattr(cfg, f.name))
                     for f in dataclasses.fields(cfg))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _svg_series(rows) -> dict:
    series = {}
    for r in rows:
        key = "%s p=%g q=%g" % (r.experiment, r.p, r.q)
        series.setdefault(key, []).append((r.size, r.value, r.normalizer))
    return series


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#17becf", "#7f7f7f")


def rows_to_svg(rows, cfg: SweepConfig, width: int = 640, height: int = 420) -> str:
    """Log-log plot of value (solid) and normalizer (dashed) against size.

    Hand-assembled SVG; the leading comment carries the config hash so a
    plot can be traced back to the exact sweep that produced it.
    """
    series = _svg_series(rows)
    pts = [(x, y) for data in series.values() for (x, y, nn) in data if y > 0]
    pts += [(x, nn) for data in series.values() for (x, y, nn) in data if nn > 0]
    if not pts:
        raise ValueError("nothing plottable")
    lx = [math.log10(x) for x, _ in pts]
    ly = [math.log10(y) for _, y in pts]
    x0, x1 = min(lx), max(lx)
    y0, y1 = min(ly), max(ly)
    x1 += 1e-9 if x1 == x0 else 0.0
    y1 += 1e-9 if y1 == y0 else 0.0
    ml, mr, mt, mb = 60, 20, 20, 45

    def sx(v):
        return ml + (math.log10(v) - x0) / (x1 - x0) * (width - ml - mr)

    def sy(v):
        return height - mb - (math.log10(v) - y0) / (y1 - y0) * (height - mt - mb)

    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">'
           % (width, height),
           '<!-- besovcap sweep %s config-sha256:%s -->'
           % (cfg.experiment, config_hash(cfg)),
           '<rect width="100%" height="100%" fill="white"/>',
           '<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="black"/>'
           % (ml, height - mb, width - mr, height - mb),
           '<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="black"/>'
           % (ml, mt, ml, height - mb)]
    for i, (name, data) in enumerate(sorted(series.items())):
        color = _PALETTE[i % len(_PALETTE)]
        data = sorted(data)
        val_path = " ".join("%.2f,%.2f" % (sx(x), sy(y))
                            for x, y, _ in data if y > 0)
        nrm_path = " ".join("%.2f,%.2f" % (sx(x), sy(nn))
                            for x, _, nn in data if nn > 0)
        if val_path:
            out.append('<polyline points="%s" fill="none" stroke="%s" '
                       'stroke-width="1.5"/>' % (val_path, color))
        if nrm_path:
            out.append('<polyline points="%s" fill="none" stroke="%s" '
                       'stroke-dasharray="5,4"/>' % (nrm_path, color))
        out.append('<text x="%d" y="%d" font-size="11" fill="%s">%s</text>'
                   % (ml + 8, mt + 14 + 13 * i, color, name))
    out.append('<text x="%d" y="%d" font-size="12">size (log)</text>'
               % ((width - mr + ml) // 2 - 30, height - 10))
    out.append('</svg>')
    return "\n".join(out) + "\n"


def emit(rows, out_dir: str, basename: str, cfg: SweepConfig = None,
         svg: bool = False) -> list:
    """Write <basename>.csv (and optionally .svg) under out_dir; LF endings.

    Returns the written paths; I/O problems surface with the path attached.
    """
    if not rows:
        raise ValueError("no rows to emit")
    if svg and cfg is None:
        raise ValueError("svg output needs the config for its hash comment")
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    csv_path = os.path.join(out_dir, basename + ".csv")
    try:
        with open(csv_path, "w", newline="\n") as fh:
            fh.write(rows_to_csv(rows))
    except OSError as exc:
        raise OSError("writing %s: %s" % (csv_path, exc)) from exc
    paths.append(csv_path)
    if svg:
        svg_path = os.path.join(out_dir, basename + ".svg")
        try:
            with open(svg_path, "w", newline="\n") as fh:
                fh.write(rows_to_svg(rows, cfg))
        except OSError as exc:
            raise OSError("writing %s: %s" % (svg_path, exc)) from exc
        paths.append(svg_path)
    return paths
