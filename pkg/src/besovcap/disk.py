"""Finite Blaschke products and the special zero configurations used by the
norm and capacity experiments.

All handles expose the same duck-typed surface:

    eval(z)        vectorized value, z scalar or ndarray with |z| <= 1 + EVAL_TOL
    eval_deriv(z)  vectorized complex derivative
    degree_hint    polynomial-type frequency content (None if unknown)

Blaschke-type handles additionally carry ``blaschke_degree`` and ``zeros``;
non-inner handles may carry ``deriv_sup_bound`` (a global bound on |f'| over
the disk).  Those attributes drive the analytic tail bounds in the radial
quadrature.  Everything here is immutable after construction and safe to
evaluate concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

#: |z| may exceed 1 by at most this much in eval/eval_deriv.
EVAL_TOL = 1e-9

#: Below this distance to the nearest zero the derivative switches from the
#: logarithmic form B * sum_j (1-|l_j|^2)/((z-l_j)(1-conj(l_j)z)) to the
#: cofactor sum, which stays finite when a factor vanishes.
DERIV_SWITCH_TOL = 1e-6

#: Zeros are kept strictly inside the disk with float64 headroom so that
#: 1 - conj(lambda) z cannot round to zero on the closed disk.
MAX_ZERO_MODULUS = 1.0 - 2.0 ** -52

_CHUNK_ELEMS = 1 << 20


def _check_points(z):
    """Validate evaluation points against the closed-disk tolerance.

    Returns (flat complex array, original shape, was_scalar).
    """
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).reshape(-1)
    if not np.all(np.isfinite(flat)):
        raise ValueError("evaluation points must be finite")
    mods = np.abs(flat)
    if mods.size and float(np.max(mods)) > 1.0 + EVAL_TOL:
        raise ValueError(
            "evaluation point with |z| = %.17g lies outside the closed disk "
            "tolerance %.17g" % (float(np.max(mods)), 1.0 + EVAL_TOL)
        )
    return flat, arr.shape, scalar


def _pack(values, shape, scalar):
    if scalar:
        return complex(values[0])
    return values.reshape(shape)


def _zero_slices(n_zeros, n_pts):
    step = max(1, _CHUNK_ELEMS // max(n_pts, 1))
    return [slice(lo, min(lo + step, n_zeros)) for lo in range(0, n_zeros, step)]


def _product_value(pts, alphas, betas):
    """prod_j (z - alpha_j) / (1 - beta_j z), chunked over factors."""
    val = np.ones(pts.shape, dtype=complex)
    for sl in _zero_slices(alphas.size, pts.size):
        a = alphas[sl]
        b = betas[sl]
        num = pts[:, None] - a[None, :]
        den = 1.0 - b[None, :] * pts[:, None]
        val = val * np.prod(num / den, axis=1)
    return val


def _cofactor_deriv(pts, alphas, betas):
    """Derivative of the factor product via prefix/suffix cofactors.

    Finite at and near the zeros; O(N) work and memory per point, so callers
    route only the points that fail DERIV_SWITCH_TOL through here.
    """
    n = alphas.size
    out = np.empty(pts.shape, dtype=complex)
    step = max(1, _CHUNK_ELEMS // max(n, 1))
    for lo in range(0, pts.size, step):
        blk = pts[lo:lo + step]
        num = blk[:, None] - alphas[None, :]
        den = 1.0 - betas[None, :] * blk[:, None]
        fac = num / den
        dfac = (1.0 - betas * alphas)[None, :] / (den * den)
        pre = np.ones((blk.size, n + 1), dtype=complex)
        np.cumprod(fac, axis=1, out=pre[:, 1:])
        suf = np.ones((blk.size, n + 1), dtype=complex)
        suf[:, :n] = np.cumprod(fac[:, ::-1], axis=1)[:, ::-1]
        out[lo:lo + step] = np.sum(pre[:, :n] * suf[:, 1:] * dfac, axis=1)
    return out


def _product_value_deriv(pts, alphas, betas):
    """Value and derivative of prod_j (z - alpha_j)/(1 - beta_j z)."""
    val = np.ones(pts.shape, dtype=complex)
    logsum = np.zeros(pts.shape, dtype=complex)
    dmin = np.full(pts.shape, np.inf)
    # points sitting on a zero produce inf/nan here; the cofactor pass below
    # replaces those entries
    with np.errstate(divide="ignore", invalid="ignore"):
        for sl in _zero_slices(alphas.size, pts.size):
            a = alphas[sl]
            b = betas[sl]
            num = pts[:, None] - a[None, :]
            den = 1.0 - b[None, :] * pts[:, None]
            val = val * np.prod(num / den, axis=1)
            logsum = logsum + np.sum((1.0 - b * a)[None, :] / (num * den), axis=1)
            dmin = np.minimum(dmin, np.min(np.abs(num), axis=1))
        deriv = val * logsum
    near = dmin <= DERIV_SWITCH_TOL
    if np.any(near):
        deriv[near] = _cofactor_deriv(pts[near], alphas, betas)
    return val, deriv


def _validated_zeros(zeros, require_nonzero=False):
    arr = np.atleast_1d(np.asarray(zeros, dtype=complex)).reshape(-1).copy()
    if arr.size < 1:
        raise ValueError("at least one zero is required")
    if not np.all(np.isfinite(arr)):
        raise ValueError("zeros must be finite")
    mods = np.abs(arr)
    if float(np.max(mods)) > MAX_ZERO_MODULUS:
        raise ValueError(
            "zero with |lambda| = %.17g is not strictly inside the disk "
            "(limit %.17g)" % (float(np.max(mods)), MAX_ZERO_MODULUS)
        )
    if require_nonzero and float(np.min(mods)) == 0.0:
        raise ValueError("zeros must be nonzero (punctured disk)")
    arr.setflags(write=False)
    return arr


class BlaschkeProduct:
    """Finite product of Moebius factors (z - l)/(1 - conj(l) z).

    Zeros must lie strictly inside the unit disk; repeats are allowed.  The
    value is built factor by factor in the given zero order, which keeps the
    evaluation deterministic and unimodular on the unit circle to roundoff.
    """

    def __init__(self, zeros):
        self.zeros = _validated_zeros(zeros)

    @property
    def degree(self) -> int:
        return self.zeros.size

    @property
    def degree_hint(self) -> int:
        return self.zeros.size

    @property
    def blaschke_degree(self) -> int:
        return self.zeros.size

    def prod_moduli(self) -> float:
        """Product of the zero moduli, the classical capacity normalizer."""
        return float(np.prod(np.abs(self.zeros)))

    def eval(self, z):
        pts, shape, scalar = _check_points(z)
        val = _product_value(pts, self.zeros, np.conj(self.zeros))
        return _pack(val, shape, scalar)

    def eval_deriv(self, z):
        pts, shape, scalar = _check_points(z)
        _, deriv = _product_value_deriv(pts, self.zeros, np.conj(self.zeros))
        return _pack(deriv, shape, scalar)

    def __repr__(self):
        return "BlaschkeProduct(degree=%d)" % self.degree


@dataclass(frozen=True)
class SigmaStarSpec:
    """Lacunary ring configuration: ring k holds 2^k equally spaced points at
    radius (1 - 1/n)^(2^-k), k = 1..n, for a total of 2^(n+1) - 2 zeros."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("ring count n must be an integer >= 2")

    @property
    def a(self) -> float:
        return 1.0 - 1.0 / self.n

    @property
    def size(self) -> int:
        return 2 ** (self.n + 1) - 2

    def ring_radii(self) -> np.ndarray:
        k = np.arange(1, self.n + 1, dtype=float)
        return self.a ** (2.0 ** -k)


def sigma_star_points(n: int) -> np.ndarray:
    """Zero list of the ring configuration, ring by ring.

    Ring k contributes the 2^k points r_k exp(2 pi i j / 2^k), j = 1..2^k,
    so the product of all moduli is (1 - 1/n)^n.
    """
    spec = SigmaStarSpec(n)
    chunks = []
    for k, r in zip(range(1, spec.n + 1), spec.ring_radii()):
        j = np.arange(1, 2 ** k + 1, dtype=float)
        chunks.append(r * np.exp(2.0j * np.pi * j / 2.0 ** k))
    pts = np.concatenate(chunks)
    pts.setflags(write=False)
    return pts


class SigmaStarHandle:
    """O(n)-per-point evaluation of the ring-configuration product.

    Uses the grouped form prod_{k=1..n} (w_k - a)/(1 - a w_k) with
    w_k = z^(2^k) obtained by repeated squaring; the expanded product over
    the 2^(n+1) - 2 individual zeros gives identical values but costs O(N)
    per point.
    """

    _PT_CHUNK = 1 << 15

    def __init__(self, spec: SigmaStarSpec):
        if not isinstance(spec, SigmaStarSpec):
            spec = SigmaStarSpec(int(spec))
        self.spec = spec

    @property
    def degree_hint(self) -> int:
        return self.spec.size

    @property
    def blaschke_degree(self) -> int:
        return self.spec.size

    @cached_property
    def zeros(self) -> np.ndarray:
        return sigma_star_points(self.spec.n)

    def prod_moduli(self) -> float:
        return self.spec.a ** self.spec.n

    def eval(self, z):
        pts, shape, scalar = _check_points(z)
        a = self.spec.a
        val = np.ones(pts.shape, dtype=complex)
        w = pts
        for _ in range(self.spec.n):
            w = w * w
            val = val * ((w - a) / (1.0 - a * w))
        return _pack(val, shape, scalar)

    def eval_deriv(self, z):
        pts, shape, scalar = _check_points(z)
        out = np.empty(pts.shape, dtype=complex)
        for lo in range(0, pts.size, self._PT_CHUNK):
            out[lo:lo + self._PT_CHUNK] = self._deriv_block(pts[lo:lo + self._PT_CHUNK])
        return _pack(out, shape, scalar)

    def _deriv_block(self, pts):
        n, a = self.spec.n, self.spec.a
        g = np.empty((pts.size, n), dtype=complex)
        dterm = np.empty((pts.size, n), dtype=complex)
        p = None
        for k in range(1, n + 1):
            # p = z^(2^k - 1) without dividing by z, so z = 0 stays exact
            p = pts if k == 1 else p * p * pts
            w = p * pts
            den = 1.0 - a * w
            g[:, k - 1] = (w - a) / den
            dterm[:, k - 1] = (1.0 - a * a) / (den * den) * (2.0 ** k) * p
        pre = np.ones((pts.size, n + 1), dtype=complex)
        np.cumprod(g, axis=1, out=pre[:, 1:])
        suf = np.ones((pts.size, n + 1), dtype=complex)
        suf[:, :n] = np.cumprod(g[:, ::-1], axis=1)[:, ::-1]
        return np.sum(pre[:, :n] * suf[:, 1:] * dterm, axis=1)

    def __repr__(self):
        return "SigmaStarHandle(n=%d, degree=%d)" % (self.spec.n, self.spec.size)


def sigma_star_handle(spec) -> SigmaStarHandle:
    """Grouped-product handle for the ring configuration; accepts n or a spec."""
    return SigmaStarHandle(spec)


class Monomial:
    """z^N and its derivative; the boundary-concentration witness."""

    def __init__(self, power: int):
        if not isinstance(power, int) or power < 1:
            raise ValueError("power must be an integer >= 1")
        self.power = power

    @property
    def degree_hint(self) -> int:
        return self.power

    @property
    def blaschke_degree(self) -> int:
        # z^N is the Blaschke product with an N-fold zero at the origin.
        return self.power

    @cached_property
    def zeros(self) -> np.ndarray:
        z = np.zeros(self.power, dtype=complex)
        z.setflags(write=False)
        return z

    def eval(self, z):
        pts, shape, scalar = _check_points(z)
        return _pack(pts ** self.power, shape, scalar)

    def eval_deriv(self, z):
        pts, shape, scalar = _check_points(z)
        return _pack(self.power * pts ** (self.power - 1), shape, scalar)

    def __repr__(self):
        return "Monomial(power=%d)" % self.power


class DilatedTestFunction:
    """Interpolation test function: value 1 at the origin, zeros on sigma.

    With r = 1 - 1/N and N = |sigma| this is the dilate
    (-1)^N Btilde(r z) / (r^N prod lambda_i), where Btilde is the Blaschke
    product with contracted zeros r lambda_i.  The r^N cancels against the
    dilation, leaving the numerically stable factorization
    prod_i (lambda_i - z) / (lambda_i (1 - r^2 conj(lambda_i) z)), which is
    what gets evaluated (it is exact at N = 1 where r = 0).
    """

    def __init__(self, zeros):
        lam = _validated_zeros(zeros, require_nonzero=True)
        n = lam.size
        r = 1.0 - 1.0 / n
        self._lam = lam
        self._r = r
        self._alphas = lam
        self._betas = r * r * np.conj(lam)
        self._scale = complex(np.prod(-1.0 / lam))
        self.degree_hint = n
        self.blaschke_degree = None
        # actual zeros of the dilated product, for quadrature grading
        self.zeros = r * lam
        # f' = r Btilde'(r z) / (r^N prod lambda) and |Btilde'(w)| has the
        # Schwarz-Pick bound 1/(1 - |w|^2) <= 1/(1 - r^2) on |z| <= 1
        pm = float(np.prod(np.abs(lam)))
        if n == 1:
            self.deriv_sup_bound = 1.0 / pm
        else:
            self.deriv_sup_bound = r / ((1.0 - r * r) * r ** n * pm)

    @property
    def dilation(self) -> float:
        return self._r

    def eval(self, z):
        pts, shape, scalar = _check_points(z)
        val = self._scale * _product_value(pts, self._alphas, self._betas)
        return _pack(val, shape, scalar)

    def eval_deriv(self, z):
        pts, shape, scalar = _check_points(z)
        _, deriv = _product_value_deriv(pts, self._alphas, self._betas)
        return _pack(self._scale * deriv, shape, scalar)

    def __repr__(self):
        return "DilatedTestFunction(size=%d, r=%.6g)" % (self._lam.size, self._r)


def dilated_test_function(zeros) -> DilatedTestFunction:
    """Test function used for sup-norm-side capacity upper bounds."""
    return DilatedTestFunction(zeros)


def interp_sequence(count: int) -> np.ndarray:
    """Radial zeros 1 - 2^-j, j = 1..count.

    Entries beyond j = 52 are clamped to the largest modulus float64 can keep
    strictly inside the disk, so the sequence is strictly increasing only up
    to that index.
    """
    if not isinstance(count, int) or count < 1:
        raise ValueError("count must be an integer >= 1")
    j = np.arange(1, count + 1, dtype=float)
    vals = np.minimum(1.0 - np.power(2.0, -j), MAX_ZERO_MODULUS)
    vals.setflags(write=False)
    return vals


class FunctionHandle:
    """Adapter turning a pair of vectorized callables into a handle."""

    def __init__(self, fn, dfn, degree_hint=None, deriv_sup_bound=None):
        self._fn = fn
        self._dfn = dfn
        self.degree_hint = degree_hint
        self.deriv_sup_bound = deriv_sup_bound
        self.blaschke_degree = None

    def eval(self, z):
        pts, shape, scalar = _check_points(z)
        out = np.asarray(self._fn(pts), dtype=complex) * np.ones(pts.shape, dtype=complex)
        return _pack(out, shape, scalar)

    def eval_deriv(self, z):
        pts, shape, scalar = _check_points(z)
        out = np.asarray(self._dfn(pts), dtype=complex) * np.ones(pts.shape, dtype=complex)
        return _pack(out, shape, scalar)
