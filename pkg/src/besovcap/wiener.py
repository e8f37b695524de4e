"""Capacity in the absolutely-convergent-coefficient algebra.

cap_W(sigma) is the least l^1 coefficient norm of a power series with
constant term 1 vanishing on sigma.  Truncating at degree D gives a finite
minimization

    min ||c||_1   s.t.  c_0 = 1,  sum_k c_k lambda_i^k = 0  (distinct i)

whose value is an upper bound for cap_W and non-increasing in D.  The primal
is solved by Douglas-Rachford splitting (complex soft thresholding against
the affine constraint projection, with over-relaxation); the dual vector it
produces is turned into an unconditional lower bound: after rescaling so the
certificate functional

    g(k) = y_0 [k = 0] + sum_i y_i lambda_i^k

has |g(k)| <= 1 for every k >= 0 (checked explicitly through k = K and
closed beyond K by the geometric tail sum |y_i| max|lambda|^(K+1)), every
admissible series of any degree pays at least Re y_0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .disk import _validated_zeros


class ConvergenceWarning(UserWarning):
    """Primal solve stopped before reaching the duality-gap target."""


class CertificateError(RuntimeError):
    """Dual certificate failed to produce a positive lower bound."""


_CONJ_TOL = 1e-12


def _is_conjugate_closed(zeros) -> bool:
    # tolerance matching, not sorting: ring grids carry ~1e-16 angle noise
    pool = list(zeros)
    for z in zeros:
        zc = np.conj(z)
        for i, w in enumerate(pool):
            if abs(zc - w) <= _CONJ_TOL:
                pool.pop(i)
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class BasisPursuitProblem:
    """Truncated coefficient problem for one zero set.

    real_mode restricts the search to real coefficient vectors, splitting
    each strictly complex constraint into its real and imaginary parts; it
    is only admissible when sigma is closed under conjugation (then the
    optimum can be taken real by symmetry).
    """

    zeros: np.ndarray
    degree: int
    real_mode: bool

    @classmethod
    def build(cls, zeros, degree: int, real_mode=None) -> "BasisPursuitProblem":
        arr = _validated_zeros(zeros, require_nonzero=True)
        uniq = []
        for z in arr:
            if all(abs(z - u) > _CONJ_TOL for u in uniq):
                uniq.append(complex(z))
        arr = np.asarray(uniq, dtype=complex)
        if degree < arr.size + 1:
            raise ValueError("degree %d too small for %d interpolation "
                             "constraints" % (degree, arr.size))
        if real_mode is None:
            real_mode = _is_conjugate_closed(arr)
        elif real_mode and not _is_conjugate_closed(arr):
            raise ValueError("real_mode requires a conjugate-closed zero set")
        arr.setflags(write=False)
        return cls(zeros=arr, degree=int(degree), real_mode=bool(real_mode))

    @cached_property
    def _powers(self) -> np.ndarray:
        k = np.arange(self.degree + 1)
        return self.zeros[:, None] ** k[None, :]

    @cached_property
    def _pairing(self) -> tuple:
        """Real-mode grouping of zero indices: ("real", i) for zeros on the
        real axis, ("pair", i, j) for a conjugate pair.  Tolerance matched,
        since grid-generated sets carry rounding noise in the angles."""
        groups = []
        used = [False] * self.zeros.size
        for i, z in enumerate(self.zeros):
            if used[i]:
                continue
            used[i] = True
            if abs(z.imag) <= _CONJ_TOL:
                groups.append(("real", i))
                continue
            zc = np.conj(z)
            for j in range(i + 1, self.zeros.size):
                if not used[j] and abs(self.zeros[j] - zc) <= _CONJ_TOL:
                    used[j] = True
                    groups.append(("pair", i, j))
                    break
            else:
                raise ValueError("conjugate partner missing for %r" % z)
        return tuple(groups)

    def constraint_matrix(self) -> np.ndarray:
        """Rows: the c_0 selector, then one evaluation row per zero (complex
        mode) or the real/imaginary parts per conjugate class (real mode)."""
        n = self.degree + 1
        if not self.real_mode:
            rows = [np.zeros(n, dtype=complex)]
            rows[0][0] = 1.0
            rows.extend(self._powers)
            return np.asarray(rows)
        rows = [np.zeros(n)]
        rows[0][0] = 1.0
        for group in self._pairing:
            pw = self._powers[group[1]]
            if group[0] == "real":
                rows.append(pw.real)
            else:
                rows.append(pw.real)
                rows.append(pw.imag)
        return np.asarray(rows)

    def rhs(self) -> np.ndarray:
        m = self.constraint_matrix().shape[0]
        b = np.zeros(m, dtype=float if self.real_mode else complex)
        b[0] = 1.0
        return b

    def certificate_weights(self, y) -> tuple:
        """Map raw constraint multipliers to (y_0, per-zero complex weights).

        In real mode the (Re, Im) row pair with multipliers (alpha, beta)
        acts on coefficients as Re[(alpha - i beta) lambda^k], i.e. as the
        weight (alpha - i beta)/2 on lambda plus its conjugate on
        conj(lambda).
        """
        if not self.real_mode:
            return complex(y[0]), np.asarray(y[1:], dtype=complex)
        weights = np.zeros(self.zeros.size, dtype=complex)
        idx = 1
        for group in self._pairing:
            if group[0] == "real":
                weights[group[1]] = y[idx]
                idx += 1
            else:
                alpha, beta = y[idx], y[idx + 1]
                idx += 2
                weights[group[1]] = (alpha - 1j * beta) / 2.0
                weights[group[2]] = (alpha + 1j * beta) / 2.0
        return complex(y[0]), weights


@dataclass
class BasisPursuitSolution:
    value: float
    coefficients: np.ndarray
    gap: float
    iterations: int
    converged: bool
    dual_raw: np.ndarray


@dataclass(frozen=True)
class DualCertificate:
    """Rescaled dual vector certifying cap_W(sigma) >= lower.

    The functional g(k) = y0 [k=0] + sum_i weights_i zeros_i^k satisfies
    |g(k)| <= 1 for 0 <= k <= verified_through by direct evaluation, and for
    all larger k because sum_i |weights_i| max|zeros|^(K+1) <= 1 - margin.
    """

    y0: complex
    weights: np.ndarray
    zeros: np.ndarray
    verified_through: int
    margin: float

    def functional_values(self, kmax: int) -> np.ndarray:
        k = np.arange(kmax + 1)
        vals = np.sum(self.weights[:, None] * self.zeros[:, None] ** k[None, :],
                      axis=0)
        vals[0] += self.y0
        return vals

    def tail_sum(self) -> float:
        rmax = float(np.max(np.abs(self.zeros)))
        return float(np.sum(np.abs(self.weights))) * rmax ** (self.verified_through + 1)


def _soft_threshold(x, t):
    mags = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(mags > t, 1.0 - t / np.where(mags > 0, mags, 1.0), 0.0)
    return x * scale


def solve_basis_pursuit(problem: BasisPursuitProblem, tol: float = 1e-9,
                        max_iter: int = 200000, step: float = 1.0,
                        relaxation: float = 1.8) -> BasisPursuitSolution:
    """Douglas-Rachford iteration for the truncated problem.

    The affine projection is applied through a QR factorization of the
    constraint adjoint, cached across iterations (the rows here are already
    scaled: every row's largest entry is the k = 0 one of modulus 1).  The
    duality gap is monitored every few dozen iterations on the projected
    (exactly feasible) iterate against the rescaled least-squares dual.
    """
    A = problem.constraint_matrix()
    b = problem.rhs()
    q_mat, r_mat = np.linalg.qr(A.conj().T)

    def project(v):
        resid = A @ v - b
        y = np.linalg.solve(r_mat.conj().T, resid)
        return v - q_mat @ y

    def dual_from(u):
        # least-squares multipliers for A^H y = u
        return np.linalg.solve(r_mat, q_mat.conj().T @ u)

    z = project(np.zeros(A.shape[1], dtype=A.dtype))
    x = z
    gap = math.inf
    best = None
    it = 0
    check_every = 32
    for it in range(1, max_iter + 1):
        x = _soft_threshold(z, step)
        y = project(2.0 * x - z)
        z = z + relaxation * (y - x)
        if it % check_every == 0 or it == max_iter:
            xf = project(x)
            primal = float(np.sum(np.abs(xf)))
            u = (z - x) / step
            dual = dual_from(u)
            eta = A.conj().T @ dual
            scale = max(float(np.max(np.abs(eta))), 1e-30)
            dval = float(np.real(dual[0])) / scale
            gap = primal - dval
            if best is None or primal < best[0]:
                best = (primal, xf, np.asarray(dual))
            if gap <= tol * max(1.0, primal):
                return BasisPursuitSolution(value=primal, coefficients=xf,
                                            gap=gap, iterations=it,
                                            converged=True,
                                            dual_raw=np.asarray(dual))
    primal, xf, dual = best
    warnings.warn(
        "basis pursuit stopped after %d iterations with duality gap %.3e"
        % (it, gap), ConvergenceWarning, stacklevel=2)
    return BasisPursuitSolution(value=primal, coefficients=xf, gap=gap,
                                iterations=it, converged=False, dual_raw=dual)


def certificate_from_solution(problem: BasisPursuitProblem,
                              solution: BasisPursuitSolution,
                              margin_target: float = 0.0) -> tuple:
    """Turn the solver's dual vector into an unconditional lower bound.

    Returns (lower, DualCertificate).  The certificate remains valid even if
    the primal solve did not converge; it is merely weaker.
    """
    y0, weights = problem.certificate_weights(solution.dual_raw)
    zeros = problem.zeros
    rmax = float(np.max(np.abs(zeros)))
    wsum = float(np.sum(np.abs(weights)))

    kcheck = problem.degree
    vals = np.sum(weights[:, None] * zeros[:, None] ** np.arange(kcheck + 1)[None, :],
                  axis=0)
    vals[0] += y0
    smax = float(np.max(np.abs(vals)))
    # extend the explicit check until the geometric tail drops under smax
    if wsum > smax and rmax > 0.0:
        kneed = int(math.ceil((math.log(smax) - math.log(wsum)) / math.log(rmax)))
        kcheck_ext = min(max(problem.degree, kneed), 4_000_000 // max(zeros.size, 1))
        if kcheck_ext > kcheck:
            k = np.arange(kcheck + 1, kcheck_ext + 1)
            extra = np.sum(weights[:, None] * zeros[:, None] ** k[None, :], axis=0)
            smax = max(smax, float(np.max(np.abs(extra))))
            kcheck = kcheck_ext
    tail = wsum * rmax ** (kcheck + 1)
    # a few ulps of headroom so the rescaled maximum stays strictly <= 1
    # after the division itself rounds
    scale = max(smax, tail) * (1.0 + 16.0 * np.finfo(float).eps)
    if scale <= 0.0:
        raise CertificateError("degenerate dual vector")
    lower = float(np.real(y0)) / scale
    if lower <= 0.0:
        raise CertificateError("certificate yields nonpositive bound %.3e" % lower)
    cert = DualCertificate(
        y0=complex(y0 / scale),
        weights=np.asarray(weights / scale),
        zeros=np.asarray(zeros),
        verified_through=int(kcheck),
        margin=float(1.0 - tail / scale),
    )
    if cert.margin <= margin_target:
        raise CertificateError("tail closure margin %.3e too small" % cert.margin)
    return lower, cert


def cap_wiener_primal(zeros, degree: int, tol: float = 1e-9,
                      max_iter: int = 200000) -> float:
    """Value of the truncated problem; upper bound for cap_W(sigma)."""
    problem = BasisPursuitProblem.build(zeros, degree)
    return solve_basis_pursuit(problem, tol=tol, max_iter=max_iter).value


def cap_wiener_certified_lower(zeros, degree: int, tol: float = 1e-9,
                               max_iter: int = 200000) -> tuple:
    """(lower bound, certificate) valid for the untruncated problem."""
    problem = BasisPursuitProblem.build(zeros, degree)
    solution = solve_basis_pursuit(problem, tol=tol, max_iter=max_iter)
    return certificate_from_solution(problem, solution)


def schaffer_lower_from_capacity(zeros, degree: int = None, tol: float = 1e-9) -> float:
    """prod|lambda_i| * (certified cap_W lower bound - 1).

    A lower bound for the best inverse-norm ratio achievable with the given
    spectrum; grows without bound along the ring configurations.
    """
    arr = _validated_zeros(zeros, require_nonzero=True)
    if degree is None:
        degree = 8 * arr.size
    lower, _ = cap_wiener_certified_lower(arr, degree, tol=tol)
    pm = float(np.prod(np.abs(arr)))
    return pm * (lower - 1.0)
