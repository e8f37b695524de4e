"""Companion matrices and inverse-norm ratios.

For an invertible N x N matrix the inverse is controlled by

    ||T^-1|| <= S_N ||T||^(N-1) / |det T|,   S_N <= sqrt(e N),

and the interesting question is how large the ratio

    |det T| ||T^-1|| / ||T||^(N-1)

can get.  Companion matrices of polynomials with all roots in the unit disk
are the extremal candidates this package probes: their spectra are exactly
the root sets fed to the capacity machinery.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
import scipy.linalg

from .disk import _validated_zeros

PIVOT_RTOL = 1e-13
SPECTRAL_TOL = 1e-10
SPECTRAL_SVD_MAX = 512


class SingularMatrixError(ValueError):
    """LU elimination met a pivot too small to trust."""


def companion_matrix(zeros) -> np.ndarray:
    """Companion matrix whose eigenvalues are the given points.

    Subdiagonal of ones; last column carries the negated monic polynomial
    coefficients.  Real when the zero set is conjugate-closed (then np.poly
    returns real coefficients).
    """
    arr = _validated_zeros(zeros)
    coeffs = np.poly(arr)          # [1, c_{N-1}, ..., c_0]
    n = arr.size
    T = np.zeros((n, n), dtype=coeffs.dtype)
    if n > 1:
        T[np.arange(1, n), np.arange(n - 1)] = 1.0
    T[:, -1] = -coeffs[1:][::-1]
    return T


def operator_norm(T, kind: str = "spectral") -> float:
    """Induced norm of a square matrix.

    kind: "col-sum" (l1 -> l1), "row-sum" (linf -> linf), or "spectral"
    (l2 -> l2).  Spectral uses power iteration on T*T from a deterministic
    start; small matrices fall back to an SVD when the iteration stalls.
    """
    T = np.asarray(T)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (T.shape,))
    if kind == "col-sum":
        return float(np.max(np.sum(np.abs(T), axis=0)))
    if kind == "row-sum":
        return float(np.max(np.sum(np.abs(T), axis=1)))
    if kind != "spectral":
        raise ValueError("unknown norm kind %r" % (kind,))
    n = T.shape[0]
    if n == 0:
        return 0.0
    # deterministic start biased toward the largest column
    v = np.abs(T[:, int(np.argmax(np.sum(np.abs(T), axis=0)))]).astype(float)
    v = v + 1.0 / n
    v /= np.linalg.norm(v)
    v = v.astype(complex) if np.iscomplexobj(T) else v
    Th = T.conj().T
    prev = 0.0
    for _ in range(10000):
        w = Th @ (T @ v)
        cur = float(np.linalg.norm(w))
        if cur == 0.0:
            return 0.0
        v = w / cur
        if abs(cur - prev) <= SPECTRAL_TOL * cur:
            return math.sqrt(cur)
        prev = cur
    if n <= SPECTRAL_SVD_MAX:
        return float(np.linalg.norm(T, 2))
    return math.sqrt(prev)  # stalled on a large matrix: best available


def inverse_and_det(T) -> tuple:
    """(T^-1, det T) through one LU factorization.

    Raises SingularMatrixError when any pivot falls below PIVOT_RTOL times
    the largest, naming its position; the determinant comes from the pivot
    product and the permutation sign, so both outputs are consistent.
    """
    T = np.asarray(T)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (T.shape,))
    with warnings.catch_warnings():
        # scipy warns on exact zero pivots; we raise our own error below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(T, check_finite=True)
    diag = np.diag(lu)
    mags = np.abs(diag)
    biggest = float(np.max(mags)) if mags.size else 0.0
    if biggest == 0.0:
        raise SingularMatrixError("pivot 0 is exactly zero")
    bad = np.nonzero(mags < PIVOT_RTOL * biggest)[0]
    if bad.size:
        k = int(bad[0])
        raise SingularMatrixError(
            "pivot %d has magnitude %.3e (threshold %.3e)"
            % (k, mags[k], PIVOT_RTOL * biggest))
    inv = scipy.linalg.lu_solve((lu, piv), np.eye(T.shape[0], dtype=lu.dtype))
    sign = 1.0
    for i, p in enumerate(piv):
        if p != i:
            sign = -sign
    det = sign * np.prod(diag)
    return inv, complex(det) if np.iscomplexobj(lu) else float(det)


def inverse_norm_ratio(T, kind: str = "spectral") -> float:
    """|det T| * ||T^-1|| / ||T||^(N-1), evaluated in log space.

    ||T||^(N-1) overflows float64 well before N = 1000 whenever ||T|| > 2,
    so the ratio is assembled from logarithms and exponentiated once.
    """
    T = np.asarray(T)
    inv, det = inverse_and_det(T)
    n = T.shape[0]
    nrm = operator_norm(T, kind)
    inv_nrm = operator_norm(inv, kind)
    if nrm == 0.0 or inv_nrm == 0.0:
        return 0.0
    log_ratio = (math.log(abs(det)) + math.log(inv_nrm)
                 - (n - 1) * math.log(nrm))
    return math.exp(log_ratio)


def schaffer_bound(n: int) -> float:
    """sqrt(e n): the known ceiling for the inverse-norm ratio at size n."""
    if n < 1:
        raise ValueError("matrix size must be positive")
    return math.sqrt(math.e * n)


def companion_ratio(zeros, kind: str = "spectral") -> float:
    """Inverse-norm ratio of the companion matrix built on the given spectrum."""
    return inverse_norm_ratio(companion_matrix(zeros), kind)
