"""
Dense spectral substrate.

Schur forms, the negative-real / rest spectral split, oblique spectral
projectors, principal square roots and Sylvester solves.  Everything above
this module talks to the spectrum only through these functions.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .errors import (NegativeRealEigenvalue, SchurConvergenceError,
                     SingularInput, SpectraOverlap)

__all__ = ['ToleranceConfig', 'DEFAULT_TOL', 'SpectrumSplit', 'as_square',
           'schur', 'classify_eigenvalues', 'split_spectrum',
           'spectral_projector_neg', 'principal_sqrt', 'sylvester_solve']


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds used for every numerical decision.

    Parameters
    ----------
    eps_class : float or None
        Relative threshold for eigenvalue classification and the singularity
        guard.  ``None`` means ``1e-10 * n`` for an ``n x n`` input.
    eps_residual : float
        Acceptance threshold for relative residuals of defining identities.
    eps_rank : float
        Relative threshold below which a Gram matrix or projector is
        considered rank deficient.
    eps_cluster : float
        Relative distance below which eigenvalues are merged into one
        cluster before classification.  A computed Jordan block of size
        ``s`` splits into eigenvalues at distance ~ ``u**(1/s)``; clustering
        keeps them on the same side of the split.
    """
    eps_class: float = None
    eps_residual: float = 1e-9
    eps_rank: float = 1e-8
    eps_cluster: float = 1e-3

    def __post_init__(self):
        for name in ('eps_class', 'eps_residual', 'eps_rank', 'eps_cluster'):
            value = getattr(self, name)
            if value is None and name == 'eps_class':
                continue
            if not 0.0 < value < 1.0:
                raise ValueError('%s must lie in (0, 1), got %r' % (name, value))

    def class_threshold(self, n):
        if self.eps_class is None:
            return 1e-10 * n
        return self.eps_class

    def as_dict(self):
        return {'eps_class': self.eps_class, 'eps_residual': self.eps_residual,
                'eps_rank': self.eps_rank, 'eps_cluster': self.eps_cluster}


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class SpectrumSplit:
    neg_real: np.ndarray
    rest: np.ndarray
    basis_neg: np.ndarray
    basis_rest: np.ndarray


def norm2(A):
    """Spectral norm (largest singular value)."""
    A = np.asarray(A)
    return float(np.linalg.svd(A, compute_uv=False)[0]) if A.size else 0.0


def as_square(A, name='A'):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError('%s must be a square matrix, got shape %s' % (name, A.shape))
    if A.shape[0] == 0:
        raise ValueError('%s must be non-empty' % name)
    if np.iscomplexobj(A):
        return A.astype(np.complex128, copy=False)
    return A.astype(np.float64, copy=False)


def schur(A):
    """Schur decomposition ``A = Q T Q^H``.

    Real input gives the real quasi-triangular form with 2x2 blocks for
    complex conjugate pairs; complex input gives the triangular form.
    """
    A = as_square(A)
    if not np.isfinite(A).all():
        raise ValueError('array must not contain infs or NaNs')
    n = A.shape[0]
    # Direct LAPACK call: the scipy wrapper's checks and workspace query
    # dominate the cost for small matrices.  66 n covers the blocked QR sweep.
    select = lambda *args: None  # noqa: E731
    if np.iscomplexobj(A):
        T, _, _, Q, _, info = lapack.zgees(select, A, lwork=max(1, 66 * n))
    else:
        T, _, _, _, Q, _, info = lapack.dgees(select, A, lwork=max(1, 66 * n))
    if info < 0:
        raise ValueError('illegal argument to gees (info=%d)' % info)
    if info > 0:
        raise SchurConvergenceError('Schur decomposition did not converge (info=%d)' % info,
                                    info=info)
    return Q, T


def _schur_eigenvalues(T):
    # Eigenvalues in diagonal order; conjugate pairs of real 2x2 blocks come
    # out as exact conjugates.
    n = T.shape[0]
    if np.iscomplexobj(T):
        return np.diag(T).copy()
    eigs = np.empty(n, dtype=complex)
    i = 0
    while i < n:
        if i + 1 < n and T[i + 1, i] != 0.0:
            a, b, c, d = T[i, i], T[i, i + 1], T[i + 1, i], T[i + 1, i + 1]
            mean = 0.5 * (a + d)
            disc = 0.25 * (a - d) ** 2 + b * c
            if disc < 0:
                im = np.sqrt(-disc)
                eigs[i], eigs[i + 1] = complex(mean, im), complex(mean, -im)
            else:
                r = np.sqrt(disc)
                eigs[i], eigs[i + 1] = mean + r, mean - r
            i += 2
        else:
            eigs[i] = T[i, i]
            i += 1
    return eigs


def _components(adjacency):
    # Connected-component labels of a symmetric boolean adjacency matrix.
    n = adjacency.shape[0]
    labels = np.arange(n)
    rows, cols = np.nonzero(adjacency)
    for i, j in zip(rows[rows < cols], cols[rows < cols]):
        a, b = labels[i], labels[j]
        if a != b:
            labels[labels == b] = a
    return labels


def classify_eigenvalues(eigs, norm, tol=DEFAULT_TOL, n=None):
    """Return a boolean mask marking the negative real eigenvalues.

    Eigenvalues closer than ``eps_cluster`` (relative) are grouped and each
    group is classified by its centroid: negative real iff
    ``Re c < -thr`` and ``|Im c| <= thr`` with ``thr = eps_class * norm``.

    Raises
    ------
    SingularInput
        If any eigenvalue has modulus at most ``thr``.
    """
    eigs = np.asarray(eigs, dtype=complex)
    n = len(eigs) if n is None else n
    thr = tol.class_threshold(n) * norm
    mags = np.abs(eigs)
    if len(eigs) == 0:
        return np.zeros(0, dtype=bool)
    if mags.min() <= thr:
        raise SingularInput('matrix is numerically singular: |lambda_min| = %.3e <= %.3e'
                            % (mags.min(), thr))
    dist = np.abs(eigs[:, None] - eigs[None, :])
    adjacency = dist <= tol.eps_cluster * np.maximum(mags[:, None], mags[None, :])
    labels = _components(adjacency)
    # Per-cluster centroids, broadcast back to the members.
    counts = np.bincount(labels, minlength=len(eigs))
    sums = (np.bincount(labels, eigs.real, len(eigs))
            + 1j * np.bincount(labels, eigs.imag, len(eigs)))
    centroid = sums[labels] / counts[labels]
    return (centroid.real < -thr) & (np.abs(centroid.imag) <= thr)


def _ordered_schur(A, tol):
    # Schur form with the negative real cluster moved to the leading block.
    A = as_square(A)
    n = A.shape[0]
    Q, T = schur(A)
    eigs = _schur_eigenvalues(T)
    neg = classify_eigenvalues(eigs, np.linalg.norm(A), tol, n)
    k = int(neg.sum())
    if 0 < k < n and not neg[:k].all():
        select = neg.astype(np.int32)
        if np.iscomplexobj(T):
            T, Q, _, _, _, _, info = lapack.ztrsen(select, T, Q, job='N')
        else:
            T, Q, _, _, _, _, _, info = lapack.dtrsen(select, T, Q, job='N')
        if info != 0:
            raise SchurConvergenceError('Schur reordering failed (info=%d)' % info, info=info)
        reordered = _schur_eigenvalues(T)
        neg = np.zeros(n, dtype=bool)
        neg[:k] = True
        eigs = reordered
    return Q, T, k, eigs[:k], eigs[k:]


def _triangular_sylvester(T11, T22, T12):
    # Solves T11 Y - Y T22 = T12 for (quasi-)triangular blocks.
    if np.iscomplexobj(T11) or np.iscomplexobj(T22) or np.iscomplexobj(T12):
        Y, scale, info = lapack.ztrsyl(T11.astype(complex), T22.astype(complex),
                                       T12.astype(complex), isgn=-1)
    else:
        Y, scale, info = lapack.dtrsyl(T11, T22, T12, isgn=-1)
    if info < 0:
        raise ValueError('illegal argument to trsyl (info=%d)' % info)
    return Y / scale


def _decoupling(A, tol):
    Q, T, k, neg, rest = _ordered_schur(A, tol)
    n = T.shape[0]
    Y = None
    if 0 < k < n:
        Y = _triangular_sylvester(T[:k, :k], T[k:, k:], T[:k, k:])
    return Q, T, k, neg, rest, Y


def split_spectrum(A, tol=DEFAULT_TOL):
    """Split the spectrum of ``A`` into negative real eigenvalues and the rest.

    Returns orthonormal bases for both invariant subspaces.  For real ``A``
    the bases are real.
    """
    Q, T, k, neg, rest, Y = _decoupling(A, tol)
    n = T.shape[0]
    basis_neg = Q[:, :k].copy()
    if k == 0 or k == n:
        basis_rest = Q[:, k:].copy()
    else:
        # Invariant subspace of T22 in Schur coordinates is [-Y; I].
        stacked = np.vstack([-Y, np.eye(n - k, dtype=Y.dtype)])
        basis_rest, _ = np.linalg.qr(Q @ stacked)
    return SpectrumSplit(neg_real=neg, rest=rest, basis_neg=basis_neg, basis_rest=basis_rest)


def spectral_projector_neg(A, tol=DEFAULT_TOL):
    """Oblique spectral projector onto the negative real invariant subspace.

    The kernel is the complementary invariant subspace, so the result is a
    polynomial in ``A``: it is idempotent and commutes with ``A``.
    """
    Q, T, k, _, _, Y = _decoupling(A, tol)
    n = T.shape[0]
    if k == 0:
        return np.zeros_like(T)
    if k == n:
        return np.eye(n, dtype=T.dtype)
    Q1 = Q[:, :k]
    Q2 = Q[:, k:]
    return Q1 @ (Q1.conj().T + Y @ Q2.conj().T)


def _sqrt_triu(T):
    n = T.shape[0]
    R = np.zeros_like(T)
    d = np.sqrt(np.diag(T))
    R[np.diag_indices(n)] = d
    for k in range(1, n):
        for i in range(n - k):
            j = i + k
            s = R[i, i + 1:j] @ R[i + 1:j, j]
            R[i, j] = (T[i, j] - s) / (d[i] + d[j])
    return R


def principal_sqrt(A, tol=DEFAULT_TOL):
    """Principal square root by the Schur method.

    The triangular recurrence fills the diagonal first and then one
    superdiagonal at a time, which works for defective ``A`` as well.

    Raises
    ------
    NegativeRealEigenvalue
        If ``A`` has eigenvalues classified as negative real.
    SingularInput
        If ``A`` is numerically singular.
    """
    A = as_square(A)
    n = A.shape[0]
    Z, T = schur(A.astype(complex))
    eigs = np.diag(T)
    neg = classify_eigenvalues(eigs, np.linalg.norm(A), tol, n)
    if neg.any():
        raise NegativeRealEigenvalue(eigs[neg])
    R = _sqrt_triu(T)
    S = Z @ R @ Z.conj().T
    if not np.iscomplexobj(A):
        # The principal square root of a real matrix is real.
        S = S.real.copy()
    return S


def sylvester_solve(A, B, C, tol=DEFAULT_TOL):
    """Solve ``A Y - Y B = C``.

    Raises
    ------
    SpectraOverlap
        If the spectra of ``A`` and ``B`` are closer than
        ``eps_class * (||A|| + ||B||)``.
    """
    A = np.atleast_2d(np.asarray(A))
    B = np.atleast_2d(np.asarray(B))
    C = np.atleast_2d(np.asarray(C))
    if C.shape != (A.shape[0], B.shape[0]):
        raise ValueError('shape mismatch: A %s, B %s, C %s' % (A.shape, B.shape, C.shape))
    ea = np.linalg.eigvals(A)
    eb = np.linalg.eigvals(B)
    sep = np.abs(ea[:, None] - eb[None, :]).min()
    thr = tol.class_threshold(A.shape[0] + B.shape[0]) * (np.linalg.norm(A) + np.linalg.norm(B))
    if sep <= thr:
        raise SpectraOverlap(sep)
    return scipy.linalg.solve_sylvester(A, -B, C)
