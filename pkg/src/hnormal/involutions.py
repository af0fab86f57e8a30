"""
H-normal H-neutral involutions.

An involution ``X`` is H-neutral when its -1 eigenspace is H-neutral; it is
H-normal H-neutral exactly when ``X^2 = I`` and
``X^[H] X = X X^[H] = X^[H] + X - I``.  This module certifies such matrices,
builds their canonical pairs ``(J, K)`` / ``(P, M)`` and the per-plane
variants, and connects two involutions of equal neutral index by an
H-unitary similarity.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (DegenerateGram, NoSimilarity, NotHNeutral, NotHNormal,
                     NotInvolutory, RankDeficient)
from .kernel import DEFAULT_TOL, as_square, norm2
from .space import h_adjoint

__all__ = ['NeutralInvolution', 'CanonicalPair', 'LAYOUTS', 'certify',
           'canonical_pair', 'canonical_matrices', 'similarity',
           'adjoint_involution', 'exchange', 'range_basis']

LAYOUTS = ('JK', 'PM', 'JK_planes', 'PM_planes')


@dataclass(frozen=True)
class NeutralInvolution:
    X: np.ndarray
    m: int
    residuals: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.X.shape[0]


@dataclass(frozen=True)
class CanonicalPair:
    """``Q^{-1} X Q = first`` and ``Q^H H Q = second``."""
    Q: np.ndarray
    first: np.ndarray
    second: np.ndarray
    layout: str
    residuals: dict = field(default_factory=dict)


def exchange(m):
    """The ``m x m`` exchange matrix (ones on the anti-diagonal)."""
    return np.fliplr(np.eye(m))


def _rel(diff, scale):
    d = np.linalg.norm(diff)
    return float(d / scale) if scale > 0 else float(d)


def certify(X, space, tol=DEFAULT_TOL):
    """Certify ``X`` as an H-normal H-neutral involution.

    Returns the neutral index ``m = (n - trace X) / 2`` and the residuals of
    ``X^2 = I``, ``X^[H] X = X^[H] + X - I``, ``X^[H] X = X X^[H]`` and of the
    trace identity ``trace(X^[H] X) = n - 4m``.

    Raises
    ------
    NotInvolutory, NotHNeutral, NotHNormal
        Carrying the violated residual.
    """
    if isinstance(X, NeutralInvolution):
        X = X.X
    X = as_square(X, 'X')
    n = X.shape[0]
    if n != space.n:
        raise ValueError('dimension mismatch: X is %dx%d, space has n=%d' % (n, n, space.n))
    eye = np.eye(n)
    Xh = h_adjoint(X, space)
    nx, nxh = np.linalg.svd(np.stack([X, Xh]), compute_uv=False)[:, 0]
    XhX = Xh @ X
    residuals = {}
    residuals['involutory'] = _rel(X @ X - eye, nx * nx)
    if residuals['involutory'] > tol.eps_residual:
        raise NotInvolutory('X^2 != I', residuals['involutory'])
    residuals['neutral'] = _rel(XhX - Xh - X + eye, nx * nxh)
    if residuals['neutral'] > tol.eps_residual:
        raise NotHNeutral('X^[H]X != X^[H] + X - I', residuals['neutral'])
    residuals['normal'] = _rel(XhX - X @ Xh, nx * nxh)
    if residuals['normal'] > tol.eps_residual:
        raise NotHNormal('X^[H]X != XX^[H]', residuals['normal'])
    tr = np.trace(X)
    m_raw = (n - tr.real) / 2.0
    m = int(round(m_raw))
    drift = abs(m_raw - m) + abs(tr.imag) / 2.0
    if drift >= 0.1:
        raise NotInvolutory('trace of X is not n - 2m for an integer m', drift)
    residuals['trace'] = float(abs(np.trace(XhX) - (n - 4 * m)) / n)
    if residuals['trace'] > tol.eps_residual:
        raise NotHNeutral('trace(X^[H]X) != n - 4m', residuals['trace'])
    return NeutralInvolution(X=X, m=m, residuals=residuals)


def range_basis(P, rank, tol=DEFAULT_TOL):
    """Orthonormal basis of ``range(P)`` by column-pivoted QR.

    ``rank`` is the expected rank; the numerical rank decided with
    ``eps_rank`` must agree with it.
    """
    n = P.shape[0]
    if rank == 0:
        return np.zeros((n, 0), dtype=P.dtype)
    Qr, R, _ = scipy.linalg.qr(P, pivoting=True, mode='economic')
    d = np.abs(np.diag(R))
    numerical = int((d > tol.eps_rank * d[0]).sum()) if d[0] > 0 else 0
    if numerical != rank:
        raise RankDeficient('projector has numerical rank %d, expected %d' % (numerical, rank))
    return Qr[:, :rank]


def _eta_factor(C, n_pos, tol, scale):
    # Columns G with G^H C G = diag(I_npos, -I_nneg): positives first, each
    # group by descending magnitude.
    lam, E = np.linalg.eigh(0.5 * (C + C.conj().T))
    if len(lam) and np.abs(lam).min() <= tol.eps_rank * scale:
        raise DegenerateGram('Gram matrix on pos(Phi) is singular')
    ipos = np.flatnonzero(lam > 0)
    ineg = np.flatnonzero(lam < 0)
    if len(ipos) != n_pos:
        raise DegenerateGram('Gram matrix on pos(Phi) has %d positive eigenvalues, expected %d'
                             % (len(ipos), n_pos))
    ipos = ipos[np.argsort(-np.abs(lam[ipos]), kind='stable')]
    ineg = ineg[np.argsort(-np.abs(lam[ineg]), kind='stable')]
    order = np.concatenate([ipos, ineg])
    return E[:, order] / np.sqrt(np.abs(lam[order]))


def canonical_matrices(n, p, m, layout='JK'):
    """The canonical pair for neutral index ``m`` over inertia ``(p, n - p)``."""
    q = n - p
    if layout not in LAYOUTS:
        raise ValueError('unknown layout %r' % (layout,))
    if m > min(p, q):
        raise ValueError('neutral index %d exceeds min(p, q) = %d' % (m, min(p, q)))
    Z = exchange(m)
    eta = np.diag(np.r_[np.ones(p - m), -np.ones(q - m)])
    rest = np.eye(n - 2 * m)
    zero = np.zeros((m, m))
    flip = np.block([[zero, Z], [Z, zero]]) if m else np.zeros((0, 0))
    diag = np.diag(np.r_[-np.ones(m), np.ones(m)])
    if layout.startswith('JK'):
        first = scipy.linalg.block_diag(diag, rest)
        second = scipy.linalg.block_diag(flip, eta)
    else:
        first = scipy.linalg.block_diag(flip, rest)
        second = scipy.linalg.block_diag(diag, eta)
    if layout.endswith('_planes'):
        perm = _plane_permutation(n, m)
        first = first[np.ix_(perm, perm)]
        second = second[np.ix_(perm, perm)]
    return first, second


def _plane_permutation(n, m):
    # Pair coordinate i with 2m-1-i so that each hyperbolic plane is contiguous.
    perm = []
    for i in range(m):
        perm += [i, 2 * m - 1 - i]
    return np.array(perm + list(range(2 * m, n)), dtype=int)


def canonical_pair(X, space, tol=DEFAULT_TOL, layout='JK'):
    """Canonical pair of ``(X, H)``.

    Columns of ``Q`` are, in order: a basis of ``neg(X)``; a basis of
    ``neg(X^[H])`` transformed by ``B^{-1} Z_m`` where ``B`` is the Gram block
    between the two negative eigenspaces; a basis of ``pos(X^[H] X)``
    transformed to diagonalize its Gram matrix to ``diag(I_{p-m}, -I_{q-m})``.
    Then ``Q^{-1} X Q = J`` and ``Q^H H Q = K``.  Layout ``PM`` applies the
    further transformation that swaps the roles of the two matrices, and the
    ``_planes`` layouts regroup the first ``2m`` coordinates into ``m``
    contiguous hyperbolic planes.

    Raises
    ------
    DegenerateGram
        If a Gram block expected to be nonsingular fails the rank test.
    """
    if layout not in LAYOUTS:
        raise ValueError('unknown layout %r' % (layout,))
    inv = X if isinstance(X, NeutralInvolution) else certify(X, space, tol)
    X, m = inv.X, inv.m
    n, p = space.n, space.p
    if m > min(space.p, space.q):
        raise DegenerateGram('neutral index %d exceeds min(p, q)' % m)
    H = space.H
    eye = np.eye(n)
    Xh = h_adjoint(X, space)
    Phi = Xh @ X
    V = range_basis((eye - X) / 2, m, tol)
    U = range_basis((eye - Xh) / 2, m, tol)
    Wb = range_basis((eye + Phi) / 2, n - 2 * m, tol)
    blocks = [V]
    if m:
        B = V.conj().T @ H @ U
        sv = np.linalg.svd(B, compute_uv=False)
        if sv[-1] <= tol.eps_rank * space.norm:
            raise DegenerateGram('Gram block between neg(X) and neg(X^[H]) is singular')
        blocks.append(np.linalg.solve(B.T, U.T).T @ exchange(m))
    if n - 2 * m:
        C = Wb.conj().T @ H @ Wb
        blocks.append(Wb @ _eta_factor(C, p - m, tol, space.norm))
    Q = np.hstack(blocks)
    if layout.startswith('PM') and m:
        s = 1.0 / np.sqrt(2.0)
        Z = exchange(m)
        E = np.eye(n)
        E[:2 * m, :2 * m] = np.block([[-s * np.eye(m), s * Z], [s * Z, s * np.eye(m)]])
        Q = Q @ E
    if layout.endswith('_planes'):
        Q = Q[:, _plane_permutation(n, m)]
    first, second = canonical_matrices(n, p, m, layout)
    residuals = _canonical_residuals(Q, X, H, first, second)
    return CanonicalPair(Q=Q, first=first, second=second, layout=layout, residuals=residuals)


def _canonical_residuals(Q, X, H, first, second):
    QiXQ = np.linalg.solve(Q, X @ Q)
    QHQ = Q.conj().T @ H @ Q
    Qinv = np.linalg.inv(Q)
    return {
        'similarity': _rel(QiXQ - first, norm2(first)),
        'congruence': _rel(QHQ - second, norm2(second)),
        'X_roundtrip': _rel(Q @ first @ Qinv - X, norm2(X)),
        'H_roundtrip': _rel(Qinv.conj().T @ second @ Qinv - H, norm2(H)),
        'cond_Q': float(np.linalg.cond(Q)),
    }


def similarity(X1, X2, space, tol=DEFAULT_TOL):
    """H-unitary ``L`` with ``L^{-1} X2 L = X1``.

    Built from the canonical pairs as ``L = Q2 Q1^{-1}``.

    Raises
    ------
    NoSimilarity
        If the neutral indices differ.
    """
    inv1 = X1 if isinstance(X1, NeutralInvolution) else certify(X1, space, tol)
    inv2 = X2 if isinstance(X2, NeutralInvolution) else certify(X2, space, tol)
    if inv1.m != inv2.m:
        raise NoSimilarity('neutral indices differ: %d != %d' % (inv1.m, inv2.m))
    Q1 = canonical_pair(inv1, space, tol).Q
    Q2 = canonical_pair(inv2, space, tol).Q
    return np.linalg.solve(Q1.T, Q2.T).T


def adjoint_involution(X, space, tol=DEFAULT_TOL):
    """Certified ``X^[H]``; it has the same neutral index as ``X``."""
    inv = X if isinstance(X, NeutralInvolution) else certify(X, space, tol)
    adj = certify(h_adjoint(inv.X, space), space, tol)
    if adj.m != inv.m:
        raise NotHNeutral('X^[H] has neutral index %d, X has %d' % (adj.m, inv.m),
                          float(abs(adj.m - inv.m)))
    return adj
