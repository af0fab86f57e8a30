"""
Solve ``X^[H] X = Phi`` for an H-normal H-neutral involution ``X``.

``Phi`` must be H-selfadjoint and involutory with a hyperbolic -1 eigenspace
of dimension ``2m``.  The pair ``(Phi, H)`` is brought to the form
``Q^{-1} Phi Q = diag(-I_m, -I_m, I_{n-2m})``,
``Q^H H Q = diag(-I_m, I_m, eta)`` and then ``X = Q P Q^{-1}`` with ``P``
swapping the first two blocks through the exchange matrix.
"""

import numpy as np
import scipy.linalg

from .errors import (NegSpaceNotHyperbolic, NotHSelfadjoint, NotInvolutory,
                     PhiMismatch)
from .involutions import (NeutralInvolution, _eta_factor, certify, exchange,
                          range_basis, similarity)
from .kernel import DEFAULT_TOL, as_square, norm2
from .space import h_adjoint, is_h_selfadjoint

__all__ = ['phi_canonical_basis', 'solve_involution', 'all_solutions_related']


def phi_canonical_basis(Phi, space, tol=DEFAULT_TOL):
    """Return ``(Q, m)`` with ``Q^{-1} Phi Q = diag(-I_m, -I_m, I)`` and
    ``Q^H H Q = diag(-I_m, I_m, I_{p-m}, -I_{q-m})``.

    Raises
    ------
    NotInvolutory, NotHSelfadjoint, NegSpaceNotHyperbolic
    """
    Phi = as_square(Phi, 'Phi')
    n = space.n
    if Phi.shape[0] != n:
        raise ValueError('dimension mismatch: Phi is %dx%d, space has n=%d' % (
            Phi.shape[0], Phi.shape[0], n))
    eye = np.eye(n)
    r_inv = np.linalg.norm(Phi @ Phi - eye) / norm2(Phi) ** 2
    if r_inv > tol.eps_residual:
        raise NotInvolutory('Phi^2 != I', r_inv)
    sa = is_h_selfadjoint(Phi, space, tol)
    if not sa:
        raise NotHSelfadjoint('Phi is not H-selfadjoint', sa.residual)
    k = int(round((n - np.trace(Phi).real) / 2.0))
    N = range_basis((eye - Phi) / 2, k, tol)
    # N is orthonormal, so the Gram inertia threshold needs no basis scale.
    G = N.conj().T @ space.H @ N
    lam, E = np.linalg.eigh(0.5 * (G + G.conj().T))
    thr = tol.eps_rank * space.norm
    inertia = (int((lam > thr).sum()), int((lam < -thr).sum()))
    if sum(inertia) != k or inertia[0] != inertia[1]:
        raise NegSpaceNotHyperbolic('negative eigenspace of Phi has dim %d, inertia %s'
                                    % (k, inertia))
    m = k // 2
    blocks = []
    if m:
        ineg = np.flatnonzero(lam < 0)
        ipos = np.flatnonzero(lam > 0)
        ineg = ineg[np.argsort(-np.abs(lam[ineg]), kind='stable')]
        ipos = ipos[np.argsort(-np.abs(lam[ipos]), kind='stable')]
        # Scaling to unit H-norm keeps cond(Q) under control.
        blocks.append(N @ (E[:, ineg] / np.sqrt(-lam[ineg])))
        blocks.append(N @ (E[:, ipos] / np.sqrt(lam[ipos])))
    if n - k:
        Pb = range_basis((eye + Phi) / 2, n - k, tol)
        C = Pb.conj().T @ space.H @ Pb
        blocks.append(Pb @ _eta_factor(C, space.p - m, tol, space.norm))
    return np.hstack(blocks), m


def _random_commutant(n, m, p, field, seed):
    # Random M-unitary matrix commuting with diag(-I_m, -I_m, I): exp(M A)
    # with A skew-Hermitian and block diagonal.
    rng = np.random.default_rng(seed)
    M = np.diag(np.r_[-np.ones(m), np.ones(m), np.ones(p - m), -np.ones(n - p - m)])
    dtype = complex if field == 'complex' else float
    A = np.zeros((n, n), dtype=dtype)
    for lo, hi in ((0, 2 * m), (2 * m, n)):
        d = hi - lo
        if d == 0:
            continue
        R = rng.standard_normal((d, d))
        if field == 'complex':
            R = R + 1j * rng.standard_normal((d, d))
        A[lo:hi, lo:hi] = 0.5 * (R - R.conj().T) / np.sqrt(d)
    return scipy.linalg.expm(M @ A)


def solve_involution(Phi, space, tol=DEFAULT_TOL, seed=None):
    """H-normal H-neutral involution ``X`` with ``X^[H] X = X X^[H] = Phi``.

    With ``seed=None`` the construction is deterministic.  A seed moves the
    canonical basis by a random element of the group preserving
    ``(Phi, H)``, giving a different member of the solution orbit.

    Raises
    ------
    NotInvolutory, NotHSelfadjoint, NegSpaceNotHyperbolic
    """
    Q, m = phi_canonical_basis(Phi, space, tol)
    Phi = as_square(Phi, 'Phi')
    n = space.n
    if seed is not None:
        Q = Q @ _random_commutant(n, m, space.p, space.field, seed)
    P = np.eye(n)
    if m:
        Z = exchange(m)
        P[:2 * m, :2 * m] = 0
        P[:m, m:2 * m] = P[m:2 * m, :m] = Z
    X = np.linalg.solve(Q.T, (Q @ P).T).T
    if space.field == 'real':
        X = X.real
    inv = certify(X, space, tol)
    Xh = h_adjoint(inv.X, space)
    scale = norm2(Phi)
    residuals = dict(inv.residuals)
    residuals['phi'] = float(np.linalg.norm(Xh @ inv.X - Phi) / scale)
    residuals['phi_left'] = float(np.linalg.norm(inv.X @ Xh - Phi) / scale)
    return NeutralInvolution(X=inv.X, m=inv.m, residuals=residuals)


def all_solutions_related(X1, X2, Phi, space, tol=DEFAULT_TOL):
    """H-unitary ``L`` commuting with ``Phi`` such that ``L^{-1} X2 L = X1``."""
    inv1 = X1 if isinstance(X1, NeutralInvolution) else certify(X1, space, tol)
    inv2 = X2 if isinstance(X2, NeutralInvolution) else certify(X2, space, tol)
    Phi = as_square(Phi, 'Phi')
    scale = norm2(Phi)
    for inv in (inv1, inv2):
        r = np.linalg.norm(h_adjoint(inv.X, space) @ inv.X - Phi) / scale
        if r > tol.eps_residual:
            raise PhiMismatch('X^[H]X != Phi', r)
    return similarity(inv1, inv2, space, tol)
