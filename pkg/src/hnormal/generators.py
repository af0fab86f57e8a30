"""
Seeded random instances for tests and demos.

All randomness flows from ``np.random.default_rng(seed)``, so equal seeds
give bit-identical instances.
"""

import numpy as np
import scipy.linalg

from .errors import IndexTooLarge
from .involutions import canonical_matrices, certify
from .kernel import DEFAULT_TOL
from .phi import solve_involution
from .space import InnerProductSpace

__all__ = ['gen_space', 'gen_neutral_involution', 'gen_nonsingular_with_sigma',
           'gen_factored', 'gen_h_unitary', 'random_matrix']


def random_matrix(rng, n, field='real', kappa=100.0):
    """Random ``n x n`` matrix with condition number at most ``kappa``.

    Singular values are drawn log-uniformly from ``[1/sqrt(kappa), sqrt(kappa)]``
    and combined with Haar-like orthogonal (unitary) factors.
    """
    def orth():
        G = rng.standard_normal((n, n))
        if field == 'complex':
            G = G + 1j * rng.standard_normal((n, n))
        Qm, R = np.linalg.qr(G)
        return Qm * (np.diag(R) / np.abs(np.diag(R)))

    U, V = orth(), orth()
    half = 0.5 * np.log(kappa)
    s = np.exp(rng.uniform(-half, half, n))
    return (U * s) @ V.conj().T


def _skew(rng, n, field, scale):
    R = rng.standard_normal((n, n))
    if field == 'complex':
        R = R + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (R - R.conj().T) / np.sqrt(n)


def gen_space(n, p, seed, field='real', kappa=100.0, tol=DEFAULT_TOL):
    """Inner product ``H = V diag(I_p, -I_{n-p}) V^H`` with ``cond(V) <= kappa``."""
    if not 0 <= p <= n or n < 1:
        raise ValueError('need 0 <= p <= n and n >= 1, got n=%d, p=%d' % (n, p))
    rng = np.random.default_rng(seed)
    V = random_matrix(rng, n, field, kappa)
    D = np.r_[np.ones(p), -np.ones(n - p)]
    return InnerProductSpace((V * D) @ V.conj().T, tol)


def _signature_basis(space, order):
    # Columns C with C^H H C = diag(order), order a +-1 sequence with the
    # inertia of H.  Positive and negative eigenvectors are consumed in turn.
    lam, E = np.linalg.eigh(space.H)
    pos = list(np.flatnonzero(lam > 0)[::-1])
    neg = list(np.flatnonzero(lam < 0))
    cols = [pos.pop(0) if s > 0 else neg.pop(0) for s in order]
    return E[:, cols] / np.sqrt(np.abs(lam[cols]))


def _flip_basis(space, m):
    # Q0 with Q0^H H Q0 = K = diag(flip(Z_m), I_{p-m}, -I_{q-m}).
    n, p = space.n, space.p
    order = [1] * m + [-1] * m + [1] * (p - m) + [-1] * (space.q - m)
    C = _signature_basis(space, order)
    if not m:
        return C
    s = 1.0 / np.sqrt(2.0)
    Q0 = C.copy()
    for j in range(m):
        e_pos, e_neg = C[:, j], C[:, m + j]
        # Pair column j with column 2m-1-j through the exchange matrix.
        Q0[:, j] = s * (e_pos + e_neg)
        Q0[:, 2 * m - 1 - j] = s * (e_pos - e_neg)
    return Q0


def gen_h_unitary(space, seed, scale=0.5):
    """Random H-unitary ``C exp(D A) C^{-1}``.

    ``C^H H C = D`` is a signature basis of ``H`` and ``A`` is
    skew-Hermitian, so ``cond`` of the result stays within
    ``cond(C)^2 exp(2 scale)`` instead of growing with ``||H^{-1}||``.
    """
    rng = np.random.default_rng(seed)
    order = [1] * space.p + [-1] * space.q
    C = _signature_basis(space, order)
    A = _skew(rng, space.n, space.field, scale)
    E = scipy.linalg.expm(np.array(order, dtype=float)[:, None] * A)
    L = np.linalg.solve(C.T, (C @ E).T).T
    return L.real if space.field == 'real' else L


def gen_neutral_involution(space, m, seed, tol=DEFAULT_TOL, scale=0.5):
    """Certified H-normal H-neutral involution of neutral index ``m``.

    Builds ``Q`` with ``Q^H H Q = K`` from the eigenbasis of ``H`` and a
    random K-unitary factor, then returns ``X = Q J Q^{-1}``.  The inner
    product is the given one, so ``(J, K)`` is the canonical pair of the
    result.

    Raises
    ------
    IndexTooLarge
        If ``m > min(p, q)``.
    """
    if m < 0 or m > min(space.p, space.q):
        raise IndexTooLarge('neutral index %d exceeds min(p, q) = %d'
                            % (m, min(space.p, space.q)))
    n = space.n
    rng = np.random.default_rng(seed)
    J, K = canonical_matrices(n, space.p, m, 'JK')
    U = scipy.linalg.expm(K @ _skew(rng, n, space.field, scale))
    Q = _flip_basis(space, m) @ U
    X = np.linalg.solve(Q.T, (Q @ J).T).T
    if space.field == 'real':
        X = X.real
    return certify(X, space, tol)


def gen_factored(space, m, seed, tol=DEFAULT_TOL, scale=0.5, rotations=True):
    """Like :func:`gen_nonsingular_with_sigma` but also return the factors.

    Returns a dict with ``F``, ``L``, ``X``, ``S`` and ``Phi``.  Since the
    polar factor is unique, ``S`` and ``Phi`` are what the decomposition of
    ``F`` must reproduce as ``S`` and ``Sigma``.
    """
    if m < 0 or m > min(space.p, space.q):
        raise IndexTooLarge('neutral index %d exceeds min(p, q) = %d'
                            % (m, min(space.p, space.q)))
    n, p, q = space.n, space.p, space.q
    rng = np.random.default_rng(seed)
    sub = rng.integers(0, 2 ** 63, size=2)
    order = [-1] * m + [1] * m + [1] * (p - m) + [-1] * (q - m)
    Mdiag = np.array(order, dtype=float)
    C = _signature_basis(space, order)
    Q = C @ scipy.linalg.expm(Mdiag[:, None] * _skew(rng, n, space.field, scale))

    D = np.diag(np.exp(rng.uniform(-1.0, 1.0, n)))
    if rotations:
        # Pair a +1 with a -1 coordinate of the positive Phi-block only; in
        # the negative block a nonreal S-spectrum would move eigenvalues of
        # F^[H] F off the negative real axis.
        for k in range(min(p, q) - m):
            if rng.random() < 0.5:
                i, j = 2 * m + k, p + m + k
                a = D[i, i]
                b = a * rng.uniform(0.2, 2.0)
                D[i, j], D[j, i] = b, -b
                D[j, j] = a
    S = np.linalg.solve(Q.T, (Q @ D).T).T
    Phi = np.linalg.solve(Q.T, (Q * np.r_[-np.ones(2 * m), np.ones(n - 2 * m)]).T).T
    if space.field == 'real':
        S, Phi = S.real, Phi.real
    X = solve_involution(Phi, space, tol, seed=int(sub[0])).X
    L = gen_h_unitary(space, int(sub[1]), scale)
    return {'F': L @ X @ S, 'L': L, 'X': X, 'S': S, 'Phi': Phi}


def gen_nonsingular_with_sigma(space, m, seed, tol=DEFAULT_TOL, scale=0.5,
                               rotations=True):
    """Nonsingular ``F`` whose ``F^[H] F`` has a ``2m``-dimensional negative
    eigenspace.

    ``F = L X S`` where, in a random basis ``Q`` with
    ``Q^H H Q = diag(-I_m, I_m, I_{p-m}, -I_{q-m})``,
    ``Phi = Q diag(-I_{2m}, I) Q^{-1}``, ``S = Q D Q^{-1}`` with ``D``
    positive diagonal (optionally with ``[[a, b], [-b, a]]`` blocks between
    coordinates of opposite sign in the ``+1`` block of ``Phi``, giving
    nonreal spectrum),
    ``X`` solves ``X^[H] X = Phi`` and ``L`` is H-unitary.

    Raises
    ------
    IndexTooLarge
        If ``m > min(p, q)``.
    """
    return gen_factored(space, m, seed, tol, scale, rotations)['F']
