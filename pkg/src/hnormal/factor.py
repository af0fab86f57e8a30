"""
Indefinite polar decomposition and the factorizations into H-normal factors.

Every nonsingular ``F`` splits uniquely as ``F = W S = S' W`` where
``S = (Sigma F^[H] F)^{1/2}``, ``S' = (Sigma' F F^[H])^{1/2}``,
``Sigma = Sign(F^[H] F)`` and ``Sigma' = Sign(F F^[H])``.  The factor ``W``
then splits (non-uniquely) as ``W = L X = X' L'`` with ``L, L'`` H-unitary and
``X, X'`` H-normal H-neutral involutions, giving the four arrangements

    LXS : F = L X S        SLX : F = S' L X
    SXL : F = S' X' L'     XLS : F = X' L' S
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (InternalClassificationConflict, NegativeRealEigenvalue,
                     HNormalError)
from .involutions import certify
from .kernel import DEFAULT_TOL, as_square, norm2, principal_sqrt
from .phi import solve_involution
from .sign import sign_matrix
from .space import h_adjoint

__all__ = ['PolarFactors', 'NormalFactorization', 'VARIANTS', 'indefinite_polar',
           'split_w_right', 'split_w_left', 'factor_normal', 'verify_factorization']

VARIANTS = ('LXS', 'SLX', 'SXL', 'XLS')

# Role of each factor position, per variant.
ROLES = {
    'LXS': ('L', 'X', 'S'),
    'SLX': ('Sprime', 'L', 'X'),
    'SXL': ('Sprime', 'X', 'L'),
    'XLS': ('X', 'L', 'S'),
}


@dataclass(frozen=True)
class PolarFactors:
    W: np.ndarray
    S: np.ndarray
    Sprime: np.ndarray
    Sigma: np.ndarray
    SigmaPrime: np.ndarray
    residuals: dict = field(default_factory=dict)
    conditions: dict = field(default_factory=dict)

    @property
    def neg_dim(self):
        """Dimension of the -1 eigenspace of Sigma."""
        n = self.Sigma.shape[0]
        return int(round((n - np.trace(self.Sigma).real) / 2.0))


@dataclass(frozen=True)
class NormalFactorization:
    variant: str
    factors: tuple
    certificates: dict
    neutral_index: int
    polar: PolarFactors = None

    def __getitem__(self, role):
        """Factor by role name: ``'L'``, ``'X'``, ``'S'`` or ``'Sprime'``."""
        return self.factors[ROLES[self.variant].index(role)]

    @property
    def product(self):
        a, b, c = self.factors
        return a @ b @ c

    def passed(self, tol=DEFAULT_TOL):
        return certificates_pass(self.certificates, tol)


def certificates_pass(certificates, tol=DEFAULT_TOL):
    for key, value in certificates.items():
        if key.startswith('cond') or key == 'neutral_index':
            continue
        if key.endswith('rpd_margin'):
            if not value > 0:
                return False
        elif not value <= tol.eps_residual:
            return False
    return True


def _rel(diff, scale):
    d = np.linalg.norm(diff)
    return float(d / scale) if scale > 0 else float(d)


def _right_divide(F, S):
    # F S^{-1} without forming the inverse.
    return np.linalg.solve(S.T, F.T).T


def _sqrt(A, tol):
    try:
        return principal_sqrt(A, tol)
    except NegativeRealEigenvalue as exc:
        raise InternalClassificationConflict(exc.eigenvalues) from exc


def _singular_values(*mats):
    # Singular values of equally shaped matrices in one batched call.
    return np.linalg.svd(np.stack(mats), compute_uv=False)


def _rpd_margin(S, nS=None):
    # Smallest real part of the spectrum, relative to ||S||.
    nS = norm2(S) if nS is None else nS
    return float(np.linalg.eigvals(S).real.min() / nS)


def _selfadjoint_residual(S, G, nS=None, nG=None):
    # S^H G = G S for the selfadjoint G.
    nS = norm2(S) if nS is None else nS
    nG = norm2(G) if nG is None else nG
    return _rel(S.conj().T @ G - G @ S, nS * nG)


def indefinite_polar(F, space, tol=DEFAULT_TOL):
    """Unique decomposition ``F = W S = S' W``.

    Raises
    ------
    SingularInput
        If ``F`` is numerically singular.
    InternalClassificationConflict
        If ``Sigma F^[H] F`` still shows negative real eigenvalues, which can
        only happen through misclassification near the negative real axis.
    """
    F = as_square(F, 'F')
    if F.shape[0] != space.n:
        raise ValueError('dimension mismatch: F is %dx%d, space has n=%d'
                         % (F.shape[0], F.shape[0], space.n))
    n = space.n
    H = space.H
    Fh = h_adjoint(F, space)
    A = Fh @ F
    A2 = F @ Fh
    Sigma = sign_matrix(A, tol)
    SigmaPrime = sign_matrix(A2, tol)
    S = _sqrt(Sigma @ A, tol)
    Sprime = _sqrt(SigmaPrime @ A2, tol)
    W = _right_divide(F, S)

    Hinv = space.solve(np.eye(n))
    sv = _singular_values(F, W, S, Sprime, Sigma, SigmaPrime, Hinv)
    nF, nW, nS, nSp, nSig, nSigp, nHinv = sv[:, 0]
    nH = space.norm
    eye = np.eye(n)
    HSigma = H @ Sigma
    HSigmaPrime = H @ SigmaPrime
    ev = np.linalg.eigvals(np.stack([S, Sprime])).real.min(axis=1)
    residuals = {
        'F=WS': _rel(W @ S - F, nF),
        "F=S'W": _rel(Sprime @ W - F, nF),
        "W=S'^-1F": _rel(np.linalg.solve(Sprime, F) - W, nW),
        'Sigma_involutory': _rel(Sigma @ Sigma - eye, nSig ** 2),
        'SigmaPrime_involutory': _rel(SigmaPrime @ SigmaPrime - eye, nSigp ** 2),
        'W_(H,HSigma)_unitary': _rel(W.conj().T @ H @ W - HSigma, nW ** 2 * nH),
        "W_(HSigma',H)_unitary": _rel(W @ space.solve(W.conj().T) - SigmaPrime @ Hinv,
                                      nW ** 2 * nHinv),
        'S_H_selfadjoint': _selfadjoint_residual(S, H, nS, nH),
        'S_HSigma_selfadjoint': _selfadjoint_residual(S, HSigma, nS, nH * nSig),
        "S'_H_selfadjoint": _selfadjoint_residual(Sprime, H, nSp, nH),
        "S'_HSigma'_selfadjoint": _selfadjoint_residual(Sprime, HSigmaPrime, nSp,
                                                        nH * nSigp),
        'S_rpd_margin': float(ev[0] / nS),
        "S'_rpd_margin": float(ev[1] / nSp),
    }
    conditions = {
        'cond_F': float(sv[0, 0] / sv[0, -1]),
        'cond_S': float(sv[2, 0] / sv[2, -1]),
        "cond_S'": float(sv[3, 0] / sv[3, -1]),
    }
    return PolarFactors(W=W, S=S, Sprime=Sprime, Sigma=Sigma, SigmaPrime=SigmaPrime,
                        residuals=residuals, conditions=conditions)


def _is_identity(Phi):
    return np.array_equal(Phi, np.eye(Phi.shape[0]))


def _hermitize_phi(Phi, space):
    # Phi = H^{-1} G with G = H Phi made exactly selfadjoint.
    G = space.H @ Phi
    return space.solve(0.5 * (G + G.conj().T))


def _involution(phi, space, tol, seed, dtype):
    if _is_identity(phi):
        return certify(np.eye(space.n, dtype=dtype), space, tol)
    return solve_involution(phi, space, tol, seed=seed)


def split_w_right(W, space, tol=DEFAULT_TOL, phi=None, seed=None):
    """``W = L X`` for ``W`` with ``W^[H] W = Phi``.

    ``phi`` defaults to ``W^[H] W``; the polar pipeline passes ``Sigma``
    directly.  Returns ``(L, X)`` as arrays.
    """
    W = as_square(W, 'W')
    if phi is None:
        phi = _hermitize_phi(h_adjoint(W, space) @ W, space)
    X = _involution(phi, space, tol, seed, W.dtype).X
    return W @ X, X


def split_w_left(W, space, tol=DEFAULT_TOL, phi=None, seed=None):
    """``W = X L`` for ``W`` with ``W W^[H] = Phi``.  Returns ``(X, L)``."""
    W = as_square(W, 'W')
    if phi is None:
        phi = _hermitize_phi(W @ h_adjoint(W, space), space)
    X = _involution(phi, space, tol, seed, W.dtype).X
    return X, X @ W


class _ReportOnly:
    # Tolerance stand-in that lets certify() report residuals without raising.
    eps_residual = np.inf
    eps_rank = DEFAULT_TOL.eps_rank


def verify_factorization(F, variant, factors, space, tol=DEFAULT_TOL, W=None,
                         involution=None):
    """Residual certificates of a factor triple against ``F``.

    Checks reconstruction, H-unitarity of the L-factor, certification of
    the X-factor, and that the S-factor is H-selfadjoint and
    r-positive-definite.  With ``W`` given, also compares the L/X product
    against it.  ``involution`` may carry an existing certificate of the
    X-factor, which is then reused.
    """
    if variant not in VARIANTS:
        raise ValueError('unknown variant %r' % (variant,))
    F = as_square(F, 'F')
    roles = dict(zip(ROLES[variant], factors))
    L, X = roles['L'], roles['X']
    S = roles.get('S', roles.get('Sprime'))
    H = space.H
    certificates = {}
    a, b, c = factors
    nL, nS = _singular_values(L, S)[:, 0]
    certificates['reconstruction'] = _rel(a @ b @ c - F, np.linalg.norm(F))
    certificates['L_unitary'] = _rel(L.conj().T @ H @ L - H, nL ** 2 * space.norm)
    try:
        inv = involution if involution is not None else certify(X, space, _ReportOnly)
        m = inv.m
        for key, value in inv.residuals.items():
            if not key.startswith('phi'):
                certificates['X_' + key] = value
    except HNormalError as exc:
        m = -1
        certificates['X_involutory'] = getattr(exc, 'residual', np.inf)
    certificates['S_selfadjoint'] = _selfadjoint_residual(S, H, nS, space.norm)
    certificates['S_rpd_margin'] = _rpd_margin(S, nS)
    if W is not None:
        LX = L @ X if variant in ('LXS', 'SLX') else X @ L
        certificates['LX_vs_W'] = _rel(LX - W, norm2(W))
    certificates['neutral_index'] = m
    return certificates


def factor_normal(F, space, tol=DEFAULT_TOL, variant='LXS', seed=None):
    """Factor ``F`` into H-normal factors in the requested arrangement.

    ``seed`` selects a member of the (non-unique) family of ``L``/``X``
    pairs; ``S`` and ``S'`` do not depend on it.
    """
    if variant not in VARIANTS:
        raise ValueError('unknown variant %r' % (variant,))
    polar = indefinite_polar(F, space, tol)
    W = polar.W
    if variant in ('LXS', 'SLX'):
        inv = _involution(_hermitize_phi(polar.Sigma, space), space, tol, seed, W.dtype)
        pair = (W @ inv.X, inv.X)
    else:
        inv = _involution(_hermitize_phi(polar.SigmaPrime, space), space, tol, seed, W.dtype)
        pair = (inv.X, inv.X @ W)
    if variant in ('LXS', 'XLS'):
        factors = pair + (polar.S,)
    else:
        factors = (polar.Sprime,) + pair
    certificates = verify_factorization(F, variant, factors, space, tol, W=W, involution=inv)
    m = certificates['neutral_index']
    return NormalFactorization(variant=variant, factors=factors, certificates=certificates,
                               neutral_index=m, polar=polar)
