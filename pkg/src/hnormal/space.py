"""
Indefinite inner products ``[x, y]_H = x^H H y``.

The H-adjoint, the structure predicates (H-selfadjoint, H-unitary,
H-normal, H-neutral involutory), Gram matrices of subspaces, their inertia,
and hyperbolic bases of hyperbolic subspaces.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (HyperbolicityBreakdown, NotHyperbolic, RankDeficient,
                     SingularInput)
from .kernel import DEFAULT_TOL, as_square, norm2, split_spectrum

__all__ = ['InnerProductSpace', 'Verdict', 'SubspaceReport', 'HyperbolicBasis',
           'h_adjoint', 'is_h_selfadjoint', 'is_h_unitary', 'is_h_normal',
           'is_h_neutral_involutory', 'restricted_gram', 'subspace_report',
           'hyperbolic_basis', 'negative_eigenspace_hyperbolicity']


class InnerProductSpace:
    """A nonsingular selfadjoint ``H`` together with its inertia ``(p, q)``.

    ``H`` is symmetrized on construction, so downstream identities can rely
    on ``H == H^H`` exactly.  Complex ``H`` gives the Hermitian product on
    ``C^n``; real ``H`` the symmetric product on ``R^n``.

    Raises
    ------
    SingularInput
        If ``H`` has an eigenvalue below ``eps_rank`` times its norm.
    """

    def __init__(self, H, tol=DEFAULT_TOL):
        H = as_square(H, 'H')
        H = 0.5 * (H + H.conj().T)
        eigs = np.linalg.eigvalsh(H)
        scale = np.abs(eigs).max()
        if scale == 0 or np.abs(eigs).min() <= tol.eps_rank * scale:
            raise SingularInput('inner product matrix singular')
        H.setflags(write=False)
        self.H = H
        self.p = int((eigs > 0).sum())
        self.q = int((eigs < 0).sum())
        self.field = 'complex' if np.iscomplexobj(H) else 'real'
        self.norm = float(scale)
        self._lu = scipy.linalg.lu_factor(H)

    @property
    def n(self):
        return self.H.shape[0]

    @property
    def inertia(self):
        return (self.p, self.q)

    def inner(self, x, y):
        return np.vdot(x, self.H @ y)

    def solve(self, B):
        """Return ``H^{-1} B``."""
        return scipy.linalg.lu_solve(self._lu, B, check_finite=False)

    def adjoint(self, A):
        return h_adjoint(A, self)

    def __repr__(self):
        return 'InnerProductSpace(n=%d, inertia=(%d, %d), field=%s)' % (
            self.n, self.p, self.q, self.field)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    residual: float

    def __bool__(self):
        return bool(self.ok)


@dataclass(frozen=True)
class SubspaceReport:
    dim: int
    inertia: tuple
    nondegenerate: bool
    hyperbolic: bool


@dataclass(frozen=True)
class HyperbolicBasis:
    """Columns of ``u``, ``v`` span the two neutral halves, ``[u_i, v_j] = delta_ij``.

    ``w``, ``z`` is the Witt-rotated pair with Gram ``diag(I, -I)``.
    """
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    z: np.ndarray
    condition: float


def _check_dim(A, space):
    if A.shape[0] != space.n:
        raise ValueError('dimension mismatch: matrix is %dx%d, space has n=%d'
                         % (A.shape[0], A.shape[1], space.n))


def h_adjoint(A, space):
    """``A^[H] = H^{-1} A^H H``."""
    A = as_square(A)
    _check_dim(A, space)
    return space.solve(A.conj().T @ space.H)


def _ratio(num, den):
    return float(num / den) if den > 0 else float(num)


def _norm2(A):
    return norm2(A)


def is_h_selfadjoint(A, space, tol=DEFAULT_TOL):
    """Check ``A^H H = H A``; residual is relative to ``||A|| ||H||``."""
    A = as_square(A)
    _check_dim(A, space)
    H = space.H
    r = _ratio(np.linalg.norm(A.conj().T @ H - H @ A), _norm2(A) * space.norm)
    return Verdict(r <= tol.eps_residual, r)


def is_h_unitary(L, space, tol=DEFAULT_TOL):
    """Check ``L^H H L = H``; residual is relative to ``||L||^2 ||H||``."""
    L = as_square(L)
    _check_dim(L, space)
    H = space.H
    r = _ratio(np.linalg.norm(L.conj().T @ H @ L - H), _norm2(L) ** 2 * space.norm)
    return Verdict(r <= tol.eps_residual, r)


def is_h_normal(A, space, tol=DEFAULT_TOL):
    A = as_square(A)
    Ah = h_adjoint(A, space)
    r = _ratio(np.linalg.norm(A @ Ah - Ah @ A), _norm2(A) * _norm2(Ah))
    return Verdict(r <= tol.eps_residual, r)


def is_h_neutral_involutory(X, space, tol=DEFAULT_TOL):
    """Check ``X^2 = I`` and ``X^[H] X = X^[H] + X - I``.

    The second identity characterizes neutrality of the -1 eigenspace for an
    involution, so no eigenspace is ever formed here.
    """
    X = as_square(X)
    Xh = h_adjoint(X, space)
    eye = np.eye(X.shape[0])
    nx = _norm2(X)
    r_inv = _ratio(np.linalg.norm(X @ X - eye), nx ** 2)
    r_neu = _ratio(np.linalg.norm(Xh @ X - Xh - X + eye), nx * _norm2(Xh))
    r = max(r_inv, r_neu)
    return Verdict(r <= tol.eps_residual, r)


def _check_basis(basis, space, tol):
    basis = np.asarray(basis)
    if basis.ndim == 1:
        basis = basis[:, None]
    if basis.shape[0] != space.n:
        raise ValueError('basis has %d rows, space has n=%d' % (basis.shape[0], space.n))
    if basis.shape[1] == 0:
        return basis, 0.0
    sv = np.linalg.svd(basis, compute_uv=False)
    if sv[-1] <= tol.eps_rank * sv[0] or basis.shape[1] > basis.shape[0]:
        raise RankDeficient('basis is rank deficient (sigma_min/sigma_max = %.3e)'
                            % (sv[-1] / sv[0] if sv[0] else 0.0))
    return basis, sv[0]


def restricted_gram(basis, space, tol=DEFAULT_TOL):
    """Gram matrix ``B^H H B`` of the columns of ``basis``."""
    B, _ = _check_basis(basis, space, tol)
    G = B.conj().T @ space.H @ B
    return 0.5 * (G + G.conj().T)


def subspace_report(basis, space, tol=DEFAULT_TOL):
    B, smax = _check_basis(basis, space, tol)
    k = B.shape[1]
    if k == 0:
        return SubspaceReport(dim=0, inertia=(0, 0), nondegenerate=True, hyperbolic=True)
    G = restricted_gram(B, space, tol)
    lam = np.linalg.eigvalsh(G)
    thr = tol.eps_rank * space.norm * smax ** 2
    pos = int((lam > thr).sum())
    neg = int((lam < -thr).sum())
    nondegenerate = pos + neg == k
    return SubspaceReport(dim=k, inertia=(pos, neg), nondegenerate=nondegenerate,
                          hyperbolic=nondegenerate and pos == neg)


def _order_by_magnitude(values):
    # Descending magnitude, ties broken by position.
    return np.argsort(-np.abs(values), kind='stable')


def hyperbolic_basis(basis, space, tol=DEFAULT_TOL):
    """Hyperbolic basis of the hyperbolic subspace spanned by ``basis``.

    The Gram matrix is diagonalized to an orthonormal-like pair ``(w, z)``
    with ``[w_i, w_j] = delta_ij``, ``[z_i, z_j] = -delta_ij``, which is then
    rotated to ``u = (w + z)/sqrt(2)``, ``v = (w - z)/sqrt(2)``.

    Raises
    ------
    NotHyperbolic
        If the subspace is degenerate or has nonzero signature.
    """
    report = subspace_report(basis, space, tol)
    B = np.asarray(basis)
    if B.ndim == 1:
        B = B[:, None]
    if not report.hyperbolic:
        raise NotHyperbolic('subspace of dim %d has inertia %s (nondegenerate=%s)'
                            % (report.dim, report.inertia, report.nondegenerate))
    m = report.dim // 2
    if m == 0:
        empty = np.zeros((space.n, 0), dtype=B.dtype)
        return HyperbolicBasis(empty, empty, empty, empty, 1.0)
    G = restricted_gram(B, space, tol)
    lam, E = np.linalg.eigh(G)
    ipos = np.flatnonzero(lam > 0)
    ineg = np.flatnonzero(lam < 0)
    ipos = ipos[_order_by_magnitude(lam[ipos])]
    ineg = ineg[_order_by_magnitude(lam[ineg])]
    w = B @ (E[:, ipos] / np.sqrt(lam[ipos]))
    z = B @ (E[:, ineg] / np.sqrt(-lam[ineg]))
    u = (w + z) / np.sqrt(2.0)
    v = (w - z) / np.sqrt(2.0)
    condition = np.linalg.cond(np.hstack([u, v]))
    return HyperbolicBasis(u=u, v=v, w=w, z=z, condition=float(condition))


def negative_eigenspace_hyperbolicity(F, space, tol=DEFAULT_TOL):
    """Report on the negative real invariant subspace of ``F^[H] F``.

    That subspace is hyperbolic for every nonsingular ``F``; a different
    verdict means numerical breakdown and triggers a
    :class:`HyperbolicityBreakdown` warning.
    """
    F = as_square(F, 'F')
    A = h_adjoint(F, space) @ F
    split = split_spectrum(A, tol)
    report = subspace_report(split.basis_neg, space, tol)
    if not report.hyperbolic:
        warnings.warn('negative eigenspace of F^[H]F reported as non-hyperbolic: %s'
                      % (report,), HyperbolicityBreakdown, stacklevel=2)
    return report
