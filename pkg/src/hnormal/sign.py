"""
The matrix Sign function used by the indefinite polar decomposition.

Its stem function is -1 on the open negative real axis and +1 everywhere
else (undefined at 0), with every derivative zero.  Because the derivatives
vanish, a Jordan block ``J_s(lambda)`` with ``lambda < 0`` maps to ``-I_s``
exactly, and ``Sign(A) = I - 2 P`` with ``P`` the spectral projector onto the
negative real invariant subspace of ``A``.

This differs from the Roberts sign function, which sends every eigenvalue in
the open left half-plane to -1: here a nonreal eigenvalue with negative real
part still maps to +1.
"""

import numpy as np

from .kernel import DEFAULT_TOL, as_square, spectral_projector_neg

__all__ = ['sign_matrix']


def sign_matrix(A, tol=DEFAULT_TOL):
    """Return ``Sign(A) = I - 2 P``.

    The result is involutory, commutes with ``A``, and is real whenever
    ``A`` is real.

    Raises
    ------
    SingularInput
        If ``A`` is numerically singular (Sign is undefined at 0).
    """
    A = as_square(A)
    P = spectral_projector_neg(A, tol)
    return np.eye(A.shape[0], dtype=P.dtype) - 2.0 * P
