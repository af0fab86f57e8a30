"""
Sign of a matrix with negative Jordan blocks
============================================

Sign(A) = I - 2P with P the spectral projector onto the negative real
eigenvalues.  On a Jordan block J_s(lam), lam < 0, the result is exactly
-I_s, never a triangular perturbation of it.
"""

import numpy as np
import scipy.linalg

from hnormal import (negative_eigenspace_hyperbolicity, principal_sqrt, sign_matrix,
                     spectral_projector_neg)
from hnormal.generators import gen_factored, gen_space, random_matrix

np.set_printoptions(precision=3, suppress=True)
spacer = '_' * 60

# J_3(-2) next to a positive eigenvalue and a complex pair.
A0 = scipy.linalg.block_diag(-2 * np.eye(3) + np.eye(3, k=1), [[4.0]],
                             [[1.0, 2.0], [-2.0, 1.0]])
rng = np.random.default_rng(0)
V = random_matrix(rng, 6, kappa=50.0)
A = V @ A0 @ np.linalg.inv(V)

Sigma = sign_matrix(A)
print('Sign(A) in the Jordan basis:')
print(np.linalg.solve(V, Sigma @ V))
print('||Sigma^2 - I|| =', np.linalg.norm(Sigma @ Sigma - np.eye(6)))

P = spectral_projector_neg(A)
print('trace of the negative projector (dimension):', np.trace(P).round(12))

# Sigma A has no negative real eigenvalues, so its principal root exists.
S = principal_sqrt(Sigma @ A)
print('eigenvalues of sqrt(Sigma A):', np.linalg.eigvals(S))

print(spacer)
print('The negative eigenspace of F^[H] F is always hyperbolic:')
for n, p, m in [(4, 2, 1), (7, 3, 2), (10, 6, 3)]:
    space = gen_space(n, p, seed=n)
    F = gen_factored(space, m, seed=n)['F']
    rep = negative_eigenspace_hyperbolicity(F, space)
    print('  n=%2d (p, q)=(%d, %d) m=%d -> dim %d, inertia %s'
          % (n, p, n - p, m, rep.dim, rep.inertia))
