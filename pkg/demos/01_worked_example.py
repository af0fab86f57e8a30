"""
The swap matrix in the Minkowski plane
======================================

Walk through the smallest nontrivial factorization by hand: the swap
matrix F under H = diag(1, -1).
"""

import numpy as np

from hnormal import InnerProductSpace, factor_normal, h_adjoint
from hnormal.exact import exact_negative_eigenspace, exact_verify_identities

np.set_printoptions(precision=4, suppress=True)
spacer = '_' * 60

F = np.array([[0.0, 1.0], [1.0, 0.0]])
H = np.diag([1.0, -1.0])
space = InnerProductSpace(H)
print('inertia of H (p, q) =', (space.p, space.q))

# F^[H] F is -I here, so every eigenvalue sits on the negative real axis.
A = h_adjoint(F, space) @ F
print('\nF^[H] F =')
print(A)

fact = factor_normal(F, space)
pol = fact.polar
print(spacer)
print('Sigma = Sign(F^[H] F) =')
print(pol.Sigma)
print('S =')
print(pol.S)
print('W = F S^-1 =')
print(pol.W)

print(spacer)
print('LXS factors, neutral index m =', fact.neutral_index)
for role in ('L', 'X', 'S'):
    print(role, '=')
    print(fact[role])

print('\nlargest certificate:',
      max(v for k, v in fact.certificates.items()
          if k not in ('neutral_index', 'S_rpd_margin')))

# The same facts in exact rational arithmetic.
print(spacer)
checks = exact_verify_identities(fact['X'], H)
for name, c in checks.items():
    print('exact %-15s holds: %s' % (name, c.holds))
print('exact (dim, signature) of the negative eigenspace:', exact_negative_eigenspace(F, H))
