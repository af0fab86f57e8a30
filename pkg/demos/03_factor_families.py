"""
Four arrangements and a family of involutions
=============================================

The polar factors S and S' are unique; the split of W into an H-unitary
and an involution is not.  Different seeds pick different members of the
family, but the products L X agree, and any two involutions are related by
an H-unitary similarity that commutes with Sigma.
"""

import numpy as np

from hnormal import (LAYOUTS, VARIANTS, all_solutions_related, canonical_pair,
                     factor_normal)
from hnormal.generators import gen_factored, gen_space

np.set_printoptions(precision=3, suppress=True)
spacer = '_' * 60

space = gen_space(6, 3, seed=4)
gen = gen_factored(space, 2, seed=4)
F = gen['F']

for variant in VARIANTS:
    fact = factor_normal(F, space, variant=variant)
    print('%s  m=%d  reconstruction=%.1e  passed=%s'
          % (variant, fact.neutral_index, fact.certificates['reconstruction'], fact.passed()))

print(spacer)
f1 = factor_normal(F, space, seed=1)
f2 = factor_normal(F, space, seed=2)
print('||X1 - X2|| =', np.linalg.norm(f1['X'] - f2['X']))
print('||L1 X1 - L2 X2|| =', np.linalg.norm(f1['L'] @ f1['X'] - f2['L'] @ f2['X']))

L = all_solutions_related(f1['X'], f2['X'], f1.polar.Sigma, space)
print('||L^-1 X2 L - X1|| =', np.linalg.norm(np.linalg.solve(L, f2['X'] @ L) - f1['X']))
print('||L Sigma - Sigma L|| =', np.linalg.norm(L @ f1.polar.Sigma - f1.polar.Sigma @ L))

print(spacer)
print('Canonical pairs of X1:')
for layout in LAYOUTS:
    cp = canonical_pair(f1['X'], space, layout=layout)
    print('  %-10s X round trip %.1e, H round trip %.1e'
          % (layout, cp.residuals['X_roundtrip'], cp.residuals['H_roundtrip']))
print('J in the JK layout:')
print(canonical_pair(f1['X'], space, layout='JK').first)
