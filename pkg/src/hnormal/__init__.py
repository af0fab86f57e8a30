"""
Factorizations of matrices into H-normal factors in indefinite inner product
spaces.

The central routine is :func:`factor_normal`, which writes a nonsingular
``F`` as ``L X S`` (or one of three rearrangements) with ``L`` H-unitary,
``X`` an H-normal H-neutral involution and ``S`` H-selfadjoint with
spectrum in the open right half-plane.
"""

__version__ = '0.1.0'

from .errors import *  # noqa: F401,F403
from .kernel import (DEFAULT_TOL, SpectrumSplit, ToleranceConfig, classify_eigenvalues,
                     principal_sqrt, schur, spectral_projector_neg, split_spectrum,
                     sylvester_solve)
from .space import (HyperbolicBasis, InnerProductSpace, SubspaceReport, Verdict, h_adjoint,
                    hyperbolic_basis, is_h_neutral_involutory, is_h_normal,
                    is_h_selfadjoint, is_h_unitary, negative_eigenspace_hyperbolicity,
                    restricted_gram, subspace_report)
from .sign import sign_matrix
from .involutions import (LAYOUTS, CanonicalPair, NeutralInvolution, adjoint_involution,
                          canonical_matrices, canonical_pair, certify, similarity)
from .phi import all_solutions_related, phi_canonical_basis, solve_involution
from .factor import (VARIANTS, NormalFactorization, PolarFactors, factor_normal,
                     indefinite_polar, split_w_left, split_w_right, verify_factorization)
from .generators import (gen_h_unitary, gen_neutral_involution, gen_nonsingular_with_sigma,
                         gen_space)
