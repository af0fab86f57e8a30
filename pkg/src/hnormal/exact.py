"""
Exact rational (and Gaussian-rational) checks for small matrices.

A ground-truth oracle for tests: identities of H-normal H-neutral
involutions verified with zero residual, and the dimension and signature of
the negative real generalized eigenspace of ``F^[H] F`` computed from exact
kernels.  Limited to ``n <= 4`` and instances whose negative real
eigenvalues are rational.
"""

from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np
import sympy as sp

from .errors import UnsupportedInstance

__all__ = ['to_exact', 'exact_adjoint', 'exact_verify_identities',
           'exact_negative_eigenspace', 'exact_inertia', 'IdentityCheck',
           'rational_instance', 'jordan_instance']

MAX_N = 4
_x = sp.Symbol('x')


def _entry(v):
    if isinstance(v, sp.Basic):
        v = sp.nsimplify(v) if v.is_Float else v
        re, im = v.as_real_imag()
        if not (re.is_Rational and im.is_Rational):
            raise UnsupportedInstance('entry %s is not (Gaussian) rational' % (v,))
        return sp.Rational(re) + sp.I * sp.Rational(im)
    if isinstance(v, (Integral, Rational)):
        return sp.Rational(Fraction(v).numerator, Fraction(v).denominator)
    if isinstance(v, (float, np.floating)):
        return sp.Rational(Fraction(float(v)))
    if isinstance(v, (complex, np.complexfloating)):
        return sp.Rational(Fraction(v.real)) + sp.I * sp.Rational(Fraction(v.imag))
    if isinstance(v, str):
        return _entry(sp.sympify(v, rational=True))
    raise UnsupportedInstance('cannot convert %r to an exact number' % (v,))


def to_exact(A):
    """Square sympy matrix with rational or Gaussian-rational entries.

    Floats are converted through their exact binary value.
    """
    if isinstance(A, sp.MatrixBase):
        rows = A.tolist()
    else:
        rows = np.asarray(A, dtype=object).tolist()
    M = sp.Matrix([[_entry(v) for v in row] for row in rows])
    if M.rows != M.cols:
        raise ValueError('expected a square matrix, got %dx%d' % M.shape)
    return M


def _check_h(H):
    if (H - H.H).is_zero_matrix is not True:
        raise ValueError('H is not selfadjoint')
    if H.det() == 0:
        raise ValueError('inner product matrix singular')


def exact_adjoint(A, H):
    """``H^{-1} A^H H`` in exact arithmetic."""
    return H.inv() * A.H * H


@dataclass(frozen=True)
class IdentityCheck:
    """Residual matrix of one identity and the first nonzero entry, if any."""
    holds: bool
    residual: sp.Matrix
    counterexample: tuple = None


def _check(R):
    R = sp.simplify(R)
    for i in range(R.rows):
        for j in range(R.cols):
            if R[i, j] != 0:
                return IdentityCheck(False, R, (i, j, R[i, j]))
    return IdentityCheck(True, R, None)


def exact_verify_identities(X, H):
    """Verify the defining identities of an H-normal H-neutral involution.

    Returns a dict with keys ``'involutory'`` (``X^2 - I``), ``'neutral'``
    (``X^[H] X - (X^[H] + X - I)``), ``'normal'`` (``X^[H] X - X X^[H]``) and
    ``'normal_neutral'`` (``X X^[H] - (X^[H] + X - I)``), each an
    :class:`IdentityCheck`.

    Examples
    --------
    >>> r = exact_verify_identities([[0, 1], [1, 0]], [[1, 0], [0, -1]])
    >>> all(c.holds for c in r.values())
    True
    """
    X, H = to_exact(X), to_exact(H)
    if X.shape != H.shape:
        raise ValueError('X and H differ in shape')
    _check_h(H)
    n = X.rows
    eye = sp.eye(n)
    Xh = exact_adjoint(X, H)
    return {
        'involutory': _check(X * X - eye),
        'neutral': _check(Xh * X - (Xh + X - eye)),
        'normal': _check(Xh * X - X * Xh),
        'normal_neutral': _check(X * Xh - (Xh + X - eye)),
    }


def _descartes(coeffs):
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(a != b for a, b in zip(signs, signs[1:]))


def exact_inertia(G):
    """Exact ``(positive, negative, zero)`` counts of a selfadjoint matrix.

    The characteristic polynomial of a selfadjoint matrix has only real
    roots, so Descartes' rule of signs counts them exactly.
    """
    G = to_exact(G)
    if G.rows == 0:
        return (0, 0, 0)
    poly = sp.Poly(G.charpoly(_x).as_expr(), _x)
    coeffs = [sp.nsimplify(c) for c in poly.all_coeffs()]
    if any(sp.im(c) != 0 for c in coeffs):
        raise ValueError('matrix is not selfadjoint')
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1
    pos = _descartes(coeffs)
    d = len(coeffs) - 1
    neg = _descartes([c * (-1) ** (d - k) for k, c in enumerate(coeffs)])
    return (pos, neg, zero)


def _real_part_gcd(factor):
    # Real roots of p = pr + i pi are the common real roots of pr and pi.
    t = sp.Symbol('t', real=True)
    e = sp.expand(factor.subs(_x, t))
    pr, pi = sp.Poly(sp.re(e), t), sp.Poly(sp.im(e), t)
    return pr if pi.is_zero else sp.gcd(pr, pi)


def exact_negative_eigenspace(F, H):
    """Dimension and signature of the negative real generalized eigenspace
    of ``A = F^[H] F``.

    For every negative rational eigenvalue ``lam`` of algebraic multiplicity
    ``k`` the generalized eigenspace is ``ker (A - lam I)^k``; the signature
    is taken from the exact inertia of the Gram matrix of their union.

    Returns
    -------
    (dim, signature) : tuple of int

    Raises
    ------
    UnsupportedInstance
        If ``A`` has a negative real eigenvalue that is not rational.

    Examples
    --------
    >>> exact_negative_eigenspace([[0, 1], [1, 0]], [[1, 0], [0, -1]])
    (2, 0)
    """
    F, H = to_exact(F), to_exact(H)
    n = F.rows
    if n > MAX_N:
        raise ValueError('exact oracle is limited to n <= %d' % MAX_N)
    if F.shape != H.shape:
        raise ValueError('F and H differ in shape')
    _check_h(H)
    if F.det() == 0:
        raise ValueError('F is singular')
    A = exact_adjoint(F, H) * F
    extension = sp.I if any(sp.im(v) != 0 for v in A) else None
    kwargs = {'extension': extension} if extension is not None else {}
    _, factors = sp.factor_list(A.charpoly(_x).as_expr(), _x, **kwargs)
    blocks = []
    for fac, mult in factors:
        poly = sp.Poly(fac, _x)
        if poly.degree() == 1:
            a, b = poly.all_coeffs()
            lam = sp.nsimplify(-b / a)
            if sp.im(lam) == 0 and lam < 0:
                K = ((A - lam * sp.eye(n)) ** mult).nullspace()
                blocks.extend(K)
            continue
        real = _real_part_gcd(fac)
        if real.degree() > 0 and real.count_roots(-sp.oo, 0) > 0:
            raise UnsupportedInstance('negative real eigenvalue is irrational (factor %s)' % fac)
    if not blocks:
        return (0, 0)
    N = sp.Matrix.hstack(*blocks)
    G = N.H * H * N
    pos, neg, zero = exact_inertia(G)
    if zero:
        raise ArithmeticError('negative eigenspace is degenerate')
    return (N.cols, pos - neg)


def _cayley(H, A):
    # H-unitary Cayley transform of the H-skew matrix H^{-1} A.
    n = H.rows
    K = H.inv() * A
    return (sp.eye(n) - K).inv() * (sp.eye(n) + K)


def rational_instance(n, p, m, seed, int_range=2):
    """Rational ``(F, H)`` with ``F^[H] F`` having rational spectrum.

    ``H = Q^{-H} M Q^{-1}`` with ``M = diag(-I_m, I_m, I_{p-m}, -I_{q-m})``
    and ``F = L X S`` where ``S = Q D Q^{-1}``, ``D`` a positive rational
    diagonal, ``X = Q P Q^{-1}`` swaps the first two blocks and ``L`` is the
    Cayley transform of a rational H-skew matrix.  The negative eigenvalues
    of ``F^[H] F`` are ``-d_i^2`` on the first ``2m`` coordinates.
    """
    if n > MAX_N or m > min(p, n - p) or not 0 <= p <= n:
        raise ValueError('inadmissible (n, p, m) = (%d, %d, %d)' % (n, p, m))
    rng = np.random.default_rng(seed)
    while True:
        Q = sp.Matrix(rng.integers(-int_range, int_range + 1, (n, n)).tolist())
        if Q.det() != 0:
            break
    M = sp.diag(*([-1] * m + [1] * m + [1] * (p - m) + [-1] * (n - p - m)))
    Qi = Q.inv()
    H = Qi.H * M * Qi
    D = sp.diag(*[sp.Rational(int(a), int(b)) for a, b in rng.integers(1, 4, (n, 2))])
    P = sp.eye(n)
    for i in range(m):
        P[i, i] = P[m + i, m + i] = 0
        P[i, 2 * m - 1 - i] = P[2 * m - 1 - i, i] = 1
    R = sp.Matrix(rng.integers(-int_range, int_range + 1, (n, n)).tolist())
    while True:
        try:
            L = _cayley(H, (R - R.T) / 2)
            break
        except ValueError:
            R = R / 3
    F = L * Q * P * D * Qi
    return F, H


def jordan_instance(copies=1):
    """Defective instance: ``F^[H] F`` is a direct sum of ``J_2(-1)`` blocks.

    ``F0 = [[-1, 1/2], [0, 1]]`` with ``H0 = [[0, 1], [1, 0]]`` gives
    ``F0^[H0] F0 = J_2(-1)``; with ``copies=2`` the inner product is
    ``H0 + (-H0)``.
    """
    F0 = sp.Matrix([[-1, sp.Rational(1, 2)], [0, 1]])
    H0 = sp.Matrix([[0, 1], [1, 0]])
    if copies == 1:
        return F0, H0
    if copies == 2:
        return sp.diag(F0, F0), sp.diag(H0, -H0)
    raise ValueError('copies must be 1 or 2')
