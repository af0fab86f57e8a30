"""
Matrix files.

JSON matrices look like ``{"n": 2, "field": "real", "data": [0, 1, 1, 0]}``
with ``data`` row-major; complex entries are ``[re, im]`` pairs.  Matrix
Market array files (real or complex, general) are accepted on input.
Output is deterministic: fixed key order and shortest round-trip float repr.
"""

import json
import os

import numpy as np
import scipy.io

__all__ = ['MatrixFormatError', 'read_matrix', 'write_matrix', 'matrix_to_json',
           'matrix_from_json', 'dump_json']


class MatrixFormatError(ValueError):
    pass


def _num(x):
    x = float(x)
    if not np.isfinite(x):
        raise MatrixFormatError('non-finite entry %r' % (x,))
    return 0.0 if x == 0 else x


def matrix_to_json(A):
    """Dict form of a square matrix, real when it has no imaginary part."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise MatrixFormatError('expected a square matrix, got shape %s' % (A.shape,))
    if np.iscomplexobj(A) and np.any(A.imag != 0):
        data = [[_num(z.real), _num(z.imag)] for z in A.ravel()]
        field = 'complex'
    else:
        data = [_num(x) for x in A.real.ravel()]
        field = 'real'
    return {'n': int(A.shape[0]), 'field': field, 'data': data}


def matrix_from_json(obj):
    try:
        n, field, data = int(obj['n']), obj['field'], obj['data']
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError('malformed matrix object: %s' % exc) from None
    if field not in ('real', 'complex'):
        raise MatrixFormatError('unknown field %r' % (field,))
    if n < 1 or len(data) != n * n:
        raise MatrixFormatError('expected %d entries, got %d' % (n * n, len(data)))
    try:
        if field == 'complex':
            vals = [complex(float(v[0]), float(v[1])) if isinstance(v, list) else complex(v)
                    for v in data]
            A = np.array(vals, dtype=complex)
        else:
            A = np.array(data, dtype=float)
    except (TypeError, ValueError, IndexError) as exc:
        raise MatrixFormatError('bad entry: %s' % exc) from None
    return A.reshape(n, n)


def read_matrix(path):
    """Read a JSON (``.json``) or Matrix Market (``.mtx``) square matrix."""
    ext = os.path.splitext(path)[1].lower()
    try:
        if ext == '.mtx':
            A = scipy.io.mmread(path)
            if hasattr(A, 'toarray'):
                A = A.toarray()
            A = np.asarray(A)
            if A.ndim != 2 or A.shape[0] != A.shape[1]:
                raise MatrixFormatError('%s: matrix is not square' % path)
            return A
        with open(path) as fh:
            return matrix_from_json(json.load(fh))
    except MatrixFormatError:
        raise
    except (OSError, ValueError) as exc:
        raise MatrixFormatError('%s: %s' % (path, exc)) from None


def dump_json(obj):
    return json.dumps(obj, indent=1, allow_nan=False) + '\n'


def write_matrix(path, A):
    with open(path, 'w') as fh:
        fh.write(dump_json(matrix_to_json(A)))
