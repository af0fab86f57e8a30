import json
import os

import numpy as np
import pytest

from hnormal.cli import main
from hnormal.matrixio import (MatrixFormatError, matrix_from_json, matrix_to_json,
                              read_matrix, write_matrix)


def put(path, A):
    write_matrix(str(path), np.asarray(A, dtype=float))
    return str(path)


def tree(d):
    out = {}
    for root, _, files in os.walk(d):
        for f in files:
            p = os.path.join(root, f)
            with open(p, 'rb') as fh:
                out[os.path.relpath(p, d)] = fh.read()
    return out


@pytest.fixture
def worked(tmp_path):
    F = put(tmp_path / 'F.json', [[0, 1], [1, 0]])
    H = put(tmp_path / 'H.json', [[1, 0], [0, -1]])
    return tmp_path, F, H


def test_json_roundtrip(tmp_path):
    A = np.array([[1.5, -2.0], [0.1, 3.0]])
    write_matrix(str(tmp_path / 'a.json'), A)
    assert np.array_equal(read_matrix(str(tmp_path / 'a.json')), A)
    C = np.array([[1 + 2j, 0], [0, -1j]])
    obj = matrix_to_json(C)
    assert obj['field'] == 'complex' and obj['data'][0] == [1.0, 2.0]
    assert np.array_equal(matrix_from_json(obj), C)


def test_json_errors():
    with pytest.raises(MatrixFormatError):
        matrix_from_json({'n': 2, 'field': 'real', 'data': [1, 2, 3]})
    with pytest.raises(MatrixFormatError):
        matrix_from_json({'n': 1, 'field': 'quaternion', 'data': [1]})


def test_matrix_market(tmp_path):
    p = tmp_path / 'a.mtx'
    p.write_text('%%MatrixMarket matrix array real general\n2 2\n1\n3\n2\n4\n')
    assert np.array_equal(read_matrix(str(p)), [[1, 2], [3, 4]])
    p = tmp_path / 'c.mtx'
    p.write_text('%%MatrixMarket matrix array complex general\n1 1\n1 -2\n')
    assert read_matrix(str(p))[0, 0] == 1 - 2j


def test_decompose_worked(worked, capsys):
    d, F, H = worked
    assert main(['decompose', F, H, '-o', str(d / 'out')]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report['neutral_index'] == 1 and report['passed']
    assert report['inertia'] == [1, 1]
    assert max(v for k, v in report['certificates'].items()
               if k not in ('neutral_index', 'S_rpd_margin')) < 1e-15
    assert set(os.listdir(d / 'out')) == {'L.json', 'X.json', 'S.json', 'report.json'}
    assert main(['verify', F, H, str(d / 'out')]) == 0


def test_decompose_exit_codes(worked, capsys):
    d, F, H = worked
    Fs = put(d / 'Fs.json', [[1, 0], [0, 0]])
    Hs = put(d / 'Hs.json', [[1, 0], [0, 0]])
    assert main(['decompose', Fs, H]) == 3
    assert main(['decompose', F, Hs]) == 2
    assert 'inner product matrix singular' in capsys.readouterr().err
    (d / 'bad.json').write_text('{"n": 2')
    assert main(['decompose', str(d / 'bad.json'), H]) == 2
    with pytest.raises(SystemExit) as e:
        main(['decompose', F, H, '--variant', 'nope'])
    assert e.value.code == 2


def test_residual_failure_exit(worked, capsys):
    d, F, H = worked
    assert main(['decompose', F, H, '-o', str(d / 'out')]) == 0
    put(d / 'out' / 'S.json', [[2, 0], [0, 2]])
    assert main(['verify', F, H, str(d / 'out')]) == 4


def test_tolerance_flags_and_env(worked, capsys, monkeypatch):
    d, F, H = worked
    monkeypatch.setenv('HNORMAL_EPS_RESIDUAL', '1e-7')
    main(['decompose', F, H])
    assert json.loads(capsys.readouterr().out)['tolerances']['eps_residual'] == 1e-7
    main(['decompose', F, H, '--eps-residual', '1e-6'])
    assert json.loads(capsys.readouterr().out)['tolerances']['eps_residual'] == 1e-6
    monkeypatch.setenv('HNORMAL_EPS_RANK', 'abc')
    assert main(['decompose', F, H]) == 2


def test_sign_and_sqrt(tmp_path, capsys):
    A = put(tmp_path / 'A.json', [[-2, 0], [0, 3]])
    assert main(['sign', A, '-o', str(tmp_path / 's.json')]) == 0
    assert np.array_equal(read_matrix(str(tmp_path / 's.json')), np.diag([-1.0, 1.0]))
    B = put(tmp_path / 'B.json', [[4, 0], [0, 9]])
    assert main(['sqrt', B, '-o', str(tmp_path / 'r.json')]) == 0
    assert np.allclose(read_matrix(str(tmp_path / 'r.json')), np.diag([2.0, 3.0]))
    assert main(['sqrt', A]) == 4


def test_polar(worked, capsys):
    d, F, H = worked
    assert main(['polar', F, H, '-o', str(d / 'pol')]) == 0
    assert np.allclose(read_matrix(str(d / 'pol' / 'Sigma.json')), -np.eye(2))


def test_gen_canonical_verify(tmp_path, capsys):
    g = str(tmp_path / 'g')
    assert main(['gen', '--n', '6', '--p', '3', '--m', '1', '--seed', '5', '-o', g]) == 0
    X, H = os.path.join(g, 'X.json'), os.path.join(g, 'H.json')
    assert main(['canonical', X, H, '-o', str(tmp_path / 'c')]) == 0
    assert {'Q.json', 'J.json', 'K.json'} <= set(os.listdir(tmp_path / 'c'))
    assert main(['canonical', X, H, '--layout', 'PM', '-o', str(tmp_path / 'pm')]) == 0
    assert {'P.json', 'M.json'} <= set(os.listdir(tmp_path / 'pm'))
    out = str(tmp_path / 'd')
    for v in ('LXS', 'SLX', 'SXL', 'XLS'):
        assert main(['decompose', os.path.join(g, 'F.json'), H, '--variant', v, '-o', out]) == 0
        assert main(['verify', os.path.join(g, 'F.json'), H, out, '--variant', v]) == 0
    assert main(['gen', '--n', '4', '--p', '1', '--m', '2', '-o', g]) == 2


def test_gen_deterministic(tmp_path, capsys):
    args = ['gen', '--n', '8', '--p', '5', '--m', '2', '--seed', '42', '-o']
    main(args + [str(tmp_path / 'a')])
    main(args + [str(tmp_path / 'b')])
    assert tree(tmp_path / 'a') == tree(tmp_path / 'b')


def test_batch(tmp_path, capsys):
    for i in range(3):
        main(['gen', '--n', '5', '--p', '2', '--m', '1', '--seed', str(i),
              '-o', str(tmp_path / 'cases' / ('c%d' % i))])
    capsys.readouterr()
    assert main(['decompose', '--batch', str(tmp_path / 'cases'), '--jobs', '3',
                 '-o', str(tmp_path / 'res')]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert [c['case'] for c in summary['batch']] == ['c0', 'c1', 'c2']
    assert os.path.exists(tmp_path / 'res' / 'c2' / 'L.json')
