"""
Command-line front end.

Exit codes: 0 success, 2 unreadable input or singular inner product,
3 singular input matrix, 4 residual or structure check failed.
Tolerances come from ``--eps-*`` flags, else ``HNORMAL_EPS_*`` environment
variables, else the library defaults; the values used are echoed in every
report.
"""

import argparse
import concurrent.futures
import os
import sys

import numpy as np

from . import __version__
from .errors import HNormalError, IndexTooLarge, SingularInput
from .factor import (ROLES, VARIANTS, certificates_pass, factor_normal,
                     indefinite_polar, verify_factorization)
from .generators import gen_neutral_involution, gen_nonsingular_with_sigma, gen_space
from .involutions import LAYOUTS, canonical_pair
from .kernel import ToleranceConfig, principal_sqrt
from .matrixio import MatrixFormatError, dump_json, read_matrix, write_matrix
from .sign import sign_matrix
from .space import InnerProductSpace

EXIT_OK, EXIT_PARSE, EXIT_SINGULAR, EXIT_RESIDUAL = 0, 2, 3, 4

ENV = {'eps_class': 'HNORMAL_EPS_CLASS', 'eps_residual': 'HNORMAL_EPS_RESIDUAL',
       'eps_rank': 'HNORMAL_EPS_RANK'}


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def tolerances(args):
    values = {}
    for name, var in ENV.items():
        flag = getattr(args, name, None)
        if flag is None and os.environ.get(var):
            try:
                flag = float(os.environ[var])
            except ValueError:
                raise CLIError('%s is not a number: %r' % (var, os.environ[var]),
                               EXIT_PARSE) from None
        if flag is not None:
            values[name] = flag
    try:
        return ToleranceConfig(**values)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_PARSE) from None


def _tol_report(tol, n=None):
    d = tol.as_dict()
    if n is not None:
        d['eps_class_effective'] = tol.class_threshold(n)
    return d


def _read(path):
    try:
        return read_matrix(path)
    except MatrixFormatError as exc:
        raise CLIError(str(exc), EXIT_PARSE) from None


def _space(path, tol):
    try:
        return InnerProductSpace(_read(path), tol)
    except SingularInput:
        raise CLIError('inner product matrix singular', EXIT_PARSE) from None
    except ValueError as exc:
        raise CLIError('%s: %s' % (path, exc), EXIT_PARSE) from None


def _out(path):
    os.makedirs(path, exist_ok=True)
    return path


def _emit(report, out=None, name='report.json'):
    text = dump_json(report)
    if out:
        with open(os.path.join(_out(out), name), 'w') as fh:
            fh.write(text)
    sys.stdout.write(text)


def _floats(d):
    return {k: (float(v) if not isinstance(v, (int, np.integer)) else int(v))
            for k, v in d.items()}


def _sigma_summary(Sigma):
    n = Sigma.shape[0]
    tr = float(np.trace(Sigma).real)
    neg = int(round((n - tr) / 2))
    return {'neg_dim': neg, 'pos_dim': n - neg, 'trace': tr}


def _decompose_one(F_path, H_path, out, variant, seed, tol):
    space = _space(H_path, tol)
    F = _read(F_path)
    try:
        fac = factor_normal(F, space, tol, variant=variant, seed=seed)
    except SingularInput as exc:
        raise CLIError(str(exc), EXIT_SINGULAR) from None
    except HNormalError as exc:
        raise CLIError(str(exc), EXIT_RESIDUAL) from None
    if out:
        _out(out)
        for role, M in zip(ROLES[variant], fac.factors):
            write_matrix(os.path.join(out, role + '.json'), M)
    passed = fac.passed(tol)
    report = {
        'command': 'decompose',
        'variant': variant,
        'seed': seed,
        'n': space.n,
        'inertia': list(space.inertia),
        'neutral_index': fac.neutral_index,
        'sigma': _sigma_summary(fac.polar.Sigma),
        'sigma_prime': _sigma_summary(fac.polar.SigmaPrime),
        'polar_residuals': _floats(fac.polar.residuals),
        'certificates': _floats(fac.certificates),
        'conditions': _floats(fac.polar.conditions),
        'tolerances': _tol_report(tol, space.n),
        'passed': bool(passed),
    }
    return report, EXIT_OK if passed else EXIT_RESIDUAL


def _batch_cases(root):
    cases = []
    for name in sorted(os.listdir(root)):
        d = os.path.join(root, name)
        if not os.path.isdir(d):
            continue
        found = {}
        for stem in ('F', 'H'):
            for ext in ('.json', '.mtx'):
                if os.path.exists(os.path.join(d, stem + ext)):
                    found[stem] = os.path.join(d, stem + ext)
                    break
        if len(found) == 2:
            cases.append((name, found['F'], found['H']))
    return cases


def _batch_worker(job):
    name, F_path, H_path, out, variant, seed, tol = job
    try:
        report, code = _decompose_one(F_path, H_path, out, variant, seed, tol)
    except CLIError as exc:
        report, code = {'command': 'decompose', 'error': str(exc)}, exc.code
    if out:
        with open(os.path.join(_out(out), 'report.json'), 'w') as fh:
            fh.write(dump_json(report))
    return name, code


def cmd_decompose(args):
    tol = tolerances(args)
    if args.batch:
        cases = _batch_cases(args.batch)
        out = args.out or args.batch
        jobs = [(name, F, H, os.path.join(out, name), args.variant, args.seed, tol)
                for name, F, H in cases]
        with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, args.jobs)) as ex:
            results = list(ex.map(_batch_worker, jobs))
        summary = {'command': 'decompose', 'batch': [{'case': n, 'exit': c} for n, c in results],
                   'tolerances': _tol_report(tol)}
        sys.stdout.write(dump_json(summary))
        return max([c for _, c in results] + [EXIT_OK])
    if not (args.F and args.H):
        raise CLIError('decompose needs F and H (or --batch DIR)', EXIT_PARSE)
    report, code = _decompose_one(args.F, args.H, args.out, args.variant, args.seed, tol)
    _emit(report, args.out)
    return code


def cmd_polar(args):
    tol = tolerances(args)
    space = _space(args.H, tol)
    try:
        pol = indefinite_polar(_read(args.F), space, tol)
    except SingularInput as exc:
        raise CLIError(str(exc), EXIT_SINGULAR) from None
    except HNormalError as exc:
        raise CLIError(str(exc), EXIT_RESIDUAL) from None
    if args.out:
        _out(args.out)
        for name in ('W', 'S', 'Sprime', 'Sigma', 'SigmaPrime'):
            write_matrix(os.path.join(args.out, name + '.json'), getattr(pol, name))
    res = {k: v for k, v in pol.residuals.items() if not k.endswith('margin')}
    passed = all(v <= tol.eps_residual for v in res.values()) and \
        all(v > 0 for k, v in pol.residuals.items() if k.endswith('margin'))
    report = {'command': 'polar', 'n': space.n, 'inertia': list(space.inertia),
              'sigma': _sigma_summary(pol.Sigma), 'sigma_prime': _sigma_summary(pol.SigmaPrime),
              'residuals': _floats(pol.residuals), 'conditions': _floats(pol.conditions),
              'tolerances': _tol_report(tol, space.n), 'passed': bool(passed)}
    _emit(report, args.out)
    return EXIT_OK if passed else EXIT_RESIDUAL


def _unary(args, fn):
    tol = tolerances(args)
    A = _read(args.A)
    try:
        R = fn(A, tol)
    except SingularInput as exc:
        raise CLIError(str(exc), EXIT_SINGULAR) from None
    except HNormalError as exc:
        raise CLIError(str(exc), EXIT_RESIDUAL) from None
    if args.out:
        d = os.path.dirname(args.out)
        if d:
            _out(d)
        write_matrix(args.out, R)
    return R, tol


def cmd_sign(args):
    S, tol = _unary(args, sign_matrix)
    n = S.shape[0]
    r = float(np.linalg.norm(S @ S - np.eye(n)) / np.linalg.norm(S, 2) ** 2)
    report = {'command': 'sign', 'n': n, 'summary': _sigma_summary(S),
              'residuals': {'involutory': r}, 'tolerances': _tol_report(tol, n),
              'passed': r <= tol.eps_residual}
    _emit(report)
    return EXIT_OK if report['passed'] else EXIT_RESIDUAL


def cmd_sqrt(args):
    R, tol = _unary(args, principal_sqrt)
    A = _read(args.A)
    r = float(np.linalg.norm(R @ R - A) / np.linalg.norm(A))
    report = {'command': 'sqrt', 'n': A.shape[0], 'residuals': {'square': r},
              'tolerances': _tol_report(tol, A.shape[0]), 'passed': r <= tol.eps_residual}
    _emit(report)
    return EXIT_OK if report['passed'] else EXIT_RESIDUAL


def cmd_canonical(args):
    tol = tolerances(args)
    space = _space(args.H, tol)
    try:
        cp = canonical_pair(_read(args.X), space, tol, layout=args.layout)
    except HNormalError as exc:
        raise CLIError(str(exc), EXIT_RESIDUAL) from None
    first, second = ('J', 'K') if args.layout.startswith('JK') else ('P', 'M')
    if args.out:
        _out(args.out)
        write_matrix(os.path.join(args.out, 'Q.json'), cp.Q)
        write_matrix(os.path.join(args.out, first + '.json'), cp.first)
        write_matrix(os.path.join(args.out, second + '.json'), cp.second)
    res = {k: v for k, v in cp.residuals.items() if k != 'cond_Q'}
    passed = all(v <= tol.eps_residual for v in res.values())
    m = int(round((space.n - np.trace(cp.first).real) / 2))
    report = {'command': 'canonical', 'layout': args.layout, 'n': space.n,
              'inertia': list(space.inertia), 'neutral_index': m,
              'residuals': _floats(cp.residuals), 'tolerances': _tol_report(tol, space.n),
              'passed': bool(passed)}
    _emit(report, args.out)
    return EXIT_OK if passed else EXIT_RESIDUAL


def _find(d, stem):
    for ext in ('.json', '.mtx'):
        p = os.path.join(d, stem + ext)
        if os.path.exists(p):
            return p
    raise CLIError('missing factor file %s in %s' % (stem, d), EXIT_PARSE)


def cmd_verify(args):
    tol = tolerances(args)
    space = _space(args.H, tol)
    F = _read(args.F)
    factors = tuple(_read(_find(args.factors, role)) for role in ROLES[args.variant])
    cert = verify_factorization(F, args.variant, factors, space, tol)
    passed = certificates_pass(cert, tol)
    report = {'command': 'verify', 'variant': args.variant, 'n': space.n,
              'inertia': list(space.inertia), 'neutral_index': int(cert['neutral_index']),
              'certificates': _floats(cert), 'tolerances': _tol_report(tol, space.n),
              'passed': bool(passed)}
    _emit(report)
    return EXIT_OK if passed else EXIT_RESIDUAL


def cmd_gen(args):
    tol = tolerances(args)
    p = args.p if args.p is not None else args.n // 2
    try:
        space = gen_space(args.n, p, args.seed, field=args.field, kappa=args.kappa, tol=tol)
        X = gen_neutral_involution(space, args.m, args.seed, tol).X
        F = gen_nonsingular_with_sigma(space, args.m, args.seed, tol)
    except IndexTooLarge as exc:
        raise CLIError(str(exc), EXIT_PARSE) from None
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_PARSE) from None
    out = _out(args.out)
    write_matrix(os.path.join(out, 'H.json'), space.H)
    write_matrix(os.path.join(out, 'F.json'), F)
    write_matrix(os.path.join(out, 'X.json'), X)
    report = {'command': 'gen', 'n': args.n, 'p': p, 'm': args.m, 'seed': args.seed,
              'field': args.field, 'kappa': args.kappa, 'files': ['H.json', 'F.json', 'X.json']}
    _emit(report, out, 'gen.json')
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog='hnormal', description=(
        'Indefinite polar decomposition and H-normal factorizations.'))
    ap.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--eps-class', type=float, default=None, dest='eps_class',
                        help='eigenvalue classification threshold (default 1e-10*n)')
    common.add_argument('--eps-residual', type=float, default=None, dest='eps_residual',
                        help='residual acceptance threshold (default 1e-9)')
    common.add_argument('--eps-rank', type=float, default=None, dest='eps_rank',
                        help='numerical rank threshold (default 1e-8)')
    sub = ap.add_subparsers(dest='command', required=True)

    p = sub.add_parser('decompose', parents=[common], help='factor F into H-normal factors')
    p.add_argument('F', nargs='?')
    p.add_argument('H', nargs='?')
    p.add_argument('--variant', choices=VARIANTS, default='LXS')
    p.add_argument('--seed', type=int, default=None, help='select a member of the X-family')
    p.add_argument('--out', '-o', default=None, help='output directory')
    p.add_argument('--batch', default=None, help='directory of case subdirectories')
    p.add_argument('--jobs', type=int, default=1)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser('polar', parents=[common], help='F = W S = S\' W')
    p.add_argument('F')
    p.add_argument('H')
    p.add_argument('--out', '-o', default=None)
    p.set_defaults(func=cmd_polar)

    for name, func, text in (('sign', cmd_sign, 'Sign(A) = I - 2P'),
                             ('sqrt', cmd_sqrt, 'principal square root')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('A')
        p.add_argument('--out', '-o', default=None, help='output matrix file')
        p.set_defaults(func=func)

    p = sub.add_parser('canonical', parents=[common], help='canonical pair of (X, H)')
    p.add_argument('X')
    p.add_argument('H')
    p.add_argument('--layout', choices=LAYOUTS, default='JK')
    p.add_argument('--out', '-o', default=None)
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser('verify', parents=[common], help='re-check a factor set')
    p.add_argument('F')
    p.add_argument('H')
    p.add_argument('factors', help='directory holding the factor files')
    p.add_argument('--variant', choices=VARIANTS, default='LXS')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('gen', parents=[common], help='write a reproducible fixture')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--p', type=int, default=None)
    p.add_argument('--m', type=int, default=0)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--field', choices=('real', 'complex'), default='real')
    p.add_argument('--kappa', type=float, default=100.0)
    p.add_argument('--out', '-o', required=True)
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        sys.stderr.write('hnormal: error: %s\n' % exc)
        return exc.code


if __name__ == '__main__':
    sys.exit(main())
