"""
Acceptance suite.

One test per acceptance criterion; each records a PASS/FAIL line that the
``conftest`` terminal-summary hook prints after the run.  The module also
runs standalone: ``python tests/test_acceptance.py``.
"""

import os
import subprocess
import sys
import time
import timeit
import warnings

import numpy as np
import scipy.linalg

from hnormal import (LAYOUTS, VARIANTS, InnerProductSpace, all_solutions_related, canonical_pair,
                     factor_normal, negative_eigenspace_hyperbolicity,
                     sign_matrix, solve_involution)
from hnormal.exact import (exact_negative_eigenspace, exact_verify_identities,
                           jordan_instance, rational_instance)
from hnormal.generators import (gen_factored, gen_neutral_involution, gen_space,
                                random_matrix)

sys.path.insert(0, os.path.dirname(__file__))
from conftest import admissible, rel  # noqa: E402

RESULTS = {}


def record(key, ok, detail):
    RESULTS[key] = (bool(ok), detail)
    return ok


def _worst(values):
    return max(values) if values else 0.0


def _residuals(fact):
    # Every numeric certificate of a factorization that must be small.
    out = dict(fact.certificates)
    out.update(fact.polar.residuals)
    return {k: v for k, v in out.items()
            if not (k.startswith('cond') or k.endswith('rpd_margin') or k == 'neutral_index')}


def _trace_gap(X, space, m):
    # |trace(X^[H] X) - (n - 4m)|, with the adjoint formed directly.
    Xh = np.linalg.solve(space.H, X.conj().T @ space.H)
    return float(abs(np.trace(Xh @ X) - (space.n - 4 * m)))


def _suite_cases():
    cases = admissible()
    for seed in range(500):
        n, p, m = cases[seed % len(cases)]
        field = 'real' if seed < len(cases) else 'complex'
        yield seed, n, p, m, field


# 1 ---------------------------------------------------------------------------

def test_c1_worked_example():
    F = np.array([[0.0, 1.0], [1.0, 0.0]])
    H = np.diag([1.0, -1.0])
    space = InnerProductSpace(H)
    fact = factor_normal(F, space)
    pol = fact.polar
    worst = _worst(list(_residuals(fact).values()))
    anchors = (np.array_equal(pol.Sigma, -np.eye(2)) and np.array_equal(pol.S, np.eye(2))
               and np.array_equal(pol.W, F) and fact.neutral_index == 1
               and rel(fact['L'] @ fact['X'], F) <= 1e-12)
    exact = exact_verify_identities(fact['X'], H)
    exact_ok = all(c.holds for c in exact.values())
    exact_ok = exact_ok and exact_negative_eigenspace(F, H) == (2, 0)

    def run():
        factor_normal(F, InnerProductSpace(H))

    run()
    t = min(timeit.repeat(run, number=50, repeat=20)) / 50
    ok = anchors and worst <= 1e-12 and exact_ok and t < 1e-3
    record('1 worked 2x2 example', ok,
           'anchors=%s max residual=%.1e exact=%s time=%.3f ms'
           % (anchors, worst, exact_ok, t * 1e3))
    assert anchors and exact_ok
    assert worst <= 1e-12
    assert t < 1e-3


# 2 ---------------------------------------------------------------------------

def test_c2_reconstruction_suite():
    start = time.perf_counter()
    worst = {'reconstruction': 0.0, 'other': 0.0}
    failures = []
    for seed, n, p, m, field in _suite_cases():
        space = gen_space(n, p, seed, field=field)
        F = gen_factored(space, m, seed)['F']
        for variant in VARIANTS:
            fact = factor_normal(F, space, variant=variant)
            res = _residuals(fact)
            worst['reconstruction'] = max(worst['reconstruction'], res['reconstruction'])
            worst['other'] = max(worst['other'], _worst(
                [v for k, v in res.items() if k != 'reconstruction']))
            if (not fact.passed() or fact.certificates['S_rpd_margin'] <= 0
                    or fact.neutral_index != m):
                failures.append((seed, variant))
    elapsed = time.perf_counter() - start
    ok = not failures and max(worst.values()) <= 1e-9 and elapsed < 30
    record('2 reconstruction suite', ok,
           '500 instances x 4 variants, reconstruction<=%.1e, certificates<=%.1e, '
           'failures=%d, %.1f s' % (worst['reconstruction'], worst['other'],
                                    len(failures), elapsed))
    assert not failures, failures[:5]
    assert max(worst.values()) <= 1e-9
    assert elapsed < 30


# 3 ---------------------------------------------------------------------------

def test_c3_uniqueness_of_s():
    cases = admissible()
    worst_s = worst_w = 0.0
    for seed in range(100):
        n, p, m = cases[(7 * seed) % len(cases)]
        space = gen_space(n, p, 1000 + seed)
        gen = gen_factored(space, m, 1000 + seed)
        F = gen['F']
        pol = factor_normal(F, space).polar
        # From scratch: plain adjoint, the generator's Sigma and scipy's sqrtm.
        A = np.linalg.solve(space.H, F.conj().T @ space.H) @ F
        S_ref = scipy.linalg.sqrtm(gen['Phi'] @ A)
        worst_s = max(worst_s, rel(pol.S, S_ref), rel(pol.S, gen['S']))
        worst_w = max(worst_w, rel(np.linalg.solve(pol.Sprime, F),
                                   np.linalg.solve(pol.S.T, F.T).T))
    ok = worst_s <= 1e-10 and worst_w <= 1e-9
    record('3 uniqueness of S and S\'', ok,
           "100 instances, S vs sqrtm=%.1e, S'^-1F vs FS^-1=%.1e" % (worst_s, worst_w))
    assert worst_s <= 1e-10
    assert worst_w <= 1e-9


# 4 ---------------------------------------------------------------------------

def _jordan_case(seed):
    # A = V diag(J_s(lam<0) blocks, other blocks) V^{-1} with cond(V) <= 100,
    # and the projector P onto the negative blocks.
    rng = np.random.default_rng(seed)
    blocks, neg = [], []
    sizes = [int(rng.integers(1, 4)) for _ in range(int(rng.integers(1, 3)))]
    if max(sizes) == 1:
        sizes[0] = int(rng.integers(2, 4))
    for s in sizes:
        blocks.append(-rng.uniform(0.5, 3.0) * np.eye(s) + np.eye(s, k=1))
        neg += [1.0] * s
    for _ in range(int(rng.integers(1, 3))):
        kind = rng.integers(0, 3)
        if kind == 0:
            s = int(rng.integers(1, 3))
            B = rng.uniform(0.5, 3.0) * np.eye(s) + np.eye(s, k=1)
        else:
            a = -rng.uniform(0.5, 3.0) if kind == 1 else rng.uniform(-3.0, 3.0)
            b = rng.uniform(0.5, 3.0)
            B = np.array([[a, b], [-b, a]])
        blocks.append(B)
        neg += [0.0] * len(B)
    A0 = scipy.linalg.block_diag(*blocks)
    V = random_matrix(rng, len(A0), kappa=100.0)
    Vi = np.linalg.inv(V)
    return V @ A0 @ Vi, V @ np.diag(neg) @ Vi


def test_c4_sign_on_jordan_blocks():
    worst_p = worst_inv = 0.0
    for seed in range(100):
        A, P = _jordan_case(seed)
        n = A.shape[0]
        Sigma = sign_matrix(A)
        worst_p = max(worst_p, np.linalg.norm(Sigma + 2 * P - np.eye(n)))
        worst_inv = max(worst_inv, np.linalg.norm(Sigma @ Sigma - np.eye(n)))
    ok = worst_p <= 1e-10 and worst_inv <= 1e-10
    record('4 sign on Jordan blocks', ok,
           '100 instances, |Sigma+2P-I|=%.1e, |Sigma^2-I|=%.1e' % (worst_p, worst_inv))
    assert worst_p <= 1e-10
    assert worst_inv <= 1e-10


# 5 ---------------------------------------------------------------------------

def test_c5_hyperbolicity():
    bad = []
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        for seed in range(500):
            rng = np.random.default_rng(seed)
            n = int(rng.integers(2, 13))
            p = int(rng.integers(0, n + 1))
            field = 'complex' if seed % 5 == 4 else 'real'
            space = gen_space(n, p, seed, field=field)
            if seed % 2:
                m = int(rng.integers(0, min(p, n - p) + 1))
                F = gen_factored(space, m, seed)['F']
                want = 2 * m
            else:
                F = random_matrix(rng, n, field, kappa=10.0)
                want = None
            rep = negative_eigenspace_hyperbolicity(F, space)
            pos, neg = rep.inertia
            if rep.dim % 2 or pos != neg or not rep.hyperbolic or (want is not None
                                                                   and rep.dim != want):
                bad.append(seed)
    mismatches = []
    exact_cases = 0
    instances = [rational_instance(n, p, m, seed)
                 for n, p, m in admissible(range(1, 5)) for seed in range(2)]
    instances += [jordan_instance(1), jordan_instance(2)]
    for Fe, He in instances:
        dim, sig = exact_negative_eigenspace(Fe, He)
        F = np.array(Fe.evalf(), dtype=float)
        H = np.array(He.evalf(), dtype=float)
        rep = negative_eigenspace_hyperbolicity(F, InnerProductSpace(H))
        exact_cases += 1
        if (rep.dim, rep.inertia[0] - rep.inertia[1]) != (dim, sig) or sig != 0:
            mismatches.append((Fe, He))
    ok = not bad and not mismatches
    record('5 hyperbolicity of the negative eigenspace', ok,
           '500 random (F, H): %d violations; exact oracle: %d/%d agree'
           % (len(bad), exact_cases - len(mismatches), exact_cases))
    assert not bad, bad[:5]
    assert not mismatches


# 6 ---------------------------------------------------------------------------

def test_c6_trace_identity():
    worst = 0.0
    count = 0
    for seed, n, p, m, field in _suite_cases():
        space = gen_space(n, p, seed, field=field)
        gen = gen_factored(space, m, seed)
        inv = gen_neutral_involution(space, m, seed)
        Xs = [inv.X, gen['X'], solve_involution(gen['Phi'], space, seed=seed).X]
        for variant in VARIANTS:
            Xs.append(factor_normal(gen['F'], space, variant=variant)['X'])
        for X in Xs:
            worst = max(worst, _trace_gap(X, space, m) / n)
            count += 1
    ok = worst <= 1e-9
    record('6 trace identity', ok,
           '%d generated and pipeline X, max |tr(X^[H]X)-(n-4m)|/n=%.1e' % (count, worst))
    assert worst <= 1e-9


# 7 ---------------------------------------------------------------------------

def test_c7_non_uniqueness():
    worst_lx = worst_sim = worst_comm = worst_unit = 0.0
    cases = [c for c in admissible() if c[2] > 0]
    for seed in range(100):
        n, p, m = cases[(3 * seed) % len(cases)]
        space = gen_space(n, p, 2000 + seed)
        F = gen_factored(space, m, 2000 + seed)['F']
        f1 = factor_normal(F, space, seed=seed)
        f2 = factor_normal(F, space, seed=seed + 10_000)
        W = f1.polar.W
        worst_lx = max(worst_lx, np.linalg.norm(f1['L'] @ f1['X'] - f2['L'] @ f2['X'])
                       / np.linalg.norm(W))
        Phi = f1.polar.Sigma
        X1, X2 = f1['X'], f2['X']
        L = all_solutions_related(X1, X2, Phi, space)
        worst_sim = max(worst_sim, rel(np.linalg.solve(L, X2 @ L), X1))
        worst_comm = max(worst_comm, np.linalg.norm(L @ Phi - Phi @ L)
                         / (np.linalg.norm(L) * np.linalg.norm(Phi)))
        worst_unit = max(worst_unit, rel(L.conj().T @ space.H @ L, space.H))
    worst = max(worst_lx, worst_sim, worst_comm, worst_unit)
    ok = worst <= 1e-9
    record('7 non-uniqueness of L, X', ok,
           '100 instances, |L1X1-L2X2|/|W|=%.1e, L^-1X2L=X1 %.1e, L Phi=Phi L %.1e, '
           'L H-unitary %.1e' % (worst_lx, worst_sim, worst_comm, worst_unit))
    assert worst <= 1e-9


# 8 ---------------------------------------------------------------------------

def test_c8_canonical_pairs():
    worst = 0.0
    cases = admissible()
    for seed in range(200):
        n, p, m = cases[(5 * seed) % len(cases)]
        space = gen_space(n, p, 3000 + seed, field='complex' if seed % 4 == 3 else 'real')
        X = gen_neutral_involution(space, m, 3000 + seed).X
        for layout in LAYOUTS:
            cp = canonical_pair(X, space, layout=layout)
            Q = cp.Q
            Qi = np.linalg.inv(Q)
            worst = max(worst, rel(Q @ cp.first @ Qi, X),
                        rel(Qi.conj().T @ cp.second @ Qi, space.H))
    ok = worst <= 1e-9
    record('8 canonical pairs', ok,
           '200 involutions x %d layouts, max round-trip=%.1e' % (len(LAYOUTS), worst))
    assert worst <= 1e-9


# 9 ---------------------------------------------------------------------------

def _cli(*args):
    return subprocess.run([sys.executable, '-m', 'hnormal', *args],
                          capture_output=True, check=False)


def _snapshot(d):
    out = {}
    for root, _, files in os.walk(d):
        for f in files:
            p = os.path.join(root, f)
            with open(p, 'rb') as fh:
                out[os.path.relpath(p, d)] = fh.read()
    return out


def test_c9_cli_determinism(tmp_path):
    runs = []
    for k in range(2):
        d = tmp_path / ('run%d' % k)
        gen = _cli('gen', '--n', '6', '--p', '3', '--m', '2', '--seed', '11',
                   '--out', str(d / 'gen'))
        outs = [gen]
        for variant in VARIANTS:
            outs.append(_cli('decompose', str(d / 'gen' / 'F.json'), str(d / 'gen' / 'H.json'),
                             '--variant', variant, '--seed', '5',
                             '-o', str(d / ('dec_' + variant))))
        runs.append(([(r.returncode, r.stdout) for r in outs], _snapshot(d)))
    codes = [c for c, _ in runs[0][0]]
    same = runs[0] == runs[1]
    ok = same and all(c == 0 for c in codes) and len(runs[0][1]) > 0
    record('9 CLI determinism', ok,
           'gen + 4 decompose runs, %d files, exit codes %s, identical=%s'
           % (len(runs[0][1]), codes, same))
    assert all(c == 0 for c in codes)
    assert same


def main():
    import tempfile
    import pathlib
    tests = [v for k, v in sorted(globals().items()) if k.startswith('test_c')]
    for t in tests:
        try:
            if 'tmp_path' in t.__code__.co_varnames[:t.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as d:
                    t(pathlib.Path(d))
            else:
                t()
        except AssertionError:
            pass
    for key, (ok, detail) in sorted(RESULTS.items()):
        print('%s  criterion %s: %s' % ('PASS' if ok else 'FAIL', key, detail))
    return 0 if all(ok for ok, _ in RESULTS.values()) else 1


if __name__ == '__main__':
    sys.exit(main())
