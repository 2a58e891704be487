"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <k> PASS|FAIL: ...`` line (also
repeated in the pytest terminal summary) and then asserts the criterion at
its stated tolerance.
"""

import time
from collections import Counter

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, EX1_EIGS
from pjacobi import engine as engine_mod
from pjacobi.engine import ALGORITHMS, HYP_ALGORITHMS, TRIG_ALGORITHMS, EngineConfig
from pjacobi.engine import trig_pivot_transform
from pjacobi.factorizations import (
    bunch_parlett_complete,
    cholesky_diag_pivoted,
    cholesky_sign_pivoted,
    cholesky_unpivoted,
    qr_of_trapezoid,
)
from pjacobi.generate import example1, graded, random_symmetric
from pjacobi.oracle import cyclic_jacobi, extended_eigvals, inertia
from pjacobi.solver import (
    check_theorem1,
    preprocess,
    relative_accuracy_report,
    solve_preprocessed,
    solve_symmetric,
)
from pjacobi.strategy import all_block_pairs, sweep_schedule


def report(k, ok, detail):
    line = f"ACCEPTANCE {k} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


@pytest.fixture(scope="module", autouse=True)
def warm_up():
    # compile the numba kernels outside the timed regions
    for v in ("TB", "HB"):
        solve_symmetric(example1(), v, 1)
    cyclic_jacobi(example1())


def test_c1_example1():
    h = example1()
    worst, slowest = 0.0, 0.0
    for v in ALGORITHMS:
        for p in (1, 2):
            t0 = time.perf_counter()
            rep = solve_symmetric(h, v, p)
            slowest = max(slowest, time.perf_counter() - t0)
            worst = max(worst, float(np.max(np.abs(np.sort(rep.eigenvalues) - EX1_EIGS))))
    ok = worst <= 1e-13 and slowest < 1.0
    report(1, ok, f"max abs error {worst:.2e} (limit 1e-13), slowest solve {slowest * 1e3:.1f} ms")
    assert ok


def test_c2_oracle_equivalence():
    sizes = (4, 8, 16, 32, 64, 128)
    t0 = time.perf_counter()
    worst, where = 0.0, None
    for k in range(50):
        n = sizes[k % len(sizes)]
        p = (1, 2, 4)[k % 3]
        p = min(p, n // 2)
        h = random_symmetric(n, seed=1000 + k)
        ref, _, _ = cyclic_jacobi(h)
        pre = preprocess(h)
        for v in ALGORITHMS:
            err, _ = relative_accuracy_report(solve_preprocessed(pre, v, p), ref)
            if err > worst:
                worst, where = err, (n, p, v)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed <= 120.0
    report(2, ok, f"50 matrices x 10 variants, max rel error {worst:.2e} at {where} "
                  f"(limit 1e-10), {elapsed:.1f} s (limit 120 s)")
    assert ok


def test_c3_orthogonality():
    hyp_worst, trig_violations, trig_runs, trig_margin = 0.0, 0, 0, 0.0
    for n, p, seed in ((32, 2, 1), (128, 4, 2), (512, 4, 3)):
        h = random_symmetric(n, seed=seed)
        pre = preprocess(h)
        for v in HYP_ALGORITHMS:
            u = solve_preprocessed(pre, v, p).eigenvectors
            hyp_worst = max(hyp_worst, float(np.linalg.norm(u.T @ u - np.eye(n))))
    for n, p, seed in ((16, 1, 4), (32, 2, 5), (128, 4, 6), (256, 4, 7)):
        pre = preprocess(random_symmetric(n, seed=seed))
        for v in TRIG_ALGORITHMS:
            chk = check_theorem1(solve_preprocessed(pre, v, p))
            trig_runs += 1
            trig_violations += not chk.passed
            trig_margin = max(trig_margin, chk.margin)
    ok = hyp_worst <= 1e-12 and trig_violations == 0
    report(3, ok, f"hyperbolic max ||U^T U - I||_F {hyp_worst:.2e} (limit 1e-12, n<=512); "
                  f"trig bound violations {trig_violations}/{trig_runs}, "
                  f"worst measured/bound {trig_margin:.2e}")
    assert ok


def test_c4_graded_relative_accuracy():
    worst, min_kappa, cases = 0.0, np.inf, 0
    for n, seed in ((4, 0), (6, 1), (8, 2), (10, 3), (12, 4), (12, 5)):
        h, a, _ = graded(n, seed=seed, decades=14.0, kappa=10.0)
        assert np.linalg.cond(a) <= 1e2
        ref = extended_eigvals(h)
        kappa = float(np.max(np.abs(ref)) / np.min(np.abs(ref)))
        min_kappa = min(min_kappa, kappa)
        pre = preprocess(h)
        for v in ALGORITHMS:
            for p in range(1, min(3, n // 2) + 1):
                err, _ = relative_accuracy_report(solve_preprocessed(pre, v, p), ref)
                worst = max(worst, err)
                cases += 1
    ok = worst <= 1e-10 and min_kappa >= 1e20
    report(4, ok, f"{cases} graded solves, max rel error {worst:.2e} (limit 1e-10), "
                  f"min kappa_2(H) {min_kappa:.1e} (need >= 1e20)")
    assert ok


def test_c5_sweep_ordering():
    t0 = time.perf_counter()
    hf, hfsc = [], []
    for seed in range(20):
        pre = preprocess(random_symmetric(256, seed=500 + seed))
        hf.append(solve_preprocessed(pre, "HF", 4).sweeps)
        hfsc.append(solve_preprocessed(pre, "HFSC", 4).sweeps)
    hf, hfsc = np.array(hf), np.array(hfsc)
    frac = float(np.mean(hfsc <= hf))
    elapsed = time.perf_counter() - t0
    ok = frac >= 0.8 and hfsc.mean() < hf.mean() and elapsed <= 300.0
    report(5, ok, f"HFSC <= HF in {frac:.0%} of 20 (need >= 80%), mean sweeps HF {hf.mean():.2f} "
                  f"vs HFSC {hfsc.mean():.2f}, {elapsed:.1f} s (limit 300 s)")
    assert ok


def _ring_ok(entries, p):
    if p == 1:
        return True
    assert [e.rank for e in entries] == list(range(p))
    dest = [e.snd_rnk for e in entries]
    src = [e.rcv_rnk for e in entries]
    for r in range(p):
        d = dest[r]
        if (d - r) % p not in (1, p - 1) or src[d] != r:
            return False
    return len(set(dest)) == p


def test_c6_pivot_strategy():
    t0 = time.perf_counter()
    once_fail, disjoint_fail, ring_fail = [], [], []
    for p in range(1, 65):
        sched = sweep_schedule(p)
        counts = Counter((min(e.i_blk, e.j_blk), max(e.i_blk, e.j_blk)) for e in sched)
        if set(counts) != all_block_pairs(p) or set(counts.values()) != {1}:
            once_fail.append(p)
        nblk = 2 * p
        # entries come ordered by step, then rank
        steps = [sched[k:k + p] for k in range(0, len(sched), p)]
        if any(len({b for e in entries for b in (e.i_blk, e.j_blk)}) != nblk
               for entries in steps):
            disjoint_fail.append(p)
        if not all(_ring_ok(entries, p) for entries in steps):
            ring_fail.append(p)
    elapsed = time.perf_counter() - t0
    ok = not once_fail and not disjoint_fail and not ring_fail and elapsed < 1.0
    extra = ""
    if once_fail:
        extra = (f"; every pair scheduled exactly once FAILS for p in "
                 f"{once_fail[0]}..{once_fail[-1]} ({len(once_fail)} values): "
                 "the p extra-block slots revisit pairs already met on the antidiagonals")
    report(6, ok, f"disjoint failures {len(disjoint_fail)}, ring failures {len(ring_fail)}, "
                  f"{elapsed * 1e3:.0f} ms (limit 1000 ms){extra}")
    assert ok


def test_c7_factorization_residuals():
    rng = np.random.default_rng(7)
    worst = {}
    inertia_bad = 0

    def track(name, res, n, a):
        worst[name] = max(worst.get(name, 0.0), res / (n * np.linalg.norm(a)))

    for _ in range(200):
        n = int(rng.integers(2, 41))
        seed = int(rng.integers(2**31))
        a = random_symmetric(n, seed=seed)
        f = bunch_parlett_complete(a)
        track("bunch_parlett", np.linalg.norm(f.reconstruct() - a), n, a)
        lam, _, _ = cyclic_jacobi(a)
        inertia_bad += (int(np.sum(f.J > 0)), int(np.sum(f.J < 0))) != inertia(lam)

        x = rng.standard_normal((n, n))
        spd = x.T @ x + 0.1 * np.eye(n)
        c = cholesky_unpivoted(spd)
        track("cholesky", np.linalg.norm(c.R.T @ c.R - spd), n, spd)
        d = cholesky_diag_pivoted(spd)
        track("cholesky_diag_pivoted", np.linalg.norm(d.reconstruct() - spd), n, spd)
        npos = int(rng.integers(0, n + 1))
        j = np.array([1] * npos + [-1] * (n - npos))
        s = cholesky_sign_pivoted(spd, j)
        track("cholesky_sign_pivoted",
              np.linalg.norm(s.R.T @ s.R - spd[s.perm][:, s.perm]), n, spd)
        w = rng.standard_normal((n + 2, n))
        q, t = qr_of_trapezoid(w)
        track("qr_of_trapezoid", np.linalg.norm(q[:, :n] @ t - w), n, w)
    ok = max(worst.values()) <= 1e-13 and inertia_bad == 0
    parts = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    report(7, ok, f"200 instances each, max residual/(n ||A||_F): {parts} (limit 1e-13); "
                  f"inertia mismatches {inertia_bad}")
    assert ok


def test_c8_determinism():
    mismatches, runs = 0, 0
    for n, seed in ((12, 1), (64, 2)):
        pre = preprocess(random_symmetric(n, seed=seed))
        for p in (2, 4):
            for v in ALGORITHMS:
                first = None
                for _ in range(5):
                    rep = solve_preprocessed(pre, v, p)
                    key = (rep.eigenvalues.tobytes(), rep.eigenvectors.tobytes(),
                           rep.sweeps, rep.stages, rep.rotations)
                    runs += 1
                    if first is None:
                        first = key
                    elif key != first:
                        mismatches += 1
    ok = mismatches == 0
    report(8, ok, f"{runs} runs (5 repeats, p in {{2, 4}}, all variants), "
                  f"{mismatches} bitwise mismatches")
    assert ok


def test_c9_singular_pivot_rescue(monkeypatch):
    calls = []
    real = engine_mod.qr_of_trapezoid

    def spy(w, *args, **kw):
        calls.append(w.shape)
        return real(w, *args, **kw)

    monkeypatch.setattr(engine_mod, "qr_of_trapezoid", spy)
    h = example1()
    pre = preprocess(h)
    x = pre.G[:, [0, 3]]
    pivot = (x.T * pre.J) @ x
    u_p, _, _, singular = trig_pivot_transform(x, pre.J, 1, EngineConfig(p=2, algorithm="TB"),
                                               1e-15)
    orth = float(np.abs(u_p.T @ u_p - np.eye(2)).max())
    eig_err = 0.0
    for v in TRIG_ALGORITHMS:
        rep = solve_symmetric(h, v, 2)
        eig_err = max(eig_err, float(np.max(np.abs(np.sort(rep.eigenvalues) - EX1_EIGS))))
    engine_hits = len(calls) - 1
    ok = (np.allclose(pivot, 1.0, atol=1e-15) and singular and orth <= 1e-14
          and engine_hits > 0 and eig_err <= 1e-13)
    report(9, ok, f"pivot [[1,1],[1,1]] rescued via QR of trapezoid ({engine_hits} engine "
                  f"rescues), ||U_P^T U_P - I||_max {orth:.1e} (limit 1e-14), "
                  f"eigenvalue error {eig_err:.1e}")
    assert ok
