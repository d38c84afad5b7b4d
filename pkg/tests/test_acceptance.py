"""Acceptance checks, one test per criterion.

Each test prints a single ``ACCEPTANCE <k> PASS|FAIL ...`` line (visible even
under output capture) and then asserts the criterion at its stated tolerance.
"""
import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from shaplab.analysis.dense import DenseDistribution, uniform_on
from shaplab.analysis.fourier import apply_noise, apply_noise_direct, noise_multiplier
from shaplab.analysis.rectangles import (
    RectanglePair,
    even_parity_pairs,
    fixed_positions_set,
    rectangle_bias,
    shift_xor_entropies,
)
from shaplab.analysis.suites import random_test_distribution, run_suite
from shaplab.bits import BitString
from shaplab.classical import SamplingConfig, sample_budget, sampling_trial
from shaplab.problem import (
    DistributionSpec,
    PromiseClass,
    ShapInstance,
    all_shift_weights,
    classify,
    mu1_tilde_density,
    sample,
    sample_class_at,
    sample_zero_class,
)
from shaplab.quantum import (
    ProtocolConfig,
    cost_report,
    disturbance_report,
    exact_answer_prob,
    inner_product,
    inner_product_exact,
    run_protocol,
)
from shaplab.seeding import make_rng, trial_rng

SEED = 2024


def verdict(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {k:>2} {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def binom_cdf(n: int, p: Fraction, hi: int, lo: int = 0) -> float:
    """Exact ``Pr[lo <= Bin(n, p) <= hi]``."""
    num, den = p.numerator, p.denominator
    total = sum(math.comb(n, k) * num**k * (den - num) ** (n - k) for k in range(lo, hi + 1))
    return float(Fraction(total, den**n))


# 1 ---------------------------------------------------------------------------------------


def test_c01_inner_product_identity(capsys):
    start = time.perf_counter()
    rng = make_rng(SEED, 1)
    worst = 0.0
    checked = 0
    for n in (4, 8, 16, 32, 64):
        for _ in range(1000):
            inst = ShapInstance.random(n, rng)
            w = all_shift_weights(inst)
            for i in range(n):
                worst = max(worst, abs(inner_product(inst, i) - (1 - 2 * w[i] / n)))
                checked += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 10
    verdict(capsys, 1, ok, f"overlaps={checked} max_err={worst:.3g} runtime={elapsed:.2f}s (limit 1e-12, 10s)")


# 2 ---------------------------------------------------------------------------------------


def test_c02_promise_overlap_thresholds(capsys):
    rng = make_rng(SEED, 2)
    n = 30
    bad = {PromiseClass.ZERO: 0, PromiseClass.ONE: 0}
    for cls in bad:
        for _ in range(1000):
            i = int(rng.integers(0, n))
            c = inner_product_exact(sample_class_at(n, i, cls, rng), i)
            if cls is PromiseClass.ZERO and abs(c) > Fraction(1, 15):
                bad[cls] += 1
            if cls is PromiseClass.ONE and abs(c) < Fraction(1, 5):
                bad[cls] += 1
    ok = sum(bad.values()) == 0
    verdict(capsys, 2, ok, f"n=30 zero_violations={bad[PromiseClass.ZERO]}/1000 one_violations={bad[PromiseClass.ONE]}/1000")


# 3 ---------------------------------------------------------------------------------------


def test_c03_swap_test_statistics(capsys):
    n, trials = 8, 10_000
    rng = make_rng(SEED, 3)
    # half from the hard distribution, half from the zero class where answers are least certain
    insts = [sample(DistributionSpec("mu", n), rng) for _ in range(10)] + [sample_zero_class(n, rng) for _ in range(10)]
    worst = 0.0
    fails = 0
    for t in (1, 2):
        cfg = ProtocolConfig(n, t=t)
        for idx, inst in enumerate(insts):
            p = exact_answer_prob(inst, cfg)
            sim = make_rng(SEED, 3, t, idx)
            hits = sum(run_protocol(inst, cfg, sim).answer for _ in range(trials))
            se = math.sqrt(p * (1 - p) / trials)
            z = abs(hits / trials - p) / se if se > 0 else (0.0 if abs(hits / trials - p) < 1e-12 else math.inf)
            worst = max(worst, z)
            fails += z > 4
    verdict(capsys, 3, fails == 0, f"n=8 t=1,2 instances=20 trials=1e4 max|z|={worst:.2f} beyond_4se={fails}")


# 4 ---------------------------------------------------------------------------------------


def test_c04_sequential_disturbance(capsys):
    n = 8
    rng = make_rng(SEED, 4)
    insts = [sample_zero_class(n, rng) for _ in range(50)]
    per_round = total = 0
    ratio = 0.0
    for t in (1, 2):
        cfg = ProtocolConfig(n, t=t)
        for inst in insts:
            rep = disturbance_report(inst, cfg)
            per_round += len(rep.violations())
            total += int(np.nansum(rep.eps_cond) > rep.total_bound)
            ratio = max(ratio, np.nanmax(rep.eps_cond) / rep.per_round_bound)
    ok = per_round == 0 and total == 0
    verdict(capsys, 4, ok, f"n=8 instances=50 t=1,2 per_round_violations={per_round} total_violations={total} max eps_j/bound={ratio:.3f}")


# 5 ---------------------------------------------------------------------------------------


def test_c05_separation_demo(capsys):
    n, samples = 64, 500
    insts = []
    rng = make_rng(SEED, 5)
    while len(insts) < samples:
        inst = sample(DistributionSpec("mu", n), rng)
        if classify(inst) is not PromiseClass.UNDEFINED:
            insts.append(inst)
    want = [classify(s).value for s in insts]
    zero_share = want.count(0) / samples

    # quantum: smallest t within the state cap whose exact error meets 0.1
    t_sel, q_err = None, None
    for t in itertools.count(1):
        cfg = ProtocolConfig(n, t=t)
        if cfg.dim > cfg.cap:
            break
        errs = [(1 - p) if y == 1 else p for p, y in ((exact_answer_prob(s, cfg), y) for s, y in zip(insts, want))]
        q_err = float(np.mean(errs))
        if q_err <= 0.1:
            t_sel = t
            break
    q_bits = cost_report(ProtocolConfig(n, t=t_sel)).qubits_sent if t_sel else None

    # classical: smallest budget k (hence smallest c) whose error on the same samples meets 0.1
    scale = math.sqrt(n * math.log(n))
    k_sel, c_err = None, None
    for k in range(1, n + 1):
        errs = [sampling_trial(s, SamplingConfig(n, k=k), trial_rng(SEED, j, 5)).answer != y for j, (s, y) in enumerate(zip(insts, want))]
        c_err = float(np.mean(errs))
        if c_err <= 0.1:
            k_sel = k
            break
    c_cal = k_sel / scale
    assert sample_budget(n, c_cal) == k_sel
    c_bits = 2 * k_sel
    default_bits = SamplingConfig(n).cost_bits
    ok = t_sel is not None and q_err <= 0.1 and c_err <= 0.1 and q_bits < c_bits
    verdict(
        capsys,
        5,
        ok,
        f"n=64 zero_class_share={zero_share:.3f} quantum t={t_sel} err={q_err:.4f} qubits={q_bits} | "
        f"classical calibrated c={c_cal:.4f} k={k_sel} err={c_err:.3f} bits={c_bits} "
        f"(c=6 default: {default_bits} bits) | quantum<classical={q_bits is not None and q_bits < c_bits}",
    )


# 6 ---------------------------------------------------------------------------------------


def test_c06_distribution_sanity(capsys):
    n, N = 300, 10_000
    rng = make_rng(SEED, 6)
    one_mu1 = planted_one = 0
    zero_mu0 = band0 = 0
    for _ in range(N):
        i = int(rng.integers(0, n))
        inst = sample(DistributionSpec("mu1_at_shift", n, shift=i), rng)
        w = all_shift_weights(inst)
        one_mu1 += classify(inst) is PromiseClass.ONE
        planted_one += 15 * int(w[i]) <= 6 * n
        inst0 = sample(DistributionSpec("mu0", n), rng)
        w0 = all_shift_weights(inst0)
        zero_mu0 += classify(inst0) is PromiseClass.ZERO
        band0 += 7 * n <= 15 * int(w0[0]) <= 8 * n

    # exact oracles: the planted shift is Bin(n, 3/8); a single uniform shift is Bin(n, 1/2)
    p_planted = binom_cdf(n, Fraction(3, 8), 6 * n // 15)
    p_band = binom_cdf(n, Fraction(1, 2), 8 * n // 15, -(-7 * n // 15))
    z1 = abs(planted_one / N - p_planted) / math.sqrt(p_planted * (1 - p_planted) / N)
    z0 = abs(band0 / N - p_band) / math.sqrt(p_band * (1 - p_band) / N)
    oracles_ok = z1 <= 3 and z0 <= 3
    rate1, rate0 = one_mu1 / N, zero_mu0 / N
    ok = oracles_ok and rate1 >= 0.99 and rate0 >= 0.9
    verdict(
        capsys,
        6,
        ok,
        f"n=300 Pr_mu1[One]={rate1:.4f} (need >=0.99) Pr_mu0[Zero]={rate0:.4f} (need >=0.9) | "
        f"oracles: planted-shift One {planted_one / N:.4f} vs {p_planted:.4f} z={z1:.2f}, "
        f"single-shift band {band0 / N:.4f} vs {p_band:.4f} z={z0:.2f}",
    )


# 7 ---------------------------------------------------------------------------------------


SUITE_PLAN = [
    ("minentropy_chain", 10_000, 10),
    ("l1_entropy", 10_000, 10),
    ("hypercontractive", 1_000, 10),
    ("kkl", 1_000, 10),
    ("lhyp", 10_000, 12),
    ("ndist", 1_000, 9),
]


def test_c07_inequality_suites(capsys):
    start = time.perf_counter()
    parts = []
    violations = 0
    ident = []
    for name, trials, n_max in SUITE_PLAN:
        reports = run_suite(name, SEED, trials, n_max)
        ident += [r for r in reports if r.name == "lhyp_fourier_identity"]
        bad = sum(not r.holds for r in reports)
        violations += bad
        slack = min(r.slack for r in reports if not r.skipped)
        parts.append(f"{name}:{len(reports)}/{bad}/{slack:.2g}")
    ident_gap = max(r.lhs for r in ident)
    elapsed = time.perf_counter() - start
    ok = violations == 0 and ident_gap <= 1e-10 and elapsed < 600
    verdict(capsys, 7, ok, f"reports/violations/min_slack {' '.join(parts)} lhyp_identity_gap={ident_gap:.2g} runtime={elapsed:.0f}s")


# 8 ---------------------------------------------------------------------------------------


def exact_noise(p: list, m: int, delta: Fraction) -> list:
    out = [Fraction(0)] * (1 << m)
    for x, px in enumerate(p):
        if px == 0:
            continue
        for y in range(1 << m):
            d = bin(x ^ y).count("1")
            out[y] += px * delta**d * (1 - delta) ** (m - d)
    return out


def test_c08_noise_algebra(capsys):
    rng = make_rng(SEED, 8)
    gap = 0.0
    for m in range(1, 11):
        for delta in (0.0, 0.125, 0.25, 0.375, 0.5):
            for _ in range(4):
                nu = random_test_distribution(m, rng)
                gap = max(gap, float(np.abs(apply_noise(nu, delta).p - apply_noise_direct(nu, delta).p).max()))
    # composition in exact rational arithmetic
    exact_ok = (1 - 2 * Fraction(1, 4)) ** 2 == 1 - 2 * Fraction(3, 8)
    for m in (1, 2, 3, 4):
        w = [Fraction(int(v)) for v in rng.integers(0, 20, 1 << m)]
        w[0] += 1
        p = [v / sum(w) for v in w]
        exact_ok &= exact_noise(exact_noise(p, m, Fraction(1, 4)), m, Fraction(1, 4)) == exact_noise(p, m, Fraction(3, 8))
    mult_ok = all(np.array_equal(noise_multiplier(m, 0.5) ** 2, noise_multiplier(m, 0.25)) for m in range(1, 11))
    ok = gap <= 1e-12 and exact_ok and mult_ok
    verdict(capsys, 8, ok, f"multiplier_vs_convolution max_gap={gap:.2g} (limit 1e-12) rational_composition={exact_ok} multipliers_equal={mult_ok}")


# 9 ---------------------------------------------------------------------------------------


def test_c09_parity_counterexample(capsys):
    lines = []
    ok = True
    for n in (6, 8, 10):
        nu = uniform_on(2 * n, even_parity_pairs(n))
        clean = n - shift_xor_entropies(nu, 0.0)
        noisy = n - shift_xor_entropies(nu, 0.25)
        ok &= bool(np.all(clean == 1.0)) and bool(np.all(noisy <= 2.0**-n))
        lines.append(f"n={n} clean={sorted(set(clean.tolist()))} noisy_max={noisy.max():.3g}<=2^-n={2.0**-n:.3g}")
    verdict(capsys, 9, ok, " ".join(lines))


# 10 --------------------------------------------------------------------------------------


def brute_density_table(n: int, i: int) -> dict:
    """Integer weights (over the common denominator 8**n * 2**(3n)) of the planted noisy process."""
    out = {}
    mask = (1 << n) - 1
    for x1, x2, y1 in itertools.product(range(1 << n), repeat=3):
        y2 = BitString(n, x1).shift(i).value ^ x2 ^ BitString(n, y1).shift(i).value
        for z in range(1 << n):
            w = bin(z).count("1")
            key = (x1 ^ z, x2, y1, y2 & mask)
            out[key] = out.get(key, 0) + 3**w * 5 ** (n - w)
    return out


def test_c10_density_identity(capsys):
    mismatches = 0
    checked = 0
    for n in (3, 4):
        den = 8**n * 2 ** (3 * n)
        for i in range(n):
            table = brute_density_table(n, i)
            for v in range(1 << (4 * n)):
                parts = [(v >> (k * n)) & ((1 << n) - 1) for k in (3, 2, 1, 0)]
                inst = ShapInstance(*(BitString(n, p) for p in parts))
                checked += 1
                mismatches += mu1_tilde_density(inst, i) != Fraction(table.get(tuple(parts), 0), den)

    # rectangle masses against the samplers
    rng = make_rng(SEED, 10)
    n, N = 4, 40_000
    rects = [
        RectanglePair(n, rng.choice(256, 96, replace=False), rng.choice(256, 128, replace=False)),
        RectanglePair(n, fixed_positions_set(n, [1, 2], [3]), fixed_positions_set(n, [1, 2], [3])),
        RectanglePair(n, fixed_positions_set(n, [], [1, 2, 3, 4]), np.arange(256)),
    ]
    worst_z = 0.0
    for kind in ("mu0", "mu1"):
        pairs = []
        for _ in range(N):
            s = sample(DistributionSpec(kind, n), rng)
            pairs.append(((s.x1.value << n) | s.x2.value, (s.y1.value << n) | s.y2.value))
        a = np.array([p[0] for p in pairs])
        b = np.array([p[1] for p in pairs])
        for rect in rects:
            bias = rectangle_bias(rect)
            mass = float(bias.mu0_mass if kind == "mu0" else bias.mu1_mass)
            freq = np.mean(np.isin(a, rect.A) & np.isin(b, rect.B))
            z = abs(freq - mass) / math.sqrt(mass * (1 - mass) / N)
            worst_z = max(worst_z, z)
    ok = mismatches == 0 and worst_z <= 4
    verdict(capsys, 10, ok, f"density points={checked} mismatches={mismatches} | rectangle masses vs sampler n=4 max|z|={worst_z:.2f} (limit 4)")
