"""Acceptance criteria, each run at its stated tolerance and runtime budget.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion as it finishes; the same lines are repeated in the
terminal summary.
"""
import math
import os
import subprocess
import sys
import time

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from lmwv.asymptotics import (
    adjudicate_K_exponent,
    band_edges,
    compute_M12,
    gamma_bandpass_quadrature,
    gamma_expansion,
    integral_I1,
    integral_I2,
    integral_I3,
    integral_I4,
    remainder_profile,
)
from lmwv.estimator import bias_corrected_fit, fit_log_regression
from lmwv.spectra import LongMemoryModel, Quadratic, sin_power_expansion
from lmwv.synthesis import log_periodogram_slope, synthesize
from lmwv.wavelets import WaveletVarianceProfile, transform, wavelet_variance

# mpmath quadrature of (1/pi) * integral_0^pi (2 sin(f/2))^(-1/2) df, 40 digits
ACOV0_025 = 1.1803405990160962

SEEDS = range(50)
N_MC = 2 ** 15


def ulp_distance(a, b):
    return abs(int(np.float64(a).view(np.int64)) - int(np.float64(b).view(np.int64)))


def criterion_1_integrals():
    integrands = {
        integral_I1: lambda d: (lambda f: (f / 2) ** (-2 * d)),
        integral_I2: lambda d: (lambda f: (f / 2) ** (-2 * d) * f ** 2),
        integral_I3: lambda d: (lambda f: (f / 2) ** (2 - 2 * d)),
        integral_I4: lambda d: (lambda f: (f / 2) ** (2 - 2 * d) * f ** 2),
    }
    worst_quad = worst_ulp = worst_m12 = 0.0
    for d in np.round(np.arange(0.05, 0.451, 0.05), 2):
        m12 = compute_M12(d)
        for j in range(2, 11):
            lo, hi = band_edges(j)
            for fn, make in integrands.items():
                ref = quad(make(d), lo, hi, epsabs=0, epsrel=1e-13, limit=200)[0]
                worst_quad = max(worst_quad, abs(fn(j, d) / ref - 1))
            worst_ulp = max(worst_ulp, ulp_distance(integral_I3(j, d), integral_I2(j, d) / 4))
            worst_m12 = max(worst_m12, abs(m12 * 2.0 ** (-2 * j) * integral_I1(j, d) / integral_I2(j, d) - 1))
    return worst_quad, worst_ulp, worst_m12


def test_criterion_1_closed_form_integrals(acceptance_log):
    start = time.perf_counter()
    worst_quad, worst_ulp, worst_m12 = criterion_1_integrals()
    elapsed = time.perf_counter() - start
    ok = worst_quad <= 1e-10 and worst_ulp <= 4 and worst_m12 <= 1e-12 and elapsed < 5
    acceptance_log(1, ok, f"max rel err vs quad {worst_quad:.2e}, I3 vs I2/4 {worst_ulp:.0f} ulp, "
                          f"M12 identity {worst_m12:.2e}, {elapsed:.2f} s")
    assert ok


def test_criterion_2_expansion_remainder(acceptance_log):
    start = time.perf_counter()
    details, ok = [], True
    for d in (0.1, 0.25, 0.4):
        for beta in (0.0, 0.5):
            prof = remainder_profile(LongMemoryModel(d, Quadratic(beta)), 6, 12)
            gap = np.abs(prof.e1 - prof.a2)
            slope = np.polyfit(prof.j, np.log2(gap), 1)[0]
            case_ok = (gap[-1] <= 1e-3 * max(abs(prof.a2), 1.0)
                       and bool(np.all(np.diff(gap) < 0)) and slope <= -1.8)
            ok &= case_ok
            details.append(f"({d},{beta}) gap {gap[-1]:.1e} slope {slope:.3f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30
    acceptance_log(2, ok, "; ".join(details) + f"; {elapsed:.2f} s")
    assert ok


def test_criterion_3_K_exponent(acceptance_log):
    start = time.perf_counter()
    details, ok = [], True
    for d in (0.1, 0.25, 0.4):
        rep = adjudicate_K_exponent(d, 12)
        case_ok = (0.999 <= rep.ratio_paper <= 1.001
                   and 0.999 * 2 * math.pi <= rep.ratio_achard <= 1.001 * 2 * math.pi)
        ok &= case_ok
        details.append(f"d={d} ratio(2-2d) {rep.ratio_paper:.7f} ratio(1-2d) {rep.ratio_achard:.6f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10
    acceptance_log(3, ok, "; ".join(details) + f"; {elapsed:.2f} s")
    assert ok


def test_criterion_4_sin_expansion(acceptance_log):
    start = time.perf_counter()
    ok, details = True, []
    for d in (0.1, 0.25, 0.4):
        err = abs(sin_power_expansion(0.01, d) / math.sin(0.005) ** (-2 * d) - 1)
        # truncation error drops below double rounding for f <= 1e-3, so compare at 50 digits
        with mp.workdps(50):
            dm = mp.mpf(d)
            errs = [abs(sin_power_expansion(mp.mpf(10) ** -k, dm) / mp.sin(mp.mpf(10) ** -k / 2) ** (-2 * dm) - 1)
                    for k in range(1, 6)]
        monotone = all(b < a for a, b in zip(errs, errs[1:]))
        ok &= err <= 1e-6 and monotone
        details.append(f"d={d} err(0.01) {err:.1e} monotone {monotone}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1
    acceptance_log(4, ok, "; ".join(details) + f"; {elapsed:.3f} s")
    assert ok


def test_criterion_5_synthesis_fidelity(acceptance_log):
    start = time.perf_counter()
    model = LongMemoryModel(0.25)
    # independent quadrature cross-check of the frozen oracle value
    oracle = quad(lambda f: (2 * math.sin(f / 2)) ** -0.5, 0, math.pi, epsabs=0, epsrel=1e-12)[0] / math.pi
    assert oracle == pytest.approx(ACOV0_025, rel=1e-9)
    variances, slopes = [], []
    for seed in SEEDS:
        x = synthesize(model, N_MC, seed).values
        variances.append(np.var(x, ddof=1))
        slopes.append(log_periodogram_slope(x))
    med_var, med_slope = float(np.median(variances)), float(np.median(slopes))
    elapsed = time.perf_counter() - start
    ok = abs(med_var / ACOV0_025 - 1) <= 0.05 and abs(med_slope + 0.5) <= 0.1 and elapsed < 120
    acceptance_log(5, ok, f"median variance {med_var:.4f} (oracle {ACOV0_025:.4f}), "
                          f"median slope {med_slope:.4f}, {elapsed:.1f} s")
    assert ok


def oracle_profiles():
    js = list(range(3, 9))
    for d in (0.15, 0.25, 0.35):
        for beta in (0.0, 0.5):
            model = LongMemoryModel(d, Quadratic(beta))
            yield d, beta, WaveletVarianceProfile(js, [gamma_expansion(d, beta, j) for j in js], [1] * 6)
            yield d, beta, WaveletVarianceProfile(js, [gamma_bandpass_quadrature(model, j) for j in js], [1] * 6)


def test_criterion_6_estimator_recovery(acceptance_log):
    start = time.perf_counter()
    details, ok = [], True
    for d in (0.15, 0.25, 0.35):
        model = LongMemoryModel(d)
        errors = []
        for seed in SEEDS:
            prof = wavelet_variance(transform(synthesize(model, N_MC, seed).values, "ideal", 8))
            errors.append(abs(fit_log_regression(prof, 3, 8).d_hat - d))
        med = float(np.median(errors))
        ok &= med <= 0.05
        details.append(f"d={d} median |err| {med:.4f}")
    plain, fixed = [], []
    for d, beta, prof in oracle_profiles():
        plain.append(abs(fit_log_regression(prof, 3, 8).d_hat - d))
        fixed.append(abs(bias_corrected_fit(prof, 3, 8, beta_assumed=beta).d_hat - d))
    med_plain, med_fixed = float(np.median(plain)), float(np.median(fixed))
    ok &= med_fixed <= med_plain
    elapsed = time.perf_counter() - start
    ok &= elapsed < 180
    acceptance_log(6, ok, "; ".join(details) + f"; oracle profiles: corrected {med_fixed:.2e} "
                          f"vs uncorrected {med_plain:.2e}; {elapsed:.1f} s")
    assert ok


CLI_RUNS = [
    ["constants", "--d", "0.3", "--beta", "0.5"],
    ["verify", "--d", "0.25", "--beta", "0.5", "--jmin", "4", "--jmax", "12", "--out", "verify.csv"],
    ["synth", "--d", "0.3", "--beta", "0.5", "--n", "256", "--seed", "5", "--replicates", "4", "--out", "s.csv"],
    ["synth", "--d", "0.25", "--n", "4096", "--seed", "9", "--out", "x.csv"],
    ["wvar", "--input", "x.csv", "--out", "p.csv"],
    ["wvar", "--input", "x.csv", "--filter", "d4", "--out", "p4.csv"],
    ["estimate", "--input", "p.csv", "--out", "e.csv"],
    ["estimate", "--input", "p.csv", "--bias-correct", "--weighting", "bycount", "--out", "eb.csv"],
]


def cli_snapshot(workdir, threads):
    env = dict(os.environ, LMWV_THREADS=threads)
    outputs = {}
    for i, argv in enumerate(CLI_RUNS):
        proc = subprocess.run([sys.executable, "-m", "lmwv", *argv], cwd=workdir, env=env,
                              capture_output=True, check=False)
        outputs[f"run{i}:exit"] = proc.returncode
        outputs[f"run{i}:stdout"] = proc.stdout
    for path in sorted(workdir.iterdir()):
        outputs[path.name] = path.read_bytes()
    return outputs


def test_criterion_7_determinism(acceptance_log, tmp_path):
    start = time.perf_counter()
    snapshots = []
    for label, threads in [("a", "1"), ("b", "1"), ("c", "4"), ("d", "0")]:
        workdir = tmp_path / label
        workdir.mkdir()
        snapshots.append(cli_snapshot(workdir, threads))
    all_ok_exit = all(v == 0 for k, v in snapshots[0].items() if k.endswith(":exit"))
    identical = all(s == snapshots[0] for s in snapshots[1:])
    elapsed = time.perf_counter() - start
    ok = all_ok_exit and identical and elapsed < 60
    acceptance_log(7, ok, f"{len(CLI_RUNS)} invocations x LMWV_THREADS in (1, 1, 4, 0): "
                          f"{len(snapshots[0])} outputs identical={identical}, {elapsed:.1f} s")
    assert ok
