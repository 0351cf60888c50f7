"""Acceptance gate: one test per release criterion, pinned tolerances.

Each test prints a single ``criterion NN: PASS/FAIL`` line (visible in the
verbose test listing through its pass/fail status, and in captured output on
failure).  The criteria exercise the public API end to end: scalar reduction,
closed forms, the bound calculus, corruption resistance of every estimator
group, sparse rates, band splitting, and artifact reproducibility.
"""

from __future__ import annotations

import math
import time
import warnings

import numpy as np
import pytest

from momest import (
    AdversarySpec,
    CovarianceSpec,
    GeneratorSpec,
    NoiseSpec,
    RegressionProblem,
    block_means,
    block_second_moments,
    corrupt,
    cov_weak_sigma,
    generate,
    mom_cov_lowrank,
    mom_cov_spectral,
    mom_mean_1d,
    mom_mean_euclidean,
    mom_mean_sparse,
    mom_mean_supnorm,
    mom_regression,
    partition_blocks,
    regression_generate,
    risk_radius,
    spectral_grouping,
    split_estimate,
    vc_lowrank_bound,
    vc_poly_bound,
    vc_sparse_bound,
    vc_sparse_rank1_bound,
    vc_union_bound,
)
from momest.cli import main as cli_main

# Adversary streams are decoupled from data streams by the same offset the
# benchmark harness uses, so results here match config-driven runs.
ADV_SALT = 32452843


def _spike(d: int) -> np.ndarray:
    v = np.zeros(d)
    v[0] = 1.0
    return v


def _median_by_convention(column: np.ndarray) -> float:
    s = np.sort(column)
    h = len(s) // 2
    if len(s) % 2 == 1:
        return float(s[h])
    return float(0.5 * (s[h - 1] + s[h]))


# ---------------------------------------------------------------------------
# Criterion 1: the Euclidean min-max estimator collapses to scalar MOM in d=1
# ---------------------------------------------------------------------------


def test_criterion_01_euclidean_reduces_to_scalar_mom_in_1d():
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(1000):
        rng = np.random.default_rng(i)
        n = int(rng.integers(8, 300))
        k = int(rng.integers(1, min(n, 64) + 1))
        kind = i % 4
        if kind == 0:
            x = rng.standard_normal(n)
        elif kind == 1:
            x = rng.standard_t(2.5, size=n)
        elif kind == 2:
            x = rng.pareto(2.1, size=n) + 1.0
        else:
            x = rng.standard_normal(n)
            n_out = int(rng.integers(0, n // 10 + 1))
            x[:n_out] = rng.choice([-100.0, 100.0], size=n_out)
        x = x * float(10.0 ** rng.uniform(-1, 1)) + float(rng.uniform(-3, 3))
        scalar = mom_mean_1d(x, k, seed=i)
        multi = float(mom_mean_euclidean(x[:, None], k, seed=i).estimate[0])
        worst = max(worst, abs(scalar - multi))
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-9, f"criterion 01: FAIL (max gap {worst:.3e} > 1e-9)"
    assert elapsed < 10.0, f"criterion 01: FAIL (took {elapsed:.1f}s >= 10s)"
    print(f"criterion 01: PASS (max gap {worst:.2e} over 1000 instances, {elapsed:.2f}s)")


# ---------------------------------------------------------------------------
# Criterion 2: sup-norm estimator equals the coordinatewise block-mean median
# ---------------------------------------------------------------------------


def test_criterion_02_supnorm_closed_form_is_exact():
    for i in range(200):
        rng = np.random.default_rng(1000 + i)
        n = int(rng.integers(12, 400))
        k = int(rng.integers(1, min(n, 50) + 1))
        d = int(rng.integers(1, 21))
        kind = i % 3
        if kind == 0:
            pts = rng.standard_normal((n, d))
        elif kind == 1:
            pts = rng.standard_t(2.5, size=(n, d)) * 3.0
        else:
            pts = rng.standard_normal((n, d))
            pts[: max(1, n // 20)] = 1e6
        report = mom_mean_supnorm(pts, k, seed=i)
        bm = block_means(pts, partition_blocks(n, k, seed=i))
        expected = np.array([_median_by_convention(bm[:, j]) for j in range(d)])
        assert np.array_equal(report.estimate, expected), (
            f"criterion 02: FAIL (instance {i}: estimate differs from the "
            f"coordinatewise block-mean median)"
        )
    print("criterion 02: PASS (bitwise equality on 200 instances, d <= 20)")


# ---------------------------------------------------------------------------
# Criterion 3: bound calculus reproduces frozen values and exact identities
# ---------------------------------------------------------------------------


def test_criterion_03_vc_bound_calculus():
    from test_vc_bounds import LOWRANK, POLY, RANK1, SPARSE, UNION_PROOF, UNION_STATED

    tol = 1e-12
    for nu, n, want in UNION_PROOF:
        got = vc_union_bound(nu, n)
        assert abs(got - want) <= tol * want, f"criterion 03: FAIL union({nu},{n})"
    for nu, n, want in UNION_STATED:
        got = vc_union_bound(nu, n, form="stated")
        assert abs(got - want) <= tol * want, f"criterion 03: FAIL stated({nu},{n})"
    for s, d, want in SPARSE:
        got = vc_sparse_bound(s, d)
        assert abs(got - want) <= tol * want, f"criterion 03: FAIL sparse({s},{d})"
    for nv, deg, want in POLY:
        got = vc_poly_bound(nv, deg)
        assert abs(got - want) <= tol * want, f"criterion 03: FAIL poly({nv},{deg})"
    for d, r, want in LOWRANK:
        got = vc_lowrank_bound(d, r)
        assert abs(got - want) <= tol * want, f"criterion 03: FAIL lowrank({d},{r})"
    for s, d, want in RANK1:
        got = vc_sparse_rank1_bound(s, d)
        assert abs(got - want) <= tol * want, f"criterion 03: FAIL rank1({s},{d})"
        assert got == 4.0 * vc_sparse_bound(s, d)

    # Unit-slope linearity in nu, plus exact scaling identities (pure float
    # doublings are lossless in binary).
    slope = 2.0 * math.log2(math.e)
    for nu in (1, 3, 17):
        for n in (2, 100, 4096):
            diff = vc_union_bound(nu + 1, n) - vc_union_bound(nu, n)
            assert diff == pytest.approx(slope, abs=1e-12)
    for nv, deg in ((1, 1), (5, 3), (12, 7)):
        assert vc_poly_bound(2 * nv, deg) == 2.0 * vc_poly_bound(nv, deg)
    for d, r in ((3, 1), (10, 4), (64, 8)):
        assert vc_lowrank_bound(d, 2 * r) == 2.0 * vc_lowrank_bound(d, r)
    print("criterion 03: PASS (105 frozen values at 1e-12, identities exact)")


# ---------------------------------------------------------------------------
# Criterion 4: mean under placed outliers (robust in, empirical out)
# ---------------------------------------------------------------------------


def test_criterion_04_mean_survives_placed_outliers():
    t0 = time.perf_counter()
    n, d, k, eps, magnitude = 2000, 5, 400, 0.05, 1e6
    bound = 10.0 * math.sqrt(k / n)
    spec = GeneratorSpec(dim=d)
    hits = 0
    emp_min = math.inf
    for i in range(100):
        seed = 4000 + i
        adv = AdversarySpec(
            model="adversarial_shift",
            epsilon=eps,
            magnitude=magnitude,
            direction=_spike(d),
            seed=seed + ADV_SALT,
        )
        data = corrupt(generate(spec, n, seed=seed), adv)
        mu = data.truth.mean
        err = float(np.linalg.norm(mom_mean_euclidean(data, k, seed).estimate - mu))
        if err <= bound:
            hits += 1
        emp = float(np.linalg.norm(data.points.mean(axis=0) - mu))
        emp_min = min(emp_min, emp)
    elapsed = time.perf_counter() - t0
    assert hits >= 95, f"criterion 04: FAIL ({hits}/100 within {bound:.3f})"
    assert emp_min >= 1e4, f"criterion 04: FAIL (empirical mean err {emp_min:.3g} < 1e4)"
    assert elapsed < 120.0, f"criterion 04: FAIL (took {elapsed:.1f}s >= 120s)"
    print(
        f"criterion 04: PASS ({hits}/100 within {bound:.3f}; empirical mean "
        f"always off by >= {emp_min:.3g}; {elapsed:.1f}s)"
    )


# ---------------------------------------------------------------------------
# Criterion 5: heavy-tail quantile separation at n=1000, K=56, delta=1e-3
# ---------------------------------------------------------------------------


def test_criterion_05_heavy_tail_quantile_separation():
    t0 = time.perf_counter()
    reps, n, k, delta = 20000, 1000, 56, 1e-3
    spec = GeneratorSpec(dim=1, family="student_t", dof=2.5)
    mom_abs = np.empty(reps)
    emp_abs = np.empty(reps)
    for i in range(reps):
        seed = 500000 + i
        x = generate(spec, n, seed=seed).points[:, 0]
        mom_abs[i] = abs(mom_mean_1d(x, k, seed=seed))
        emp_abs[i] = abs(float(x.mean()))
    idx = math.ceil((1.0 - delta) * reps) - 1
    q_mom = float(np.sort(mom_abs)[idx])
    q_emp = float(np.sort(emp_abs)[idx])
    elapsed = time.perf_counter() - t0
    assert elapsed < 180.0, f"criterion 05: FAIL (took {elapsed:.1f}s >= 180s)"
    status = "PASS" if q_mom <= 0.5 * q_emp else "FAIL"
    print(
        f"criterion 05: {status} (MOM 0.999-quantile {q_mom:.6f}, empirical "
        f"{q_emp:.6f}, ratio {q_mom / q_emp:.3f}, required <= 0.5; {elapsed:.1f}s)"
    )
    assert q_mom <= 0.5 * q_emp, (
        f"criterion 05: FAIL - MOM 0.999-quantile {q_mom:.6f} is not half the "
        f"empirical mean's {q_emp:.6f} (ratio {q_mom / q_emp:.3f}). At n=1000 "
        f"with K=56 blocks the empirical mean's t(2.5) quantile at this "
        f"confidence is only ~1.4x the MOM quantile, so a factor-2 separation "
        f"is not attainable at these exact parameters."
    )


# ---------------------------------------------------------------------------
# Criterion 6: sparse mean error decays like n^(-1/2) at fixed K
# ---------------------------------------------------------------------------


def test_criterion_06_sparse_mean_rate():
    t0 = time.perf_counter()
    d, s, k = 200, 5, 32
    mu = np.zeros(d)
    mu[:s] = 3.0
    spec = GeneratorSpec(dim=d, mean=mu)
    sizes = [2000, 8000, 32000]
    medians = []
    for j, n in enumerate(sizes):
        losses = []
        for i in range(50):
            seed = 6000 + 50 * j + i
            est = mom_mean_sparse(generate(spec, n, seed=seed), k, s, seed).estimate
            support = np.flatnonzero(est)
            assert len(support) <= s, (
                f"criterion 06: FAIL (n={n}, rep {i}: {len(support)} nonzeros > s={s})"
            )
            assert set(support.tolist()) == set(range(s)), (
                f"criterion 06: FAIL (n={n}, rep {i}: support {support} is not "
                f"the planted one)"
            )
            losses.append(float(np.linalg.norm(est - mu)))
        medians.append(float(np.median(losses)))
    slope = float(np.polyfit(np.log(sizes), np.log(medians), 1)[0])
    elapsed = time.perf_counter() - t0
    assert -0.65 <= slope <= -0.35, (
        f"criterion 06: FAIL (log-log slope {slope:.3f} outside [-0.65, -0.35])"
    )
    assert elapsed < 180.0, f"criterion 06: FAIL (took {elapsed:.1f}s >= 180s)"
    print(
        f"criterion 06: PASS (median losses {[f'{m:.4f}' for m in medians]}, "
        f"slope {slope:.3f}; {elapsed:.1f}s)"
    )


# ---------------------------------------------------------------------------
# Criterion 7: regression under response poisoning and heavy-tailed noise
# ---------------------------------------------------------------------------


def test_criterion_07_regression_survives_response_poisoning():
    t0 = time.perf_counter()
    n, d, k, eps = 5000, 10, 1000, 0.05
    beta = np.zeros(d)
    beta[:3] = [2.0, -1.0, 1.5]
    spec = GeneratorSpec(dim=d)
    noise = NoiseSpec(family="student_t", dof=2.5, scale=1.0)
    sigma = spec.covariance.matrix_for(d)
    mom_losses = []
    ols_losses = []
    for i in range(50):
        seed = 7000 + i
        data = regression_generate(spec, beta, noise, n, seed=seed)
        adv = AdversarySpec(
            model="adversarial_shift",
            epsilon=eps,
            magnitude=1e6,
            target="responses",
            seed=seed + ADV_SALT,
        )
        data = corrupt(data, adv)
        # K=1000 blocks exceed the small-ball budget n*gamma^2/64 here; the
        # estimator flags that (and only that) with a RuntimeWarning.
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            problem = RegressionProblem(
                data, gamma=float(data.meta["gamma"]), weak_variance=1.0
            )
            delta = mom_regression(problem, k, seed).estimate - beta
        mom_losses.append(float(delta @ sigma @ delta))
        coef, *_ = np.linalg.lstsq(data.points, data.responses, rcond=None)
        dols = coef - beta
        ols_losses.append(float(dols @ sigma @ dols))
    mom_med = float(np.median(mom_losses))
    ols_med = float(np.median(ols_losses))
    elapsed = time.perf_counter() - t0
    assert mom_med <= 1.0, f"criterion 07: FAIL (MOM median risk {mom_med:.3g} > 1)"
    assert ols_med >= 100.0, f"criterion 07: FAIL (OLS median risk {ols_med:.3g} < 100)"
    assert elapsed < 180.0, f"criterion 07: FAIL (took {elapsed:.1f}s >= 180s)"
    print(
        f"criterion 07: PASS (MOM median quadratic risk {mom_med:.2e}, OLS "
        f"{ols_med:.2e}; {elapsed:.1f}s)"
    )


# ---------------------------------------------------------------------------
# Criterion 8: covariance - K=1 closed form, and outlier resistance
# ---------------------------------------------------------------------------


def test_criterion_08_covariance_closed_form_and_outliers():
    # (a) With a single block the spectral estimator IS the second moment.
    worst = 0.0
    for i in range(100):
        rng = np.random.default_rng(8000 + i)
        n = int(rng.integers(4, 60))
        d = int(rng.integers(1, 9))
        pts = rng.standard_normal((n, d))
        if i % 2:
            pts *= rng.uniform(0.1, 10.0)
        est = mom_cov_spectral(pts, 1, seed=i).estimate
        expected = block_second_moments(pts, partition_blocks(n, 1, seed=i))[0]
        worst = max(worst, float(np.max(np.abs(est - expected))))
    assert worst <= 1e-9, f"criterion 08: FAIL (K=1 gap {worst:.3e} > 1e-9)"

    # (b) Placed outliers at 1e3 * e1 wreck the sample covariance only.
    t0 = time.perf_counter()
    n, d, k, eps = 5000, 5, 400, 0.05
    spec = GeneratorSpec(dim=d)
    sigma = np.eye(d)
    hits = 0
    sample_min = math.inf
    for i in range(50):
        seed = 22000 + i
        adv = AdversarySpec(
            model="adversarial_shift",
            epsilon=eps,
            magnitude=1e3,
            direction=_spike(d),
            seed=seed + ADV_SALT,
        )
        data = corrupt(generate(spec, n, seed=seed), adv)
        diff = mom_cov_spectral(data, k, seed).estimate - sigma
        err = float(np.max(np.abs(np.linalg.eigvalsh((diff + diff.T) / 2.0))))
        if err <= 1.0:
            hits += 1
        pts = data.points
        samp = pts.T @ pts / n - sigma
        sample_min = min(
            sample_min, float(np.max(np.abs(np.linalg.eigvalsh(samp))))
        )
    elapsed = time.perf_counter() - t0
    assert hits >= 45, f"criterion 08: FAIL ({hits}/50 spectral errors within 1.0)"
    assert sample_min >= 1e3, (
        f"criterion 08: FAIL (sample covariance err {sample_min:.3g} < 1e3)"
    )
    print(
        f"criterion 08: PASS (K=1 exact to {worst:.1e}; {hits}/50 robust fits "
        f"within 1.0; sample covariance always off by >= {sample_min:.3g}; "
        f"{elapsed:.1f}s)"
    )


# ---------------------------------------------------------------------------
# Criterion 9: low-rank covariance recovery within 4x the deviation radius
# ---------------------------------------------------------------------------


def test_criterion_09_lowrank_covariance_recovery():
    t0 = time.perf_counter()
    n, d, k, r = 10000, 30, 64, 1
    spec = GeneratorSpec(
        dim=d, covariance=CovarianceSpec(kind="spiked", lambda1=1.0, decay=0.0)
    )
    sigma = spec.covariance.matrix_for(d)
    sheet = risk_radius("cov_lowrank", sigma=cov_weak_sigma(spec), d=d, r=r, k=k, n=n)
    assert sheet.risk_radius == pytest.approx(
        8.0 * math.sqrt(2.0) * math.sqrt(k / n), rel=1e-12
    )
    bound = 4.0 * sheet.risk_radius
    hits = 0
    for i in range(50):
        seed = 40000 + i
        est = mom_cov_lowrank(generate(spec, n, seed=seed), k, r, seed).estimate
        if float(np.linalg.norm(est - sigma)) <= bound:
            hits += 1
        w = np.linalg.eigvalsh(est)
        rank = int(np.sum(w > 1e-10 * max(float(w.max()), 1e-300)))
        assert rank <= r, f"criterion 09: FAIL (rep {i}: rank {rank} > {r})"
    elapsed = time.perf_counter() - t0
    assert hits >= 45, (
        f"criterion 09: FAIL ({hits}/50 within 4x radius = {bound:.4f})"
    )
    print(
        f"criterion 09: PASS ({hits}/50 within {bound:.4f}, rank always <= {r}; "
        f"{elapsed:.1f}s)"
    )


# ---------------------------------------------------------------------------
# Criterion 10: band splitting beats the flat sparse estimator on a spike
# ---------------------------------------------------------------------------


def test_criterion_10_band_split_beats_flat_on_spiked_covariance():
    t0 = time.perf_counter()
    n, d, k, s = 10000, 50, 64, 1
    cov = CovarianceSpec(kind="spiked", lambda1=1.0, decay=2.0**-10)
    mu = np.zeros(d)
    mu[0] = 1.0
    mu[1] = 1.0
    spec = GeneratorSpec(dim=d, mean=mu, covariance=cov)
    sigma = cov.matrix_for(d)
    grouping = spectral_grouping(sigma)
    split_losses = []
    flat_losses = []
    pyth_worst = 0.0
    for i in range(50):
        seed = 10000 + i
        data = generate(spec, n, seed=seed)
        split = split_estimate(data, sigma, k=k, s=s, seed=seed)
        flat = mom_mean_sparse(data, k, s, seed)
        split_losses.append(float(np.linalg.norm(split.estimate - mu)))
        flat_losses.append(float(np.linalg.norm(flat.estimate - mu)))
        err = split.estimate - mu
        band_sq = sum(
            float(((err @ grouping.vectors[b.start : b.stop].T) ** 2).sum())
            for b in grouping.bands
        )
        pyth_worst = max(pyth_worst, abs(float(err @ err) - band_sq))
        if i == 0:
            bands = [
                (b["ladder_index"], b["dim"], b["k_band"], b["branch"])
                for b in split.details["bands"]
            ]
            assert bands == [(1, 1, 64, "dense"), (5, 49, 1024, "sparse")], (
                f"criterion 10: FAIL (band layout {bands})"
            )
    split_med = float(np.median(split_losses))
    flat_med = float(np.median(flat_losses))
    elapsed = time.perf_counter() - t0
    assert pyth_worst <= 1e-10, (
        f"criterion 10: FAIL (orthogonal recombination off by {pyth_worst:.2e})"
    )
    assert split_med <= flat_med, (
        f"criterion 10: FAIL (split median {split_med:.4f} > flat {flat_med:.4f})"
    )
    assert elapsed < 180.0, f"criterion 10: FAIL (took {elapsed:.1f}s >= 180s)"
    print(
        f"criterion 10: PASS (split median {split_med:.4f} vs flat {flat_med:.4f} "
        f"over 50 paired runs, recombination exact to {pyth_worst:.1e}; "
        f"{elapsed:.1f}s)"
    )


# ---------------------------------------------------------------------------
# Criterion 11: pinned demo reruns byte-identically and echoes the calculus
# ---------------------------------------------------------------------------


def test_criterion_11_demo_artifacts_reproducible(tmp_path, capsys):
    out1 = tmp_path / "one"
    out2 = tmp_path / "two"
    out1.mkdir()
    out2.mkdir()
    assert cli_main(["demo", "heavy-tail-1d", "--outdir", str(out1)]) == 0
    assert cli_main(["demo", "heavy-tail-1d", "--outdir", str(out2)]) == 0
    capsys.readouterr()

    csv1 = (out1 / "demo_heavy-tail-1d.csv").read_bytes()
    csv2 = (out2 / "demo_heavy-tail-1d.csv").read_bytes()
    assert csv1 == csv2, "criterion 11: FAIL (CSV bytes differ between reruns)"
    assert (out1 / "demo_heavy-tail-1d.svg").exists()

    lines = csv1.decode().splitlines()
    header = lines[0].split(",")
    r_col = header.index("theoretical_radius")
    k_col = header.index("k")
    n_col = header.index("n")
    assert len(lines) == 1 + 2 * 2  # 2 estimators x 2 deltas
    for row in lines[1:]:
        fields = row.split(",")
        sheet = risk_radius(
            "mean_any_norm",
            sigma_half_norm=1.0,
            d=1,
            k=int(fields[k_col]),
            n=int(fields[n_col]),
        )
        assert float(fields[r_col]) == sheet.risk_radius, (
            f"criterion 11: FAIL (radius column {fields[r_col]} != recomputed "
            f"{sheet.risk_radius!r})"
        )
    print(
        "criterion 11: PASS (demo rerun byte-identical; radius column "
        "round-trips through the bound calculus exactly)"
    )
