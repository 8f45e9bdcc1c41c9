"""Acceptance checks, one test per criterion; a pass/fail summary prints at the end of the run."""

import math
import time

import numpy as np
import pytest

from mlqsp import cost, filters, pipeline, qsp
from mlqsp.spectral import FastForwardModel, InitialState, SpectralHamiltonian, equally_spaced

from oracles import band_errors_grid, qetu_g


def _r_squared(x, y):
    a = np.vstack([np.ones_like(x), x]).T
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    resid = y - a @ coef
    return 1 - resid @ resid / np.sum((y - y.mean()) ** 2)


@pytest.mark.acceptance(1, "golden-table L-inf error equals 0.01333 +- 5e-4")
def test_golden_table_error(detail):
    start = time.perf_counter()
    table = qsp.golden_phase_table()
    g = qsp.induced_polynomial(table)
    xp = np.linspace(math.cos(math.pi / 8), 1.0, 10_000)
    xs = np.linspace(0.0, math.cos(math.pi / 4), 10_000)
    err = max(np.max(np.abs(g(xp) - 1)), np.max(np.abs(g(xs))))
    elapsed = time.perf_counter() - start
    detail(f"error={err:.6f}, {elapsed:.3f}s")
    assert abs(err - 0.01333) <= 5e-4
    assert elapsed < 1.0


def test_golden_table_error_direct_circuit():
    # second route: the explicit QETU circuit product at x = cos(tλ/2) with t = 2
    phases = qsp.golden_phase_table().qetu_phases
    func = lambda x: qetu_g(phases, 2.0, math.acos(x))
    e_pass, e_stop = band_errors_grid(func, n=2_000)
    assert abs(max(e_pass, e_stop) - 0.01333) <= 5e-4


@pytest.mark.acceptance(2, "QETU response matches the direct circuit product on 1000 random cases")
def test_qetu_identity(detail):
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst_g = worst_u = 0.0
    for _ in range(1000):
        half = rng.uniform(-math.pi, math.pi, rng.integers(1, 16))
        phases = qsp.PhaseFactorSet(np.concatenate([half, half[-2::-1]]), "qetu")
        t, lam = rng.uniform(0.01, 2.0), rng.uniform(0.0, 20.0)
        resp = qsp.qetu_response(phases, t, lam)
        worst_g = max(worst_g, abs(resp.g_val - qetu_g(phases.qetu_phases, t, lam)))
        u = qsp.qsp_unitary(phases.qsp_phases, resp.x)
        worst_u = max(worst_u, np.max(np.abs(u.conj().T @ u - np.eye(2))))
    elapsed = time.perf_counter() - start
    detail(f"max |dg|={worst_g:.2e}, max unitarity defect={worst_u:.2e}, {elapsed:.2f}s")
    assert worst_g <= 1e-10
    assert worst_u <= 1e-12
    assert elapsed < 5.0


@pytest.mark.acceptance(3, "multi-level end-to-end on 21 equally spaced levels, ||H||=20")
def test_multilevel_end_to_end(detail):
    start = time.perf_counter()
    h = equally_spaced(21, 20.0)
    init = InitialState.uniform(21)
    gamma, eps = init.overlap, 1e-2
    flt = pipeline.build_multilevel_filters(h, gamma, eps)
    report = pipeline.run_multilevel_measured(h, init, flt, FastForwardModel(), eps)
    prod = np.prod([filters.eval_filter(flt.level, math.cos(h.eigenvalues[0] * t / 2)) for t in flt.times])
    bound = (1 + flt.eps_prime) ** flt.levels - 1
    elapsed = time.perf_counter() - start
    detail(f"fidelity={report.fidelity:.8f}, overlap={report.ground_overlap:.4f} vs γ/2={gamma / 2:.4f}, "
           f"{elapsed:.2f}s")
    assert report.fidelity >= 0.99
    assert report.ground_overlap >= gamma / 2
    assert abs(1 - prod) <= bound
    assert elapsed < 30


def test_multilevel_end_to_end_product_oracle():
    # per-eigenvalue product of scalar filter values, independent of the pipeline
    h = equally_spaced(21, 20.0)
    init = InitialState.uniform(21)
    flt = pipeline.build_multilevel_filters(h, init.overlap, 1e-2)
    report = pipeline.run_multilevel_measured(h, init, flt, FastForwardModel(), 1e-2)
    expected = []
    for lam in h.eigenvalues:
        v = 1.0
        for ell in range(1, flt.levels + 1):
            v *= qetu_g(flt.level_phases.qetu_phases, 1.0, 2 ** ell * lam / 20.0)
        v *= qetu_g(flt.cleanup_phases.qetu_phases, 1.0, lam)
        expected.append(v / math.sqrt(21))
    assert np.allclose(report.final_state.amplitudes, expected, atol=1e-12)


def _scaling_runs():
    model = FastForwardModel(tau=1e6)
    norms = [8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0]
    multi, std = [], []
    for hn in norms:
        lam = np.concatenate([[0.0], np.linspace(1.0, hn, 32)])
        h = SpectralHamiltonian(lam, 0.5, 1.0)
        init = InitialState.with_overlap(h.dim, 0.2)
        multi.append(pipeline.run_multilevel_measured(h, init, None, model, 1e-2).ledger.oracle_queries)
        std.append(pipeline.run_standard_qsp(h, init, 1e-2, model).ledger.oracle_queries)
    return np.array(norms), np.array(multi, float), np.array(std, float)


@pytest.mark.acceptance(4, "query scaling: multi-level ~ log||H||, standard ~ ||H||, ratio > 20 at 1024")
def test_query_scaling(detail):
    start = time.perf_counter()
    norms, multi, std = _scaling_runs()
    r2_multi = _r_squared(np.log2(norms), multi)
    r2_std = _r_squared(norms, std)
    ratio = std[-1] / multi[-1]
    elapsed = time.perf_counter() - start
    detail(f"R²(log)={r2_multi:.5f}, R²(linear)={r2_std:.6f}, ratio@1024={ratio:.1f}, {elapsed:.1f}s")
    assert r2_multi >= 0.99
    assert r2_std >= 0.99
    assert ratio > 20
    assert elapsed < 300


@pytest.mark.acceptance(5, "Fourier step filter meets band conditions; two evaluation routes agree; 1-norm ~ log d")
def test_lcu_filter(detail):
    eps = 1e-2
    for hn, gap in [(20.0, 1.0), (40.0, 1.0), (40.0, 2.0)]:
        mu = 2.0
        f = filters.build_heaviside_fourier(hn, mu, gap, eps)
        xp = np.linspace(0.0, mu - gap / 2, 10_000)
        xs = np.linspace(mu + gap / 2, hn, 10_000)
        xa = np.linspace(0.0, hn, 10_000)
        assert np.max(np.abs(f(xp) - 1)) <= eps
        assert np.max(np.abs(f(xs))) <= eps
        assert np.max(np.abs(f(xa))) <= 1 + eps
        lam = np.linspace(0.0, hn, 41)
        summed = filters.fourier_state_sum(f, lam, np.ones_like(lam))
        assert np.max(np.abs(summed - f(lam))) <= 1e-10
    ratios = []
    for e in (1e-2, 1e-3, 1e-4):
        f = filters.build_heaviside_fourier(20.0, 2.0, 1.0, e)
        ratios.append(f.one_norm / math.log2(f.degree))
    spread = max(ratios) / min(ratios)
    detail(f"||c||_1/log2(d) = {', '.join(f'{r:.3f}' for r in ratios)}, spread {spread:.2f}")
    assert spread <= 3


@pytest.mark.acceptance(6, "compression gadget: counter 0 iff all stages succeed; matches measured state")
def test_compression_gadget(detail):
    start = time.perf_counter()
    checked = 0
    for hn, levels in [(4.0, 1), (8.0, 2), (16.0, 3), (20.0, 4)]:
        lam = np.concatenate([[0.0], np.linspace(1.0, hn, 8)])
        h = SpectralHamiltonian(lam, 0.5, 1.0)
        init = InitialState.with_overlap(h.dim, 0.5)
        flt = pipeline.build_multilevel_filters(h, init.overlap, 1e-2)
        assert flt.levels == levels
        n_stage = levels + 1
        for pattern, occupied in pipeline.enumerate_counter_patterns(h, init, flt):
            successes = sum(pattern)
            assert set(occupied) <= {n_stage - successes}
            assert (0 in occupied) == (successes == n_stage)
            checked += 1
        coh = pipeline.run_multilevel_coherent(h, init, flt)
        meas = pipeline.run_multilevel_measured(h, init, flt)
        assert coh.counter.width == math.ceil(math.log2(levels + 2))
        assert np.max(np.abs(coh.final_state.amplitudes - meas.final_state.amplitudes)) <= 1e-10
    elapsed = time.perf_counter() - start
    detail(f"{checked} patterns, {elapsed:.2f}s")
    assert elapsed < 10


@pytest.mark.acceptance(7, "error propagation: deviation <= q·δ over 100 seeded runs")
def test_error_propagation(detail):
    h = equally_spaced(21, 20.0)
    init = InitialState.uniform(21)
    run = pipeline.PipelineRun("multilevel", h, init, FastForwardModel(tau=0.1), 1e-2)
    worst = 0.0
    q = None
    for seed in range(100):
        report, dev = pipeline.inject_oracle_error(run, 1e-6, seed)
        q = report.ledger.oracle_queries
        assert dev <= q * 1e-6
        worst = max(worst, dev / (q * 1e-6))
    detail(f"q={q}, worst deviation/(qδ)={worst:.3e}")
    assert 400 <= q <= 700


@pytest.mark.acceptance(8, "cost-model limits: α→0 within 1%, τ-independence for τ >= 1")
def test_cost_limits(detail):
    base = dict(H_norm=64.0, gap=1.0, gamma=0.2, eps=1e-2)
    a0 = cost.estimate("multilevel", "alpha_soft", alpha=0.0, **base)
    a1 = cost.estimate("multilevel", "alpha_soft", alpha=1e-6, **base)
    rel = abs(a1.gate_units - a0.gate_units) / a0.gate_units
    taus = [cost.estimate("multilevel", "tau_cutoff", tau=t, **base) for t in (1.0, 2.0, 10.0)]
    detail(f"α relative change {rel:.2e}")
    assert rel <= 0.01
    assert all(t == taus[0] for t in taus)
