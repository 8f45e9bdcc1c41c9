import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlqsp import qsp
from mlqsp.errors import InvalidArgumentError, PreconditionError, SolverError
from mlqsp.filters import FilterPolynomial, eval_filter
from mlqsp.qsp import PhaseFactorSet

from oracles import qetu_g, qsp_product

GOLDEN_ERR = 0.01333

angles = st.floats(-math.pi, math.pi, allow_nan=False)


def symmetric_sets(max_half=8):
    return st.lists(angles, min_size=1, max_size=max_half).map(
        lambda half: PhaseFactorSet(np.concatenate([half, half[-2::-1]]), "qetu"))


def test_golden_table_entries():
    g = qsp.golden_phase_table()
    assert g.phases.size == 21
    assert g.phases[10] == 0.7862644
    assert g.phases[0] == g.phases[20] == 1.5641113
    assert g.phases[9] == g.phases[11] == 1.1064466
    assert np.array_equal(qsp.load_golden_fixture().phases, g.phases)


def test_convert_examples():
    g = qsp.golden_phase_table()
    q = qsp.convert_phases(g, "to_qsp")
    assert q.phases[0] == pytest.approx(1.5641113 - math.pi / 4, abs=1e-15)
    flat = PhaseFactorSet([1.0] + [math.pi / 2] * 3 + [1.0], "qetu")
    assert np.allclose(flat.qsp_phases[1:-1], 0.0, atol=1e-15)
    back = qsp.convert_phases(q, "to_qetu")
    assert np.max(np.abs(back.phases - g.phases)) <= 1e-15
    with pytest.raises(InvalidArgumentError):
        qsp.convert_phases(g, "sideways")


@given(symmetric_sets())
def test_conversion_involution(ps):
    twice = qsp.convert_phases(qsp.convert_phases(ps))
    assert twice.convention == ps.convention
    assert np.allclose(twice.phases, ps.phases, atol=1e-14)


def test_phase_set_validation():
    with pytest.raises(InvalidArgumentError):
        PhaseFactorSet([0.1, 0.2])
    with pytest.raises(InvalidArgumentError):
        PhaseFactorSet([0.1, 0.2, 0.3])


def test_unitary_examples():
    # no X factors: the upper-left entry is e^{iϕ0}, constant in x
    for x in (-0.7, 0.0, 0.4):
        u = qsp.qsp_unitary([0.3], x)
        assert u[0, 0] == pytest.approx(np.exp(0.3j), abs=1e-15)
    ph = [0.2, -0.5, 0.9, -0.5, 0.2]
    assert qsp.qsp_unitary(ph, 1.0)[0, 0].real == pytest.approx(math.cos(sum(ph)), abs=1e-14)
    with pytest.raises(InvalidArgumentError):
        qsp.qsp_unitary(ph, 1.2)


def test_unitary_matches_oracle():
    rng = np.random.default_rng(11)
    for _ in range(200):
        ph = rng.uniform(-math.pi, math.pi, rng.integers(1, 12))
        x = rng.uniform(-1, 1)
        assert np.allclose(qsp.qsp_unitary(ph, x), qsp_product(ph, x), atol=1e-13)


@given(st.lists(angles, min_size=1, max_size=25), st.floats(-1, 1))
def test_unitarity(ph, x):
    u = qsp.qsp_unitary(ph, x)
    assert np.max(np.abs(u.conj().T @ u - np.eye(2))) <= 1e-12


@given(symmetric_sets(), st.floats(0, 1))
def test_parity_and_row_identity(ps, x):
    g_pos = qsp.qsp_poly_values(ps.qsp_phases, [x])[0]
    g_neg = qsp.qsp_poly_values(ps.qsp_phases, [-x])[0]
    assert g_pos == pytest.approx(g_neg, abs=1e-12)
    resp = qsp.qetu_response(ps, 2.0, 2 * math.acos(x) / 2.0)
    assert abs(resp.row_norm() - 1) <= 1e-10


def test_batched_first_row_matches_single():
    ps = qsp.golden_phase_table()
    xs = np.linspace(-1, 1, 7)
    a, _ = qsp.qsp_first_row(ps.qsp_phases, xs)
    single = [qsp.qsp_unitary(ps.qsp_phases, x)[0, 0] for x in xs]
    assert np.allclose(a, single, atol=1e-14)


def test_golden_response_examples():
    g = qsp.golden_phase_table()
    assert abs(qsp.qetu_response(g, 1.0, 0.0).g_val - 1) <= GOLDEN_ERR
    lam = 3.0
    t = 2 * math.acos(0.5) / lam
    assert abs(qsp.qetu_response(g, t, lam).g_val) <= GOLDEN_ERR
    w = qsp.qsp_unitary(g.qsp_phases, math.cos(math.pi / 16))
    assert abs(w[0, 0].real - 1) <= GOLDEN_ERR


def test_golden_conformance():
    g = qsp.induced_polynomial(qsp.golden_phase_table())
    xp = np.linspace(math.cos(math.pi / 8), 1, 10_000)
    xs = np.linspace(0, math.cos(math.pi / 4), 10_000)
    e_pass = np.max(np.abs(eval_filter(g, xp) - 1))
    e_stop = np.max(np.abs(eval_filter(g, xs)))
    assert max(e_pass, e_stop) <= GOLDEN_ERR + 5e-4
    assert 0.0128 <= max(e_pass, e_stop) <= 0.0139


def test_qetu_response_matches_circuit():
    rng = np.random.default_rng(5)
    for _ in range(100):
        half = rng.uniform(-math.pi, math.pi, 11)
        ps = PhaseFactorSet(np.concatenate([half, half[-2::-1]]), "qetu")
        t, lam = rng.uniform(0.01, 2), rng.uniform(0, 20)
        assert qsp.qetu_response(ps, t, lam).g_val == pytest.approx(qetu_g(ps.qetu_phases, t, lam), abs=1e-12)


def test_solver_t2():
    target = FilterPolynomial([0.0, 1.0])
    ps = qsp.solve_symmetric_phase_factors(target, tol=1e-10)
    nodes = qsp.chebyshev_nodes(1)
    vals = [qsp.qsp_unitary(ps.qsp_phases, x)[0, 0].real for x in nodes]
    assert np.allclose(vals, 2 * nodes**2 - 1, atol=1e-10)


def test_solver_recovers_golden_polynomial():
    target = qsp.induced_polynomial(qsp.golden_phase_table())
    ps = qsp.solve_symmetric_phase_factors(target, tol=1e-10)
    assert ps.degree == 20
    nodes = qsp.chebyshev_nodes(10)
    got = qsp.qsp_poly_values(ps.qsp_phases, nodes)
    assert np.max(np.abs(got - eval_filter(target, nodes))) <= 1e-8
    assert ps.residual <= 1e-8


def test_solver_degree_zero():
    ps = qsp.solve_symmetric_phase_factors(FilterPolynomial([math.cos(0.4)]))
    assert qsp.qsp_unitary(ps.qsp_phases, 0.3)[0, 0].real == pytest.approx(math.cos(0.4), abs=1e-15)


def test_solver_rejects_unbounded_target():
    with pytest.raises(PreconditionError):
        qsp.solve_symmetric_phase_factors(FilterPolynomial([1.5]))
    with pytest.raises(PreconditionError):
        qsp.solve_symmetric_phase_factors(FilterPolynomial([0.0, 1.2]))


def test_solver_failure_carries_diagnostics():
    target = qsp.induced_polynomial(qsp.golden_phase_table())
    with pytest.raises(SolverError) as info:
        qsp.solve_symmetric_phase_factors(target, tol=1e-14, max_iter=1)
    assert info.value.best_residual > 0


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_solver_soundness(seed):
    from mlqsp import filters
    eps = float(np.random.default_rng(seed).choice([2e-2, 1e-2, 5e-3]))
    target = filters.build_level_filter(eps)
    ps = qsp.solve_symmetric_phase_factors(target, tol=1e-10)
    rng = np.random.default_rng(seed + 1)
    xp = rng.uniform(math.cos(math.pi / 8), 1, 500)
    xs = rng.uniform(0, math.cos(math.pi / 4), 500)
    gp = qsp.qsp_poly_values(ps.qsp_phases, xp)
    gs = qsp.qsp_poly_values(ps.qsp_phases, xs)
    slack = target.eps_prime + 1e-8
    assert np.max(np.abs(gp - 1)) <= slack
    assert np.max(np.abs(gs)) <= slack


def test_phase_json_round_trip(tmp_path):
    ps = qsp.golden_phase_table()
    path = tmp_path / "p.json"
    path.write_text(json.dumps(ps.to_json()))
    back = PhaseFactorSet.from_json(json.loads(path.read_text()))
    assert np.array_equal(back.phases, ps.phases)
