import numpy as np
import pytest

from baselines import mrt_beam, solve_mrt_optimal_phi, solve_optimal_w_fixed_phi
from channel import SystemParams, sample_channels
from conftest import basis_vector, make_channel, unit
from errors import DomainError
from optimizer import SolveStatus, alternating_optimize
from srmodel import build_an_precoder


@pytest.fixture
def orthogonal_instance():
    params = SystemParams(nt=4, ne=1)
    rng = np.random.default_rng(0)
    ch = make_channel(basis_vector(4, 0), basis_vector(4, 1), rng.standard_normal((1, 4)))
    return ch, build_an_precoder(ch), params


class TestMrt:
    def test_beam_is_h2_direction(self, orthogonal_instance):
        ch, _, _ = orthogonal_instance
        np.testing.assert_array_equal(mrt_beam(ch), basis_vector(4, 1))

    def test_beam_orthogonal_to_primary_is_infeasible(self, orthogonal_instance):
        ch, an, params = orthogonal_instance
        sol = solve_mrt_optimal_phi(ch, an, params)
        assert sol.status == SolveStatus.INFEASIBLE
        assert sol.trace[0].gamma_s == 0.0

    def test_feasible_solution_fields(self, default_params):
        params = default_params.with_value('gamma_s_th_db', -np.inf)
        ch = sample_channels(params, 0)
        sol = solve_mrt_optimal_phi(ch, build_an_precoder(ch), params)
        assert sol.status == SolveStatus.CONVERGED
        assert np.isnan(sol.lambda_opt)
        assert 0.0 < sol.phi_opt < 1.0
        assert sol.r_sec == pytest.approx(sol.breakdown['r_sec'])


class TestFixedPhi:
    def test_infeasible_threshold(self, default_params):
        params = default_params.with_value('gamma_s_th_db', 80.0)
        ch = sample_channels(params, 0)
        sol = solve_optimal_w_fixed_phi(ch, build_an_precoder(ch), params)
        assert sol.status == SolveStatus.INFEASIBLE

    def test_phi_domain(self, default_instance):
        ch, an, params = default_instance
        with pytest.raises(DomainError):
            solve_optimal_w_fixed_phi(ch, an, params, phi_fixed=1.0)

    def test_same_phi_as_proposed_gives_same_rate(self, default_params):
        for k in range(5):
            ch = sample_channels(default_params, k)
            an = build_an_precoder(ch)
            proposed = alternating_optimize(ch, default_params, an=an)
            if not proposed.feasible:
                continue
            fixed = solve_optimal_w_fixed_phi(ch, an, default_params, proposed.phi_opt)
            assert fixed.r_sec == pytest.approx(proposed.r_sec, abs=1e-10)


class TestDominance:
    def test_proposed_beats_fixed_phi_per_trial(self, default_params):
        for k in range(30):
            ch = sample_channels(default_params, k)
            an = build_an_precoder(ch)
            proposed = alternating_optimize(ch, default_params, an=an)
            fixed = solve_optimal_w_fixed_phi(ch, an, default_params, 0.5)
            if proposed.feasible and fixed.feasible:
                assert proposed.r_sec >= fixed.r_sec - 1e-12

    def test_proposed_beats_mrt_on_average(self, default_params):
        params = default_params.with_value('gamma_s_th_db', -np.inf)
        proposed, mrt = [], []
        for k in range(200):
            ch = sample_channels(params, k)
            an = build_an_precoder(ch)
            a = alternating_optimize(ch, params, an=an)
            b = solve_mrt_optimal_phi(ch, an, params)
            if a.feasible and b.feasible:
                proposed.append(a.r_sec)
                mrt.append(b.r_sec)
        assert proposed
        assert np.mean(proposed) >= np.mean(mrt)


def test_mrt_without_positive_rate_meets_qos():
    # eavesdropper gain dominates the MRT beam, so phi only has to satisfy QoS
    params = SystemParams(nt=4, ne=1, p_dbm=20.0, gamma_s_th_db=0.0)
    h2 = unit(basis_vector(4, 0) + basis_vector(4, 1))
    ch = make_channel(basis_vector(4, 0), h2, np.ones((1, 4)), g2=100.0)
    sol = solve_mrt_optimal_phi(ch, build_an_precoder(ch), params)
    assert sol.status == SolveStatus.CONVERGED
    assert sol.r_sec == 0.0
    assert sol.phi_opt == pytest.approx(0.05, rel=1e-6)
    assert sol.gamma_s >= params.gamma_s_th
