import numpy as np
import pytest

from channel import SystemParams, sample_channels
from conftest import unit
from errors import ConfigurationError
from optimizer import (
    alternating_optimize, closed_form_phi, optimal_phi, phi_objective, w_step,
    w_unconstrained_secrecy,
)
from srmodel import build_an_precoder, power_split, secrecy_rate
from validation import (
    OracleConfig, grid_search_phi, grid_search_phi_ab, joint_search, phi_grid,
    random_unit_vectors, sample_search_w, span_grid,
)


class TestOracleConfig:
    @pytest.mark.parametrize('kwargs', [
        dict(phi_grid_step=0.0),
        dict(phi_grid_step=0.05),
        dict(sphere_samples=999),
        dict(subspace_grid=1),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigurationError):
            OracleConfig(**kwargs)

    def test_phi_grid_interior(self):
        grid = phi_grid(1e-3)
        assert grid.size == 999
        assert grid[0] == pytest.approx(1e-3)
        assert grid[-1] == pytest.approx(0.999)


class TestPhiOracle:
    def test_closed_form_example(self):
        phi, r = grid_search_phi_ab(3.0, 0.3, 1e-5)
        assert phi == pytest.approx(0.55963, abs=1e-5)
        assert r > 0.0

    def test_no_positive_rate(self):
        _, r = grid_search_phi_ab(2.0, 2.0, 1e-3)
        assert r == 0.0

    def test_agrees_with_closed_form_on_channels(self, default_params):
        cfg = OracleConfig(phi_grid_step=1e-4)
        checked = 0
        for k in range(20):
            ch = sample_channels(default_params, k)
            an = build_an_precoder(ch)
            w = unit(ch.h2 + ch.h1)
            choice = optimal_phi(w, ch, an, default_params)
            if not choice.positive_rate:
                continue
            phi_star, r_star = grid_search_phi(w, ch, an, default_params, cfg)
            r_closed = secrecy_rate(w, power_split(choice.phi, default_params), ch, an,
                                    default_params)
            assert abs(phi_star - choice.phi) <= 2 * cfg.phi_grid_step
            assert r_closed >= r_star - 1e-9
            checked += 1
        assert checked > 0

    def test_closed_form_never_below_grid(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            b = 10 ** rng.uniform(-2, 2)
            a = b * 10 ** rng.uniform(0.01, 1)
            _, r_grid = grid_search_phi_ab(a, b, 1e-4)
            assert phi_objective(closed_form_phi(a, b).phi, a, b) >= r_grid - 1e-9


class TestBeamOracle:
    def test_span_grid_unit_columns(self, default_instance):
        ch, an, params = default_instance
        w_e2 = w_unconstrained_secrecy(0.5, ch, an, params)
        beams = span_grid(unit(ch.h1), w_e2, 10)
        assert beams.shape == (10, 100)
        np.testing.assert_allclose(np.linalg.norm(beams, axis=0), 1.0, atol=1e-12)

    def test_span_grid_parallel_beams(self):
        w = unit(np.arange(1, 5) + 0j)
        assert span_grid(w, 2j * w, 10).shape == (4, 1)

    def test_single_candidate(self, default_instance):
        ch, an, params = default_instance
        w_e2 = w_unconstrained_secrecy(0.5, ch, an, params)
        w, r = sample_search_w(0.5, ch, an, params, OracleConfig(), constrained=False,
                               candidates=w_e2)
        np.testing.assert_array_equal(w, w_e2)
        assert r == pytest.approx(secrecy_rate(w_e2, power_split(0.5, params), ch, an, params))

    def test_unconstrained_samples_never_beat_secrecy_beam(self, small_params):
        cfg = OracleConfig()
        for k in range(10):
            ch = sample_channels(small_params, k)
            an = build_an_precoder(ch)
            w_e2 = w_unconstrained_secrecy(0.5, ch, an, small_params)
            _, r = sample_search_w(0.5, ch, an, small_params, cfg, constrained=False)
            r_e2 = secrecy_rate(w_e2, power_split(0.5, small_params), ch, an, small_params)
            assert r <= r_e2 + 1e-9

    def test_constrained_samples_never_beat_w_step(self, small_params):
        params = small_params.with_value('d', 20_000)
        cfg = OracleConfig()
        for k in range(5):
            ch = sample_channels(params, k)
            an = build_an_precoder(ch)
            w, _, r, _, feasible, _ = w_step(0.5, ch, an, params)
            if not feasible:
                continue
            _, r_oracle = sample_search_w(0.5, ch, an, params, cfg)
            assert r_oracle <= r + 1e-3

    def test_infeasible_candidates(self, default_instance):
        ch, an, params = default_instance
        strict = params.with_value('gamma_s_th_db', 80.0)
        rng = np.random.default_rng(0)
        w, r = sample_search_w(0.5, ch, an, strict, OracleConfig(),
                               candidates=random_unit_vectors(rng, 10, 50))
        assert w is None
        assert r == 0.0


@pytest.mark.slow
def test_alternating_matches_joint_oracle():
    # the oracle explores a finite phi x span grid, so it may trail the
    # alternating result but should never lead it by more than its resolution
    params = SystemParams(nt=4, ne=1, d=1000)
    cfg = OracleConfig(phi_grid_step=1e-3, subspace_grid=200)
    compared = 0
    for k in range(50):
        ch = sample_channels(params, k)
        an = build_an_precoder(ch)
        sol = alternating_optimize(ch, params, an=an)
        if not sol.feasible:
            continue
        _, w, r_oracle = joint_search(ch, params, cfg, an=an)
        if w is None:
            continue
        assert r_oracle - sol.r_sec <= 1e-3
        compared += 1
    assert compared > 0
