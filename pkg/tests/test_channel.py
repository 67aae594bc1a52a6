import math

import numpy as np
import pytest

from channel import (
    ChannelRealization, SystemParams, dbm_to_linear, load_channel, sample_channels,
    save_channel,
)
from errors import ConfigurationError, DegenerateVarianceError, DimensionError


class TestSystemParams:
    def test_defaults(self):
        p = SystemParams()
        assert (p.nt, p.ne, p.d, p.seed) == (10, 4, 100, 5)
        assert p.total_power == pytest.approx(10 ** 4.8)
        assert p.gamma_s_th == pytest.approx(1.99526, rel=1e-5)
        assert p.an_streams == 8

    def test_dbm_conversion(self):
        assert dbm_to_linear(10.0) == pytest.approx(10.0)
        assert dbm_to_linear(0.0) == 1.0

    def test_minus_infinity_threshold_is_zero(self):
        assert SystemParams(gamma_s_th_db=-math.inf).gamma_s_th == 0.0

    @pytest.mark.parametrize('kwargs', [
        dict(nt=2, ne=1),
        dict(nt=4, ne=4),
        dict(ne=0),
        dict(alpha=1.5),
        dict(alpha=-0.1),
        dict(epsilon=0.0),
        dict(d=0),
        dict(sigma_e2=-1.0),
        dict(p_dbm=float('nan')),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigurationError):
            SystemParams(**kwargs)

    def test_eve_antennas_beyond_an_streams(self):
        p = SystemParams(nt=5, ne=4)
        with pytest.raises(ConfigurationError):
            p.require_invertible_eve_correlation()
        assert SystemParams(nt=6, ne=4).require_invertible_eve_correlation().ne == 4

    def test_with_value(self):
        p = SystemParams().with_value('alpha', 0.7)
        assert p.alpha == 0.7
        assert p.nt == 10


class TestSampleChannels:
    def test_shapes(self, default_params):
        ch = sample_channels(default_params, 0)
        assert ch.h1.shape == (10,)
        assert ch.h2.shape == (10,)
        assert ch.he.shape == (4, 10)
        assert isinstance(ch.g1, complex)

    def test_deterministic_per_trial(self, default_params):
        a = sample_channels(default_params, 3)
        b = sample_channels(default_params, 3)
        np.testing.assert_array_equal(a.he, b.he)
        assert a.g2 == b.g2

    def test_trials_and_sweep_points_differ(self, default_params):
        a = sample_channels(default_params, 0)
        assert not np.allclose(a.h1, sample_channels(default_params, 1).h1)
        assert not np.allclose(a.h1, sample_channels(default_params, 0, sweep_index=1).h1)

    def test_variances(self):
        params = SystemParams(sigma_s2=1.0, sigma_c2=2.0, sigma_e2=0.5)
        draws = [sample_channels(params, k) for k in range(2000)]
        h2 = np.concatenate([c.h2 for c in draws])
        he = np.concatenate([c.he.ravel() for c in draws])
        g1 = np.array([c.g1 for c in draws])
        assert np.mean(np.abs(h2) ** 2) == pytest.approx(2.0, rel=0.05)
        assert np.mean(np.abs(he) ** 2) == pytest.approx(0.5, rel=0.05)
        assert np.mean(np.abs(g1) ** 2) == pytest.approx(1.0, rel=0.1)
        assert abs(np.mean(h2)) < 0.05

    def test_zero_variance_rejected(self):
        with pytest.raises(DegenerateVarianceError):
            sample_channels(SystemParams(sigma_s2=0.0), 0)


class TestChannelRealization:
    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            ChannelRealization(h1=np.ones(4), h2=np.ones(3), he=np.ones((1, 4)), g1=1, g2=1)

    def test_non_finite_rejected(self):
        with pytest.raises(DegenerateVarianceError):
            ChannelRealization(h1=[1, np.nan, 0], h2=np.ones(3), he=np.ones((1, 3)), g1=1, g2=1)

    def test_fixture_file(self, tmp_path, default_params):
        ch = sample_channels(default_params, 11)
        path = tmp_path / 'fixtures' / 'ch.json'
        save_channel(ch, str(path))
        back = load_channel(str(path))
        np.testing.assert_array_equal(back.h1, ch.h1)
        np.testing.assert_array_equal(back.he, ch.he)
        assert back.g1 == ch.g1

    def test_malformed_record(self):
        with pytest.raises(ConfigurationError):
            ChannelRealization.from_dict({'h1': [[1.0, 0.0]]})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_channel(str(tmp_path / 'absent.json'))
