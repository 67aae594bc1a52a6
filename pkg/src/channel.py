"""
channel.py - Scenario parameters and seeded channel generation

Draws every fading quantity of the symbiotic-radio setup: PT->PR (h1),
PT->BD (h2), PT->ED (He), BD->PR (g1) and BD->ED (g2). Each trial gets its
own stream derived from (seed, [sweep index,] trial index), so trials can be
generated in any order, or in parallel, and still reproduce.

Functions:
    - sample_channels: one ChannelRealization for a given trial
    - dbm_to_linear: dB / dBm to linear scale (unit noise = 1 mW)
    - save_channel / load_channel: JSON fixtures for regression runs
"""

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from config import (
    DEFAULT_ALPHA, DEFAULT_D, DEFAULT_EPSILON, DEFAULT_GAMMA_S_TH_DB,
    DEFAULT_NE, DEFAULT_NT, DEFAULT_P_DBM, DEFAULT_SEED, DEFAULT_SIGMA_C2,
    DEFAULT_SIGMA_E2, DEFAULT_SIGMA_S2, ensure_output_dir,
)
from errors import ConfigurationError, DegenerateVarianceError, DimensionError


def dbm_to_linear(x_dbm):
    """Convert a dB (or dBm against 1 mW noise) value to linear scale."""
    return 10.0 ** (x_dbm / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """
    All scalars of one scenario.

    Powers are given in dBm and thresholds in dB; noise powers are fixed at 1,
    so `total_power` and `gamma_s_th` are the linear values the model uses.
    """
    nt: int = DEFAULT_NT
    ne: int = DEFAULT_NE
    p_dbm: float = DEFAULT_P_DBM
    gamma_s_th_db: float = DEFAULT_GAMMA_S_TH_DB
    alpha: float = DEFAULT_ALPHA
    sigma_s2: float = DEFAULT_SIGMA_S2
    sigma_c2: float = DEFAULT_SIGMA_C2
    sigma_e2: float = DEFAULT_SIGMA_E2
    d: int = DEFAULT_D
    epsilon: float = DEFAULT_EPSILON
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if int(self.nt) != self.nt or self.nt <= 2:
            raise ConfigurationError(f"nt must be an integer > 2, got {self.nt}")
        if int(self.ne) != self.ne or self.ne < 1:
            raise ConfigurationError(f"ne must be an integer >= 1, got {self.ne}")
        if self.nt <= self.ne:
            raise ConfigurationError(f"nt must exceed ne (nt={self.nt}, ne={self.ne})")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.epsilon > 0.0:
            raise ConfigurationError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.d) != self.d or self.d < 1:
            raise ConfigurationError(f"d must be an integer >= 1, got {self.d}")
        for name in ('sigma_s2', 'sigma_c2', 'sigma_e2'):
            value = getattr(self, name)
            if not (value >= 0.0 and math.isfinite(value)):
                raise ConfigurationError(f"{name} must be a finite non-negative variance")
        if math.isnan(self.p_dbm) or math.isnan(self.gamma_s_th_db):
            raise ConfigurationError("p_dbm and gamma_s_th_db must be numbers")
        object.__setattr__(self, 'nt', int(self.nt))
        object.__setattr__(self, 'ne', int(self.ne))
        object.__setattr__(self, 'd', int(self.d))

    @property
    def total_power(self):
        """Total transmit power P (linear)."""
        return dbm_to_linear(self.p_dbm)

    @property
    def gamma_s_th(self):
        """Primary QoS threshold (linear SNR)."""
        return dbm_to_linear(self.gamma_s_th_db)

    @property
    def an_streams(self):
        """Number of artificial-noise streams, Nt - 2."""
        return self.nt - 2

    def require_invertible_eve_correlation(self):
        """
        Reject Ne > Nt - 2.

        X = He W W^H He^H has rank min(Ne, Nt - 2), so more ED antennas than AN
        streams leaves X singular and the ED SNR undefined.
        """
        if self.ne > self.an_streams:
            raise ConfigurationError(
                f"ne={self.ne} exceeds nt-2={self.an_streams}: eavesdropper AN "
                "correlation would be singular")
        return self

    def with_value(self, name, value):
        """Copy with one field replaced (used by parameter sweeps)."""
        return replace(self, **{name: value})


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """
    One draw of every fading quantity.

    Attributes:
        h1: PT -> PR channel, length Nt
        h2: PT -> BD channel, length Nt
        he: PT -> ED channel, Ne x Nt
        g1: BD -> PR coefficient
        g2: BD -> ED coefficient
    """
    h1: np.ndarray
    h2: np.ndarray
    he: np.ndarray
    g1: complex
    g2: complex

    def __post_init__(self):
        h1 = np.asarray(self.h1, dtype=complex).ravel()
        h2 = np.asarray(self.h2, dtype=complex).ravel()
        he = np.atleast_2d(np.asarray(self.he, dtype=complex))
        if h1.size != h2.size or he.shape[1] != h1.size:
            raise DimensionError(
                f"inconsistent channel shapes h1={h1.shape}, h2={h2.shape}, he={he.shape}")
        for name, arr in (('h1', h1), ('h2', h2), ('he', he),
                          ('g1', np.asarray(self.g1)), ('g2', np.asarray(self.g2))):
            if not np.all(np.isfinite(arr)):
                raise DegenerateVarianceError(f"{name} has non-finite entries")
        if not np.any(h1):
            raise DegenerateVarianceError("h1 is the zero vector (sigma_s2 = 0?)")
        if not np.any(h2):
            raise DegenerateVarianceError("h2 is the zero vector (sigma_c2 = 0?)")
        object.__setattr__(self, 'h1', h1)
        object.__setattr__(self, 'h2', h2)
        object.__setattr__(self, 'he', he)
        object.__setattr__(self, 'g1', complex(self.g1))
        object.__setattr__(self, 'g2', complex(self.g2))

    @property
    def nt(self):
        return self.h1.size

    @property
    def ne(self):
        return self.he.shape[0]

    def to_dict(self):
        """Plain-JSON form: complex entries become [re, im] pairs."""
        def pairs(arr):
            return np.stack([arr.real, arr.imag], axis=-1).tolist()
        return {
            'nt': self.nt,
            'ne': self.ne,
            'h1': pairs(self.h1),
            'h2': pairs(self.h2),
            'he': pairs(self.he),
            'g1': [self.g1.real, self.g1.imag],
            'g2': [self.g2.real, self.g2.imag],
        }

    @classmethod
    def from_dict(cls, data):
        def unpair(obj):
            arr = np.asarray(obj, dtype=float)
            return arr[..., 0] + 1j * arr[..., 1]
        try:
            return cls(
                h1=unpair(data['h1']),
                h2=unpair(data['h2']),
                he=unpair(data['he']),
                g1=complex(*data['g1']),
                g2=complex(*data['g2']),
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise ConfigurationError(f"malformed channel record: {exc}") from exc


def _complex_gaussian(rng, shape, variance):
    # (x + iy)/sqrt(2) * sigma gives E|.|^2 = sigma^2 per entry
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def trial_rng(seed, trial_index, sweep_index=None):
    """Independent generator for one trial; never shares state with other trials."""
    key = [int(seed)] if sweep_index is None else [int(seed), int(sweep_index)]
    key.append(int(trial_index))
    return np.random.default_rng(np.random.SeedSequence(key))


def sample_channels(params, trial_index, sweep_index=None):
    """
    Draw one channel realization.

    Entries are circularly-symmetric complex Gaussian: h1 ~ CN(0, sigma_s2),
    h2 ~ CN(0, sigma_c2), He ~ CN(0, sigma_e2), g1, g2 ~ CN(0, 1). The draw
    order is fixed (h1, h2, He, g1, g2).

    Args:
        params: SystemParams
        trial_index: trial number within the run
        sweep_index: optional index of the swept value (sweeps only)

    Returns:
        ChannelRealization

    Raises:
        DegenerateVarianceError: a zero variance produced a zero h1 or h2
    """
    rng = trial_rng(params.seed, trial_index, sweep_index)
    h1 = _complex_gaussian(rng, params.nt, params.sigma_s2)
    h2 = _complex_gaussian(rng, params.nt, params.sigma_c2)
    he = _complex_gaussian(rng, (params.ne, params.nt), params.sigma_e2)
    g1, g2 = _complex_gaussian(rng, 2, 1.0)
    return ChannelRealization(h1=h1, h2=h2, he=he, g1=g1, g2=g2)


def save_channel(ch, path):
    """Write a realization to a JSON fixture file."""
    ensure_output_dir(path)
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(ch.to_dict(), fh, indent=2)
        fh.write('\n')


def load_channel(path):
    """Read a realization written by save_channel."""
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read channel file {path}: {exc}") from exc
    return ChannelRealization.from_dict(data)
