"""
validation.py - Brute-force oracles for the closed-form and eigenvector steps

Nothing here shares code with the optimizer's maximization logic: the phi
oracle evaluates the SNR formulas directly on a grid, and the beam oracles
score random unit vectors and a grid over unit vectors spanned by the two
eigen-beamformers. Used by the test-suite and by `main.py solve --validate`.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from errors import ConfigurationError
from optimizer import w_snr_max, w_unconstrained_secrecy
from srmodel import (
    PowerSplit, build_an_precoder, power_split, secrecy_rate, snr_primary,
)

logger = logging.getLogger(__name__)

# Full-sphere sampling is only meaningful for small arrays
SPHERE_SAMPLING_MAX_NT = 4


@dataclass(frozen=True)
class OracleConfig:
    """Resolution of the brute-force searches."""
    phi_grid_step: float = 1e-3
    sphere_samples: int = 10_000
    subspace_grid: int = 200
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.phi_grid_step <= 0.01:
            raise ConfigurationError(
                f"phi_grid_step must lie in (0, 0.01], got {self.phi_grid_step}")
        if self.sphere_samples < 1000:
            raise ConfigurationError(
                f"sphere_samples must be >= 1000, got {self.sphere_samples}")
        if self.subspace_grid < 2:
            raise ConfigurationError(
                f"subspace_grid must be >= 2, got {self.subspace_grid}")


def phi_grid(step):
    """phi in {step, 2 step, ..., 1 - step}."""
    n = int(round(1.0 / step))
    return np.arange(1, n) * (1.0 / n)


def grid_search_phi_ab(a, b, step):
    """
    Exhaustive maximization of log2((1 + phi A) / (1 + phi B / (1 - phi))).

    Returns:
        tuple: (phi_star, r_star) - argmax of the unclamped objective (first on
            ties) and its value clamped at zero
    """
    phis = phi_grid(step)
    values = np.log2((1.0 + phis * a) / (1.0 + phis * b / (1.0 - phis)))
    best = int(np.argmax(values))
    return float(phis[best]), max(float(values[best]), 0.0)


def grid_search_phi(w, ch, an, params, cfg):
    """
    Best power factor for a fixed beam, by direct evaluation of the secrecy
    rate on the phi grid (QoS not enforced).

    Returns:
        tuple: (phi_star, r_star)
    """
    phis = phi_grid(cfg.phi_grid_step)
    total = params.total_power
    split = PowerSplit(phi=phis, p=phis * total,
                       q=(1.0 - phis) * total / params.an_streams)
    rates = np.asarray(secrecy_rate(w, split, ch, an, params))
    best = int(np.argmax(rates))
    return float(phis[best]), float(rates[best])


def span_grid(w_e1, w_e2, n):
    """
    n x n grid of unit vectors cos(t) u1 + e^{i s} sin(t) u2 over an
    orthonormal basis (u1, u2) of span{w_e1, w_e2}.

    Collapses to w_e1 alone when the two beams are parallel.
    """
    u1 = w_e1 / np.linalg.norm(w_e1)
    resid = w_e2 - np.vdot(u1, w_e2) * u1
    norm = np.linalg.norm(resid)
    if norm < 1e-12:
        return u1[:, None]
    u2 = resid / norm
    theta = np.linspace(0.0, 0.5 * math.pi, n)
    psi = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    tt, pp = np.meshgrid(theta, psi, indexing='ij')
    coef_1 = np.cos(tt).ravel()
    coef_2 = (np.exp(1j * pp) * np.sin(tt)).ravel()
    beams = u1[:, None] * coef_1 + u2[:, None] * coef_2
    return beams / np.linalg.norm(beams, axis=0)


def random_unit_vectors(rng, nt, count):
    """count isotropic unit vectors in C^nt, as columns."""
    z = rng.standard_normal((nt, count)) + 1j * rng.standard_normal((nt, count))
    return z / np.linalg.norm(z, axis=0)


def _best_beam(beams, split, ch, an, params, constrained):
    rates = np.atleast_1d(secrecy_rate(beams, split, ch, an, params))
    if constrained:
        gammas = np.atleast_1d(snr_primary(beams, split, ch, params))
        rates = np.where(gammas >= params.gamma_s_th, rates, -np.inf)
    best = int(np.argmax(rates))
    if not np.isfinite(rates[best]):
        return None, 0.0
    return beams[:, best], float(rates[best])


def sample_search_w(phi, ch, an, params, cfg, constrained=True, candidates=None):
    """
    Best beam at a fixed phi among sampled unit vectors.

    The candidate set is `sphere_samples` isotropic draws (only for
    Nt <= 4) plus a subspace_grid^2 grid over span{w_e1, w_e2}. Passing
    `candidates` (Nt x K unit columns) replaces both.

    Returns:
        tuple: (w_star, r_star); w_star is None if no candidate meets the QoS
            threshold in constrained mode
    """
    split = power_split(phi, params)
    if candidates is None:
        w_e1, _ = w_snr_max(phi, ch, an, params)
        w_e2 = w_unconstrained_secrecy(phi, ch, an, params)
        blocks = [span_grid(w_e1, w_e2, cfg.subspace_grid)]
        if ch.nt <= SPHERE_SAMPLING_MAX_NT:
            rng = np.random.default_rng(cfg.seed)
            blocks.append(random_unit_vectors(rng, ch.nt, cfg.sphere_samples))
        candidates = np.hstack(blocks)
    candidates = np.asarray(candidates, dtype=complex)
    if candidates.ndim == 1:
        candidates = candidates[:, None]
    return _best_beam(candidates, split, ch, an, params, constrained)


def joint_search(ch, params, cfg, an=None):
    """
    Brute-force joint maximum over the phi grid x span{w_e1(phi), w_e2(phi)}.

    Returns:
        tuple: (phi_star, w_star, r_star); w_star is None when no grid point
            meets the QoS threshold
    """
    if an is None:
        an = build_an_precoder(ch)
    best = (math.nan, None, 0.0)
    for phi in phi_grid(cfg.phi_grid_step):
        w_e1, gamma_s_max = w_snr_max(phi, ch, an, params)
        if gamma_s_max < params.gamma_s_th:
            continue
        w_e2 = w_unconstrained_secrecy(phi, ch, an, params)
        split = power_split(phi, params)
        beams = np.hstack([span_grid(w_e1, w_e2, cfg.subspace_grid), w_e1[:, None]])
        w, r = _best_beam(beams, split, ch, an, params, constrained=True)
        if w is not None and (best[1] is None or r > best[2]):
            best = (float(phi), w, r)
    logger.debug("joint oracle: phi=%.4f r_sec=%.6f", best[0], best[2])
    return best
