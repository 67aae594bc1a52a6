"""
srmodel.py - Signal model of the secure symbiotic-radio link

The physics layer: null-space AN precoder, information/AN power split, the
SNRs at PR (primary), PR after SIC (backscatter) and the ED, the secrecy
rate, the (A, B) coefficients of the power-split objective and the two
Hermitian pairs whose Rayleigh quotients give the primary SNR and the
secrecy-rate ratio.

Every evaluator accepts a single beam (length Nt) or a batch of beams stacked
as the columns of an Nt x K matrix and returns a float or K floats.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from config import CONDITION_RTOL, UNIT_NORM_TOL
from errors import DimensionError, DomainError, SingularEavesdropperCorrelationError
from linalg import HermitianPair, null_space_basis


@dataclass(frozen=True, eq=False)
class AnPrecoder:
    """
    Artificial-noise precoder W and the ED-side correlation X = He W W^H He^H.

    Columns of W are orthonormal and orthogonal to h1 and h2, so the AN is
    invisible at PR and BD. X is computed once and shared by every evaluation
    on the same channel.
    """
    w_matrix: np.ndarray
    x_corr: np.ndarray

    @cached_property
    def eve_gain(self):
        """1^H X^{-1} 1, the ED's noise-whitened combining gain."""
        eigs = scipy.linalg.eigvalsh(self.x_corr)
        if eigs[-1] <= 0.0 or eigs[0] < CONDITION_RTOL * eigs[-1]:
            raise SingularEavesdropperCorrelationError(
                f"X is singular (eigenvalues {eigs[0]:.3e} .. {eigs[-1]:.3e}); "
                "need ne <= nt - 2")
        ones = np.ones(self.x_corr.shape[0], dtype=complex)
        return float(np.real(ones.conj() @ scipy.linalg.solve(self.x_corr, ones, assume_a='her')))


@dataclass(frozen=True)
class PowerSplit:
    """Information power p = phi P and per-stream AN power q = (1 - phi) P / (Nt - 2)."""
    phi: float
    p: float
    q: float


def build_an_precoder(ch):
    """
    Build the null-space AN precoder for one channel realization.

    Args:
        ch: ChannelRealization

    Returns:
        AnPrecoder with Nt - 2 orthonormal columns

    Raises:
        DimensionError: Nt <= 2
    """
    nt = ch.nt
    if nt <= 2:
        raise DimensionError(f"AN precoding needs nt > 2, got {nt}")
    w_matrix = null_space_basis([ch.h1, ch.h2], nt - 2)
    hw = ch.he @ w_matrix
    x_corr = hw @ hw.conj().T
    x_corr = 0.5 * (x_corr + x_corr.conj().T)
    return AnPrecoder(w_matrix=w_matrix, x_corr=x_corr)


def power_split(phi, params):
    """
    Split the total power between the information beam and the AN streams.

    Raises:
        DomainError: phi outside the open interval (0, 1)
    """
    if not 0.0 < phi < 1.0:
        raise DomainError(f"power factor must satisfy 0 < phi < 1, got {phi}")
    total = params.total_power
    return PowerSplit(phi=float(phi), p=phi * total,
                      q=(1.0 - phi) * total / params.an_streams)


def _as_beams(w):
    w = np.asarray(w, dtype=complex)
    norms = np.linalg.norm(w, axis=0)
    if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
        raise DomainError("beamforming vectors must have unit norm")
    return w


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def beam_gains(w, ch):
    """(|h1^H w|^2, |h2^H w|^2) for one beam or a batch of beams."""
    w = np.asarray(w, dtype=complex)
    return np.abs(ch.h1.conj() @ w) ** 2, np.abs(ch.h2.conj() @ w) ** 2


def snr_primary(w, split, ch, params):
    """Primary SNR at PR, the BD signal treated as interference."""
    w = _as_beams(w)
    g_h1, g_h2 = beam_gains(w, ch)
    interference = split.p * params.alpha * abs(ch.g1) ** 2 * g_h2
    return _scalar(split.p * g_h1 / (interference + 1.0))


def snr_bd(w, split, ch, params):
    """BD SNR at PR after the primary symbol is removed by SIC."""
    w = _as_beams(w)
    _, g_h2 = beam_gains(w, ch)
    return _scalar(split.p * params.alpha * abs(ch.g1) ** 2 * g_h2)


def snr_eve(w, split, ch, an, params):
    """
    Noiseless ED's SNR for the BD symbol, AN acting as coloured interference.

    Raises:
        SingularEavesdropperCorrelationError: X is not invertible
    """
    w = _as_beams(w)
    _, g_h2 = beam_gains(w, ch)
    scale = split.p * params.alpha * abs(ch.g2) ** 2 / split.q
    return _scalar(scale * an.eve_gain * g_h2)


def secrecy_rate(w, split, ch, an, params):
    """[log2(1 + gamma_c) - log2(1 + gamma_e)]^+ in bits/s/Hz."""
    gamma_c = snr_bd(w, split, ch, params)
    gamma_e = snr_eve(w, split, ch, an, params)
    return _scalar(np.maximum(np.log2((1.0 + gamma_c) / (1.0 + gamma_e)), 0.0))


def rate_breakdown(w, split, ch, an, params):
    """All per-link quantities for one beam, for reports."""
    gamma_c = snr_bd(w, split, ch, params)
    gamma_e = snr_eve(w, split, ch, an, params)
    return {
        'gamma_s': snr_primary(w, split, ch, params),
        'gamma_c': gamma_c,
        'gamma_e': gamma_e,
        'r_c': float(np.log2(1.0 + gamma_c)),
        'r_e': float(np.log2(1.0 + gamma_e)),
        'r_sec': max(float(np.log2((1.0 + gamma_c) / (1.0 + gamma_e))), 0.0),
    }


def coefficients_ab(w, ch, an, params):
    """
    Coefficients of the power-split objective log2((1 + phi A) / (1 + phi B / (1 - phi))).

    Returns:
        tuple: (A, B) with A = P alpha |g1|^2 |h2^H w|^2 and
            B = (Nt - 2) alpha |g2|^2 |h2^H w|^2 1^H X^{-1} 1
    """
    w = _as_beams(w)
    _, g_h2 = beam_gains(w, ch)
    a = params.total_power * params.alpha * abs(ch.g1) ** 2 * g_h2
    b = params.an_streams * params.alpha * abs(ch.g2) ** 2 * an.eve_gain * g_h2
    return _scalar(a), _scalar(b)


def build_quotient_pairs(phi, ch, an, params):
    """
    The two Hermitian pairs of the beamforming subproblem at a fixed phi.

    Returns:
        tuple: (snr_pair, secrecy_pair) where
            snr_pair = (G1, G2): quotient equals the primary SNR
            secrecy_pair = (G3, G4): quotient equals (1 + gamma_c) / (1 + gamma_e)
    """
    split = power_split(phi, params)
    nt = ch.nt
    eye = np.eye(nt, dtype=complex)
    h1h1 = np.outer(ch.h1, ch.h1.conj())
    h2h2 = np.outer(ch.h2, ch.h2.conj())

    mat_1 = split.p * h1h1
    mat_2 = params.alpha * split.p * abs(ch.g1) ** 2 * h2h2 + eye
    mat_3 = eye + split.p * params.alpha * abs(ch.g1) ** 2 * h2h2
    mat_4 = eye + (split.p * params.alpha * abs(ch.g2) ** 2 / split.q) * an.eve_gain * h2h2
    return HermitianPair(mat_1, mat_2), HermitianPair(mat_3, mat_4)


def phi_for_qos(w, ch, params):
    """
    Smallest phi meeting the primary QoS threshold for a fixed beam.

    The primary SNR is increasing in phi, so the boundary solves
    phi P (|h1^H w|^2 - th alpha |g1|^2 |h2^H w|^2) = th.

    Returns:
        float in (0, 1), or None when no phi below 1 reaches the threshold
    """
    w = _as_beams(w)
    g_h1, g_h2 = beam_gains(w, ch)
    th = params.gamma_s_th
    if th <= 0.0:
        return 0.0
    margin = float(g_h1 - th * params.alpha * abs(ch.g1) ** 2 * g_h2)
    if margin <= 0.0:
        return None
    phi = th / (params.total_power * margin)
    return phi if phi < 1.0 else None
