"""
baselines.py - Benchmark schemes

    mrt_optimal_phi      Beam fixed to h2/||h2|| (MRT toward the BD),
                         closed-form phi for that beam.
    optimal_w_fixed_phi  One w-step of the alternating algorithm at a fixed
                         phi (0.5 by default), phi never updated.
"""

import logging
import math

import numpy as np

from config import DEFAULT_PHI_FIXED, PHI_FLOOR, QOS_SLACK
from errors import DomainError
from optimizer import (
    EIGEN_CALLS_PER_ITERATION, IterationTrace, Solution, SolveStatus,
    infeasible_solution, optimal_phi, w_step,
)
from srmodel import phi_for_qos, power_split, rate_breakdown, snr_primary

logger = logging.getLogger(__name__)


def mrt_beam(ch):
    """Unit-norm MRT beam toward the backscatter device."""
    return ch.h2 / np.linalg.norm(ch.h2)


def solve_mrt_optimal_phi(ch, an, params):
    """
    MRT beam with the power factor chosen in closed form.

    QoS is checked at the resulting (w, phi); the run is reported infeasible
    if the primary SNR falls short there.
    When no phi gives the MRT beam a positive rate, phi is set to the
    smallest value meeting QoS.

    Returns:
        Solution (lambda_opt is NaN: no blend is involved)
    """
    w = mrt_beam(ch)
    choice = optimal_phi(w, ch, an, params)
    phi = choice.phi
    if not choice.positive_rate:
        # The rate is 0 for every phi; take the smallest one that meets QoS
        needed = phi_for_qos(w, ch, params)
        if needed:
            phi = min(needed * (1.0 + QOS_SLACK), 1.0 - PHI_FLOOR)
    split = power_split(phi, params)
    breakdown = rate_breakdown(w, split, ch, an, params)
    feasible = bool(breakdown['gamma_s'] >= params.gamma_s_th)
    trace = [IterationTrace(iteration=1, phi=phi, lambda1=math.nan,
                            r_sec=breakdown['r_sec'] if feasible else 0.0,
                            gamma_s=breakdown['gamma_s'], feasible=feasible,
                            eigen_calls=0, grid_evaluations=0)]
    if not feasible:
        logger.debug("MRT infeasible: gamma_s=%.4g < %.4g",
                     breakdown['gamma_s'], params.gamma_s_th)
        return infeasible_solution(phi, trace)
    return Solution(w_opt=w, phi_opt=phi, r_sec=breakdown['r_sec'], trace=trace,
                    status=SolveStatus.CONVERGED, gamma_s=breakdown['gamma_s'],
                    breakdown=breakdown)


def solve_optimal_w_fixed_phi(ch, an, params, phi_fixed=DEFAULT_PHI_FIXED):
    """
    Optimized beam at a fixed power factor.

    Raises:
        DomainError: phi_fixed outside (0, 1)
    """
    if not 0.0 < phi_fixed < 1.0:
        raise DomainError(f"phi_fixed must satisfy 0 < phi < 1, got {phi_fixed}")
    w, lam, r, gamma_s, feasible, evaluated = w_step(phi_fixed, ch, an, params)
    trace = [IterationTrace(iteration=1, phi=phi_fixed, lambda1=lam, r_sec=r,
                            gamma_s=gamma_s, feasible=feasible,
                            eigen_calls=EIGEN_CALLS_PER_ITERATION if feasible else 1,
                            grid_evaluations=evaluated)]
    if not feasible:
        return infeasible_solution(phi_fixed, trace)
    split = power_split(phi_fixed, params)
    return Solution(w_opt=w, phi_opt=float(phi_fixed), r_sec=r, trace=trace,
                    status=SolveStatus.CONVERGED, lambda_opt=lam,
                    gamma_s=snr_primary(w, split, ch, params),
                    breakdown=rate_breakdown(w, split, ch, an, params))
