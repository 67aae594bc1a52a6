"""
profiles.py - Secrecy rate around the optimized point of a few instances

For each instance: the rate against phi with the optimized beam held fixed,
and the rate against lambda at the optimized phi. The point the algorithm
picked is added to each curve as a flagged row.
"""

import logging

import numpy as np
import pandas as pd

from channel import sample_channels
from config import DEFAULT_MAX_ITERS, PROFILE_GRID, PROFILE_INSTANCES
from optimizer import (
    align_phase, alternating_optimize, combination_grid, w_snr_max,
    w_unconstrained_secrecy,
)
from srmodel import build_an_precoder, power_split, secrecy_rate, snr_primary

logger = logging.getLogger(__name__)

PROFILE_COLUMNS = ['instance', 'curve', 'x', 'r_sec', 'gamma_s', 'feasible', 'chosen']


def _phi_curve(k, sol, ch, an, params, grid):
    rows = []
    for phi in np.linspace(0.0, 1.0, grid + 2)[1:-1]:
        split = power_split(phi, params)
        gamma_s = snr_primary(sol.w_opt, split, ch, params)
        rows.append([k, 'phi', float(phi), secrecy_rate(sol.w_opt, split, ch, an, params),
                     gamma_s, bool(gamma_s >= params.gamma_s_th), False])
    rows.append([k, 'phi', sol.phi_opt, sol.r_sec, sol.gamma_s, True, True])
    return rows


def _lambda_curve(k, sol, ch, an, params, grid):
    w_e1, _ = w_snr_max(sol.phi_opt, ch, an, params)
    w_e2 = align_phase(w_e1, w_unconstrained_secrecy(sol.phi_opt, ch, an, params))
    lambdas, beams = combination_grid(w_e1, w_e2, grid - 1)
    split = power_split(sol.phi_opt, params)
    rates = np.atleast_1d(secrecy_rate(beams, split, ch, an, params))
    gammas = np.atleast_1d(snr_primary(beams, split, ch, params))
    rows = [[k, 'lambda', float(lam), float(r), float(g), bool(g >= params.gamma_s_th), False]
            for lam, r, g in zip(lambdas, rates, gammas)]
    rows.append([k, 'lambda', sol.lambda_opt, sol.r_sec, sol.gamma_s, True, True])
    return rows


def run_validation_profiles(params, instances=PROFILE_INSTANCES, grid=PROFILE_GRID,
                            max_iters=DEFAULT_MAX_ITERS):
    """
    Rate-vs-phi and rate-vs-lambda curves for the first `instances` seeded draws.

    Infeasible draws are skipped, so fewer instances may appear.

    Returns:
        DataFrame with PROFILE_COLUMNS
    """
    rows = []
    for k in range(instances):
        ch = sample_channels(params, k)
        an = build_an_precoder(ch)
        sol = alternating_optimize(ch, params, an=an, max_iters=max_iters)
        if not sol.feasible:
            logger.info("profile instance %d infeasible, skipped", k)
            continue
        rows.extend(_phi_curve(k, sol, ch, an, params, grid))
        rows.extend(_lambda_curve(k, sol, ch, an, params, grid))
    return pd.DataFrame(rows, columns=PROFILE_COLUMNS)
