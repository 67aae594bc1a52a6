"""
optimizer.py - Alternating beamformer / power-split optimization

Maximizes the BD secrecy rate subject to the primary QoS constraint by
alternating two subproblems:

    w-step   For a fixed phi, find the SNR-maximizing beam w_e1 (feasibility
             check) and the unconstrained secrecy beam w_e2, then grid-search
             the normalized blend lambda*w_e1 + (1-lambda)*w_e2 for the best
             beam that still meets the QoS threshold.
    phi-step For a fixed w, set phi to the closed-form maximizer of
             log2((1 + phi A) / (1 + phi B / (1 - phi))).

The loop starts at phi = 0.5 and stops once the secrecy rate improves by no
more than epsilon between successive iterations.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

import linalg
from config import (
    B_UNITY_TOL, BOUNDARY_BISECTION_STEPS, DEFAULT_MAX_ITERS,
    DEGENERATE_COMBINATION_TOL, PHI_FLOOR, PHI_INIT, QOS_SLACK,
)
from errors import DegenerateBeamError, NumericalError
from srmodel import (
    build_an_precoder, build_quotient_pairs, coefficients_ab, phi_for_qos,
    power_split, rate_breakdown, secrecy_rate, snr_primary,
)

logger = logging.getLogger(__name__)

# Generalized eigenvector extractions per w-step (w_e1 and w_e2)
EIGEN_CALLS_PER_ITERATION = 2


class SolveStatus(str, Enum):
    CONVERGED = 'converged'
    INFEASIBLE = 'infeasible'
    MAX_ITERATIONS = 'max-iterations'


@dataclass
class IterationTrace:
    """State of one alternating-optimization pass."""
    iteration: int
    phi: float
    lambda1: float
    r_sec: float
    gamma_s: float
    feasible: bool
    eigen_calls: int = EIGEN_CALLS_PER_ITERATION
    grid_evaluations: int = 0


@dataclass
class Solution:
    """
    Output of one solver run.

    `w_opt` is empty when the instance is infeasible. `breakdown` holds the
    per-link SNRs and rates at (w_opt, phi_opt).
    """
    w_opt: np.ndarray
    phi_opt: float
    r_sec: float
    trace: list
    status: SolveStatus
    lambda_opt: float = math.nan
    gamma_s: float = math.nan
    breakdown: dict = field(default_factory=dict)

    @property
    def iterations(self):
        return len(self.trace)

    @property
    def feasible(self):
        return self.status != SolveStatus.INFEASIBLE

    def to_dict(self):
        """JSON-friendly record (complex beam as [re, im] pairs, NaN as None)."""
        return {
            'status': self.status.value,
            'phi_opt': self.phi_opt,
            'lambda_opt': _json_float(self.lambda_opt),
            'r_sec': self.r_sec,
            'gamma_s': _json_float(self.gamma_s),
            'iterations': self.iterations,
            'w_opt': np.stack([self.w_opt.real, self.w_opt.imag], axis=-1).tolist(),
            'breakdown': {k: float(v) for k, v in self.breakdown.items()},
            'trace': [{k: _json_float(v) if isinstance(v, float) else v
                       for k, v in vars(t).items()} for t in self.trace],
        }


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else None


def infeasible_solution(phi, trace):
    """Solution record for an instance whose QoS threshold can't be met."""
    return Solution(w_opt=np.zeros(0, dtype=complex), phi_opt=float(phi), r_sec=0.0,
                    trace=trace, status=SolveStatus.INFEASIBLE)


# ─────────────────────────────────────────────────────────────────────
# w-step
# ─────────────────────────────────────────────────────────────────────
def w_snr_max(phi, ch, an, params):
    """
    Beam that maximizes the primary SNR at a fixed phi.

    Returns:
        tuple: (w_e1, gamma_s_max) where gamma_s_max is the primary SNR
            evaluated at w_e1
    """
    snr_pair, _ = build_quotient_pairs(phi, ch, an, params)
    w_e1, _ = linalg.generalized_principal_eigenvector(snr_pair)
    gamma_s_max = snr_primary(w_e1, power_split(phi, params), ch, params)
    return w_e1, gamma_s_max


def feasibility_check(gamma_s_max, params):
    """True iff the best achievable primary SNR meets the QoS threshold."""
    return bool(gamma_s_max >= params.gamma_s_th)


def w_unconstrained_secrecy(phi, ch, an, params):
    """Beam that maximizes the secrecy rate at a fixed phi, ignoring QoS."""
    _, secrecy_pair = build_quotient_pairs(phi, ch, an, params)
    w_e2, _ = linalg.generalized_principal_eigenvector(secrecy_pair)
    return w_e2


def align_phase(w_ref, w):
    """Rotate w so that w_ref^H w is real and non-negative."""
    inner = np.vdot(w_ref, w)
    if abs(inner) == 0.0:
        return w
    return w * (np.conj(inner) / abs(inner))


def combination_grid(w_e1, w_e2, d):
    """
    Normalized blends lambda*w_e1 + (1-lambda)*w_e2 for lambda = 0, 1/d, ..., 1.

    Blends whose norm collapses below 1e-12 are dropped. The endpoints are
    w_e2 and w_e1 exactly.

    Returns:
        tuple: (lambdas, beams) with beams stacked as Nt x K columns
    """
    lambdas = np.arange(d + 1) / d
    beams = lambdas * w_e1[:, None] + (1.0 - lambdas) * w_e2[:, None]
    norms = np.linalg.norm(beams, axis=0)
    keep = norms >= DEGENERATE_COMBINATION_TOL
    beams = beams[:, keep] / norms[keep]
    lambdas = lambdas[keep]
    if lambdas.size and lambdas[0] == 0.0:
        beams[:, 0] = w_e2
    if lambdas.size and lambdas[-1] == 1.0:
        beams[:, -1] = w_e1
    return lambdas, beams


def _weighted_search(phi, ch, an, params, w_e1=None, w_e2=None):
    """
    Grid search over the blend of the two extreme beams.

    Among blends that meet the QoS threshold, keep the one with the highest
    secrecy rate; ties go to the smallest lambda. lambda = 1 (w_e1) is
    feasible whenever the instance passed the feasibility check.

    When the best grid point borders an infeasible one with a higher rate,
    lambda is bisected between the two so the result lands on the QoS
    boundary rather than one grid step inside it.

    Args:
        phi: power factor in (0, 1)
        ch, an, params: channel, AN precoder, scenario
        w_e1, w_e2: precomputed extreme beams (computed here if omitted)

    Returns:
        tuple: (w_best, lambda_best, r_best, evaluated) - evaluated is the
            number of grid points scored (bisection steps not counted); w_best
            is None if no blend is feasible
    """
    if w_e1 is None:
        w_e1, _ = w_snr_max(phi, ch, an, params)
    if w_e2 is None:
        w_e2 = w_unconstrained_secrecy(phi, ch, an, params)
    w_e2 = align_phase(w_e1, w_e2)

    split = power_split(phi, params)
    lambdas, beams = combination_grid(w_e1, w_e2, params.d)
    gammas = snr_primary(beams, split, ch, params)
    if lambdas.size and lambdas[-1] == 1.0:
        gammas[-1] = snr_primary(w_e1, split, ch, params)
    rates = secrecy_rate(beams, split, ch, an, params)

    # Running best starts at 0 for every sweep
    feasible = gammas >= params.gamma_s_th
    if not np.any(feasible):
        return None, math.nan, 0.0, lambdas.size
    masked = np.where(feasible, rates, -np.inf)
    best = int(np.argmax(masked))
    w_best, lam_best, r_best = beams[:, best], float(lambdas[best]), float(rates[best])

    # The constrained optimum sits on the QoS boundary, between the best
    # feasible grid point and its infeasible lower neighbour
    if best > 0 and not feasible[best - 1] and rates[best - 1] > r_best:
        lam, w = _refine_boundary(split, ch, params, w_e1, w_e2,
                                  float(lambdas[best - 1]), lam_best)
        r = float(secrecy_rate(w, split, ch, an, params))
        if r > r_best:
            w_best, lam_best, r_best = w, lam, r
    return w_best, lam_best, r_best, lambdas.size


def _blend(w_e1, w_e2, lam):
    w = lam * w_e1 + (1.0 - lam) * w_e2
    return w / np.linalg.norm(w)


def _refine_boundary(split, ch, params, w_e1, w_e2, lam_out, lam_in):
    """
    Bisect lambda between an infeasible blend (lam_out) and a feasible one
    (lam_in). Returns the feasible end of the final bracket and its beam.
    """
    for _ in range(BOUNDARY_BISECTION_STEPS):
        mid = 0.5 * (lam_out + lam_in)
        if snr_primary(_blend(w_e1, w_e2, mid), split, ch, params) >= params.gamma_s_th:
            lam_in = mid
        else:
            lam_out = mid
    return lam_in, _blend(w_e1, w_e2, lam_in)


def w_weighted_search(phi, ch, an, params, w_e1=None, w_e2=None):
    """
    Best QoS-feasible blend of w_e1 and w_e2 on the lambda grid.

    Returns:
        tuple: (w_best, lambda_best, r_best); w_best is None if no blend is feasible
    """
    w, lam, r, _ = _weighted_search(phi, ch, an, params, w_e1, w_e2)
    return w, lam, r


def w_step(phi, ch, an, params):
    """
    One full beamforming update at a fixed phi.

    Returns:
        tuple: (w, lambda, r_sec, gamma_s, feasible, evaluated)
    """
    w_e1, gamma_s_max = w_snr_max(phi, ch, an, params)
    if not feasibility_check(gamma_s_max, params):
        return None, math.nan, 0.0, gamma_s_max, False, 0
    w_e2 = w_unconstrained_secrecy(phi, ch, an, params)
    w, lam, r, evaluated = _weighted_search(phi, ch, an, params, w_e1, w_e2)
    if w is None:
        return None, math.nan, 0.0, gamma_s_max, False, evaluated
    gamma_s = snr_primary(w, power_split(phi, params), ch, params)
    return w, lam, r, gamma_s, True, evaluated


# ─────────────────────────────────────────────────────────────────────
# phi-step
# ─────────────────────────────────────────────────────────────────────
class PhiChoice(NamedTuple):
    """Closed-form power factor and whether a positive secrecy rate is reachable."""
    phi: float
    positive_rate: bool


def phi_objective(phi, a, b):
    """Unclamped secrecy rate log2((1 + phi A) / (1 + phi B / (1 - phi)))."""
    phi = np.asarray(phi, dtype=float)
    value = np.log2((1.0 + phi * a) / (1.0 + phi * b / (1.0 - phi)))
    return float(value) if value.ndim == 0 else value


def phi_objective_curvature(phi, a, b):
    """
    Exact second derivative of phi_objective in phi.

    Writing the objective as ln(1 + A phi) + ln(1 - phi) - ln(1 + (B - 1) phi)
    over ln 2 gives three rational terms; the result is negative on (0, 1)
    whenever B < A + 1.
    """
    phi = np.asarray(phi, dtype=float)
    value = (-(a ** 2) / (1.0 + a * phi) ** 2
             - 1.0 / (1.0 - phi) ** 2
             + (b - 1.0) ** 2 / (1.0 + (b - 1.0) * phi) ** 2) / math.log(2.0)
    return float(value) if value.ndim == 0 else value


def critical_points(a, b):
    """
    Both stationary points of phi_objective, in their textbook form.

    phi_2 never lies in (0, 1) for A, B > 0; phi_1 is the maximizer when A > B.
    Either value may be infinite or NaN when A - A B = 0.
    """
    with np.errstate(divide='ignore', invalid='ignore'):
        root = np.sqrt(np.float64(a * b * (a - b + 1.0)))
        den = np.float64(a - a * b)
        return float((a - root) / den), float((a + root) / den)


def closed_form_phi(a, b, floor=PHI_FLOOR):
    """
    Maximizer of phi_objective over (0, 1).

    For A > B the stationary point (A - sqrt(AB(A-B+1))) / (A - AB) is used in
    the equivalent form (A - B) / (A + sqrt(AB(A-B+1))), which has no 0/0 at
    B = 1; B within 1e-9 of 1 takes the limit (A - 1) / (2A) explicitly. For
    A <= B no phi gives a positive rate; the formula value is clamped and
    flagged.

    Raises:
        DegenerateBeamError: A <= 0 (beam orthogonal to h2)
    """
    if not a > 0.0:
        raise DegenerateBeamError(f"A must be positive, got {a}")
    lo, hi = floor, 1.0 - floor

    if a <= b:
        radicand = a * b * (a - b + 1.0)
        raw = (a - b) / (a + math.sqrt(radicand)) if radicand >= 0.0 else lo
        return PhiChoice(phi=min(max(raw, lo), hi), positive_rate=False)

    if abs(b - 1.0) < B_UNITY_TOL:
        raw = (a - 1.0) / (2.0 * a)
    else:
        raw = (a - b) / (a + math.sqrt(a * b * (a - b + 1.0)))
    return PhiChoice(phi=min(max(raw, lo), hi), positive_rate=True)


def optimal_phi(w, ch, an, params):
    """
    Closed-form power factor for a fixed beam.

    Returns:
        PhiChoice(phi, positive_rate)
    """
    a, b = coefficients_ab(w, ch, an, params)
    return closed_form_phi(a, b)


def complexity_estimate(nt, d, iterations):
    """Operation count J (4 Nt^3 (d + 1) + 1) of the alternating algorithm."""
    return iterations * (4 * nt ** 3 * (d + 1) + 1)


# ─────────────────────────────────────────────────────────────────────
# Alternating optimization
# ─────────────────────────────────────────────────────────────────────
def alternating_optimize(ch, params, an=None, max_iters=DEFAULT_MAX_ITERS,
                         project_phi=False, phi_init=PHI_INIT):
    """
    Jointly optimize the beam and the power split for one channel realization.

    Each pass runs the w-step at the current phi (stopping as infeasible if
    the QoS threshold is out of reach), then the closed-form phi-step. The
    loop ends once two passes are complete and the secrecy rate grew by at
    most epsilon, or after max_iters passes. The best feasible pass is
    returned, with its own (w, phi) pair.

    Args:
        ch: ChannelRealization
        params: SystemParams
        an: AnPrecoder (built from ch if omitted)
        max_iters: cap on the number of passes
        project_phi: raise each phi update to the smallest value that keeps
            the current beam QoS-feasible
        phi_init: starting power factor

    Returns:
        Solution

    Raises:
        NumericalError: a rate or power factor became non-finite
    """
    if an is None:
        an = build_an_precoder(ch)

    phi = phi_init
    trace = []
    best = None
    prev_rate = 0.0   # rate before the first pass
    status = SolveStatus.MAX_ITERATIONS

    for j in range(1, max_iters + 1):
        w, lam, r, gamma_s, feasible, evaluated = w_step(phi, ch, an, params)
        trace.append(IterationTrace(iteration=j, phi=phi, lambda1=lam, r_sec=r,
                                    gamma_s=gamma_s, feasible=feasible,
                                    eigen_calls=EIGEN_CALLS_PER_ITERATION if feasible else 1,
                                    grid_evaluations=evaluated))
        if not feasible:
            logger.debug("iteration %d: infeasible at phi=%.6f (gamma_s_max=%.4g)",
                         j, phi, gamma_s)
            return infeasible_solution(phi, trace)
        if not (math.isfinite(r) and math.isfinite(gamma_s)):
            raise NumericalError(f"non-finite iterate at iteration {j}")

        logger.debug("iteration %d: phi=%.6f lambda=%.3f r_sec=%.6f", j, phi, lam, r)
        if best is None or r > best[2]:
            best = (w, phi, r, lam, gamma_s)

        if j >= 2 and r - prev_rate <= params.epsilon:
            status = SolveStatus.CONVERGED
            break
        prev_rate = r

        try:
            choice = optimal_phi(w, ch, an, params)
            if choice.positive_rate:
                next_phi = choice.phi
            else:
                # A <= B: no phi gives this beam a positive rate
                logger.debug("iteration %d: A <= B, keeping phi=%.6f", j, phi)
                next_phi = phi
        except DegenerateBeamError:
            # w carries nothing toward the BD, so phi cannot change the rate
            logger.debug("iteration %d: A = 0, keeping phi=%.6f", j, phi)
            next_phi = phi
        if project_phi:
            needed = phi_for_qos(w, ch, params)
            if needed is not None and needed > next_phi:
                next_phi = min(needed * (1.0 + QOS_SLACK), 1.0 - PHI_FLOOR)
        if not math.isfinite(next_phi):
            raise NumericalError(f"non-finite power factor at iteration {j}")
        phi = next_phi

    w_opt, phi_opt, r_opt, lam_opt, gamma_opt = best
    split = power_split(phi_opt, params)
    return Solution(w_opt=w_opt, phi_opt=phi_opt, r_sec=r_opt, trace=trace,
                    status=status, lambda_opt=lam_opt, gamma_s=gamma_opt,
                    breakdown=rate_breakdown(w_opt, split, ch, an, params))


def iterations_to_tolerance(trace, tolerance):
    """
    First pass index j >= 2 whose improvement over pass j-1 is <= tolerance.

    Falls back to the trace length when the tolerance was never reached.
    """
    rates = [t.r_sec for t in trace if t.feasible]
    for j in range(1, len(rates)):
        if rates[j] - rates[j - 1] <= tolerance:
            return j + 1
    return len(rates)
