"""
convergence.py - How fast the alternating algorithm settles

run_convergence records the secrecy rate after every pass of many seeded
runs and reports the mean trajectory together with how many passes each run
needed to reach a given improvement tolerance. run_tolerance_study re-runs
the algorithm with several stopping tolerances and compares pass counts.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from channel import sample_channels
from config import CONVERGENCE_TOLERANCE, DEFAULT_MAX_ITERS, DEFAULT_TOLERANCES
from optimizer import SolveStatus, alternating_optimize, iterations_to_tolerance
from sim_utils import map_trials

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ['iteration', 'mean_r_sec', 'runs']
HISTOGRAM_COLUMNS = ['iterations', 'count']
TOLERANCE_COLUMNS = ['tolerance', 'mean_iters', 'median_iters', 'max_iters', 'feasible']


@dataclass
class ConvergenceResult:
    """
    Attributes:
        trajectory: mean R_sec after each pass (pass 0 is the zero baseline);
            a run that stopped early contributes its final rate to later passes
        histogram: passes needed to reach `tolerance`, counted over feasible runs
        tolerance: improvement tolerance used for the histogram
        trials: runs attempted
        feasible: runs that were feasible
        max_iters_hit: runs stopped by the iteration cap
    """
    trajectory: pd.DataFrame
    histogram: pd.DataFrame
    tolerance: float
    trials: int = 0
    feasible: int = 0
    max_iters_hit: int = 0
    iterations: list = field(default_factory=list)

    @property
    def median_iterations(self):
        return float(np.median(self.iterations)) if self.iterations else float('nan')

    @property
    def p95_iterations(self):
        return float(np.percentile(self.iterations, 95)) if self.iterations else float('nan')


def _trajectory_trial(task):
    params, trial, max_iters, project_phi = task
    ch = sample_channels(params, trial)
    sol = alternating_optimize(ch, params, max_iters=max_iters, project_phi=project_phi)
    rates = [t.r_sec for t in sol.trace if t.feasible]
    return sol.feasible, sol.status, rates, sol.trace


def run_convergence(params, trials, max_iters=DEFAULT_MAX_ITERS, project_phi=False,
                    tolerance=CONVERGENCE_TOLERANCE, threads=1, quiet=False):
    """
    Convergence study over `trials` seeded realizations.

    Returns:
        ConvergenceResult; trials = 0 gives empty tables
    """
    tasks = [(params, k, max_iters, project_phi) for k in range(trials)]
    outcomes = map_trials(_trajectory_trial, tasks, threads=threads, quiet=quiet,
                          desc='Convergence')

    runs = [(rates, trace) for ok, _, rates, trace in outcomes if ok]
    max_hit = sum(1 for _, status, _, _ in outcomes if status == SolveStatus.MAX_ITERATIONS)
    if not runs:
        return ConvergenceResult(
            trajectory=pd.DataFrame(columns=TRAJECTORY_COLUMNS),
            histogram=pd.DataFrame(columns=HISTOGRAM_COLUMNS),
            tolerance=tolerance, trials=trials, feasible=0, max_iters_hit=max_hit)

    length = max(len(rates) for rates, _ in runs)
    padded = np.zeros((len(runs), length + 1))
    for i, (rates, _) in enumerate(runs):
        padded[i, 1:len(rates) + 1] = rates
        padded[i, len(rates) + 1:] = rates[-1]
    trajectory = pd.DataFrame({
        'iteration': np.arange(length + 1),
        'mean_r_sec': padded.mean(axis=0),
        'runs': len(runs),
    }, columns=TRAJECTORY_COLUMNS)

    needed = [iterations_to_tolerance(trace, tolerance) for _, trace in runs]
    counts = pd.Series(needed).value_counts().sort_index()
    histogram = pd.DataFrame({'iterations': counts.index.astype(int),
                              'count': counts.to_numpy().astype(int)},
                             columns=HISTOGRAM_COLUMNS)

    logger.info("convergence: %d/%d feasible, median %.1f passes to %.0e",
                len(runs), trials, float(np.median(needed)), tolerance)
    return ConvergenceResult(trajectory=trajectory, histogram=histogram,
                             tolerance=tolerance, trials=trials, feasible=len(runs),
                             max_iters_hit=max_hit, iterations=needed)


def _tolerance_trial(task):
    params, trial, max_iters, project_phi, tolerances = task
    ch = sample_channels(params, trial)
    counts = []
    for tol in tolerances:
        sol = alternating_optimize(ch, params.with_value('epsilon', tol),
                                   max_iters=max_iters, project_phi=project_phi)
        if not sol.feasible:
            return None
        counts.append(sol.iterations)
    return counts


def run_tolerance_study(params, trials, tolerances=DEFAULT_TOLERANCES,
                        max_iters=DEFAULT_MAX_ITERS, project_phi=False,
                        threads=1, quiet=False):
    """
    Pass counts when the algorithm is stopped at each tolerance.

    Each realization is solved afresh at every tolerance; realizations that
    are infeasible are left out of every row.

    Returns:
        DataFrame with TOLERANCE_COLUMNS, one row per tolerance in input order
    """
    tolerances = [float(t) for t in tolerances]
    tasks = [(params, k, max_iters, project_phi, tolerances) for k in range(trials)]
    outcomes = [o for o in map_trials(_tolerance_trial, tasks, threads=threads,
                                      quiet=quiet, desc='Tolerances') if o is not None]
    if not outcomes:
        return pd.DataFrame(columns=TOLERANCE_COLUMNS)
    counts = np.array(outcomes, dtype=float)
    return pd.DataFrame({
        'tolerance': tolerances,
        'mean_iters': counts.mean(axis=0),
        'median_iters': np.median(counts, axis=0),
        'max_iters': counts.max(axis=0).astype(int),
        'feasible': len(outcomes),
    }, columns=TOLERANCE_COLUMNS)
