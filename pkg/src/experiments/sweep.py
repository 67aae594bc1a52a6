"""
sweep.py - Mean secrecy rate of each scheme against one scenario parameter

For every swept value and every trial a channel is drawn, the AN precoder is
built once and every requested scheme is solved on it. Means are taken over
the trials on which all requested schemes are feasible, so the schemes are
always compared on the same channels.
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd

from baselines import solve_mrt_optimal_phi, solve_optimal_w_fixed_phi
from channel import SystemParams, sample_channels
from config import (
    DEFAULT_MAX_ITERS, DEFAULT_PHI_FIXED, DEFAULT_TRIALS, INTEGER_AXES, SCHEMES,
    SWEEP_AXES, SWEEP_COLUMNS, ensure_output_dir,
)
from errors import ConfigurationError
from optimizer import alternating_optimize
from sim_utils import map_trials
from srmodel import build_an_precoder

logger = logging.getLogger(__name__)


@dataclass
class SweepSpec:
    """
    One parameter sweep.

    Attributes:
        swept_parameter: one of SWEEP_AXES
        values: swept values, in output order
        trials: channel realizations per value
        schemes: subset of SCHEMES
        base: SystemParams for every field not swept
        common_channels: reuse the same draws for every swept value
    """
    swept_parameter: str
    values: list
    trials: int = DEFAULT_TRIALS
    schemes: list = field(default_factory=lambda: list(SCHEMES))
    base: SystemParams = field(default_factory=SystemParams)
    common_channels: bool = False
    max_iters: int = DEFAULT_MAX_ITERS
    project_phi: bool = False
    phi_fixed: float = DEFAULT_PHI_FIXED

    def point_params(self):
        """
        SystemParams for every swept value.

        Raises:
            ConfigurationError: unknown axis or scheme, empty value list,
                trials < 1, or any swept value giving invalid parameters
        """
        if self.swept_parameter not in SWEEP_AXES:
            raise ConfigurationError(
                f"unknown sweep axis '{self.swept_parameter}' (choose from {', '.join(SWEEP_AXES)})")
        if not self.values:
            raise ConfigurationError("sweep needs at least one value")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigurationError(f"trials must be a positive integer, got {self.trials}")
        if not self.schemes:
            raise ConfigurationError("sweep needs at least one scheme")
        unknown = [s for s in self.schemes if s not in SCHEMES]
        if unknown:
            raise ConfigurationError(
                f"unknown scheme(s) {unknown} (choose from {', '.join(SCHEMES)})")

        points = []
        for value in self.values:
            if self.swept_parameter in INTEGER_AXES:
                value = int(value)
            params = self.base.with_value(self.swept_parameter, value)
            params.require_invertible_eve_correlation()
            if params.alpha <= 0.0:
                raise ConfigurationError("alpha = 0 leaves no backscatter link to secure")
            points.append(params)
        return points


@dataclass
class SweepResult:
    """Aggregated sweep table (columns = SWEEP_COLUMNS) and the spec that made it."""
    spec: SweepSpec
    table: pd.DataFrame

    def column(self, scheme, name):
        """One column for one scheme, ordered by swept value."""
        rows = self.table[self.table['scheme'] == scheme]
        return rows[name].to_numpy()


def _solve_trial(task):
    """Solve every scheme on one channel draw (module level so it pickles)."""
    params, sweep_index, trial, spec_opts = task
    schemes, max_iters, project_phi, phi_fixed = spec_opts
    ch = sample_channels(params, trial, sweep_index)
    an = build_an_precoder(ch)
    out = {}
    for scheme in schemes:
        if scheme == 'proposed':
            sol = alternating_optimize(ch, params, an=an, max_iters=max_iters,
                                       project_phi=project_phi)
        elif scheme == 'mrt_optimal_phi':
            sol = solve_mrt_optimal_phi(ch, an, params)
        else:
            sol = solve_optimal_w_fixed_phi(ch, an, params, phi_fixed)
        out[scheme] = (sol.feasible, sol.r_sec, sol.phi_opt, sol.lambda_opt, sol.iterations)
    return out


def _aggregate(value, schemes, outcomes):
    paired = [o for o in outcomes if all(o[s][0] for s in schemes)]
    rows = []
    for scheme in schemes:
        feasible = sum(1 for o in outcomes if o[scheme][0])
        if paired:
            stats = np.array([o[scheme][1:] for o in paired], dtype=float)
            lambdas = stats[:, 2]
            mean_lambda = float(np.mean(lambdas)) if not np.all(np.isnan(lambdas)) else math.nan
            means = (float(np.mean(stats[:, 0])), float(np.mean(stats[:, 1])),
                     mean_lambda, float(np.mean(stats[:, 3])))
        else:
            means = (math.nan,) * 4
        rows.append([value, scheme, *means, feasible / len(outcomes), len(paired)])
    return rows


def run_sweep(spec, threads=1, quiet=False):
    """
    Run a Monte-Carlo parameter sweep.

    Every swept value is validated before the first trial runs. Trial k at
    value index i uses the stream (seed, i, k), or (seed, k) with
    common_channels, so adding values never perturbs existing ones.

    Args:
        spec: SweepSpec
        threads: worker processes
        quiet: hide progress bars

    Returns:
        SweepResult; the `trials` column counts the paired-feasible trials
    """
    points = spec.point_params()
    opts = (tuple(spec.schemes), spec.max_iters, spec.project_phi, spec.phi_fixed)

    rows = []
    for index, (value, params) in enumerate(zip(spec.values, points)):
        sweep_index = None if spec.common_channels else index
        tasks = [(params, sweep_index, k, opts) for k in range(spec.trials)]
        outcomes = map_trials(_solve_trial, tasks, threads=threads, quiet=quiet,
                              desc=f"{spec.swept_parameter}={value}")
        point_rows = _aggregate(getattr(params, spec.swept_parameter), spec.schemes, outcomes)
        logger.info("%s=%s: paired trials %d/%d", spec.swept_parameter, value,
                    point_rows[0][-1], spec.trials)
        rows.extend(point_rows)

    return SweepResult(spec=spec, table=pd.DataFrame(rows, columns=SWEEP_COLUMNS))


def write_csv(result, path):
    """Write the sweep table as CSV (header = SWEEP_COLUMNS)."""
    ensure_output_dir(path)
    result.table.to_csv(path, index=False)
    return path


def _clean(value):
    # strict JSON has no NaN or Infinity
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def write_json(result, path):
    """
    Write the sweep as a JSON document: run description plus the same rows
    as the CSV (NaN and infinities become null).
    """
    spec = result.spec
    doc = {
        'swept_parameter': spec.swept_parameter,
        'values': [_clean(v) for v in spec.values],
        'trials': spec.trials,
        'schemes': list(spec.schemes),
        'common_channels': spec.common_channels,
        'base': {k: _clean(v) for k, v in asdict(spec.base).items()},
        'columns': SWEEP_COLUMNS,
        'rows': [{k: _clean(v) for k, v in rec.items()}
                 for rec in result.table.to_dict(orient='records')],
    }
    ensure_output_dir(path)
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(doc, fh, indent=2, allow_nan=False)
        fh.write('\n')
    return path
