"""
config.py - Central configuration for the secrecy-rate study

All scenario defaults, numeric tolerances, output paths and the run
configuration live here. Import this module anywhere you need access to
shared settings.
"""

import json
import os
from dataclasses import dataclass, field, fields

from errors import ConfigurationError

# =============================================================================
# DIRECTORY PATHS
# =============================================================================
# Get the project root (one level up from src/)
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
OUTPUT_DIR = os.path.join(PROJECT_ROOT, 'output')
DATA_DIR = os.path.join(OUTPUT_DIR, 'data')


def ensure_output_dir(path):
    """Create the parent directory of an output file if it doesn't exist."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    return path


# =============================================================================
# SCENARIO DEFAULTS - the numerical-results setup
# =============================================================================
DEFAULT_NT = 10                 # PT antennas
DEFAULT_NE = 4                  # ED antennas
DEFAULT_P_DBM = 48.0            # total transmit power
DEFAULT_GAMMA_S_TH_DB = 3.0     # primary QoS threshold
DEFAULT_ALPHA = 0.3             # BD reflection coefficient
DEFAULT_SIGMA_S2 = 1.0          # PT -> PR variance
DEFAULT_SIGMA_C2 = 1.0          # PT -> BD variance
DEFAULT_SIGMA_E2 = 1.0          # PT -> ED variance
DEFAULT_D = 100                 # weighting-grid steps
DEFAULT_EPSILON = 1e-10         # convergence tolerance (bits/s/Hz)
DEFAULT_SEED = 5

# =============================================================================
# ALGORITHM SETTINGS
# =============================================================================
PHI_INIT = 0.5                  # starting power split
PHI_FLOOR = 1e-6                # keeps phi strictly inside (0, 1)
DEFAULT_MAX_ITERS = 50
DEFAULT_PHI_FIXED = 0.5         # fixed-phi benchmark
CONVERGENCE_TOLERANCE = 1e-4    # tolerance used when counting iterations

# =============================================================================
# NUMERIC GUARDS
# =============================================================================
HERMITIAN_RTOL = 1e-12
CONDITION_RTOL = 1e-12
UNIT_NORM_TOL = 1e-10
DEGENERATE_COMBINATION_TOL = 1e-12
B_UNITY_TOL = 1e-9
QOS_SLACK = 1e-9                # relative slack when re-checking the QoS constraint
BOUNDARY_BISECTION_STEPS = 50  # lambda refinement at the QoS boundary

# =============================================================================
# EXPERIMENT SETTINGS
# =============================================================================
DEFAULT_TRIALS = 1000           # desk-scale Monte-Carlo size
SWEEP_AXES = ('gamma_s_th_db', 'nt', 'ne', 'p_dbm', 'alpha')
SCHEMES = ('proposed', 'mrt_optimal_phi', 'optimal_w_fixed_phi')
SWEEP_COLUMNS = [
    'parameter', 'scheme', 'mean_r_sec', 'mean_phi', 'mean_lambda',
    'mean_iters', 'feasible_frac', 'trials',
]
PROFILE_INSTANCES = 4
PROFILE_GRID = 101
DEFAULT_TOLERANCES = (1e-2, 1e-4, 1e-6, 1e-8, 1e-10)

# Axis names that hold integers
INTEGER_AXES = {'nt', 'ne'}

# Values swept when --values is not given
DEFAULT_SWEEP_VALUES = {
    'gamma_s_th_db': [0.0, 3.0, 6.0, 9.0, 12.0],
    'nt': [6, 8, 10, 12],
    'ne': [1, 2, 4, 6],
    'p_dbm': [40.0, 44.0, 48.0, 52.0],
    'alpha': [0.1, 0.3, 0.5, 0.7],
}


# =============================================================================
# RUN CONFIGURATION - CLI flags > config file > defaults above
# =============================================================================
@dataclass
class RunConfig:
    """Everything one CLI invocation needs: scenario scalars plus run options."""
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

    trial: int = 0
    trials: int = DEFAULT_TRIALS
    max_iters: int = DEFAULT_MAX_ITERS
    project_phi: bool = False
    threads: int = 1
    out: str = ''
    param: str = 'gamma_s_th_db'
    values: list = field(default_factory=list)
    schemes: list = field(default_factory=lambda: list(SCHEMES))
    common_channels: bool = False
    tolerances: list = field(default_factory=list)
    instances: int = PROFILE_INSTANCES
    validate: bool = False
    channel_file: str = ''
    export_channel: str = ''
    dump: str = ''
    quiet: bool = False

    def system_fields(self):
        """Return the subset of fields that make up SystemParams."""
        names = ('nt', 'ne', 'p_dbm', 'gamma_s_th_db', 'alpha', 'sigma_s2',
                 'sigma_c2', 'sigma_e2', 'd', 'epsilon', 'seed')
        return {name: getattr(self, name) for name in names}


def load_config_file(path):
    """
    Read a JSON config file into a plain dict of RunConfig overrides.

    Args:
        path: Path to a JSON object whose keys are RunConfig field names
            (dashes or underscores both accepted)

    Returns:
        dict of overrides
    """
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc

    if not isinstance(raw, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")

    known = {f.name for f in fields(RunConfig)}
    overrides = {}
    for key, value in raw.items():
        name = key.replace('-', '_')
        if name not in known:
            raise ConfigurationError(f"unknown config key '{key}' in {path}")
        overrides[name] = value
    return overrides


def build_run_config(file_overrides=None, flag_overrides=None):
    """
    Merge defaults, config-file values and command-line flags.

    Flags win over the file, the file wins over the defaults. A flag whose
    value is None counts as "not given".
    """
    merged = {}
    merged.update(file_overrides or {})
    merged.update({k: v for k, v in (flag_overrides or {}).items() if v is not None})
    return RunConfig(**merged)
