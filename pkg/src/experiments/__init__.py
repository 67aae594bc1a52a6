"""
experiments/ - Monte-Carlo studies

Each file runs one study. Import everything from here:
    from experiments import run_sweep, run_convergence, run_validation_profiles, ...
"""

from .sweep import SweepResult, SweepSpec, run_sweep, write_csv, write_json
from .convergence import ConvergenceResult, run_convergence, run_tolerance_study
from .profiles import run_validation_profiles
