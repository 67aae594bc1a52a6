"""
main.py - Command-line entry point for the secrecy-rate study

Subcommands:
    solve        optimize one channel realization and print the result
    sweep        mean secrecy rate of each scheme against one parameter (CSV + JSON)
    convergence  per-iteration mean rate and passes-to-tolerance (CSV)
    validate     compare closed-form / eigenvector steps with brute-force oracles
    profiles     rate against phi and lambda around the optimum (CSV)

Settings are resolved as: command-line flag > --config JSON file > defaults
in config.py.

Usage:
    python src/main.py solve --gamma-s-th-db 6
    python src/main.py sweep --param nt --values 6,8,10,12 --trials 1000 --threads 4

Exit status: 0 converged / done, 1 numerical or oracle failure, 2 usage or
configuration error, 3 infeasible, 4 iteration cap reached.
"""

import argparse
import json
import logging
import os
import sys

# ─────────────────────────────────────────────────────────────────────
# Ensure 'src' is on the path so imports work when running directly
# ─────────────────────────────────────────────────────────────────────
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from channel import SystemParams, load_channel, sample_channels, save_channel
from config import (
    CONVERGENCE_TOLERANCE, DATA_DIR, DEFAULT_SWEEP_VALUES, INTEGER_AXES,
    PROFILE_GRID, SCHEMES, SWEEP_AXES, build_run_config, ensure_output_dir,
    load_config_file,
)
from errors import ConfigurationError, SecrecyRateError
from experiments import (
    SweepSpec, run_convergence, run_sweep, run_tolerance_study,
    run_validation_profiles, write_csv, write_json,
)
from optimizer import SolveStatus, alternating_optimize, optimal_phi
from sim_utils import parse_values
from srmodel import build_an_precoder, power_split, secrecy_rate
from summary import (
    print_convergence, print_profiles, print_solution, print_sweep,
    print_validation,
)
from validation import OracleConfig, grid_search_phi, sample_search_w

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_MAX_ITERS = 4

STATUS_EXIT = {
    SolveStatus.CONVERGED: EXIT_OK,
    SolveStatus.INFEASIBLE: EXIT_INFEASIBLE,
    SolveStatus.MAX_ITERATIONS: EXIT_MAX_ITERS,
}


# ─────────────────────────────────────────────────────────────────────
# ARGUMENT PARSING
# ─────────────────────────────────────────────────────────────────────
def _add_common(parser):
    """Scenario flags shared by every subcommand (default None = not given)."""
    g = parser.add_argument_group('scenario')
    g.add_argument('--config', help='JSON file of settings (flags override it)')
    g.add_argument('--nt', type=int, help='PT antennas (default 10)')
    g.add_argument('--ne', type=int, help='ED antennas (default 4)')
    g.add_argument('--p-dbm', type=float, help='total transmit power in dBm (default 48)')
    g.add_argument('--gamma-s-th-db', type=float, help='primary QoS threshold in dB (default 3)')
    g.add_argument('--alpha', type=float, help='BD reflection coefficient (default 0.3)')
    g.add_argument('--sigma-s2', type=float, help='PT->PR channel variance (default 1)')
    g.add_argument('--sigma-c2', type=float, help='PT->BD channel variance (default 1)')
    g.add_argument('--sigma-e2', type=float, help='PT->ED channel variance (default 1)')
    g.add_argument('--d', type=int, help='lambda grid steps (default 100)')
    g.add_argument('--epsilon', type=float, help='convergence tolerance (default 1e-10)')
    g.add_argument('--seed', type=int, help='base random seed (default 5)')

    r = parser.add_argument_group('run')
    r.add_argument('--max-iters', type=int, help='cap on alternating passes (default 50)')
    r.add_argument('--project-phi', action='store_true', default=None,
                   help='raise each phi update until the current beam meets QoS')
    r.add_argument('--out', help='output file path')
    r.add_argument('--threads', type=int, help='worker processes (default 1)')
    r.add_argument('--quiet', action='store_true', default=None, help='hide progress bars')
    r.add_argument('-v', '--verbose', action='count', default=0,
                   help='-v for info logging, -vv for debug')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='main.py',
        description='Secrecy-rate maximization for a backscatter device with AN precoding.',
        epilog='Precedence: command-line flags > --config file > built-in defaults.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', help='optimize one channel realization')
    _add_common(p)
    p.add_argument('--trial', type=int, help='trial index of the realization (default 0)')
    p.add_argument('--channel-file', help='load the realization from a JSON fixture')
    p.add_argument('--export-channel', help='write the realization to a JSON fixture')
    p.add_argument('--dump', help='write the solution as JSON')
    p.add_argument('--validate', action='store_true', default=None,
                   help='also run the brute-force oracles and print the deltas')

    p = sub.add_parser('sweep', help='Monte-Carlo sweep of one parameter')
    _add_common(p)
    p.add_argument('--param', choices=SWEEP_AXES, help='swept parameter (default gamma_s_th_db)')
    p.add_argument('--values', help="'start:step:stop' or comma list")
    p.add_argument('--trials', type=int, help='realizations per value (default 1000)')
    p.add_argument('--schemes', help=f"comma list from {','.join(SCHEMES)}")
    p.add_argument('--common-channels', action='store_true', default=None,
                   help='reuse the same draws at every swept value')

    p = sub.add_parser('convergence', help='convergence study')
    _add_common(p)
    p.add_argument('--trials', type=int, help='realizations (default 1000)')
    p.add_argument('--tolerances', help='comma list of tolerances for the tolerance study')

    p = sub.add_parser('validate', help='oracle comparison on a few realizations')
    _add_common(p)
    p.add_argument('--instances', type=int, help='realizations to check (default 4)')

    p = sub.add_parser('profiles', help='rate profiles around the optimum')
    _add_common(p)
    p.add_argument('--instances', type=int, help='realizations to profile (default 4)')
    return parser


def resolve_config(args):
    """Merge --config file values under the command-line flags."""
    flags = {k: v for k, v in vars(args).items()
             if k not in ('command', 'config', 'verbose')}
    file_overrides = load_config_file(args.config) if args.config else {}
    try:
        cfg = build_run_config(file_overrides, flags)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from exc
    if isinstance(cfg.schemes, str):
        cfg.schemes = [s.strip() for s in cfg.schemes.split(',') if s.strip()]
    if isinstance(cfg.tolerances, str):
        cfg.tolerances = parse_values(cfg.tolerances)
    return cfg


def system_params(cfg):
    return SystemParams(**cfg.system_fields())


def sweep_values(cfg):
    integer = cfg.param in INTEGER_AXES
    if isinstance(cfg.values, str) and cfg.values:
        return parse_values(cfg.values, integer=integer)
    if cfg.values:
        return [int(v) if integer else float(v) for v in cfg.values]
    return list(DEFAULT_SWEEP_VALUES.get(cfg.param, []))


def _stem(path):
    return os.path.splitext(path)[0]


# ─────────────────────────────────────────────────────────────────────
# SUBCOMMANDS
# ─────────────────────────────────────────────────────────────────────
def oracle_report(sol, ch, an, params, cfg=None):
    """Closed-form vs grid phi and w-step vs sampled beams at the optimum."""
    cfg = cfg or OracleConfig()
    phi_closed = optimal_phi(sol.w_opt, ch, an, params).phi
    phi_grid, r_grid = grid_search_phi(sol.w_opt, ch, an, params, cfg)
    r_closed = secrecy_rate(sol.w_opt, power_split(phi_closed, params), ch, an, params)
    _, r_sampled = sample_search_w(sol.phi_opt, ch, an, params, cfg)
    phi_ok = (abs(phi_closed - phi_grid) <= cfg.phi_grid_step
              or r_closed >= r_grid - 1e-9)
    return {
        'phi_closed': phi_closed, 'phi_grid': phi_grid,
        'r_closed': r_closed, 'r_grid': r_grid,
        'r_wstep': sol.r_sec, 'r_sampled': r_sampled,
        'step': cfg.phi_grid_step,
        'agrees': phi_ok and r_sampled <= sol.r_sec + 1e-3,
    }


def cmd_solve(cfg):
    params = system_params(cfg)
    params.require_invertible_eve_correlation()
    if cfg.channel_file:
        ch = load_channel(cfg.channel_file)
        if ch.nt != params.nt or ch.ne != params.ne:
            raise ConfigurationError(
                f"channel file is {ch.nt}x{ch.ne} but nt={params.nt}, ne={params.ne}")
    else:
        ch = sample_channels(params, cfg.trial)
    if cfg.export_channel:
        save_channel(ch, cfg.export_channel)
        logger.info("channel written to %s", cfg.export_channel)

    an = build_an_precoder(ch)
    sol = alternating_optimize(ch, params, an=an, max_iters=cfg.max_iters,
                               project_phi=cfg.project_phi)
    print_solution(sol, params)

    if cfg.dump:
        ensure_output_dir(cfg.dump)
        with open(cfg.dump, 'w', encoding='utf-8') as fh:
            json.dump(sol.to_dict(), fh, indent=2)
            fh.write('\n')

    if cfg.validate and sol.feasible:
        print_validation(oracle_report(sol, ch, an, params))
    return STATUS_EXIT[sol.status]


def cmd_sweep(cfg):
    spec = SweepSpec(swept_parameter=cfg.param, values=sweep_values(cfg),
                     trials=cfg.trials, schemes=list(cfg.schemes),
                     base=system_params(cfg), common_channels=cfg.common_channels,
                     max_iters=cfg.max_iters, project_phi=cfg.project_phi)
    # Reject bad sweeps before anything is written
    spec.point_params()
    result = run_sweep(spec, threads=cfg.threads, quiet=cfg.quiet)
    path = cfg.out or os.path.join(DATA_DIR, f'sweep_{cfg.param}.csv')
    write_csv(result, path)
    write_json(result, _stem(path) + '.json')
    print_sweep(result, path)
    return EXIT_OK


def cmd_convergence(cfg):
    params = system_params(cfg)
    params.require_invertible_eve_correlation()
    result = run_convergence(params, cfg.trials, max_iters=cfg.max_iters,
                             project_phi=cfg.project_phi, tolerance=CONVERGENCE_TOLERANCE,
                             threads=cfg.threads, quiet=cfg.quiet)
    tolerance_table = None
    if cfg.tolerances:
        tolerance_table = run_tolerance_study(params, cfg.trials, cfg.tolerances,
                                              max_iters=cfg.max_iters,
                                              project_phi=cfg.project_phi,
                                              threads=cfg.threads, quiet=cfg.quiet)

    path = cfg.out or os.path.join(DATA_DIR, 'convergence.csv')
    ensure_output_dir(path)
    result.trajectory.to_csv(path, index=False)
    result.histogram.to_csv(_stem(path) + '_histogram.csv', index=False)
    if tolerance_table is not None:
        tolerance_table.to_csv(_stem(path) + '_tolerances.csv', index=False)
    print_convergence(result, tolerance_table, path)
    return EXIT_OK


def cmd_validate(cfg):
    params = system_params(cfg)
    params.require_invertible_eve_correlation()
    failures = 0
    for k in range(cfg.instances):
        ch = sample_channels(params, k)
        an = build_an_precoder(ch)
        sol = alternating_optimize(ch, params, an=an, max_iters=cfg.max_iters,
                                   project_phi=cfg.project_phi)
        if not sol.feasible:
            logger.info("instance %d infeasible, skipped", k)
            continue
        report = oracle_report(sol, ch, an, params)
        print_validation(report)
        if not report['agrees']:
            failures += 1
    return EXIT_ERROR if failures else EXIT_OK


def cmd_profiles(cfg):
    params = system_params(cfg)
    params.require_invertible_eve_correlation()
    table = run_validation_profiles(params, cfg.instances, PROFILE_GRID, cfg.max_iters)
    path = cfg.out or os.path.join(DATA_DIR, 'profiles.csv')
    ensure_output_dir(path)
    table.to_csv(path, index=False)
    print_profiles(table, path)
    return EXIT_OK


COMMANDS = {
    'solve': cmd_solve,
    'sweep': cmd_sweep,
    'convergence': cmd_convergence,
    'validate': cmd_validate,
    'profiles': cmd_profiles,
}


def main(argv=None):
    """
    Main execution function - parse flags, resolve settings, run one subcommand.

    Returns:
        int exit status
    """
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s',
                        stream=sys.stderr)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigurationError as exc:
        print(f"main.py {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SecrecyRateError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
