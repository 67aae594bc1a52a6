"""
summary.py - Console reports

Formatted summaries of a single solve, a sweep, a convergence study, the
oracle comparison and the validation profiles. Data files are written
elsewhere; everything here goes to stdout.
"""

import math

from optimizer import complexity_estimate


def _banner(title):
    print("\n" + "=" * 70)
    print(title)
    print("=" * 70)


def _fmt(value, spec='.6f'):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return '-'
    return format(value, spec)


def print_solution(sol, params, label='PROPOSED SCHEME'):
    """
    Print the outcome of one solver run.

    Covers:
    - status and optimized (phi, lambda)
    - per-link SNRs and rates at the optimum
    - the per-iteration trace
    - the estimated operation count of the run
    """
    _banner(f"SECRECY RATE - {label}")
    print(f"   Status:                          {sol.status.value}")
    print(f"   Antennas (PT / ED):              {params.nt} / {params.ne}")
    print(f"   QoS threshold:                   {params.gamma_s_th_db:.2f} dB "
          f"({params.gamma_s_th:.4f} linear)")

    if not sol.feasible:
        print("\n   🔴 QoS threshold cannot be met on this realization")
        print("=" * 70)
        return

    b = sol.breakdown
    print(f"\n OPTIMUM")
    print(f"   Power factor phi:                {sol.phi_opt:>12.6f}")
    print(f"   Weighting factor lambda:         {_fmt(sol.lambda_opt, '>12.4f')}")
    print(f"   Secrecy rate (bits/s/Hz):        {sol.r_sec:>12.6f}")
    print(f"   Primary SNR gamma_s:             {b['gamma_s']:>12.4f}")
    print(f"   BD SNR gamma_c:                  {b['gamma_c']:>12.4f}")
    print(f"   ED SNR gamma_e:                  {b['gamma_e']:>12.4f}")
    print(f"   BD rate / ED rate:               {b['r_c']:.4f} / {b['r_e']:.4f}")

    print(f"\n ITERATIONS ({sol.iterations})")
    print(f"   Operation count (est.):          "
          f"{complexity_estimate(params.nt, params.d, sol.iterations):.3e}")
    print(f"   {'j':>3}  {'phi':>10}  {'lambda':>8}  {'R_sec':>12}  {'gamma_s':>10}")
    for t in sol.trace:
        print(f"   {t.iteration:>3}  {t.phi:>10.6f}  {_fmt(t.lambda1, '>8.4f')}  "
              f"{t.r_sec:>12.8f}  {t.gamma_s:>10.4f}")
    print("=" * 70)


def print_validation(report):
    """
    Print closed-form vs brute-force deltas.

    Args:
        report: dict with keys phi_closed, phi_grid, r_closed, r_grid,
            r_wstep, r_sampled, step, agrees
    """
    _banner("ORACLE AGREEMENT")
    print(f"   phi (closed form / grid):        {report['phi_closed']:.6f} / {report['phi_grid']:.6f}")
    print(f"   |delta phi|:                     {abs(report['phi_closed'] - report['phi_grid']):.2e}"
          f"  (grid step {report['step']:.0e})")
    print(f"   R_sec closed form - grid:        {report['r_closed'] - report['r_grid']:+.2e}")
    print(f"   R_sec w-step - sampled beams:    {report['r_wstep'] - report['r_sampled']:+.2e}")
    print(f"\n   {'✅ oracles agree' if report['agrees'] else '🔴 oracle exceeds the solver'}")
    print("=" * 70)


def print_sweep(result, path=None):
    """Print the sweep table, one block per scheme."""
    spec = result.spec
    _banner(f"SWEEP OVER {spec.swept_parameter} ({spec.trials} trials per value)")
    for scheme in spec.schemes:
        rows = result.table[result.table['scheme'] == scheme]
        print(f"\n {scheme.upper()}")
        print(f"   {'value':>10}  {'R_sec':>10}  {'phi':>8}  {'lambda':>8}  {'iters':>6}  {'feasible':>8}")
        for _, r in rows.iterrows():
            print(f"   {r['parameter']:>10g}  {_fmt(r['mean_r_sec'], '>10.4f')}  "
                  f"{_fmt(r['mean_phi'], '>8.4f')}  {_fmt(r['mean_lambda'], '>8.4f')}  "
                  f"{_fmt(r['mean_iters'], '>6.2f')}  {r['feasible_frac']:>8.1%}")
    if path:
        print(f"\n✅ Sweep table saved to {path}")
    print("=" * 70)


def print_convergence(result, tolerance_table=None, path=None):
    """Print the convergence summary and, if given, the tolerance study."""
    _banner("CONVERGENCE OF THE ALTERNATING ALGORITHM")
    print(f"   Feasible runs:                   {result.feasible} / {result.trials}")
    if result.feasible:
        print(f"   Median passes to {result.tolerance:.0e}:       {result.median_iterations:>8.1f}")
        print(f"   95th percentile:                 {result.p95_iterations:>8.1f}")
        print(f"   Runs stopped by max-iters:       {result.max_iters_hit:>8}")

        print(f"\n MEAN TRAJECTORY")
        for _, r in result.trajectory.iterrows():
            print(f"   j={int(r['iteration']):<3} R_sec = {r['mean_r_sec']:.8f}")

    if tolerance_table is not None and len(tolerance_table):
        print(f"\n TOLERANCE STUDY")
        print(f"   {'tolerance':>10}  {'mean':>6}  {'median':>6}  {'max':>4}")
        for _, r in tolerance_table.iterrows():
            print(f"   {r['tolerance']:>10.0e}  {r['mean_iters']:>6.2f}  "
                  f"{r['median_iters']:>6.1f}  {int(r['max_iters']):>4}")
    if path:
        print(f"\n✅ Trajectory table saved to {path}")
    print("=" * 70)


def print_profiles(table, path=None):
    """Print the chosen point of each profiled instance."""
    _banner("VALIDATION PROFILES")
    chosen = table[table['chosen']]
    if chosen.empty:
        print("   🔴 No feasible instance to profile")
    for _, r in chosen.iterrows():
        print(f"   instance {int(r['instance'])}: {r['curve']:<6} = {r['x']:.4f}  "
              f"R_sec = {r['r_sec']:.6f}")
    if path:
        print(f"\n✅ Profile table saved to {path}")
    print("=" * 70)
