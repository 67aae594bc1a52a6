"""
sim_utils.py - Shared helpers for the Monte-Carlo studies

Used across experiment modules to keep them clean and consistent.
"""

from multiprocessing import Pool

import numpy as np
from tqdm import tqdm

from errors import ConfigurationError


def map_trials(func, items, threads=1, desc='Trials', quiet=False):
    """
    Apply func to every item and return the results in input order.

    With threads > 1 the work runs on a process pool; `imap` keeps the
    output ordered, so results never depend on the worker count. func must
    be a module-level function.

    Args:
        func: picklable callable of one argument
        items: list of work items
        threads: number of worker processes (1 = run inline)
        desc: progress-bar label
        quiet: hide the progress bar

    Returns:
        list of results, one per item
    """
    items = list(items)
    if not items:
        return []
    bar = dict(total=len(items), desc=desc, leave=False, disable=quiet)
    if threads <= 1:
        return [func(item) for item in tqdm(items, **bar)]
    chunksize = max(1, len(items) // (threads * 8))
    with Pool(threads) as pool:
        return list(tqdm(pool.imap(func, items, chunksize=chunksize), **bar))


def parse_values(text, integer=False):
    """
    Parse a sweep value list.

    Accepts 'start:step:stop' (stop included) or a comma-separated list.

    Examples:
        parse_values('0:3:12')      -> [0.0, 3.0, 6.0, 9.0, 12.0]
        parse_values('6,8,10', True) -> [6, 8, 10]
    """
    text = str(text).strip()
    try:
        if ':' in text:
            start, step, stop = (float(p) for p in text.split(':'))
            if step <= 0:
                raise ConfigurationError(f"sweep step must be positive in '{text}'")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            values = [round(start + k * step, 12) for k in range(max(count, 0))]
        else:
            values = [float(p) for p in text.split(',') if p.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse sweep values '{text}': {exc}") from exc

    if not values:
        raise ConfigurationError(f"sweep values '{text}' are empty")
    if integer:
        if any(v != int(v) for v in values):
            raise ConfigurationError(f"integer axis got non-integer values '{text}'")
        return [int(v) for v in values]
    return values
