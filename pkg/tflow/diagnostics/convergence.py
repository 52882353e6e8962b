from typing import Sequence

import numpy as np


def estimate_order(hs: Sequence[float], errors: Sequence[float]) -> float:
    """
    Observed order of accuracy: least-squares slope of log(error) against log(h).

    Zero errors carry no rate information and are left out; fewer than two usable points give nan.
    """
    hs = np.asarray(hs, dtype=float)
    errors = np.abs(np.asarray(errors, dtype=float))
    if hs.shape != errors.shape:
        raise ValueError(f'{len(hs)} mesh sizes for {len(errors)} errors')
    usable = (errors > 0.0) & (hs > 0.0)
    if np.count_nonzero(usable) < 2:
        return float('nan')
    slope, _ = np.polyfit(np.log(hs[usable]), np.log(errors[usable]), 1)
    return float(slope)
