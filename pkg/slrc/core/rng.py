"""
Seedable random streams.

Each trial gets its own generator derived from the root seed and the trial's
coordinates through numpy's SeedSequence, so results do not depend on the order
in which workers pick up the trials.
"""

import numpy as np


def trial_stream(seed: int, *keys: int) -> np.random.Generator:
    """
    Independent generator for one work item.

    Args:
        seed: Root seed of the run
        *keys: Non-negative integers locating the work item (experiment tag, cell, trial, ...)

    Returns:
        Generator on the SFC64 bit generator (64-bit state words)
    """
    entropy = [int(seed)] + [int(k) for k in keys]
    return np.random.Generator(np.random.SFC64(np.random.SeedSequence(entropy)))
