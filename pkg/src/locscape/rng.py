"""Counter-based random streams.

Every stochastic routine in the package derives its randomness from a Philox
generator keyed by ``seed ^ index``.  Stream ``i`` of an ensemble is therefore
reproducible on its own, with no sequential dependence between trials, which
makes trial-parallel execution and partial reruns exact.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for trial/path ``index`` of an ensemble seeded by ``seed``."""
    key = (int(seed) ^ int(index)) & _MASK64
    return np.random.Generator(np.random.Philox(key=key))
