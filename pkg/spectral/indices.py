# Third party imports
import numpy as np

# Local imports
from .exceptions import DimensionMismatch


def normalized_difference(a, b) -> np.ndarray:
    """
    (a - b) / (a + b) over unit-interval grids. Pixels where a + b == 0
    are defined as 0.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"Grids differ in shape: {a.shape} vs {b.shape}")

    total = a + b
    out = np.zeros(a.shape, dtype=np.float64)
    np.divide(a - b, total, out=out, where=total > 0)
    return np.clip(out, -1.0, 1.0)
