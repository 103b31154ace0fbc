"""Exterior map of ``[-1, 1]`` onto the exterior of the unit disk."""

from __future__ import annotations

import numpy as np


def exterior_map(z):
    """``z + sqrt(z^2 - 1)`` on the branch with modulus ``>= 1``.

    The product ``sqrt(z - 1) sqrt(z + 1)`` of principal roots has its cut on
    ``[-1, 1]`` only, so no branch fix-up is needed off the interval.
    """
    zz = np.asarray(z, dtype=complex)
    w = zz + np.sqrt(zz - 1.0) * np.sqrt(zz + 1.0)
    small = np.abs(w) < 1.0
    w = np.where(small, 1.0 / np.where(w == 0, 1.0, w), w)
    return w if np.ndim(z) else complex(w)
