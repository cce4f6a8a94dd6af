"""Vectorized numpy implementation of the event kernels.

A uniform block is a (m, 7) float64 array, one event per row:

    col 0  polar draw for the proton direction
    col 1  azimuth draw for the proton direction
    col 2  draw for the opening-angle cosine of the antiproton
    col 3  azimuth draw for the antiproton about the proton axis
    col 4  draw for the Lambda decay length
    col 5  draw for the anti-Lambda decay length
    col 6  draw for the efficiency thinning

The compiled kernel consumes the same block with the same arithmetic, so
both backends map a given block to identical events.  Keep the formulas
here expression-for-expression in sync with _core.pyx.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def directions_from_uniforms(u: np.ndarray, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Map block columns 0..3 to (proton, antiproton) unit direction pairs.

    The proton direction is isotropic; the antiproton's cosine c relative
    to the proton follows the density (1 + alpha^2 c)/2 via the closed-form
    inverse CDF, degrading to uniform when alpha^2 < 1e-6.
    """
    z1 = 2.0 * u[:, 0] - 1.0
    r1 = np.sqrt(np.maximum(1.0 - z1 * z1, 0.0))
    phi1 = TWO_PI * u[:, 1]
    n1x = r1 * np.cos(phi1)
    n1y = r1 * np.sin(phi1)
    n1z = z1

    a2 = alpha * alpha
    if a2 < 1e-6:
        c = 2.0 * u[:, 2] - 1.0
    else:
        disc = 1.0 - a2 * (2.0 - a2 - 4.0 * u[:, 2])
        c = (-1.0 + np.sqrt(disc)) / a2
        c = np.minimum(np.maximum(c, -1.0), 1.0)
    s = np.sqrt(np.maximum(1.0 - c * c, 0.0))
    phi2 = TWO_PI * u[:, 3]

    # orthonormal frame about the proton axis; helper axis z unless the
    # proton is too close to the poles
    use_z = np.abs(n1z) <= 0.9
    inv_a = 1.0 / np.sqrt(np.where(use_z, n1x * n1x + n1y * n1y, 1.0))
    inv_b = 1.0 / np.sqrt(np.where(use_z, 1.0, n1y * n1y + n1z * n1z))
    e1x = np.where(use_z, -n1y * inv_a, 0.0)
    e1y = np.where(use_z, n1x * inv_a, -n1z * inv_b)
    e1z = np.where(use_z, 0.0, n1y * inv_b)
    e2x = n1y * e1z - n1z * e1y
    e2y = n1z * e1x - n1x * e1z
    e2z = n1x * e1y - n1y * e1x

    sc = s * np.cos(phi2)
    ss = s * np.sin(phi2)
    n_p = np.stack([n1x, n1y, n1z], axis=-1)
    n_pbar = np.stack(
        [
            sc * e1x + ss * e2x + c * n1x,
            sc * e1y + ss * e2y + c * n1y,
            sc * e1z + ss * e2z + c * n1z,
        ],
        axis=-1,
    )
    return n_p, n_pbar


def _keep_mask(u: np.ndarray, beta: float, efficiency: float, spacelike_only: bool) -> np.ndarray:
    keep = u[:, 6] < efficiency
    if spacelike_only:
        x1 = -np.log1p(-u[:, 4])
        x2 = -np.log1p(-u[:, 5])
        if beta < 1.0:
            k = (1.0 + beta) / (1.0 - beta)
            keep &= (x1 <= k * x2) & (x2 <= k * x1)
    return keep


def counts_from_directions(
    n_p: np.ndarray, n_pbar: np.ndarray, axes: np.ndarray, cos_delta: float
) -> np.ndarray:
    """Cone-membership counts: [kept, 4 joint counts, 4 marginal counts].

    Joint order: (n1,n2), (n1,n2'), (n1',n2), (n1',n2'); marginal order:
    proton at n1, n1', antiproton at n2, n2'.  Boundary inclusive.
    """
    in1 = n_p[:, 0] * axes[0, 0] + n_p[:, 1] * axes[0, 1] + n_p[:, 2] * axes[0, 2] >= cos_delta
    in1p = n_p[:, 0] * axes[1, 0] + n_p[:, 1] * axes[1, 1] + n_p[:, 2] * axes[1, 2] >= cos_delta
    in2 = n_pbar[:, 0] * axes[2, 0] + n_pbar[:, 1] * axes[2, 1] + n_pbar[:, 2] * axes[2, 2] >= cos_delta
    in2p = n_pbar[:, 0] * axes[3, 0] + n_pbar[:, 1] * axes[3, 1] + n_pbar[:, 2] * axes[3, 2] >= cos_delta
    return np.array(
        [
            n_p.shape[0],
            np.count_nonzero(in1 & in2),
            np.count_nonzero(in1 & in2p),
            np.count_nonzero(in1p & in2),
            np.count_nonzero(in1p & in2p),
            np.count_nonzero(in1),
            np.count_nonzero(in1p),
            np.count_nonzero(in2),
            np.count_nonzero(in2p),
        ],
        dtype=np.int64,
    )


def accumulate_counts(
    u: np.ndarray,
    alpha: float,
    beta: float,
    efficiency: float,
    spacelike_only: bool,
    axes: np.ndarray,
    cos_delta: float,
) -> np.ndarray:
    """Fused thinning + transform + cone counting for one uniform block."""
    kept = u[_keep_mask(u, beta, efficiency, spacelike_only)]
    n_p, n_pbar = directions_from_uniforms(kept, alpha)
    return counts_from_directions(n_p, n_pbar, axes, cos_delta)


def events_from_uniforms(
    u: np.ndarray, alpha: float, beta: float, efficiency: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Full event arrays (directions, decay lengths, space-like flag) after thinning."""
    keep = _keep_mask(u, beta, efficiency, spacelike_only=False)
    kept = u[keep]
    n_p, n_pbar = directions_from_uniforms(kept, alpha)
    x1 = -np.log1p(-kept[:, 4])
    x2 = -np.log1p(-kept[:, 5])
    if beta >= 1.0:
        spacelike = np.ones(kept.shape[0], dtype=bool)
    else:
        k = (1.0 + beta) / (1.0 - beta)
        spacelike = (x1 <= k * x2) & (x2 <= k * x1)
    return n_p, n_pbar, x1, x2, spacelike
