"""Space-like separation of the two decay vertices.

The hyperons separate back to back at speed fraction beta; each decays
after an exponentially distributed flight length.  With lengths x1, x2 in
units of the mean lab-frame decay length, the two decays are outside each
other's light cones iff 1/k <= x1/x2 <= k with k = (1+beta)/(1-beta).
The fraction of such pairs is exactly beta, which weakens the attainable
classical bound from 0 to (1-beta) alpha^2 / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import philox_stream

# speed fraction of the hyperons in the eta_c -> Lambda anti-Lambda decay
BETA_DEFAULT = 0.664

_CHUNK = 1 << 20


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (0.0 <= beta < 1.0):
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    return beta


def beta_from_masses(m_parent: float, m_daughter: float) -> float:
    """Daughter speed fraction in a symmetric two-body decay at rest.

    beta = sqrt(1 - 4 m_d^2 / m_p^2); requires m_parent > 2 m_daughter.
    """
    if m_parent <= 0.0 or m_daughter <= 0.0:
        raise ValueError("masses must be positive")
    if m_parent <= 2.0 * m_daughter:
        raise ValueError(
            f"decay below threshold: m_parent = {m_parent} <= 2 * {m_daughter}"
        )
    ratio = 2.0 * m_daughter / m_parent
    return math.sqrt(1.0 - ratio * ratio)


@dataclass(frozen=True)
class KinematicConfig:
    """Hyperon speed fraction, either given directly or derived from masses."""

    beta: float = BETA_DEFAULT

    def __post_init__(self) -> None:
        _check_beta(self.beta)

    @classmethod
    def from_masses(cls, m_parent: float, m_daughter: float) -> "KinematicConfig":
        return cls(beta=beta_from_masses(m_parent, m_daughter))

    @property
    def k(self) -> float:
        return (1.0 + self.beta) / (1.0 - self.beta)


def is_spacelike(x1, x2, beta: float):
    """Whether decays at lengths x1, x2 are space-like separated (boundary inclusive).

    Vectorized over x1, x2.  Evaluated as x1 <= k x2 and x2 <= k x1 to
    avoid the division; beta = 1 degenerates to everything space-like.
    """
    beta = float(beta)
    if not (0.0 <= beta <= 1.0):
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(x1 <= 0.0) or np.any(x2 <= 0.0):
        raise ValueError("decay lengths must be positive")
    if beta == 1.0:
        result = np.broadcast_to(True, np.broadcast_shapes(x1.shape, x2.shape))
        return bool(result) if result.ndim == 0 else np.array(result)
    k = (1.0 + beta) / (1.0 - beta)
    result = (x1 <= k * x2) & (x2 <= k * x1)
    return bool(result) if result.ndim == 0 else result


def spacelike_fraction_analytic(beta: float) -> float:
    """Exact space-like fraction for unit-mean exponential decay lengths.

    The double exponential integral gives (k-1)/(k+1), which simplifies
    to beta itself.
    """
    return _check_beta(beta)


def spacelike_fraction_mc(beta: float, n: int, seed: int) -> tuple[float, float]:
    """Monte Carlo check of the space-like fraction, with binomial stderr."""
    beta = _check_beta(beta)
    if n < 1:
        raise ValueError("need at least one sample")
    hits = 0
    done = 0
    stream = 0
    while done < n:
        m = min(_CHUNK, n - done)
        u = philox_stream(seed, stream).random((m, 2))
        x = -np.log1p(-u)
        hits += int(np.count_nonzero(is_spacelike(x[:, 0], x[:, 1], beta)))
        done += m
        stream += 1
    frac = hits / n
    stderr = math.sqrt(max(frac * (1.0 - frac), 1.0 / n) / n)
    return frac, stderr


def timelike_max(alpha: float) -> float:
    """Largest CH value a communicating (time-like) pair can fake: alpha^2/2."""
    if abs(alpha) > 1.0:
        raise ValueError(f"decay parameter must satisfy |alpha| <= 1, got {alpha}")
    return alpha * alpha / 2.0


def mixed_bound(alpha: float, beta: float) -> float:
    """Classical bound for the mixed ensemble: beta * 0 + (1-beta) alpha^2/2."""
    if abs(alpha) > 1.0:
        raise ValueError(f"decay parameter must satisfy |alpha| <= 1, got {alpha}")
    if not (0.0 <= beta <= 1.0):
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    return (1.0 - beta) * alpha * alpha / 2.0


def critical_beta() -> float:
    """Speed fraction above which the quantum peak clears the mixed bound: 2 - sqrt(2)."""
    return 2.0 - math.sqrt(2.0)
