"""Generalized Clauser-Horne functional for bounded-probability outcomes.

For measurements whose single-outcome probabilities are confined to
[a, b] inside [0, 1], local realism bounds the combination

    P(n1,n2) - P(n1,n2') + P(n1',n2) + P(n1',n2')
      - (a2+b2) P(n1') - (a1+b1) P(n2) + a1 b2 + b1 a2  <=  0,

the scalar core being x1 y1 - x1 y2 + x2 y1 + x2 y2 - (a2+b2) x2
- (a1+b1) y1 + a1 b2 + b1 a2 <= 0 on the box.  The quantum singlet with
decay asymmetry alpha exceeds the bound by up to alpha^2 (sqrt(2)/2 - 1/2).
No clamping or renormalization is applied anywhere: a positive functional
value is the signal of interest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spin_algebra import as_unit_vector

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class Bounds:
    """Per-side probability bounds: responses on side i live in [ai, bi]."""

    a1: float
    b1: float
    a2: float
    b2: float

    def __post_init__(self) -> None:
        for a, b, side in ((self.a1, self.b1, 1), (self.a2, self.b2, 2)):
            if not (0.0 <= a <= b <= 1.0):
                raise ValueError(f"side-{side} bounds must satisfy 0 <= a <= b <= 1, got ({a}, {b})")

    @classmethod
    def symmetric(cls, alpha: float) -> "Bounds":
        """Equal bounds ((1-|alpha|)/2, (1+|alpha|)/2) on both sides."""
        a = (1.0 - abs(float(alpha))) / 2.0
        b = 1.0 - a
        return cls(a, b, a, b)


class CHSettings:
    """Four measurement directions: n1, n1' on the proton side, n2, n2' opposite."""

    __slots__ = ("n1", "n1p", "n2", "n2p")

    def __init__(self, n1, n1p, n2, n2p) -> None:
        self.n1 = as_unit_vector(n1)
        self.n1p = as_unit_vector(n1p)
        self.n2 = as_unit_vector(n2)
        self.n2p = as_unit_vector(n2p)

    @classmethod
    def coplanar(cls, theta: float) -> "CHSettings":
        """Directions in the xz-plane at polar angles 0, theta, 2 theta, 3 theta.

        This places the pair angles at theta(1,2) = theta(1',2) = theta(1',2')
        = theta and theta(1,2') = 3 theta.
        """

        def at(angle: float) -> np.ndarray:
            return np.array([math.sin(angle), 0.0, math.cos(angle)])

        return cls(at(0.0), at(2.0 * theta), at(theta), at(3.0 * theta))

    def axes(self) -> np.ndarray:
        """(4, 3) array in row order n1, n1p, n2, n2p."""
        return np.stack([self.n1, self.n1p, self.n2, self.n2p])

    def rotated(self, rotation: np.ndarray) -> "CHSettings":
        r = np.asarray(rotation, dtype=float)
        return CHSettings(r @ self.n1, r @ self.n1p, r @ self.n2, r @ self.n2p)

    def __repr__(self) -> str:
        return (
            f"CHSettings(n1={self.n1.tolist()}, n1p={self.n1p.tolist()}, "
            f"n2={self.n2.tolist()}, n2p={self.n2p.tolist()})"
        )


@dataclass(frozen=True)
class ProbabilityTable:
    """The six probabilities entering the CH functional."""

    p_12: float
    p_12p: float
    p_1p2: float
    p_1p2p: float
    p_1p: float
    p_2: float

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not (-1e-12 <= value <= 1.0 + 1e-12):
                raise ValueError(f"probability {name} = {value!r} outside [0, 1]")

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


def ch_functional(table: ProbabilityTable, bounds: Bounds) -> float:
    """Evaluate the generalized CH combination; positive means violation."""
    return (
        table.p_12
        - table.p_12p
        + table.p_1p2
        + table.p_1p2p
        - (bounds.a2 + bounds.b2) * table.p_1p
        - (bounds.a1 + bounds.b1) * table.p_2
        + bounds.a1 * bounds.b2
        + bounds.b1 * bounds.a2
    )


def scalar_ch(x1, x2, y1, y2, bounds: Bounds):
    """Scalar CH core; <= 0 whenever x's and y's lie inside their boxes.

    Accepts floats or broadcastable arrays; inputs outside the declared
    box (beyond 1e-12) raise.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    tol = 1e-12
    for v, lo, hi, name in (
        (x1, bounds.a1, bounds.b1, "x1"),
        (x2, bounds.a1, bounds.b1, "x2"),
        (y1, bounds.a2, bounds.b2, "y1"),
        (y2, bounds.a2, bounds.b2, "y2"),
    ):
        if np.any(v < lo - tol) or np.any(v > hi + tol):
            raise ValueError(f"{name} outside its box [{lo}, {hi}]")
    value = (
        x1 * y1
        - x1 * y2
        + x2 * y1
        + x2 * y2
        - (bounds.a2 + bounds.b2) * x2
        - (bounds.a1 + bounds.b1) * y1
        + bounds.a1 * bounds.b2
        + bounds.b1 * bounds.a2
    )
    return value if value.ndim else float(value)


def coplanar_lhs(theta, alpha: float):
    """Functional value alpha^2 [(3 cos t - cos 3t)/4 - 1/2] of the coplanar family.

    Vectorized over theta.
    """
    if abs(alpha) > 1.0:
        raise ValueError(f"decay parameter must satisfy |alpha| <= 1, got {alpha}")
    theta = np.asarray(theta, dtype=float)
    value = alpha * alpha * ((3.0 * np.cos(theta) - np.cos(3.0 * theta)) / 4.0 - 0.5)
    return value if value.ndim else float(value)


def quantum_table(settings: CHSettings, alpha: float) -> ProbabilityTable:
    """Singlet-state table: joints (1 + alpha^2 ni.nj)/4, marginals 1/2."""
    if abs(alpha) > 1.0:
        raise ValueError(f"decay parameter must satisfy |alpha| <= 1, got {alpha}")
    a2 = alpha * alpha

    def joint(u: np.ndarray, v: np.ndarray) -> float:
        return 0.25 * (1.0 + a2 * float(u @ v))

    return ProbabilityTable(
        p_12=joint(settings.n1, settings.n2),
        p_12p=joint(settings.n1, settings.n2p),
        p_1p2=joint(settings.n1p, settings.n2),
        p_1p2p=joint(settings.n1p, settings.n2p),
        p_1p=0.5,
        p_2=0.5,
    )


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    """Argmax of f on [lo, hi] by golden-section search (unimodal assumed)."""
    a, b = (lo, hi) if lo <= hi else (hi, lo)
    h = b - a
    if h <= tol:
        return (a + b) / 2.0
    steps = int(math.ceil(math.log(tol / h) / math.log(_INV_PHI)))
    c = a + _INV_PHI_SQ * h
    d = a + _INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(steps):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= _INV_PHI
            c = a + _INV_PHI_SQ * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            yd = f(d)
    return (a + b) / 2.0


def _spherical(t: float, phi: float) -> np.ndarray:
    st = math.sin(t)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(t)])


def maximize_violation(
    alpha: float,
    grid_step: float = math.radians(2.0),
    refine_tol: float = 1e-6,
) -> tuple[CHSettings, float]:
    """Search all four measurement directions for the largest functional value.

    Rotational invariance of the singlet closed form pins n1 = z and n1'
    to the xz-plane, leaving five spherical coordinates.  The coarse stage
    scans those on a grid; because the objective is linear in n2 and in n2'
    separately, scanning each opposite-side grid against its best partner
    is exactly equivalent to the full product-grid scan.  A coordinate-wise
    golden-section pass then refines the winner.
    """
    if abs(alpha) > 1.0:
        raise ValueError(f"decay parameter must satisfy |alpha| <= 1, got {alpha}")
    if not (0.0 < grid_step <= math.pi / 8.0):
        raise ValueError(f"grid_step must lie in (0, pi/8], got {grid_step}")

    bounds = Bounds.symmetric(alpha)

    def value_of(coords) -> float:
        a, t2, p2, t2p, p2p = coords
        settings = CHSettings(
            np.array([0.0, 0.0, 1.0]),
            _spherical(a, 0.0),
            _spherical(t2, p2),
            _spherical(t2p, p2p),
        )
        return ch_functional(quantum_table(settings, alpha), bounds)

    # coarse grid
    n_polar = max(int(math.ceil(math.pi / grid_step)), 2)
    n_azim = 2 * n_polar
    polar = np.linspace(0.0, math.pi, n_polar + 1)
    azim = np.linspace(0.0, 2.0 * math.pi, n_azim, endpoint=False)
    tt, pp = np.meshgrid(polar, azim, indexing="ij")
    st = np.sin(tt)
    dirs = np.stack([st * np.cos(pp), st * np.sin(pp), np.cos(tt)], axis=-1)  # (nt, np, 3)

    n1 = np.array([0.0, 0.0, 1.0])
    best = None
    for a in polar:
        n1p = _spherical(a, 0.0)
        i2 = np.unravel_index(np.argmax(dirs @ (n1 + n1p)), tt.shape)
        i2p = np.unravel_index(np.argmax(dirs @ (n1p - n1)), tt.shape)
        coords = (a, tt[i2], pp[i2], tt[i2p], pp[i2p])
        v = value_of(coords)
        if best is None or v > best[1]:
            best = (coords, v)

    # coordinate-wise refinement
    coords = list(best[0])
    best_coords, best_value = coords.copy(), best[1]
    span = grid_step
    for _ in range(60):
        for i in range(5):
            lo = coords[i] - span
            hi = coords[i] + span

            def along(x: float, i: int = i) -> float:
                trial = coords.copy()
                trial[i] = x
                return value_of(trial)

            coords[i] = _golden_max(along, lo, hi, tol=1e-10)
        new_value = value_of(coords)
        improvement = new_value - best_value
        if new_value > best_value:
            best_coords, best_value = coords.copy(), new_value
        if improvement <= refine_tol * 0.01:
            break
        span = max(span * 0.5, 1e-7)

    settings = CHSettings(
        n1,
        _spherical(best_coords[0], 0.0),
        _spherical(best_coords[1], best_coords[2]),
        _spherical(best_coords[3], best_coords[4]),
    )
    return settings, best_value


def violation_region(alpha: float, bound: float) -> tuple[float, float] | None:
    """Theta interval on (0, pi/2) where the coplanar curve exceeds ``bound``.

    Returns None when even the peak at pi/4 stays below the bound.  Roots
    are located by bisection to 1e-10 in theta.
    """
    if alpha == 0.0:
        raise ValueError("alpha must be nonzero; the curve is identically zero")
    if bound < 0.0:
        raise ValueError(f"bound must be nonnegative, got {bound}")

    peak = math.pi / 4.0
    if coplanar_lhs(peak, alpha) <= bound:
        return None

    def excess(theta: float) -> float:
        return coplanar_lhs(theta, alpha) - bound

    def bisect(lo: float, hi: float) -> float:
        # excess(lo) and excess(hi) must differ in sign
        f_lo = excess(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            f_mid = excess(mid)
            if f_mid == 0.0:
                return mid
            if (f_lo < 0.0) == (f_mid < 0.0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
            if abs(hi - lo) < 1e-10:
                break
        return 0.5 * (lo + hi)

    # curve starts at 0, peaks at pi/4, falls to -alpha^2/2 at pi/2
    theta_lo = 0.0 if bound == 0.0 else bisect(0.0, peak)
    theta_hi = bisect(math.pi / 2.0, peak)
    return (theta_lo, theta_hi)
