"""Simulated decay experiment: event generation, cone counting, CH statistic.

Events are (proton, antiproton) direction pairs drawn from the joint
angular law proportional to 1 + alpha^2 n1.n2, the exact distribution the
singlet state predicts for the double weak decay.  The six probabilities
of the CH functional are estimated by counting events whose directions
fall inside angular cones about the measurement axes:

    joint     p = 4 pi^2 N_in / (N dOmega^2)
    marginal  p = 2 pi   N_in / (N dOmega)

with dOmega = 2 pi (1 - cos delta) the cone solid angle.  Averaging the
correlation over finite cones attenuates it by the geometric factor
kappa = ((1 + cos delta)/2)^2; the experiment-level estimator divides the
extracted correlation part (joint minus product of marginals) by kappa.
Only this acceptance geometry is corrected; nothing is renormalized
against the quantum prediction.

Generation is chunked into fixed-size streams keyed by (seed, chunk
index), so results are bit-reproducible and independent of how chunks are
scheduled across threads.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .ch_inequality import Bounds, CHSettings, ProbabilityTable, ch_functional
from .quantum_model import ALPHA_DEFAULT
from .rng import philox_stream
from .spacelike import BETA_DEFAULT

# events per random stream; fixed so results never depend on scheduling
KERNEL_CHUNK = 1 << 20

MIN_EVENTS_USED = 10_000

EVENT_CSV_HEADER = ["npx", "npy", "npz", "nbx", "nby", "nbz", "x1", "x2", "spacelike"]

FOUR_PI_SQ = 4.0 * math.pi * math.pi
TWO_PI = 2.0 * math.pi


class UnderPoweredError(RuntimeError):
    """Raised when too few events survive to support the CH estimate."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs of one simulated experiment."""

    n_events: int
    seed: int = 0
    alpha: float = ALPHA_DEFAULT
    beta: float = BETA_DEFAULT
    cone_half_angle: float = math.radians(10.0)
    efficiency: float = 1.0
    spacelike_only: bool = False

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not (0.0 <= self.beta < 1.0):
            raise ValueError(f"beta must lie in [0, 1), got {self.beta}")
        if self.n_events < 1:
            raise ValueError("n_events must be at least 1")
        if not (0.0 < self.cone_half_angle < math.pi / 4.0):
            raise ValueError("cone_half_angle must lie in (0, pi/4)")
        if not (0.0 < self.efficiency <= 1.0):
            raise ValueError(f"efficiency must lie in (0, 1], got {self.efficiency}")


@dataclass(frozen=True, eq=False)
class EventRecord:
    """One simulated decay pair."""

    n_p: np.ndarray
    n_pbar: np.ndarray
    x1: float
    x2: float
    spacelike: bool


class EventSample:
    """Column-wise container for simulated events."""

    def __init__(self, n_p, n_pbar, x1, x2, spacelike) -> None:
        self.n_p = np.asarray(n_p, dtype=float).reshape(-1, 3)
        self.n_pbar = np.asarray(n_pbar, dtype=float).reshape(-1, 3)
        self.x1 = np.asarray(x1, dtype=float).reshape(-1)
        self.x2 = np.asarray(x2, dtype=float).reshape(-1)
        self.spacelike = np.asarray(spacelike, dtype=bool).reshape(-1)
        n = len(self.x1)
        if not (len(self.n_p) == len(self.n_pbar) == len(self.x2) == len(self.spacelike) == n):
            raise ValueError("event columns have mismatched lengths")

    def __len__(self) -> int:
        return len(self.x1)

    def record(self, i: int) -> EventRecord:
        return EventRecord(
            n_p=self.n_p[i].copy(),
            n_pbar=self.n_pbar[i].copy(),
            x1=float(self.x1[i]),
            x2=float(self.x2[i]),
            spacelike=bool(self.spacelike[i]),
        )

    def filtered(self, mask: np.ndarray) -> "EventSample":
        return EventSample(
            self.n_p[mask], self.n_pbar[mask], self.x1[mask], self.x2[mask], self.spacelike[mask]
        )


@dataclass(frozen=True, eq=False)
class CHEstimate:
    """CH statistic estimated from counted events."""

    table: ProbabilityTable
    value: float
    stderr: float
    z_score: float
    n_used: int
    counts: np.ndarray


def dilution_factor(cone_half_angle: float) -> float:
    """Attenuation of the angular correlation from averaging over two cones."""
    return ((1.0 + math.cos(cone_half_angle)) / 2.0) ** 2


def inverse_cdf_cos(u, alpha: float):
    """Opening-angle cosine c(u) solving (c+1)/2 + alpha^2 (c^2-1)/4 = u."""
    u = np.asarray(u, dtype=float)
    a2 = alpha * alpha
    if a2 < 1e-6:
        c = 2.0 * u - 1.0
    else:
        c = (-1.0 + np.sqrt(1.0 - a2 * (2.0 - a2 - 4.0 * u))) / a2
        c = np.minimum(np.maximum(c, -1.0), 1.0)
    return c if c.ndim else float(c)


def sample_pair(rng: np.random.Generator, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Draw one (proton, antiproton) direction pair from the joint angular law."""
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    u = np.zeros((1, 7))
    u[0, :4] = rng.random(4)
    n_p, n_pbar = _kernels.directions_from_uniforms(u, alpha)
    return n_p[0], n_pbar[0]


def _chunk_sizes(n_events: int):
    done = 0
    stream = 0
    while done < n_events:
        m = min(KERNEL_CHUNK, n_events - done)
        yield stream, m
        done += m
        stream += 1


def generate_events(config: GeneratorConfig) -> EventSample:
    """Materialize all surviving events; memory scales with n_events."""
    parts = []
    for stream, m in _chunk_sizes(config.n_events):
        u = philox_stream(config.seed, stream).random((m, 7))
        parts.append(
            _kernels.events_from_uniforms(u, config.alpha, config.beta, config.efficiency)
        )
    return EventSample(*(np.concatenate(cols) for cols in zip(*parts)))


def write_events_csv(events: EventSample, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EVENT_CSV_HEADER)
        for i in range(len(events)):
            writer.writerow(_event_row(events, i))


def _event_row(events: EventSample, i: int) -> list[str]:
    floats = [
        events.n_p[i, 0], events.n_p[i, 1], events.n_p[i, 2],
        events.n_pbar[i, 0], events.n_pbar[i, 1], events.n_pbar[i, 2],
        events.x1[i], events.x2[i],
    ]
    return [f"{v:.17g}" for v in floats] + [str(int(events.spacelike[i]))]


def export_events(config: GeneratorConfig, path) -> int:
    """Generate and stream events to CSV without holding them all in memory."""
    total = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EVENT_CSV_HEADER)
        for stream, m in _chunk_sizes(config.n_events):
            u = philox_stream(config.seed, stream).random((m, 7))
            chunk = EventSample(
                *_kernels.events_from_uniforms(u, config.alpha, config.beta, config.efficiency)
            )
            for i in range(len(chunk)):
                writer.writerow(_event_row(chunk, i))
            total += len(chunk)
    return total


def read_events_csv(path) -> EventSample:
    with open(path, newline="") as fh:
        header = fh.readline().strip().split(",")
        if header != EVENT_CSV_HEADER:
            raise ValueError(f"unexpected event CSV header: {header}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.size == 0:
        data = data.reshape(0, 9)
    if data.shape[1] != 9:
        raise ValueError(f"expected 9 columns, got {data.shape[1]}")
    return EventSample(
        data[:, 0:3], data[:, 3:6], data[:, 6], data[:, 7], data[:, 8] != 0.0
    )


def _cone_solid_angle(cone_half_angle: float) -> float:
    if not (0.0 < cone_half_angle < math.pi / 4.0):
        raise ValueError("cone half-angle must lie in (0, pi/4)")
    return TWO_PI * (1.0 - math.cos(cone_half_angle))


def estimate_joint(events: EventSample, n1, n2, cone_half_angle: float) -> tuple[float, float]:
    """Raw cone estimate of the joint probability (no dilution correction)."""
    d_omega = _cone_solid_angle(cone_half_angle)
    n = len(events)
    if n == 0:
        raise ValueError("no events to estimate from")
    cos_delta = math.cos(cone_half_angle)
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    inside = ((events.n_p @ n1) >= cos_delta) & ((events.n_pbar @ n2) >= cos_delta)
    n_in = int(np.count_nonzero(inside))
    scale = FOUR_PI_SQ / (d_omega * d_omega)
    frac = n_in / n
    return scale * frac, scale * math.sqrt(frac * (1.0 - frac) / n)


def estimate_marginal(events: EventSample, n1, cone_half_angle: float) -> tuple[float, float]:
    """Cone estimate of the one-side (proton) probability."""
    d_omega = _cone_solid_angle(cone_half_angle)
    n = len(events)
    if n == 0:
        raise ValueError("no events to estimate from")
    cos_delta = math.cos(cone_half_angle)
    inside = (events.n_p @ np.asarray(n1, dtype=float)) >= cos_delta
    n_in = int(np.count_nonzero(inside))
    scale = TWO_PI / d_omega
    frac = n_in / n
    return scale * frac, scale * math.sqrt(frac * (1.0 - frac) / n)


def _estimate_from_counts(counts: np.ndarray, alpha: float, cone_half_angle: float) -> CHEstimate:
    n = int(counts[0])
    if n < MIN_EVENTS_USED:
        raise UnderPoweredError(
            f"only {n} events survived; need at least {MIN_EVENTS_USED} for the CH estimate"
        )
    d_omega = _cone_solid_angle(cone_half_angle)
    kappa = dilution_factor(cone_half_angle)
    joint_scale = FOUR_PI_SQ / (d_omega * d_omega)
    marg_scale = TWO_PI / d_omega

    def frac_var(count: int) -> float:
        # one-count floor keeps the propagated stderr strictly positive
        eff = max(int(count), 1)
        return (eff / n) * (1.0 - count / n) / n

    joints_raw = joint_scale * counts[1:5] / n
    joint_var = (joint_scale**2) * np.array([frac_var(c) for c in counts[1:5]])
    margs = marg_scale * counts[5:9] / n
    marg_var = (marg_scale**2) * np.array([frac_var(c) for c in counts[5:9]])
    m1, m1p, m2, m2p = margs

    # divide the correlation part of each joint by the cone dilution
    products = np.array([m1 * m2, m1 * m2p, m1p * m2, m1p * m2p])
    joints = products + (joints_raw - products) / kappa
    joint_var /= kappa * kappa

    try:
        table = ProbabilityTable(
            p_12=float(joints[0]),
            p_12p=float(joints[1]),
            p_1p2=float(joints[2]),
            p_1p2p=float(joints[3]),
            p_1p=float(m1p),
            p_2=float(m2),
        )
    except ValueError as exc:
        raise UnderPoweredError(
            f"cone counts too sparse for a valid probability table: {exc}"
        ) from exc

    bounds = Bounds.symmetric(alpha)
    value = ch_functional(table, bounds)
    # independent binomial errors across the six estimates, in quadrature
    variance = (
        float(joint_var.sum())
        + (bounds.a2 + bounds.b2) ** 2 * marg_var[1]
        + (bounds.a1 + bounds.b1) ** 2 * marg_var[2]
    )
    stderr = math.sqrt(variance)
    return CHEstimate(
        table=table,
        value=value,
        stderr=stderr,
        z_score=value / stderr,
        n_used=n,
        counts=np.array(counts, dtype=np.int64),
    )


def run_experiment(config: GeneratorConfig, settings: CHSettings, threads: int = 1) -> CHEstimate:
    """Generate events and estimate the CH statistic at the given settings.

    Deterministic for a fixed config; the thread count only changes how
    the fixed chunk streams are scheduled.
    """
    axes = np.ascontiguousarray(settings.axes())
    cos_delta = math.cos(config.cone_half_angle)

    def one_chunk(args) -> np.ndarray:
        stream, m = args
        u = philox_stream(config.seed, stream).random((m, 7))
        return _kernels.accumulate_counts(
            u,
            config.alpha,
            config.beta,
            config.efficiency,
            config.spacelike_only,
            axes,
            cos_delta,
        )

    chunks = list(_chunk_sizes(config.n_events))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one_chunk, chunks))
    else:
        parts = [one_chunk(c) for c in chunks]
    counts = np.sum(parts, axis=0, dtype=np.int64)
    return _estimate_from_counts(counts, config.alpha, config.cone_half_angle)


def analyze_events(
    events: EventSample,
    settings: CHSettings,
    alpha: float,
    cone_half_angle: float,
    spacelike_only: bool = False,
) -> CHEstimate:
    """CH estimate from an existing event sample (e.g. re-imported CSV)."""
    if spacelike_only:
        events = events.filtered(events.spacelike)
    axes = settings.axes()
    counts = _kernels.counts_from_directions(
        events.n_p, events.n_pbar, axes, math.cos(cone_half_angle)
    )
    return _estimate_from_counts(counts, alpha, cone_half_angle)
