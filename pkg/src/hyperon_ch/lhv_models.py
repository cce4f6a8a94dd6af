"""Local hidden variable models with bounded response functions.

A model assigns each side a response p_i(lambda, n) confined to declared
bounds [a_i, b_i]; outcome probabilities are averages over a hidden
variable lambda drawn from a distribution on the unit sphere.  Every such
model satisfies the generalized CH inequality, which makes these models
the classical reference line for the quantum predictions.

Estimates here evaluate all probabilities on a *common* lambda stream:
the per-sample CH combination is then the scalar inequality evaluated
inside the box, so it is pointwise nonpositive and the Monte Carlo
variance of the combination collapses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ch_inequality import Bounds, CHSettings, ProbabilityTable, ch_functional
from .quantum_model import ALPHA_DEFAULT
from .rng import philox_stream, uniform_sphere

_CHUNK = 1 << 20
_BOUND_TOL = 1e-9

ResponseFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
HiddenSampler = Callable[[np.random.Generator, int], np.ndarray]

MODEL_NAMES = ("constant", "linear_spin", "clipped")


@dataclass(frozen=True)
class LhvModel:
    """Hidden-variable sampler plus per-side response functions.

    ``response_i(lam, n)`` maps a (m, 3) batch of hidden vectors and one
    measurement direction to (m,) response probabilities inside
    [a_i, b_i].
    """

    name: str
    bounds: Bounds
    response_1: ResponseFn
    response_2: ResponseFn
    sample_hidden: HiddenSampler = field(default=uniform_sphere)


def bundled_model(name: str, alpha: float = ALPHA_DEFAULT) -> LhvModel:
    """Build one of the reference models, with bounds derived from alpha.

    constant     p = 1/2 on both sides; fully uncorrelated.
    linear_spin  p1 = (1 + alpha lam.n)/2, p2 = (1 - alpha lam.n)/2;
                 mimics the quantum joint distribution at one third of
                 the correlation strength.
    clipped      deterministic bound-saturating responses a or b chosen
                 by the sign of lam.n (same orientation on both sides).
    """
    bounds = Bounds.symmetric(alpha)
    a, b = bounds.a1, bounds.b1

    if name == "constant":
        def resp(lam: np.ndarray, n: np.ndarray) -> np.ndarray:
            return np.full(lam.shape[0], 0.5)

        return LhvModel(name, bounds, resp, resp)

    if name == "linear_spin":
        def resp_plus(lam: np.ndarray, n: np.ndarray) -> np.ndarray:
            return 0.5 * (1.0 + alpha * (lam @ n))

        def resp_minus(lam: np.ndarray, n: np.ndarray) -> np.ndarray:
            return 0.5 * (1.0 - alpha * (lam @ n))

        return LhvModel(name, bounds, resp_plus, resp_minus)

    if name == "clipped":
        def resp(lam: np.ndarray, n: np.ndarray) -> np.ndarray:
            return np.where(lam @ n >= 0.0, b, a)

        return LhvModel(name, bounds, resp, resp)

    raise ValueError(f"unknown model {name!r}; available: {', '.join(MODEL_NAMES)}")


def _checked_response(model: LhvModel, side: int, lam: np.ndarray, n: np.ndarray) -> np.ndarray:
    fn = model.response_1 if side == 1 else model.response_2
    lo, hi = (model.bounds.a1, model.bounds.b1) if side == 1 else (model.bounds.a2, model.bounds.b2)
    r = np.asarray(fn(lam, n), dtype=float)
    if np.any(r < lo - _BOUND_TOL) or np.any(r > hi + _BOUND_TOL):
        raise ValueError(
            f"model {model.name!r} response_{side} left its declared bounds [{lo}, {hi}]"
        )
    return r


def _chunks(samples: int):
    done = 0
    stream = 0
    while done < samples:
        m = min(_CHUNK, samples - done)
        yield stream, m
        done += m
        stream += 1


def _mean_sem(total: float, total_sq: float, n: int) -> tuple[float, float]:
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0) * n / (n - 1)
    return mean, float(np.sqrt(var / n))


def lhv_joint(
    model: LhvModel, n1, n2, samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo estimate of the factorized joint probability P(n1, n2)."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    total = total_sq = 0.0
    for stream, m in _chunks(samples):
        lam = model.sample_hidden(philox_stream(seed, stream), m)
        prod = _checked_response(model, 1, lam, n1) * _checked_response(model, 2, lam, n2)
        total += float(prod.sum())
        total_sq += float((prod * prod).sum())
    return _mean_sem(total, total_sq, samples)


def lhv_marginal(model: LhvModel, n, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo estimate of the one-side probability P(n) (side 1)."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    n = np.asarray(n, dtype=float)
    total = total_sq = 0.0
    for stream, m in _chunks(samples):
        lam = model.sample_hidden(philox_stream(seed, stream), m)
        r = _checked_response(model, 1, lam, n)
        total += float(r.sum())
        total_sq += float((r * r).sum())
    return _mean_sem(total, total_sq, samples)


def _verify(
    model: LhvModel, settings: CHSettings, samples: int, seed: int
) -> tuple[ProbabilityTable, float, float]:
    sums = np.zeros(6)
    v_total = v_total_sq = 0.0
    b = model.bounds
    for stream, m in _chunks(samples):
        lam = model.sample_hidden(philox_stream(seed, stream), m)
        x1 = _checked_response(model, 1, lam, settings.n1)
        x2 = _checked_response(model, 1, lam, settings.n1p)
        y1 = _checked_response(model, 2, lam, settings.n2)
        y2 = _checked_response(model, 2, lam, settings.n2p)
        sums += [
            (x1 * y1).sum(),
            (x1 * y2).sum(),
            (x2 * y1).sum(),
            (x2 * y2).sum(),
            x2.sum(),
            y1.sum(),
        ]
        v = (
            x1 * y1
            - x1 * y2
            + x2 * y1
            + x2 * y2
            - (b.a2 + b.b2) * x2
            - (b.a1 + b.b1) * y1
            + b.a1 * b.b2
            + b.b1 * b.a2
        )
        v_total += float(v.sum())
        v_total_sq += float((v * v).sum())
    means = sums / samples
    table = ProbabilityTable(
        p_12=means[0], p_12p=means[1], p_1p2=means[2], p_1p2p=means[3],
        p_1p=means[4], p_2=means[5],
    )
    _, sem = _mean_sem(v_total, v_total_sq, samples)
    return table, ch_functional(table, b), sem


def verify_ch(
    model: LhvModel, settings: CHSettings, samples: int, seed: int
) -> tuple[float, float]:
    """CH functional of the model at the given settings, with its standard error.

    Common-lambda evaluation makes the estimate the average of pointwise
    nonpositive quantities, so the value never exceeds zero by more than
    floating point noise, let alone 3 standard errors.
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    _, value, sem = _verify(model, settings, samples, seed)
    return value, sem
