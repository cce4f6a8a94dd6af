"""Kernel backend selection.

The compiled Cython core is used when its extension module importable;
otherwise the numpy fallback takes over.  Set HYPERON_CH_KERNEL=python or
=compiled to force a backend (compiled raises if the extension is missing).
Both backends consume identical uniform blocks and produce identical
events, so results do not depend on the selection.
"""

from __future__ import annotations

import importlib
import os

import numpy as np

from . import numpy_impl
from .numpy_impl import counts_from_directions, events_from_uniforms

_requested = os.environ.get("HYPERON_CH_KERNEL", "auto").strip().lower() or "auto"
if _requested not in ("auto", "compiled", "python"):
    raise ImportError(
        f"HYPERON_CH_KERNEL must be 'auto', 'compiled' or 'python', got {_requested!r}"
    )

_core = None
if _requested in ("auto", "compiled"):
    try:
        _core = importlib.import_module("._core", __name__)
    except ImportError:
        if _requested == "compiled":
            raise
        _core = None

BACKEND = "compiled" if _core is not None else "python"


def backend_name() -> str:
    return BACKEND


def accumulate_counts(
    u: np.ndarray,
    alpha: float,
    beta: float,
    efficiency: float,
    spacelike_only: bool,
    axes: np.ndarray,
    cos_delta: float,
) -> np.ndarray:
    """[kept, 4 joint, 4 marginal] cone counts for one uniform block."""
    if _core is None:
        return numpy_impl.accumulate_counts(
            u, alpha, beta, efficiency, spacelike_only, axes, cos_delta
        )
    out = np.zeros(9, dtype=np.int64)
    _core.accumulate_counts_into(
        np.ascontiguousarray(u, dtype=np.float64),
        float(alpha),
        float(beta),
        float(efficiency),
        bool(spacelike_only),
        np.ascontiguousarray(axes, dtype=np.float64),
        float(cos_delta),
        out,
    )
    return out


def directions_from_uniforms(u: np.ndarray, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """(proton, antiproton) direction pairs from block columns 0..3."""
    if _core is None:
        return numpy_impl.directions_from_uniforms(u, alpha)
    u = np.ascontiguousarray(u, dtype=np.float64)
    out_p = np.empty((u.shape[0], 3))
    out_pbar = np.empty((u.shape[0], 3))
    _core.directions_into(u, float(alpha), out_p, out_pbar)
    return out_p, out_pbar
