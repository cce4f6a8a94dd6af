"""Quantum side of the hyperon-pair experiment.

The weak decay Lambda -> p pi- acts as a spin measurement with analyzing
power alpha: the proton leaves along n_p with probability density
(1 + alpha s.n_p)/(4 pi) for polarization s.  The induced two-outcome
effects are E+- = (1 +- alpha sigma.n)/2.  For the spin singlet produced
in a pseudoscalar quarkonium decay the joint proton/antiproton direction
probabilities take the closed form (1 + alpha^2 n1.n2)/4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_algebra import (
    IDENTITY_2,
    TOL,
    as_unit_vector,
    is_hermitian,
    is_psd,
    pauli_dot,
    tensor,
)

# CP-conserving decay asymmetry of Lambda -> p pi-
ALPHA_DEFAULT = 0.750


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if abs(alpha) > 1.0:
        raise ValueError(f"decay parameter must satisfy |alpha| <= 1, got {alpha}")
    return alpha


@dataclass(frozen=True)
class DecayParams:
    """Decay asymmetries of the two sides (Lambda and anti-Lambda)."""

    alpha_minus: float
    alpha_plus: float

    def __post_init__(self) -> None:
        _check_alpha(self.alpha_minus)
        _check_alpha(self.alpha_plus)

    @classmethod
    def cp_conserving(cls, alpha: float = ALPHA_DEFAULT) -> "DecayParams":
        """CP-conserving mode: alpha = alpha_minus = -alpha_plus."""
        return cls(alpha_minus=float(alpha), alpha_plus=-float(alpha))

    @property
    def alpha(self) -> float:
        """Common magnitude of the asymmetry (exact under CP conservation)."""
        return abs(self.alpha_minus)

    def probability_bounds(self) -> tuple[float, float]:
        """(a, b) = ((1 - alpha)/2, (1 + alpha)/2), the reachable outcome range."""
        a = (1.0 - self.alpha) / 2.0
        return (a, 1.0 - a)


def alpha_from_amplitudes(s_wave: complex, p_wave: complex) -> float:
    """Asymmetry from interfering S- and P-wave amplitudes.

    alpha = (S* P + S P*) / (|S|^2 + |P|^2), always in [-1, 1].
    """
    s = complex(s_wave)
    p = complex(p_wave)
    norm = abs(s) ** 2 + abs(p) ** 2
    if norm == 0.0:
        raise ValueError("S and P amplitudes are both zero; alpha is undefined")
    return float((np.conj(s) * p + s * np.conj(p)).real / norm)


def effect_plus(n, alpha: float) -> np.ndarray:
    """Effect for the proton exiting along +n: (1 + alpha sigma.n)/2."""
    alpha = _check_alpha(alpha)
    return 0.5 * (IDENTITY_2 + alpha * pauli_dot(n))


def effect_minus(n, alpha: float) -> np.ndarray:
    """Complement of :func:`effect_plus`; the two sum to the identity."""
    alpha = _check_alpha(alpha)
    return 0.5 * (IDENTITY_2 - alpha * pauli_dot(n))


def single_decay_probability(s, n, alpha: float) -> float:
    """Probability (1 + alpha s.n)/2 of the proton exiting along n.

    ``s`` is the polarization vector of the decaying hyperon, |s| <= 1.
    """
    alpha = _check_alpha(alpha)
    s = np.asarray(s, dtype=float).reshape(3)
    if float(s @ s) > 1.0 + TOL:
        raise ValueError(f"polarization must satisfy |s| <= 1, got |s|^2 = {float(s @ s)!r}")
    n = as_unit_vector(n)
    return 0.5 * (1.0 + alpha * float(s @ n))


@dataclass(frozen=True)
class BipartiteSpinState:
    """Two-qubit density matrix; validated once on construction."""

    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
        if not is_hermitian(rho):
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(rho).real - 1.0) > TOL or abs(np.trace(rho).imag) > TOL:
            raise ValueError(f"density matrix trace is {np.trace(rho)!r}, expected 1")
        if not is_psd(rho):
            raise ValueError("density matrix has an eigenvalue below -1e-12")
        object.__setattr__(self, "rho", rho)


def singlet_state() -> BipartiteSpinState:
    """Density matrix of (|+-> - |-+>)/sqrt(2) in the z basis."""
    psi = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
    return BipartiteSpinState(np.outer(psi, psi.conj()))


def joint_probability(state: BipartiteSpinState, n1, n2, params: DecayParams) -> float:
    """Tr[rho (E+(n1, alpha-) x E+(n2, alpha+))].

    For the singlet with CP-conserving parameters this equals
    (1 + alpha^2 n1.n2)/4: the sign of alpha_plus combines with the
    singlet anticorrelation to give the +alpha^2 term.
    """
    op = tensor(effect_plus(n1, params.alpha_minus), effect_plus(n2, params.alpha_plus))
    return float(np.trace(state.rho @ op).real)


def marginal_probability(state: BipartiteSpinState, n, params: DecayParams, side: int = 1) -> float:
    """One-side distribution Tr[rho (E+ x 1)] (or 1 x E+ for side=2)."""
    if side == 1:
        op = tensor(effect_plus(n, params.alpha_minus), IDENTITY_2)
    elif side == 2:
        op = tensor(IDENTITY_2, effect_plus(n, params.alpha_plus))
    else:
        raise ValueError("side must be 1 or 2")
    return float(np.trace(state.rho @ op).real)
