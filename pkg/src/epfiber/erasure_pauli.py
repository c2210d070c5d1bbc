"""Erasure-Pauli channel: flagged loss followed by a Pauli error on survivors.

The output lives on a qutrit with basis order (H, V, e); index 2 is the
vacuum flag ``|e>`` that Bob can detect without disturbing the polarization.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import InvalidInputError, check_density_matrix
from .pauli_core import (
    PauliDistribution,
    choi_state,
    one_minus_binary_entropy,
    pauli_map,
    phi_upper,
    shannon_entropy,
)

FLAG = 2
OUT_DIM = 3
EXACT_TOL = 1e-12

FLAG_PROJECTOR = np.zeros((OUT_DIM, OUT_DIM), dtype=complex)
FLAG_PROJECTOR[FLAG, FLAG] = 1.0


@dataclass(frozen=True)
class ErasurePauliChannel:
    eta: float
    dist: PauliDistribution

    def __post_init__(self):
        if not (0.0 <= self.eta <= 1.0):
            raise InvalidInputError(f"eta must lie in [0, 1], got {self.eta!r}")
        if not isinstance(self.dist, PauliDistribution):
            object.__setattr__(self, "dist", PauliDistribution(tuple(self.dist)))


@dataclass(frozen=True)
class CapacityBounds:
    """Two-way assisted capacity bounds in ebits per channel use."""

    lower: float
    upper: float
    exact: bool

    @classmethod
    def from_pair(cls, lower: float, upper: float) -> CapacityBounds:
        return cls(lower, upper, abs(upper - lower) < EXACT_TOL)


class ChannelKind(Enum):
    PAULI = "pauli"
    COMPLETE_ERASURE = "complete_erasure"


def embed_polarization(block: np.ndarray) -> np.ndarray:
    out = np.zeros((OUT_DIM, OUT_DIM), dtype=complex)
    out[:2, :2] = block
    return out


def ep_map(ch: ErasurePauliChannel, op: np.ndarray) -> np.ndarray:
    """Linear extension of the channel to arbitrary 2x2 operators."""
    op = np.asarray(op, dtype=complex)
    out = embed_polarization(ch.eta * pauli_map(ch.dist, op))
    out[FLAG, FLAG] = (1.0 - ch.eta) * np.trace(op)
    return out


def apply_ep(ch: ErasurePauliChannel, rho) -> np.ndarray:
    rho = check_density_matrix(rho, 2)
    return ep_map(ch, rho)


def choi_matrix(linear_map, d_in: int, d_out: int) -> np.ndarray:
    """Normalized Choi matrix (1/d_in) sum_ij |i><j| x E(|i><j|) of a linear map.

    Built column by column from basis operators; serves as the brute-force
    reference for the closed-form Choi states.
    """
    out = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            eij = np.zeros((d_in, d_in), dtype=complex)
            eij[i, j] = 1.0
            out += np.kron(eij, linear_map(eij))
    return out / d_in


def embed_choi(sigma4: np.ndarray) -> np.ndarray:
    """Place a 4x4 qubit-qubit operator into the qubit x (H, V, e) space."""
    s = np.asarray(sigma4).reshape(2, 2, 2, 2)
    out = np.zeros((2, OUT_DIM, 2, OUT_DIM), dtype=complex)
    out[:, :2, :, :2] = s
    return out.reshape(2 * OUT_DIM, 2 * OUT_DIM)


def flag_choi() -> np.ndarray:
    """(I/2) x |e><e|, the Choi state of complete erasure."""
    return np.kron(np.eye(2) / 2, FLAG_PROJECTOR)


def choi_ep(ch: ErasurePauliChannel) -> np.ndarray:
    return (1.0 - ch.eta) * flag_choi() + ch.eta * embed_choi(choi_state(ch.dist))


def capacity_bounds(ch: ErasurePauliChannel) -> CapacityBounds:
    """Hashing lower bound eta*max(0, 1 - H(p)) and upper bound eta*Phi(p)."""
    lower = ch.eta * max(0.0, 1.0 - shannon_entropy(ch.dist))
    upper = ch.eta * phi_upper(ch.dist)
    # the two formulas agree analytically for single-error distributions;
    # cap the lower side so rounding never inverts the ordering
    return CapacityBounds.from_pair(min(lower, upper), upper)


def _check_pair(eta: float, p: float) -> None:
    if not (0.0 <= eta <= 1.0):
        raise InvalidInputError(f"eta must lie in [0, 1], got {eta!r}")
    if not (0.0 <= p <= 1.0):
        raise InvalidInputError(f"p must lie in [0, 1], got {p!r}")


def capacity_edp_upper(eta: float, p: float) -> float:
    """Upper bound for the erasure-depolarizing channel: eta[1 - H2(3p/4)] for p <= 2/3."""
    _check_pair(eta, p)
    if 3.0 * p > 2.0:
        return 0.0
    return eta * one_minus_binary_entropy(0.75 * p)


def capacity_edh(eta: float, p: float) -> float:
    """Exact capacity eta[1 - H2(p)] of the erasure-dephasing channel.

    For p > 1/2 the channel is relabeled to dephasing probability 1 - p (a local
    Z correction), which leaves the value unchanged.
    """
    _check_pair(eta, p)
    if p > 0.5:
        p = 1.0 - p
    return eta * one_minus_binary_entropy(p)


def is_zero_capacity(ch: ErasurePauliChannel) -> bool:
    return ch.eta == 0.0 or ch.dist.p_max <= 0.5


def ensemble_decomposition(ch: ErasurePauliChannel) -> list[tuple[float, ChannelKind]]:
    return [(ch.eta, ChannelKind.PAULI), (1.0 - ch.eta, ChannelKind.COMPLETE_ERASURE)]


def apply_kind(kind: ChannelKind, dist: PauliDistribution, rho: np.ndarray) -> np.ndarray:
    """Action of one ensemble member, on the common (H, V, e) output space."""
    if kind is ChannelKind.PAULI:
        return embed_polarization(pauli_map(dist, rho))
    return FLAG_PROJECTOR * np.trace(rho)

