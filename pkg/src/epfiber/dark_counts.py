"""Detector dark counts on the erasure branch.

A lost photon still produces a click with probability ``p_dc``; the click
carries a uniformly random polarization. The resulting channel is again an
erasure-Pauli channel with a larger transmissivity and a noisier Pauli part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .erasure_pauli import (
    FLAG,
    CapacityBounds,
    ErasurePauliChannel,
    capacity_bounds,
    embed_polarization,
)
from .linalg import InvalidInputError, check_density_matrix
from .pauli_core import PauliDistribution, pauli_map


class ConditioningError(ZeroDivisionError):
    """Raised when conditioning on an event of probability zero."""


@dataclass(frozen=True)
class DarkCountParams:
    p_dc: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.p_dc <= 1.0):
            raise InvalidInputError(f"p_dc must lie in [0, 1], got {self.p_dc!r}")


def click_probability(eta: float, p_dc: float) -> float:
    """eta + (1 - eta) p_dc."""
    return eta + (1.0 - eta) * p_dc


def click_probability_complement(eta: float, p_dc: float) -> float:
    """Same quantity written as 1 - (1 - eta)(1 - p_dc)."""
    return 1.0 - (1.0 - eta) * (1.0 - p_dc)


def ep_dc_map(ch: ErasurePauliChannel, dc: DarkCountParams, op: np.ndarray) -> np.ndarray:
    op = np.asarray(op, dtype=complex)
    tr = np.trace(op)
    lost = 1.0 - ch.eta
    block = ch.eta * pauli_map(ch.dist, op) + lost * dc.p_dc * tr * np.eye(2) / 2
    out = embed_polarization(block)
    out[FLAG, FLAG] = lost * (1.0 - dc.p_dc) * tr
    return out


def apply_ep_dc(ch: ErasurePauliChannel, dc: DarkCountParams, rho) -> np.ndarray:
    rho = check_density_matrix(rho, 2)
    return ep_dc_map(ch, dc, rho)


def effective_channel(ch: ErasurePauliChannel, dc: DarkCountParams) -> ErasurePauliChannel:
    """Equivalent erasure-Pauli channel (eta', p') with p'_k = r p_k + (1 - r)/4, r = eta/eta'.

    When no click is ever possible (eta = p_dc = 0) the result is complete
    erasure with an identity Pauli part, which is never applied.
    """
    eta_p = click_probability(ch.eta, dc.p_dc)
    if eta_p == 0.0:
        return ErasurePauliChannel(0.0, PauliDistribution.identity())
    r = ch.eta / eta_p
    p = tuple(r * pk + (1.0 - r) / 4.0 for pk in ch.dist.p)
    return ErasurePauliChannel(eta_p, PauliDistribution(p))


def click_conditioned(ch: ErasurePauliChannel, dc: DarkCountParams, rho) -> np.ndarray:
    rho = check_density_matrix(rho, 2)
    eta_p = click_probability(ch.eta, dc.p_dc)
    if eta_p == 0.0:
        raise ConditioningError("click probability is zero; conditioning undefined")
    block = ch.eta * pauli_map(ch.dist, rho) + (1.0 - ch.eta) * dc.p_dc * np.eye(2) / 2
    return block / eta_p


def dephasing_with_dc_bounds(eta: float, p: float, p_dc: float) -> CapacityBounds:
    """Bounds for the erasure-dephasing channel seen through dark-count-prone detectors."""
    ch = ErasurePauliChannel(eta, PauliDistribution.dephasing(p))
    return capacity_bounds(effective_channel(ch, DarkCountParams(p_dc)))
