"""PMD fiber model: distance -> (transmissivity, Pauli error probability).

Units are fixed at the parameter boundary: distance in km, loss in dB/km,
bandwidth in GHz, coherence time in ps, PMD coefficient in ps/sqrt(km).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .erasure_pauli import ErasurePauliChannel
from .linalg import InvalidInputError
from .pauli_core import PauliDistribution

# Zero-capacity point of the depolarizing probability.
DEPOLARIZING_THRESHOLD = 2.0 / 3.0

# Scale choice within the 10-100 m range quoted for uncontrolled PMD.
DEFAULT_DEPOL_LENGTH_KM = 0.05


class Regime(str, Enum):
    DEPOLARIZING = "depol"
    DEPHASING = "dephase"


@dataclass(frozen=True)
class FiberParams:
    """Fiber description; defaults are 0.2 dB/km, 100 GHz, 0.1 ps/sqrt(km), controlled PMD.

    In the dephasing regime (active polarization control) the decoherence
    length is derived from bandwidth and PMD coefficient and the floor is 1/2.
    In the depolarizing regime ``L`` and ``p_inf`` are free parameters.
    """

    alpha: float = 0.2
    delta_nu: float = 100.0
    d_pmd: float = 0.1
    regime: Regime = Regime.DEPHASING
    L: float = DEFAULT_DEPOL_LENGTH_KM
    p_inf: float = 1.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "regime", Regime(self.regime))
        except ValueError:
            raise InvalidInputError(f"regime must be 'depol' or 'dephase', got {self.regime!r}") from None
        for name in ("alpha", "delta_nu", "d_pmd", "L"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise InvalidInputError(f"{name} must be positive, got {value!r}")
        if not (0.0 < self.p_inf <= 1.0):
            raise InvalidInputError(f"p_inf must lie in (0, 1], got {self.p_inf!r}")

    @property
    def decoherence_length(self) -> float:
        if self.regime is Regime.DEPHASING:
            return dephasing_length(self.delta_nu, self.d_pmd)
        return self.L

    @property
    def floor(self) -> float:
        return 0.5 if self.regime is Regime.DEPHASING else self.p_inf


def _check_distance(d: float) -> None:
    if not d >= 0.0:
        raise InvalidInputError(f"distance must be nonnegative, got {d!r}")


def transmissivity(params: FiberParams, d: float) -> float:
    _check_distance(d)
    return 10.0 ** (-params.alpha * d / 10.0)


def coherence_time(delta_nu: float) -> float:
    """Photon coherence time 1/(2 pi delta_nu) in ps for a bandwidth in GHz."""
    if not delta_nu > 0.0:
        raise InvalidInputError(f"bandwidth must be positive, got {delta_nu!r}")
    return 1e3 / (2.0 * math.pi * delta_nu)


def dephasing_length(delta_nu: float, d_pmd: float) -> float:
    """Decoherence length 2 tau^2 / D_PMD^2 in km."""
    if not d_pmd > 0.0:
        raise InvalidInputError(f"PMD coefficient must be positive, got {d_pmd!r}")
    tau = coherence_time(delta_nu)
    return 2.0 * tau * tau / (d_pmd * d_pmd)


def pauli_probability(params: FiberParams, d: float) -> float:
    """p(d) = p_inf (1 - exp(-d / L))."""
    _check_distance(d)
    return -params.floor * math.expm1(-d / params.decoherence_length)


def max_distance_depolarizing(L: float, p_inf: float = 1.0) -> float:
    """Distance where p(d) reaches 2/3; L ln 3 for p_inf = 1, inf if p_inf <= 2/3."""
    if not L > 0.0:
        raise InvalidInputError(f"L must be positive, got {L!r}")
    if not (0.0 < p_inf <= 1.0):
        raise InvalidInputError(f"p_inf must lie in (0, 1], got {p_inf!r}")
    if p_inf <= DEPOLARIZING_THRESHOLD:
        return math.inf
    return L * math.log(p_inf / (p_inf - DEPOLARIZING_THRESHOLD))


def channel_at_distance(params: FiberParams, d: float) -> ErasurePauliChannel:
    eta = transmissivity(params, d)
    p = pauli_probability(params, d)
    if params.regime is Regime.DEPHASING:
        dist = PauliDistribution.dephasing(p)
    else:
        dist = PauliDistribution.isotropic(p)
    return ErasurePauliChannel(eta, dist)
