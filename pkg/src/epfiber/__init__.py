"""Capacity bounds for polarization entanglement distribution over lossy, PMD-affected fiber."""

from .dark_counts import (
    DarkCountParams,
    apply_ep_dc,
    click_conditioned,
    dephasing_with_dc_bounds,
    effective_channel,
)
from .erasure_pauli import (
    CapacityBounds,
    ChannelKind,
    ErasurePauliChannel,
    apply_ep,
    capacity_bounds,
    capacity_edh,
    capacity_edp_upper,
    choi_ep,
    ensemble_decomposition,
    is_zero_capacity,
)
from .fiber_model import (
    FiberParams,
    Regime,
    channel_at_distance,
    coherence_time,
    dephasing_length,
    max_distance_depolarizing,
    pauli_probability,
    transmissivity,
)
from .linalg import InvalidInputError
from .pauli_core import (
    PauliDistribution,
    apply_pauli,
    binary_entropy,
    choi_state,
    npt_witness,
    phi_upper,
    shannon_entropy,
)

__version__ = "0.1.0"
