"""Qubit Pauli channels: distributions, action, Choi states, entropies.

Pauli operators are indexed in the fixed order (I, X, Y, Z) throughout the
package. Entropies are in bits with 0 log 0 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import InvalidInputError, check_density_matrix, eigvalsh, partial_transpose

PAULI_LABELS = ("I", "X", "Y", "Z")

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)

# |Phi+> = (|00> + |11>)/sqrt(2)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)

NORMALIZATION_SLACK = 1e-9
NPT_TOL = 1e-12


@dataclass(frozen=True)
class PauliDistribution:
    """Probabilities of the Pauli errors (I, X, Y, Z).

    Sums within 1e-9 of one are renormalized; anything further off is an
    error rather than silently rescaled.
    """

    p: tuple[float, float, float, float]

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        if len(p) != 4:
            raise InvalidInputError(f"need 4 Pauli probabilities, got {len(p)}")
        if any(not math.isfinite(x) or x < 0.0 or x > 1.0 for x in p):
            raise InvalidInputError(f"probabilities must lie in [0, 1], got {p}")
        total = math.fsum(p)
        if abs(total - 1.0) > NORMALIZATION_SLACK:
            raise InvalidInputError(f"probabilities sum to {total!r}, expected 1")
        if total != 1.0:
            p = tuple(x / total for x in p)
        object.__setattr__(self, "p", p)

    @classmethod
    def identity(cls) -> PauliDistribution:
        return cls((1.0, 0.0, 0.0, 0.0))

    @classmethod
    def isotropic(cls, p: float) -> PauliDistribution:
        """Depolarizing channel: (1 - 3p/4, p/4, p/4, p/4)."""
        _check_unit_interval(p, "p")
        q = p / 4.0
        return cls((1.0 - 3.0 * q, q, q, q))

    @classmethod
    def dephasing(cls, p: float) -> PauliDistribution:
        """Z errors only: (1 - p, 0, 0, p)."""
        _check_unit_interval(p, "p")
        return cls((1.0 - p, 0.0, 0.0, p))

    @property
    def p_max(self) -> float:
        return max(self.p)

    def as_array(self) -> np.ndarray:
        return np.array(self.p)


def _check_unit_interval(x: float, name: str) -> None:
    if not (0.0 <= x <= 1.0):
        raise InvalidInputError(f"{name} must lie in [0, 1], got {x!r}")


def pauli_map(dist: PauliDistribution, op: np.ndarray) -> np.ndarray:
    """Linear action sum_k p_k P_k op P_k^dagger on an arbitrary 2x2 operator."""
    op = np.asarray(op, dtype=complex)
    out = np.zeros((2, 2), dtype=complex)
    for pk, P in zip(dist.p, PAULIS):
        if pk:
            out += pk * (P @ op @ P.conj().T)
    return out


def apply_pauli(dist: PauliDistribution, rho) -> np.ndarray:
    rho = check_density_matrix(rho, 2)
    return pauli_map(dist, rho)


def bell_projectors() -> tuple[np.ndarray, ...]:
    """(I x P_k)|Phi+><Phi+|(I x P_k)^dagger for k in (I, X, Y, Z)."""
    out = []
    for P in PAULIS:
        v = np.kron(I2, P) @ PHI_PLUS
        out.append(np.outer(v, v.conj()))
    return tuple(out)


_BELL = bell_projectors()


def choi_state(dist: PauliDistribution) -> np.ndarray:
    """Normalized Choi state (id x P)(|Phi+><Phi+|); Bell-diagonal with weights p_k."""
    return sum(pk * B for pk, B in zip(dist.p, _BELL))


def shannon_entropy(dist: PauliDistribution) -> float:
    return -math.fsum(pk * math.log2(pk) for pk in dist.p if pk > 0.0)


def binary_entropy(x: float) -> float:
    _check_unit_interval(x, "x")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def one_minus_binary_entropy(x: float) -> float:
    """1 - H2(x), accurate near x = 1/2 where the direct difference cancels.

    With u = 2x - 1 this is [(1+u) ln(1+u) + (1-u) ln(1-u)] / (2 ln 2), which is
    strictly positive for u != 0. That keeps zero-capacity boundaries sharp.
    """
    _check_unit_interval(x, "x")
    u = abs(2.0 * x - 1.0)
    if u == 0.0:
        return 0.0
    if u == 1.0:
        return 1.0
    if u < 1e-4:
        # even series: sum_n u^(2n) / (n (2n - 1))
        u2 = u * u
        s = u2 * (1.0 + u2 / 6.0 + u2 * u2 / 15.0 + u2 * u2 * u2 / 28.0)
        return s / (2.0 * math.log(2.0))
    return ((1.0 + u) * math.log1p(u) + (1.0 - u) * math.log1p(-u)) / (2.0 * math.log(2.0))


def phi_upper(dist: PauliDistribution) -> float:
    """Upper-bound function: 1 - H2(p_max) if p_max >= 1/2, else 0."""
    pm = dist.p_max
    if pm < 0.5:
        return 0.0
    return one_minus_binary_entropy(pm)


def npt_witness(dist: PauliDistribution) -> tuple[bool, float]:
    """Minimum eigenvalue of the partial transpose of the Choi state.

    Returns ``(is_npt, min_eigenvalue)`` with is_npt meaning the eigenvalue is
    below -1e-12.
    """
    pt = partial_transpose(choi_state(dist), (2, 2), subsystem=1)
    lam = float(eigvalsh(pt)[0])
    return lam < -NPT_TOL, lam
