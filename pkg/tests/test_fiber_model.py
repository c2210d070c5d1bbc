import math

import numpy as np
import pytest

from epfiber.erasure_pauli import capacity_edh, capacity_edp_upper
from epfiber.fiber_model import (
    FiberParams,
    Regime,
    channel_at_distance,
    coherence_time,
    dephasing_length,
    max_distance_depolarizing,
    pauli_probability,
    transmissivity,
)
from epfiber.linalg import InvalidInputError
from epfiber.sweep import bisect_boundary

# mpmath references
TAU_100 = 1.5915494309189534
TAU_1000 = 0.15915494309189534
L_DH = 506.60591821168886
P_100 = 0.089565641292230031
LN3 = 1.0986122886681097

FIG = FiberParams()
DEPOL = FiberParams(regime=Regime.DEPOLARIZING, L=0.05, p_inf=1.0)


def test_params_validation():
    with pytest.raises(InvalidInputError):
        FiberParams(alpha=0)
    with pytest.raises(InvalidInputError):
        FiberParams(d_pmd=-1)
    with pytest.raises(InvalidInputError):
        FiberParams(regime="other")
    with pytest.raises(InvalidInputError):
        FiberParams(regime="depol", p_inf=0)
    assert FiberParams(regime="depol").regime is Regime.DEPOLARIZING
    assert FIG.floor == 0.5 and DEPOL.floor == 1.0


def test_transmissivity():
    assert transmissivity(FIG, 0) == 1.0
    assert transmissivity(FIG, 50) == pytest.approx(0.1, rel=1e-14)
    assert transmissivity(FIG, 100) == pytest.approx(0.01, rel=1e-14)
    with pytest.raises(InvalidInputError):
        transmissivity(FIG, -1)


def test_coherence_time():
    assert coherence_time(100) == pytest.approx(TAU_100, rel=1e-14)
    assert round(coherence_time(100), 1) == 1.6
    assert coherence_time(1000) == pytest.approx(TAU_1000, rel=1e-14)
    for k in (2.0, 7.5):
        assert coherence_time(k * 40) == pytest.approx(coherence_time(40) / k, rel=1e-14)
    with pytest.raises(InvalidInputError):
        coherence_time(0)


def test_dephasing_length():
    assert dephasing_length(100, 0.1) == pytest.approx(L_DH, rel=1e-14)
    assert dephasing_length(100, 10) == pytest.approx(0.05, rel=0.05)
    assert dephasing_length(100, 0.01) == pytest.approx(5e4, rel=0.05)
    with pytest.raises(InvalidInputError):
        dephasing_length(100, 0)
    for nu, dp in [(100, 0.1), (37, 2.5), (1e3, 0.01)]:
        tau = coherence_time(nu)
        assert 2 * tau**2 == pytest.approx(dephasing_length(nu, dp) * dp**2, rel=1e-12)


def test_pauli_probability():
    assert pauli_probability(FIG, 0) == 0.0
    assert pauli_probability(FIG, 100) == pytest.approx(P_100, rel=1e-13)
    assert pauli_probability(DEPOL, 1e3) == 1.0
    with pytest.raises(InvalidInputError):
        pauli_probability(FIG, -0.5)


def test_monotone_and_bounded():
    ds = np.linspace(0, 3000, 301)
    ps = [pauli_probability(FIG, d) for d in ds]
    etas = [transmissivity(FIG, d) for d in ds]
    assert all(a < b for a, b in zip(ps, ps[1:]))
    assert all(a > b for a, b in zip(etas, etas[1:]))
    assert max(ps) < 0.5


def test_max_distance():
    assert max_distance_depolarizing(0.05, 1.0) == pytest.approx(0.05 * LN3, rel=1e-14)
    assert max_distance_depolarizing(1.0) == pytest.approx(LN3, rel=1e-14)
    assert max_distance_depolarizing(1.0, 2 / 3) == math.inf
    assert max_distance_depolarizing(1.0, 0.5) == math.inf
    # general p_inf: p(d_max) = 2/3
    params = FiberParams(regime="depol", L=2.0, p_inf=0.9)
    assert pauli_probability(params, max_distance_depolarizing(2.0, 0.9)) == pytest.approx(2 / 3, rel=1e-14)
    with pytest.raises(InvalidInputError):
        max_distance_depolarizing(1.0, 1.5)


def test_channel_at_distance():
    ch = channel_at_distance(FIG, 0)
    assert ch.eta == 1.0 and ch.dist.p == (1.0, 0.0, 0.0, 0.0)
    ch = channel_at_distance(FIG, 100)
    assert ch.eta == pytest.approx(0.01, rel=1e-14)
    assert ch.dist.p == pytest.approx((1 - P_100, 0, 0, P_100), abs=1e-15)
    d_max = max_distance_depolarizing(DEPOL.L, 1.0)
    ch = channel_at_distance(DEPOL, d_max)
    q = ch.dist.p[1] * 4
    assert ch.dist.p == pytest.approx((1 - 0.75 * q, q / 4, q / 4, q / 4))
    assert capacity_edp_upper(ch.eta, pauli_probability(DEPOL, d_max)) == pytest.approx(0.0, abs=1e-25)


def test_dephasing_capacity_positive_at_every_finite_distance():
    for d in np.geomspace(1e-3, 3000, 200):
        ch = channel_at_distance(FIG, d)
        assert capacity_edh(ch.eta, pauli_probability(FIG, d)) > 0


def test_depolarizing_crossing_by_bisection():
    def zero(d):
        return capacity_edp_upper(transmissivity(DEPOL, d), pauli_probability(DEPOL, d)) == 0.0

    d = bisect_boundary(zero, 0.0, 1.0, rtol=1e-14)
    assert d == pytest.approx(0.05 * LN3, rel=1e-9)
