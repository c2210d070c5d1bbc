#!/usr/bin/env python
"""Relative gap between the dark-count upper bound and the dark-count-free capacity."""
import numpy as np

from epfiber.dark_counts import dephasing_with_dc_bounds
from epfiber.erasure_pauli import capacity_edh
from epfiber.fiber_model import FiberParams, pauli_probability, transmissivity

fiber = FiberParams()
p_dcs = (1e-5, 1e-4, 1e-3, 1e-2)
print(f"{'d [km]':>8}" + "".join(f"{'p_dc=' + format(p, 'g'):>12}" for p in p_dcs))
for d in np.arange(25, 401, 25):
    eta, p = transmissivity(fiber, d), pauli_probability(fiber, d)
    clean = capacity_edh(eta, p)
    gaps = [(clean - dephasing_with_dc_bounds(eta, p, q).upper) / clean for q in p_dcs]
    print(f"{d:8g}" + "".join(f"{g:12.4f}" for g in gaps))
