"""Monte-Carlo sampling of the lossy, noisy, dark-count-prone link.

Each trial sends half of |Phi+> and records what Bob's detector reports:
a Pauli-corrupted photon, a dark-count click, or nothing. Averaging the
corresponding Choi contributions gives an estimate that is independent of
the closed forms in :mod:`epfiber.erasure_pauli` and :mod:`epfiber.dark_counts`.

Randomness: numpy ``PCG64``. Batch ``b`` of a run seeded with ``seed`` draws
from ``SeedSequence(seed, spawn_key=(b,))``, so results do not depend on
batch scheduling or on how many workers run them.
"""

from __future__ import annotations

import itertools
import json
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dark_counts import DarkCountParams, click_probability, effective_channel
from .erasure_pauli import ErasurePauliChannel, choi_ep, embed_choi, flag_choi
from .linalg import eigvalsh, partial_transpose
from .pauli_core import bell_projectors

BATCH_SIZE = 1 << 16
MIN_TRIALS = 10_000
Z95 = 1.959963984540054

# outcome slots of a count vector
DARK = 4
ERASED = 5

_BELL = bell_projectors()
_DARK_CHOI = np.eye(4, dtype=complex) / 4


class InsufficientSamplesError(ValueError):
    pass


class NonBracketingError(ValueError):
    pass


@dataclass(frozen=True)
class TrialOutcome:
    clicked: bool
    pauli_index: int | None
    dark_count: bool


def make_rng(seed: int | tuple[int, ...], stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def sample_trial(ch: ErasurePauliChannel, dc: DarkCountParams, rng: np.random.Generator) -> TrialOutcome:
    u_loss, u_second = rng.random(2)
    if u_loss < ch.eta:
        k = int(np.searchsorted(np.cumsum(ch.dist.p), u_second, side="right"))
        return TrialOutcome(True, min(k, 3), False)
    if u_second < dc.p_dc:
        return TrialOutcome(True, None, True)
    return TrialOutcome(False, None, False)


def _sample_batch(ch: ErasurePauliChannel, dc: DarkCountParams, m: int, seed, stream: int) -> np.ndarray:
    rng = make_rng(seed, stream)
    u = rng.random((2, m))
    sent = u[0] < ch.eta
    k = np.searchsorted(np.cumsum(ch.dist.p), u[1][sent], side="right")
    counts = np.zeros(6, dtype=np.int64)
    counts[:4] = np.bincount(np.minimum(k, 3), minlength=4)
    counts[DARK] = np.count_nonzero(u[1][~sent] < dc.p_dc)
    counts[ERASED] = m - counts[:5].sum()
    return counts


def sample_counts(
    ch: ErasurePauliChannel,
    dc: DarkCountParams,
    n: int,
    seed: int | tuple[int, ...],
    batch_size: int = BATCH_SIZE,
    workers: int = 1,
) -> np.ndarray:
    """Outcome counts [I, X, Y, Z, dark, erased] over ``n`` trials."""
    sizes = [batch_size] * (n // batch_size)
    if n % batch_size:
        sizes.append(n % batch_size)
    jobs = [(ch, dc, m, seed, b) for b, m in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _sample_batch(*a), jobs))
    else:
        parts = [_sample_batch(*a) for a in jobs]
    return np.sum(parts, axis=0, dtype=np.int64) if parts else np.zeros(6, dtype=np.int64)


def choi_from_counts(counts: np.ndarray) -> np.ndarray:
    """Empirical 6x6 Choi state; dark clicks enter as the maximally mixed block."""
    n = counts.sum()
    sigma = sum((counts[k] / n) * B for k, B in enumerate(_BELL) if counts[k])
    sigma = sigma + (counts[DARK] / n) * _DARK_CHOI
    return embed_choi(sigma) + (counts[ERASED] / n) * flag_choi()


def postselected_choi(counts: np.ndarray) -> np.ndarray:
    """4x4 polarization Choi state conditioned on a click."""
    clicks = counts[:5].sum()
    if clicks == 0:
        raise InsufficientSamplesError("no clicks recorded")
    sigma = sum((counts[k] / clicks) * B for k, B in enumerate(_BELL) if counts[k])
    return sigma + (counts[DARK] / clicks) * _DARK_CHOI


@dataclass
class McReport:
    n_trials: int
    seed: int | tuple[int, ...]
    counts: list[int]
    click_rate: float
    click_stderr: float
    empirical_pauli_dist: tuple[float, ...]
    conditioned_pauli_dist: tuple[float, ...]
    estimated_choi: np.ndarray = field(repr=False)
    max_choi_deviation: float

    def to_dict(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "seed": list(self.seed) if isinstance(self.seed, tuple) else self.seed,
            "counts": self.counts,
            "click_rate": self.click_rate,
            "click_stderr": self.click_stderr,
            "empirical_pauli_dist": list(self.empirical_pauli_dist),
            "conditioned_pauli_dist": list(self.conditioned_pauli_dist),
            "estimated_choi": [[[z.real, z.imag] for z in row] for row in self.estimated_choi.tolist()],
            "max_choi_deviation": self.max_choi_deviation,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def estimate_choi(
    ch: ErasurePauliChannel,
    dc: DarkCountParams | None = None,
    n: int = 1_000_000,
    seed: int | tuple[int, ...] = 0,
    *,
    reference: ErasurePauliChannel | None = None,
    workers: int = 1,
) -> McReport:
    """Sample ``n`` trials and compare the empirical Choi with the analytic one.

    ``reference`` is the channel whose closed-form Choi the estimate is
    compared to; by default the dark-count effective channel of ``ch``.
    """
    dc = dc or DarkCountParams()
    if n < MIN_TRIALS:
        raise InsufficientSamplesError(f"need at least {MIN_TRIALS} trials, got {n}")
    counts = sample_counts(ch, dc, n, seed, workers=workers)
    est = choi_from_counts(counts)
    if reference is None:
        reference = effective_channel(ch, dc)
    deviation = float(np.abs(est - choi_ep(reference)).max())

    clicks = int(counts[:5].sum())
    rate = clicks / n
    photons = int(counts[:4].sum())
    emp = tuple(float(c / photons) for c in counts[:4]) if photons else (0.0,) * 4
    cond = tuple(float((c + counts[DARK] / 4) / clicks) for c in counts[:4]) if clicks else (0.0,) * 4
    return McReport(
        n_trials=n,
        seed=seed,
        counts=[int(c) for c in counts],
        click_rate=rate,
        click_stderr=math.sqrt(rate * (1.0 - rate) / n),
        empirical_pauli_dist=emp,
        conditioned_pauli_dist=cond,
        estimated_choi=est,
        max_choi_deviation=deviation,
    )


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.value <= self.tolerance


def check_report(report: McReport, model: ErasurePauliChannel, dc: DarkCountParams | None = None) -> list[Check]:
    """Statistical checks of a Monte-Carlo report against the closed-form model.

    Tolerances: 5/sqrt(n) on Choi entries, 4 binomial standard errors on the
    click rate, 4 multinomial standard errors on each conditioned Pauli frequency.
    """
    dc = dc or DarkCountParams()
    n = report.n_trials
    eff = effective_channel(model, dc)
    eta_p = click_probability(model.eta, dc.p_dc)
    checks = [
        Check("choi_deviation", report.max_choi_deviation, 5.0 / math.sqrt(n)),
        Check(
            "click_rate",
            abs(report.click_rate - eta_p),
            4.0 * math.sqrt(eta_p * (1.0 - eta_p) / n),
        ),
    ]
    clicks = sum(report.counts[:5])
    for label, emp, pk in zip("IXYZ", report.conditioned_pauli_dist, eff.dist.p):
        tol = 4.0 * math.sqrt(pk * (1.0 - pk) / clicks) if clicks else 0.0
        checks.append(Check(f"pauli_{label}", abs(emp - pk) if clicks else 0.0, tol))
    return checks


def _pt_min_eig(counts: np.ndarray) -> tuple[float, float]:
    sigma = postselected_choi(counts)
    lam = float(eigvalsh(partial_transpose(sigma, (2, 2)))[0])
    clicks = counts[:5].sum()
    # the minimum PT eigenvalue of a Bell-diagonal state is 1/2 - p_max
    pm = min(max(0.5 - lam, 0.0), 1.0)
    stderr = math.sqrt(max(pm * (1.0 - pm), 1.0 / clicks) / clicks)
    return lam, stderr


def empirical_threshold(
    family: Callable[[float], ErasurePauliChannel],
    lo: float,
    hi: float,
    n_per_point: int = 100_000,
    seed: int = 0,
    *,
    width: float = 0.02,
    dc: DarkCountParams | None = None,
) -> float:
    """Parameter value where the postselected Choi state stops being NPT.

    A point counts as NPT when the Monte-Carlo estimate of the minimum
    partial-transpose eigenvalue lies below zero by more than the 95%
    confidence half-width; otherwise it is treated as consistent with PPT.
    This makes tangential boundaries (the dephasing family is PPT only at
    p = 1/2) usable as a scan endpoint. Bisection runs until the bracket is
    narrower than ``width`` and returns its midpoint.
    """
    dc = dc or DarkCountParams()
    if n_per_point < MIN_TRIALS:
        raise InsufficientSamplesError(f"need at least {MIN_TRIALS} trials per point, got {n_per_point}")
    step = itertools.count()

    def npt(x: float) -> bool:
        counts = sample_counts(family(x), dc, n_per_point, (seed, next(step)))
        lam, se = _pt_min_eig(counts)
        return lam < -Z95 * se

    npt_lo, npt_hi = npt(lo), npt(hi)
    if npt_lo == npt_hi:
        raise NonBracketingError(f"no NPT/PPT change on [{lo}, {hi}]")
    while abs(hi - lo) >= width:
        mid = 0.5 * (lo + hi)
        if npt(mid) == npt_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
