"""Rate-versus-distance sweeps, zero-capacity distances and Monte-Carlo verification."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .dark_counts import DarkCountParams, click_probability, effective_channel
from .erasure_pauli import ErasurePauliChannel, capacity_bounds, is_zero_capacity
from .fiber_model import (
    FiberParams,
    Regime,
    channel_at_distance,
    max_distance_depolarizing,
    pauli_probability,
)
from .linalg import InvalidInputError
from .mc_oracle import NonBracketingError, check_report, empirical_threshold, estimate_choi
from .pauli_core import PauliDistribution

CSV_HEADER = ("d_km", "eta", "p", "eta_prime", "lower_ebits", "upper_ebits", "rate_per_s")
THRESHOLD_WIDTH = 0.02
FAR_KM = 1e7


@dataclass(frozen=True)
class SweepConfig:
    fiber: FiberParams = field(default_factory=FiberParams)
    p_dc: tuple[float, ...] = (0.0,)
    d_min: float = 1.0
    d_max: float = 500.0
    n_points: int = 100
    log_scale: bool = False
    clock_hz: float | None = None
    out: str | None = None
    fmt: str = "csv"
    seed: int = 0
    trials: int = 1_000_000
    distances: tuple[float, ...] = ()

    def __post_init__(self):
        if not (self.d_min >= 0.0 and self.d_max > self.d_min):
            raise InvalidInputError(f"need 0 <= d_min < d_max, got {self.d_min}, {self.d_max}")
        if self.log_scale and self.d_min <= 0.0:
            raise InvalidInputError("log-spaced grid needs d_min > 0")
        if self.n_points < 2:
            raise InvalidInputError(f"points must be >= 2, got {self.n_points}")
        if not self.p_dc:
            raise InvalidInputError("at least one p_dc value is required")
        for v in self.p_dc:
            DarkCountParams(v)
        if self.clock_hz is not None and not self.clock_hz > 0.0:
            raise InvalidInputError(f"clock_hz must be positive, got {self.clock_hz}")
        if self.fmt not in ("csv", "json"):
            raise InvalidInputError(f"format must be csv or json, got {self.fmt!r}")
        if any(d < 0.0 for d in self.distances):
            raise InvalidInputError("distances must be nonnegative")

    def grid(self) -> np.ndarray:
        if self.log_scale:
            return np.geomspace(self.d_min, self.d_max, self.n_points)
        return np.linspace(self.d_min, self.d_max, self.n_points)


@dataclass(frozen=True)
class SweepRow:
    d: float
    p_dc: float
    eta: float
    p: float
    eta_prime: float
    lower: float
    upper: float
    exact: bool
    rate_per_s: float | None = None


def evaluate_point(fiber: FiberParams, d: float, p_dc: float, clock_hz: float | None = None) -> SweepRow:
    ch = channel_at_distance(fiber, d)
    eff = effective_channel(ch, DarkCountParams(p_dc))
    b = capacity_bounds(eff)
    rate = b.upper * clock_hz if clock_hz is not None else None
    return SweepRow(d, p_dc, ch.eta, pauli_probability(fiber, d), eff.eta, b.lower, b.upper, b.exact, rate)


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    rows = [
        evaluate_point(config.fiber, float(d), p_dc, config.clock_hz)
        for p_dc in config.p_dc
        for d in config.grid()
    ]
    rows.sort(key=lambda r: (r.p_dc, r.d))
    return rows


def _fmt(x: float | None) -> str:
    return "" if x is None else format(x, ".12g")


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(v) for v in (r.d, r.eta, r.p, r.eta_prime, r.lower, r.upper, r.rate_per_s)])
    return buf.getvalue()


def rows_to_json(rows: list[SweepRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1, sort_keys=True) + "\n"


def bisect_boundary(pred, lo: float, hi: float, rtol: float = 1e-13, max_iter: int = 400) -> float:
    """Smallest x in [lo, hi] with pred(x) true, assuming pred is monotone false -> true."""
    if pred(lo) or not pred(hi):
        raise NonBracketingError(f"predicate does not switch on [{lo}, {hi}]")
    for _ in range(max_iter):
        if hi - lo <= rtol * abs(hi):
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def solve_threshold(fiber: FiberParams, p_dc: float = 0.0) -> float:
    """Distance at which the upper capacity bound reaches zero, or inf."""
    dc = DarkCountParams(p_dc)
    if p_dc == 0.0:
        if fiber.regime is Regime.DEPOLARIZING:
            return max_distance_depolarizing(fiber.L, fiber.p_inf)
        # p(d) < 1/2 at every finite distance
        return math.inf

    def zero(d: float) -> bool:
        return is_zero_capacity(effective_channel(channel_at_distance(fiber, d), dc))

    if zero(0.0):
        return 0.0
    hi = 1.0
    while not zero(hi):
        hi *= 2.0
        if hi > FAR_KM:
            return math.inf
    return bisect_boundary(zero, 0.0, hi)


def _regime_family(fiber: FiberParams, eta: float):
    if fiber.regime is Regime.DEPHASING:
        return (lambda p: ErasurePauliChannel(eta, PauliDistribution.dephasing(p))), 0.3, 0.5, 0.5
    return (lambda p: ErasurePauliChannel(eta, PauliDistribution.isotropic(p))), 0.3, 0.9, 2.0 / 3.0


def verify(config: SweepConfig, n_trials: int | None = None, *, simulate_eta_shift: float = 0.0) -> dict:
    """Monte-Carlo check of the closed forms at selected sweep points.

    Points are ``config.distances`` if given, else d_min, the geometric (or
    arithmetic, when d_min = 0) midpoint, and d_max, for every p_dc value.
    ``simulate_eta_shift`` perturbs only the sampled channel; it exists so the
    harness can confirm that a wrong model is caught.
    """
    n = n_trials or config.trials
    if config.distances:
        points = list(config.distances)
    elif config.d_min > 0:
        points = [config.d_min, math.sqrt(config.d_min * config.d_max), config.d_max]
    else:
        points = [config.d_min, 0.5 * (config.d_min + config.d_max), config.d_max]

    results = []
    failures = []
    for i, p_dc in enumerate(config.p_dc):
        dc = DarkCountParams(p_dc)
        for j, d in enumerate(points):
            model = channel_at_distance(config.fiber, d)
            eta_sim = min(max(model.eta + simulate_eta_shift, 0.0), 1.0)
            simulated = replace(model, eta=eta_sim)
            report = estimate_choi(
                simulated, dc, n, seed=(config.seed, i, j), reference=effective_channel(model, dc)
            )
            checks = check_report(report, model, dc)
            entry = {
                "d_km": d,
                "p_dc": p_dc,
                "eta_prime": click_probability(model.eta, p_dc),
                "click_rate": report.click_rate,
                "checks": [
                    {"name": c.name, "value": c.value, "tolerance": c.tolerance, "passed": c.passed}
                    for c in checks
                ],
            }
            results.append(entry)
            failures += [f"{c.name} at d={d:g} km, p_dc={p_dc:g}" for c in checks if not c.passed]

    # the click-conditioned Choi state does not depend on eta; eta = 1 keeps every trial
    family, lo, hi, expected = _regime_family(config.fiber, 1.0)
    per_point = max(10_000, n // 10)
    found = empirical_threshold(family, lo, hi, per_point, config.seed, width=THRESHOLD_WIDTH)
    thr_ok = abs(found - expected) <= THRESHOLD_WIDTH
    if not thr_ok:
        failures.append("npt_threshold")
    return {
        "n_trials": n,
        "seed": config.seed,
        "points": results,
        "threshold": {
            "regime": config.fiber.regime.value,
            "estimated": found,
            "expected": expected,
            "tolerance": THRESHOLD_WIDTH,
            "passed": thr_ok,
        },
        "failures": failures,
        "passed": not failures,
    }


def format_verify_report(report: dict) -> str:
    lines = [f"trials per point: {report['n_trials']}  seed: {report['seed']}"]
    for pt in report["points"]:
        for c in pt["checks"]:
            status = "ok  " if c["passed"] else "FAIL"
            lines.append(
                f"{status} d={pt['d_km']:g} km p_dc={pt['p_dc']:g} {c['name']}: "
                f"{c['value']:.3e} (tol {c['tolerance']:.3e})"
            )
    t = report["threshold"]
    status = "ok  " if t["passed"] else "FAIL"
    lines.append(
        f"{status} NPT threshold ({t['regime']}): {t['estimated']:.4f} vs {t['expected']:.4f} (tol {t['tolerance']})"
    )
    lines.append("PASS" if report["passed"] else "FAIL: " + "; ".join(report["failures"]))
    return "\n".join(lines) + "\n"
