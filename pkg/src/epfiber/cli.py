"""Command-line front end.

Subcommands: sweep, threshold, verify, show-channel. Parameters come from
built-in defaults (0.2 dB/km loss, 100 GHz photons, 0.1 ps/sqrt(km) PMD),
then an optional flat ``key = value`` config file, then command-line flags.

Exit codes: 0 success, 1 invalid input, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .dark_counts import DarkCountParams, effective_channel
from .erasure_pauli import capacity_bounds
from .fiber_model import FiberParams, channel_at_distance
from .linalg import InvalidInputError
from .sweep import (
    SweepConfig,
    format_verify_report,
    rows_to_csv,
    rows_to_json,
    run_sweep,
    solve_threshold,
    verify,
)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class ConfigError(InvalidInputError):
    pass


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _floats(s: str) -> tuple[float, ...]:
    return tuple(float(x) for x in s.split(",") if x.strip())


def _opt_float(s: str) -> float | None:
    return None if s.strip().lower() in ("", "none") else float(s)


# config key -> (destination, parser)
CONFIG_KEYS = {
    "alpha": ("alpha", float),
    "delta_nu": ("delta_nu", float),
    "d_pmd": ("d_pmd", float),
    "regime": ("regime", str),
    "p_inf": ("p_inf", float),
    "L": ("L", float),
    "p_dc": ("p_dc", _floats),
    "d_min": ("d_min", float),
    "d_max": ("d_max", float),
    "points": ("points", int),
    "log_scale": ("log_scale", _bool),
    "clock_hz": ("clock_hz", _opt_float),
    "seed": ("seed", int),
    "trials": ("trials", int),
    "out": ("out", str),
    "format": ("format", str),
    "distance": ("distance", _floats),
}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        dest, conv = CONFIG_KEYS[key]
        try:
            values[dest] = conv(value)
        except ValueError as e:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {e}") from None
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("fiber and detector")
    g.add_argument("--config", help="flat key = value parameter file")
    g.add_argument("--alpha", type=float, help="loss rate, dB/km (default 0.2)")
    g.add_argument("--delta-nu", dest="delta_nu", type=float, help="photon bandwidth, GHz (default 100)")
    g.add_argument("--d-pmd", dest="d_pmd", type=float, help="PMD coefficient, ps/sqrt(km) (default 0.1)")
    g.add_argument("--regime", choices=("depol", "dephase"), help="PMD regime (default dephase)")
    g.add_argument("--p-inf", dest="p_inf", type=float, help="error floor, depolarizing regime (default 1)")
    g.add_argument("--L", dest="L", type=float, help="decoherence length in km, depolarizing regime (default 0.05)")
    g.add_argument("--p-dc", dest="p_dc", type=float, action="append", help="dark-count probability (repeatable)")
    g.add_argument("--d-min", dest="d_min", type=float)
    g.add_argument("--d-max", dest="d_max", type=float)
    g.add_argument("--points", type=int)
    g.add_argument("--log-scale", dest="log_scale", action="store_const", const=True)
    g.add_argument("--clock-hz", dest="clock_hz", type=float, help="source clock for ebits/s output")
    g.add_argument("--seed", type=int)
    g.add_argument("--trials", type=int)
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--distance", type=float, action="append", help="distance in km (repeatable)")

    parser = _Parser(prog="epfiber", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("sweep", parents=[common], help="bounds versus distance")
    sub.add_parser("threshold", parents=[common], help="distance where the upper bound vanishes")
    sub.add_parser("verify", parents=[common], help="Monte-Carlo check of the closed forms")
    sub.add_parser("show-channel", parents=[common], help="channel parameters and bounds at one distance")
    return parser


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise OSError(f"cannot read config {args.config}: {e.strerror}") from e
        values.update(parse_config_text(text, args.config))
    for key in ("alpha", "delta_nu", "d_pmd", "regime", "p_inf", "L", "d_min", "d_max", "points",
                "log_scale", "clock_hz", "seed", "trials", "out", "format"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if args.p_dc:
        values["p_dc"] = tuple(args.p_dc)
    if args.distance:
        values["distance"] = tuple(args.distance)

    fiber_keys = ("alpha", "delta_nu", "d_pmd", "regime", "p_inf", "L")
    fiber = FiberParams(**{k: values[k] for k in fiber_keys if k in values})
    renames = {"points": "n_points", "format": "fmt", "distance": "distances"}
    rest = {renames.get(k, k): v for k, v in values.items() if k not in fiber_keys}
    if "p_dc" in rest:
        rest["p_dc"] = tuple(sorted(set(rest["p_dc"])))
    return SweepConfig(fiber=fiber, **rest)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _cmd_sweep(cfg: SweepConfig) -> int:
    rows = run_sweep(cfg)
    _emit(rows_to_json(rows) if cfg.fmt == "json" else rows_to_csv(rows), cfg.out)
    return EXIT_OK


def _cmd_threshold(cfg: SweepConfig) -> int:
    results = [(p_dc, solve_threshold(cfg.fiber, p_dc)) for p_dc in cfg.p_dc]
    if cfg.fmt == "json":
        text = json.dumps(
            [{"p_dc": p, "d_zero_km": None if math.isinf(d) else d} for p, d in results], sort_keys=True
        ) + "\n"
    else:
        text = "p_dc,d_zero_km\n" + "".join(f"{p:.12g},{'inf' if math.isinf(d) else format(d, '.12g')}\n"
                                            for p, d in results)
    _emit(text, cfg.out)
    return EXIT_OK


def _cmd_verify(cfg: SweepConfig) -> int:
    report = verify(cfg)
    sys.stdout.write(format_verify_report(report))
    if cfg.out:
        _emit(json.dumps(report, indent=1, sort_keys=True) + "\n", cfg.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def _cmd_show(cfg: SweepConfig) -> int:
    d = cfg.distances[0] if cfg.distances else 100.0
    entries = []
    for p_dc in cfg.p_dc:
        ch = channel_at_distance(cfg.fiber, d)
        eff = effective_channel(ch, DarkCountParams(p_dc))
        b = capacity_bounds(eff)
        entries.append({
            "d_km": d, "p_dc": p_dc, "eta": ch.eta, "pauli": list(ch.dist.p),
            "eta_prime": eff.eta, "pauli_prime": list(eff.dist.p),
            "lower": b.lower, "upper": b.upper, "exact": b.exact,
            "rate_per_s": b.upper * cfg.clock_hz if cfg.clock_hz else None,
        })
    if cfg.fmt == "json":
        text = json.dumps(entries, indent=1, sort_keys=True) + "\n"
    else:
        fmt = lambda v: ", ".join(format(x, ".6g") for x in v)  # noqa: E731
        lines = []
        for e in entries:
            lines += [
                f"d = {e['d_km']:g} km, p_dc = {e['p_dc']:g}",
                f"  eta   = {e['eta']:.6g}    p  (I,X,Y,Z) = {fmt(e['pauli'])}",
                f"  eta'  = {e['eta_prime']:.6g}    p' (I,X,Y,Z) = {fmt(e['pauli_prime'])}",
                f"  bounds [ebits/use]: {e['lower']:.6g} <= C2 <= {e['upper']:.6g}"
                + ("  (exact)" if e["exact"] else ""),
            ]
            if e["rate_per_s"] is not None:
                lines.append(f"  upper rate: {e['rate_per_s']:.6g} ebits/s")
        text = "\n".join(lines) + "\n"
    _emit(text, cfg.out)
    return EXIT_OK


COMMANDS = {"sweep": _cmd_sweep, "threshold": _cmd_threshold, "verify": _cmd_verify, "show-channel": _cmd_show}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg)
    except InvalidInputError as e:
        print(f"epfiber: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"epfiber: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
