"""Command-line interface: spectra, densities, closure checks, cross-checks.

Configuration is a single flat JSON object with required numeric keys
"m0", "Z0", "r0", "B0" (natural units) and optional "mode" ("derived"
default or "paper"), "scan_min", "scan_max", "n_brackets", "r_min",
"r_max", "n_points".  Unknown keys are rejected so a typo can never
silently change the physics.

All numeric CSV fields carry 12 significant digits with '\\n' line
endings; identical invocations produce byte-identical output.  Data goes
to --out (written atomically) or standard output; messages go to standard
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

from . import analytic, oracle
from .approximation import error_report
from .errors import ConfigError, GridError, Kg2dError
from .model import PhysicalParams, QuantumNumbers, SolverMode

__all__ = ["RunConfig", "parse_config", "main", "entrypoint"]

SPECTRUM_HEADER = "n,m,Z0,r0,m0,B0,mode,E,kappa_bar,beta1_sq,beta2,residual"
DENSITY_HEADER = "r,u,rho"
APPROX_HEADER = "r,U,Ua,rel_err"

# informational comparisons recorded in the cross-check report
PAPER_ENERGY_WINDOW_FM = (-120.0, -90.0)
PAPER_DENSITY_PEAK_FM = 0.2

_KNOWN_KEYS = {
    "m0", "Z0", "r0", "B0",
    "mode", "scan_min", "scan_max", "n_brackets", "r_min", "r_max", "n_points",
}


def _fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings: model constants, mode, scan window, radial grid."""

    params: PhysicalParams
    mode: SolverMode
    scan_min: float | None = None
    scan_max: float | None = None
    n_brackets: int = 2000
    r_min: float = 1e-3
    r_max: float = 5.0
    n_points: int = 4000
    out: str | None = None


def parse_config(text: str) -> RunConfig:
    """Parse the flat JSON configuration document (fail-closed on unknown keys)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a single flat JSON object")
    for key in doc:
        if key not in _KNOWN_KEYS:
            raise ConfigError(f'unknown key "{key}"')

    def number(key: str) -> float:
        value = doc[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f'non-numeric value for key "{key}"')
        return float(value)

    for key in ("m0", "Z0", "r0", "B0"):
        if key not in doc:
            raise ConfigError(f'missing required key "{key}"')
    params = PhysicalParams(m0=number("m0"), z0=number("Z0"), r0=number("r0"), b0=number("B0"))

    mode_text = doc.get("mode", "derived")
    if not isinstance(mode_text, str):
        raise ConfigError('non-string value for key "mode"')
    try:
        mode = SolverMode.from_string(mode_text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    def opt_number(key: str) -> float | None:
        return number(key) if key in doc else None

    def opt_int(key: str, default: int, minimum: int) -> int:
        if key not in doc:
            return default
        value = doc[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f'non-integer value for key "{key}"')
        if value < minimum:
            raise ConfigError(f'"{key}" must be at least {minimum}, got {value}')
        return value

    scan_min = opt_number("scan_min")
    scan_max = opt_number("scan_max")
    if scan_min is not None and scan_max is not None and scan_min >= scan_max:
        raise ConfigError(f'"scan_min" must lie below "scan_max", got {scan_min} >= {scan_max}')
    r_min = opt_number("r_min")
    r_max = opt_number("r_max")
    cfg = RunConfig(
        params=params,
        mode=mode,
        scan_min=scan_min,
        scan_max=scan_max,
        n_brackets=opt_int("n_brackets", 2000, 10),
        r_min=1e-3 if r_min is None else r_min,
        r_max=5.0 if r_max is None else r_max,
        n_points=opt_int("n_points", 4000, 200),
    )
    if not (0.0 < cfg.r_min < cfg.r_max):
        raise ConfigError(f'"r_min"/"r_max" must satisfy 0 < r_min < r_max, got ({cfg.r_min}, {cfg.r_max})')
    return cfg


def _load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _scan_for(cfg: RunConfig, mode: SolverMode, m: int) -> tuple[float, float, int]:
    """Scan window for one magnetic index, config overrides applied over defaults."""
    default = analytic.default_scan(cfg.params, mode, m, cfg.n_brackets)
    e_min = default[0] if cfg.scan_min is None else cfg.scan_min
    e_max = default[1] if cfg.scan_max is None else cfg.scan_max
    return (e_min, e_max, cfg.n_brackets)


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".kg2d-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        _write_atomic(out, text)


def _err(message: str) -> None:
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_spectrum(args: argparse.Namespace) -> int:
    try:
        cfg = _load_config(args.config)
        mode = SolverMode.from_string(args.mode) if args.mode else cfg.mode
        m_list = [int(tok) for tok in args.m_list.split(",")] if args.m_list else [0]
    except (ConfigError, ValueError) as exc:
        _err(f"config error: {exc}")
        return 1

    levels = []
    failures = []
    for m in sorted(set(m_list)):
        result = analytic.solve_spectrum(
            cfg.params, mode, args.n_max, [m], scan=_scan_for(cfg, mode, m)
        )
        levels.extend(result.levels)
        failures.extend(result.failures)

    for qn, reason in failures:
        _err(f"absent level n={qn.n} m={qn.m}: {reason}")

    if not levels:
        _err("no level solved anywhere in the requested sweep")
        return 2

    p = cfg.params
    lines = [SPECTRUM_HEADER]
    for s in levels:
        c = s.coeffs
        lines.append(
            ",".join(
                [
                    str(s.qn.n),
                    str(s.qn.m),
                    _fmt(p.z0),
                    _fmt(p.r0),
                    _fmt(p.m0),
                    _fmt(p.b0),
                    mode.value,
                    _fmt(s.energy),
                    _fmt(c.kappa_bar),
                    _fmt(c.beta1_sq),
                    _fmt(c.beta2),
                    _fmt(s.residual),
                ]
            )
        )
    _emit("\n".join(lines) + "\n", args.out)

    if args.plot:
        from . import plots

        plots.spectrum_figure(levels, args.plot)
    return 0


def _cmd_density(args: argparse.Namespace) -> int:
    try:
        cfg = _load_config(args.config)
        mode = SolverMode.from_string(args.mode) if args.mode else cfg.mode
    except (ConfigError, ValueError) as exc:
        _err(f"config error: {exc}")
        return 1

    qn = QuantumNumbers(args.n, args.m)
    r_max = args.r_max if args.r_max is not None else cfg.r_max
    points = args.points if args.points is not None else cfg.n_points
    try:
        prob = analytic.QuantizationProblem(
            params=cfg.params, qn=qn, mode=mode, scan=_scan_for(cfg, mode, qn.m)
        )
        state = analytic.solve_level(prob)
        wf = analytic.wavefunction(state, (0.0, r_max, points))
    except GridError as exc:
        _err(f"grid error: {exc}")
        return 1
    except (Kg2dError, ValueError) as exc:
        _err(f"level (n={qn.n}, m={qn.m}) unavailable: {exc}")
        return 2

    rho = analytic.charge_density(wf)
    lines = [DENSITY_HEADER]
    for r, u, d in zip(wf.samples.r_values, wf.samples.values, rho.values):
        lines.append(f"{_fmt(r)},{_fmt(u)},{_fmt(d)}")
    _emit("\n".join(lines) + "\n", args.out)
    print(f"peak_r={_fmt(analytic.density_peak_radius(rho))}")

    if args.plot:
        from . import plots

        plots.density_figure(wf.samples, rho, f"n={qn.n}, m={qn.m}, E={state.energy:.6g} fm^-1", args.plot)
    return 0


def _cmd_approx_check(args: argparse.Namespace) -> int:
    try:
        lo_hi = args.window.split(",")
        if len(lo_hi) != 2:
            raise ValueError(f"window must be 'lo,hi', got {args.window!r}")
        window = (float(lo_hi[0]), float(lo_hi[1]))
        # closure depends only on z0 and r0; rest-mass and field are inert here
        p = PhysicalParams(m0=1.0, z0=args.z0, r0=args.r0, b0=0.0)
        report = error_report(p, SolverMode.PAPER, window, args.points)
    except (Kg2dError, ValueError) as exc:
        _err(f"invalid window: {exc}")
        return 1

    lines = [APPROX_HEADER]
    for r, u, ua, rel in zip(
        report.u_samples.r_values,
        report.u_samples.values,
        report.ua_samples.values,
        report.rel_err_samples.values,
    ):
        lines.append(f"{_fmt(r)},{_fmt(u)},{_fmt(ua)},{_fmt(rel)}")
    _emit("\n".join(lines) + "\n", args.out)
    print(f"sup_rel_err={_fmt(report.sup_rel_error)} l2_rel_err={_fmt(report.l2_rel_error)}")

    if args.plot:
        from . import plots

        plots.approx_figure(report, args.plot)
    return 0


def _cmd_cross_check(args: argparse.Namespace) -> int:
    try:
        cfg = _load_config(args.config)
        mode = SolverMode.from_string(args.mode) if args.mode else cfg.mode
    except (ConfigError, ValueError) as exc:
        _err(f"config error: {exc}")
        return 1

    qn = QuantumNumbers(args.n, args.m)
    ocfg = oracle.OracleConfig(
        variant=oracle.OracleVariant.APPROX,
        grid=(cfg.r_min, cfg.r_max, cfg.n_points),
        richardson=True,
        energy_scan=_scan_for(cfg, mode, qn.m),
    )
    try:
        report = oracle.compare_report(cfg.params, qn, mode, ocfg)
    except GridError as exc:
        _err(f"grid error: {exc}")
        return 1
    except (Kg2dError, ValueError) as exc:
        _err(f"level (n={qn.n}, m={qn.m}) unavailable: {exc}")
        return 2

    peak_r = _analytic_density_peak(cfg.params, qn, mode, _scan_for(cfg, mode, qn.m))
    lo, hi = PAPER_ENERGY_WINDOW_FM
    doc = {
        "E_analytic": report.e_analytic,
        "E_oracle_approx": report.e_oracle_approx,
        "abs_diff": report.abs_diff,
        "rel_diff": report.rel_diff,
        "oracle_exact": [{"r_min": r_min, "E": e} for r_min, e in report.oracle_exact],
        "grid_error_estimate": report.grid_error_estimate,
        "node_count": report.node_count,
        "approximation_error_estimate": report.approximation_error_estimate,
        "paper_energy_window_fm": [lo, hi],
        "energy_within_paper_window": bool(lo <= report.e_analytic <= hi),
        "paper_density_peak_fm": PAPER_DENSITY_PEAK_FM,
        "density_peak_r_fm": peak_r,
    }
    print(json.dumps(doc, indent=2))
    return 0 if report.rel_diff <= 1e-4 else 3


def _analytic_density_peak(
    p: PhysicalParams, qn: QuantumNumbers, mode: SolverMode, scan: tuple[float, float, int]
) -> float:
    prob = analytic.QuantizationProblem(params=p, qn=qn, mode=mode, scan=scan)
    state = analytic.solve_level(prob)
    wf = analytic.wavefunction(state, (0.0, analytic.suggested_r_max(state), 4001))
    return analytic.density_peak_radius(analytic.charge_density(wf))


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kg2d",
        description="Bound states of 2D spin-0 particles in an inverse-square well under a uniform magnetic field",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="solve levels and emit a CSV table")
    sp.add_argument("--config", required=True, help="path to the flat JSON config")
    sp.add_argument("--mode", choices=["derived", "paper"], help="override the config solver mode")
    sp.add_argument("--n-max", type=int, default=0, help="largest radial index (default 0)")
    sp.add_argument(
        "--m-list",
        default="0",
        help="comma-separated magnetic indices (default 0); use --m-list=-1,0,1 for negative entries",
    )
    sp.add_argument("--out", help="output CSV path (default: standard output)")
    sp.add_argument("--plot", help="also render the levels to this image file")
    sp.set_defaults(func=_cmd_spectrum)

    dn = sub.add_parser("density", help="emit wavefunction and charge density samples")
    dn.add_argument("--config", required=True)
    dn.add_argument("--mode", choices=["derived", "paper"])
    dn.add_argument("--n", type=int, required=True, help="radial index")
    dn.add_argument("--m", type=int, required=True, help="magnetic index")
    dn.add_argument("--r-max", type=float, dest="r_max", help="grid end in fm (default from config)")
    dn.add_argument("--points", type=int, help="sample count (default from config)")
    dn.add_argument("--out", help="output CSV path (default: standard output)")
    dn.add_argument("--plot", help="also render amplitude and density to this image file")
    dn.set_defaults(func=_cmd_density)

    ac = sub.add_parser("approx-check", help="closure error report over a radial window")
    ac.add_argument("--z0", type=float, required=True, help="well strength [fm^-1]")
    ac.add_argument("--r0", type=float, required=True, help="placement distance [fm]")
    ac.add_argument("--window", required=True, help="radial window 'lo,hi' in fm")
    ac.add_argument("--points", type=int, default=1000)
    ac.add_argument("--out", help="output CSV path (default: standard output)")
    ac.add_argument("--plot", help="also render the closure comparison to this image file")
    ac.set_defaults(func=_cmd_approx_check)

    cc = sub.add_parser("cross-check", help="analytic vs finite-difference validation record")
    cc.add_argument("--config", required=True)
    cc.add_argument("--mode", choices=["derived", "paper"])
    cc.add_argument("--n", type=int, required=True)
    cc.add_argument("--m", type=int, required=True)
    cc.set_defaults(func=_cmd_cross_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())
