"""Batch front end: ``mrjc --preset fig3 --out out/fig3``.

Writes ``series.csv``, ``spectrum.json``, ``layout.json`` (as requested) and a
``manifest.json`` echoing the fully resolved configuration.  A config with a
``sweep`` block writes ``sweep.csv`` plus one run directory per grid point.

Exit codes: 0 success, 2 configuration error, 3 truncation non-convergence.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .config import OUTPUT_KINDS, PRESETS, ConfigError, RunConfig, load_config, load_preset, parse_config
from .dynamics import StateVector, TruncationError, converge_truncation, propagate_eigen, sample_times
from .hamiltonian import assemble_chain_hamiltonian, ladder_spacing_deviation, overlaps_with, spectrum
from .model import BasisState, build_chain_basis, chain_k
from .observables import SERIES_COLUMNS, ObservableSeries, observable_series, revival_peaks
from .waveguide import CouplingLaw, export_layout

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
SERIES_HEADER = "t," + ",".join(SERIES_COLUMNS)
SWEEP_HEADER = "value,max_revival,first_peak_t,ladder_deviation"
WEIGHT_TOL = 1e-6


def fmt(x: float) -> str:
    """Decimal notation, 12 significant digits."""
    if x == 0:
        return "0"
    return np.format_float_positional(float(x), precision=12, unique=False, fractional=False, trim="-")


def write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def series_csv(series: ObservableSeries) -> str:
    cols = [series.times] + list(series.columns().values())
    lines = [SERIES_HEADER]
    for row in zip(*cols):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


@dataclass
class RunResult:
    n_max: int
    series: ObservableSeries
    eigenvalues: np.ndarray
    overlaps: np.ndarray
    ladder_deviation: float
    files: list


def _resolve_n_max(cfg: RunConfig) -> int:
    if cfg.n_max != "auto":
        return int(cfg.n_max)
    return converge_truncation(cfg.params, cfg.seed, cfg.t_max, cfg.tol, cfg.samples_per_period)


def run(cfg: RunConfig, out_dir) -> RunResult:
    """Simulate one configuration and write the requested artifacts."""
    out = Path(out_dir)
    params = cfg.params
    n_max = _resolve_n_max(cfg)
    basis = build_chain_basis(params, cfg.seed, n_max)
    H = assemble_chain_hamiltonian(params, basis)
    psi0 = StateVector.initial(basis)
    traj = propagate_eigen(H, psi0, sample_times(cfg.t_max, cfg.samples_per_period, params.omega1))
    series = observable_series(traj)
    spec = spectrum(H)
    weights = overlaps_with(spec, psi0.amplitudes)
    deviation = ladder_spacing_deviation(spec.eigenvalues, weights, params.omega1, WEIGHT_TOL)

    files = []
    if "series" in cfg.outputs:
        write_atomic(out / "series.csv", series_csv(series))
        files.append("series.csv")
    if "spectrum" in cfg.outputs:
        payload = {
            "eigenvalues": spec.eigenvalues.tolist(),
            "overlaps": weights.tolist(),
            "ladder_deviation": deviation,
            "weight_tol": WEIGHT_TOL,
            "omega1": params.omega1,
        }
        write_atomic(out / "spectrum.json", json.dumps(payload, indent=2) + "\n")
        files.append("spectrum.json")
    if "layout" in cfg.outputs:
        w = cfg.waveguide
        layout = export_layout(params, basis, CouplingLaw(w.chi, w.alpha), (w.n_s, w.a, w.wavelength), w.omega1_scale)
        write_atomic(out / "layout.json", layout.to_json())
        files.append("layout.json")

    resolved = dataclasses.replace(cfg, n_max=n_max).to_dict()
    manifest = {
        "config": resolved,
        "n_max_mode": "auto" if cfg.n_max == "auto" else "fixed",
        "files": files,
        "units": {
            "energy": "hbar*omega1",
            "time": "1/omega1 (revival period 2*pi = 6.283185307180)",
            "diagonal_offset": "kappa*hbar*omega2 dropped",
        },
        "chain_size": len(basis),
    }
    write_atomic(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return RunResult(n_max, series, spec.eigenvalues, weights, deviation, files)


def _point_config(cfg: RunConfig, value) -> RunConfig:
    params = cfg.params.with_changes(**{cfg.sweep.name: value})
    seed = BasisState(cfg.seed.level, cfg.seed.n, chain_k(params, cfg.seed.level))
    return dataclasses.replace(cfg, params=params, seed=seed, sweep=None)


def _sweep_point(args):
    cfg, value, out = args
    try:
        res = run(_point_config(cfg, value), out)
    except TruncationError as exc:
        return value, None, EXIT_NUMERIC, str(exc)
    except (ConfigError, ValueError) as exc:
        return value, None, EXIT_CONFIG, str(exc)
    half_period = math.pi / cfg.params.omega1
    report = revival_peaks(res.series, cfg.threshold)
    row = (
        res.series.window_max(half_period, math.inf) if res.series.times[-1] > half_period else float("nan"),
        report.peaks[0][0] if report.peaks else None,
        res.ladder_deviation,
    )
    return value, row, EXIT_OK, ""


def sweep(cfg: RunConfig, out_dir, jobs: int = 1) -> int:
    """One independent run per grid value, summarized in sweep.csv; returns an exit code.

    ``max_revival`` is the largest revival after the first half period, which
    skips the trivial return at t = 0.
    """
    if cfg.sweep is None:
        raise ConfigError("config.sweep: no sweep grid given")
    out = Path(out_dir)
    tasks = [(cfg, v, out / f"point_{i:03d}") for i, v in enumerate(cfg.sweep.values)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]

    lines, errors, code = [SWEEP_HEADER], [], EXIT_OK
    for value, row, status, msg in results:
        if row is None:
            lines.append(f"{fmt(value)},,,")
            errors.append({"value": value, "exit_code": status, "error": msg})
            code = max(code, status)
            continue
        max_rev, first_t, dev = row
        lines.append(",".join([fmt(value), fmt(max_rev), "" if first_t is None else fmt(first_t), fmt(dev)]))
    write_atomic(out / "sweep.csv", "\n".join(lines) + "\n")
    manifest = {
        "config": cfg.to_dict(),
        "points": [t[2].name for t in tasks],
        "errors": errors,
        "max_revival_window": "t > pi/omega1",
    }
    write_atomic(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mrjc", description="Mixed Rabi / Jaynes-Cummings three-level simulator")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="JSON run configuration")
    src.add_argument("--preset", choices=PRESETS)
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--nmax", help="mode-1 cutoff N or 'auto'")
    p.add_argument("--tmax", type=float, help="final time in units of 1/omega1")
    p.add_argument("--spp", type=int, help="samples per period 2*pi/omega1")
    p.add_argument("--emit", help=f"comma-separated subset of {','.join(OUTPUT_KINDS)} (empty for manifest only)")
    p.add_argument("--sweep", metavar="NAME=V1,V2,...", help="sweep one parameter over a grid")
    p.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    return p


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    raw = cfg.to_dict()
    if args.nmax is not None:
        if args.nmax == "auto":
            raw["n_max"] = "auto"
        else:
            try:
                raw["n_max"] = int(args.nmax)
            except ValueError:
                raise ConfigError(f"--nmax: expected an integer or 'auto', got {args.nmax!r}") from None
    if args.tmax is not None:
        raw["t_max"] = args.tmax
    if args.spp is not None:
        raw["samples_per_period"] = args.spp
    if args.emit is not None:
        raw["outputs"] = [e.strip() for e in args.emit.split(",") if e.strip()]
    if args.sweep is not None:
        name, _, values = args.sweep.partition("=")
        try:
            raw["sweep"] = {"name": name.strip(), "values": [float(v) for v in values.split(",") if v.strip()]}
        except ValueError:
            raise ConfigError(f"--sweep: cannot parse {args.sweep!r}") from None
    return parse_config(raw)


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else load_preset(args.preset)
        cfg = _apply_overrides(cfg, args)
        if cfg.sweep is not None:
            return sweep(cfg, args.out, args.jobs)
        run(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
