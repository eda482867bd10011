"""``floquet-noise <command> --config <path> [--out <path>] [--workers N]``."""
from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import logging
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .anderson import SchrodingerParams, band_scan
from .coeffs import DriveSpec, derive_seed
from .config import COMMANDS, ConfigError, canonical_json, parse_config
from .lattice import cutoff_convergence_scan
from .monodromy import (IntegrationError, chart_cell, constant_coefficient_propagator, integrate_periods,
                        noiseless_exponent)
from .randprod import estimate_lyapunov, theorem1_test

log = logging.getLogger("floquet_noise")

HEADERS = {
    "chart": ["k", "P", "mu", "alpha", "regime"],
    "lyap": ["k", "P", "sigma", "N", "mu0", "mu_hat", "std_err", "seed"],
    "theorem1": ["k", "P", "sigma", "N", "n_seeds", "mu0", "mean_muq", "ci_low", "fraction_exceeding", "seed"],
    "lattice": ["L", "Lambda", "n", "sigma", "N", "mu_hat", "std_err", "mu0_max", "seed"],
    "anderson": ["E", "band_or_gap", "mu_noiseless", "mu_noisy", "std_err", "xi", "seed"],
    "oracle": ["draw", "omega", "c", "max_abs_error"],
}


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def render_csv(header, rows) -> bytes:
    lines = [",".join(header)]
    lines += [",".join(format_value(v) for v in row) for row in rows]
    return ("\n".join(lines) + "\n").encode("ascii")


def atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


@contextlib.contextmanager
def _mapper(n_workers: int):
    if n_workers <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        yield pool.map


def _lyap_job(job):
    k, P, sigma, cfg, seed = job
    drive = cfg.drive.spec(P)
    noise = cfg.noise.spec(seed, sigma)
    integ = cfg.integrator.spec()
    mode = k * k + cfg.m_chi * cfg.m_chi
    mu0 = noiseless_exponent(mode, drive, integ).mu
    est = estimate_lyapunov(mode, drive, noise, cfg.N, integ, n_batches=cfg.n_batches, burn_in=cfg.burn_in)
    return (k, P, sigma, cfg.N, mu0, est.mu_hat, est.std_err, seed)


def _chart_job(job):
    k, P, cfg = job
    return tuple(chart_cell(k, P, cfg.drive.spec(), cfg.m_chi, cfg.integrator.spec()))


def _oracle_rows(cfg):
    integ = cfg.integrator.spec()
    rng = np.random.default_rng(np.random.SeedSequence(cfg.master_seed))
    rows = []
    for i in range(cfg.n_draws):
        omega = rng.uniform(*cfg.omega_range)
        if i % 2 == 0:
            c = rng.uniform(0.0, cfg.positive_max) * omega**2
        else:
            c = -rng.uniform(0.0, cfg.negative_max) * omega**2
        drive = DriveSpec(0.0, omega)
        q = np.full((1, cfg.segments_per_period), c)
        got = integrate_periods(0.0, drive, q, integ)[0]
        want = constant_coefficient_propagator(c, drive.period)
        rows.append((i, omega, c, float(np.abs(got - want).max())))
    return rows


def compute_rows(cfg):
    """Result rows for a validated config, in cell-index order."""
    integ = cfg.integrator.spec()
    with _mapper(cfg.n_workers) as map_fn:
        if cfg.command == "chart":
            jobs = [(k, P, cfg) for P in cfg.P_grid.points() for k in cfg.k_grid.points()]
            return list(map_fn(_chart_job, jobs))
        if cfg.command == "lyap":
            cells = [(k, P, s) for P in cfg.P_values for k in cfg.k_values for s in cfg.sigma_values]
            jobs = [(k, P, s, cfg, derive_seed(cfg.master_seed, i)) for i, (k, P, s) in enumerate(cells)]
            return list(map_fn(_lyap_job, jobs))
        if cfg.command == "theorem1":
            noise = cfg.noise.spec(cfg.master_seed)
            rep = theorem1_test(cfg.mode.spec(), cfg.drive.spec(), noise, cfg.N, cfg.n_seeds, integ,
                                n_batches=cfg.n_batches, burn_in=cfg.burn_in, map_fn=map_fn)
            return [(cfg.mode.k, cfg.drive.amplitude, noise.sigma, cfg.N, cfg.n_seeds, rep.mu0, rep.mean_muq,
                     rep.ci_low, rep.fraction_exceeding, cfg.master_seed)]
        if cfg.command == "lattice":
            rows = cutoff_convergence_scan(cfg.L_values, cfg.Lambda_values, cfg.drive.spec(), cfg.m_chi,
                                           cfg.noise.spec(cfg.master_seed), cfg.N, integ, cfg.homogeneous,
                                           cfg.burn_in, cfg.n_batches, map_fn=map_fn)
            return [tuple(r) for r in rows]
        if cfg.command == "anderson":
            template = SchrodingerParams(0.0, cfg.periodic.spec(), cfg.random.spec(cfg.master_seed), cfg.mass)
            rows = band_scan(cfg.E_grid.points(), template, cfg.N, integ, cfg.n_batches, map_fn=map_fn)
            return [tuple(r) for r in rows]
        if cfg.command == "oracle":
            return _oracle_rows(cfg)
    raise ValueError(f"unknown command {cfg.command!r}")


def run(cfg, out_path: str | None = None) -> int:
    """Compute, then write the CSV and its ``.meta.json`` sidecar atomically.

    Returns the process exit status.
    """
    out_path = out_path or cfg.output_path or f"{cfg.command}.csv"
    try:
        rows = compute_rows(cfg)
    except (IntegrationError, ValueError, ArithmeticError) as exc:
        log.error("%s failed: %s", cfg.command, exc)
        return 3
    canon = canonical_json(cfg)
    meta = {
        "command": cfg.command,
        "config": json.loads(canon),
        "config_sha256": hashlib.sha256(canon.encode()).hexdigest(),
        "master_seed": cfg.master_seed,
        "version": __version__,
    }
    try:
        atomic_write(out_path, render_csv(HEADERS[cfg.command], rows))
        atomic_write(out_path + ".meta.json", (json.dumps(meta, indent=2, sort_keys=True) + "\n").encode())
    except OSError as exc:
        log.error("could not write %s: %s", out_path, exc)
        return 4
    log.info("wrote %d rows to %s", len(rows), out_path)
    if cfg.command == "oracle":
        worst = max(r[3] for r in rows)
        ok = math.isfinite(worst) and worst < cfg.tolerance
        print(f"oracle: max elementwise error {worst:.3e} (tolerance {cfg.tolerance:g}) "
              f"{'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="floquet-noise", description=__doc__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON run configuration (defaults are used when omitted)")
    parser.add_argument("--out", help="output CSV path (overrides output_path)")
    parser.add_argument("--workers", type=int, help="worker processes (overrides n_workers)")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = b"{}"
        if args.config:
            with open(args.config, "rb") as fh:
                text = fh.read()
        cfg = parse_config(text, args.command)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError([("n_workers", "must be >= 1")])
            cfg = cfg.model_copy(update={"n_workers": args.workers})
    except ConfigError as exc:
        for path, msg in exc.errors:
            print(f"config error: {path}: {msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2
    return run(cfg, args.out)


if __name__ == "__main__":
    sys.exit(main())
