"""Command-line front end.

Experiments are configured through a flat ``key = value`` text file
(``#`` starts a comment) and write an RFC-4180 CSV next to a JSON
metadata sidecar holding the resolved configuration, the package version
and the wall time.  The CSV bytes are reproducible run to run; the
sidecar's timestamp and wall time are not.

Subcommands: steady, transient, sweep-freq, sweep-power, scaling,
scatter, fit-longrange, validate.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import evolve, steady_state
from .generator import N_CAP, assemble
from .longrange import fit_powerlaw
from .medium import DriveSpec, LongRange, MediumSpec, NearestNeighbor
from .observables import (
    excitation_profile,
    reflection,
    scaling_exponent,
    transmission,
)
from .reference import brute_force_generator, two_atom_reference
from .scattering import single_photon
from .spinops import LabelIndexMap

_CONFIG_KEYS = {
    "n": int,
    "omega": "floats",
    "jx": float,
    "jz": float,
    "gamma_l": float,
    "gamma_r": float,
    "gamma_lambda": float,
    "gamma_gamma": float,
    "v_g": float,
    "coupling": str,
    "alpha": float,
    "beta": float,
    "fit_terms": int,
    "fit_rmax": int,
    "omega_p": float,
    "i_in": float,
    "e_p": float,
    "t_end": float,
    "dt_out": float,
    "freq_grid": "grid",
    "power_grid": "floats",
    "lengths": "ints",
    "fit_u": float,
    "seed": int,
    "draws": int,
}

_DEFAULTS = {
    "omega": (1.0,),
    "jx": 0.05,
    "jz": 0.05,
    "gamma_l": 0.1,
    "gamma_r": 0.1,
    "gamma_lambda": 0.0,
    "gamma_gamma": 0.0,
    "v_g": 1.0,
    "coupling": "nn",
    "omega_p": 1.0,
    "t_end": 400.0,
    "dt_out": 1.0,
    "freq_grid": (0.6, 1.4, 201),
    "power_grid": (1.6e-5, 0.04, 0.16),
    "lengths": (2, 3, 4, 5, 6),
    "fit_u": 3.0,
    "seed": 0,
    "draws": 10,
}


class ConfigError(Exception):
    """A configuration file could not be interpreted."""


def _parse_value(key: str, raw: str):
    kind = _CONFIG_KEYS[key]
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is str:
            return raw
        if kind == "floats":
            return tuple(float(p) for p in raw.split(","))
        if kind == "ints":
            return tuple(int(p) for p in raw.split(","))
        if kind == "grid":
            start, stop, count = raw.split(":")
            return (float(start), float(stop), int(count))
    except ValueError as err:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({err})") from err
    raise AssertionError(kind)


def parse_config(path: str | Path) -> dict:
    """Read a flat key = value configuration file.

    Unknown keys are errors, as is giving neither or inconsistent drive
    strengths; alias-free and deliberately strict so a typo cannot
    silently fall back to a default.
    """
    settings: dict = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in settings:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        if raw == "":
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        settings[key] = _parse_value(key, raw)
    if "n" not in settings:
        raise ConfigError(f"{path}: the chain length 'n' is required")
    if "i_in" not in settings and "e_p" not in settings:
        settings["i_in"] = 1.6e-5
    return settings


@dataclass
class Experiment:
    """Resolved configuration of one run."""

    settings: dict
    n_cap: int = N_CAP
    medium: MediumSpec = field(init=False)
    drive: DriveSpec = field(init=False)

    def __post_init__(self) -> None:
        s = {**_DEFAULTS, **self.settings}
        omega = s["omega"]
        if len(omega) == 1:
            omega = omega[0]
        if s["coupling"] == "nn":
            coupling = NearestNeighbor()
        elif s["coupling"] == "longrange":
            if "alpha" not in s or "beta" not in s:
                raise ConfigError("longrange coupling needs alpha and beta")
            coupling = LongRange(
                alpha=s["alpha"],
                beta=s["beta"],
                terms=s.get("fit_terms", 3),
                rmax=s.get("fit_rmax"),
            )
        else:
            raise ConfigError(f"unknown coupling {s['coupling']!r}")
        try:
            self.medium = MediumSpec(
                n=s["n"],
                omega=omega,
                jx=s["jx"],
                jz=s["jz"],
                gamma_l=s["gamma_l"],
                gamma_r=s["gamma_r"],
                gamma_lambda=s["gamma_lambda"],
                gamma_gamma=s["gamma_gamma"],
                coupling=coupling,
                v_g=s["v_g"],
            )
            self.drive = DriveSpec(
                omega_p=s["omega_p"],
                i_in=s.get("i_in"),
                e_p=s.get("e_p"),
            )
            self.drive.intensity(self.medium.v_g)  # both-given consistency
        except (ValueError, NotImplementedError) as err:
            raise ConfigError(str(err)) from err
        self.resolved = s

    def metadata(self) -> dict:
        s = self.resolved
        return {
            "version": __version__,
            "config": {
                k: (list(v) if isinstance(v, tuple) else v)
                for k, v in sorted(s.items())
                if k in _CONFIG_KEYS
            },
            "derived": {
                "omega_l": self.drive.omega_l(self.medium),
                "i_in": self.drive.intensity(self.medium.v_g),
                "n_variables": 4**self.medium.n - 1,
            },
        }


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _write_outputs(
    out: Path, header: list[str], rows: list[list], meta: dict, t0: float
) -> None:
    out = Path(out)
    _write_csv(out, header, rows)
    sidecar = out.with_suffix(".meta.json") if out.suffix == ".csv" else Path(
        str(out) + ".meta.json"
    )
    meta = dict(meta)
    meta["wall_time_s"] = time.perf_counter() - t0
    meta["written_at"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _pool_map(func, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# --------------------------------------------------------------------------
# Subcommand bodies.  Each returns (header, rows, extra_metadata).


def _run_steady(exp: Experiment, args) -> tuple:
    gen = assemble(exp.medium, exp.drive, n_cap=args.n_cap)
    state = steady_state(gen)
    rows = [
        ["transmission", "", transmission(state, exp.medium, exp.drive)],
        ["reflection", "", reflection(state, exp.medium, exp.drive)],
    ]
    for j, value in enumerate(excitation_profile(state), start=1):
        rows.append(["excitation", j, float(value)])
    return ["quantity", "site", "value"], rows, {}


def _run_transient(exp: Experiment, args) -> tuple:
    s = exp.resolved
    gen = assemble(exp.medium, exp.drive, n_cap=args.n_cap)
    traj = evolve(gen, t_end=s["t_end"], dt_out=s["dt_out"])
    header = ["time", "transmission", "reflection"] + [
        f"excitation_{j}" for j in range(1, exp.medium.n + 1)
    ]
    rows = []
    for k in range(len(traj)):
        state = traj.state(k)
        rows.append(
            [float(traj.times[k]),
             transmission(state, exp.medium, exp.drive),
             reflection(state, exp.medium, exp.drive)]
            + [float(v) for v in excitation_profile(state)]
        )
    return header, rows, {}


def _run_sweep_freq(exp: Experiment, args) -> tuple:
    start, stop, count = exp.resolved["freq_grid"]
    grid = np.linspace(start, stop, count)

    def solve(omega_p: float):
        drive = DriveSpec(omega_p=float(omega_p), i_in=exp.drive.intensity(exp.medium.v_g))
        gen = assemble(exp.medium, drive, n_cap=args.n_cap)
        state = steady_state(gen)
        return [
            float(omega_p),
            transmission(state, exp.medium, drive),
            reflection(state, exp.medium, drive),
        ]

    rows = _pool_map(solve, list(grid), args.workers)
    return ["omega_p", "transmission", "reflection"], rows, {}


def _run_sweep_power(exp: Experiment, args) -> tuple:
    powers = exp.resolved["power_grid"]

    def solve(i_in: float):
        drive = DriveSpec(omega_p=exp.drive.omega_p, i_in=float(i_in))
        gen = assemble(exp.medium, drive, n_cap=args.n_cap)
        state = steady_state(gen)
        return [
            float(i_in),
            drive.omega_l(exp.medium),
            transmission(state, exp.medium, drive),
            reflection(state, exp.medium, drive),
        ]

    rows = _pool_map(solve, list(powers), args.workers)
    return ["i_in", "omega_l", "transmission", "reflection"], rows, {}


def _run_scaling(exp: Experiment, args) -> tuple:
    lengths = exp.resolved["lengths"]

    def solve(n: int):
        medium = MediumSpec(
            n=int(n),
            omega=exp.medium.omega[0] if exp.medium.homogeneous else exp.medium.omega,
            jx=exp.medium.jx,
            jz=exp.medium.jz,
            gamma_l=exp.medium.gamma_l,
            gamma_r=exp.medium.gamma_r,
            gamma_lambda=exp.medium.gamma_lambda,
            gamma_gamma=exp.medium.gamma_gamma,
            coupling=exp.medium.coupling,
            v_g=exp.medium.v_g,
        )
        gen = assemble(medium, exp.drive, n_cap=args.n_cap)
        state = steady_state(gen)
        return [int(n), transmission(state, medium, exp.drive)]

    rows = _pool_map(solve, list(lengths), args.workers)
    fit = scaling_exponent([r[0] for r in rows], [r[1] for r in rows])
    extra = {
        "scaling_fit": {
            "kappa": fit.kappa,
            "intercept": fit.intercept,
            "r_squared": fit.r_squared,
        }
    }
    return ["n", "transmission"], rows, extra


def _run_scatter(exp: Experiment, args) -> tuple:
    start, stop, count = exp.resolved["freq_grid"]
    grid = np.linspace(start, stop, count)
    rows = []
    for omega_p in grid:
        res = single_photon(exp.medium, float(omega_p))
        rows.append(
            [
                float(omega_p),
                res.t.real,
                res.t.imag,
                res.r.real,
                res.r.imag,
                res.transmittance,
                res.reflectance,
            ]
        )
    return (
        ["omega_p", "t_real", "t_imag", "r_real", "r_imag",
         "transmittance", "reflectance"],
        rows,
        {},
    )


def _run_fit_longrange(exp: Experiment, args) -> tuple:
    s = exp.resolved
    rmax = s.get("fit_rmax", max(exp.medium.n - 1, s.get("fit_terms", 3)))
    fit = fit_powerlaw(s["fit_u"], s.get("fit_terms", 3), rmax)
    rows = [
        [k + 1, fit.gammas[k], fit.deltas[k]] for k in range(fit.terms)
    ]
    extra = {
        "fit": {
            "u": fit.u,
            "rmax": fit.rmax,
            "residual": fit.residual,
            "converged": fit.converged,
        }
    }
    return ["term", "gamma", "delta"], rows, extra


def _run_validate(exp: Experiment, args) -> tuple:
    s = exp.resolved
    rng = np.random.default_rng(s["seed"])
    checks: list[tuple[str, bool, str]] = []

    def record(name: str, defect: float, bound: float) -> None:
        checks.append((name, defect <= bound, f"defect {defect:.2e} bound {bound:.0e}"))

    # assembly against the dense reference over random draws
    worst = 0.0
    for _ in range(s["draws"]):
        n = int(rng.integers(2, 5))
        lossy = bool(rng.integers(0, 2))
        medium = MediumSpec(
            n=n,
            omega=tuple(1.0 + 0.2 * rng.standard_normal(n)),
            jx=float(0.2 * rng.standard_normal()),
            jz=float(0.2 * rng.standard_normal()),
            gamma_l=float(rng.uniform(0.0, 0.3)),
            gamma_r=float(rng.uniform(0.0, 0.3)),
            gamma_lambda=float(rng.uniform(0.0, 0.1)) * lossy,
            gamma_gamma=float(rng.uniform(0.0, 0.1)) * lossy,
        )
        drive = DriveSpec(
            omega_p=float(1.0 + 0.1 * rng.standard_normal()),
            i_in=float(rng.uniform(0.0, 0.3)),
        )
        gen = assemble(medium, drive)
        ref = brute_force_generator(medium, drive)
        worst = max(
            worst,
            float(np.max(np.abs(gen.as_dense() - ref.as_dense()))),
            float(np.max(np.abs(gen.source - ref.source))),
        )
    record("assembly_vs_dense_reference", worst, 1e-13)

    # two-atom hand transcription
    medium = MediumSpec(n=2, omega=(1.0, 1.04), jx=0.07, jz=0.03,
                        gamma_l=0.12, gamma_r=0.08,
                        gamma_lambda=0.01, gamma_gamma=0.02)
    drive = DriveSpec(omega_p=0.99, i_in=0.05)
    gen = assemble(medium, drive)
    z15, s15, order = two_atom_reference(medium, drive)
    lm = LabelIndexMap(2)
    perm = np.array([lm.index(lab) for lab in order])
    defect = max(
        float(np.max(np.abs(gen.as_dense()[np.ix_(perm, perm)] - z15))),
        float(np.max(np.abs(gen.source[perm] - s15))),
    )
    record("two_atom_transcription", defect, 1e-13)

    # flux conservation on random lossless steady states
    worst = 0.0
    for _ in range(s["draws"]):
        n = int(rng.integers(1, 5))
        medium = MediumSpec(
            n=n,
            omega=tuple(1.0 + 0.2 * rng.standard_normal(n)),
            jx=float(rng.uniform(0.01, 0.2)),
            jz=float(rng.uniform(0.0, 0.2)),
            gamma_l=float(rng.uniform(0.02, 0.3)),
            gamma_r=float(rng.uniform(0.02, 0.3)),
        )
        drive = DriveSpec(
            omega_p=float(1.0 + 0.1 * rng.standard_normal()),
            i_in=float(rng.uniform(1e-5, 0.3)),
        )
        state = steady_state(assemble(medium, drive))
        worst = max(
            worst,
            abs(
                transmission(state, medium, drive)
                + reflection(state, medium, drive)
                - 1.0
            ),
        )
    record("lossless_flux_conservation", worst, 1e-8)

    rows = [[name, "pass" if ok else "FAIL", detail] for name, ok, detail in checks]
    ok_all = all(ok for _, ok, _ in checks)
    return ["check", "status", "detail"], rows, {"all_passed": ok_all}


_RUNNERS = {
    "steady": _run_steady,
    "transient": _run_transient,
    "sweep-freq": _run_sweep_freq,
    "sweep-power": _run_sweep_power,
    "scaling": _run_scaling,
    "scatter": _run_scatter,
    "fit-longrange": _run_fit_longrange,
    "validate": _run_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainlight",
        description="Transport of laser light through a driven atom chain.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="key = value settings file")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--workers", type=int, default=1,
                       help="worker threads for sweeps (default 1)")
        p.add_argument("--n-cap", type=int, default=N_CAP,
                       help=f"refuse chains longer than this (default {N_CAP})")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        settings = parse_config(args.config)
        exp = Experiment(settings, n_cap=args.n_cap)
        header, rows, extra = _RUNNERS[args.command](exp, args)
    except (ConfigError, ValueError, NotImplementedError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    meta = exp.metadata()
    meta["command"] = args.command
    meta.update(extra)
    _write_outputs(Path(args.out), header, rows, meta, t0)
    if args.command == "validate":
        for row in rows:
            print(f"{row[0]:35s} {row[1]:5s} {row[2]}")
        if not extra.get("all_passed", False):
            print("validation FAILED", file=sys.stderr)
            return 1
        print("all validation checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
