"""Command-line front end.

Subcommands: solve, spectrum, nodal, inertia, verify.  Configs are
line-oriented ``key = value`` text with ``#`` comments and
comma-separated lists; outputs are RFC-4180 CSV files with 17
significant digits, byte-identical across reruns of the same config.

Exit codes: 0 success, 1 config error, 2 numerical failure,
3 resolution failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import inertia as inertia_mod
from .errors import ConfigError, MfelabError, ResolutionError
from .nodal import analyze_eigenfunction
from .numerics import RadialGrid, edge_slope3
from .solver import (
    Exponential,
    Free,
    MfeProblem,
    Pinned,
    Power,
    Vanishing,
    build_weight,
    solve,
)
from .spectral import dirichlet_first, radiality_check, solve_modes

__all__ = ["RunConfig", "parse_config", "main"]


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _fmt9(x) -> str:
    v = float(x)
    if abs(v) < 5e-10:
        v = 0.0
    return f"{v:.9f}"


@dataclass
class RunConfig:
    problem: MfeProblem
    grid_nodes: int = 512
    grid_kind: str = "uniform"
    grading: float = 2.0
    tol: float = 1e-10
    modes: list = field(default_factory=lambda: [0, 1, 2, 3, 4])
    eigen_count: int = 4
    seed: int = 0
    output_dir: str = "."

    def __post_init__(self):
        if self.grid_nodes < 64:
            raise ConfigError(f"grid_nodes must be >= 64, got {self.grid_nodes}")
        if self.eigen_count < 1:
            raise ConfigError("eigen_count must be >= 1")
        if not self.modes:
            raise ConfigError("modes must be nonempty")
        self.modes = sorted(set(int(k) for k in self.modes))
        if self.grid_kind not in ("uniform", "graded"):
            raise ConfigError(f"unknown grid kind {self.grid_kind!r}")

    def make_grid(self) -> RadialGrid:
        if self.grid_kind == "graded":
            return RadialGrid.graded(self.grid_nodes, self.problem.n, self.grading)
        return RadialGrid.uniform(self.grid_nodes, self.problem.n)


def _parse_kv(path: Path) -> dict:
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    data = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        data[key.lower()] = value
    return data


def _require(data: dict, key: str) -> str:
    if key not in data:
        raise ConfigError(f"missing key: {key}")
    return data[key]


def parse_config(path) -> RunConfig:
    data = _parse_kv(Path(path))
    try:
        n = int(_require(data, "n"))
        lam = float(_require(data, "lambda"))
        kind = _require(data, "nonlinearity").lower()
        if kind == "exponential":
            nonlinearity = Exponential()
        elif kind == "power":
            nonlinearity = Power(float(data.get("p", 2.0)))
        else:
            raise ConfigError(f"unknown nonlinearity {kind!r}")
        mode = data.get("alpha_mode", "free").lower()
        if mode == "free":
            alpha_mode = Free()
        elif mode == "pinned":
            alpha_mode = Pinned(float(data.get("alpha_value", 0.0)))
        else:
            raise ConfigError(f"unknown alpha_mode {mode!r}")
        problem = MfeProblem(n=n, lam=lam, nonlinearity=nonlinearity,
                             alpha_mode=alpha_mode)
        return RunConfig(
            problem=problem,
            grid_nodes=int(data.get("grid_nodes", 512)),
            grid_kind=data.get("grid", "uniform").lower(),
            grading=float(data.get("grading", 2.0)),
            tol=float(data.get("tol", 1e-10)),
            modes=[int(s) for s in data.get("modes", "0,1,2,3,4").split(",")],
            eigen_count=int(data.get("eigen_count", 4)),
            seed=int(data.get("seed", 0)),
            output_dir=data.get("output_dir", "."),
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _out_dir(config: RunConfig, override) -> Path:
    out = Path(override) if override else Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _solve_pipeline(config: RunConfig):
    grid = config.make_grid()
    sol = solve(config.problem, grid, config.tol)
    weight = build_weight(config.problem, sol)
    return grid, sol, weight


def cmd_solve(config: RunConfig, out) -> int:
    out = _out_dir(config, out)
    grid, sol, weight = _solve_pipeline(config)
    _write_csv(
        out / "solution.csv",
        ["r", "psi", "V"],
        ([_fmt(r), _fmt(p), _fmt(v)] for r, p, v in zip(grid.nodes, sol.psi, weight.v)),
    )
    lines = [
        f"alpha={_fmt(sol.alpha)}",
        f"lambda_effective={_fmt(sol.lambda_effective)}",
        f"residual_boundary={_fmt(sol.residual_boundary)}",
        f"residual_mass={_fmt(sol.residual_mass)}",
    ]
    if isinstance(weight.boundary_class, Vanishing):
        lines += [
            "boundary_class=Vanishing",
            f"beta={_fmt(weight.boundary_class.beta)}",
            f"v0={_fmt(weight.boundary_class.v0)}",
        ]
    else:
        lines.append("boundary_class=Positive")
    (out / "solution.meta").write_text("\n".join(lines) + "\n")
    return 0


def cmd_spectrum(config: RunConfig, out) -> int:
    out = _out_dir(config, out)
    grid, sol, weight = _solve_pipeline(config)
    lam = sol.lambda_effective
    modes = sorted(set(config.modes) | {0, 1, 2, 3})
    spectra = solve_modes(weight, lam, modes, config.eigen_count)
    nu1 = dirichlet_first(weight, lam)
    report = radiality_check(spectra, weight)
    s0 = next(s for s in spectra if s.mode_k == 0)

    rows = []
    for s in spectra:
        for i, sigma in enumerate(s.sigmas):
            slope = edge_slope3(s.eigenfunctions[i], grid.nodes, side="right")
            rows.append(
                [str(s.mode_k), str(i + 1), _fmt(sigma), _fmt(s.averages[i]),
                 _fmt(slope)]
            )
            name = f"eigenfunction_m{s.mode_k}_{i + 1}.csv"
            _write_csv(
                out / name,
                ["r", "phi"],
                ([_fmt(r), _fmt(p)] for r, p in zip(grid.nodes, s.eigenfunctions[i])),
            )
    rows.append(["nu1", "", _fmt(nu1), "", ""])
    rows.append(["sigma1_minus_nu1", "", _fmt(s0.sigmas[0] - nu1), "", ""])
    rows.append(["radial_ok", "", "1" if report.ok else "0", "", ""])
    _write_csv(out / "spectrum.csv",
               ["mode_k", "index", "sigma", "average", "boundary_slope"], rows)
    return 0


def cmd_nodal(config: RunConfig, out) -> int:
    out = _out_dir(config, out)
    _, sol, weight = _solve_pipeline(config)
    lam = sol.lambda_effective
    s0 = solve_modes(weight, lam, [0], config.eigen_count)[0]
    rows = []
    for i in range(config.eigen_count):
        rep = analyze_eigenfunction(
            s0.eigenfunctions[i], weight, lam, float(s0.sigmas[i]),
            float(s0.averages[i]), eigen_index=i + 1,
        )
        rows.append(
            [
                "0",
                str(i + 1),
                str(rep.domain_count),
                str(2 * (i + 1)),
                ";".join(_fmt(m) for m in rep.averages),
                "ok" if rep.bound_satisfied else "violation",
            ]
        )
    _write_csv(out / "nodal.csv",
               ["mode", "index", "domain_count", "bound", "m_values", "verdict"],
               rows)
    return 0


def cmd_inertia(args) -> int:
    out = Path(args.out) if args.out else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    if args.m:
        try:
            avg = inertia_mod.AverageVector(
                np.array([float(s) for s in args.m.split(",")])
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        report = inertia_mod.make_report(inertia_mod.build_A(avg), "A")
        values = report.eigenvalues[::-1]  # print largest first
        print("m =", args.m)
        print("eigenvalues:", " ".join(_fmt9(v) for v in values))
        print("inertia (n-, n0, n+):", report.inertia)
        minors = inertia_mod.leading_minors(inertia_mod.build_B_reduced(avg))
        print("leading minors of the reduced matrix:",
              " ".join(_fmt9(v) for v in minors))
        for i, v in enumerate(values, start=1):
            rows.append(["eigenvalue", str(i), _fmt(v)])
        for j, v in enumerate(minors, start=1):
            rows.append(["minor", str(j), _fmt(v)])
        rows.append(["inertia_minus", "", str(report.inertia[0])])
        rows.append(["inertia_zero", "", str(report.inertia[1])])
        rows.append(["inertia_plus", "", str(report.inertia[2])])
        if avg.size >= 3:
            cert = inertia_mod.negative_eigenvalue_certificate(avg)
            print(
                f"certificate: witness minor {cert.witness_index} = "
                f"{_fmt9(cert.witness_minor)} (case N mod 4 = {cert.case_mod4})"
            )
            rows.append(["witness_index", "", str(cert.witness_index)])
            rows.append(["witness_minor", "", _fmt(cert.witness_minor)])
    elif args.random:
        n, trials, seed = (int(x) for x in args.random)
        if n < 3:
            raise ConfigError("random sweeps need N >= 3")
        certified = 0
        interlaced = 0
        for trial in range(trials):
            rng = np.random.default_rng([seed, trial])
            avg = inertia_mod.random_average_vector(n, rng)
            cert = inertia_mod.negative_eigenvalue_certificate(avg)
            K0 = -avg.m_total * np.diag(avg.m)
            inter = inertia_mod.interlacing_check(K0, avg.m)
            certified += int(cert.negative_found and cert.witness_minor <= 0.0)
            interlaced += int(inter.holds)
            rows.append(
                [
                    "trial",
                    str(trial),
                    _fmt(cert.most_negative),
                    str(cert.witness_index),
                    "1" if inter.holds else "0",
                ]
            )
        print(f"{certified}/{trials} certificates found")
        print(f"{interlaced}/{trials} interlacing checks passed")
        if certified != trials or interlaced != trials:
            _write_csv(out / "inertia.csv",
                       ["kind", "index", "value", "witness", "interlaced"], rows)
            return 2
    else:
        raise ConfigError("inertia needs either --m LIST or --random N TRIALS SEED")
    header = (
        ["kind", "index", "value"]
        if args.m
        else ["kind", "index", "value", "witness", "interlaced"]
    )
    _write_csv(out / "inertia.csv", header, rows)
    return 0


def cmd_verify() -> int:
    from .acceptance import run_all

    return 0 if run_all(verbose=True) else 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfelab",
        description="Radial mean-field equilibria, nonlocal spectra, nodal "
        "domains and matrix inertia certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("solve", "solve the constrained problem and write solution.csv/.meta"),
        ("spectrum", "solve and write per-mode spectra to spectrum.csv"),
        ("nodal", "analyze radial eigenfunctions and write nodal.csv"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to a key = value config")
        p.add_argument("--out", default=None, help="output directory")
        if name == "spectrum":
            p.add_argument("--modes", default=None, help="comma list of modes")
            p.add_argument("--eigen-count", type=int, default=None)
        if name == "nodal":
            p.add_argument("--eigen-count", type=int, default=None)

    p = sub.add_parser("inertia", help="matrix certificates from averages")
    p.add_argument("--m", default=None, help="comma list of signed averages")
    p.add_argument("--random", nargs=3, metavar=("N", "TRIALS", "SEED"),
                   default=None, help="randomized sweep")
    p.add_argument("--out", default=None, help="output directory")

    sub.add_parser("verify", help="run the acceptance suite")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify()
        if args.command == "inertia":
            return cmd_inertia(args)
        config = parse_config(args.config)
        if getattr(args, "modes", None):
            config.modes = sorted(set(int(s) for s in args.modes.split(",")))
        if getattr(args, "eigen_count", None):
            config.eigen_count = args.eigen_count
        if args.command == "solve":
            return cmd_solve(config, args.out)
        if args.command == "spectrum":
            return cmd_spectrum(config, args.out)
        if args.command == "nodal":
            return cmd_nodal(config, args.out)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ResolutionError as exc:
        print(f"resolution failure: {exc}", file=sys.stderr)
        return 3
    except (MfelabError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
