"""``coherence-cost`` command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical precondition
violated, 4 verification suite failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

from . import tolerances
from .channel import PartialSwapChannel, iterate, steps_to_equilibrium
from .coherence import block_structure, coherence, l1_distance
from .ensembles import random_density_matrix, random_hamiltonian, rng_for
from .errors import CoherenceCostError, ConfigInvalid
from .fixtures import load_hamiltonian, load_state, parse_number
from .gto import (
    apply_plan,
    build_block_diagonal_stabilizer,
    build_coherent_stabilizer,
    check_gto,
    is_block_diagonal,
    plan_work,
)
from .output import emit_results
from .states import regularize
from .verify import result_rows, run_verification
from .work import work_report

log = logging.getLogger("coherence_cost")

COMMANDS = ("thermalize", "stabilize", "work-cost", "coherence", "sweep", "verify")
JSON_DEFAULT = {"work-cost", "coherence", "verify"}
EXIT_VERIFY_FAILED = 4


@dataclass
class SweepGrid:
    theta_values: list[float]
    beta_values: list[float]
    dims: list[int]
    trials_per_cell: int

    def __post_init__(self):
        if not (self.theta_values and self.beta_values and self.dims):
            raise ConfigInvalid("sweep grid lists must be non-empty")
        for t in self.theta_values:
            if not 0 < t <= math.pi / 2:
                raise ConfigInvalid(f"sweep theta {t} outside (0, pi/2]")
        for b in self.beta_values:
            if not (b > 0 and math.isfinite(b)):
                raise ConfigInvalid(f"sweep beta {b} must be positive")
        for d in self.dims:
            if not 2 <= d <= tolerances.MAX_DIM:
                raise ConfigInvalid(f"sweep dim {d} out of range")
        if self.trials_per_cell < 1:
            raise ConfigInvalid("trials per cell must be positive")

    def cells(self):
        return [(t, b, d) for t in self.theta_values for b in self.beta_values for d in self.dims]


@dataclass
class ExperimentConfig:
    command: str
    state: str = "qubit-plus"
    hamiltonian: str | None = None
    theta: float = math.pi / 4
    beta: float = 1.0
    steps: int = 50
    eps: float = 1e-6
    seed: int = 0
    regularize: float | None = None
    output: str | None = None
    format: str | None = None
    dims: list[int] = field(default_factory=lambda: [2, 3])
    trials: int = 100
    thetas: list[float] = field(default_factory=lambda: [math.pi / 8, math.pi / 4, math.pi / 2])
    betas: list[float] = field(default_factory=lambda: [0.1, 1.0, 10.0])
    workers: int | None = None
    tol: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigInvalid(f"unknown command {self.command!r}")
        if not 0 < self.theta <= math.pi / 2:
            raise ConfigInvalid(f"theta must lie in (0, pi/2], got {self.theta}")
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ConfigInvalid(f"beta must be positive and finite, got {self.beta}")
        if self.steps < 0:
            raise ConfigInvalid("steps must be non-negative")
        if not self.eps > 0:
            raise ConfigInvalid("eps must be positive")
        if self.regularize is not None and not 0 <= self.regularize <= 0.1:
            raise ConfigInvalid("regularize must lie in [0, 0.1]")
        if self.format is None:
            self.format = "json" if self.command in JSON_DEFAULT else "csv"
        if self.format not in ("csv", "json"):
            raise ConfigInvalid(f"format must be csv or json, got {self.format!r}")
        if self.trials < 1:
            raise ConfigInvalid("trials must be positive")
        if self.command == "verify" and not all(2 <= d <= 5 for d in self.dims):
            raise ConfigInvalid("verify dims must lie in 2..5")


def _int_list(text) -> list[int]:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigInvalid(f"expected comma-separated integers, got {text!r}") from None


def _num_list(text) -> list[float]:
    return [parse_number(x) for x in str(text).split(",") if x.strip()]


def _as_int(text) -> int:
    try:
        return int(str(text))
    except ValueError:
        raise ConfigInvalid(f"expected an integer, got {text!r}") from None


_CONVERTERS = {
    "theta": parse_number,
    "beta": parse_number,
    "eps": parse_number,
    "regularize": parse_number,
    "steps": _as_int,
    "seed": _as_int,
    "trials": _as_int,
    "workers": _as_int,
    "dims": _int_list,
    "thetas": _num_list,
    "betas": _num_list,
}


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge defaults, the optional config file and flags (flags win)."""
    known = {f.name for f in fields(ExperimentConfig)} - {"command", "tol"}
    raw: dict = {}
    tol: dict[str, str] = {}
    if args.config:
        for key, value in tolerances.parse_kv_file(args.config).items():
            if key.startswith("tol_"):
                tol[key] = value
            elif key in known:
                raw[key] = value
            else:
                raise ConfigInvalid(f"unknown config key {key!r}")
    for key in known:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    for item in args.tol or []:
        if "=" not in item:
            raise ConfigInvalid(f"--tol expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        tol[key.strip()] = value.strip()
    values = {k: _CONVERTERS[k](v) if k in _CONVERTERS else v for k, v in raw.items()}
    return ExperimentConfig(command=args.command, tol=tol, **values)


def _system(cfg: ExperimentConfig):
    h = load_hamiltonian(cfg.hamiltonian) if cfg.hamiltonian else None
    if h is None and cfg.state.split()[0] == "gibbs":
        raise ConfigInvalid("state 'gibbs' requires --hamiltonian")
    rho = load_state(cfg.state, h, cfg.beta)
    if h is None:
        h = load_hamiltonian(f"ladder {rho.dim}")
    if h.dim != rho.dim:
        raise ConfigInvalid(f"state dim {rho.dim} does not match Hamiltonian dim {h.dim}")
    if cfg.regularize:
        rho = regularize(rho, cfg.regularize)
    return rho, h


def cmd_thermalize(cfg: ExperimentConfig) -> int:
    rho, h = _system(cfg)
    ch = PartialSwapChannel(cfg.theta, cfg.beta, h)
    rows = iterate(ch, rho, cfg.steps).rows(h)
    emit_results(rows, cfg.format, cfg.output)
    if log.isEnabledFor(logging.INFO):
        log.info("steps to reach D_l1 <= %g: %d", cfg.eps, steps_to_equilibrium(ch, rho, cfg.eps))
    return 0


def cmd_stabilize(cfg: ExperimentConfig) -> int:
    target, h = _system(cfg)
    ch = PartialSwapChannel(cfg.theta, cfg.beta, h)
    if is_block_diagonal(target, h):
        plan, kind = build_block_diagonal_stabilizer(target, h), "block-diagonal"
    else:
        plan, kind = build_coherent_stabilizer(target, cfg.beta, h), "coherent"
    diag = check_gto(plan)
    rows = []
    rho = target
    for step in range(1, cfg.steps + 1):
        thermalized = ch.apply(rho)
        w = plan_work(plan, thermalized)
        rho = apply_plan(plan, thermalized)
        rows.append(
            {
                "step": step,
                "plan": kind,
                "d_l1_thermalized": l1_distance(thermalized.matrix, target.matrix, h),
                "d_l1_stabilized": l1_distance(rho.matrix, target.matrix, h),
                "coherence_thermalized": coherence(thermalized, h),
                "work": w,
                "energy_commutator_norm": diag.energy_commutator_norm,
                "stationarity_commutator_norm": diag.stationarity_commutator_norm,
                "is_gto": diag.is_gto,
            }
        )
    fieldnames = [
        "step", "plan", "d_l1_thermalized", "d_l1_stabilized", "coherence_thermalized",
        "work", "energy_commutator_norm", "stationarity_commutator_norm", "is_gto",
    ]
    emit_results(rows, cfg.format, cfg.output, fieldnames)
    return 0


def cmd_work_cost(cfg: ExperimentConfig) -> int:
    rho, h = _system(cfg)
    report = work_report(PartialSwapChannel(cfg.theta, cfg.beta, h), rho)
    emit_results(report.as_dict(), cfg.format, cfg.output)
    return 0


def cmd_coherence(cfg: ExperimentConfig) -> int:
    rho, h = _system(cfg)
    blocks = block_structure(h).blocks
    result = {
        "coherence": coherence(rho, h),
        "eigenvalues": [float(x) for x in h.eigenvalues],
        "blocks": [list(b) for b in blocks],
    }
    if cfg.format == "csv":
        result = {
            "coherence": result["coherence"],
            "eigenvalues": " ".join(format(x, ".17g") for x in result["eigenvalues"]),
            "blocks": ";".join(" ".join(str(i) for i in b) for b in blocks),
        }
    emit_results(result, cfg.format, cfg.output)
    return 0


def _sweep_cell(args):
    index, (theta, beta, dim), trials, seed = args
    rows = []
    for trial in range(trials):
        rng = rng_for(seed, index, trial)
        h = random_hamiltonian(dim, rng)
        rho = random_density_matrix(dim, rng)
        rep = work_report(PartialSwapChannel(theta, beta, h), rho)
        rows.append(
            {
                "theta": theta,
                "beta": beta,
                "dim": dim,
                "seed": seed,
                "cell": index,
                "trial": trial,
                "w_direct": rep.w_direct,
                "w_closed": rep.w_closed,
                "discrepancy": rep.discrepancy,
                "d_symm": rep.d_symm,
                "coherence": rep.coherence,
            }
        )
    return rows


def cmd_sweep(cfg: ExperimentConfig) -> int:
    grid = SweepGrid(cfg.thetas, cfg.betas, cfg.dims, cfg.trials)
    jobs = [(i, cell, grid.trials_per_cell, cfg.seed) for i, cell in enumerate(grid.cells())]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        rows = [row for cell_rows in pool.map(_sweep_cell, jobs) for row in cell_rows]
    emit_results(rows, cfg.format, cfg.output)
    return 0


def cmd_verify(cfg: ExperimentConfig) -> int:
    results = run_verification(cfg.dims, cfg.trials, cfg.seed, cfg.workers)
    emit_results(result_rows(results), cfg.format, cfg.output)
    failed = [r for r in results if not r.ok]
    for r in failed:
        print(f"FAILED {r.suite} (dim {r.dim}): {r.failed}/{r.trials}", file=sys.stderr)
    return EXIT_VERIFY_FAILED if failed else 0


HANDLERS = {
    "thermalize": cmd_thermalize,
    "stabilize": cmd_stabilize,
    "work-cost": cmd_work_cost,
    "coherence": cmd_coherence,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--state", help="state fixture (.json) or preset, e.g. 'qubit-plus'")
    common.add_argument("--hamiltonian", help="Hamiltonian fixture or preset (default: ladder of the state's dim)")
    common.add_argument("--theta", help="partial-swap angle in (0, pi/2]; accepts e.g. pi/4")
    common.add_argument("--beta", help="inverse temperature; accepts e.g. ln2")
    common.add_argument("--steps", help="number of collisions")
    common.add_argument("--eps", help="l1 tolerance for equilibrium")
    common.add_argument("--seed", help="base seed")
    common.add_argument("--regularize", help="mix weight of I/d applied to the state, in [0, 0.1]")
    common.add_argument("--output", "-o", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--config", help="key = value configuration file; flags take precedence")
    common.add_argument("--tol", action="append", metavar="KEY=VALUE", help="tolerance override")
    common.add_argument("--workers", help="thread count for sweep/verify")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="coherence-cost", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("thermalize", parents=[common], help="iterate the collision channel")
    sub.add_parser("stabilize", parents=[common], help="alternate thermalization and stabilization")
    sub.add_parser("work-cost", parents=[common], help="work to stabilize a target, two ways")
    sub.add_parser("coherence", parents=[common], help="coherence and energy block structure")
    sw = sub.add_parser("sweep", parents=[common], help="work identity over a parameter grid")
    sw.add_argument("--thetas", help="comma-separated angles")
    sw.add_argument("--betas", help="comma-separated inverse temperatures")
    sw.add_argument("--dims", help="comma-separated dimensions")
    sw.add_argument("--trials", help="random instances per grid cell")
    ver = sub.add_parser("verify", parents=[common], help="run the seeded invariant suites")
    ver.add_argument("--dims", help="comma-separated dimensions in 2..5")
    ver.add_argument("--trials", help="trials per suite and dimension")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = build_config(args)
        tol = tolerances.load_env_overrides()
        tolerances.set_tolerances(tolerances.with_overrides(tol, cfg.tol))
        return HANDLERS[cfg.command](cfg)
    except CoherenceCostError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    finally:
        tolerances.reset()


if __name__ == "__main__":
    sys.exit(main())
