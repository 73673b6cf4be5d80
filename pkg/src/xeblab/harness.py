"""Experiment orchestration: packaged sweeps, CSV emission, and fan-out.

Every experiment is a pure function of (config, master seed): instances fan
out by index, each worker runs one instance's full pipeline, and the
aggregator assembles rows in instance order, so the emitted CSV is
byte-identical for any worker count.

CSV schema (one row per emitted statistic):
    stat_name,architecture,n,depth_or_T,partition,instances,mean,stderr,convention
Per-instance raw values (return probabilities, pass flags) are encoded as
rows with instances=1 and stderr=0 so everything round-trips through the
same parser.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import analytic
from .brownian import BrownianConfig, estimate_moment, trajectory_probs
from .circuits import ALL_TO_ALL, BRICK1D_PERIODIC, Circuit, gen_all_to_all, gen_brick1d
from .errors import ConfigError, ResourceGuardError
from .seeding import SeedSpec
from .spoofer import block_partition, greedy_partition, spoof_distribution, truncate
from .statevector import output_distribution, run_circuit
from .xebstats import (
    aggregate,
    ks_critical_value,
    porter_thomas_fit,
    quantum_fourth_stat,
    spoof_fourth_stat,
    xeb_exact,
)

CSV_HEADER = "stat_name,architecture,n,depth_or_T,partition,instances,mean,stderr,convention"


@dataclass(frozen=True)
class Row:
    stat_name: str
    architecture: str
    n: int
    depth_or_t: float
    partition: str
    instances: int
    mean: float
    stderr: float
    convention: str

    def format(self) -> str:
        return ",".join(
            [
                self.stat_name,
                self.architecture,
                str(self.n),
                repr(float(self.depth_or_t)),
                self.partition,
                str(self.instances),
                repr(float(self.mean)),
                repr(float(self.stderr)),
                self.convention,
            ]
        )


def parse_row(line: str) -> Row:
    parts = line.rstrip("\n").split(",")
    if len(parts) != 9:
        raise ConfigError(f"CSV row has {len(parts)} fields, expected 9")
    return Row(
        stat_name=parts[0],
        architecture=parts[1],
        n=int(parts[2]),
        depth_or_t=float(parts[3]),
        partition=parts[4],
        instances=int(parts[5]),
        mean=float(parts[6]),
        stderr=float(parts[7]),
        convention=parts[8],
    )


def write_csv(rows: list[Row], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row.format() + "\n")


def read_csv(path: str) -> list[Row]:
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ConfigError(f"unexpected CSV header: {header!r}")
        return [parse_row(line) for line in fh if line.strip()]


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    architecture: str = ALL_TO_ALL
    n_values: tuple[int, ...] = (16,)
    d_values: tuple[int, ...] = (5, 6, 7, 8)
    instances: int = 200
    block_sizes: tuple[int, ...] = (5, 10, 15)
    master_seed: int = 2024
    out: str | None = None
    workers: int = 1
    memory_cap_bytes: int = 8 << 30
    xeb_minus_one: bool = False
    # white-noise-ensemble fields
    j_coupling: float = 1.0
    dt: float = 1e-3
    t_values: tuple[float, ...] = (0.1, 0.3)
    trajectories: int = 10_000
    pt_source: str = "discrete"

    def __post_init__(self):
        if not self.n_values or not self.d_values or not self.t_values:
            raise ConfigError("parameter ranges must be nonempty")
        if self.instances < 2:
            raise ConfigError("instances must be >= 2")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if any(n < 2 or n % 2 for n in self.n_values):
            raise ConfigError("qubit counts must be even and >= 2")
        if self.pt_source not in ("discrete", "brownian"):
            raise ConfigError("pt_source must be 'discrete' or 'brownian'")


def projected_memory_bytes(cfg: ExperimentConfig) -> int:
    """Peak bytes: one statevector plus tables and scratch per worker."""
    n_max = max(cfg.n_values)
    per_instance = 6 * 16 * (1 << n_max)
    return cfg.workers * per_instance


def guard(cfg: ExperimentConfig) -> None:
    need = projected_memory_bytes(cfg)
    if need > cfg.memory_cap_bytes:
        raise ResourceGuardError(
            f"projected memory {need} bytes exceeds cap {cfg.memory_cap_bytes} bytes"
            f" (n={max(cfg.n_values)}, workers={cfg.workers})"
        )
    if max(cfg.n_values) > 30:
        raise ResourceGuardError("statevector simulation capped at n=30")


def _map_instances(worker, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(tasks) // (workers * 4))
        return list(pool.map(worker, tasks, chunksize=chunk))


def _gen_circuit(arch: str, n: int, d: int, seed: int, instance: int) -> Circuit:
    spec = SeedSpec(seed, instance, "circuit")
    if arch == ALL_TO_ALL:
        return gen_all_to_all(n, d, spec)
    if arch == BRICK1D_PERIODIC:
        return gen_brick1d(n, d, spec, periodic=True)
    raise ConfigError(f"unknown architecture {arch!r}")


def _fourth_stats_instance(task) -> tuple[float, ...]:
    """One instance of the fourth-moment pipeline; returns the quantum
    statistic followed by one spoofer statistic per requested partition."""
    arch, n, d, seed, instance, partitions = task
    circuit = _gen_circuit(arch, n, d, seed, instance)
    q = output_distribution(run_circuit(circuit))
    out = [quantum_fourth_stat(q)]
    for part_spec in partitions:
        if part_spec == "greedy":
            part = greedy_partition(circuit)
        else:
            part = block_partition(n, int(part_spec.split(":")[1]))
        a = spoof_distribution(truncate(circuit, part)).full_table()
        out.append(spoof_fourth_stat(q, a))
    return tuple(out)


def _xeb_instance(task) -> tuple[float, float, float]:
    arch, n, d, seed, instance, minus_one = task
    circuit = _gen_circuit(arch, n, d, seed, instance)
    q = output_distribution(run_circuit(circuit))
    part = greedy_partition(circuit)
    a = spoof_distribution(truncate(circuit, part)).full_table()
    uniform = np.full(q.size, 1.0 / q.size)
    return (
        xeb_exact(q, q, minus_one),
        xeb_exact(q, a, minus_one),
        xeb_exact(q, uniform, minus_one),
    )


def _p0_instance(task) -> float:
    arch, n, d, seed, instance = task
    circuit = _gen_circuit(arch, n, d, seed, instance)
    state = run_circuit(circuit)
    return float(np.abs(state.amps[0]) ** 2)


def run_fig1(cfg: ExperimentConfig) -> list[Row]:
    """Fourth-moment statistics, all-to-all architecture, greedy spoofer."""
    guard(cfg)
    rows: list[Row] = []
    for n in cfg.n_values:
        for d in cfg.d_values:
            tasks = [
                (ALL_TO_ALL, n, d, cfg.master_seed, i, ("greedy",))
                for i in range(cfg.instances)
            ]
            results = _map_instances(_fourth_stats_instance, tasks, cfg.workers)
            quantum = aggregate("quantum_fourth", [r[0] for r in results])
            spoof = aggregate("spoof_fourth", [r[1] for r in results])
            rows.append(_stat_row(quantum, ALL_TO_ALL, n, d, "none"))
            rows.append(_stat_row(spoof, ALL_TO_ALL, n, d, "greedy"))
    _maybe_write(rows, cfg)
    return rows


def run_fig2(cfg: ExperimentConfig) -> list[Row]:
    """Fourth-moment statistics, periodic 1D brickwork, block spoofers."""
    guard(cfg)
    partitions = tuple(f"block:{r}" for r in cfg.block_sizes)
    rows: list[Row] = []
    for n in cfg.n_values:
        for d in cfg.d_values:
            tasks = [
                (BRICK1D_PERIODIC, n, d, cfg.master_seed, i, partitions)
                for i in range(cfg.instances)
            ]
            results = _map_instances(_fourth_stats_instance, tasks, cfg.workers)
            quantum = aggregate("quantum_fourth", [r[0] for r in results])
            rows.append(_stat_row(quantum, BRICK1D_PERIODIC, n, d, "none"))
            for p, part in enumerate(partitions):
                spoof = aggregate("spoof_fourth", [r[1 + p] for r in results])
                rows.append(_stat_row(spoof, BRICK1D_PERIODIC, n, d, part))
    _maybe_write(rows, cfg)
    return rows


def run_xeb_scores(cfg: ExperimentConfig) -> list[Row]:
    """Instance-mean XEB of the ideal sampler, the greedy spoofer, and the
    uniform control, next to the analytic lower bounds."""
    guard(cfg)
    conv = "minus_one" if cfg.xeb_minus_one else "no_minus_one"
    rows: list[Row] = []
    for n in cfg.n_values:
        for d in cfg.d_values:
            tasks = [
                (cfg.architecture, n, d, cfg.master_seed, i, cfg.xeb_minus_one)
                for i in range(cfg.instances)
            ]
            results = _map_instances(_xeb_instance, tasks, cfg.workers)
            for name, col, part in (
                ("xeb_quantum", 0, "none"),
                ("xeb_spoofer", 1, "greedy"),
                ("xeb_uniform_control", 2, "none"),
            ):
                stat = aggregate(name, [r[col] for r in results])
                rows.append(_stat_row(stat, cfg.architecture, n, d, part, conv))
            bounds = analytic.discrete_bounds(n, d)
            for name, val in (
                ("bound_qs", bounds.qs),
                ("bound_spoofer", bounds.spoofer),
                ("bound_qs_product", bounds.qs_product),
            ):
                rows.append(
                    Row(name, cfg.architecture, n, float(d), "none", 1, val, 0.0, "analytic")
                )
    _maybe_write(rows, cfg)
    return rows


def run_brownian_validation(cfg: ExperimentConfig) -> list[Row]:
    """Monte Carlo k=1 return-probability estimates against the exact sum,
    flagged pass/fail at three standard errors."""
    rows: list[Row] = []
    for n in cfg.n_values:
        for t in cfg.t_values:
            bc = BrownianConfig(
                n=n,
                J=cfg.j_coupling,
                T=t,
                dt=cfg.dt,
                trajectories=cfg.trajectories,
                seed=cfg.master_seed,
            )
            est = estimate_moment(bc, k=1, x=0)
            exact = analytic.return_prob_exact(n, cfg.j_coupling * t)
            passed = abs(est.mean - exact) <= 3.0 * est.stderr
            rows.append(
                Row("brownian_k1_mc", "brownian", n, t, "none",
                    cfg.trajectories, est.mean, est.stderr, "na")
            )
            rows.append(
                Row("brownian_k1_exact", "brownian", n, t, "none", 1, exact, 0.0, "analytic")
            )
            rows.append(
                Row("brownian_k1_pass_3se", "brownian", n, t, "none",
                    1, float(passed), 0.0, "flag")
            )
    _maybe_write(rows, cfg)
    return rows


def run_porter_thomas(cfg: ExperimentConfig) -> list[Row]:
    """Collect scaled return probabilities, fit the exponential law, and
    emit the fit next to the analytic effective dimension."""
    guard(cfg)
    rows: list[Row] = []
    n = cfg.n_values[0]
    dim = float(2**n)
    if cfg.pt_source == "discrete":
        d_or_t = float(cfg.d_values[0])
        arch = cfg.architecture
        tasks = [
            (arch, n, cfg.d_values[0], cfg.master_seed, i) for i in range(cfg.instances)
        ]
        p0 = np.array(_map_instances(_p0_instance, tasks, cfg.workers))
        b_analytic = dim  # deep-circuit limit of the effective dimension
    else:
        d_or_t = float(cfg.t_values[0])
        arch = "brownian"
        bc = BrownianConfig(
            n=n,
            J=cfg.j_coupling,
            T=cfg.t_values[0],
            dt=cfg.dt,
            trajectories=cfg.instances,
            seed=cfg.master_seed,
        )
        p0 = trajectory_probs(bc, x=0)
        b_analytic = analytic.porter_thomas_b(n, cfg.j_coupling * cfg.t_values[0])
    scaled = dim * p0
    bhat, ks = porter_thomas_fit(scaled)
    crit = ks_critical_value(0.01, scaled.size)
    for value in scaled:
        rows.append(Row("pt_p0_scaled", arch, n, d_or_t, "none", 1, float(value), 0.0, "na"))
    rows.append(
        Row("pt_bhat", arch, n, d_or_t, "none", scaled.size,
            bhat, bhat / math.sqrt(scaled.size), "na")
    )
    rows.append(Row("pt_ks", arch, n, d_or_t, "none", scaled.size, ks, 0.0, "na"))
    rows.append(Row("pt_ks_critical_1pct", arch, n, d_or_t, "none", 1, crit, 0.0, "analytic"))
    rows.append(
        Row("pt_b_analytic_scaled", arch, n, d_or_t, "none", 1, b_analytic / dim, 0.0, "analytic")
    )
    rows.append(Row("pt_pass_ks_1pct", arch, n, d_or_t, "none", 1, float(ks <= crit), 0.0, "flag"))
    _maybe_write(rows, cfg)
    return rows


EXPERIMENTS = {
    "fig1": run_fig1,
    "fig2": run_fig2,
    "xeb": run_xeb_scores,
    "brownian": run_brownian_validation,
    "porter-thomas": run_porter_thomas,
}


def run_experiment(cfg: ExperimentConfig) -> list[Row]:
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    return EXPERIMENTS[cfg.experiment](cfg)


def _stat_row(stat, arch: str, n: int, d, partition: str, convention: str = "na") -> Row:
    return Row(stat.name, arch, n, float(d), partition, stat.count, stat.mean, stat.stderr, convention)


def _maybe_write(rows: list[Row], cfg: ExperimentConfig) -> None:
    if cfg.out:
        write_csv(rows, cfg.out)


# ---------------------------------------------------------------------------
# Flat key=value config files with CLI overrides.

_TUPLE_INT = ("n_values", "d_values", "block_sizes")
_TUPLE_FLOAT = ("t_values",)
_INT = ("instances", "master_seed", "workers", "memory_cap_bytes", "trajectories")
_FLOAT = ("j_coupling", "dt")
_BOOL = ("xeb_minus_one",)


def parse_config_value(key: str, raw: str):
    raw = raw.strip()
    if key in _TUPLE_INT:
        return tuple(int(v) for v in raw.split(",") if v.strip())
    if key in _TUPLE_FLOAT:
        return tuple(float(v) for v in raw.split(",") if v.strip())
    if key in _INT:
        return int(raw)
    if key in _FLOAT:
        return float(raw)
    if key in _BOOL:
        if raw.lower() in ("1", "true", "yes"):
            return True
        if raw.lower() in ("0", "false", "no"):
            return False
        raise ConfigError(f"bad boolean for {key}: {raw!r}")
    return raw


def load_config_file(path: str) -> dict:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    values = {}
    known = {f.name for f in fields(ExperimentConfig)}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, raw = line.split("=", 1)
            key = key.strip()
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = parse_config_value(key, raw)
    return values


def make_config(experiment: str, file_values: dict | None = None, **overrides) -> ExperimentConfig:
    values = {"experiment": experiment}
    values.update(file_values or {})
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
