"""Outer searches: classical outcome maps, relabelling scans and perturbations."""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import BudgetExceeded, ContractError
from .game import CoinKind, classical_map_values
from .linalg import dagger
from .mub import MubSet, Permutation, cyclic_shift, identity_permutation, standard_set
from .numtheory import require_prime
from .optimize import SeesawConfig, default_workers, restart_seed, seesaw

__all__ = [
    "CLASSICAL_BUDGET",
    "EXHAUSTIVE_BUDGET",
    "ClassicalOptimum",
    "ConfigResult",
    "ScanMode",
    "ScanReport",
    "classical_exhaustive",
    "count_relabellings",
    "enumerate_relabellings",
    "perturb_set",
    "perturb_unitary",
    "scan",
]

CLASSICAL_BUDGET = 7**7
EXHAUSTIVE_BUDGET = math.factorial(5) ** 5
RANDOM_DEFAULT_SAMPLES = 10_000
_CHUNK = 1 << 15


class ClassicalOptimum(NamedTuple):
    value: float
    best_map: tuple[int, ...]


def classical_exhaustive(bases: MubSet, budget: int = CLASSICAL_BUDGET, tie_tol: float = 1e-12) -> ClassicalOptimum:
    """Exact classical-coin optimum by enumerating all ``d^d`` outcome maps.

    Among maps within ``tie_tol`` of the maximum the lexicographically
    smallest is returned.
    """
    d = bases.dim
    total = d**d
    if total > budget:
        raise BudgetExceeded(
            f"{total} outcome maps exceed the budget of {budget}; use the see-saw lower bound instead",
            required=total,
            budget=budget,
        )
    values = np.empty(total)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        # lexicographic order: digit j (most significant first) is n(j)
        maps = (idx[:, None] // d ** np.arange(d - 1, -1, -1)[None, :]) % d
        values[start : start + len(idx)] = classical_map_values(bases, maps)
    top = values.max()
    first = int(np.flatnonzero(values >= top - tie_tol)[0])
    best = tuple(int((first // d ** (d - 1 - j)) % d) for j in range(d))
    return ClassicalOptimum(float(top), best)


@dataclass(frozen=True)
class ScanMode:
    kind: str = "exhaustive"  # exhaustive | cyclic | random
    n_samples: int = RANDOM_DEFAULT_SAMPLES

    def __post_init__(self) -> None:
        if self.kind not in ("exhaustive", "cyclic", "random"):
            raise ContractError(f"unknown scan mode {self.kind!r}")
        if self.kind == "random" and self.n_samples < 1:
            raise ContractError("random mode needs n_samples >= 1")

    @classmethod
    def parse(cls, text: "str | ScanMode") -> "ScanMode":
        """Parse ``exhaustive``, ``cyclic``, ``random`` or ``random:N``."""
        if isinstance(text, ScanMode):
            return text
        kind, _, n = str(text).partition(":")
        return cls(kind, int(n)) if n else cls(kind)

    def __str__(self) -> str:
        return f"random:{self.n_samples}" if self.kind == "random" else self.kind


def count_relabellings(d: int, mode: ScanMode | str) -> int:
    mode = ScanMode.parse(mode)
    if mode.kind == "exhaustive":
        return math.factorial(d) ** d
    if mode.kind == "cyclic":
        return d**d
    return mode.n_samples


def enumerate_relabellings(
    d: int,
    mode: ScanMode | str,
    seed: int = 0,
    budget: int = EXHAUSTIVE_BUDGET,
) -> Iterator[tuple[Permutation, ...]]:
    """Lazily yield ``d``-tuples of permutations, one per basis.

    ``exhaustive`` gives all ``(d!)^d`` tuples, ``cyclic`` the ``d^d`` tuples of
    cyclic shifts, and ``random:N`` draws ``N`` uniform tuples from ``seed``.
    """
    mode = ScanMode.parse(mode)
    n = count_relabellings(d, mode)
    if mode.kind != "random" and n > budget:
        raise BudgetExceeded(
            f"{mode} scan at d = {d} needs {n} relabelling tuples, budget is {budget}",
            required=n,
            budget=budget,
        )
    if mode.kind == "exhaustive":
        perms = list(itertools.permutations(range(d)))
        return itertools.product(perms, repeat=d)
    if mode.kind == "cyclic":
        shifts = [cyclic_shift(d, s) for s in range(d)]
        return itertools.product(shifts, repeat=d)
    rng = np.random.default_rng(seed)
    return (tuple(tuple(int(x) for x in rng.permutation(d)) for _ in range(d)) for _ in range(mode.n_samples))


def _perm_id(p: Sequence[int]) -> str:
    return "".join(str(x) for x in p) if len(p) <= 10 else "-".join(str(x) for x in p)


@dataclass
class ConfigResult:
    excluded: int
    relabellings: tuple[Permutation, ...]
    value: float
    seed: int
    restarts: int = 0

    def relabelling_ids(self) -> str:
        return "|".join(_perm_id(p) for p in self.relabellings)

    def to_dict(self) -> dict:
        return {
            "excluded": self.excluded,
            "relabellings": [list(p) for p in self.relabellings],
            "value": self.value,
            "seed": self.seed,
            "restarts": self.restarts,
        }


@dataclass
class ScanReport:
    dim: int
    coin: CoinKind
    mode: ScanMode
    per_config: list[ConfigResult] = field(default_factory=list)
    master_seed: int = 0

    def __post_init__(self) -> None:
        self.coin = CoinKind.parse(self.coin)
        self.mode = ScanMode.parse(self.mode)

    @property
    def total_configs_evaluated(self) -> int:
        return len(self.per_config)

    def _extreme(self, sign: int) -> int:
        # first index wins ties, so the result is independent of evaluation order
        return min(range(len(self.per_config)), key=lambda k: (sign * self.per_config[k].value, k))

    @property
    def min_config(self) -> ConfigResult:
        return self.per_config[self._extreme(+1)]

    @property
    def max_config(self) -> ConfigResult:
        return self.per_config[self._extreme(-1)]

    @property
    def min_value(self) -> float:
        return self.min_config.value

    @property
    def max_value(self) -> float:
        return self.max_config.value

    def subset(self, excluded: int) -> list[ConfigResult]:
        return [c for c in self.per_config if c.excluded == excluded]

    def lookup(self, excluded: int, relabellings: Sequence[Sequence[int]]) -> ConfigResult:
        key = tuple(tuple(p) for p in relabellings)
        for c in self.per_config:
            if c.excluded == excluded and c.relabellings == key:
                return c
        raise KeyError((excluded, key))

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "coin": self.coin.value,
            "mode": str(self.mode),
            "master_seed": self.master_seed,
            "total_configs_evaluated": self.total_configs_evaluated,
            "min_value": self.min_value,
            "min_config": self.min_config.to_dict(),
            "max_value": self.max_value,
            "max_config": self.max_config.to_dict(),
            "per_config": [c.to_dict() for c in self.per_config],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScanReport":
        configs = [
            ConfigResult(
                c["excluded"], tuple(tuple(p) for p in c["relabellings"]), c["value"], c["seed"], c.get("restarts", 0)
            )
            for c in data["per_config"]
        ]
        return cls(data["dim"], CoinKind(data["coin"]), ScanMode.parse(data["mode"]), configs, data.get("master_seed", 0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dim", "coin", "mode", "excluded", "relabellings", "value", "seed", "restarts"])
        for c in self.per_config:
            w.writerow([self.dim, self.coin.value, str(self.mode), c.excluded, c.relabelling_ids(),
                        repr(c.value), c.seed, c.restarts])
        return buf.getvalue()


def _quantum_task(args) -> float:
    d, excluded, rel, cfg = args
    return seesaw(standard_set(d, excluded, rel), CoinKind.QUANTUM, cfg).best_value


def _map_tasks(fn, tasks: list, workers: int) -> list:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [fn(t) for t in tasks]


def scan(
    d: int,
    coin: CoinKind | str = CoinKind.QUANTUM,
    mode: ScanMode | str = "exhaustive",
    seesaw_cfg: SeesawConfig | None = None,
    *,
    seed: int = 0,
    confirm_cfg: SeesawConfig | None = None,
    confirm_top: int = 5,
    extra_tuples: Sequence[Sequence[Sequence[int]]] = (),
    excluded: Sequence[int] | None = None,
    budget: int = EXHAUSTIVE_BUDGET,
    classical_budget: int = CLASSICAL_BUDGET,
    workers: int | None = None,
) -> ScanReport:
    """Evaluate every (excluded basis, relabelling tuple) configuration.

    Quantum coin: one see-saw per configuration, seeded from ``seed`` and the
    configuration index. If ``confirm_cfg`` is given, the ``confirm_top``
    best and worst configurations are re-run with it and the larger value is
    kept. Classical coin: the exhaustive optimum does not depend on the
    labelling, so it is computed once per subset.

    ``extra_tuples`` are evaluated for every subset in addition to the mode's
    tuples (useful to anchor random scans at the identity labelling).
    """
    d = require_prime(d)
    coin = CoinKind.parse(coin)
    mode = ScanMode.parse(mode)
    subsets = list(range(d + 1)) if excluded is None else [int(e) for e in excluded]
    workers = default_workers() if workers is None else workers
    report = ScanReport(d, coin, mode, master_seed=seed)

    if coin is CoinKind.CLASSICAL:
        ident = tuple(identity_permutation(d) for _ in range(d))
        for e in subsets:
            opt = classical_exhaustive(standard_set(d, e), budget=classical_budget)
            report.per_config.append(ConfigResult(e, ident, opt.value, seed, 0))
        return report

    cfg = seesaw_cfg or SeesawConfig(restarts=10)
    extras = [tuple(tuple(int(x) for x in p) for p in t) for t in extra_tuples]
    configs: list[tuple[int, tuple[Permutation, ...]]] = []
    for e in subsets:
        configs.extend((e, rel) for rel in extras)
        for rel in enumerate_relabellings(d, mode, seed=restart_seed(seed, e), budget=budget):
            rel = tuple(tuple(p) for p in rel)
            if rel not in extras:
                configs.append((e, rel))

    seeds = [restart_seed(seed, 1_000_000 + k) for k in range(len(configs))]
    tasks = [(d, e, rel, _with_seed(cfg, s)) for (e, rel), s in zip(configs, seeds)]
    values = _map_tasks(_quantum_task, tasks, workers)
    report.per_config = [
        ConfigResult(e, rel, v, s, cfg.restarts) for (e, rel), v, s in zip(configs, values, seeds)
    ]

    if confirm_cfg is not None and confirm_top > 0:
        order = sorted(range(len(values)), key=lambda k: (values[k], k))
        picks = sorted(set(order[:confirm_top]) | set(order[-confirm_top:]))
        ctasks = [(d, configs[k][0], configs[k][1], _with_seed(confirm_cfg, seeds[k])) for k in picks]
        cvalues = _map_tasks(_quantum_task, ctasks, workers)
        for k, v in zip(picks, cvalues):
            c = report.per_config[k]
            if v >= c.value:
                c.value = v
                c.restarts = confirm_cfg.restarts
    return report


def _with_seed(cfg: SeesawConfig, seed: int) -> SeesawConfig:
    return SeesawConfig(cfg.epsilon, cfg.max_rounds, cfg.restarts, seed, cfg.solver_tol, cfg.solver_max_iter)


def perturb_unitary(U, delta: float, seed: int | None = None) -> np.ndarray:
    """``U exp(i delta H)`` for a seeded random Hermitian ``H`` with ``||H||_F = 1``."""
    if delta < 0:
        raise ContractError(f"delta must be non-negative, got {delta}")
    U = np.asarray(U, dtype=complex)
    n = U.shape[0]
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = (G + dagger(G)) / 2
    H /= np.linalg.norm(H)
    w, V = np.linalg.eigh(H)
    return U @ (V * np.exp(1j * delta * w)) @ dagger(V)


def perturb_set(bases: MubSet, delta: float, seed: int = 0) -> MubSet:
    """Perturb every unitary of a set independently; the result is tagged ``custom``."""
    us = tuple(perturb_unitary(U, delta, restart_seed(seed, k)) for k, U in enumerate(bases.unitaries))
    return MubSet(bases.dim, us, "custom", bases.excluded, bases.relabellings)
