"""See-saw optimisation of Bob's quantum-coin (or classical-coin) strategy.

The objective is bilinear in the probe ``rho`` and the POVM ``{M_a}``. With
``W_a`` the matrix whose columns are ``U_i|a>`` it can be written either as

* ``(1/d) sum_a Tr(M_a D_a)`` with ``D_a = W_a^dagger rho W_a`` (fixed probe), or
* ``Tr(rho K)`` with ``K = (1/d) sum_a W_a M_a W_a^dagger`` (fixed POVM).

The first is a minimum-error discrimination problem, solved here by the
fixed-point iteration ``M_a <- L^{-1/2} D_a M_a D_a L^{-1/2}`` and checked
with the usual optimality conditions. The second is maximised by the top
eigenvector of ``K``. For the classical coin only the diagonal (in the coin
index) parts of ``D_a`` and ``M_a`` enter.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ContractError, ConvergenceError
from .game import CoinKind, Strategy
from .linalg import dagger
from .mub import MubSet

__all__ = [
    "Certificate",
    "MeasurementResult",
    "ProbeResult",
    "RestartRecord",
    "SeesawConfig",
    "SeesawResult",
    "certificate_check",
    "discrimination_operators",
    "optimal_measurement",
    "optimal_probe",
    "random_density_hs",
    "restart_seed",
    "run_restart",
    "seesaw",
]

CERT_DEFECT_TOL = 1e-6
CERT_GAP_TOL = 1e-5


def random_density_hs(d: int, seed: int | np.random.Generator | None = None) -> np.ndarray:
    """Density matrix ``G G^dagger / Tr(G G^dagger)`` with ``G`` complex Ginibre.

    This samples the Hilbert-Schmidt measure on ``d x d`` density matrices.
    """
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = G @ dagger(G)
    return rho / np.trace(rho).real


def restart_seed(master_seed: int, index: int) -> int:
    """Counter-based split of a master seed into per-task seeds."""
    return int(np.random.SeedSequence([int(master_seed), int(index)]).generate_state(1, np.uint64)[0])


def _coin_columns(bases: MubSet) -> np.ndarray:
    return np.transpose(bases.stack(), (2, 1, 0))


def _diagonal_part(ops: np.ndarray) -> np.ndarray:
    out = np.zeros_like(ops)
    idx = np.arange(ops.shape[-1])
    out[:, idx, idx] = ops[:, idx, idx]
    return out


def discrimination_operators(probe, bases: MubSet, coin: CoinKind | str = CoinKind.QUANTUM) -> np.ndarray:
    """Operators ``D_a`` such that the game value is ``(1/d) sum_a Tr(M_a D_a)``.

    Returned as a ``(d, d, d)`` array. For the classical coin the off-diagonal
    coin entries are dropped.
    """
    coin = CoinKind.parse(coin)
    rho = np.asarray(probe, dtype=complex)
    d = bases.dim
    if rho.shape != (d, d):
        raise ContractError(f"probe has shape {rho.shape}, expected {(d, d)}")
    if np.max(np.abs(rho - dagger(rho))) > 1e-9 or abs(np.trace(rho) - 1) > 1e-9:
        raise ContractError("probe must be a Hermitian, trace-one density operator")
    if np.linalg.eigvalsh((rho + dagger(rho)) / 2)[0] < -1e-9:
        raise ContractError("probe has a negative eigenvalue")
    W = _coin_columns(bases)
    D = dagger(W) @ rho @ W
    D = (D + dagger(D)) / 2
    if coin is CoinKind.CLASSICAL:
        D = _diagonal_part(D)
    return D


class Certificate(NamedTuple):
    hermitian_defect: float  # max |Y - Y^dagger|, Y = sum_a D_a M_a
    min_eig_gap: float  # min_a lambda_min(Y - D_a)
    dual_bound: float  # certified upper bound on sum_a Tr(M_a D_a)

    @property
    def optimal(self) -> bool:
        return self.hermitian_defect <= CERT_DEFECT_TOL and self.min_eig_gap >= -CERT_GAP_TOL


def certificate_check(povm, ops) -> Certificate:
    """Optimality conditions for maximising ``sum_a Tr(M_a D_a)`` over POVMs.

    ``{M_a}`` is optimal iff ``Y = sum_a D_a M_a`` is Hermitian and
    ``Y >= D_a`` for every ``a``. When the second condition fails by ``g``,
    ``Y + g I`` is still dual feasible, which gives ``dual_bound``.
    """
    M = np.asarray(povm, dtype=complex)
    D = np.asarray(ops, dtype=complex)
    Y = (D @ M).sum(axis=0)
    defect = float(np.max(np.abs(Y - dagger(Y))))
    Ys = (Y + dagger(Y)) / 2
    gap = float(np.linalg.eigvalsh(Ys[None] - D).min())
    n = Y.shape[0]
    bound = float(np.trace(Ys).real) + n * max(0.0, -gap)
    return Certificate(defect, gap, bound)


class MeasurementResult(NamedTuple):
    povm: np.ndarray  # (d, n, n)
    value: float  # sum_a Tr(M_a D_a)
    iterations: int
    certificate: Certificate


def _objective(M: np.ndarray, D: np.ndarray) -> float:
    return float(np.einsum("aij,aji->", M, D).real)


def optimal_measurement(ops, tol: float = 1e-8, max_iter: int = 5000, check_every: int = 5) -> MeasurementResult:
    """POVM maximising ``sum_a Tr(M_a D_a)`` for PSD operators ``D_a``.

    Starts from ``M_a = I/d`` and iterates the fixed-point map until the
    optimality certificate is met to ``tol``. Directions outside the support
    of ``L = sum_b D_b M_b D_b`` receive weight ``1/d`` in every element so
    completeness holds exactly.

    Raises
    ------
    ContractError
        If an operator is not Hermitian PSD or the shapes disagree.
    ConvergenceError
        After ``max_iter`` iterations without certification; carries the best
        iterate found.
    """
    D = np.asarray(ops, dtype=complex)
    if D.ndim != 3 or D.shape[1] != D.shape[2]:
        raise ContractError(f"expected a stack of square operators, got shape {D.shape}")
    if np.max(np.abs(D - dagger(D)), initial=0.0) > 1e-9:
        raise ContractError("discrimination operators must be Hermitian")
    if D.size and np.linalg.eigvalsh(D).min() < -1e-9:
        raise ContractError("discrimination operators must be positive semidefinite")
    D = (D + dagger(D)) / 2
    k, n, _ = D.shape
    eye = np.eye(n, dtype=complex)
    M = np.broadcast_to(eye / k, (k, n, n)).copy()
    best = (_objective(M, D), M)
    cert = certificate_check(M, D)
    for it in range(1, max_iter + 1):
        if cert.hermitian_defect <= tol and cert.min_eig_gap >= -tol:
            return MeasurementResult(M, _objective(M, D), it - 1, cert)
        DMD = D @ M @ D
        L = DMD.sum(axis=0)
        w, V = np.linalg.eigh(L)
        keep = w > max(w[-1], 0.0) * 1e-12 if w[-1] > 0 else np.zeros(n, dtype=bool)
        Vk = V[:, keep]
        S = (Vk / np.sqrt(w[keep])) @ dagger(Vk)
        M = S @ DMD @ S
        if not keep.all():
            Vn = V[:, ~keep]
            M = M + (Vn @ dagger(Vn)) / k
        M = (M + dagger(M)) / 2
        value = _objective(M, D)
        if value > best[0]:
            best = (value, M)
        if it % check_every == 0 or it == max_iter:
            cert = certificate_check(M, D)
    if cert.hermitian_defect <= tol and cert.min_eig_gap >= -tol:
        return MeasurementResult(M, _objective(M, D), max_iter, cert)
    raise ConvergenceError(
        f"fixed-point iteration not certified after {max_iter} iterations (gap {cert.min_eig_gap:.3e})",
        povm=best[1],
        value=best[0],
        gap=cert.min_eig_gap,
    )


class ProbeResult(NamedTuple):
    probe: np.ndarray
    value: float


def probe_operator(povm, bases: MubSet, coin: CoinKind | str = CoinKind.QUANTUM) -> np.ndarray:
    """``K`` with ``Tr(rho K)`` equal to the game value for fixed POVM."""
    coin = CoinKind.parse(coin)
    M = np.asarray(povm, dtype=complex)
    if coin is CoinKind.CLASSICAL:
        M = _diagonal_part(M)
    W = _coin_columns(bases)
    K = (W @ M @ dagger(W)).sum(axis=0) / bases.dim
    return (K + dagger(K)) / 2


def optimal_probe(povm, bases: MubSet, coin: CoinKind | str = CoinKind.QUANTUM) -> ProbeResult:
    """Best probe for a fixed POVM: projector onto a top eigenvector of ``K``."""
    K = probe_operator(povm, bases, coin)
    w, V = np.linalg.eigh(K)
    v = V[:, -1]
    return ProbeResult(np.outer(v, v.conj()), float(w[-1]))


@dataclass(frozen=True)
class SeesawConfig:
    epsilon: float = 1e-6
    max_rounds: int = 500
    restarts: int = 50
    master_seed: int = 0
    solver_tol: float = 1e-8
    solver_max_iter: int = 5000

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ContractError(f"epsilon must be positive, got {self.epsilon}")
        if self.restarts < 1:
            raise ContractError(f"need at least one restart, got {self.restarts}")
        if self.max_rounds < 1:
            raise ContractError(f"max_rounds must be >= 1, got {self.max_rounds}")


@dataclass
class RestartRecord:
    seed: int
    rounds: int
    final_value: float
    monotone_ok: bool
    converged: bool  # value gain fell below epsilon before max_rounds
    solver_ok: bool  # every measurement step was certified
    certificate: Certificate
    trace: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "rounds": self.rounds,
            "final_value": self.final_value,
            "monotone_ok": self.monotone_ok,
            "converged": self.converged,
            "solver_ok": self.solver_ok,
            "certificate": self.certificate._asdict(),
            "trace": list(self.trace),
        }


@dataclass
class SeesawResult:
    best_value: float
    best_strategy: Strategy
    per_restart: list[RestartRecord]
    coin: CoinKind
    config: SeesawConfig
    is_valid_povm: bool
    discrimination_gap: float

    @property
    def certificate(self) -> dict:
        return {"is_valid_povm": self.is_valid_povm, "discrimination_gap": self.discrimination_gap}

    def to_dict(self) -> dict:
        return {
            "best_value": self.best_value,
            "coin": self.coin.value,
            "config": self.config.__dict__.copy(),
            "certificate": self.certificate,
            "best_strategy": self.best_strategy.to_dict(),
            "per_restart": [r.to_dict() for r in self.per_restart],
        }


def _measure(D: np.ndarray, cfg: SeesawConfig) -> tuple[np.ndarray, bool]:
    try:
        res = optimal_measurement(D, tol=cfg.solver_tol, max_iter=cfg.solver_max_iter)
        return res.povm, True
    except ConvergenceError as err:
        return err.povm, False


def run_restart(bases: MubSet, coin: CoinKind, cfg: SeesawConfig, seed: int) -> tuple[RestartRecord, Strategy]:
    """One see-saw run from a Hilbert-Schmidt random probe."""
    rho = random_density_hs(bases.dim, seed)
    value = 0.0
    prev_M = None
    trace: list[float] = []
    solver_ok = True
    converged = False
    for _ in range(cfg.max_rounds):
        D = discrimination_operators(rho, bases, coin)
        M, ok = _measure(D, cfg)
        solver_ok &= ok
        # keep the previous POVM when the solver lands below it on this probe
        if prev_M is not None and _objective(prev_M, D) > _objective(M, D):
            M = prev_M
        cert = certificate_check(M, D)
        rho, new_value = optimal_probe(M, bases, coin)
        trace.append(new_value)
        gain = new_value - value
        value, prev_M = new_value, M
        if gain < cfg.epsilon:
            converged = True
            break
    if coin is CoinKind.CLASSICAL:
        M = _diagonal_part(M)
    monotone = all(b >= a - 1e-9 for a, b in zip(trace, trace[1:]))
    record = RestartRecord(seed, len(trace), value, monotone, converged, solver_ok, cert, trace)
    return record, Strategy(rho, tuple(M))


def _restart_task(args):
    bases, coin, cfg, seed = args
    return run_restart(bases, coin, cfg, seed)


def default_workers() -> int:
    env = os.environ.get("MUBGAME_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def seesaw(
    bases: MubSet,
    coin: CoinKind | str = CoinKind.QUANTUM,
    config: SeesawConfig | None = None,
    workers: int = 1,
) -> SeesawResult:
    """Best see-saw value over ``config.restarts`` seeded random starts.

    Restart ``k`` uses ``restart_seed(config.master_seed, k)``, so the result
    does not depend on ``workers``.
    """
    coin = CoinKind.parse(coin)
    cfg = config or SeesawConfig()
    tasks = [(bases, coin, cfg, restart_seed(cfg.master_seed, k)) for k in range(cfg.restarts)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_restart_task, tasks))
    else:
        outcomes = [_restart_task(t) for t in tasks]
    records = [r for r, _ in outcomes]
    best = max(range(len(records)), key=lambda k: (records[k].final_value, -k))
    strategy = outcomes[best][1]
    M = np.stack(strategy.povm)
    valid = bool(
        np.max(np.abs(M.sum(axis=0) - np.eye(bases.dim))) <= 1e-7
        and np.linalg.eigvalsh(M).min() >= -1e-7
    )
    return SeesawResult(
        best_value=records[best].final_value,
        best_strategy=strategy,
        per_restart=records,
        coin=coin,
        config=cfg,
        is_valid_povm=valid,
        discrimination_gap=records[best].certificate.min_eig_gap,
    )

