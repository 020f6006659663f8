"""The guessing game: evaluation, the perfect strategy and classical-coin values.

Conventions. The controlled unitary is ``CU = sum_i U_i^dagger (x) |i><i|``
with the probe register first and the coin second. Alice's state after the
control is ``CU (rho_B (x) rho_C) CU^dagger``; she then measures the probe
register in the computational basis while Bob measures the coin. For the
quantum coin this reduces to::

    P = (1/d) sum_{i,j,a} <i|M_a|j> <a|U_j^dagger rho_B U_i|a>

and for the classical coin only the ``i == j`` terms survive.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractError
from .linalg import (
    dagger,
    is_psd,
    lambda_max,
    matrix_from_pairs,
    matrix_to_pairs,
    projector,
)
from .mub import MubSet, dpp_set
from .numtheory import require_prime

__all__ = [
    "CoinKind",
    "Strategy",
    "classical_map_value",
    "classical_map_values",
    "classical_upper_bound",
    "controlled_unitary",
    "guessing_probability",
    "guessing_probability_tensor",
    "outcome_vectors",
    "perfect_probe",
    "perfect_strategy",
    "uniform_strategy",
]


class CoinKind(enum.Enum):
    QUANTUM = "quantum"
    CLASSICAL = "classical"

    def state(self, d: int) -> np.ndarray:
        """``|+><+|`` for the quantum coin, ``I/d`` for the classical one."""
        if self is CoinKind.QUANTUM:
            return np.full((d, d), 1 / d, dtype=complex)
        return np.eye(d, dtype=complex) / d

    @classmethod
    def parse(cls, value: "CoinKind | str") -> "CoinKind":
        return value if isinstance(value, cls) else cls(str(value).lower())


@dataclass(frozen=True, eq=False)
class Strategy:
    """Bob's probe state and his ``d``-outcome measurement on the coin."""

    probe: np.ndarray
    povm: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        probe = np.array(self.probe, dtype=complex)
        povm = tuple(np.array(M, dtype=complex) for M in self.povm)
        probe.setflags(write=False)
        for M in povm:
            M.setflags(write=False)
        object.__setattr__(self, "probe", probe)
        object.__setattr__(self, "povm", povm)

    @property
    def dim(self) -> int:
        return self.probe.shape[0]

    def violations(self, tol: float = 1e-9) -> list[str]:
        """Human-readable list of broken invariants; empty when valid."""
        out = []
        d = self.dim
        if self.probe.shape != (d, d):
            out.append(f"probe has shape {self.probe.shape}")
            return out
        if not is_psd(self.probe, tol):
            out.append("probe is not PSD")
        if abs(np.trace(self.probe) - 1) > tol:
            out.append(f"probe trace is {np.trace(self.probe).real:.12g}, not 1")
        if len(self.povm) != d:
            out.append(f"POVM has {len(self.povm)} elements, expected {d}")
        for a, M in enumerate(self.povm):
            if M.shape != (d, d):
                out.append(f"POVM element {a} has shape {M.shape}")
            elif not is_psd(M, tol):
                out.append(f"POVM element {a} is not PSD")
        if not out and np.max(np.abs(sum(self.povm) - np.eye(d))) > tol:
            out.append("POVM elements do not sum to identity")
        return out

    def validate(self, tol: float = 1e-9) -> "Strategy":
        bad = self.violations(tol)
        if bad:
            raise ContractError("invalid strategy: " + "; ".join(bad))
        return self

    def to_dict(self) -> dict:
        return {
            "probe": matrix_to_pairs(self.probe),
            "povm": [matrix_to_pairs(M) for M in self.povm],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Strategy":
        return cls(matrix_from_pairs(data["probe"]), tuple(matrix_from_pairs(M) for M in data["povm"]))


def uniform_strategy(d: int) -> Strategy:
    """Maximally mixed probe with the trivial POVM ``M_a = I/d``."""
    eye = np.eye(d, dtype=complex) / d
    return Strategy(eye, tuple(eye for _ in range(d)))


def controlled_unitary(bases: MubSet) -> np.ndarray:
    """``sum_i U_i^dagger (x) |i><i|`` as a ``d^2 x d^2`` matrix (probe index slow)."""
    d = bases.dim
    CU = np.zeros((d * d, d * d), dtype=complex)
    for i, U in enumerate(bases.unitaries):
        # rows/cols (x, i) with x the probe index -> flat index x*d + i
        CU[i::d, i::d] = dagger(U)
    return CU


def _coin_columns(bases: MubSet) -> np.ndarray:
    """``W[a]`` has columns ``U_i|a>``, i.e. ``W[a][:, i] = U_i[:, a]``."""
    return np.transpose(bases.stack(), (2, 1, 0))


def guessing_probability(bases: MubSet, strategy: Strategy, coin: CoinKind | str = CoinKind.QUANTUM) -> float:
    """Average probability that Bob's outcome equals Alice's."""
    coin = CoinKind.parse(coin)
    if strategy.dim != bases.dim:
        raise ContractError(f"strategy dimension {strategy.dim} != set dimension {bases.dim}")
    strategy.validate()
    W = _coin_columns(bases)
    D = dagger(W) @ strategy.probe @ W  # D[a][j, i] = <a|U_j^dag rho U_i|a>
    M = np.stack(strategy.povm)
    if coin is CoinKind.CLASSICAL:
        value = np.einsum("aii,aii->", M, D)
    else:
        value = np.einsum("aij,aji->", M, D)
    return float(value.real) / bases.dim


def guessing_probability_tensor(bases: MubSet, strategy: Strategy, coin: CoinKind | str = CoinKind.QUANTUM) -> float:
    """Literal ``d^2 x d^2`` evaluation; independent check of :func:`guessing_probability`."""
    coin = CoinKind.parse(coin)
    d = bases.dim
    CU = controlled_unitary(bases)
    state = CU @ np.kron(strategy.probe, coin.state(d)) @ dagger(CU)
    total = 0.0
    for a, M in enumerate(strategy.povm):
        ket = np.zeros((d, d), dtype=complex)
        ket[a, a] = 1
        total += np.trace(state @ np.kron(ket, M)).real
    return float(total)


def perfect_probe(d: int) -> np.ndarray:
    """Amplitudes of Bob's pure probe for the DPP bases.

    For ``d > 3`` the cubic phase is ``omega^(3^(d-2) k^3)`` with the exponent
    reduced mod ``d``; for ``d = 3`` it is the ninth root ``omega_9^(k^3)``.
    """
    d = require_prime(d, odd=True)
    k = np.arange(d)
    if d == 3:
        phases = np.exp(2j * np.pi * ((k**3) % 9) / 9)
    else:
        alpha = pow(3, d - 2, d)
        phases = np.exp(2j * np.pi * ((alpha * k**3) % d) / d)
    return phases / math.sqrt(d)


def outcome_vectors(d: int, bases: MubSet | None = None) -> np.ndarray:
    """Unnormalised coin states ``|phi_k> = (1/sqrt d) sum_a <k|U_a^dag|psi_B> |a>``.

    Row ``k`` of the result is ``|phi_k>``.
    """
    bases = dpp_set(d) if bases is None else bases
    psi = perfect_probe(d)
    amps = np.stack([dagger(U) @ psi for U in bases.unitaries])  # [a, k]
    return amps.T / math.sqrt(d)


def perfect_strategy(d: int, bases: MubSet | None = None, tol: float = 1e-12) -> Strategy:
    """Closed-form strategy with guessing probability one against the DPP bases.

    Outcomes whose ``|phi_k>`` vanish (this happens, e.g., for d = 5 and 11)
    occur with probability zero; they are assigned an orthonormal basis of
    the complement of the non-vanishing directions so the measurement stays
    projective and complete.
    """
    d = require_prime(d, odd=True)
    if bases is not None and bases.family != "dpp":
        raise ContractError(
            f"strategy is construction-specific: it needs the DPP bases, got family {bases.family!r}"
        )
    phis = outcome_vectors(d)
    norms = np.einsum("ka,ka->k", phis.conj(), phis).real
    povm: list[np.ndarray | None] = [None] * d
    for k in range(d):
        if norms[k] > tol:
            povm[k] = projector(phis[k]) / norms[k]
    missing = [k for k in range(d) if povm[k] is None]
    if missing:
        rest = np.eye(d) - sum(M for M in povm if M is not None)
        w, V = np.linalg.eigh((rest + dagger(rest)) / 2)
        for k, col in zip(missing, range(d - 1, d - 1 - len(missing), -1)):
            povm[k] = projector(V[:, col])
    return Strategy(projector(perfect_probe(d)), tuple(povm))


def classical_map_value(bases: MubSet, assignment: Sequence[int]) -> float:
    """``(1/d) lambda_max[sum_j U_j |n(j)><n(j)| U_j^dagger]`` for an outcome map ``n``."""
    d = bases.dim
    n = [int(x) for x in assignment]
    if len(n) != d or any(not 0 <= x < d for x in n):
        raise ContractError(f"outcome map must have {d} entries in 0..{d - 1}, got {assignment}")
    T = sum(projector(U[:, x]) for U, x in zip(bases.unitaries, n))
    return lambda_max(T) / d


def classical_map_values(bases: MubSet, maps: np.ndarray) -> np.ndarray:
    """Vectorised :func:`classical_map_value` for an ``(N, d)`` integer array of maps."""
    d = bases.dim
    maps = np.asarray(maps, dtype=np.intp)
    S = bases.stack()
    # P[j, x] = |U_j[:, x]><U_j[:, x]|
    cols = np.transpose(S, (0, 2, 1))
    P = cols[:, :, :, None] * cols[:, :, None, :].conj()
    T = np.zeros((maps.shape[0], d, d), dtype=complex)
    for j in range(d):
        T += P[j, maps[:, j]]
    return np.linalg.eigvalsh(T)[:, -1] / d


def classical_upper_bound(d: int) -> float:
    """``(1/d)(1 + (d-1)/sqrt(d))``, valid for any set of ``d`` MUBs."""
    if d < 1:
        raise ContractError(f"dimension must be positive, got {d}")
    return (1 + (d - 1) / math.sqrt(d)) / d
