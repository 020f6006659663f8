"""Mutually unbiased bases in prime dimension.

A basis is stored as a unitary whose columns are the basis vectors, so
column ``j`` of ``U_a`` is the state Alice associates with outcome ``j`` of
measurement ``a``. Relabelling an outcome is a column permutation.

For odd primes the pool of ``d + 1`` bases is ordered as::

    [computational, WF a=0, WF a=1, ..., WF a=d-1]

and ``excluded`` indexes into that list. The quadratic phase construction
does not give MUBs for ``d = 2``, so there the pool is the three Pauli
eigenbases ``[computational, real Hadamard, complex Hadamard]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError
from .linalg import dagger, is_unitary, matrix_from_pairs, matrix_to_pairs
from .numtheory import require_prime

__all__ = [
    "FAMILIES",
    "MubReport",
    "MubSet",
    "basis_pool",
    "check_permutation",
    "cyclic_shift",
    "dpp_relabellings",
    "dpp_set",
    "dpp_unitary",
    "identity_permutation",
    "relabel",
    "standard_set",
    "verify_mub_set",
    "wf_unitary",
]

FAMILIES = ("wf", "dpp", "wf-plus-computational", "custom")

Permutation = tuple[int, ...]


def check_permutation(pi: Iterable[int], d: int | None = None) -> Permutation:
    """Validate a bijection on ``{0, ..., n-1}`` and return it as a tuple."""
    p = tuple(int(x) for x in pi)
    if sorted(p) != list(range(len(p))):
        raise ContractError(f"{p} is not a permutation of 0..{len(p) - 1}")
    if d is not None and len(p) != d:
        raise ContractError(f"permutation has length {len(p)}, expected {d}")
    return p


def identity_permutation(d: int) -> Permutation:
    return tuple(range(d))


def cyclic_shift(d: int, s: int) -> Permutation:
    """``j -> (j - s) mod d``: new outcome ``j`` reads old outcome ``j - s``."""
    return tuple((j - s) % d for j in range(d))


def _phase_unitary(d: int, exponent) -> np.ndarray:
    i = np.arange(d)[:, None]
    j = np.arange(d)[None, :]
    e = np.mod(exponent(i, j), d)
    return np.exp(2j * np.pi * e / d) / np.sqrt(d)


def wf_unitary(a: int, d: int) -> np.ndarray:
    """Wootters-Fields basis ``a``: entry (i, j) is ``omega^(a i^2 + i j) / sqrt(d)``."""
    d = require_prime(d, odd=True)
    if not 0 <= a < d:
        raise ContractError(f"basis index {a} out of range for d = {d}")
    return _phase_unitary(d, lambda i, j: a * i * i + i * j)


def dpp_unitary(a: int, d: int) -> np.ndarray:
    """Relabelled WF basis with entries ``omega^(a i^2 + i j - a^2 i) / sqrt(d)``."""
    d = require_prime(d, odd=True)
    if not 0 <= a < d:
        raise ContractError(f"basis index {a} out of range for d = {d}")
    return _phase_unitary(d, lambda i, j: a * i * i + i * j - a * a * i)


def relabel(U: np.ndarray, pi: Sequence[int]) -> np.ndarray:
    """Return ``U`` with column ``j`` replaced by column ``pi[j]``."""
    U = np.asarray(U, dtype=complex)
    p = check_permutation(pi)
    if U.ndim != 2 or U.shape[1] != len(p):
        raise ContractError(f"permutation of length {len(p)} does not match matrix shape {U.shape}")
    return U[:, list(p)]


def dpp_relabellings(d: int) -> tuple[Permutation, ...]:
    """Per-basis relabellings that turn the WF bases into the DPP bases."""
    return tuple(cyclic_shift(d, a * a % d) for a in range(d))


def _qubit_pool() -> list[np.ndarray]:
    s = 1 / np.sqrt(2)
    return [
        np.eye(2, dtype=complex),
        np.array([[s, s], [s, -s]], dtype=complex),
        np.array([[s, s], [1j * s, -1j * s]], dtype=complex),
    ]


def basis_pool(d: int) -> list[np.ndarray]:
    """The ``d + 1`` bases that subsets are drawn from, in canonical order."""
    d = require_prime(d)
    if d == 2:
        return _qubit_pool()
    return [np.eye(d, dtype=complex)] + [wf_unitary(a, d) for a in range(d)]


@dataclass(frozen=True, eq=False)
class MubSet:
    """An ordered list of ``dim`` basis unitaries plus where they came from."""

    dim: int
    unitaries: tuple[np.ndarray, ...]
    family: str = "custom"
    excluded: int | None = None
    relabellings: tuple[Permutation, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ContractError(f"unknown family {self.family!r}")
        us = tuple(np.asarray(U, dtype=complex) for U in self.unitaries)
        if len(us) != self.dim:
            raise ContractError(f"expected {self.dim} unitaries, got {len(us)}")
        for k, U in enumerate(us):
            if U.shape != (self.dim, self.dim):
                raise ContractError(f"unitary {k} has shape {U.shape}")
            if not is_unitary(U, 1e-9):
                raise ContractError(f"matrix {k} is not unitary within 1e-9")
            U.setflags(write=False)
        object.__setattr__(self, "unitaries", us)
        rel = tuple(check_permutation(p, self.dim) for p in self.relabellings)
        if rel and len(rel) != self.dim:
            raise ContractError(f"expected {self.dim} relabellings, got {len(rel)}")
        object.__setattr__(self, "relabellings", rel)

    def __len__(self) -> int:
        return self.dim

    def stack(self) -> np.ndarray:
        """Unitaries as one ``(d, d, d)`` array indexed ``[basis, row, column]``."""
        return np.stack(self.unitaries)

    def relabelled(self, perms: Sequence[Sequence[int]]) -> "MubSet":
        """Apply one further column permutation per basis."""
        if len(perms) != self.dim:
            raise ContractError(f"expected {self.dim} permutations, got {len(perms)}")
        us = tuple(relabel(U, p) for U, p in zip(self.unitaries, perms))
        base = self.relabellings or tuple(identity_permutation(self.dim) for _ in range(self.dim))
        composed = tuple(tuple(b[x] for x in p) for b, p in zip(base, perms))
        return MubSet(self.dim, us, "custom" if self.family == "custom" else self.family,
                      self.excluded, composed)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "family": self.family,
            "excluded": self.excluded,
            "relabellings": [list(p) for p in self.relabellings],
            "unitaries": [matrix_to_pairs(U) for U in self.unitaries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MubSet":
        return cls(
            dim=int(data["dim"]),
            unitaries=tuple(matrix_from_pairs(U) for U in data["unitaries"]),
            family=data.get("family", "custom"),
            excluded=data.get("excluded"),
            relabellings=tuple(tuple(p) for p in data.get("relabellings", ())),
        )


def standard_set(d: int, excluded: int = 0, relabellings: Sequence[Sequence[int]] | None = None) -> MubSet:
    """Drop basis ``excluded`` from the pool and relabel the remaining ``d`` bases in order.

    With the computational basis excluded and the DPP shifts as relabellings
    the result is tagged ``"dpp"``; it is ``"wf"`` for any other relabelling
    of that subset and ``"wf-plus-computational"`` otherwise.
    """
    d = require_prime(d)
    if not 0 <= excluded <= d:
        raise ContractError(f"excluded index {excluded} out of range 0..{d}")
    if relabellings is None:
        relabellings = [identity_permutation(d)] * d
    rel = tuple(check_permutation(p, d) for p in relabellings)
    if len(rel) != d:
        raise ContractError(f"expected {d} relabellings, got {len(rel)}")
    pool = basis_pool(d)
    chosen = [U for k, U in enumerate(pool) if k != excluded]
    us = tuple(relabel(U, p) for U, p in zip(chosen, rel))
    if excluded == 0:
        family = "dpp" if d > 2 and rel == dpp_relabellings(d) else "wf"
    else:
        family = "wf-plus-computational"
    return MubSet(d, us, family, excluded, rel)


def dpp_set(d: int) -> MubSet:
    """The relabelled WF bases that admit a perfect guessing strategy."""
    d = require_prime(d, odd=True)
    return standard_set(d, 0, dpp_relabellings(d))


@dataclass(frozen=True)
class MubReport:
    ok: bool
    worst_deviation: float
    offending_pair: tuple[int, int, int, int] | None  # (a, b, i, j) of the worst overlap

    def __bool__(self) -> bool:
        return self.ok


def verify_mub_set(bases: MubSet | Sequence[np.ndarray], tol: float = 1e-9) -> MubReport:
    """Check that every overlap ``|<i|U_a^dagger U_b|j>|`` (a != b) equals ``1/sqrt(d)``."""
    us = bases.unitaries if isinstance(bases, MubSet) else tuple(np.asarray(U, complex) for U in bases)
    if not us:
        return MubReport(True, 0.0, None)
    d = us[0].shape[0]
    target = 1 / np.sqrt(d)
    worst, where = 0.0, None
    for a in range(len(us)):
        for b in range(a + 1, len(us)):
            dev = np.abs(np.abs(dagger(us[a]) @ us[b]) - target)
            i, j = np.unravel_index(np.argmax(dev), dev.shape)
            if dev[i, j] > worst:
                worst, where = float(dev[i, j]), (a, b, int(i), int(j))
    ok = worst <= tol
    return MubReport(ok, worst, None if ok else where)
