"""Modular arithmetic and quadratic Gauss sums over prime moduli."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ContractError

__all__ = [
    "GaussConstants",
    "epsilon",
    "gauss_constants",
    "gauss_sum_closed",
    "gauss_sum_direct",
    "is_prime",
    "legendre_symbol",
    "mod_inverse",
    "require_prime",
]


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def require_prime(d: int, *, odd: bool = False) -> int:
    """Validate a dimension and return it as a plain ``int``.

    Raises
    ------
    ContractError
        If ``d`` is not prime, or if ``odd`` is set and ``d == 2``.
    """
    if isinstance(d, bool) or int(d) != d:
        raise ContractError(f"dimension must be an integer, got {d!r}")
    d = int(d)
    if not is_prime(d):
        raise ContractError(f"{d} is not prime")
    if odd and d == 2:
        raise ContractError("this operation requires an odd prime dimension, got 2")
    return d


def mod_inverse(x: int, d: int) -> int:
    """Multiplicative inverse of ``x`` modulo the prime ``d``, as ``x**(d-2) mod d``."""
    d = require_prime(d)
    if x % d == 0:
        raise ContractError(f"{x} has no inverse modulo {d}")
    return pow(x % d, d - 2, d)


def legendre_symbol(m: int, d: int) -> int:
    """Legendre symbol (m/d) by Euler's criterion; returns -1, 0 or +1."""
    d = require_prime(d, odd=True)
    r = pow(m % d, (d - 1) // 2, d)
    return -1 if r == d - 1 else r


def epsilon(d: int) -> complex:
    """Prefactor of the quadratic Gauss sum: 1 if d = 1 (mod 4), i if d = 3 (mod 4)."""
    d = require_prime(d, odd=True)
    return 1 + 0j if d % 4 == 1 else 1j


def gauss_sum_closed(m: int, d: int) -> complex:
    """Closed-form value of ``sum_a exp(2 pi i a^2 m / d)`` for an odd prime ``d``."""
    d = require_prime(d, odd=True)
    if m % d == 0:
        return complex(d)
    return legendre_symbol(m, d) * epsilon(d) * math.sqrt(d)


def gauss_sum_direct(m: int, d: int) -> complex:
    """Literal evaluation of ``sum_{a=0}^{d-1} omega^(a^2 m)`` with ``omega = exp(2 pi i / d)``."""
    if d < 2:
        raise ContractError(f"modulus must be >= 2, got {d}")
    return sum(cmath.exp(2j * math.pi * ((a * a * m) % d) / d) for a in range(d))


@dataclass(frozen=True)
class GaussConstants:
    d: int
    alpha: int  # 3^{-1} mod d
    beta: int  # 2^{-1} mod d
    epsilon: complex


def gauss_constants(d: int) -> GaussConstants:
    """Constants used in the orthogonality argument for the perfect strategy (d > 3)."""
    d = require_prime(d, odd=True)
    if d == 3:
        raise ContractError("3 has no inverse modulo 3; d = 3 uses ninth roots instead")
    return GaussConstants(
        d=d,
        alpha=pow(3, d - 2, d),
        beta=pow(2, d - 2, d),
        epsilon=epsilon(d),
    )
