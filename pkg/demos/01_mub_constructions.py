"""
Building mutually unbiased bases
================================

Quadratic-phase bases in an odd prime dimension, how relabelling their
outcomes changes nothing about unbiasedness, and why the same recipe breaks
down for qubits.
"""

# %%
# Every basis is stored as a unitary whose columns are the basis vectors.
import numpy as np

from mubgame import basis_pool, dpp_set, relabel, standard_set, verify_mub_set, wf_unitary
from mubgame.mub import cyclic_shift

d = 5
U = wf_unitary(2, d)
print(np.round(U * np.sqrt(d), 3))

# %%
# The d + 1 bases of the pool are pairwise unbiased: every overlap has
# modulus 1/sqrt(d).
report = verify_mub_set(basis_pool(d))
print(report)

# %%
# Relabelling permutes columns. A cyclic shift of basis a by a^2 turns the
# plain quadratic-phase family into the one with a perfect guessing strategy.
a = 2
shifted = relabel(wf_unitary(a, d), cyclic_shift(d, a * a))
print(np.allclose(shifted, dpp_set(d).unitaries[a]))

# %%
# A game uses d of the d + 1 bases. ``excluded`` names the one left out;
# 0 is the computational basis.
for e in range(d + 1):
    s = standard_set(d, e)
    print(e, s.family, verify_mub_set(s).ok)

# %%
# For d = 2 the phase omega = -1 makes the two quadratic-phase bases
# identical up to labels, so the pool falls back to Pauli eigenbases.
naive = [np.array([[(-1) ** (k * i * i + i * j) for j in range(2)] for i in range(2)]) / np.sqrt(2)
         for k in range(2)]
print(verify_mub_set(naive))
print(verify_mub_set(basis_pool(2)))
