"""
A perfect guessing strategy
===========================

Against the relabelled bases Bob can guess Alice's outcome with certainty
using a cubic-phase probe and a projective measurement on the coin.
"""

# %%
import numpy as np

from mubgame import dpp_set, guessing_probability, perfect_probe, perfect_strategy
from mubgame.game import outcome_vectors, guessing_probability_tensor
from mubgame.linalg import is_projective_povm

# %%
# The probe for d = 3 uses ninth roots of unity; beyond that the cubic phase
# lives in the d-th roots.
print(np.round(perfect_probe(3) * np.sqrt(3), 4))
print(np.round(np.angle(perfect_probe(7)) / (2 * np.pi) * 7, 3) % 7)

# %%
# Bob's measurement vectors are pairwise orthogonal.
phis = outcome_vectors(7)
gram = phis.conj() @ phis.T
print(np.round(np.abs(gram), 6))

# %%
# For some primes one of them vanishes. That outcome simply never fires and
# gets a complementary direction so the measurement stays complete.
print([round(float(np.linalg.norm(v)), 6) for v in outcome_vectors(5)])

# %%
for d in (3, 5, 7, 11, 13):
    bases = dpp_set(d)
    s = perfect_strategy(d, bases)
    print(d, guessing_probability(bases, s), is_projective_povm(s.povm))

# %%
# The same number from the full two-register state.
print(guessing_probability_tensor(dpp_set(5), perfect_strategy(5)))
