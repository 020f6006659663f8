"""
See-saw lower bounds
====================

Alternate between the best measurement for a fixed probe and the best probe
for a fixed measurement. Each step can only improve the guessing probability.
"""

# %%
from mubgame import SeesawConfig, classical_upper_bound, dpp_set, seesaw, standard_set

cfg = SeesawConfig(restarts=10, master_seed=1)
res = seesaw(standard_set(3, 0), "quantum", cfg)
print("WF, d = 3:", res.best_value, "classical ceiling:", classical_upper_bound(3))

# %%
# Every restart keeps a value trace for auditing.
for r in res.per_restart[:3]:
    print(r.rounds, [round(v, 6) for v in r.trace])

# %%
print("DPP, d = 5:", seesaw(dpp_set(5), "quantum", cfg).best_value)
print("qubit pair:", seesaw(standard_set(2, 0), "quantum", cfg).best_value)

# %%
# The inner measurement problem comes with an optimality certificate.
from mubgame.optimize import discrimination_operators, optimal_measurement, random_density_hs

ops = discrimination_operators(random_density_hs(5, seed=3), standard_set(5, 0))
m = optimal_measurement(ops)
print(m.value, m.certificate)
