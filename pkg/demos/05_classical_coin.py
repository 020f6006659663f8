"""
The classical coin
==================

With a classically random coin Bob's best play is a fixed answer per coin
value, so the optimum is a finite search over d^d maps.
"""

# %%
import time

from mubgame import SeesawConfig, classical_exhaustive, classical_upper_bound, seesaw, standard_set

for d in (2, 3, 5):
    bases = standard_set(d, 0)
    opt = classical_exhaustive(bases)
    print(d, opt.value, opt.best_map, classical_upper_bound(d))

# %%
# The see-saw with the classical coin finds the same optimum at small d.
print(seesaw(standard_set(5, 0), "classical", SeesawConfig(restarts=10)).best_value)

# %%
# d = 7 has 823543 maps, a few seconds of vectorised work.
t = time.perf_counter()
opt = classical_exhaustive(standard_set(7, 0))
print(opt.value, opt.best_map, f"{time.perf_counter() - t:.1f} s")
