"""
Scanning relabellings
=====================

Which choice of d bases, and which labelling of their outcomes, makes the
game hardest for Bob? A small random scan at d = 3 shows the spread; the
full 864-configuration scan runs the same way with ``mode="exhaustive"``.
"""

# %%
from mubgame import SeesawConfig, scan
from mubgame.mub import dpp_relabellings, identity_permutation

report = scan(
    3,
    "quantum",
    "random:6",
    SeesawConfig(restarts=5),
    seed=0,
    extra_tuples=[[identity_permutation(3)] * 3, dpp_relabellings(3)],
    workers=1,
)
print(report.min_value, report.min_config)
print(report.max_value, report.max_config)

# %%
for e in range(4):
    values = [c.value for c in report.subset(e)]
    print(e, round(min(values), 6), round(max(values), 6))

# %%
# Nearby non-MUB unitaries.
from mubgame import perturb_set, seesaw, standard_set

base = standard_set(3, 0)
for seed in range(3):
    print(seesaw(perturb_set(base, 0.05, seed), "quantum", SeesawConfig(restarts=5)).best_value)
