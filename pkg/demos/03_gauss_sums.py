"""
Quadratic Gauss sums
====================

The closed form ``epsilon_d sqrt(d) (m/d)`` checked against brute-force summation.
"""

# %%
from mubgame.numtheory import epsilon, gauss_sum_closed, gauss_sum_direct, legendre_symbol

for d in (3, 5, 7, 11, 13):
    print(d, epsilon(d), [legendre_symbol(m, d) for m in range(d)])

# %%
worst = 0.0
for d in (3, 5, 7, 11, 13, 17, 19, 23):
    for m in range(d):
        worst = max(worst, abs(gauss_sum_closed(m, d) - gauss_sum_direct(m, d)))
print("largest disagreement:", worst)
