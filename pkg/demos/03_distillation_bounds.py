# Upper bounds on how many clean Strange states n noisy ones can be turned into.
import numpy as np

from wigmaj import bound_mana_strange, bound_numeric, bound_renyi, bound_renyi_optimized, bound_unital_inf

grid = np.round(np.arange(0.05, 0.41, 0.05), 2)
print(f"{'eps':>5} {'R_inf':>8} {'mana':>8} {'R_10':>8} {'R_opt':>8} {'R_num(10)':>10}")
for eps in grid:
    r_inf = bound_unital_inf(eps, 0).rate
    r_mana = bound_mana_strange(eps, 0).rate
    r_10 = bound_renyi(eps, 0, 10).rate
    r_opt = bound_renyi_optimized(eps, 0)
    r_num = bound_numeric(eps, 0, 10).rate
    print(f"{eps:5.2f} {r_inf:8.4f} {r_mana:8.4f} {r_10:8.4f} {r_opt.rate:8.4f} {r_num:10.4f}")

# which order does the optimizer pick?
best = bound_renyi_optimized(0.1, 0)
print("best order at eps=0.1:", best.diagnostics["argmin_order"], best.diagnostics["argmin_alpha"])

# the numeric bound tightens as more input copies are considered
for n in (2, 5, 10, 20, 40):
    r = bound_numeric(0.1, 0, n)
    print(n, r.rate, r.diagnostics["m_star"])

# noisy targets and the edge cases
print(bound_unital_inf(0.3, 0.1).as_dict())
print(bound_unital_inf(0.5, 0.1).flags)   # input at threshold: nothing to distil
print(bound_unital_inf(0.6, 0.55).flags)  # free target: ratio undefined
