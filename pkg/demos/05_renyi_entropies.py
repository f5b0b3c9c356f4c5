# Renyi entropies that stay real on quasi-distributions, and mana as their limit.
import numpy as np
from scipy.optimize import brentq

from wigmaj import RenyiOrder, mana, mana_residue, noisy_strange, renyi_divergence, renyi_entropy
from wigmaj.bounds import default_order_grid, renyi_entropy_continuous

w, _ = noisy_strange(0.0)

# admissible orders are 2a/(2b-1) with a >= b
for o in (RenyiOrder(1, 1), RenyiOrder(2, 2), RenyiOrder(5, 1), RenyiOrder.from_alpha(4 / 3)):
    print(o, o.alpha, renyi_entropy(w, o))
print(len(default_order_grid()), "orders in the default grid")

try:
    RenyiOrder.from_alpha(3)
except ValueError as err:
    print(err)

# negative entropy is the fingerprint of negativity; here is where it changes sign
alphas = np.linspace(1.05, 2.0, 20)
print(np.round([renyi_entropy_continuous(w, a) for a in alphas], 4))
root = brentq(lambda a: renyi_entropy_continuous(w, a), 1.0001, 5)
print("zero crossing at alpha =", root)

# mana is the residue at alpha -> 1
tr = mana_residue(w, 200)
print("mana", mana(w), "residue at b=200", tr.value, "gap", tr.gaps[-1])
for b in (1, 2, 5, 20, 200):
    print(b, tr.values[b - 1])

# divergence against the uniform reference is 2 log 3 minus the entropy
u = np.full(9, 1 / 9)
print(renyi_divergence(w, u, 2), 2 * np.log(3) - renyi_entropy(w, 2))
