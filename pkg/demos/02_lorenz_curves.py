# Lorenz curves of quasi-distributions and what dominance between them means.
from fractions import Fraction

import numpy as np

from wigmaj import (
    curve_dominates,
    l1_criterion,
    lorenz_curve,
    noisy_strange,
    relative_majorizes,
    strange_copies,
    strange_elbows_unital,
)
from wigmaj.copies import strange_peak

F = Fraction
U9 = [F(1, 9)] * 9

# one Strange copy: a single elbow above the diagonal, peak 1 + negativity
w, _ = noisy_strange(F(0))
c = lorenz_curve(w)
print("elbows:", c.elbows, "peak:", c.peak)

# noise pulls the curve down, so the clean curve dominates the noisy one
noisy, _ = noisy_strange(F(1, 10))
print("clean > noisy:", relative_majorizes(w, U9, noisy, U9))
print("noisy > clean:", relative_majorizes(noisy, U9, w, U9))
print("same answer from the L1 test:", l1_criterion(w, U9, noisy, U9))

# many copies: the pair list never expands the 9**n vector
for n in (2, 5, 10, 30):
    pl = strange_copies(F(1, 10), n)
    curve = pl.lorenz()
    print(n, "distinct values:", len(pl.pairs), "elbows:", len(curve.elbows), "peak:", tuple(map(float, curve.peak)))

# the closed-form elbow table gives the same curve without building pairs
n = 7
print("closed form == pairs:", strange_elbows_unital(n, F(1, 10)).elbows == strange_copies(F(1, 10), n).lorenz().elbows)
print("peak formula:", strange_peak(n, F(1, 10)))

# log mode keeps working where plain floats underflow
big = strange_copies(0.1, 300).lorenz()
print("n=300 peak (log mode):", big.peak)

# a float comparison, evaluated on a grid
two = strange_copies(0.0, 2).lorenz()
three_noisy = strange_copies(0.2, 3).lorenz()
xs = np.linspace(0, 1, 6)
print([round(float(two(x)), 4) for x in xs])
print([round(float(three_noisy(x)), 4) for x in xs])
print("2 clean copies > 3 noisy copies:", curve_dominates(two.as_float(), three_noisy.as_float()))
