# Phase space of a qutrit, the Strange state and its negativity.
import numpy as np
from fractions import Fraction

from wigmaj import mana, noisy_strange, noisy_strange_state, phase_point_operator, strange_state, sum_negativity, wigner_of_state
from wigmaj.phase_space import all_points, phase_point_stack

# one phase-point operator per point (q, p); the origin is the parity operator
A0 = phase_point_operator([0, 0])
print(np.round(A0.real, 3))

# the 9 operators form an orthogonal basis: tr(A_z A_y) = 3 delta
A = phase_point_stack(3)
gram = np.einsum("aij,bji->ab", A, A).real
print("gram is 3*identity:", np.allclose(gram, 3 * np.eye(9)))

# Wigner function of the Strange state: one -1/3 at the origin, eight 1/6
w = wigner_of_state(strange_state())
for z, v in zip(all_points(3), w):
    print(tuple(z), round(v, 6))
print("sum negativity", sum_negativity(w), "mana", mana(w), "log(5/3)", np.log(5 / 3))

# depolarising noise shrinks the negative entry; rational inputs stay rational
exact, pairs = noisy_strange(Fraction(1, 10))
print("eps=1/10 values:", exact[0], exact[1], "pairs:", pairs.pairs)
print("density matrix route agrees:", np.allclose(wigner_of_state(noisy_strange_state(0.1)), [float(x) for x in exact]))

# past eps = 1/2 the state is free (no negativity left)
for eps in (0.0, 0.25, 0.5, 0.6):
    print(eps, sum_negativity(wigner_of_state(noisy_strange_state(eps))))
