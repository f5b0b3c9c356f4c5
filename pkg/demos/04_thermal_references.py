# Swapping the uniform reference for a Gibbs state of some Hamiltonian.
import numpy as np

from wigmaj import bound_thermal, bound_thermal_no_processing, bound_unital_inf, thermal_state
from wigmaj.bounds import beta_star, threshold_error
from wigmaj.copies import named_hamiltonian, stabilizer_eigenbasis, thermal_strange_pairs

H = named_hamiltonian("diag012")
print("stabilizer eigenbasis:", stabilizer_eigenbasis(H))

for beta in (0.0, 0.1, 1.0, 5.0):
    tau, ctx = thermal_state(H, beta)
    print(f"beta={beta}: free energy {ctx.F:.4f}, phi {ctx.phi:.4f}, z* {tuple(ctx.z_star)}")

# at beta -> 0 the Gibbs state is maximally mixed and the unital bound comes back
_, hot = thermal_state(H, 1e-9)
print(bound_thermal(0.1, 0, hot, hot).rate, bound_unital_inf(0.1, 0).rate)

# for this Hamiltonian the thermal bound loosens as beta grows
for beta in (0.0, 0.2, 0.5, 1.0):
    _, ctx = thermal_state(H, beta)
    print(beta, bound_thermal(0.2, 0, ctx, ctx).rate)

# a thermal reference for the noisy state, as a pair list
_, ctx = thermal_state(H, 0.5)
print(thermal_strange_pairs(0.1, ctx).lorenz().peak)

# protocols that leave the state alone: below eps* the negative entry sets the bound
gap = 2.0
print("eps*(0) =", threshold_error(0, gap), " beta* =", beta_star(gap))
for beta in np.linspace(0, 0.5, 6):
    r = bound_thermal_no_processing(0.2, 0, beta, H)
    print(f"{beta:.1f} eps*={r.diagnostics['eps_star']:.4f} case={r.diagnostics['case_in']} R={r.rate:.4f}")

# a magic-basis Hamiltonian is only usable while its Gibbs state has a positive Wigner function
try:
    thermal_state(named_hamiltonian("A0"), 1.0)
except ValueError as err:
    print("rejected:", err)
_, ok = thermal_state(named_hamiltonian("A0"), 0.2)
print("A0 at beta=0.2 is fine, F =", ok.F)
