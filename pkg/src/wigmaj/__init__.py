"""Majorization of discrete Wigner quasi-distributions and bounds on magic distillation."""

from .bounds import (
    BoundResult,
    RenyiOrder,
    bound_divergence,
    bound_mana,
    bound_mana_strange,
    bound_numeric,
    bound_renyi,
    bound_renyi_optimized,
    bound_thermal,
    bound_thermal_no_processing,
    bound_unital_inf,
    d_infinity,
    default_order_grid,
    mana_residue,
    renyi_divergence,
    renyi_entropy,
    threshold_error,
)
from .copies import (
    PairList,
    ThermalContext,
    noisy_strange,
    pairs_power,
    pairs_product,
    phi_minus,
    phi_plus,
    strange_copies,
    strange_elbows_unital,
    thermal_state,
)
from .majorization import (
    LorenzCurve,
    area_monotone,
    curve_dominates,
    gamma_embed,
    l1_criterion,
    lorenz_curve,
    lorenz_linearity_check,
    relative_majorizes,
)
from .phase_space import displacement_operator, phase_point_operator, symplectic_product
from .wigner import (
    mana,
    noisy_strange_state,
    strange_state,
    sum_negativity,
    wigner_of_channel,
    wigner_of_state,
)

__version__ = "0.1.0"
