import math
from fractions import Fraction

import numpy as np
import pytest

from oracle import kron_power, strange_values
from wigmaj.bounds import (
    NO_DISTILLATION,
    UNDEFINED,
    BoundResult,
    RenyiOrder,
    beta_star,
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
    renyi_entropy_continuous,
    threshold_error,
)
from wigmaj.copies import named_hamiltonian, noisy_strange, strange_copies, thermal_state

F = Fraction
U9 = np.full(9, 1 / 9)
LN3 = math.log(3)


def strange(eps=0.0):
    return noisy_strange(float(eps))[0]


def qutrit_renyi_rate(eps, alpha):
    """Explicit qutrit form of the Renyi bound with a pure target."""
    v, u = 1 / 3 - 4 * eps / 9, 1 / 6 - eps / 18
    num = 2 * (1 - alpha) * LN3 - math.log(v**alpha + 8 * u**alpha)
    den = 2 * (1 - alpha) * LN3 + alpha * math.log(6) - math.log(8 + 2**alpha)
    return num / den


# --- unital and mana ---------------------------------------------------------


def test_unital_identity_and_values():
    assert bound_unital_inf(0.2, 0.2).rate == 1.0
    assert bound_unital_inf(0.1, 0).rate == pytest.approx(math.log(2.6) / LN3, abs=1e-15)
    for e in np.linspace(0.01, 0.42, 9):
        assert bound_unital_inf(e, 0).rate == pytest.approx(1 + math.log(1 - 4 * e / 3) / LN3, abs=1e-12)


def test_unital_no_distillation_at_half():
    r = bound_unital_inf(0.5, 0)
    assert r.rate == 0.0 and NO_DISTILLATION in r.flags


def test_unital_undefined_target():
    r = bound_unital_inf(0.6, 0.55)
    assert r.rate == math.inf and UNDEFINED in r.flags


@pytest.mark.parametrize("eps,ep", [(0.1, 0.2), (-0.1, 0), (0.75, 0), (0.1, -0.01)])
def test_unital_domain(eps, ep):
    with pytest.raises(ValueError):
        bound_unital_inf(eps, ep)


def test_mana_bound():
    assert bound_mana(strange(), strange()).rate == pytest.approx(1.0)
    for e in (0.05, 0.1, 0.3):
        expected = 1 + math.log(1 - 8 * e / 15) / math.log(5 / 3)
        assert bound_mana_strange(e, 0).rate == pytest.approx(expected, abs=1e-12)


def test_mana_of_free_target_rejected():
    with pytest.raises(ValueError, match="free"):
        bound_mana(strange(0.1), U9)


def test_mana_above_unital():
    for e in np.linspace(0.01, 3 / 7, 20):
        assert bound_unital_inf(e, 0).rate <= bound_mana_strange(e, 0).rate + 1e-15


# --- numeric majorization ----------------------------------------------------


def test_numeric_identity():
    for n in (1, 3, 5):
        r = bound_numeric(F(1, 5), F(1, 5), n)
        assert r.rate == 1.0 and r.diagnostics["m_star"] == n


# frozen from an exhaustive comparison of fully expanded 9**n vectors
NUMERIC_M_STAR = {2: 1, 4: 2, 6: 4}


@pytest.mark.parametrize("n", sorted(NUMERIC_M_STAR))
def test_numeric_matches_expanded_oracle(n):
    for eps in (F(1, 10), 0.1):
        r = bound_numeric(eps, 0, n)
        assert r.diagnostics["m_star"] == NUMERIC_M_STAR[n]
        assert r.rate <= bound_unital_inf(0.1, 0).rate


def test_numeric_modes_agree_over_n():
    exact = [bound_numeric(F(1, 10), 0, n).rate for n in range(2, 21)]
    logm = [bound_numeric(0.1, 0.0, n, "log").rate for n in range(2, 21)]
    assert exact == logm
    assert all(0 <= r <= bound_unital_inf(0.1, 0).rate for r in exact)


def test_numeric_no_distillation():
    r = bound_numeric(0.6, 0.0, 4)
    assert r.rate == 0.0 and NO_DISTILLATION in r.flags


# --- Renyi family --------------------------------------------------------------


def test_order_admissibility():
    assert RenyiOrder(1, 1).alpha == 2
    assert RenyiOrder.from_alpha(F(10, 9)) == RenyiOrder(5, 5)
    assert RenyiOrder.from_alpha(10).fraction == 10
    for bad in (3, F(3, 2), 1, F(4, 4), 0.5, F(6, 4)):
        with pytest.raises(ValueError):
            RenyiOrder.from_alpha(bad)
    with pytest.raises(ValueError):
        RenyiOrder(1, 2)


def test_order_grid():
    grid = default_order_grid()
    fr = [o.fraction for o in grid]
    assert fr == sorted(set(fr))
    assert F(10) in fr and F(100, 99) in fr and F(24) in fr
    assert all(f > 1 for f in fr)


def test_entropy_trivial_cases():
    assert renyi_entropy(U9, 2) == pytest.approx(2 * LN3)
    assert renyi_entropy(np.eye(9)[0], F(10, 9)) == pytest.approx(0.0, abs=1e-14)


def test_strange_entropy_signs():
    w = strange()
    assert renyi_entropy(w, F(10, 9)) < 0
    assert renyi_entropy(w, 2) > 0
    assert renyi_entropy(w, 2) == pytest.approx(math.log(3), abs=1e-14)


def test_entropy_weights_and_pairs_agree():
    p = strange_copies(0.1, 3)
    vec = kron_power(np.array([float(x) for x in strange_values(F(1, 10))]), 3)
    for a in (F(4, 3), 2, 10):
        assert renyi_entropy(p, a) == pytest.approx(renyi_entropy(vec, a), abs=1e-12)
    vals = p.float_values()
    assert renyi_entropy(vals, 2, weights=p.multiplicities) == pytest.approx(renyi_entropy(vec, 2), abs=1e-12)


def test_entropy_large_alpha_does_not_underflow():
    p = strange_copies(0.1, 300)
    h = renyi_entropy(p, 100)
    assert math.isfinite(h)


def test_log_base():
    assert renyi_entropy(U9, 2, base=2) == pytest.approx(2 * math.log2(3))


def test_divergence_properties():
    w = strange()
    assert renyi_divergence(w, U9, 2) == pytest.approx(math.log(3), abs=1e-14)
    for a in (F(4, 3), 2, 10):
        assert renyi_divergence(w, U9, a) == pytest.approx(2 * LN3 - renyi_entropy(w, a), abs=1e-12)
    _, ctx = thermal_state(named_hamiltonian("diag012"), 0.4)
    assert renyi_divergence(ctx.w_tau, ctx.w_tau, 2) == pytest.approx(0.0, abs=1e-14)
    w2 = np.kron(w, w)
    r2 = np.kron(ctx.w_tau, ctx.w_tau)
    assert renyi_divergence(w2, r2, F(4, 3)) == pytest.approx(2 * renyi_divergence(w, ctx.w_tau, F(4, 3)))


def test_divergence_rejects_zero_reference():
    r = U9.copy()
    r[0], r[1] = 0, 2 / 9
    with pytest.raises(ValueError):
        renyi_divergence(strange(), r, 2)


def test_d_infinity():
    w = strange()
    assert d_infinity(U9, U9) == pytest.approx(0.0)
    assert d_infinity(w, U9) == pytest.approx(math.log(1.5), abs=1e-14)
    w2 = np.kron(w, w)
    assert d_infinity(w2, np.full(81, 1 / 81)) == pytest.approx(math.log(9), abs=1e-13)
    assert 2 * d_infinity(w, U9) == pytest.approx(math.log(9 / 4))
    w4 = np.kron(w2, w2)
    assert d_infinity(w4, np.full(6561, 1 / 6561)) == pytest.approx(2 * math.log(9), abs=1e-12)


def test_d_infinity_is_initial_slope():
    from wigmaj.majorization import lorenz_curve

    w = strange(0.2)
    assert math.exp(d_infinity(w, U9)) == pytest.approx(lorenz_curve(w).slopes[0])


def test_mana_residue():
    tr = mana_residue(strange(), 200)
    assert tr.target == pytest.approx(math.log(5 / 3), abs=1e-14)
    assert abs(tr.value - math.log(5 / 3)) < 2e-2
    gaps = tr.gaps
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    # a free state has zero mana; its residue is -eps_b * 2 log 3, vanishing with eps_b
    free = mana_residue(U9, 200)
    for e, v in zip(free.eps, free.values):
        assert v == pytest.approx(-e * 2 * LN3, abs=1e-14)
    assert abs(free.value) < 6e-3


def test_renyi_bound_closed_form():
    for e in (0.05, 0.1, 0.3):
        for a in (F(4, 3), 2, 10):
            assert bound_renyi(e, 0, a).rate == pytest.approx(qutrit_renyi_rate(e, float(a)), abs=1e-12)
    for a in (F(10, 9), 2, 10):
        assert bound_renyi(0.2, 0.2, a).rate == pytest.approx(1.0)


def test_optimized_reports_argmin():
    r = bound_renyi_optimized(0.1, 0)
    rates = {str(o): bound_renyi(0.1, 0, o).rate for o in default_order_grid()}
    assert r.rate == min(rates.values())
    assert rates[r.diagnostics["argmin_order"]] == r.rate


def test_divergence_bound_reduces_to_renyi():
    for a in (F(4, 3), 10):
        d = bound_divergence(strange(0.1), U9, strange(0), U9, a)
        assert d.rate == pytest.approx(bound_renyi(0.1, 0, a).rate, abs=1e-12)
    same = bound_divergence(strange(0.1), U9, strange(0.1), U9, 2)
    assert same.rate == pytest.approx(1.0)


def test_divergence_bound_thermal_reference():
    _, ctx = thermal_state(named_hamiltonian("diag012"), 0.2)
    a = F(4, 3)
    w_in, w_out = strange(0.1), strange(0)
    direct = sum(abs(w_in) ** (4 / 3) * ctx.w_tau ** (-1 / 3))
    num = math.log(direct) * 3
    den = math.log(sum(abs(w_out) ** (4 / 3) * ctx.w_tau ** (-1 / 3))) * 3
    res = bound_divergence(w_in, ctx.w_tau, w_out, ctx.w_tau, a)
    assert res.rate == pytest.approx(num / den, abs=1e-12)
    assert res.rate != pytest.approx(bound_renyi(0.1, 0, a).rate, abs=1e-6)


def test_divergence_bound_undefined_for_free_target():
    res = bound_divergence(strange(0.1), U9, U9, U9, 2)
    assert UNDEFINED in res.flags


# --- thermal bounds ----------------------------------------------------------


def thermal_pair(beta, H=None, H_out=None):
    H = named_hamiltonian("diag012") if H is None else H
    _, c_in = thermal_state(H, beta)
    _, c_out = thermal_state(H if H_out is None else H_out, beta)
    return c_in, c_out


def test_thermal_at_zero_temperature_is_unital():
    c_in, c_out = thermal_pair(0.0)
    for e in np.linspace(0.05, 0.4, 8):
        assert bound_thermal(e, 0, c_in, c_out).rate == pytest.approx(bound_unital_inf(e, 0).rate, abs=1e-12)


def test_thermal_diag_closed_form():
    # for diag(0, 1, 2): R = 1 + ln(1 - 4 eps / 3) / ln(e^{2 beta} + e^{beta} + 1)
    for beta in (0.2, 1.0, 3.0):
        c_in, c_out = thermal_pair(beta)
        for e in (0.05, 0.1, 0.3):
            expected = 1 + math.log(1 - 4 * e / 3) / math.log(math.exp(2 * beta) + math.exp(beta) + 1)
            assert bound_thermal(e, 0, c_in, c_out).rate == pytest.approx(expected, abs=1e-12)


def test_thermal_regression_value():
    c_in, c_out = thermal_pair(0.2)
    assert bound_thermal(0.1, 0, c_in, c_out).rate == pytest.approx(0.8909210401924569, abs=1e-12)


def test_thermal_grows_with_beta_for_diag():
    rates = [bound_thermal(0.1, 0, *thermal_pair(b)).rate for b in (0, 0.2, 0.5, 1, 2)]
    assert all(a < b for a, b in zip(rates, rates[1:]))


def test_thermal_rejects_mismatched_beta_and_domain():
    a, _ = thermal_pair(0.2)
    b, _ = thermal_pair(0.3)
    with pytest.raises(ValueError):
        bound_thermal(0.1, 0, a, b)
    with pytest.raises(ValueError):
        bound_thermal(0.45, 0, a, a)


def test_threshold_error():
    assert threshold_error(0.0, 1.0) == pytest.approx(3 / 7, abs=1e-15)
    assert threshold_error(5.0, 0.0) == pytest.approx(3 / 7, abs=1e-15)
    bs = beta_star(2.0)
    assert bs == pytest.approx(math.log(2) / 2)
    assert threshold_error(bs * 1.0001, 2.0) == 0.0
    assert threshold_error(bs, 2.0) == pytest.approx(0.0, abs=1e-15)
    for beta in (0.05, 0.2, 0.3):
        alt = 3 - 9 / (4 - 2 ** (beta / bs - 1))
        assert threshold_error(beta, 2.0) == pytest.approx(alt, abs=1e-14)
    assert beta_star(0.0) == math.inf


def test_no_processing_at_infinite_temperature():
    for e in np.linspace(0.0, 3 / 7, 7)[1:]:
        r = bound_thermal_no_processing(e, 0, 0.0, [0, 1, 2])
        assert r.rate == pytest.approx(bound_unital_inf(e, 0).rate, abs=1e-12)


def test_no_processing_cases_and_continuity():
    H = named_hamiltonian("diag012")
    for beta in (0.05, 0.1, 0.2, 0.3):
        es = threshold_error(beta, 2.0)
        lo = bound_thermal_no_processing(es - 1e-12, 0, beta, H)
        hi = bound_thermal_no_processing(es + 1e-12, 0, beta, H)
        assert lo.diagnostics["case_in"] == "low" and hi.diagnostics["case_in"] == "high"
        assert abs(lo.rate - hi.rate) < 1e-9


def test_no_processing_beyond_beta_star():
    r = bound_thermal_no_processing(0.01, 0, 1.0, [0, 1, 2])
    assert r.diagnostics["eps_star"] == 0.0
    assert r.diagnostics["case_in"] == "high"


def test_no_processing_flat_gap():
    r = bound_thermal_no_processing(0.2, 0, 3.0, [1, 0, 0])
    assert r.diagnostics["eps_star"] == pytest.approx(3 / 7)
    assert r.diagnostics["beta_star"] == math.inf


def test_no_processing_matrix_and_diagonal_agree():
    a = bound_thermal_no_processing(0.1, 0, 0.3, named_hamiltonian("diag012"))
    b = bound_thermal_no_processing(0.1, 0, 0.3, [0, 1, 2])
    assert a.rate == pytest.approx(b.rate, abs=1e-13)


def test_no_processing_rejects_magic_basis():
    with pytest.raises(ValueError, match="stabilizer"):
        bound_thermal_no_processing(0.1, 0, 0.3, named_hamiltonian("A12-mix", 0.3, 0.3))


def test_result_record():
    r = bound_unital_inf(0.1, 0)
    d = r.as_dict()
    assert list(d) == ["method", "params", "rate", "flags", "diagnostics"]
    with pytest.raises(ValueError):
        BoundResult(1.0, "nonsense", {})


def test_continuous_entropy_interpolates_admissible():
    w = strange()
    for o in (F(4, 3), F(10, 9), 2):
        assert renyi_entropy_continuous(w, float(o)) == pytest.approx(renyi_entropy(w, o))
