"""Upper bounds on magic distillation rates, and the quasi-distribution entropy family.

Every bound is returned as a :class:`BoundResult`. A non-positive denominator
means the bound places no constraint (``rate = inf``, flag ``"undefined"``);
a non-positive numerator means no distillation is possible (``rate = 0``,
flag ``"no_distillation"``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np
from scipy.special import logsumexp

from .copies import (
    EXACT,
    LOG,
    PairList,
    ThermalContext,
    noisy_strange,
    stabilizer_eigenbasis,
    strange_copies,
)
from .majorization import curve_dominates
from .phase_space import single_phase_point_operators
from .wigner import mana

UNDEFINED = "undefined"
NO_DISTILLATION = "no_distillation"
METHODS = ("unital_inf", "mana", "numeric", "renyi", "thermal", "thermal_no_processing", "divergence")


@dataclass(frozen=True)
class BoundResult:
    rate: float
    method: str
    params: dict
    flags: tuple = ()
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")

    @property
    def defined(self) -> bool:
        return UNDEFINED not in self.flags

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "params": dict(self.params),
            "rate": self.rate,
            "flags": list(self.flags),
            "diagnostics": dict(self.diagnostics),
        }


def _ratio(num: float, den: float, method: str, params: dict, diagnostics: dict | None = None):
    diag = {"numerator": num, "denominator": den}
    if diagnostics:
        diag.update(diagnostics)
    if not den > 0:
        return BoundResult(math.inf, method, params, (UNDEFINED,), diag)
    if num <= 0:
        return BoundResult(0.0, method, params, (NO_DISTILLATION,), diag)
    return BoundResult(num / den, method, params, (), diag)


def _check_eps_pair(eps, eps_prime, upper=Fraction(3, 4), closed=False):
    ok_upper = eps <= upper if closed else eps < upper
    if not (0 <= eps_prime <= eps and ok_upper):
        bound = "]" if closed else ")"
        raise ValueError(
            f"need 0 <= eps_prime <= eps in [0, {upper}{bound}, got eps={eps}, eps_prime={eps_prime}"
        )


# --- closed-form unital bounds -----------------------------------------------


def bound_unital_inf(eps, eps_prime) -> BoundResult:
    """``log(3 - 4 eps) / log(3 - 4 eps')`` from the initial Lorenz slope."""
    _check_eps_pair(eps, eps_prime)
    e, ep = float(eps), float(eps_prime)
    return _ratio(
        math.log(3 - 4 * e), math.log(3 - 4 * ep), "unital_inf", {"eps": e, "eps_prime": ep}
    )


def bound_mana(w_in, w_out) -> BoundResult:
    """Ratio of per-copy mana."""
    m_in, m_out = mana(np.asarray(w_in, dtype=float)), mana(np.asarray(w_out, dtype=float))
    if m_out <= 0:
        raise ValueError("target has zero mana: it is free and the bound is undefined")
    return _ratio(m_in, m_out, "mana", {}, {"mana_in": m_in, "mana_out": m_out})


def bound_mana_strange(eps, eps_prime) -> BoundResult:
    _check_eps_pair(eps, eps_prime)
    w_in, _ = noisy_strange(float(eps))
    w_out, _ = noisy_strange(float(eps_prime))
    res = bound_mana(w_in, w_out)
    return BoundResult(
        res.rate, "mana", {"eps": float(eps), "eps_prime": float(eps_prime)}, res.flags, res.diagnostics
    )


# --- numerical majorization bound --------------------------------------------


def bound_numeric(eps, eps_prime, n: int, mode: str | None = None) -> BoundResult:
    """Largest ``m / n`` such that ``n`` input copies majorize ``m`` output copies.

    Uniform references on both sides. The search descends from the ceiling
    given by the unital bound (the first-elbow constraint is one of the full
    set), falling back to the mana ceiling where that bound is undefined.
    """
    _check_eps_pair(eps, eps_prime)
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    n = int(n)
    if mode is None:
        mode = EXACT if isinstance(eps, Rational) and isinstance(eps_prime, Rational) else LOG
    if mode == LOG:
        eps, eps_prime = float(eps), float(eps_prime)
    else:
        eps, eps_prime = Fraction(eps), Fraction(eps_prime)
    r_inf = bound_unital_inf(eps, eps_prime)
    ceiling = r_inf if r_inf.defined else bound_mana_strange(eps, eps_prime)
    # guard the ceiling against float round-up at exact ratios such as eps == eps_prime
    m_max = math.ceil(n * ceiling.rate - 1e-9) if ceiling.rate > 0 else 0
    params = {"eps": float(eps), "eps_prime": float(eps_prime), "n": n, "mode": mode}
    curve_in = strange_copies(eps, n, mode).lorenz()
    for m in range(m_max, 0, -1):
        if curve_dominates(curve_in, strange_copies(eps_prime, m, mode).lorenz()):
            return BoundResult(m / n, "numeric", params, (), {"m_star": m, "m_ceiling": m_max})
    return BoundResult(0.0, "numeric", params, (NO_DISTILLATION,), {"m_star": 0, "m_ceiling": m_max})


# --- Renyi entropies and divergences -----------------------------------------


@dataclass(frozen=True)
class RenyiOrder:
    """Admissible order ``alpha = 2a / (2b - 1)`` with ``a >= b >= 1``."""

    a: int
    b: int

    def __post_init__(self):
        if int(self.a) != self.a or int(self.b) != self.b or self.b < 1 or self.a < self.b:
            raise ValueError(f"need integers a >= b >= 1, got a={self.a}, b={self.b}")

    @property
    def fraction(self) -> Fraction:
        return Fraction(2 * self.a, 2 * self.b - 1)

    @property
    def alpha(self) -> float:
        return 2 * self.a / (2 * self.b - 1)

    @classmethod
    def from_alpha(cls, alpha, max_denominator: int = 10**6) -> "RenyiOrder":
        """Parse a float or rational ``alpha``; lowest terms must be even/odd and exceed 1."""
        f = Fraction(alpha).limit_denominator(max_denominator)
        if f.numerator % 2 or f.denominator % 2 == 0 or f <= 1:
            raise ValueError(f"order {alpha} is not of the admissible form 2a/(2b-1) > 1")
        return cls(f.numerator // 2, (f.denominator + 1) // 2)

    def __str__(self) -> str:
        return str(self.fraction)


def _order(order) -> RenyiOrder:
    return order if isinstance(order, RenyiOrder) else RenyiOrder.from_alpha(order)


def default_order_grid() -> list[RenyiOrder]:
    """Orders from ``a, b <= 12`` plus ``alpha = 10`` and ``alpha = 100/99``, sorted, unique."""
    seen: dict = {}
    for b in range(1, 13):
        for a in range(b, 13):
            o = RenyiOrder(a, b)
            seen.setdefault(o.fraction, o)
    for extra in (RenyiOrder(5, 1), RenyiOrder(50, 50)):
        seen.setdefault(extra.fraction, extra)
    return [seen[k] for k in sorted(seen)]


def _log_terms(w, weights=None):
    """``(log|w_i|, log m_i, log r_i | None)`` for nonzero entries of a vector or PairList."""
    if isinstance(w, PairList):
        p = w.to_log()
        lw = np.array([v[1] for v in p.values])
        lm = np.array([math.log(m) for m in p.multiplicities])
        lr = np.array(p.ref_values(), dtype=float)
        keep = np.isfinite(lw)
        return lw[keep], lm[keep], lr[keep]
    w = np.abs(np.asarray([float(x) for x in w]))
    lm = np.zeros(len(w)) if weights is None else np.log(np.asarray(weights, dtype=float))
    keep = w > 0
    with np.errstate(divide="ignore"):
        lw = np.log(w)
    return lw[keep], lm[keep], keep


def renyi_entropy(w, order, weights=None, base: float | None = None) -> float:
    """``(1/(1 - alpha)) log sum |w_i|**alpha`` for an admissible order.

    ``w`` may be a vector (optionally with integer ``weights``) or a
    :class:`PairList`. Evaluated in the log domain.
    """
    alpha = _order(order).alpha
    lw, lm, _ = _log_terms(w, weights)
    val = float(logsumexp(alpha * lw + lm)) / (1 - alpha)
    return val / math.log(base) if base else val


def renyi_entropy_continuous(w, alpha: float, base: float | None = None) -> float:
    """``(1/(1 - alpha)) log sum |w_i|**alpha`` for any real ``alpha > 1``.

    Interpolates the admissible orders; used to trace entropy contours.
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    lw, lm, _ = _log_terms(w)
    val = float(logsumexp(alpha * lw + lm)) / (1 - alpha)
    return val / math.log(base) if base else val


def _check_ref(r):
    r = np.asarray([float(x) for x in r])
    if np.any(r <= 0):
        raise ValueError("reference distribution must be strictly positive")
    return r


def renyi_divergence(w, r=None, order=2) -> float:
    """``(1/(alpha - 1)) log sum |w_i|**alpha r_i**(1 - alpha)``.

    ``w`` may be a :class:`PairList`, in which case its stored (or uniform)
    reference is used and ``r`` must be ``None``.
    """
    alpha = _order(order).alpha
    if isinstance(w, PairList):
        if r is not None:
            raise ValueError("PairList carries its own reference; pass r=None")
        lw, lm, lr = _log_terms(w)
    else:
        r = _check_ref(r)
        if len(r) != len(w):
            raise ValueError("w and r differ in length")
        lw, lm, keep = _log_terms(w)
        lr = np.log(r[keep])
    return float(logsumexp(alpha * lw + (1 - alpha) * lr + lm)) / (alpha - 1)


def d_infinity(w, r) -> float:
    """``log max_i w_i / r_i``."""
    r = _check_ref(r)
    w = np.asarray([float(x) for x in w])
    if len(r) != len(w):
        raise ValueError("w and r differ in length")
    return math.log(float(np.max(w / r)))


@dataclass(frozen=True)
class ResidueTrace:
    value: float
    target: float
    bs: tuple
    eps: tuple
    values: tuple

    @property
    def gaps(self) -> tuple:
        return tuple(self.target - v for v in self.values)


def mana_residue(w, b_max: int) -> ResidueTrace:
    """``-eps H_{1+eps}(w) = log sum |w_i|**(1+eps)`` along ``eps_b = 1/(2b - 1)``.

    Approaches ``mana(w)`` from below as ``b`` grows.
    """
    if int(b_max) != b_max or b_max < 1:
        raise ValueError("b_max must be a positive integer")
    lw, lm, _ = _log_terms(w)
    bs, es, vals = [], [], []
    for b in range(1, int(b_max) + 1):
        e = 1 / (2 * b - 1)
        bs.append(b)
        es.append(e)
        vals.append(float(logsumexp((1 + e) * lw + lm)))
    target = float(logsumexp(lw + lm))  # log sum |w| is the mana
    return ResidueTrace(vals[-1], target, tuple(bs), tuple(es), tuple(vals))


def _strange_entropy_gap(eps, order) -> float:
    w, _ = noisy_strange(float(eps))
    return 2 * math.log(3) - renyi_entropy(w, order)


def bound_renyi(eps, eps_prime, order) -> BoundResult:
    """``(2 log d - H_alpha(in)) / (2 log d - H_alpha(out))`` for noisy Strange states."""
    _check_eps_pair(eps, eps_prime)
    o = _order(order)
    params = {"eps": float(eps), "eps_prime": float(eps_prime), "alpha": o.alpha, "order": str(o)}
    return _ratio(_strange_entropy_gap(eps, o), _strange_entropy_gap(eps_prime, o), "renyi", params)


def bound_renyi_optimized(eps, eps_prime, orders=None) -> BoundResult:
    """Minimum of :func:`bound_renyi` over a grid of admissible orders."""
    orders = default_order_grid() if orders is None else [_order(o) for o in orders]
    if not orders:
        raise ValueError("empty order grid")
    results = [bound_renyi(eps, eps_prime, o) for o in orders]
    best = min(range(len(results)), key=lambda i: (results[i].rate, i))
    res = results[best]
    params = {"eps": float(eps), "eps_prime": float(eps_prime), "orders": len(orders)}
    diag = dict(res.diagnostics, argmin_alpha=orders[best].alpha, argmin_order=str(orders[best]))
    return BoundResult(res.rate, "renyi", params, res.flags, diag)


def bound_divergence(w_in, r_in, w_out, r_out, order) -> BoundResult:
    """``D_alpha(in) / D_alpha(out)`` with an uncorrelated output reference."""
    o = _order(order)
    num = renyi_divergence(w_in, r_in, o)
    den = renyi_divergence(w_out, r_out, o)
    return _ratio(num, den, "divergence", {"alpha": o.alpha, "order": str(o)})


# --- thermal bounds -----------------------------------------------------------


def bound_thermal(eps, eps_prime, ctx_in: ThermalContext, ctx_out: ThermalContext) -> BoundResult:
    """Free-energy bound ``[log(1 - 4eps/3) + beta(phi - F)] / [same for the output]``.

    Products ``beta * phi`` and ``beta * F`` are taken from the contexts' log
    quantities, so ``beta = 0`` gives the unital value.
    """
    _check_eps_pair(eps, eps_prime, upper=Fraction(3, 7), closed=True)
    if not math.isclose(ctx_in.beta, ctx_out.beta, rel_tol=1e-12, abs_tol=0.0):
        raise ValueError("input and output Gibbs states must share the inverse temperature")
    e, ep = float(eps), float(eps_prime)
    num = math.log(1 - 4 * e / 3) + ctx_in.beta_phi - ctx_in.beta_F
    den = math.log(1 - 4 * ep / 3) + ctx_out.beta_phi - ctx_out.beta_F
    diag = {
        "phi_in": ctx_in.phi,
        "F_in": ctx_in.F,
        "phi_out": ctx_out.phi,
        "F_out": ctx_out.F,
        "z_star_in": [int(x) for x in ctx_in.z_star],
        "z_star_out": [int(x) for x in ctx_out.z_star],
    }
    return _ratio(num, den, "thermal", {"eps": e, "eps_prime": ep, "beta": ctx_in.beta}, diag)


def beta_star(gap: float) -> float:
    """``ln 2 / (E_max - E_s)``; infinite for a zero gap."""
    if gap < 0:
        raise ValueError("E_max - E_s must be non-negative")
    return math.log(2) / gap if gap > 0 else math.inf


def threshold_error(beta: float, gap: float) -> float:
    """Error threshold ``eps_star(beta)`` separating the two no-processing cases."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if gap < 0:
        raise ValueError("E_max - E_s must be non-negative")
    x = math.exp(beta * gap)
    if x >= 2:
        return 0.0
    return (6 - 3 * x) / (8 - x)


def _stabilizer_energies(H, d: int = 3):
    """Energies and ``E_s``: the eigenvalue whose eigenstate has Wigner weight on the origin."""
    H = np.asarray(H)
    if H.ndim == 1:
        energies = H.astype(float)
        if len(energies) != d:
            raise ValueError(f"need {d} energies")
        # computational basis: |k> covers the points with q = k
        return energies, float(energies[0])
    if not stabilizer_eigenbasis(H, d):
        raise ValueError("Hamiltonian eigenbasis is not a stabilizer basis")
    energies, vecs = np.linalg.eigh(H.astype(complex))
    A0 = single_phase_point_operators(d)[0, 0]
    covers = [float(np.real(vecs[:, k].conj() @ A0 @ vecs[:, k])) for k in range(d)]
    k_s = int(np.argmax(covers))
    return energies, float(energies[k_s])


def _no_processing_term(e: float, beta: float, energies, e_s: float):
    e_max = float(np.max(energies))
    eps_star = threshold_error(beta, e_max - e_s)
    log_Z = float(logsumexp(-beta * np.asarray(energies)))
    if e <= eps_star:
        val = math.log(1 - 4 * e / 3) + beta * e_s + log_Z
        case = "low"
    else:
        val = math.log(0.5 - e / 6) + beta * e_max + log_Z
        case = "high"
    return val, eps_star, case


def bound_thermal_no_processing(eps, eps_prime, beta: float, H, H_out=None) -> BoundResult:
    """Thermal bound for protocols without Clifford pre-processing.

    ``H`` and ``H_out`` are either 3x3 Hamiltonians with a stabilizer eigenbasis
    or length-3 diagonals in the computational basis. Each side picks the
    low- or high-error case by comparing its error rate with ``eps_star(beta)``.
    """
    _check_eps_pair(eps, eps_prime, upper=Fraction(3, 7), closed=True)
    if not (math.isfinite(beta) and beta >= 0):
        raise ValueError("beta must be finite and non-negative")
    e, ep = float(eps), float(eps_prime)
    en_in, es_in = _stabilizer_energies(H)
    en_out, es_out = _stabilizer_energies(H if H_out is None else H_out)
    num, es_star, case_in = _no_processing_term(e, beta, en_in, es_in)
    den, es_star_out, case_out = _no_processing_term(ep, beta, en_out, es_out)
    diag = {
        "eps_star": es_star,
        "eps_star_prime": es_star_out,
        "beta_star": beta_star(float(np.max(en_in)) - es_in),
        "case_in": case_in,
        "case_out": case_out,
    }
    return _ratio(num, den, "thermal_no_processing", {"eps": e, "eps_prime": ep, "beta": float(beta)}, diag)
