"""n-copy machinery for quasi-distributions with heavily repeated components.

A :class:`PairList` stores a distribution as ``(value, multiplicity)`` pairs,
optionally with a per-point reference value, so that ``rho^{(x) n}`` can be
handled without materialising ``d**(2n)`` entries. Two numeric modes exist:

* ``"exact"``: values are ``Fraction``; multiplicities are Python ints.
* ``"log"``: values are ``(sign, log|value|)`` tuples, which survive the
  underflow of ``v**n`` for hundreds of copies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .majorization import LorenzCurve, curve_from_blocks
from .phase_space import all_points, check_dim, phase_point_operator, single_phase_point_operators
from .wigner import wigner_of_state

EXACT, LOG = "exact", "log"
MERGE_RTOL = 1e-12


def _to_log(x) -> tuple[int, float]:
    x = float(x)
    if x == 0:
        return (0, -math.inf)
    return (1 if x > 0 else -1, math.log(abs(x)))


def _log_mul(a, b) -> tuple[int, float]:
    if a[0] == 0 or b[0] == 0:
        return (0, -math.inf)
    return (a[0] * b[0], a[1] + b[1])


def _log_pow(a, k: int) -> tuple[int, float]:
    if k == 0:
        return (1, 0.0)
    if a[0] == 0:
        return (0, -math.inf)
    return (a[0] ** k, k * a[1])


def _log_float(a) -> float:
    return a[0] * math.exp(a[1]) if a[0] else 0.0


@dataclass(frozen=True)
class PairList:
    """Component-multiplicity representation of an n-copy quasi-distribution.

    ``pairs`` holds ``(value, multiplicity)``; ``refs`` optionally holds the
    reference-distribution value at every point carrying that pair (``None``
    means the uniform reference ``d**(-2n)``).
    """

    pairs: tuple
    d: int = 3
    n: int = 1
    mode: str = EXACT
    refs: tuple | None = field(default=None)

    def __post_init__(self):
        if self.mode not in (EXACT, LOG):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.refs is not None and len(self.refs) != len(self.pairs):
            raise ValueError("refs must align with pairs")
        if self.total_multiplicity != self.d ** (2 * self.n):
            raise ValueError(
                f"multiplicities sum to {self.total_multiplicity}, expected {self.d}**{2 * self.n}"
            )

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.pairs)

    @property
    def values(self) -> list:
        return [v for v, _ in self.pairs]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.pairs]

    def float_values(self) -> np.ndarray:
        if self.mode == EXACT:
            return np.array([float(v) for v in self.values])
        return np.array([_log_float(v) for v in self.values])

    def total(self):
        """``sum value * multiplicity``; exactly 1 for a normalised exact list."""
        if self.mode == EXACT:
            return sum(v * m for v, m in self.pairs)
        return math.fsum(_log_float((s, lv + math.log(m))) for (s, lv), m in self.pairs)

    def abs_total(self):
        """``sum |value| * multiplicity``, the scale against which float totals are judged."""
        if self.mode == EXACT:
            return sum(abs(v) * m for v, m in self.pairs)
        return math.fsum(math.exp(lv + math.log(m)) for (s, lv), m in self.pairs if s)

    def ref_values(self) -> list:
        if self.refs is not None:
            return list(self.refs)
        N = self.d ** (2 * self.n)
        if self.mode == EXACT:
            return [Fraction(1, N)] * len(self.pairs)
        return [-math.log(N)] * len(self.pairs)

    def to_log(self) -> "PairList":
        if self.mode == LOG:
            return self
        refs = None if self.refs is None else tuple(math.log(r) for r in self.refs)
        return PairList(
            tuple((_to_log(v), m) for v, m in self.pairs), self.d, self.n, LOG, refs
        )

    def expand(self) -> list:
        """All ``d**(2n)`` component values, sorted descending; small lists only."""
        out = []
        for v, m in self.pairs:
            out.extend([v if self.mode == EXACT else _log_float(v)] * m)
        return sorted(out, reverse=True)

    def lorenz(self) -> LorenzCurve:
        """Lorenz curve relative to the stored (or uniform) reference."""
        refs = self.ref_values()
        if self.mode == EXACT:
            blocks = ((v / r, m * r, m * v) for (v, m), r in zip(self.pairs, refs))
            return curve_from_blocks(blocks, exact=True)
        blocks = []
        for ((s, lv), m), lr in zip(self.pairs, refs):
            lm = math.log(m)
            if s == 0:
                blocks.append(((0, 0.0), math.exp(lm + lr), 0.0))
                continue
            key = (s, s * (lv - lr))
            blocks.append((key, math.exp(lm + lr), s * math.exp(lm + lv)))
        return curve_from_blocks(blocks, exact=False)


def _merge(pairs, refs, mode):
    if mode == EXACT:
        acc: dict = {}
        for i, (v, m) in enumerate(pairs):
            key = (v, None if refs is None else refs[i])
            acc[key] = acc.get(key, 0) + m
        items = sorted(acc.items(), key=lambda kv: kv[0][0], reverse=True)
        new_pairs = tuple((k[0], m) for k, m in items)
        new_refs = None if refs is None else tuple(k[1] for k, _ in items)
        return new_pairs, new_refs
    rows = [
        (v[0], v[1], 0.0 if refs is None else refs[i], m) for i, (v, m) in enumerate(pairs)
    ]
    rows.sort(key=lambda t: (t[0], t[0] * t[1], t[2]), reverse=True)
    out: list = []
    for s, lv, lr, m in rows:
        if out:
            ps, plv, plr, pm = out[-1]
            same_v = ps == s and (s == 0 or abs(plv - lv) <= MERGE_RTOL * max(1.0, abs(lv)))
            if same_v and abs(plr - lr) <= MERGE_RTOL * max(1.0, abs(lr)):
                out[-1] = (ps, plv, plr, pm + m)
                continue
        out.append((s, lv, lr, m))
    new_pairs = tuple(((s, lv), m) for s, lv, _, m in out)
    new_refs = None if refs is None else tuple(lr for _, _, lr, _ in out)
    return new_pairs, new_refs


def from_vector(w, r=None, d: int = 3, mode: str | None = None) -> PairList:
    """Group a (single- or few-copy) distribution into a :class:`PairList`."""
    N = len(w)
    n = round(math.log(N, d) / 2)
    if d ** (2 * n) != N:
        raise ValueError(f"length {N} is not d**(2n) for d={d}")
    if mode is None:
        exact_ok = all(isinstance(x, Rational) for x in w) and (
            r is None or all(isinstance(x, Rational) for x in r)
        )
        mode = EXACT if exact_ok else LOG
    if mode == EXACT:
        pairs = [(Fraction(x), 1) for x in w]
        refs = None if r is None else [Fraction(x) for x in r]
    else:
        pairs = [(_to_log(x), 1) for x in w]
        refs = None if r is None else [math.log(float(x)) for x in r]
    pairs, refs = _merge(pairs, refs, mode)
    return PairList(pairs, d, n, mode, refs)


def _common_mode(a: PairList, b: PairList):
    if a.d != b.d:
        raise ValueError(f"incompatible local dimensions {a.d} and {b.d}")
    if a.mode != b.mode:
        return a.to_log(), b.to_log()
    return a, b


def _refs_or_default(p: PairList):
    return p.refs if p.refs is not None else tuple(p.ref_values())


def pairs_product(a: PairList, b: PairList) -> PairList:
    """Pair list of the tensor product: all products ``(w_i w'_j, m_i m'_j)``."""
    a, b = _common_mode(a, b)
    use_refs = a.refs is not None or b.refs is not None
    ra, rb = _refs_or_default(a), _refs_or_default(b)
    pairs, refs = [], []
    for (va, ma), xa in zip(a.pairs, ra):
        for (vb, mb), xb in zip(b.pairs, rb):
            if a.mode == EXACT:
                pairs.append((va * vb, ma * mb))
                refs.append(xa * xb)
            else:
                pairs.append((_log_mul(va, vb), ma * mb))
                refs.append(xa + xb)
    merged, mrefs = _merge(pairs, refs if use_refs else None, a.mode)
    return PairList(merged, a.d, a.n + b.n, a.mode, mrefs)


def compositions(n: int, parts: int):
    """All tuples of ``parts`` non-negative integers summing to ``n``."""
    if parts == 1:
        yield (n,)
        return
    for k in range(n, -1, -1):
        for rest in compositions(n - k, parts - 1):
            yield (k,) + rest


def multinomial(qs) -> int:
    out, total = 1, 0
    for q in qs:
        total += q
        out *= math.comb(total, q)
    return out


def pairs_power(a: PairList, n: int) -> PairList:
    """Pair list of ``n`` copies via the multinomial expansion over compositions."""
    if int(n) != n or n < 1:
        raise ValueError(f"number of copies must be a positive integer, got {n}")
    if n == 1:
        return a
    use_refs = a.refs is not None
    refs_in = _refs_or_default(a)
    D = len(a.pairs)
    pairs, refs = [], []
    for qs in compositions(n, D):
        mult = multinomial(qs)
        if a.mode == EXACT:
            val, ref = Fraction(1), Fraction(1)
            for (v, m), r, q in zip(a.pairs, refs_in, qs):
                if q:
                    val *= v**q
                    ref *= r**q
                    mult *= m**q
        else:
            val, ref = (1, 0.0), 0.0
            for (v, m), r, q in zip(a.pairs, refs_in, qs):
                if q:
                    val = _log_mul(val, _log_pow(v, q))
                    ref += q * r
                    mult *= m**q
        pairs.append((val, mult))
        refs.append(ref)
    merged, mrefs = _merge(pairs, refs if use_refs else None, a.mode)
    return PairList(merged, a.d, a.n * n, a.mode, mrefs)


def strange_components(eps):
    """``(v, u)`` with the single-copy noisy Strange values ``-v`` (once) and ``u`` (8 times)."""
    if isinstance(eps, Rational):
        eps = Fraction(eps)
        return Fraction(1, 3) - Fraction(4, 9) * eps, Fraction(1, 6) - eps / 18
    return 1 / 3 - 4 * eps / 9, 1 / 6 - eps / 18


def _check_eps(eps):
    if not 0 <= eps < Fraction(3, 4):
        raise ValueError(f"noise parameter must lie in [0, 3/4), got {eps}")


def noisy_strange(eps, mode: str | None = None):
    """Wigner vector and pair list of the depolarised Strange state.

    Exact mode is used when ``eps`` is an ``int`` or ``Fraction`` (unless
    ``mode="log"``); otherwise values are held in log form.

    Returns
    -------
    w : list of Fraction or numpy.ndarray
        The 9 Wigner values, the negative one at the origin.
    pairs : PairList
        ``{(-v, 1), (u, 8)}``.
    """
    _check_eps(eps)
    if mode is None:
        mode = EXACT if isinstance(eps, Rational) else LOG
    if mode == EXACT:
        v, u = strange_components(Fraction(eps))
        w = [-v] + [u] * 8
        return w, PairList(((u, 8), (-v, 1)), 3, 1, EXACT)
    v, u = strange_components(float(eps))
    w = np.array([-v] + [u] * 8)
    return w, PairList(((_to_log(u), 8), (_to_log(-v), 1)), 3, 1, LOG)


def strange_copies(eps, n: int, mode: str | None = None) -> PairList:
    return pairs_power(noisy_strange(eps, mode)[1], n)


def phi_plus(m: int, n: int, p):
    """Binomial mass on even success counts ``0, 2, ..., m``."""
    if m % 2 or not 0 <= m <= n:
        raise ValueError(f"phi_plus needs even m in [0, n], got m={m}, n={n}")
    return sum(math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(0, m + 1, 2))


def phi_minus(m: int, n: int, p):
    """Binomial mass on odd success counts ``1, 3, ..., m``."""
    if m % 2 == 0 or not 0 <= m <= n:
        raise ValueError(f"phi_minus needs odd m in [0, n], got m={m}, n={n}")
    return sum(math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(1, m + 1, 2))


def _merge_collinear(xs, ls, exact):
    out_x, out_l = [xs[0], xs[1]], [ls[0], ls[1]]
    for x, l in zip(xs[2:], ls[2:]):
        if x == out_x[-1]:
            # float underflow of a tiny block: keep the later endpoint
            out_l[-1] = l
            continue
        s_prev = (out_l[-1] - out_l[-2]) / (out_x[-1] - out_x[-2])
        s_new = (l - out_l[-1]) / (x - out_x[-1])
        same = s_prev == s_new if exact else abs(s_prev - s_new) <= MERGE_RTOL * max(
            abs(s_prev), abs(s_new)
        )
        if same:
            out_x[-1], out_l[-1] = x, l
        else:
            out_x.append(x)
            out_l.append(l)
    return out_x, out_l


def strange_elbows_unital(n: int, eps) -> LorenzCurve:
    """Closed-form Lorenz curve of ``rho_S(eps)^{(x) n}`` relative to the maximally mixed state.

    Elbows are cumulative binomial masses over even/odd success counts; the
    regime (``eps`` below or above 3/7) and the parity of ``n`` select which.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    _check_eps(eps)
    exact = isinstance(eps, Rational)
    if exact:
        eps = Fraction(eps)
        one = Fraction(1)
    else:
        eps = float(eps)
        one = 1.0
    v, u = strange_components(eps)
    scale = 8 * u + v  # = 5/3 - 8 eps / 9
    p_pos = 8 * u / scale  # = (12 - 4 eps) / (15 - 8 eps)
    p_neg = v / scale  # = (3 - 4 eps) / (15 - 8 eps)
    big, small = 8 * one / 9, one / 9
    Sn = scale**n
    half = n // 2
    xs, ls = [0 * one], [0 * one]
    low_noise = eps < Fraction(3, 7)
    # positive components first, then negative ones in order of growing magnitude
    if low_noise:
        if n % 2 == 0:
            lhs = [(phi_plus(2 * i, n, big), Sn * phi_plus(2 * i, n, p_pos)) for i in range(half + 1)]
        else:
            lhs = [
                (phi_minus(2 * i + 1, n, big), Sn * phi_minus(2 * i + 1, n, p_pos))
                for i in range(half + 1)
            ]
        rhs_idx = [j for j in range(1, n + 1, 2)]
        rhs = [(phi_minus(j, n, small), -Sn * phi_minus(j, n, p_neg)) for j in rhs_idx]
    else:
        lhs = [(phi_plus(2 * i, n, small), Sn * phi_plus(2 * i, n, p_neg)) for i in range(half + 1)]
        if n % 2 == 0:
            rhs = [(phi_minus(k, n, big), -Sn * phi_minus(k, n, p_pos)) for k in range(1, n, 2)]
        else:
            rhs = [(phi_plus(k, n, big), -Sn * phi_plus(k, n, p_pos)) for k in range(0, n, 2)]
    xs += [x for x, _ in lhs]
    ls += [l for _, l in lhs]
    x_star, l_star = xs[-1], ls[-1]
    xs += [x_star + x for x, _ in rhs]
    ls += [l_star + l for _, l in rhs]
    if exact:
        if xs[-1] != 1 or ls[-1] != 1:
            raise AssertionError("closed-form elbows do not close at (1, 1)")
    else:
        xs[-1], ls[-1] = 1.0, 1.0
    xs, ls = _merge_collinear(xs, ls, exact)
    return LorenzCurve(tuple(xs), tuple(ls), exact=exact)


def strange_peak(n: int, eps):
    """``(x_star, L_star)`` of the n-copy noisy Strange curve against the uniform reference."""
    if isinstance(eps, Rational):
        eps = Fraction(eps)
        half = Fraction(1, 2)
        return half + half * Fraction(7, 9) ** n, half + half * ((15 - 8 * eps) / 9) ** n
    return 0.5 + 0.5 * (7 / 9) ** n, 0.5 + 0.5 * ((15 - 8 * eps) / 9) ** n


# --- thermal references ---------------------------------------------------


@dataclass(frozen=True)
class ThermalContext:
    """Gibbs state of a single qudit and the quantities entering the free-energy bound.

    ``log_Z`` and ``log_zeta`` are stored so that ``beta * F = -log_Z`` and
    ``beta * phi = -log_zeta`` stay finite at ``beta = 0``.
    """

    beta: float
    energies: np.ndarray
    eigenvectors: np.ndarray
    log_Z: float
    z_star: np.ndarray
    alpha: np.ndarray
    log_zeta: float
    w_tau: np.ndarray
    d: int = 3

    @property
    def zeta(self) -> float:
        return math.exp(self.log_zeta)

    @property
    def beta_F(self) -> float:
        return -self.log_Z

    @property
    def beta_phi(self) -> float:
        return -self.log_zeta

    @property
    def F(self) -> float:
        """Helmholtz free energy ``-log(Z) / beta`` (``-inf`` at infinite temperature)."""
        return -self.log_Z / self.beta if self.beta > 0 else -math.inf

    @property
    def phi(self) -> float:
        """Magic free energy ``-log(zeta) / beta``; at ``beta = 0`` its limit ``sum alpha_k E_k``."""
        if self.beta > 0:
            return -self.log_zeta / self.beta
        return float(self.alpha @ self.energies)


def _log_weighted_sum(weights, energies, beta) -> float:
    """``log sum_k weights_k exp(-beta E_k)`` with the exponent shifted for stability."""
    e0 = float(np.min(energies))
    s = float(np.sum(weights * np.exp(-beta * (energies - e0))))
    if s <= 0:
        return math.nan
    return -beta * e0 + math.log(s)


def thermal_state(H, beta: float, d: int = 3, tie_tol: float = 1e-12):
    """Gibbs state ``exp(-beta H)/Z`` of one qudit and its :class:`ThermalContext`.

    Raises ``ValueError`` when the Gibbs state is not strictly inside the set of
    Wigner-positive states, where the magic free energy is undefined.
    """
    check_dim(d)
    H = np.asarray(H, dtype=complex)
    if H.shape != (d, d):
        raise ValueError(f"Hamiltonian must be {d}x{d}")
    if np.abs(H - H.conj().T).max() > 1e-10:
        raise ValueError("Hamiltonian is not Hermitian")
    if not (math.isfinite(beta) and beta >= 0):
        raise ValueError(f"inverse temperature must be finite and non-negative, got {beta}")
    energies, vecs = np.linalg.eigh(H)
    log_Z = _log_weighted_sum(np.ones(d), energies, beta)
    pops = np.exp(-beta * energies - log_Z)
    tau = (vecs * pops) @ vecs.conj().T
    w_tau = wigner_of_state(tau, d)
    w_min = w_tau.min()
    if w_min <= 0:
        raise ValueError("Gibbs state is not in the interior of the Wigner-positive set")
    # lexicographic tie-break in (q, p): first flat index within tolerance of the minimum
    idx = int(np.flatnonzero(w_tau <= w_min + tie_tol * abs(w_min))[0])
    z_star = all_points(d, 1)[idx]
    A = phase_point_operator(z_star, d)
    alpha = np.real(np.einsum("ik,ij,jk->k", vecs.conj(), A, vecs))
    log_zeta = _log_weighted_sum(alpha, energies, beta)
    if not math.isfinite(log_zeta):
        raise ValueError("zeta is not positive: Gibbs state outside the free interior")
    ctx = ThermalContext(
        beta=float(beta),
        energies=energies,
        eigenvectors=vecs,
        log_Z=log_Z,
        z_star=z_star,
        alpha=alpha,
        log_zeta=log_zeta,
        w_tau=w_tau,
        d=d,
    )
    return tau, ctx


def thermal_strange_pairs(eps, ctx: ThermalContext) -> PairList:
    """Single-copy pair list of the noisy Strange state against the Gibbs reference."""
    w, _ = noisy_strange(float(eps), mode=LOG)
    return from_vector(w, ctx.w_tau, d=3, mode=LOG)


def named_hamiltonian(name: str, p: float = 0.0, q: float = 0.0) -> np.ndarray:
    """Qutrit Hamiltonian presets: ``diag012``, ``A0``, ``A12`` and the mixture family.

    ``"A12-mix"`` is ``(1 - p - q) A_0 + p A_(1,2) + q diag(0, 1, 2)``.
    """
    A0 = phase_point_operator([0, 0], 3)
    A12 = phase_point_operator([1, 2], 3)
    diag = np.diag([0.0, 1.0, 2.0]).astype(complex)
    if name == "diag012":
        return diag
    if name == "A0":
        return A0
    if name == "A12":
        return A12
    if name == "A12-mix":
        return (1 - p - q) * A0 + p * A12 + q * diag
    raise ValueError(f"unknown Hamiltonian preset {name!r}")


def stabilizer_eigenbasis(H, d: int = 3, tol: float = 1e-9) -> bool:
    """True if every eigenvector of ``H`` is a stabilizer state (Wigner values in {0, 1/d})."""
    _, vecs = np.linalg.eigh(np.asarray(H, dtype=complex))
    A = single_phase_point_operators(d).reshape(d * d, d, d)
    for k in range(d):
        v = vecs[:, k]
        w = np.real(np.einsum("i,zij,j->z", v.conj(), A, v)) / d
        if not np.all((np.abs(w) < tol) | (np.abs(w - 1 / d) < tol)):
            return False
    return True
