"""Relative majorization of quasi-distributions through Lorenz curves.

Curves are built either from float arrays (numpy path) or from sequences of
``fractions.Fraction`` (exact path); the exact path keeps every elbow rational
so dominance and peak checks can be decided without rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

EXACT_TOL = 1e-12
FLOAT_TOL = 1e-9
MERGE_RTOL = 1e-12


@dataclass(frozen=True)
class LorenzCurve:
    """Piecewise-linear Lorenz curve given by its elbows.

    ``xs`` starts at 0 and ends at 1, strictly increasing; ``ls`` holds the curve
    values at those abscissae. ``exact`` marks curves whose coordinates are
    ``Fraction`` objects. Float curves may also carry ``tail_x = 1 - xs`` and
    ``tail_l = 1 - ls`` summed from the right end, which stay accurate where
    ``xs`` crowds against 1.
    """

    xs: tuple
    ls: tuple
    exact: bool = False
    tail_x: tuple | None = field(default=None, compare=False, repr=False)
    tail_l: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.xs) != len(self.ls) or len(self.xs) < 2:
            raise ValueError("a Lorenz curve needs at least two matching coordinates")

    @property
    def elbows(self) -> list[tuple]:
        return list(zip(self.xs, self.ls))

    @property
    def interior(self) -> list[tuple]:
        return self.elbows[1:-1]

    @property
    def slopes(self) -> list:
        return [
            (self.ls[i + 1] - self.ls[i]) / (self.xs[i + 1] - self.xs[i])
            for i in range(len(self.xs) - 1)
        ]

    @property
    def peak(self) -> tuple:
        """``(x, L)`` at the end of the positive-slope run.

        Equals the first maximum in exact mode; in float mode flat steps are
        crossed, since the last positive blocks may rise by less than one ulp.
        """
        i = 0
        while i + 1 < len(self.xs):
            step = self.ls[i + 1] - self.ls[i]
            if step < 0 or (step == 0 and self.exact):
                break
            i += 1
        return self.xs[i], self.ls[i]

    def __call__(self, x):
        """Evaluate the curve at a single abscissa in [0, 1]."""
        return _interp(self.xs, self.ls, x)

    def tails(self) -> tuple[tuple, tuple]:
        """``(end_x - xs, end_l - ls)``, from stored right-end sums when available."""
        if self.tail_x is not None:
            return self.tail_x, self.tail_l
        ex, el = self.xs[-1], self.ls[-1]
        return tuple(ex - x for x in self.xs), tuple(el - l for l in self.ls)

    def as_float(self) -> "LorenzCurve":
        if not self.exact:
            return self
        tx, tl = self.tails()
        return LorenzCurve(
            tuple(map(float, self.xs)),
            tuple(map(float, self.ls)),
            exact=False,
            tail_x=tuple(map(float, tx)),
            tail_l=tuple(map(float, tl)),
        )


def _interp(xs, ls, x):
    """Piecewise-linear interpolation on increasing ``xs``, clamped at both ends."""
    if x <= xs[0]:
        return ls[0]
    if x >= xs[-1]:
        return ls[-1]
    lo, hi = 0, len(xs) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    if x == xs[lo]:
        return ls[lo]
    t = (x - xs[lo]) / (xs[hi] - xs[lo])
    return ls[lo] + t * (ls[hi] - ls[lo])


def _two_sided(dx, dl, end=None) -> LorenzCurve:
    """Float curve from segment increments, summing each elbow from its nearer end.

    Rounding in a running sum scales with the magnitudes already added, so
    each coordinate (and its complement) is taken from whichever of the prefix
    and suffix sums has the smaller absolute mass.
    """
    dx = np.asarray(dx, dtype=float)
    dl = np.asarray(dl, dtype=float)
    px = np.concatenate([[0.0], np.cumsum(dx)])
    pl = np.concatenate([[0.0], np.cumsum(dl)])
    sx = np.concatenate([np.cumsum(dx[::-1])[::-1], [0.0]])
    sl = np.concatenate([np.cumsum(dl[::-1])[::-1], [0.0]])
    apl = np.concatenate([[0.0], np.cumsum(np.abs(dl))])
    asl = np.concatenate([np.cumsum(np.abs(dl[::-1]))[::-1], [0.0]])
    ex, el = (px[-1], pl[-1]) if end is None else end
    left_x = px <= sx
    xs = np.where(left_x, px, ex - sx)
    tx = np.where(left_x, ex - px, sx)
    left_l = apl <= asl
    ls = np.where(left_l, pl, el - sl)
    tl = np.where(left_l, el - pl, sl)
    xs[0], ls[0], tx[-1], tl[-1] = 0.0, 0.0, 0.0, 0.0
    xs[-1], ls[-1], tx[0], tl[0] = ex, el, ex, el
    return LorenzCurve(
        tuple(xs.tolist()), tuple(ls.tolist()), False, tuple(tx.tolist()), tuple(tl.tolist())
    )


def _is_exact(values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def _as_exact(values) -> list[Fraction]:
    return [Fraction(v) for v in values]


def curve_from_blocks(blocks: Iterable[tuple], exact: bool, normalized: bool = True) -> LorenzCurve:
    """Assemble a curve from ``(sort_key, dx, dL)`` blocks.

    ``sort_key`` orders blocks by decreasing ratio ``dL/dx``; consecutive blocks
    with equal keys (exact mode) or keys equal to relative precision
    ``MERGE_RTOL`` (float mode) are merged into one segment.
    """
    blocks = sorted(blocks, key=lambda b: b[0], reverse=True)
    seg_x: list = []
    seg_l: list = []
    group_key = None
    for key, dx, dl in blocks:
        if dx == 0 and dl == 0:
            continue
        same = group_key is not None and (
            key == group_key if exact else _close_keys(key, group_key)
        )
        if same:
            seg_x[-1] += dx
            seg_l[-1] += dl
        else:
            seg_x.append(dx)
            seg_l.append(dl)
            group_key = key
    if exact:
        xs, ls = [Fraction(0)], [Fraction(0)]
        for dx, dl in zip(seg_x, seg_l):
            xs.append(xs[-1] + dx)
            ls.append(ls[-1] + dl)
        if normalized and (xs[-1] != 1 or ls[-1] != 1):
            raise ValueError(f"curve does not end at (1, 1): ({xs[-1]}, {ls[-1]})")
        return LorenzCurve(tuple(xs), tuple(ls), exact=True)
    if not normalized:
        return _two_sided(seg_x, seg_l)
    ex, el = math.fsum(seg_x), math.fsum(seg_l)
    # large-n curves rise to ~S**n before cancelling back to 1
    scale = max(1.0, math.fsum(abs(v) for v in seg_l))
    if abs(ex - 1.0) > 1e-9 or abs(el - 1.0) > 1e-9 * scale:
        raise ValueError(f"curve does not end at (1, 1): ({ex}, {el})")
    return _two_sided(seg_x, seg_l, end=(1.0, 1.0))


def _close_keys(a, b) -> bool:
    if isinstance(a, tuple):
        # (sign, sign * log|value|) keys from log-domain pair lists
        return a[0] == b[0] and abs(a[1] - b[1]) <= MERGE_RTOL * max(1.0, abs(a[1]))
    return abs(a - b) <= MERGE_RTOL * max(abs(a), abs(b))


def _check_pair(w, r):
    if len(w) != len(r):
        raise ValueError(f"w and r differ in length: {len(w)} vs {len(r)}")
    if any(ri <= 0 for ri in r):
        raise ValueError("reference distribution must have strictly positive entries")


def lorenz_curve(w: Sequence, r: Sequence | None = None, normalized: bool = True) -> LorenzCurve:
    """Lorenz curve of ``w`` relative to the reference ``r`` (uniform by default).

    Components are sorted by the ratio ``w_i / r_i`` in non-increasing order
    and the curve passes through the cumulative sums ``(sum r, sum w)``.
    Exact arithmetic is used when every entry is rational (``int``/``Fraction``).
    ``normalized=False`` skips the unit-sum checks on ``w``, for unnormalised
    combinations such as ``a w + b r``.
    """
    if r is None:
        N = len(w)
        r = [Fraction(1, N)] * N if _is_exact(w) else np.full(N, 1.0 / N)
    _check_pair(w, r)
    if _is_exact(w) and _is_exact(r):
        w, r = _as_exact(w), _as_exact(r)
        if sum(r) != 1 or (normalized and sum(w) != 1):
            raise ValueError("w and r must both sum to 1")
        blocks = ((wi / ri, ri, wi) for wi, ri in zip(w, r))
        return curve_from_blocks(blocks, exact=True, normalized=normalized)
    w = np.asarray(w, dtype=float)
    r = np.asarray(r, dtype=float)
    if abs(r.sum() - 1.0) > 1e-10 or (normalized and abs(w.sum() - 1.0) > 1e-10):
        raise ValueError("w and r must both sum to 1")
    ratio = w / r
    order = np.argsort(-ratio, kind="stable")
    ratio, r, w = ratio[order], r[order], w[order]
    # group ties so that merged elbows do not depend on float noise
    new = np.ones(len(ratio), dtype=bool)
    start = ratio[0]
    for i in range(1, len(ratio)):
        if abs(ratio[i] - start) <= MERGE_RTOL * max(abs(ratio[i]), abs(start)):
            new[i] = False
        else:
            start = ratio[i]
    starts = np.flatnonzero(new)
    seg_x = np.add.reduceat(r, starts)
    seg_l = np.add.reduceat(w, starts)
    return _two_sided(seg_x, seg_l, end=(1.0, 1.0) if normalized else (1.0, float(w.sum())))


def curve_dominates(a: LorenzCurve, b: LorenzCurve, tol: float | None = None) -> bool:
    """True iff ``a(x) >= b(x)`` on [0, 1], up to ``tol``.

    Since ``a`` is concave it suffices to compare at the elbows of ``b``. The
    tolerance is relative: a violation must exceed ``tol * max(|a(x)|, |b(x)|)``,
    which keeps the test meaningful for curve values far below 1 near the origin.
    """
    exact = a.exact and b.exact
    if tol is None:
        tol = EXACT_TOL if exact else FLOAT_TOL
    if exact:
        tol = Fraction(tol)
        for x, lb in zip(b.xs, b.ls):
            la = a(x)
            if la < lb and lb - la > tol * max(abs(la), abs(lb)):
                return False
        return True
    a, b = a.as_float(), b.as_float()
    # right of x = 1/2, compare in complement coordinates summed from the end
    a_tx, a_tl = (t[::-1] for t in a.tails())
    b_tx, b_tl = b.tails()
    same_end = a.xs[-1] == b.xs[-1] and a.ls[-1] == b.ls[-1]
    for i, (x, lb) in enumerate(zip(b.xs, b.ls)):
        if x <= 0.5 or not same_end:
            gap = lb - a(x)
            la = a(x)
        else:
            ta = _interp(a_tx, a_tl, b_tx[i])
            gap = ta - b_tl[i]
            la = a.ls[-1] - ta
        if gap > 0 and gap > tol * max(abs(la), abs(lb)):
            return False
    return True


def relative_majorizes(w_in, r_in, w_out, r_out, tol: float | None = None) -> bool:
    """Decide ``(w_in, r_in) > (w_out, r_out)`` by Lorenz-curve dominance."""
    return curve_dominates(lorenz_curve(w_in, r_in), lorenz_curve(w_out, r_out), tol)


def _l1_profile(w, r, ts):
    return [sum(abs(wi - ri * t) for wi, ri in zip(w, r)) for t in ts]


def l1_criterion(w_in, r_in, w_out, r_out, tol: float = 0.0) -> bool:
    """Check ``sum |w_i - r_i t| >= sum |w'_i - r'_i t|`` for all real ``t``.

    Both sides are piecewise linear in ``t`` with kinks at the ratios
    ``w_i/r_i`` and ``w'_j/r'_j``; beyond the outermost kink both have slope
    ``+-1``, so testing the kinks and one point on each side is exhaustive.
    """
    _check_pair(w_in, r_in)
    _check_pair(w_out, r_out)
    exact = all(_is_exact(v) for v in (w_in, r_in, w_out, r_out))
    if exact:
        w_in, r_in, w_out, r_out = map(_as_exact, (w_in, r_in, w_out, r_out))
    else:
        w_in, r_in, w_out, r_out = (np.asarray(v, dtype=float) for v in (w_in, r_in, w_out, r_out))
    ts = sorted({wi / ri for wi, ri in zip(w_in, r_in)} | {wi / ri for wi, ri in zip(w_out, r_out)})
    ts = [ts[0] - 1] + ts + [ts[-1] + 1]
    lhs = _l1_profile(w_in, r_in, ts)
    rhs = _l1_profile(w_out, r_out, ts)
    return all(a - b >= -tol for a, b in zip(lhs, rhs))


def area_monotone(c: LorenzCurve):
    """Area of the region between ``y = 1`` and the curve where the curve exceeds 1."""
    one = Fraction(1) if c.exact else 1.0
    total = 0 * one
    for (x0, l0), (x1, l1) in zip(c.elbows[:-1], c.elbows[1:]):
        h0, h1 = l0 - one, l1 - one
        if h0 >= 0 and h1 >= 0:
            total += (h0 + h1) * (x1 - x0) / 2
        elif h0 > 0 or h1 > 0:
            # crossing: keep the triangle above y = 1
            top = h0 if h0 > 0 else h1
            width = (x1 - x0) * top / (abs(h0) + abs(h1))
            total += top * width / 2
    return total


def gamma_embed(w, a) -> list | np.ndarray:
    """Embed ``w`` into ``sum(a)`` points by spreading ``w_i`` uniformly over ``a_i`` slots."""
    if len(w) != len(a):
        raise ValueError("w and a must have equal length")
    if any(int(ai) != ai or ai < 1 for ai in a):
        raise ValueError("block sizes must be positive integers")
    if _is_exact(w):
        return [Fraction(wi) / int(ai) for wi, ai in zip(w, a) for _ in range(int(ai))]
    w = np.asarray(w, dtype=float)
    a = np.asarray(a, dtype=np.int64)
    return np.repeat(w / a, a)


def lorenz_linearity_check(w, r, a, b, tol: float = 1e-12) -> bool:
    """Verify ``L_{a w + b r | r}(x) = a L_{w|r}(x) + b x`` at every elbow of both sides."""
    if a <= 0:
        raise ValueError("a must be positive")
    if _is_exact(w) and _is_exact(r) and isinstance(a, Rational) and isinstance(b, Rational):
        w, r = _as_exact(w), _as_exact(r)
        mixed = [a * wi + b * ri for wi, ri in zip(w, r)]
        tol = Fraction(0)
    else:
        w = np.asarray(w, dtype=float)
        r = np.asarray(r, dtype=float)
        mixed = a * w + b * r
    lhs = lorenz_curve(mixed, r, normalized=False)
    base = lorenz_curve(w, r)
    for x in sorted(set(lhs.xs) | set(base.xs)):
        if abs(lhs(x) - (a * base(x) + b * x)) > tol:
            return False
    return True
