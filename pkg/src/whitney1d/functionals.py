"""Trace-seminorm functionals on sampled data.

Three families: gap-weighted sums of m-th divided differences over the
consecutive windows (a single pass), the same maximised over all
increasing subsequences of the sites (exact dynamic programming over
states recording the last m chosen points, or brute force for small sets),
and the pointwise sharp maximal function built from all (m+1)-point
windows together with its Lebesgue p-norm.  A constants table collects the
order-dependent comparison constants with their known exact values.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import zeta

from .config import DEFAULT, Tolerances, snapshot
from .divdiff import (
    SampledFunction,
    consecutive_divided_differences,
    n_infty_functional,
)
from .errors import (
    InsufficientDataError,
    InvalidParameterError,
    NumericalFailureError,
)

__all__ = [
    "TraceReport",
    "ConstantsTable",
    "deboor_functional",
    "variational_functional",
    "SharpMaximal",
    "sharp_maximal_point",
    "sharp_maximal_lp_norm",
    "constants_table",
    "trace_report",
]


def _validate_finite_p(p: float) -> float:
    p = float(p)
    if not (math.isfinite(p) and p > 1.0):
        raise InvalidParameterError("p must be a finite real > 1")
    return p


def deboor_functional(f: SampledFunction, m: int, p: float) -> float:
    """Single-pass functional over consecutive windows:
    (sum (x_{i+m} - x_i) |m-th divided difference|**p)**(1/p)."""
    p = _validate_finite_p(p)
    if m < 1:
        raise InvalidParameterError("order m must be >= 1")
    dd = consecutive_divided_differences(f, m)
    x = f.points
    gaps = x[m:] - x[:-m]
    return float(np.sum(gaps * np.abs(dd) ** p) ** (1.0 / p))


# ---------------------------------------------------------------------------
# subsequence supremum

def _window_tensors(f: SampledFunction, m: int, p: float):
    """Weight arrays over all index windows of length m+1, by broadcasting.

    Entry [i0, ..., im] is (x_im - x_i0) |divided difference|**p; entries
    with non-increasing indices are zeroed.
    """
    x = f.points
    v = f.values
    n = len(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        if m == 1:
            d1 = (v[None, :] - v[:, None]) / (x[None, :] - x[:, None])
            W = (x[None, :] - x[:, None]) * np.abs(d1) ** p
            valid = np.tri(n, n, -1, dtype=bool).T
        elif m == 2:
            d1 = (v[None, :] - v[:, None]) / (x[None, :] - x[:, None])
            # d2[i,j,k] = (d1[j,k] - d1[i,j]) / (x_k - x_i)
            d2 = (d1[None, :, :] - d1[:, :, None]) / (
                x[None, None, :] - x[:, None, None]
            )
            W = (x[None, None, :] - x[:, None, None]) * np.abs(d2) ** p
            i, j, k = np.ogrid[:n, :n, :n]
            valid = (i < j) & (j < k)
        elif m == 3:
            d1 = (v[None, :] - v[:, None]) / (x[None, :] - x[:, None])
            d2 = (d1[None, :, :] - d1[:, :, None]) / (
                x[None, None, :] - x[:, None, None]
            )
            # d3[i,j,k,l] = (d2[j,k,l] - d2[i,j,k]) / (x_l - x_i)
            d3 = (d2[None, :, :, :] - d2[:, :, :, None]) / (
                x[None, None, None, :] - x[:, None, None, None]
            )
            W = (x[None, None, None, :] - x[:, None, None, None]) * np.abs(d3) ** p
            i, j, k, l = np.ogrid[:n, :n, :n, :n]
            valid = (i < j) & (j < k) & (k < l)
        else:
            raise InvalidParameterError("window tensors support m <= 3")
    W = np.where(valid, np.nan_to_num(W, nan=0.0, posinf=0.0, neginf=0.0), 0.0)
    return W, valid


def _exact_dp(f: SampledFunction, m: int, p: float) -> float:
    """Maximise the window sum over increasing subsequences.

    State: the last m chosen indices.  All weights are nonnegative, so a
    state value of 0 encodes a fresh chain with no completed window yet.
    """
    n = len(f)
    W, valid = _window_tensors(f, m, p)
    neg = -math.inf
    answer = neg
    if m == 1:
        best = np.zeros(n)
        for j in range(1, n):
            cand = best[:j] + W[:j, j]
            top = float(np.max(cand))
            answer = max(answer, top)
            best[j] = max(top, 0.0)
    elif m == 2:
        D = np.where(np.tri(n, n, -1, dtype=bool).T, 0.0, neg)
        for k in range(2, n):
            C = D[:k, :k] + W[:k, :k, k]
            col = C.max(axis=0)  # over i, for each j < k
            finite = col[np.isfinite(col)]
            if finite.size:
                answer = max(answer, float(finite.max()))
            D[:k, k] = np.maximum(col, 0.0)
    else:
        i, j, k = np.ogrid[:n, :n, :n]
        D = np.where((i < j) & (j < k), 0.0, neg)
        for l in range(3, n):
            C = D[:l, :l, :l] + W[:l, :l, :l, l]
            col = C.max(axis=0)  # over i, for each (j, k)
            finite = col[np.isfinite(col)]
            if finite.size:
                answer = max(answer, float(finite.max()))
            D[:l, :l, l] = np.maximum(col, 0.0)
    return float(answer) ** (1.0 / p)


def _window_weight_map(f: SampledFunction, m: int, p: float) -> dict:
    """Weight of every (m+1)-subset of indices, for the brute-force route."""
    x = f.points
    v = f.values
    combs = np.array(list(itertools.combinations(range(len(x)), m + 1)))
    xs = x[combs]
    t = v[combs]
    for d in range(1, m + 1):
        t = (t[:, 1:] - t[:, :-1]) / (xs[:, d:] - xs[:, :-d])
    w = (xs[:, -1] - xs[:, 0]) * np.abs(t[:, 0]) ** p
    return {tuple(c): float(wi) for c, wi in zip(combs, w)}


def _brute_force(f: SampledFunction, m: int, p: float) -> float:
    n = len(f)
    wmap = _window_weight_map(f, m, p)
    best = 0.0
    idx = range(n)
    for size in range(m + 1, n + 1):
        for sub in itertools.combinations(idx, size):
            s = 0.0
            for i in range(size - m):
                s += wmap[sub[i:i + m + 1]]
            if s > best:
                best = s
    return best ** (1.0 / p)


def variational_functional(f: SampledFunction, m: int, p: float,
                           mode: str = "full_sequence") -> float:
    """Supremum-type functional over increasing subsequences of the sites.

    Modes: "full_sequence" evaluates the consecutive-window sum only (a
    lower bound for the supremum), "exact_dp" maximises exactly for m <= 3
    and n <= 40, "brute_force" enumerates all subsequences for n <= 14.
    """
    p = _validate_finite_p(p)
    if m < 1:
        raise InvalidParameterError("order m must be >= 1")
    n = len(f)
    if n < m + 1:
        raise InsufficientDataError(f"need at least {m + 1} points for order {m}")
    if mode == "full_sequence":
        return deboor_functional(f, m, p)
    if mode == "exact_dp":
        if m > 3 or n > 40:
            raise InvalidParameterError("exact_dp supports m <= 3 and n <= 40")
        return _exact_dp(f, m, p)
    if mode == "brute_force":
        if n > 14:
            raise InvalidParameterError("brute_force supports n <= 14")
        return _brute_force(f, m, p)
    raise InvalidParameterError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# sharp maximal function

class SharpMaximal:
    """All (m+1)-point windows of the data, prepared for pointwise sups.

    The quotient for window S = {x_0 < ... < x_m} at a point t is
    |difference of the two m-point divided differences of S| divided by
    |t - x_0| + |t - x_m|; the numerator equals the m-th divided
    difference of S times the window width, which is what is stored.
    """

    def __init__(self, f: SampledFunction, m: int):
        if m < 1:
            raise InvalidParameterError("order m must be >= 1")
        if len(f) < m + 1:
            raise InsufficientDataError(f"need at least {m + 1} points for order {m}")
        self.f = f
        self.m = m
        x = f.points
        combs = np.array(list(itertools.combinations(range(len(x)), m + 1)))
        xs = x[combs]
        t = f.values[combs]
        for d in range(1, m + 1):
            t = (t[:, 1:] - t[:, :-1]) / (xs[:, d:] - xs[:, :-d])
        self.lo = xs[:, 0]
        self.hi = xs[:, -1]
        self.num = np.abs(t[:, 0]) * (self.hi - self.lo)

    def _chunked_max(self, ts: np.ndarray, den_fn) -> np.ndarray:
        out = np.empty(len(ts))
        step = max(1, int(2_000_000 / max(len(self.num), 1)))
        for s in range(0, len(ts), step):
            block = ts[s:s + step, None]
            out[s:s + step] = np.max(self.num[None, :] / den_fn(block), axis=1)
        return out

    def at(self, t):
        """Sharp maximal value(s) at scalar or vector t."""
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        res = self._chunked_max(
            ts, lambda b: np.abs(b - self.lo[None, :]) + np.abs(b - self.hi[None, :])
        )
        return float(res[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else res

    def alternative_at(self, t):
        """Same sup with the window-plus-point diameter as denominator;
        lies between the sharp maximal value and twice it."""
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        res = self._chunked_max(
            ts,
            lambda b: np.maximum(b, self.hi[None, :]) - np.minimum(b, self.lo[None, :]),
        )
        return float(res[0]) if np.isscalar(t) or np.asarray(t).ndim == 0 else res

    def lp_norm(self, p: float, tol: Tolerances = DEFAULT) -> float:
        """Lebesgue p-norm over the line; requires p > 1 for integrable tails.

        The core window is the sampled span padded by 10 spans on each
        side, split at the sites; beyond it panels of doubling width are
        added until a panel contributes less than ``tail_rel`` of the
        running total, and the geometric remainder of the 1/|t| decay is
        added on top.
        """
        p = float(p)
        if not p > 1.0:
            raise InvalidParameterError(
                "lp norm requires p > 1: the sharp maximal decays like 1/|t| "
                "so slower powers have divergent tails"
            )
        x = self.f.points
        span = float(x[-1] - x[0])
        R = 10.0 * span
        edges = [float(x[0]) - R] + [float(t) for t in x] + [float(x[-1]) + R]
        total = 0.0
        gl_x, gl_w = np.polynomial.legendre.leggauss(15)

        def panel(u, v, rel=1e-8, depth=0, whole=None, rate=None):
            def quad(a, b):
                half = 0.5 * (b - a)
                mid = 0.5 * (a + b)
                vals = self.at(mid + half * gl_x)
                return half * float(np.dot(gl_w, np.asarray(vals) ** p))

            if whole is None:
                whole = quad(u, v)
            if rate is None:
                # per-width absolute budget, so creases of the max do not
                # trigger unbounded refinement at fixed relative error
                rate = rel * whole / (v - u) if v > u else 0.0
            mid = 0.5 * (u + v)
            left, right = quad(u, mid), quad(mid, v)
            bound = rel * (left + right) + rate * (v - u) + 1e-300
            if depth >= 30 or abs(left + right - whole) <= bound:
                return left + right
            return (panel(u, mid, rel, depth + 1, left, rate)
                    + panel(mid, v, rel, depth + 1, right, rate))

        for u, v in zip(edges[:-1], edges[1:]):
            total += panel(u, v)
        ratio = 2.0 ** (1.0 - p)
        for sgn, start in ((-1.0, edges[0]), (1.0, edges[-1])):
            width = R if R > 0 else max(1.0, abs(start))
            pos = start
            for _ in range(500):
                u, v = (pos - width, pos) if sgn < 0 else (pos, pos + width)
                contrib = panel(u, v)
                total += contrib
                pos = u if sgn < 0 else v
                width *= 2.0
                if contrib <= tol.tail_rel * total:
                    total += contrib * ratio / (1.0 - ratio)
                    break
            else:
                raise NumericalFailureError(
                    f"tail integration did not settle for p={p}"
                )
        return total ** (1.0 / p)


def sharp_maximal_point(f: SampledFunction, m: int, x: float) -> float:
    """Sharp maximal function of the data at one point.  For repeated
    evaluation construct a SharpMaximal once and call ``at``."""
    return SharpMaximal(f, m).at(float(x))


def sharp_maximal_lp_norm(f: SampledFunction, m: int, p: float,
                          tol: Tolerances = DEFAULT) -> float:
    return SharpMaximal(f, m).lp_norm(p, tol)


# ---------------------------------------------------------------------------
# constants

def _alternating_power_sum(s: int) -> float:
    """sum over all integers j of ((-1)**j / (2j+1))**s for s >= 2.

    Pairing j with -j-1 shows the two halves are equal, so the sum is
    twice the j >= 0 half.  For even s the terms are all positive and the
    half-sum is (1 - 2**-s) zeta(s); for odd s the half-sum alternates and
    is accumulated in blocks until the first omitted term is below 1e-15
    relative, which bounds the truncation error.
    """
    if s < 2:
        raise InvalidParameterError("series exponent must be >= 2")
    if s % 2 == 0:
        return 2.0 * (1.0 - 2.0 ** (-s)) * float(zeta(s))
    total = 0.0
    j0 = 0
    block = 1 << 14
    while True:
        j = np.arange(j0, j0 + block)
        terms = ((-1.0) ** j) / (2.0 * j + 1.0) ** s
        total += float(np.sum(terms))
        j0 += block
        nxt = 1.0 / (2.0 * j0 + 1.0) ** s
        if nxt <= 1e-15 * abs(total):
            break
        if j0 > 1 << 28:
            break
    return 2.0 * total


@dataclass(frozen=True)
class ConstantsTable:
    """Order-dependent comparison constants with known exact values.

    finiteness_lower/upper bracket the sharp finiteness constant for
    uniform-norm extension from m+1 point subsets ((pi/2)**(m-1) and
    (m-1)*9**m, informative for m > 2); theta is the sharp comparison
    constant for the alternating extremal data, computed from the signed
    odd-reciprocal power series; deboor_upper is the binomial upper bound
    2**(m-2)/m + sum_i C(m,i) C(m-1,i-1) 4**(m-i) for the uniform-norm
    equivalence constant.  Exact fields are None where no closed value is
    known.
    """

    m: int
    finiteness_lower: float
    finiteness_upper: float
    finiteness_exact: float | None
    theta: float
    theta_exact: float | None
    deboor_upper: float
    favard_exact: float | None


def constants_table(m: int) -> ConstantsTable:
    if m < 1:
        raise InvalidParameterError("order m must be >= 1")
    series = _alternating_power_sum(m + 1)
    theta = (math.pi / 2.0) ** (m + 1) / series
    deboor_upper = 2.0 ** (m - 2) / m + sum(
        math.comb(m, i) * math.comb(m - 1, i - 1) * 4.0 ** (m - i)
        for i in range(1, m + 1)
    )
    return ConstantsTable(
        m=m,
        finiteness_lower=(math.pi / 2.0) ** (m - 1),
        finiteness_upper=float((m - 1) * 9 ** m),
        finiteness_exact={1: 1.0, 2: 2.0}.get(m),
        theta=theta,
        theta_exact={1: 1.0, 2: 2.0}.get(m),
        deboor_upper=deboor_upper,
        favard_exact={1: 1.0, 2: 2.0}.get(m),
    )


# ---------------------------------------------------------------------------
# combined report

@dataclass(frozen=True)
class TraceReport:
    """Functionals and seminorms for one data set at one (m, p)."""

    m: int
    p: float  # math.inf encodes the uniform-norm case
    n_points: int
    variational: float
    variational_mode: str
    deboor: float | None
    jet_value: float | None
    sharp_lp: float | None
    whitney_seminorm: float | None
    oracle_seminorm: float | None
    ratios: dict = field(default_factory=dict)
    constants_used: dict = field(default_factory=dict)


def trace_report(f: SampledFunction, m: int, p: float, *,
                 with_extension: bool = True, with_oracle: bool = False,
                 with_sharp: bool = True,
                 tol: Tolerances = DEFAULT) -> TraceReport:
    """Assemble the functionals for one data set.

    For finite p the variational value uses the exact subsequence supremum
    whenever m <= 3 and n <= 40 and otherwise the full-sequence lower
    bound (recorded in ``variational_mode``).  For p = inf the report
    carries the uniform-norm bracket: the variational slot holds the lower
    bound m! times the largest consecutive divided difference and the
    seminorm slot the constructed extension's sup seminorm.
    """
    from .jets import build_whitney_field, jet_functional
    from .extension import whitney_extend
    from .poly import seminorm_lmp

    if m < 1:
        raise InvalidParameterError("order m must be >= 1")
    n = len(f)
    if n < m + 1:
        raise InsufficientDataError(f"need at least {m + 1} points for order {m}")
    p = float(p)
    ratios: dict = {}
    if math.isinf(p):
        lower = float(math.factorial(m)) * n_infty_functional(f, m)
        upper = None
        if with_extension:
            upper = seminorm_lmp(whitney_extend(f, m, tol=tol).F, m, math.inf, tol)
            ratios["bracket_upper_over_lower"] = upper / lower if lower > 0 else math.inf
        return TraceReport(
            m=m, p=p, n_points=n,
            variational=lower, variational_mode="consecutive_sup",
            deboor=None, jet_value=None, sharp_lp=None,
            whitney_seminorm=upper, oracle_seminorm=None,
            ratios=ratios, constants_used=snapshot(tol),
        )
    if not p > 1.0:
        raise InvalidParameterError("p must be > 1 (or inf)")
    if m <= 3 and n <= 40:
        mode = "exact_dp"
    else:
        mode = "full_sequence"
    N = variational_functional(f, m, p, mode)
    T = deboor_functional(f, m, p)
    full = T if mode == "exact_dp" else None
    jet_value = None
    whitney = None
    oracle_v = None
    sharp = None
    if with_extension:
        ext = whitney_extend(f, m, tol=tol)
        whitney = seminorm_lmp(ext.F, m, p, tol)
        jet_value = jet_functional(ext.field, p, "exact_sup")
        if whitney > 0:
            ratios["variational_over_seminorm"] = N / whitney
            ratios["jet_over_seminorm"] = jet_value / whitney
    else:
        jet_value = jet_functional(build_whitney_field(f, m), p, "exact_sup")
    if with_oracle and p == 2.0:
        from .oracle import natural_spline_p2

        oracle_v = math.sqrt(natural_spline_p2(f, m, tol).seminorm_sq)
        if oracle_v > 0:
            ratios["variational_over_oracle"] = N / oracle_v
            if whitney is not None:
                ratios["whitney_over_oracle"] = whitney / oracle_v
    if with_sharp:
        sharp = sharp_maximal_lp_norm(f, m, p, tol)
    ratios["deboor_over_variational"] = T / N if N > 0 else 1.0
    if full is not None and N > 0:
        ratios["full_sequence_deficit"] = (N - full) / N
        ratios["full_sequence_differs"] = bool((N - full) / N > 1e-9)
    return TraceReport(
        m=m, p=p, n_points=n,
        variational=N, variational_mode=mode,
        deboor=T, jet_value=jet_value, sharp_lp=sharp,
        whitney_seminorm=whitney, oracle_seminorm=oracle_v,
        ratios=ratios, constants_used=snapshot(tol),
    )
