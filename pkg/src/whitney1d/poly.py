"""Dense polynomials with a movable expansion point, piecewise polynomials,
and integrals of |P|**p.

A Polynomial stores ascending coefficients about an expansion point
(``center``); with the default center 0 the k-th coefficient multiplies x**k.
Pieces of a PiecewisePolynomial each keep their own center (normally their
left breakpoint).  Centering pieces locally keeps coefficients well scaled
when neighbouring gaps differ by many orders of magnitude; ``recenter``
re-expands about any other point on demand, and about 0 it recovers plain
monomial coefficients.

Integrals of |P|**p over an interval are computed exactly for integer p by
isolating the real roots of P and integrating the signed power polynomial on
each sign-constant subinterval.  Non-integer p falls back to adaptive
Gauss-Legendre panels split at the same roots, so the integrand is smooth on
every panel.
"""
from __future__ import annotations

import math
from bisect import bisect_right

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import InvalidParameterError, NumericalFailureError

__all__ = [
    "Polynomial",
    "PiecewisePolynomial",
    "lp_piece_integral",
    "sup_abs_on_interval",
    "seminorm_lmp",
]


def _strip(coeffs) -> tuple[float, ...]:
    out = [float(c) for c in coeffs]
    for c in out:
        if not math.isfinite(c):
            raise InvalidParameterError("polynomial coefficients must be finite")
    while out and out[-1] == 0.0:
        out.pop()
    return tuple(out)


def _l1_magnitude(P, t: float) -> float:
    """sum |c_j| |t - center|**j: the evaluation-error scale of P at t."""
    s = abs(float(t) - P.center)
    acc = 0.0
    for c in reversed(P.coeffs):
        acc = acc * s + abs(c)
    return acc


def _horner(coeffs, t):
    """Evaluate ascending coefficients at t (scalar or ndarray)."""
    if isinstance(t, np.ndarray):
        acc = np.zeros_like(t, dtype=float)
        for c in reversed(coeffs):
            acc = acc * t + c
        return acc
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _shift_coeffs(coeffs, delta) -> list[float]:
    """Coefficients of P(y + delta) given those of P(y), by Horner composition."""
    if not coeffs:
        return []
    out = [coeffs[-1]]
    for k in range(len(coeffs) - 2, -1, -1):
        # out <- out * (y + delta) + coeffs[k]
        nxt = [0.0] * (len(out) + 1)
        for j, c in enumerate(out):
            nxt[j + 1] += c
            nxt[j] += delta * c
        nxt[0] += coeffs[k]
        out = nxt
    return out


class Polynomial:
    """sum(coeffs[k] * (x - center)**k) with trailing exact zeros dropped.

    The zero polynomial is the empty coefficient tuple.  Instances are
    treated as immutable; all arithmetic returns new objects.
    """

    __slots__ = ("coeffs", "center")

    def __init__(self, coeffs=(), center: float = 0.0):
        self.coeffs = _strip(coeffs)
        self.center = float(center)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> float:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0

    @property
    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            return _horner(self.coeffs, x - self.center)
        return _horner(self.coeffs, float(x) - self.center)

    def derivative(self, order: int = 1) -> "Polynomial":
        if order < 0:
            raise InvalidParameterError("derivative order must be >= 0")
        if order == 0:
            return self
        c = list(self.coeffs)
        for _ in range(order):
            c = [k * c[k] for k in range(1, len(c))]
            if not c:
                break
        return Polynomial(c, self.center)

    def antiderivative(self) -> "Polynomial":
        c = [0.0] + [ck / (k + 1) for k, ck in enumerate(self.coeffs)]
        return Polynomial(c, self.center)

    def recenter(self, center: float) -> "Polynomial":
        """Same polynomial re-expanded about ``center``."""
        center = float(center)
        if center == self.center or self.is_zero:
            return Polynomial(self.coeffs, center)
        return Polynomial(_shift_coeffs(self.coeffs, center - self.center), center)

    def taylor_jet(self, x0: float, order: int) -> "Polynomial":
        """Taylor polynomial of the given order at x0, re-expanded about 0."""
        if order < 0:
            raise InvalidParameterError("jet order must be >= 0")
        local = self.recenter(x0)
        return Polynomial(local.coeffs[: order + 1], x0).recenter(0.0)

    def _aligned(self, other: "Polynomial") -> "Polynomial":
        return other if other.center == self.center else other.recenter(self.center)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        o = self._aligned(other)
        n = max(len(self.coeffs), len(o.coeffs))
        c = [self.coefficient(k) + o.coefficient(k) for k in range(n)]
        return Polynomial(c, self.center)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs], self.center)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            o = self._aligned(other)
            if self.is_zero or o.is_zero:
                return Polynomial((), self.center)
            c = np.convolve(np.array(self.coeffs), np.array(o.coeffs))
            return Polynomial(c, self.center)
        return Polynomial([float(other) * c for c in self.coeffs], self.center)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r}, center={self.center!r})"


# ---------------------------------------------------------------------------
# real-root isolation on an interval (local coordinates)

def _deriv_coeffs(c):
    return [k * c[k] for k in range(1, len(c))]


def _bisect_root(c, u, v, fu, tol):
    """One sign-change root of the coefficient list c in [u, v]."""
    su = math.copysign(1.0, fu)
    for _ in range(200):
        if (v - u) <= tol * max(1.0, abs(u), abs(v)):
            break
        mid = 0.5 * (u + v)
        fm = _horner(c, mid)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == su:
            u = mid
        else:
            v = mid
    return 0.5 * (u + v)


def _real_roots(c, lo, hi, tol):
    """Ascending real roots of the coefficient list c on [lo, hi].

    Root isolation walks the monotone segments cut out by the critical
    points (found recursively), so even-multiplicity roots land on segment
    boundaries and sign changes are bracketed before bisection.
    """
    c = list(c)
    while c and c[-1] == 0.0:
        c.pop()
    deg = len(c) - 1
    if deg <= 0:
        return []
    if deg == 1:
        r = -c[0] / c[1]
        return [r] if lo <= r <= hi else []
    if deg == 2:
        a2, a1, a0 = c[2], c[1], c[0]
        disc = a1 * a1 - 4.0 * a2 * a0
        if disc < 0.0:
            return []
        sq = math.sqrt(disc)
        q = -0.5 * (a1 + math.copysign(sq, a1)) if a1 != 0.0 else math.sqrt(max(disc, 0.0)) / 2.0
        roots = []
        if a1 != 0.0:
            roots = [q / a2, a0 / q] if q != 0.0 else [0.0, 0.0]
        else:
            r = sq / (2.0 * a2)
            roots = [-r, r]
        return sorted(r for r in roots if lo <= r <= hi)
    crit = _real_roots(_deriv_coeffs(c), lo, hi, tol)
    pts = [lo] + [t for t in crit if lo < t < hi] + [hi]
    roots = []
    vals = [_horner(c, t) for t in pts]
    for i in range(len(pts) - 1):
        u, v = pts[i], pts[i + 1]
        fu, fv = vals[i], vals[i + 1]
        if fu == 0.0:
            roots.append(u)
        if fu * fv < 0.0:
            roots.append(_bisect_root(c, u, v, fu, tol))
    if vals[-1] == 0.0:
        roots.append(hi)
    out = []
    sep = tol * max(1.0, abs(lo), abs(hi))
    for r in sorted(roots):
        if not out or r - out[-1] > sep:
            out.append(r)
    return out


def _sign_split_points(c, lo, hi, tol):
    """Interior subdivision points so that c has constant sign between them.

    All critical points are included; extra same-sign splits are harmless
    for piecewise signed integration.
    """
    crit = _real_roots(_deriv_coeffs(c), lo, hi, tol) if len(c) > 2 else []
    cuts = set(t for t in crit if lo < t < hi)
    cuts.update(t for t in _real_roots(c, lo, hi, tol) if lo < t < hi)
    return sorted(cuts)


# ---------------------------------------------------------------------------
# adaptive Gauss-Legendre for the non-integer-p route

_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)


def _gl_panel(fn, u, v):
    half = 0.5 * (v - u)
    mid = 0.5 * (u + v)
    return half * float(np.dot(_GL_W, fn(mid + half * _GL_X)))


def _adaptive_gl(fn, u, v, rel, floor_rate=0.0, depth=0, whole=None):
    # floor_rate is an absolute error budget per unit width, derived from a
    # rough global estimate; without it an endpoint root of the integrand
    # keeps the panel-relative error constant under refinement and the
    # recursion never terminates.
    if whole is None:
        whole = _gl_panel(fn, u, v)
    mid = 0.5 * (u + v)
    left = _gl_panel(fn, u, mid)
    right = _gl_panel(fn, mid, v)
    if depth >= 40:
        return left + right
    bound = rel * (abs(left) + abs(right)) + floor_rate * (v - u) + 1e-300
    if abs(left + right - whole) <= bound:
        return left + right
    return _adaptive_gl(fn, u, mid, rel, floor_rate, depth + 1, left) + _adaptive_gl(
        fn, mid, v, rel, floor_rate, depth + 1, right
    )


def _coeff_power(c, p):
    out = np.array([1.0])
    base = np.array(c, dtype=float)
    for _ in range(p):
        out = np.convolve(out, base)
    return out


def lp_piece_integral(P: Polynomial, a: float, b: float, p: float,
                      tol: Tolerances = DEFAULT) -> float:
    """Integral of |P(t)|**p over [a, b].

    Integer p uses exact antiderivatives of the signed power polynomial on
    sign-constant subintervals; other p uses adaptive Gauss-Legendre on the
    same subdivision.  Requires p >= 1 and a <= b.
    """
    p = float(p)
    if not p >= 1.0:
        raise InvalidParameterError("lp_piece_integral requires p >= 1")
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidParameterError("integration interval must be finite")
    if b < a:
        raise InvalidParameterError("integration interval must have a <= b")
    if a == b or P.is_zero:
        return 0.0
    lo = a - P.center
    hi = b - P.center
    c = list(P.coeffs)
    cuts = _sign_split_points(c, lo, hi, tol.root_tol)
    bounds = [lo] + cuts + [hi]
    if p.is_integer():
        pi = int(p)
        cp = _coeff_power(c, pi)
        anti = np.concatenate([[0.0], cp / np.arange(1, len(cp) + 1)])
        total = 0.0
        for u, v in zip(bounds[:-1], bounds[1:]):
            seg = _horner(anti, v) - _horner(anti, u)
            if pi % 2 == 1:
                s = _horner(c, 0.5 * (u + v))
                seg = abs(seg) if s != 0.0 else 0.0
            total += seg
        return max(total, 0.0)
    fn = lambda t: np.abs(_horner(c, t)) ** p
    rough = sum(_gl_panel(fn, u, v) for u, v in zip(bounds[:-1], bounds[1:]))
    rate = tol.quadrature_rel * rough / (hi - lo) if rough > 0 else 0.0
    total = 0.0
    for u, v in zip(bounds[:-1], bounds[1:]):
        total += _adaptive_gl(fn, u, v, tol.quadrature_rel, rate)
    return max(total, 0.0)


def _lp_integral_quadrature(P: Polynomial, a: float, b: float, p: float,
                            tol: Tolerances = DEFAULT) -> float:
    """Pure-quadrature route for |P|**p, kept independent of the exact path."""
    if a == b or P.is_zero:
        return 0.0
    lo = a - P.center
    hi = b - P.center
    c = list(P.coeffs)
    cuts = _sign_split_points(c, lo, hi, tol.root_tol)
    bounds = [lo] + cuts + [hi]
    fn = lambda t: np.abs(_horner(c, t)) ** float(p)
    rough = sum(_gl_panel(fn, u, v) for u, v in zip(bounds[:-1], bounds[1:]))
    rate = tol.quadrature_rel * rough / (hi - lo) if rough > 0 else 0.0
    return sum(
        _adaptive_gl(fn, u, v, tol.quadrature_rel, rate)
        for u, v in zip(bounds[:-1], bounds[1:])
    )


def sup_abs_on_interval(P: Polynomial, a: float, b: float,
                        tol: Tolerances = DEFAULT) -> float:
    """max of |P| over [a, b], from endpoint and critical-point candidates."""
    if b < a:
        raise InvalidParameterError("interval must have a <= b")
    if P.is_zero:
        return 0.0
    lo = a - P.center
    hi = b - P.center
    c = list(P.coeffs)
    cand = [lo, hi]
    if len(c) > 2:
        cand.extend(_real_roots(_deriv_coeffs(c), lo, hi, tol.root_tol))
    return max(abs(_horner(c, t)) for t in cand)


class PiecewisePolynomial:
    """Breakpoints b_1 < ... < b_N with N+1 polynomial pieces.

    Piece 0 applies on (-inf, b_1], piece i on [b_i, b_{i+1}], piece N on
    [b_N, inf).  ``declared_smoothness`` c >= -1 promises that adjacent
    pieces agree in value and derivatives up to order c at the interior
    breakpoints; construction verifies this within ``continuity_rel``
    scaled by coefficient magnitude (pass validate=False to skip, e.g. for
    derived objects or deliberate negative controls).
    """

    __slots__ = ("breakpoints", "pieces", "declared_smoothness")

    def __init__(self, breakpoints, pieces, declared_smoothness: int, *,
                 tol: Tolerances = DEFAULT, rel: float | None = None,
                 validate: bool = True):
        bps = tuple(float(b) for b in breakpoints)
        if len(bps) < 1:
            raise InvalidParameterError("need at least one breakpoint")
        if any(not math.isfinite(b) for b in bps):
            raise InvalidParameterError("breakpoints must be finite")
        if any(u >= v for u, v in zip(bps[:-1], bps[1:])):
            raise InvalidParameterError("breakpoints must be strictly increasing")
        ps = tuple(pieces)
        if len(ps) != len(bps) + 1:
            raise InvalidParameterError("need exactly one more piece than breakpoints")
        if not all(isinstance(q, Polynomial) for q in ps):
            raise InvalidParameterError("pieces must be Polynomial instances")
        if declared_smoothness < -1:
            raise InvalidParameterError("declared smoothness must be >= -1")
        self.breakpoints = bps
        self.pieces = ps
        self.declared_smoothness = int(declared_smoothness)
        if validate:
            bound = tol.continuity_rel if rel is None else rel
            defect = self.continuity_defect()
            if defect > bound:
                raise NumericalFailureError(
                    f"pieces violate declared smoothness: defect {defect:.3e} > {bound:.3e}"
                )

    def continuity_defect(self) -> float:
        """Worst scaled jet mismatch at the breakpoints up to the declared order.

        The mismatch of each derivative is scaled by the l1 evaluation
        magnitude sum |c_j| |b - center|**j of the two derivative
        polynomials at the junction, the backward-error scale of monomial
        evaluation there; a mismatch at rounding level of that magnitude
        is as continuous as the representation can express.
        """
        worst = 0.0
        for j, b in enumerate(self.breakpoints):
            left, right = self.pieces[j], self.pieces[j + 1]
            for d in range(self.declared_smoothness + 1):
                ld = left.derivative(d)
                rd = right.derivative(d)
                scale = max(1.0, _l1_magnitude(ld, b), _l1_magnitude(rd, b))
                worst = max(worst, abs(ld(b) - rd(b)) / scale)
        return worst

    def piece_index(self, x: float) -> int:
        return bisect_right(self.breakpoints, x)

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            idx = np.searchsorted(np.array(self.breakpoints), x, side="right")
            out = np.empty_like(x, dtype=float)
            for i, piece in enumerate(self.pieces):
                mask = idx == i
                if mask.any():
                    out[mask] = piece(x[mask])
            return out
        return self.pieces[self.piece_index(float(x))](x)

    def derivative(self, order: int = 1) -> "PiecewisePolynomial":
        return PiecewisePolynomial(
            self.breakpoints,
            [q.derivative(order) for q in self.pieces],
            max(self.declared_smoothness - order, -1),
            validate=False,
        )

    def piece_intervals(self):
        """Yield (left, right, piece) with infinite outer endpoints."""
        edges = (-math.inf,) + self.breakpoints + (math.inf,)
        for i, piece in enumerate(self.pieces):
            yield edges[i], edges[i + 1], piece

    @classmethod
    def from_polynomial(cls, P: Polynomial, breakpoint: float = 0.0,
                        smoothness: int | None = None) -> "PiecewisePolynomial":
        """A globally polynomial function presented with a single breakpoint."""
        c = smoothness if smoothness is not None else max(P.degree + 1, 0)
        return cls([breakpoint], [P, P], c, validate=False)

    def __repr__(self):
        return (
            f"PiecewisePolynomial(n_breakpoints={len(self.breakpoints)}, "
            f"smoothness={self.declared_smoothness})"
        )


def _piece_is_negligible(Q: Polynomial, ref_scale: float, tol: Tolerances) -> bool:
    thr = tol.coeff_threshold * max(1.0, ref_scale)
    return all(abs(c) <= thr for c in Q.coeffs)


def seminorm_lmp(F: PiecewisePolynomial, m: int, p: float,
                 tol: Tolerances = DEFAULT) -> float:
    """Lebesgue p-norm of the m-th derivative of a piecewise polynomial.

    For p < inf the result is (sum over bounded pieces of the exact or
    adaptive |F^(m)|**p integrals)**(1/p); unbounded pieces must have degree
    <= m-1, otherwise +inf is returned.  For p = inf the supremum of
    |F^(m)| over the line is returned (+inf if an unbounded piece has a
    nonconstant m-th derivative).
    """
    if m < 1:
        raise InvalidParameterError("seminorm order m must be >= 1")
    p = float(p)
    if not p > 1.0:
        raise InvalidParameterError("seminorm requires p > 1 (p may be inf)")
    finite_p = math.isfinite(p)
    total = 0.0
    sup = 0.0
    for left, right, piece in F.piece_intervals():
        dm = piece.derivative(m)
        unbounded = math.isinf(left) or math.isinf(right)
        if unbounded:
            if dm.is_zero or _piece_is_negligible(dm, piece.max_abs_coeff, tol):
                continue
            if finite_p:
                return math.inf
            if dm.degree >= 1:
                return math.inf
            sup = max(sup, abs(dm.coefficient(0)))
            continue
        if finite_p:
            total += lp_piece_integral(dm, left, right, p, tol)
        else:
            sup = max(sup, sup_abs_on_interval(dm, left, right, tol))
    if finite_p:
        return total ** (1.0 / p)
    return sup
