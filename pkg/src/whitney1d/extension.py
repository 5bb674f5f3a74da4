"""Gluing a jet field into one smooth piecewise-polynomial interpolant.

Inside each gap between adjacent sites the two neighbouring jets are
bridged by the unique polynomial of degree <= 2m-1 matching both jets to
order m-1 (two-point Hermite interpolation, built through a confluent
Newton table).  Outside the sampled span the extension continues the
boundary jets themselves, so it is a polynomial of degree <= m-1 there.
The result interpolates the data, is m-1 times continuously
differentiable, and depends linearly on the sampled values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .divdiff import SampledFunction
from .errors import InsufficientDataError, InvalidParameterError
from .jets import WhitneyField, build_whitney_field
from .poly import (
    PiecewisePolynomial,
    Polynomial,
    seminorm_lmp,
    sup_abs_on_interval,
)

__all__ = [
    "ExtensionResult",
    "hermite_two_point",
    "hermite_two_point_by_coefficients",
    "whitney_extend",
    "gap_derivative_bound_check",
    "riesz_family_functional",
    "best_riesz_family",
]


@dataclass(frozen=True)
class ExtensionResult:
    """The glued extension, the jet field it came from, and any seminorms
    requested at build time (keyed by p)."""

    F: PiecewisePolynomial
    field: WhitneyField
    m: int
    seminorms: dict


def _jet_values(P: Polynomial, at: float, m: int) -> list[float]:
    return [P.derivative(d)(at) for d in range(m)]


def _check_jet_inputs(a: float, Pa: Polynomial, b: float, Pb: Polynomial, m: int):
    if m < 1:
        raise InvalidParameterError("order m must be >= 1")
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise InvalidParameterError("need finite endpoints with a < b")
    if Pa.degree >= m or Pb.degree >= m:
        raise InvalidParameterError("jet polynomials must have degree <= m-1")


def hermite_two_point(a: float, Pa: Polynomial, b: float, Pb: Polynomial,
                      m: int) -> Polynomial:
    """Degree <= 2m-1 polynomial matching the order-(m-1) jets of Pa at a
    and Pb at b, computed by a confluent Newton table in coordinates local
    to a.  The result is centered at a."""
    _check_jet_inputs(a, Pa, b, Pb, m)
    h = b - a
    va = _jet_values(Pa, a, m)
    vb = _jet_values(Pb, b, m)
    n2 = 2 * m
    z = [0.0] * m + [h] * m
    jets = (va, vb)
    # dd[i][k] holds the table entry over nodes z[i..i+k].
    dd = [[0.0] * n2 for _ in range(n2)]
    for i in range(n2):
        dd[i][0] = va[0] if i < m else vb[0]
    for k in range(1, n2):
        fact = math.factorial(k)
        for i in range(n2 - k):
            if z[i + k] == z[i]:
                block = jets[0] if i < m else jets[1]
                dd[i][k] = block[k] / fact
            else:
                dd[i][k] = (dd[i + 1][k - 1] - dd[i][k - 1]) / (z[i + k] - z[i])
    newton = [dd[0][k] for k in range(n2)]
    coeffs = [newton[-1]]
    for j in range(n2 - 2, -1, -1):
        nxt = [0.0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= z[j] * c
        nxt[0] += newton[j]
        coeffs = nxt
    return Polynomial(coeffs, center=a)


def hermite_two_point_by_coefficients(a: float, Pa: Polynomial, b: float,
                                      Pb: Polynomial, m: int) -> Polynomial:
    """Reference route for the same bridge polynomial, used as an
    independent cross-check for small m: solve the m-by-m linear system for
    the correction coefficients of orders m..2m-1 on top of Pa."""
    _check_jet_inputs(a, Pa, b, Pb, m)
    h = b - a
    M = np.empty((m, m))
    rhs = np.empty(m)
    for i in range(m):
        rhs[i] = Pb.derivative(i)(b) - Pa.derivative(i)(b)
        for col, k in enumerate(range(m, 2 * m)):
            M[i, col] = h ** (k - i) / math.factorial(k - i)
    gam = np.linalg.solve(M, rhs)
    base = Pa.recenter(a).coeffs
    coeffs = list(base) + [0.0] * (2 * m - len(base))
    for col, k in enumerate(range(m, 2 * m)):
        coeffs[k] = gam[col] / math.factorial(k)
    return Polynomial(coeffs, center=a)


def whitney_extend(f: SampledFunction, m: int, seminorm_ps=(),
                   tol: Tolerances = DEFAULT) -> ExtensionResult:
    """Build the glued piecewise-polynomial extension of the sampled data.

    Pieces: the boundary jets on the two unbounded sides, a two-point
    Hermite bridge on every gap.  Breakpoints are the sample sites and the
    declared smoothness is m-1.  ``seminorm_ps`` lists values of p for
    which the seminorm is computed up front.
    """
    field = build_whitney_field(f, m)
    x = f.points
    pieces = [field.polys[0]]
    for i in range(len(x) - 1):
        pieces.append(
            hermite_two_point(float(x[i]), field.polys[i], float(x[i + 1]),
                              field.polys[i + 1], m)
        )
    pieces.append(field.polys[-1])
    F = PiecewisePolynomial(x, pieces, m - 1, tol=tol)
    seminorms = {float(p): seminorm_lmp(F, m, p, tol) for p in seminorm_ps}
    return ExtensionResult(F=F, field=field, m=m, seminorms=seminorms)


def gap_derivative_bound_check(a: float, Pa: Polynomial, b: float,
                               Pb: Polynomial, m: int,
                               tol: Tolerances = DEFAULT) -> tuple[float, float]:
    """Data for the bridge-derivative bound on one gap.

    Returns (lhs, rhs): lhs is max |H^(m)| over [a, b] for the bridge H of
    the two jets, rhs the smaller of the two scaled jet-difference sums
    sum_i |Pb^(i)(t) - Pa^(i)(t)| / (b-a)**(m-i) taken at t = b and t = a.
    lhs <= C(m) * rhs with a constant depending only on m; callers record
    the empirical constant.
    """
    H = hermite_two_point(a, Pa, b, Pb, m)
    lhs = sup_abs_on_interval(H.derivative(m), a, b, tol)
    h = b - a
    s_at_b = sum(
        abs(Pb.derivative(i)(b) - Pa.derivative(i)(b)) / h ** (m - i)
        for i in range(m)
    )
    s_at_a = sum(
        abs(Pb.derivative(i)(a) - Pa.derivative(i)(a)) / h ** (m - i)
        for i in range(m)
    )
    return lhs, min(s_at_b, s_at_a)


def _validate_intervals(intervals):
    ivs = [(float(u), float(v)) for u, v in intervals]
    for u, v in ivs:
        if not (math.isfinite(u) and math.isfinite(v)) or u >= v:
            raise InvalidParameterError("intervals must be nondegenerate and finite")
    ivs.sort()
    for (u1, v1), (u2, v2) in zip(ivs[:-1], ivs[1:]):
        if u2 < v1:
            raise InvalidParameterError("intervals must have disjoint interiors")
    return ivs


def riesz_family_functional(G, intervals, p: float) -> float:
    """sum |G(u) - G(v)|**p / (v - u)**(p-1) over a family of intervals
    with pairwise disjoint interiors (touching endpoints are allowed)."""
    p = float(p)
    if not (math.isfinite(p) and p > 1.0):
        raise InvalidParameterError("p must be a finite real > 1")
    ivs = _validate_intervals(intervals)
    total = 0.0
    for u, v in ivs:
        total += abs(float(G(u)) - float(G(v))) ** p / (v - u) ** (p - 1.0)
    return total


def best_riesz_family(G, endpoints, p: float) -> tuple[float, list[tuple[float, float]]]:
    """Maximal family value over interval families with endpoints drawn
    from the given grid, by exact dynamic programming; returns the value
    and one maximising family."""
    p = float(p)
    if not (math.isfinite(p) and p > 1.0):
        raise InvalidParameterError("p must be a finite real > 1")
    ts = sorted(set(float(t) for t in endpoints))
    K = len(ts)
    if K < 2:
        raise InvalidParameterError("need at least two candidate endpoints")
    gv = np.array([float(G(t)) for t in ts])
    tarr = np.array(ts)
    best = [0.0] * K
    choice: list[tuple[int, int] | None] = [None] * K
    for j in range(1, K):
        b, ch = best[j - 1], None
        for i in range(j):
            cand = best[i] + abs(gv[i] - gv[j]) ** p / (tarr[j] - tarr[i]) ** (p - 1.0)
            if cand > b:
                b, ch = cand, (i, j)
        best[j] = b
        choice[j] = ch
    family = []
    j = K - 1
    while j > 0:
        ch = choice[j]
        if ch is None:
            j -= 1
            continue
        i, jj = ch
        family.append((ts[i], ts[jj]))
        j = i
    family.reverse()
    return best[K - 1], family
