"""Sampled functions, divided differences, and the sup-type trace bracket."""
from __future__ import annotations

import math

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (
    DuplicatePointsError,
    InsufficientDataError,
    InvalidParameterError,
)
from .poly import Polynomial

__all__ = [
    "SampledFunction",
    "divided_difference",
    "divided_difference_sum_form",
    "consecutive_divided_differences",
    "lagrange",
    "n_infty_functional",
    "linfty_trace_bracket",
]


class SampledFunction:
    """Strictly increasing sample sites with one value per site.

    Construction rejects unsorted or duplicated sites, and sites closer
    than ``min_gap_rel`` times the span, since later stages divide by the
    gaps.  The stored arrays are read-only.
    """

    __slots__ = ("points", "values")

    def __init__(self, points, values, *, tol: Tolerances = DEFAULT):
        pts = np.asarray(points, dtype=float)
        vals = np.asarray(values, dtype=float)
        if pts.ndim != 1 or vals.ndim != 1:
            raise InvalidParameterError("points and values must be one-dimensional")
        if pts.shape != vals.shape:
            raise InvalidParameterError("points and values must have equal length")
        if len(pts) < 1:
            raise InsufficientDataError("need at least one sample point")
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(vals)):
            raise InvalidParameterError("points and values must be finite")
        if len(pts) >= 2:
            gaps = np.diff(pts)
            if np.any(gaps <= 0):
                raise DuplicatePointsError("sample points must be strictly increasing")
            span = pts[-1] - pts[0]
            if np.min(gaps) < tol.min_gap_rel * span:
                raise DuplicatePointsError(
                    "sample points closer than the minimal-gap guard"
                )
        pts = pts.copy()
        vals = vals.copy()
        pts.flags.writeable = False
        vals.flags.writeable = False
        self.points = pts
        self.values = vals

    def __len__(self) -> int:
        return len(self.points)

    @property
    def span(self) -> float:
        return float(self.points[-1] - self.points[0])

    def __repr__(self):
        return f"SampledFunction(n={len(self)}, span={self.span:.6g})"


def _sorted_pairs(points, values):
    pts = np.asarray(points, dtype=float)
    vals = np.asarray(values, dtype=float)
    if pts.ndim != 1 or pts.shape != vals.shape:
        raise InvalidParameterError("points and values must be 1-d and equally long")
    order = np.argsort(pts, kind="stable")
    pts = pts[order]
    vals = vals[order]
    if len(pts) > 1 and np.any(np.diff(pts) == 0):
        raise DuplicatePointsError("divided difference requires distinct points")
    return pts, vals


def divided_difference(points, values) -> float:
    """k-th order divided difference over k+1 distinct points.

    Computed by the standard recursive table on the sorted points; the
    value is symmetric under permutations of the input pairs.
    """
    pts, vals = _sorted_pairs(points, values)
    t = vals.copy()
    n = len(pts)
    for k in range(1, n):
        t = (t[1:] - t[:-1]) / (pts[k:] - pts[:-k])
    return float(t[0])


def divided_difference_sum_form(points, values) -> float:
    """Independent route: sum of values[i] / prod_{j != i}(x_i - x_j)."""
    pts, vals = _sorted_pairs(points, values)
    total = 0.0
    for i in range(len(pts)):
        w = np.prod(pts[i] - np.delete(pts, i))
        total += vals[i] / w
    return float(total)


def consecutive_divided_differences(f: SampledFunction, m: int) -> np.ndarray:
    """All m-th divided differences over consecutive windows, length n-m."""
    if m < 0:
        raise InvalidParameterError("order must be >= 0")
    if len(f) < m + 1:
        raise InsufficientDataError(f"need at least {m + 1} points for order {m}")
    t = f.values.copy()
    x = f.points
    for k in range(1, m + 1):
        t = (t[1:] - t[:-1]) / (x[k:] - x[:-k])
    return t


def lagrange(points, values, center: float = 0.0) -> Polynomial:
    """Interpolating polynomial through the given pairs, about ``center``.

    Built in Newton form on the sorted points and expanded to the centered
    monomial basis; the leading (degree-k) coefficient is the k-th divided
    difference.
    """
    pts, vals = _sorted_pairs(points, values)
    n = len(pts)
    # Newton coefficients: first row of the divided-difference table.
    newton = [float(vals[0])]
    t = vals.copy()
    for k in range(1, n):
        t = (t[1:] - t[:-1]) / (pts[k:] - pts[:-k])
        newton.append(float(t[0]))
    nodes = pts - center
    coeffs = [newton[-1]]
    for j in range(n - 2, -1, -1):
        nxt = [0.0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= nodes[j] * c
        nxt[0] += newton[j]
        coeffs = nxt
    return Polynomial(coeffs, center)


def n_infty_functional(f: SampledFunction, m: int) -> float:
    """Largest |m-th divided difference| over consecutive windows.

    By convexity of the point sets this equals the maximum over all
    (m+1)-point subsets.
    """
    if m < 1:
        raise InvalidParameterError("order m must be >= 1")
    return float(np.max(np.abs(consecutive_divided_differences(f, m))))


def linfty_trace_bracket(f: SampledFunction, m: int) -> tuple[float, float]:
    """Lower and upper bounds for the uniform-norm trace seminorm.

    lower = m! * max consecutive |m-th divided difference| and
    upper = sup |F^(m)| of the constructed extension; the true seminorm of
    any interpolant lies in [lower, upper].
    """
    from .extension import whitney_extend
    from .poly import seminorm_lmp

    lower = float(math.factorial(m)) * n_infty_functional(f, m)
    upper = seminorm_lmp(whitney_extend(f, m).F, m, math.inf)
    return lower, upper
