"""Quadratic-energy oracle: the interpolant minimising the L2 norm of the
m-th derivative.

The minimiser is the natural spline of order 2m: degree 2m-1 between the
sites, 2m-2 continuous derivatives, and derivatives m..2m-2 vanishing at
the outer sites so the extension beyond the span is a polynomial of degree
<= m-1.  The solve is a square collocation system in a B-spline basis.
On meshes mixing tight clusters with wide gaps the minimiser can overshoot
enormously and the coefficient vector spans many orders of magnitude, so
an equilibrated float64 solve is validated (residual, interpolation,
junction smoothness) and on failure the whole pipeline - basis assembly,
solve, and jet extraction - is redone in arbitrary-precision arithmetic.
The squared seminorm integral is then evaluated exactly piece by piece.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BSpline

from .config import DEFAULT, Tolerances
from .divdiff import SampledFunction
from .errors import InsufficientDataError, InvalidParameterError, NumericalFailureError
from .poly import PiecewisePolynomial, Polynomial, lp_piece_integral

__all__ = ["SplineSolution", "natural_spline_p2", "optimality_check"]

# equilibrated condition number beyond which float64 is not attempted
_COND_LIMIT = 1e12
_MP_DPS = 60


@dataclass(frozen=True)
class SplineSolution:
    """Minimising interpolant, its exact squared seminorm, and solve diagnostics."""

    F: PiecewisePolynomial
    seminorm_sq: float
    system_condition: float
    residual: float
    method: str = "float64"


def _basis_matrix(t: np.ndarray, k: int, nb: int, xs: np.ndarray, order: int) -> np.ndarray:
    """Rows of basis-function derivatives of the given order at the points xs."""
    spl = BSpline(t, np.eye(nb), k, extrapolate=True)
    if order:
        spl = spl.derivative(order)
    out = spl(xs)
    return np.atleast_2d(out)


def _piece_from_spline(spl: BSpline, u: float, v: float, k: int) -> Polynomial:
    """The polynomial piece of spl on [u, v], centered at u.

    Derivatives below the top order are continuous across simple knots and
    are read directly at u (evaluation at a knot takes the span to its
    right); the top derivative is constant on the span and is read at the
    midpoint.  Expanding about u avoids shifting a Taylor polynomial
    across a wide span, which cancels catastrophically.
    """
    mid = 0.5 * (u + v)
    coeffs = []
    d = spl
    for j in range(k + 1):
        t_eval = u if j < k else mid
        coeffs.append(float(d(t_eval)) / math.factorial(j))
        if j < k:
            d = d.derivative()
    return Polynomial(coeffs, center=u)


def _assemble(x: np.ndarray, y: np.ndarray, m: int):
    n = len(x)
    k = 2 * m - 1
    t = np.concatenate([np.full(2 * m, x[0]), x[1:-1], np.full(2 * m, x[-1])])
    nb = len(t) - k - 1  # equals n + 2m - 2
    A = np.zeros((nb, nb))
    b = np.zeros(nb)
    row = 0
    for d in range(m, 2 * m - 1):
        A[row] = _basis_matrix(t, k, nb, np.array([x[0]]), d)[0]
        row += 1
    A[row:row + n] = _basis_matrix(t, k, nb, x, 0)
    b[row:row + n] = y
    row += n
    for d in range(m, 2 * m - 1):
        A[row] = _basis_matrix(t, k, nb, np.array([x[-1]]), d)[0]
        row += 1
    return A, b, t, k, nb


def _double_route(A, b, t, k, x, m, tol):
    """Equilibrated float64 solve with one refinement step; returns the
    glued interpolant, or raises NumericalFailureError when precision is
    insufficient for the validation gates."""
    dr = 1.0 / np.maximum(np.max(np.abs(A), axis=1), 1e-300)
    A1 = A * dr[:, None]
    dc = 1.0 / np.maximum(np.max(np.abs(A1), axis=0), 1e-300)
    A2 = A1 * dc[None, :]
    cond = float(np.linalg.cond(A2))
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise NumericalFailureError(f"equilibrated condition {cond:.3e} too large")
    try:
        coef = np.linalg.solve(A2, b * dr) * dc
        coef = coef + np.linalg.solve(A2, (b - A @ coef) * dr) * dc
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"spline system is singular: {exc}") from exc
    scale = np.linalg.norm(A, np.inf) * np.linalg.norm(coef, np.inf) + np.linalg.norm(b, np.inf)
    residual = float(np.linalg.norm(A @ coef - b, np.inf) / scale)
    if residual > tol.spline_residual_rel:
        raise NumericalFailureError(f"spline solve residual {residual:.3e} too large")
    spl = BSpline(t, coef, k, extrapolate=True)
    ders = [spl]
    for _ in range(k):
        ders.append(ders[-1].derivative())
    n = len(x)
    interior = []
    for i in range(n - 1):
        u, v = float(x[i]), float(x[i + 1])
        mid = 0.5 * (u + v)
        coeffs = [float(ders[j](u)) / math.factorial(j) for j in range(k)]
        coeffs.append(float(ders[k](mid)) / math.factorial(k))
        interior.append(Polynomial(coeffs, center=u))
    outer_left = Polynomial(interior[0].coeffs[:m], center=float(x[0]))
    right_jet = [float(ders[j](float(x[-1]))) / math.factorial(j) for j in range(m)]
    outer_right = Polynomial(right_jet, center=float(x[-1]))
    F = PiecewisePolynomial(
        x, [outer_left] + interior + [outer_right], 2 * m - 2,
        rel=tol.oracle_continuity_rel,
    )
    return F, interior, cond, residual


def _mp_basis_point(t_mp, x_mp, at_right_end: bool):
    """Memoized B-spline basis derivative values at one point, in mpmath.

    Evaluation is right-continuous (a knot belongs to the span on its
    right) except at the global right end, where the last nonempty span
    is used.
    """
    from mpmath import mpf

    zero = mpf(0)
    one = mpf(1)
    L = len(t_mp)
    memo = {}

    def B(i, j, d):
        if i < 0 or i + j + 1 >= L:
            return zero
        key = (i, j, d)
        v = memo.get(key)
        if v is not None:
            return v
        if j == 0:
            if d > 0:
                v = zero
            elif at_right_end:
                v = one if (t_mp[i] < x_mp <= t_mp[i + 1]) else zero
            else:
                v = one if (t_mp[i] <= x_mp < t_mp[i + 1]) else zero
        elif d > 0:
            v = zero
            den1 = t_mp[i + j] - t_mp[i]
            if den1 > 0:
                v = v + j * B(i, j - 1, d - 1) / den1
            den2 = t_mp[i + j + 1] - t_mp[i + 1]
            if den2 > 0:
                v = v - j * B(i + 1, j - 1, d - 1) / den2
        else:
            v = zero
            den1 = t_mp[i + j] - t_mp[i]
            if den1 > 0:
                v = v + (x_mp - t_mp[i]) / den1 * B(i, j - 1, 0)
            den2 = t_mp[i + j + 1] - t_mp[i + 1]
            if den2 > 0:
                v = v + (t_mp[i + j + 1] - x_mp) / den2 * B(i + 1, j - 1, 0)
        memo[key] = v
        return v

    return B


def _mp_route(x, y, m, t, k, nb, tol):
    """Full-precision pipeline: assembly, solve, and jet extraction in
    mpmath, with only the final per-piece jets rounded to float."""
    from mpmath import mp, mpf, matrix, lu_solve, norm

    n = len(x)
    with mp.workdps(_MP_DPS):
        t_mp = [mpf(float(v)) for v in t]
        caches = {}

        def basis_at(xv):
            key = float(xv)
            fn = caches.get(key)
            if fn is None:
                fn = _mp_basis_point(t_mp, mpf(key), at_right_end=(key == float(x[-1])))
                caches[key] = fn
            return fn

        rows = []
        rhs = []
        for d in range(m, 2 * m - 1):
            rows.append((float(x[0]), d))
            rhs.append(mpf(0))
        for xi, yi in zip(x, y):
            rows.append((float(xi), 0))
            rhs.append(mpf(float(yi)))
        for d in range(m, 2 * m - 1):
            rows.append((float(x[-1]), d))
            rhs.append(mpf(0))
        A = matrix(nb, nb)
        for r, (xv, d) in enumerate(rows):
            Bfn = basis_at(xv)
            for i in range(nb):
                A[r, i] = Bfn(i, k, d)
        bvec = matrix(rhs)
        try:
            coef = lu_solve(A, bvec)
        except ZeroDivisionError as exc:
            raise NumericalFailureError(f"spline system is singular: {exc}") from exc
        res = A * coef - bvec
        scale = norm(A, "inf") * norm(coef, "inf") + norm(bvec, "inf")
        residual = float(norm(res, "inf") / scale) if scale > 0 else 0.0

        def spline_deriv(xv, d, fn=None):
            Bfn = fn if fn is not None else basis_at(xv)
            return sum(coef[i] * Bfn(i, k, d) for i in range(nb))

        interior = []
        for i in range(n - 1):
            u, v = float(x[i]), float(x[i + 1])
            mid = 0.5 * (u + v)
            fn_u = basis_at(u)
            fn_mid = basis_at(mid)
            coeffs = [
                float(spline_deriv(u, j, fn_u) / math.factorial(j))
                for j in range(k)
            ]
            coeffs.append(float(spline_deriv(mid, k, fn_mid) / math.factorial(k)))
            interior.append(Polynomial(coeffs, center=u))
        fn_r = basis_at(float(x[-1]))
        right_jet = [
            float(spline_deriv(float(x[-1]), j, fn_r) / math.factorial(j))
            for j in range(m)
        ]
    outer_left = Polynomial(interior[0].coeffs[:m], center=float(x[0]))
    outer_right = Polynomial(right_jet, center=float(x[-1]))
    F = PiecewisePolynomial(
        x, [outer_left] + interior + [outer_right], 2 * m - 2,
        rel=tol.oracle_continuity_rel,
    )
    return F, interior, residual


def natural_spline_p2(f: SampledFunction, m: int,
                      tol: Tolerances = DEFAULT) -> SplineSolution:
    """Solve for the minimiser of integral (F^(m))**2 among interpolants."""
    if m < 1:
        raise InvalidParameterError("order m must be >= 1")
    n = len(f)
    if n < m + 1:
        raise InsufficientDataError(f"need at least {m + 1} points for order {m}")
    x = f.points
    y = f.values
    A, b, t, k, nb = _assemble(x, y, m)
    yscale = max(1.0, float(np.max(np.abs(y))))
    method = "float64"
    try:
        F, interior, cond, residual = _double_route(A, b, t, k, x, m, tol)
        interp_defect = float(np.max(np.abs(F(x) - y))) / yscale
        if interp_defect > tol.oracle_continuity_rel:
            raise NumericalFailureError(
                f"interpolation defect {interp_defect:.3e} too large"
            )
    except NumericalFailureError:
        F, interior, residual = _mp_route(x, y, m, t, k, nb, tol)
        method = "mpmath"
        dr = 1.0 / np.maximum(np.max(np.abs(A), axis=1), 1e-300)
        A1 = A * dr[:, None]
        dc = 1.0 / np.maximum(np.max(np.abs(A1), axis=0), 1e-300)
        cond = float(np.linalg.cond(A1 * dc[None, :]))
        interp_defect = float(np.max(np.abs(F(x) - y))) / yscale
        if interp_defect > tol.oracle_continuity_rel:
            raise NumericalFailureError(
                f"interpolation defect {interp_defect:.3e} persists at "
                f"{_MP_DPS} digits"
            )
    sq = 0.0
    for i, piece in enumerate(interior):
        sq += lp_piece_integral(piece.derivative(m), float(x[i]), float(x[i + 1]), 2, tol)
    return SplineSolution(F=F, seminorm_sq=sq, system_condition=cond,
                          residual=residual, method=method)


def _product_integral(P: Polynomial, Q: Polynomial, a: float, b: float) -> float:
    """Exact integral of P*Q over [a, b]."""
    R = P * Q
    anti = R.antiderivative()
    return float(anti(b) - anti(a))


def _bump_inside(u: float, v: float, m: int, rng) -> PiecewisePolynomial:
    """A smooth bump of degree 2m-1 supported strictly inside (u, v)."""
    k = 2 * m - 1
    inner = np.sort(rng.uniform(u + 0.05 * (v - u), v - 0.05 * (v - u), k + 2))
    while np.min(np.diff(inner)) <= 1e-9 * (v - u):
        inner = np.sort(rng.uniform(u + 0.05 * (v - u), v - 0.05 * (v - u), k + 2))
    spl = BSpline.basis_element(inner, extrapolate=False)
    zero = Polynomial(())
    pieces = [zero]
    for i in range(len(inner) - 1):
        pieces.append(_piece_from_spline(spl, float(inner[i]), float(inner[i + 1]), k))
    pieces.append(zero)
    return PiecewisePolynomial(inner, pieces, k - 1, rel=1e-6)


def optimality_check(sol: SplineSolution, f: SampledFunction, m: int,
                     trials: int = 20, seed: int = 0,
                     tol: Tolerances = DEFAULT) -> float:
    """Worst achievable relative decrease of the squared seminorm along
    random feasible bump directions (perturbations vanishing at the sites).

    For the perturbation family F + s*eta the energy is quadratic in s, so
    the largest possible decrease is g**2 / |eta|**2 with g the cross term
    integral of F^(m) * eta^(m); a genuine minimiser keeps this at rounding
    level.  Returns the worst relative decrease observed.
    """
    if trials < 1:
        raise InvalidParameterError("need at least one trial")
    rng = np.random.default_rng(seed)
    x = f.points
    n = len(x)
    if n < 2:
        raise InsufficientDataError("optimality check needs at least one gap")
    worst = 0.0
    denom = sol.seminorm_sq if sol.seminorm_sq > 0 else 1.0
    for _ in range(trials):
        g = int(rng.integers(0, n - 1))
        u, v = float(x[g]), float(x[g + 1])
        eta = _bump_inside(u, v, m, rng)
        scale = float(rng.uniform(0.5, 2.0))
        eta = PiecewisePolynomial(
            eta.breakpoints,
            [scale * q for q in eta.pieces],
            eta.declared_smoothness, validate=False,
        )
        cross = 0.0
        eta_sq = 0.0
        Fg = sol.F.pieces[g + 1]  # the piece covering this gap
        dFm = Fg.derivative(m)
        for left, right, piece in eta.piece_intervals():
            if math.isinf(left) or math.isinf(right):
                continue
            dEm = piece.derivative(m).recenter(dFm.center)
            cross += _product_integral(dFm, dEm, left, right)
            eta_sq += lp_piece_integral(piece.derivative(m), left, right, 2, tol)
        if eta_sq <= 0:
            continue
        worst = max(worst, (cross * cross / eta_sq) / denom)
    return worst
