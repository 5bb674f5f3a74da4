"""Randomized end-to-end checks runnable without the test suite.

Generates data sets with gaps spread over six decades, runs the extension
and the functionals on each, and verifies the invariants that hold with
mathematical certainty: interpolation, smoothness of the glued result,
the factor-2 bound of the subsequence functional by the seminorm, the
factor-e bound of the jet functional, the uniform-norm bracket, the p=2
optimal-seminorm sandwich, and the sharp-maximal two-sided comparison.
A fault-injection switch breaks one glue polynomial on purpose to confirm
the smoothness check actually fires.
"""
from __future__ import annotations

import math

import numpy as np

from .config import DEFAULT, Tolerances
from .divdiff import (
    SampledFunction,
    consecutive_divided_differences,
    divided_difference,
    divided_difference_sum_form,
    n_infty_functional,
)
from .extension import whitney_extend
from .functionals import (
    SharpMaximal,
    constants_table,
    variational_functional,
)
from .jets import jet_functional
from .oracle import natural_spline_p2
from .poly import Polynomial, PiecewisePolynomial, seminorm_lmp

__all__ = ["random_instance", "random_suite", "run_selftest"]


def random_instance(rng: np.random.Generator, m: int, n: int,
                    gap_range: tuple = (1e-3, 1e3),
                    value_range: tuple = (-10.0, 10.0)) -> SampledFunction:
    """Data set with log-uniform gaps and uniform values."""
    lo, hi = math.log(gap_range[0]), math.log(gap_range[1])
    gaps = np.exp(rng.uniform(lo, hi, size=n - 1))
    x = float(rng.uniform(-5.0, 5.0)) + np.concatenate([[0.0], np.cumsum(gaps)])
    v = rng.uniform(value_range[0], value_range[1], size=n)
    return SampledFunction(x, v)


def random_suite(seed: int, count: int, ms: tuple = (1, 2, 3, 4),
                 n_max: int = 30) -> list:
    """List of (m, SampledFunction) pairs, deterministic in the seed."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        m = int(rng.choice(ms))
        n = int(rng.integers(m + 1, n_max + 1))
        out.append((m, random_instance(rng, m, n)))
    return out


def _check(record: dict, failures: list, name: str, ok: bool, detail: str = ""):
    record[name] = bool(ok)
    if not ok:
        failures.append(f"{name}: {detail}")


def _inject_fault(F: PiecewisePolynomial) -> PiecewisePolynomial:
    """Perturb one interior piece so the glued function loses continuity."""
    pieces = list(F.pieces)
    k = len(pieces) // 2
    bad = list(pieces[k].coeffs) or [0.0]
    # shifting the constant term breaks the value match at both junctions
    bad[0] += 0.37 * max(1.0, abs(bad[0]))
    pieces[k] = Polynomial(bad, center=pieces[k].center)
    return PiecewisePolynomial(np.asarray(F.breakpoints), pieces,
                               F.declared_smoothness, validate=False)


def run_selftest(seed: int = 0, instances: int = 40, *,
                 with_oracle: bool = True,
                 inject_smoothness_fault: bool = False,
                 tol: Tolerances = DEFAULT) -> dict:
    """Run the invariant checks; returns a summary dict with ``passed``,
    ``failures``, per-(m, p) empirical equivalence ratios, and the
    constants table values for m = 1..4."""
    failures: list = []
    checks: dict = {}
    suite = random_suite(seed, instances)
    ps = (1.5, 2.0, 3.0)
    ratio_tally: dict = {}

    interp_worst = 0.0
    smooth_worst = 0.0
    necessity_worst = 0.0
    jet_worst = 0.0
    bracket_worst = 0.0
    oracle_worst = 0.0
    sandwich_bad = 0
    fault_detected = None

    rng = np.random.default_rng(seed + 1)
    for m, f in suite:
        ext = whitney_extend(f, m, tol=tol)
        F = ext.F
        vals = F(f.points)
        scale = max(1.0, float(np.max(np.abs(f.values))))
        interp_worst = max(interp_worst, float(np.max(np.abs(vals - f.values))) / scale)
        smooth_worst = max(smooth_worst, F.continuity_defect())
        if inject_smoothness_fault and fault_detected is None:
            if len(F.pieces) >= 3:
                fault_detected = _inject_fault(F).continuity_defect() > 10 * tol.continuity_rel

        upper_inf = seminorm_lmp(F, m, math.inf, tol)
        lower_inf = math.factorial(m) * n_infty_functional(f, m)
        if upper_inf > 0:
            bracket_worst = max(bracket_worst, lower_inf / upper_inf)

        for p in ps:
            S = seminorm_lmp(F, m, p, tol)
            if m <= 3 and len(f) <= 40:
                N = variational_functional(f, m, p, "exact_dp")
            else:
                N = variational_functional(f, m, p, "full_sequence")
            J = jet_functional(ext.field, p, "exact_sup")
            if S > 0:
                necessity_worst = max(necessity_worst, N / S)
                jet_worst = max(jet_worst, J / S)
                key = (m, p)
                ratio_tally.setdefault(key, []).append(N / S)
            if with_oracle and p == 2.0 and len(f) >= m + 1:
                sol = natural_spline_p2(f, m, tol)
                O = math.sqrt(max(sol.seminorm_sq, 0.0))
                if O > 0:
                    oracle_worst = max(oracle_worst, max(N / (2 * O), O / max(S, 1e-300)))

        sharp = SharpMaximal(f, m)
        ts = rng.uniform(f.points[0] - f.span, f.points[-1] + f.span, size=8)
        a = sharp.at(ts)
        b = sharp.alternative_at(ts)
        bad = np.sum((b < a * (1 - 1e-9)) | (b > 2 * a * (1 + 1e-9)))
        sandwich_bad += int(bad)

    _check(checks, failures, "interpolation", interp_worst <= 1e-8,
           f"worst relative defect {interp_worst:.3e}")
    _check(checks, failures, "smoothness", smooth_worst <= 1e-7,
           f"worst junction defect {smooth_worst:.3e}")
    _check(checks, failures, "necessity_factor_2", necessity_worst <= 2.0 * (1 + 1e-8),
           f"worst ratio {necessity_worst:.6f}")
    _check(checks, failures, "jet_factor_e", jet_worst <= math.e * (1 + 1e-8),
           f"worst ratio {jet_worst:.6f}")
    _check(checks, failures, "uniform_bracket", bracket_worst <= 1.0 + 1e-8,
           f"worst lower/upper {bracket_worst:.6f}")
    if with_oracle:
        _check(checks, failures, "p2_oracle_sandwich", oracle_worst <= 1.0 + 1e-8,
               f"worst normalized ratio {oracle_worst:.6f}")
    _check(checks, failures, "sharp_sandwich", sandwich_bad == 0,
           f"{sandwich_bad} points outside [sharp, 2 sharp]")

    g = SampledFunction([0.0, 0.4, 1.1, 2.7], [3.0, -1.0, 4.0, 0.5])
    table = divided_difference(g.points, g.values)
    sumform = divided_difference_sum_form(g.points, g.values)
    _check(checks, failures, "divided_difference_routes",
           abs(table - sumform) <= 1e-10 * max(1.0, abs(table)),
           f"table {table} vs sum {sumform}")
    cubes = SampledFunction([0.0, 1.0, 2.0, 3.0, 4.0], [0.0, 1.0, 8.0, 27.0, 64.0])
    dd3 = consecutive_divided_differences(cubes, 3)
    _check(checks, failures, "monomial_identity",
           bool(np.all(np.abs(dd3 - 1.0) <= 1e-12)),
           f"third differences of cubes {dd3}")

    consts = {m: constants_table(m) for m in (1, 2, 3, 4)}
    _check(checks, failures, "constants_exact",
           abs(consts[1].theta - 1.0) <= 1e-12
           and abs(consts[2].theta - 2.0) <= 1e-12
           and consts[1].finiteness_exact == 1.0
           and consts[2].finiteness_exact == 2.0,
           "theta or finiteness constants off their exact values")

    if inject_smoothness_fault:
        _check(checks, failures, "fault_detected", bool(fault_detected),
               "injected coefficient fault was not flagged by the smoothness check")

    empirical = {
        f"m={m},p={p}": {
            "count": len(v),
            "max": float(np.max(v)),
            "mean": float(np.mean(v)),
        }
        for (m, p), v in sorted(ratio_tally.items())
    }
    return {
        "passed": not failures,
        "failures": failures,
        "checks": checks,
        "empirical_necessity_ratio": empirical,
        "constants": {
            m: {
                "finiteness_lower": c.finiteness_lower,
                "finiteness_upper": c.finiteness_upper,
                "theta": c.theta,
                "deboor_upper": c.deboor_upper,
            }
            for m, c in consts.items()
        },
        "instances": instances,
        "seed": seed,
    }
