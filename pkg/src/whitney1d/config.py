"""Shared tolerance configuration.

Every numerical threshold used by the package lives in a Tolerances record
so that library code, the CLI, and the tests cite one source of truth.
``load_tolerances`` honours the WHITNEY1D_TOLERANCES environment variable,
which may name a JSON file overriding individual fields.
"""
from __future__ import annotations

import dataclasses
import json
import os

ENV_TOLERANCE_FILE = "WHITNEY1D_TOLERANCES"


@dataclasses.dataclass(frozen=True)
class Tolerances:
    continuity_rel: float = 1e-9         # piecewise smoothness matching, scaled by coefficient size
    quadrature_rel: float = 1e-10        # adaptive Gauss-Legendre relative target
    root_tol: float = 1e-12              # bisection width for real-root isolation
    coeff_threshold: float = 1e-12       # coefficients below this (scaled) count as zero
    min_gap_rel: float = 1e-12           # sample sites closer than this times the span are rejected
    jet_match_rel: float = 1e-8          # two-point Hermite jet residual bound
    oracle_continuity_rel: float = 1e-7  # smoothness tolerance for the quadratic-energy spline
    spline_residual_rel: float = 1e-9    # linear-system residual bound for the spline solve
    tail_rel: float = 1e-6               # stop doubling quadrature tails below this relative weight


DEFAULT = Tolerances()

_FIELD_NAMES = {f.name for f in dataclasses.fields(Tolerances)}


def load_tolerances(path: str | None = None) -> Tolerances:
    """Tolerances from a JSON file, or from $WHITNEY1D_TOLERANCES, or defaults.

    Unknown keys in the file are rejected so typos do not silently pass.
    """
    if path is None:
        path = os.environ.get(ENV_TOLERANCE_FILE)
    if not path:
        return DEFAULT
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("tolerance file must contain a JSON object")
    unknown = set(raw) - _FIELD_NAMES
    if unknown:
        raise ValueError(f"unknown tolerance fields: {sorted(unknown)}")
    return dataclasses.replace(DEFAULT, **{k: float(v) for k, v in raw.items()})


def snapshot(tol: Tolerances = DEFAULT) -> dict:
    return dataclasses.asdict(tol)
