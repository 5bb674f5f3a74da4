"""Knot selection: grow a set of nearest neighbours around each sample site.

Starting from an anchor x in the sample set E, repeatedly adjoin the point
of E outside the current set that is closest to the set, breaking distance
ties to the left (any fixed deterministic rule preserves the invariants;
left is this implementation's documented convention).  Every sample site of
a finite set is isolated, so the procedure below never needs a limit-point
escape hatch: knot growth is a purely combinatorial walk on the sorted
sites and always terminates after k steps or when E is exhausted.

The resulting sets are consecutive runs of E containing their anchor, grow
monotonically with the anchor, and two distinct sets built with k steps
have combined diameter at most 2*(k+1) times the distance between their
anchors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .divdiff import SampledFunction
from .errors import InsufficientDataError, InvalidParameterError

__all__ = ["KnotSet", "nearest_outside", "knot_set", "s_sets"]


@dataclass(frozen=True)
class KnotSet:
    """Sorted members around an anchor plus the order they were adjoined.

    ``order_of_addition[j]`` is the index into ``members`` of the point
    added at step j (step 0 is the anchor itself).
    """

    anchor: float
    members: tuple[float, ...]
    order_of_addition: tuple[int, ...]


def _as_sorted_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or len(pts) == 0:
        raise InvalidParameterError("points must be a nonempty 1-d sequence")
    if len(pts) > 1 and np.any(np.diff(pts) <= 0):
        raise InvalidParameterError("points must be strictly increasing")
    return pts


def nearest_outside(points, subset) -> float:
    """Point of ``points`` outside ``subset`` closest to ``subset``.

    Distance of a candidate c is min(|c - a|) over a in subset; ties are
    broken toward the smaller candidate.  Raises if the subset already
    covers all points.
    """
    pts = _as_sorted_points(points)
    sub = np.asarray(sorted(set(float(a) for a in subset)), dtype=float)
    if len(sub) == 0:
        raise InvalidParameterError("subset must be nonempty")
    outside = pts[~np.isin(pts, sub)]
    if len(outside) == 0:
        raise InvalidParameterError("subset exhausts the point set")
    dists = np.min(np.abs(outside[:, None] - sub[None, :]), axis=1)
    best = np.min(dists)
    return float(outside[dists == best][0])


def knot_set(points, x: float, k: int) -> KnotSet:
    """Grow k nearest neighbours around anchor x inside ``points``.

    Stops early if the point set is exhausted, so the result has
    min(k+1, len(points)) members.
    """
    pts = _as_sorted_points(points)
    x = float(x)
    if x not in pts:
        raise InvalidParameterError("anchor must be one of the points")
    if k < 0:
        raise InvalidParameterError("number of growth steps must be >= 0")
    chosen = [x]
    for _ in range(k):
        if len(chosen) == len(pts):
            break
        chosen.append(nearest_outside(pts, chosen))
    members = tuple(sorted(chosen))
    order = tuple(members.index(c) for c in chosen)
    return KnotSet(anchor=x, members=members, order_of_addition=order)


def s_sets(f: SampledFunction, m: int) -> list[KnotSet]:
    """The m-point knot set around every sample site (m-1 growth steps)."""
    if m < 1:
        raise InvalidParameterError("order m must be >= 1")
    if len(f) < m:
        raise InsufficientDataError(f"need at least {m} points for order {m}")
    return [knot_set(f.points, float(x), m - 1) for x in f.points]
