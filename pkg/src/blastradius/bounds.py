"""Analytic envelopes for the closure: series and Neumann upper bounds,
spectral radius, and the best-single-path lower bound.

The closure never exceeds the plain walk sum U_K = A + AW + ... + AW^(K-1)
(ordinary matrix arithmetic, entries may exceed 1 before capping), and when
the spectral radius of W is below 1 the infinite-hop series closes to
A (I - W)^{-1}. In the other direction, any single path of length L <= K
already succeeds with the product of its L-1 pivot weights, so the maximum
such product lower-bounds the closure. Together they sandwich every
off-diagonal entry without running the iteration.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .closure import _check_square, _check_same_shape

logger = logging.getLogger(__name__)

_POWER_ITERATIONS = 1000
_POWER_TOL = 1e-10
_NEUMANN_MARGIN = 1e-9


@dataclass(frozen=True)
class BestPathResult:
    """Best single path for one (src, dst) pair: pivot product, hops, path."""

    value: float
    hops: int
    path: tuple[int, ...]


@dataclass
class BoundsReport:
    """Bounds bundle for one (A, W, K) instance.

    u_k is the raw walk-sum series (uncapped, so slack above 1 is visible),
    u_k_capped its elementwise min with 1, u_inf the infinite-hop bound when
    the spectral radius permits it, and lower the best-single-path products
    with a unit diagonal.
    """

    u_k: np.ndarray
    u_k_capped: np.ndarray
    u_inf: np.ndarray | None
    spectral_radius: float
    lower: np.ndarray


def series_upper_bound(a: np.ndarray, w: np.ndarray, max_hops: int) -> np.ndarray:
    """Walk-sum series A + AW + ... + AW^(max_hops-1), ordinary arithmetic."""
    a = _check_square(a, "A")
    w = _check_square(w, "W")
    _check_same_shape(a, w)
    if not isinstance(max_hops, int) or max_hops < 1:
        raise ValueError(f"max_hops must be a positive integer, got {max_hops!r}")
    total = a.copy()
    term = a
    for _ in range(max_hops - 1):
        term = term @ w
        total += term
    return total


def _has_cycle(support: np.ndarray) -> bool:
    # Reachability by repeated boolean squaring; a cycle shows up on the
    # diagonal of the closure.
    reach = support.copy()
    for _ in range(max(1, int(np.ceil(np.log2(max(2, reach.shape[0])))) + 1)):
        if reach.diagonal().any():
            return True
        grown = reach | ((reach.astype(float) @ reach.astype(float)) > 0.0)
        if np.array_equal(grown, reach):
            break
        reach = grown
    return bool(reach.diagonal().any())


def spectral_radius(w: np.ndarray) -> float:
    """Largest eigenvalue magnitude of a non-negative matrix.

    Power iteration with a deterministic all-ones start. Iterating on W + I
    instead of W keeps the iterate strictly positive (no zero-vector
    restarts) and makes periodic supports converge; the shift moves the
    dominant eigenvalue by exactly 1. Matrices whose support has no directed
    cycle are nilpotent and report exactly 0.
    """
    w = _check_square(w, "W")
    n = w.shape[0]
    if n == 0:
        return 0.0
    if np.min(w) < 0.0:
        raise ValueError("spectral_radius expects a non-negative matrix")
    if not _has_cycle(w > 0.0):
        return 0.0

    shifted = w + np.eye(n)
    x = np.ones(n)
    estimate = 0.0
    for iteration in range(_POWER_ITERATIONS):
        y = shifted @ x
        # Collatz-Wielandt upper ratio; x stays positive because the shifted
        # diagonal is at least 1.
        ratios = y / x
        new_estimate = float(np.max(ratios))
        x = y / np.max(y)
        if (iteration >= 30
                and abs(new_estimate - estimate) <= _POWER_TOL * max(1.0, new_estimate)):
            estimate = new_estimate
            break
        estimate = new_estimate
    return max(0.0, estimate - 1.0)


def neumann_upper_bound(a: np.ndarray, w: np.ndarray) -> np.ndarray | None:
    """Infinite-hop bound A (I - W)^{-1}, or None when the series diverges.

    Requires the spectral radius of W to sit below 1 by a small margin; a
    singular solve is reported and treated the same as a diverging series.
    """
    a = _check_square(a, "A")
    w = _check_square(w, "W")
    _check_same_shape(a, w)
    if spectral_radius(w) >= 1.0 - _NEUMANN_MARGIN:
        return None
    eye = np.eye(w.shape[0])
    try:
        # X (I - W) = A  solved without forming the inverse.
        return np.linalg.solve((eye - w).T, a.T).T
    except np.linalg.LinAlgError as exc:
        logger.warning("infinite-hop bound unavailable: linear solve failed (%s)", exc)
        return None


def best_path_lower_bound(
    a: np.ndarray, w: np.ndarray, max_hops: int
) -> tuple[np.ndarray, dict[tuple[int, int], BestPathResult]]:
    """Best single-path pivot product for every pair, within a hop cap.

    The first hop only needs an arc in A (it succeeds with certainty); each
    later step multiplies in its W weight. Search is a layered max-product
    relaxation; ties prefer fewer hops, then the lexicographically smallest
    path, so reports are reproducible. Returns the value matrix (unit
    diagonal) and per-pair details for every pair with a positive bound.
    """
    a = _check_square(a, "A")
    w = _check_square(w, "W")
    _check_same_shape(a, w)
    if not isinstance(max_hops, int) or max_hops < 1:
        raise ValueError(f"max_hops must be a positive integer, got {max_hops!r}")
    n = a.shape[0]
    values = np.zeros((n, n))
    np.fill_diagonal(values, 1.0)
    details: dict[tuple[int, int], BestPathResult] = {}

    for src in range(n):
        # best[j] = (value, hops, path); only states improved in the previous
        # layer can produce a new best in the next one.
        best: dict[int, tuple[float, int, tuple[int, ...]]] = {}
        frontier: list[int] = []
        for j in range(n):
            if j != src and a[src, j] > 0.0:
                best[j] = (1.0, 1, (src, j))
                frontier.append(j)
        for hop in range(2, max_hops + 1):
            updates: dict[int, tuple[float, int, tuple[int, ...]]] = {}
            for m in frontier:
                value_m, _, path_m = best[m]
                row = w[m]
                for j in range(n):
                    weight = row[j]
                    if weight <= 0.0 or j == src:
                        continue
                    candidate = value_m * weight
                    current = updates.get(j, best.get(j))
                    if current is None or candidate > current[0]:
                        updates[j] = (candidate, hop, path_m + (j,))
                    elif (candidate == current[0] and current[1] == hop
                          and path_m + (j,) < current[2]):
                        updates[j] = (candidate, hop, path_m + (j,))
            frontier = []
            for j, entry in updates.items():
                prior = best.get(j)
                if prior is None or entry[0] > prior[0]:
                    best[j] = entry
                    frontier.append(j)
            if not frontier:
                break
        for j, (value, hops, path) in best.items():
            values[src, j] = value
            details[(src, j)] = BestPathResult(value=value, hops=hops, path=path)
    return values, details


def compute_bounds(a: np.ndarray, w: np.ndarray, max_hops: int) -> BoundsReport:
    """Assemble the full bounds bundle for one instance."""
    u_k = series_upper_bound(a, w, max_hops)
    rho = spectral_radius(w)
    u_inf = neumann_upper_bound(a, w) if rho < 1.0 - _NEUMANN_MARGIN else None
    lower, _ = best_path_lower_bound(a, w, max_hops)
    return BoundsReport(
        u_k=u_k,
        u_k_capped=np.minimum(1.0, u_k),
        u_inf=u_inf,
        spectral_radius=rho,
        lower=lower,
    )
