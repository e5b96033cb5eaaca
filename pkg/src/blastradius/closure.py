"""K-hop compromise-probability closure and its two matrix operators.

The model works on the unit interval with ordinary multiplication as step
composition and the probabilistic sum ``x (+) y = 1 - (1-x)(1-y)`` as union.
Matrix composition combines the two:

    (X (x) Y)[i, j] = 1 - prod_m (1 - X[i, m] * Y[m, j])

The first hop counts as pure reachability: the starting state is the
adjacency with a unit diagonal, so direct neighbours are compromised with
certainty and pivot weights in W apply from the second hop on. Each further
hop extends the current state by one pivot step and unions the result with
the base state:

    P[k+1] = P1 (+) (P[k] (x) W)

This accumulates exactly the walks of length <= k+1 (first hop certain, later
steps weighted) without re-counting mass that is already present, is monotone
non-decreasing in k, stays in [0, 1], and converges to the least fixed point
of P = P1 (+) (P (x) W) above P1. A conservative variant replaces the
noisy-OR in both operators with max, which lower-bounds the default mode and
is the right choice when parallel routes are strongly correlated.

Determinism contract: the reduction over the inner index m runs in ascending
order inside each output entry, and parallel execution only splits output
rows across workers, so results are bit-identical for any worker count.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np


class Mode(enum.Enum):
    """Union/composition flavour of the closure."""

    NOISY_OR = "noisy_or"
    MAX_COMPOSE = "max_compose"


@dataclass(frozen=True)
class IterationConfig:
    """Hop cap, early-stopping tolerance, and operator mode for a closure run."""

    max_hops: int
    epsilon: float = 1e-6
    mode: Mode = Mode.NOISY_OR

    def __post_init__(self):
        if not isinstance(self.max_hops, int) or self.max_hops < 1:
            raise ValueError(f"max_hops must be a positive integer, got {self.max_hops!r}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be non-negative, got {self.epsilon!r}")
        if not isinstance(self.mode, Mode):
            raise ValueError(f"mode must be a Mode, got {self.mode!r}")


@dataclass
class ClosureResult:
    """Final matrix plus convergence telemetry.

    hops_run counts executed union steps (the final matrix corresponds to
    hop 1 + hops_run); delta_history holds the max-abs change of each step.
    converged is True iff the last executed step changed the matrix by less
    than epsilon, so a run with max_hops=1 never reports convergence.
    """

    p_final: np.ndarray
    hops_run: int
    converged: bool
    delta_history: list[float] = field(default_factory=list)


def default_hops(n: int) -> int:
    """Default hop cap for an n-asset snapshot."""
    return max(1, n - 1)


def _check_square(m: np.ndarray, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {m.shape}")
    return m


def _check_same_shape(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")


def _check_probabilities(m: np.ndarray, what: str) -> None:
    if m.size and (np.min(m) < 0.0 or np.max(m) > 1.0):
        raise ValueError(f"{what} has entries outside [0, 1]")


def _check_binary(m: np.ndarray, what: str) -> None:
    if not np.all((m == 0.0) | (m == 1.0)):
        raise ValueError(f"{what} must be 0/1 valued")


def _compose_rows(x: np.ndarray, y: np.ndarray, out: np.ndarray, rows: range) -> None:
    # multiply.reduce walks axis 0 in ascending m order, which pins the
    # per-entry float result independently of how rows are distributed.
    for i in rows:
        miss = np.multiply.reduce(1.0 - x[i][:, None] * y, axis=0)
        out[i] = np.clip(1.0 - miss, 0.0, 1.0)


def _max_compose_rows(x: np.ndarray, y: np.ndarray, out: np.ndarray, rows: range) -> None:
    for i in rows:
        out[i] = np.max(x[i][:, None] * y, axis=0)


def _run_rows(kernel, x: np.ndarray, y: np.ndarray, workers: int) -> np.ndarray:
    out = np.empty((x.shape[0], y.shape[1]))
    n_rows = x.shape[0]
    if workers <= 1 or n_rows < 2:
        kernel(x, y, out, range(n_rows))
        return out
    workers = min(workers, n_rows)
    step = -(-n_rows // workers)
    blocks = [range(lo, min(lo + step, n_rows)) for lo in range(0, n_rows, step)]
    with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
        futures = [pool.submit(kernel, x, y, out, block) for block in blocks]
        for fut in futures:
            fut.result()
    return out


def _compose_general(x: np.ndarray, y: np.ndarray, workers: int = 1) -> np.ndarray:
    if x.shape[1] != y.shape[0]:
        raise ValueError(f"inner dimensions differ: {x.shape} vs {y.shape}")
    return _run_rows(_compose_rows, x, y, workers)


def _max_compose_general(x: np.ndarray, y: np.ndarray, workers: int = 1) -> np.ndarray:
    if x.shape[1] != y.shape[0]:
        raise ValueError(f"inner dimensions differ: {x.shape} vs {y.shape}")
    return _run_rows(_max_compose_rows, x, y, workers)


def prob_compose(x: np.ndarray, y: np.ndarray, workers: int = 1) -> np.ndarray:
    """Noisy-OR matrix composition: Z[i,j] = 1 - prod_m (1 - X[i,m] Y[m,j])."""
    x = _check_square(x, "X")
    y = _check_square(y, "Y")
    _check_same_shape(x, y)
    return _compose_general(x, y, workers)


def max_compose(x: np.ndarray, y: np.ndarray, workers: int = 1) -> np.ndarray:
    """Best-single-route composition: Z[i,j] = max_m X[i,m] Y[m,j].

    Lower-bounds prob_compose entrywise; use it when parallel routes through
    different intermediates should not be treated as independent.
    """
    x = _check_square(x, "X")
    y = _check_square(y, "Y")
    _check_same_shape(x, y)
    return _max_compose_general(x, y, workers)


def prob_union(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Elementwise probabilistic sum: 1 - (1-X)(1-Y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_same_shape(x, y)
    return np.clip(1.0 - (1.0 - x) * (1.0 - y), 0.0, 1.0)


def init_p1(a: np.ndarray) -> np.ndarray:
    """Starting state: adjacency with a unit diagonal (first hop is certain)."""
    a = _check_square(a, "A")
    _check_binary(a, "A")
    p1 = a.copy()
    np.fill_diagonal(p1, 1.0)
    return p1


def khop_closure(a: np.ndarray, w: np.ndarray, cfg: IterationConfig,
                 workers: int = 1) -> ClosureResult:
    """Iterate the closure from P1 for at most max_hops total hops.

    Stops early once a step changes no entry by epsilon or more. In
    Mode.MAX_COMPOSE both the composition and the union are replaced by
    elementwise max.
    """
    a = _check_square(a, "A")
    w = _check_square(w, "W")
    _check_same_shape(a, w)
    _check_probabilities(w, "W")
    if np.any(w > a):
        raise ValueError("W must be <= A elementwise (pivot weight without an arc)")

    base = init_p1(a)
    if cfg.mode is Mode.MAX_COMPOSE:
        compose = _max_compose_general
        union = np.maximum
    else:
        compose = _compose_general
        union = prob_union

    current = base
    deltas: list[float] = []
    converged = False
    for _ in range(cfg.max_hops - 1):
        extended = compose(current, w, workers)
        nxt = union(base, extended)
        delta = float(np.max(np.abs(nxt - current))) if nxt.size else 0.0
        deltas.append(delta)
        current = nxt
        if delta < cfg.epsilon:
            converged = True
            break
    return ClosureResult(p_final=current, hops_run=len(deltas),
                         converged=converged, delta_history=deltas)


def bool_reachability(a: np.ndarray, max_hops: int) -> np.ndarray:
    """0/1 reachability within max_hops hops, diagonal included.

    S1 is the adjacency with a unit diagonal; each further hop ORs in paths
    one step longer. Stops early once stable, since the update is idempotent
    from then on.
    """
    a = _check_square(a, "A")
    _check_binary(a, "A")
    if not isinstance(max_hops, int) or max_hops < 1:
        raise ValueError(f"max_hops must be a positive integer, got {max_hops!r}")
    adj = a > 0.0
    s = adj | np.eye(a.shape[0], dtype=bool)
    for _ in range(max_hops - 1):
        nxt = s | ((s.astype(float) @ a) > 0.0)
        if np.array_equal(nxt, s):
            break
        s = nxt
    return s.astype(float)
