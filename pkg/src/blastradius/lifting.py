"""Exact land-then-pivot semantics via (node, landing-class) state lifting.

The node-level model loses how a host was reached, yet the pivot probability
of the next step depends on it: an interactive foothold (RDP/SSH) pivots far
more easily than an app-only one. Lifting expands each node j into states
(j, c), one per service class c, meaning "at j, landed via class c". Movement
from (j, c) to (l, c') is possible iff the class-c' adjacency has the arc
j -> l, and succeeds with the pivot probability of the class already held:

    T[(j, c), (l, c')] = pivot(c) * [class-c' arc j -> l exists]

The first hop is pure reachability and only records the landing class, so the
start rows are initialized to the per-class adjacencies and the iterate stays
rectangular (n start nodes by n*|C| lifted states). Hops beyond the first use
the same closure operators as the node-level engine, and node-to-node results
are recovered by a class-wise union at the destination with the diagonal
pinned to 1.

Lifted states are ordered node-major with classes in sorted-name order, so
state (j, c) sits at index j*|C| + rank(c).
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .closure import (
    ClosureResult,
    IterationConfig,
    Mode,
    _check_square,
    _compose_general,
    _max_compose_general,
    khop_closure,
    prob_union,
)
from .snapshot import NetworkSnapshot, build_class_adjacencies


def _ordered_classes(class_adjacencies: Mapping[str, np.ndarray],
                     table: Mapping[str, float]) -> list[str]:
    classes = sorted(class_adjacencies)
    missing = [c for c in classes if c not in table]
    if missing:
        raise ValueError(f"pivot table lacks entries for classes: {missing}")
    for c in classes:
        if not 0.0 <= float(table[c]) <= 1.0:
            raise ValueError(f"pivot for class {c!r} must lie in [0, 1]")
    return classes


def _stacked_adjacencies(class_adjacencies: Mapping[str, np.ndarray],
                         classes: list[str]) -> np.ndarray:
    mats = []
    n = None
    for c in classes:
        m = _check_square(class_adjacencies[c], f"adjacency of class {c!r}")
        if n is None:
            n = m.shape[0]
        elif m.shape[0] != n:
            raise ValueError("class adjacencies must share the same dimension")
        mats.append(m)
    return np.stack(mats, axis=2)  # (n, n, |C|)


def build_lifted_transition(class_adjacencies: Mapping[str, np.ndarray],
                            table: Mapping[str, float]) -> np.ndarray:
    """Class-conditioned transition matrix over lifted states, (n|C|) square."""
    classes = _ordered_classes(class_adjacencies, table)
    stacked = _stacked_adjacencies(class_adjacencies, classes)
    n, _, n_classes = stacked.shape
    t = np.zeros((n * n_classes, n * n_classes))
    view = t.reshape(n, n_classes, n, n_classes)
    for ci, c in enumerate(classes):
        for cj in range(n_classes):
            view[:, ci, :, cj] = float(table[c]) * stacked[:, :, cj]
    return t


def lifted_init(class_adjacencies: Mapping[str, np.ndarray],
                table: Mapping[str, float]) -> np.ndarray:
    """First-hop lifted state: row i holds the class-c arc indicators of i."""
    classes = _ordered_classes(class_adjacencies, table)
    stacked = _stacked_adjacencies(class_adjacencies, classes)
    n, _, n_classes = stacked.shape
    return stacked.reshape(n, n * n_classes)


def collapse_classes(class_adjacencies: Mapping[str, np.ndarray],
                     table: Mapping[str, float]) -> np.ndarray:
    """Node-level pivot matrix equivalent to the lifted model.

    W[j, l] = 1 - prod_c (1 - pivot(c) * [class-c arc j -> l exists]); with a
    single class this is just pivot * adjacency.
    """
    classes = _ordered_classes(class_adjacencies, table)
    stacked = _stacked_adjacencies(class_adjacencies, classes)
    pivots = np.array([float(table[c]) for c in classes])
    miss = np.multiply.reduce(1.0 - pivots[None, None, :] * stacked, axis=2)
    return np.clip(1.0 - miss, 0.0, 1.0)


def _aggregate(lifted: np.ndarray, n: int, n_classes: int, mode: Mode) -> np.ndarray:
    cube = lifted.reshape(n, n, n_classes)
    if mode is Mode.MAX_COMPOSE:
        node = np.max(cube, axis=2)
    else:
        node = np.clip(1.0 - np.multiply.reduce(1.0 - cube, axis=2), 0.0, 1.0)
    np.fill_diagonal(node, 1.0)
    return node


def lifted_closure(snap: NetworkSnapshot, table: Mapping[str, float],
                   cfg: IterationConfig, workers: int = 1) -> ClosureResult:
    """Run the closure in the lifted space and aggregate back to node level.

    Telemetry (delta history, convergence) is measured on the lifted iterate,
    which is where the fixed point actually lives; stopping there is
    conservative for the aggregated matrix.
    """
    class_adjacencies = build_class_adjacencies(snap)
    if not class_adjacencies:
        zero = np.zeros((snap.n, snap.n))
        return khop_closure(zero, zero, cfg, workers)
    classes = _ordered_classes(class_adjacencies, table)
    n_classes = len(classes)
    n = snap.n

    t = build_lifted_transition(class_adjacencies, table)
    base = lifted_init(class_adjacencies, table)
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
        extended = compose(current, t, workers)
        nxt = union(base, extended)
        delta = float(np.max(np.abs(nxt - current))) if nxt.size else 0.0
        deltas.append(delta)
        current = nxt
        if delta < cfg.epsilon:
            converged = True
            break
    return ClosureResult(p_final=_aggregate(current, n, n_classes, cfg.mode),
                         hops_run=len(deltas), converged=converged,
                         delta_history=deltas)
