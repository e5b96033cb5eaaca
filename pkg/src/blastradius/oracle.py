"""Deliberately naive reference implementations for cross-checking the engine.

Everything here is written with plain Python loops over lists and shares no
matrix kernels with the production modules, so an agreement test between the
two is a genuine dual-route check rather than the same code exercised twice.
Speed is a non-goal; these run single-threaded on small instances only.

Arithmetic is dtype-preserving: feed Fraction weights and the walk sums come
back exact, which is how the walk-sum identity against ordinary matrix powers
is verified.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closure import ClosureResult, IterationConfig, Mode

_MAX_ENUM_HOPS = 8
_MAX_ENUM_NODES = 12


def _to_rows(matrix) -> list[list]:
    return [list(row) for row in matrix]


def scalar_closure(a, w, cfg: IterationConfig) -> ClosureResult:
    """Same contract as khop_closure, re-derived with nested scalar loops."""
    a_rows = _to_rows(a)
    w_rows = _to_rows(w)
    n = len(a_rows)
    if any(len(r) != n for r in a_rows) or len(w_rows) != n or any(
            len(r) != n for r in w_rows):
        raise ValueError("A and W must be square matrices of the same size")
    for i in range(n):
        for j in range(n):
            if a_rows[i][j] not in (0, 1, 0.0, 1.0):
                raise ValueError("A must be 0/1 valued")
            if w_rows[i][j] > a_rows[i][j]:
                raise ValueError("W must be <= A elementwise")

    base = [[1.0 if i == j else float(a_rows[i][j]) for j in range(n)] for i in range(n)]
    current = [row[:] for row in base]
    max_mode = cfg.mode is Mode.MAX_COMPOSE

    deltas: list[float] = []
    converged = False
    for _ in range(cfg.max_hops - 1):
        nxt = [[0.0] * n for _ in range(n)]
        delta = 0.0
        for i in range(n):
            for j in range(n):
                if max_mode:
                    extended = 0.0
                    for m in range(n):
                        term = current[i][m] * w_rows[m][j]
                        if term > extended:
                            extended = term
                    value = base[i][j] if base[i][j] > extended else extended
                else:
                    miss = 1.0
                    for m in range(n):
                        miss *= 1.0 - current[i][m] * w_rows[m][j]
                    extended = 1.0 - miss
                    value = 1.0 - (1.0 - base[i][j]) * (1.0 - extended)
                value = min(1.0, max(0.0, value))
                nxt[i][j] = value
                change = abs(value - current[i][j])
                if change > delta:
                    delta = change
        deltas.append(delta)
        current = nxt
        if delta < cfg.epsilon:
            converged = True
            break

    return ClosureResult(p_final=np.array(current), hops_run=len(deltas),
                         converged=converged, delta_history=deltas)


def scalar_lifted_closure(class_adjacencies, table, cfg: IterationConfig) -> ClosureResult:
    """Scalar re-derivation of the lifted closure, aggregated to node level."""
    classes = sorted(class_adjacencies)
    if not classes:
        raise ValueError("need at least one service class")
    adjs = {c: _to_rows(class_adjacencies[c]) for c in classes}
    n_classes = len(classes)
    n = len(next(iter(adjs.values())))
    pivots = [float(table[c]) for c in classes]
    size = n * n_classes
    max_mode = cfg.mode is Mode.MAX_COMPOSE

    # Lifted transition: row (j, c), column (l, c2).
    t = [[0.0] * size for _ in range(size)]
    for j in range(n):
        for ci in range(n_classes):
            row = t[j * n_classes + ci]
            for l in range(n):
                for cj in range(n_classes):
                    row[l * n_classes + cj] = pivots[ci] * float(adjs[classes[cj]][j][l])

    base = [[0.0] * size for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for ci in range(n_classes):
                base[i][j * n_classes + ci] = float(adjs[classes[ci]][i][j])

    current = [row[:] for row in base]
    deltas: list[float] = []
    converged = False
    for _ in range(cfg.max_hops - 1):
        nxt = [[0.0] * size for _ in range(n)]
        delta = 0.0
        for i in range(n):
            for s in range(size):
                if max_mode:
                    extended = 0.0
                    for m in range(size):
                        term = current[i][m] * t[m][s]
                        if term > extended:
                            extended = term
                    value = base[i][s] if base[i][s] > extended else extended
                else:
                    miss = 1.0
                    for m in range(size):
                        miss *= 1.0 - current[i][m] * t[m][s]
                    extended = 1.0 - miss
                    value = 1.0 - (1.0 - base[i][s]) * (1.0 - extended)
                value = min(1.0, max(0.0, value))
                nxt[i][s] = value
                change = abs(value - current[i][s])
                if change > delta:
                    delta = change
        deltas.append(delta)
        current = nxt
        if delta < cfg.epsilon:
            converged = True
            break

    node = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                node[i][j] = 1.0
                continue
            if max_mode:
                value = 0.0
                for ci in range(n_classes):
                    value = max(value, current[i][j * n_classes + ci])
            else:
                miss = 1.0
                for ci in range(n_classes):
                    miss *= 1.0 - current[i][j * n_classes + ci]
                value = 1.0 - miss
            node[i][j] = min(1.0, max(0.0, value))

    return ClosureResult(p_final=np.array(node), hops_run=len(deltas),
                         converged=converged, delta_history=deltas)


@dataclass
class PathEnumeration:
    """All walks (or simple paths) between one pair within a hop cap.

    Each entry pairs the vertex sequence with the product of its pivot
    weights; the first hop contributes no factor.
    """

    src: int
    dst: int
    max_hops: int
    simple_only: bool
    walks: list[tuple[tuple[int, ...], object]]

    def total_by_length(self) -> dict[int, object]:
        """Sum of products per walk length (number of hops)."""
        sums: dict[int, object] = {}
        for path, value in self.walks:
            hops = len(path) - 1
            sums[hops] = sums.get(hops, 0) + value
        return sums

    def best(self):
        """Largest product over the enumerated walks, 0 if there are none."""
        return max((value for _, value in self.walks), default=0)


def enumerate_paths(a, w, src: int, dst: int, max_hops: int,
                    simple_only: bool = False) -> PathEnumeration:
    """Exhaustive depth-first walk enumeration for one pair.

    Guarded to max_hops <= 8 and n <= 12; beyond that the walk count explodes.
    With simple_only=False the per-length sums of products equal the entries
    of A W^(L-1) computed with ordinary matrix arithmetic.
    """
    a_rows = _to_rows(a)
    w_rows = _to_rows(w)
    n = len(a_rows)
    if max_hops > _MAX_ENUM_HOPS or n > _MAX_ENUM_NODES:
        raise ValueError(
            f"enumeration is limited to {_MAX_ENUM_HOPS} hops and "
            f"{_MAX_ENUM_NODES} nodes (got hops={max_hops}, n={n})")
    if max_hops < 1:
        raise ValueError("max_hops must be at least 1")
    if not (0 <= src < n and 0 <= dst < n):
        raise ValueError("src/dst out of range")

    walks: list[tuple[tuple[int, ...], object]] = []

    def extend(path: list[int], product) -> None:
        here = path[-1]
        if here == dst and len(path) > 1:
            walks.append((tuple(path), product))
        if len(path) - 1 >= max_hops:
            return
        for nxt in range(n):
            if simple_only and nxt in path:
                continue
            if len(path) == 1:
                # First hop: needs an arc, succeeds with certainty.
                if a_rows[here][nxt]:
                    extend(path + [nxt], product)
            else:
                weight = w_rows[here][nxt]
                if weight:
                    extend(path + [nxt], product * weight)

    extend([src], 1)
    return PathEnumeration(src=src, dst=dst, max_hops=max_hops,
                           simple_only=simple_only, walks=walks)
