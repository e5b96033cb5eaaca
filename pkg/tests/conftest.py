"""Shared fixtures: worked-example matrices and seeded random snapshot corpora."""

from __future__ import annotations

import numpy as np
import pytest

from blastradius import NetworkSnapshot, load_fixture
from blastradius.snapshot import Asset, Edge, ServiceSpec

# The small web/app/db triangle used throughout the docs: a low-privilege
# app port forward, a high-privilege admin channel back, and a database hop.
A_TRIANGLE = np.array([
    [0.0, 1.0, 0.0],
    [1.0, 0.0, 1.0],
    [0.0, 0.0, 0.0],
])
W_TRIANGLE = np.array([
    [0.0, 0.2, 0.0],
    [0.9, 0.0, 0.3],
    [0.0, 0.0, 0.0],
])
P2_TRIANGLE = np.array([
    [1.0, 1.0, 0.3],
    [1.0, 1.0, 1.0],
    [0.0, 0.0, 1.0],
])

PIVOT_GRID = np.arange(1, 10) / 10.0  # 0.1 .. 0.9


@pytest.fixture
def three_tier() -> NetworkSnapshot:
    return load_fixture("three_tier")


@pytest.fixture
def workstation_dc() -> NetworkSnapshot:
    return load_fixture("workstation_dc")


@pytest.fixture
def field_contrast() -> NetworkSnapshot:
    return load_fixture("field_contrast")


def random_matrices(seed: int, n_lo: int = 2, n_hi: int = 12,
                    density: float = 0.3) -> tuple[np.ndarray, np.ndarray]:
    """Random 0/1 adjacency plus a pivot matrix with weights from PIVOT_GRID."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    a = (rng.random((n, n)) < density).astype(float)
    np.fill_diagonal(a, 0.0)
    w = rng.choice(PIVOT_GRID, size=(n, n)) * a
    return a, w


def random_snapshot(seed: int, n_lo: int = 2, n_hi: int = 12, density: float = 0.3,
                    classes: tuple[str, ...] = ("app_only", "interactive"),
                    ) -> NetworkSnapshot:
    """Random snapshot with one single-service arc per adjacency entry."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    assets = tuple(Asset(id=f"a{i}", name=f"asset {i}") for i in range(n))
    services = []
    edges = []
    wanted = [(i, j) for i in range(n) for j in range(n)
              if i != j and rng.random() < density]
    if not wanted:
        wanted = [(0, 1)]  # keep the corpus free of degenerate empty graphs
    for i, j in wanted:
        svc_id = f"svc-{i}-{j}"
        services.append(ServiceSpec(
            id=svc_id,
            port=int(rng.integers(1024, 65536)),
            protocol="tcp",
            service_class=str(rng.choice(classes)),
            pivot=float(rng.choice(PIVOT_GRID)),
        ))
        edges.append(Edge(src=f"a{i}", dst=f"a{j}", services=(svc_id,)))
    return NetworkSnapshot(assets=assets, services=tuple(services), edges=tuple(edges))


def random_class_table(seed: int, classes: tuple[str, ...] = ("app_only", "interactive"),
                       ) -> dict[str, float]:
    rng = np.random.default_rng(seed ^ 0x5EED)
    return {c: float(rng.choice(PIVOT_GRID)) for c in classes}


def strongly_connected_matrices(seed: int, n_lo: int = 12, n_hi: int = 30,
                                density: float = 0.3) -> tuple[np.ndarray, np.ndarray]:
    """Hamiltonian cycle plus random extra arcs: strongly connected by design."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    a = np.zeros((n, n))
    perm = rng.permutation(n)
    for i in range(n):
        a[perm[i], perm[(i + 1) % n]] = 1.0
    extra = rng.random((n, n)) < density
    np.fill_diagonal(extra, False)
    a[extra] = 1.0
    w = rng.choice(PIVOT_GRID, size=(n, n)) * a
    return a, w
