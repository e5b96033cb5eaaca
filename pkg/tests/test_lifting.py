"""Lifted (node, landing-class) engine."""

from __future__ import annotations

import json

import numpy as np
import pytest

from blastradius import (
    IterationConfig,
    Mode,
    bool_reachability,
    build_adjacency,
    build_class_adjacencies,
    build_lifted_transition,
    collapse_classes,
    khop_closure,
    lifted_closure,
    parse_snapshot,
)

from conftest import random_class_table, random_snapshot


def _chain(first_class: str, second_class: str):
    doc = {
        "assets": [{"id": "n1"}, {"id": "n2"}, {"id": "n3"}],
        "services": [
            {"id": "svc-int", "port": 22, "protocol": "tcp", "class": "interactive"},
            {"id": "svc-app", "port": 80, "protocol": "tcp", "class": "app_only"},
        ],
        "edges": [
            {"src": "n1", "dst": "n2",
             "services": ["svc-int" if first_class == "interactive" else "svc-app"]},
            {"src": "n2", "dst": "n3",
             "services": ["svc-int" if second_class == "interactive" else "svc-app"]},
        ],
    }
    return parse_snapshot(json.dumps(doc))


TABLE = {"interactive": 0.9, "app_only": 0.1}


def test_transition_single_class_collapses_to_scaled_adjacency():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    t = build_lifted_transition({"only": a}, {"only": 0.4})
    assert np.array_equal(t, 0.4 * a)


def test_transition_block_structure(workstation_dc):
    adjs = build_class_adjacencies(workstation_dc)
    t = build_lifted_transition(adjs, TABLE)
    n_classes = len(workstation_dc.classes)
    assert t.shape == (4 * n_classes, 4 * n_classes)
    # The locked-down asset has no outbound arcs, so both of its lifted
    # states have all-zero rows.
    dc = workstation_dc.asset_index("dc")
    for rank in range(n_classes):
        assert np.all(t[dc * n_classes + rank] == 0.0)
    # Entry for moving ws->dc landing via interactive, having landed via
    # app_only: weight is the held class's pivot.
    classes = list(workstation_dc.classes)
    app_rank = classes.index("app_only")
    int_rank = classes.index("interactive")
    ws = workstation_dc.asset_index("ws")
    assert t[ws * n_classes + app_rank, dc * n_classes + int_rank] == TABLE["app_only"]
    # No arc, no entry.
    db = workstation_dc.asset_index("db")
    assert t[db * n_classes + int_rank, ws * n_classes + int_rank] == 0.0


def test_transition_requires_complete_table():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError, match="lacks entries"):
        build_lifted_transition({"x": a, "y": a}, {"x": 0.5})


def test_landing_class_drives_second_hop():
    res = lifted_closure(_chain("interactive", "app_only"),
                         TABLE, IterationConfig(max_hops=2, epsilon=0.0))
    assert abs(res.p_final[0, 2] - 0.9) < 1e-12

    res = lifted_closure(_chain("app_only", "app_only"),
                         TABLE, IterationConfig(max_hops=2, epsilon=0.0))
    assert abs(res.p_final[0, 2] - 0.1) < 1e-12


def test_single_class_lift_collapses_to_base_model():
    for seed in range(50):
        snap = random_snapshot(seed, classes=("uniform",))
        pivot = random_class_table(seed, classes=("uniform",))["uniform"]
        a = build_adjacency(snap)
        w = pivot * a
        for mode in (Mode.NOISY_OR, Mode.MAX_COMPOSE):
            cfg = IterationConfig(max_hops=4, epsilon=0.0, mode=mode)
            base = khop_closure(a, w, cfg).p_final
            lifted = lifted_closure(snap, {"uniform": pivot}, cfg).p_final
            assert np.max(np.abs(lifted - base)) < 1e-12


def test_collapse_classes_formula():
    a_int = np.array([[0.0, 1.0], [0.0, 0.0]])
    a_app = np.array([[0.0, 1.0], [1.0, 0.0]])
    w = collapse_classes({"interactive": a_int, "app_only": a_app}, TABLE)
    assert abs(w[0, 1] - 0.91) < 1e-12  # both classes on the arc
    assert abs(w[1, 0] - 0.1) < 1e-12   # app_only alone
    assert w[0, 0] == 0.0               # no classes present
    single = collapse_classes({"interactive": a_int}, TABLE)
    assert np.array_equal(single, 0.9 * a_int)


def test_lifted_bounded_and_monotone_in_hops():
    for seed in range(40):
        snap = random_snapshot(seed)
        if not snap.edges:
            continue
        table = random_class_table(seed)
        previous = None
        for hops in range(1, 5):
            p = lifted_closure(snap, table,
                               IterationConfig(max_hops=hops, epsilon=0.0)).p_final
            assert np.min(p) >= 0.0 and np.max(p) <= 1.0
            assert np.all(np.diag(p) == 1.0)
            if previous is not None:
                assert np.all(p >= previous - 1e-15)
            previous = p


def test_lifted_refines_boolean_reachability():
    for seed in range(40):
        snap = random_snapshot(seed)
        table = random_class_table(seed)
        hops = 4
        p = lifted_closure(snap, table,
                           IterationConfig(max_hops=hops, epsilon=0.0)).p_final
        s = bool_reachability(build_adjacency(snap), hops)
        assert np.all(s[p > 0.0] == 1.0)
        off = ~np.eye(snap.n, dtype=bool)
        assert np.all(p[off] <= s[off])


def _class_typed_paths(adjs, classes, src, dst, max_hops):
    """All class-annotated simple paths src -> dst within the hop cap."""
    n = next(iter(adjs.values())).shape[0]
    results = []

    def walk(node, visited, landing_classes):
        if len(landing_classes) >= 1 and node == dst:
            results.append(tuple(landing_classes))
        if len(landing_classes) >= max_hops:
            return
        for nxt in range(n):
            if nxt in visited:
                continue
            for c in classes:
                if adjs[c][node, nxt] > 0.0:
                    walk(nxt, visited | {nxt}, landing_classes + [c])

    walk(src, {src}, [])
    return results


def test_lifted_dominates_every_class_typed_path_product():
    # Any concrete class-typed path succeeds with the product of the pivot
    # probabilities of the classes held at each intermediate landing.
    for seed in range(15):
        snap = random_snapshot(seed, n_lo=3, n_hi=6, density=0.4)
        if not snap.edges:
            continue
        table = random_class_table(seed)
        adjs = build_class_adjacencies(snap)
        hops = 4
        p = lifted_closure(snap, table,
                           IterationConfig(max_hops=hops, epsilon=0.0)).p_final
        classes = list(snap.classes)
        for src in range(snap.n):
            for dst in range(snap.n):
                if src == dst:
                    continue
                for typed in _class_typed_paths(adjs, classes, src, dst, hops):
                    product = 1.0
                    for landing in typed[:-1]:  # last landing needs no pivot
                        product *= table[landing]
                    assert p[src, dst] >= product - 1e-12
