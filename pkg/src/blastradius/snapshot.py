"""Network snapshot model: assets, services, edges, and the matrices built from them.

A snapshot is a directed multigraph over assets. Every edge carries the set of
services reachable from its source to its destination; parallel services on the
same (src, dst) pair are merged into one edge. From a validated snapshot we
build:

  * the 0/1 adjacency matrix  (an arc exists iff at least one service does),
  * the pivot matrix, whose (i, j) entry is the noisy-OR union of the pivot
    probabilities of every service on the arc,
  * per-class 0/1 adjacencies restricted to a single service class.

Snapshots and matrices are immutable after construction and safe to share
across threads. Asset indices are assigned in document order, so identical
documents always produce identical matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

PROTOCOLS = ("tcp", "udp")

# Shipped port-based pivot defaults. Interactive remote-admin services let an
# attacker act as a logged-in user, so they get a high pivot probability;
# database and web ports rarely allow a pivot without an additional exploit.
# This table is a calibration default, not ground truth; a policy document
# overrides it.
WELL_KNOWN_PORT_PIVOTS = {
    22: 0.9,     # ssh
    445: 0.9,    # smb
    3389: 0.9,   # rdp
    5985: 0.9,   # winrm
    5986: 0.9,   # winrm (tls)
    1433: 0.2,   # mssql
    3306: 0.2,   # mysql
    80: 0.1,     # http
    443: 0.1,    # https
}

DEFAULT_CLASS_PIVOTS = {"interactive": 0.9, "app_only": 0.1}


class SnapshotError(ValueError):
    """Base error for malformed or inconsistent snapshot/policy documents."""


class SnapshotSyntaxError(SnapshotError):
    """Document is not parseable; message carries the input position."""


class DuplicateIdError(SnapshotError):
    """An asset or service id appears more than once."""


class DanglingReferenceError(SnapshotError):
    """An edge references an asset or service id that does not exist."""


class SelfLoopError(SnapshotError):
    """An edge has src == dst; self-loops are not part of the model."""


class PivotRangeError(SnapshotError):
    """A pivot probability is outside [0, 1]."""


class UnknownClassError(SnapshotError):
    """A service class was requested that no service in the snapshot uses."""


class UnresolvedPivotError(SnapshotError):
    """No override, per-service pivot, or class default resolves a service."""


@dataclass(frozen=True)
class Asset:
    id: str
    name: str = ""
    tags: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ServiceSpec:
    """A reachable service. ``pivot`` may be None and fall back to policy."""

    id: str
    port: int
    protocol: str
    service_class: str
    pivot: float | None = None


@dataclass(frozen=True)
class Edge:
    """A directed arc src -> dst carrying a non-empty, sorted set of services."""

    src: str
    dst: str
    services: tuple[str, ...]


@dataclass(frozen=True)
class PivotPolicy:
    """Layered pivot resolution: override > per-service pivot > class default."""

    class_defaults: dict[str, float] = field(default_factory=dict)
    service_overrides: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name, value in list(self.class_defaults.items()) + list(
            self.service_overrides.items()
        ):
            _check_probability(value, f"pivot for {name!r}")


@dataclass
class NetworkSnapshot:
    """Validated snapshot with deterministic asset -> index assignment.

    Treat instances as immutable; every mutation-style operation in this
    package returns a fresh snapshot.
    """

    assets: tuple[Asset, ...]
    services: tuple[ServiceSpec, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        self._index = {a.id: i for i, a in enumerate(self.assets)}
        self._service_map = {s.id: s for s in self.services}

    @property
    def n(self) -> int:
        return len(self.assets)

    @property
    def classes(self) -> tuple[str, ...]:
        """Service classes present in the catalog, sorted by name."""
        return tuple(sorted({s.service_class for s in self.services}))

    def asset_index(self, asset_id: str) -> int:
        return self._index[asset_id]

    def service(self, service_id: str) -> ServiceSpec:
        return self._service_map[service_id]

    def to_document(self) -> dict:
        """Canonical plain-dict form; parse(serialize(...)) round-trips."""
        return {
            "assets": [
                {"id": a.id, "name": a.name, "tags": sorted(a.tags)}
                for a in self.assets
            ],
            "services": [
                {
                    "id": s.id,
                    "port": s.port,
                    "protocol": s.protocol,
                    "class": s.service_class,
                    **({} if s.pivot is None else {"pivot": s.pivot}),
                }
                for s in self.services
            ],
            "edges": [
                {"src": e.src, "dst": e.dst, "services": list(e.services)}
                for e in self.edges
            ],
        }


def _check_probability(value, what: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise PivotRangeError(f"{what} must be a number, got {value!r}")
    if not 0.0 <= float(value) <= 1.0:
        raise PivotRangeError(f"{what} must lie in [0, 1], got {value!r}")
    return float(value)


def _require(cond: bool, err: type[SnapshotError], message: str) -> None:
    if not cond:
        raise err(message)


def _as_str(value, what: str) -> str:
    _require(isinstance(value, str) and value != "", SnapshotError,
             f"{what} must be a non-empty string, got {value!r}")
    return value


def parse_snapshot(text: str) -> NetworkSnapshot:
    """Parse and validate a snapshot document (JSON text).

    Raises SnapshotSyntaxError with the offending position for unparseable
    input, and a more specific SnapshotError subclass for semantic problems
    (duplicate ids, dangling references, self-loops, out-of-range pivots).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SnapshotSyntaxError(
            f"snapshot document is not valid JSON at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}"
        ) from exc
    return build_snapshot(doc)


def build_snapshot(doc: dict) -> NetworkSnapshot:
    """Validate an already-decoded snapshot document."""
    _require(isinstance(doc, dict), SnapshotError, "snapshot document must be an object")

    raw_assets = doc.get("assets")
    _require(isinstance(raw_assets, list) and len(raw_assets) >= 1, SnapshotError,
             "snapshot needs a non-empty 'assets' list")
    assets = []
    seen_assets = set()
    for entry in raw_assets:
        _require(isinstance(entry, dict), SnapshotError, "asset entries must be objects")
        asset_id = _as_str(entry.get("id"), "asset id")
        if asset_id in seen_assets:
            raise DuplicateIdError(f"duplicate asset id {asset_id!r}")
        seen_assets.add(asset_id)
        tags = entry.get("tags", [])
        _require(isinstance(tags, list) and all(isinstance(t, str) for t in tags),
                 SnapshotError, f"tags of asset {asset_id!r} must be a list of strings")
        assets.append(Asset(id=asset_id, name=entry.get("name", ""), tags=frozenset(tags)))

    raw_services = doc.get("services", [])
    _require(isinstance(raw_services, list), SnapshotError, "'services' must be a list")
    services = []
    seen_services = set()
    for entry in raw_services:
        _require(isinstance(entry, dict), SnapshotError, "service entries must be objects")
        service_id = _as_str(entry.get("id"), "service id")
        if service_id in seen_services:
            raise DuplicateIdError(f"duplicate service id {service_id!r}")
        seen_services.add(service_id)
        port = entry.get("port")
        _require(isinstance(port, int) and not isinstance(port, bool)
                 and 0 <= port <= 65535,
                 SnapshotError, f"service {service_id!r} port must be an integer in 0..65535")
        protocol = entry.get("protocol", "tcp")
        _require(protocol in PROTOCOLS, SnapshotError,
                 f"service {service_id!r} protocol must be one of {PROTOCOLS}")
        service_class = _as_str(entry.get("class"), f"service {service_id!r} class")
        pivot = entry.get("pivot")
        if pivot is not None:
            pivot = _check_probability(pivot, f"pivot of service {service_id!r}")
        services.append(ServiceSpec(id=service_id, port=port, protocol=protocol,
                                    service_class=service_class, pivot=pivot))

    raw_edges = doc.get("edges", [])
    _require(isinstance(raw_edges, list), SnapshotError, "'edges' must be a list")
    # Parallel entries for the same (src, dst) pair merge into one arc with the
    # union of their service sets.
    merged: dict[tuple[str, str], set[str]] = {}
    order: list[tuple[str, str]] = []
    for entry in raw_edges:
        _require(isinstance(entry, dict), SnapshotError, "edge entries must be objects")
        src = _as_str(entry.get("src"), "edge src")
        dst = _as_str(entry.get("dst"), "edge dst")
        if src == dst:
            raise SelfLoopError(f"edge {src!r} -> {dst!r} is a self-loop")
        for endpoint in (src, dst):
            if endpoint not in seen_assets:
                raise DanglingReferenceError(f"edge references unknown asset {endpoint!r}")
        svc_ids = entry.get("services")
        _require(isinstance(svc_ids, list) and len(svc_ids) >= 1, SnapshotError,
                 f"edge {src!r} -> {dst!r} needs a non-empty 'services' list")
        for svc_id in svc_ids:
            if svc_id not in seen_services:
                raise DanglingReferenceError(
                    f"edge {src!r} -> {dst!r} references unknown service {svc_id!r}")
        key = (src, dst)
        if key not in merged:
            merged[key] = set()
            order.append(key)
        merged[key].update(svc_ids)

    edges = tuple(Edge(src=s, dst=d, services=tuple(sorted(merged[(s, d)])))
                  for s, d in order)
    return NetworkSnapshot(assets=tuple(assets), services=tuple(services), edges=edges)


def serialize_snapshot(snap: NetworkSnapshot) -> str:
    return json.dumps(snap.to_document(), indent=2)


def parse_policy(text: str) -> PivotPolicy:
    """Parse a pivot policy document (JSON text)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SnapshotSyntaxError(
            f"policy document is not valid JSON at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}"
        ) from exc
    return build_policy(doc)


def build_policy(doc: dict) -> PivotPolicy:
    _require(isinstance(doc, dict), SnapshotError, "policy document must be an object")
    class_defaults = doc.get("class_defaults", {})
    service_overrides = doc.get("service_overrides", {})
    _require(isinstance(class_defaults, dict), SnapshotError,
             "'class_defaults' must map class names to probabilities")
    _require(isinstance(service_overrides, dict), SnapshotError,
             "'service_overrides' must map service ids to probabilities")
    return PivotPolicy(
        class_defaults={_as_str(k, "class name"): _check_probability(v, f"class {k!r} default")
                        for k, v in class_defaults.items()},
        service_overrides={_as_str(k, "service id"): _check_probability(v, f"override for {k!r}")
                           for k, v in service_overrides.items()},
    )


def default_pivot_policy(snap: NetworkSnapshot | None = None) -> PivotPolicy:
    """The shipped calibration default.

    Class defaults cover interactive/app_only; on top of that, services
    without an explicit pivot get a port-based override from
    WELL_KNOWN_PORT_PIVOTS when their port is listed there. Services that
    declare their own pivot are left alone.
    """
    overrides = {}
    if snap is not None:
        for svc in snap.services:
            if svc.pivot is None and svc.port in WELL_KNOWN_PORT_PIVOTS:
                overrides[svc.id] = WELL_KNOWN_PORT_PIVOTS[svc.port]
    return PivotPolicy(class_defaults=dict(DEFAULT_CLASS_PIVOTS),
                       service_overrides=overrides)


def resolve_pivot(service: ServiceSpec, policy: PivotPolicy | None) -> float:
    """Effective pivot probability: override > service pivot > class default."""
    if policy is not None and service.id in policy.service_overrides:
        return policy.service_overrides[service.id]
    if service.pivot is not None:
        return service.pivot
    if policy is not None and service.service_class in policy.class_defaults:
        return policy.class_defaults[service.service_class]
    raise UnresolvedPivotError(
        f"service {service.id!r} has no explicit pivot and no policy entry "
        f"covers it (class {service.service_class!r})"
    )


def build_adjacency(snap: NetworkSnapshot) -> np.ndarray:
    """0/1 adjacency: entry (i, j) is 1 iff an arc i -> j exists."""
    a = np.zeros((snap.n, snap.n))
    for edge in snap.edges:
        a[snap.asset_index(edge.src), snap.asset_index(edge.dst)] = 1.0
    return a


def build_pivot_matrix(snap: NetworkSnapshot, policy: PivotPolicy | None = None) -> np.ndarray:
    """Pivot matrix W: noisy-OR union of the services on each arc.

    W[i, j] = 1 - prod(1 - pivot(s)) over the arc's services, taken in sorted
    service-id order so results are reproducible. Entries without an arc stay
    0, hence W <= A elementwise by construction.
    """
    w = np.zeros((snap.n, snap.n))
    for edge in snap.edges:
        miss = 1.0
        for svc_id in edge.services:
            miss *= 1.0 - resolve_pivot(snap.service(svc_id), policy)
        w[snap.asset_index(edge.src), snap.asset_index(edge.dst)] = 1.0 - miss
    return w


def build_class_adjacency(snap: NetworkSnapshot, service_class: str) -> np.ndarray:
    """0/1 adjacency restricted to arcs carrying at least one service of a class.

    The boolean union over all classes equals build_adjacency(snap).
    """
    if service_class not in snap.classes:
        raise UnknownClassError(f"unknown service class {service_class!r}")
    a = np.zeros((snap.n, snap.n))
    for edge in snap.edges:
        if any(snap.service(svc).service_class == service_class for svc in edge.services):
            a[snap.asset_index(edge.src), snap.asset_index(edge.dst)] = 1.0
    return a


def build_class_adjacencies(snap: NetworkSnapshot) -> dict[str, np.ndarray]:
    """Per-class adjacencies for every class in the snapshot, by sorted name."""
    return {c: build_class_adjacency(snap, c) for c in snap.classes}
