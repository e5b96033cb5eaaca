"""What-if evaluation of candidate mitigations.

A cut removes an arc, a single service from one arc, a service everywhere,
or a whole service class. Each candidate is scored by recomputing the full
closure on the mutated snapshot with identical settings and reporting the
LMS/BRE drop; removals can never increase either metric because the closure
is monotone in both A and W.

Rankings sort by the BRE drop (the decision metric), break ties by the LMS
drop and then by selector, so the output is a deterministic function of the
snapshot and the run settings.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .closure import IterationConfig, khop_closure
from .lifting import lifted_closure
from .metrics import bre, lms
from .snapshot import (
    Edge,
    NetworkSnapshot,
    PivotPolicy,
    SnapshotError,
    build_adjacency,
    build_pivot_matrix,
)


class CutKind(enum.Enum):
    EDGE = "edge"
    SERVICE_ON_EDGE = "service_on_edge"
    SERVICE_GLOBAL = "service_global"
    CLASS_GLOBAL = "class_global"


class UnresolvableCutError(SnapshotError):
    """The cut selector does not match anything in the snapshot."""


@dataclass(frozen=True)
class CutSpec:
    """One candidate mitigation; fields are filled per kind."""

    kind: CutKind
    src: str | None = None
    dst: str | None = None
    service: str | None = None
    service_class: str | None = None

    def selector(self) -> tuple[str, ...]:
        if self.kind is CutKind.EDGE:
            return (self.src or "", self.dst or "")
        if self.kind is CutKind.SERVICE_ON_EDGE:
            return (self.src or "", self.dst or "", self.service or "")
        if self.kind is CutKind.SERVICE_GLOBAL:
            return (self.service or "",)
        return (self.service_class or "",)

    def describe(self) -> str:
        if self.kind is CutKind.EDGE:
            return f"edge {self.src}->{self.dst}"
        if self.kind is CutKind.SERVICE_ON_EDGE:
            return f"service {self.service} on {self.src}->{self.dst}"
        if self.kind is CutKind.SERVICE_GLOBAL:
            return f"service {self.service}"
        return f"class {self.service_class}"


@dataclass(frozen=True)
class CutImpact:
    """Metric movement caused by one cut (or one joint set of cuts)."""

    cuts: tuple[CutSpec, ...]
    lms_before: float
    lms_after: float
    bre_before: float
    bre_after: float

    @property
    def cut(self) -> CutSpec:
        return self.cuts[0]

    @property
    def delta_lms(self) -> float:
        return self.lms_before - self.lms_after

    @property
    def delta_bre(self) -> float:
        return self.bre_before - self.bre_after

    def describe(self) -> str:
        return " + ".join(c.describe() for c in self.cuts)

    def to_dict(self) -> dict:
        return {
            "cut": self.describe(),
            "kind": self.cut.kind.value,
            "lms_before": self.lms_before,
            "lms_after": self.lms_after,
            "bre_before": self.bre_before,
            "bre_after": self.bre_after,
            "delta_lms": self.delta_lms,
            "delta_bre": self.delta_bre,
        }


def parse_cut_spec(text: str) -> CutSpec:
    """Parse a CLI cut selector.

    Formats: ``edge:SRC->DST``, ``service_on_edge:SRC->DST:SERVICE``,
    ``service:SERVICE``, ``class:CLASS``.
    """
    kind, _, rest = text.partition(":")
    if not rest:
        raise UnresolvableCutError(f"cut spec {text!r} needs a selector after the kind")
    if kind == "edge":
        src, sep, dst = rest.partition("->")
        if not sep or not src or not dst:
            raise UnresolvableCutError(f"edge cut {text!r} must look like edge:SRC->DST")
        return CutSpec(kind=CutKind.EDGE, src=src, dst=dst)
    if kind == "service_on_edge":
        pair, sep, service = rest.rpartition(":")
        src, arrow, dst = pair.partition("->")
        if not sep or not arrow or not src or not dst or not service:
            raise UnresolvableCutError(
                f"cut {text!r} must look like service_on_edge:SRC->DST:SERVICE")
        return CutSpec(kind=CutKind.SERVICE_ON_EDGE, src=src, dst=dst, service=service)
    if kind == "service":
        return CutSpec(kind=CutKind.SERVICE_GLOBAL, service=rest)
    if kind == "class":
        return CutSpec(kind=CutKind.CLASS_GLOBAL, service_class=rest)
    raise UnresolvableCutError(f"unknown cut kind {kind!r}")


def _rebuild(snap: NetworkSnapshot, edges: list[Edge]) -> NetworkSnapshot:
    return NetworkSnapshot(assets=snap.assets, services=snap.services,
                           edges=tuple(edges))


def apply_cut(snap: NetworkSnapshot, cut: CutSpec) -> NetworkSnapshot:
    """Return a new snapshot with the cut applied.

    Service removals drop an arc entirely once its service set empties, which
    keeps the pivot-weight/adjacency convention intact. The service catalog is
    left as-is; unused entries are harmless.
    """
    if cut.kind is CutKind.EDGE:
        edges = [e for e in snap.edges if not (e.src == cut.src and e.dst == cut.dst)]
        if len(edges) == len(snap.edges):
            raise UnresolvableCutError(f"no arc {cut.src!r} -> {cut.dst!r} to cut")
        return _rebuild(snap, edges)

    if cut.kind is CutKind.SERVICE_ON_EDGE:
        hit = False
        edges = []
        for e in snap.edges:
            if e.src == cut.src and e.dst == cut.dst:
                if cut.service not in e.services:
                    raise UnresolvableCutError(
                        f"arc {e.src!r} -> {e.dst!r} does not carry service {cut.service!r}")
                hit = True
                remaining = tuple(s for s in e.services if s != cut.service)
                if remaining:
                    edges.append(Edge(src=e.src, dst=e.dst, services=remaining))
            else:
                edges.append(e)
        if not hit:
            raise UnresolvableCutError(f"no arc {cut.src!r} -> {cut.dst!r} to cut")
        return _rebuild(snap, edges)

    if cut.kind is CutKind.SERVICE_GLOBAL:
        if cut.service not in {s.id for s in snap.services}:
            raise UnresolvableCutError(f"unknown service {cut.service!r}")
        doomed = {cut.service}
    else:
        if cut.service_class not in snap.classes:
            raise UnresolvableCutError(f"unknown service class {cut.service_class!r}")
        doomed = {s.id for s in snap.services if s.service_class == cut.service_class}

    edges = []
    for e in snap.edges:
        remaining = tuple(s for s in e.services if s not in doomed)
        if remaining:
            edges.append(Edge(src=e.src, dst=e.dst, services=remaining)
                         if remaining != e.services else e)
    return _rebuild(snap, edges)


def apply_cuts(snap: NetworkSnapshot, cuts: list[CutSpec]) -> NetworkSnapshot:
    for cut in cuts:
        snap = apply_cut(snap, cut)
    return snap


def _metrics_for(snap: NetworkSnapshot, cfg: IterationConfig,
                 policy: PivotPolicy | None, lifted: bool) -> tuple[float, float]:
    if lifted:
        table = {c: (policy.class_defaults.get(c) if policy else None)
                 for c in snap.classes}
        missing = [c for c, v in table.items() if v is None]
        if missing:
            raise SnapshotError(
                f"lifted what-if needs a class default for every class; "
                f"missing: {missing}")
        result = lifted_closure(snap, table, cfg)
    else:
        a = build_adjacency(snap)
        w = build_pivot_matrix(snap, policy)
        result = khop_closure(a, w, cfg)
    return lms(result.p_final), bre(result.p_final)


def evaluate_cuts(snap: NetworkSnapshot, cuts: list[CutSpec], cfg: IterationConfig,
                  policy: PivotPolicy | None = None, lifted: bool = False) -> CutImpact:
    """Score a set of cuts applied jointly, with identical run settings."""
    if not cuts:
        raise ValueError("need at least one cut to evaluate")
    lms_before, bre_before = _metrics_for(snap, cfg, policy, lifted)
    mutated = apply_cuts(snap, cuts)
    lms_after, bre_after = _metrics_for(mutated, cfg, policy, lifted)
    return CutImpact(cuts=tuple(cuts),
                     lms_before=lms_before, lms_after=lms_after,
                     bre_before=bre_before, bre_after=bre_after)


def evaluate_cut(snap: NetworkSnapshot, cut: CutSpec, cfg: IterationConfig,
                 policy: PivotPolicy | None = None, lifted: bool = False) -> CutImpact:
    """Score a single cut by full recomputation on the mutated snapshot."""
    return evaluate_cuts(snap, [cut], cfg, policy, lifted)


def candidate_cuts(snap: NetworkSnapshot, kind: CutKind) -> list[CutSpec]:
    """Every candidate of one kind: each arc, each used service, or each class."""
    if kind is CutKind.EDGE:
        return [CutSpec(kind=kind, src=e.src, dst=e.dst) for e in snap.edges]
    if kind is CutKind.SERVICE_GLOBAL:
        used = sorted({s for e in snap.edges for s in e.services})
        return [CutSpec(kind=kind, service=s) for s in used]
    if kind is CutKind.CLASS_GLOBAL:
        return [CutSpec(kind=kind, service_class=c) for c in snap.classes]
    raise ValueError(f"cannot enumerate candidates of kind {kind!r}")


def rank_cuts(snap: NetworkSnapshot, kind: CutKind, cfg: IterationConfig,
              top_n: int | None = None, policy: PivotPolicy | None = None,
              lifted: bool = False) -> list[CutImpact]:
    """Evaluate every candidate of a kind and rank by BRE drop.

    Ties break by LMS drop, then by selector, so equal-impact candidates come
    out in a stable order.
    """
    if top_n is not None and top_n < 1:
        raise ValueError(f"top_n must be at least 1, got {top_n!r}")
    impacts = [evaluate_cut(snap, cut, cfg, policy, lifted)
               for cut in candidate_cuts(snap, kind)]
    impacts.sort(key=lambda imp: (-imp.delta_bre, -imp.delta_lms, imp.cut.selector()))
    return impacts if top_n is None else impacts[:top_n]


def ranking_notes(snap: NetworkSnapshot, impacts: list[CutImpact],
                  policy: PivotPolicy | None = None) -> list[str]:
    """Flag edge rankings where bare connectivity outweighs pivot weight.

    Because the first hop counts as pure reachability, an arc with a low
    pivot weight can still rank above a high-pivot arc when it is the only
    route into part of the network. That is a property of the model, not a
    scoring bug; the note makes it visible in reports.
    """
    notes = []
    edge_impacts = [imp for imp in impacts if imp.cut.kind is CutKind.EDGE]
    if len(edge_impacts) < 2:
        return notes
    weights = build_pivot_matrix(snap, policy)
    index = snap.asset_index

    def weight(imp: CutImpact) -> float:
        return float(weights[index(imp.cut.src), index(imp.cut.dst)])

    for pos, upper in enumerate(edge_impacts):
        for lower in edge_impacts[pos + 1:]:
            if upper.delta_bre > lower.delta_bre and weight(upper) < weight(lower):
                notes.append(
                    f"{upper.cut.describe()} (pivot weight {weight(upper):.3g}) ranks above "
                    f"{lower.cut.describe()} (pivot weight {weight(lower):.3g}): "
                    "first-hop reachability is certain in this model, so pure "
                    "connectivity can outweigh pivot weight"
                )
                return notes
    return notes
