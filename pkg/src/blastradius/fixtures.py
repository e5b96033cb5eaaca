"""Shipped sample snapshots.

three_tier        small web/app/db triangle, the worked example used across
                  the docs and tests
workstation_dc    four assets where one exposed RDP arc dominates the risk
                  picture despite a longer low-privilege path elsewhere
field_contrast    synthetic enterprise-style snapshot with near-complete
                  interactive reachability next to a nearly empty app-only
                  overlay
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .snapshot import NetworkSnapshot, parse_snapshot

FIXTURE_NAMES = ("three_tier", "workstation_dc", "field_contrast")


def fixture_path(name: str) -> Path:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {FIXTURE_NAMES}")
    return Path(str(resources.files("blastradius").joinpath("data", f"{name}.json")))


def load_fixture(name: str) -> NetworkSnapshot:
    return parse_snapshot(fixture_path(name).read_text(encoding="utf-8"))
