"""Deployment metrics reduced from a compromise-probability matrix.

LMS (lateral-movement susceptibility) is the mean off-diagonal entry: the
average probability that movement between two distinct assets succeeds
within the hop budget. BRE (blast-radius estimate) is the mean over all
entries, expressed as a percentage: with a unit diagonal it reads as the
expected share of the network compromised when the attacker starts at a
uniformly random asset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closure import ClosureResult, Mode, _check_square


def lms(p: np.ndarray) -> float:
    """Mean of the n(n-1) off-diagonal entries; needs at least two assets."""
    p = _check_square(p, "P")
    n = p.shape[0]
    if n < 2:
        raise ValueError("LMS needs at least 2 assets")
    return float((p.sum() - np.trace(p)) / (n * (n - 1)))


def bre(p: np.ndarray) -> float:
    """Mean of all entries as a percentage of the network."""
    p = _check_square(p, "P")
    n = p.shape[0]
    if n < 1:
        raise ValueError("BRE needs at least 1 asset")
    return float(100.0 * p.sum() / (n * n))


def threshold_filter(p: np.ndarray, theta: float) -> np.ndarray:
    """0/1 indicator of off-diagonal entries strictly above theta.

    The diagonal reports 0: self-compromise is not a movement finding.
    """
    p = _check_square(p, "P")
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta!r}")
    mask = (p > theta).astype(float)
    np.fill_diagonal(mask, 0.0)
    return mask


@dataclass(frozen=True)
class MetricsReport:
    """Scalar summary of one closure run."""

    lms: float
    bre_percent: float
    n: int
    hops: int
    converged: bool
    mode: str
    lifted: bool

    def to_dict(self) -> dict:
        return {
            "lms": self.lms,
            "bre_percent": self.bre_percent,
            "n": self.n,
            "hops": self.hops,
            "converged": self.converged,
            "mode": self.mode,
            "lifted": self.lifted,
        }


def summarize(result: ClosureResult, mode: Mode, lifted: bool = False) -> MetricsReport:
    """Build the metrics report for a finished closure run.

    hops is the hop depth the final matrix corresponds to (the initial state
    counts as hop 1).
    """
    p = result.p_final
    return MetricsReport(
        lms=lms(p),
        bre_percent=bre(p),
        n=p.shape[0],
        hops=1 + result.hops_run,
        converged=result.converged,
        mode=mode.value,
        lifted=lifted,
    )
