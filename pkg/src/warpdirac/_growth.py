"""Increment analysis for monotone partial integrals.

Given a cumulative quantity m(x) accumulated from an anchor toward a
boundary end, we look at its increments over successive half-decades of
the distance to the boundary.  Power-type divergence m ~ d^{-alpha}
makes the increments grow geometrically (ratio 10^{alpha/2} per
half-decade), logarithmic divergence makes them constant, and a finite
limit makes them decay geometrically.  The in-between regimes are
reported as unknown rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DIVERGENT = "divergent"
CONVERGENT = "convergent"
UNKNOWN = "unknown"

# Ratio thresholds per half-decade.  10^{(p-1)/2} for f ~ x^{-p} puts the
# undecidable band roughly at p in (0.94, 0.97) u (1.0-, 1.03).
RATIO_DIVERGENT = 0.97
RATIO_CONVERGENT = 0.93


@dataclass
class GrowthFit:
    verdict: str
    alpha: float            # growth exponent: m ~ d^{-alpha} (0 for log type)
    ratio: float            # median increment ratio per half-decade
    increments: np.ndarray
    estimate: float         # extrapolated limit (convergent) or last partial value
    n_windows: int

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "alpha": float(self.alpha),
            "ratio": float(self.ratio),
            "estimate": float(self.estimate),
            "n_windows": int(self.n_windows),
        }


def halfdecade_increments(dist, values, d_hi, d_lo):
    """Increments of `values` over half-decades of `dist` (decreasing).

    `dist` is the distance to the boundary end for each sample; it must be
    positive.  Returns the increment accumulated across each half-decade
    window from d_hi down to d_lo.
    """
    dist = np.asarray(dist, dtype=float)
    values = np.asarray(values, dtype=float)
    if d_lo <= 0 or d_hi <= d_lo:
        return np.empty(0)
    n_edges = int(np.floor(2 * np.log10(d_hi / d_lo))) + 1
    if n_edges < 2:
        return np.empty(0)
    edges = d_hi * 10.0 ** (-0.5 * np.arange(n_edges))
    # index of the sample closest to each edge (in log distance)
    logd = np.log(dist)
    idx = [int(np.argmin(np.abs(logd - np.log(e)))) for e in edges]
    incs = []
    for i0, i1 in zip(idx[:-1], idx[1:]):
        if i0 == i1:
            return np.empty(0)  # too few samples to resolve the window
        incs.append(values[i1] - values[i0])
    return np.asarray(incs)


def fit_growth(dist, values, d_hi=None, d_lo=None, floor=1e-300):
    """Classify the boundary behaviour of a cumulative quantity.

    Parameters
    ----------
    dist : array
        Distance of each sample to the boundary end (positive, need not
        be sorted).
    values : array
        Cumulative quantity at each sample, non-decreasing as dist
        decreases.
    d_hi, d_lo : float
        Window of distances to analyse; defaults to the sample range
        shrunk slightly to avoid anchor transients.
    """
    dist = np.asarray(dist, dtype=float)
    values = np.asarray(values, dtype=float)
    if d_hi is None:
        d_hi = np.max(dist) * 0.3
    if d_lo is None:
        d_lo = np.min(dist) * 1.5
    incs = halfdecade_increments(dist, values, d_hi, d_lo)
    last = float(values[np.argmin(dist)])
    if incs.size < 3:
        return GrowthFit(UNKNOWN, np.nan, np.nan, incs, last, incs.size)
    if np.all(np.abs(incs) < max(floor, 1e-14 * max(abs(last), 1.0))):
        return GrowthFit(CONVERGENT, -np.inf, 0.0, incs, last, incs.size)
    if np.any(incs <= 0):
        # cumulative quantity must be monotone; treat noise as inconclusive
        incs = np.clip(incs, floor, None)
    ratios = incs[1:] / np.maximum(incs[:-1], floor)
    r = float(np.median(ratios))
    alpha = 2.0 * np.log10(max(r, floor))
    if r >= RATIO_DIVERGENT:
        return GrowthFit(DIVERGENT, max(alpha, 0.0), r, incs, last, incs.size)
    if r <= RATIO_CONVERGENT:
        # geometric tail: extrapolate the remaining mass
        tail = incs[-1] * r / (1.0 - r) if r < 1.0 else 0.0
        return GrowthFit(CONVERGENT, alpha, r, incs, last + tail, incs.size)
    return GrowthFit(UNKNOWN, alpha, r, incs, last, incs.size)


def divergence_confirmed_early(dist, values, d_hi, d_lo, min_ratio=1.25,
                               min_windows=4):
    """True once the increments show sustained geometric growth, which
    lets integration stop before the full depth on steep power laws."""
    incs = halfdecade_increments(dist, values, d_hi, d_lo)
    if incs.size < min_windows + 1:
        return False
    ratios = incs[1:] / np.maximum(incs[:-1], 1e-300)
    return bool(np.all(ratios[-min_windows:] >= min_ratio))
