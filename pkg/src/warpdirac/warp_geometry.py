"""Warped metrics g = f(x)^2 (dx^2 + h_M) and their coordinate gymnastics.

Three operations live here: deciding whether int_0^epsilon f dx diverges
(the hypothesis that pushes the boundary to infinite distance),
straightening a warped normal form dx^2 + rho^{-2} h_M into the conformal
one, and the conformal change of gauge that swaps spinor coefficients
between the g- and h-volume pictures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _growth
from ._growth import CONVERGENT, DIVERGENT, UNKNOWN
from .errors import HypothesisViolation, InvalidParameter
from .families import (
    BOUNDARY_INF,
    DELTA_MIN_REL,
    ConformalFactor,
    ConstantWarp,
    HalfAngleWarp,
    HyperbolicFactor,
    PowerLawFactor,
    PowerLawWarp,
    ReciprocalSineFactor,
    TabulatedFactor,
    Warp,
)


@dataclass
class DivergenceReport:
    verdict: str              # divergent | convergent | unknown
    partial_integral: float   # int_{delta_min}^{epsilon} f dx (lower bound)
    delta_min: float
    method: str               # 'exact' or 'extrapolated'
    detail: dict

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "partial_integral": float(self.partial_integral),
            "delta_min": float(self.delta_min),
            "method": self.method,
            "detail": self.detail,
        }


def classify_divergence(f: ConformalFactor) -> DivergenceReport:
    """Decide whether int f dx over the collar diverges at the boundary.

    Analytic families are decided exactly; tabulated data is classified
    by extrapolating partial integrals over shrinking half-decades, with
    an explicit 'unknown' verdict when the trend is inconclusive.  The
    reported partial integral always stops at the resolvable floor, so a
    divergence claim is family knowledge plus a finite lower bound.
    """
    lo, hi = f.domain()
    partial = float(f.integral(lo, hi))
    exact = f.exact_divergence()
    if exact is not None:
        return DivergenceReport(exact, partial, lo, "exact",
                                {"family": f.family})
    # tabulated: examine partial-integral increments toward the boundary
    xs = np.geomspace(lo, hi, 2048)
    fx = f(xs)
    seg = 0.5 * (fx[1:] + fx[:-1]) * np.diff(xs)
    if f.boundary_end == BOUNDARY_INF:
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        dist = 1.0 / xs  # proxy distance to the far end
    else:
        # cum[k] = integral of f from xs[k] up to hi
        cum = np.concatenate([[0.0], np.cumsum(seg[::-1])])[::-1]
        dist = xs
    fit = _growth.fit_growth(dist, cum)
    return DivergenceReport(fit.verdict, partial, lo, "extrapolated",
                            {"family": f.family, **fit.as_dict()})


def reparametrize(rho: Warp, f: ConformalFactor):
    """Straighten dx^2 + rho^{-2} h_M: t(x) = int_0^x rho, ft = f/rho.

    Returns (t_max, f_tilde, x_of_t).  The substitution preserves the
    integral: int_0^{t(eps)} ft dt = int_0^eps f dx, so the divergence
    class of the effective factor is inherited exactly, and recognizable
    analytic pairs return an analytic f_tilde.
    """
    if not rho.integrable_at_zero():
        raise HypothesisViolation(
            "warp is not integrable at 0; the straightening coordinate "
            "t(x) = int_0^x rho is undefined")
    if f.boundary_end == BOUNDARY_INF:
        raise InvalidParameter("reparametrization applies to collars with the "
                               "boundary at x -> 0")
    eps = min(f.epsilon, rho.epsilon)
    t_max = float(rho.t_of_x(eps))
    x_of_t = rho.x_of_t

    ft = _analytic_f_tilde(rho, f, eps, t_max)
    if ft is None:
        inherited = f.exact_divergence()
        ts = np.geomspace(DELTA_MIN_REL * t_max, t_max, 2048)
        xs = np.clip(x_of_t(ts), DELTA_MIN_REL * eps * 1e-3, eps)
        vals = f(xs) / rho(xs)
        ft = TabulatedFactor(ts, vals, epsilon=t_max,
                             asserted_divergence=inherited)
    return t_max, ft, x_of_t


def _analytic_f_tilde(rho, f, eps, t_max):
    """Closed forms for the straightened factor on the built-in catalog."""
    if isinstance(rho, PowerLawWarp) and isinstance(f, PowerLawFactor):
        r = 1.0 - rho.q
        p_t = (f.p - rho.q) / r
        # f/rho = scale * x^{q-p}, x = (r t)^{1/r}
        scale = f.scale * r ** (-p_t)
        return PowerLawFactor(p_t, epsilon=t_max, scale=scale)
    if isinstance(rho, ConstantWarp) and isinstance(f, PowerLawFactor):
        # x = t/c: f/rho = (scale/c) (t/c)^{-p}
        return PowerLawFactor(f.p, epsilon=t_max,
                              scale=f.scale * rho.c ** (f.p - 1.0))
    if isinstance(rho, HalfAngleWarp) and isinstance(f, HyperbolicFactor):
        # (1/x) * (1+x^2)/2 with x = tan(t/2) collapses to 1/sin t
        return ReciprocalSineFactor(epsilon=t_max)
    return None


def rotational_to_conformal(k: float, epsilon: float = 1.0) -> PowerLawFactor:
    """Convert a rotationally symmetric metric dr^2 + psi(r)^2 d theta^2
    with psi(r) = r^k (k > 1) to conformal collar form.

    The substitution x(r) = int_r^inf ds/psi(s) gives x = r^{1-k}/(k-1),
    and the conformal factor in the x coordinate is psi(r(x)) =
    ((k-1) x)^{-k/(k-1)}, a divergent power law for every k > 1.
    """
    if k <= 1:
        raise HypothesisViolation(
            "x(r) = int_r^inf ds/psi needs int^inf dr/psi < inf, i.e. k > 1")
    p = k / (k - 1.0)
    scale = (k - 1.0) ** (-p)
    return PowerLawFactor(p, epsilon=epsilon, scale=scale)


def conformal_gauge(coeffs, grid, f: ConformalFactor, n: int, direction: str):
    """Apply the conformal change of spinor gauge on sampled coefficients.

    direction='to_h' multiplies by f^{(n-1)/2} (a g-volume spinor becomes
    an h-volume coefficient), 'to_g' divides.  The map is a pointwise
    rescaling, hence exactly invertible, and it matches the L^2 isometry
    |psi|^2 f^n dx = |phi|^2 f dx along the collar ray.
    """
    if direction not in ("to_h", "to_g"):
        raise InvalidParameter(f"direction must be 'to_h' or 'to_g', got {direction!r}")
    grid = np.asarray(grid, dtype=float)
    lo, hi = f.domain()
    if np.any(grid < lo * (1 - 1e-12)) or np.any(grid > hi * (1 + 1e-12)):
        raise InvalidParameter("grid leaves the factor's domain")
    w = f(grid) ** ((n - 1) / 2.0)
    coeffs = np.asarray(coeffs, dtype=float)
    return coeffs * w if direction == "to_h" else coeffs / w


def weighted_norm_sq(coeffs, grid, weight):
    """Trapezoid quadrature of |coeffs|^2 * weight over the grid."""
    coeffs = np.asarray(coeffs, dtype=float)
    dens = (coeffs ** 2 if coeffs.ndim == 1
            else np.sum(coeffs ** 2, axis=-1))
    return float(np.trapezoid(dens * weight, np.asarray(grid, dtype=float)))


@dataclass
class WarpedMetricSpec:
    """A collar metric f^2 (dx^2 + h_M), possibly reached by straightening
    dx^2 + rho^{-2} h_M first.

    The divergence field is the classification of the effective factor
    (after straightening when a warp is present); building a spec with a
    mismatched assertion raises.
    """

    n: int
    cross_section: object
    f: ConformalFactor
    rho: Warp | None = None
    label: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameter("total dimension must be at least 2")
        if self.rho is not None and not self.rho.integrable_at_zero():
            raise HypothesisViolation("warp must be integrable near 0")

    def effective_factor(self) -> ConformalFactor:
        if self.rho is None:
            return self.f
        _, ft, _ = reparametrize(self.rho, self.f)
        return ft

    @property
    def divergence(self) -> str:
        return classify_divergence(self.effective_factor()).verdict

    def describe(self):
        d = {
            "label": self.label,
            "n": self.n,
            "cross_section": self.cross_section.describe(),
            "factor": self.f.describe(),
            "divergence": self.divergence,
        }
        if self.rho is not None:
            d["rho"] = self.rho.describe()
        return d
