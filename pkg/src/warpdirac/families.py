"""Conformal factors f and warp functions rho on a collar interval.

A conformal factor is a positive function on (0, epsilon] (or on (0, inf)
for cusp-type families, flagged by ``epsilon=None``).  The collar boundary
sits at the end where the geometry degenerates: x -> 0 for the singular
families, t -> infinity for the cusp.  Each family knows its exact
integral where one exists, so divergence questions about int f dx are
answered analytically for the built-in catalog and only tabulated data
falls back to extrapolation heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter

# Family codes used by the compiled ODE kernels (see _stepper.py).
F_POWER = 0      # scale * x**(-exponent)
F_CUSP = 1       # scale * exp(-x)
F_RECIP_SIN = 2  # scale / sin(x)
F_TABLE = 3     # log-log interpolation of samples

BOUNDARY_ZERO = "zero"
BOUNDARY_INF = "infinity"

# Relative depth of the quadrature / integration floor: partial integrals
# and trajectories stop at delta_min = DELTA_MIN_REL * epsilon.
DELTA_MIN_REL = 1e-8

# Truncation point used in place of infinity for cusp-type domains.
CUSP_DOMAIN_CAP = 40.0


class ConformalFactor:
    """Base class: positive weight function on the collar interval."""

    family = "abstract"
    #: which end of the domain carries the boundary manifold
    boundary_end = BOUNDARY_ZERO

    def __init__(self, epsilon):
        if epsilon is not None and not epsilon > 0:
            raise InvalidParameter(f"epsilon must be positive, got {epsilon}")
        self.epsilon = epsilon

    # -- evaluation ----------------------------------------------------
    def __call__(self, x):
        raise NotImplementedError

    def integral(self, a, b):
        """Exact integral of f over [a, b] (a, b inside the domain)."""
        raise NotImplementedError

    # -- divergence ----------------------------------------------------
    def exact_divergence(self):
        """'divergent' / 'convergent' for analytic families, None if the
        family cannot decide (tabulated data)."""
        return None

    # -- plumbing -------------------------------------------------------
    def stepper_code(self):
        """(f_id, c, p, xs, fs) tuple consumed by the compiled kernels."""
        raise NotImplementedError

    def domain(self):
        """(lo, hi) usable interval, infinity replaced by a finite cap."""
        hi = self.epsilon if self.epsilon is not None else CUSP_DOMAIN_CAP
        lo = DELTA_MIN_REL * (self.epsilon if self.epsilon is not None else 1.0)
        return lo, hi

    def delta_min(self):
        return self.domain()[0]

    def describe(self):
        d = {"family": self.family, "epsilon": self.epsilon}
        d.update(self._params())
        return d

    def _params(self):
        return {}

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self.describe().items())
        return f"{type(self).__name__}({inner})"


class PowerLawFactor(ConformalFactor):
    """f(x) = scale * x**(-p) on (0, epsilon]."""

    family = "power"

    def __init__(self, p, epsilon=1.0, scale=1.0):
        super().__init__(epsilon)
        if epsilon is None:
            raise InvalidParameter("power-law factors need a finite epsilon")
        if scale <= 0:
            raise InvalidParameter("scale must be positive")
        self.p = float(p)
        self.scale = float(scale)

    def __call__(self, x):
        return self.scale * np.asarray(x, dtype=float) ** (-self.p)

    def integral(self, a, b):
        if self.p == 1.0:
            return self.scale * (np.log(b) - np.log(a))
        q = 1.0 - self.p
        return self.scale * (b ** q - a ** q) / q

    def exact_divergence(self):
        return "divergent" if self.p >= 1.0 else "convergent"

    def stepper_code(self):
        return F_POWER, self.scale, self.p, _EMPTY, _EMPTY

    def _params(self):
        return {"p": self.p, "scale": self.scale}


class ConstantFactor(PowerLawFactor):
    """f == c on (0, epsilon]."""

    family = "constant"

    def __init__(self, c=1.0, epsilon=1.0):
        if c <= 0:
            raise InvalidParameter("constant factor must be positive")
        super().__init__(0.0, epsilon=epsilon, scale=c)
        self.c = float(c)

    def exact_divergence(self):
        return "convergent"

    def _params(self):
        return {"c": self.c}


class HyperbolicFactor(PowerLawFactor):
    """f(x) = 1/x, the model divergent factor."""

    family = "hyperbolic"

    def __init__(self, epsilon=1.0):
        super().__init__(1.0, epsilon=epsilon, scale=1.0)

    def _params(self):
        return {}


class ExponentialCuspFactor(ConformalFactor):
    """f(t) = scale * exp(-t) on (0, inf); the boundary end is t -> inf.

    Stored in t-coordinates; the infinite right endpoint is an explicit
    flag (epsilon=None), never a sentinel number.
    """

    family = "cusp"
    boundary_end = BOUNDARY_INF

    def __init__(self, scale=1.0):
        super().__init__(None)
        if scale <= 0:
            raise InvalidParameter("scale must be positive")
        self.scale = float(scale)

    def __call__(self, x):
        return self.scale * np.exp(-np.asarray(x, dtype=float))

    def integral(self, a, b):
        return self.scale * (np.exp(-a) - np.exp(-b))

    def exact_divergence(self):
        return "convergent"

    def stepper_code(self):
        return F_CUSP, self.scale, 0.0, _EMPTY, _EMPTY

    def domain(self):
        return 1e-8, CUSP_DOMAIN_CAP

    def _params(self):
        return {"scale": self.scale}


class ReciprocalSineFactor(ConformalFactor):
    """f(t) = scale / sin(t) on (0, epsilon], epsilon < pi.

    This is the factor produced by straightening the warped hyperbolic
    family x^{-2}(dx^2 + ((1+x^2)^2/4) h_M); it behaves like 1/t near 0.
    """

    family = "recip_sin"

    def __init__(self, epsilon=np.pi / 2, scale=1.0):
        super().__init__(epsilon)
        if not 0 < epsilon < np.pi:
            raise InvalidParameter("recip_sin needs 0 < epsilon < pi")
        if scale <= 0:
            raise InvalidParameter("scale must be positive")
        self.scale = float(scale)

    def __call__(self, x):
        return self.scale / np.sin(np.asarray(x, dtype=float))

    def integral(self, a, b):
        # int csc = log tan(x/2)
        return self.scale * (np.log(np.tan(b / 2)) - np.log(np.tan(a / 2)))

    def exact_divergence(self):
        return "divergent"

    def stepper_code(self):
        return F_RECIP_SIN, self.scale, 0.0, _EMPTY, _EMPTY

    def _params(self):
        return {"scale": self.scale}


class TabulatedFactor(ConformalFactor):
    """Positive samples (x_i, f_i) on a grid covering (delta_table, epsilon].

    Evaluation interpolates log f against log x; integrals use the same
    interpolant.  Divergence of int_0 f dx is genuinely undecidable from
    samples, so ``exact_divergence`` returns the asserted class when one
    was attached (e.g. inherited through an exact reparametrization) and
    None otherwise.
    """

    family = "tabulated"

    def __init__(self, xs, fs, epsilon=None, asserted_divergence=None):
        xs = np.asarray(xs, dtype=float)
        fs = np.asarray(fs, dtype=float)
        if xs.size == 0:
            raise InvalidParameter("empty tabulation")
        if xs.ndim != 1 or xs.shape != fs.shape:
            raise InvalidParameter("xs and fs must be 1-d arrays of equal length")
        if np.any(np.diff(xs) <= 0):
            raise InvalidParameter("sample grid must be strictly increasing")
        if np.any(fs <= 0) or np.any(xs <= 0):
            raise InvalidParameter("tabulated factor must be strictly positive")
        super().__init__(float(xs[-1]) if epsilon is None else epsilon)
        self.xs = xs
        self.fs = fs
        self.log_xs = np.log(xs)
        self.log_fs = np.log(fs)
        self.asserted_divergence = asserted_divergence

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(np.interp(np.log(x), self.log_xs, self.log_fs))

    def integral(self, a, b):
        # trapezoid on a log-spaced refinement of the sample grid
        t = np.geomspace(max(a, self.xs[0]), min(b, self.xs[-1]), 4097)
        return float(np.trapezoid(self(t), t))

    def exact_divergence(self):
        return self.asserted_divergence

    def stepper_code(self):
        return F_TABLE, 1.0, 0.0, self.log_xs, self.log_fs

    def domain(self):
        return float(self.xs[0]), float(min(self.xs[-1], self.epsilon))

    def _params(self):
        return {"n_samples": int(self.xs.size),
                "x_range": (float(self.xs[0]), float(self.xs[-1]))}


_EMPTY = np.empty(0)


# ----------------------------------------------------------------------
# Warp functions rho for the dx^2 + rho^{-2} h_M normal form.
# ----------------------------------------------------------------------

class Warp:
    """Positive warp rho on (0, epsilon); must be L^1 at 0 to straighten."""

    family = "abstract"

    def __init__(self, epsilon=1.0):
        self.epsilon = float(epsilon)

    def __call__(self, x):
        raise NotImplementedError

    def t_of_x(self, x):
        """t(x) = int_0^x rho, the straightening coordinate."""
        raise NotImplementedError

    def x_of_t(self, t):
        raise NotImplementedError

    def integrable_at_zero(self):
        raise NotImplementedError

    def describe(self):
        return {"family": self.family, "epsilon": self.epsilon}


class ConstantWarp(Warp):
    family = "constant"

    def __init__(self, c=1.0, epsilon=1.0):
        super().__init__(epsilon)
        if c <= 0:
            raise InvalidParameter("warp must be positive")
        self.c = float(c)

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.c)

    def t_of_x(self, x):
        return self.c * np.asarray(x, dtype=float)

    def x_of_t(self, t):
        return np.asarray(t, dtype=float) / self.c

    def integrable_at_zero(self):
        return True

    def describe(self):
        return {"family": self.family, "c": self.c, "epsilon": self.epsilon}


class PowerLawWarp(Warp):
    """rho(x) = x**(-q); integrable at 0 exactly when q < 1."""

    family = "power"

    def __init__(self, q, epsilon=1.0):
        super().__init__(epsilon)
        self.q = float(q)

    def __call__(self, x):
        return np.asarray(x, dtype=float) ** (-self.q)

    def t_of_x(self, x):
        r = 1.0 - self.q
        return np.asarray(x, dtype=float) ** r / r

    def x_of_t(self, t):
        r = 1.0 - self.q
        return (r * np.asarray(t, dtype=float)) ** (1.0 / r)

    def integrable_at_zero(self):
        return self.q < 1.0

    def describe(self):
        return {"family": self.family, "q": self.q, "epsilon": self.epsilon}


class HalfAngleWarp(Warp):
    """rho(x) = 2/(1+x^2); straightens the hyperbolic family, t = 2 arctan x."""

    family = "half_angle"

    def __call__(self, x):
        return 2.0 / (1.0 + np.asarray(x, dtype=float) ** 2)

    def t_of_x(self, x):
        return 2.0 * np.arctan(np.asarray(x, dtype=float))

    def x_of_t(self, t):
        return np.tan(np.asarray(t, dtype=float) / 2.0)

    def integrable_at_zero(self):
        return True


class DiskWarp(Warp):
    """rho(x) = 1/(1-x) on (0, epsilon], epsilon < 1; t = -log(1-x).

    This is the warp of the flat metric written against the boundary
    circle of the unit disk.
    """

    family = "disk"

    def __init__(self, epsilon=0.9):
        if not 0 < epsilon < 1:
            raise InvalidParameter("disk warp needs epsilon in (0, 1)")
        super().__init__(epsilon)

    def __call__(self, x):
        return 1.0 / (1.0 - np.asarray(x, dtype=float))

    def t_of_x(self, x):
        return -np.log(1.0 - np.asarray(x, dtype=float))

    def x_of_t(self, t):
        return 1.0 - np.exp(-np.asarray(t, dtype=float))

    def integrable_at_zero(self):
        return True


FACTOR_FAMILIES = {
    "power": PowerLawFactor,
    "constant": ConstantFactor,
    "hyperbolic": HyperbolicFactor,
    "cusp": ExponentialCuspFactor,
    "recip_sin": ReciprocalSineFactor,
    "tabulated": TabulatedFactor,
}

WARP_FAMILIES = {
    "constant": ConstantWarp,
    "power": PowerLawWarp,
    "half_angle": HalfAngleWarp,
    "disk": DiskWarp,
}
