"""Cross-section geometry, represented purely through Dirac spectra.

The collar analysis only ever consumes the eigenvalues of the tangential
operator A and the pairing that sends an eigenvalue to its negative, so a
cross-section is stored as a spectrum generator: circles and flat tori
with either spin structure are built in, anything else enters as an
explicit eigenvalue list asserted by the user.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter

CIRCLE_TRIVIAL = "CircleTrivial"
CIRCLE_NONTRIVIAL = "CircleNontrivial"
FLAT_TORUS = "FlatTorus"
USER_SPECTRUM = "UserSpectrum"

# eigenvalues closer than this merge into one multiplicity bucket
DEDUP_TOL = 1e-9


def _merge(values, tol=DEDUP_TOL):
    """Collapse a sorted array of eigenvalues into (value, multiplicity)."""
    out = []
    for v in np.sort(np.asarray(values, dtype=float)):
        if out and abs(v - out[-1][0]) <= tol:
            out[-1][1] += 1
        else:
            out.append([float(v), 1])
    return [(v, m) for v, m in out]


@dataclass(frozen=True)
class CrossSection:
    """The boundary manifold (M, h_M) with a spin structure.

    Parameters
    ----------
    kind : str
        One of CircleTrivial, CircleNontrivial, FlatTorus, UserSpectrum.
    L : float
        Circle length (circle kinds).
    basis : array (d, d)
        Lattice basis, rows are generators (torus kind).
    parity : tuple of bool
        Spin structure per lattice generator; True shifts the dual
        lattice by half the corresponding dual generator (torus kind).
    spectrum : tuple of (eigenvalue, multiplicity)
        Explicit Dirac spectrum (UserSpectrum kind).  The essential
        self-adjointness of the underlying operator is asserted by the
        caller, not checked.
    """

    kind: str
    name: str = ""
    L: float = 2 * np.pi
    basis: tuple = ()
    parity: tuple = ()
    spectrum: tuple = ()

    def __post_init__(self):
        if self.kind in (CIRCLE_TRIVIAL, CIRCLE_NONTRIVIAL):
            if not self.L > 0:
                raise InvalidParameter(f"circle length must be positive, got {self.L}")
        elif self.kind == FLAT_TORUS:
            B = np.asarray(self.basis, dtype=float)
            if B.ndim != 2 or B.shape[0] != B.shape[1]:
                raise InvalidParameter("lattice basis must be a square matrix")
            if abs(np.linalg.det(B)) < 1e-12:
                raise InvalidParameter("lattice basis is degenerate")
            if len(self.parity) != B.shape[0]:
                raise InvalidParameter("parity vector length must match lattice rank")
        elif self.kind == USER_SPECTRUM:
            if not self.spectrum:
                raise InvalidParameter("UserSpectrum needs a non-empty eigenvalue list")
            vals = [v for v, m in self.spectrum]
            mults = [m for v, m in self.spectrum]
            if any(not np.isfinite(v) for v in vals):
                raise InvalidParameter("eigenvalues must be finite reals")
            if any(int(m) != m or m < 1 for m in mults):
                raise InvalidParameter("multiplicities must be integers >= 1")
            if any(vals[i] > vals[i + 1] for i in range(len(vals) - 1)):
                raise InvalidParameter("UserSpectrum list must be sorted")
        else:
            raise InvalidParameter(f"unknown cross-section kind {self.kind!r}")

    @property
    def dim_m(self):
        if self.kind in (CIRCLE_TRIVIAL, CIRCLE_NONTRIVIAL):
            return 1
        if self.kind == FLAT_TORUS:
            return len(self.parity)
        return 1  # user spectra carry no intrinsic dimension; default collar use

    def dirac_spectrum(self, cutoff):
        """Eigenvalues of D_M in [-cutoff, cutoff] with multiplicities."""
        if self.kind == CIRCLE_TRIVIAL:
            return circle_spectrum(self.L, "trivial", cutoff)
        if self.kind == CIRCLE_NONTRIVIAL:
            return circle_spectrum(self.L, "nontrivial", cutoff)
        if self.kind == FLAT_TORUS:
            return torus_spectrum(self.basis, self.parity, cutoff)
        return [(v, int(m)) for v, m in self.spectrum if abs(v) <= cutoff]

    def describe(self):
        d = {"kind": self.kind}
        if self.name:
            d["name"] = self.name
        if self.kind in (CIRCLE_TRIVIAL, CIRCLE_NONTRIVIAL):
            d["L"] = self.L
        elif self.kind == FLAT_TORUS:
            d["basis"] = [list(map(float, row)) for row in self.basis]
            d["parity"] = list(self.parity)
        else:
            d["spectrum"] = [[float(v), int(m)] for v, m in self.spectrum]
        return d


@dataclass(frozen=True)
class ModeSpectrum:
    """Spectrum of the tangential operator A, truncated to |lambda| <= cutoff.

    The multiset is symmetric under lambda -> -lambda; this is the
    structural consequence of A anti-commuting with Clifford
    multiplication by the collar normal.
    """

    entries: tuple          # ((lambda, multiplicity), ...) sorted by lambda
    cutoff: float
    parity_n: str           # "even" | "odd"

    def __post_init__(self):
        for lam, mult in self.entries:
            if abs(lam) > self.cutoff + DEDUP_TOL:
                raise InvalidParameter("entry above the stated cutoff")
            if mult < 1:
                raise InvalidParameter("multiplicities must be >= 1")
        if not self.is_symmetric():
            raise InvalidParameter("mode spectrum must be symmetric about 0")

    def is_symmetric(self, tol=DEDUP_TOL):
        ent = sorted(self.entries)
        neg = sorted([(-lam, m) for lam, m in self.entries])
        if len(ent) != len(neg):
            return False
        return all(abs(a[0] - b[0]) <= tol and a[1] == b[1]
                   for a, b in zip(ent, neg))

    def nonnegative_modes(self):
        """(lambda, multiplicity) for lambda >= 0; the negative half is
        recovered through the Clifford pairing."""
        return [(lam, m) for lam, m in self.entries if lam >= -DEDUP_TOL]

    def total_count(self):
        return sum(m for _, m in self.entries)

    def as_list(self):
        return [[float(lam), int(m)] for lam, m in self.entries]


def circle_spectrum(L, spin, cutoff):
    """Dirac eigenvalues of the circle of length L in [-cutoff, cutoff].

    Geometer's convention: eigenvalues 2 pi (k + sigma) / L with sigma = 0
    for the trivial (periodic) structure and sigma = 1/2 for the
    nontrivial (anti-periodic) one, each Fourier mode with multiplicity 1.
    """
    if not L > 0:
        raise InvalidParameter(f"circle length must be positive, got {L}")
    if cutoff < 0:
        raise InvalidParameter("cutoff must be >= 0")
    if spin not in ("trivial", "nontrivial"):
        raise InvalidParameter(f"spin must be 'trivial' or 'nontrivial', got {spin!r}")
    sigma = 0.0 if spin == "trivial" else 0.5
    scale = 2 * np.pi / L
    kmax = int(np.floor(cutoff / scale - sigma))
    kmin = int(np.ceil(-cutoff / scale - sigma))
    ks = np.arange(kmin, kmax + 1)
    return [(float(scale * (k + sigma)), 1) for k in ks]


def torus_spectrum(basis, parity, cutoff):
    """Dirac eigenvalues of a flat torus R^d / Lambda in [-cutoff, cutoff].

    Eigenvalues are +-2 pi |gamma* + chi| over the dual lattice, where chi
    shifts by half a dual generator per True parity entry.  Each nonzero
    level carries multiplicity 2^{floor(d/2)-1} per sign and per lattice
    point; a zero level carries the full spinor rank.
    """
    B = np.asarray(basis, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise InvalidParameter("lattice basis must be a square matrix")
    d = B.shape[0]
    if abs(np.linalg.det(B)) < 1e-12:
        raise InvalidParameter("lattice basis is degenerate")
    if len(parity) != d:
        raise InvalidParameter("parity vector length must match lattice rank")
    if cutoff < 0:
        raise InvalidParameter("cutoff must be >= 0")
    if d == 1:
        spin = "nontrivial" if parity[0] else "trivial"
        return circle_spectrum(abs(B[0, 0]), spin, cutoff)

    dual = np.linalg.inv(B).T          # rows are dual generators
    chi = 0.5 * np.array([1.0 if p else 0.0 for p in parity]) @ dual
    radius = cutoff / (2 * np.pi)
    # |m_i| <= |b_i| (radius + |chi|) bounds the integer box
    bound = np.linalg.norm(B, axis=1) * (radius + np.linalg.norm(chi)) + 1
    ranges = [np.arange(-int(np.ceil(b)), int(np.ceil(b)) + 1) for b in bound]
    mesh = np.meshgrid(*ranges, indexing="ij")
    ms = np.stack([g.ravel() for g in mesh], axis=1)
    pts = ms @ dual + chi
    norms = 2 * np.pi * np.linalg.norm(pts, axis=1)
    norms = norms[norms <= cutoff + DEDUP_TOL]
    rank = 2 ** (d // 2)
    half = rank // 2
    pos, zero = [], 0
    for v, m in _merge(norms):
        if v <= DEDUP_TOL:
            zero += m * rank
        else:
            pos.append((v, m * half))
    out = [(-v, m) for v, m in reversed(pos)]
    if zero:
        out.append((0.0, zero))
    out.extend(pos)
    return out


def build_A(cs: CrossSection, n: int, cutoff: float) -> ModeSpectrum:
    """Spectrum of the tangential operator A for total dimension n.

    A equals D_M when n is odd; when n is even it is the block operator
    diag(D_M, -D_M), so every eigenvalue contributes with its negative
    and the symmetrized multiplicities double.
    """
    if cs.kind != USER_SPECTRUM and n != cs.dim_m + 1:
        raise InvalidParameter(
            f"total dimension {n} inconsistent with cross-section dimension {cs.dim_m}")
    if n < 2:
        raise InvalidParameter("total dimension must be at least 2")
    base = cs.dirac_spectrum(cutoff)
    values = []
    for lam, m in base:
        values.extend([lam] * m)
        if n % 2 == 0:
            values.extend([-lam] * m)
    entries = tuple(_merge(values))
    return ModeSpectrum(entries=entries, cutoff=float(cutoff),
                        parity_n="even" if n % 2 == 0 else "odd")
