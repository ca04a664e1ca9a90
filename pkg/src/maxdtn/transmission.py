"""Two-media mode determinants and the eigenvalue-free region scan.

For a ball coated by two media meeting at the interface r = R, the
interior transmission eigenvalues of a given spherical mode are the zeros
of a denominator-cleared determinant built from the two Riccati-Bessel
pairs.  Zeros are counted by adaptive winding numbers on rectangles and
located by subdivision plus Newton polishing; a region scan certifies a
parabolic frequency region free of eigenvalues and calibrates its
constant.  The matching two-media boundary symbol T = w*T_tilde and its
approximate inverse T_1 live here as well.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CoincidentMedia, ContourThroughZero
from .mie import IMPEDANCE_SIGN, riccati_bessel
from .numerics import sqrt_upper

#: default exponent of the parabolic region boundary Im = C (Re + 1)^p
REGION_EXPONENT = 5.0 / 7.0


@dataclass
class TransmissionConfig:
    """Two constant media (eps, mu, c) sharing the interface r = R."""
    eps1: float
    mu1: float
    c1: float
    eps2: float
    mu2: float
    c2: float
    R: float = 1.0
    exponent: float = REGION_EXPONENT

    def __post_init__(self):
        for name in ("eps1", "mu1", "c1", "eps2", "mu2", "c2", "R"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        k1, k2 = self.c1 / self.mu1, self.c2 / self.mu2
        if abs(k1 - k2) > 1e-12 * max(k1, k2):
            warnings.warn(
                "c1/mu1 != c2/mu2: outside the hypotheses under which the "
                "parabolic eigenvalue-free region is established",
                stacklevel=2)
        if abs(self.eps1 * self.mu1 - self.eps2 * self.mu2) <= 1e-12 * (
                self.eps1 * self.mu1):
            warnings.warn(
                "eps1*mu1 == eps2*mu2: coincident wave speeds, outside the "
                "hypotheses of the eigenvalue-free region",
                stacklevel=2)

    @property
    def n1(self):
        return math.sqrt(self.eps1 * self.mu1)

    @property
    def n2(self):
        return math.sqrt(self.eps2 * self.mu2)


def mode_determinant(cfg: TransmissionConfig, ell, lam, pol, scaled=False):
    """Denominator-cleared determinant whose zeros are the (ell, pol)
    transmission eigenvalues.

    TE: i (c1 sqrt(eps1/mu1) psi'(x1) psi(x2) - c2 sqrt(eps2/mu2) psi'(x2) psi(x1)),
    TM: -i (c1 sqrt(eps1/mu1) psi(x1) psi'(x2) - c2 sqrt(eps2/mu2) psi(x2) psi'(x1)),
    with x_j = lam n_j R; entire in lam.  With ``scaled=True`` returns
    ``(value, relative_magnitude, log_scale)`` where the true determinant is
    value * e^{log_scale} and relative_magnitude is |value| over the larger
    of the two cleared products (the honest distance-to-zero measure).
    """
    lam = complex(lam)
    p1 = riccati_bessel(ell, lam * cfg.n1 * cfg.R)
    p2 = riccati_bessel(ell, lam * cfg.n2 * cfg.R)
    w1 = cfg.c1 * math.sqrt(cfg.eps1 / cfg.mu1)
    w2 = cfg.c2 * math.sqrt(cfg.eps2 / cfg.mu2)
    if pol == "TE":
        t1 = w1 * p1.dpsi * p2.psi
        t2 = w2 * p2.dpsi * p1.psi
        val = 1j * IMPEDANCE_SIGN * (t1 - t2)
    elif pol == "TM":
        t1 = w1 * p1.psi * p2.dpsi
        t2 = w2 * p2.psi * p1.dpsi
        val = -1j * IMPEDANCE_SIGN * (t1 - t2)
    else:
        raise ValueError("pol must be 'TE' or 'TM'")
    log_scale = p1.log_scale + p2.log_scale
    if scaled:
        mag = max(abs(t1), abs(t2), 1e-300)
        return val, abs(val) / mag, log_scale
    return val * np.exp(log_scale)


# ---------------------------------------------------------------------------
# winding numbers


_NEARZERO_REL = 1e-10


def _wrap(d):
    while d > math.pi:
        d -= 2.0 * math.pi
    while d < -math.pi:
        d += 2.0 * math.pi
    return d


def count_zeros(cfg: TransmissionConfig, ell, pol, rect, max_depth=24):
    """Number of determinant zeros inside a closed rectangle, by winding.

    ``rect`` is (re0, re1, im0, im1).  Edges are sampled adaptively until
    every phase step is below 0.8 rad; a sample whose relative magnitude
    drops under 1e-10 after three refinement levels raises
    :class:`ContourThroughZero` (the caller should perturb the rectangle).
    """
    re0, re1, im0, im1 = rect
    corners = [complex(re0, im0), complex(re1, im0),
               complex(re1, im1), complex(re0, im1), complex(re0, im0)]

    def f(z):
        val, rel, _ = mode_determinant(cfg, ell, z, pol, scaled=True)
        return val, rel

    # the determinant's phase turns at speed <= ~(n1+n2) R |dlam|, so seed
    # each edge well below a full turn per segment before refining
    per_unit = 2.5 * (cfg.n1 + cfg.n2) * cfg.R
    total = 0.0
    for za, zb in zip(corners[:-1], corners[1:]):
        nseed = max(8, int(math.ceil(abs(zb - za) * per_unit)))
        knots = [za + (zb - za) * t / nseed for t in range(nseed + 1)]
        fs = [f(z) for z in knots]
        stack = list(zip(knots[:-1], knots[1:], fs[:-1], fs[1:],
                         [0] * nseed))
        while stack:
            a, b, va, vb, depth = stack.pop()
            for v in (va, vb):
                if v[1] < _NEARZERO_REL and depth >= 3:
                    raise ContourThroughZero(
                        f"determinant {v[1]:.2e} of scale on the contour near {a:.6g}")
            d = _wrap(cmath.phase(vb[0]) - cmath.phase(va[0]))
            if abs(d) <= 0.8 or depth >= max_depth:
                if abs(d) > 0.8:
                    raise ContourThroughZero(
                        f"phase step {d:.2f} rad unresolved at depth {depth} near {a:.6g}")
                total += d
            else:
                m = 0.5 * (a + b)
                vm = f(m)
                stack.append((a, m, va, vm, depth + 1))
                stack.append((m, b, vm, vb, depth + 1))
    n = total / (2.0 * math.pi)
    if abs(n - round(n)) > 0.25:
        raise ContourThroughZero(f"non-integer winding {n:.3f} on {rect}")
    return int(round(n))


def _count_safe(cfg, ell, pol, rect, jitter=1e-3):
    """count_zeros with up to 4 rectangle perturbations on contour hits."""
    re0, re1, im0, im1 = rect
    for k in range(5):
        g = jitter * k * max(re1 - re0, im1 - im0, 1.0)
        try:
            return count_zeros(cfg, ell, pol,
                               (re0 - g, re1 + g, im0 - g, im1 + g))
        except ContourThroughZero:
            if k == 4:
                raise
    raise AssertionError("unreachable")


def _newton(cfg, ell, pol, z0, tol=1e-11, maxit=60):
    z = complex(z0)
    for _ in range(maxit):
        d = 1e-7 * max(1.0, abs(z))
        f0 = mode_determinant(cfg, ell, z, pol, scaled=True)[0]
        fp = mode_determinant(cfg, ell, z + d, pol, scaled=True)[0]
        fm = mode_determinant(cfg, ell, z - d, pol, scaled=True)[0]
        der = (fp - fm) / (2.0 * d)
        if der == 0.0:
            break
        step = f0 / der
        z -= step
        if abs(step) < tol * max(1.0, abs(z)):
            break
    return z


def locate_zeros(cfg: TransmissionConfig, ell, pol, rect, box_tol=1e-3):
    """All zeros in a rectangle by recursive subdivision + Newton polish."""
    out = []
    stack = [rect]
    while stack:
        r = stack.pop()
        re0, re1, im0, im1 = r
        n = _count_safe(cfg, ell, pol, r)
        if n == 0:
            continue
        if max(re1 - re0, im1 - im0) < box_tol:
            z = _newton(cfg, ell, pol, complex(0.5 * (re0 + re1), 0.5 * (im0 + im1)))
            out.extend([z] * n)
            continue
        rm, im = 0.5 * (re0 + re1), 0.5 * (im0 + im1)
        stack.extend([(re0, rm, im0, im), (rm, re1, im0, im),
                      (re0, rm, im, im1), (rm, re1, im, im1)])
    return sorted(out, key=lambda z: (z.real, z.imag))


# ---------------------------------------------------------------------------
# region scan and calibration


@dataclass
class TileReport:
    re0: float
    re1: float
    im0: float
    im1: float
    ell: int
    pol: str
    winding: int
    violators: list = field(default_factory=list)


def region_scan(cfg: TransmissionConfig, ell_max, re_max, C,
                im_max=None, n_tiles=12):
    """Winding counts over the region Re in (0, re_max],
    Im >= C (Re + 1)^exponent (capped at im_max).

    Tiles extend slightly below the curved boundary so the union covers the
    region; any zero found in a tile is located and kept as a violator only
    when it actually lies above the curve.  Returns the list of per-tile,
    per-mode reports; the region is certified free when no report carries a
    violator.
    """
    p = cfg.exponent
    if im_max is None:
        im_max = C * (re_max + 1.0) ** p + 10.0
    edges = np.linspace(0.0, re_max, n_tiles + 1)
    tiles = []
    for a, b in zip(edges[:-1], edges[1:]):
        im0 = C * (a + 1.0) ** p
        if im0 < im_max:
            tiles.append((float(a), float(b), float(im0), float(im_max)))
    hull = (tiles[0][0], tiles[-1][1], min(t[2] for t in tiles), im_max)
    reports = []
    for ell in range(1, ell_max + 1):
        for pol in ("TE", "TM"):
            # one bounding contour first: winding 0 there certifies every
            # tile at once (counts are nonnegative)
            if _count_safe(cfg, ell, pol, hull) == 0:
                reports.extend(TileReport(*t, ell, pol, 0) for t in tiles)
                continue
            for rect in tiles:
                n = _count_safe(cfg, ell, pol, rect)
                rep = TileReport(*rect, ell, pol, n)
                if n > 0:
                    zs = locate_zeros(cfg, ell, pol, rect)
                    rep.violators = [z for z in zs
                                     if z.imag >= C * (z.real + 1.0) ** p - 1e-9]
                reports.append(rep)
    return reports


def region_is_free(reports):
    return not any(r.violators for r in reports)


def calibrate_C(cfg: TransmissionConfig, ell_max, re_max, C_hi=8.0,
                tol=0.05, n_tiles=12):
    """Smallest C (to within tol) whose parabolic region is zero-free.

    Plain bisection on C; the returned value carries a one-tol safety
    margin so the certified region stays clear of the last violator found.
    """
    if not region_is_free(region_scan(cfg, ell_max, re_max, C_hi, n_tiles=n_tiles)):
        raise ValueError(f"region not zero-free even at C = {C_hi}")
    lo, hi = 0.0, C_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if region_is_free(region_scan(cfg, ell_max, re_max, mid, n_tiles=n_tiles)):
            hi = mid
        else:
            lo = mid
    return hi + tol


# ---------------------------------------------------------------------------
# two-media boundary symbol


def symbol_T(cfg: TransmissionConfig, sp, r0, beta):
    """(T, w, T_tilde, T_1) of the two-media matching at one cotangent point.

    T = kappa (rho1 - rho2)(I - (rho1 rho2)^{-1} B) with kappa = c1/mu1;
    w = z^2 kappa (eps1 mu1 - eps2 mu2); T_tilde = T / w; and the
    approximate inverse T_1 = <xi'>^{-1} (rho1 + rho2)(I + (rho1 rho2 -
    r0)^{-1} B), so T_1 T_tilde = <xi'>^{-1} I.  Raises
    :class:`CoincidentMedia` when eps1 mu1 == eps2 mu2 (w = 0).
    """
    dm = cfg.eps1 * cfg.mu1 - cfg.eps2 * cfg.mu2
    if abs(dm) <= 1e-12 * (cfg.eps1 * cfg.mu1):
        raise CoincidentMedia("eps1*mu1 == eps2*mu2: w vanishes")
    z = sp.z
    kappa = cfg.c1 / cfg.mu1
    rho1 = sqrt_upper(z * z * cfg.eps1 * cfg.mu1 - r0)
    rho2 = sqrt_upper(z * z * cfg.eps2 * cfg.mu2 - r0)
    beta = np.asarray(beta, dtype=complex)
    B = np.outer(beta, beta)
    eye = np.eye(3)
    T = kappa * (rho1 - rho2) * (eye - B / (rho1 * rho2))
    w = z * z * kappa * dm
    T_tilde = T / w
    bracket = math.sqrt(1.0 + float(np.real(r0)))
    T1 = (rho1 + rho2) * (eye + B / (rho1 * rho2 - r0)) / bracket
    return T, w, T_tilde, T1
