"""Exact per-mode impedances on the ball (separated-variables oracle).

Riccati-Bessel functions psi_l(x) = x j_l(x) and chi_l(x) = -x y_l(x) are
evaluated for complex argument by regime-switched recurrences (series near
zero, downward for |x| below the turning point, upward above it).  The exact
interior impedance of each vector spherical mode is a ratio of psi_l and its
derivative; it serves as the reference the boundary-symbol eigenvalues are
tested against.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InteriorResonance
from .geometry import GammaSeries, SurfaceChart, MediaField, beta_pointwise
from .eikonal import eikonal_coeffs
from .spectral import split_lambda, rho as rho_symbol
from .transport import transport_coeffs, boundary_symbol

#: global sign convention: the impedance is the one whose high-frequency
#: limit on the perpendicular (TE) polarization is rho / (z mu0) with
#: Im rho > 0.  Shared by the transmission determinants so both sides of a
#: two-media matching use the same orientation of the normal.
IMPEDANCE_SIGN = 1.0

#: |Im x| beyond which the returned pair is left scaled by e^{-|Im x|}
_SCALE_THRESHOLD = 300.0


@dataclass(frozen=True)
class RiccatiPair:
    """(psi, dpsi) scaled by e^{-log_scale}; true values are psi*e^{log_scale}."""
    psi: complex
    dpsi: complex
    log_scale: float


def _sin_cos_scaled(x):
    """(sin x, cos x) * e^{-|Im x|}, overflow-free for any Im x."""
    s = abs(x.imag)
    ep = cmath.exp(1j * x - s)     # modulus e^{-Im x - s} <= 1
    em = cmath.exp(-1j * x - s)    # modulus e^{ Im x - s} <= 1
    return (ep - em) / 2j, (ep + em) / 2.0


def _series_pair(ell, x, terms=120):
    """Taylor evaluation of (psi_ell, psi_ell') without the x^{ell+1} prefactor.

    Returns (S, dS, log_pref) with psi = S * e^{log_pref}; the prefactor is
    kept in log form so large ell and small |x| cannot underflow silently.
    """
    # psi_ell = x^{ell+1}/(2ell+1)!! * sum_k c_k t^k,  t = -x^2/2,
    # c_0 = 1, c_k = c_{k-1} / (k (2ell+2k+1))
    t = -x * x / 2.0
    c = 1.0 + 0.0j
    S = c
    dS = (ell + 1.0) * c          # derivative sum: (ell+1+2k) c_k t^k
    tk = 1.0 + 0.0j
    for k in range(1, terms):
        c = c / (k * (2.0 * ell + 2.0 * k + 1.0))
        tk = tk * t
        term = c * tk
        S += term
        dS += (ell + 1.0 + 2.0 * k) * term
        if abs(term) < 1e-20 * abs(S):
            break
    # log prefactor: (ell+1) log x - log (2ell+1)!!
    log_dd = math.lgamma(2.0 * ell + 2.0) - ell * math.log(2.0) - math.lgamma(ell + 1.0)
    log_pref = (ell + 1.0) * cmath.log(x) - log_dd
    return S, dS / x, log_pref


def _psi_series(ell, x):
    S, dS, log_pref = _series_pair(ell, x)
    s = abs(x.imag)
    shift = log_pref.real - s
    if abs(shift) < _SCALE_THRESHOLD:
        fac = cmath.exp(complex(shift, log_pref.imag))
        return S * fac, dS * fac, s
    # keep everything in the reported exponent
    fac = cmath.exp(1j * log_pref.imag)
    return S * fac, dS * fac, log_pref.real


def _psi_logderiv(ell, x):
    """psi pair by the downward log-derivative continued fraction.

    D_n = psi_n'/psi_n obeys D_{n-1} = n/x - 1/(D_n + n/x); running it
    downward from well past max(ell, |x|) is stable for complex x (the
    upward three-term recurrence is not once the argument leaves the real
    axis).  psi_ell itself is rebuilt from psi_0 = sin x and the ratio
    chain psi_n/psi_{n-1} = 1/(D_n + n/x), with an exponent accumulator so
    neither deep decay nor growth can overflow.

    Returns (psi, dpsi, log_scale, mismatch); mismatch compares the sweep's
    own D_0 with cot x and flags a failed recurrence.
    """
    ax = abs(x)
    start = max(ell, int(ax)) + 25 + int(4.0 * ax ** (1.0 / 3.0))
    D = 0.0 + 0.0j
    ratios = [0.0j] * (ell + 1)
    D_ell = None
    for n in range(start, 0, -1):
        an = n / x
        denom = D + an
        if denom == 0.0:
            denom = 1e-280 + 0.0j
        if n <= ell:
            ratios[n] = 1.0 / denom
        D = an - 1.0 / denom
        if n - 1 == ell:
            D_ell = D
    sn, cs = _sin_cos_scaled(x)
    scale0 = max(abs(sn), abs(cs))
    mismatch = abs(D * sn - cs) / scale0 if scale0 > 0.0 else 0.0
    if ell == 0:
        return sn, cs, abs(x.imag), mismatch
    psi = sn
    log_extra = 0.0
    for n in range(1, ell + 1):
        psi = psi * ratios[n]
        m = abs(psi)
        if m > 1e150 or (0.0 < m < 1e-150):
            psi /= m
            log_extra += math.log(m)
    return psi, psi * D_ell, abs(x.imag) + log_extra, mismatch


def riccati_bessel(ell, x):
    """First-kind Riccati-Bessel pair (psi_ell(x), psi_ell'(x)) for complex x.

    Returns a :class:`RiccatiPair`; when |Im x| is large the pair is returned
    scaled by e^{-|Im x|} with ``log_scale = |Im x|`` (plus any renormalizing
    exponent picked up along the ratio chain), otherwise the true values with
    ``log_scale = 0``.  The sweep's own order-0 member is checked against
    cot x; disagreement beyond 1e-8 switches to the Taylor series.
    """
    x = complex(x)
    if x == 0.0:
        return RiccatiPair(0.0j, 1.0 + 0.0j if ell == 0 else 0.0j, 0.0)
    ax = abs(x)
    if ax < 0.2 * math.sqrt(ell + 1.0) or ax < 1e-2:
        psi, dpsi, ls = _psi_series(ell, x)
    else:
        psi, dpsi, ls, mismatch = _psi_logderiv(ell, x)
        if mismatch > 1e-8:
            psi, dpsi, ls = _psi_series(ell, x)
    if abs(ls) <= _SCALE_THRESHOLD:
        fac = math.exp(ls)
        return RiccatiPair(psi * fac, dpsi * fac, 0.0)
    return RiccatiPair(psi, dpsi, ls)


def riccati_second(ell, x):
    """Second-kind pair (chi_ell(x), chi_ell'(x)), chi_l = -x y_l(x).

    The forward recurrence is stable for chi at every order (it is the
    dominant solution), so a single branch suffices.
    """
    x = complex(x)
    s = abs(x.imag)
    sn, cs = _sin_cos_scaled(x)
    pm, p = sn, cs               # chi_{-1} = -sin x ... chi_0 = cos x
    pm = -sn
    for n in range(ell):
        pm, p = p, (2.0 * n + 1.0) / x * p - pm
    dchi = pm - (ell / x) * p if ell > 0 else -sn
    if s <= _SCALE_THRESHOLD:
        fac = math.exp(s)
        return RiccatiPair(p * fac, dchi * fac, 0.0)
    return RiccatiPair(p, dchi, s)


@dataclass(frozen=True)
class ModeImpedance:
    ell: int
    pol: str                     # "TE" | "TM"
    lam: complex
    value: complex
    resonant: bool = False


#: relative floor under which a mode denominator counts as resonant
_RESONANCE_FLOOR = 1e-12


def exact_mode_impedance(ell, lam, eps, mu, R, pol):
    """Exact interior impedance of the (ell, pol) mode of the ball of radius R.

    TE: Z = i sqrt(eps/mu) psi'(kR)/psi(kR); TM: Z = -i sqrt(eps/mu)
    psi(kR)/psi'(kR), with k = lam sqrt(eps mu).  Raises
    :class:`InteriorResonance` when the denominator of the ratio falls under
    1e-12 of the pair's scale (reported, never regularized).
    """
    lam = complex(lam)
    k = lam * cmath.sqrt(eps * mu)
    x = k * R
    rp = riccati_bessel(ell, x)
    scale = max(abs(rp.psi), abs(rp.dpsi))
    imp = 1j * cmath.sqrt(eps / mu) * IMPEDANCE_SIGN
    if pol == "TE":
        if abs(rp.psi) < _RESONANCE_FLOOR * scale:
            raise InteriorResonance(f"psi_{ell}({x:.6g}) vanishes (TE mode)")
        val = imp * rp.dpsi / rp.psi
    elif pol == "TM":
        if abs(rp.dpsi) < _RESONANCE_FLOOR * scale:
            raise InteriorResonance(f"psi_{ell}'({x:.6g}) vanishes (TM mode)")
        val = -imp * rp.psi / rp.dpsi
    else:
        raise ValueError("pol must be 'TE' or 'TM'")
    return ModeImpedance(ell=ell, pol=pol, lam=lam, value=val)


# ---------------------------------------------------------------------------
# per-mode comparison against the boundary symbol


def _symbol_eigenvalues(sp, chart, media, base, r0_target, order):
    """(TE, TM) eigenvalues of the truncated boundary symbol at fixed r0.

    The covector is aligned with the first coordinate direction; TE is the
    tangential direction perpendicular to beta, TM the beta direction.
    """
    beta_unit, g = beta_pointwise(chart, base[0], base[1], 1.0, 0.0)
    s = math.sqrt(r0_target / g)
    xi = (s, 0.0)
    gs = GammaSeries(chart, base, n1=3, order=6)
    ps = eikonal_coeffs(gs, media, sp, xi, N=3)
    tab = transport_coeffs(ps, media, N=2, J=1)
    sym = boundary_symbol(tab)
    M = sym.m if order == 0 else sym.m + sp.h * sym.m_tilde_full
    nu = np.array([c.value for c in gs.nu])
    beta = np.array(beta_unit) * s
    bhat = (beta / np.linalg.norm(beta.real)).astype(complex)
    phat = np.cross(nu.real, bhat.real).astype(complex)
    blk = np.array([[u @ M @ v for v in (phat, bhat)] for u in (phat, bhat)])
    w, V = np.linalg.eig(blk)
    if abs(V[0, 0]) >= abs(V[0, 1]):
        te, tm = w[0], w[1]
    else:
        te, tm = w[1], w[0]
    return te, tm


def dtn_compare(ell_list, lam, media, R=1.0, orders=(0, 1)):
    """Exact mode impedances vs boundary-symbol eigenvalues on the ball.

    ``media`` is either a MediaField of constant fields or an (eps, mu) pair.
    Each row covers one (ell, pol): the exact value and the relative error of
    every requested truncation order at r0 = h^2 ell(ell+1)/R^2.  Modes at an
    interior resonance are skipped and flagged.  Requires theta >= h^{2/5}
    (the admissible-frequency region of the symbol estimates).
    """
    if isinstance(media, tuple):
        eps0, mu0 = media
        media = MediaField.constant(eps0, mu0)
    chart = SurfaceChart.sphere(R)
    base = (math.pi / 2.0, 0.0)
    eps0, mu0 = media.boundary_values(chart, base[0], base[1])
    sp = split_lambda(lam)
    if sp.theta < sp.h ** 0.4:
        raise ConfigError(
            f"theta={sp.theta:.3g} below h^(2/5)={sp.h ** 0.4:.3g}: "
            "outside the admissible frequency region")
    rows = []
    for ell in ell_list:
        r0 = sp.h ** 2 * ell * (ell + 1.0) / R ** 2
        cache = {}
        for pol in ("TE", "TM"):
            row = {"ell": ell, "pol": pol,
                   "lam_re": lam.real, "lam_im": lam.imag}
            try:
                exact = exact_mode_impedance(ell, lam, eps0, mu0, R, pol).value
            except InteriorResonance:
                row.update(resonant=True, exact=None)
                rows.append(row)
                continue
            row.update(resonant=False, exact=exact)
            for order in orders:
                if order not in cache:
                    cache[order] = _symbol_eigenvalues(
                        sp, chart, media, base, r0, order)
                te, tm = cache[order]
                pred = te if pol == "TE" else tm
                row[f"err_order{order}"] = abs(pred - exact) / max(abs(exact), 1e-30)
            rows.append(row)
    return rows
