"""Closed-form infinite-lattice band structure and decay rates.

Dispersion of an infinite 1D chain is expressed through polylogarithms
Li_2, Li_3 evaluated on the unit circle; decay rates in 1D and 2D are
finite sums over reciprocal-lattice vectors inside the light line.  A
Bloch wave vector strictly outside the light line has exactly zero decay
(the sums are empty), which is returned as an exact 0.0.
"""

from __future__ import annotations

from enum import Enum

import numpy as np
from scipy.special import zeta as _zeta

ZETA3 = 1.2020569031595942854


class Polarization(str, Enum):
    PARALLEL = "parallel"
    TRANSVERSE = "transverse"


class LightLineDivergence(ValueError):
    """Raised where a band-structure expression is non-analytic (light line)."""


class LightLineSingular(ValueError):
    """Raised when a 2D decay sum is evaluated on the square-root singularity."""


def _pol(pol) -> Polarization:
    return Polarization(pol.lower()) if isinstance(pol, str) else Polarization(pol)


# --- polylogarithm -----------------------------------------------------------

# zeta(2j) coefficient tables for the log-sine series of Cl2 and its integral
_J = np.arange(1, 41)
_Z2J = _zeta(2.0 * _J)
_CL2_COEF = _Z2J / (_J * (2 * _J + 1) * (2.0 * np.pi) ** (2 * _J))
_CL3_COEF = _Z2J / (_J * (2 * _J + 1) * (2 * _J + 2) * (2.0 * np.pi) ** (2 * _J))

# Bernoulli numbers B_0..B_30 (odd ones vanish beyond B_1)
_BERN = np.zeros(31)
_BERN[0], _BERN[1] = 1.0, -0.5
_BERN[2::2] = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
               -3617 / 510, 43867 / 798, -174611 / 330, 854513 / 138,
               -236364091 / 2730, 8553103 / 6, -23749461029 / 870,
               8615841276005 / 14322]


def clausen2(theta):
    """Clausen function Cl_2(theta) = sum_n sin(n theta)/n^2, any real theta."""
    th = np.mod(np.asarray(theta, dtype=float), 2.0 * np.pi)
    sign = np.where(th > np.pi, -1.0, 1.0)
    th = np.where(th > np.pi, 2.0 * np.pi - th, th)
    with np.errstate(divide="ignore", invalid="ignore"):
        core = th * (1.0 - np.log(th))
    core = np.where(th == 0.0, 0.0, core)
    powers = th[..., None] ** (2 * _J + 1)
    return sign * (core + powers @ _CL2_COEF)


def _cos_series_3(theta):
    """sum_n cos(n theta)/n^3 (the real part of Li_3 on the unit circle)."""
    th = np.mod(np.asarray(theta, dtype=float), 2.0 * np.pi)
    th = np.where(th > np.pi, 2.0 * np.pi - th, th)
    with np.errstate(divide="ignore", invalid="ignore"):
        core = 0.5 * th**2 * np.log(th)
    core = np.where(th == 0.0, 0.0, core)
    powers = th[..., None] ** (2 * _J + 2)
    return ZETA3 - 0.75 * th**2 + core - powers @ _CL3_COEF


_DEBYE_COEF = _BERN / np.array(
    [float(_math.factorial(k + 1)) for k in range(_BERN.size)])


def _li2_debye(z):
    """Li_2 via the Bernoulli series in w = -log(1-z); needs |w| < 2*pi."""
    w = -np.log1p(-z)
    powers = w ** np.arange(1, _BERN.size + 1)
    return np.sum(_DEBYE_COEF * powers)


def _li_series(s, z, tol=1e-13):
    """Direct series sum, chunked; adequate when |z|^n/n^s decays fast enough."""
    total = 0.0 + 0.0j
    n0 = 1
    chunk = 4096
    while n0 < 400000:
        n = np.arange(n0, n0 + chunk)
        terms = z**n / n.astype(float) ** s
        total += terms.sum()
        if abs(terms[-1]) * n[-1] / max(s - 1, 1) < tol:
            break
        n0 += chunk
        chunk = min(2 * chunk, 65536)
    return total


def polylog(s: int, z: complex) -> complex:
    """Polylogarithm Li_s(z) for s in {1, 2, 3} on the closed unit disk.

    Relative accuracy is 1e-10 or better.  Li_1(1) diverges and raises.
    On the unit circle the closed Fourier forms are used (fast and exact up
    to the Clausen-series truncation); inside the disk Li_2 uses the
    Bernoulli series in -log(1-z) with a reflection near z = 1, and Li_3
    falls back to the plain series.
    """
    if s not in (1, 2, 3):
        raise ValueError("polylog supports s in {1, 2, 3}")
    z = complex(z)
    if abs(z) > 1.0 + 1e-12:
        raise ValueError("polylog implemented on |z| <= 1 only")
    if s == 1:
        if z == 1.0:
            raise ZeroDivisionError("Li_1(1) diverges")
        return -np.log1p(-z)
    if z == 0.0:
        return 0.0 + 0.0j
    on_circle = abs(abs(z) - 1.0) <= 1e-12
    if on_circle:
        theta = float(np.mod(np.angle(z), 2.0 * np.pi))
        if s == 2:
            re = np.pi**2 / 6 - np.pi * theta / 2 + theta**2 / 4
            return complex(re, float(clausen2(theta)))
        re = float(_cos_series_3(theta))
        im = np.pi**2 * theta / 6 - np.pi * theta**2 / 4 + theta**3 / 12
        return complex(re, im)
    if s == 2:
        if abs(1.0 - z) < 0.5:
            # reflection keeps the Bernoulli series argument small
            return (np.pi**2 / 6 - np.log(z) * np.log1p(-z)
                    - _li2_debye(1.0 - z))
        return _li2_debye(z)
    return _li_series(3, z)


# --- 1D dispersion (Eqs. of the infinite-chain shift) ------------------------

def dispersion_1d(kz, d: float, pol, k0: float = 1.0, gamma0: float = 1.0):
    """Collective frequency shift J(kz) of the infinite chain, in Gamma0.

    Parallel polarization stays finite at the light line (with divergent
    slope); transverse polarization diverges there, which raises
    :class:`LightLineDivergence`.
    """
    pol = _pol(pol)
    kz = np.asarray(kz, dtype=float)
    phi = k0 * d
    a = np.mod((k0 + kz) * d, 2.0 * np.pi)
    b = np.mod((k0 - kz) * d, 2.0 * np.pi)
    c3 = _cos_series_3(a) + _cos_series_3(b)
    cl = clausen2(a) + clausen2(b)
    if pol is Polarization.PARALLEL:
        out = -3.0 / (2.0 * phi**3) * (c3 + phi * cl) * gamma0
        return float(out) if out.ndim == 0 else out
    sin_a, sin_b = np.abs(2.0 * np.sin(a / 2)), np.abs(2.0 * np.sin(b / 2))
    if np.any(sin_a < 1e-12) or np.any(sin_b < 1e-12):
        raise LightLineDivergence(
            "transverse dispersion diverges at the light line kz*d = +-k0*d")
    logs = np.log(sin_a) + np.log(sin_b)
    out = 3.0 / (4.0 * phi**3) * (c3 + phi * cl + phi**2 * logs) * gamma0
    return float(out) if out.ndim == 0 else out


# --- decay rates from reciprocal-lattice sums --------------------------------

def _gz_values(kz: float, d: float, k0: float) -> np.ndarray:
    """Reciprocal vectors g = 2*pi*n/d with |kz + g| <= k0."""
    lo = int(np.ceil((-k0 - kz) * d / (2.0 * np.pi) - 1e-12))
    hi = int(np.floor((k0 - kz) * d / (2.0 * np.pi) + 1e-12))
    if hi < lo:
        return np.empty(0)
    g = 2.0 * np.pi * np.arange(lo, hi + 1) / d
    return g[np.abs(kz + g) <= k0 * (1 + 1e-15)]


def decay_1d(kz: float, d: float, pol, k0: float = 1.0,
             gamma0: float = 1.0) -> float:
    """Collective decay rate Gamma(kz) of the infinite chain, in Gamma0.

    Returns exactly 0.0 when no diffracted order lies inside the light
    line (perfectly guided spin wave).
    """
    pol = _pol(pol)
    q = kz + _gz_values(kz, d, k0)
    if q.size == 0:
        return 0.0
    if pol is Polarization.PARALLEL:
        return float(3.0 * np.pi / (2.0 * k0 * d) * np.sum(1.0 - q**2 / k0**2)) * gamma0
    return float(3.0 * np.pi / (4.0 * k0 * d) * np.sum(1.0 + q**2 / k0**2)) * gamma0


def decay_2d(k, d: float, pol, dipole=(1.0, 0.0), k0: float = 1.0,
             gamma0: float = 1.0, singular_tol: float = 1e-9) -> float:
    """Collective decay rate Gamma(k) of the infinite square lattice, in Gamma0.

    ``k`` and ``dipole`` are 2-vectors in the lattice plane (the dipole is
    only used for in-plane polarization).  Terms on the light-line circle
    |k+g| = k0 are a square-root singularity of the sum; evaluation within
    ``singular_tol * k0`` of it raises :class:`LightLineSingular`.
    """
    pol = _pol(pol)
    k = np.asarray(k, dtype=float)
    nmax = int(np.ceil((k0 + np.abs(k).max()) * d / (2.0 * np.pi))) + 1
    n = np.arange(-nmax, nmax + 1)
    gx, gy = np.meshgrid(2.0 * np.pi * n / d, 2.0 * np.pi * n / d, indexing="ij")
    qx, qy = k[0] + gx.ravel(), k[1] + gy.ravel()
    q2 = qx**2 + qy**2
    inside = q2 <= k0**2 * (1 + 1e-15)
    if not np.any(inside):
        return 0.0
    q2 = q2[inside]
    if np.any(np.abs(np.sqrt(q2) - k0) < singular_tol * k0):
        raise LightLineSingular("|k+g| lies on the light-line circle")
    root = np.sqrt(k0**2 - q2)
    pref = 3.0 * np.pi / (k0**3 * d**2) * gamma0
    if pol is Polarization.TRANSVERSE:
        return float(pref * np.sum(q2 / root))
    dip = np.asarray(dipole, dtype=float)
    dip = dip / np.linalg.norm(dip)
    proj = qx[inside] * dip[0] + qy[inside] * dip[1]
    return float(pref * np.sum((k0**2 - proj**2) / root))


def max_guided_spacing(dimension: int) -> float:
    """Largest d/lambda0 that still supports perfectly guided Bloch modes."""
    if dimension == 1:
        return 0.5
    if dimension == 2:
        return 1.0 / np.sqrt(2.0)
    raise ValueError("guided-mode criterion implemented for 1D and 2D only")


def fold_bz(kz, d: float):
    """Fold a wave vector into the first Brillouin zone (-pi/d, pi/d]."""
    kz = np.asarray(kz, dtype=float)
    folded = kz - 2.0 * np.pi / d * np.round(kz * d / (2.0 * np.pi))
    folded = np.where(np.isclose(folded, -np.pi / d), np.pi / d, folded)
    return float(folded) if folded.ndim == 0 else folded
