"""One-dimensional point-scatterer transfer-matrix model.

A unit cell is a point scatterer of strength zeta = -i r/t followed by
free propagation over d; the cell matrix M has unit determinant, the
Bloch phase q(omega) follows from its trace, and an N-cell array has
closed transmission/reflection coefficients.  Frequencies are measured
in c/d units (set c = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ScattererModel:
    zeta: float
    d: float = 1.0
    N: int = 1

    def __post_init__(self):
        if self.d <= 0 or self.N < 1:
            raise ValueError("need d > 0 and N >= 1")


def scatterer_matrix(zeta: float) -> np.ndarray:
    return np.array([[1 + 1j * zeta, 1j * zeta],
                     [-1j * zeta, 1 - 1j * zeta]])


def unit_cell_matrix(zeta: float, phase: float) -> np.ndarray:
    """M = M_sc @ M_free for scatterer strength zeta and phase omega*d/c."""
    free = np.diag([np.exp(1j * phase), np.exp(-1j * phase)])
    return scatterer_matrix(zeta) @ free


def dispersion(zeta: float, phase) -> np.ndarray:
    """Bloch phase q*d from cos(qd) = cos(phase) - zeta*sin(phase).

    Real inside bands; complex (evanescent, positive imaginary part) inside
    gaps.  Vectorized over phase.
    """
    rhs = np.cos(phase) - zeta * np.sin(phase)
    qd = np.arccos(rhs.astype(complex))
    qd = np.where(qd.imag < 0, np.conj(qd), qd)
    return qd.real if np.all(np.abs(qd.imag) < 1e-14) else qd


def band_edges(zeta: float) -> tuple[float, float]:
    """(lower, upper) gap-edge phases omega*d/c at the zone boundary qd = pi."""
    lower = np.arccos((zeta**2 - 1.0) / (zeta**2 + 1.0))
    return float(lower), float(np.pi)


def group_velocity(zeta: float, phase, qd) -> np.ndarray:
    """v_g / c of the infinite lattice; qd and phase on the same band branch."""
    return np.sin(qd) / (np.sin(phase) + zeta * np.cos(phase))


def finite_array_coefficients(model: ScattererModel, phase):
    """(t_N, r_N) of an N-cell array; energy is conserved for real zeta.

    The band-edge limit sin(qd) -> 0 of the sinc-like ratio
    sin(N qd)/sin(qd) is taken analytically.
    """
    phase = np.asarray(phase, dtype=float)
    qd = np.arccos((np.cos(phase) - model.zeta * np.sin(phase)).astype(complex))
    qd = np.where(qd.imag < 0, np.conj(qd), qd)
    N = model.N
    sin_qd = np.sin(qd)
    c_over_vg = (np.sin(phase) + model.zeta * np.cos(phase)) / np.where(
        np.abs(sin_qd) < 1e-14, 1.0, sin_qd)
    ratio = np.where(np.abs(sin_qd) < 1e-14,
                     N * np.cos((N - 1) * qd),  # lim sin(Nq)/sin(q) at q -> 0, pi
                     np.sin(N * qd) / np.where(np.abs(sin_qd) < 1e-14, 1.0, sin_qd))
    inv_t = np.cos(N * qd) + 1j * np.sin(N * qd) * c_over_vg
    t_N = 1.0 / inv_t
    r_N = 1j * model.zeta * ratio * np.exp(-1j * phase) * t_N
    return t_N, r_N


def transfer_matrix_power(model: ScattererModel, phase: float) -> np.ndarray:
    """M^N by direct multiplication (cross-check for the eigen form)."""
    M = unit_cell_matrix(model.zeta, phase)
    return np.linalg.matrix_power(M, model.N)


def resonance_phase(model: ScattererModel, xi: int) -> float:
    """Phase omega*d/c of resonance xi, where q_xi d = pi (N - xi) / N.

    Solves the dispersion relation on the band branch just below the upper
    gap edge.
    """
    if not 1 <= xi < model.N:
        raise ValueError("resonance index must satisfy 1 <= xi < N")
    qd = np.pi * (model.N - xi) / model.N
    target = np.cos(qd)
    z = model.zeta
    # cos(x) - zeta*sin(x) = sqrt(1+zeta^2) * cos(x + atan(zeta))
    amp = np.hypot(1.0, z)
    shift = np.arctan(z)
    x = np.arccos(np.clip(target / amp, -1.0, 1.0)) - shift
    # pick the solution in (band) range below pi closest to the upper edge
    candidates = [x, -x, x + 2 * np.pi, -x + 2 * np.pi]
    lower, upper = band_edges(z)
    ok = [c for c in candidates if lower - 1e-12 <= c <= upper + 1e-12]
    if not ok:
        raise RuntimeError("no resonance phase found inside the band")
    return float(min(ok, key=lambda c: abs(upper - c)))


def transmission_fwhm(model: ScattererModel, xi: int,
                      rel_window: float = 6.0) -> tuple[float, float]:
    """(resonance phase, FWHM in omega*d/c) of |t_N|^2 near resonance xi.

    Half-max crossings are found by bisection on each side of the peak (the
    line shape is only approximately Lorentzian, so no curve fitting).
    """
    w0 = resonance_phase(model, xi)
    gamma_guess = 2.0 * xi**2 * np.pi**2 / (model.zeta**2 * model.N**3 * model.d)

    def t2(w):
        t, _ = finite_array_coefficients(model, w)
        return np.abs(t) ** 2

    peak = t2(w0)
    half = peak / 2.0
    crossings = []
    for sign in (-1.0, 1.0):
        a, b = w0, w0 + sign * gamma_guess
        for _ in range(60):
            if t2(b) < half:
                break
            b = w0 + (b - w0) * 2.0
        else:
            raise RuntimeError("no half-max crossing found (overlapping resonances?)")
        for _ in range(80):
            mid = 0.5 * (a + b)
            if t2(mid) >= half:
                a = mid
            else:
                b = mid
        crossings.append(0.5 * (a + b))
    return w0, abs(crossings[1] - crossings[0])


def linewidth_law(model: ScattererModel, xi) -> np.ndarray:
    """Small-xi resonance linewidth 2 xi^2 pi^2 c / (zeta^2 N^3 d)."""
    xi = np.asarray(xi, dtype=float)
    return 2.0 * xi**2 * np.pi**2 / (model.zeta**2 * model.N**3 * model.d)


def resonance_linewidths(model: ScattererModel, xi_max: int):
    """Analytic law and fitted FWHM for xi = 1..xi_max, with deviations."""
    rows = []
    for xi in range(1, xi_max + 1):
        w0, fwhm = transmission_fwhm(model, xi)
        law = float(linewidth_law(model, xi))
        rows.append({"xi": xi, "phase": w0, "fwhm": fwhm, "law": law,
                     "rel_dev": abs(fwhm - law) / law})
    return rows
