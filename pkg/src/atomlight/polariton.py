"""Continuum dark/bright polariton model with a spatially varying control.

In the adiabatic, slow-light limit the dark polariton rides the local
group velocity v_g(z) = 2 Omega_c(z)^2 d / Gamma_1d:

    Psi(t, z) = sqrt(c / v_g(z)) f(t - T(z)),  T(z) = int_0^z dz'/v_g(z'),

where f is fixed by the initial profile, and the bright polariton (the
excited-state component responsible for loss) follows as
Phi(t, z) = -d f'(t - T(z)).  The travel-time map T is strictly
increasing, so f is recovered by monotone interpolation.

The speed of light enters only through overall normalization factors
sqrt(c/v_g); profile comparisons against the discrete spin model are
normalization-free.  ``c`` defaults to 1e8 in units of Gamma0/k0
(i.e. omega0/Gamma0 ~ 1e8 for optical transitions).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

SPEED_OF_LIGHT = 1e8  # c in units Gamma0/k0: equals omega0/Gamma0


@dataclass(frozen=True)
class PolaritonField:
    """Dark and bright polariton fields on a spatial grid."""

    z: np.ndarray
    dark: np.ndarray
    bright: np.ndarray
    v_g: np.ndarray
    mixing_cos: np.ndarray  # cos(theta); << 1 in the slow-light limit

    def spin_profile(self) -> np.ndarray:
        """|Psi|^2, the s-state population profile up to normalization."""
        return np.abs(self.dark) ** 2

    def excited_profile(self) -> np.ndarray:
        """|Phi|^2, the e-state population proxy up to normalization."""
        return np.abs(self.bright) ** 2


def group_velocity_profile(omega_c, d: float, gamma_1d: float):
    """v_g(z) = 2 Omega_c(z)^2 d / Gamma_1d (vectorized over the profile)."""
    oc = np.asarray(omega_c, dtype=float)
    if np.any(oc <= 0):
        raise ValueError("control field must be positive everywhere")
    return 2.0 * oc**2 * d / gamma_1d


def mixing_angle_cos(v_g, c: float = SPEED_OF_LIGHT):
    """cos(theta) with tan(theta) = sqrt(c/v_g)."""
    return 1.0 / np.sqrt(1.0 + c / np.asarray(v_g))


class DarkPolariton:
    """Characteristic-line solution of the dark-polariton transport equation.

    Built from an initial dark profile on a grid (atom positions with a
    refinement factor) and the local group velocity on the same grid.
    """

    def __init__(self, z, psi0, v_g, c: float = SPEED_OF_LIGHT):
        self.z = np.asarray(z, dtype=float)
        self.v_g = np.asarray(v_g, dtype=float)
        self.c = c
        if np.any(np.diff(self.z) <= 0):
            raise ValueError("grid must be strictly increasing")
        if np.any(self.v_g <= 0):
            raise ValueError("group velocity must be positive")
        psi0 = np.asarray(psi0, dtype=complex)
        # travel-time map and its inverse (both strictly monotone)
        dt = np.diff(self.z) / (0.5 * (self.v_g[1:] + self.v_g[:-1]))
        self.T = np.concatenate([[0.0], np.cumsum(dt)])
        self._z_of_T = PchipInterpolator(self.T, self.z)
        self._vg_of_z = PchipInterpolator(self.z, self.v_g)
        # f(u) on u = -T(z): f(-T(z)) = sqrt(v_g(z)/c) Psi(0,z)
        u = -self.T[::-1]
        fvals = (np.sqrt(self.v_g / self.c) * psi0)[::-1]
        self._f_re = PchipInterpolator(u, fvals.real)
        self._f_im = PchipInterpolator(u, fvals.imag)
        self._u_min, self._u_max = u[0], u[-1]

    def _f(self, u):
        u = np.asarray(u, dtype=float)
        val = self._f_re(u) + 1j * self._f_im(u)
        return np.where((u < self._u_min) | (u > self._u_max), 0.0, val)

    def _fprime(self, u):
        u = np.asarray(u, dtype=float)
        val = self._f_re.derivative()(u) + 1j * self._f_im.derivative()(u)
        return np.where((u < self._u_min) | (u > self._u_max), 0.0, val)

    def travel_time(self, z):
        return PchipInterpolator(self.z, self.T)(z)

    def invert_travel_time(self, T):
        return self._z_of_T(np.clip(T, self.T[0], self.T[-1]))

    def dark(self, t: float) -> np.ndarray:
        """Psi(t, z) on the stored grid."""
        u = t - self.T
        return np.sqrt(self.c / self.v_g) * self._f(u)

    def bright(self, t: float, d: float) -> np.ndarray:
        """Phi(t, z) = -d * d/dz f(t - T(z)) = (d / v_g) f'(t - T(z))."""
        u = t - self.T
        return d / self.v_g * self._fprime(u)

    def snapshot(self, t: float, d: float) -> PolaritonField:
        return PolaritonField(z=self.z, dark=self.dark(t),
                              bright=self.bright(t, d), v_g=self.v_g,
                              mixing_cos=mixing_angle_cos(self.v_g, self.c))


def dark_polariton_solution(z, psi0, v_g, times, d: float,
                            c: float = SPEED_OF_LIGHT):
    """Snapshots of the dark/bright fields at the requested times."""
    prop = DarkPolariton(z, psi0, v_g, c)
    return [prop.snapshot(t, d) for t in np.atleast_1d(times)]


def refined_grid(N: int, d: float, refine: int = 4) -> np.ndarray:
    """Atom positions with `refine`-fold subdivision (comparison grid)."""
    return np.linspace(0.0, (N - 1) * d, refine * (N - 1) + 1)


def predicted_spin_population(prop: DarkPolariton, t: float) -> np.ndarray:
    """Normalized |c_s|^2 prediction on the propagator grid."""
    p = np.abs(prop.dark(t)) ** 2
    total = np.trapz(p, prop.z)
    return p / total if total > 0 else p
