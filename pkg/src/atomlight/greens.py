"""Free-space dyadic Green's tensor and pairwise coupling rates.

The tensor is evaluated at the atomic transition frequency (Markov
approximation) in units k0 = 1, so its entries are dimensionless after
multiplying by k0.  Coherent shifts J and decay rates Gamma between atom
pairs follow by contracting with the dipole orientation:

    J_ij / Gamma0     = -(3*pi/k0) * d*.Re G(r_i - r_j).d
    Gamma_ij / Gamma0 =  (6*pi/k0) * d*.Im G(r_i - r_j).d

The divergent free-space self shift is absorbed into the resonance
frequency (J_ii = 0); the self decay uses the analytic limit
Im G_aa(r -> 0) = k0/(6*pi), which reproduces Gamma_ii = Gamma0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import AtomArray

COINCIDENCE_TOL = 1e-6  # separations below this (units 1/k0) are rejected


def free_space_greens(r, k0: float = 1.0) -> np.ndarray:
    """Free-space dyadic Green's tensor G0(r) at wave number k0.

    Parameters
    ----------
    r : array_like, shape (3,) or (..., 3)
        Displacement vector(s) between field point and source.

    Returns
    -------
    ndarray, shape (..., 3, 3), complex
    """
    r = np.asarray(r, dtype=float)
    single = r.ndim == 1
    r = np.atleast_2d(r)
    dist = np.linalg.norm(r, axis=-1)
    if np.any(dist < COINCIDENCE_TOL / k0):
        raise ValueError("free-space Green's tensor is singular at r = 0")
    kr = k0 * dist
    phase = np.exp(1j * kr) / (4.0 * np.pi * k0**2 * dist**3)
    iso = (kr**2 + 1j * kr - 1.0)
    aniso = (-kr**2 - 3j * kr + 3.0)
    rr = r[..., :, None] * r[..., None, :] / dist[..., None, None] ** 2
    eye = np.eye(3)
    out = phase[..., None, None] * (iso[..., None, None] * eye
                                    + aniso[..., None, None] * rr)
    return out[0] if single else out


@dataclass(frozen=True)
class PairCouplings:
    """Pairwise coherent (J) and dissipative (Gamma) rate matrices, in Gamma0."""

    J: np.ndarray
    Gamma: np.ndarray

    def __post_init__(self):
        self.J.setflags(write=False)
        self.Gamma.setflags(write=False)

    @property
    def n_atoms(self) -> int:
        return self.J.shape[0]

    def hamiltonian(self) -> np.ndarray:
        """Single-excitation non-Hermitian coupling matrix J - i*Gamma/2."""
        return self.J - 0.5j * self.Gamma


def couplings_from_greens(array: AtomArray, greens=free_space_greens,
                          k0: float = 1.0, gamma0: float = 1.0) -> PairCouplings:
    """Assemble J and Gamma matrices for an array from a Green's provider.

    The provider maps displacement vectors to 3x3 tensors; the self terms
    are fixed analytically (J_ii = 0, Gamma_ii = Gamma0) rather than by a
    numerical r -> 0 limit, which would hit the divergent near field.
    """
    if isinstance(array.dipole_orientation, str):
        raise ValueError("free-space couplings need an explicit dipole vector")
    pos = array.positions
    N = array.count
    dip = array.dipole_orientation.astype(complex)
    J = np.zeros((N, N))
    Gamma = np.eye(N) * gamma0
    if N > 1:
        iu, ju = np.triu_indices(N, k=1)
        G = greens(pos[iu] - pos[ju], k0) if greens is free_space_greens \
            else np.array([greens(pos[a] - pos[b]) for a, b in zip(iu, ju)])
        proj = np.einsum("a,...ab,b->...", dip.conj(), G, dip)
        Jv = -(3.0 * np.pi / k0) * proj.real * gamma0
        Gv = (6.0 * np.pi / k0) * proj.imag * gamma0
        J[iu, ju] = J[ju, iu] = Jv
        Gamma[iu, ju] = Gamma[ju, iu] = Gv
    return PairCouplings(J=J, Gamma=Gamma)
