"""Atomic array geometries: chains, rings, square/cubic lattices, defect chains.

All builders return immutable :class:`AtomArray` values with positions in
units of 1/k0.  Chains and fiber chains run along z, rings and square
lattices live in the y-z plane (so the transverse direction is x), cubic
lattices are axis aligned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

XHAT = np.array([1.0, 0.0, 0.0])
YHAT = np.array([0.0, 1.0, 0.0])
ZHAT = np.array([0.0, 0.0, 1.0])


class LatticeKind(str, Enum):
    CHAIN = "Chain"
    RING = "Ring"
    SQUARE = "Square"
    CUBIC = "Cubic"
    DEFECT_CHAIN = "DefectChain"
    FIBER_CHAIN = "FiberChain"


def _as_polarization(polarization) -> np.ndarray:
    """Normalize a polarization spec (3-vector or axis name) to a unit vector."""
    if isinstance(polarization, str):
        try:
            return {"x": XHAT, "y": YHAT, "z": ZHAT,
                    "parallel": ZHAT, "transverse": XHAT}[polarization.lower()]
        except KeyError:
            raise ValueError(f"unknown polarization tag {polarization!r}") from None
    vec = np.asarray(polarization, dtype=float)
    norm = np.linalg.norm(vec)
    if vec.shape != (3,) or norm == 0:
        raise ValueError("polarization must be a nonzero 3-vector")
    return vec / norm


@dataclass(frozen=True)
class AtomArray:
    """Positions (units 1/k0), dipole orientation and lattice metadata."""

    positions: np.ndarray
    dipole_orientation: np.ndarray | str
    lattice_kind: LatticeKind
    lattice_constant: float
    count: int = field(init=False)

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.positions, dtype=float))
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "count", pos.shape[0])
        if not isinstance(self.dipole_orientation, str):
            d = np.asarray(self.dipole_orientation, dtype=float)
            if not np.isclose(np.linalg.norm(d), 1.0):
                raise ValueError("dipole orientation must be a unit vector")
            object.__setattr__(self, "dipole_orientation", d)
        pos.setflags(write=False)
        if pos.shape[0] > 1:
            diff = pos[:, None, :] - pos[None, :, :]
            dist = np.linalg.norm(diff, axis=-1)
            np.fill_diagonal(dist, np.inf)
            if dist.min() < 1e-9:
                raise ValueError("atom positions must be pairwise distinct")

    @property
    def z(self) -> np.ndarray:
        return self.positions[:, 2]

    def nearest_neighbor_distances(self) -> np.ndarray:
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        np.fill_diagonal(dist, np.inf)
        return dist.min(axis=1)

    def to_json(self) -> str:
        dipole = (self.dipole_orientation if isinstance(self.dipole_orientation, str)
                  else self.dipole_orientation.tolist())
        doc = {
            "kind": self.lattice_kind.value,
            "N": self.count,
            "d": self.lattice_constant,
            "positions": self.positions.tolist(),
            "dipole": dipole,
        }
        return json.dumps(doc)

    @staticmethod
    def from_json(text: str) -> "AtomArray":
        doc = json.loads(text)
        dipole = doc["dipole"]
        if not isinstance(dipole, str):
            dipole = np.asarray(dipole)
        return AtomArray(np.asarray(doc["positions"]), dipole,
                         LatticeKind(doc["kind"]), doc["d"])


def build_chain(N: int, d: float, polarization="z") -> AtomArray:
    """Linear chain along z: z_j = j*d, j = 0..N-1."""
    if N < 1:
        raise ValueError("chain needs N >= 1")
    if d <= 0:
        raise ValueError("lattice constant must be positive")
    pos = np.zeros((N, 3))
    pos[:, 2] = d * np.arange(N)
    return AtomArray(pos, _as_polarization(polarization), LatticeKind.CHAIN, d)


def build_ring(N: int, d: float, polarization="transverse") -> AtomArray:
    """Ring in the y-z plane with chord spacing d between neighbors.

    The radius follows from the chord relation R = d / (2 sin(pi/N)); the
    tag ``"transverse"`` selects polarization normal to the ring plane (x).
    """
    if N < 3:
        raise ValueError("ring needs N >= 3")
    if d <= 0:
        raise ValueError("chord spacing must be positive")
    R = d / (2.0 * np.sin(np.pi / N))
    theta = 2.0 * np.pi * np.arange(N) / N
    pos = np.column_stack([np.zeros(N), R * np.cos(theta), R * np.sin(theta)])
    return AtomArray(pos, _as_polarization(polarization), LatticeKind.RING, d)


def build_square(N: int, d: float, polarization="y") -> AtomArray:
    """N x N square lattice in the y-z plane ("parallel" = in-plane dipole)."""
    if N < 1 or d <= 0:
        raise ValueError("need N >= 1 and d > 0")
    j = d * np.arange(N)
    yy, zz = np.meshgrid(j, j, indexing="ij")
    pos = np.column_stack([np.zeros(N * N), yy.ravel(), zz.ravel()])
    return AtomArray(pos, _as_polarization(polarization), LatticeKind.SQUARE, d)


def build_cubic(N: int, d: float, polarization="z") -> AtomArray:
    """N x N x N cubic lattice, axis-aligned."""
    if N < 1 or d <= 0:
        raise ValueError("need N >= 1 and d > 0")
    j = d * np.arange(N)
    xx, yy, zz = np.meshgrid(j, j, j, indexing="ij")
    pos = np.column_stack([xx.ravel(), yy.ravel(), zz.ravel()])
    return AtomArray(pos, _as_polarization(polarization), LatticeKind.CUBIC, d)


def defect_spacings(N: int, d_max: float, ratio: float) -> np.ndarray:
    """Spacings of the defect chain: uniform d_max outside, sinusoidal dip
    to d_min = ratio*d_max in the middle third.

    The local lattice constant d(i) = d_max + (d_min - d_max) sin^2(3*pi*i/N)
    is assigned per atom index i in the middle third (d_max elsewhere); the
    bond between atoms i and i+1 takes the average of its endpoints, which
    keeps the spacing profile exactly mirror symmetric.
    """
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie strictly between 0 and 1")
    if d_max <= 0:
        raise ValueError("d_max must be positive")
    d_min = ratio * d_max
    i = np.arange(N)
    dip = d_max + (d_min - d_max) * np.sin(3.0 * np.pi * i / N) ** 2
    local = np.where((i >= N / 3) & (i <= 2 * N / 3), dip, d_max)
    return 0.5 * (local[:-1] + local[1:])


def build_defect_chain(N: int, d_max: float, ratio: float = 0.75,
                       polarization="z") -> AtomArray:
    """Chain along z with a smooth defect region in the middle third."""
    if N < 3:
        raise ValueError("defect chain needs N >= 3")
    spacings = defect_spacings(N, d_max, ratio)
    z = np.concatenate([[0.0], np.cumsum(spacings)])
    pos = np.zeros((N, 3))
    pos[:, 2] = z
    return AtomArray(pos, _as_polarization(polarization),
                     LatticeKind.DEFECT_CHAIN, d_max)


def build_fiber_chain(N: int, d: float, rho_a: float) -> AtomArray:
    """Chain along the fiber axis at radial distance rho_a, radial dipoles.

    Atoms sit at (rho_a, 0, j*d); the dipole tag ``"radial"`` marks that the
    orientation is the local radial unit vector (here +x for every atom).
    """
    if N < 1 or d <= 0:
        raise ValueError("need N >= 1 and d > 0")
    pos = np.zeros((N, 3))
    pos[:, 0] = rho_a
    pos[:, 2] = d * np.arange(N)
    return AtomArray(pos, "radial", LatticeKind.FIBER_CHAIN, d)
