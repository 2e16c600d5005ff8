"""Non-Hermitian effective Hamiltonian blocks and their eigenmodes.

The atom-only Hamiltonian conserves excitation number, so it is built and
diagonalized in fixed-n blocks over a hard-core basis of sorted index
tuples.  Eigenvalues lambda = J - i*Gamma/2 give the collective shift and
decay rate of each mode; modes are ranked by ascending decay rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .geometry import AtomArray
from .greens import PairCouplings, free_space_greens

MAX_BLOCK_DIM = 200_000


class HamiltonianSource(str, Enum):
    FREE_SPACE = "FreeSpace"
    FIBER_GUIDED = "FiberGuided"
    FIBER_RADIATIVE = "FiberRadiative"
    FIBER_TOTAL = "FiberTotal"
    WITH_CONTROL_FIELD = "WithControlField"


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """Dense complex-symmetric block over an n-excitation basis."""

    matrix: np.ndarray
    excitation_number: int
    basis: tuple
    source: HamiltonianSource = HamiltonianSource.FREE_SPACE

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class EigenMode:
    """One collective mode: shift J, decay Gamma (units Gamma0), coefficients."""

    J: float
    Gamma: float
    coefficients: np.ndarray
    index: int
    dominant_k: float | tuple | None = None


@dataclass(frozen=True)
class SpinState:
    """Normalized amplitude vector over a stated basis."""

    amplitudes: np.ndarray
    basis: tuple

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        norm = np.linalg.norm(amp)
        if norm == 0:
            raise ValueError("cannot normalize the zero state")
        object.__setattr__(self, "amplitudes", amp / norm)


def single_excitation_matrix(couplings: PairCouplings,
                             gamma0: float = 1.0) -> np.ndarray:
    """H_jk = J_jk - i*Gamma_jk/2 with the free-space self terms on the diagonal."""
    H = couplings.hamiltonian().astype(complex)
    return H


def build_block_hamiltonian(array: AtomArray,
                            couplings: PairCouplings | np.ndarray,
                            n: int = 1,
                            source: HamiltonianSource = HamiltonianSource.FREE_SPACE,
                            ) -> EffectiveHamiltonian:
    """Build the n-excitation block of the effective Hamiltonian.

    ``couplings`` is either free-space :class:`PairCouplings` or an explicit
    complex-symmetric single-particle matrix (e.g. fiber guided/radiative).
    The multi-excitation matrix element between two sorted tuples differing
    in exactly one index is the corresponding single-particle coupling; the
    diagonal is the sum of single-atom self terms.  Double occupation is
    excluded by the basis itself (hard-core spins).
    """
    H1 = couplings.hamiltonian() if isinstance(couplings, PairCouplings) \
        else np.asarray(couplings, dtype=complex)
    N = H1.shape[0]
    if not 1 <= n <= N:
        raise ValueError("excitation number must satisfy 1 <= n <= N")
    from math import comb
    dim = comb(N, n)
    if dim > MAX_BLOCK_DIM:
        raise ValueError(f"block dimension C({N},{n}) = {dim} exceeds "
                         f"{MAX_BLOCK_DIM}; refusing to allocate")
    if n == 1:
        basis = tuple((j,) for j in range(N))
        return EffectiveHamiltonian(H1.copy(), 1, basis, source)
    basis = tuple(combinations(range(N), n))
    index = {tup: a for a, tup in enumerate(basis)}
    H = np.zeros((dim, dim), dtype=complex)
    diag_self = np.diag(H1)
    for a, tup in enumerate(basis):
        H[a, a] = diag_self[list(tup)].sum()
        occupied = set(tup)
        for j in tup:
            rest = occupied - {j}
            for i in range(N):
                if i == j or i in rest:
                    continue
                target = tuple(sorted(rest | {i}))
                b = index[target]
                if b > a:
                    H[a, b] += H1[i, j]
                    H[b, a] += H1[i, j]
    return EffectiveHamiltonian(H, n, basis, source)


def eigenmodes(H: EffectiveHamiltonian | np.ndarray,
               array: AtomArray | None = None,
               classify: bool = True) -> list[EigenMode]:
    """Full eigendecomposition, sorted by ascending decay rate.

    Ties in Gamma (exact ring degeneracies) are broken by ascending J.
    For single-excitation chain blocks the dominant wave vector of each
    mode is attached when ``classify`` and the atom array is given.
    """
    mat = H.matrix if isinstance(H, EffectiveHamiltonian) else np.asarray(H)
    try:
        vals, vecs = np.linalg.eig(mat)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(mat)
        raise RuntimeError(f"eigensolver failed (condition ~ {cond:.3e})") from exc
    J = vals.real
    Gamma = -2.0 * vals.imag
    order = np.lexsort((J, Gamma))
    modes = []
    single_chain = (isinstance(H, EffectiveHamiltonian)
                    and H.excitation_number == 1 and array is not None)
    for rank, idx in enumerate(order, start=1):
        vec = vecs[:, idx]
        vec = vec / np.linalg.norm(vec)
        k = dominant_wavevector(vec, array.lattice_constant) \
            if (classify and single_chain) else None
        modes.append(EigenMode(J=float(J[idx]), Gamma=float(Gamma[idx]),
                               coefficients=vec, index=rank, dominant_k=k))
    return modes


def dominant_wavevector(coefficients: np.ndarray, d: float,
                        pad_factor: int = 8) -> float:
    """Peak |k| of the zero-padded discrete Fourier transform of a mode.

    Returns the magnitude of the wave vector at the spectral peak; ties
    between +-k resolve to the same magnitude, and among distinct ties the
    larger |k| wins.
    """
    c = np.asarray(coefficients, dtype=complex)
    n = pad_factor * c.size
    spec = np.abs(np.fft.fft(c, n=n))
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=d)
    best = np.flatnonzero(spec >= spec.max() * (1.0 - 1e-12))
    return float(np.max(np.abs(k[best])))


def ansatz_state(n_index: int, N: int, d: float = 1.0) -> SpinState:
    """Orthonormal standing-wave ansatz for single-excitation chain modes.

    k_n d = pi*n/(N+1); cosine profile for odd n, sine for even n, on the
    symmetric coordinates x_j = j*d - (N+1)*d/2.
    """
    if not 1 <= n_index <= N:
        raise ValueError("need 1 <= n_index <= N")
    j = np.arange(1, N + 1)
    x = j * d - (N + 1) * d / 2.0
    kn = np.pi * n_index / ((N + 1) * d)
    profile = np.cos(kn * x) if n_index % 2 == 1 else np.sin(kn * x)
    c = np.sqrt(2.0 / (N + 1)) * profile
    basis = tuple((jj,) for jj in range(N))
    return SpinState(c.astype(complex), basis)


def ansatz_wavevector(n_index: int, N: int, d: float = 1.0) -> float:
    return np.pi * n_index / ((N + 1) * d)


def fermionic_ansatz(k_indices, N: int, d: float = 1.0) -> SpinState:
    """Slater determinant of single-excitation ansatz vectors.

    Builds the n-excitation hard-core state whose amplitude on the sorted
    tuple (i_1 < ... < i_n) is det[c_{k_a}(i_b)]; repeated mode indices give
    the zero state and are rejected.
    """
    k_indices = list(k_indices)
    n = len(k_indices)
    if n < 2:
        raise ValueError("fermionic ansatz needs at least two excitations")
    if len(set(k_indices)) != n:
        raise ValueError("repeated mode index yields the zero state")
    singles = np.stack([ansatz_state(k, N, d).amplitudes for k in k_indices])
    basis = tuple(combinations(range(N), n))
    amps = np.empty(len(basis), dtype=complex)
    for a, tup in enumerate(basis):
        amps[a] = np.linalg.det(singles[:, list(tup)])
    return SpinState(amps, basis)


def bosonic_state(mode: np.ndarray, n: int, N: int) -> SpinState:
    """Hard-core projection of n excitations stacked in one mode.

    Amplitude on (i_1 < ... < i_n) is the symmetric product c_{i_1}...c_{i_n}
    (the permanent of the rank-1 case), i.e. (S^dagger)^n acting on vacuum
    with double occupation removed.
    """
    basis = tuple(combinations(range(N), n))
    c = np.asarray(mode, dtype=complex)
    amps = np.array([np.prod(c[list(tup)]) for tup in basis])
    return SpinState(amps, basis)


def state_decay_rate(state: SpinState, H: EffectiveHamiltonian) -> float:
    """Gamma = -2 * Im <psi|H|psi> for a normalized state."""
    if len(state.amplitudes) != H.dim:
        raise ValueError("state and Hamiltonian dimensions differ")
    psi = state.amplitudes
    return float(-2.0 * np.imag(psi.conj() @ (H.matrix @ psi)))


def state_overlap_error(state: SpinState, mode: EigenMode | np.ndarray) -> float:
    """epsilon = 1 - |<ansatz|mode>|^2 with plain (non-biorthogonal) inner product."""
    vec = mode.coefficients if isinstance(mode, EigenMode) else np.asarray(mode)
    vec = vec / np.linalg.norm(vec)
    return float(1.0 - np.abs(np.vdot(state.amplitudes, vec)) ** 2)


def field_intensity_map(state: SpinState, array: AtomArray, grid,
                        k0: float = 1.0):
    """Radiated intensity |sum_j G(r, r_j).d c_j|^2 on a grid (arbitrary units).

    Grid points closer than the coincidence tolerance to an atom are skipped
    and flagged with NaN.
    """
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    pos = array.positions
    dip = array.dipole_orientation.astype(complex)
    c = state.amplitudes
    out = np.empty(grid.shape[0])
    for idx, r in enumerate(grid):
        disp = r[None, :] - pos
        dist = np.linalg.norm(disp, axis=1)
        if dist.min() < 1e-6 / k0:
            out[idx] = np.nan
            continue
        G = free_space_greens(disp, k0)
        field = np.einsum("jab,b,j->a", G, dip, c)
        out[idx] = np.sum(np.abs(field) ** 2)
    return out


def fit_power_law(points) -> tuple[float, float, float]:
    """Least-squares fit y = A * x^p on log-log axes.

    Returns (exponent, prefactor, residual) with residual the RMS of log
    deviations.  All inputs must be positive.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 4:
        raise ValueError("power-law fit needs at least 4 points")
    if np.any(pts <= 0):
        raise ValueError("power-law fit needs positive data")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return float(slope), float(np.exp(intercept)), resid


def fit_exponential(points) -> tuple[float, float, float]:
    """Least-squares fit y = A * exp(-x / x0) on semilog axes.

    Returns (decay_constant x0, prefactor A, r_squared of the log fit).
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 4:
        raise ValueError("exponential fit needs at least 4 points")
    if np.any(pts[:, 1] <= 0):
        raise ValueError("exponential fit needs positive ordinates")
    x, ly = pts[:, 0], np.log(pts[:, 1])
    slope, intercept = np.polyfit(x, ly, 1)
    pred = slope * x + intercept
    ss_res = np.sum((ly - pred) ** 2)
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(-1.0 / slope), float(np.exp(intercept)), float(r2)
