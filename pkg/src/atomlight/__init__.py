"""Collective atom-light interaction in ordered arrays.

Spin-model numerics for subradiance in free-space lattices and
selectively radiant atom chains coupled to a nanofiber: Green's-function
couplings, non-Hermitian diagonalization, analytic band structures,
transfer matrices, EIT transport and photon storage.  Units: k0 = Gamma0 = 1.
"""

from .units import UnitSystem, UNITS
from .geometry import (AtomArray, LatticeKind, build_chain, build_ring,
                       build_square, build_cubic, build_defect_chain,
                       build_fiber_chain)
from .greens import free_space_greens, couplings_from_greens, PairCouplings
from .bands import (polylog, dispersion_1d, decay_1d, decay_2d,
                    max_guided_spacing, fold_bz, Polarization,
                    LightLineDivergence, LightLineSingular)
from .spinmodel import (EffectiveHamiltonian, EigenMode, SpinState,
                        HamiltonianSource, build_block_hamiltonian,
                        eigenmodes, ansatz_state, fermionic_ansatz,
                        bosonic_state, state_decay_rate, state_overlap_error,
                        field_intensity_map, fit_power_law, fit_exponential,
                        dominant_wavevector)
from .transfer import (ScattererModel, unit_cell_matrix, dispersion,
                       band_edges, finite_array_coefficients,
                       resonance_linewidths)
from .fiber import FiberSpec, FiberCouplings, fiber_couplings

__all__ = [name for name in dir() if not name.startswith("_")]
