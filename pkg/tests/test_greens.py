import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomlight.geometry import build_chain, build_ring, build_square
from atomlight.greens import couplings_from_greens, free_space_greens

LAMBDA0 = 2.0 * np.pi

# frozen oracle: (3/2)[sin(phi)/phi + cos(phi)/phi^2 - sin(phi)/phi^3],
# phi = 0.4*pi (two atoms on z at d = 0.2 lambda0, x polarization)
GAMMA12_D02 = 0.7098718524388376


def test_far_field_leading_term():
    z = 4000.0
    G = free_space_greens([0.0, 0.0, z])
    lead = np.exp(1j * z) / (4.0 * np.pi * z)
    assert abs(G[0, 0] - lead) < 3e-4 * abs(lead)
    # exact transverse closed form
    exact = np.exp(1j * z) / (4 * np.pi * z) * (1 + 1j / z - 1 / z**2)
    assert abs(G[0, 0] - exact) < 1e-15


@given(st.tuples(*[st.floats(min_value=-5, max_value=5) for _ in range(3)])
       .filter(lambda r: np.linalg.norm(r) > 0.1))
@settings(max_examples=30, deadline=None)
def test_parity_and_symmetry(r):
    G = free_space_greens(np.asarray(r))
    Gm = free_space_greens(-np.asarray(r))
    assert np.allclose(G, Gm, rtol=1e-13)
    assert np.allclose(G, G.T, rtol=1e-13)


def test_imaginary_part_self_limit():
    # Taylor limit Im G_aa(r -> 0) = k0 / 6 pi, approached numerically
    for r in (1e-2, 1e-3):
        G = free_space_greens([r, 0.0, 0.0])
        assert np.allclose(np.imag(np.diag(G)), 1.0 / (6.0 * np.pi),
                           rtol=1e-4)


def test_coincident_rejected():
    with pytest.raises(ValueError):
        free_space_greens([0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        free_space_greens([0.0, 0.0, 1e-8])


def test_single_atom_rates():
    arr = build_chain(1, 1.0, "z")
    cpl = couplings_from_greens(arr)
    assert cpl.J[0, 0] == 0.0
    assert cpl.Gamma[0, 0] == 1.0


def test_two_atom_gamma_frozen_value():
    arr = build_chain(2, 0.2 * LAMBDA0, "x")
    cpl = couplings_from_greens(arr)
    assert np.isclose(cpl.Gamma[0, 1], GAMMA12_D02, rtol=1e-12)
    assert np.isclose(cpl.Gamma[1, 0], GAMMA12_D02, rtol=1e-12)


def test_far_separation_decouples():
    arr = build_chain(2, 3000.0, "x")
    cpl = couplings_from_greens(arr)
    assert abs(cpl.J[0, 1]) < 1e-3
    assert abs(cpl.Gamma[0, 1]) < 1e-3


@pytest.mark.parametrize("factory,kwargs", [
    (build_chain, dict(N=12, d=0.25 * LAMBDA0, polarization="z")),
    (build_chain, dict(N=12, d=0.25 * LAMBDA0, polarization="x")),
    (build_ring, dict(N=14, d=0.3 * LAMBDA0, polarization="transverse")),
    (build_square, dict(N=4, d=0.4 * LAMBDA0, polarization="y")),
])
def test_gamma_positive_semidefinite(factory, kwargs):
    cpl = couplings_from_greens(factory(**kwargs))
    eigvals = np.linalg.eigvalsh(cpl.Gamma)
    assert eigvals.min() > -1e-10


def test_crossed_component_vanishes_in_normal_plane():
    # field of an x dipole is parallel to x anywhere in the x = 0 plane
    for r_perp in ([0.0, 1.3, 0.4], [0.0, -0.2, 2.0]):
        G = free_space_greens(r_perp)
        assert abs(G[0, 1]) < 1e-14
        assert abs(G[0, 2]) < 1e-14


def test_couplings_even_in_separation():
    a = build_chain(2, 1.1, "x")
    cpl = couplings_from_greens(a)
    G = free_space_greens([0.0, 0.0, -1.1])
    J = -3.0 * np.pi * np.real(G[0, 0])
    assert np.isclose(J, cpl.J[0, 1], rtol=1e-12)
