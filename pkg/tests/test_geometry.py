import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomlight.geometry import (AtomArray, LatticeKind, build_chain,
                                build_cubic, build_defect_chain, build_ring,
                                build_square, defect_spacings)

LAMBDA0 = 2.0 * np.pi


def test_chain_two_atoms():
    arr = build_chain(2, 0.3 * LAMBDA0, "z")
    assert np.allclose(arr.positions[:, 2], [0.0, 0.3 * LAMBDA0])
    assert np.allclose(arr.positions[:, :2], 0.0)


def test_chain_fig1_size():
    arr = build_chain(50, 0.2 * LAMBDA0, "z")
    assert arr.count == 50
    assert np.allclose(arr.nearest_neighbor_distances(), 0.2 * LAMBDA0,
                       rtol=1e-12)


def test_single_atom_chain():
    arr = build_chain(1, 1.0, "x")
    assert arr.count == 1
    assert np.allclose(arr.positions, 0.0)


def test_chain_invalid_args():
    with pytest.raises(ValueError):
        build_chain(0, 1.0)
    with pytest.raises(ValueError):
        build_chain(3, -1.0)


def test_ring_square_inscribed():
    arr = build_ring(4, 1.0)
    radii = np.linalg.norm(arr.positions[:, 1:], axis=1)
    assert np.allclose(radii, 1.0 / np.sqrt(2.0), rtol=1e-12)


def test_ring_triangle():
    arr = build_ring(3, 1.0)
    radii = np.linalg.norm(arr.positions[:, 1:], axis=1)
    assert np.allclose(radii, 1.0 / np.sqrt(3.0), rtol=1e-12)


def test_ring_chord_spacing_and_transverse_tag():
    arr = build_ring(30, 0.3 * LAMBDA0, "transverse")
    chords = np.linalg.norm(np.roll(arr.positions, -1, axis=0)
                            - arr.positions, axis=1)
    assert np.allclose(chords, 0.3 * LAMBDA0, rtol=1e-12)
    assert np.allclose(arr.dipole_orientation, [1.0, 0.0, 0.0])


def test_ring_too_small():
    with pytest.raises(ValueError):
        build_ring(2, 1.0)


@given(st.integers(min_value=3, max_value=40))
@settings(max_examples=20, deadline=None)
def test_ring_rotation_invariance(N):
    arr = build_ring(N, 0.7)
    theta = 2.0 * np.pi / N
    rot = np.array([[1, 0, 0],
                    [0, np.cos(theta), -np.sin(theta)],
                    [0, np.sin(theta), np.cos(theta)]])
    rotated = arr.positions @ rot.T
    # rotated set equals the original set up to reordering
    dist = np.linalg.norm(rotated[:, None, :] - arr.positions[None, :, :],
                          axis=-1)
    assert dist.min(axis=1).max() < 1e-9


@given(st.integers(min_value=2, max_value=8),
       st.floats(min_value=0.1, max_value=3.0))
@settings(max_examples=20, deadline=None)
def test_uniform_builders_recover_spacing(N, d):
    for arr in (build_chain(N, d), build_square(N, d), build_cubic(min(N, 4), d)):
        assert np.allclose(arr.nearest_neighbor_distances(), d, rtol=1e-12)


def test_defect_chain_mid_dip_n9():
    # direct formula evaluation: d(i) = 1 - 0.25 sin^2(pi i/3) at atoms
    # i = 3..6 gives (1, 0.8125, 0.8125, 1); endpoint-averaged bonds dip
    # below 1 for exactly the middle three spacings
    s = defect_spacings(9, 1.0, 0.75)
    assert np.allclose(s[:3], 1.0)
    assert np.allclose(s[6:], 1.0)
    assert np.allclose(s[3:6], [0.90625, 0.8125, 0.90625], rtol=1e-12)
    assert np.all(s[3:6] < 1.0)


def test_defect_chain_fig10_case():
    N, dmax, ratio = 90, 0.4 * LAMBDA0, 0.75
    arr = build_defect_chain(N, dmax, ratio)
    s = np.diff(arr.positions[:, 2])
    assert arr.count == N
    # direct formula evaluation at every atom, endpoint-averaged per bond
    i = np.arange(N)
    dip = dmax + (ratio - 1.0) * dmax * np.sin(3 * np.pi * i / N) ** 2
    local = np.where((i >= N / 3) & (i <= 2 * N / 3), dip, dmax)
    assert np.allclose(s, 0.5 * (local[:-1] + local[1:]), rtol=1e-12)
    assert np.isclose(s.max(), dmax, rtol=1e-12)
    assert abs(s.min() - ratio * dmax) < 0.005 * dmax  # dip reaches ~d_min
    assert np.allclose(s, s[::-1], rtol=1e-9)  # symmetric profile


def test_defect_chain_uniform_limit():
    s = defect_spacings(30, 1.0, 1.0 - 1e-12)
    assert np.allclose(s, 1.0, atol=1e-11)
    with pytest.raises(ValueError):
        build_defect_chain(30, 1.0, 1.0)


def test_json_roundtrip():
    arr = build_ring(7, 0.9, "x")
    doc = json.loads(arr.to_json())
    assert doc["kind"] == "Ring" and doc["N"] == 7
    back = AtomArray.from_json(arr.to_json())
    assert np.allclose(back.positions, arr.positions)
    assert back.lattice_kind is LatticeKind.RING


def test_distinct_positions_enforced():
    with pytest.raises(ValueError):
        AtomArray(np.zeros((2, 3)), np.array([0, 0, 1.0]),
                  LatticeKind.CHAIN, 1.0)
