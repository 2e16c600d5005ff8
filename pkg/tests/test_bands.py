import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomlight.bands import (LightLineDivergence, LightLineSingular,
                             clausen2, decay_1d, decay_2d, dispersion_1d,
                             fold_bz, max_guided_spacing, polylog)

LAMBDA0 = 2.0 * np.pi
ZETA3 = 1.2020569031595942854
CATALAN = 0.915965594177219015


def brute_polylog(s, z, n=400000):
    k = np.arange(1, n + 1)
    return np.sum(z**k / k.astype(float)**s)


class TestPolylog:
    def test_li3_at_one_is_zeta3(self):
        assert np.isclose(polylog(3, 1.0), ZETA3, rtol=1e-12)

    def test_zero_argument(self):
        assert polylog(2, 0.0) == 0.0
        assert polylog(3, 0.0) == 0.0

    def test_li1_identity(self):
        z = 1j
        assert np.isclose(polylog(1, z), -np.log(1 - z), rtol=1e-14)

    def test_li1_divergence(self):
        with pytest.raises(ZeroDivisionError):
            polylog(1, 1.0)

    def test_li2_at_i_closed_form(self):
        val = polylog(2, 1j)
        assert np.isclose(val.real, -np.pi**2 / 48.0, rtol=1e-12)
        assert np.isclose(val.imag, CATALAN, rtol=1e-12)

    def test_li2_at_minus_one(self):
        assert np.isclose(polylog(2, -1.0), -np.pi**2 / 12.0, rtol=1e-12)

    @pytest.mark.parametrize("s", [2, 3])
    @pytest.mark.parametrize("theta", [0.3, 1.0, 2.0, np.pi, 4.5, 6.0])
    def test_unit_circle_against_series_oracle(self, s, theta):
        z = np.exp(1j * theta)
        # Richardson-accelerated partial sums as an independent oracle
        n = 200000
        p1 = brute_polylog(s, z, n)
        p2 = brute_polylog(s, z, 2 * n)
        oracle = 2 * p2 - p1 if s == 2 else p2
        assert abs(polylog(s, z) - oracle) < 5e-9

    @given(st.complex_numbers(max_magnitude=0.95, allow_nan=False,
                              allow_infinity=False))
    @settings(max_examples=40, deadline=None)
    def test_interior_against_series(self, z):
        for s in (2, 3):
            assert abs(polylog(s, z) - brute_polylog(s, z, 4000)) < 1e-10

    def test_outside_disk_rejected(self):
        with pytest.raises(ValueError):
            polylog(2, 1.5)

    def test_mpmath_cross_check(self):
        mp = pytest.importorskip("mpmath")
        for s in (2, 3):
            for z in (0.7 * np.exp(0.4j), np.exp(2.2j), -0.99, 0.99 + 0j,
                      np.exp(1j * 1e-3)):
                ref = complex(mp.polylog(s, complex(z)))
                assert abs(polylog(s, z) - ref) <= 1e-10 * max(abs(ref), 1.0)


class TestDispersion1D:
    def test_even_in_kz(self):
        d = 0.2 * LAMBDA0
        for kz in (0.1, 0.3, 0.45):
            for pol in ("parallel", "transverse"):
                a = dispersion_1d(kz * np.pi / d, d, pol)
                b = dispersion_1d(-kz * np.pi / d, d, pol)
                assert np.isclose(a, b, rtol=1e-12)

    def test_transverse_diverges_at_light_line(self):
        d = 0.2 * LAMBDA0
        with pytest.raises(LightLineDivergence):
            dispersion_1d(1.0, d, "transverse")
        grow = [abs(dispersion_1d(1.0 - eps, d, "transverse"))
                for eps in (1e-2, 1e-4, 1e-6)]
        assert grow[0] < grow[1] < grow[2]

    def test_abel_summed_lattice_oracle(self):
        # real-space pair sums with damping e^{-eps*n}, Richardson in eps:
        # J_par  = (3/phi^3) sum cos(kz d n) Re[(-1 + i phi n) e^{i phi n}]/n^3
        # J_perp = (3/2phi^3) sum cos(kz d n) Re[(1 - i phi n - phi^2 n^2) e^{i phi n}]/n^3
        rng = np.random.default_rng(7)
        n = np.arange(1, 40001)
        checked = 0
        while checked < 20:
            dfrac = rng.uniform(0.05, 0.45)
            d = dfrac * LAMBDA0
            kz = rng.uniform(0.05, 0.95) * np.pi / d
            if abs(kz - 1.0) < 0.15:  # stay away from the light line
                continue
            checked += 1
            phase = np.exp(1j * n * d)
            cosk = np.cos(kz * d * n)
            for pol in ("parallel", "transverse"):
                if pol == "parallel":
                    core = 3.0 * ((-1.0 + 1j * n * d) * phase).real \
                        / (n * d) ** 3 * cosk
                else:
                    core = 1.5 * ((1.0 - 1j * n * d - (n * d) ** 2)
                                  * phase).real / (n * d) ** 3 * cosk
                vals = [np.sum(core * np.exp(-eps * n))
                        for eps in (0.02, 0.01, 0.005)]
                r1 = 2 * vals[1] - vals[0]
                r2 = 2 * vals[2] - vals[1]
                extrap = (4 * r2 - r1) / 3.0
                ana = dispersion_1d(kz, d, pol)
                assert abs(extrap - ana) < 1e-4 * max(abs(ana), 1e-2), \
                    f"pol={pol} d={dfrac} kz={kz}"


class TestDecayRates:
    def test_known_values_d02(self):
        d = 0.2 * LAMBDA0
        assert decay_1d(0.0, d, "parallel") == pytest.approx(3.75, rel=1e-12)
        assert decay_1d(0.0, d, "transverse") == pytest.approx(1.875, rel=1e-12)

    def test_guided_zone_exact_zero_1d(self):
        d = 0.2 * LAMBDA0
        rng = np.random.default_rng(3)
        for _ in range(200):
            kz = rng.uniform(1.0 + 1e-9, np.pi / d)
            assert decay_1d(kz, d, "parallel") == 0.0
            assert decay_1d(kz, d, "transverse") == 0.0

    def test_beyond_half_wavelength_multiple_orders(self):
        d = 1.2 * LAMBDA0
        val = decay_1d(0.0, d, "parallel")
        # g_z in {0, +-2pi/d} all inside the light line
        q = np.array([0.0, 2 * np.pi / d, -2 * np.pi / d])
        expect = 3 * np.pi / (2 * d) * np.sum(1 - q**2)
        assert np.isclose(val, expect, rtol=1e-12)

    def test_2d_known_values(self):
        d = 0.2 * LAMBDA0
        assert decay_2d((0.0, 0.0), d, "transverse") == 0.0
        val = decay_2d((0.0, 0.0), d, "parallel", dipole=(1.0, 0.0))
        assert np.isclose(val, 3.0 * np.pi / d**2, rtol=1e-12)
        assert np.isclose(val, 5.968310365946075, rtol=1e-12)

    def test_guided_zone_exact_zero_2d(self):
        d = 0.3 * LAMBDA0
        rng = np.random.default_rng(11)
        count = 0
        while count < 200:
            k = rng.uniform(-np.pi / d, np.pi / d, size=2)
            if np.linalg.norm(k) <= 1.0:
                continue
            assert decay_2d(k, d, "transverse") == 0.0
            assert decay_2d(k, d, "parallel", dipole=(0.0, 1.0)) == 0.0
            count += 1

    def test_singularity_flagged(self):
        d = 0.2 * LAMBDA0
        with pytest.raises(LightLineSingular):
            decay_2d((1.0, 0.0), d, "transverse")

    def test_light_line_positive_inside(self):
        d = 0.3 * LAMBDA0
        rng = np.random.default_rng(5)
        for _ in range(50):
            k = rng.uniform(-0.9, 0.9, size=2)
            if np.linalg.norm(k) > 0.99:
                continue
            assert decay_2d(k, d, "transverse") > 0.0


def test_max_guided_spacing():
    assert max_guided_spacing(1) == 0.5
    assert np.isclose(max_guided_spacing(2), 1.0 / np.sqrt(2.0), rtol=1e-15)
    with pytest.raises(ValueError):
        max_guided_spacing(3)


def test_guided_spacing_consistency_sweep():
    # zone-edge decay vanishes iff d < lambda0/2
    for dfrac in (0.2, 0.35, 0.49, 0.51, 0.7, 0.95):
        d = dfrac * LAMBDA0
        val = decay_1d(np.pi / d, d, "parallel")
        if dfrac < 0.5:
            assert val == 0.0
        else:
            assert val > 0.0


@given(st.floats(min_value=-50, max_value=50))
@settings(max_examples=50, deadline=None)
def test_fold_bz(kz):
    d = 1.7
    folded = fold_bz(kz, d)
    assert -np.pi / d < folded <= np.pi / d + 1e-12
    assert np.isclose(np.cos(folded * d), np.cos(kz * d), atol=1e-9)


def test_clausen_symmetry():
    th = np.linspace(0.1, np.pi - 0.1, 20)
    assert np.allclose(clausen2(2 * np.pi - th), -clausen2(th), rtol=1e-12)
