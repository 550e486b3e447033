import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import linregress

from grslab.batteries import grs_battery_2d
from grslab.seqspace import DIVERGENT
from grslab.tfa import (FINITE, MEMBER, NON_MEMBER, GSFunction, SampledSignal, STFTGrid,
                        cube_coefficients, dft, gaussian_window, gs_membership_probe, gs_seminorm,
                        hermite_functions, load_signal_csv, load_stft,
                        membership_probe_modulation, modspace_identity_experiment,
                        modulation_norm, save_signal_csv, save_stft, stft)
from grslab.tfa.experiment import modspace_test_functions, shipped_windows
from grslab.weightlab import FAIL, PASS, Weight

phi = gaussian_window()
V_phi = stft(phi, phi)
ONE = Weight.constant(2)


def stft_oracle(x, xi):
    return (2 * np.pi) ** -0.5 * np.exp(-(x ** 2 + xi ** 2) / 4)


class TestSignals:
    def test_grid_invariants(self):
        assert phi.samples.size == 2 * 12 / 0.05 + 1
        np.testing.assert_allclose(phi.grid, -phi.grid[::-1], atol=1e-12)

    def test_bad_shapes(self):
        with pytest.raises(ValueError):
            SampledSignal(np.zeros(4), 0.5, 1.0)
        with pytest.raises(ValueError):
            SampledSignal(np.zeros(5), 0.3, 1.0)

    def test_window_normalised(self):
        assert phi.l2_norm() == pytest.approx(1.0, abs=1e-12)
        assert gaussian_window(2.0).l2_norm() == pytest.approx(1.0, abs=1e-10)

    def test_csv_round_trip(self, tmp_path):
        f = SampledSignal(phi.samples * np.exp(1j * phi.grid), phi.spacing, phi.extent)
        save_signal_csv(f, tmp_path / "f.csv")
        g = load_signal_csv(tmp_path / "f.csv")
        np.testing.assert_array_equal(g.samples, f.samples)
        assert g.spacing == pytest.approx(f.spacing) and g.extent == f.extent


class TestDFT:
    def test_zero(self):
        z = SampledSignal(np.zeros(41), 0.5, 10.0)
        assert not np.any(dft(z).samples)

    def test_gaussian_oracle(self):
        f = SampledSignal.from_function(lambda x: np.exp(-x ** 2 / 2), 10.0, 0.05)
        F = dft(f)
        assert np.abs(F.samples - np.exp(-F.grid ** 2 / 2)).max() < 1e-8

    def test_real_even_input(self):
        f = SampledSignal.from_function(lambda x: np.exp(-np.abs(x)) * np.cos(x), 12.0, 0.05)
        F = dft(f)
        assert np.abs(F.samples.imag).max() < 1e-10
        assert np.abs(F.samples - F.samples[::-1]).max() < 1e-10

    @given(st.floats(-3, 3), st.floats(-4, 4), st.floats(0.5, 2))
    def test_unitarity_surrogate(self, x0, xi0, width):
        f = SampledSignal.from_function(
            lambda x: np.exp(-((x - x0) / width) ** 2 / 2 + 1j * xi0 * x), 12.0, 0.05)
        F = dft(f, xi_extent=20.0)
        assert F.l2_norm() == pytest.approx(f.l2_norm(), abs=1e-6)


class TestSTFT:
    def test_zero(self):
        z = SampledSignal(np.zeros_like(phi.samples), phi.spacing, phi.extent)
        assert not np.any(stft(z, phi).values)

    def test_gaussian_oracle(self):
        X, XI = np.meshgrid(V_phi.xs, V_phi.xis, indexing="ij")
        assert np.abs(np.abs(V_phi.values) - stft_oracle(X, XI)).max() < 1e-6

    def test_modulation_covariance(self):
        f = SampledSignal(phi.samples * np.exp(2j * phi.grid), phi.spacing, phi.extent)
        V = stft(f, phi)
        shift = 8  # 2 / 0.25
        assert np.abs(np.abs(V.values[:, shift:]) - np.abs(V_phi.values[:, :-shift])).max() < 1e-10

    @given(st.integers(-8, 8))
    def test_translation_covariance(self, steps):
        x0 = 0.25 * steps
        V = stft(phi.shifted(x0), phi)
        m = abs(steps)
        if steps >= 0:
            a, b = V.values[m:], V_phi.values[:V_phi.values.shape[0] - m]
        else:
            a, b = V.values[:V.values.shape[0] - m], V_phi.values[m:]
        assert np.abs(np.abs(a) - np.abs(b)).max() < 1e-10

    @given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
           st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
    def test_linearity(self, a, b):
        g = SampledSignal.from_function(lambda y: (1 + np.abs(y)) ** -2.0)
        lhs = stft(a * phi + b * g, phi).values
        rhs = a * V_phi.values + b * stft(g, phi).values
        assert np.abs(lhs - rhs).max() < 1e-10

    def test_incommensurate_grid(self):
        with pytest.raises(ValueError):
            stft(phi, phi, h_x=0.33)

    def test_zero_window(self):
        with pytest.raises(ValueError):
            stft(phi, SampledSignal(np.zeros_like(phi.samples), phi.spacing, phi.extent))

    def test_export_round_trip(self, tmp_path):
        csv_path, sidecar = save_stft(V_phi, tmp_path / "v.csv")
        assert sidecar.endswith("v.json")
        back = load_stft(csv_path)
        np.testing.assert_array_equal(back.values, V_phi.values)
        assert back.meta() == V_phi.meta()


class TestModulationNorm:
    def test_zero(self):
        Z = STFTGrid(np.zeros_like(V_phi.values), 0.25, 0.25, 8, 8)
        assert modulation_norm(Z, ONE, 1, 2) == 0.0

    def test_orthogonality_relation(self):
        assert modulation_norm(V_phi, ONE, 2, 2) == pytest.approx(1.0, abs=1e-4)

    def test_sup(self):
        assert modulation_norm(V_phi, ONE, math.inf, math.inf) == pytest.approx((2 * math.pi) ** -0.5, rel=1e-12)

    def test_mixed_norm_oracle(self):
        # closed form of the p=1, q=inf norm of the Gaussian STFT, truncated grid
        X, XI = np.meshgrid(V_phi.xs, V_phi.xis, indexing="ij")
        oracle = (0.25 * stft_oracle(X, XI).sum(axis=0)).max()
        assert modulation_norm(V_phi, ONE, 1, math.inf) == pytest.approx(oracle, rel=1e-9)

    def test_bad_exponents(self):
        with pytest.raises(ValueError):
            modulation_norm(V_phi, ONE, 0, 1)
        with pytest.raises(ValueError):
            modulation_norm(V_phi, Weight.constant(1), 1, 1)


class TestCubes:
    def test_indicator(self):
        vals = np.zeros_like(V_phi.values, dtype=float)
        X, XI = np.meshgrid(V_phi.xs, V_phi.xis, indexing="ij")
        vals[(X >= 0) & (X < 1) & (XI >= 0) & (XI < 1)] = 1.0
        c = cube_coefficients(STFTGrid(vals, 0.25, 0.25, 8, 8), 1)
        expected = np.zeros_like(c.values)
        expected[c.cap, c.cap] = 1.0
        np.testing.assert_allclose(c.values, expected, atol=1e-15)

    def test_zero(self):
        Z = STFTGrid(np.zeros_like(V_phi.values), 0.25, 0.25, 8, 8)
        assert not np.any(cube_coefficients(Z, 2).values)

    def test_cubes_tile_without_overlap(self):
        c = cube_coefficients(STFTGrid(np.ones_like(V_phi.values), 0.25, 0.25, 8, 8), 1)
        np.testing.assert_allclose(c.values, 1.0)

    def test_gaussian_decay_fit(self):
        c = cube_coefficients(V_phi, 1)
        n = np.arange(-6, 7)
        N1, N2 = np.meshgrid(n, n, indexing="ij")
        sub = c.values[c.cap - 6:c.cap + 7, c.cap - 6:c.cap + 7]
        fit = linregress(((N1 + 0.5) ** 2 + (N2 + 0.5) ** 2).ravel(), np.log(sub).ravel())
        assert fit.slope < 0 and fit.rvalue ** 2 >= 0.99

    def test_misaligned_spacing(self):
        V = stft(phi, phi, h_x=0.3, R_x=6.0)
        with pytest.raises(ValueError):
            cube_coefficients(V, 1)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
    @pytest.mark.parametrize("omega", [ONE, Weight.polynomial(2, 2), Weight.subexp(0.5, 0.5, 2)])
    def test_cube_criterion_ratio(self, lam, p, omega):
        f = SampledSignal.from_function(lambda y: np.exp(-lam * y ** 2 / 2))
        V = stft(f, phi)
        ratio = modulation_norm(V, omega, p, p) / cube_coefficients(V, p).weighted_norm(omega)
        assert 0.25 <= ratio <= 4


class TestModulationProbe:
    def test_gaussian_finite(self):
        assert membership_probe_modulation(phi, phi, Weight.subexp(1, 1, 2), 1) == FINITE

    def test_poly_decay_divergent(self):
        f = SampledSignal.from_function(lambda y: (1 + np.abs(y)) ** -3.0)
        assert membership_probe_modulation(f, phi, Weight.subexp(1, 1, 2), 1) == DIVERGENT

    def test_zero_finite(self):
        z = SampledSignal(np.zeros_like(phi.samples), phi.spacing, phi.extent)
        assert membership_probe_modulation(z, phi, Weight.subexp(1, 1, 2), 1) == FINITE

    def test_window_independence(self):
        wins = shipped_windows()
        kw = {"R_x": 12.0, "R_xi": 12.0}
        for fid, f in modspace_test_functions():
            for wid, w in grs_battery_2d() + [("v1", Weight.subexp(1, 1, 2))]:
                verdicts = {membership_probe_modulation(f.sample(phi_.extent) if isinstance(f, GSFunction)
                                                        else f, phi_, w, 1, kw) for _, phi_ in wins}
                assert len(verdicts) == 1, (fid, wid, verdicts)


class TestHermite:
    def test_orthonormal(self):
        x = np.linspace(-15, 15, 3001)
        H = hermite_functions(20, x)
        gram = H @ H.T * (x[1] - x[0])
        np.testing.assert_allclose(gram, np.eye(20), atol=1e-10)

    def test_derivative_matches_closed_form(self):
        x = np.linspace(-4, 4, 41)
        h0 = GSFunction.hermite(0)
        g = np.pi ** -0.25 * np.exp(-x ** 2 / 2)
        np.testing.assert_allclose(h0(x, 1), -x * g, atol=1e-15)
        np.testing.assert_allclose(h0(x, 2), (x ** 2 - 1) * g, atol=1e-14)

    @given(st.integers(0, 30), st.integers(1, 4))
    def test_derivative_against_finite_difference(self, m, order):
        f = GSFunction.hermite(m)
        x = np.linspace(-3, 3, 13)
        h = 1e-3
        fd = (f(x + h, order - 1) - f(x - h, order - 1)) / (2 * h)
        assert np.abs(f(x, order) - fd).max() < 1e-4 * (1 + np.abs(fd).max())

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            GSFunction(np.ones(66))


h0 = GSFunction.hermite(0)


class TestGSSeminorm:
    def test_zero(self):
        assert gs_seminorm(GSFunction([0.0]), 0.5, 1.0) == 0.0

    def test_order_zero_is_sup(self):
        assert gs_seminorm(h0, 0.5, 2.0, 0, 0) == pytest.approx(np.pi ** -0.25)

    def test_stabilises_at_h2(self):
        a = gs_seminorm(h0, 0.5, 2.0, 4, 4, 8.0)
        b = gs_seminorm(h0, 0.5, 2.0, 8, 4, 8.0)
        assert math.isfinite(a) and abs(b - a) / a < 0.05

    def test_grows_as_h_shrinks(self):
        vals = [gs_seminorm(h0, 0.5, h, 12, 12) for h in (1.0, 0.5, 0.2, 0.1)]
        assert all(b > 10 * a for a, b in zip(vals, vals[1:]))

    def test_order_cap(self):
        with pytest.raises(ValueError):
            gs_seminorm(h0, 0.5, 1.0, 13, 2)

    @given(st.floats(0.1, 4), st.floats(1.0, 3.0), st.integers(0, 12), st.integers(0, 12),
           st.sampled_from([0.5, 0.75, 1.0]), st.integers(0, 6))
    def test_monotonicity(self, h, dh, a, b, s, m):
        f = GSFunction.hermite(m)
        base = gs_seminorm(f, s, h, a, b, 4.0)
        assert gs_seminorm(f, s, h * dh, a, b, 4.0) <= base
        assert gs_seminorm(f, s, h, min(a + 1, 12), b, 4.0) >= base
        assert gs_seminorm(f, s, h, a, min(b + 1, 12), 4.0) >= base
        assert gs_seminorm(f, s, h, a, b, 6.0) >= base


class TestGSProbe:
    def test_h0_half(self):
        assert gs_membership_probe(h0, 0.5).verdict == MEMBER

    def test_h0_below_half(self):
        assert gs_membership_probe(h0, 0.4).verdict == NON_MEMBER

    @pytest.mark.parametrize("coeffs", [[1.0], [1, 0, 0.5], [0, 0, 0, 1], [0.3] * 10])
    def test_s1_member(self, coeffs):
        res = gs_membership_probe(GSFunction(coeffs), 1.0)
        assert res.verdict == MEMBER and res.h_min is not None

    def test_zero(self):
        assert gs_membership_probe(GSFunction([0.0]), 0.3).verdict == MEMBER

    def test_grid_must_increase(self):
        with pytest.raises(ValueError):
            gs_membership_probe(h0, 1.0, [1.0, 0.5])


@pytest.fixture(scope="module")
def rows():
    return {r["function_id"]: r for r in modspace_identity_experiment()}


class TestModspaceExperiment:
    def test_gaussian_passes_everything(self, rows):
        r = rows["h0"]
        assert (r["verdict_GS1"], r["verdict_all_GRS"], r["verdict_some_eps"]) == (PASS, PASS, PASS)

    def test_zero_passes_everything(self, rows):
        r = rows["zero"]
        assert (r["verdict_GS1"], r["verdict_all_GRS"], r["verdict_some_eps"]) == (PASS, PASS, PASS)

    def test_poly_decay(self, rows):
        r = rows["poly_decay_3"]
        assert r["verdict_some_eps"] == FAIL and r["verdict_GS1"] is None

    def test_no_disagreement(self, rows):
        assert all(r["agree"] is not False for r in rows.values())
        assert all(r["window_agree"] for r in rows.values())

    def test_needs_p_equal_q(self):
        with pytest.raises(ValueError):
            modspace_identity_experiment(p=1, q=2)
