"""
Planar-array methods: plane-wave series (FPS) and Kirchhoff integral (FPK)
"""
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from structlog.testing import capture_logs

from farfield.core.exceptions import DomainError, PropagationError, SingularityError
from farfield.models.field import AngularSpectrum, FarFieldRequest, PlanarField
from farfield.models.grid import PlanarGrid, SpectralLattice
from farfield.models.source import PointSource, SourceModel
from farfield.services.field_model import sample_planar
from farfield.services.planar import (
    fpk_predict,
    fps_decompose,
    fps_propagate,
    imaginary_source_margin,
    kirchhoff_integral,
    soft_green,
    soft_green_normal_derivative,
    steered_response,
)
from farfield.services.sampling import aperture_weights


def _field(grid, values, frequency=1500.0):
    return PlanarField(grid=grid, values=values, frequency=frequency)


def _square_grid(n=6, dx=0.1, dy=0.12, z=0.28):
    return PlanarGrid(x_coords=np.arange(n) * dx, y_coords=np.arange(n) * dy, z_plane=z)


class TestDecomposition:
    def test_zero_field(self, uniform_grid):
        spec = fps_decompose(_field(uniform_grid, np.zeros(uniform_grid.shape)), 16)
        assert spec.coeffs.shape == (16, 16)
        assert not np.any(spec.coeffs)

    def test_constant_field_has_single_dc_harmonic(self):
        grid = _square_grid(6)
        spec = fps_decompose(_field(grid, np.ones((6, 6))), 6, windowed=False)
        expected = np.zeros((6, 6))
        expected[3, 3] = 1.0
        assert_allclose(spec.coeffs, expected, atol=1e-12)

    def test_on_lattice_plane_wave(self):
        grid = _square_grid(8)
        dkx = SpectralLattice.spacing(8, grid.dx)
        values = np.exp(1j * 2 * dkx * grid.x_coords)[:, None] * np.ones((1, 8))
        spec = fps_decompose(_field(grid, values), 8, windowed=False)
        peak = np.unravel_index(np.argmax(np.abs(spec.coeffs)), spec.coeffs.shape)
        assert peak == (4 + 2, 4)
        assert abs(spec.coeffs[peak]) == pytest.approx(1.0)
        masked = spec.coeffs.copy()
        masked[peak] = 0
        assert_allclose(masked, 0, atol=1e-12)

    def test_total_area_is_unwindowed(self, uniform_grid):
        spec = fps_decompose(_field(uniform_grid, np.ones(uniform_grid.shape)), 8)
        assert spec.total_area == pytest.approx(7 * 0.1 * 5 * 0.12)
        assert (spec.n_x, spec.n_y) == (8, 6)


class TestPropagation:
    @pytest.mark.parametrize("M, tol", [(8, 1e-10), (200, 1e-8)])
    def test_identity_round_trip(self, M, tol, rng):
        grid = PlanarGrid(x_coords=np.arange(8) * 0.1, y_coords=np.arange(8) * 0.12, z_plane=0.28)
        values = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        field = _field(grid, values)
        spec = fps_decompose(field, M, windowed=False)
        back = fps_propagate(spec, FarFieldRequest.on_grid(grid, 0.28)).reshape(8, 8)
        assert np.linalg.norm(back - values) / np.linalg.norm(values) < tol

    def test_single_harmonic_advances_by_kz(self):
        M = 16
        lattice = SpectralLattice(M=M, dkx=2.0, dky=1.5, k=20.0)
        coeffs = np.zeros((M, M), dtype=complex)
        m, l = 3, -2
        coeffs[lattice.index_of(m), lattice.index_of(l)] = 0.7 - 0.2j
        spec = AngularSpectrum(
            lattice=lattice, coeffs=coeffs, z_ref=0.3, total_area=1.0,
            n_x=8, n_y=6, dx=0.1, dy=0.12,
        )
        kx, ky = m * 2.0, l * 1.5
        kz = math.sqrt(20.0 ** 2 - kx ** 2 - ky ** 2)
        req = FarFieldRequest.on_line([-0.4, 0.0, 0.25], 0.1, 2.3)
        expected = (
            48 / M ** 2 * (0.7 - 0.2j)
            * np.exp(1j * (kx * req.x + ky * 0.1))
            * np.exp(1j * kz * 2.0)
        )
        assert_allclose(fps_propagate(spec, req, margin_factor=0.0), expected, rtol=1e-12)

    def test_back_propagation_rejected(self, random_planar):
        spec = fps_decompose(random_planar, 16)
        with pytest.raises(PropagationError):
            fps_propagate(spec, FarFieldRequest.on_line([0.0], 0.0, 0.1))

    def test_low_margin_is_logged(self, random_planar):
        spec = fps_decompose(random_planar, 16)
        with capture_logs() as logs:
            fps_propagate(spec, FarFieldRequest.on_line([0.0], 0.0, 2.03))
        events = [e for e in logs if e["event"] == "imaginary_source_margin_low"]
        assert events and events[0]["log_level"] == "warning"
        assert events[0]["harmonics"] == 16

    def test_linearity(self, uniform_grid, rng):
        p1 = rng.normal(size=uniform_grid.shape) + 0j
        p2 = 1j * rng.normal(size=uniform_grid.shape)
        req = FarFieldRequest.on_line(np.linspace(-1, 1, 9), 0.0, 2.03)

        def run(values):
            return fps_propagate(fps_decompose(_field(uniform_grid, values), 64), req)

        a, b = 0.3 - 1.1j, 2.5
        assert_allclose(run(a * p1 + b * p2), a * run(p1) + b * run(p2), rtol=1e-10, atol=1e-14)

    def test_translation_consistency(self):
        delta = 0.3
        grid = PlanarGrid(x_coords=np.arange(12) * 0.1 - 0.55, y_coords=np.arange(8) * 0.12 - 0.42,
                          z_plane=0.28)
        model = SourceModel(sources=[PointSource(position=(0.05, 0.0, 0.0))], frequency=1500.0)
        moved = SourceModel(sources=[PointSource(position=(0.05 + delta, 0.0, 0.0))], frequency=1500.0)
        x_far = np.linspace(-0.5, 0.5, 7)

        def far(m, g, shift):
            spec = fps_decompose(sample_planar(m, g), 64, windowed=False)
            return fps_propagate(spec, FarFieldRequest.on_line(x_far + shift, 0.0, 1.0))

        assert_allclose(
            np.abs(far(moved, grid.shifted(dx=delta), delta)),
            np.abs(far(model, grid, 0.0)),
            rtol=1e-8,
        )

    def test_imaginary_source_margin(self, scenario_1500):
        assert imaginary_source_margin(scenario_1500.near_grid, 0.28, 2.03) == pytest.approx(17.5)
        with pytest.raises(PropagationError):
            imaginary_source_margin(scenario_1500.near_grid, 2.03, 0.28)

    def test_margin_from_spectrum_matches_grid(self, scenario_1500):
        spec = fps_decompose(sample_planar(scenario_1500.model, scenario_1500.near_grid), 64)
        assert imaginary_source_margin(spec, 0.28, 2.03) == pytest.approx(
            imaginary_source_margin(scenario_1500.near_grid, 0.28, 2.03)
        )
        with capture_logs() as logs:
            fps_propagate(spec, FarFieldRequest.on_line([0.0], 0.0, 2.03), margin_factor=64 / 17.5 - 0.01)
        assert [e["event"] for e in logs] == []
        with capture_logs() as logs:
            fps_propagate(spec, FarFieldRequest.on_line([0.0], 0.0, 2.03), margin_factor=64 / 17.5 + 0.01)
        assert [e["recommended"] for e in logs] == [65]


class TestKirchhoff:
    def _symmetric_field(self, rng, frequency=500.0):
        grid = PlanarGrid(x_coords=np.linspace(-0.5, 0.5, 11), y_coords=np.linspace(-0.3, 0.3, 7),
                          z_plane=0.28)
        values = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
        return _field(grid, values, frequency)

    def test_zero_field(self, uniform_grid):
        field = _field(uniform_grid, np.zeros(uniform_grid.shape))
        req = FarFieldRequest.on_line(np.linspace(-1, 1, 5), 0.0, 2.03)
        assert not np.any(fpk_predict(field, req))

    def test_on_axis_collapse(self, rng):
        field = self._symmetric_field(rng)
        req = FarFieldRequest.on_line([0.0], 0.0, 2.03)
        weights, _ = aperture_weights(field.grid, windowed=True)
        k = field.wavenumber
        R = 2.03 - 0.28
        expected = -1j * k / (2 * math.pi * R) * np.sum(weights * field.values)
        assert fpk_predict(field, req)[0] == pytest.approx(expected, rel=1e-12)

    def test_phased_array_duality(self, rng):
        field = self._symmetric_field(rng)
        req = FarFieldRequest.on_line(np.linspace(-1, 1, 11), 0.2, 2.03)
        k = field.wavenumber
        dz = 2.03 - 0.28
        R = np.sqrt(req.x ** 2 + 0.2 ** 2 + dz ** 2)
        beam = steered_response(field, k * req.x / R, k * 0.2 / R)
        assert_allclose(np.abs(fpk_predict(field, req)), k * (dz / R) / (2 * math.pi * R) * np.abs(beam),
                        rtol=1e-12)

    def test_points_behind_array(self, random_planar):
        with pytest.raises(PropagationError):
            fpk_predict(random_planar, FarFieldRequest.on_line([0.0], 0.0, 0.28))

    def test_fresnel_checks(self, scenario_1500, scenario_500):
        req = FarFieldRequest.on_line([0.0, 0.5], 0.0, 2.03)
        near = sample_planar(scenario_1500.model, scenario_1500.near_grid)
        with capture_logs() as logs:
            fpk_predict(near, req, source_diameter=0.49)
        assert any(e["event"] == "fresnel_parameter_low" for e in logs)

        near = sample_planar(scenario_500.model, scenario_500.near_grid)
        with capture_logs() as logs:
            fpk_predict(near, req, source_diameter=0.49)
        assert not any(e["event"] == "fresnel_parameter_low" for e in logs)

        close = FarFieldRequest.on_line([0.0], 0.0, 1.0)
        with pytest.raises(DomainError):
            fpk_predict(near, close, source_diameter=1.0)

    def test_exact_integral_approaches_far_field_form(self, rng):
        field = self._symmetric_field(rng)
        req = FarFieldRequest.on_line([-30.0, 30.0], 0.0, 100.0)
        exact = kirchhoff_integral(field, req)
        reduced = fpk_predict(field, req)
        assert_allclose(np.abs(exact), np.abs(reduced), rtol=0.05)


class TestSoftGreen:
    def test_vanishes_on_the_surface(self):
        k = 31.416
        for r in ([0.0, 0.0, 0.28], [0.3, -0.2, 0.28]):
            assert abs(soft_green(r, [0.1, 0.0, 2.03], 0.28, k)) < 1e-15

    def test_spot_value(self):
        k = 31.416
        r, rp, zn = np.array([0.0, 0.0, 0.28]), np.array([0.0, 0.0, 2.03]), 0.28
        r = r + np.array([0.0, 0.0, 0.05])
        R1 = abs(r[2] - rp[2])
        R2 = abs(r[2] - 2 * zn + rp[2])
        expected = (np.exp(1j * k * R1) / R1 - np.exp(1j * k * R2) / R2) / (4 * math.pi)
        assert soft_green(r, rp, zn, k) == pytest.approx(expected, rel=1e-12)

    def test_bounded_by_two_spherical_waves(self):
        k = 10.0
        for z in (0.5, 5.0, 50.0):
            g = soft_green([0.0, 0.0, 0.3], [0.0, 0.0, z], 0.28, k)
            assert abs(g) <= 2.0 / (4 * math.pi * (z - 0.3))

    def test_coincident_points(self):
        with pytest.raises(SingularityError):
            soft_green([0.0, 0.0, 1.0], [0.0, 0.0, 1.0], 0.28, 10.0)

    def test_normal_derivative_matches_finite_difference(self):
        k, zn = 12.0, 0.28
        rp = np.array([0.2, -0.1, 1.5])
        h = 1e-6
        for r in ([0.1, 0.05, 0.28], [-0.3, 0.2, 0.4]):
            r = np.array(r)
            up = soft_green(r + [0, 0, h], rp, zn, k)
            down = soft_green(r - [0, 0, h], rp, zn, k)
            numeric = (up - down) / (2 * h)
            assert soft_green_normal_derivative(r, rp, zn, k) == pytest.approx(numeric, rel=1e-6)
