import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from navdop import catalog
from navdop.geometry import DegenerateGeometryError, SceneConfig
from navdop.kinematics import AU_KM, OrbitConfig, circular_state
from navdop.measurements import (MAS_TO_RAD, MeasGradient, OpticalNoise, PulsarNoise,
                                 RangeNoise, asteroid_position, ephemeris_angular_error,
                                 optical_aggregate_sigma, optical_gradient, optical_noise,
                                 pulsar_effective_sigma, pulsar_gradient,
                                 pulsar_location_error_bound, pulsar_sigma, range_gradient,
                                 range_sigma, range_sigma_from_factor, scan_angle)
from oracles import gradient_oracle_errors, rel

MARS = OrbitConfig(1.5, 0.009)
HIGH_END = catalog.camera("high-end")


def test_gradient_container():
    g = MeasGradient(np.arange(4.0), "range", 0.0)
    np.testing.assert_array_equal(g.position, [0, 1])
    np.testing.assert_array_equal(g.displacement, [2, 3])
    with pytest.raises(ValueError):
        MeasGradient(np.zeros(4), "doppler", 0.0)


def test_noise_containers_validate():
    with pytest.raises(ValueError):
        OpticalNoise(1e-5, 0.25, 0.2, 2.7)
    with pytest.raises(ValueError):
        PulsarNoise(-1.0, 129.0, 0.0)
    with pytest.raises(ValueError):
        RangeNoise(0.0)


def test_optical_at_epoch_is_perpendicular_line_of_sight():
    sc = SceneConfig()
    for mode in ("exact", "jet"):
        h = optical_gradient(MARS, sc, 1.0, 0.0, mode).h
        los = asteroid_position(2.7, 1.0) - circular_state(MARS, 0.0).r
        d = np.linalg.norm(los)
        assert abs(h[:2] @ los) < 1e-10 * np.linalg.norm(h[:2]) * d
        assert np.linalg.norm(h[:2]) == pytest.approx(1 / d)
        np.testing.assert_array_equal(h[2:], [0.0, 0.0])


@pytest.mark.parametrize("kind,tol", [("optical", 1e-5), ("pulsar", 1e-6), ("range", 1e-4)])
def test_gradients_match_finite_differences(kind, tol):
    assert gradient_oracle_errors(kind, 12, seed=7).max() < tol


def test_optical_jet_close_to_exact_and_converges():
    sc = SceneConfig()
    errs = []
    for n in (0.009, 0.0045):
        orbit = OrbitConfig(1.5, n, 0.3)
        errs.append(rel(optical_gradient(orbit, sc, 2.0, 1.0, "jet").h,
                        optical_gradient(orbit, sc, 2.0, 1.0, "exact").h))
    assert errs[0] < 1e-4
    assert errs[0] / errs[1] > 3.5  # second-order remainder


def test_optical_degenerate():
    with pytest.raises(DegenerateGeometryError):
        optical_gradient(MARS, SceneConfig(asteroid_mean_dist=1.5), 0.0, 0.0, "jet")
    with pytest.raises(ValueError):
        optical_gradient(MARS, SceneConfig(), 0.0, 0.0, "other")


def test_pulsar_jet_structure():
    np.testing.assert_allclose(pulsar_gradient(MARS, 0.0, 0.0).h, [1, 0, 0, 0])
    np.testing.assert_allclose(pulsar_gradient(MARS, np.pi / 2, 1.0).h, [0, 1, 0, 1], atol=1e-15)


@given(beta=st.floats(0, 2 * np.pi), t=st.floats(0, 20))
def test_pulsar_position_and_displacement_parallel(beta, t):
    h = pulsar_gradient(MARS, beta, t).h
    assert abs(h[0] * h[3] - h[1] * h[2]) < 1e-12
    np.testing.assert_allclose(h[2:], (t / MARS.T) * h[:2], atol=1e-12)


def test_range_gradient_frozen_dynamics():
    orbit = OrbitConfig(1.5, 1e-300)
    sc = SceneConfig(xi0=0.4).with_stations_for(1.5)
    h = range_gradient(orbit, sc, 0, 0.0).h
    from navdop.geometry import station_position
    rho = circular_state(orbit, 0).r - station_position(sc, 0, 0.0)
    np.testing.assert_allclose(h[:2], rho / np.linalg.norm(rho), atol=1e-15)


def test_range_gradient_near_unit_norm_at_one_day():
    sc = SceneConfig(xi0=1.0).with_stations_for(1.5)
    h = range_gradient(MARS, sc, 1, 1.0).h
    assert abs(np.linalg.norm(h[:2]) - 1) < 1e-3


def test_optical_noise_values():
    sbar, dist = optical_noise(HIGH_END, 1.5, 2.7, 100.0)
    assert ephemeris_angular_error(1.5, 2.7, 100.0) < 0.62e-6
    assert sbar == pytest.approx(0.26, abs=0.005)
    assert dist == pytest.approx(HIGH_END.theta_rad * sbar * 1.5 * AU_KM)
    sbar_n, _ = optical_noise(HIGH_END, 30.0, 40.0, 0.00013 * AU_KM)
    assert ephemeris_angular_error(30.0, 40.0, 0.00013 * AU_KM) == pytest.approx(13e-6, rel=0.01)
    assert sbar_n == pytest.approx(1.3, rel=0.03)
    assert optical_noise(HIGH_END, 1.5, 2.7, 0.0)[0] == HIGH_END.sigma_s
    with pytest.raises(ValueError):
        optical_noise(HIGH_END, 2.7, 2.7, 1.0)


def test_optical_aggregate_sigma():
    theta = HIGH_END.theta_rad
    assert optical_aggregate_sigma(theta, 0.25, 1.5, 1, 1440) == pytest.approx(14.8, rel=0.05)
    assert optical_aggregate_sigma(theta, 1.3, 30.0, 1, 1440) == pytest.approx(1541.6, rel=0.05)
    assert (optical_aggregate_sigma(theta, 1.3, 30.0, 4, 1440)
            == pytest.approx(0.5 * optical_aggregate_sigma(theta, 1.3, 30.0, 1, 1440)))
    with pytest.raises(ValueError):
        optical_aggregate_sigma(theta, 1.0, 1.0, 1, 0.5)


def test_pulsar_noise_models():
    assert pulsar_sigma(576.0, 129.0, 3.0) == pytest.approx(29.3, rel=0.01)
    assert pulsar_sigma(576.0, 4 * 129.0, 3.0) == pytest.approx(pulsar_sigma(576.0, 129.0, 3.0) / 2)
    assert pulsar_sigma(576.0, 129.0, 12.0) == pytest.approx(pulsar_sigma(576.0, 129.0, 3.0) / 2)
    assert pulsar_effective_sigma(576.0, 129.0, 24.0, 174.0, 1.0, 8) == pytest.approx(24.1, rel=0.02)
    assert pulsar_effective_sigma(576.0, 129.0, 24.0, 3491.0, 1.0, 8) == pytest.approx(436.5, rel=0.02)
    a_sigma = 30 * AU_KM * 1.62 * MAS_TO_RAD
    assert pulsar_effective_sigma(397.0, 129.0, 24.0, a_sigma, 1.0, 4) == pytest.approx(11.4, rel=0.03)
    with pytest.raises(ValueError):
        pulsar_effective_sigma(576.0, 129.0, 24.0, 174.0, 1.0, 0)


def test_pulsar_per_source_sigma_spread():
    sextant = catalog.select(catalog.builtin_pulsars(), "sextant")
    sig = [pulsar_sigma(e.s_tau, 1800.0, 1.0) for e in sextant]
    assert 0.5 < min(sig) < 2.5 and 30.0 < max(sig) < 40.0


def test_pulsar_location_bound():
    assert pulsar_location_error_bound(1.5 * AU_KM, 160 * MAS_TO_RAD) == pytest.approx(174, rel=0.01)
    assert pulsar_location_error_bound(30 * AU_KM, 160 * MAS_TO_RAD) == pytest.approx(3491, rel=0.01)
    assert pulsar_location_error_bound(30 * AU_KM, 0.0) == 0.0


def test_range_noise_models():
    assert range_sigma(AU_KM, 1 / 60) == pytest.approx(0.001, rel=0.01)
    assert range_sigma_from_factor(0.0003, 24) == pytest.approx(6.1e-5, rel=0.02)
    assert range_sigma_from_factor(0.004, 24) == pytest.approx(8.2e-4, rel=0.02)
    assert range_sigma(2.5 * AU_KM, 1.0) == pytest.approx(0.0003, rel=0.1)
    assert range_sigma(4 * AU_KM, 1.0) == pytest.approx(4 * range_sigma(AU_KM, 1.0))
    assert range_sigma(AU_KM, 4.0) == pytest.approx(range_sigma(AU_KM, 1.0) / 2)
    with pytest.raises(ValueError):
        range_sigma(AU_KM, 0.0)


def test_scan_advances_full_turn_per_period():
    assert scan_angle(0.3, 2.0, T=2.0) - 0.3 == pytest.approx(2 * np.pi)
