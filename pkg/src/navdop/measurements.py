"""Measurement sensitivities and noise models for the three data types.

Gradients are taken with respect to the rescaled initial state ``[r0, T v0]``.
Optical gradients carry units of rad per AU; the information module folds the
spacecraft radius into them so that all noise can be expressed in km.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (DegenerateGeometryError, SceneConfig, pointing_angle,
                       pulsar_direction, station_position)
from .kinematics import AU_KM, OrbitConfig, circular_state, stm_exact, stm_jet

MAS_TO_RAD = np.pi / (180.0 * 3600.0 * 1000.0)
RANGE_NOISE_STRENGTH = 8.6e-13  # sqrt(hr); range noise per km of slant range
KINDS = ("optical", "pulsar", "range")


@dataclass(frozen=True)
class MeasGradient:
    h: np.ndarray
    kind: str
    t: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown measurement kind {self.kind!r}")

    @property
    def position(self) -> np.ndarray:
        return self.h[:2]

    @property
    def displacement(self) -> np.ndarray:
        return self.h[2:]


@dataclass(frozen=True)
class OpticalNoise:
    theta: float          # rad / pixel
    sigma_s: float        # pixel
    sigma_bar_s: float    # pixel, with ephemeris error folded in
    asteroid_mean_dist: float

    def __post_init__(self):
        if min(self.theta, self.sigma_s, self.sigma_bar_s) <= 0:
            raise ValueError("optical noise terms must be positive")
        if self.sigma_bar_s < self.sigma_s * (1 - 1e-12):
            raise ValueError("sigma_bar_s cannot be below sigma_s")


@dataclass(frozen=True)
class PulsarNoise:
    s_tau: float          # km * cm * sqrt(hr)
    area: float           # cm^2
    sigma_beta: float     # rad

    def __post_init__(self):
        if min(self.s_tau, self.area) <= 0 or self.sigma_beta < 0:
            raise ValueError("pulsar noise terms must be positive")


@dataclass(frozen=True)
class RangeNoise:
    rho0_km: float
    s_rho: float = RANGE_NOISE_STRENGTH

    def __post_init__(self):
        if self.rho0_km <= 0 or self.s_rho <= 0:
            raise ValueError("range noise terms must be positive")


def _stm(orbit: OrbitConfig, t: float, mode: str, order: int = 2):
    if mode == "exact":
        return stm_exact(orbit, t)
    if mode == "jet":
        return stm_jet(orbit, t, order)
    raise ValueError(f"unknown stm_mode {mode!r}")


def asteroid_position(a_A: float, alpha: float) -> np.ndarray:
    return a_A * np.array([np.cos(alpha), np.sin(alpha)])


def optical_gradient(orbit: OrbitConfig, scene: SceneConfig, alpha_j: float,
                     t: float, stm_mode: str = "exact",
                     a_A: float | None = None) -> MeasGradient:
    """Sensitivity of the camera pointing angle to the initial state [rad/AU].

    The pointing angle is that of ``r_A - r``, so moving the spacecraft along
    ``[-sin g, cos g]`` lowers it; the gradient carries that minus sign.
    """
    a_A = scene.asteroid_mean_dist if a_A is None else a_A
    a = orbit.a
    if stm_mode == "exact":
        r = circular_state(orbit, t).r
        ang = pointing_angle(r, asteroid_position(a_A, alpha_j))
        los_perp = np.array([np.sin(ang.gamma), -np.cos(ang.gamma)]) / ang.distance
        h = los_perp @ stm_exact(orbit, t).position_rows
        return MeasGradient(h, "optical", t)
    if stm_mode != "jet":
        raise ValueError(f"unknown stm_mode {stm_mode!r}")
    # zeroth plus first order terms in n t, frame with theta0 = 0
    alpha = alpha_j - orbit.theta0
    ca, sa = np.cos(alpha), np.sin(alpha)
    d2 = a * a + a_A * a_A - 2 * a * a_A * ca
    if d2 == 0.0:
        raise DegenerateGeometryError("spacecraft and beacon coincide")
    tb = t / orbit.T
    pos0 = np.array([a_A * sa, a - a_A * ca]) / d2
    nt = orbit.n * t
    pos1 = -a * nt * np.array([a * a - 2 * a * a_A * ca + a_A**2 * np.cos(2 * alpha),
                              2 * a_A * (a_A * ca - a) * sa]) / d2**2
    pos = pos0 + pos1
    h = np.concatenate([pos, tb * pos])
    if orbit.theta0 != 0.0:
        c, s = np.cos(orbit.theta0), np.sin(orbit.theta0)
        rot = np.array([[c, -s], [s, c]])
        h = np.concatenate([rot @ h[:2], rot @ h[2:]])
    return MeasGradient(h, "optical", t)


def optical_noise(camera, a: float, a_A: float, sigma_A_km: float) -> tuple[float, float]:
    """Sample noise inflated by beacon ephemeris error.

    Returns
    -------
    sigma_bar_s : float
        Effective pixel noise.
    distance_km : float
        Equivalent per-image distance uncertainty ``theta * sigma_bar_s * a``.
    """
    if a_A == a:
        raise ValueError("beacon radius equal to spacecraft radius amplifies ephemeris error without bound")
    theta = camera.theta_rad
    angular = abs(a_A / (a_A - a)) * (sigma_A_km / (a_A * AU_KM))
    sigma_bar = float(np.sqrt(camera.sigma_s**2 + (angular / theta) ** 2))
    return sigma_bar, theta * sigma_bar * a * AU_KM


def ephemeris_angular_error(a: float, a_A: float, sigma_A_km: float) -> float:
    return abs(a_A / (a_A - a)) * sigma_A_km / (a_A * AU_KM)


def optical_aggregate_sigma(theta: float, sigma_bar_s: float, a: float, p: float,
                            n_gamma: float) -> float:
    """Aggregate distance-equivalent noise of ``p * n_gamma`` images [km]."""
    if p * n_gamma < 1:
        raise ValueError("need at least one image")
    return theta * sigma_bar_s * a * AU_KM / np.sqrt(p * n_gamma)


def pulsar_gradient(orbit: OrbitConfig, beta_k: float, t: float,
                    stm_mode: str = "jet") -> MeasGradient:
    n_hat = pulsar_direction(beta_k)
    if stm_mode == "jet":
        tb = t / orbit.T
        h = np.concatenate([n_hat, tb * n_hat])
    else:
        h = n_hat @ _stm(orbit, t, stm_mode).position_rows
    return MeasGradient(h, "pulsar", t)


def pulsar_sigma(s_tau: float, area: float, h_tau: float) -> float:
    if area <= 0 or h_tau <= 0:
        raise ValueError("area and integration time must be positive")
    return s_tau / np.sqrt(area * h_tau)


def pulsar_effective_sigma(s_tau_mean: float, area: float, T_hr: float, a_km: float,
                           sigma_beta_mean: float, n_tau: int) -> float:
    """Per-period TOA noise with pulsar location error treated as extra variance."""
    if n_tau < 1:
        raise ValueError("n_tau must be >= 1")
    return float(np.sqrt(s_tau_mean**2 / (area * T_hr)
                         + (a_km * sigma_beta_mean / n_tau) ** 2))


def pulsar_location_error_bound(a_km: float, sigma_beta: float) -> float:
    return a_km * sigma_beta


def range_gradient(orbit: OrbitConfig, scene: SceneConfig, station_i: int,
                   t: float, stm_mode: str = "jet") -> MeasGradient:
    """Slant-range sensitivity using the quadratic STM jet by default."""
    r = circular_state(orbit, t).r
    rho = r - station_position(scene, station_i, t)
    dist = np.hypot(rho[0], rho[1])
    if dist == 0.0:
        raise DegenerateGeometryError("spacecraft and station coincide")
    h = (rho / dist) @ _stm(orbit, t, stm_mode, order=2).position_rows
    return MeasGradient(h, "range", t)


def range_sigma(rho0_km: float, h_rho: float, s_rho: float = RANGE_NOISE_STRENGTH) -> float:
    """Range noise after ``h_rho`` hours of integration [km]."""
    if h_rho <= 0:
        raise ValueError("integration time must be positive")
    return s_rho * rho0_km / np.sqrt(h_rho)


def range_sigma_from_factor(noise_factor: float, h_rho: float) -> float:
    """Range noise from a precomputed ``s_rho * rho0`` factor [km sqrt(hr)]."""
    if h_rho <= 0:
        raise ValueError("integration time must be positive")
    return noise_factor / np.sqrt(h_rho)


def scan_angle(angle0, t, T: float = 1.0):
    """Continuous full-circle scan schedule, one revolution per period."""
    return angle0 + 2 * np.pi * np.asarray(t, float) / T
