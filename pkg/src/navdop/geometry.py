"""Planar heliocentric geometry: Earth, tracking stations, beacons and pulsars."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kinematics import AU_KM

EARTH_RADIUS_KM = 6378.0
EARTH_MEAN_MOTION = 2 * np.pi / 365.0


class DegenerateGeometryError(ValueError):
    """Raised when two bodies coincide and a direction is undefined."""


def wrap_angle(angle):
    """Map angles to (-pi, pi]."""
    out = np.mod(np.asarray(angle, float) + np.pi, 2 * np.pi) - np.pi
    out = np.where(out == -np.pi, np.pi, out)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SceneConfig:
    a_earth: float = 1.0
    n_earth: float = EARTH_MEAN_MOTION
    xi0: float = 0.0
    R_earth: float = EARTH_RADIUS_KM / AU_KM
    omega_earth: float = 2 * np.pi
    station_phases: tuple = field(default_factory=tuple)
    asteroid_mean_dist: float = 2.7
    sun_keepout: bool = False

    def __post_init__(self):
        if not self.a_earth > self.R_earth >= 0:
            raise ValueError("scene requires a_earth > R_earth >= 0")
        wrapped = tuple(float(np.mod(p, 2 * np.pi)) for p in self.station_phases)
        object.__setattr__(self, "station_phases", wrapped)

    def with_stations_for(self, a: float, xi0: float | None = None) -> "SceneConfig":
        """Return a copy whose two stations follow the rise constraint."""
        xi = self.xi0 if xi0 is None else xi0
        first = station_rise_phase(self, a, xi)
        return SceneConfig(self.a_earth, self.n_earth, xi, self.R_earth,
                           self.omega_earth, (first, first - np.pi),
                           self.asteroid_mean_dist, self.sun_keepout)


@dataclass(frozen=True)
class PointingAngle:
    gamma: float
    distance: float

    @property
    def unit(self) -> np.ndarray:
        return np.array([np.cos(self.gamma), np.sin(self.gamma)])


def earth_position(scene: SceneConfig, t):
    xi = scene.n_earth * np.asarray(t, float) + scene.xi0
    return scene.a_earth * np.stack([np.cos(xi), np.sin(xi)], axis=-1)


def station_position(scene: SceneConfig, i: int, t):
    if not 0 <= i < len(scene.station_phases):
        raise IndexError(f"station {i} not configured")
    phi = scene.omega_earth * np.asarray(t, float) + scene.station_phases[i]
    offset = scene.R_earth * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    return earth_position(scene, t) + offset


def pulsar_direction(beta):
    beta = np.asarray(beta, float)
    return np.stack([np.cos(beta), np.sin(beta)], axis=-1)


def pointing_angle(spacecraft_r, asteroid_r) -> PointingAngle:
    d = np.asarray(asteroid_r, float) - np.asarray(spacecraft_r, float)
    dist = float(np.hypot(d[0], d[1]))
    if dist == 0.0:
        raise DegenerateGeometryError("spacecraft and beacon coincide")
    return PointingAngle(gamma=float(np.arctan2(d[1], d[0])), distance=dist)


def slant_range(spacecraft_r, station_r) -> float:
    d = np.asarray(spacecraft_r, float) - np.asarray(station_r, float)
    return float(np.hypot(d[0], d[1]))


def station_rise_phase(scene: SceneConfig, a: float, xi0: float) -> float:
    """Initial phase of the station that sees the spacecraft rise at t = 0.

    The station sits 90 degrees of Earth rotation ahead of the sub-spacecraft
    point, so its phase is fixed by the Sun-Earth-spacecraft triangle.
    """
    a_e = scene.a_earth
    d = np.sqrt(a_e**2 + a**2 - 2 * a_e * a * np.cos(xi0))
    if d == 0.0:
        raise DegenerateGeometryError("spacecraft at the Earth centre")
    sin_phi = -(a - a_e * np.cos(xi0)) / d
    cos_phi = -a_e * np.sin(xi0) / d
    return float(np.arctan2(sin_phi, cos_phi))


def rise_angle_correction(scene: SceneConfig, a: float, xi: float) -> float:
    """First-order shortening of the rise central angle below pi/2.

    Computed for reporting only; pass boundaries use the zeroth-order value.
    """
    d = np.sqrt(scene.a_earth**2 + a**2 - 2 * scene.a_earth * a * np.cos(xi))
    return float(np.pi / 2 - scene.R_earth / d)


def range_timeline(p: int, T: float = 1.0) -> list[list[tuple[float, float]]]:
    """Half-day pass intervals for the two alternating stations."""
    if p < 1:
        raise ValueError("p must be >= 1")
    first = [((j - 1) * T, (j - 0.5) * T) for j in range(1, p + 1)]
    second = [((j - 0.5) * T, j * T) for j in range(1, p + 1)]
    return [first, second]


def active_station(t, T: float = 1.0):
    """Index of the station tracking at ``t``; handoff instants go to the later station."""
    frac = np.mod(np.asarray(t, float) / T, 1.0)
    out = (frac >= 0.5).astype(int)
    return int(out) if np.ndim(out) == 0 else out
