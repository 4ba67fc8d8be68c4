"""Built-in pulsar and camera catalogs, selection statistics, magnitude screening."""
from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

CATALOG_ENV = "NAVDOP_CATALOG"

# name, ra_deg, dec_deg, s_tau, sigma_beta_mas, sextant
_PULSAR_ROWS = """\
J0030+0451,8.91,1.45,431.2,21.35,1
J0218+4232,47.05,27.01,200.3,31.12,1
J0437-4715,50.47,-67.87,697.1,0.05,1
B0531+21,84.10,-1.29,28.9,3.43,1
J0751+1807,116.33,-2.81,,7.23,0
J1012+5307,133.36,38.76,1474.7,0.48,1
B0833-45,153.37,-60.36,778.9,0.37,0
J1024-0719,160.73,-16.04,2791358.2,0.67,0
B1055-52,195.77,-52.39,,209.51,0
B1509-58,243.89,-39.40,1672.3,1216.4,1
B1821-24,275.56,-1.55,41.1,6.01,1
B0540-69,301.60,-86.66,573.9,69.07,0
B1937+21,301.99,42.33,62.1,0.04,1
J2124-3358,312.74,-17.82,,0.79,0
J2214+3000,348.81,37.71,,,0
"""

# name, fov_deg, theta_urad, m_max, alpha_min_deg, sigma_s
_CAMERA_ROWS = """\
low-end,26.9,128,9.5,30,0.25
mid-level,7.0,60,10.5,30,0.25
high-end,0.6,10.0,13.5,30,0.25
"""

HIGH_END_COADDED_M_MAX = 25.0
BEST4 = ("J0437-4715", "B0833-45", "B1821-24", "B1937+21")


class MissingFieldError(ValueError):
    pass


@dataclass(frozen=True)
class PulsarEntry:
    name: str
    ra_deg: float
    dec_deg: float
    s_tau: Optional[float]
    sigma_beta: Optional[float]  # mas
    sextant: bool

    def __post_init__(self):
        if not 0.0 <= self.ra_deg < 360.0:
            raise ValueError(f"{self.name}: ra outside [0, 360)")
        for label, value in (("s_tau", self.s_tau), ("sigma_beta", self.sigma_beta)):
            if value is not None and value <= 0:
                raise ValueError(f"{self.name}: {label} must be positive")

    @property
    def beta(self) -> float:
        """In-plane angle of the pulsar direction [rad]."""
        return float(np.radians(self.ra_deg))


@dataclass(frozen=True)
class CameraSpec:
    name: str
    fov_deg: float
    theta_urad: float
    m_max: float
    alpha_min_deg: float
    sigma_s: float

    def __post_init__(self):
        if self.theta_urad <= 0 or self.sigma_s <= 0:
            raise ValueError(f"{self.name}: theta and sigma_s must be positive")
        if np.radians(self.fov_deg) <= self.theta_rad:
            raise ValueError(f"{self.name}: field of view smaller than one pixel")

    @property
    def theta_rad(self) -> float:
        return self.theta_urad * 1e-6


def _opt(text: str) -> Optional[float]:
    text = text.strip()
    return float(text) if text else None


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def parse_pulsars(text: str) -> list[PulsarEntry]:
    out = []
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 6:
            raise ValueError(f"pulsar row needs 6 fields: {row}")
        name, ra, dec, s_tau, sig, flag = row
        if flag.strip() not in ("0", "1"):
            raise ValueError(f"sextant flag must be 0 or 1: {row}")
        out.append(PulsarEntry(name.strip(), float(ra), float(dec), _opt(s_tau),
                               _opt(sig), flag.strip() == "1"))
    return out


def serialize_pulsars(entries: Iterable[PulsarEntry]) -> str:
    lines = [",".join([e.name, repr(e.ra_deg), repr(e.dec_deg), _fmt(e.s_tau),
                       _fmt(e.sigma_beta), "1" if e.sextant else "0"]) for e in entries]
    return "\n".join(lines) + "\n"


def parse_cameras(text: str) -> list[CameraSpec]:
    out = []
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 6:
            raise ValueError(f"camera row needs 6 fields: {row}")
        out.append(CameraSpec(row[0].strip(), *(float(x) for x in row[1:])))
    return out


def serialize_cameras(cams: Iterable[CameraSpec]) -> str:
    lines = [",".join([c.name] + [repr(float(v)) for v in (c.fov_deg, c.theta_urad, c.m_max,
                                                          c.alpha_min_deg, c.sigma_s)])
             for c in cams]
    return "\n".join(lines) + "\n"


def builtin_pulsars() -> list[PulsarEntry]:
    return parse_pulsars(_PULSAR_ROWS)


def builtin_cameras() -> list[CameraSpec]:
    return parse_cameras(_CAMERA_ROWS)


def load_pulsars(path: Optional[str] = None) -> list[PulsarEntry]:
    """Pulsar catalog from ``path``, the override env var, or the built-in table."""
    path = path or os.environ.get(CATALOG_ENV)
    if not path:
        return builtin_pulsars()
    with open(path, encoding="utf-8") as fh:
        return parse_pulsars(fh.read())


def camera(name: str, cams: Optional[Sequence[CameraSpec]] = None) -> CameraSpec:
    for c in cams or builtin_cameras():
        if c.name == name:
            return c
    raise KeyError(f"unknown camera {name!r}")


def select(entries: Sequence[PulsarEntry], which) -> list[PulsarEntry]:
    """Pick a named set (``sextant``, ``best4``, ``all``) or an explicit list of names."""
    if isinstance(which, str):
        if which == "sextant":
            return [e for e in entries if e.sextant]
        if which == "best4":
            which = BEST4
        elif which == "all":
            return list(entries)
        else:
            which = [w.strip() for w in which.split(",") if w.strip()]
    by_name = {e.name: e for e in entries}
    missing = [w for w in which if w not in by_name]
    if missing:
        raise KeyError(f"unknown pulsars {missing}")
    return [by_name[w] for w in which]


@dataclass(frozen=True)
class SelectionStats:
    mean_s_tau: float
    mean_sigma_beta: float  # mas
    count: int


def selection_stats(selection: Sequence[PulsarEntry]) -> SelectionStats:
    if not selection:
        raise ValueError("empty pulsar selection")
    gaps = [e.name for e in selection if e.s_tau is None or e.sigma_beta is None]
    if gaps:
        raise MissingFieldError(f"selection has missing stability or location data: {gaps}")
    s = sorted(e.s_tau for e in selection)
    b = sorted(e.sigma_beta for e in selection)
    return SelectionStats(float(np.mean(s)), float(np.mean(b)), len(selection))


def apparent_magnitude(H: float, r_helio: float, delta_obs: float) -> float:
    """Apparent magnitude from absolute magnitude and distances [AU], zero phase."""
    if r_helio <= 0 or delta_obs <= 0:
        raise ValueError("distances must be positive")
    return H + 5.0 * np.log10(r_helio * delta_obs)


@dataclass(frozen=True)
class MagnitudeFit:
    """Straight-line absolute magnitude model ``H(a_A) = intercept + slope * a_A``.

    The default is not a published fit.  Its slope is a representative value
    for distant minor bodies, and its intercept is set so that a beacon at
    43 AU seen from 30 AU at its faintest has magnitude 26.
    """

    intercept: float
    slope: float

    @classmethod
    def calibrated(cls, slope: float = -0.15, a_A_ref: float = 43.0, a_ref: float = 30.0,
                   m_ref: float = 26.0) -> "MagnitudeFit":
        geometric = 5.0 * np.log10(a_A_ref * (a_A_ref + a_ref))
        return cls(intercept=m_ref - geometric - slope * a_A_ref, slope=slope)

    def absolute(self, a_A: float) -> float:
        return self.intercept + self.slope * a_A

    def magnitude_range(self, a: float, a_A: float) -> tuple[float, float]:
        """(brightest, faintest) apparent magnitude over relative phasing."""
        H = self.absolute(a_A)
        near = abs(a_A - a)
        bright = apparent_magnitude(H, a_A, near) if near > 0 else -np.inf
        return bright, apparent_magnitude(H, a_A, a_A + a)


def is_visible(magnitude: float, cam: CameraSpec, m_max: Optional[float] = None) -> bool:
    return magnitude < (cam.m_max if m_max is None else m_max)
