"""Information content of range-like and pulsar data before Mars atmospheric entry.

Deviations are mapped from the entry epoch back to each measurement time with
the transition matrix of a planar hyperbolic approach.  Units: km, s.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .information import InfoMatrix4, position_covariance, symmetrize

MU_MARS = 42828.37
ENTRY_RADIUS_KM = 3522.2
ENTRY_TRUE_ANOMALY_DEG = -19.0
V_INF_KMS = 3.0
WINDOW_MIN = 120.0

# 0.5 m as 5e-7 km; the literal 0.5 m reading is 5e-4 km.
CPF_SIGMA_KM = 5e-7
CPF_SIGMA_LITERAL_KM = 5e-4
CPF_OFFSET_DEG = -81.0

PULSAR_TIMES_MIN = (-90.0, -60.0, -30.0, 0.0)
PULSAR_BETAS_DEG = (162.0, 283.0, 42.0, 46.0)
PULSAR_SIGMAS_KM = (97.0, 5.0, 8.0, 87.0)

APRIORI_SIGMAS = (20.0, 20.0, 1e-4, 1e-4)  # km, km, km/s, km/s


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class HyperbolicApproach:
    """Planar hyperbola with x along the eccentricity vector, prograde motion."""

    mu: float
    a: float
    e: float
    entry_radius: float
    entry_true_anomaly_deg: float = ENTRY_TRUE_ANOMALY_DEG

    def __post_init__(self):
        if not (self.e > 1 and self.a < 0):
            raise ValueError("hyperbola requires e > 1 and a < 0")
        if self.entry_true_anomaly_deg >= 0:
            raise ValueError("entry must occur on the inbound leg")
        r = self.radius(np.radians(self.entry_true_anomaly_deg))
        if abs(r - self.entry_radius) > 1e-6 * self.entry_radius:
            raise ValueError("entry radius inconsistent with the conic")

    @classmethod
    def from_vinf(cls, mu: float = MU_MARS, v_inf: float = V_INF_KMS,
                  entry_radius: float = ENTRY_RADIUS_KM,
                  entry_true_anomaly_deg: float = ENTRY_TRUE_ANOMALY_DEG) -> "HyperbolicApproach":
        a = -mu / v_inf**2
        nu = np.radians(entry_true_anomaly_deg)
        f = lambda e: a * (1 - e * e) / (1 + e * np.cos(nu)) - entry_radius
        e = brentq(f, 1 + 1e-9, 1e3, xtol=1e-15, rtol=1e-15)
        return cls(mu, a, e, entry_radius, entry_true_anomaly_deg)

    @property
    def semilatus(self) -> float:
        return self.a * (1 - self.e**2)

    @property
    def periapsis(self) -> float:
        return self.a * (1 - self.e)

    def radius(self, nu: float) -> float:
        return self.semilatus / (1 + self.e * np.cos(nu))

    def entry_state(self) -> np.ndarray:
        nu = np.radians(self.entry_true_anomaly_deg)
        r = self.radius(nu)
        vfac = np.sqrt(self.mu / self.semilatus)
        return np.array([r * np.cos(nu), r * np.sin(nu),
                         -vfac * np.sin(nu), vfac * (self.e + np.cos(nu))])


def _variational_rhs(t, y, mu):
    r = y[:2]
    rn = np.hypot(r[0], r[1])
    grav = mu * (3 * np.outer(r, r) / rn**5 - np.eye(2) / rn**3)
    A = np.zeros((4, 4))
    A[:2, 2:] = np.eye(2)
    A[2:, :2] = grav
    phi = y[4:].reshape(4, 4)
    return np.concatenate([y[2:4], -mu * r / rn**3, (A @ phi).ravel()])


def propagate(approach: HyperbolicApproach, times_s: Sequence[float], x_entry=None,
              rtol: float = 1e-12, atol: float = 1e-12):
    """States and transition matrices Phi(t, t_E) at offsets ``times_s`` from entry.

    Returns
    -------
    states : ndarray, shape (m, 4)
    stms : ndarray, shape (m, 4, 4)
    """
    times = np.asarray(times_s, float)
    x0 = approach.entry_state() if x_entry is None else np.asarray(x_entry, float)
    states = np.empty((times.size, 4))
    stms = np.empty((times.size, 4, 4))
    y0 = np.concatenate([x0, np.eye(4).ravel()])
    for sign in (-1.0, 1.0):
        sel = np.nonzero(times * sign > 0)[0]
        if sel.size == 0:
            continue
        order = sel[np.argsort(np.abs(times[sel]))]
        sol = solve_ivp(_variational_rhs, (0.0, times[order[-1]]), y0, args=(approach.mu,),
                        method="DOP853", t_eval=times[order], rtol=rtol, atol=atol)
        if not sol.success:
            raise IntegrationError(sol.message)
        states[order] = sol.y[:4].T
        stms[order] = sol.y[4:].T.reshape(-1, 4, 4)
    zero = times == 0
    states[zero] = x0
    stms[zero] = np.eye(4)
    return states, stms


def hyperbolic_stm(approach: HyperbolicApproach, t_min: float, t_E_min: float = 0.0) -> np.ndarray:
    """Phi(t, t_E) mapping entry deviations to time ``t`` (minutes)."""
    for v in (t_min, t_E_min):
        if not -WINDOW_MIN <= v <= 0:
            raise ValueError("times must lie within the two hours before entry")
    if t_E_min != 0.0:
        # Phi(t, tE) = Phi(t, 0) Phi(0, tE)
        _, s = propagate(approach, [60.0 * t_min, 60.0 * t_E_min])
        return s[0] @ np.linalg.inv(s[1])
    return propagate(approach, [60.0 * t_min])[1][0]


def entry_gradient(angle_rad: float, stm: np.ndarray) -> np.ndarray:
    u = np.array([np.cos(angle_rad), np.sin(angle_rad)])
    return u @ np.asarray(stm)[:2, :]


@dataclass(frozen=True)
class Measurement:
    t_min: float
    kind: str
    angle_deg: float
    sigma_km: float

    def __post_init__(self):
        if self.kind not in ("cpf", "pulsar"):
            raise ValueError(f"unknown entry measurement kind {self.kind!r}")
        if not -WINDOW_MIN <= self.t_min <= 0:
            raise ValueError("measurement outside the two-hour window")
        if self.sigma_km <= 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class EntrySchedule:
    measurements: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "measurements", tuple(self.measurements))

    def __len__(self) -> int:
        return len(self.measurements)

    def with_sigma(self, sigma_km: float) -> "EntrySchedule":
        return EntrySchedule(Measurement(m.t_min, m.kind, m.angle_deg, sigma_km)
                             for m in self.measurements)


def pulsar_schedule(sigmas=PULSAR_SIGMAS_KM) -> EntrySchedule:
    return EntrySchedule(Measurement(t, "pulsar", b, s)
                         for t, b, s in zip(PULSAR_TIMES_MIN, PULSAR_BETAS_DEG, sigmas))


def cpf_schedule(xi_deg: float = 0.0, sigma_km: float = CPF_SIGMA_KM, count: int = 120,
                 step_min: float = 1.0) -> EntrySchedule:
    """Evenly spaced CPF-phase points ending at entry, pointing at ``xi - 81`` degrees."""
    return EntrySchedule(Measurement(-step_min * k, "cpf", xi_deg + CPF_OFFSET_DEG, sigma_km)
                         for k in range(count))


def entry_information(schedule: EntrySchedule, approach: HyperbolicApproach) -> InfoMatrix4:
    if len(schedule) == 0:
        raise ValueError("empty schedule")
    times = [60.0 * m.t_min for m in schedule.measurements]
    _, stms = propagate(approach, times)
    I = np.zeros((4, 4))
    for m, phi in zip(schedule.measurements, stms):
        h = entry_gradient(np.radians(m.angle_deg), phi)
        I += np.outer(h, h) / m.sigma_km**2
    return InfoMatrix4(I)


def propagated_information(P0, stm_forward) -> InfoMatrix4:
    """Inverse of ``Phi P0 Phi^T`` for a covariance carried forward by ``stm_forward``."""
    P0 = np.asarray(P0, float)
    if np.any(np.linalg.eigvalsh(symmetrize(P0)) <= 0):
        raise ValueError("a priori covariance must be positive definite")
    phi = np.asarray(stm_forward, float)
    return InfoMatrix4(np.linalg.inv(symmetrize(phi @ P0 @ phi.T)))


def apriori_entry_info(P0, approach: HyperbolicApproach, t0_min: float = -WINDOW_MIN) -> InfoMatrix4:
    """A priori information at entry from a covariance given at ``t0_min``."""
    back = propagate(approach, [60.0 * t0_min])[1][0]
    return propagated_information(P0, np.linalg.inv(back))


def default_apriori() -> np.ndarray:
    return np.diag(np.square(APRIORI_SIGMAS))


def entry_covariance(I0: InfoMatrix4, Imeas: InfoMatrix4 | None = None) -> np.ndarray:
    total = I0 if Imeas is None else I0 + Imeas
    return position_covariance(total)


@dataclass(frozen=True)
class EntryReport:
    apriori_sigma: tuple
    apriori_norm: float
    pulsar_sigma: tuple
    pulsar_norm: float
    cpf_sigma: tuple
    cpf_norm: float

    def lines(self) -> list[str]:
        fmt = lambda s: f"({s[0]:.4g}, {s[1]:.4g})"
        return [f"a priori  |I|_F={self.apriori_norm:.4g}  sigma_km={fmt(self.apriori_sigma)}",
                f"pulsar    |I|_F={self.pulsar_norm:.4g}  sigma_km={fmt(self.pulsar_sigma)}",
                f"cpf       |I|_F={self.cpf_norm:.4g}  sigma_km={fmt(self.cpf_sigma)}"]


def _sig(P) -> tuple:
    return tuple(float(x) for x in np.sqrt(np.diag(P)))


def compare(approach: HyperbolicApproach | None = None, xi_deg: float = 0.0,
            cpf_sigma_km: float = CPF_SIGMA_KM, P0=None) -> EntryReport:
    approach = approach or HyperbolicApproach.from_vinf()
    I0 = apriori_entry_info(default_apriori() if P0 is None else P0, approach)
    It = entry_information(pulsar_schedule(), approach)
    Ic = entry_information(cpf_schedule(xi_deg, cpf_sigma_km), approach)
    return EntryReport(_sig(entry_covariance(I0)), I0.frobenius(),
                       _sig(entry_covariance(I0, It)), It.frobenius(),
                       _sig(entry_covariance(I0, Ic)), Ic.frobenius())
