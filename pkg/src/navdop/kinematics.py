"""Circular-orbit kinematics and state transition matrices.

States are expressed in rescaled coordinates ``[r, dr]`` where ``dr = T * v``
is the linear displacement over one canonical period ``T``.  With this scaling
every block of the transition matrix is dimensionless.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

AU_KM = 149_597_870.7
"""Astronomical unit in kilometres (IAU 2012)."""

STM_ORDERS = ("exact", "jet0", "jet1", "jet2")


@dataclass(frozen=True)
class OrbitConfig:
    """Heliocentric circular orbit used as the estimation reference.

    Parameters
    ----------
    a : float
        Orbit radius [AU].
    n : float
        Mean motion [rad/day].
    theta0 : float
        Central angle at t = 0 [rad].
    T : float
        Canonical observation period [day].
    """

    a: float
    n: float
    theta0: float = 0.0
    T: float = 1.0

    def __post_init__(self):
        if not (self.a > 0 and self.n > 0 and self.T > 0):
            raise ValueError("orbit requires a > 0, n > 0 and T > 0")

    @classmethod
    def from_mu(cls, a: float, mu: float, theta0: float = 0.0, T: float = 1.0):
        """Build an orbit from a gravitational parameter [AU^3/day^2]."""
        return cls(a=a, n=float(np.sqrt(mu / a**3)), theta0=theta0, T=T)


@dataclass(frozen=True)
class State4:
    r: np.ndarray
    dr: np.ndarray

    def vector(self) -> np.ndarray:
        return np.concatenate([self.r, self.dr])


@dataclass(frozen=True)
class Stm4:
    """4x4 transition matrix in rescaled coordinates with block accessors."""

    matrix: np.ndarray
    order: str = "exact"

    def __post_init__(self):
        if self.order not in STM_ORDERS:
            raise ValueError(f"unknown STM order {self.order!r}")

    @property
    def rr(self) -> np.ndarray:
        return self.matrix[:2, :2]

    @property
    def rdr(self) -> np.ndarray:
        return self.matrix[:2, 2:]

    @property
    def drr(self) -> np.ndarray:
        return self.matrix[2:, :2]

    @property
    def drdr(self) -> np.ndarray:
        return self.matrix[2:, 2:]

    @property
    def position_rows(self) -> np.ndarray:
        """The ``[Phi_rr : Phi_rdr]`` 2x4 slab used by every gradient."""
        return self.matrix[:2, :]


def _rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def _frame(angle: float) -> np.ndarray:
    rot = _rotation(angle)
    out = np.zeros((4, 4))
    out[:2, :2] = rot
    out[2:, 2:] = rot
    return out


def circular_state(orbit: OrbitConfig, t: float) -> State4:
    theta = orbit.n * t + orbit.theta0
    c, s = np.cos(theta), np.sin(theta)
    r = orbit.a * np.array([c, s])
    dr = orbit.T * orbit.a * orbit.n * np.array([-s, c])
    return State4(r=r, dr=dr)


def _stm_exact_epoch0(n: float, t: float, T: float) -> np.ndarray:
    # Nominal orbit starts on the +x axis; blocks follow from the
    # Clohessy-Wiltshire solution rotated into the inertial frame.
    nt = n * t
    c, s = np.cos(nt), np.sin(nt)
    c2, s2 = np.cos(2 * nt), np.sin(2 * nt)
    rr = np.array([
        [0.5 * (-3 + 4 * c + c2 + 6 * nt * s), (1 - c) * s],
        [0.5 * (4 * s + s2 - 6 * nt * c), 1 - (1 - c) * c],
    ])
    rdr = np.array([
        [(2 - c) * s, -3 + 2 * c + c2 + 3 * nt * s],
        [(1 - c) ** 2, 2 * s + s2 - 3 * nt * c],
    ]) / (n * T)
    drr = n * T * np.array([
        [3 * nt * c + s - s2, c - c2],
        [3 * nt * s - c + c2, s - s2],
    ])
    drdr = np.array([
        [2 * c - c2, s - 2 * s2 + 3 * nt * c],
        [2 * (1 - c) * s, -c + 2 * c2 + 3 * nt * s],
    ])
    return np.block([[rr, rdr], [drr, drdr]])


def stm_exact(orbit: OrbitConfig, t: float, t0: float = 0.0) -> Stm4:
    """Exact transition matrix Phi(t, t0) about the circular orbit.

    Parameters
    ----------
    orbit : OrbitConfig
        Reference orbit.
    t, t0 : float
        Final and initial epochs [day].

    Returns
    -------
    Stm4
        Matrix mapping rescaled deviations at ``t0`` to ``t``.
    """
    phi = _stm_exact_epoch0(orbit.n, t - t0, orbit.T)
    start = orbit.theta0 + orbit.n * t0
    if start != 0.0:
        frame = _frame(start)
        phi = frame @ phi @ frame.T
    return Stm4(phi, "exact")


def _jet_matrix(n: float, t: float, order: int, T: float) -> np.ndarray:
    phi = np.eye(4)
    phi[0, 2] = phi[1, 3] = t / T
    if order >= 2:
        n2 = n * n
        phi += np.array([
            [n2 * t * t, 0.0, n2 * t**3 / (3 * T), 0.0],
            [0.0, -0.5 * n2 * t * t, 0.0, -n2 * t**3 / (6 * T)],
            [2 * n2 * t * T, 0.0, n2 * t * t, 0.0],
            [0.0, -n2 * t * T, 0.0, -0.5 * n2 * t * t],
        ])
    return phi


def stm_jet(orbit: OrbitConfig, t: float, order: int) -> Stm4:
    """Asymptotic transition matrix through ``order`` in the small parameter.

    There is no first order term, so orders 0 and 1 coincide.
    """
    if order not in (0, 1, 2):
        raise ValueError("jet order must be 0, 1 or 2")
    phi = _jet_matrix(orbit.n, t, order, orbit.T)
    if orbit.theta0 != 0.0:
        frame = _frame(orbit.theta0)
        phi = frame @ phi @ frame.T
    return Stm4(phi, f"jet{order}")


def stm_error_norm(orbit: OrbitConfig, t: float, approx_order: int) -> float:
    """Relative Frobenius error of the jet of ``approx_order`` against the exact STM.

    ``approx_order=1`` gives the error of the two-term approximation and
    ``approx_order=2`` the error once the quadratic correction is included.
    """
    if approx_order not in (1, 2):
        raise ValueError("approx_order must be 1 or 2")
    exact = stm_exact(orbit, t).matrix
    approx = stm_jet(orbit, t, approx_order).matrix
    return float(np.linalg.norm(approx - exact) / np.linalg.norm(exact))


def two_body_rhs(t: float, y: np.ndarray, mu: float) -> np.ndarray:
    r = y[:2]
    rn = np.hypot(r[0], r[1])
    return np.concatenate([y[2:], -mu * r / rn**3])


def propagate_two_body(r0, v0, mu: float, t: float, rtol: float = 1e-13,
                       atol: float = 1e-15) -> tuple[np.ndarray, np.ndarray]:
    """Numerically propagate the planar two-body problem (used as an oracle)."""
    from scipy.integrate import solve_ivp

    y0 = np.concatenate([np.asarray(r0, float), np.asarray(v0, float)])
    if t == 0:
        return y0[:2].copy(), y0[2:].copy()
    sol = solve_ivp(two_body_rhs, (0.0, t), y0, args=(mu,), method="DOP853",
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(sol.message)
    y = sol.y[:, -1]
    return y[:2], y[2:]


def flow_map(orbit: OrbitConfig, x0: np.ndarray, t: float) -> np.ndarray:
    """Nonlinear flow of a rescaled state ``[r, T v]`` from 0 to ``t``."""
    mu = orbit.n**2 * orbit.a**3
    x0 = np.asarray(x0, float)
    r, v = propagate_two_body(x0[:2], x0[2:] / orbit.T, mu, t)
    return np.concatenate([r, v * orbit.T])
