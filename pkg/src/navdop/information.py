"""Fisher information, Schur-complement covariance and dilution of precision.

All gradients entering this module are dimensionless and every noise value
is in km, so every information matrix is in 1/km^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import legendre, polynomial

from .geometry import SceneConfig, pulsar_direction
from .kinematics import OrbitConfig

GL_NODES = 64


class QuadratureError(RuntimeError):
    def __init__(self, achieved: float, requested: float):
        super().__init__(f"quadrature did not converge: achieved {achieved:.3g}, requested {requested:.3g}")
        self.achieved = achieved
        self.requested = requested


class RankDeficiencyError(np.linalg.LinAlgError):
    def __init__(self, message: str, eigenvalue: float):
        super().__init__(f"{message} (smallest eigenvalue {eigenvalue:.6g})")
        self.eigenvalue = eigenvalue


class JetFitError(RuntimeError):
    pass


def symmetrize(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, float)
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class InfoMatrix4:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, float)
        if m.shape != (4, 4):
            raise ValueError("information matrix must be 4x4")
        object.__setattr__(self, "matrix", symmetrize(m))

    @property
    def rr(self) -> np.ndarray:
        return self.matrix[:2, :2]

    @property
    def rdr(self) -> np.ndarray:
        return self.matrix[:2, 2:]

    @property
    def drdr(self) -> np.ndarray:
        return self.matrix[2:, 2:]

    def __add__(self, other: "InfoMatrix4") -> "InfoMatrix4":
        return InfoMatrix4(self.matrix + other.matrix)

    def scaled(self, k: float) -> "InfoMatrix4":
        return InfoMatrix4(self.matrix * k)

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.matrix))


@dataclass(frozen=True)
class DilutionResult:
    G_rr: np.ndarray
    pdop: float
    sigma_xx: float
    sigma_yy: float
    rho_xy: float
    sigma_agg: float

    @property
    def sqrt_gxx(self) -> float:
        return float(np.sqrt(self.G_rr[0, 0]))

    @property
    def sqrt_gyy(self) -> float:
        return float(np.sqrt(self.G_rr[1, 1]))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    condition_number: float


# ---------------------------------------------------------------- quadrature

def gauss_legendre_panels(edges: Sequence[float], nodes: int = GL_NODES):
    """Composite Gauss-Legendre nodes and weights over consecutive panels."""
    x, w = legendre.leggauss(nodes)
    edges = np.asarray(edges, float)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    t = (half * x + 0.5 * (hi + lo)).ravel()
    wt = (half * w).ravel()
    return t, wt


def _outer_sum(H: np.ndarray, w: np.ndarray) -> np.ndarray:
    return (H * w[:, None]).T @ H


def _refined(build: Callable[[int], np.ndarray], panels: int, rtol: float):
    coarse = build(panels)
    fine = build(2 * panels)
    scale = max(np.linalg.norm(fine), np.finfo(float).tiny)
    achieved = float(np.linalg.norm(fine - coarse) / scale)
    if achieved > rtol:
        raise QuadratureError(achieved, rtol)
    return fine, achieved


# ---------------------------------------------------------------- accumulation

def accumulate_discrete(gradients, sigmas, weights=None) -> InfoMatrix4:
    """Sum of ``w * h h^T / sigma^2`` over a list of gradients."""
    H = np.array([getattr(g, "h", g) for g in gradients], float)
    s = np.asarray(sigmas, float)
    if H.ndim != 2 or H.shape[0] != s.shape[0]:
        raise ValueError("gradients and sigmas must have equal length")
    if np.any(s <= 0):
        raise ValueError("sigmas must be positive")
    w = np.ones(len(s)) if weights is None else np.asarray(weights, float)
    return InfoMatrix4(_outer_sum(H, w / s**2))


def optical_gradients_normalized(a_bar: float, alpha, tbar, n_T: float = 0.0,
                                 order: int = 0) -> np.ndarray:
    """Optical gradients scaled by the spacecraft radius, rows over ``tbar``.

    ``n_T`` is the orbit angle swept per period; it enters only at first order.
    """
    ca, sa = np.cos(alpha), np.sin(alpha)
    d2 = 1 + a_bar**2 - 2 * a_bar * ca
    px = a_bar * sa / d2
    py = (1 - a_bar * ca) / d2
    if order >= 1:
        nt = n_T * tbar
        px = px - nt * (1 - 2 * a_bar * ca + a_bar**2 * np.cos(2 * alpha)) / d2**2
        py = py - nt * 2 * a_bar * (a_bar * ca - 1) * sa / d2**2
    return np.stack([px, py, tbar * px, tbar * py], axis=1)


def integrate_optical_info(orbit: OrbitConfig, scene: SceneConfig, alpha0: float, p: int,
                           sigma_agg: float, order: int = 0, panels_per_day: int = 8,
                           rtol: float = 1e-9) -> InfoMatrix4:
    """Average optical information over a continuous one-revolution-per-day scan.

    Parameters
    ----------
    orbit, scene : OrbitConfig, SceneConfig
        Spacecraft orbit and beacon mean distance.
    alpha0 : float
        Beacon angle at the start of the scan [rad].
    p : int
        Number of days of imaging.
    sigma_agg : float
        Aggregate distance-equivalent noise of all images [km].
    order : int
        0 keeps only the frozen-geometry gradient, 1 adds the orbit motion term.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    a_bar = scene.asteroid_mean_dist / orbit.a

    def build(panels):
        tb, w = gauss_legendre_panels(np.linspace(0, p, p * panels + 1))
        H = optical_gradients_normalized(a_bar, alpha0 + 2 * np.pi * tb, tb,
                                         orbit.n * orbit.T, order)
        return _outer_sum(H, w) / p

    avg, _ = _refined(build, panels_per_day, rtol)
    return InfoMatrix4(avg / sigma_agg**2)


def optical_info_rr_closed_form(a: float, a_A: float, sigma_agg: float) -> np.ndarray:
    """Closed-form average position information of the full-circle optical scan."""
    ab = a_A / a
    if ab == 1:
        raise ValueError("beacon radius equal to spacecraft radius")
    if ab > 1:
        d = 1 / (2 * (ab**2 - 1))
        block = np.diag([d, d])
    else:
        q = 1 / ab
        block = np.diag([1 / (2 * (q**2 - 1)), (2 * q**2 - 1) / (2 * (q**2 - 1))])
    return block / sigma_agg**2


def pulsar_gradients(beta, tbar) -> np.ndarray:
    n_hat = pulsar_direction(beta)
    tb = np.asarray(tbar, float)[:, None]
    return np.hstack([n_hat, tb * n_hat])


def integrate_pulsar_info(p: int, beta0: float, sigma: float, panels_per_day: int = 8,
                          rtol: float = 1e-9) -> InfoMatrix4:
    if p < 1:
        raise ValueError("p must be >= 1")

    def build(panels):
        tb, w = gauss_legendre_panels(np.linspace(0, p, p * panels + 1))
        return _outer_sum(pulsar_gradients(beta0 + 2 * np.pi * tb, tb), w) / p

    avg, _ = _refined(build, panels_per_day, rtol)
    return InfoMatrix4(avg / sigma**2)


def pulsar_info_closed_form(p: float, beta0: float, sigma: float) -> InfoMatrix4:
    """Closed-form average information of a continuous pulsar scan."""
    if p < 1:
        raise ValueError("p must be >= 1")
    s2, c2 = np.sin(2 * beta0), np.cos(2 * beta0)
    pi = np.pi
    rr = 0.5 * np.eye(2)
    rd = 0.25 * np.array([[p + s2 / (2 * pi), -c2 / (2 * pi)],
                          [-c2 / (2 * pi), p - s2 / (2 * pi)]])
    dd_diag = 8 * pi**2 * p**2 / 3
    dd = np.array([[dd_diag + 2 * pi * p * s2 + c2, -2 * pi * p * c2 + s2],
                   [-2 * pi * p * c2 + s2, dd_diag - 2 * pi * p * s2 - c2]]) / (16 * pi**2)
    m = np.block([[rr, rd], [rd.T, dd]])
    return InfoMatrix4(m / sigma**2)


def pulsar_dilution_closed_form(p: float, beta0: float) -> np.ndarray:
    """Closed-form average dilution matrix for the continuous pulsar scan."""
    pi = np.pi
    P2, P3, P4 = (pi * p) ** 2, (pi * p) ** 3, (pi * p) ** 4
    den = 16 * P4 - 24 * P2 - 27
    base = 128 * P4 - 96 * P2 - 72
    cc = 36 - 144 * P2
    ss = 96 * P3 - 72 * pi * p
    s2, c2 = np.sin(2 * beta0), np.cos(2 * beta0)
    g11 = (base + cc * c2 + ss * s2) / den
    g22 = (base - cc * c2 - ss * s2) / den
    g12 = (cc * s2 - ss * c2) / den
    return np.array([[g11, g12], [g12, g22]])


def pulsar_pdop_closed_form(p: float) -> float:
    pi = np.pi
    P2, P4 = (pi * p) ** 2, (pi * p) ** 4
    return float(np.sqrt(16 * (16 * P4 - 12 * P2 - 9) / (16 * P4 - 24 * P2 - 27)))


def _range_gradients(orbit: OrbitConfig, scene: SceneConfig, t, station) -> np.ndarray:
    """Vectorised slant-range gradients with the quadratic STM jet."""
    t = np.asarray(t, float)
    th = orbit.n * t + orbit.theta0
    phases = np.asarray(scene.station_phases, float)[np.asarray(station)]
    xi = scene.n_earth * t + scene.xi0
    ph = scene.omega_earth * t + phases
    rx = orbit.a * np.cos(th) - scene.a_earth * np.cos(xi) - scene.R_earth * np.cos(ph)
    ry = orbit.a * np.sin(th) - scene.a_earth * np.sin(xi) - scene.R_earth * np.sin(ph)
    dist = np.hypot(rx, ry)
    ux, uy = rx / dist, ry / dist
    if orbit.theta0 != 0.0:
        c, s = np.cos(orbit.theta0), np.sin(orbit.theta0)
        ux, uy = c * ux + s * uy, -s * ux + c * uy
    n2t2 = (orbit.n * t) ** 2
    tb = t / orbit.T
    H = np.stack([ux * (1 + n2t2), uy * (1 - 0.5 * n2t2),
                  ux * tb * (1 + n2t2 / 3), uy * tb * (1 - n2t2 / 6)], axis=1)
    if orbit.theta0 != 0.0:
        c, s = np.cos(orbit.theta0), np.sin(orbit.theta0)
        H = np.stack([c * H[:, 0] - s * H[:, 1], s * H[:, 0] + c * H[:, 1],
                      c * H[:, 2] - s * H[:, 3], s * H[:, 2] + c * H[:, 3]], axis=1)
    return H


def _range_nodes(p: int, T: float, panels_per_pass: int):
    ts, ws, st = [], [], []
    for j in range(1, p + 1):
        for station, (lo, hi) in enumerate(((j - 1, j - 0.5), (j - 0.5, j))):
            t, w = gauss_legendre_panels(np.linspace(lo, hi, panels_per_pass + 1))
            ts.append(t)
            ws.append(w)
            st.append(np.full(t.size, station))
    return np.concatenate(ts) * T, np.concatenate(ws), np.concatenate(st)


def range_info_average(orbit: OrbitConfig, scene: SceneConfig, p: int,
                       panels_per_pass: int = 16) -> np.ndarray:
    """(1/p) times the integrated gradient outer products over both station passes."""
    t, w, st = _range_nodes(p, orbit.T, panels_per_pass)
    return _outer_sum(_range_gradients(orbit, scene, t, st), w) / p


def integrate_range_info(orbit: OrbitConfig, scene: SceneConfig, xi0: float, p: int,
                         sigma_pT: float, panels_per_pass: int = 16,
                         rtol: float = 1e-7) -> InfoMatrix4:
    """Average range information for two alternating stations over ``p`` days.

    Station phases are derived from the rise constraint at ``xi0``.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    sc = scene.with_stations_for(orbit.a, xi0)
    avg, _ = _refined(lambda k: range_info_average(orbit, sc, p, k), panels_per_pass, rtol)
    return InfoMatrix4(avg / sigma_pT**2)


# ---------------------------------------------------------------- covariance

def _inv2(m: np.ndarray, what: str) -> np.ndarray:
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    det = a * d - b * c
    scale = abs(a * d) + abs(b * c)
    if scale == 0 or abs(det) <= 4 * np.finfo(float).eps * scale:
        ev = np.linalg.eigvalsh(symmetrize(m))
        raise RankDeficiencyError(f"{what} is singular", float(ev[0]))
    return np.array([[d, -b], [-c, a]]) / det


def position_covariance(info) -> np.ndarray:
    """Position block of the inverse information via the Schur complement."""
    m = info.matrix if isinstance(info, InfoMatrix4) else np.asarray(info, float)
    A, B, D = m[:2, :2], m[:2, 2:], m[2:, 2:]
    schur = A - B @ _inv2(D, "displacement information block") @ B.T
    schur = symmetrize(schur)
    P = symmetrize(_inv2(schur, "Schur complement"))
    if P[0, 0] <= 0 or P[1, 1] <= 0 or np.linalg.det(P) <= 0:
        raise RankDeficiencyError("position covariance is not positive definite",
                                  float(np.linalg.eigvalsh(schur)[0]))
    return P


def dilution(P_rr: np.ndarray, sigma_agg: float) -> DilutionResult:
    if sigma_agg <= 0:
        raise ValueError("sigma_agg must be positive")
    P = symmetrize(P_rr)
    ev = np.linalg.eigvalsh(P)
    if ev[0] < -1e-12 * max(abs(ev[-1]), 1e-300):
        raise ValueError("position covariance is not positive semidefinite")
    G = P / sigma_agg**2
    gxx, gyy = G[0, 0], G[1, 1]
    rho = G[0, 1] / np.sqrt(gxx * gyy) if gxx > 0 and gyy > 0 else 0.0
    return DilutionResult(G_rr=G, pdop=float(np.sqrt(np.trace(G))),
                          sigma_xx=float(sigma_agg * np.sqrt(gxx)),
                          sigma_yy=float(sigma_agg * np.sqrt(gyy)),
                          rho_xy=float(np.clip(rho, -1.0, 1.0)), sigma_agg=float(sigma_agg))


def consider_pulsar_covariance(P_rr: np.ndarray, G_rr: np.ndarray, a_km: float,
                               sigma_beta: float, n_tau: int) -> np.ndarray:
    """Position covariance inflated by unestimated pulsar direction errors."""
    if n_tau < 1:
        raise ValueError("n_tau must be >= 1")
    sigma_T2 = np.trace(P_rr) / np.trace(G_rr)
    return (sigma_T2 + (a_km * sigma_beta / n_tau) ** 2) * np.asarray(G_rr, float)


def consider_noise_bound(a_km: float, sigma_beta: float, betas) -> float:
    """Spectral-norm bound on the pulsar-location contribution to TOA noise."""
    s2 = np.sin(np.asarray(betas, float)) ** 2
    return float((a_km * sigma_beta) ** 2 * np.max(s2))


def consider_covariance(Px, Hx, R, Hc, Pc) -> np.ndarray:
    """Batch consider covariance for a linear model with unestimated parameters."""
    S = Px @ Hx.T @ np.linalg.inv(R) @ Hc
    return symmetrize(Px + S @ Pc @ S.T)


def info_spectrum(info) -> Spectrum:
    m = info.matrix if isinstance(info, InfoMatrix4) else symmetrize(info)
    ev = np.linalg.eigvalsh(m)
    cond = float(ev[-1] / ev[0]) if ev[0] != 0 else np.inf
    return Spectrum(ev, cond)


# ---------------------------------------------------------------- asymptotics

JET_SAMPLES = 9
JET_DEGREE = 6


def chebyshev_unit_samples(k: int = JET_SAMPLES) -> np.ndarray:
    j = np.arange(k)
    return np.sort(0.5 * (1 - np.cos((2 * j + 1) * np.pi / (2 * k))))


def range_info_coefficients(orbit: OrbitConfig, scene: SceneConfig, xi0: float, p: int = 1,
                            panels_per_pass: int = 16, rtol: float = 1e-6) -> np.ndarray:
    """Taylor coefficients of the average range information in the small parameter.

    The small parameter scales the orbit and Earth mean motions and the Earth
    radius together.  Returns an array of shape (JET_DEGREE + 1, 4, 4).
    """
    sc = scene.with_stations_for(orbit.a, xi0)
    eps = chebyshev_unit_samples()
    samples = []
    for e in eps:
        o = OrbitConfig(orbit.a, orbit.n * e, orbit.theta0, orbit.T)
        s = SceneConfig(sc.a_earth, sc.n_earth * e, sc.xi0, sc.R_earth * e, sc.omega_earth,
                        sc.station_phases, sc.asteroid_mean_dist)
        samples.append(range_info_average(o, s, p, panels_per_pass))
    Y = np.array(samples).reshape(len(eps), -1)
    coef = polynomial.polyfit(eps, Y, JET_DEGREE)
    resid = polynomial.polyval(eps, coef).T - Y
    rel = float(np.abs(resid).max() / np.abs(Y).max())
    if rel > rtol:
        raise JetFitError(f"epsilon fit residual {rel:.3g} exceeds {rtol:.3g}")
    return coef.reshape(JET_DEGREE + 1, 4, 4)


def range_info_epsilon_jet(orbit: OrbitConfig, scene: SceneConfig, xi0: float, order: int,
                           sigma_pT: float = 1.0, p: int = 1) -> InfoMatrix4:
    """Partial sum of the range information expansion through ``order``."""
    if order not in (2, 3, 4):
        raise ValueError("jet order must be 2, 3 or 4")
    coef = range_info_coefficients(orbit, scene, xi0, p)
    return InfoMatrix4(coef[: order + 1].sum(axis=0) / sigma_pT**2)
