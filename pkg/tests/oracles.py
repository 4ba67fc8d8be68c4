"""Finite-difference oracles through nonlinear two-body propagation."""
import numpy as np

from navdop.geometry import station_position
from navdop.kinematics import circular_state, flow_map
from navdop.measurements import asteroid_position


def central_difference(f, x0, step):
    x0 = np.asarray(x0, float)
    cols = []
    for k in range(x0.size):
        e = np.zeros_like(x0)
        e[k] = step
        cols.append((f(x0 + e) - f(x0 - e)) / (2 * step))
    return np.array(cols)


def pointing_angle_fd(orbit, a_A, alpha, t, step=1e-6):
    target = asteroid_position(a_A, alpha)

    def gamma(x):
        d = target - flow_map(orbit, x, t)[:2]
        return np.arctan2(d[1], d[0])

    return central_difference(gamma, circular_state(orbit, 0).vector(), step)


def pulsar_delay_fd(orbit, beta, t, step=1e-6):
    n_hat = np.array([np.cos(beta), np.sin(beta)])
    return central_difference(lambda x: n_hat @ flow_map(orbit, x, t)[:2],
                              circular_state(orbit, 0).vector(), step)


def slant_range_fd(orbit, scene, station, t, step=1e-6):
    site = station_position(scene, station, t)
    return central_difference(lambda x: np.linalg.norm(flow_map(orbit, x, t)[:2] - site),
                              circular_state(orbit, 0).vector(), step)


def stm_fd(orbit, t, step=1e-6):
    x0 = circular_state(orbit, 0).vector()
    return central_difference(lambda x: flow_map(orbit, x, t), x0, step).T


def rel(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


MU_SUN = (2 * np.pi / 365.25) ** 2  # AU^3 / day^2


def random_geometries(kind, count, seed):
    """Random orbit, angle and time draws for gradient oracle checks."""
    from navdop.geometry import SceneConfig
    from navdop.kinematics import OrbitConfig

    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a = float(rng.uniform(0.8, 35.0))
        orbit = OrbitConfig.from_mu(a, MU_SUN, theta0=float(rng.uniform(-np.pi, np.pi)),
                                    T=float(rng.uniform(0.5, 2.0)))
        angle = float(rng.uniform(0, 2 * np.pi))
        if kind == "range":
            t = float(rng.uniform(0.0, 1.0))
            scene = SceneConfig(xi0=float(rng.uniform(0, 2 * np.pi))).with_stations_for(a)
            out.append((orbit, scene, int(rng.integers(2)), t))
            continue
        t = float(rng.uniform(0.0, 14.0))
        if kind == "optical":
            a_A = float(a * rng.choice([rng.uniform(0.3, 0.8), rng.uniform(1.3, 3.0)]))
            r = circular_state(orbit, t).r
            if np.linalg.norm(asteroid_position(a_A, angle) - r) < 0.2 * a:
                continue
            out.append((orbit, SceneConfig(asteroid_mean_dist=a_A), angle, t))
        else:
            out.append((orbit, None, angle, t))
    return out


def gradient_oracle_errors(kind, count, seed=1):
    """Relative errors of analytic gradients against finite differences."""
    from navdop.measurements import optical_gradient, pulsar_gradient, range_gradient

    errs = []
    for orbit, scene, x, t in random_geometries(kind, count, seed):
        if kind == "optical":
            h = optical_gradient(orbit, scene, x, t, "exact").h
            ref = pointing_angle_fd(orbit, scene.asteroid_mean_dist, x, t)
        elif kind == "pulsar":
            h = pulsar_gradient(orbit, x, t, "exact").h
            ref = pulsar_delay_fd(orbit, x, t)
        else:
            h = range_gradient(orbit, scene, x, t, "exact").h
            ref = slant_range_fd(orbit, scene, x, t)
        errs.append(rel(h, ref))
    return np.array(errs)
