import numpy as np
import pytest

from navdop import entry as E
from navdop.information import InfoMatrix4, position_covariance

APPROACH = E.HyperbolicApproach.from_vinf()


@pytest.fixture(scope="module")
def infos():
    I0 = E.apriori_entry_info(E.default_apriori(), APPROACH)
    It = E.entry_information(E.pulsar_schedule(), APPROACH)
    Ic = E.entry_information(E.cpf_schedule(), APPROACH)
    return I0, It, Ic


def test_default_hyperbola():
    assert APPROACH.e > 1 and APPROACH.a < 0
    assert APPROACH.a == pytest.approx(-42828.37 / 9.0)
    nu = np.radians(APPROACH.entry_true_anomaly_deg)
    assert APPROACH.radius(nu) == pytest.approx(3522.2, rel=1e-12)
    x = APPROACH.entry_state()
    assert np.linalg.norm(x[:2]) == pytest.approx(3522.2)
    energy = 0.5 * x[2:] @ x[2:] - APPROACH.mu / np.linalg.norm(x[:2])
    assert energy == pytest.approx(0.5 * 9.0, rel=1e-12)
    assert x[0] * x[3] - x[1] * x[2] > 0  # counterclockwise


def test_hyperbola_validation():
    with pytest.raises(ValueError):
        E.HyperbolicApproach(APPROACH.mu, APPROACH.a, 0.5, 3522.2)
    with pytest.raises(ValueError):
        E.HyperbolicApproach(APPROACH.mu, APPROACH.a, APPROACH.e, 3522.2, 19.0)
    with pytest.raises(ValueError):
        E.HyperbolicApproach(APPROACH.mu, APPROACH.a, APPROACH.e, 4000.0)


def test_stm_identity_and_inverse():
    np.testing.assert_array_equal(E.hyperbolic_stm(APPROACH, 0.0), np.eye(4))
    back = E.hyperbolic_stm(APPROACH, -45.0)
    fwd = E.hyperbolic_stm(APPROACH, 0.0, -45.0)
    np.testing.assert_allclose(back @ fwd, np.eye(4), atol=1e-8)
    with pytest.raises(ValueError):
        E.hyperbolic_stm(APPROACH, -130.0)


def test_stm_matches_flow_jacobian():
    x0 = APPROACH.entry_state()
    steps = np.array([1e-3, 1e-3, 1e-6, 1e-6])
    cols = []
    for k in range(4):
        e = np.zeros(4)
        e[k] = steps[k]
        plus = E.propagate(APPROACH, [-3600.0], x0 + e)[0][0]
        minus = E.propagate(APPROACH, [-3600.0], x0 - e)[0][0]
        cols.append((plus - minus) / (2 * steps[k]))
    fd = np.array(cols).T
    phi = E.hyperbolic_stm(APPROACH, -60.0)
    # compare column by column in the native units
    for k in range(4):
        assert np.linalg.norm(phi[:, k] - fd[:, k]) / np.linalg.norm(fd[:, k]) < 1e-5


def test_gradient_and_schedules():
    np.testing.assert_allclose(E.entry_gradient(0.0, np.eye(4)), [1, 0, 0, 0])
    ps = E.pulsar_schedule()
    assert [m.angle_deg for m in ps.measurements] == [162.0, 283.0, 42.0, 46.0]
    cpf = E.cpf_schedule(xi_deg=30.0)
    assert len(cpf) == 120
    assert {m.angle_deg for m in cpf.measurements} == {-51.0}
    times = [m.t_min for m in cpf.measurements]
    assert np.allclose(np.diff(times), -1.0) and times[0] == 0.0
    with pytest.raises(ValueError):
        E.Measurement(-200.0, "cpf", 0.0, 1.0)
    with pytest.raises(ValueError):
        E.Measurement(-20.0, "doppler", 0.0, 1.0)


def test_single_measurement_rank_one():
    sched = E.EntrySchedule([E.Measurement(-30.0, "pulsar", 42.0, 8.0)])
    ev = np.linalg.eigvalsh(E.entry_information(sched, APPROACH).matrix)
    assert ev[-1] > 0 and np.all(np.abs(ev[:3]) < 1e-12 * ev[-1])
    with pytest.raises(ValueError):
        E.entry_information(E.EntrySchedule(), APPROACH)


def test_apriori_identity_map():
    P0 = E.default_apriori()
    np.testing.assert_allclose(E.propagated_information(P0, np.eye(4)).matrix, np.linalg.inv(P0))
    with pytest.raises(ValueError):
        E.propagated_information(-P0, np.eye(4))


def test_apriori_values(infos):
    I0, _, _ = infos
    sig = np.sqrt(np.diag(E.entry_covariance(I0)))
    assert sig == pytest.approx([15.3, 36.6], rel=0.3)
    assert 3.45e8 / 3 < I0.frobenius() < 3.45e8 * 3


def test_no_data_recovers_apriori(infos):
    I0, _, _ = infos
    zero = InfoMatrix4(np.zeros((4, 4)))
    np.testing.assert_allclose(E.entry_covariance(I0, zero), E.entry_covariance(I0))


def test_more_data_never_hurts(infos):
    I0, It, Ic = infos
    both = E.entry_covariance(I0, It + Ic)
    for part in (It, Ic):
        diff = E.entry_covariance(I0, part) - both
        assert np.linalg.eigvalsh(diff)[0] >= -1e-12 * np.abs(diff).max()
    diff = E.entry_covariance(I0) - E.entry_covariance(I0, It)
    assert np.linalg.eigvalsh(diff)[0] >= 0


def test_outputs_symmetric_psd(infos):
    for I in infos:
        m = I.matrix
        assert np.array_equal(m, m.T)
        assert np.linalg.eigvalsh(m)[0] >= -1e-10 * np.linalg.norm(m, 2)
    P = position_covariance(infos[0] + infos[1])
    assert np.linalg.eigvalsh(P)[0] > 0


def test_precise_pulsars_commensurate_with_cpf(infos):
    I0, _, Ic = infos
    It_fine = E.entry_information(E.pulsar_schedule().with_sigma(E.CPF_SIGMA_KM), APPROACH)
    sp = np.sqrt(np.diag(E.entry_covariance(I0, It_fine)))
    sc = np.sqrt(np.diag(E.entry_covariance(I0, Ic)))
    assert np.max(sp) / np.max(sc) < 3 and np.max(sc) / np.max(sp) < 3


def test_report_lines():
    lines = E.compare().lines()
    assert len(lines) == 3 and lines[0].startswith("a priori")
