import math

import pytest

from oscdet.actions import level_one_log_correction, binomial_action
from oscdet.errors import DomainError
from oscdet.potential import symanzik_map
from oscdet.predictions import (
    VerifyConfig,
    measure_point,
    predict_det_asymptotic,
    predict_det_ratio_g,
    predict_Z1,
    verify,
)
from oscdet.special_functions import EULER_GAMMA, LOG2, digamma


def test_predict_Z1_reference_constants():
    # N = 4: -(1/2) log g + (gamma + 5 log 2)/2
    g = 1e-3
    assert predict_Z1(4, g) == pytest.approx(
        -0.5 * math.log(g) + 0.5 * (EULER_GAMMA + 5.0 * LOG2), abs=1e-13)
    assert predict_Z1(4, 1.0) == pytest.approx(2.0214757838506295, abs=1e-12)
    # N = 6: -(1/4) log g + gamma/2 + 2 log 2
    assert predict_Z1(6, g) == pytest.approx(
        -0.25 * math.log(g) + 0.5 * EULER_GAMMA + 2.0 * LOG2, abs=1e-13)


def test_predict_Z1_general_energy():
    for N in (4, 6):
        for g in (1e-2, 1e-3):
            for E in (0.0, 0.3, -0.8):
                v, _ = symanzik_map(2, N, g, E)
                want = ((1.0 / (N - 2)) * (-math.log(g) + N * LOG2)
                        - 0.5 * (digamma(0.5 * (1.0 - E)) + LOG2))
                assert predict_Z1(N, g, E) == pytest.approx(want, rel=1e-14)


def test_predict_Z1_domain():
    with pytest.raises(DomainError):
        predict_Z1(2, 0.1)
    with pytest.raises(DomainError):
        predict_Z1(4, -0.1)


def test_predict_det_ratio_quartic_hand_form():
    # -2/(3g) + (log g / 2 - 2 log 2) E
    for g in (1e-1, 1e-2, 1e-3):
        for E in (0.0, 0.5, -1.0):
            want = -2.0 / (3.0 * g) + (0.5 * math.log(g) - 2.0 * LOG2) * E
            assert predict_det_ratio_g(4, 2, g, E) == pytest.approx(want, rel=1e-12)


def test_predict_det_ratio_type_N_at_zero_energy():
    # reduces to twice the binomial action
    for N, M in ((4, 2), (8, 4)):
        g = 1e-2
        v, _ = symanzik_map(M, N, g, 0.0)
        want = 2.0 * binomial_action(1.0, v, float(N), float(M)).value
        assert predict_det_ratio_g(N, M, g, 0.0) == pytest.approx(want, rel=1e-13)


def test_predict_det_ratio_anomalous_extra_power():
    # (6,2): carries -(4 beta/(N(M+2))) log v with beta = v/2
    g = 1e-2
    v, _ = symanzik_map(2, 6, g, 0.0)
    base = 2.0 * binomial_action(1.0, v, 6.0, 2.0).value
    want = base - (v / 12.0) * math.log(v)
    assert predict_det_ratio_g(6, 2, g, 0.0) == pytest.approx(want, rel=1e-13)


def test_predict_det_asymptotic_forms():
    v, lam = 3.0, 0.8
    # (4,2): action plus (N/(N-2)) A_1
    want = -v**1.5 / 3.0 + 2.0 * level_one_log_correction(lam, v)
    assert predict_det_asymptotic(4, 2, v, lam) == pytest.approx(want, rel=1e-13)
    # M != 2: lambda-free
    a = predict_det_asymptotic(8, 4, v, 0.0)
    b = predict_det_asymptotic(8, 4, v, lam)
    assert a == b
    # anomalous (6,4) carries -log v through the closed anomalous action
    got = predict_det_asymptotic(6, 4, v, 0.0)
    assert got == pytest.approx(binomial_action(1.0, v, 6.0, 4.0).value, rel=1e-14)


def test_measure_point_routes_consistent():
    # the harness flags route discrepancies above 1e-4
    p = measure_point(4, 1e-2)
    assert p.zp1 == pytest.approx(p.zp1_det, abs=1e-4)
    assert p.z2 == pytest.approx(p.z2_det, abs=1e-4)
    # slope and z1 are tied by the regularized harmonic trace
    assert p.slope == pytest.approx(-p.z1 + 0.5 * (EULER_GAMMA + LOG2), abs=1e-12)


def test_verify_truncated_grid_structure():
    cfg = VerifyConfig(grid=(1e-1, 3e-2, 1e-2), spectrum_count=128,
                       spectrum_tol=1e-6)
    report = verify(4, cfg)
    assert report.family == (4, 2)
    assert report.grid == [1e-1, 3e-2, 1e-2]
    for key in ("z1", "zp1", "z2", "zp2", "slope", "ratio0", "skew_ratio0"):
        assert len(report.predicted[key]) == 3
        assert len(report.measured[key]) == 3
        for m, q, r in zip(report.measured[key], report.predicted[key],
                           report.residuals[key]):
            assert r == m - q
    # on a short grid the trend verdicts already hold
    assert report.verdicts["z1_monotone"]
    assert report.verdicts["zp1_regular"]
    import json

    import jsonschema

    from oscdet import schemas

    jsonschema.validate(json.loads(report.to_json()), schemas.VERIFY_SCHEMA)
    rows = list(report.to_csv_rows())
    assert rows[0][0] == "g"
    assert len(rows) == 4


def test_verify_config_file_round_trip(tmp_path):
    path = tmp_path / "cfg"
    path.write_text("# comment\ngrid = 1e-1, 1e-2\nz1_abs_max = 0.07\n"
                    "spectrum_count = 64\n")
    cfg = VerifyConfig.from_file(path)
    assert cfg.grid == (1e-1, 1e-2)
    assert cfg.z1_abs_max == 0.07
    assert cfg.spectrum_count == 64
    assert cfg.slope_rel_max == 0.02  # untouched default
