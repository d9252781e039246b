import math

import pytest

import mhardy

QUAD = {"n_r": 64, "n_phi": 12, "n_y": 24}


def test_gauge_closed_forms():
    assert mhardy.rho(2, 1, 0.0, [0.3, 0.4], [1.2]) == pytest.approx(1.3)
    assert mhardy.hom_dim(2, 1, 1.0) == 4.0
    g = mhardy.grad_rho(2, 1, 1.0, [0.4, 0.9], [-0.6])
    r = math.hypot(0.4, 0.9)
    rh = mhardy.rho(2, 1, 1.0, [0.4, 0.9], [-0.6])
    assert math.sqrt(sum(c * c for c in g)) == pytest.approx(r / rh, rel=1e-12)


def test_origin_raises():
    with pytest.raises(mhardy.Error):
        mhardy.grad_rho(2, 1, 1.0, [0.0, 0.0], [0.0])


def test_verify_roundtrip():
    cfg = {
        "seed": 1,
        "quadrature": QUAD,
        "runs": [
            {"theorem_id": "radial_hardy", "geometry": {"m": 2, "k": 1, "gamma": 1.0}},
            {"theorem_id": "radial_hardy", "weights": {"alpha1": -5.0}},
        ],
    }
    report, ok = mhardy.verify(cfg)
    assert not ok
    assert [r["status"] for r in report["runs"]] == ["pass", "error"]
    assert report["runs"][1]["error"]["kind"] == "AdmissibilityError"
    again, _ = mhardy.verify(cfg)
    assert again == report


def test_empty_suite():
    report, ok = mhardy.verify({})
    assert ok
    assert report["summary"]["runs"] == 0


def test_bad_config():
    with pytest.raises(mhardy.ConfigError):
        mhardy.verify({"runs": [{"theorem_id": "nope"}]})
    with pytest.raises(mhardy.ConfigError):
        mhardy.verify({}, admissibility="both")


def test_sweep_csv():
    combined, tables, ok = mhardy.sweep(
        {"runs": [{"theorem_id": "landau_log", "schedule": [0.5, 0.2]}]}
    )
    assert ok
    (csv,) = tables.values()
    lines = csv.strip().splitlines()
    assert lines[0] == "theorem_id,epsilon,quotient,sharp_constant,gap"
    assert len(lines) == 3
    q = [float(l.split(",")[2]) for l in lines[1:]]
    assert q[1] <= q[0]
    assert q[1] >= 0.25


def test_listing():
    ids = mhardy.theorem_ids()
    assert "ab_hardy" in ids
    text = mhardy.list_theorems()
    assert all(i in text for i in ids)
