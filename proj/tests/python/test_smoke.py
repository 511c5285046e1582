import json

import pytest

import pycertify


def test_gallery_names():
    names = pycertify.gallery_names()
    assert len(names) >= 8
    for expected in [
        "identity",
        "ellipse",
        "anisotropic-const",
        "variable-hoelder",
        "skew",
        "choquet-mild",
        "choquet-strong",
        "dent-hopf",
    ]:
        assert expected in names
        assert pycertify.gallery_description(expected)


def test_certify_identity():
    out = pycertify.certify({}, ("cos(theta)", "sin(theta)"), n_boundary=64)
    assert out["verdict"] == "Diffeomorphism"
    assert out["exit_status"] == 0
    assert abs(out["min_boundary_det"] - 1.0) < 1e-3
    assert out["topology"]["M"] == 0
    assert out["topology"]["wn_f"] == 1
    assert out["injectivity"]["collision_count"] == 0


def test_certify_anisotropic():
    out = pycertify.certify(
        {"s11": "1", "s22": "4", "K": 4.0},
        ("cos(theta)", "sin(theta)"),
        n_boundary=64,
    )
    assert out["verdict"] == "Diffeomorphism"
    assert out["topology"]["constant"]


def test_certify_rejects_bad_sigma():
    with pytest.raises(pycertify.CertifyError):
        pycertify.certify({"s11": "not an expr ("}, ("cos(theta)", "sin(theta)"))
    with pytest.raises(pycertify.CertifyError):
        pycertify.certify({"bogus": "1"}, ("cos(theta)", "sin(theta)"))


def test_run_scenario_gallery(tmp_path):
    out = pycertify.run_scenario("identity", str(tmp_path), resolution=64)
    assert out["exit_status"] == 0
    assert out["verdict"] == "Diffeomorphism"
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["schema_version"] == 1
    assert report["main"]["verdict"] == "Diffeomorphism"
    assert (tmp_path / "boundary_profile.csv").exists()
    assert out["report"]["scenario"]["name"] == "identity"


def test_run_scenario_dict(tmp_path):
    scenario = {
        "name": "py-ellipse",
        "phi": {"x": "2*cos(theta)", "y": "sin(theta)"},
        "resolution": 64,
        "checks": ["main"],
    }
    out = pycertify.run_scenario(scenario, str(tmp_path))
    assert out["exit_status"] == 0
    assert out["report"]["scenario"]["name"] == "py-ellipse"


def test_unknown_scenario_key(tmp_path):
    with pytest.raises(pycertify.CertifyError):
        pycertify.run_scenario({"name": "bad", "surprise": 1}, str(tmp_path))
