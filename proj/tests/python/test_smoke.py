import copy

import pytest

import uslab


def test_module_metadata():
    assert uslab.__version__ == "0.1.0"
    assert uslab.SCHEMA_VERSION == 1


def test_identity_command():
    res = uslab.run({"schema_version": 1, "command": "identity", "name": "falling_factorial"})
    assert res.exit_code == 0
    assert res.series is None
    assert res.report["identity"]["all_equal"] is True
    assert res.report["identity"]["count"] == 48


def test_construct_and_verify(bernstein_config):
    res = uslab.run(bernstein_config)
    assert res.exit_code == 0
    assert res.report["success"] is True
    ids = {r["target_id"] for r in res.report["certificates"][0]["records"]}
    assert ids == {"bump", "wave"}
    check = uslab.verify(res.report, res.series)
    assert check.exit_code == 0
    statuses = {r["status"] for r in check.report["verification"]["reports"][0]["records"]}
    assert statuses == {"confirmed"}


def test_tampered_claim_is_caught(bernstein_config):
    res = uslab.run(bernstein_config)
    bad = copy.deepcopy(res.report)
    bad["certificates"][0]["records"][1]["achieved_error"] /= 1000
    check = uslab.verify(bad, res.series)
    assert check.exit_code == 1
    assert check.report["verification"]["reports"][0]["records"][1]["status"] == "violated"


def test_same_config_same_hash_and_csv(bernstein_config):
    a = uslab.run(bernstein_config)
    b = uslab.run(bernstein_config)
    assert a.report["determinism_hash"] == b.report["determinism_hash"]
    csv = uslab.report_csv(a.report)
    assert csv == uslab.report_csv(b.report)
    lines = csv.strip().splitlines()
    assert lines[0] == "target_id,lambda,error,epsilon,sample_density"
    assert len(lines) == 3


def test_json_string_and_dict_agree(bernstein_config):
    import json

    a = uslab.run(bernstein_config)
    b = uslab.run(json.dumps(bernstein_config))
    assert a.report["determinism_hash"] == b.report["determinism_hash"]


def test_schema_errors():
    with pytest.raises(uslab.SchemaError):
        uslab.run({"command": "identity"})
    with pytest.raises(uslab.SchemaError):
        uslab.run("{not json")
    with pytest.raises(uslab.SchemaError):
        uslab.run({"schema_version": 1, "command": "construct", "name": "nothing"})
    with pytest.raises(ValueError):
        uslab.identity_sweep(3, [1])


def test_construction_failure_is_reported():
    cfg = {
        "schema_version": 1,
        "command": "construct",
        "name": "taylor_disc",
        "weights": {"kind": "phi_reciprocal", "phi": {"kind": "linear", "shift": 0}},
        "targets": [{"id": "t", "function": "1", "K": {"type": "disc", "center": 2, "radius": 0.25},
                     "L": {"type": "disc", "center": 0, "radius": 0.5}, "epsilon": 1e-2}],
    }
    res = uslab.run(cfg)
    assert res.exit_code == 1
    assert res.report["failures"][0]["target_id"] == "t"


def test_mode_override_reaches_report():
    cfg = {
        "schema_version": 1,
        "command": "construct",
        "name": "interpolating",
        "family": {"kind": "scalar", "values": {"kind": "cesaro"}},
        "values": ["1/2", "-3"],
    }
    assert uslab.run(cfg).report["mode"] == "exact"
    res = uslab.run(cfg, mode="float")
    assert res.report["mode"] == "float"
    assert res.exit_code == 0


def test_diagnose_series_radius():
    cfg = {"schema_version": 1, "command": "diagnose", "name": "series_radius",
           "alpha": {"kind": "constant", "value": "1"}, "horizon": 200}
    res = uslab.run(cfg)
    assert res.report["series_radius"]["R"] == "inf"
