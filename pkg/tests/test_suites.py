import json

import pytest

from isorep.suites import PRESETS, verify_suite


@pytest.mark.parametrize("preset", sorted(PRESETS))
def test_preset_passes_and_serializes(preset):
    report = verify_suite(preset, seed=0)
    failed = [c.check for c in report.checks if not c.passed]
    assert report.passed, f"failed checks: {failed}"
    # every report must survive strict JSON serialization (numpy scalars leak
    # easily through comparisons)
    json.dumps(report.to_json(), allow_nan=False)


def test_unknown_preset_rejected():
    with pytest.raises(ValueError, match="unknown preset"):
        verify_suite("nope")


def test_report_json_shape():
    report = verify_suite("example2", seed=5)
    obj = report.to_json()
    assert obj["preset"] == "example2"
    assert obj["seed"] == 5
    assert isinstance(obj["checks"], list) and obj["checks"]
    for check in obj["checks"]:
        assert {"check", "description", "passed"} <= set(check)
