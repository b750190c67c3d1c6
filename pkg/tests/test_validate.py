"""The built-in invariant suite must pass and leave its artifacts."""

import json

from stablefront import run_validate


def test_validate_passes_and_writes_artifacts(tmp_path):
    ok = run_validate(str(tmp_path), threads=2)
    assert ok is True
    report = json.loads((tmp_path / "validate.json").read_text())
    assert report["passed"] is True
    assert report["checks"]
    assert all(c["ok"] for c in report["checks"])
    names = {c["name"] for c in report["checks"]}
    # a few load-bearing checks that must always be present
    for expected in ("distance_symmetry", "norm_constant_axis",
                     "fekete_monotone", "splice_conservation",
                     "maupertuis_equality"):
        assert expected in names, f"missing check {expected}"
    for artifact in ("front_layered.json", "front_layered.svg",
                     "sweep_layered.csv"):
        assert (tmp_path / artifact).exists()
