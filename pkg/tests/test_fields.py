"""Field construction, sampling, extrema, fingerprints, energy map."""

import math

import numpy as np
import pytest

from stablefront import (EnergyBelowPotential, StableFrontError,
                         field_from_spec, grid_field, mechanical_to_metric,
                         preset_field)


def test_preset_param_validation():
    with pytest.raises(StableFrontError):
        preset_field("nope", v=1.0)
    with pytest.raises(StableFrontError):
        preset_field("layered", A=2.0)            # missing B
    with pytest.raises(StableFrontError):
        preset_field("constant", v=1.0, extra=3)  # unknown param
    with pytest.raises(StableFrontError):
        preset_field("channel", base=1.0, boost=4.0, width=0.7)
    with pytest.raises(StableFrontError):
        preset_field("bumps", base=1.0, amp=1.0, sigma=0.0)


def test_periodicity_of_presets():
    fields = [
        preset_field("constant", v=2.0),
        preset_field("layered", A=2.0, B=1.0),
        preset_field("channel", base=1.0, boost=4.0, width=0.2),
        preset_field("bumps", base=2.0, amp=1.0, sigma=0.15),
    ]
    rng = np.random.default_rng(7)
    # dyadic points: x + integer shift is then exact in floating point,
    # so both arguments reduce to the identical point of [0,1)^2 and
    # periodicity holds bit for bit, not just approximately
    pts = rng.integers(-192, 193, size=(64, 2)) / 64.0
    shifts = rng.integers(-5, 6, size=(64, 2)).astype(float)
    for f in fields:
        base = f.sample_many(pts[:, 0], pts[:, 1])
        moved = f.sample_many(pts[:, 0] + shifts[:, 0], pts[:, 1] + shifts[:, 1])
        assert np.array_equal(base, moved)


def test_scalar_matches_vector_sampling():
    f = preset_field("bumps", base=2.0, amp=1.0, sigma=0.15)
    rng = np.random.default_rng(13)
    for _ in range(32):
        p = rng.uniform(-2.0, 2.0, size=2)
        v = f.sample((p[0], p[1]))
        arr = f.sample_many(np.array([p[0]]), np.array([p[1]]))
        assert v == float(arr[0])


def test_known_values():
    lay = preset_field("layered", A=2.0, B=1.0)
    assert lay.sample((0.0, 0.37)) == pytest.approx(3.0, abs=1e-15)
    assert lay.sample((0.5, 0.0)) == pytest.approx(1.0, abs=1e-15)
    ch = preset_field("channel", base=1.0, boost=4.0, width=0.2)
    assert ch.sample((0.3, 0.0)) == pytest.approx(5.0, abs=1e-15)
    assert ch.sample((0.3, 0.5)) == pytest.approx(1.0, abs=1e-15)
    assert ch.sample((0.1, 0.2)) == pytest.approx(1.0, abs=1e-12)  # ramp edge
    bm = preset_field("bumps", base=2.0, amp=1.0, sigma=0.15)
    assert bm.sample((0.0, 0.0)) == pytest.approx(3.0, abs=1e-15)
    assert bm.sample((1.0, -2.0)) == pytest.approx(3.0, abs=1e-15)


def test_extrema():
    assert preset_field("constant", v=2.0).extrema() == (2.0, 2.0)
    lo, hi = preset_field("layered", A=2.0, B=1.0).extrema()
    assert lo == pytest.approx(1.0, abs=1e-12)
    assert hi == pytest.approx(3.0, abs=1e-12)
    lo, hi = preset_field("channel", base=1.0, boost=4.0, width=0.2).extrema()
    assert lo == pytest.approx(1.0, abs=1e-12)
    assert hi == pytest.approx(5.0, abs=1e-12)


def test_grid_roundtrip_and_interpolation():
    rng = np.random.default_rng(3)
    vals = rng.uniform(1.0, 2.0, size=(6, 6))
    f = grid_field(6, vals)
    # node values are reproduced exactly
    for j in range(6):
        for i in range(6):
            assert f.sample((i / 6.0, j / 6.0)) == vals[j, i]
    # interpolation stays inside the node range
    pts = rng.uniform(0.0, 1.0, size=(128, 2))
    s = f.sample_many(pts[:, 0], pts[:, 1])
    assert np.all(s >= vals.min() - 1e-12)
    assert np.all(s <= vals.max() + 1e-12)
    # spec round trip preserves identity
    g = field_from_spec(f.spec())
    assert g.fingerprint == f.fingerprint
    assert np.array_equal(g.values, f.values)

    with pytest.raises(StableFrontError):
        grid_field(4, np.ones(15))


def test_fingerprints_distinguish_fields():
    fps = {
        preset_field("constant", v=2.0).fingerprint,
        preset_field("constant", v=2.5).fingerprint,
        preset_field("layered", A=2.0, B=1.0).fingerprint,
        grid_field(2, [1.0, 2.0, 3.0, 4.0]).fingerprint,
        grid_field(2, [1.0, 2.0, 3.0, 4.5]).fingerprint,
    }
    assert len(fps) == 5
    # deterministic across construction
    a = preset_field("layered", A=2.0, B=1.0)
    b = preset_field("layered", A=2.0, B=1.0)
    assert a.fingerprint == b.fingerprint


def test_mechanical_metric_pointwise():
    V = preset_field("bumps", base=0.0, amp=1.0, sigma=0.2)
    c = 1.7
    a_c = mechanical_to_metric(V, c)
    rng = np.random.default_rng(11)
    pts = rng.uniform(-1.0, 1.0, size=(64, 2))
    got = a_c.sample_many(pts[:, 0], pts[:, 1])
    want = 1.0 / np.sqrt(2.0 * (c - V.sample_many(pts[:, 0], pts[:, 1])))
    assert np.allclose(got, want, rtol=0.0, atol=0.0)  # exact composition
    vmin, vmax = V.extrema()
    lo, hi = a_c.extrema()
    assert lo == pytest.approx(1.0 / math.sqrt(2.0 * (c - vmin)), rel=1e-12)
    assert hi == pytest.approx(1.0 / math.sqrt(2.0 * (c - vmax)), rel=1e-12)


def test_mechanical_rejects_low_energy():
    V = preset_field("constant", v=1.0)
    with pytest.raises(EnergyBelowPotential):
        mechanical_to_metric(V, 1.0)
    with pytest.raises(EnergyBelowPotential):
        mechanical_to_metric(V, 0.5)
    # spec round trip of the wrapped form
    a_c = mechanical_to_metric(V, 2.0)
    back = field_from_spec(a_c.spec())
    assert back.fingerprint == a_c.fingerprint
    assert back.sample((0.3, 0.4)) == a_c.sample((0.3, 0.4))
