"""Three routes to the effective Hamiltonian and their cross-checks."""

import math

import numpy as np
import pytest

import stablefront.hamiltonian as H
from stablefront import (IndistinguishableLevels, InfmaxDivergence, NormTable,
                         NormEstimate, Rig, TolInfeasible, ValidationError,
                         build_front, convexity_probe, hbar_dual,
                         hbar_mechanical, infmax_upper, level_set,
                         preset_field, primitive_directions)

RIG = Rig(N=16, S=3, M=4)
V0 = preset_field("constant", v=0.0)


def square_front():
    ests = []
    for q in primitive_directions(2):
        v = float(max(abs(q[0]), abs(q[1])))
        ests.append(NormEstimate(q, 1, v, v, (), "synthetic", (16, 3, 4)))
    full = ests + [e.negated() for e in ests]
    full.sort(key=lambda e: math.atan2(e.q[1], e.q[0]))
    return build_front(NormTable(full, 2, 1, "synthetic", (16, 3, 4)))


def test_hbar_dual_is_support_function():
    front = square_front()       # unit ball of max norm -> support is 1-norm
    rng = np.random.default_rng(5)
    for _ in range(32):
        p = rng.normal(size=2)
        assert hbar_dual(front, p) == pytest.approx(abs(p[0]) + abs(p[1]),
                                                    rel=1e-14)
        # evenness is exact: the vertex set is exactly negation-closed
        assert hbar_dual(front, -p) == hbar_dual(front, p)
        # homogeneity is exact for power-of-two scalings
        assert hbar_dual(front, 4.0 * p) == 4.0 * hbar_dual(front, p)


def test_infmax_constant_field_is_stationary():
    """On a = const the zero certificate is already optimal and the
    gradient vanishes identically, so the loop breaks immediately."""
    f = preset_field("constant", v=2.0)
    r = infmax_upper(f, (1.0, 1.0), n_grid=16, iters=100)
    assert r.value == 2.0 * math.hypot(1.0, 1.0)
    assert len(r.trace) == 1


def test_infmax_degenerate_direction_is_stationary():
    """p along the lanes of a 1D field: the start value max(a) |p| is the
    exact answer and the averaged gradient cancels by symmetry."""
    lay = preset_field("layered", A=2.0, B=1.0)
    r = infmax_upper(lay, (0.0, 1.0), n_grid=32, iters=100)
    assert r.trace[0] == 3.0
    assert r.value == 3.0


def test_infmax_descends_across_lanes():
    lay = preset_field("layered", A=2.0, B=1.0)
    r = infmax_upper(lay, (1.0, 0.0), n_grid=32, iters=300)
    assert r.trace[0] == 3.0                     # max(a) |p| exactly
    assert math.sqrt(3.0) * (1.0 - 1e-9) <= r.value <= 2.0
    assert r.value == pytest.approx(min(r.trace), abs=0.0)
    assert r.phi.shape == (32, 32)
    # certificate re-evaluates to the reported value
    n = 32
    xs = np.arange(n) / n
    A = lay.sample_many(xs[:, None], xs[None, :])
    val = H._infmax_eval(A, 1.0, 0.0, r.phi, n)[0]
    assert val == r.value


def test_infmax_input_validation():
    f = preset_field("constant", v=1.0)
    with pytest.raises(ValidationError):
        infmax_upper(f, (0.0, 0.0))
    with pytest.raises(ValidationError):
        infmax_upper(f, (1.0, 0.0), n_grid=3)
    with pytest.raises(ValidationError):
        infmax_upper(f, (1.0, 0.0), c0=-1.0)


def test_infmax_divergence_guard(monkeypatch):
    """A sustained climb above the starting value must abort.  The stub
    functional rises forever with a spatially varying gradient field."""
    n = 8
    bump = np.sin(2.0 * np.pi * np.arange(n) / n)[:, None] * np.ones(n)
    calls = {"k": 0}

    def fake_eval(A, p1, p2, phi, n_):
        value = 10.0 * (1.0 + 0.01 * calls["k"])
        calls["k"] += 1
        vals = np.full((n, n), value) + 0.01 * bump
        g1 = 1.0 + 0.1 * bump
        g2 = np.zeros((n, n))
        mag = np.abs(g1)
        return value, vals, g1, g2, mag

    monkeypatch.setattr(H, "_infmax_eval", fake_eval)
    f = preset_field("constant", v=1.0)
    with pytest.raises(InfmaxDivergence):
        infmax_upper(f, (1.0, 0.0), n_grid=n, iters=200)


def test_mechanical_free_hamiltonian():
    """V = 0 must reproduce |p|^2 / 2 up to the support tolerance."""
    r = hbar_mechanical(V0, (1.0, 0.0), tol=1e-3, rig=RIG, threads=2)
    assert r.value == pytest.approx(0.5, rel=5e-3)
    assert abs(r.g_final - 1.0) <= 1e-3
    assert float(r) == r.value
    r2 = hbar_mechanical(V0, (0.0, 2.0), tol=1e-3, rig=RIG, threads=2)
    assert r2.value == pytest.approx(2.0, rel=5e-3)
    # trace is (c, g) with g decreasing in c
    cs = [c for c, _ in sorted(r2.trace)]
    gs = [g for _, g in sorted(r2.trace)]
    assert all(g1 <= g0 + 1e-9 for g0, g1 in zip(gs, gs[1:]))
    assert len(cs) == len(set(cs))


def test_mechanical_constant_shift():
    """Adding a constant to V shifts the level by the same constant."""
    base = hbar_mechanical(V0, (1.0, 0.0), tol=1e-3, rig=RIG, threads=2)
    lifted = hbar_mechanical(preset_field("constant", v=1.0), (1.0, 0.0),
                             tol=1e-3, rig=RIG, threads=2)
    assert lifted.value - base.value == pytest.approx(1.0, abs=1e-4)


def test_mechanical_impossible_tolerance():
    with pytest.raises(TolInfeasible):
        hbar_mechanical(V0, (1.0, 0.0), tol=1e-16, rig=RIG, threads=2)


def test_mechanical_rejects_zero_momentum():
    with pytest.raises(ValidationError):
        hbar_mechanical(V0, (0.0, 0.0), rig=RIG)


def test_level_set_free_circle():
    """For V = 0 the level-c momentum set is the circle |p| = sqrt(2c)."""
    front = level_set(V0, 1.0, Q=4, lam=2, rig=RIG, threads=2)
    rad = np.hypot(front.s_polygon[:, 0], front.s_polygon[:, 1])
    want = math.sqrt(2.0)
    assert np.all(rad >= want * (1.0 - 1e-9))   # polygon circumscribes
    assert np.all(rad <= want * 1.02)           # within the secant budget


def test_convexity_probe_quadratic():
    rep = convexity_probe(V0, (1.0, 0.0), (2.0, 0.0), midpoints=1,
                          tol=1e-3, rig=RIG, threads=2)
    assert rep["H0"] == pytest.approx(0.5, rel=5e-3)
    assert rep["H1"] == pytest.approx(2.0, rel=5e-3)
    # chord - H(midpoint) = 1.25 - 1.125 for the free Hamiltonian
    assert rep["min_gap"] == pytest.approx(0.125, abs=5e-3)
    assert rep["strict_regime"] is True


def test_convexity_probe_equal_endpoints():
    with pytest.raises(IndistinguishableLevels):
        convexity_probe(V0, (1.0, 0.0), (1.0, 0.0), midpoints=1,
                        tol=1e-3, rig=RIG, threads=2)
