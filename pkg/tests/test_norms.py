"""Ray costs: exact constant-field values, subadditive refinement,
bounded asymptotic gaps, and sweep symmetry."""

import math

import numpy as np
import pytest

from stablefront import (NonPrimitiveDirection, Rig, burago_gap,
                         direction_sweep, fekete_refine, norm_estimate,
                         preset_field, primitive_directions)

from oracles import layered_along_cost, layered_crossing_cost


def test_primitive_direction_counts():
    # 8 Farey-primitive half-plane reps per unit of Q growth after Q=1
    assert len(primitive_directions(1)) == 4
    assert len(primitive_directions(2)) == 8
    assert len(primitive_directions(3)) == 16
    assert len(primitive_directions(4)) == 24
    for q1, q2 in primitive_directions(6):
        assert math.gcd(q1, abs(q2)) == 1
        assert q1 > 0 or (q1 == 0 and q2 > 0)


def test_rejects_degenerate_directions(constant2, small_rig):
    for bad in ((0, 0), (2, 2), (0, 4), (-2, 6)):
        with pytest.raises(NonPrimitiveDirection):
            norm_estimate(constant2, bad, lam=1, rig=small_rig)


def test_constant_field_stencil_directions_exact(constant2, small_rig):
    """For a = v the chain along a stencil direction q costs |q| / v at
    every scale, so the estimate equals the true norm to rounding."""
    for q in ((1, 0), (0, 1), (1, 1), (1, -2), (2, 1)):
        est = norm_estimate(constant2, q, lam=2, rig=small_rig)
        want = math.hypot(*q) / 2.0
        assert est.best == pytest.approx(want, rel=1e-12)


def test_constant_field_off_stencil_secant(constant2):
    """A direction outside the stencil costs more than its length but no
    more than the cheapest two-ray decomposition into stencil moves."""
    rig = Rig(N=8, S=2, M=2)
    est = norm_estimate(constant2, (5, 1), lam=1, rig=rig)
    ideal = math.hypot(5.0, 1.0) / 2.0
    # (5, 1) = (2, 1) + 3 (1, 0) is one admissible decomposition
    best_mix = (math.hypot(2, 1) + 3.0 * math.hypot(1, 0)) / 2.0
    assert ideal <= est.best <= best_mix * (1.0 + 1e-12)


def test_fekete_sequence_monotone(layered21, small_rig):
    est = fekete_refine(layered21, (1, 0), kmax=3, rig=small_rig)
    ks = [k for k, _ in est.fekete]
    ss = [s for _, s in est.fekete]
    assert ks == [0, 1, 2, 3]
    eps = 1e-9 * (1.0 + ss[0])
    assert all(s1 <= s0 + eps for s0, s1 in zip(ss, ss[1:]))
    assert est.best == pytest.approx(min(ss), abs=0.0)
    assert est.value == ss[-1]
    assert est.lam == 8


def test_layered_costs_bracket_continuum(layered21, small_rig):
    """Graph estimates upper-bound the continuum norm and converge toward
    it from above as the scale grows."""
    across = fekete_refine(layered21, (1, 0), kmax=3, rig=small_rig)
    along = fekete_refine(layered21, (0, 1), kmax=3, rig=small_rig)
    true_across = layered_crossing_cost(2.0, 1.0)   # 1/sqrt(3)
    true_along = layered_along_cost(2.0, 1.0)       # 1/3
    assert across.best >= true_across - 1e-12
    assert along.best >= true_along - 1e-12
    assert across.best <= true_across * 1.05
    assert along.best <= true_along * 1.05
    # the cheap direction is the one along the fast lane
    assert along.best < across.best


def test_burago_gaps_bounded(layered21, small_rig):
    rep = burago_gap(layered21, (1, 0), n_list=(1, 2, 3, 4, 5, 6),
                     rig=small_rig)
    assert rep.n_list == (1, 2, 3, 4, 5, 6)
    assert len(rep.gaps) == 6
    assert min(rep.gaps) >= -1e-9          # best is the per-n minimum
    assert rep.max_gap <= 0.5 * rep.best   # far below linear growth
    assert abs(rep.slope) <= 0.05 * rep.best


def test_sweep_symmetry_and_order(bumps_field, tiny_rig):
    table = direction_sweep(bumps_field, Q=2, lam=1, rig=tiny_rig, threads=2)
    assert len(table.estimates) == 16
    ang = [math.atan2(e.q[1], e.q[0]) for e in table.estimates]
    assert ang == sorted(ang)
    for e in table.estimates:
        assert table.lookup((-e.q[0], -e.q[1])).best == e.best
    # threads must not change values: compare against serial
    serial = direction_sweep(bumps_field, Q=2, lam=1, rig=tiny_rig, threads=1)
    for a, b in zip(table.estimates, serial.estimates):
        assert a.q == b.q and a.best == b.best


def test_csv_round_trip_format(constant2, tiny_rig):
    table = direction_sweep(constant2, Q=1, lam=1, rig=tiny_rig)
    text = table.to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "q1,q2,lambda,value,best,N,S,M"
    assert len(lines) == 9
    for row in lines[1:]:
        q1, q2, lam, value, best, N, S, M = row.split(",")
        # repr floats parse back to the identical double
        est = table.lookup((int(q1), int(q2)))
        assert float(value) == est.value
        assert float(best) == est.best
        assert (int(N), int(S), int(M)) == tiny_rig.key()
