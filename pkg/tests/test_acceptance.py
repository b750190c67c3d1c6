"""Acceptance suite: ten end-to-end criteria at pinned rigs and
tolerances.

One test per criterion, so ``pytest -v`` prints exactly one pass/fail
line for each.  Tolerances are frozen; every expected number is either a
closed-form value (constant and layered metrics, free Hamiltonian), an
exact structural identity (conservation, monotonicity, determinism), or
a threshold calibrated once against the ideal-disk geometry and then
left alone.  Loosening a band to make a failing engine pass defeats the
point of the suite.
"""

import json
import math

import numpy as np
import pytest

from stablefront import (Rig, action_dominates_length, action_with_durations,
                         adjust, build_front, burago_gap, convexity_probe,
                         detect_corners, direction_sweep, distance,
                         energy_matched_durations, facet_report,
                         fekete_refine, find_crossings, hbar_dual,
                         hbar_mechanical, infmax_upper, level_set, make_path,
                         norm_estimate, preset_field, run_validate)
from stablefront.lattice import Stencil

DEF = Rig(N=64, S=3, M=8)
S8 = Rig(N=64, S=8, M=8)
THREADS = 8

CONST2 = preset_field("constant", v=2.0)
LAYERED = preset_field("layered", A=2.0, B=1.0)
CHANNEL = preset_field("channel", base=1.0, boost=4.0, width=0.2)
BUMPS = preset_field("bumps", base=2.0, amp=1.0, sigma=0.15)
V_ZERO = preset_field("constant", v=0.0)
V_COS = preset_field("layered", A=0.0, B=1.0)      # cos(2 pi y1)

SQRT3 = math.sqrt(3.0)


# ---------------------------------------------------------------- fixtures
# Sweeps are shared across criteria; lambda is reduced where the value
# provably cannot depend on it (constant fields are chain-exact at any
# scale) or where the 2% bands were verified to hold already at the
# smaller scale, keeping windows inside the node budget.

@pytest.fixture(scope="module")
def const_table():
    return direction_sweep(CONST2, Q=4, lam=1, rig=DEF, threads=THREADS)


@pytest.fixture(scope="module")
def layered_table():
    return direction_sweep(LAYERED, Q=4, lam=2, rig=DEF, threads=THREADS)


@pytest.fixture(scope="module")
def bumps_table():
    return direction_sweep(BUMPS, Q=4, lam=1, rig=DEF, threads=THREADS)


@pytest.fixture(scope="module")
def channel_tables():
    t4 = direction_sweep(CHANNEL, Q=4, lam=1, rig=DEF, threads=THREADS)
    t8 = direction_sweep(CHANNEL, Q=8, lam=1, rig=DEF, threads=THREADS)
    return t4, t8


def _dual_support_deficiency(front, table):
    """Worst relative undershoot of the dual support against the norms.

    The dual polygon's support at integer q is the polygonal gauge of
    the hull, never above the swept upper bound (that would break
    convex consistency) and within sweep tolerance below it.
    """
    worst = 0.0
    for e in table.estimates:
        sup = float(np.max(front.s_polygon @ np.array(e.q, float)))
        assert sup <= e.best * (1.0 + 1e-9), \
            f"dual support {sup} exceeds norm bound {e.best} at {e.q}"
        worst = max(worst, (e.best - sup) / e.best)
    return worst


def _involution_error(front):
    from stablefront import polar_dual
    dd = polar_dual(front.s_polygon)
    return float(np.max(np.abs(dd - np.roll(front.d_hull, -1, axis=0))))


# ---------------------------------------------------------------- criteria

def test_criterion_01_constant_metric_exact_values(const_table):
    """a = 2: axis ray cost 0.5 within 1%; dual support 2 within 1.5%."""
    est = norm_estimate(CONST2, (1, 0), lam=8, rig=DEF)
    assert abs(est.best - 0.5) <= 0.01 * 0.5, f"norm {est.best}"
    front = build_front(const_table)
    hb = hbar_dual(front, (1.0, 0.0))
    assert abs(hb - 2.0) <= 0.015 * 2.0, f"hbar_dual {hb}"
    print(f"criterion 01 PASS  norm(1,0)={est.best!r}  hbar_dual={hb!r}")


def test_criterion_02_layered_closed_forms(layered_table):
    """a = 2 + cos(2 pi y1): crossing cost 1/sqrt(3), lane cost 1/3,
    hull touches (sqrt(3), 0) and (0, 3), all within 2%."""
    across = layered_table.lookup((1, 0)).best
    along = layered_table.lookup((0, 1)).best
    assert abs(across - 1.0 / SQRT3) <= 0.02 / SQRT3, f"across {across}"
    assert abs(along - 1.0 / 3.0) <= 0.02 / 3.0, f"along {along}"
    hull = build_front(layered_table).d_hull
    d1 = np.min(np.hypot(hull[:, 0] - SQRT3, hull[:, 1]))
    d2 = np.min(np.hypot(hull[:, 0], hull[:, 1] - 3.0))
    assert d1 <= 0.02 * SQRT3, f"nearest to (sqrt3,0): {d1}"
    assert d2 <= 0.02 * 3.0, f"nearest to (0,3): {d2}"
    print(f"criterion 02 PASS  across={across!r} along={along!r} "
          f"hull gaps {d1:.2e} {d2:.2e}")


def test_criterion_03_duality_round_trip(const_table, layered_table,
                                         bumps_table, channel_tables):
    """Dual-of-dual returns every hull (index-shifted) to 1e-9; dual
    support is consistent with the sweep on all four presets."""
    worst_inv = 0.0
    worst_def = 0.0
    for table in (const_table, layered_table, bumps_table,
                  channel_tables[0]):
        front = build_front(table)
        worst_inv = max(worst_inv, _involution_error(front))
        worst_def = max(worst_def, _dual_support_deficiency(front, table))
    assert worst_inv <= 1e-9, f"involution error {worst_inv}"
    assert worst_def <= 0.02, f"support deficiency {worst_def}"
    print(f"criterion 03 PASS  involution {worst_inv:.2e} "
          f"deficiency {worst_def:.2e}")


def test_criterion_04_infmax_sandwich(layered_table):
    """Layered, p = (1,0): the variational upper bound lands between the
    dual value (minus 3% slack) and 1.10 * sqrt(3); start value exact."""
    hb = hbar_dual(build_front(layered_table), (1.0, 0.0))
    res = infmax_upper(LAYERED, (1.0, 0.0), n_grid=64, iters=500)
    assert res.trace[0] == 3.0, f"start {res.trace[0]!r}"
    lo = hb * 0.97
    hi = 1.10 * SQRT3
    assert lo <= res.value <= hi, f"infmax {res.value} outside [{lo}, {hi}]"
    print(f"criterion 04 PASS  infmax={res.value!r} in [{lo:.4f}, {hi:.4f}] "
          f"(dual {hb!r})")


def test_criterion_05_mechanical_consistency():
    """V = 0: free Hamiltonian 1/2 at p = e1; momentum level circle of
    radius sqrt(2); midpoint convexity gap 0.125."""
    mech = hbar_mechanical(V_ZERO, (1.0, 0.0), tol=1e-3, rig=DEF,
                           threads=THREADS)
    assert abs(mech.value - 0.5) <= 0.02, f"mech {mech.value}"
    front = level_set(V_ZERO, 1.0, Q=4, lam=1, rig=DEF, threads=THREADS)
    rad = np.hypot(front.s_polygon[:, 0], front.s_polygon[:, 1])
    dev = float(np.max(np.abs(rad - math.sqrt(2.0)))) / math.sqrt(2.0)
    assert dev <= 0.02, f"level-set radius deviation {dev}"
    probe = convexity_probe(V_ZERO, (1.0, 0.0), (2.0, 0.0), midpoints=1,
                            tol=1e-3, rig=DEF, threads=THREADS)
    gap = probe["rows"][0]["gap"]
    assert abs(gap - 0.125) <= 0.03, f"convexity gap {gap}"
    print(f"criterion 05 PASS  mech={mech.value!r} radius dev {dev:.2e} "
          f"gap={gap!r}")


def test_criterion_06_crossing_join_realizes_distance():
    """50 pairs of minimizers with shared nodes (bumps field): splicing
    at two crossings conserves total weight exactly, and each spliced
    path re-queries to the same distance within 1e-12 relative."""
    rng = np.random.default_rng(20240817)
    changed = 0
    for trial in range(50):
        x = tuple(rng.uniform(0.0, 1.0, 2))
        while True:
            y = (x[0] + rng.uniform(-2.2, 2.2), x[1] + rng.uniform(-2.2, 2.2))
            if math.hypot(y[0] - x[0], y[1] - x[1]) >= 0.8:
                break
        d, p_f = distance(BUMPS, x, y, DEF, return_path=True)
        _, p_b = distance(BUMPS, y, x, DEF, return_path=True)
        p_r = make_path(p_b.nodes[::-1].copy(), p_b.weights[::-1].copy(),
                        p_b.h, p_b.field_fp, p_b.rig_key)
        crossings = find_crossings(p_f, p_r)
        assert len(crossings) >= 2, "same-endpoint pair must share 2+ nodes"
        if len(crossings) >= 4:
            c1 = crossings[len(crossings) // 3]
            c2 = crossings[2 * len(crossings) // 3]
        else:
            c1, c2 = crossings[0], crossings[-1]
        n1, n2 = adjust(p_f, p_r, c1, c2)
        before = math.fsum(list(p_f.weights) + list(p_r.weights))
        after = math.fsum(list(n1.weights) + list(n2.weights))
        assert before == after, f"trial {trial}: weight sum changed"
        for spliced in (n1, n2):
            assert abs(spliced.length - d) <= 1e-12 * d, \
                f"trial {trial}: spliced length {spliced.length} vs {d}"
        if not np.array_equal(n1.nodes, p_f.nodes):
            changed += 1
    # In a generic field the minimizer is unique, so forward and reverse
    # queries return the same node sequence and `changed` is expected to
    # be 0 here; exchanges between genuinely distinct tied minimizers
    # are exercised synthetically in test_geodesics.  What this trial
    # loop adds on real engine paths: crossing enumeration, exact weight
    # conservation through the splice, and 1e-12 agreement between the
    # spliced reverse-query pieces and the forward distance.
    print(f"criterion 06 PASS  50 splices conserved; {changed} produced "
          f"genuinely new minimizers")


def test_criterion_07_fekete_and_burago():
    """Layered q = (0,1): scale-doubled costs non-increasing to k = 4;
    asymptotic gap trend over n = 5..8 below 2% of the norm."""
    est = fekete_refine(LAYERED, (0, 1), kmax=4, rig=DEF)
    ss = [s for _, s in est.fekete]
    eps = 1e-9 * (1.0 + ss[0])
    assert len(ss) == 5
    assert all(s1 <= s0 + eps for s0, s1 in zip(ss, ss[1:])), f"s_k {ss}"
    rep = burago_gap(LAYERED, (0, 1), n_list=(5, 6, 7, 8), rig=DEF,
                     best=est.best)
    assert abs(rep.slope) <= 0.02 * est.best, \
        f"slope {rep.slope} vs norm {est.best}"
    print(f"criterion 07 PASS  s_k={['%.6f' % s for s in ss]} "
          f"slope={rep.slope!r}")


def test_criterion_08_facet_persistence_proxy(channel_tables):
    """Channel: the q = (1,0) corner keeps a >= 10 degree turn at Q = 4
    and Q = 8 (real facet).  Constant metric on an S = 8 rig: every
    Q = 4 corner shrinks by >= 1.8x at Q = 8 (fan artifacts)."""
    f4 = build_front(channel_tables[0])
    f8 = build_front(channel_tables[1])
    a4 = {tuple(c.q): c.angle_deg for c in detect_corners(f4, 0.0)}
    a8 = {tuple(c.q): c.angle_deg for c in detect_corners(f8, 0.0)}
    assert a4.get((1, 0), 0.0) >= 10.0, f"Q4 channel corner {a4.get((1, 0))}"
    assert a8.get((1, 0), 0.0) >= 10.0, f"Q8 channel corner {a8.get((1, 0))}"
    rep = facet_report(f8, [f4, f8])
    cls = {tuple(d["q"]): d["classification"] for d in rep["directions"]}
    assert cls.get((1, 0)) == "persistent", f"channel classes {cls}"

    # constant metric: S = 8 resolves every swept direction, so the hull
    # is inscribed in the true circle and all corners are fan artifacts
    s4 = build_front(direction_sweep(CONST2, Q=4, lam=1, rig=S8,
                                     threads=THREADS))
    s8f = build_front(direction_sweep(CONST2, Q=8, lam=1, rig=S8,
                                      threads=THREADS))
    shrunk = []
    for c in detect_corners(s4, 10.0):
        after = {tuple(cc.q): cc.angle_deg for cc in detect_corners(s8f, 0.0)}
        a_new = after.get(tuple(c.q), 0.0)
        ratio = math.inf if a_new == 0.0 else c.angle_deg / a_new
        shrunk.append(ratio)
        assert ratio >= 1.8, f"corner {c.q} ratio {ratio}"
    assert shrunk, "constant Q4 hull should show >= 10 degree corners"
    crep = facet_report(s8f, [s4, s8f])
    assert all(d["classification"] == "artifact" for d in crep["directions"]
               if d["angles_by_Q"]["4"] >= 10.0), f"classes {crep}"
    print(f"criterion 08 PASS  channel corner {a4[(1, 0)]:.2f}/"
          f"{a8[(1, 0)]:.2f} deg persistent; constant ratios "
          f"{['%.2f' % r for r in shrunk]}")


def test_criterion_09_maupertuis_inequality():
    """1000 random walk/duration trials at V = cos(2 pi y1), c = 2:
    kinetic action never undercuts the length form; equality holds at
    energy-matched durations."""
    rng = np.random.default_rng(77)
    offsets = Stencil(3).offsets
    c = 2.0
    worst_slack = 0.0
    worst_eq = 0.0
    for trial in range(1000):
        n_seg = int(rng.integers(8, 40))
        steps = offsets[rng.integers(0, offsets.shape[0], n_seg)]
        start = rng.integers(-64, 64, 2)
        nodes = np.concatenate([[start], start + np.cumsum(steps, axis=0)])
        path = make_path(nodes, np.ones(n_seg), h=1.0 / 64,
                         field_fp="walk", rig_key=(64, 3, 8))
        tau_star = energy_matched_durations(path, V_COS, c)
        a_star, maup = action_dominates_length(tau_star, path, V_COS, c)
        scale = max(1.0, abs(maup))
        worst_eq = max(worst_eq, abs(a_star - maup) / scale)
        tau = tau_star * rng.uniform(0.25, 4.0, size=tau_star.shape)
        a_rand, maup2 = action_dominates_length(tau, path, V_COS, c)
        assert maup2 == maup
        worst_slack = max(worst_slack, (maup - a_rand) / scale)
    assert worst_eq <= 1e-9, f"matched-duration equality error {worst_eq}"
    assert worst_slack <= 1e-12, f"inequality slack {worst_slack}"
    print(f"criterion 09 PASS  eq err {worst_eq:.2e} "
          f"slack {worst_slack:.2e} over 1000 trials")


def test_criterion_10_validate_determinism(tmp_path):
    """The validate suite at 1 and at 8 threads produces byte-identical
    artifacts (and passes both times)."""
    d1 = tmp_path / "t1"
    d8 = tmp_path / "t8"
    assert run_validate(str(d1), threads=1) is True
    assert run_validate(str(d8), threads=8) is True
    names = ["validate.json", "front_layered.json", "front_layered.svg",
             "sweep_layered.csv"]
    for name in names:
        b1 = (d1 / name).read_bytes()
        b8 = (d8 / name).read_bytes()
        assert b1 == b8, f"{name} differs between thread counts"
    report = json.loads((d1 / "validate.json").read_text())
    n_checks = len(report["checks"])
    print(f"criterion 10 PASS  {n_checks} checks, 4 artifacts "
          f"byte-identical at 1 vs 8 threads")
