"""Built-in invariant suite with deterministic artifacts.

Runs the fast cross-checks of every layer on the built-in presets at a
small rig and writes a machine-readable report plus sample artifacts
(front JSON, SVG, norm CSV).  Artifacts are byte-identical for any
thread count: all parallel maps preserve order and the report contains
no timing, host, or thread information.
"""

from __future__ import annotations

import math
import os
from typing import List, Optional

import numpy as np

from .config import Rig, default_threads
from .distances import distance
from .fields import preset_field
from .fronts import build_front, front_to_json_dict, polar_dual
from .geodesics import (action_dominates_length, adjust, detect_period,
                        energy_matched_durations, find_crossings,
                        min_closed_geodesic)
from .hamiltonian import hbar_dual, infmax_upper
from .lattice import LatticeWindow, build_graph
from .norms import direction_sweep, fekete_refine
from .serialize import write_json, write_text
from .svg import render_front_svg

__all__ = ["run_validate"]

_RIG = Rig(N=16, S=3, M=4)

_FIELDS = [
    ("constant", {"v": 2.0}),
    ("layered", {"A": 2.0, "B": 1.0}),
    ("channel", {"base": 1.0, "boost": 4.0, "width": 0.2}),
    ("bumps", {"base": 2.0, "amp": 1.0, "sigma": 0.15}),
]


def _involution_error(front) -> float:
    """Dual-of-dual reproduces the hull shifted by one index (vertex i of
    the second dual is the pole of hull edge i)."""
    dd = polar_dual(front.s_polygon)
    return float(np.max(np.abs(dd - np.roll(front.d_hull, -1, axis=0))))


def _support_consistency(front, table) -> float:
    """Worst relative deficiency of the dual polygon's support against
    the swept norm values (positive = dual undershoots the norm)."""
    worst = 0.0
    for e in table.estimates:
        sup = float(np.max(front.s_polygon @ np.array(e.q, dtype=np.float64)))
        if sup > e.best * (1.0 + 1e-9):
            raise AssertionError(
                f"dual support {sup} exceeds norm {e.best} at {e.q}")
        worst = max(worst, (e.best - sup) / e.best)
    return worst


def run_validate(out_dir: str, threads: Optional[int] = None) -> bool:
    """Run the invariant suite; write artifacts; return overall pass."""
    nthreads = default_threads() if threads is None else threads
    checks: List[dict] = []
    ok_all = True

    def check(name: str, ok: bool, detail: str = "") -> None:
        nonlocal ok_all
        checks.append({"name": name, "ok": bool(ok), "detail": detail})
        ok_all = ok_all and bool(ok)

    fields = {name: preset_field(name, **params) for name, params in _FIELDS}

    # ---- lattice invariants per preset
    win = LatticeWindow(lo=(-1, -1), hi=(2, 2), N=_RIG.N)
    for name, f in fields.items():
        graph = build_graph(f, win, _RIG)
        try:
            graph.check_invariants()
            check(f"lattice_invariants_{name}", True)
        except AssertionError as exc:   # pragma: no cover
            check(f"lattice_invariants_{name}", False, str(exc))

    # ---- distance layer: symmetry and translation covariance
    lay = fields["layered"]
    d_xy = distance(lay, (0.0, 0.0), (1.0, 0.5), rig=_RIG)
    d_yx = distance(lay, (1.0, 0.5), (0.0, 0.0), rig=_RIG)
    check("distance_symmetry", abs(d_xy - d_yx) <= 1e-12 * d_xy,
          f"{d_xy} vs {d_yx}")
    d_sh = distance(lay, (2.0, 3.0), (3.0, 3.5), rig=_RIG)
    check("distance_translation", d_sh == d_xy, f"{d_xy} vs shifted {d_sh}")

    # ---- norms: constant oracle, evenness, subadditive refinement
    const = fields["constant"]
    est = fekete_refine(const, (1, 0), kmax=3, rig=_RIG)
    check("norm_constant_axis", abs(est.best - 0.5) <= 0.5 * 1e-6,
          f"{est.best}")
    s_seq = [s for _, s in est.fekete]
    check("fekete_monotone",
          all(b <= a + 1e-9 * (1 + s_seq[0])
              for a, b in zip(s_seq, s_seq[1:])),
          f"{s_seq}")

    # ---- fronts per preset: symmetry, involution, support consistency
    for name, f in fields.items():
        table = direction_sweep(f, Q=4, lam=2, rig=_RIG, threads=nthreads)
        neg = {(-q1, -q2): v.value for (q1, q2), v in
               ((e.q, e) for e in table.estimates)}
        even = all(neg[e.q] == e.value for e in table.estimates)
        check(f"sweep_evenness_{name}", even)
        front = build_front(table)
        hull = front.d_hull
        sym = max(float(np.min(np.hypot(hull[:, 0] + hull[i, 0],
                                        hull[:, 1] + hull[i, 1])))
                  for i in range(hull.shape[0]))
        check(f"front_central_symmetry_{name}", sym <= 1e-12, f"{sym}")
        inv = _involution_error(front)
        check(f"front_involution_{name}", inv <= 1e-9, f"{inv}")
        try:
            deficiency = _support_consistency(front, table)
            check(f"front_support_{name}", deficiency <= 0.02,
                  f"worst deficiency {deficiency}")
        except AssertionError as exc:
            check(f"front_support_{name}", False, str(exc))
        if name == "layered":
            layered_front, layered_table = front, table

    # ---- effective Hamiltonian: exactness and the sandwich
    hb = hbar_dual(layered_front, (1.0, 0.0))
    check("hbar_homogeneity", hbar_dual(layered_front, (3.0, 0.0)) == 3 * hb)
    check("hbar_evenness",
          hbar_dual(layered_front, (-1.0, 0.0)) == hb)
    im = infmax_upper(lay, (1.0, 0.0), n_grid=32, iters=150)
    check("infmax_start_exact", im.trace[0] == 3.0, f"{im.trace[0]}")
    check("hbar_sandwich", im.value >= hb * (1 - 0.03) and im.value <= 3.0,
          f"infmax {im.value} vs dual {hb}")

    # ---- geodesics: splice conservation and Maupertuis
    bm = fields["bumps"]
    _, p1 = distance(bm, (0.0, 0.0), (1.5, 1.0), rig=_RIG, return_path=True)
    _, p2 = distance(bm, (1.5, 1.0), (0.0, 0.0), rig=_RIG, return_path=True)
    p2r = p2   # reversed endpoints; crossings at both ends guaranteed
    cr = find_crossings(p1, p2r)
    if len(cr) >= 2:
        n1, n2 = adjust(p1, p2r, cr[0], cr[-1])
        before = math.fsum(list(p1.weights) + list(p2r.weights))
        after = math.fsum(list(n1.weights) + list(n2.weights))
        check("splice_conservation", before == after, f"{before} vs {after}")
    else:   # pragma: no cover
        check("splice_conservation", False, "no crossing pair found")
    Vcos = preset_field("layered", A=0.0, B=1.0)
    tau = energy_matched_durations(p1, Vcos, 2.0)
    act, mau = action_dominates_length(tau, p1, Vcos, 2.0)
    check("maupertuis_equality", abs(act - mau) <= 1e-9 * mau,
          f"{act} vs {mau}")
    act2, mau2 = action_dominates_length(tau * 0.5, p1, Vcos, 2.0)
    check("maupertuis_slack", act2 > mau2, f"{act2} vs {mau2}")
    v_pos, _, cyc = min_closed_geodesic(lay, (0, 1), rig=_RIG, stride=4,
                                        threads=nthreads)
    v_neg, _, _ = min_closed_geodesic(lay, (0, -1), rig=_RIG, stride=4,
                                      threads=nthreads)
    check("closed_geodesic_reversal", abs(v_pos - v_neg) <= 1e-12 * v_pos,
          f"{v_pos} vs {v_neg}")
    check("closed_geodesic_fast_lane", abs(v_pos - 1.0 / 3.0) <= 0.02 / 3.0,
          f"{v_pos}")
    per = detect_period(cyc)
    check("cycle_period", per is not None and per[0] == (0, 1),
          f"{per}")

    # ---- artifacts
    report = {
        "rig": {"N": _RIG.N, "S": _RIG.S, "M": _RIG.M},
        "checks": checks,
        "passed": ok_all,
    }
    write_json(os.path.join(out_dir, "validate.json"), report)
    write_json(os.path.join(out_dir, "front_layered.json"),
               front_to_json_dict(layered_front))
    write_text(os.path.join(out_dir, "front_layered.svg"),
               render_front_svg(layered_front))
    write_text(os.path.join(out_dir, "sweep_layered.csv"),
               layered_table.to_csv())
    return ok_all
