"""Reachable-set geometry of a periodic metric.

A norm table turns into the convex front model:

* d_hull — convex hull of the scaled ray points P_q = q / norm(q); this
  polygon approximates the unit ball of the asymptotic norm (the set
  reached per unit time by unit-cost travel);
* s_polygon — its polar dual {p : p . x <= 1 on d_hull}, the polygonal
  approximation of the unit level set of the dual (Hamiltonian) side.

Polarity swaps vertices and facets: every vertex of d_hull carries an
exact integer direction q, and the dual edge it induces has outward
normal exactly q.  Corners of d_hull (vertices with large turning angle)
are the interesting objects: a corner that persists under direction
refinement witnesses a flat facet of the dual with exact rational slope,
while corners that keep shrinking as Q doubles are resolution artifacts
of the finite direction fan.  No finite sweep can distinguish a
genuinely flat facet of irrational slope from an unresolved fan of
rational ones; persistence stratified by denominator is the operative
proxy, and reports say so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import CORNER_ANGLE_DEG
from .errors import DegenerateTable, HistoryMismatch, OriginNotInterior
from .norms import NormTable

__all__ = [
    "Corner", "Facet", "FrontModel", "build_front", "polar_dual",
    "detect_corners", "facet_report",
    "front_to_json_dict", "front_from_json_dict",
]

_EPS_REL = 1e-12


@dataclass(frozen=True)
class Corner:
    vertex: Tuple[float, float]
    q: Tuple[int, int]
    angle_deg: float


@dataclass(frozen=True)
class Facet:
    """One edge of s_polygon; its outward normal is exact integer data."""

    endpoints: Tuple[Tuple[float, float], Tuple[float, float]]
    normal: Tuple[int, int]
    denominator: int


@dataclass
class FrontModel:
    d_points: List[tuple]          # (q, P_q) input set (empty after JSON reload)
    d_hull: np.ndarray             # (H, 2) CCW vertices
    hull_dirs: np.ndarray          # (H, 2) integer direction per vertex
    s_polygon: np.ndarray          # (H, 2) CCW polar-dual vertices
    corners: List[Corner]
    facets: List[Facet]
    field_fp: str
    rig_key: tuple
    Q: int
    lam: int

    def support(self, p) -> float:
        """max over d_hull vertices of p . x."""
        return float(np.max(self.d_hull @ np.asarray(p, dtype=np.float64)))


# ----------------------------------------------------------------------
# hull
# ----------------------------------------------------------------------

def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_with_labels(points: np.ndarray, labels: Sequence) -> Tuple[np.ndarray, list]:
    """Monotone-chain convex hull, CCW, strictly convex vertices only."""
    scale = float(np.max(np.abs(points)))
    if not (scale > 0.0 and np.isfinite(scale)):
        raise DegenerateTable("all points at the origin or non-finite")
    eps = _EPS_REL * scale * scale
    order = np.lexsort((points[:, 1], points[:, 0]))

    def build(idx_iter):
        out: List[int] = []
        for idx in idx_iter:
            p = points[idx]
            while len(out) >= 2 and _cross(points[out[-2]], points[out[-1]], p) <= eps:
                out.pop()
            out.append(idx)
        return out

    lower = build(order)
    upper = build(order[::-1])
    idx = lower[:-1] + upper[:-1]
    if len(idx) < 3:
        raise DegenerateTable(f"hull collapses to {len(idx)} vertices")
    hull = points[idx]
    labs = [labels[i] for i in idx]
    return hull, labs


def polar_dual(vertices: np.ndarray) -> np.ndarray:
    """Polar dual of a CCW convex polygon strictly containing the origin.

    Vertex i of the dual is the intersection of the supporting lines
    {x . v = 1} of edge i = (v_i, v_{i+1}); the dual is again CCW.
    """
    v = np.asarray(vertices, dtype=np.float64)
    n = v.shape[0]
    if n < 3:
        raise DegenerateTable(f"polygon needs >= 3 vertices, got {n}")
    scale = float(np.max(np.abs(v)))
    eps = _EPS_REL * scale * scale
    out = np.empty_like(v)
    for i in range(n):
        a = v[i]
        b = v[(i + 1) % n]
        det = a[0] * b[1] - a[1] * b[0]   # cross(b - a, -a) = a x b
        if det <= eps:
            raise OriginNotInterior(f"origin not strictly inside near edge {i}")
        out[i, 0] = (b[1] - a[1]) / det
        out[i, 1] = (a[0] - b[0]) / det
    return out


def _turning_angles_deg(hull: np.ndarray) -> np.ndarray:
    n = hull.shape[0]
    ang = np.empty(n)
    for i in range(n):
        e_in = hull[i] - hull[i - 1]
        e_out = hull[(i + 1) % n] - hull[i]
        cr = e_in[0] * e_out[1] - e_in[1] * e_out[0]
        dt = e_in[0] * e_out[0] + e_in[1] * e_out[1]
        ang[i] = math.degrees(math.atan2(cr, dt))
    return ang


def build_front(table: NormTable,
                corner_tol_deg: float = CORNER_ANGLE_DEG) -> FrontModel:
    """Front model from a norm table (uses each direction's best estimate)."""
    pts = []
    labels = []
    for e in table.estimates:
        if not (e.best > 0.0 and math.isfinite(e.best)):
            raise DegenerateTable(f"non-positive estimate for {e.q}")
        pts.append((e.q[0] / e.best, e.q[1] / e.best))
        labels.append(e.q)
    points = np.array(pts, dtype=np.float64)
    hull, labs = _hull_with_labels(points, labels)
    dual = polar_dual(hull)
    angles = _turning_angles_deg(hull)
    n = hull.shape[0]
    corners = [Corner((float(hull[i, 0]), float(hull[i, 1])), labs[i], float(angles[i]))
               for i in range(n) if angles[i] >= corner_tol_deg]
    facets = []
    for i in range(n):
        q = labs[i]
        facets.append(Facet(
            endpoints=((float(dual[i - 1, 0]), float(dual[i - 1, 1])),
                       (float(dual[i, 0]), float(dual[i, 1]))),
            normal=q,
            denominator=max(abs(q[0]), abs(q[1]))))
    hull_dirs = np.array(labs, dtype=np.int64)
    return FrontModel(
        d_points=[(e.q, (points[k, 0], points[k, 1]))
                  for k, e in enumerate(table.estimates)],
        d_hull=hull, hull_dirs=hull_dirs, s_polygon=dual,
        corners=corners, facets=facets,
        field_fp=table.field_fp, rig_key=table.rig_key,
        Q=table.Q, lam=table.lam)


def detect_corners(front: FrontModel, angle_tol_deg: float) -> List[Corner]:
    """Hull vertices turning by at least ``angle_tol_deg`` degrees."""
    angles = _turning_angles_deg(front.d_hull)
    return [Corner((float(front.d_hull[i, 0]), float(front.d_hull[i, 1])),
                   (int(front.hull_dirs[i, 0]), int(front.hull_dirs[i, 1])),
                   float(angles[i]))
            for i in range(front.d_hull.shape[0]) if angles[i] >= angle_tol_deg]


# ----------------------------------------------------------------------
# persistence report
# ----------------------------------------------------------------------

_REPORT_NOTE = (
    "Finite direction fans cannot distinguish a flat dual facet of "
    "irrational slope from an unresolved fan of rational facets; "
    "classification below is a persistence proxy stratified by the "
    "denominator of each corner direction."
)


def _canonical_dir(q) -> Tuple[int, int]:
    """Half-plane representative of +-q (turning angles are symmetric)."""
    q1, q2 = int(q[0]), int(q[1])
    if q1 < 0 or (q1 == 0 and q2 < 0):
        return (-q1, -q2)
    return (q1, q2)


def _angle_of_direction(front: FrontModel, q: Tuple[int, int]) -> float:
    angles = _turning_angles_deg(front.d_hull)
    for i in range(front.hull_dirs.shape[0]):
        if _canonical_dir(front.hull_dirs[i]) == q:
            return float(angles[i])
    return 0.0   # direction absorbed into a flat stretch


def _facet_slope(q: Tuple[int, int]):
    """Exact rational slope of the dual facet normal to q (None = vertical)."""
    if q[1] == 0:
        return None
    return Fraction(int(q[0]), -int(q[1]))


def facet_report(front: FrontModel,
                 sweep_history: Sequence[FrontModel],
                 corner_tol_deg: float = CORNER_ANGLE_DEG,
                 persist_band: float = 0.2,
                 artifact_ratio: float = 1.8) -> dict:
    """Classify corner directions across a Q-refinement history.

    ``sweep_history`` holds fronts of the same field and rig over
    increasing direction bounds Q; ``front`` is the current model and is
    folded into the history if its Q is not already present.  A
    direction is *persistent* when its turning angle stays within
    ``persist_band`` (relative) across the whole history, and an
    *artifact* when the angle shrinks by at least ``artifact_ratio`` per
    Q doubling; anything else is ambiguous.

    The default ratio 1.8 is calibrated to the ideal disk: a polygon
    inscribed at all primitive directions of bound Q has axis corners
    turning by atan(1/Q), and atan(1/4)/atan(1/8) = 1.97, so demanding a
    full 2x shrink would misclassify even the exact round front.
    """
    fronts = list(sweep_history)
    if all(f.Q != front.Q for f in fronts):
        fronts.append(front)
    fronts.sort(key=lambda f: f.Q)
    if len(fronts) < 2:
        raise HistoryMismatch("need at least two fronts to compare")
    fp = fronts[0].field_fp
    rk = fronts[0].rig_key
    for f in fronts[1:]:
        if f.field_fp != fp or f.rig_key != rk:
            raise HistoryMismatch("fronts computed from different fields or rigs")
    qs = [f.Q for f in fronts]
    if any(b <= a for a, b in zip(qs, qs[1:])):
        raise HistoryMismatch(f"front history must have increasing Q, got {qs}")
    if front.field_fp != fp or front.rig_key != rk:
        raise HistoryMismatch("front does not match the sweep history")

    candidates = []
    seen = set()
    for f in fronts:
        for c in detect_corners(f, corner_tol_deg):
            cq = _canonical_dir(c.q)
            if cq not in seen:
                seen.add(cq)
                candidates.append(cq)
    candidates.sort(key=lambda q: (max(abs(q[0]), abs(q[1])), math.atan2(q[1], q[0])))

    directions = []
    for q in candidates:
        angles = [_angle_of_direction(f, q) for f in fronts]
        amax, amin = max(angles), min(angles)
        if amin > 0.0 and amax <= amin * (1.0 + persist_band):
            label = "persistent"
        else:
            shrinking = all(
                a1 == 0.0 or (a0 > 0.0 and a0 / a1 >= artifact_ratio **
                              math.log2(fronts[k + 1].Q / fronts[k].Q))
                for k, (a0, a1) in enumerate(zip(angles, angles[1:])))
            label = "artifact" if shrinking else "ambiguous"
        slope = _facet_slope(q)
        directions.append({
            "q": list(q),
            "denominator": max(abs(q[0]), abs(q[1])),
            "angles_by_Q": {str(f.Q): a for f, a in zip(fronts, angles)},
            "classification": label,
            "facet_slope": "vertical" if slope is None
                           else [slope.numerator, slope.denominator],
        })
    return {
        "note": _REPORT_NOTE,
        "symmetry": "directions are half-plane representatives; +q and -q "
                    "share turning angles by central symmetry",
        "Q_history": qs,
        "corner_tol_deg": corner_tol_deg,
        "persist_band": persist_band,
        "artifact_ratio": artifact_ratio,
        "directions": directions,
    }


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------

def front_to_json_dict(front: FrontModel) -> dict:
    return {
        "d_hull": [[float(x), float(y)] for x, y in front.d_hull],
        "s_polygon": [[float(x), float(y)] for x, y in front.s_polygon],
        "corners": [{"q": list(c.q), "angle_deg": c.angle_deg}
                    for c in front.corners],
        "facets": [{"normal": list(f.normal),
                    "endpoints": [list(f.endpoints[0]), list(f.endpoints[1])]}
                   for f in front.facets],
    }


def front_from_json_dict(data: dict) -> FrontModel:
    d_hull = np.array(data["d_hull"], dtype=np.float64)
    s_polygon = np.array(data["s_polygon"], dtype=np.float64)
    facets = [Facet(endpoints=(tuple(f["endpoints"][0]), tuple(f["endpoints"][1])),
                    normal=(int(f["normal"][0]), int(f["normal"][1])),
                    denominator=max(abs(int(f["normal"][0])), abs(int(f["normal"][1]))))
              for f in data["facets"]]
    hull_dirs = np.array([f.normal for f in facets], dtype=np.int64) \
        if facets else np.zeros((0, 2), dtype=np.int64)
    by_dir = {(int(hull_dirs[i, 0]), int(hull_dirs[i, 1])): i
              for i in range(hull_dirs.shape[0])}
    corners = []
    for c in data["corners"]:
        q = (int(c["q"][0]), int(c["q"][1]))
        i = by_dir[q]
        corners.append(Corner(vertex=(float(d_hull[i, 0]), float(d_hull[i, 1])),
                              q=q, angle_deg=float(c["angle_deg"])))
    return FrontModel(d_points=[], d_hull=d_hull, hull_dirs=hull_dirs,
                      s_polygon=s_polygon, corners=corners, facets=facets,
                      field_fp="", rig_key=(), Q=0, lam=0)
