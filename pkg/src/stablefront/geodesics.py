"""Operations on distance-realizing lattice paths.

Paths here are discrete stand-ins for minimizing curves: crossing two
of them at shared nodes and splicing (the gluing surgery) produces new
paths whose combined length is conserved edge-for-edge, so minimality
survives surgery — the computational heart of the crossing-join
argument.  The mechanical side reuses the same paths: reweighting a
path by the level-c metric gives the energy-c action of its
time-optimal parametrization, and per-segment AM-GM gives the
length-action inequality with equality exactly at the energy-matched
durations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_RIG, Rig, default_threads
from .distances import PathRecord, distance, make_path
from .errors import (EnergyBelowPotential, InvalidSplice, ParamMismatch,
                     ValidationError, ZeroDirection)
from .fields import ScalarField2, mechanical_to_metric
from .lattice import _weight_tables, Stencil
from ._util import parallel_map

__all__ = [
    "path_length", "reweight_path", "action_of_path",
    "energy_matched_durations", "action_with_durations",
    "action_dominates_length", "CrossingPair", "find_crossings",
    "adjust", "detect_period", "min_closed_geodesic",
]


def path_length(path: PathRecord) -> float:
    """Total metric length (last cumulative sum)."""
    return path.length


def reweight_path(path: PathRecord, field: ScalarField2) -> PathRecord:
    """Same node sequence, edge weights re-quadratured against ``field``.

    Weights come from the same residue tables the lattice graph uses, so
    a reweighted path is bit-identical to the one a graph built on
    ``field`` would produce along these nodes.
    """
    N, S, M = path.rig_key
    rig = Rig(N=N, S=S, M=M)
    stencil = Stencil(S)
    W, _ = _weight_tables(field, rig, stencil)
    nodes = path.nodes
    n_seg = nodes.shape[0] - 1
    weights = np.empty(n_seg)
    for e in range(n_seg):
        k = (int(nodes[e + 1, 0] - nodes[e, 0]),
             int(nodes[e + 1, 1] - nodes[e, 1]))
        o = stencil.index_of(k)
        weights[e] = W[o, nodes[e, 0] % N, nodes[e, 1] % N]
    return make_path(nodes, weights, h=path.h, field_fp=field.fingerprint,
                     rig_key=path.rig_key)


def action_of_path(path: PathRecord, V: ScalarField2, c: float) -> float:
    """Energy-c action of the path under its time-optimal parametrization.

    Running the path at the constant-energy speed sqrt(2(c - V)) makes
    the action equal the metric length under a_c = 1/sqrt(2(c - V));
    this *is* that length, computed with the standard edge quadrature.
    """
    a_c = mechanical_to_metric(V, c)   # raises EnergyBelowPotential
    return reweight_path(path, a_c).length


def _segment_data(path: PathRecord, V: ScalarField2, c: float):
    """Euclidean length and mid-segment kinetic term c - V per edge."""
    nodes = path.nodes
    h = path.h
    d = np.diff(nodes, axis=0).astype(np.float64)
    lengths = np.hypot(d[:, 0], d[:, 1]) * h
    mid1 = (nodes[:-1, 0] + 0.5 * d[:, 0]) * h
    mid2 = (nodes[:-1, 1] + 0.5 * d[:, 1]) * h
    vmid = V.sample_many(np.asarray(mid1), np.asarray(mid2))
    kin = c - vmid
    if not np.all(kin > 0.0):
        raise EnergyBelowPotential(
            f"c = {c} does not exceed the potential at some segment midpoint "
            f"(max V there = {float(np.max(vmid))})")
    return lengths, kin


def energy_matched_durations(path: PathRecord, V: ScalarField2,
                             c: float) -> np.ndarray:
    """Per-segment durations of the constant-energy parametrization:
    tau_e = L_e / sqrt(2 (c - V_mid))."""
    lengths, kin = _segment_data(path, V, c)
    return lengths / np.sqrt(2.0 * kin)


def action_with_durations(durations, path: PathRecord, V: ScalarField2,
                          c: float) -> float:
    """Energy-c action with piecewise-constant speed L_e / tau_e."""
    tau = np.asarray(durations, dtype=np.float64)
    lengths, kin = _segment_data(path, V, c)
    if tau.shape != lengths.shape:
        raise ParamMismatch(
            f"need one duration per segment: {tau.shape[0] if tau.ndim else 0}"
            f" given, {lengths.shape[0]} segments")
    if not np.all(tau > 0.0):
        raise ValidationError("durations must be positive")
    return float(np.sum(0.5 * lengths * lengths / tau + kin * tau))


def action_dominates_length(durations, path: PathRecord, V: ScalarField2,
                            c: float) -> Tuple[float, float]:
    """(action, Maupertuis length) for the given time parametrization.

    Per segment, 0.5 L^2/tau + (c - V_mid) tau >= L sqrt(2 (c - V_mid))
    by AM-GM, with equality at the energy-matched tau; the sum therefore
    dominates the mid-sampled Maupertuis length for every duration
    choice.  Checked here with a 1e-12 * scale floating slack.
    """
    action = action_with_durations(durations, path, V, c)
    lengths, kin = _segment_data(path, V, c)
    maupertuis = float(np.sum(lengths * np.sqrt(2.0 * kin)))
    if not action >= maupertuis - 1e-12 * max(1.0, abs(maupertuis)):
        raise ValidationError(
            f"action {action} fell below the Maupertuis bound {maupertuis}")
    return action, maupertuis


# ----------------------------------------------------------------------
# crossings and splicing
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CrossingPair:
    i: int
    j: int
    node: Tuple[int, int]


def find_crossings(p1: PathRecord, p2: PathRecord) -> List[CrossingPair]:
    """All exactly-shared lifted nodes, ordered by index in ``p1``."""
    if p1.field_fp != p2.field_fp or p1.rig_key != p2.rig_key:
        raise ParamMismatch("paths come from different fields or rigs")
    where = {}
    for j in range(p2.nodes.shape[0]):
        key = (int(p2.nodes[j, 0]), int(p2.nodes[j, 1]))
        if key not in where:       # simple paths; keep first occurrence
            where[key] = j
    out = []
    for i in range(p1.nodes.shape[0]):
        key = (int(p1.nodes[i, 0]), int(p1.nodes[i, 1]))
        j = where.get(key)
        if j is not None:
            out.append(CrossingPair(i=i, j=j, node=key))
    return out


def _check_crossing(p1: PathRecord, p2: PathRecord, c: CrossingPair) -> None:
    ok = (0 <= c.i < p1.nodes.shape[0] and 0 <= c.j < p2.nodes.shape[0]
          and tuple(int(v) for v in p1.nodes[c.i]) == c.node
          and tuple(int(v) for v in p2.nodes[c.j]) == c.node)
    if not ok:
        raise InvalidSplice(f"not a crossing of these paths: {c}")


def adjust(p1: PathRecord, p2: PathRecord, c1: CrossingPair,
           c2: CrossingPair) -> Tuple[PathRecord, PathRecord]:
    """Exchange the sub-paths between two crossings.

    new1 follows p1 to the first crossing, rides p2 between the
    crossings (forward or reversed depending on their order along p2),
    and finishes on p1; new2 is the complementary exchange.  Every edge
    weight ends up in exactly one output, so total length is conserved
    as a floating-point multiset identity.
    """
    if p1.field_fp != p2.field_fp or p1.rig_key != p2.rig_key:
        raise ParamMismatch("paths come from different fields or rigs")
    _check_crossing(p1, p2, c1)
    _check_crossing(p1, p2, c2)
    if c1.i == c2.i or c1.j == c2.j:
        raise InvalidSplice("crossings coincide")
    if c1.i > c2.i:
        raise InvalidSplice("crossings must be ordered along the first path")
    n1, w1 = p1.nodes, p1.weights
    n2, w2 = p2.nodes, p2.weights
    if c1.j < c2.j:
        # both paths traverse the exchanged window in the same direction
        new1_n = np.concatenate([n1[:c1.i], n2[c1.j:c2.j], n1[c2.i:]])
        new1_w = np.concatenate([w1[:c1.i], w2[c1.j:c2.j], w1[c2.i:]])
        new2_n = np.concatenate([n2[:c1.j], n1[c1.i:c2.i], n2[c2.j:]])
        new2_w = np.concatenate([w2[:c1.j], w1[c1.i:c2.i], w2[c2.j:]])
    else:
        # second path runs the window backwards: reverse its piece
        seg_n = n2[c2.j:c1.j + 1][::-1]
        seg_w = w2[c2.j:c1.j][::-1]
        new1_n = np.concatenate([n1[:c1.i], seg_n[:-1], n1[c2.i:]])
        new1_w = np.concatenate([w1[:c1.i], seg_w, w1[c2.i:]])
        rev_n = n1[c1.i:c2.i + 1][::-1]
        rev_w = w1[c1.i:c2.i][::-1]
        new2_n = np.concatenate([n2[:c2.j], rev_n[:-1], n2[c1.j:]])
        new2_w = np.concatenate([w2[:c2.j], rev_w, w2[c1.j:]])
    new1 = make_path(new1_n, new1_w, h=p1.h, field_fp=p1.field_fp,
                     rig_key=p1.rig_key)
    new2 = make_path(new2_n, new2_w, h=p2.h, field_fp=p2.field_fp,
                     rig_key=p2.rig_key)
    return new1, new2


def detect_period(path: PathRecord) -> Optional[Tuple[Tuple[int, int], int, int]]:
    """Earliest pair of path indices landing on the same torus point.

    Returns (q, i, j) with q = (nodes[j] - nodes[i]) / N, an exact
    integer displacement in cells, or None if no torus point repeats.
    """
    N = path.rig_key[0]
    seen = {}
    for idx in range(path.nodes.shape[0]):
        key = (int(path.nodes[idx, 0]) % N, int(path.nodes[idx, 1]) % N)
        if key in seen:
            i = seen[key]
            q = (int(path.nodes[idx, 0] - path.nodes[i, 0]) // N,
                 int(path.nodes[idx, 1] - path.nodes[i, 1]) // N)
            return q, i, idx
        seen[key] = idx
    return None


def min_closed_geodesic(field: ScalarField2, q, rig: Rig = DEFAULT_RIG,
                        stride: int = 4,
                        threads: Optional[int] = None
                        ) -> Tuple[float, Tuple[int, int], PathRecord]:
    """Shortest one-period closed loop with homology class q.

    Scans base nodes x on a sub-lattice of one unit cell (every
    ``stride``-th node per axis) and minimizes the distance from x to
    its translate x + q; the realizing path is the loop, closed on the
    torus.  Ties break to the lexicographically smallest base, keeping
    the result thread-count independent.
    """
    q1, q2 = int(q[0]), int(q[1])
    if q1 == 0 and q2 == 0:
        raise ZeroDirection("homology class must be nonzero")
    if not (1 <= stride <= rig.N):
        raise ValidationError(f"stride must be in [1, N], got {stride}")
    nthreads = default_threads() if threads is None else threads
    N = rig.N
    bases = [(i, j) for i in range(0, N, stride) for j in range(0, N, stride)]

    def probe(base):
        i, j = base
        val = distance(field, (i / N, j / N), ((i + q1 * N) / N,
                                               (j + q2 * N) / N), rig=rig)
        return val, base

    results = parallel_map(probe, bases, nthreads)
    best_val, best_base = min(results, key=lambda r: (r[0], r[1]))
    _, cycle = distance(field, (best_base[0] / N, best_base[1] / N),
                        ((best_base[0] + q1 * N) / N,
                         (best_base[1] + q2 * N) / N),
                        rig=rig, return_path=True)
    return best_val, best_base, cycle
