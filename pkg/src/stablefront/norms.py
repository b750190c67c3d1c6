"""Asymptotic norm of a periodic metric, estimated along integer rays.

For an integer direction q the periodic metric has a well-defined
asymptotic cost per unit displacement,

    norm(q) = lim_n d(0, n q) / n = inf_n d(0, n q) / n,

the infimum form following from subadditivity of n -> d(0, n q).  All
estimates here are upper bounds: graph distances are metric lengths of
actual polygonal paths (up to quadrature), while no certified lower
bound on the continuum distance is attempted.  A scale-doubling
refinement (s_k = d(0, 2^k q) / 2^k) exploits the subadditive structure:
the sequence must be non-increasing up to quadrature noise, and the best
scale seen is the sharpest estimate.  The displacement-linearity of
d(0, n q) - n * best measures how fast the ray cost settles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import (Rig, DEFAULT_RIG, DEFAULT_KMAX, DEFAULT_LAMBDA, DEFAULT_Q)
from .distances import distance
from .errors import NonPrimitiveDirection, SubadditivityViolation
from .fields import ScalarField2
from ._util import parallel_map

__all__ = [
    "NormEstimate", "NormTable", "BuragoReport",
    "norm_estimate", "fekete_refine", "burago_gap",
    "direction_sweep", "primitive_directions",
]


def _require_primitive(q) -> Tuple[int, int]:
    q1, q2 = int(q[0]), int(q[1])
    if (q1, q2) == (0, 0) or math.gcd(abs(q1), abs(q2)) != 1:
        raise NonPrimitiveDirection(f"direction {q} must be primitive (gcd 1, nonzero)")
    return q1, q2


@dataclass(frozen=True)
class NormEstimate:
    """Ray-cost estimate for one integer direction.

    value is d(0, lam * q) / lam; fekete lists (k, s_k) scale-doubling
    refinements when computed; best is the minimum over everything seen.
    """

    q: Tuple[int, int]
    lam: int
    value: float
    best: float
    fekete: Tuple[Tuple[int, float], ...]
    field_fp: str
    rig_key: tuple

    def negated(self) -> "NormEstimate":
        """Same costs for -q (graph symmetry makes this exact)."""
        return NormEstimate((-self.q[0], -self.q[1]), self.lam, self.value,
                            self.best, self.fekete, self.field_fp, self.rig_key)


@dataclass(frozen=True)
class BuragoReport:
    """Linear-displacement diagnostics of gap_n = d(0, n q) - n * best."""

    q: Tuple[int, int]
    n_list: Tuple[int, ...]
    gaps: Tuple[float, ...]
    max_gap: float
    slope: float
    best: float


@dataclass
class NormTable:
    """Angle-sorted ray costs for all primitive directions up to Chebyshev Q."""

    estimates: List[NormEstimate]
    Q: int
    lam: int
    field_fp: str
    rig_key: tuple

    def lookup(self, q) -> NormEstimate:
        q = (int(q[0]), int(q[1]))
        for e in self.estimates:
            if e.q == q:
                return e
        raise KeyError(f"direction {q} not in table")

    def to_csv(self) -> str:
        N, S, M = self.rig_key
        lines = ["q1,q2,lambda,value,best,N,S,M"]
        for e in self.estimates:
            lines.append(f"{e.q[0]},{e.q[1]},{e.lam},{e.value!r},{e.best!r},{N},{S},{M}")
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# estimates
# ----------------------------------------------------------------------

def norm_estimate(field: ScalarField2, q, lam: int = DEFAULT_LAMBDA,
                  rig: Rig = DEFAULT_RIG) -> NormEstimate:
    """Upper estimate d(0, lam q) / lam of the ray cost of primitive q."""
    q1, q2 = _require_primitive(q)
    if lam < 1:
        raise ValueError(f"lam must be >= 1, got {lam}")
    d = distance(field, (0.0, 0.0), (float(lam * q1), float(lam * q2)), rig)
    value = d / lam
    return NormEstimate((q1, q2), lam, value, value, (), field.fingerprint, rig.key())


def fekete_refine(field: ScalarField2, q, kmax: int = DEFAULT_KMAX,
                  rig: Rig = DEFAULT_RIG) -> NormEstimate:
    """Scale-doubling estimates s_k = d(0, 2^k q) / 2^k, k = 0..kmax.

    Subadditivity makes the true sequence non-increasing; the computed
    one must satisfy s_{k+1} <= s_k + eps_quad with
    eps_quad = 1e-9 * (1 + s_0), else the engine is broken and
    :class:`SubadditivityViolation` is raised.
    """
    q1, q2 = _require_primitive(q)
    if kmax < 0:
        raise ValueError(f"kmax must be >= 0, got {kmax}")
    seq = []
    for k in range(kmax + 1):
        n = 1 << k
        d = distance(field, (0.0, 0.0), (float(n * q1), float(n * q2)), rig)
        seq.append((k, d / n))
    eps_quad = 1e-9 * (1.0 + seq[0][1])
    for (k0, s0), (k1, s1) in zip(seq, seq[1:]):
        if s1 > s0 + eps_quad:
            raise SubadditivityViolation(
                f"s_{k1} = {s1} exceeds s_{k0} = {s0} + {eps_quad} for q={q}")
    best = min(s for _, s in seq)
    lam = 1 << kmax
    return NormEstimate((q1, q2), lam, seq[-1][1], best, tuple(seq),
                        field.fingerprint, rig.key())


def burago_gap(field: ScalarField2, q, n_list: Sequence[int],
               rig: Rig = DEFAULT_RIG, best: Optional[float] = None) -> BuragoReport:
    """gap_n = d(0, n q) - n * best over n_list, with its max and trend.

    The asymptotic cost makes gap_n bounded in n; the reported slope is
    the least-squares trend over the top half of n_list, which should be
    a small fraction of the ray cost once the engine is consistent.
    """
    q1, q2 = _require_primitive(q)
    n_list = tuple(int(n) for n in n_list)
    if not n_list or any(n < 1 for n in n_list):
        raise ValueError(f"n_list must hold positive integers, got {n_list}")
    ds = [distance(field, (0.0, 0.0), (float(n * q1), float(n * q2)), rig)
          for n in n_list]
    if best is None:
        best = min(d / n for d, n in zip(ds, n_list))
    gaps = tuple(d - n * best for d, n in zip(ds, n_list))
    top = len(n_list) // 2
    ns = np.array(n_list[top:], dtype=np.float64)
    gs = np.array(gaps[top:], dtype=np.float64)
    if ns.size >= 2 and np.ptp(ns) > 0:
        slope = float(np.polyfit(ns, gs, 1)[0])
    else:
        slope = 0.0
    return BuragoReport((q1, q2), n_list, gaps, max(gaps), slope, best)


# ----------------------------------------------------------------------
# sweeps
# ----------------------------------------------------------------------

def primitive_directions(Q: int) -> List[Tuple[int, int]]:
    """Half-plane representatives (q1 > 0, or q1 = 0 and q2 > 0) with
    Chebyshev norm <= Q, angle-sorted."""
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    reps = []
    for q1 in range(0, Q + 1):
        for q2 in range(-Q, Q + 1):
            if q1 == 0 and q2 <= 0:
                continue
            if math.gcd(q1, abs(q2)) == 1:
                reps.append((q1, q2))
    reps.sort(key=lambda q: math.atan2(q[1], q[0]))
    return reps


def direction_sweep(field: ScalarField2, Q: int = DEFAULT_Q,
                    lam: int = DEFAULT_LAMBDA, rig: Rig = DEFAULT_RIG,
                    threads: int = 1) -> NormTable:
    """Norm estimates for every primitive direction with Chebyshev norm <= Q.

    Half-plane representatives are measured; negations reuse the same
    values bit-for-bit (the graph metric is symmetric).  The table is
    returned in full-circle angle order.
    """
    reps = primitive_directions(Q)
    est = parallel_map(lambda q: norm_estimate(field, q, lam, rig), reps, threads)
    full = list(est) + [e.negated() for e in est]
    full.sort(key=lambda e: math.atan2(e.q[1], e.q[0]))
    return NormTable(full, Q, lam, field.fingerprint, rig.key())
