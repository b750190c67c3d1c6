#!/usr/bin/env python3
"""
Three routes to the effective Hamiltonian.

For the metric Hamiltonian of a speed field a, the homogenized momentum
dependence is captured by the 1-homogeneous quantity

    h(p) = support of the norm unit ball at p = max over the ball of <p, x>,

read off a computed front by hbar_dual (the quadratic Hamiltonian, when
wanted, is h(p)^2 / 2).  Independently, the cell-problem formula

    h(p) = inf over phi of max over y of a(y) |p + D phi(y)|

makes any test function phi a certificate of an upper bound;
infmax_upper runs subgradient descent on a periodic grid and returns
the best certificate found.  The two routes bound each other.

For mechanical systems H = |p|^2 / 2 + V(y) the energy scale is used
instead: H_bar(p) is the energy c at which p lies on the front of the
Maupertuis metric a_c = 1 / sqrt(2 (c - V)).  With V = 0 everything is
classical: H_bar(p) = |p|^2 / 2, and its level set {H_bar = 1} is the
circle of radius sqrt(2).
"""
import math

from stablefront import (Rig, build_front, convexity_probe, direction_sweep,
                         hbar_dual, hbar_mechanical, infmax_upper, level_set,
                         preset_field)

RIG = Rig(N=16, S=3, M=4)


def main():
    layered = preset_field("layered", A=2.0, B=1.0)
    v_zero = preset_field("constant", v=0.0)

    print("route 1: polar duality (layered medium)")
    table = direction_sweep(layered, Q=4, lam=2, rig=RIG, threads=2)
    front = build_front(table)
    for p in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]:
        print(f"  support at p={p}: {hbar_dual(front, p):.6f}")
    print(f"  (sqrt(3) = {math.sqrt(3):.6f} across the lanes, 3 along)")

    print("\nroute 2: variational upper bound, p = (1, 0)")
    res = infmax_upper(layered, (1.0, 0.0), n_grid=32, iters=300)
    print(f"  start  F(0)    = {res.trace[0]:.6f}   (= max(a) |p|)")
    print(f"  after {res.iters} steps = {res.value:.6f}")
    print(f"  duality target  {hbar_dual(front, (1.0, 0.0)):.6f}  "
          f"(upper bound holds: {res.value >= math.sqrt(3) - 1e-9})")

    print("\nroute 3: mechanical bisection, V = 0 (free motion)")
    mech = hbar_mechanical(v_zero, (1.0, 0.0), tol=1e-3, rig=RIG)
    print(f"  H_bar((1,0)) = {mech.value:.7f}   exact 1/2")
    print(f"  bracket {mech.bracket}, {len(mech.trace)} bisection steps")

    print("\nmomentum level set {H_bar = 1} is the circle |p| = sqrt(2):")
    ls = level_set(v_zero, 1.0, Q=4, lam=1, rig=RIG, threads=2)
    radii = [math.hypot(px, py) for px, py in ls.s_polygon]
    print(f"  {len(radii)} polygon vertices, radius range "
          f"[{min(radii):.4f}, {max(radii):.4f}]   (sqrt(2) = "
          f"{math.sqrt(2):.4f})")

    print("\nmidpoint convexity of H_bar along a momentum segment:")
    probe = convexity_probe(v_zero, (1.0, 0.0), (2.0, 0.0), midpoints=1,
                            tol=1e-3, rig=RIG)
    row = probe["rows"][0]
    print(f"  H(1,0) = {probe['H0']:.5f}, H(2,0) = {probe['H1']:.5f}, "
          f"H(1.5,0) = {row['H_mid']:.5f}")
    print(f"  chord - midpoint gap = {row['gap']:.5f}   "
          f"(quadratic H gives exactly 1/8)")


if __name__ == "__main__":
    main()
