"""Euler numbers of standard, conjugated and abelian surface group actions."""
import argparse
import random
import time

from circlerig import fuchsian
from circlerig.circle_maps import Moebius, MoebiusTransform
from circlerig.euler import conjugate_rep, euler_pants, euler_relator, pants_contributions, canonical_pants, rotation_rep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, nargs="*", default=[2, 3, 4])
    ap.add_argument("--iters", type=int, default=10_000)
    ap.add_argument("--conjugates", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    print(f"{'g':>2} {'kind':<10} {'relator':>8} {'pants':>6} {'per pants':<24} time")
    for g in a.genus:
        std = fuchsian.build_surface_group(g).boundary_action()
        reps = [("standard", std)]
        for i in range(a.conjugates):
            x, y, z = (rng.uniform(-1, 1) for _ in range(3))
            x = x if abs(x) > 0.3 else 0.3
            c = conjugate_rep(std, Moebius(MoebiusTransform(x, y, z, (1 + y * z) / x)))
            c.tol = 1e-8
            reps.append((f"conj {i}", c))
        reps.append(("abelian", rotation_rep(g, [rng.random() for _ in range(2 * g)])))
        for kind, rep in reps:
            t = time.perf_counter()
            r, p = euler_relator(rep, a.iters), euler_pants(rep, n=a.iters, cross_check=False)
            parts = [iv.rational if iv.exact else round(iv.mid, 3)
                     for iv in pants_contributions(rep, canonical_pants(g), a.iters)]
            print(f"{g:>2} {kind:<10} {r.integer:>8} {p.integer:>6} {str([int(x) for x in parts]):<24} "
                  f"{time.perf_counter() - t:.2f}s")


if __name__ == "__main__":
    main()
