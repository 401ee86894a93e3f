"""Blow up an orbit of the genus-2 standard action and compare it with the base."""
import argparse

from circlerig import fuchsian
from circlerig.denjoy import (
    Base, blow_up, check_semi_conjugacy, collapse_map, compare_euler, compare_rotation_numbers, minimality_probe,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, default=2)
    ap.add_argument("--p0", type=float, default=0.2718281828)
    ap.add_argument("--lam", type=float, default=0.3)
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--samples", type=int, default=200)
    a = ap.parse_args()
    base = fuchsian.build_surface_group(a.genus).boundary_action()
    blown = blow_up(base, a.p0, a.lam, a.depth)
    print(f"census: {len(blown.census)} orbit points, inserted length {blown.total:.4f}")
    cert = check_semi_conjugacy(blown, base, collapse_map(blown), samples=a.samples)
    print(f"semi-conjugacy: {'pass' if cert.passed else 'FAIL'} ({cert.triples_checked} triples, "
          f"{cert.orientation_mismatches} mismatches)")
    print("depth  base gap   blown gap")
    for d in range(3, 9):
        g0 = minimality_probe(base, a.p0, d).max_gap
        g1 = minimality_probe(blown, Base(0.5), d)
        print(f"{d:>5}  {g0:.6f}   {g1.max_gap:.6f}")
    print(f"witness: {g1.witness}")
    rows = compare_rotation_numbers(blown)
    print(f"rotation numbers agree on {sum(r.agree for r in rows)}/{len(rows)} words")
    e0, e1 = compare_euler(blown)
    print(f"Euler number: base {e0.integer}, blown up {e1.integer}")


if __name__ == "__main__":
    main()
