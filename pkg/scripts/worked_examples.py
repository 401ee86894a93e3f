"""The two orbifold covers end to end: certificates, kernel genus, kernel scan,
and the Euler number multiplied back up to the surface."""
import argparse
from fractions import Fraction

from circlerig import fuchsian
from circlerig.euler import euler_orbifold, euler_relator
from circlerig.presentations import (
    OrbifoldSignature, certify, hom_2222g, hom_334, kernel_genus, orbifold_euler_characteristic,
)
from circlerig.rotation import exact_rotation_number_finite_order


def run_case(name, geo, hom, cone, words, seed):
    sig = geo.signature
    certify(hom)
    k = hom.target.order
    genus = kernel_genus(sig, k)
    scan = fuchsian.scan_kernel(geo, hom, count=words, seed=seed)
    eu = euler_orbifold(geo.boundary_action()).isolated
    rot = exact_rotation_number_finite_order(geo.boundary_action().images[cone], sig.periods[-1])
    surface = euler_relator(fuchsian.build_surface_group(genus).boundary_action()).integer
    print(f"{name}: chi={orbifold_euler_characteristic(sig)}, |G|={k}, kernel genus {genus}")
    print(f"  rot({cone}) = {rot}, eu = {eu}, {k} * eu = {k * eu}, surface eu = {surface}")
    print(f"  kernel scan: {len(scan.matrices)} Schreier generators, {scan.random_words} random words "
          f"({scan.trivial_words} trivial), "
          f"min |trace| {min(scan.min_abs_trace, scan.random_min_abs_trace):.6f} -> "
          f"{'torsion free' if scan.passed else 'ELLIPTIC ELEMENT FOUND'}")
    return abs(k * eu) == abs(Fraction(surface))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, nargs="*", default=[2, 3])
    ap.add_argument("--words", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    ok = True
    for g in a.genus:
        ok &= run_case(f"(0;2,2,2,{2 * g})", fuchsian.build_orbifold_2222g(g), hom_2222g(g), "d", a.words, a.seed)
    ok &= run_case("(0;3,3,4)", fuchsian.build_orbifold_334(), hom_334(), "c", a.words, a.seed)
    print("all covers consistent" if ok else "multiplicativity FAILED")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
