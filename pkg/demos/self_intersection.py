"""Derived self-intersections and Tor-independence.

The origin of the plane meets itself with excess: the derived fibre
product has nonzero pi_1.  Blowing up the plane at the origin twice,
simultaneously, is nevertheless fine; in three-space it is not.
"""

from derived_blowups.blowup import simultaneous_blowup
from derived_blowups.derived import DerivedLocus, classicality_report, derived_product
from derived_blowups.polyring import PresentedRing


def affine(n):
    R = PresentedRing([f"T{i + 1}" for i in range(n)])
    return DerivedLocus(R, ()), R


def main():
    X, R = affine(2)
    origin = DerivedLocus(R, R.gens)
    P, _ = derived_product(origin, origin, R)
    print("origin x origin in the plane:", P)
    print("  H_i vanishes:", classicality_report(P))

    for n in (2, 3):
        X, R = affine(n)
        S = simultaneous_blowup(X, [R.gens, R.gens])
        bad = sorted(idx for idx, ok in S.classical.items() if not ok)
        print(f"A^{n}: {len(S.charts)} product charts, Tor-independent: {S.tor_independent}")
        if bad:
            print("  non-classical charts (1-based):", [tuple(i + 1 for i in idx) for idx in bad])


if __name__ == "__main__":
    main()
