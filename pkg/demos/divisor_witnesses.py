"""Checking candidate virtual Cartier divisors over (plane, origin).

Each witness is a map S -> plane together with a cutting element d and
coefficients a with f_i = a_i d on S.  Two checkers look at it: one by
ideal computations, one by comparing homotopy modules.
"""

from derived_blowups.blowup import DivisorWitness, blowup_atlas, verify_divisor, verify_divisor_homotopy
from derived_blowups.derived import DerivedLocus
from derived_blowups.polyring import PresentedRing, RingMap


def main():
    R = PresentedRing(["T1", "T2"])
    X = DerivedLocus(R, ())
    B = blowup_atlas(X, R.gens)
    chart = B.charts[0]
    A = chart.ambient
    U = PresentedRing(["u"])
    L = PresentedRing(["T1", "T2", "w"], ["w*T1 - 1"])
    witnesses = {
        "chart 1 of the blow-up": DivisorWitness(chart, B.structure_map(0), A("T1"), (A("1"), A("X2"))),
        "V(T1) squashed to the origin": DivisorWitness(
            DerivedLocus(R, ()), RingMap(R, R, ["T1^2", "0"]), R("T1"), (R("T1"), R("0"))),
        "zero section over a line": DivisorWitness(
            DerivedLocus(U, ()), RingMap(R, U, ["0", "0"]), U("0"), (U("0"), U("0"))),
        "T1 inverted": DivisorWitness(DerivedLocus(L, ()), RingMap.by_name(R, L), L("T1"), (L("1"), L("w*T2"))),
    }
    for name, W in witnesses.items():
        v = verify_divisor(X, W, R.gens)
        h = verify_divisor_homotopy(X, W, R.gens)
        print(f"{name}:")
        print(f"  ideals:   a={v.a_ok} b={v.b_ok} c={v.c_ok}")
        print(f"  homotopy: pi0 iso={h.pi0_iso} pi1 onto={h.pi1_surj}")


if __name__ == "__main__":
    main()
