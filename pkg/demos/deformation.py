"""Deformation to the normal bundle of the origin in the plane.

The family over the t-line is X away from t = 0 and the normal bundle
of the origin at t = 0.
"""

from derived_blowups.blowup import deformation_atlas, graph_check, normal_bundle_check, restrict_t
from derived_blowups.derived import DerivedLocus
from derived_blowups.polyring import PresentedRing


def main():
    R = PresentedRing(["T1", "T2"])
    D = deformation_atlas(DerivedLocus(R, ()), R.gens)
    print("t-chart:", D.t_chart)
    print("at t = 1:", restrict_t(D, 1)[-1])
    print("at t = 0:", restrict_t(D, 0)[-1])
    print("graph of X at t = 1, per chart:", graph_check(D))
    print("normal bundle at t = 0:", normal_bundle_check(D))


if __name__ == "__main__":
    main()
