from itertools import permutations

import pytest

from derived_blowups.blowup import (
    DivisorWitness,
    MalformedWitness,
    blowup_atlas,
    chart_base_change_compare,
    classical_truncation_compare,
    classifying_map,
    deformation_atlas,
    exceptional_divisor,
    graph_check,
    normal_bundle_check,
    restrict_t,
    simultaneous_blowup,
    strict_transform_immersion,
    verify_divisor,
    verify_divisor_homotopy,
)
from derived_blowups.derived import (
    DerivedLocus,
    base_change,
    homotopy_module,
    is_classical,
    is_regular_sequence,
    same_locus,
)
from derived_blowups.groebner import Ideal
from derived_blowups.homalg import is_zero_module
from derived_blowups.polyring import PresentedRing, RingMap


def affine(n):
    R = PresentedRing([f"T{i + 1}" for i in range(n)])
    return DerivedLocus(R, ()), R


NODE = PresentedRing(["u", "v"], ["u*v"])


def test_plane_charts():
    X, R = affine(2)
    B = blowup_atlas(X, R.gens)
    c1, c2 = B.charts
    assert c1.ambient.variables == ("T1", "T2", "X2")
    assert c1.seq == (c1.ambient("T2 - X2*T1"),)
    assert c2.ambient.variables == ("T1", "T2", "X1")
    assert c2.seq == (c2.ambient("T1 - X1*T2"),)
    assert is_classical(c1) and is_classical(c2)


def test_degenerate_centers():
    X, R = affine(2)
    assert len(blowup_atlas(X, [])) == 0
    B = blowup_atlas(X, ["T1*T2"])
    assert len(B) == 1 and same_locus(B.charts[0], X)
    assert exceptional_divisor(blowup_atlas(X, [])) == []
    (E,) = exceptional_divisor(B)
    assert E.seq == (R("T1*T2"),)


def test_node_chart():
    B = blowup_atlas(DerivedLocus(NODE, ()), ["u", "v"])
    A = B.charts[0].ambient
    assert A.variables == ("u", "v", "X2")
    assert B.charts[0].pi0_ideal() == Ideal(A, ["u*v", "v - X2*u"])


def test_derived_base_chart():
    R = PresentedRing(["x", "y", "z"])
    X = DerivedLocus(R, (R("x*y"),))
    B = blowup_atlas(X, ["x", "z"])
    c = B.charts[0]
    assert c.seq == (c.ambient("x*y"), c.ambient("z - X2*x"))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_affine_charts_regular(n):
    X, R = affine(n)
    for chart in blowup_atlas(X, R.gens).charts:
        assert is_classical(chart)
        assert is_regular_sequence(chart)


def test_exceptional_is_projective_chart():
    for n in (2, 3):
        X, R = affine(n)
        B = blowup_atlas(X, R.gens)
        for k, E in enumerate(exceptional_divisor(B)):
            A = E.ambient
            # pi_0 = Q[X_r : r != k], an affine chart of projective space
            assert E.pi0_ideal() == Ideal(A, [A.embed(g) for g in R.gens])
            assert E.length == n


@pytest.mark.parametrize("X,center", [
    (affine(2)[0], ["T1", "T2"]),
    (affine(3)[0], ["T1", "T2", "T3"]),
    (DerivedLocus(NODE, ()), ["u", "v"]),
])
def test_overlaps(X, center):
    B = blowup_atlas(X, center)
    for (k, l), ov in B.overlaps.items():
        assert ov.composites_are_identity()
        assert ov.transition.source == ov.source.ambient
    if len(B) == 3:
        for i, j, k in permutations(range(3)):
            assert B.check_cocycle(i, j, k)


def test_overlap_refuses_same_chart():
    X, R = affine(2)
    with pytest.raises(ValueError):
        blowup_atlas(X, R.gens).overlap(0, 0)


# -- divisor witnesses --------------------------------------------------------


def tautological(X, center, k):
    B = blowup_atlas(X, center)
    chart = B.charts[k]
    A = chart.ambient
    a = [A.one() if r == k else A.gen(B.coordinates[k][r]) for r in range(len(center))]
    return DivisorWitness(chart, B.structure_map(k), A.embed(B.center_seq[k]), a)


def corpus():
    X2, R2 = affine(2)
    X3, R3 = affine(3)
    items = [
        ("plane chart 1", X2, R2.gens, tautological(X2, R2.gens, 0)),
        ("plane chart 2", X2, R2.gens, tautological(X2, R2.gens, 1)),
        ("space chart 3", X3, R3.gens, tautological(X3, R3.gens, 2)),
    ]
    # V(T1) in the plane, mapped to the origin by (T1^2, 0): condition (b) fails
    items.append(("V(T1) over the origin", X2, R2.gens,
                  DivisorWitness(DerivedLocus(R2, ()), RingMap(R2, R2, ["T1^2", "0"]), R2("T1"),
                                 (R2("T1"), R2("0")))))
    # zero section: S = Q[u] mapped to the origin, d = 0; condition (c) fails
    U = PresentedRing(["u"])
    items.append(("zero section", X2, R2.gens,
                  DivisorWitness(DerivedLocus(U, ()), RingMap(R2, U, ["0", "0"]), U("0"), (U("0"), U("0")))))
    # the open set T1 != 0, where the center is already a divisor
    L = PresentedRing(["T1", "T2", "w"], ["w*T1 - 1"])
    items.append(("localization at T1", X2, R2.gens,
                  DivisorWitness(DerivedLocus(L, ()), RingMap.by_name(R2, L), L("T1"), (L("1"), L("w*T2")))))
    return items


EXPECTED = {
    "plane chart 1": (True, True),
    "plane chart 2": (True, True),
    "space chart 3": (True, True),
    "V(T1) over the origin": (False, False),
    "zero section": (True, False),
    "localization at T1": (True, True),
}


@pytest.mark.parametrize("name,X,center,W", corpus(), ids=[c[0] for c in corpus()])
def test_divisor_checkers_agree(name, X, center, W):
    v = verify_divisor(X, W, center)
    h = verify_divisor_homotopy(X, W, center)
    assert v.a_ok
    assert (v.b_ok, v.c_ok) == EXPECTED[name]
    assert v.b_ok == h.pi0_iso
    assert (v.b_ok and v.c_ok) == (h.pi0_iso and h.pi1_surj)
    if v.b_ok:
        assert v.c_ok == h.pi1_surj


def test_zero_section_pi1_fails():
    name, X, center, W = corpus()[4]
    assert not verify_divisor_homotopy(X, W, center).pi1_surj


def test_regular_cutting_element_forces_pi1():
    # d regular and b holds: ann(d) = 0 so pi1 is automatically onto
    X, R = affine(2)
    W = tautological(X, R.gens, 0)
    assert verify_divisor(X, W, R.gens).b_ok
    assert verify_divisor_homotopy(X, W, R.gens).pi1_surj


def test_malformed_witness():
    # S = plane, d = T1, a = (1, 0): T2 - 0*T1 is not zero, so no divisor over the origin
    X, R = affine(2)
    W = DivisorWitness(DerivedLocus(R, ()), RingMap.identity(R), R("T1"), (R("1"), R("0")))
    with pytest.raises(MalformedWitness):
        verify_divisor(X, W, R.gens)
    with pytest.raises(MalformedWitness):
        verify_divisor_homotopy(X, W, R.gens)


@pytest.mark.parametrize("X,center", [
    (affine(2)[0], ["T1", "T2"]),
    (affine(3)[0], ["T1", "T2", "T3"]),
    (DerivedLocus(NODE, ()), ["u", "v"]),
    (DerivedLocus(PresentedRing(["x", "y", "z"]), (PresentedRing(["x", "y", "z"])("x*y"),)), ["x", "z"]),
    (affine(2)[0], ["T1^2", "T1*T2"]),
])
def test_tautological_witnesses_pass(X, center):
    B = blowup_atlas(X, center)
    for k in range(len(B)):
        W = tautological(X, center, k)
        assert verify_divisor(X, W, center).passed
        assert verify_divisor_homotopy(X, W, center).passed


def test_classifying_map_uniqueness():
    X, R = affine(2)
    S = PresentedRing(["s", "t"])
    psi = RingMap(R, S, ["s", "s*t"])
    W = DivisorWitness(DerivedLocus(S, ()), psi, S("s"), (S("1"), S("t")))
    m = classifying_map(X, W, R.gens, 0)
    assert m.images[-1] == S("t")
    with pytest.raises(ValueError):
        classifying_map(X, W, R.gens, 1)  # a_2 = t is not a unit
    # two witnesses on S // (t^2 - t) whose coefficients agree on pi_0 give the same map
    St = DerivedLocus(S, (S("t^2 - t"),))
    W1 = DivisorWitness(St, psi, S("s"), (S("1"), S("t")))
    W2 = DivisorWitness(St, psi, S("s"), (S("1"), S("t^2")))
    m1, m2 = classifying_map(X, W1, R.gens, 0), classifying_map(X, W2, R.gens, 0)
    IS = St.pi0_ideal()
    assert m1.images != m2.images
    assert all(IS.contains(a - b) for a, b in zip(m1.images, m2.images))


def test_classifying_map_on_a_chart_is_the_inclusion():
    X, R = affine(2)
    W = tautological(X, R.gens, 0)
    m = classifying_map(X, W, R.gens, 0)
    A = W.S.ambient
    assert all(A.equal(x, g) for x, g in zip(m.images, A.gens))


# -- truncation, simultaneous blow-ups, strict transforms ----------------------


@pytest.mark.parametrize("X,center", [
    (affine(2)[0], ["T1", "T2"]),
    (affine(3)[0], ["T1", "T2", "T3"]),
    (DerivedLocus(NODE, ()), ["u", "v"]),
    (affine(2)[0], ["T1^2", "T1*T2"]),
    (affine(1)[0], ["T1"]),
])
def test_truncation_compare(X, center):
    assert all(classical_truncation_compare(X, center))


def test_truncation_needs_classical_base():
    R = PresentedRing(["x"])
    with pytest.raises(ValueError):
        classical_truncation_compare(DerivedLocus(R, (R("x"),)), ["x"])


def test_simultaneous_plane_and_space():
    X, R = affine(2)
    S = simultaneous_blowup(X, [R.gens, R.gens])
    assert len(S.charts) == 4 and S.tor_independent
    X3, R3 = affine(3)
    S3 = simultaneous_blowup(X3, [R3.gens, R3.gens])
    bad = [idx for idx, ok in S3.classical.items() if not ok]
    assert bad
    for idx in bad[:2]:
        Z = S3.charts[idx]
        assert not is_zero_module(homotopy_module(Z, 1))
        assert not is_regular_sequence(Z)


def test_simultaneous_intersecting_lines():
    X, R = affine(3)
    R = X.ambient
    S = simultaneous_blowup(X, [[R("T1"), R("T2")], [R("T1"), R("T3")]])
    assert len(S.charts) == 4
    for idx, Z in S.charts.items():
        assert S.classical[idx] == is_regular_sequence(Z)


def test_strict_transform():
    X, R = affine(2)
    (trivial,) = strict_transform_immersion(X, X, ["T1"])
    assert trivial.cut == () and trivial.matches
    sub = DerivedLocus(R, (R("T2"),))
    (chart,) = strict_transform_immersion(X, sub, ["T1"])
    assert chart.matches
    assert chart.ambient_chart.seq[0] == chart.ambient_chart.ambient("T2 - W1*T1")
    X3, R3 = affine(3)
    charts = strict_transform_immersion(X3, DerivedLocus(R3, (R3("T3"),)), ["T1", "T2"])
    assert len(charts) == 2 and all(c.matches for c in charts)


# -- deformation to the normal bundle -------------------------------------------


def test_deformation_line():
    X, R = affine(1)
    D = deformation_atlas(X, ["T1"])
    tc = D.t_chart
    assert tc.ambient.variables == ("T1", "t", "X1")
    assert tc.seq == (tc.ambient("T1 - X1*t"),)
    at0 = restrict_t(D, 0)[-1]
    assert at0.seq == (at0.ambient("T1"),)
    assert all(graph_check(D)) and normal_bundle_check(D)


@pytest.mark.parametrize("n", [1, 2])
def test_deformation_affine(n):
    X, R = affine(n)
    D = deformation_atlas(X, R.gens)
    assert len(D.charts) == n + 1
    assert all(graph_check(D))
    assert normal_bundle_check(D)
    for chart in D.charts[:-1]:
        A = chart.ambient
        # the strict transform of X x {0} is V(T), removed by inverting T
        assert chart.append(A.gen("T")).is_empty()


def test_deformation_derived_base():
    R = PresentedRing(["x", "y"])
    X = DerivedLocus(R, (R("x*y"),))
    D = deformation_atlas(X, ["x"])
    assert all(graph_check(D)) and normal_bundle_check(D)


# -- naturality and generator changes -------------------------------------------


@pytest.mark.parametrize("images", [
    ["u", "0"], ["u*v", "u + v"], ["u^2", "v^2"], ["1", "u"], ["u - v", "u*v - 1"],
])
def test_base_change_naturality(images):
    X, R = affine(2)
    U = PresentedRing(["u", "v"])
    assert all(chart_base_change_compare(X, R.gens, RingMap(R, U, images)))


def test_permuted_center_gives_renamed_charts():
    X, R = affine(3)
    f = list(R.gens)
    B = blowup_atlas(X, f)
    for perm in permutations(range(3)):
        Bp = blowup_atlas(X, [f[i] for i in perm])
        for kp, chart_p in enumerate(Bp.charts):
            k = perm[kp]
            chart = B.charts[k]
            # X'_r on the permuted atlas is X_{perm[r]}
            over = {Bp.coordinates[kp][r]: chart.ambient.gen(B.coordinates[k][perm[r]])
                    for r in Bp.coordinates[kp]}
            mp = RingMap.by_name(chart_p.ambient, chart.ambient, over)
            assert base_change(chart_p, mp).pi0_ideal() == chart.pi0_ideal()


def test_unit_rescaling():
    X, R = affine(2)
    B = blowup_atlas(X, R.gens)
    Bs = blowup_atlas(X, [R("2*T1"), R("T2")])
    c, cs = B.charts[0], Bs.charts[0]
    # X2' = T2 / (2 T1) = X2 / 2
    mp = RingMap.by_name(cs.ambient, c.ambient, {"X2": c.ambient("1/2*X2")})
    assert base_change(cs, mp).pi0_ideal() == c.pi0_ideal()
