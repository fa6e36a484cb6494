"""Acceptance criteria 1-10, each an exact check.

Every criterion is a plain function returning True or False; the
parametrized test asserts it and records the verdict so that the
pytest summary (see conftest.py) prints one PASS/FAIL line per
criterion.  Running this file as a script prints the same lines.
"""

import random

import pytest

from derived_blowups.blowup import (
    blowup_atlas,
    chart_base_change_compare,
    classical_truncation_compare,
    deformation_atlas,
    graph_check,
    normal_bundle_check,
    simultaneous_blowup,
    verify_divisor,
    verify_divisor_homotopy,
)
from derived_blowups.derived import (
    DerivedLocus,
    codim_topological,
    codim_virtual,
    derived_product,
    homotopy_module,
    is_classical,
    is_regular_sequence,
    koszul_complex,
)
from derived_blowups.groebner import Ideal, syzygies
from derived_blowups.homalg import (
    FpModule,
    Matrix,
    fitting_ideal,
    free_resolution,
    in_span,
    is_zero_module,
)
from derived_blowups.polyring import Poly, PresentedRing, RingMap

from oracles import reduced_basis, syzygy_space
from test_blowup import EXPECTED, corpus

RESULTS = {}


def affine(n):
    R = PresentedRing([f"T{i + 1}" for i in range(n)])
    return DerivedLocus(R, ()), R


NODE = PresentedRing(["u", "v"], ["u*v"])


def is_free_rank_one(M):
    # M ~ A: one generator, and Fitt_0 = 0, Fitt_1 = (1) force a zero relation
    return M.rank == 1 and fitting_ideal(M, 0).is_zero() and fitting_ideal(M, 1).is_unit()


def criterion_1():
    for n in (1, 2, 3):
        X, R = affine(n)
        if not is_regular_sequence(DerivedLocus(R, R.gens)):
            return False
    QX = PresentedRing(["x"])
    Z = DerivedLocus(QX, (QX("0"),))
    pi0, pi1 = homotopy_module(Z, 0), homotopy_module(Z, 1)
    higher = [homotopy_module(Z, i) for i in (2, 3, 4)]
    return is_free_rank_one(pi0) and is_free_rank_one(pi1) and all(is_zero_module(M) for M in higher)


def criterion_2():
    Z = DerivedLocus(NODE, (NODE("u"), NODE("v")))
    return (not is_regular_sequence(Z)) and codim_virtual(Z) == 2 and codim_topological(Z) == 1


def criterion_3():
    for n in (2, 3):
        X, R = affine(n)
        B = blowup_atlas(X, R.gens)
        if len(B) != n:
            return False
        for chart in B.charts:
            if not all(is_zero_module(homotopy_module(chart, i)) for i in range(1, chart.length + 1)):
                return False
    return True


def criterion_4():
    X, R = affine(2)
    empty = blowup_atlas(X, [])
    single = blowup_atlas(X, [R("T1")])
    return (len(empty) == 0 and len(single) == 1
            and single.charts[0].ambient == X.ambient and single.charts[0].seq == X.seq)


def criterion_5():
    cases = [(affine(2)[0], affine(2)[1].gens), (affine(3)[0], affine(3)[1].gens),
             (DerivedLocus(NODE, ()), [NODE("u"), NODE("v")])]
    return all(all(classical_truncation_compare(X, f)) for X, f in cases)


def criterion_6():
    X2, R2 = affine(2)
    S2 = simultaneous_blowup(X2, [R2.gens, R2.gens])
    plane_ok = len(S2.charts) == 4 and all(is_classical(Z) for Z in S2.charts.values())
    X3, R3 = affine(3)
    S3 = simultaneous_blowup(X3, [R3.gens, R3.gens])
    space_bad = any(not is_zero_module(homotopy_module(Z, 1)) for Z in S3.charts.values())
    origin = DerivedLocus(R2, R2.gens)
    selfint, _ = derived_product(origin, origin, R2)
    return plane_ok and space_bad and not is_classical(selfint)


def criterion_7():
    items = corpus()
    if len(items) < 6:
        return False
    for name, X, center, W in items:
        v = verify_divisor(X, W, center)
        h = verify_divisor_homotopy(X, W, center)
        if (v.b_ok, v.c_ok) != EXPECTED[name] or v.passed != h.passed or v.b_ok != h.pi0_iso:
            return False
    return True


def criterion_8():
    for n in (1, 2):
        X, R = affine(n)
        D = deformation_atlas(X, R.gens)
        if not (graph_check(D)[-1] and all(graph_check(D)) and normal_bundle_check(D)):
            return False
    return True


def random_maps(count=5, seed=9):
    rnd = random.Random(seed)
    U = PresentedRing(["u", "v"])
    maps = []
    for _ in range(count):
        images = []
        for _ in range(2):
            terms = {(rnd.randint(0, 2), rnd.randint(0, 2)): rnd.randint(-2, 2) for _ in range(rnd.randint(1, 3))}
            images.append(U(Poly(U.variables, terms)))
        maps.append(images)
    return U, maps


def criterion_9():
    X, R = affine(2)
    U, maps = random_maps()
    return all(all(chart_base_change_compare(X, R.gens, RingMap(R, U, im))) for im in maps)


def _complexes():
    out = []
    for n in (1, 2, 3):
        X, R = affine(n)
        out.append(koszul_complex(DerivedLocus(R, R.gens)))
        for chart in blowup_atlas(X, R.gens).charts:
            out.append(koszul_complex(chart))
    out.append(koszul_complex(DerivedLocus(NODE, (NODE("u"), NODE("v")))))
    XY = PresentedRing(["x", "y"])
    out.append(free_resolution(FpModule.quotient_ring(XY, [XY("x"), XY("y")]), 4))
    return out


def _random_poly(rnd, ring):
    terms = {(rnd.randint(0, 2), rnd.randint(0, 2)): rnd.randint(-3, 3) for _ in range(rnd.randint(1, 3))}
    return ring.nf(Poly(ring.variables, terms))


def criterion_10():
    # d o d = 0 on every constructed complex
    for K in _complexes():
        for i in range(1, K.length):
            if not (K.d(i) @ K.d(i + 1)).is_zero():
                return False
    # reduced Groebner bases: deterministic and equal to an outside reference
    XYZ = PresentedRing(["x", "y", "z"])
    gens = [XYZ("x^2 - y*z"), XYZ("x*y - z"), XYZ("y^2 - x")]
    a = Ideal(XYZ, gens).groebner_basis()
    b = Ideal(XYZ, list(reversed(gens)) + [g * 3 for g in gens]).groebner_basis()
    if a != b or set(a) != reduced_basis(gens, XYZ.variables):
        return False
    # syzygies vanish and cover the degree-bounded syzygies found by linear algebra
    for node in (False, True):
        ring = PresentedRing(["x", "y"], ["x*y"] if node else [])
        rnd = random.Random(101 + node)
        done = 0
        while done < 10:
            f = [_random_poly(rnd, ring) for _ in range(rnd.randint(2, 3))]
            if any(not p for p in f):
                continue
            syz = syzygies(f, ring)
            if not syz.check():
                return False
            for v in syz.generators:
                if not ring.is_zero(sum((c * p for c, p in zip(v, f)), ring.zero())):
                    return False
            span = (Matrix.from_columns(ring, [list(v) for v in syz.generators], len(f))
                    if syz.generators else Matrix.zero(ring, len(f), 0))
            if not all(in_span(span, v) for v in syzygy_space(f, 2, node)):
                return False
            done += 1
    return True


CRITERIA = {
    1: ("Koszul basics", criterion_1),
    2: ("node negative case", criterion_2),
    3: ("blow-up classicality", criterion_3),
    4: ("degenerations", criterion_4),
    5: ("truncation comparison", criterion_5),
    6: ("Tor-independence", criterion_6),
    7: ("divisor checker duality", criterion_7),
    8: ("deformation to the normal bundle", criterion_8),
    9: ("base-change naturality", criterion_9),
    10: ("engine property suites", criterion_10),
}


def line(n, ok):
    return f"criterion {n:2d} ({CRITERIA[n][0]}): {'PASS' if ok else 'FAIL'}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok = CRITERIA[n][1]()
    RESULTS[n] = ok
    print(line(n, ok))
    assert ok


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        print(line(n, CRITERIA[n][1]()))
