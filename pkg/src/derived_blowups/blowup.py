"""Charts of derived blow-ups and related constructions.

The blow-up of ``X = (C, h)`` along ``f = (f_1, ..., f_n)`` is built by
pulling back the standard charts of the blow-up of affine ``n``-space at
the origin: chart ``k`` is ``C[X_r : r != k]`` with sequence
``h + (f_r - X_r f_k : r != k)``.  Charts are numbered from 0 in Python
and from 1 in coordinate names and CLI reports.
"""

from dataclasses import dataclass, field
from itertools import product

from .derived import (
    DerivedLocus,
    base_change,
    derived_product,
    is_classical,
    koszul_complex,
    same_locus,
)
from .groebner import Ideal, eliminate, lift, saturation
from .homalg import FpModule, Matrix, _Span, determinant, in_span, kernel
from .polyring import PresentedRing, RingMap

__all__ = [
    "BlowupAtlas",
    "Overlap",
    "blowup_atlas",
    "exceptional_divisor",
    "chart_base_change_compare",
    "DivisorWitness",
    "DivisorVerdict",
    "HomotopyVerdict",
    "MalformedWitness",
    "verify_divisor",
    "verify_divisor_homotopy",
    "classifying_map",
    "classical_truncation_compare",
    "SimultaneousAtlas",
    "simultaneous_blowup",
    "StrictTransformChart",
    "strict_transform_immersion",
    "DeformationAtlas",
    "deformation_atlas",
    "restrict_t",
]


def _normalize_center(C, center):
    return tuple(C.nf(C(f)) for f in center)


# ---------------------------------------------------------------------------
# Atlas and overlaps


@dataclass(frozen=True)
class Overlap:
    """Chart ``k`` with ``X_l`` inverted, chart ``l`` with ``X_k`` inverted,
    and the isomorphism between them.

    ``matrix`` expresses the pushed-forward source sequence in terms of the
    target sequence, ``transition(seq_src) = matrix * seq_tgt``; its
    determinant is a unit, so the Koszul loci agree.
    """

    k: int
    l: int
    source: DerivedLocus
    target: DerivedLocus
    transition: RingMap
    inverse: RingMap
    matrix: Matrix

    def composites_are_identity(self):
        there = self.inverse.compose(self.transition)
        back = self.transition.compose(self.inverse)
        ok1 = all(self.source.ambient.equal(x, g) for x, g in zip(there.images, self.source.ambient.gens))
        ok2 = all(self.target.ambient.equal(x, g) for x, g in zip(back.images, self.target.ambient.gens))
        return ok1 and ok2


class BlowupAtlas:
    """Affine charts of ``Bl_Z X`` for ``Z = X // f``.

    ``coordinates[k]`` maps ``r`` to the variable name of ``X_r`` on
    chart ``k``.  Overlaps are built on demand by :meth:`overlap`.
    """

    def __init__(self, base, center_seq, charts, coordinates):
        self.base = base
        self.center_seq = tuple(center_seq)
        self.charts = tuple(charts)
        self.coordinates = tuple(coordinates)
        self._overlaps = {}

    @property
    def n(self):
        return len(self.center_seq)

    def __len__(self):
        return len(self.charts)

    def structure_map(self, k):
        """``C -> chart k ambient``."""
        return RingMap.by_name(self.base.ambient, self.charts[k].ambient)

    def localized_chart(self, k, inverted):
        """Chart ``k`` with the coordinates ``X_r`` (``r in inverted``)
        inverted; returns the locus and the names of the inverse variables."""
        chart = self.charts[k]
        A = chart.ambient
        inverted = sorted(inverted)
        inv_names = A.fresh_names([f"W{r + 1}" for r in inverted])
        R0 = A.extend(inv_names)
        rels = [R0.gen(w) * R0.gen(self.coordinates[k][r]) - 1 for w, r in zip(inv_names, inverted)]
        R = R0.quotient(rels)
        return DerivedLocus(R, tuple(R.embed(x) for x in chart.seq)), dict(zip(inverted, inv_names))

    def _transition(self, a, src, src_inv, b, tgt, tgt_inv):
        """Map from chart ``a`` (localized) to chart ``b`` (localized).

        ``X^a_r = f_r / f_a = Y_r / Y_a`` with ``Y = X^b`` and ``Y_b = 1``.
        """
        R, T = src.ambient, tgt.ambient
        ca, cb = self.coordinates[a], self.coordinates[b]

        def Y(r):
            return T.one() if r == b else T.gen(cb[r])

        def Yinv(r):
            if r == b:
                return T.one()
            if r not in tgt_inv:
                raise ValueError(f"coordinate X{r + 1} is not inverted on the target")
            return T.gen(tgt_inv[r])

        overrides = {}
        for r, name in ca.items():
            overrides[name] = Y(r) * Yinv(a)
        for r, name in src_inv.items():
            overrides[name] = Yinv(r) * Y(a)
        return RingMap.by_name(R, T, overrides)

    def overlap(self, k, l):
        if k == l:
            raise ValueError("an overlap needs two distinct charts")
        if (k, l) in self._overlaps:
            return self._overlaps[(k, l)]
        src, src_inv = self.localized_chart(k, [l])
        tgt, tgt_inv = self.localized_chart(l, [k])
        phi = self._transition(k, src, src_inv, l, tgt, tgt_inv)
        psi = self._transition(l, tgt, tgt_inv, k, src, src_inv)
        M = self._transition_matrix(k, l, phi, tgt, tgt_inv)
        ov = Overlap(k, l, src, tgt, phi, psi, M)
        self._overlaps[(k, l)] = ov
        return ov

    def _transition_matrix(self, k, l, phi, tgt, tgt_inv):
        T = tgt.ambient
        m = self.base.length
        n = self.n
        others_k = [r for r in range(n) if r != k]
        others_l = [r for r in range(n) if r != l]
        size = m + n - 1
        rows = [[T.zero()] * size for _ in range(size)]
        for j in range(m):
            rows[j][j] = T.one()
        V = T.gen(tgt_inv[k])
        col_of = {r: m + i for i, r in enumerate(others_l)}
        cb = self.coordinates[l]
        for i, r in enumerate(others_k):
            row = m + i
            if r == l:
                rows[row][col_of[k]] = -V
            else:
                rows[row][col_of[r]] = T.one()
                rows[row][col_of[k]] = -T.gen(cb[r]) * V
        M = Matrix.from_rows(T, rows, size)
        # check phi(seq_k) = M seq_l in the localized target
        pushed = [phi(x) for x in self.charts[k].seq]
        for i in range(size):
            acc = T.zero()
            for j in range(size):
                acc = acc + rows[i][j] * tgt.seq[j]
            if not T.equal(acc, pushed[i]):
                raise AssertionError("transition does not match the chart sequences")
        if not Ideal(T, [determinant(rows, T)]).is_unit():
            raise AssertionError("transition matrix is not invertible")
        return M

    @property
    def overlaps(self):
        return {(k, l): self.overlap(k, l) for k in range(len(self)) for l in range(len(self)) if k != l}

    def check_cocycle(self, i, j, k):
        """``phi_jk . phi_ij = phi_ik`` on the triple overlap seen from chart ``i``."""
        Si, inv_i = self.localized_chart(i, [j, k])
        Sj, inv_j = self.localized_chart(j, [i, k])
        Sk, inv_k = self.localized_chart(k, [i, j])
        pij = self._transition(i, Si, inv_i, j, Sj, inv_j)
        pjk = self._transition(j, Sj, inv_j, k, Sk, inv_k)
        pik = self._transition(i, Si, inv_i, k, Sk, inv_k)
        comp = pjk.compose(pij)
        T = Sk.ambient
        return all(T.equal(x, y) for x, y in zip(comp.images, pik.images))

    def __str__(self):
        return f"blow-up atlas of {self.base} along ({', '.join(map(str, self.center_seq))}): {len(self)} charts"


def blowup_atlas(X, center):
    """Charts of the derived blow-up of ``X = (C, h)`` along ``center``."""
    C = X.ambient
    f = _normalize_center(C, center)
    n = len(f)
    if n == 0:
        return BlowupAtlas(X, f, (), ())
    if n == 1:
        return BlowupAtlas(X, f, (X,), ({},))
    names = C.fresh_names([f"X{r + 1}" for r in range(n)])
    charts, coords = [], []
    for k in range(n):
        others = [r for r in range(n) if r != k]
        A = C.extend([names[r] for r in others])
        seq = [A.embed(x) for x in X.seq]
        seq += [A.embed(f[r]) - A.gen(names[r]) * A.embed(f[k]) for r in others]
        charts.append(DerivedLocus(A, tuple(seq)))
        coords.append({r: names[r] for r in others})
    return BlowupAtlas(X, f, charts, coords)


def exceptional_divisor(B):
    """Chart ``k`` of the exceptional divisor: chart ``k`` with ``f_k`` appended."""
    out = []
    for k, chart in enumerate(B.charts):
        out.append(chart.append(chart.ambient.embed(B.center_seq[k])))
    return out


def chart_base_change_compare(X, center, phi):
    """For each chart ``k``: is chart ``k`` of the blow-up of the base change
    the base change of chart ``k``?  Coordinates are matched by index."""
    B = blowup_atlas(X, center)
    Xp = base_change(X, phi)
    Bp = blowup_atlas(Xp, [phi(x) for x in center])
    out = []
    for k, (chart, chart_p) in enumerate(zip(B.charts, Bp.charts)):
        A, Ap = chart.ambient, chart_p.ambient
        overrides = {v: phi.images[i] for i, v in enumerate(X.ambient.variables)}
        for r, name in B.coordinates[k].items():
            overrides[name] = Ap.gen(Bp.coordinates[k][r])
        ext = RingMap(A, Ap, [Ap.embed(overrides[v]) if v in overrides else Ap.gen(v) for v in A.variables])
        out.append(same_locus(base_change(chart, ext), chart_p))
    return out


# ---------------------------------------------------------------------------
# Virtual Cartier divisors lying over (X, Z)


class MalformedWitness(ValueError):
    """Witness data does not satisfy ``psi(f_i) = a_i d`` on ``pi_0(S)``."""


@dataclass(frozen=True)
class DivisorWitness:
    """A candidate virtual Cartier divisor ``D = S // d`` lying over ``(X, Z)``.

    ``structure_map`` goes from the ambient of ``X`` to the ambient of ``S``;
    ``a`` are the coefficients with ``psi(f_i) = a_i d`` on ``pi_0(S)``.
    """

    S: DerivedLocus
    structure_map: RingMap
    d: object
    a: tuple

    def __post_init__(self):
        A = self.S.ambient
        if self.structure_map.target != A:
            raise ValueError("structure map must land in the ambient of S")
        object.__setattr__(self, "d", A.nf(A(self.d)))
        object.__setattr__(self, "a", tuple(A.nf(A(x)) for x in self.a))


@dataclass(frozen=True)
class DivisorVerdict:
    a_ok: bool
    b_ok: bool
    c_ok: bool

    @property
    def passed(self):
        return self.a_ok and self.b_ok and self.c_ok


@dataclass(frozen=True)
class HomotopyVerdict:
    pi0_iso: bool
    pi1_surj: bool

    @property
    def passed(self):
        return self.pi0_iso and self.pi1_surj


def _check_witness(X, center, W):
    C = X.ambient
    psi = W.structure_map
    if psi.source != C:
        raise ValueError("structure map must start at the ambient of X")
    f = _normalize_center(C, center)
    if len(W.a) != len(f):
        raise MalformedWitness(f"need {len(f)} coefficients, got {len(W.a)}")
    IS = W.S.pi0_ideal()
    for h in X.seq:
        if not IS.contains(psi(h)):
            raise MalformedWitness(f"S does not lie over X: {psi(h)} is not zero on pi_0(S)")
    pf = [psi(x) for x in f]
    for i, (p, a) in enumerate(zip(pf, W.a)):
        if not IS.contains(p - a * W.d):
            raise MalformedWitness(f"f_{i + 1} - a_{i + 1} d = {p - a * W.d} is not zero on pi_0(S)")
    return pf


def verify_divisor(X, W, center):
    """Check conditions (a), (b), (c) for ``W`` lying over ``(X, X // center)``.

    (a) holds by construction: one cutting element.  (b) compares the
    ideals ``I_S + (d)`` and ``I_S + (psi f)``.  (c) asks that the
    coefficients and ``d`` generate the unit ideal on ``pi_0(S)``.
    """
    pf = _check_witness(X, center, W)
    IS = W.S.pi0_ideal()
    b_ok = (IS + [W.d]) == (IS + pf)
    c_ok = (IS + list(W.a) + [W.d]).is_unit()
    return DivisorVerdict(True, b_ok, c_ok)


def verify_divisor_homotopy(X, W, center):
    """The same question asked on homotopy of the comparison map
    ``S // psi(f) -> S // d``.

    ``pi0_iso``: ``d`` lies in the submodule spanned by ``(s, psi f)``.
    ``pi1_surj``: on Koszul complexes, ``e_{f_i} -> a_i e_d + sum c_ij e_{s_j}``
    (``c`` lifting ``psi f_i - a_i d`` through ``s``) hits ``H_1`` of the
    target.
    """
    pf = _check_witness(X, center, W)
    S = W.S
    A = S.ambient
    s = list(S.seq)
    m, n = len(s), len(pf)
    row = Matrix.from_rows(A, [s + pf], m + n)
    pi0_iso = in_span(row, (W.d,))

    src = koszul_complex(DerivedLocus(A, tuple(s + pf)))
    tgt = koszul_complex(DerivedLocus(A, tuple(s + [W.d])))
    cols = []
    for j in range(m):
        col = [A.zero()] * (m + 1)
        col[j] = A.one()
        cols.append(col)
    for i in range(n):
        c = lift(pf[i] - W.a[i] * W.d, s, A) if s else ()
        if c is None:
            raise MalformedWitness(f"f_{i + 1} - a_{i + 1} d does not lift through the sequence of S")
        col = list(c) + [W.a[i]]
        cols.append(col)
    phi1 = Matrix.from_columns(A, cols, m + 1)
    if not _same_matrix(tgt.d(1) @ phi1, src.d(1)):
        raise AssertionError("comparison map is not a chain map")
    z_src = kernel(src.d(1))
    image = phi1 @ z_src if z_src.ncols else Matrix.zero(A, m + 1, 0)
    span_cols = list(tgt.d(2).columns()) + list(image.columns())
    span = _Span(A, span_cols, m + 1)
    pi1_surj = all(span.contains(z) for z in kernel(tgt.d(1)).columns())
    return HomotopyVerdict(pi0_iso, pi1_surj)


def _same_matrix(P, Q):
    R = P.ring
    return all(R.is_zero(x - y) for rp, rq in zip(P.rows, Q.rows) for x, y in zip(rp, rq))


def classifying_map(X, W, center, k):
    """The map from chart ``k`` of ``Bl_Z X`` to ``S`` classifying ``W``.

    Needs ``a_k`` invertible on ``pi_0(S)``; then ``X_r -> a_r / a_k``.
    Returned as a ring map of ambients that carries the chart sequence
    into the ideal of ``S``.
    """
    _check_witness(X, center, W)
    B = blowup_atlas(X, center)
    A = W.S.ambient
    IS = W.S.pi0_ideal()
    gens = list(IS.generators)
    c = lift(A.one(), [W.a[k]] + gens, A)
    if c is None:
        raise ValueError(f"a_{k + 1} is not a unit on pi_0(S)")
    u = c[0]
    chart = B.charts[k]
    overrides = {v: W.structure_map.images[i] for i, v in enumerate(X.ambient.variables)}
    for r, name in B.coordinates[k].items():
        overrides[name] = A.nf(W.a[r] * u)
    mp = RingMap(chart.ambient, A, [overrides[v] for v in chart.ambient.variables])
    for x in chart.seq:
        if not IS.contains(mp(x)):
            raise AssertionError("classifying map does not respect the chart sequence")
    if not IS.contains(mp(chart.ambient.embed(B.center_seq[k])) - W.d * W.a[k]):
        raise AssertionError("classifying map does not pull back the exceptional divisor")
    return mp


# ---------------------------------------------------------------------------
# Classical truncation


def classical_truncation_compare(X, center):
    """Per chart: does the chart of ``Proj Sym(pi_0 I)`` agree with ``pi_0``
    of the derived chart?

    ``pi_0 I`` is presented as ``coker(d_2)`` of the Koszul complex of the
    center, so ``Sym`` is ``C[X] / (sum_i (d_2)_{ij} X_i)``.
    """
    if X.seq:
        raise ValueError("truncation comparison needs a classical base (empty sequence)")
    C = X.ambient
    f = _normalize_center(C, center)
    B = blowup_atlas(X, f)
    if len(f) == 1:
        return [Ideal(B.charts[0].ambient, B.charts[0].seq) == Ideal(C, [])]
    K = koszul_complex(DerivedLocus(C, f))
    M = FpModule.cokernel(K.d(2)) if K.length >= 2 else FpModule.free(C, len(f))
    out = []
    for k, chart in enumerate(B.charts):
        A = chart.ambient
        coords = B.coordinates[k]
        Xs = [A.one() if r == k else A.gen(coords[r]) for r in range(len(f))]
        sym_rels = []
        for col in M.relations.columns():
            acc = A.zero()
            for x, entry in zip(Xs, col):
                acc = acc + x * A.embed(entry)
            sym_rels.append(acc)
        out.append(Ideal(A, sym_rels) == chart.pi0_ideal())
    return out


# ---------------------------------------------------------------------------
# Simultaneous blow-ups


@dataclass
class SimultaneousAtlas:
    """Product charts indexed by tuples ``(k_1, ..., k_m)``."""

    base: DerivedLocus
    centers: tuple
    charts: dict
    classical: dict = field(default_factory=dict)

    @property
    def tor_independent(self):
        return all(self.classical.values())


def simultaneous_blowup(X, centers, check=True):
    """Derived fibre product over ``X`` of the blow-ups along each center."""
    if X.seq:
        raise ValueError("simultaneous blow-up needs a classical base (empty sequence)")
    C = X.ambient
    atlases = [blowup_atlas(X, c) for c in centers]
    charts = {}
    for idx in product(*[range(len(a)) for a in atlases]):
        Z = atlases[0].charts[idx[0]] if atlases else X
        for j in range(1, len(atlases)):
            Z, _ = derived_product(Z, atlases[j].charts[idx[j]], C, suffix=f"_{j + 1}")
        charts[idx] = Z
    out = SimultaneousAtlas(X, tuple(tuple(c) for c in centers), charts)
    if check:
        out.classical = {idx: is_classical(Z) for idx, Z in charts.items()}
    return out


# ---------------------------------------------------------------------------
# Strict transforms


@dataclass(frozen=True)
class StrictTransformChart:
    """``Bl_Z X`` inside ``Bl_Z Y`` on the chart of ``f_k``, cut by ``cut``."""

    k: int
    ambient_chart: DerivedLocus
    cut: tuple
    sub_chart: DerivedLocus
    matches: bool


def strict_transform_immersion(Y, X, center):
    """Charts of ``Bl_Z X -> Bl_Z Y`` for ``X = (C, h)`` inside ``Y = (C, ())``.

    On the chart of ``f_k`` the ambient blow-up has extra coordinates
    ``W_j`` with relations ``h_j - W_j f_k``; setting ``W = 0`` must give
    the chart of ``Bl_Z X``.
    """
    C = Y.ambient
    if Y.seq:
        raise ValueError("Y must be the classical ambient")
    if X.ambient != C:
        raise ValueError("X and Y must share the ambient ring")
    f = _normalize_center(C, center)
    h = X.seq
    BX = blowup_atlas(X, f)
    out = []
    for k, sub in enumerate(BX.charts):
        A = sub.ambient
        wnames = A.fresh_names([f"W{j + 1}" for j in range(len(h))])
        Ay = A.extend(wnames)
        fk = Ay.embed(f[k])
        seq = [Ay.embed(hj) - Ay.gen(w) * fk for hj, w in zip(h, wnames)]
        seq += [Ay.embed(x) for x in sub.seq[len(h):]]
        amb = DerivedLocus(Ay, tuple(seq))
        kill = RingMap.by_name(Ay, A, {w: 0 for w in wnames})
        restricted = Ideal(A, [kill(x) for x in seq])
        matches = restricted == sub.pi0_ideal()
        out.append(StrictTransformChart(k, amb, tuple(wnames), sub, matches))
    return out


# ---------------------------------------------------------------------------
# Deformation to the normal bundle


@dataclass(frozen=True)
class DeformationAtlas:
    """``n`` charts away from the strict transform of ``X x {0}`` plus the t-chart."""

    base: DerivedLocus
    center_seq: tuple
    charts: tuple  # k-charts, then the t-chart last
    t: str
    coordinates: tuple  # per chart: r -> name of X_r

    @property
    def t_chart(self):
        return self.charts[-1]


def deformation_atlas(X, center):
    C = X.ambient
    f = _normalize_center(C, center)
    n = len(f)
    names = C.fresh_names(["t"] + [f"X{r + 1}" for r in range(n)] + ["T", "U"])
    t, xs, T, U = names[0], names[1:n + 1], names[n + 1], names[n + 2]
    charts, coords = [], []
    for k in range(n):
        others = [r for r in range(n) if r != k]
        A = C.extend([t] + [xs[r] for r in others] + [T, U])
        fk = A.embed(f[k])
        seq = [A.embed(x) for x in X.seq]
        seq += [A.embed(f[r]) - A.gen(xs[r]) * fk for r in others]
        seq += [A.gen(t) - A.gen(T) * fk, A.gen(T) * A.gen(U) - 1]
        charts.append(DerivedLocus(A, tuple(seq)))
        coords.append({r: xs[r] for r in others})
    A = C.extend([t] + list(xs))
    seq = [A.embed(x) for x in X.seq]
    seq += [A.embed(f[r]) - A.gen(xs[r]) * A.gen(t) for r in range(n)]
    charts.append(DerivedLocus(A, tuple(seq)))
    coords.append({r: xs[r] for r in range(n)})
    return DeformationAtlas(X, f, tuple(charts), t, tuple(coords))


def restrict_t(D, value):
    """Base change of every chart along ``t -> value``."""
    out = []
    for chart in D.charts:
        A = chart.ambient
        keep = [v for v in A.variables if v != D.t]
        Rt = PresentedRing(keep, (), A.order)
        rels = [Rt.embed(r) for r in D.base.ambient.relations]
        Rt = PresentedRing(keep, rels, A.order)
        mp = RingMap.by_name(A, Rt, {D.t: value})
        out.append(base_change(chart, mp))
    return out


def graph_check(D):
    """At ``t = 1`` each chart is an open piece of ``X``: eliminating the
    chart coordinates from ``pi_0`` gives ``h`` (t-chart) or ``h``
    saturated at ``f_k`` (k-charts)."""
    X = D.base
    C = X.ambient
    base_ideal = Ideal(C, X.seq)
    out = []
    for k, chart in enumerate(restrict_t(D, 1)):
        A = chart.ambient
        extra = [v for v in A.variables if v not in C.variables]
        got = eliminate(chart.pi0_ideal(), extra)
        cover = got.ring
        if k < len(D.center_seq):
            want = saturation(base_ideal, D.center_seq[k])
        else:
            want = base_ideal
        want = Ideal(cover, [cover.embed(g) for g in want.groebner_basis()])
        out.append(got == want)
    return out


def normal_bundle_check(D):
    """At ``t = 0`` the t-chart is ``C[X_1..X_n] // (h, f)``."""
    X = D.base
    C = X.ambient
    chart = restrict_t(D, 0)[-1]
    A = chart.ambient
    expected = [A.embed(x) for x in X.seq] + [A.embed(x) for x in D.center_seq]
    want_ring = C.extend(list(D.coordinates[-1].values()))
    return A == want_ring and same_locus(chart, DerivedLocus(A, tuple(expected)))
