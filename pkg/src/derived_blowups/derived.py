"""Derived zero loci ``A // (f_1, ..., f_n)`` presented by their Koszul complex.

A :class:`DerivedLocus` is the pair (ambient ring, sequence).  Its
homotopy modules are the Koszul homology modules, ``pi_0`` is the
quotient ring, and the locus is classical exactly when the sequence is
Koszul-regular.
"""

from dataclasses import dataclass, field
from itertools import combinations

from .groebner import Ideal, krull_dim
from .homalg import (
    FpModule,
    FreeComplex,
    Matrix,
    fitting_ideal,
    homology,
    homology_vanishes,
    is_zero_module,
    minors,
)
from .polyring import PresentedRing, RingMap

__all__ = [
    "DerivedLocus",
    "GeneralizedDivisor",
    "DivisorChart",
    "RankCertificationError",
    "NotFlatError",
    "koszul_complex",
    "homotopy_module",
    "is_classical",
    "is_regular_sequence",
    "classicality_report",
    "base_change",
    "derived_product",
    "codim_virtual",
    "codim_topological",
    "derived_structure_from_generators",
    "divisor_from_generalized",
    "localize",
    "same_locus",
]


@dataclass(frozen=True)
class DerivedLocus:
    """``Spec(A // (f_1, ..., f_n))`` for ``A = ambient``.

    ``note`` records how the sequence was chosen when that matters
    (the derived structure depends on it, not only on ``pi_0``).
    """

    ambient: PresentedRing
    seq: tuple = ()
    note: str = field(default="", compare=False)

    def __post_init__(self):
        A = self.ambient
        object.__setattr__(self, "seq", tuple(A.nf(A(f)) for f in self.seq))

    @property
    def length(self):
        return len(self.seq)

    def pi0_ideal(self):
        return Ideal(self.ambient, self.seq)

    def pi0_ring(self):
        return self.ambient.quotient(self.seq)

    def is_empty(self):
        """``pi_0 = 0``."""
        return self.pi0_ideal().is_unit()

    def append(self, *extra):
        return DerivedLocus(self.ambient, self.seq + tuple(self.ambient(e) for e in extra))

    def __str__(self):
        return f"{self.ambient} // (" + ", ".join(str(f) for f in self.seq) + ")"


def same_locus(a, b):
    """Equality of presentation data: same ambient ring and the same
    sequence elementwise in the ambient."""
    if a.ambient != b.ambient or a.length != b.length:
        return False
    return all(a.ambient.equal(x, b.ambient(y)) for x, y in zip(a.seq, b.seq))


def _wedge_basis(n, k):
    return list(combinations(range(n), k))


def koszul_complex(Z):
    """Koszul complex with ``C_k`` free on ``k``-subsets and
    ``d(e_S) = sum_j (-1)^j f_{s_j} e_{S - s_j}``."""
    A = Z.ambient
    f = Z.seq
    n = len(f)
    ds = []
    for k in range(1, n + 1):
        src = _wedge_basis(n, k)
        tgt = _wedge_basis(n, k - 1)
        index = {s: i for i, s in enumerate(tgt)}
        rows = [[A.zero() for _ in src] for _ in tgt]
        for j, S in enumerate(src):
            for pos, s in enumerate(S):
                T = S[:pos] + S[pos + 1:]
                sign = 1 if pos % 2 == 0 else -1
                rows[index[T]][j] = rows[index[T]][j] + sign * f[s]
        ds.append(Matrix.from_rows(A, rows, len(src)))
    return FreeComplex(A, ds, 1)


def homotopy_module(Z, i):
    """``pi_i`` of the derived locus, as a presentation."""
    if i < 0:
        raise ValueError("homotopy degree must be non-negative")
    if i > Z.length:
        return FpModule.free(Z.ambient, 0)
    return homology(koszul_complex(Z), i)


def classicality_report(Z):
    """``{i: H_i vanishes}`` for ``1 <= i <= n`` (direct containment test)."""
    K = koszul_complex(Z)
    return {i: homology_vanishes(K, i) for i in range(1, Z.length + 1)}


def is_classical(Z):
    """All higher Koszul homology vanishes (checked in every degree)."""
    return all(classicality_report(Z).values())


def is_regular_sequence(Z):
    """Koszul-regularity, decided from the full presentations of ``pi_i``."""
    return all(is_zero_module(homotopy_module(Z, i)) for i in range(1, Z.length + 1))


def base_change(Z, phi):
    if phi.source != Z.ambient:
        raise ValueError("base change map does not start at the ambient ring")
    return DerivedLocus(phi.target, tuple(phi(f) for f in Z.seq), Z.note)


class NotFlatError(ValueError):
    """An ambient is not recognisably a polynomial extension of the base."""


def _check_polynomial_extension(A, S):
    missing = [v for v in S.variables if v not in A.variables]
    if missing:
        raise NotFlatError(f"{A} does not contain the base variables {missing}")
    P = A.polynomial_cover()
    if Ideal(P, A.relations) != Ideal(P, [P.embed(r) for r in S.relations]):
        raise NotFlatError(f"{A} has relations beyond those of the base {S}")


def derived_product(Z1, Z2, base, suffix="_2"):
    """Derived fibre product of two loci whose ambients are polynomial
    extensions of ``base``.

    The new variables of ``Z2`` that clash with earlier names are renamed
    by appending ``suffix`` (plus a counter if needed).  Returns the
    locus and the renaming applied to ``Z2``'s variables.
    """
    _check_polynomial_extension(Z1.ambient, base)
    _check_polynomial_extension(Z2.ambient, base)
    extra1 = [v for v in Z1.ambient.variables if v not in base.variables]
    extra2 = [v for v in Z2.ambient.variables if v not in base.variables]
    taken = set(base.variables) | set(extra1)
    rename = {}
    for v in extra2:
        cand = v
        if cand in taken:
            cand = v + suffix
            k = 2
            while cand in taken:
                cand = f"{v}{suffix}_{k}"
                k += 1
        taken.add(cand)
        rename[v] = cand
    amb = base.extend(extra1 + [rename[v] for v in extra2])
    m1 = RingMap.by_name(Z1.ambient, amb)
    m2 = RingMap(Z2.ambient, amb,
                 [amb.gen(rename.get(v, v)) for v in Z2.ambient.variables])
    seq = tuple(m1(f) for f in Z1.seq) + tuple(m2(f) for f in Z2.seq)
    return DerivedLocus(amb, seq), rename


def codim_virtual(Z):
    return Z.length


def codim_topological(Z):
    """``dim(ambient) - dim(pi_0)``; undefined on the empty locus."""
    A = Z.ambient
    d_pi0 = krull_dim(Z.pi0_ideal())
    if d_pi0 < 0:
        raise ValueError("topological codimension of an empty locus is undefined")
    return krull_dim(Ideal(A, [])) - d_pi0


def derived_structure_from_generators(R, gens):
    """Derived structure on ``V(gens)`` induced by the surjection
    ``R^m -> (gens)``.  Different generating sets of the same ideal give
    in general different derived loci with the same ``pi_0``."""
    gens = tuple(R(g) for g in gens)
    note = "derived structure from the surjection R^%d -> (%s)" % (
        len(gens), ", ".join(str(g) for g in gens))
    return DerivedLocus(R, gens, note)


def localize(R, g, name="w"):
    """Rabinowitsch localization ``R[w] / (w g - 1)``; returns the ring and ``w``."""
    (w,) = R.fresh_names([name])
    Rg = R.extend([w])
    Rg = PresentedRing(Rg.variables, list(Rg.relations) + [Rg.gen(w) * Rg.embed(R(g)) - 1], R.order)
    return Rg, w


class RankCertificationError(ValueError):
    """The module is not locally free of rank one."""


@dataclass(frozen=True)
class GeneralizedDivisor:
    """A rank-one locally free module with a section ``s : L -> R``.

    ``section`` is a row vector: the images of the generators of ``L``.
    """

    line_module: FpModule
    section: tuple

    def __post_init__(self):
        L = self.line_module
        R = L.ring
        object.__setattr__(self, "section", tuple(R.nf(R(x)) for x in self.section))
        if len(self.section) != L.rank:
            raise ValueError("section must have one entry per generator")
        for col in L.relations.columns():
            acc = R.zero()
            for s, c in zip(self.section, col):
                acc = acc + s * c
            if not R.is_zero(acc):
                raise ValueError("section does not kill the relations")

    def certify(self):
        """Check ``Fitt_0 = 0`` and ``Fitt_1 = (1)``."""
        L = self.line_module
        if not fitting_ideal(L, 0).is_zero():
            raise RankCertificationError("Fitt_0 is nonzero: not locally free of rank 1")
        if not fitting_ideal(L, 1).is_unit():
            raise RankCertificationError("Fitt_1 is not the unit ideal: rank exceeds 1")


@dataclass(frozen=True)
class DivisorChart:
    """One chart of the virtual divisor cut out by a generalized divisor."""

    locus: DerivedLocus
    minor: object  # the inverted (rank-1)-minor, in the base ring
    generator: int  # index of the basis vector of L trivialising it here
    trivialization: tuple  # e_j = trivialization[j] * e_generator on the chart

    def round_trip(self, D):
        """Check that ``(L, s)`` restricted to the chart is ``(R, d)``:
        every relation of ``L`` dies under the trivialisation and
        ``s_j = c_j * d``."""
        Rg = self.locus.ambient
        L = D.line_module
        c = self.trivialization
        for col in L.relations.columns():
            acc = Rg.zero()
            for cj, x in zip(c, col):
                acc = acc + cj * Rg.embed(x)
            if not Rg.is_zero(acc):
                return False
        d = self.locus.seq[0]
        return all(Rg.equal(Rg.embed(s), cj * d) for s, cj in zip(D.section, c))


def divisor_from_generalized(D):
    """Charts of the derived zero locus of the section.

    Cover: localizations at the nonzero maximal minors of the
    presentation, which generate the unit ideal when the rank-one
    certificate holds.  A free rank-one module needs no cover.
    """
    D.certify()
    L = D.line_module
    R = L.ring
    A = L.relations
    m = L.rank
    if m == 1 and A.is_zero():
        triv = (R.one(),)
        return [DivisorChart(DerivedLocus(R, (D.section[0],)), R.one(), 0, triv)]
    charts = []
    for rows, cols, g in minors(A, m - 1):
        if not g:
            continue
        (i,) = [r for r in range(m) if r not in rows]
        Rg, w = localize(R, g)
        W = Rg.gen(w)
        # sum_{j != i} B[j][c] e_j = -A[i][c] e_i for c in cols, B = A[rows, cols]
        B = [[Rg.embed(A.rows[r][c]) for c in cols] for r in rows]
        rhs = [-Rg.embed(A.rows[i][c]) for c in cols]
        coeffs = _solve_transpose(B, rhs, W, Rg)
        triv = [None] * m
        triv[i] = Rg.one()
        for r, cj in zip(rows, coeffs):
            triv[r] = cj
        d = Rg.embed(D.section[i])
        chart = DivisorChart(DerivedLocus(Rg, (d,)), g, i, tuple(triv))
        if not chart.round_trip(D):
            raise AssertionError("trivialisation does not reproduce the divisor")
        charts.append(chart)
    return charts


def _solve_transpose(B, rhs, inv_det, ring):
    """Solve ``B^T x = rhs`` using the adjugate; ``inv_det`` is ``1/det B``."""
    from .homalg import determinant

    n = len(B)
    x = []
    for j in range(n):
        # Cramer on B^T: replace column j of B^T (= row j of B) by rhs
        Bt = [[B[c][r] for c in range(n)] for r in range(n)]
        for r in range(n):
            Bt[r][j] = rhs[r]
        x.append(ring.nf(determinant(Bt, ring) * inv_det))
    return x
