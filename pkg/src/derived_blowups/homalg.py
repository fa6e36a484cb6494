"""Finitely presented modules, free complexes, homology, Fitting ideals,
bounded free resolutions and Tor.

Every module is a cokernel ``R^k -> R^m``; kernels, images and
subquotients come back as new presentations built from syzygies.
"""

import warnings
from dataclasses import dataclass, field
from itertools import combinations

from . import _core
from .groebner import Ideal, _syzygy_vectors
from .polyring import PresentedRing, _from_vec

__all__ = [
    "Matrix",
    "FpModule",
    "FreeComplex",
    "ComplexError",
    "ResolutionTruncated",
    "kernel",
    "preimage",
    "subquotient",
    "in_span",
    "homology",
    "is_zero_module",
    "fitting_ideal",
    "free_resolution",
    "tor",
    "determinant",
]


class ComplexError(ValueError):
    """Differentials do not compose to zero or have incompatible shapes."""


class ResolutionTruncated(UserWarning):
    """The length bound ran out before the syzygies vanished."""


@dataclass(frozen=True)
class Matrix:
    """``nrows x ncols`` matrix of polynomials; columns are images of basis vectors."""

    ring: PresentedRing
    nrows: int
    ncols: int
    rows: tuple

    @classmethod
    def from_rows(cls, ring, rows, ncols=None):
        rows = tuple(tuple(ring.nf(ring(x)) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        return cls(ring, len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, ring, columns, nrows):
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        rows = tuple(tuple(c[i] for c in columns) for i in range(nrows))
        return cls.from_rows(ring, rows, len(columns))

    @classmethod
    def zero(cls, ring, nrows, ncols):
        z = ring.zero()
        return cls(ring, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero(), ring.one()
        return cls(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    def column(self, j):
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def entry(self, i, j):
        return self.rows[i][j]

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        R = self.ring
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = R.zero()
                for k in range(self.ncols):
                    a = self.rows[i][k]
                    if a:
                        b = other.rows[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return Matrix.from_rows(R, rows, other.ncols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        rows = tuple(a + b for a, b in zip(self.rows, other.rows))
        return Matrix(self.ring, self.nrows, self.ncols + other.ncols, rows)

    def drop_zero_columns(self):
        keep = [c for c in self.columns() if any(c)]
        return Matrix.from_columns(self.ring, keep, self.nrows)

    def is_zero(self):
        return all(not x for r in self.rows for x in r)

    def kron_identity(self, p):
        """``self (x) I_p``."""
        R = self.ring
        z = R.zero()
        rows = []
        for a in range(self.nrows):
            for b in range(p):
                row = []
                for a2 in range(self.ncols):
                    for b2 in range(p):
                        row.append(self.rows[a][a2] if b == b2 else z)
                rows.append(row)
        return Matrix.from_rows(R, rows, self.ncols * p)

    def identity_kron(self, f):
        """``I_f (x) self``."""
        R = self.ring
        z = R.zero()
        rows = []
        for a in range(f):
            for b in range(self.nrows):
                row = []
                for a2 in range(f):
                    for c in range(self.ncols):
                        row.append(self.rows[b][c] if a == a2 else z)
                rows.append(row)
        return Matrix.from_rows(R, rows, f * self.ncols)

    def __str__(self):
        if not self.rows:
            return f"[0 x {self.ncols}]"
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)


def _col_vec(col):
    vec = {}
    for i, x in enumerate(col):
        for e, c in x.terms.items():
            vec[(e, i)] = c
    return vec


def _vec_col(ring, vec, n):
    return tuple(_from_vec(ring.variables, vec, i) for i in range(n))


def _relation_multiples(ring, rank):
    out = []
    for g in ring.groebner:
        for i in range(rank):
            out.append({(e, i): c for e, c in g.terms.items()})
    return out


class _Span:
    """Groebner basis of a submodule of ``R^n`` (relations of ``R`` included)."""

    def __init__(self, ring, columns, n):
        self.ring = ring
        self.n = n
        self.order = _core.TermOrder(ring.order.key)
        vecs = [_col_vec(c) for c in columns] + _relation_multiples(ring, n)
        self.gb = _core.groebner(vecs, self.order)
        self.basis = _core.make_basis(self.gb, self.order)

    def reduce(self, col):
        return _core.reduce_vector(_col_vec(col), self.basis, self.order)

    def contains(self, col):
        return not self.reduce(col)

    def is_everything(self):
        units = set()
        for v in self.gb:
            exp, pos = _core.leading_term(v, self.order)
            if not any(exp):
                units.add(pos)
        return len(units) == self.n


def kernel(M):
    """Matrix whose columns generate ``ker(M: R^ncols -> R^nrows)``."""
    R = M.ring
    if M.ncols == 0:
        return Matrix.zero(R, 0, 0)
    vecs = _syzygy_vectors(R, [_col_vec(c) for c in M.columns()], M.nrows)
    cols = [_vec_col(R, v, M.ncols) for v in vecs]
    K = Matrix.from_columns(R, cols, M.ncols)
    if not (M @ K).is_zero():
        raise AssertionError("kernel computation produced a non-cycle")
    return K


def preimage(A, U):
    """Columns generating ``{x : A x in span(U)}``."""
    if A.nrows != U.nrows:
        raise ValueError("row count mismatch")
    K = kernel(A.hstack(U))
    cols = [c[: A.ncols] for c in K.columns()]
    return Matrix.from_columns(A.ring, cols, A.ncols).drop_zero_columns() if cols else \
        Matrix.zero(A.ring, A.ncols, 0)


def in_span(U, col):
    """Is the column ``col`` in the span of the columns of ``U``?"""
    return _Span(U.ring, U.columns(), U.nrows).contains(col)


@dataclass(frozen=True)
class FpModule:
    """``coker(relations : R^k -> R^rank)``."""

    ring: PresentedRing
    rank: int
    relations: Matrix

    def __post_init__(self):
        if self.relations.nrows != self.rank:
            raise ValueError("presentation matrix has wrong number of rows")

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank, Matrix.zero(ring, rank, 0))

    @classmethod
    def cokernel(cls, M):
        return cls(M.ring, M.nrows, M)

    @classmethod
    def quotient_ring(cls, ring, gens):
        return cls(ring, 1, Matrix.from_rows(ring, [list(gens)], len(gens)))

    def is_zero(self):
        return is_zero_module(self)

    def with_redundant_relation(self, coeffs):
        """Same module, presented with one extra relation that is a
        combination of the existing ones."""
        R = self.ring
        extra = []
        for i in range(self.rank):
            acc = R.zero()
            for j, c in enumerate(coeffs):
                acc = acc + R(c) * self.relations.rows[i][j]
            extra.append(acc)
        col = Matrix.from_columns(R, [extra], self.rank)
        return FpModule(R, self.rank, self.relations.hstack(col))

    def presentation_rows(self):
        return [[str(x) for x in r] for r in self.relations.rows]

    def __str__(self):
        return f"coker(R^{self.relations.ncols} -> R^{self.rank}) over {self.ring}"


def subquotient(G, U):
    """``(span G + span U) / span U`` presented on the columns of ``G``."""
    rels = preimage(G, U)
    return FpModule(G.ring, G.ncols, rels)


def is_zero_module(M):
    """``coker = 0``: the relation columns plus ``J R^m`` span all of ``R^m``."""
    if M.rank == 0:
        return True
    return _Span(M.ring, M.relations.columns(), M.rank).is_everything()


@dataclass(frozen=True)
class FreeComplex:
    """``C_n -> ... -> C_1 -> C_0`` with ``differentials[i-1] = d_i : C_i -> C_{i-1}``."""

    ring: PresentedRing
    differentials: tuple
    base_rank: int = None
    truncated: bool = field(default=False, compare=False)

    def __post_init__(self):
        ds = tuple(self.differentials)
        object.__setattr__(self, "differentials", ds)
        if self.base_rank is None:
            if not ds:
                raise ComplexError("an empty complex needs base_rank")
            object.__setattr__(self, "base_rank", ds[0].nrows)
        if ds and ds[0].nrows != self.base_rank:
            raise ComplexError("d_1 target does not match base rank")
        for a, b in zip(ds, ds[1:]):
            if a.ncols != b.nrows:
                raise ComplexError("consecutive differentials have incompatible shapes")
            if not (a @ b).is_zero():
                raise ComplexError("d o d is not zero")

    @property
    def length(self):
        return len(self.differentials)

    @property
    def ranks(self):
        return (self.base_rank,) + tuple(d.ncols for d in self.differentials)

    def d(self, i):
        """``d_i``, with zero maps outside the stored range."""
        ranks = self.ranks
        if 1 <= i <= self.length:
            return self.differentials[i - 1]
        src = ranks[i] if 0 <= i < len(ranks) else 0
        tgt = ranks[i - 1] if 0 <= i - 1 < len(ranks) else 0
        return Matrix.zero(self.ring, tgt, src)

    def euler_characteristic(self):
        return sum((-1) ** i * r for i, r in enumerate(self.ranks))


def cycles(C, i):
    if i == 0:
        return Matrix.identity(C.ring, C.base_rank)
    return kernel(C.d(i))


def homology(C, i):
    """``H_i = ker d_i / im d_{i+1}`` as a presentation on kernel generators."""
    if i < 0 or i > C.length:
        raise IndexError(f"homology degree {i} outside 0..{C.length}")
    if i == 0:
        return FpModule.cokernel(C.d(1))
    Z = cycles(C, i)
    return subquotient(Z, C.d(i + 1))


def homology_vanishes(C, i):
    """Direct test ``ker d_i ⊆ im d_{i+1}`` without building a presentation."""
    if i == 0:
        return is_zero_module(FpModule.cokernel(C.d(1)))
    Z = cycles(C, i)
    if Z.ncols == 0:
        return True
    B = _Span(C.ring, C.d(i + 1).columns(), C.d(i).ncols)
    return all(B.contains(z) for z in Z.columns())


def determinant(rows, ring):
    """Laplace expansion along the first row; fine for the small minors used here."""
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return rows[0][0]
    total = ring.zero()
    for j, a in enumerate(rows[0]):
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * determinant(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return ring.nf(total)


def minors(M, size):
    """All ``size x size`` minors as ``(rows, cols, value)``."""
    R = M.ring
    out = []
    for rs in combinations(range(M.nrows), size):
        for cs in combinations(range(M.ncols), size):
            sub = [[M.rows[i][j] for j in cs] for i in rs]
            out.append((rs, cs, determinant(sub, R)))
    return out


def fitting_ideal(M, r):
    """Ideal of ``(rank - r)``-minors of the presentation matrix."""
    if r < 0:
        raise ValueError("Fitting index must be non-negative")
    R = M.ring
    size = M.rank - r
    if size <= 0:
        return Ideal(R, [R.one()])
    if size > M.relations.ncols:
        return Ideal(R, [])
    return Ideal(R, [v for _, _, v in minors(M.relations, size)])


def free_resolution(M, length_bound):
    """Free resolution ``... -> F_1 -> F_0 -> M`` by iterated syzygies.

    Stops when a syzygy module is zero.  If ``length_bound`` runs out
    first the complex is returned with ``truncated=True`` and a
    :class:`ResolutionTruncated` warning.
    """
    R = M.ring
    d = M.relations.drop_zero_columns()
    ds = []
    while d.ncols:
        if len(ds) == length_bound:
            warnings.warn(f"free resolution not finished after {length_bound} steps",
                          ResolutionTruncated, stacklevel=2)
            return FreeComplex(R, ds, M.rank, truncated=True)
        ds.append(d)
        d = kernel(d).drop_zero_columns()
    return FreeComplex(R, ds, M.rank)


def tor(M, N, i, length_bound=None):
    """``Tor_i(M, N)`` from a free resolution of ``M`` tensored with ``N``."""
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    if i < 0:
        raise ValueError("Tor degree must be non-negative")
    R = M.ring
    if length_bound is None:
        length_bound = i + 2
    if length_bound < i + 1:
        raise ValueError("length bound too small for this Tor degree")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionTruncated)
        F = free_resolution(M, length_bound)
    p = N.rank
    B = N.relations
    ranks = F.ranks

    def rels(j):
        return B.identity_kron(ranks[j] if j < len(ranks) else 0)

    if i == 0:
        G = Matrix.identity(R, ranks[0] * p)
    else:
        G = preimage(F.d(i).kron_identity(p), rels(i - 1))
    U = F.d(i + 1).kron_identity(p).hstack(rels(i))
    return subquotient(G, U)
