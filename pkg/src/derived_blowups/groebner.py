"""Ideals in presented rings: Groebner bases, membership, syzygies,
elimination and Krull dimension.

An ideal ``I`` of ``R = P/J`` is handled through its preimage ``I + J``
in the polynomial cover ``P``; the reduced Groebner basis of that
preimage is the canonical fingerprint used for equality.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from . import _core
from .polyring import MonomialOrder, Poly, PresentedRing, _from_vec, _to_vec

__all__ = [
    "Ideal",
    "SyzygyModule",
    "groebner_basis",
    "ideal_member",
    "ideal_equal",
    "syzygies",
    "lift",
    "eliminate",
    "krull_dim",
    "ideal_quotient",
    "saturation",
    "intersect",
]


class Ideal:
    """Ideal of a :class:`PresentedRing` given by generators.

    Generators are stored in normal form with zeros dropped.
    """

    def __init__(self, ring, generators=()):
        self.ring = ring
        gens = []
        for g in generators:
            g = ring.nf(ring(g))
            if g and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)

    @cached_property
    def _gb_vecs(self):
        ring = self.ring
        vecs = [_to_vec(g) for g in self.generators] + [_to_vec(g) for g in ring.groebner]
        return _core.groebner(vecs, ring._term_order)

    @cached_property
    def _reducers(self):
        return _core.make_basis(self._gb_vecs, self.ring._term_order)

    def groebner_basis(self):
        """Reduced basis of ``I + J`` in the polynomial cover."""
        return tuple(_from_vec(self.ring.variables, v) for v in self._gb_vecs)

    def reduce(self, p):
        p = self.ring(p)
        if not p:
            return p
        r = _core.reduce_vector(_to_vec(p), self._reducers, self.ring._term_order)
        return _from_vec(self.ring.variables, r)

    def contains(self, p):
        return not self.reduce(p)

    def is_unit(self):
        return any(g.is_constant() for g in self.groebner_basis())

    def is_zero(self):
        return not self.generators

    def __add__(self, other):
        if isinstance(other, Ideal):
            _check_same_ring(self, other)
            other = other.generators
        return Ideal(self.ring, self.generators + tuple(self.ring(g) for g in other))

    def __mul__(self, other):
        _check_same_ring(self, other)
        return Ideal(self.ring, [a * b for a in self.generators for b in other.generators])

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    def __hash__(self):
        return hash((self.ring.variables, frozenset(self.groebner_basis())))

    def __contains__(self, p):
        return self.contains(p)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    def __repr__(self):
        return f"Ideal{self} in {self.ring}"


def _check_same_ring(a, b):
    if a.ring != b.ring:
        raise ValueError(f"ring mismatch: {a.ring} vs {b.ring}")


def groebner_basis(ideal):
    return Ideal(ideal.ring, ideal.groebner_basis())


def ideal_member(p, ideal):
    if isinstance(p, Poly) and p.vars != ideal.ring.variables:
        raise ValueError("ring mismatch")
    return ideal.contains(p)


def ideal_equal(a, b):
    _check_same_ring(a, b)
    if a is b:
        return True
    return a._gb_vecs == b._gb_vecs


@dataclass(frozen=True)
class SyzygyModule:
    """Generators of ``{v : sum v_i f_i = 0 in R}`` for a fixed tuple ``f``."""

    ring: PresentedRing
    elements: tuple  # the tuple f
    generators: tuple  # tuple of tuples of Poly, one entry per element

    def is_zero(self):
        return not self.generators

    def check(self):
        R = self.ring
        for v in self.generators:
            total = R.zero()
            for c, f in zip(v, self.elements):
                total = total + c * f
            if not R.is_zero(total):
                return False
        return True


def _syzygy_vectors(ring, columns, rank):
    """Kernel generators of the map ``R^k -> R^rank`` given by ``columns``.

    ``columns`` are vectors (raw dicts) in positions ``0..rank-1``.
    Relation multiples ``g * e_i`` are added so the kernel is taken over
    the quotient ring.  Returns a list of raw vectors in positions
    ``0..k-1``, each reduced modulo the relations and nonzero.
    """
    k = len(columns)
    n = ring.ngens
    fixed = []
    for g in ring.groebner:
        gv = _to_vec(g)
        for i in range(rank):
            fixed.append({(e, i): c for (e, _), c in gv.items()})
    gb, order = _core.syzygy_gb(columns, rank, n, ring.order.key, fixed)
    out = []
    for v in gb:
        exp, pos = _core.leading_term(v, order)
        if pos < rank:
            continue
        w = {}
        for (e, ps), c in v.items():
            w[(e, ps - rank)] = c
        w = _reduce_mod_relations(ring, w, k)
        if w and w not in out:
            out.append(w)
    return out


def _reduce_mod_relations(ring, vec, rank):
    if not ring.relations:
        return vec
    out = {}
    for i in range(rank):
        comp = {(e, 0): c for (e, ps), c in vec.items() if ps == i}
        if not comp:
            continue
        r = _core.reduce_vector(comp, ring._reducers, ring._term_order)
        for (e, _), c in r.items():
            out[(e, i)] = c
    return out


def syzygies(f, ring):
    """Generating set of the syzygy module of ``f`` over ``ring``.

    Computed over the polynomial cover on ``f`` together with the
    relation basis, then truncated to the ``f`` part.  Every emitted
    syzygy is checked to vanish in ``ring``.
    """
    f = tuple(ring.nf(ring(x)) for x in f)
    cols = [_to_vec(x) for x in f]
    vecs = _syzygy_vectors(ring, cols, 1)
    gens = tuple(tuple(_from_vec(ring.variables, v, i) for i in range(len(f))) for v in vecs)
    mod = SyzygyModule(ring, f, gens)
    if not mod.check():
        raise AssertionError("syzygy computation produced a non-syzygy")
    return mod


def lift(p, f, ring):
    """Coefficients ``c`` with ``p = sum c_i f_i`` in ``ring``, or ``None``."""
    f = [ring.nf(ring(x)) for x in f]
    p = ring.nf(ring(p))
    n = ring.ngens
    if not p:
        return tuple(ring.zero() for _ in f)
    fixed = [_to_vec(g) for g in ring.groebner]
    gb, order = _core.syzygy_gb([_to_vec(x) for x in f], 1, n, ring.order.key, fixed)
    basis = _core.make_basis(gb, order)
    r = _core.reduce_vector(_to_vec(p), basis, order)
    if any(pos == 0 for (_, pos) in r):
        return None
    coeffs = tuple(ring.nf(-_from_vec(ring.variables, r, 1 + j)) for j in range(len(f)))
    total = ring.zero()
    for c, x in zip(coeffs, f):
        total = total + c * x
    assert ring.equal(total, p)
    return coeffs


def eliminate(ideal, drop):
    """Contraction of ``I + J`` to the polynomial ring in the kept variables."""
    ring = ideal.ring
    drop = [ring.variables[d] if isinstance(d, int) else d for d in drop]
    for d in drop:
        if d not in ring.variables:
            raise ValueError(f"unknown variable {d!r}")
    keep = [v for v in ring.variables if v not in drop]
    order_vars = tuple(drop) + tuple(keep)
    elim = PresentedRing(order_vars, (), MonomialOrder("block", len(drop)))
    gens = [elim.embed(g) for g in ideal.generators] + [elim.embed(g) for g in ring.groebner]
    gb = _core.groebner([_to_vec(g) for g in gens], elim._term_order)
    target = PresentedRing(tuple(keep), (), ring.order)
    nd = len(drop)
    out = []
    for v in gb:
        if all(not any(e[:nd]) for (e, _) in v):
            out.append(Poly._raw(target.variables, {e[nd:]: c for (e, _), c in v.items()}))
    return Ideal(target, out)


def krull_dim(ideal):
    """Krull dimension of ``R / I``; -1 for the unit ideal.

    Read off the leading-term ideal: the largest set of variables
    containing no leading monomial's support.
    """
    gb = ideal.groebner_basis()
    ring = ideal.ring
    if any(g.is_constant() for g in gb):
        return -1
    order = ring.order
    supports = [frozenset(i for i, k in enumerate(g.leading_monomial(order)) if k) for g in gb]
    n = ring.ngens
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def ideal_quotient(ideal, g):
    """``(I : g)`` via the syzygies of ``(g, I generators)``."""
    ring = ideal.ring
    g = ring(g)
    syz = syzygies((g,) + ideal.generators, ring)
    return Ideal(ring, [v[0] for v in syz.generators])


def saturation(ideal, g):
    """``(I : g^infinity)`` by iterating ideal quotients until stable."""
    cur = ideal
    while True:
        nxt = ideal_quotient(cur, g)
        if ideal_equal(nxt, cur):
            return cur
        cur = nxt


def intersect(a, b):
    """``I cap K``: first coordinates of the syzygies of the columns
    ``(1, 1)``, ``(a_i, 0)``, ``(0, b_j)`` in ``R^2``."""
    _check_same_ring(a, b)
    ring = a.ring
    one = ring.one()
    cols = [_to_vec(one, 0) | _to_vec(one, 1)]
    cols += [_to_vec(x, 0) for x in a.generators]
    cols += [_to_vec(x, 1) for x in b.generators]
    vecs = _syzygy_vectors(ring, cols, 2)
    return Ideal(ring, [_from_vec(ring.variables, v, 0) for v in vecs])
