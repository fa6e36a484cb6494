"""Buchberger engine on raw sparse vectors.

A vector is a dict mapping ``(exponent_tuple, position)`` to a nonzero
rational.  Ideals are the special case where every position is 0.  The
public wrappers in :mod:`polyring`, :mod:`groebner` and :mod:`homalg`
convert to and from this representation; nothing here knows about
variable names.
"""

from fractions import Fraction

__all__ = [
    "TermOrder",
    "leading_term",
    "reduce_vector",
    "groebner",
    "syzygy_gb",
]


class TermOrder:
    """Order on module terms ``(exp, pos)``.

    Within a block the monomial is compared first, then the position
    (lower position is larger).  With ``split`` set, every term whose
    position is below ``split`` beats every term at or above it; this
    is the elimination order used for syzygies and lifts.
    """

    __slots__ = ("mono_key", "split", "_cache")

    def __init__(self, mono_key, split=None):
        self.mono_key = mono_key
        self.split = split
        self._cache = {}

    def key(self, term):
        exp, pos = term
        k = self._cache.get(exp)
        if k is None:
            k = self._cache[exp] = self.mono_key(exp)
        if self.split is None:
            return (k, -pos)
        return (pos < self.split, k, -pos)


def leading_term(vec, order):
    return max(vec, key=order.key)


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Elt:
    __slots__ = ("vec", "lexp", "lpos", "lc", "sugar")

    def __init__(self, vec, order, sugar=None):
        exp, pos = leading_term(vec, order)
        self.vec = vec
        self.lexp = exp
        self.lpos = pos
        self.lc = vec[(exp, pos)]
        if sugar is None:
            sugar = max(sum(e) for e, _ in vec)
        self.sugar = sugar


def _sub_multiple(p, factor, shift, vec):
    # p -= factor * x^shift * vec, in place
    for (e, ps), c in vec.items():
        t = (tuple(a + b for a, b in zip(e, shift)), ps)
        v = p.get(t, 0) - factor * c
        if v:
            p[t] = v
        else:
            p.pop(t, None)


def _find_reducer(exp, pos, basis):
    for b in basis:
        if b.lpos == pos and _divides(b.lexp, exp):
            return b
    return None


def reduce_vector(vec, basis, order, full=True):
    """Remainder of ``vec`` modulo the elements of ``basis``.

    ``basis`` holds ``_Elt`` records.  With ``full=False`` only the
    leading term is driven down; the rest of the vector is untouched.
    """
    p = dict(vec)
    rem = {}
    key = order.key
    while p:
        t = max(p, key=key)
        c = p[t]
        exp, pos = t
        b = _find_reducer(exp, pos, basis)
        if b is None:
            if not full:
                rem.update(p)
                return rem
            rem[t] = c
            del p[t]
            continue
        shift = tuple(x - y for x, y in zip(exp, b.lexp))
        _sub_multiple(p, c / b.lc, shift, b.vec)
    return rem


def _monic(vec, order):
    lc = vec[leading_term(vec, order)]
    if lc == 1:
        return vec
    inv = 1 / Fraction(lc)
    return {t: c * inv for t, c in vec.items()}


def _spoly(f, g):
    lcm = _lcm(f.lexp, g.lexp)
    p = {}
    sf = tuple(a - b for a, b in zip(lcm, f.lexp))
    sg = tuple(a - b for a, b in zip(lcm, g.lexp))
    _sub_multiple(p, -1 / Fraction(f.lc), sf, f.vec)
    _sub_multiple(p, 1 / Fraction(g.lc), sg, g.vec)
    deg = sum(lcm)
    sugar = max(f.sugar + deg - sum(f.lexp), g.sugar + deg - sum(g.lexp))
    return p, sugar


class _Buchberger:
    """Buchberger with Gebauer-Moeller pair management and sugar selection."""

    def __init__(self, order, ideal_mode):
        self.order = order
        self.ideal_mode = ideal_mode
        self.store = []  # every element ever added
        self.active = []  # indices into store forming the current basis
        self.pairs = {}  # (i, j) -> (sugar, lcm)

    def _active_elts(self):
        return [self.store[i] for i in self.active]

    def add(self, vec, sugar=None):
        h = _Elt(_monic(vec, self.order), self.order, sugar)
        t = len(self.store)
        self.store.append(h)
        self._update(t)

    def _update(self, t):
        h = self.store[t]
        store = self.store
        coprime_ok = self.ideal_mode
        cands = []
        for i in self.active:
            g = store[i]
            if g.lpos != h.lpos:
                continue
            cands.append((i, _lcm(g.lexp, h.lexp), coprime_ok and _coprime(g.lexp, h.lexp)))
        kept = []
        for idx, (i, lcm, cop) in enumerate(cands):
            if cop:
                kept.append((i, lcm, cop))
                continue
            dominated = False
            for jdx, (j, lcm2, _) in enumerate(cands):
                if jdx == idx:
                    continue
                # strict divisibility, or equal lcm with an earlier survivor
                if _divides(lcm2, lcm) and (lcm2 != lcm or jdx < idx):
                    dominated = True
                    break
            if not dominated:
                kept.append((i, lcm, cop))
        new_pairs = [(i, lcm) for i, lcm, cop in kept if not cop]

        # chain criterion on the old pairs
        for (i, j), (sug, lcm) in list(self.pairs.items()):
            gi = store[i]
            if gi.lpos != h.lpos or not _divides(h.lexp, lcm):
                continue
            if _lcm(gi.lexp, h.lexp) != lcm and _lcm(store[j].lexp, h.lexp) != lcm:
                del self.pairs[(i, j)]

        deg_h = sum(h.lexp)
        for i, lcm in new_pairs:
            g = store[i]
            d = sum(lcm)
            sug = max(g.sugar + d - sum(g.lexp), h.sugar + d - deg_h)
            self.pairs[(i, t)] = (sug, lcm)

        self.active = [i for i in self.active
                       if not (store[i].lpos == h.lpos and _divides(h.lexp, store[i].lexp))]
        self.active.append(t)

    def _next_pair(self):
        key = self.order.key
        best = best_k = None
        for (i, j), (sug, lcm) in self.pairs.items():
            k = (sug, key((lcm, self.store[i].lpos)), i, j)
            if best is None or k < best_k:
                best, best_k = (i, j), k
        return best

    def run(self):
        while self.pairs:
            i, j = self._next_pair()
            del self.pairs[(i, j)]
            s, sugar = _spoly(self.store[i], self.store[j])
            if not s:
                continue
            r = reduce_vector(s, self._active_elts(), self.order)
            if r:
                self.add(r, sugar)

    def reduced(self):
        order = self.order
        elts = sorted(self._active_elts(), key=lambda e: order.key((e.lexp, e.lpos)))
        out = []
        for idx, e in enumerate(elts):
            others = elts[:idx] + elts[idx + 1:]
            tail = {t: c for t, c in e.vec.items() if t != (e.lexp, e.lpos)}
            r = reduce_vector(tail, others, order)
            r[(e.lexp, e.lpos)] = e.lc
            out.append(_monic(r, order))
        out.sort(key=lambda v: order.key(leading_term(v, order)), reverse=True)
        return out


def groebner(vectors, order):
    """Reduced Groebner basis of the module spanned by ``vectors``.

    Output vectors are monic and sorted by decreasing leading term, so
    the result is a deterministic function of the spanned module and
    the order.
    """
    vecs = [dict(v) for v in vectors if v]
    if not vecs:
        return []
    ideal_mode = order.split is None and all(pos == 0 for v in vecs for _, pos in v)
    bb = _Buchberger(order, ideal_mode)
    vecs.sort(key=lambda v: order.key(leading_term(v, order)))
    for v in vecs:
        r = reduce_vector(v, bb._active_elts(), order)
        if r:
            bb.add(r)
    bb.run()
    return bb.reduced()


def make_basis(gb, order):
    """Wrap a reduced basis as reducer records for :func:`reduce_vector`."""
    return [_Elt(v, order, 0) for v in gb]


def syzygy_gb(vectors, rank, nvars, mono_key, fixed=()):
    """Groebner basis for the syzygies of ``vectors`` in a free module.

    ``vectors`` live in positions ``0..rank-1``.  Each one is tagged by a
    unit vector at position ``rank + j``; ``fixed`` vectors (relation
    multiples) are added untagged.  Returns ``(gb, order)``: elements of
    ``gb`` whose leading position is ``>= rank`` carry syzygies in their
    tag part, and reducing ``(v, 0)`` by ``gb`` exposes a lift of ``v``.
    """
    order = TermOrder(mono_key, split=rank)
    zero = (0,) * nvars
    gens = []
    for j, v in enumerate(vectors):
        w = dict(v)
        w[(zero, rank + j)] = Fraction(1)
        gens.append(w)
    gens.extend(dict(f) for f in fixed if f)
    return groebner(gens, order), order
