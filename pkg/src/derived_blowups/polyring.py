"""Exact polynomial arithmetic over Q and finitely presented Q-algebras.

Polynomials are immutable sparse maps ``exponent tuple -> Fraction``
tagged with the tuple of variable names they are written in.  A
:class:`PresentedRing` is a polynomial ring modulo a relation ideal;
residue classes are compared through normal forms against the reduced
Groebner basis of the relations.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import _core
from ._syntax import ParseError, TokenStream, parse_expression, tokenize

__all__ = [
    "MonomialOrder",
    "Poly",
    "PresentedRing",
    "RingMap",
    "RingMapError",
    "ring_new",
    "normal_form",
    "ringmap_new",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _degrevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


@dataclass(frozen=True)
class MonomialOrder:
    """``degrevlex`` (default), ``lex``, or ``block`` with a split point.

    A block order compares the first ``split`` exponents by degrevlex and
    breaks ties with degrevlex on the rest; it eliminates the first block.
    """

    kind: str = "degrevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.split < 0:
            raise ValueError("block split must be non-negative")

    @classmethod
    def parse(cls, spec):
        if isinstance(spec, MonomialOrder):
            return spec
        if spec is None:
            return cls()
        m = re.fullmatch(r"\s*block\s*\(\s*(\d+)\s*\)\s*", spec)
        if m:
            return cls("block", int(m.group(1)))
        return cls(spec.strip())

    def key(self, exp):
        if self.kind == "degrevlex":
            return _degrevlex_key(exp)
        if self.kind == "lex":
            return exp
        s = self.split
        return (_degrevlex_key(exp[:s]), _degrevlex_key(exp[s:]))

    def __str__(self):
        return f"block({self.split})" if self.kind == "block" else self.kind


DEGREVLEX = MonomialOrder()


class Poly:
    """Immutable polynomial with rational coefficients.

    ``vars`` is the ring context (a tuple of variable names); arithmetic
    between polynomials written in different contexts is an error.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for exp, c in (terms or {}).items():
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match {n} variables")
            if c:
                clean[tuple(exp)] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars, terms):
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, vars, c):
        vars = tuple(vars)
        c = Fraction(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, vars, i):
        vars = tuple(vars)
        if isinstance(i, str):
            i = vars.index(i)
        exp = tuple(1 if j == i else 0 for j in range(len(vars)))
        return cls._raw(vars, {exp: Fraction(1)})

    @classmethod
    def parse(cls, text, vars):
        vars = tuple(vars)
        stream = TokenStream(tokenize(text))
        p = parse_expression(stream, vars, _Builder(vars))
        tok = stream.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected {tok.text!r} after polynomial", tok.line, tok.col)
        return p

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError(f"ring context mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly._raw(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return Poly._raw(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        """The value of a constant polynomial, else ``None``."""
        if not self.terms:
            return Fraction(0)
        if self.is_constant():
            return next(iter(self.terms.values()))
        return None

    # -- inspection -------------------------------------------------------

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def leading_monomial(self, order=DEGREVLEX):
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order=DEGREVLEX):
        return self.terms[self.leading_monomial(order)]

    def support(self):
        """Indices of variables that occur."""
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def used_variables(self):
        return {self.vars[i] for i in self.support()}

    def substitute(self, images):
        """Replace variable i by ``images[i]`` (all in one common context)."""
        images = list(images)
        if len(images) != len(self.vars):
            raise ValueError("need one image per variable")
        if not images:
            raise ValueError("cannot substitute into a ring with no variables")
        target = images[0].vars
        out = Poly.const(target, 0)
        powers = [dict() for _ in images]
        for e, c in self.terms.items():
            m = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    pw = powers[i].get(k)
                    if pw is None:
                        pw = powers[i][k] = images[i] ** k
                    m = m * pw
            out = out + m
        return out

    def __repr__(self):
        return f"Poly({str(self)!r}, vars={self.vars})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=_degrevlex_key, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, exp) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


class _Builder:
    def __init__(self, vars):
        self.vars = vars

    def const(self, c):
        return Poly.const(self.vars, c)

    def var(self, i):
        return Poly.var(self.vars, i)

    @staticmethod
    def as_constant(p):
        return p.constant_value()


def _to_vec(p, pos=0):
    return {(e, pos): c for e, c in p.terms.items()}


def _from_vec(vars, vec, pos=0):
    return Poly._raw(tuple(vars), {e: c for (e, ps), c in vec.items() if ps == pos})


class PresentedRing:
    """``Q[variables] / (relations)`` with a fixed monomial order.

    Two rings compare equal when they have the same variables and order
    and their relation ideals have the same reduced Groebner basis.
    """

    def __init__(self, variables, relations=(), order=None):
        variables = tuple(variables)
        seen = set()
        for v in variables:
            if not isinstance(v, str) or not _IDENT.match(v):
                raise ValueError(f"invalid variable name {v!r}")
            if v in seen:
                raise ValueError(f"duplicate variable name {v!r}")
            seen.add(v)
        self.variables = variables
        self.order = MonomialOrder.parse(order)
        rels = []
        for r in relations:
            if isinstance(r, str):
                r = Poly.parse(r, variables)
            elif isinstance(r, Poly):
                if r.vars != variables:
                    extra = set(r.vars) - set(variables)
                    if extra:
                        raise ValueError(f"relation uses unknown variable(s) {sorted(extra)}")
                    r = self.embed(r)
            else:
                r = Poly.const(variables, r)
            if r:
                rels.append(r)
        self.relations = tuple(rels)

    # -- element construction ---------------------------------------------

    @property
    def ngens(self):
        return len(self.variables)

    def gen(self, which):
        return Poly.var(self.variables, which)

    @property
    def gens(self):
        return tuple(Poly.var(self.variables, i) for i in range(self.ngens))

    def __call__(self, x):
        if isinstance(x, str):
            return Poly.parse(x, self.variables)
        if isinstance(x, Poly):
            if x.vars != self.variables:
                return self.embed(x)
            return x
        return Poly.const(self.variables, x)

    def zero(self):
        return Poly.const(self.variables, 0)

    def one(self):
        return Poly.const(self.variables, 1)

    def embed(self, p):
        """Rewrite ``p`` into this ring's variables, matching by name."""
        if p.vars == self.variables:
            return p
        idx = {v: i for i, v in enumerate(self.variables)}
        n = len(self.variables)
        perm = []
        for i, v in enumerate(p.vars):
            if v not in idx:
                if any(e[i] for e in p.terms):
                    raise ValueError(f"variable {v!r} is not in {self}")
                perm.append(None)
            else:
                perm.append(idx[v])
        t = {}
        for e, c in p.terms.items():
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    new[perm[i]] = k
            t[tuple(new)] = c
        return Poly._raw(self.variables, t)

    # -- Groebner data ----------------------------------------------------

    @cached_property
    def _term_order(self):
        return _core.TermOrder(self.order.key)

    @cached_property
    def groebner(self):
        """Reduced Groebner basis of the relation ideal (computed once)."""
        gb = _core.groebner([_to_vec(r) for r in self.relations], self._term_order)
        return tuple(_from_vec(self.variables, v) for v in gb)

    @cached_property
    def _reducers(self):
        return _core.make_basis([_to_vec(g) for g in self.groebner], self._term_order)

    def seed_groebner(self, basis):
        """Install a precomputed reduced basis (used by the on-disk cache)."""
        self.__dict__["groebner"] = tuple(self(b) for b in basis)
        self.__dict__.pop("_reducers", None)

    def nf(self, p):
        p = self(p)
        if not self.relations or not p:
            return p
        r = _core.reduce_vector(_to_vec(p), self._reducers, self._term_order)
        return _from_vec(self.variables, r)

    def equal(self, p, q):
        return not self.nf(self(p) - self(q))

    def is_zero(self, p):
        return not self.nf(p)

    def is_polynomial_ring(self):
        return not self.groebner

    def is_zero_ring(self):
        return any(g.is_constant() for g in self.groebner)

    # -- derived rings ----------------------------------------------------

    def extend(self, new_vars, new_relations=(), order=None):
        """Polynomial extension ``self[new_vars] / (new_relations)``."""
        variables = self.variables + tuple(new_vars)
        ring = PresentedRing(variables, (), order or self.order)
        rels = [ring.embed(r) for r in self.relations]
        rels += [ring(r) for r in new_relations]
        return PresentedRing(variables, rels, order or self.order)

    def quotient(self, extra):
        """``self / (extra)``."""
        return PresentedRing(self.variables, list(self.relations) + [self(e) for e in extra], self.order)

    def polynomial_cover(self):
        return PresentedRing(self.variables, (), self.order)

    def fresh_names(self, wanted, avoid=()):
        """Rename ``wanted`` so nothing clashes with this ring or ``avoid``."""
        taken = set(self.variables) | set(avoid)
        out = []
        for name in wanted:
            cand = name
            k = 1
            while cand in taken:
                cand = f"{name}_{k}"
                k += 1
            taken.add(cand)
            out.append(cand)
        return out

    # -- identity ---------------------------------------------------------

    def _key(self):
        return (self.variables, self.order, self.groebner)

    def __eq__(self, other):
        if not isinstance(other, PresentedRing):
            return NotImplemented
        if self is other:
            return True
        return self.variables == other.variables and self.order == other.order and \
            self.groebner == other.groebner

    def __hash__(self):
        return hash((self.variables, self.order, frozenset(self.groebner)))

    def __str__(self):
        base = f"Q[{','.join(self.variables)}]"
        if self.relations:
            base += " / (" + ", ".join(str(r) for r in self.relations) + ")"
        return base

    def __repr__(self):
        return f"PresentedRing({str(self)!r})"


def ring_new(variables, relations=(), order=None):
    return PresentedRing(variables, relations, order)


def normal_form(p, ring):
    if isinstance(p, Poly) and p.vars != ring.variables:
        raise ValueError(f"{p!r} is not written in the variables of {ring}")
    return ring.nf(p)


class RingMapError(ValueError):
    """The proposed images do not define a ring homomorphism."""


class RingMap:
    """Homomorphism ``source -> target`` given by the images of the variables.

    Construction checks that every source relation is sent to zero, so a
    ``RingMap`` that exists is well defined.  Acceptance only depends on
    the relation ideal, not on the chosen generators, because the check
    runs over the reduced basis.
    """

    def __init__(self, source, target, images):
        images = [target(x) for x in images]
        if len(images) != source.ngens:
            raise ValueError(f"need {source.ngens} images, got {len(images)}")
        self.source = source
        self.target = target
        self.images = tuple(target.nf(x) for x in images)
        for g in source.groebner:
            if not target.is_zero(self._apply(g)):
                raise RingMapError(f"relation {g} of {source} maps to nonzero {target.nf(self._apply(g))}")

    def _apply(self, p):
        if not self.images:
            return Poly.const(self.target.variables, p.constant_value() or 0)
        return p.substitute(self.images)

    def __call__(self, p):
        return self.target.nf(self._apply(self.source(p)))

    def compose(self, other):
        """``self after other``: other.source -> self.target."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return RingMap(other.source, self.target, [self(x) for x in other.images])

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring, ring.gens)

    @classmethod
    def by_name(cls, source, target, overrides=None):
        """Send each source variable to the target variable of the same name
        unless ``overrides`` says otherwise."""
        overrides = dict(overrides or {})
        images = []
        for v in source.variables:
            if v in overrides:
                images.append(target(overrides[v]))
            else:
                images.append(target.gen(v))
        return cls(source, target, images)

    def __repr__(self):
        pairs = ", ".join(f"{v}->{x}" for v, x in zip(self.source.variables, self.images))
        return f"RingMap({self.source} -> {self.target}: {pairs})"


def ringmap_new(source, target, images):
    return RingMap(source, target, images)
