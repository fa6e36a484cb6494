"""Parser for the script language.

A script is a sequence of semicolon-terminated statements::

    ring A = Q[x,y] / (x*y);
    seq f = (x, y);
    map phi : A -> B = (u, 0);
    witness W = { d = T1, a = (1, X2) };
    check regular A f;

Declarations bind names; a ``seq`` or ``witness`` belongs to the most
recently declared ring.  Polynomials are parsed eagerly against the
variables of the ring they live in, so unknown variables are reported
with their position.
"""

from dataclasses import dataclass, field

from .._syntax import ParseError, TokenStream, parse_expression, tokenize
from ..polyring import Poly, _Builder

# verb -> allowed sub-verbs (None: no sub-verb)
VERBS = {
    "check": ("regular", "classical"),
    "homotopy": None,
    "blowup": None,
    "exceptional": None,
    "verify-divisor": None,
    "verify-divisor-homotopy": None,
    "truncation-compare": None,
    "simultaneous": None,
    "tor": None,
    "deform": None,
    "codim": None,
}

KEYWORDS = ("ring", "seq", "map", "witness")


@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: tuple
    relations: tuple  # Poly over variables
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SeqDecl:
    name: str
    ring: str
    elements: tuple
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: tuple
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class WitnessDecl:
    name: str
    ring: str
    d: Poly
    a: tuple
    s: tuple = ()
    map: str = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SeqRef:
    """A sequence argument: a declared name or an inline tuple."""

    name: str = None
    elements: tuple = None

    @property
    def inline(self):
        return self.name is None


@dataclass(frozen=True)
class Locus:
    """``A`` or ``A // h``."""

    ring: str
    base: SeqRef = None


@dataclass(frozen=True)
class Command:
    verb: str
    sub: str = None
    locus: Locus = None
    seqs: tuple = ()
    witness: str = None
    degree: int = None
    flag: str = None  # "self" for tor
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Script:
    statements: tuple

    @property
    def commands(self):
        return [s for s in self.statements if isinstance(s, Command)]


class _Env:
    def __init__(self):
        self.rings = {}  # name -> variables
        self.seqs = {}  # name -> ring name
        self.maps = {}  # name -> (source, target)
        self.witnesses = {}  # name -> ring name
        self.current = None

    def declare(self, name, tok):
        for table in (self.rings, self.seqs, self.maps, self.witnesses):
            if name in table:
                raise ParseError(f"name {name!r} is already declared", tok.line, tok.col)


def _poly(stream, variables):
    return parse_expression(stream, variables, _Builder(tuple(variables)))


def _polylist(stream, variables):
    stream.expect("(")
    out = []
    if stream.accept(")"):
        return tuple(out)
    while True:
        out.append(_poly(stream, variables))
        if stream.accept(")"):
            return tuple(out)
        stream.expect(",")


def _ident(stream, what="identifier"):
    return stream.expect_kind("ID", what)


def _adjacent(a, b):
    return a.line == b.line and a.col + len(a.text) == b.col


def _verb(stream):
    tok = _ident(stream, "a statement")
    verb = tok.text
    last = tok
    while True:
        dash, nxt = stream.peek(), stream.peek(1)
        if dash.text == "-" and nxt.kind == "ID" and _adjacent(last, dash) and _adjacent(dash, nxt):
            cand = verb + "-" + nxt.text
            if any(v == cand or v.startswith(cand + "-") for v in VERBS):
                stream.next()
                last = stream.next()
                verb = cand
                continue
        break
    if verb not in VERBS:
        raise ParseError(f"unknown statement {verb!r}", tok.line, tok.col)
    return tok, verb


def _ring_decl(stream, env, start):
    name = _ident(stream, "ring name")
    env.declare(name.text, name)
    stream.expect("=")
    q = _ident(stream, "'Q'")
    if q.text != "Q":
        raise ParseError("only rings over Q are supported", q.line, q.col)
    stream.expect("[")
    variables = []
    if not stream.at("]"):
        while True:
            v = _ident(stream, "variable name")
            if v.text in variables:
                raise ParseError(f"duplicate variable {v.text!r}", v.line, v.col)
            variables.append(v.text)
            if not stream.accept(","):
                break
    stream.expect("]")
    rels = ()
    if stream.accept("/"):
        rels = _polylist(stream, variables)
    stream.expect(";")
    env.rings[name.text] = tuple(variables)
    env.current = name.text
    return RingDecl(name.text, tuple(variables), rels, start.line)


def _need_current(env, tok):
    if env.current is None:
        raise ParseError("no ambient in scope: declare a ring first", tok.line, tok.col)
    return env.current


def _seq_decl(stream, env, start):
    ring = _need_current(env, start)
    name = _ident(stream, "sequence name")
    env.declare(name.text, name)
    stream.expect("=")
    elements = _polylist(stream, env.rings[ring])
    stream.expect(";")
    env.seqs[name.text] = ring
    return SeqDecl(name.text, ring, elements, start.line)


def _map_decl(stream, env, start):
    name = _ident(stream, "map name")
    env.declare(name.text, name)
    stream.expect(":")
    src = _ring_ref(stream, env)
    stream.expect("->")
    tgt = _ring_ref(stream, env)
    stream.expect("=")
    at = stream.peek()
    images = _polylist(stream, env.rings[tgt])
    if len(images) != len(env.rings[src]):
        raise ParseError(
            f"map {name.text} needs {len(env.rings[src])} images, got {len(images)}", at.line, at.col)
    stream.expect(";")
    env.maps[name.text] = (src, tgt)
    return MapDecl(name.text, src, tgt, images, start.line)


def _witness_decl(stream, env, start):
    ring = _need_current(env, start)
    name = _ident(stream, "witness name")
    env.declare(name.text, name)
    stream.expect("=")
    stream.expect("{")
    variables = env.rings[ring]
    fields = {}
    while True:
        key = _ident(stream, "witness field")
        if key.text in fields:
            raise ParseError(f"field {key.text!r} given twice", key.line, key.col)
        stream.expect("=")
        if key.text == "d":
            fields["d"] = _poly(stream, variables)
        elif key.text in ("a", "s"):
            fields[key.text] = _polylist(stream, variables)
        elif key.text == "map":
            m = _ident(stream, "map name")
            if m.text not in env.maps:
                raise ParseError(f"undeclared map {m.text!r}", m.line, m.col)
            if env.maps[m.text][1] != ring:
                raise ParseError(f"map {m.text} must land in {ring}", m.line, m.col)
            fields["map"] = m.text
        else:
            raise ParseError(f"unknown witness field {key.text!r}", key.line, key.col)
        if stream.accept("}"):
            break
        stream.expect(",")
    for req in ("d", "a"):
        if req not in fields:
            raise ParseError(f"witness {name.text} lacks field {req!r}", name.line, name.col)
    stream.expect(";")
    env.witnesses[name.text] = ring
    return WitnessDecl(name.text, ring, fields["d"], fields["a"], fields.get("s", ()),
                       fields.get("map"), start.line)


def _ring_ref(stream, env):
    tok = _ident(stream, "ring name")
    if tok.text not in env.rings:
        raise ParseError(f"undeclared ring {tok.text!r}", tok.line, tok.col)
    return tok.text


def _seq_ref(stream, env, ring):
    if stream.at("("):
        return SeqRef(elements=_polylist(stream, env.rings[ring]))
    tok = _ident(stream, "sequence")
    if tok.text not in env.seqs:
        raise ParseError(f"undeclared sequence {tok.text!r}", tok.line, tok.col)
    if env.seqs[tok.text] != ring:
        raise ParseError(f"sequence {tok.text} lives over {env.seqs[tok.text]}, not {ring}", tok.line, tok.col)
    return SeqRef(name=tok.text)


def _locus(stream, env):
    ring = _ring_ref(stream, env)
    base = None
    a, b = stream.peek(), stream.peek(1)
    if a.text == "/" and b.text == "/" and _adjacent(a, b):
        stream.next()
        stream.next()
        base = _seq_ref(stream, env, ring)
    return Locus(ring, base)


def _classical_locus(stream, env):
    tok = stream.peek()
    loc = _locus(stream, env)
    if loc.base is not None:
        raise ParseError("this command needs a classical ring, not a derived locus", tok.line, tok.col)
    return loc


def _command(stream, env):
    tok, verb = _verb(stream)
    sub = None
    flag = None
    seqs = []
    witness = None
    degree = None
    allowed = VERBS[verb]
    if allowed:
        s = _ident(stream, " or ".join(allowed))
        if s.text not in allowed:
            raise ParseError(f"{verb} expects one of {', '.join(allowed)}", s.line, s.col)
        sub = s.text
    if verb == "tor" and stream.at("self", "ID"):
        stream.next()
        flag = "self"
    if verb in ("blowup", "exceptional", "verify-divisor", "verify-divisor-homotopy", "deform"):
        locus = _locus(stream, env)
    else:
        locus = _classical_locus(stream, env)
    seqs.append(_seq_ref(stream, env, locus.ring))
    if verb == "simultaneous" or (verb == "tor" and flag is None):
        while not stream.at(";"):
            seqs.append(_seq_ref(stream, env, locus.ring))
    if verb == "tor" and flag is None and len(seqs) != 2:
        raise ParseError("tor needs two sequences (or 'tor self A f')", tok.line, tok.col)
    if verb in ("verify-divisor", "verify-divisor-homotopy"):
        w = _ident(stream, "witness name")
        if w.text not in env.witnesses:
            raise ParseError(f"undeclared witness {w.text!r}", w.line, w.col)
        witness = w.text
    if verb == "homotopy" and stream.peek().kind == "NUM":
        degree = int(stream.next().text)
    stream.expect(";")
    return Command(verb, sub, locus, tuple(seqs), witness, degree, flag, tok.line)


def parse(text):
    """Parse a script; raises :class:`ParseError` with line and column."""
    stream = TokenStream(tokenize(text))
    env = _Env()
    out = []
    while stream.peek().kind != "EOF":
        tok = stream.peek()
        if tok.kind != "ID":
            raise ParseError(f"expected a statement, found {tok.text!r}", tok.line, tok.col)
        if tok.text == "ring":
            stream.next()
            out.append(_ring_decl(stream, env, tok))
        elif tok.text == "seq":
            stream.next()
            out.append(_seq_decl(stream, env, tok))
        elif tok.text == "map":
            stream.next()
            out.append(_map_decl(stream, env, tok))
        elif tok.text == "witness":
            stream.next()
            out.append(_witness_decl(stream, env, tok))
        else:
            out.append(_command(stream, env))
    return Script(tuple(out))


__all__ = [
    "ParseError",
    "Script",
    "RingDecl",
    "SeqDecl",
    "MapDecl",
    "WitnessDecl",
    "SeqRef",
    "Locus",
    "Command",
    "parse",
    "VERBS",
]
