"""Canonical text for script ASTs; ``parse(print_script(s)) == s``."""

from .parser import Command, MapDecl, RingDecl, SeqDecl, WitnessDecl


def _polys(ps):
    return "(" + ", ".join(str(p) for p in ps) + ")"


def _seq(ref):
    return ref.name if ref.name is not None else _polys(ref.elements)


def print_command(c):
    parts = [c.verb]
    if c.sub:
        parts.append(c.sub)
    if c.flag:
        parts.append(c.flag)
    loc = c.locus.ring
    if c.locus.base is not None:
        loc += " // " + _seq(c.locus.base)
    parts.append(loc)
    parts.extend(_seq(s) for s in c.seqs)
    if c.witness:
        parts.append(c.witness)
    if c.degree is not None:
        parts.append(str(c.degree))
    return " ".join(parts)


def print_statement(s):
    if isinstance(s, RingDecl):
        text = f"ring {s.name} = Q[{','.join(s.variables)}]"
        if s.relations:
            text += " / " + _polys(s.relations)
        return text + ";"
    if isinstance(s, SeqDecl):
        return f"seq {s.name} = {_polys(s.elements)};"
    if isinstance(s, MapDecl):
        return f"map {s.name} : {s.source} -> {s.target} = {_polys(s.images)};"
    if isinstance(s, WitnessDecl):
        fields = [f"d = {s.d}", f"a = {_polys(s.a)}"]
        if s.s:
            fields.append(f"s = {_polys(s.s)}")
        if s.map:
            fields.append(f"map = {s.map}")
        return f"witness {s.name} = {{ " + ", ".join(fields) + " };"
    if isinstance(s, Command):
        return print_command(s) + ";"
    raise TypeError(f"not a statement: {s!r}")


def print_script(script):
    return "\n".join(print_statement(s) for s in script.statements) + "\n"
