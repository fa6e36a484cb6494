"""Execute parsed scripts and render reports."""

import hashlib
import json
import os
import time

from ..blowup import (
    DivisorWitness,
    blowup_atlas,
    classical_truncation_compare,
    deformation_atlas,
    exceptional_divisor,
    graph_check,
    normal_bundle_check,
    simultaneous_blowup,
    verify_divisor,
    verify_divisor_homotopy,
)
from ..derived import (
    DerivedLocus,
    classicality_report,
    codim_topological,
    codim_virtual,
    homotopy_module,
)
from ..homalg import is_zero_module
from ..polyring import PresentedRing, RingMap
from .parser import Command, MapDecl, RingDecl, SeqDecl, WitnessDecl
from .printer import print_command


class RunError(Exception):
    """A command failed; the message carries the statement's line."""


class GroebnerCache:
    """On-disk store of reduced relation bases keyed by a hash of the ring."""

    def __init__(self, directory):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    @staticmethod
    def key(ring):
        payload = json.dumps([list(ring.variables), str(ring.order), [str(r) for r in ring.relations]])
        return hashlib.sha256(payload.encode()).hexdigest()

    def _path(self, ring):
        return os.path.join(self.directory, self.key(ring) + ".json")

    def attach(self, ring):
        path = self._path(ring)
        if os.path.exists(path):
            with open(path) as fh:
                ring.seed_groebner(json.load(fh))
            return True
        basis = [str(g) for g in ring.groebner]
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(basis, fh)
        os.replace(tmp, path)
        return False


def _polys(ps):
    return [str(p) for p in ps]


def _module(M):
    return {"rank": M.rank, "relations": M.presentation_rows(), "zero": is_zero_module(M)}


def _vanish(flag):
    return "zero" if flag else "nonzero"


class Runner:
    def __init__(self, cache=None, timing=None):
        self.rings = {}
        self.seqs = {}
        self.maps = {}
        self.witnesses = {}
        self.cache = cache
        self.timing = timing  # a writable stream or None

    # -- declarations ------------------------------------------------------

    def declare(self, s):
        if isinstance(s, RingDecl):
            R = PresentedRing(s.variables, s.relations)
            if self.cache is not None:
                self.cache.attach(R)
            self.rings[s.name] = R
        elif isinstance(s, SeqDecl):
            R = self.rings[s.ring]
            self.seqs[s.name] = tuple(R(p) for p in s.elements)
        elif isinstance(s, MapDecl):
            src, tgt = self.rings[s.source], self.rings[s.target]
            self.maps[s.name] = RingMap(src, tgt, s.images)
        elif isinstance(s, WitnessDecl):
            self.witnesses[s.name] = s

    def _seq(self, ref, ring):
        if ref.inline:
            return tuple(ring(p) for p in ref.elements)
        return tuple(ring(p) for p in self.seqs[ref.name])

    def _locus(self, c):
        R = self.rings[c.locus.ring]
        base = self._seq(c.locus.base, R) if c.locus.base is not None else ()
        return DerivedLocus(R, base)

    def _witness(self, name, X):
        w = self.witnesses[name]
        S = self.rings[w.ring]
        if w.map is not None:
            psi = self.maps[w.map]
            if psi.source != X.ambient:
                raise ValueError(f"witness map {w.map} does not start at {X.ambient}")
        else:
            missing = [v for v in X.ambient.variables if v not in S.variables]
            if missing:
                raise ValueError(f"witness {name} needs 'map = ...': {S} lacks {missing}")
            psi = RingMap.by_name(X.ambient, S)
        return DivisorWitness(DerivedLocus(S, tuple(S(p) for p in w.s)), psi, S(w.d), tuple(S(p) for p in w.a))

    # -- commands ----------------------------------------------------------

    def run_command(self, c):
        handler = getattr(self, "_cmd_" + c.verb.replace("-", "_"))
        X = self._locus(c)
        seqs = [self._seq(r, X.ambient) for r in c.seqs]
        rec = {"command": print_command(c), "line": c.line}
        verdict = handler(c, X, seqs, rec)
        rec["verdict"] = verdict
        return rec

    def _cmd_check(self, c, X, seqs, rec):
        Z = DerivedLocus(X.ambient, seqs[0])
        rec["ring"] = str(Z.ambient)
        rec["sequence"] = _polys(Z.seq)
        if c.sub == "classical":
            report = classicality_report(Z)
        else:
            report = {i: is_zero_module(homotopy_module(Z, i)) for i in range(1, Z.length + 1)}
        rec["homology"] = {f"H{i}": _vanish(v) for i, v in report.items()}
        return all(report.values())

    def _cmd_homotopy(self, c, X, seqs, rec):
        Z = DerivedLocus(X.ambient, seqs[0])
        rec["ring"] = str(Z.ambient)
        rec["sequence"] = _polys(Z.seq)
        degrees = [c.degree] if c.degree is not None else range(Z.length + 1)
        rec["modules"] = {f"pi{i}": _module(homotopy_module(Z, i)) for i in degrees}
        return None

    def _chart(self, Z, label):
        return {
            "chart": label,
            "ambient": str(Z.ambient),
            "sequence": _polys(Z.seq),
            "classical": all(classicality_report(Z).values()),
        }

    def _cmd_blowup(self, c, X, seqs, rec):
        B = blowup_atlas(X, seqs[0])
        rec["base"] = str(X)
        rec["center"] = _polys(B.center_seq)
        rec["charts"] = [self._chart(Z, k + 1) for k, Z in enumerate(B.charts)]
        if 2 <= len(B) <= 3:
            rec["overlaps"] = []
            for (k, l), ov in sorted(B.overlaps.items()):
                rec["overlaps"].append({
                    "from": k + 1,
                    "to": l + 1,
                    "images": [f"{v} -> {x}" for v, x in zip(ov.source.ambient.variables, ov.transition.images)],
                    "composites_identity": ov.composites_are_identity(),
                })
        return None

    def _cmd_exceptional(self, c, X, seqs, rec):
        B = blowup_atlas(X, seqs[0])
        rec["base"] = str(X)
        rec["center"] = _polys(B.center_seq)
        rec["charts"] = []
        for k, E in enumerate(exceptional_divisor(B)):
            rec["charts"].append({
                "chart": k + 1,
                "ambient": str(E.ambient),
                "sequence": _polys(E.seq),
                "pi0_groebner": _polys(E.pi0_ideal().groebner_basis()),
            })
        return None

    def _cmd_verify_divisor(self, c, X, seqs, rec):
        W = self._witness(c.witness, X)
        v = verify_divisor(X, W, seqs[0])
        rec.update({"a_ok": v.a_ok, "b_ok": v.b_ok, "c_ok": v.c_ok})
        return v.passed

    def _cmd_verify_divisor_homotopy(self, c, X, seqs, rec):
        W = self._witness(c.witness, X)
        v = verify_divisor_homotopy(X, W, seqs[0])
        rec.update({"pi0_iso": v.pi0_iso, "pi1_surj": v.pi1_surj})
        return v.passed

    def _cmd_truncation_compare(self, c, X, seqs, rec):
        res = classical_truncation_compare(X, seqs[0])
        rec["center"] = _polys(X.ambient.nf(p) for p in seqs[0])
        rec["charts"] = [{"chart": k + 1, "equal": r} for k, r in enumerate(res)]
        return all(res)

    def _simultaneous(self, X, centers, rec):
        S = simultaneous_blowup(X, centers)
        rec["charts"] = [self._chart(Z, ",".join(str(k + 1) for k in idx)) for idx, Z in S.charts.items()]
        rec["conclusion"] = "Tor-independent" if S.tor_independent else "not Tor-independent"
        return S.tor_independent

    def _cmd_simultaneous(self, c, X, seqs, rec):
        rec["base"] = str(X.ambient)
        rec["centers"] = [_polys(s) for s in seqs]
        return self._simultaneous(X, seqs, rec)

    def _cmd_tor(self, c, X, seqs, rec):
        rec["base"] = str(X.ambient)
        if c.flag == "self":
            rec["mode"] = "blow-up along itself"
            rec["center"] = _polys(seqs[0])
            return self._simultaneous(X, [seqs[0], seqs[0]], rec)
        rec["mode"] = "derived intersection"
        Z = DerivedLocus(X.ambient, seqs[0] + seqs[1])
        rep = classicality_report(Z)
        rec["sequence"] = _polys(Z.seq)
        rec["homology"] = {f"H{i}": _vanish(v) for i, v in rep.items()}
        ok = all(rep.values())
        rec["conclusion"] = "Tor-independent" if ok else "not Tor-independent"
        return ok

    def _cmd_deform(self, c, X, seqs, rec):
        D = deformation_atlas(X, seqs[0])
        rec["base"] = str(X)
        rec["charts"] = []
        n = len(D.center_seq)
        for k, Z in enumerate(D.charts):
            rec["charts"].append({
                "chart": "t" if k == n else k + 1,
                "ambient": str(Z.ambient),
                "sequence": _polys(Z.seq),
            })
        g = graph_check(D)
        nb = normal_bundle_check(D)
        rec["t=1 open pieces of X"] = g
        rec["t=0 normal bundle"] = nb
        return all(g) and nb

    def _cmd_codim(self, c, X, seqs, rec):
        Z = DerivedLocus(X.ambient, seqs[0])
        rec["virtual"] = codim_virtual(Z)
        if Z.is_empty():
            rec["topological"] = "undefined (empty locus)"
        else:
            rec["topological"] = codim_topological(Z)
        return None

    # -- driver ------------------------------------------------------------

    def run(self, script):
        records = []
        for s in script.statements:
            start = time.perf_counter()
            try:
                if isinstance(s, Command):
                    records.append(self.run_command(s))
                else:
                    self.declare(s)
            except (ValueError, ArithmeticError, KeyError) as exc:
                what = print_command(s) if isinstance(s, Command) else type(s).__name__
                raise RunError(f"line {s.line}: {what}: {exc}") from exc
            if self.timing is not None and isinstance(s, Command):
                self.timing.write(f"line {s.line}: {time.perf_counter() - start:.3f}s\n")
        return records


def _fmt_scalar(v):
    if v is True:
        return "true"
    if v is False:
        return "false"
    if v is None:
        return "none"
    return str(v)


def _render(value, indent, out):
    pad = "  " * indent
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                out.append(f"{pad}{k}:")
                _render(v, indent + 1, out)
            else:
                out.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and not _flat_list(item):
                out.append(f"{pad}-")
                _render(item, indent + 1, out)
            else:
                out.append(f"{pad}- {_inline(item)}")


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _inline(v):
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return _fmt_scalar(v)


def render(records, fmt="text"):
    """Deterministic report text: ``text`` or ``structured`` (JSON)."""
    if fmt == "structured":
        return json.dumps(records, indent=2, ensure_ascii=False) + "\n"
    out = []
    for rec in records:
        body = dict(rec)
        cmd = body.pop("command")
        line = body.pop("line")
        out.append(f"== {cmd}  (line {line})")
        _render(body, 1, out)
    return "\n".join(out) + ("\n" if out else "")
