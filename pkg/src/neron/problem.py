"""Problem files: a small ``key = value`` format using the polynomial grammar.

Example::

    # Rond, p = 2
    field = QQ
    x = x1, x2, x3
    Y = 4
    I = Y1*Y2 - Y3*Y4
    v = x1^2, x2^2, x1*x2 - x3^2, x1*x2
    dim = 3
    system1 = Y2: 1
    system2 = Y1: 1
    system3 = Y2: Y2 | Y4: x1*x2 + x3^2

Lists are comma separated.  A line starting with whitespace continues the
previous value.  ``systemK`` gives the minors of the K-th parameter system
as ``cols: N`` pairs separated by ``|``; ``systemK.f`` selects relations by
1-based index.  Keys starting with ``hint.`` feed the searches and keys
starting with ``cap.`` override computation caps.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from neron.polyring import FieldSpec, Jet, ParseError, QQ, Ring, VarBlock, format_poly, parse_poly

KNOWN = {"field", "x", "J", "Y", "I", "v", "dim", "k", "c", "precision", "algorithm", "budget"}
ALGORITHMS = ("neron", "uniform", "dim1")


class ProblemError(ValueError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        where = []
        if path:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass
class _Entry:
    key: str
    value: str
    line: int
    column: int


@dataclass
class Problem:
    ring: Ring
    J: list
    I: list
    v: dict
    dim: int = None
    k: int = None
    c: int = None
    precision: int = None
    algorithm: str = None
    budget: int = None
    systems: list = field(default_factory=list)
    hints: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)

    @property
    def xvars(self):
        return self.ring.base_names()

    @property
    def yvars(self):
        return self.ring.role_names("algebra")

    def algebra(self, precision=None):
        from neron.symalg import Algebra
        n = precision or self.precision
        v = {y: Jet(self.v[y], n) for y in self.yvars if y in self.v}
        return Algebra(self.ring, list(self.J), list(self.I), self.yvars, v)

    def yprime(self):
        return {y: self.v[y] for y in self.yvars}

    def param_systems(self):
        from neron.desing import ParamSystem
        out = []
        for s in self.systems:
            f = None if s.get("f") is None else [self.I[i] for i in s["f"]]
            out.append(ParamSystem(f=f, minors=s["minors"]))
        return out

    def to_text(self):
        """Canonical text form; parsing it gives back an equal problem."""
        fld = "QQ" if self.ring.field == QQ else f"GF({self.ring.field.p})"
        lines = [f"field = {fld}", "x = " + ", ".join(self.xvars)]
        if self.J:
            lines.append("J = " + ", ".join(format_poly(j) for j in self.J))
        lines.append("Y = " + ", ".join(self.yvars))
        lines.append("I = " + ", ".join(format_poly(f) for f in self.I))
        if self.v:
            lines.append("v = " + ", ".join(format_poly(self.v[y]) for y in self.yvars))
        for key in ("dim", "k", "c", "precision", "algorithm", "budget"):
            val = getattr(self, key)
            if val is not None:
                lines.append(f"{key} = {val}")
        for i, s in enumerate(self.systems, 1):
            parts = []
            for cols, N in s["minors"]:
                names = " ".join(self.yvars[j] for j in cols)
                parts.append(f"{names}: {format_poly(N)}")
            lines.append(f"system{i} = " + " | ".join(parts))
            if s.get("f") is not None:
                lines.append(f"system{i}.f = " + ", ".join(str(j + 1) for j in s["f"]))
        for key, val in sorted(self.hints.items()):
            lines.append(f"hint.{key} = {_hint_text(key, val, self)}")
        for key, val in sorted(self.caps.items()):
            lines.append(f"cap.{key} = {val}")
        return "\n".join(lines) + "\n"


def _hint_text(key, val, prob):
    if key == "gammas":
        return ", ".join(val)
    if key == "relations":
        return ", ".join(str(i + 1) for i in val)
    if key == "minors":
        return " | ".join(" ".join(prob.yvars[j] for j in cols) for cols in val)
    return str(val)


def _entries(text, path=None):
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if body[0].isspace():
            if not out:
                raise ProblemError("continuation line without a key", lineno, 1, path)
            prev = out[-1]
            prev.value = prev.value + " " + body.strip()
            continue
        if "=" not in body:
            raise ProblemError("expected 'key = value'", lineno, 1, path)
        key, _, value = body.partition("=")
        col = len(key) + 2 + (len(value) - len(value.lstrip()))
        out.append(_Entry(key.strip(), value.strip(), lineno, col))
    return out


def _split(value, sep=","):
    """Split on ``sep`` keeping track of each piece's offset in ``value``."""
    pieces = []
    start = 0
    for m in re.finditer(re.escape(sep), value):
        pieces.append((value[start:m.start()], start))
        start = m.end()
    pieces.append((value[start:], start))
    out = []
    for text, off in pieces:
        lead = len(text) - len(text.lstrip())
        if text.strip():
            out.append((text.strip(), off + lead))
    return out


def _names(value, default_prefix, entry, path):
    """``x = 3`` means ``x1, x2, x3``; otherwise an explicit name list."""
    if re.fullmatch(r"\d+", value):
        n = int(value)
        if n < 1:
            raise ProblemError("block arity must be positive", entry.line, entry.column, path)
        return tuple(f"{default_prefix}{i}" for i in range(1, n + 1))
    names = [t for t, _ in _split(value.replace(" ", ","))]
    for nm in names:
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", nm):
            raise ProblemError(f"bad variable name {nm!r}", entry.line, entry.column, path)
    return tuple(names)


def _int(entry, path, minimum=0):
    try:
        n = int(entry.value)
    except ValueError:
        raise ProblemError(f"{entry.key} must be an integer", entry.line, entry.column, path) from None
    if n < minimum:
        raise ProblemError(f"{entry.key} must be at least {minimum}", entry.line, entry.column, path)
    return n


class _Reader:
    def __init__(self, ring, blocks, path):
        self.ring = ring
        self.blocks = blocks
        self.path = path

    def poly(self, text, entry, offset=0):
        try:
            return parse_poly(text, self.ring)
        except ParseError as exc:
            col = entry.column + offset + (exc.column - 1 if exc.column else 0)
            msg = str(exc).rsplit(" (column", 1)[0]
            m = re.match(r"unknown variable '([A-Za-z]+)(\d+)'", msg)
            if m:
                for b in self.blocks:
                    if b.name == m.group(1):
                        msg = (f"variable {m.group(1)}{m.group(2)} outside block {b.name} "
                               f"of arity {b.arity}")
            raise ProblemError(msg, entry.line, col, self.path) from None

    def polys(self, entry):
        return [self.poly(t, entry, off) for t, off in _split(entry.value)]

    def yindex(self, name, entry):
        ys = self.ring.role_names("algebra")
        if name not in ys:
            raise ProblemError(f"{name!r} is not an algebra variable", entry.line, entry.column, self.path)
        return ys.index(name)

    def system(self, entry):
        minors = []
        for text, off in _split(entry.value, "|"):
            if ":" not in text:
                raise ProblemError("system entries look like 'Y2 Y3: N'", entry.line, entry.column + off, self.path)
            cols, _, N = text.partition(":")
            idx = tuple(sorted(self.yindex(nm, entry) for nm in cols.replace(",", " ").split()))
            if not idx:
                raise ProblemError("empty column list", entry.line, entry.column + off, self.path)
            minors.append((idx, self.poly(N.strip(), entry, off + len(cols) + 1)))
        return minors


def parse_problem_text(text, path=None):
    entries = _entries(text, path)
    seen = {}
    for e in entries:
        if e.key in seen and not e.key.startswith(("hint.", "cap.")):
            raise ProblemError(f"duplicate key {e.key!r}", e.line, 1, path)
        seen[e.key] = e
        if e.key not in KNOWN and not re.fullmatch(r"system\d+(\.f)?|hint\.\w+|cap\.\w+", e.key):
            raise ProblemError(f"unknown key {e.key!r}", e.line, 1, path)
    for required in ("x", "Y", "I"):
        if required not in seen:
            raise ProblemError(f"missing required key {required!r}", path=path)
    fld = QQ
    if "field" in seen:
        try:
            fld = FieldSpec.parse(seen["field"].value)
        except (ParseError, ValueError) as exc:
            e = seen["field"]
            raise ProblemError(str(exc), e.line, e.column, path) from None
    xs = _names(seen["x"].value, "x", seen["x"], path)
    ys = _names(seen["Y"].value, "Y", seen["Y"], path)
    blocks = [VarBlock("x", len(xs), "base", xs), VarBlock("Y", len(ys), "algebra", ys)]
    try:
        ring = Ring(fld, blocks)
    except ValueError as exc:
        raise ProblemError(str(exc), seen["Y"].line, seen["Y"].column, path) from None
    rd = _Reader(ring, blocks, path)
    xring = ring.subring(xs)
    J = []
    if "J" in seen and seen["J"].value:
        for p in rd.polys(seen["J"]):
            if any(v not in xs for v in p.variables()):
                raise ProblemError("J must involve base variables only", seen["J"].line, seen["J"].column, path)
            J.append(p.restrict(xring))
    I = rd.polys(seen["I"])
    if not I:
        raise ProblemError("I needs at least one generator", seen["I"].line, seen["I"].column, path)
    v = {}
    if "v" in seen:
        vals = rd.polys(seen["v"])
        if len(vals) != len(ys):
            raise ProblemError(f"v has {len(vals)} entries but Y has arity {len(ys)}",
                               seen["v"].line, seen["v"].column, path)
        for y, p in zip(ys, vals):
            if any(n not in xs for n in p.variables()):
                raise ProblemError(f"v({y}) must involve base variables only",
                                   seen["v"].line, seen["v"].column, path)
            v[y] = p
    prob = Problem(ring, J, I, v)
    for key in ("dim", "k", "c", "precision", "budget"):
        if key in seen:
            setattr(prob, key, _int(seen[key], path, 1 if key in ("precision", "budget") else 0))
    if "algorithm" in seen:
        a = seen["algorithm"].value
        if a not in ALGORITHMS:
            raise ProblemError(f"algorithm must be one of {', '.join(ALGORITHMS)}",
                               seen["algorithm"].line, seen["algorithm"].column, path)
        prob.algorithm = a
    nums = sorted(int(m.group(1)) for k in seen if (m := re.fullmatch(r"system(\d+)", k)))
    if nums and nums != list(range(1, len(nums) + 1)):
        raise ProblemError("systems must be numbered system1, system2, ...", path=path)
    for i in nums:
        e = seen[f"system{i}"]
        s = {"minors": rd.system(e), "f": None}
        fe = seen.get(f"system{i}.f")
        if fe is not None:
            s["f"] = _indices(fe, len(I), path)
        r = len(I) if s["f"] is None else len(s["f"])
        for cols, _ in s["minors"]:
            if len(cols) != r:
                raise ProblemError(f"minor needs {r} columns, got {len(cols)}", e.line, e.column, path)
        prob.systems.append(s)
    for key, e in seen.items():
        if key.startswith("hint."):
            prob.hints[key[5:]] = _hint(key[5:], e, rd, len(I), path)
        elif key.startswith("cap."):
            prob.caps[key[4:]] = _int(e, path, 1)
    return prob


def _indices(entry, count, path):
    out = []
    for t, off in _split(entry.value):
        if not t.isdigit() or not 1 <= int(t) <= count:
            raise ProblemError(f"relation index {t!r} out of range 1..{count}",
                               entry.line, entry.column + off, path)
        out.append(int(t) - 1)
    return out


def _hint(key, entry, rd, count, path):
    if key == "gammas":
        for t, off in _split(entry.value):
            rd.poly(t, entry, off)
        return [t for t, _ in _split(entry.value)]
    if key == "relations":
        return _indices(entry, count, path)
    if key == "minors":
        return [tuple(sorted(rd.yindex(nm, entry) for nm in t.split()))
                for t, _ in _split(entry.value, "|")]
    if key == "t":
        return _int(entry, path, 1)
    raise ProblemError(f"unknown hint {key!r}", entry.line, 1, path)


def parse_problem(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_problem_text(text, path)


def merge_hints(prob, path):
    """Read ``hint.*`` keys from a separate file into ``prob``."""
    with open(path, encoding="utf-8") as fh:
        entries = _entries(fh.read(), path)
    rd = _Reader(prob.ring, [], path)
    for e in entries:
        key = e.key[5:] if e.key.startswith("hint.") else e.key
        prob.hints[key] = _hint(key, e, rd, len(prob.I), path)
    return prob


__all__ = ["Problem", "ProblemError", "parse_problem", "parse_problem_text", "merge_hints"]
