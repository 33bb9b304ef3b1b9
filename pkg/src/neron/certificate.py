"""Machine-checkable certificates.

A certificate is a JSON document holding a variable list, a table of named
polynomials and a list of claims.  Claims refer to table entries as
``@name`` inside expressions written in the polynomial text grammar.  The
checker replays every claim with ring arithmetic only: it never computes a
Gröbner or standard basis.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from neron.polyring import FieldSpec, Poly, Ring, VarBlock, format_poly, parse_poly, substitute

FORMAT = "neron-certificate/1"


class Expr:
    """Small expression tree over named objects and literal polynomials."""

    __slots__ = ("op", "args")

    def __init__(self, op, *args):
        self.op = op
        self.args = args

    @staticmethod
    def ref(name):
        return Expr("ref", name)

    @staticmethod
    def lit(p):
        return p if isinstance(p, Expr) else Expr("lit", p)

    def __add__(self, other):
        return Expr("add", self, Expr.lit(other))

    def __radd__(self, other):
        return Expr("add", Expr.lit(other), self)

    def __sub__(self, other):
        return Expr("sub", self, Expr.lit(other))

    def __rsub__(self, other):
        return Expr("sub", Expr.lit(other), self)

    def __mul__(self, other):
        return Expr("mul", self, Expr.lit(other))

    def __rmul__(self, other):
        return Expr("mul", Expr.lit(other), self)

    def __neg__(self):
        return Expr("neg", self)

    def __pow__(self, k):
        return Expr("pow", self, k)

    def render(self):
        op, a = self.op, self.args
        if op == "ref":
            return "@" + a[0]
        if op == "lit":
            p = a[0]
            if isinstance(p, Poly):
                return "(" + format_poly(p) + ")"
            return "(" + str(p) + ")"
        if op == "neg":
            return "-(" + a[0].render() + ")"
        if op == "pow":
            return "(" + a[0].render() + ")^" + str(a[1])
        sym = {"add": " + ", "sub": " - ", "mul": "*"}[op]
        return "(" + a[0].render() + sym + a[1].render() + ")"

    def evaluate(self, env, ring):
        op, a = self.op, self.args
        if op == "ref":
            return env[a[0]].coerce(ring)
        if op == "lit":
            p = a[0]
            return p.coerce(ring) if isinstance(p, Poly) else ring.const(p)
        if op == "neg":
            return -a[0].evaluate(env, ring)
        if op == "pow":
            return a[0].evaluate(env, ring) ** a[1]
        x, y = a[0].evaluate(env, ring), a[1].evaluate(env, ring)
        if op == "add":
            return x + y
        if op == "sub":
            return x - y
        return x * y

    def map(self, poly_fn, ref_fn):
        op, a = self.op, self.args
        if op == "ref":
            return Expr("ref", ref_fn(a[0]))
        if op == "lit":
            return Expr("lit", poly_fn(a[0]) if isinstance(a[0], Poly) else a[0])
        if op == "pow":
            return Expr("pow", a[0].map(poly_fn, ref_fn), a[1])
        return Expr(op, *(x.map(poly_fn, ref_fn) for x in a))


def _map_value(v, poly_fn, ref_fn):
    if isinstance(v, Expr):
        return v.map(poly_fn, ref_fn)
    if isinstance(v, Poly):
        return poly_fn(v)
    if isinstance(v, list):
        return [_map_value(x, poly_fn, ref_fn) for x in v]
    if isinstance(v, dict):
        return {k: _map_value(x, poly_fn, ref_fn) for k, x in v.items()}
    return v


def _render_value(v):
    if isinstance(v, Expr):
        return v.render()
    if isinstance(v, Poly):
        return format_poly(v)
    if isinstance(v, list):
        return [_render_value(x) for x in v]
    if isinstance(v, dict):
        return {k: _render_value(x) for k, x in v.items()}
    return v


@dataclass
class Claim:
    kind: str
    name: str
    data: dict


@dataclass
class Certificate:
    """Objects and claims collected while building a presentation."""

    objects: dict = field(default_factory=dict)
    claims: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def put(self, name, poly):
        if name in self.objects:
            raise ValueError(f"duplicate certificate object {name}")
        self.objects[name] = poly
        return Expr.ref(name)

    def add(self, kind, name, **data):
        self.claims.append(Claim(kind, name, data))

    def renamed(self, var_map, prefix):
        """Copy with variables renamed by ``var_map`` and objects prefixed."""
        def poly_fn(p):
            return rename_vars(p, var_map)

        def ref_fn(n):
            return prefix + n
        out = Certificate()
        for n, p in self.objects.items():
            out.objects[prefix + n] = poly_fn(p)
        for c in self.claims:
            data = {}
            for k, v in c.data.items():
                if k in ("vars", "yvars"):
                    data[k] = [var_map.get(x, x) for x in v]
                elif k in ("assignment", "point"):
                    data[k] = {var_map.get(x, x): _map_value(y, poly_fn, ref_fn) for x, y in v.items()}
                else:
                    data[k] = _map_value(v, poly_fn, ref_fn)
            out.claims.append(Claim(c.kind, prefix + c.name, data))
        out.summary = dict(self.summary)
        return out

    def merge(self, other):
        for n, p in other.objects.items():
            if n in self.objects:
                raise ValueError(f"duplicate certificate object {n}")
            self.objects[n] = p
        self.claims.extend(other.claims)

    def to_dict(self, ring):
        return {
            "format": FORMAT,
            "field": repr(ring.field),
            "variables": [[n, r] for n, r in zip(ring.names, ring.roles)],
            "objects": {n: format_poly(p.coerce(ring)) for n, p in self.objects.items()},
            "claims": [{"kind": c.kind, "name": c.name, **_render_value(c.data)} for c in self.claims],
            "summary": self.summary,
        }

    def to_json(self, ring, indent=1):
        return json.dumps(self.to_dict(ring), indent=indent)


def rename_vars(p, var_map):
    if not var_map or not any(v in var_map for v in p.ring.names):
        return p
    blocks = []
    for b in p.ring.blocks:
        names = tuple(var_map.get(n, n) for n in b.names)
        blocks.append(VarBlock(b.name, b.arity, b.role, names))
    ring = Ring(p.ring.field, blocks)
    return Poly(ring, dict(p.terms))


# ---------------------------------------------------------------------------
# Checker
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    ok: bool
    checked: int
    failures: list

    def __bool__(self):
        return self.ok


class _Checker:
    def __init__(self, doc):
        if doc.get("format") != FORMAT:
            raise ValueError(f"unknown certificate format {doc.get('format')!r}")
        self.field = FieldSpec.parse(doc["field"])
        blocks = [VarBlock(f"v{i}", 1, role, (name,)) for i, (name, role) in enumerate(doc["variables"])]
        self.ring = Ring(self.field, blocks)
        self.base = set(self.ring.base_names())
        self.env = {}
        for name, text in doc["objects"].items():
            self.env[name] = parse_poly(text, self.ring)

    def p(self, text):
        return parse_poly(text, self.ring, self.env)

    def _jacobian(self, polys, names):
        return [[f.diff(v) for v in names] for f in polys]

    def _zero_mod(self, f, modulus):
        if modulus is not None:
            f = f.truncate(modulus)
        return f.is_zero()

    def combination(self, c):
        total = self.p(c["target"])
        if c.get("unit"):
            u = self.p(c["unit"])
            if u.constant_term() == 0:
                return "unit has zero constant term"
            total = u * total
        if len(c["gens"]) != len(c["cofactors"]):
            return "gens/cofactors length mismatch"
        for g, a in zip(c["gens"], c["cofactors"]):
            total = total - self.p(a) * self.p(g)
        if not self._zero_mod(total, c.get("modulus")):
            return "combination does not reassemble the target"
        return None

    def equal(self, c):
        lhs = self.p(c["lhs"])
        rhs = self.p(c["rhs"])
        if c.get("assignment"):
            m = {k: self.p(v) for k, v in c["assignment"].items()}
            rhs = substitute(rhs, m, c.get("modulus"))
        if not self._zero_mod(lhs - rhs, c.get("modulus")):
            return "sides differ"
        return None

    def t_order(self, c):
        f = self.p(c["poly"])
        if f.is_zero():
            return None
        if f.min_degree(c["vars"]) < c["order"]:
            return f"order in {c['vars']} below {c['order']}"
        return None

    def unit(self, c):
        f = self.p(c["poly"])
        point = {k: self.field.coerce(_num(v)) for k, v in c["point"].items()}
        try:
            val = f.evaluate(point)
        except ValueError as exc:
            return str(exc)
        if val == 0:
            return "vanishes at the point"
        return None

    def jacobian_minor(self, c):
        polys = [self.p(t) for t in c["polys"]]
        J = self._jacobian(polys, c["vars"])
        if not (_det(J, self.ring) - self.p(c["value"])).is_zero():
            return "minor differs from the stated value"
        return None

    def identity1(self, c):
        f = [self.p(t) for t in c["f"]]
        H = [[self.p(t) for t in row] for row in c["H"]]
        G = [[self.p(t) for t in row] for row in c["G"]]
        M, N = self.p(c["M"]), self.p(c["N"])
        n, r = len(c["yvars"]), len(f)
        Jf = self._jacobian(f, c["yvars"])
        if [row for row in H[:r]] != Jf:
            return "H does not extend the Jacobian"
        if not (_det(H, self.ring) - M).is_zero():
            return "det H differs from M"
        mn = M * N
        for name, A, B, rows in (("GH", G, H, n), ("HG", H, G, n), ("JG", Jf, G, r)):
            for i in range(rows):
                for j in range(n):
                    acc = self.ring.zero()
                    for k in range(n):
                        if not A[i][k].is_zero() and not B[k][j].is_zero():
                            acc = acc + A[i][k] * B[k][j]
                    want = mn if i == j else self.ring.zero()
                    if not (acc - want).is_zero():
                        return f"{name}[{i}][{j}] differs"
        return None

    def residual(self, c):
        m = {k: self.p(v) for k, v in c["assignment"].items()}
        n = c["modulus"]
        for t in c["polys"]:
            r = substitute(self.p(t), m, n)
            stray = [v for v in r.variables() if v not in self.base]
            if stray:
                return f"incomplete assignment: {stray[0]}"
            if not r.truncate(n).is_zero():
                return "residual is not zero modulo (x)^%d" % n
        return None


def _num(v):
    from fractions import Fraction
    return Fraction(v)


def _det(M, ring):
    from neron.smoothlocus import det
    if not M:
        return ring.one()
    return det(M)


def check_certificate(doc):
    """Replay every claim of ``doc`` (dict or JSON text)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    ch = _Checker(doc)
    failures = []
    for c in doc["claims"]:
        fn = getattr(ch, c["kind"], None)
        if fn is None or c["kind"].startswith("_"):
            failures.append((c["name"], f"unknown claim kind {c['kind']!r}"))
            continue
        try:
            why = fn(c)
        except (ValueError, KeyError, ZeroDivisionError) as exc:
            why = f"{type(exc).__name__}: {exc}"
        if why:
            failures.append((c["name"], why))
    return CheckReport(not failures, len(doc["claims"]), failures)


__all__ = ["Expr", "Certificate", "Claim", "check_certificate", "CheckReport", "rename_vars", "FORMAT"]
