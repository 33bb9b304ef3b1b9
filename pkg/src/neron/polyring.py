"""Exact sparse multivariate polynomials and truncated power series.

Polynomials live in a :class:`Ring`, an ordered list of named variables
grouped in blocks (``x`` base variables, ``Y`` algebra variables, ``Z``,
``T``, ...) over an exact field.  Terms are stored as a dict from exponent
tuples to nonzero coefficients.  Rings are append-only: a ring extended by
a new block embeds the old one, and binary operations between polynomials
of compatible rings coerce both sides into the union ring.

A :class:`Jet` is a polynomial known modulo ``(x)^prec`` in the base
variables.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

ROLES = ("base", "algebra", "smooth", "tangent", "aux")


class ParseError(ValueError):
    """Raised for malformed polynomial text; carries a column."""

    def __init__(self, message, column=None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class FieldSpec:
    """The coefficient field: ``QQ`` or ``GF(p)``."""

    __slots__ = ("kind", "p")

    def __init__(self, kind="rational", p=None):
        if kind not in ("rational", "prime"):
            raise ValueError(f"unknown field kind {kind!r}")
        if kind == "prime":
            if p is None or p < 2 or not gmpy2.is_prime(p):
                raise ValueError(f"{p} is not prime")
            p = int(p)
        else:
            p = None
        self.kind = kind
        self.p = p

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text in ("QQ", "Q", "rational"):
            return cls("rational")
        m = re.fullmatch(r"(?:GF|F)\(?\s*(\d+)\s*\)?", text)
        if m:
            return cls("prime", int(m.group(1)))
        raise ParseError(f"unknown field {text!r}")

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.p == other.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def coerce(self, c):
        if self.p is None:
            if isinstance(c, str):
                return mpq(c)
            if isinstance(c, Fraction):
                return mpq(c.numerator, c.denominator)
            return mpq(c)
        if isinstance(c, str):
            c = Fraction(c)
        if isinstance(c, (Fraction, type(mpq(0)))):
            num, den = int(c.numerator), int(c.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes in GF({self.p})")
            return num * pow(den, -1, self.p) % self.p
        return int(c) % self.p

    def inv(self, c):
        if self.p is None:
            return 1 / c
        return pow(int(c), -1, self.p)

    def norm(self, c):
        return c if self.p is None else c % self.p

    def fmt(self, c):
        if self.p is None:
            if c.denominator == 1:
                return str(c.numerator)
            return f"{c.numerator}/{c.denominator}"
        return str(int(c))

    def is_negative(self, c):
        return self.p is None and c < 0

    def to_fraction(self, c):
        if self.p is None:
            return Fraction(int(c.numerator), int(c.denominator))
        return Fraction(int(c))


QQ = FieldSpec("rational")


def GF(p):
    return FieldSpec("prime", p)


@dataclass(frozen=True)
class VarBlock:
    name: str
    arity: int
    role: str = "aux"
    names: tuple = None

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("block arity must be >= 1")
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if self.names is None:
            object.__setattr__(
                self, "names", tuple(f"{self.name}{i}" for i in range(1, self.arity + 1)))
        elif len(self.names) != self.arity:
            raise ValueError("explicit names do not match arity")


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class Ring:
    """Ordered variables over a field, grouped in append-only blocks."""

    _cache = {}

    def __new__(cls, field, blocks=()):
        blocks = tuple(blocks)
        key = (field, blocks)
        cached = cls._cache.get(key)
        if cached is not None:
            return cached
        self = super().__new__(cls)
        names = []
        roles = []
        for b in blocks:
            for nm in b.names:
                if not _NAME_RE.match(nm):
                    raise ValueError(f"bad variable name {nm!r}")
                names.append(nm)
                roles.append(b.role)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique within a ring")
        self.field = field
        self.blocks = blocks
        self.names = tuple(names)
        self.roles = tuple(roles)
        self.index = {nm: i for i, nm in enumerate(names)}
        self.nvars = len(names)
        self.base_mask = tuple(r == "base" for r in roles)
        self._unions = {}
        cls._cache[key] = self
        return self

    def __repr__(self):
        return f"Ring({self.field!r}, {', '.join(self.names)})"

    def __reduce__(self):
        return (Ring, (self.field, self.blocks))

    def extend(self, *blocks):
        return Ring(self.field, self.blocks + tuple(blocks))

    def base_names(self):
        return tuple(n for n, r in zip(self.names, self.roles) if r == "base")

    def role_names(self, role):
        return tuple(n for n, r in zip(self.names, self.roles) if r == role)

    def var(self, name):
        i = self.index[name]
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.coerce(1)})

    def gens(self):
        return tuple(self.var(n) for n in self.names)

    def __call__(self, value):
        """Parse text or coerce a number/poly into this ring."""
        if isinstance(value, Poly):
            return value.coerce(self)
        if isinstance(value, str):
            return parse_poly(value, self)
        return self.const(value)

    def const(self, c):
        c = self.field.coerce(c)
        if c == 0:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: c})

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def contains(self, other):
        return self.field == other.field and all(n in self.index for n in other.names)

    def union(self, other):
        if other is self:
            return self
        u = self._unions.get(other)
        if u is not None:
            return u
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")
        if self.contains(other):
            u = self
        elif other.contains(self):
            u = other
        else:
            extra = []
            for b in other.blocks:
                nm = tuple(n for n in b.names if n not in self.index)
                if nm:
                    extra.append(VarBlock(b.name, len(nm), b.role, nm))
            u = self.extend(*extra)
        self._unions[other] = u
        return u

    def subring(self, names, role_override=None):
        """Ring on a subset of variables (block structure kept where possible)."""
        keep = set(names)
        blocks = []
        for b in self.blocks:
            nm = tuple(n for n in b.names if n in keep)
            if nm:
                blocks.append(VarBlock(b.name, len(nm), role_override or b.role, nm))
        return Ring(self.field, blocks)


def _embed_map(src, dst):
    if src is dst:
        return None
    try:
        return tuple(dst.index[n] for n in src.names)
    except KeyError as exc:
        raise ValueError(f"variable {exc.args[0]} not in target ring") from None


class Poly:
    """Immutable sparse polynomial."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- construction helpers -------------------------------------------------
    @staticmethod
    def from_terms(ring, items):
        f = ring.field
        out = {}
        for e, c in items:
            c = f.coerce(c)
            if c == 0:
                continue
            e = tuple(e)
            v = f.norm(out.get(e, 0) + c)
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return Poly(ring, out)

    def coerce(self, ring):
        if ring is self.ring:
            return self
        if ring.field != self.ring.field:
            raise ValueError("field mismatch")
        mp = _embed_map(self.ring, ring)
        out = {}
        n = ring.nvars
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[mp[i]] = k
            out[tuple(ne)] = c
        return Poly(ring, out)

    def restrict(self, ring):
        """Coerce into a ring that may lack variables this poly does not use."""
        if ring is self.ring:
            return self
        used = self.variables()
        for v in used:
            if v not in ring.index:
                raise ValueError(f"variable {v} not in target ring")
        idx = [ring.index.get(n) for n in self.ring.names]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    ne[idx[i]] = k
            out[tuple(ne)] = c
        return Poly(ring, out)

    def _coerce_pair(self, other):
        if isinstance(other, Poly):
            if other.ring is self.ring:
                return self, other
            u = self.ring.union(other.ring)
            return self.coerce(u), other.coerce(u)
        return self, self.ring.const(other)

    # -- basic protocol ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                return self == self.ring.const(other)
            return NotImplemented
        a, b = self._coerce_pair(other)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.drop_unused_key()))
        return self._hash

    def drop_unused_key(self):
        names = self.ring.names
        return ((tuple((names[i], k) for i, k in enumerate(e) if k), c)
                for e, c in self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    # -- arithmetic ---------------------------------------------------------------
    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {e: f.norm(-c) for e, c in self.terms.items()})

    def __add__(self, other):
        a, b = self._coerce_pair(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        f = a.ring.field
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = f.norm(v + c)
                if v == 0:
                    del out[e]
                else:
                    out[e] = v
        return Poly(a.ring, out)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce_pair(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.ring.field.coerce(other)
            if c == 0:
                return Poly(self.ring, {})
            f = self.ring.field
            return Poly(self.ring, {e: f.norm(v * c) for e, v in self.terms.items()})
        a, b = self._coerce_pair(other)
        if not a.terms or not b.terms:
            return Poly(a.ring, {})
        if len(a.terms) < len(b.terms):
            a, b = b, a
        f = a.ring.field
        p = f.p
        out = {}
        get = out.get
        bt = list(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bt:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        if p is None:
            out = {e: c for e, c in out.items() if c != 0}
        else:
            out = {e: c % p for e, c in out.items() if c % p}
        return Poly(a.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c):
        return self * c

    # -- inspection ---------------------------------------------------------------
    def variables(self):
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return tuple(self.ring.names[i] for i in sorted(used))

    def total_degree(self, names=None):
        if not self.terms:
            return -1
        mask = self._mask(names)
        return max(sum(k for k, m in zip(e, mask) if m) for e in self.terms)

    def min_degree(self, names=None):
        """Lowest total degree in ``names`` over all terms (order of vanishing)."""
        if not self.terms:
            return None
        mask = self._mask(names)
        return min(sum(k for k, m in zip(e, mask) if m) for e in self.terms)

    def _mask(self, names):
        if names is None:
            return (True,) * self.ring.nvars
        s = set(names)
        return tuple(n in s for n in self.ring.names)

    def x_degree_terms(self):
        mask = self.ring.base_mask
        return {e: sum(k for k, m in zip(e, mask) if m) for e in self.terms}

    def x_order(self):
        """Order of vanishing in the base variables (None for zero)."""
        return self.min_degree(self.ring.base_names())

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.coerce(0))

    def is_constant(self):
        z = (0,) * self.ring.nvars
        return all(e == z for e in self.terms)

    def coeff_in(self, names):
        """Split by monomials in ``names``: {exponent tuple over names: coefficient poly}."""
        idx = [self.ring.index[n] for n in names]
        out = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            rest = list(e)
            for i in idx:
                rest[i] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: Poly(self.ring, v) for k, v in out.items()}

    def homogeneous_parts(self, names):
        """{degree in names: part}."""
        mask = self._mask(names)
        out = {}
        for e, c in self.terms.items():
            d = sum(k for k, m in zip(e, mask) if m)
            out.setdefault(d, {})[e] = c
        return {d: Poly(self.ring, v) for d, v in out.items()}

    def diff(self, name):
        if name not in self.ring.index:
            return Poly(self.ring, {})
        i = self.ring.index[name]
        f = self.ring.field
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = list(e)
                ne[i] = k - 1
                v = f.norm(c * k)
                if v != 0:
                    out[tuple(ne)] = v
        return Poly(self.ring, out)

    def truncate(self, n, names=None):
        """Drop monomials of degree >= n in ``names`` (default: base variables)."""
        if names is None:
            mask = self.ring.base_mask
        else:
            mask = self._mask(names)
        return Poly(self.ring, {e: c for e, c in self.terms.items()
                                if sum(k for k, m in zip(e, mask) if m) < n})

    def map_coeffs(self, fn):
        return Poly.from_terms(self.ring, ((e, fn(c)) for e, c in self.terms.items()))

    def subs(self, mapping, trunc=None):
        """Substitute polys for variables; ``trunc`` truncates in base variables."""
        return substitute(self, mapping, trunc)

    def evaluate(self, point):
        """Evaluate at a dict name -> field element; unspecified vars must not occur."""
        f = self.ring.field
        total = f.coerce(0)
        vals = [None] * self.ring.nvars
        for n, v in point.items():
            if n in self.ring.index:
                vals[self.ring.index[n]] = f.coerce(v)
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise ValueError(f"variable {self.ring.names[i]} not assigned")
                    t = t * vals[i] ** k
            total = f.norm(total + t)
        return total


def substitute(f, mapping, trunc=None):
    """Substitute ``mapping`` (name -> Poly or scalar) into ``f``.

    Variables of ``f`` not in ``mapping`` are kept.  When ``trunc`` is given
    every intermediate product is truncated at base-variable degree ``trunc``.
    """
    if not f.terms:
        return f
    ring = f.ring
    targets = {}
    out_ring = ring
    for n, v in mapping.items():
        if n not in ring.index:
            continue
        if not isinstance(v, Poly):
            v = ring.const(v)
        targets[n] = v
        out_ring = out_ring.union(v.ring)
    if not targets:
        return f
    keep = [n for n in ring.names if n not in targets]
    mapping_idx = [(ring.index[n], targets[n].coerce(out_ring)) for n in targets]
    keep_idx = [(ring.index[n], out_ring.index[n]) for n in keep]
    cut = (lambda p: p.truncate(trunc)) if trunc is not None else (lambda p: p)
    powers = {}

    def power(i, v, k):
        key = (i, k)
        if key not in powers:
            if k == 1:
                powers[key] = v
            else:
                half = power(i, v, k // 2)
                r = cut(half * half)
                if k % 2:
                    r = cut(r * v)
                powers[key] = r
        return powers[key]

    # group terms by the substituted part of the exponent
    groups = {}
    for e, c in f.terms.items():
        key = tuple(e[i] for i, _ in mapping_idx)
        ne = [0] * out_ring.nvars
        for i, j in keep_idx:
            ne[j] = e[i]
        groups.setdefault(key, {})[tuple(ne)] = c
    total = out_ring.zero()
    for key, rest in groups.items():
        term = Poly(out_ring, rest)
        for (i, v), k in zip(mapping_idx, key):
            if k:
                term = cut(term * power(i, v, k))
        total = total + term
    return cut(total)


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------

class Jet:
    """A polynomial known modulo ``(x)^prec``; ``prec=None`` means exact."""

    __slots__ = ("value", "prec")

    def __init__(self, value, prec=None):
        if prec is not None:
            if prec < 0:
                raise ValueError("precision must be >= 0")
            value = value.truncate(prec)
        self.value = value
        self.prec = prec

    @property
    def ring(self):
        return self.value.ring

    def __repr__(self):
        return f"Jet({format_poly(self.value)!r}, prec={self.prec})"

    @staticmethod
    def _min(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def _other(self, other):
        if isinstance(other, Jet):
            return other.value, other.prec
        return other, None

    def __add__(self, other):
        v, p = self._other(other)
        return Jet(self.value + v, self._min(self.prec, p))

    __radd__ = __add__

    def __sub__(self, other):
        v, p = self._other(other)
        return Jet(self.value - v, self._min(self.prec, p))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Jet(-self.value, self.prec)

    def __mul__(self, other):
        v, p = self._other(other)
        prec = self._min(self.prec, p)
        if prec is None:
            return Jet(self.value * v)
        a = self.value.truncate(prec)
        b = v.truncate(prec) if isinstance(v, Poly) else v
        return Jet((a * b), prec)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return self.prec == other.prec and self.value == other.value

    def __hash__(self):
        return hash((self.value, self.prec))

    def agrees(self, other, n=None):
        """True when the two jets coincide modulo (x)^n (default: common precision)."""
        if isinstance(other, Jet):
            ov, op = other.value, other.prec
        else:
            ov, op = other, None
        n = self._min(self._min(self.prec, op), n)
        diff = self.value - ov
        return diff.truncate(n).is_zero() if n is not None else diff.is_zero()


def truncate(f, n):
    """Jet of ``f`` modulo ``(x)^n``."""
    if n < 0:
        raise ValueError("truncation order must be >= 0")
    return Jet(f, n)


class IncompleteAssignment(ValueError):
    pass


def poly_eval(f, assign):
    """Substitute jets (or polys) for variables of ``f``.

    Every variable of ``f`` must be assigned or be a base variable.  The
    result carries the minimum precision of the inputs.
    """
    prec = None
    mapping = {}
    for n, v in assign.items():
        if isinstance(v, Jet):
            prec = Jet._min(prec, v.prec)
            mapping[n] = v.value
        else:
            mapping[n] = v
    for n, role in zip(f.ring.names, f.ring.roles):
        if role != "base" and n not in mapping and n in f.variables():
            raise IncompleteAssignment(f"incomplete assignment: {n} has no value")
    return Jet(substitute(f, mapping, prec), prec)


def taylor_parts(f, yprime, W, tvars=None):
    """Homogeneous parts in ``T`` of ``f(y' + W)``.

    ``yprime`` and ``W`` are sequences aligned with the variables they
    replace (``ys``), or dicts name -> Poly.  Returns a list indexed by the
    T-degree mu, from 0 to the degree of ``f`` in the replaced variables.
    """
    if isinstance(yprime, dict):
        ys = list(yprime)
        yp = [yprime[n] for n in ys]
        if not isinstance(W, dict):
            raise ValueError("W must be a dict when y' is")
        missing = set(ys) ^ set(W)
        if missing:
            raise ValueError(f"W length mismatch with Y-arity: {sorted(missing)}")
        ws = [W[n] for n in ys]
    else:
        raise ValueError("pass y' and W as dicts keyed by variable name")
    if tvars is None:
        tv = set()
        for w in ws:
            if isinstance(w, Poly):
                tv.update(w.variables())
        tvars = sorted(tv)
    deg = f.total_degree(ys)
    shifted = substitute(f, {n: a + b for n, a, b in zip(ys, yp, ws)})
    parts = shifted.homogeneous_parts(tvars)
    ring = shifted.ring
    return [parts.get(mu, ring.zero()) for mu in range(max(deg, 0) + 1)] + \
        [parts[mu] for mu in sorted(parts) if mu > deg]


# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------

class MonomialOrder:
    """Order on exponent tuples over a given variable list.

    ``kind`` is ``lex``, ``degrevlex`` (global), ``ds`` (local negative
    degree reverse lex, 1 > x_i) or ``block`` with a list of
    (size, kind) pairs refining left to right.
    """

    def __init__(self, kind="degrevlex", blocks=None):
        if kind not in ("lex", "degrevlex", "deglex", "ds", "block"):
            raise ValueError(f"unknown order {kind!r}")
        if kind == "block" and not blocks:
            raise ValueError("block order needs blocks")
        self.kind = kind
        self.blocks = tuple(blocks) if blocks else None
        self.local = kind == "ds"

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder(block, {self.blocks})"
        return f"MonomialOrder({self.kind})"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.blocks) == (other.kind, other.blocks)

    def __hash__(self):
        return hash((self.kind, self.blocks))

    def key(self):
        kind = self.kind
        if kind == "lex":
            return lambda e: e
        if kind == "degrevlex":
            return lambda e: (sum(e), tuple(-k for k in reversed(e)))
        if kind == "deglex":
            return lambda e: (sum(e), e)
        if kind == "ds":
            return lambda e: (-sum(e), tuple(-k for k in reversed(e)))
        parts = []
        start = 0
        for size, sub in self.blocks:
            parts.append((start, start + size, MonomialOrder(sub).key()))
            start += size

        def block_key(e):
            return tuple(k(e[a:b]) for a, b, k in parts)
        return block_key


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")
DS = MonomialOrder("ds")


# ---------------------------------------------------------------------------
# Text grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\*\*|[-+*/^()])|@([A-Za-z0-9_.]+))")


def _tokenize(text):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        elif m.group(4):
            toks.append(("ref", m.group(4), start - 1))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text, ring, env=None):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.env = env or {}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}", t[2] + 1)

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty polynomial", 1)
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected token {t[1]!r}", t[2] + 1)
        return p

    def expr(self):
        t = self.peek()
        neg = False
        if t[0] == "op" and t[1] in "+-":
            self.take()
            neg = t[1] == "-"
        p = self.term()
        if neg:
            p = -p
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if t[1] == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                p = p * self.factor()
            elif t[0] == "op" and t[1] == "/":
                self.take()
                q = self.factor()
                if not q.is_constant() or q.is_zero():
                    raise ParseError("division only by nonzero constants", t[2] + 1)
                p = p * self.ring.field.inv(q.constant_term())
            elif t[0] in ("num", "name", "ref") or (t[0] == "op" and t[1] == "("):
                p = p * self.factor()   # implicit multiplication
            else:
                return p

    def factor(self):
        b = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", e[2] + 1)
            b = b ** e[1]
        return b

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return self.ring.const(t[1])
        if t[0] == "name":
            if t[1] not in self.ring.index:
                raise ParseError(f"unknown variable {t[1]!r}", t[2] + 1)
            return self.ring.var(t[1])
        if t[0] == "ref":
            if t[1] not in self.env:
                raise ParseError(f"unknown reference @{t[1]}", t[2] + 1)
            return self.env[t[1]].coerce(self.ring)
        if t[0] == "op" and t[1] == "(":
            p = self.expr()
            self.expect(")")
            return p
        if t[0] == "op" and t[1] == "-":
            return -self.factor()
        raise ParseError("unexpected end of input" if t[0] == "end" else f"unexpected {t[1]!r}", t[2] + 1)


def parse_poly(text, ring, env=None):
    """Parse ``text``; ``@name`` tokens are looked up in ``env``."""
    return _Parser(text, ring, env).parse()


def sorted_terms(f, order=DEGREVLEX):
    key = order.key()
    return sorted(f.terms.items(), key=lambda t: key(t[0]), reverse=True)


def format_poly(f, order=DEGREVLEX):
    if not f.terms:
        return "0"
    field = f.ring.field
    names = f.ring.names
    out = []
    for e, c in sorted_terms(f, order):
        mono = "*".join(names[i] if k == 1 else f"{names[i]}^{k}"
                        for i, k in enumerate(e) if k)
        neg = field.is_negative(c)
        a = -c if neg else c
        cs = field.fmt(a)
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def monomials_of_degree(n, k):
    """All exponent tuples of length n and total degree k."""
    if n == 0:
        if k == 0:
            yield ()
        return
    if n == 1:
        yield (k,)
        return
    for i in range(k, -1, -1):
        for rest in monomials_of_degree(n - 1, k - i):
            yield (i,) + rest


def monomial(ring, exps):
    """Monomial of ``ring`` from a dict name -> exponent."""
    e = [0] * ring.nvars
    for n, k in exps.items():
        e[ring.index[n]] = k
    return Poly(ring, {tuple(e): ring.field.coerce(1)})


def make_ring(field=QQ, **blocks):
    """Convenience: ``make_ring(QQ, x=('base', 2), Y=('algebra', 3))``."""
    out = []
    for name, spec in blocks.items():
        role, arity = spec
        out.append(VarBlock(name, arity, role))
    return Ring(field, out)


__all__ = [
    "FieldSpec", "QQ", "GF", "VarBlock", "Ring", "Poly", "Jet", "MonomialOrder",
    "LEX", "DEGREVLEX", "DS", "ParseError", "IncompleteAssignment",
    "parse_poly", "format_poly", "poly_eval", "taylor_parts", "truncate",
    "substitute", "monomials_of_degree", "monomial", "make_ring",
]
