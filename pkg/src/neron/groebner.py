"""Gröbner and standard bases with cofactor witnesses.

Global computations use Buchberger's algorithm; computations in the local
ring ``K[x]_(x)`` use Mora's tangent-cone normal form with the negative
degree reverse lexicographic order ``ds``.  Every normal form can carry a
witness: cofactors (and, locally, a unit) expressing the input in terms of
the original generators, checkable by plain polynomial arithmetic.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from neron.polyring import (
    DEGREVLEX, DS, MonomialOrder, Poly, Ring, VarBlock, monomials_of_degree,
)

log = logging.getLogger(__name__)

#: incremented on every basis computation; lets callers prove a code path
#: (e.g. certificate checking) performed none
COUNTERS = {"basis": 0}

DEFAULT_CAPS = {"k": 64, "e": 16, "pairs": 200000}


class CapExceeded(RuntimeError):
    pass


class NotMPrimary(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# raw term-dict helpers (exponent tuple -> coefficient)
# ---------------------------------------------------------------------------

def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _addmono(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _axpy(h, g, coef, shift, field):
    """h += coef * x^shift * g  (in place)."""
    p = field.p
    get = h.get
    for e, c in g.items():
        ne = _addmono(e, shift)
        v = get(ne, 0) + coef * c
        if p is not None:
            v %= p
        if v == 0:
            h.pop(ne, None)
        else:
            h[ne] = v


def _mono_times(g, coef, shift, field):
    out = {}
    _axpy(out, g, coef, shift, field)
    return out


def _lead(terms, key):
    return max(terms, key=key)


class _Vec:
    """Cofactor vector as list of term dicts (sparse: None for zero)."""

    @staticmethod
    def zero(n):
        return [None] * n

    @staticmethod
    def unit(n, i, nv, one):
        v = [None] * n
        v[i] = {(0,) * nv: one}
        return v

    @staticmethod
    def axpy(v, w, coef, shift, field):
        for i, wi in enumerate(w):
            if wi:
                if v[i] is None:
                    v[i] = {}
                _axpy(v[i], wi, coef, shift, field)


# ---------------------------------------------------------------------------
# Ideal
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Ideal:
    """Ideal of ``ring`` generated by ``gens`` (zeros are dropped)."""

    ring: Ring
    gens: list
    _bases: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.gens = [g.coerce(self.ring) for g in self.gens if not g.is_zero()]

    def basis(self, order=DEGREVLEX, cofactors=False):
        key = (order, cofactors)
        if key not in self._bases:
            if order.local:
                self._bases[key] = mora_basis(self.gens, self.ring, order)
            else:
                self._bases[key] = std_basis(self, order, cofactors=cofactors)
        return self._bases[key]

    def contains(self, f, local=False):
        order = DS if local else DEGREVLEX
        nf = normal_form(f, self, order)
        return nf.remainder.is_zero()

    def witness(self, f, local=False):
        order = DS if local else DEGREVLEX
        return normal_form(f, self, order, witness=True).witness

    def __add__(self, other):
        if isinstance(other, Ideal):
            ring = self.ring.union(other.ring)
            return Ideal(ring, list(self.gens) + list(other.gens))
        return Ideal(self.ring, list(self.gens) + list(other))


@dataclass
class Basis:
    ring: Ring
    order: MonomialOrder
    polys: list            # list of Poly
    cofactors: list = None  # per basis element: list of Poly (w.r.t. gens)
    gens: list = None

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)


@dataclass
class MembershipWitness:
    """``unit * target = sum(cofactors[i] * gens[i]) + remainder``.

    Global witnesses have ``unit == 1``.  A local witness has a unit with
    nonzero constant term.  Membership holds when ``remainder`` is zero.
    """

    target: Poly
    gens: list
    cofactors: list
    remainder: Poly
    unit: Poly = None

    def check(self):
        lhs = self.target if self.unit is None else self.unit * self.target
        rhs = self.remainder
        for c, g in zip(self.cofactors, self.gens):
            rhs = rhs + c * g
        if not (lhs - rhs).is_zero():
            return False
        if self.unit is not None and self.unit.constant_term() == 0:
            return False
        return True

    @property
    def member(self):
        return self.remainder.is_zero()


@dataclass
class NormalForm:
    remainder: Poly
    quotients: list = None      # w.r.t. basis elements
    witness: MembershipWitness = None


def _to_terms(polys, ring):
    return [dict(p.coerce(ring).terms) for p in polys]


def _working_ring(ring, var_order):
    if var_order is None:
        return ring
    return Ring(ring.field, [VarBlock("v", len(var_order), "aux", tuple(var_order))])


# ---------------------------------------------------------------------------
# Buchberger
# ---------------------------------------------------------------------------

def std_basis(ideal, order=DEGREVLEX, cofactors=False, var_order=None, cap=None):
    """Reduced Gröbner basis (global order) or standard basis (``ds``)."""
    if order.local:
        return mora_basis(ideal.gens, ideal.ring, order)
    ring = ideal.ring
    wring = _working_ring(ring, var_order)
    gens = [g.restrict(wring) for g in ideal.gens]
    polys, cofs = buchberger(gens, wring, order, cofactors=cofactors, cap=cap)
    polys = [Poly(wring, t) for t in polys]
    if wring is not ring:
        polys = [p.restrict(ring) for p in polys]
    cof_polys = None
    if cofactors:
        cof_polys = [[Poly(ring, {}) if c is None else Poly(wring, c).restrict(ring)
                      for c in vec] for vec in cofs]
    return Basis(ring, order, polys, cof_polys, list(ideal.gens))


def buchberger(gens, ring, order, cofactors=False, cap=None):
    """Reduced Gröbner basis of ``gens`` as term dicts; optionally cofactors."""
    COUNTERS["basis"] += 1
    cap = cap or DEFAULT_CAPS["pairs"]
    fld = ring.field
    key = order.key()
    nv = ring.nvars
    ng = len(gens)
    one = fld.coerce(1)
    G = []        # term dicts
    LM = []
    C = []        # cofactor vectors
    pairs = []
    active = []

    def reduce_full(h, hc):
        """Full reduction of h by G (first divisor wins); returns (h, hc)."""
        out = {}
        h = dict(h)
        while h:
            m = _lead(h, key)
            c = h[m]
            for i, lm in enumerate(LM):
                if active[i] and _divides(lm, m):
                    g = G[i]
                    coef = -c * fld.inv(g[lm])
                    shift = _sub(m, lm)
                    _axpy(h, g, coef, shift, fld)
                    if hc is not None:
                        _Vec.axpy(hc, C[i], coef, shift, fld)
                    break
            else:
                out[m] = c
                del h[m]
        return out, hc

    def add(h, hc):
        idx = len(G)
        G.append(h)
        lm = _lead(h, key)
        LM.append(lm)
        C.append(hc)
        active.append(True)
        for j in range(idx):
            if active[j]:
                pairs.append((j, idx))
        return idx

    for i, g in enumerate(gens):
        h = dict(g.terms)
        hc = _Vec.unit(ng, i, nv, one) if cofactors else None
        h, hc = reduce_full(h, hc)
        if h:
            add(h, hc)

    count = 0
    while pairs:
        count += 1
        if count > cap:
            raise CapExceeded("Buchberger pair queue cap exceeded")
        # normal selection strategy: smallest lcm first
        best = min(range(len(pairs)),
                   key=lambda t: key(_lcm(LM[pairs[t][0]], LM[pairs[t][1]])))
        i, j = pairs.pop(best)
        lmi, lmj = LM[i], LM[j]
        lcm = _lcm(lmi, lmj)
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue  # product criterion
        if _chain(i, j, lcm, LM, pairs):
            continue
        ci = fld.inv(G[i][lmi])
        cj = fld.inv(G[j][lmj])
        si, sj = _sub(lcm, lmi), _sub(lcm, lmj)
        h = _mono_times(G[i], ci, si, fld)
        _axpy(h, G[j], -cj, sj, fld)
        hc = None
        if cofactors:
            hc = _Vec.zero(ng)
            _Vec.axpy(hc, C[i], ci, si, fld)
            _Vec.axpy(hc, C[j], -cj, sj, fld)
        h, hc = reduce_full(h, hc)
        if h:
            add(h, hc)

    # minimalize + interreduce
    idx = sorted(range(len(G)), key=lambda t: key(LM[t]))
    keep = []
    for t in idx:
        if any(_divides(LM[s], LM[t]) for s in keep):
            continue
        keep.append(t)
    keep = [t for t in keep if not any(s != t and _divides(LM[s], LM[t]) for s in keep)]
    for t in range(len(G)):
        active[t] = t in keep
    result = []
    rcof = []
    for t in sorted(keep, key=lambda t: key(LM[t]), reverse=True):
        active[t] = False
        lm = LM[t]
        lc = G[t][lm]
        tail = dict(G[t])
        del tail[lm]
        tc = None
        if cofactors:
            tc = [None if v is None else dict(v) for v in C[t]]
        red, tc = reduce_full(tail, tc)
        inv = fld.inv(lc)
        red = {e: fld.norm(c * inv) for e, c in red.items()}
        red[lm] = one
        if cofactors:
            tc = [None if v is None else {e: c2 for e, c2 in
                                          ((e, fld.norm(c * inv)) for e, c in v.items()) if c2 != 0}
                  for v in tc]
        G[t] = red
        C[t] = tc
        active[t] = True
        result.append(red)
        rcof.append(tc)
    return result, (rcof if cofactors else None)


def _chain(i, j, lcm, LM, pairs):
    """Gebauer-Möller style chain criterion (conservative)."""
    pending = set()
    for a, b in pairs:
        pending.add((a, b))
    for k in range(len(LM)):
        if k in (i, j):
            continue
        if _divides(LM[k], lcm):
            pik = (min(i, k), max(i, k))
            pjk = (min(j, k), max(j, k))
            if pik not in pending and pjk not in pending:
                return True
    return False


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

def normal_form(f, ideal, order=DEGREVLEX, witness=False):
    """Normal form of ``f`` modulo ``ideal``.

    Global orders: full reduction by the reduced Gröbner basis; the
    remainder is zero iff ``f`` is in the ideal.  Local order ``ds``: Mora
    normal form; the remainder is zero iff ``f`` lies in the extension of the
    ideal to ``K[x]_(x)``, and the witness then carries a unit.
    """
    if not isinstance(ideal, Ideal):
        raise TypeError("normal_form expects an Ideal")
    ring = ideal.ring.union(f.ring)
    if ring is not ideal.ring:
        ideal = Ideal(ring, ideal.gens)
    f = f.coerce(ring)
    if order.local:
        return mora_normal_form(f, ideal, order, witness=witness)
    basis = ideal.basis(order, cofactors=witness)
    rem, quots = divide(f, basis.polys, order)
    w = None
    if witness:
        ng = len(ideal.gens)
        cof = [ring.zero() for _ in range(ng)]
        for q, bc in zip(quots, basis.cofactors):
            if q.is_zero():
                continue
            for i in range(ng):
                if not bc[i].is_zero():
                    cof[i] = cof[i] + q * bc[i]
        w = MembershipWitness(f, list(ideal.gens), cof, rem)
    return NormalForm(rem, quots, w)


def divide(f, divisors, order=DEGREVLEX):
    """Multivariate division; first divisor whose leading term divides wins.

    Returns ``(remainder, quotients)`` with ``f = sum(q_i d_i) + remainder``.
    """
    ring = f.ring
    for d in divisors:
        ring = ring.union(d.ring)
    f = f.coerce(ring)
    divisors = [d.coerce(ring) for d in divisors]
    fld = ring.field
    key = order.key()
    D = [d.terms for d in divisors]
    LMs = [_lead(d, key) if d else None for d in D]
    Q = [{} for _ in D]
    h = dict(f.terms)
    rem = {}
    while h:
        m = _lead(h, key)
        c = h[m]
        for i, lm in enumerate(LMs):
            if lm is not None and _divides(lm, m):
                coef = c * fld.inv(D[i][lm])
                shift = _sub(m, lm)
                _axpy(h, D[i], -coef, shift, fld)
                q = Q[i]
                v = fld.norm(q.get(shift, 0) + coef)
                if v == 0:
                    q.pop(shift, None)
                else:
                    q[shift] = v
                break
        else:
            rem[m] = c
            del h[m]
    return Poly(ring, rem), [Poly(ring, q) for q in Q]


def exact_quotient(f, g, order=DEGREVLEX):
    """``f / g`` when ``g`` divides ``f``; raises ValueError otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    rem, (q,) = divide(f, [g], order)
    if not rem.is_zero():
        raise ValueError("not divisible")
    return q


# ---------------------------------------------------------------------------
# Mora (local ring K[x]_(x))
# ---------------------------------------------------------------------------

def _ecart(terms, lm):
    return max(sum(e) for e in terms) - sum(lm)


class _MoraElem:
    __slots__ = ("terms", "lm", "ecart", "unit", "cof")

    def __init__(self, terms, key, unit, cof):
        self.terms = terms
        self.lm = _lead(terms, key)
        self.ecart = _ecart(terms, self.lm)
        self.unit = unit
        self.cof = cof


def _mora_reduce(h, hunit, hcof, T, key, fld, track):
    """Mora's normal form; T is a list of _MoraElem (mutated with intermediates)."""
    T = list(T)
    while h:
        lm = _lead(h, key)
        cands = [t for t in T if _divides(t.lm, lm)]
        if not cands:
            break
        ecart_h = _ecart(h, lm)
        g = min(cands, key=lambda t: t.ecart)
        if g.ecart > ecart_h:
            T.append(_MoraElem(dict(h), key,
                               dict(hunit) if track else None,
                               [None if v is None else dict(v) for v in hcof] if track else None))
        coef = -h[lm] * fld.inv(g.terms[g.lm])
        shift = _sub(lm, g.lm)
        _axpy(h, g.terms, coef, shift, fld)
        if track:
            if g.unit:
                _axpy(hunit, g.unit, coef, shift, fld)
            _Vec.axpy(hcof, g.cof, coef, shift, fld)
    return h, hunit, hcof


def mora_basis(gens, ring, order=DS, cap=None):
    """Standard basis for the local order via Mora normal forms, with cofactors."""
    COUNTERS["basis"] += 1
    cap = cap or DEFAULT_CAPS["pairs"]
    fld = ring.field
    key = order.key()
    nv = ring.nvars
    ng = len(gens)
    one = fld.coerce(1)
    S = []
    for i, g in enumerate(gens):
        g = g.coerce(ring)
        if g.is_zero():
            continue
        S.append(_MoraElem(dict(g.terms), key, None, _Vec.unit(ng, i, nv, one)))
    pairs = [(i, j) for j in range(len(S)) for i in range(j)]
    count = 0
    while pairs:
        count += 1
        if count > cap:
            raise CapExceeded("Mora pair cap exceeded")
        i, j = pairs.pop(0)
        a, b = S[i], S[j]
        if all(x == 0 or y == 0 for x, y in zip(a.lm, b.lm)):
            continue
        lcm = _lcm(a.lm, b.lm)
        ca = fld.inv(a.terms[a.lm])
        cb = fld.inv(b.terms[b.lm])
        h = _mono_times(a.terms, ca, _sub(lcm, a.lm), fld)
        _axpy(h, b.terms, -cb, _sub(lcm, b.lm), fld)
        hc = _Vec.zero(ng)
        _Vec.axpy(hc, a.cof, ca, _sub(lcm, a.lm), fld)
        _Vec.axpy(hc, b.cof, -cb, _sub(lcm, b.lm), fld)
        # h = hunit * 0 + hc . gens; track the unit of the S-polynomial as zero
        hunit = {}
        h, hunit, hc = _mora_reduce(h, hunit, hc, S, key, fld, True)
        if h:
            # hunit multiplies the (zero) S-poly combination; h = hc.gens - hunit*0
            idx = len(S)
            S.append(_MoraElem(h, key, None, hc))
            pairs.extend((t, idx) for t in range(idx))
    polys = [Poly(ring, s.terms) for s in S]
    cofs = [[Poly(ring, {}) if v is None else Poly(ring, v) for v in s.cof] for s in S]
    return Basis(ring, order, polys, cofs, [g.coerce(ring) for g in gens if not g.is_zero()])


def mora_normal_form(f, ideal, order=DS, witness=False):
    ring = ideal.ring
    basis = ideal.basis(order)
    fld = ring.field
    key = order.key()
    nv = ring.nvars
    ng = len(ideal.gens)
    T = []
    for p, c in zip(basis.polys, basis.cofactors):
        T.append(_MoraElem(dict(p.terms), key, None,
                           [None if q.is_zero() else dict(q.terms) for q in c]))
    h = dict(f.terms)
    hunit = {(0,) * nv: fld.coerce(1)}
    hcof = _Vec.zero(ng)
    # invariant: h = hunit * f + hcof . gens
    h, hunit, hcof = _mora_reduce(h, hunit, hcof, T, key, fld, True)
    rem = Poly(ring, h)
    w = None
    if witness:
        cof = [ring.zero() if v is None else -Poly(ring, v) for v in hcof]
        w = MembershipWitness(f, list(ideal.gens), cof, rem, unit=Poly(ring, hunit))
    return NormalForm(rem, None, w)


def truncated_basis(gens, ring, n):
    """Standard basis of ``(gens) + (x)^n`` computed in ``K[x]/(x)^n`` (jet mode)."""
    COUNTERS["basis"] += 1
    fld = ring.field
    key = DS.key()
    S = []

    def red(h):
        h = {e: c for e, c in h.items() if sum(e) < n}
        while h:
            lm = _lead(h, key)
            for s in S:
                slm = _lead(s, key)
                if _divides(slm, lm):
                    coef = -h[lm] * fld.inv(s[slm])
                    _axpy(h, s, coef, _sub(lm, slm), fld)
                    h = {e: c for e, c in h.items() if sum(e) < n}
                    break
            else:
                return h
        return h

    queue = [dict(g.coerce(ring).terms) for g in gens]
    pairs = []
    for g in queue:
        h = red(g)
        if h:
            S.append(h)
            pairs.extend((t, len(S) - 1) for t in range(len(S) - 1))
    while pairs:
        i, j = pairs.pop(0)
        a, b = S[i], S[j]
        la, lb = _lead(a, key), _lead(b, key)
        lcm = _lcm(la, lb)
        if sum(lcm) >= n:
            continue
        h = _mono_times(a, fld.inv(a[la]), _sub(lcm, la), fld)
        _axpy(h, b, -fld.inv(b[lb]), _sub(lcm, lb), fld)
        h = red(h)
        if h:
            S.append(h)
            pairs.extend((t, len(S) - 1) for t in range(len(S) - 1))
    return [Poly(ring, s) for s in S], red


def jet_member(f, gens, ring, n):
    """True when ``f`` lies in ``(gens) + (x)^n`` of the local ring (jet mode)."""
    _, red = truncated_basis(gens, ring, n)
    return not red(dict(f.coerce(ring).terms))


# ---------------------------------------------------------------------------
# Ideal operations
# ---------------------------------------------------------------------------

def _aux_name(ring, stem="tt"):
    i = 0
    while f"{stem}{i}" in ring.index:
        i += 1
    return f"{stem}{i}"


def intersect(I, K):
    """``I ∩ K`` by eliminating an auxiliary variable from ``t*I + (1-t)*K``."""
    ring = I.ring.union(K.ring)
    tname = _aux_name(ring)
    tring = Ring(ring.field, (VarBlock("tt", 1, "aux", (tname,)),) + ring.blocks)
    t = tring.var(tname)
    gens = [t * g.coerce(tring) for g in I.gens] + [(1 - t) * g.coerce(tring) for g in K.gens]
    if not I.gens or not K.gens:
        return Ideal(ring, [])
    order = MonomialOrder("block", [(1, "lex"), (ring.nvars, "degrevlex")])
    basis = std_basis(Ideal(tring, gens), order)
    out = [p.restrict(ring) for p in basis.polys if tname not in p.variables()]
    return Ideal(ring, out)


def colon(J, g):
    """``(J : g)`` for a polynomial or ideal ``g`` (as an ideal of the ambient ring)."""
    if isinstance(g, Ideal):
        divisors = g.gens
        ring = J.ring.union(g.ring)
    else:
        divisors = [g]
        ring = J.ring.union(g.ring)
    J = Ideal(ring, J.gens)
    result = None
    for d in divisors:
        d = d.coerce(ring)
        if d.is_zero():
            continue
        if not J.gens:
            part = Ideal(ring, [])
        else:
            inter = intersect(J, Ideal(ring, [d]))
            part = Ideal(ring, [exact_quotient(p, d) for p in inter.gens])
        result = part if result is None else intersect(result, part)
    if result is None:
        return Ideal(ring, [ring.one()])
    red = std_basis(result, DEGREVLEX)
    return Ideal(ring, red.polys)


def ideal_contains(big, small, local=False):
    return all(big.contains(g, local=local) for g in small.gens)


@dataclass
class StabilizationResult:
    e: int
    annihilators: list          # colon ideals (J : d^i), i = 1..e+1
    forward: list               # witnesses q*d^(e+1) in J for q in (J:d^e)
    backward: list              # local witnesses q in (J:d^e) for q in (J:d^(e+1))
    strict: object = None       # at e-1: a generator of (J:d^e) not in (J:d^(e-1))


def stabilization_exponent(J, d, cap=None, local=True):
    """Smallest ``e >= 1`` with ``(0:_A d^e) = (0:_A d^(e+1))`` in ``A = R/J``."""
    cap = cap or DEFAULT_CAPS["e"]
    ring = J.ring.union(d.ring)
    J = Ideal(ring, J.gens)
    d = d.coerce(ring)
    if J.contains(d, local=local):
        raise ValueError("d must be nonzero in A")
    cols = [colon(J, d)]
    for e in range(1, cap + 1):
        nxt = colon(J, d ** (e + 1))
        cols.append(nxt)
        cur = cols[e - 1]
        back = [cur.witness(q, local=local) for q in nxt.gens]
        if all(w.member for w in back):
            fwd = [J.witness(q * d ** (e + 1)) for q in cur.gens]
            strict = None
            if e > 1:
                prev = cols[e - 2]
                for q in cur.gens:
                    w = prev.witness(q, local=local)
                    if not w.member:
                        strict = w
                        break
            return StabilizationResult(e, cols, fwd, back, strict)
    raise CapExceeded(f"cap exceeded: annihilator chain did not stabilize by e={cap}")


@dataclass
class MinPowerResult:
    k: int
    nonmember: object = None     # a degree-(k-1) monomial outside the ideal
    witnesses: list = None       # membership witnesses of all degree-k monomials


def min_power_k(I, J=None, cap=None, base=None, local=True, witnesses=False):
    """Smallest ``k`` with ``(x)^k`` inside ``I + J`` in ``K[x]_(x)``."""
    cap = cap or DEFAULT_CAPS["k"]
    ring = I.ring if J is None else I.ring.union(J.ring)
    total = Ideal(ring, list(I.gens) + (list(J.gens) if J is not None else []))
    xs = base or ring.base_names()
    if not xs:
        xs = ring.names
    idx = [ring.index[n] for n in xs]

    def monos(k):
        for e in monomials_of_degree(len(idx), k):
            full = [0] * ring.nvars
            for i, v in zip(idx, e):
                full[i] = v
            yield Poly(ring, {tuple(full): ring.field.coerce(1)})

    last_out = None
    for k in range(0, cap + 1):
        outside = None
        for m in monos(k):
            if not total.contains(m, local=local):
                outside = m
                break
        if outside is None:
            ws = [total.witness(m, local=local) for m in monos(k)] if witnesses else None
            return MinPowerResult(k, last_out, ws)
        last_out = outside
    raise NotMPrimary(f"not m-primary within bound (k <= {cap})")


# ---------------------------------------------------------------------------
# Syzygies
# ---------------------------------------------------------------------------

def syzygies(gens, ring=None, order=DEGREVLEX):
    """Generators of the syzygy module of ``gens`` (Schreyer)."""
    if ring is None:
        ring = gens[0].ring
        for g in gens[1:]:
            ring = ring.union(g.ring)
    gens = [g.coerce(ring) for g in gens]
    n = len(gens)
    zero = ring.zero()
    out = []
    nz = [i for i, g in enumerate(gens) if not g.is_zero()]
    for i in range(n):
        if gens[i].is_zero():
            v = [zero] * n
            v[i] = ring.one()
            out.append(v)
    if not nz:
        return out
    sub = [gens[i] for i in nz]
    basis = std_basis(Ideal(ring, sub), order, cofactors=True)
    G = basis.polys
    C = basis.cofactors             # G_j = sum C[j][i] * sub[i]
    key = order.key()
    lms = [_lead(g.terms, key) for g in G]
    m = len(sub)

    def to_gens(coeffs_on_G):
        vec = [zero] * m
        for q, row in zip(coeffs_on_G, C):
            if q.is_zero():
                continue
            for i in range(m):
                if not row[i].is_zero():
                    vec[i] = vec[i] + q * row[i]
        return vec

    fld = ring.field
    for a in range(len(G)):
        for b in range(a + 1, len(G)):
            lcm = _lcm(lms[a], lms[b])
            ca = fld.inv(G[a].terms[lms[a]])
            cb = fld.inv(G[b].terms[lms[b]])
            ma = Poly(ring, {_sub(lcm, lms[a]): ca})
            mb = Poly(ring, {_sub(lcm, lms[b]): cb})
            s = ma * G[a] - mb * G[b]
            rem, quots = divide(s, G, order)
            assert rem.is_zero()
            coeffs = [-q for q in quots]
            coeffs[a] = coeffs[a] + ma
            coeffs[b] = coeffs[b] - mb
            out.append(_embed(to_gens(coeffs), nz, n, zero))
    for i, g in enumerate(sub):
        rem, quots = divide(g, G, order)
        assert rem.is_zero()
        vec = [-x for x in to_gens(quots)]
        vec[i] = vec[i] + ring.one()
        out.append(_embed(vec, nz, n, zero))
    uniq = []
    seen = set()
    for v in out:
        if all(x.is_zero() for x in v):
            continue
        k = tuple(v)
        if k in seen:
            continue
        seen.add(k)
        uniq.append(v)
    return uniq


def _embed(vec, nz, n, zero):
    out = [zero] * n
    for i, v in zip(nz, vec):
        out[i] = v
    return out


def check_syzygy(vec, gens):
    total = None
    for s, g in zip(vec, gens):
        t = s * g
        total = t if total is None else total + t
    return total is None or total.is_zero()


__all__ = [
    "Ideal", "Basis", "MembershipWitness", "NormalForm", "CapExceeded", "NotMPrimary",
    "std_basis", "normal_form", "divide", "exact_quotient", "mora_basis",
    "mora_normal_form", "truncated_basis", "jet_member", "intersect", "colon",
    "ideal_contains", "stabilization_exponent", "min_power_k", "syzygies",
    "check_syzygy", "COUNTERS", "DEFAULT_CAPS",
]
