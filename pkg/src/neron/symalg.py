"""Algebra presentations and the reductions that precede desingularization.

``sym_algebra`` replaces ``B`` by the symmetric algebra of ``I/I^2``,
``adjoin_trivial`` adds variables cut out by themselves, and
``find_system`` searches for relations and minors that put a power of a
given element of ``A`` into the Jacobian ideal.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from itertools import combinations

from neron.groebner import DEFAULT_CAPS, Ideal, colon, normal_form, syzygies
from neron.polyring import Jet, Ring, VarBlock
from neron.smoothlocus import jacobian, minor, minor_system

log = logging.getLogger(__name__)


class SearchExhausted(RuntimeError):
    pass


@dataclass
class Algebra:
    """``B = (K[x]/J)[Y]/I`` together with a jet morphism ``v: B -> A'``."""

    ring: Ring
    J: list
    I: list
    yvars: tuple
    v: dict = field(default_factory=dict)     # name -> Jet
    notes: list = field(default_factory=list)

    @property
    def xvars(self):
        return self.ring.base_names()

    def ideal(self):
        return Ideal(self.ring, list(self.I) + list(self.J))


def _fresh_y(alg, count, role="algebra"):
    used = set(alg.ring.names)
    names = []
    i = len(alg.yvars)
    while len(names) < count:
        i += 1
        nm = f"Y{i}"
        if nm not in used:
            names.append(nm)
    ring = alg.ring.extend(VarBlock("Y", count, role, tuple(names)))
    return ring, tuple(names)


def extend_algebra(alg, relations, count, values):
    """Append ``count`` new algebra variables with extra relations and jet values."""
    if count == 0:
        return replace(alg, I=list(alg.I) + list(relations))
    ring, names = _fresh_y(alg, count)
    rels = [r(ring) if callable(r) else r.coerce(ring) for r in relations]
    v = dict(alg.v)
    for nm, val in zip(names, values):
        v[nm] = val
    return Algebra(ring, [j.coerce(ring) for j in alg.J], [f.coerce(ring) for f in alg.I] + rels,
                   alg.yvars + names, v, list(alg.notes))


def sym_algebra(alg, prec=None):
    """``B -> Sym_B(I/I^2)`` with retraction sending the new variables to 0.

    The conormal module is presented by the generators of ``I`` and the
    ``f``-components of the syzygies of ``(f, J)``; coefficients are reduced
    modulo ``I + J`` and vanishing relations are dropped.
    """
    gens = list(alg.I)
    s = len(gens)
    if s == 0:
        return alg, ()
    syz = syzygies(gens + list(alg.J), alg.ring)
    total = alg.ideal()
    rels = []
    for vec in syz:
        coeffs = [normal_form(a, total).remainder for a in vec[:s]]
        if all(a.is_zero() for a in coeffs):
            continue
        rels.append(coeffs)
    ring, names = _fresh_y(alg, s)
    new = []
    for coeffs in rels:
        acc = ring.zero()
        for a, nm in zip(coeffs, names):
            if not a.is_zero():
                acc = acc + a.coerce(ring) * ring.var(nm)
        new.append(acc)
    seen = set()
    uniq = []
    for p in new:
        if p not in seen and not p.is_zero():
            seen.add(p)
            uniq.append(p)
    zero = Jet(ring.zero(), prec)
    v = dict(alg.v)
    for nm in names:
        v[nm] = zero
    out = Algebra(ring, [j.coerce(ring) for j in alg.J], [f.coerce(ring) for f in alg.I] + uniq,
                  alg.yvars + names, v, list(alg.notes))
    return out, names


def adjoin_trivial(alg, count, prec=None):
    """``B -> B[Z]/(Z) = B`` with ``count`` variables sent to 0."""
    if count <= 0:
        return alg, ()
    ring, names = _fresh_y(alg, count)
    zero = Jet(ring.zero(), prec)
    v = dict(alg.v)
    for nm in names:
        v[nm] = zero
    out = Algebra(ring, [j.coerce(ring) for j in alg.J],
                  [f.coerce(ring) for f in alg.I] + [ring.var(nm) for nm in names],
                  alg.yvars + names, v, list(alg.notes))
    return out, names


def _trivial_column(f, yvars):
    """Column index when ``f`` is a nonzero constant times one variable."""
    if len(f.terms) != 1:
        return None
    (e, c), = f.terms.items()
    if sum(e) != 1:
        return None
    i = next(i for i, k in enumerate(e) if k)
    name = f.ring.names[i]
    return yvars.index(name) if name in yvars else None


@dataclass
class SystemChoice:
    f: list
    systems: list            # MinorSystem, one per minor with N != 0
    gamma: object
    t: int
    d: object                # gamma^t
    hyp_gens: list           # generators of I + J used in the witness
    hyp_cofactors: list      # d - sum N_j M_j = sum cof * gen

    @property
    def P(self):
        return sum((s.P for s in self.systems), self.d.ring.zero())


def find_system(alg, gamma, budget=None, hints=None, max_t=None):
    """Relations ``f``, minors ``M_i`` and ``N_i`` in ``((f):I)`` with
    ``gamma^t = sum N_i M_i`` modulo ``I``.

    Generators that are a constant times a single variable are always kept
    (their columns are forced); the remaining generators are tried by
    increasing subset size, the full set first when it has at most ``n``
    elements.  ``budget`` bounds the number of subsets examined.
    """
    budget = budget or 64
    max_t = max_t or DEFAULT_CAPS["e"]
    if hints and hints.get("t"):
        max_t = hints["t"]
    yvars = list(alg.yvars)
    n = len(yvars)
    ring = alg.ring
    gamma = gamma.coerce(ring)
    forced, free = [], []
    for g in alg.I:
        j = _trivial_column(g, yvars)
        (forced if j is not None else free).append((g, j))
    forced_cols = sorted({j for _, j in forced})
    forced = [g for g, _ in forced]
    free = [g for g, _ in free]
    candidates = []
    if hints and hints.get("relations") is not None:
        candidates.append([alg.I[i] for i in hints["relations"]])
    else:
        if len(forced) + len(free) <= n:
            candidates.append(forced + free)
        for size in range(1, len(free) + 1):
            for sub in combinations(free, size):
                cand = forced + list(sub)
                if len(cand) <= n and cand not in candidates:
                    candidates.append(cand)
    tried = 0
    total = alg.ideal()
    for f in candidates:
        tried += 1
        if tried > budget:
            break
        result = _try_system(alg, f, gamma, forced_cols, total, max_t, hints)
        if result is not None:
            return result
    raise SearchExhausted("no system found within budget; supply hints")


def _try_system(alg, f, gamma, forced_cols, total, max_t, hints):
    ring = alg.ring
    yvars = list(alg.yvars)
    n = len(yvars)
    r = len(f)
    all_gens = set(alg.I)
    if set(f) == all_gens:
        col_gens = [ring.one()]
    else:
        col_gens = colon(Ideal(ring, list(f) + list(alg.J)), total).gens
        col_gens = [c for c in col_gens if not total.contains(c)]
        if not col_gens:
            return None
    Jf = jacobian(f, yvars)
    fc = [j for j in forced_cols if any(not Jf[i][j].is_zero() for i in range(r))]
    rest = [j for j in range(n) if j not in fc]
    if hints and hints.get("minors") is not None:
        col_sets = [tuple(sorted(c)) for c in hints["minors"]]
    else:
        col_sets = [tuple(sorted(fc + list(c))) for c in combinations(rest, r - len(fc))]
    minors, seen = [], {}
    for cols in col_sets:
        m = minor(Jf, cols)
        if m.is_zero():
            continue
        if m in seen or -m in seen:
            continue
        seen[m] = cols
        minors.append((cols, m))
    if not minors:
        return None
    groups = [[k] for k in range(len(minors))]
    if len(minors) > 1:
        groups.append(list(range(len(minors))))
    for group in groups:
        found = _try_minors(alg, f, [minors[k] for k in group], col_gens, gamma, max_t)
        if found is not None:
            return found
    return None


def _try_minors(alg, f, minors, col_gens, gamma, max_t):
    """Single minors are tried before their union so that ``P`` stays small."""
    ring = alg.ring
    yvars = list(alg.yvars)
    r = len(f)
    prods, owners = [], []
    for k, (cols, m) in enumerate(minors):
        for a in col_gens:
            prods.append(a * m)
            owners.append((k, a))
    extra = list(alg.I) + list(alg.J)
    ideal = Ideal(ring, prods + extra)
    for t in range(1, max_t + 1):
        d = gamma ** t
        nf = normal_form(d, ideal, witness=True)
        if not nf.remainder.is_zero():
            continue
        w = nf.witness
        # witness gens may have dropped zeros; align by identity
        cof = {}
        for g, c in zip(w.gens, w.cofactors):
            cof.setdefault(g, ring.zero())
            cof[g] = cof[g] + c
        Ns = [ring.zero() for _ in minors]
        for p, (k, a) in zip(prods, owners):
            c = cof.pop(p, None)
            if c is not None and not c.is_zero():
                Ns[k] = Ns[k] + c * a
        systems = []
        for (cols, m), N in zip(minors, Ns):
            if N.is_zero():
                continue
            systems.append(minor_system(f, yvars, cols, N))
        hyp_gens = [g for g in extra if not g.is_zero()]
        hyp_cof = [cof.get(g, ring.zero()) for g in hyp_gens]
        P = ring.zero()
        for s in systems:
            P = P + s.P
        check = d - P
        for g, c in zip(hyp_gens, hyp_cof):
            check = check - c * g
        if not check.is_zero():
            # products coinciding with relations: fall back to a direct recombination
            log.debug("witness realignment failed")
            continue
        log.info("system found: r=%d, %d minors, t=%d", r, len(systems), t)
        return SystemChoice(list(f), systems, gamma, t, d, hyp_gens, hyp_cof)
    return None


__all__ = [
    "Algebra", "extend_algebra", "sym_algebra", "adjoin_trivial", "find_system",
    "SystemChoice", "SearchExhausted",
]
