"""Constructive Néron desingularization.

The central construction is :func:`build_smooth_extension`: from a standard
smooth ``A``-algebra ``D``, an algebra ``B = A[Y]/I``, a point ``y'`` of
``B`` in ``D`` and relations ``f`` with minors ``M_j`` and multipliers
``N_j`` such that ``P(y') = d s`` for ``P = sum N_j M_j``, it builds

    E = D[Y, T]/(I, g, h)   localized at   s * s' * s''

which is standard smooth over ``A`` and through which the morphism
``v: B -> A'`` factors.  The uniform algorithms and the general recursive
algorithm in this module all reduce to it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from neron.certificate import Certificate, Expr, rename_vars
from neron.groebner import DEFAULT_CAPS, Ideal, exact_quotient, min_power_k, normal_form, stabilization_exponent
from neron.hensel import jet_divide, newton_lift
from neron.polyring import DS, Jet, Poly, Ring, VarBlock, format_poly, substitute, taylor_parts
from neron.smoothlocus import det, jacobian, matvec, verify_identity1

log = logging.getLogger(__name__)


class HypothesisError(ValueError):
    """The data handed to the construction do not satisfy its hypotheses."""


class Rejection(Exception):
    """A gate of a uniform algorithm refused the input."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.message = message
        self.evidence = evidence or {}


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

@dataclass
class ExtensionData:
    d: Poly
    e: int
    p: int
    s: Poly
    s_prime: Poly
    s2: Poly                 # numerator of s''; s'' = s2 / s^(delta + 1)
    delta: int
    yprime: dict             # Y name -> Poly over D
    f: list
    systems: list
    b: list
    W: list
    Q: list
    g: list
    h: list
    shared: tuple            # T_1..T_r
    tails: list              # per system: names of T_{j, r+1..n}
    kernel: list = None      # per i: (cofactors on h, cofactors on D and base relations)
    s_witness: tuple = None  # (gens, cofactors): P(y') - d s = sum cof * gen
    hyp: tuple = None        # (gens, cofactors): d - P = sum cof * gen over I + J
    s_congruent: bool = True # False: s is only a unit at the lift of D


@dataclass
class SmoothPresentation:
    """A standard smooth ``A``-algebra with a map from ``B`` and a jet
    morphism to ``A'``.

    ``system`` are the relations whose Jacobian on ``solve_vars`` is a unit
    at the canonical lift; ``relations`` are all relations (the system plus
    the relations of ``B`` carried along); ``inverted`` are the elements
    inverted in the localization.
    """

    kind: str
    ring: Ring
    J: list
    relations: list
    system: list
    solve_vars: tuple
    inverted: list
    yvars: tuple
    zvars: tuple
    tvars: tuple
    pi: dict
    lift: dict
    precision: int
    free_vars: tuple = ()
    data: ExtensionData = None
    D: "SmoothPresentation" = None
    certificate: Certificate = field(default_factory=Certificate)
    algebra: object = None
    notes: list = field(default_factory=list)
    origin: "SmoothPresentation" = None   # the presentation this one renames

    @property
    def variables(self):
        return tuple(self.zvars) + tuple(self.yvars) + tuple(self.tvars)

    def inverted_product(self):
        out = self.ring.one()
        for u in self.inverted:
            out = out * u
        return out

    def describe(self):
        lines = [f"kind: {self.kind}",
                 f"variables: {', '.join(self.variables) or '(none)'}",
                 f"relations: {len(self.relations)} (standard system of {len(self.system)})",
                 f"inverted: {len(self.inverted)} elements",
                 f"precision: {self.precision}"]
        if self.data is not None:
            dd = self.data
            lines.append(f"d = {dd.d}, e = {dd.e}, p = {dd.p}, systems = {len(dd.systems)}")
        return "\n".join(lines)


def _point(lift, ring):
    pt = {n: 0 for n in ring.base_names()}
    for name, jet in lift.items():
        v = jet.value if isinstance(jet, Jet) else jet
        pt[name] = v.constant_term()
    return pt


def _vals(lift):
    return {k: (v.value if isinstance(v, Jet) else v) for k, v in lift.items()}


def trivial_presentation(xring, J, algebra, pi, n_prec, cert=None):
    """``D = A`` itself; ``pi`` gives the images of the variables of ``B``."""
    return SmoothPresentation(
        kind="trivial", ring=xring, J=list(J), relations=[], system=[], solve_vars=(),
        inverted=[], yvars=(), zvars=(), tvars=(), pi=dict(pi), lift={}, precision=n_prec,
        certificate=cert or Certificate(), algebra=algebra)


def rename_presentation(pres, prefix="Z"):
    """Rename every variable of ``pres`` (except base variables) with ``prefix``."""
    var_map = {n: prefix + n for n in pres.variables}
    ring = pres.ring
    blocks = []
    for b in ring.blocks:
        names = tuple(var_map.get(n, n) for n in b.names)
        role = "smooth" if b.role != "base" else "base"
        blocks.append(VarBlock(b.name if role == "base" else "Z", b.arity, role, names))
    new_ring = Ring(ring.field, blocks)

    def rn(p):
        return rename_vars(p, var_map).coerce(new_ring) if isinstance(p, Poly) else p

    lift = {var_map.get(k, k): Jet(rn(v.value), v.prec) for k, v in pres.lift.items()}
    return SmoothPresentation(
        kind="trivial" if pres.kind == "trivial" else "standard", ring=new_ring, J=[rn(j) for j in pres.J],
        relations=[rn(r) for r in pres.relations], system=[rn(r) for r in pres.system],
        solve_vars=tuple(var_map[v] for v in pres.solve_vars),
        inverted=[rn(u) for u in pres.inverted], yvars=(),
        zvars=tuple(var_map[v] for v in pres.variables), tvars=(),
        pi={k: rn(v) for k, v in pres.pi.items()}, lift=lift, precision=pres.precision,
        free_vars=tuple(var_map[v] for v in pres.free_vars), data=None, D=None,
        certificate=pres.certificate.renamed(var_map, ""), algebra=pres.algebra,
        notes=list(pres.notes), origin=pres)


# ---------------------------------------------------------------------------
# Taylor split
# ---------------------------------------------------------------------------

def taylor_split(f, yvars, u, v, scale, top):
    """Cofactors ``c_k`` with ``sum_a scale^(top-|a|) f_a (prod u^a - prod v^a) = sum_k c_k (u_k - v_k)``.

    ``u`` and ``v`` map variable names to polynomials; the identity is the
    telescoping sum over the factors of each monomial.
    """
    ring = None
    for p in list(u.values()) + list(v.values()) + [scale]:
        ring = p.ring if ring is None else ring.union(p.ring)
    cof = {y: ring.zero() for y in yvars}
    split = f.coeff_in(list(yvars))
    for exps, coeff in split.items():
        a = sum(exps)
        if a == 0:
            continue
        seq = [y for y, k in zip(yvars, exps) for _ in range(k)]
        base = coeff.coerce(ring) * scale.coerce(ring) ** (top - a)
        left = ring.one()
        rights = [ring.one()] * (a + 1)
        for t in range(a - 1, -1, -1):
            rights[t] = rights[t + 1] * u[seq[t]]
        for t, y in enumerate(seq):
            cof[y] = cof[y] + base * left * rights[t + 1]
            left = left * v[y]
    return [cof[y] for y in yvars]


def _membership(target, gens, ring):
    """Global membership witness of ``target`` in ``(gens)``: cofactors or None."""
    if target.is_zero():
        return [ring.zero() for _ in gens]
    nz = [(i, g.coerce(ring)) for i, g in enumerate(gens) if not g.is_zero()]
    if len(nz) == 1:
        i, g = nz[0]
        try:
            q = exact_quotient(target.coerce(ring), g)
        except ValueError:
            return None
        out = [ring.zero() for _ in gens]
        out[i] = q
        return out
    ideal = Ideal(ring, [g for _, g in nz])
    w = normal_form(target.coerce(ring), ideal, witness=True).witness
    if not w.member:
        return None
    out = [ring.zero() for _ in gens]
    for (i, _), c in zip(nz, w.cofactors):
        out[i] = c
    return out


def _unit_value(u, point):
    pt = {n: point.get(n, 0) for n in u.variables()}
    return u.evaluate(pt)


# ---------------------------------------------------------------------------
# The smooth extension
# ---------------------------------------------------------------------------

def build_smooth_extension(D, algebra, f, systems, yprime, d, e, hyp=None, prefix=""):
    """Build ``E = D[Y,T]/(I,g,h)`` localized at ``s s' s''``.

    ``D`` is a :class:`SmoothPresentation` (its ``zvars`` are the variables
    of ``D``); ``algebra`` carries ``I``, the base relations ``J`` and the
    jets ``v``; ``yprime`` maps each ``Y`` to a polynomial over ``D``.
    ``hyp`` optionally holds ``(gens, cofactors)`` with
    ``d - P = sum cof * gen`` over ``I + J``.
    """
    if e < 1:
        raise ValueError("e must be >= 1")
    yvars = tuple(algebra.yvars)
    n, r = len(yvars), len(f)
    if r > n:
        raise ValueError("need r <= n")
    q = len(systems)
    if q == 0:
        raise ValueError("need at least one minor")
    if q == 1:
        shared = tuple(f"T{i}" for i in range(1, r + 1))
        tails = [tuple(f"T{i}" for i in range(r + 1, n + 1))]
    else:
        shared = tuple(f"T{i}" for i in range(1, r + 1))
        tails = [tuple(f"T{j}_{i}" for i in range(r + 1, n + 1)) for j in range(1, q + 1)]
    tnames = shared + tuple(t for tl in tails for t in tl)
    blocks = list(D.ring.blocks)
    have = set(D.ring.names)
    for b in algebra.ring.blocks:
        nm = tuple(x for x in b.names if x not in have)
        if nm:
            blocks.append(VarBlock(b.name, len(nm), b.role, nm))
            have.update(nm)
    if tnames:
        blocks.append(VarBlock("T", len(tnames), "tangent", tnames))
    ring = Ring(D.ring.field, blocks)
    zring = D.ring
    c = lambda p: p.coerce(ring)
    d = c(d)
    J = [c(j) for j in algebra.J]
    L = [c(x) for x in D.relations]
    LJ = L + J
    I = [c(x) for x in algebra.I]
    f = [c(x) for x in f]
    yp = {y: c(yprime[y]) for y in yvars}
    cert = Certificate()
    cert.merge(D.certificate.renamed({}, "D."))
    P = ring.zero()
    for sy in systems:
        P = P + c(sy.N) * c(sy.M)
    Py = substitute(P, yp)

    # s with P(y') = d s modulo the relations of D, and s = 1 mod d^(2e)
    d2e1 = d ** (2 * e + 1)
    rem = Py - d
    cof = _membership(rem, [d2e1] + LJ, ring)
    s_near_1 = cof is not None
    if s_near_1:
        c0, sL = cof[0], cof[1:]
        s = ring.one() + c0 * d ** (2 * e)
    else:
        # s only a unit at the lift of D (the recursion of the dim-m algorithm)
        cof = _membership(Py, [d] + LJ, ring)
        point = _point(D.lift, ring) if D.lift else None
        if cof is None or point is None or _unit_value(cof[0], point) == 0:
            raise HypothesisError(
                "extension-step hypothesis violated: P(y') is not d times a unit "
                "congruent to 1 modulo d^(2e)")
        s, sL = cof[0], cof[1:]

    # b with f(y') = d^(e+1) b modulo the relations of D
    fy = [substitute(fi, yp) for fi in f]
    b, bL = [], []
    for fi in fy:
        cof = _membership(fi, [d2e1] + LJ, ring)
        if cof is None:
            raise HypothesisError(
                "extension-step hypothesis violated: f(y') is not in (d^(2e+1))")
        b.append(cof[0] * d ** e)
        bL.append(cof[1:])

    Tv = {t: ring.var(t) for t in tnames}
    Tvecs = [[Tv[t] for t in shared] + [Tv[t] for t in tl] for tl in tails]
    Gy = [[[substitute(c(x), yp) for x in row] for row in sy.G] for sy in systems]
    W = []
    for i in range(n):
        acc = ring.zero()
        for Gj, Tj in zip(Gy, Tvecs):
            for k in range(n):
                if not Gj[i][k].is_zero():
                    acc = acc + Gj[i][k] * Tj[k]
        W.append(acc)
    Wd = dict(zip(yvars, W))
    de = d ** e
    h = [s * (ring.var(y) - yp[y]) - de * W[i] for i, y in enumerate(yvars)]
    p = max(1, max(fi.total_degree(list(yvars)) for fi in f))
    Q = []
    for fi in f:
        parts = taylor_parts(fi, yp, Wd, tvars=list(tnames))
        acc = ring.zero()
        for mu in range(2, len(parts)):
            if not parts[mu].is_zero():
                acc = acc + s ** (p - mu) * d ** (e * (mu - 2)) * c(parts[mu])
        Q.append(acc)
    sp = s ** p
    g = [sp * b[i] + sp * Tv[shared[i]] + d ** (e - 1) * Q[i] for i in range(r)]

    # s^p f_i - d^(e+1) g_i over (h) + relations of D
    u = {y: s * ring.var(y) for y in yvars}
    vv = {y: s * yp[y] + de * W[i] for i, y in enumerate(yvars)}
    kernel = []
    for i in range(r):
        hc = taylor_split(f[i], yvars, u, vv, s, p)
        lc = [sp * bL[i][k] + s ** (p - 1) * de * Tv[shared[i]] * sL[k] for k in range(len(LJ))]
        total = sp * f[i] - d ** (e + 1) * g[i]
        for a, hh in zip(hc, h):
            total = total - a * hh
        for a, gg in zip(lc, LJ):
            total = total - a * gg
        if not total.is_zero():
            raise HypothesisError("kernel identity failed: identity (1) does not hold for the minors")
        kernel.append((hc, lc))

    Tshared = list(shared)
    s_prime = det([[gi.diff(t) for t in Tshared] for gi in g]) if r else ring.one()
    delta = P.total_degree(list(yvars))
    Pparts = taylor_parts(P, yp, Wd, tvars=list(tnames))
    s2 = s ** (delta + 1)
    for mu in range(1, len(Pparts)):
        if not Pparts[mu].is_zero():
            s2 = s2 + s ** (delta - mu) * d ** (e * mu - 1) * c(Pparts[mu])
    gamma = taylor_split(P, yvars, u, vv, s, delta)
    s2_lc = [s ** delta * a for a in sL]

    data = ExtensionData(d=d, e=e, p=p, s=s, s_prime=s_prime, s2=s2, delta=delta, yprime=yp,
                         f=f, systems=systems, b=b, W=W, Q=Q, g=g, h=h, shared=shared,
                         tails=[list(t) for t in tails], kernel=kernel, s_witness=(LJ, list(sL)),
                         hyp=None if hyp is None else ([c(x) for x in hyp[0]], [c(x) for x in hyp[1]]),
                         s_congruent=s_near_1)

    # --- certificate ---------------------------------------------------------
    R = Expr.ref
    pre = prefix
    cert.put(pre + "d", d)
    cert.put(pre + "s", s)
    cert.put(pre + "s1", s_prime)
    cert.put(pre + "s2", s2)
    cert.put(pre + "Py", Py)
    for y in yvars:
        cert.put(f"{pre}yp.{y}", yp[y])
    for i, fi in enumerate(f):
        cert.put(f"{pre}f.{i + 1}", fi)
        cert.put(f"{pre}fy.{i + 1}", fy[i])
        cert.put(f"{pre}b.{i + 1}", b[i])
        cert.put(f"{pre}Q.{i + 1}", Q[i])
        cert.put(f"{pre}g.{i + 1}", g[i])
    for i, y in enumerate(yvars):
        cert.put(f"{pre}W.{y}", W[i])
        cert.put(f"{pre}h.{y}", h[i])
    lj_refs = []
    for k, x in enumerate(LJ):
        lj_refs.append(cert.put(f"{pre}rel.{k + 1}", x))
    for j, sy in enumerate(systems):
        cert.put(f"{pre}N.{j + 1}", c(sy.N))
        cert.put(f"{pre}M.{j + 1}", c(sy.M))
        cert.add("identity1", f"{pre}identity1.{j + 1}",
                 f=[R(f"{pre}f.{i + 1}") for i in range(r)], yvars=list(yvars),
                 H=[[c(x) for x in row] for row in sy.H], G=[[c(x) for x in row] for row in sy.G],
                 M=R(f"{pre}M.{j + 1}"), N=R(f"{pre}N.{j + 1}"))
    P_expr = None
    for j in range(q):
        term = R(f"{pre}N.{j + 1}") * R(f"{pre}M.{j + 1}")
        P_expr = term if P_expr is None else P_expr + term
    ypa = {y: R(f"{pre}yp.{y}") for y in yvars}
    cert.add("equal", f"{pre}P_at_yprime", lhs=R(pre + "Py"), rhs=P_expr, assignment=ypa)
    cert.add("combination", f"{pre}P_equals_ds", target=R(pre + "Py") - R(pre + "d") * R(pre + "s"),
             gens=lj_refs, cofactors=list(sL))
    if s_near_1:
        cert.add("combination", f"{pre}s_congruent_1", target=R(pre + "s") - 1, gens=[R(pre + "d")],
                 cofactors=[c0 * d ** (2 * e - 1)])
    if hyp is not None:
        # generators with a zero cofactor say nothing and are left out
        pairs = [(c(x), c(a)) for x, a in zip(*hyp) if not a.is_zero()]
        cert.add("combination", f"{pre}d_congruent_P", target=R(pre + "d") - P_expr,
                 gens=[Expr.lit(x) for x, _ in pairs], cofactors=[a for _, a in pairs])
    for i in range(r):
        k = i + 1
        cert.add("equal", f"{pre}fy_def.{k}", lhs=R(f"{pre}fy.{k}"), rhs=R(f"{pre}f.{k}"), assignment=ypa)
        cert.add("combination", f"{pre}b_def.{k}",
                 target=R(f"{pre}fy.{k}") - R(pre + "d") ** (e + 1) * R(f"{pre}b.{k}"),
                 gens=lj_refs, cofactors=list(bL[i]))
        cert.add("equal", f"{pre}g_def.{k}", lhs=R(f"{pre}g.{k}"),
                 rhs=R(pre + "s") ** p * R(f"{pre}b.{k}") + R(pre + "s") ** p * Expr.lit(Tv[shared[i]])
                 + R(pre + "d") ** (e - 1) * R(f"{pre}Q.{k}"))
        cert.add("t_order", f"{pre}Q_order.{k}", poly=R(f"{pre}Q.{k}"), vars=list(tnames), order=2)
        hc, lc = kernel[i]
        cert.add("combination", f"{pre}kernel.{k}",
                 target=R(pre + "s") ** p * R(f"{pre}f.{k}") - R(pre + "d") ** (e + 1) * R(f"{pre}g.{k}"),
                 gens=[R(f"{pre}h.{y}") for y in yvars] + lj_refs, cofactors=list(hc) + list(lc))
    for i, y in enumerate(yvars):
        wsum = ring.zero()
        for sy, Tj in zip(systems, Tvecs):
            for k in range(n):
                x = c(sy.G[i][k])
                if not x.is_zero():
                    wsum = wsum + x * Tj[k]
        cert.add("equal", f"{pre}W_def.{y}", lhs=R(f"{pre}W.{y}"), rhs=Expr.lit(wsum), assignment=ypa)
        cert.add("equal", f"{pre}h_def.{y}", lhs=R(f"{pre}h.{y}"),
                 rhs=R(pre + "s") * (Expr.lit(ring.var(y)) - R(f"{pre}yp.{y}")) - R(pre + "d") ** e * R(f"{pre}W.{y}"))
    if r:
        cert.add("jacobian_minor", f"{pre}s1_minor", polys=[R(f"{pre}g.{i + 1}") for i in range(r)],
                 vars=Tshared, value=R(pre + "s1"))
    cert.add("t_order", f"{pre}s1_mod_T", poly=R(pre + "s1") - R(pre + "s") ** (r * p), vars=list(tnames), order=1)
    P_Y = None
    for j in range(q):
        term = R(f"{pre}N.{j + 1}") * R(f"{pre}M.{j + 1}")
        P_Y = term if P_Y is None else P_Y + term
    cert.add("combination", f"{pre}s2_def",
             target=R(pre + "s") ** delta * P_Y - R(pre + "d") * R(pre + "s2"),
             gens=[R(f"{pre}h.{y}") for y in yvars] + lj_refs, cofactors=list(gamma) + s2_lc)
    cert.add("t_order", f"{pre}s2_mod_T", poly=R(pre + "s2") - R(pre + "s") ** (delta + 1), vars=list(tnames), order=1)
    cert.summary = {"d": str(d), "e": e, "p": p, "r": r, "n": n, "systems": q, "delta": delta}

    system = [c(x) for x in D.system] + h + g
    solve = tuple(D.solve_vars) + yvars + tuple(shared)
    free = tuple(D.free_vars) + tuple(t for tl in tails for t in tl)
    relations = L + I + g + h
    inverted = [c(x) for x in D.inverted] + [s, s_prime, s2]
    pres = SmoothPresentation(
        kind="extension", ring=ring, J=J, relations=relations, system=system, solve_vars=solve,
        inverted=inverted, yvars=yvars, zvars=tuple(D.variables), tvars=tnames,
        pi={y: ring.var(y) for y in yvars}, lift={}, precision=0, free_vars=free, data=data, D=D,
        certificate=cert, algebra=algebra)
    return pres


# ---------------------------------------------------------------------------
# Morphisms C -> A'
# ---------------------------------------------------------------------------

@dataclass
class MorphismApprox:
    """Jet images of variables (a morphism to ``A'`` known modulo ``(x)^prec``)."""

    values: dict
    prec: int
    c: int = None

    def __getitem__(self, name):
        return self.values[name]

    def agrees(self, other, names, n=None):
        for k in names:
            a, b = self.values[k], other.values[k] if isinstance(other, MorphismApprox) else other[k]
            if not Jet(a.value if isinstance(a, Jet) else a, n).agrees(b, n):
                return False
        return True


class NeighborhoodError(ValueError):
    pass


def _as_jet(v, n):
    if isinstance(v, Jet):
        return v if v.prec is not None and (n is None or v.prec <= n) else Jet(v.value, n)
    return Jet(v, n)


def _x_ring(pres):
    return pres.ring.subring(pres.ring.base_names())


def _order(d):
    return d.min_degree(d.ring.base_names())


def tangent_from_y(pres, y, omega):
    """T-images ``t_j = H_j(y') (y - y'(omega)) / d^(e+1)`` for a point ``y`` of ``B``."""
    dd = pres.data
    e, d = dd.e, dd.d
    yvars = pres.yvars
    n = min(v.prec for v in y.values())
    if omega:
        n = min(n, min(v.prec for v in omega.values()))
    om = _vals(omega)
    ytilde = {k: substitute(dd.yprime[k], om, n) for k in yvars}
    d_e1 = d ** (e + 1)
    nu = []
    for k in yvars:
        diff = y[k].value.coerce(pres.ring) - ytilde[k]
        try:
            nu.append(jet_divide(diff, d_e1, n))
        except ValueError:
            raise NeighborhoodError("v′ outside the uniform neighborhood") from None
    n1 = min(j.prec for j in nu)
    nuv = [j.value for j in nu]
    r = len(dd.f)
    t = {}
    for sy, tl in zip(dd.systems, dd.tails):
        Hy = [[substitute(substitute(x.coerce(pres.ring), dd.yprime), om, n1) for x in row] for row in sy.H]
        col = [x.truncate(n1) for x in matvec(Hy, nuv)]
        for i, name in enumerate(dd.shared):
            t.setdefault(name, Jet(col[i], n1))
        for name, val in zip(tl, col[r:]):
            t[name] = Jet(val, n1)
    return t, {k: j for k, j in zip(yvars, nu)}, ytilde


def factor_morphism(pres, vprime, mode="cubes", reference=None, k=None):
    """Lift ``v′: B -> A'`` to ``w: C -> A'`` with ``w o pi = v′``.

    ``mode='cubes'`` checks ``v′ - v`` against ``d^3`` (``d^(2e+1)`` in
    general), ``mode='mpower'`` against ``(x)^(3k)``; ``reference`` is the
    morphism ``v`` (default: the presentation's canonical lift).
    """
    if pres.kind != "extension":
        raise ValueError("factor_morphism needs a presentation built by the extension step")
    dd = pres.data
    yvars = pres.yvars
    v_ref = reference or {y: pres.lift[y] for y in yvars}
    vp = {y: _as_jet(vprime[y], None) for y in yvars}
    n = min(j.prec for j in vp.values())
    vals = _vals(vp)
    for g in pres.algebra.I if pres.algebra is not None else ():
        if not substitute(g, vals, n).truncate(n).is_zero():
            raise ValueError(f"v′ is not a morphism: I(v′) does not vanish modulo (x)^{n}")
    for y in yvars:
        diff = (vp[y].value - v_ref[y].value).coerce(pres.ring).truncate(n)
        if mode == "cubes":
            try:
                jet_divide(diff, dd.d ** (2 * dd.e + 1), n)
            except ValueError:
                raise NeighborhoodError("v′ outside the uniform neighborhood") from None
        elif mode == "mpower":
            if k is None:
                raise ValueError("mode mpower needs k")
            o = diff.x_order()
            if o is not None and o < 3 * k:
                raise NeighborhoodError("v′ outside the uniform neighborhood")
        else:
            raise ValueError(f"unknown mode {mode!r}")
    omega = {z: pres.lift[z] for z in pres.zvars}
    t, nu, _ = tangent_from_y(pres, vp, omega)
    w = dict(omega)
    w.update(vp)
    w.update(t)
    n1 = min(j.prec for j in t.values()) if t else n
    # the solved T's are the Newton solution given the tails
    tails = {name: t[name] for tl in dd.tails for name in tl}
    if dd.shared:
        fixed = _vals({**omega, **tails})
        start = {name: t[name].value for name in dd.shared}
        sol = newton_lift(dd.g, list(dd.shared), {**fixed, **start}, max(n1 - _order(dd.d), 1))
        for name in dd.shared:
            if not sol[name].agrees(t[name]):
                raise RuntimeError("internal: T-images disagree with the Newton solution")
    return MorphismApprox(w, n1)


def parametrize_morphisms(pres, params, base=None, prec=None):
    """``v′`` induced by the morphism ``C -> A'`` with tails ``base + params``.

    ``params`` has one jet per free tail variable; the solved T's come
    from Newton on ``g`` and ``Y = y'(omega) + s^(-1) d^e W(T)``.
    """
    dd = pres.data
    tails = [t for tl in dd.tails for t in tl]
    if len(params) != len(tails):
        raise ValueError(f"expected {len(tails)} parameters, got {len(params)}")
    base = base if base is not None else pres.lift
    n = prec or pres.precision
    omega = {z: base[z] for z in pres.zvars}
    vals = _vals(omega)
    for name, p in zip(tails, params):
        pv = p.value if isinstance(p, Jet) else p
        vals[name] = (base[name].value + pv.coerce(pres.ring)).truncate(n)
    for name in dd.shared:
        vals[name] = base[name].value.truncate(n) if name in base else pres.ring.zero()
    if dd.shared:
        sol = newton_lift(dd.g, list(dd.shared), vals, n)
        for name in dd.shared:
            vals[name] = sol[name].value
    return _y_from_t(pres, vals, n)


def _y_from_t(pres, vals, n):
    from neron.hensel import series_inverse
    dd = pres.data
    sv = substitute(dd.s, vals, n)
    sinv = series_inverse(sv, n)
    de = dd.d ** dd.e
    out = {}
    for i, y in enumerate(pres.yvars):
        Wv = substitute(dd.W[i], vals, n)
        ypv = substitute(dd.yprime[y], vals, n)
        out[y] = Jet((ypv + (sinv * de * Wv).truncate(n)).truncate(n), n)
    w = {k: Jet(v, n) for k, v in vals.items()}
    w.update(out)
    return MorphismApprox(w, n)


def _canonical_from_zero(pres, y0, n):
    """Morphism with all tails 0 and solved T's from Newton started at 0."""
    dd = pres.data
    vals = {}
    for tl in dd.tails:
        for name in tl:
            vals[name] = pres.ring.zero()
    for name in dd.shared:
        vals[name] = pres.ring.zero()
    for z in pres.zvars:
        vals[z] = pres.lift[z].value
    if dd.shared:
        sol = newton_lift(dd.g, list(dd.shared), vals, n)
        for name in dd.shared:
            vals[name] = sol[name].value
    return _y_from_t(pres, vals, n)


# ---------------------------------------------------------------------------
# Certification of lifts and units
# ---------------------------------------------------------------------------

def residual_orders(pres, lift, n):
    """x-order of each relation evaluated at ``lift`` (``n`` means zero at precision)."""
    vals = _vals(lift)
    out = {}
    for tag, polys in (("system", pres.system), ("relations", pres.relations)):
        orders = []
        for p in polys:
            r = substitute(p, vals, n).truncate(n)
            o = r.x_order()
            orders.append(n if o is None else o)
        out[tag] = orders
    return out


def certify_lift(pres, prefix=""):
    """Record the canonical lift and unit evidence in the certificate."""
    cert = pres.certificate
    cert.claims = [c for c in cert.claims if not c.name.startswith(prefix + "lift.")]
    for name in list(cert.objects):
        if name.startswith(prefix + "w."):
            del cert.objects[name]
    lift = pres.lift
    R = Expr.ref
    assign = {}
    for var, jet in lift.items():
        assign[var] = cert.put(f"{prefix}w.{var}", jet.value)
    # images of variables that no relation constrains are a choice: pin them
    used = set()
    for r in pres.relations:
        used.update(r.variables())
    for var, jet in lift.items():
        if var not in used:
            cert.add("equal", f"{prefix}lift.choice.{var}", lhs=assign[var], rhs=Expr.lit(jet.value))
    known = {}
    for name, obj in cert.objects.items():
        known.setdefault(format_poly(obj), name)

    def ref(poly, name):
        # reuse an object with a defining claim so that no copy can drift
        key = format_poly(poly)
        if key not in known:
            cert.put(name, poly)
            known[key] = name
        return R(known[key])
    point = _point(lift, pres.ring)
    for k, u in enumerate(pres.inverted):
        cert.add("unit", f"{prefix}lift.unit.{k + 1}", poly=ref(u, f"{prefix}u.{k + 1}"),
                 point={kk: str(_frac(v, pres.ring)) for kk, v in point.items()})
    moduli = _lift_moduli(pres)
    for tag, (polys, n) in moduli.items():
        if polys and n > 0:
            cert.add("residual", f"{prefix}lift.{tag}",
                     polys=[ref(p, f"{prefix}r.{tag}.{i + 1}") for i, p in enumerate(polys)],
                     assignment=assign, modulus=n)
    if pres.data is not None and pres.kind == "extension":
        dd = pres.data
        if dd.shared:
            cert.add("jacobian_minor", f"{prefix}lift.solved_minor",
                     polys=[ref(x, f"{prefix}r.system.{i + 1}") for i, x in enumerate(pres.system)],
                     vars=list(pres.solve_vars),
                     value=ref(_system_minor(pres), f"{prefix}solved_minor"))
    cert.summary["precision"] = pres.precision


def _frac(v, ring):
    return ring.field.to_fraction(v)


def _system_minor(pres):
    M = [[p.diff(v) for v in pres.solve_vars] for p in pres.system]
    return det(M) if M else pres.ring.one()


def _lift_moduli(pres):
    """Precision ledger: which relations vanish at which x-adic order."""
    lift = pres.lift
    if not lift:
        return {}
    n_y = min((lift[y].prec for y in pres.yvars), default=pres.precision)
    if pres.kind != "extension":
        return {"relations": (pres.relations, pres.precision)}
    dd = pres.data
    o = _order(dd.d)
    n_t = min((lift[t].prec for t in pres.tvars), default=n_y)
    n_z = min((lift[z].prec for z in pres.zvars), default=n_y)
    D = pres.D
    return {
        "D": (list(pres.relations[:len(D.relations)]), n_z),
        "I": (list(pres.relations[len(D.relations):len(pres.relations) - len(dd.g) - len(dd.h)]), min(n_y, n_z)),
        "h": (dd.h, min(n_y, n_t + dd.e * o, n_z)),
        "g": (dd.g, min(n_t - o, n_z)),
    }


@dataclass
class SmoothReport:
    ok: bool
    failures: list

    def __bool__(self):
        return self.ok

    @property
    def first(self):
        return self.failures[0] if self.failures else None


def verify_standard_smooth(pres):
    """Recheck the standard-smoothness data of ``pres`` (recursing into ``D``).

    (a) ``P(y') - d s`` and, when recorded, ``d - P`` reassemble from their
    witnesses; (b) ``s = 1 mod d``, ``s' = s^(rp) mod (T)``,
    ``s'' = 1 mod (T)`` and the localized elements are units at the lift;
    (c) the minor of ``dg/dT`` on the shared variables equals ``s'``.
    """
    failures = []
    if pres.kind == "extension":
        dd = pres.data
        ring = pres.ring
        P = ring.zero()
        for sy in dd.systems:
            P = P + sy.N.coerce(ring) * sy.M.coerce(ring)
        Py = substitute(P, dd.yprime)
        gens, cofs = dd.s_witness
        rest = Py - dd.d * dd.s
        for g, a in zip(gens, cofs):
            rest = rest - a * g
        if not rest.is_zero():
            failures.append("(a) P(y') = d s does not reassemble")
        if dd.hyp is not None:
            rest = dd.d - P
            for g, a in zip(*dd.hyp):
                rest = rest - a * g
            if not rest.is_zero():
                failures.append("(a) d = P modulo I does not reassemble")
        for j, sy in enumerate(dd.systems):
            rep = verify_identity1(sy, dd.f, list(pres.yvars))
            if not rep:
                failures.append(f"identity (1) fails for system {j + 1} at {rep.failures[0]}")
        if dd.s_congruent:
            try:
                exact_quotient(dd.s - 1, dd.d) if not (dd.s - 1).is_zero() else None
            except ValueError:
                failures.append("(b) s is not 1 modulo d")
        tv = list(pres.tvars)
        r = len(dd.f)
        for name, poly, want in (("s'", dd.s_prime, dd.s ** (r * dd.p)),
                                 ("s''", dd.s2, dd.s ** (dd.delta + 1))):
            diff = poly - want
            if not diff.is_zero() and diff.min_degree(tv) < 1:
                failures.append(f"(b) {name} is not congruent to its unit modulo (T)")
        for i, q in enumerate(dd.Q):
            if not q.is_zero() and q.min_degree(tv) < 2:
                failures.append(f"Q_{i + 1} has T-order below 2")
        if dd.shared:
            m = det([[gi.diff(t) for t in dd.shared] for gi in dd.g])
            if not (m - dd.s_prime).is_zero():
                failures.append("(c) minor of dg/dT differs from s'")
    elif pres.kind == "localization":
        m = det([[p.diff(v) for v in pres.solve_vars] for p in pres.system])
        if not (m - pres.inverted[0]).is_zero():
            failures.append("(c) designated minor differs from the inverted element")
    if pres.lift:
        point = _point(pres.lift, pres.ring)
        for u in pres.inverted:
            try:
                val = u.evaluate(point)
            except ValueError:
                val = 0
            if val == 0:
                failures.append("localized element not a unit at evaluation point")
                break
        if pres.system:
            try:
                val = _system_minor(pres).evaluate(point)
            except ValueError:
                val = 0
            if val == 0:
                failures.append("standard system minor is not a unit at the lift")
    if pres.D is not None and pres.kind == "extension":
        sub = verify_standard_smooth(pres.D)
        failures.extend("D: " + f for f in sub.failures)
    if pres.origin is not None:
        sub = verify_standard_smooth(pres.origin)
        failures.extend(sub.failures)
    return SmoothReport(not failures, failures)


# ---------------------------------------------------------------------------
# Algorithm 1: uniform, dimension one
# ---------------------------------------------------------------------------

DIM1_REJECTION = "y′, N, (f_1,…,f_r) are not well chosen"
UNIFORM_REJECTION = "ȳ, f^{(i)}, N_i are not well chosen."


def _x_only(algebra):
    return algebra.ring.subring(algebra.ring.base_names())


@dataclass
class ParamSystem:
    """Relations ``f`` with a list of ``(cols, N)`` minors; ``P = sum N M``."""

    f: list = None
    minors: list = None


def _pick_systems(algebra, ps):
    from neron.smoothlocus import colon_system, minor_system
    yvars = list(algebra.yvars)
    ps = ps or ParamSystem()
    f = list(algebra.I) if ps.f is None else [x.coerce(algebra.ring) for x in ps.f]
    r = len(f)
    minors = ps.minors or [(tuple(range(r)), None)]
    out = []
    for cols, N in minors:
        if N is None:
            if set(f) == set(algebra.I):
                N = algebra.ring.one()
            else:
                total = Ideal(algebra.ring, list(algebra.I) + list(algebra.J))
                N = colon_system(f + list(algebra.J), total).gens[0]
        out.append(minor_system(f, yvars, tuple(cols), N.coerce(algebra.ring)))
    return f, out


def _P(systems, ring):
    P = ring.zero()
    for sy in systems:
        P = P + sy.N.coerce(ring) * sy.M.coerce(ring)
    return P


def _contained_power(k, ideal_gens, J, xring):
    """``(x)^k`` inside ``(ideal_gens) + J`` locally."""
    if k < 0:
        return False
    from neron.polyring import monomials_of_degree, Poly as _P
    total = Ideal(xring, [g.restrict(xring) for g in list(ideal_gens) + list(J) if not g.is_zero()])
    if not total.gens:
        return False
    one = xring.field.coerce(1)
    for e in monomials_of_degree(xring.nvars, k):
        if not total.contains(_P(xring, {e: one}), local=True):
            return False
    return True


def _in_power_plus_J(poly, order, J, xring):
    from neron.groebner import jet_member
    return jet_member(poly.restrict(xring), [j.restrict(xring) for j in J], xring, order)


def uniform_desing_dim1(algebra, yprime, system=None, k=None, c=None,
                        precision=None, e=None, message=DIM1_REJECTION):
    """Algorithm 1: one smooth ``C`` for all morphisms near ``y'`` (dim A = 1).

    Raises :class:`Rejection` with the verbatim message when a gate fails.
    """
    xring = _x_only(algebra)
    J = [j.restrict(xring) for j in algebra.J]
    f, systems = _pick_systems(algebra, system)
    yp = {y: yprime[y].coerce(algebra.ring) for y in algebra.yvars}
    d = substitute(_P(systems, algebra.ring), yp).restrict(xring)
    evidence = {"d": str(d)}
    if d.is_zero() or Ideal(xring, J).contains(d, local=True) if J else d.is_zero():
        raise Rejection(message, {**evidence, "gate": "(x)^k ⊆ (d) + J", "reason": "d = 0 in A"})
    if e is None:
        e = stabilization_exponent(Ideal(xring, J), d).e
    if k is None:
        try:
            k = min_power_k(Ideal(xring, [d]), Ideal(xring, J) if J else None).k
        except Exception:
            raise Rejection(message, {**evidence, "gate": "(x)^k ⊆ (d) + J", "reason": "(d) + J not m-primary"})
    evidence.update(k=k, e=e)
    if not _contained_power(k, [d], J, xring):
        raise Rejection(message, {**evidence, "gate": "(x)^k ⊆ (d) + J"})
    need = (2 * e + 1) * k
    for i, g in enumerate(algebra.I):
        res = substitute(g, yp).restrict(xring)
        if not _in_power_plus_J(res, need, J, xring):
            raise Rejection(message, {**evidence, "gate": f"I(y′) ⊆ (x)^{need} + J",
                                      "generator": i + 1, "order": res.x_order()})
    D = trivial_presentation(xring, J, None, {}, precision)
    pres = build_smooth_extension(D, algebra, f, systems, yp, d, e)
    n = precision or max(2 * need + 4, 8)
    w = _canonical_from_zero(pres, yp, n)
    pres.lift = w.values
    pres.precision = n
    pres.certificate.summary.update(k=k, c=c, algorithm="dim1")
    _record_diagram(pres, yp, c)
    certify_lift(pres)
    return pres


def _record_diagram(pres, yp, c):
    """Check that ``B -> C -> A/m^c`` agrees with ``y'`` modulo ``m^c``."""
    if c is None:
        return
    for y in pres.yvars:
        diff = (pres.lift[y].value - yp[y].coerce(pres.ring)).truncate(c)
        if not diff.is_zero():
            raise RuntimeError("internal: diagram does not commute modulo m^c")
    pres.notes.append(f"diagram commutes modulo m^{c}")


# ---------------------------------------------------------------------------
# Algorithm 2: uniform, dimension m
# ---------------------------------------------------------------------------

def uniform_desing(algebra, yprime, systems, k=None, c=None, precision=None):
    """Algorithm 2.  ``systems`` holds one :class:`ParamSystem` per parameter
    ``d_i = P_i(y')``."""
    xring = _x_only(algebra)
    J = [j.restrict(xring) for j in algebra.J]
    yp = {y: yprime[y].coerce(algebra.ring) for y in algebra.yvars}
    picked = [_pick_systems(algebra, ps) for ps in systems]
    ds = [substitute(_P(sys, algebra.ring), yp).restrict(xring) for _, sys in picked]
    evidence = {"d": [str(x) for x in ds]}
    if k is None:
        try:
            k = min_power_k(Ideal(xring, ds), Ideal(xring, J) if J else None).k
        except Exception:
            raise Rejection(UNIFORM_REJECTION, {**evidence, "gate": "(x)^k ⊆ (d) + J"})
    evidence["k"] = k
    if not _contained_power(k, ds, J, xring):
        raise Rejection(UNIFORM_REJECTION, {**evidence, "gate": "(x)^k ⊆ (d) + J"})
    for i, g in enumerate(algebra.I):
        res = substitute(g, yp).restrict(xring)
        if not _in_power_plus_J(res, 3 * k, J, xring):
            raise Rejection(UNIFORM_REJECTION, {**evidence, "gate": f"I(ȳ) ⊆ (x)^{3 * k} + J",
                                                "generator": i + 1, "order": res.x_order()})
    m = len(systems)
    if m == 1:
        pres = uniform_desing_dim1(algebra, yprime, systems[0], k, c, precision, e=1,
                                   message=UNIFORM_REJECTION)
        pres.certificate.summary["algorithm"] = "uniform"
        return pres
    # recursion: the one-dimensional algorithm over A/(d_1^3, ..., d_{m-1}^3)
    # with the last system; k is recomputed for the quotient
    from neron.symalg import Algebra
    inner_alg = Algebra(algebra.ring, list(algebra.J) + [x.coerce(algebra.ring) ** 3 for x in ds[:-1]],
                        list(algebra.I), algebra.yvars, dict(algebra.v))
    inner = uniform_desing_dim1(inner_alg, yprime, systems[-1], None, c, precision, e=1,
                                message=UNIFORM_REJECTION)
    D, omega = _lift_inner(inner, J, precision or inner.precision)
    yprime_D = {y: D.pi[y] for y in algebra.yvars}
    f, sys = picked[-1]
    pres = build_smooth_extension(D, algebra, f, sys, yprime_D, ds[-1], 1)
    n = precision or inner.precision
    pres.lift = dict(omega)
    w = _canonical_from_zero(pres, yprime_D, n)
    pres.lift = w.values
    pres.precision = n
    certify_lift(pres)
    return pres


def _lift_inner(inner, J, n):
    """Rename the inner presentation into a ``Z`` block and Newton-lift its
    morphism from the quotient ring back to ``A``."""
    from neron.hensel import lift_presentation_morphism
    D = rename_presentation(inner, "Z")
    D.J = [j.coerce(D.ring) for j in J] if D.ring.base_names() else list(J)
    if D.kind == "trivial" or not D.system:
        return D, {}
    quotient = [j.restrict(D.ring.subring(D.ring.base_names())) for j in inner.J]
    extra = [r for r in D.relations if r not in D.system]
    res = lift_presentation_morphism(D.system, list(D.solve_vars), D.lift, quotient, n, extra=extra)
    D.lift = {k: v for k, v in res.values.items() if k in D.variables}
    D.precision = n
    certify_lift(D)
    return D, D.lift


# ---------------------------------------------------------------------------
# Algorithm 3: general Néron desingularization
# ---------------------------------------------------------------------------

class HintRequired(RuntimeError):
    pass


def _unit_minor(alg, point):
    """Columns of a maximal minor of the Jacobian of ``I`` that is a unit at ``point``."""
    from itertools import combinations
    from neron.symalg import _trivial_column
    yvars = list(alg.yvars)
    f = list(alg.I)
    r, n = len(f), len(yvars)
    if r == 0 or r > n:
        return None
    Jf = jacobian(f, yvars)
    forced = sorted({j for j in (_trivial_column(g, yvars) for g in f) if j is not None})
    free_rows = [i for i, g in enumerate(f) if _trivial_column(g, yvars) is None]
    rest = [j for j in range(n) if j not in forced]
    need = r - len(forced)
    if need < 0 or len(free_rows) != need:
        return None
    num = [[Jf[i][j].evaluate(point) for j in range(n)] for i in free_rows]
    for cols in combinations(rest, need):
        sub = [[row[j] for j in cols] for row in num]
        if _num_det(sub, alg.ring.field) != 0:
            return tuple(sorted(forced + list(cols)))
    return None


def _num_det(M, fld):
    n = len(M)
    if n == 0:
        return fld.coerce(1)
    A = [[fld.coerce(x) for x in row] for row in M]
    out = fld.coerce(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return fld.coerce(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            out = -out
        out = fld.norm(out * A[k][k])
        inv = fld.inv(A[k][k])
        for i in range(k + 1, n):
            if A[i][k] != 0:
                fac = fld.norm(A[i][k] * inv)
                A[i] = [fld.norm(a - fac * b) for a, b in zip(A[i], A[k])]
    return out


def _base_case(alg, n):
    """Dimension zero: ``(B)_{M}`` when a maximal minor is a unit at ``v``,
    otherwise the trivial factorization through ``A`` itself."""
    xring = _x_only(alg)
    point = {x: 0 for x in xring.names}
    for y in alg.yvars:
        point[y] = alg.v[y].value.constant_term()
    cols = _unit_minor(alg, point)
    cert = Certificate()
    if cols is not None:
        f = list(alg.I)
        yvars = list(alg.yvars)
        Jf = jacobian(f, yvars)
        M = det([[row[j] for j in cols] for row in Jf])
        solve = tuple(yvars[j] for j in cols)
        pres = SmoothPresentation(
            kind="localization", ring=alg.ring, J=list(alg.J), relations=f, system=f,
            solve_vars=solve, inverted=[M], yvars=(), zvars=tuple(yvars), tvars=(),
            pi={y: alg.ring.var(y) for y in yvars}, lift={y: alg.v[y] for y in yvars},
            precision=n, free_vars=tuple(y for y in yvars if y not in solve),
            certificate=cert, algebra=alg)
        cert.put("M", M)
        rels = [cert.put(f"r.relations.{i + 1}", p) for i, p in enumerate(f)]
        cert.add("jacobian_minor", "minor", polys=rels, vars=list(solve), value=Expr.ref("M"))
        certify_lift(pres)
        return pres
    # trivial factorization: pi(Y) = v(Y) truncated, checked against J locally
    pi = {y: alg.v[y].value.truncate(n).restrict(xring) for y in alg.yvars}
    J = [j.restrict(xring) for j in alg.J]
    ideal = Ideal(xring, J)
    for i, g in enumerate(alg.I):
        val = substitute(g, {y: pi[y].coerce(alg.ring) for y in alg.yvars}).restrict(xring)
        if val.is_zero():
            continue
        w = normal_form(val, ideal, DS, witness=True).witness if J else None
        if w is None or not w.member:
            raise HypothesisError("trivial factorization unavailable: I(v) is not in the quotient ideal at this precision")
        ref = cert.put(f"Ipi.{i + 1}", val)
        cert.add("equal", f"Ipi_def.{i + 1}", lhs=ref, rhs=Expr.lit(g),
                 assignment={y: Expr.lit(pi[y]) for y in alg.yvars})
        cert.add("combination", f"Ipi_in_J.{i + 1}", target=ref, gens=[Expr.lit(j) for j in w.gens],
                 cofactors=list(w.cofactors), unit=w.unit)
    return trivial_presentation(xring, J, alg, pi, n, cert)


def _parameters(alg, b_gens, m, n, hints):
    """``gamma_j`` and jets ``z`` with ``gamma_j = sum_i b_i(v) z_ij`` (exactly, at precision)."""
    xring = _x_only(alg)
    xs = xring.names
    vals = _vals(alg.v)
    bv = [substitute(b, vals, n).restrict(xring) for b in b_gens]
    gammas = []
    if hints and hints.get("gammas"):
        gammas = [parse_in(xring, gtext) for gtext in hints["gammas"]]
    elif len(xs) == m and not alg.J:
        for j in range(m):
            gammas.append(None)
    else:
        raise HintRequired("parameter search needs hints: supply gammas for this base ring")
    out = []
    for j in range(m):
        cap = DEFAULT_CAPS["k"]
        cands = [gammas[j]] if gammas[j] is not None else [xring.var(xs[j]) ** a for a in range(1, cap + 1)]
        found = None
        for gamma in cands:
            for i, b in enumerate(bv):
                if b.is_zero():
                    continue
                try:
                    z = jet_divide(gamma, b, n)
                except ValueError:
                    continue
                found = (gamma, i, z)
                break
            if found:
                break
        if not found:
            raise HintRequired("no parameter found in the smooth-locus ideal within budget; supply hints")
        out.append(found)
    return out


def parse_in(ring, text):
    from neron.polyring import parse_poly
    return parse_poly(text, ring)


def neron_desing(algebra, dim, precision, budget=None, hints=None, _depth=0):
    """Algorithm 3: factor ``v: B -> A'`` through a standard smooth ``A``-algebra.

    ``algebra.v`` holds the jets of ``v`` at ``precision``.  Returns a
    :class:`SmoothPresentation`; ``pi`` of the original variables is the
    class of ``Y``.
    """
    from neron.symalg import Algebra, adjoin_trivial, extend_algebra, find_system, sym_algebra
    from neron.smoothlocus import smooth_locus_ideal
    n = precision
    if dim == 0:
        return _base_case(algebra, n)
    original = tuple(algebra.yvars)
    xring = _x_only(algebra)
    J = [j.restrict(xring) for j in algebra.J]
    H = smooth_locus_ideal(Ideal(algebra.ring, list(algebra.I)), list(algebra.yvars))
    b_gens = []
    for g in H.gens:
        if not g.is_zero() and g not in b_gens and -g not in b_gens:
            b_gens.append(g)
    if not b_gens:
        raise HintRequired("smooth-locus ideal is zero; supply hints")
    params = _parameters(algebra, b_gens, dim, n, hints)
    alg = algebra
    # only the generator of H_{B/A} that carries gamma_j is adjoined
    for j, (gamma, i_sel, z) in enumerate(params):
        ring, names = _peek_names(alg, 1)
        rel = b_gens[i_sel].coerce(ring) * ring.var(names[0]) - gamma.coerce(ring)
        alg = extend_algebra(alg, [rel], 1, [z])
    alg, _ = sym_algebra(alg, n)
    alg, _ = adjoin_trivial(alg, len(alg.yvars), n)
    gamma = params[-1][0]
    choice = find_system(alg, gamma, budget=budget, hints=hints)
    d = choice.d.restrict(xring)
    e = stabilization_exponent(Ideal(xring, J), d).e
    jbar = list(alg.J) + [d.coerce(alg.ring) ** (2 * e + 1)]
    inner_alg = Algebra(alg.ring, jbar, list(alg.I), alg.yvars, dict(alg.v))
    inner = neron_desing(inner_alg, dim - 1, n, budget, hints, _depth + 1)
    D, omega = _lift_inner(inner, J, n)
    yprime = {y: D.pi[y] for y in alg.yvars}
    pres = build_smooth_extension(D, alg, choice.f, choice.systems, yprime, d, e,
                                  hyp=(choice.hyp_gens, choice.hyp_cofactors))
    vy = {y: alg.v[y] for y in alg.yvars}
    t, _, _ = tangent_from_y(pres, vy, omega)
    lift = dict(omega)
    lift.update(vy)
    lift.update(t)
    pres.lift = lift
    pres.precision = min(j.prec for j in lift.values())
    pres.pi = {y: pres.ring.var(y) for y in original}
    pres.certificate.summary.update(algorithm="neron", gamma=str(gamma), t=choice.t, dim=dim)
    certify_lift(pres)
    return pres


def _peek_names(alg, count):
    from neron.symalg import _fresh_y
    return _fresh_y(alg, count)
