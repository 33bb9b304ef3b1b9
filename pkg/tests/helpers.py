"""Shared checks on constructed presentations."""
from neron.groebner import Ideal, normal_form
from neron.polyring import Poly, VarBlock, substitute
from neron.smoothlocus import det, verify_identity1


MAX_NF_VARS = 8


def in_h(expr, pres, small=False):
    """Is ``expr`` in ``(h)`` once ``s`` is inverted?

    ``h = 0`` has the unique solution ``Y = y' + s^-1 d^e W``; substituting it
    with an auxiliary ``u = s^-1`` and clearing ``u^k`` to ``s^(deg - k)`` gives
    ``s^deg expr`` as a polynomial that must vanish.  Small rings are also
    checked by a normal form against ``(h)`` itself.
    """
    dd, ring = pres.data, pres.ring
    yv = list(pres.yvars)
    deg = max(expr.total_degree(yv), 0)
    U = ring.extend(VarBlock("u", 1, "aux", ("u0",)))
    u = U.var("u0")
    sub = {y: dd.yprime[y].coerce(U) + u * (dd.d ** dd.e * dd.W[i]).coerce(U) for i, y in enumerate(yv)}
    r = substitute(expr.coerce(U), sub)
    total = ring.zero()
    for k, part in r.homogeneous_parts(["u0"]).items():
        total = total + _drop_u(part, U, ring) * dd.s ** (deg - k)
    ok = total.is_zero()
    if ok and small:
        ok = normal_form(expr, Ideal(ring, dd.h)).remainder.is_zero()
    return ok


def _drop_u(part, U, ring):
    i = U.index["u0"]
    return Poly(U, {e[:i] + (0,) + e[i + 1:]: c for e, c in part.terms.items()}).restrict(ring)


def extension_levels(pres):
    """Every presentation built by the extension step inside ``pres``."""
    out, todo = [], [pres]
    while todo:
        p = todo.pop()
        if p is None:
            continue
        if p.kind == "extension":
            out.append(p)
        todo.extend([p.D, p.origin])
    return out


def proposition_failures(pres):
    """Recheck the identities of the extension step, independently of the verifier."""
    bad = []
    dd, ring = pres.data, pres.ring
    yv, tv = list(pres.yvars), list(pres.tvars)
    d, e, p = dd.d, dd.e, dd.p
    for j, sy in enumerate(dd.systems):
        if not verify_identity1(sy, dd.f, yv):
            bad.append(f"identity (1) system {j + 1}")
    for i, f in enumerate(dd.f):
        lin = ring.zero()
        for j, y in enumerate(yv):
            lin = lin + substitute(f.diff(y), dd.yprime) * dd.W[j]
        expr = (dd.s ** p * (f - substitute(f, dd.yprime)) - dd.s ** (p - 1) * d ** e * lin
                - d ** (2 * e) * dd.Q[i])
        if not in_h(expr, pres, small=len(ring.names) <= MAX_NF_VARS):
            bad.append(f"Taylor split {i + 1} not in (h)")
        if not dd.Q[i].is_zero() and dd.Q[i].min_degree(tv) < 2:
            bad.append(f"Q_{i + 1} has T-order < 2")
    if dd.s_congruent:
        s1 = dd.s - 1
        if not s1.is_zero() and not Ideal(ring, [d]).contains(s1):
            bad.append("s not 1 mod d")
    r = len(dd.f)
    if dd.shared:
        m = det([[g.diff(t) for t in dd.shared] for g in dd.g])
        if m != dd.s_prime:
            bad.append("s' is not the minor of dg/dT")
    for name, poly, unit in (("s'", dd.s_prime, dd.s ** (r * p)), ("s''", dd.s2, dd.s ** (dd.delta + 1))):
        diff = poly - unit
        if not diff.is_zero() and diff.min_degree(tv) < 1:
            bad.append(f"{name} not congruent mod (T)")
    bad.extend(kernel_failures(pres))
    return bad


def kernel_failures(pres):
    """h vanishes at the canonical lift to full precision, g to precision N - (e+1) ord d."""
    bad = []
    dd = pres.data
    if not pres.lift:
        return ["no lift"]
    vals = {k: v.value for k, v in pres.lift.items()}
    n = min(v.prec for v in pres.lift.values())
    o = dd.d.min_degree(pres.ring.base_names())
    for i, h in enumerate(dd.h):
        if not substitute(h, vals, n).truncate(n).is_zero():
            bad.append(f"h_{i + 1} does not vanish mod (x)^{n}")
    ng = n - (dd.e + 1) * o
    for i, g in enumerate(dd.g):
        if not substitute(g, vals, n).truncate(ng).is_zero():
            bad.append(f"g_{i + 1} does not vanish mod (x)^{ng}")
    return bad
