"""Newton-Hensel lifting on truncated power series.

Every "lift by the Implicit Function Theorem" step is carried out here:
given polynomial relations ``g`` whose Jacobian minor on the solved
variables has a unit constant term at the starting jets, Newton's method
doubles the x-adic precision of a solution until it reaches ``N``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from neron.groebner import exact_quotient, jet_member
from neron.polyring import Jet, substitute
from neron.smoothlocus import adjugate, det

log = logging.getLogger(__name__)


class IFTError(ValueError):
    """The Jacobian minor is not a unit at the starting point."""


class PrecisionError(ValueError):
    pass


class NotDivisible(ValueError):
    pass


def series_inverse(u, n):
    """Inverse of ``u`` (unit constant term, base variables only) modulo ``(x)^n``."""
    c = u.constant_term()
    if c == 0:
        raise IFTError("not a unit: constant term vanishes")
    ring = u.ring
    v = ring.const(ring.field.inv(c))
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        uv = (u.truncate(prec) * v).truncate(prec)
        v = (v * (2 - uv)).truncate(prec)
    return v.truncate(n)


def jet_divide(a, d, n):
    """``c`` with ``d * c = a`` in ``K[[x]]``, where ``a`` is known modulo ``(x)^n``.

    The quotient is determined modulo ``(x)^(n - ord d)``.  Division proceeds
    degree by degree against the lowest homogeneous part of ``d``.
    """
    if d.is_zero():
        raise ZeroDivisionError("division by zero")
    ring = a.ring.union(d.ring)
    a = a.coerce(ring).truncate(n)
    d = d.coerce(ring)
    xs = ring.base_names()
    o = d.min_degree(xs)
    parts = d.homogeneous_parts(xs)
    low = parts[o]
    out_prec = max(n - o, 0)
    c = ring.zero()
    r = a
    while not r.is_zero():
        k = r.min_degree(xs)
        if k >= n:
            break
        if k < o:
            raise NotDivisible("not divisible: residual of order below the divisor's order")
        if k - o >= out_prec:
            break
        rk = r.homogeneous_parts(xs)[k]
        try:
            q = exact_quotient(rk, low)
        except ValueError:
            raise NotDivisible("not divisible in the power series ring") from None
        c = c + q
        r = (r - d * q).truncate(n)
    return Jet(c, out_prec)


@dataclass
class LiftResult:
    values: dict                 # name -> Jet
    residual_orders: list = field(default_factory=list)
    steps: int = 0

    def __getitem__(self, name):
        return self.values[name]


def _residual_order(res, n):
    orders = [r.truncate(n).x_order() for r in res]
    orders = [n if o is None else o for o in orders]
    return min(orders) if orders else n


def newton_lift(g, cols, z0, n, max_steps=64):
    """Lift ``z0`` to a solution of ``g`` modulo ``(x)^n``.

    ``cols`` names the solved variables (one per relation); all other
    variables of ``g`` except base variables must be assigned in ``z0`` and
    are passed through unchanged.  Returns a :class:`LiftResult` whose
    ``residual_orders`` records the x-order of ``g`` after each step.
    """
    if len(g) != len(cols):
        raise ValueError("need one solved variable per relation")
    vals = {}
    for name, v in z0.items():
        vals[name] = (v.value if isinstance(v, Jet) else v)
    ring = g[0].ring
    for p in g[1:]:
        ring = ring.union(p.ring)
    for name in cols:
        if name not in vals:
            raise ValueError(f"no starting value for {name}")
    vals = {k: v.coerce(ring.union(v.ring)).truncate(n) for k, v in vals.items()}
    jac = [[p.diff(c) for c in cols] for p in g]

    def evaluate(polys):
        return [substitute(p, vals, n) for p in polys]

    res = evaluate(g)
    order = _residual_order(res, n)
    if order < 1:
        raise PrecisionError("insufficient initial precision: residual has a unit term")
    history = [order]
    jz = [evaluate(row) for row in jac]
    D = det(jz) if len(jz) > 1 else jz[0][0]
    if D.constant_term() == 0:
        raise IFTError("IFT hypothesis fails: selected minor is not a unit at z0")
    steps = 0
    while order < n:
        steps += 1
        if steps > max_steps:
            raise PrecisionError("Newton iteration did not converge")
        prec = min(2 * order, n)
        jz = [[e.truncate(prec) for e in row] for row in (evaluate(r) for r in jac)]
        if len(jz) == 1:
            inv = [[series_inverse(jz[0][0], prec)]]
        else:
            D = det(jz).truncate(prec)
            Dinv = series_inverse(D, prec)
            inv = [[(Dinv * a).truncate(prec) for a in row] for row in adjugate(jz)]
        for i, c in enumerate(cols):
            delta = None
            for k in range(len(cols)):
                t = (inv[i][k] * res[k]).truncate(prec)
                delta = t if delta is None else delta + t
            vals[c] = (vals[c] - delta).truncate(n)
        res = evaluate(g)
        new = _residual_order(res, n)
        if new < min(2 * order, n):
            log.debug("residual order %s after step from %s", new, order)
        if new <= order and new < n:
            raise PrecisionError("Newton iteration stalled")
        order = new
        history.append(order)
    out = {k: Jet(v, n) for k, v in vals.items()}
    return LiftResult(out, history, steps)


def lift_presentation_morphism(relations, cols, zbar, quotient, n, extra=()):
    """Lift jets satisfying ``relations`` modulo ``quotient`` to jets
    satisfying them modulo ``(x)^n``.

    ``quotient`` is a list of base-variable polynomials; ``extra`` are
    further relations that must vanish on the lift (checked, not solved).
    """
    if not relations:
        return LiftResult({k: (v if isinstance(v, Jet) else Jet(v, n)) for k, v in zbar.items()}, [n], 0)
    ring = relations[0].ring
    for r in relations:
        ring = ring.union(r.ring)
    xring = ring.subring(ring.base_names())
    vals = {k: (v.value if isinstance(v, Jet) else v) for k, v in zbar.items()}
    for r in relations:
        res = substitute(r, vals, n)
        res_x = res.restrict(xring) if set(res.variables()) <= set(xring.names) else None
        if res_x is None:
            raise ValueError("incomplete assignment for relation residual")
        if not jet_member(res_x, [q.restrict(xring) for q in quotient], xring, n):
            raise PrecisionError("precondition: jets do not satisfy the relations modulo the quotient")
    result = newton_lift(relations, cols, vals, n)
    lifted = {k: v.value for k, v in result.values.items()}
    for r in extra:
        res = substitute(r, lifted, n)
        if not res.truncate(n).is_zero():
            raise PrecisionError("lifted jets violate a non-solved relation")
    return result


__all__ = [
    "series_inverse", "jet_divide", "newton_lift", "lift_presentation_morphism",
    "LiftResult", "IFTError", "PrecisionError", "NotDivisible",
]
