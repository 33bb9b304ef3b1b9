import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from neron.groebner import (
    CapExceeded, Ideal, NotMPrimary, check_syzygy, colon, min_power_k, normal_form,
    stabilization_exponent, std_basis, syzygies,
)
from neron.polyring import LEX, QQ, Poly, make_ring, parse_poly

R = make_ring(QQ, x=("base", 3))
RZ = make_ring(QQ, x=("base", 1), z=("base", 1))


def P(text, ring=R):
    return parse_poly(text, ring)


def ideal(*texts, ring=R):
    return Ideal(ring, [P(t, ring) for t in texts])


def mono(ring, e):
    return Poly(ring, {tuple(e): ring.field.coerce(1)})


def s_poly_reduces(basis, order):
    from neron.groebner import divide
    key = order.key()
    for f, g in itertools.combinations(basis.polys, 2):
        lf, lg = max(f.terms, key=key), max(g.terms, key=key)
        lcm = tuple(max(a, b) for a, b in zip(lf, lg))
        mf = mono(f.ring, tuple(a - b for a, b in zip(lcm, lf))).scale(f.ring.field.inv(f.terms[lf]))
        mg = mono(g.ring, tuple(a - b for a, b in zip(lcm, lg))).scale(g.ring.field.inv(g.terms[lg]))
        rem, _ = divide(mf * f - mg * g, basis.polys, order)
        if not rem.is_zero():
            return False
    return True


# -- std_basis ------------------------------------------------------------------------

def test_basis_single_generator():
    assert std_basis(ideal("x1")).polys == [P("x1")]


def test_basis_already_a_basis():
    assert sorted(map(str, std_basis(ideal("x1", "x2")).polys)) == ["x1", "x2"]


def test_basis_lex_example():
    b = std_basis(ideal("x1^2 - x2", "x1*x2"), LEX)
    assert set(b.polys) == {P("x1^2 - x2"), P("x1*x2"), P("x2^2")}
    assert s_poly_reduces(b, LEX)


def test_basis_cofactors_reassemble():
    I = ideal("x1^2 - x2", "x1*x2 - x3", "x3^2 + x1")
    b = std_basis(I, cofactors=True)
    for g, cof in zip(b.polys, b.cofactors):
        acc = R.zero()
        for c, h in zip(cof, I.gens):
            acc = acc + c * h
        assert acc == g


# -- normal_form ------------------------------------------------------------------------

def test_nf_examples():
    w = normal_form(P("x1^2"), ideal("x1"), witness=True).witness
    assert w.member and w.cofactors == [P("x1")]
    w = normal_form(P("x1^2*x2^2 - x3^4"), ideal("x1*x2 - x3^2"), witness=True).witness
    assert w.member and w.cofactors == [P("x1*x2 + x3^2")] and w.check()
    assert normal_form(P("x3"), ideal("x1", "x2")).remainder == P("x3")


def test_local_normal_form_unit_witness():
    # 1 + x1 is a unit locally: x1 lies in (x1 + x1^2) only in the localization
    I = ideal("x1 + x1^2")
    assert not I.contains(P("x1"))
    w = I.witness(P("x1"), local=True)
    assert w.member and w.check() and w.unit.constant_term() != 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_nf_idempotent_and_ideal_invariant(seed):
    rnd = random.Random(seed)
    I = ideal("x1^2 - x2*x3", "x2^2 - x1")
    f = random_poly(rnd)
    r1 = normal_form(f, I).remainder
    assert normal_form(r1, I).remainder == r1
    i = random_poly(rnd) * I.gens[0] + random_poly(rnd) * I.gens[1]
    assert normal_form(f + i, I).remainder == r1


def random_poly(rnd, ring=R, terms=3, deg=3):
    from neron.polyring import Poly
    items = []
    for _ in range(terms):
        e = tuple(rnd.randint(0, deg) for _ in range(ring.nvars))
        items.append((e, ring.field.coerce(rnd.randint(-4, 4))))
    return Poly.from_terms(ring, items)


# -- colon ------------------------------------------------------------------------

def test_colon_by_ideal():
    C = colon(ideal("x1"), ideal("x1", "x2"))
    assert C.gens == [P("x1")]


def test_colon_in_domain_is_zero():
    C = colon(Ideal(R, []), P("x1"))
    assert C.gens == []


def test_colon_nonreduced():
    C = colon(ideal("x1^2*z1", ring=RZ), P("x1", RZ))
    assert C.gens == [P("x1*z1", RZ)]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_colon_soundness(seed):
    rnd = random.Random(seed)
    J = Ideal(R, [random_poly(rnd, deg=2) for _ in range(2)])
    g = random_poly(rnd, terms=2, deg=2)
    for q in colon(J, g).gens:
        assert J.contains(q * g)


# -- stabilization_exponent -------------------------------------------------------

def test_stabilization_domain():
    assert stabilization_exponent(Ideal(R, []), P("x1")).e == 1


def test_stabilization_chain():
    res = stabilization_exponent(ideal("x1^2*z1", ring=RZ), P("x1", RZ))
    assert res.e == 2
    assert all(w.member and w.check() for w in res.forward + res.backward)
    assert res.strict is not None and not res.strict.member


def test_stabilization_rejects_zero_divisor_target():
    with pytest.raises(ValueError):
        stabilization_exponent(ideal("x1"), P("x1"))


def test_stabilization_cap():
    with pytest.raises(CapExceeded, match="cap exceeded"):
        stabilization_exponent(ideal("x1^5*z1", ring=RZ), P("x1", RZ), cap=2)


# -- min_power_k ----------------------------------------------------------------------

def test_min_power_maximal_ideal():
    assert min_power_k(ideal("x1", "x2", "x3")).k == 1


def test_min_power_rond():
    res = min_power_k(ideal("x1^2", "x2^2", "x3^4"))
    assert res.k == 6
    assert res.nonmember == P("x1*x2*x3^3")


def test_min_power_not_primary():
    with pytest.raises(NotMPrimary, match="not m-primary"):
        min_power_k(ideal("x1"), cap=8)


def test_min_power_with_J():
    res = min_power_k(ideal("x2", "x3"), Ideal(R, [P("x1^2")]))
    assert res.k == 2


# -- monomial ideal membership oracle ---------------------------------------------------

def dominated(e, gens):
    return any(all(a >= b for a, b in zip(e, g)) for g in gens)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 3)] * 3), min_size=1, max_size=4),
       st.tuples(*[st.integers(0, 4)] * 3))
def test_monomial_membership_matches_domination(gens, target):
    I = Ideal(R, [mono(R, g) for g in gens])
    assert I.contains(mono(R, target)) == dominated(target, gens)


# -- syzygies ------------------------------------------------------------------------------

def test_syzygy_koszul_pair():
    syz = syzygies([P("x1"), P("x2")])
    assert len(syz) == 1 and check_syzygy(syz[0], [P("x1"), P("x2")])
    assert syz[0] in ([P("x2"), P("-x1")], [P("-x2"), P("x1")])


def test_syzygy_single_generator():
    assert syzygies([P("x1*x2 - x3^2")]) == []


def test_syzygy_koszul_triple_generates():
    gens = [P("x1"), P("x2"), P("x3")]
    syz = syzygies(gens)
    assert all(check_syzygy(s, gens) for s in syz)
    # every Koszul syzygy is a combination: check membership componentwise
    # through the module trick (x_i e_j - x_j e_i reduces to zero)
    from neron.polyring import VarBlock
    E = R.extend(VarBlock("e", 3, "aux"))
    mod = Ideal(E, [sum((s[i].coerce(E) * E.var(f"e{i + 1}") for i in range(3)), E.zero()) for s in syz]
                + [E.var(f"e{i}") * E.var(f"e{j}") for i in range(1, 4) for j in range(i, 4)])
    for i, j in itertools.combinations(range(3), 2):
        k = gens[j].coerce(E) * E.var(f"e{i + 1}") - gens[i].coerce(E) * E.var(f"e{j + 1}")
        assert mod.contains(k)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_syzygy_dot_products(seed):
    rnd = random.Random(seed)
    gens = [random_poly(rnd, terms=2, deg=2) for _ in range(3)]
    for s in syzygies(gens):
        assert check_syzygy(s, gens)
