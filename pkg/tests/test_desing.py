import pytest

from neron.certificate import check_certificate
from neron.desing import (
    DIM1_REJECTION, UNIFORM_REJECTION, HypothesisError, NeighborhoodError, ParamSystem, Rejection,
    factor_morphism, neron_desing, parametrize_morphisms, uniform_desing, uniform_desing_dim1,
    verify_standard_smooth,
)
from neron.estimator import NeronDesingularizer
from neron.polyring import Jet, QQ, make_ring, parse_poly, substitute
from neron.problem import parse_problem, parse_problem_text
from neron.symalg import Algebra

from helpers import extension_levels, kernel_failures, proposition_failures

NODE = """
x = x
Y = 2
I = Y1*Y2 - x^2
v = {v}
dim = 1
k = 1
precision = 16
system1 = {system}
"""


def node(v="x, x", system="Y2: 1"):
    return parse_problem_text(NODE.format(v=v, system=system))


def dim1(prob, **kw):
    systems = prob.param_systems()
    return uniform_desing_dim1(prob.algebra(prob.precision), prob.yprime(), systems[0],
                               k=kw.get("k", prob.k), c=kw.get("c"), precision=prob.precision)


def assert_sound(pres):
    assert verify_standard_smooth(pres).ok
    assert check_certificate(pres.certificate.to_dict(pres.ring)).ok
    for level in extension_levels(pres):
        assert proposition_failures(level) == []


# -- the smooth extension on the node --------------------------------------------------

def test_node_presentation():
    pres = dim1(node())
    dd = pres.data
    assert dd.d == parse_poly("x", pres.ring) and dd.e == 1 and dd.p == 2
    assert dd.shared == ("T1",) and dd.tails == [["T2"]]
    assert_sound(pres)


def test_unit_d_collapse():
    # sqrt(1 + x): d = 2 is a unit, the lift is the binomial series
    R = make_ring(QQ, x=("base", 1), Y=("algebra", 1))
    alg = Algebra(R, [], [parse_poly("Y1^2 - 1 - x1", R)], ("Y1",), {})
    pres = uniform_desing_dim1(alg, {"Y1": R.one()}, None, precision=8)
    assert pres.data.d.constant_term() != 0
    assert_sound(pres)
    y = pres.lift["Y1"].value
    assert y.truncate(3) == parse_poly("1 + 1/2*x1 - 1/8*x1^2", pres.ring)


def test_structural_map_is_identity_on_Y():
    pres = dim1(node())
    assert all(pres.pi[y] == pres.ring.var(y) for y in pres.yvars)


def test_wrong_N_fails_verification():
    pres = dim1(node())
    pres.data.systems[0].N = pres.data.systems[0].N * 2
    rep = verify_standard_smooth(pres)
    assert not rep.ok and rep.first.startswith("(a)")


def test_kernel_containment_node():
    assert kernel_failures(dim1(node())) == []


# -- gates of the one-dimensional algorithm ----------------------------------------------

def test_dim1_gate_low_order():
    with pytest.raises(Rejection) as exc:
        dim1(node(v="x, 2*x"))
    assert exc.value.message == DIM1_REJECTION


def test_dim1_gate_d_zero():
    with pytest.raises(Rejection) as exc:
        dim1(node(system="Y2: 0"))
    assert exc.value.message == "y′, N, (f_1,…,f_r) are not well chosen"


def test_uniform_m1_delegates():
    prob = node()
    a = dim1(prob)
    b = uniform_desing(prob.algebra(16), prob.yprime(), prob.param_systems(), k=1, precision=16)
    assert a.data.d == b.data.d and a.data.g == b.data.g and a.data.h == b.data.h


# -- Rond ---------------------------------------------------------------------------------

def test_rond_rejection():
    prob = parse_problem("problems/rond_p2.txt")
    with pytest.raises(Rejection) as exc:
        uniform_desing(prob.algebra(16), prob.yprime(), prob.param_systems(), precision=16)
    assert exc.value.message == UNIFORM_REJECTION
    ev = exc.value.evidence
    assert ev["k"] == 6 and ev["order"] == 4 and ev["d"] == ["x1^2", "x2^2", "x3^4"]


@pytest.mark.parametrize("path", ["problems/rond_line_smooth.txt", "problems/rond_line_singular.txt"])
def test_neron_on_rond_equation(path):
    est = NeronDesingularizer().fit(path)
    pres = est.presentation_
    assert_sound(pres)
    prob = est.problem_
    # the lift solves I at precision
    vals = {k: v.value for k, v in pres.lift.items()}
    n = min(pres.lift[y].prec for y in prob.yvars)
    for g in prob.I:
        assert substitute(g.coerce(pres.ring), vals, n).truncate(n).is_zero()


# -- m = 2 -----------------------------------------------------------------------------------

R2 = make_ring(QQ, x=("base", 2), Y=("algebra", 2))


def m2():
    alg = Algebra(R2, [], [parse_poly("Y1*Y2 - x1*x2", R2)], ("Y1", "Y2"), {})
    yp = {"Y1": parse_poly("x1", R2), "Y2": parse_poly("x2", R2)}
    systems = [ParamSystem(minors=[((1,), R2.one())]), ParamSystem(minors=[((0,), R2.one())])]
    return uniform_desing(alg, yp, systems, precision=12)


def test_m2_presentation_sound():
    pres = m2()
    assert verify_standard_smooth(pres).ok
    assert check_certificate(pres.certificate.to_dict(pres.ring)).ok
    assert pres.data.d == parse_poly("x2", pres.ring)


def unit_inverse(u, n, ring):
    inv, pw, t = ring.one(), ring.one(), ring.one() - u
    for _ in range(n):
        pw = (pw * t).truncate(n)
        inv = inv + pw
    return inv.truncate(n)


def test_m2_two_morphisms_factor_through_same_C():
    pres = m2()
    R = pres.ring
    ws = []
    for u in ("1 + x2^3", "1 - x2^3 + x1^2*x2^3"):
        uu = parse_poly(u, R)
        vp = {"Y1": Jet(parse_poly("x1", R) * uu, 12),
              "Y2": Jet((parse_poly("x2", R) * unit_inverse(uu, 12, R)).truncate(12), 12)}
        w = factor_morphism(pres, vp)
        for y in ("Y1", "Y2"):
            assert w[y].value.truncate(w.prec) == vp[y].value.truncate(w.prec)
        ws.append(w)
    assert ws[0]["T2"].value != ws[1]["T2"].value


# -- general Néron desingularization --------------------------------------------------------

def test_neron_dimension_zero():
    est = NeronDesingularizer().fit("problems/artinian.txt")
    assert est.presentation_.kind in ("localization", "trivial")
    assert verify_standard_smooth(est.presentation_).ok
    assert check_certificate(est.certificate_).ok


def test_neron_already_smooth():
    est = NeronDesingularizer().fit("problems/linear.txt")
    pres = est.presentation_
    assert_sound(pres)
    assert pres.lift["Y1"].value == parse_poly("x1", pres.ring)


def test_neron_needs_dimension():
    text = "x = x1\nY = 1\nI = Y1 - x1\nv = x1\nalgorithm = neron\nprecision = 4\n"
    with pytest.raises(ValueError, match="dimension"):
        NeronDesingularizer().fit(text)


# -- factorization and parametrization ---------------------------------------------------------

def node_fit():
    return NeronDesingularizer(algorithm="dim1").fit("problems/node.txt")


def test_factor_v_itself_is_canonical_lift():
    est = node_fit()
    pres = est.presentation_
    w = est.transform([{"Y1": "x", "Y2": "x"}])[0]
    for name in pres.variables:
        assert w[name].value.truncate(w.prec) == pres.lift[name].value.truncate(w.prec)


def test_factor_perturbed_morphism():
    est = node_fit()
    R = est.presentation_.ring
    u = parse_poly("1 + x^3", R)
    vp = {"Y1": parse_poly("x", R) * u, "Y2": (parse_poly("x", R) * unit_inverse(u, 16, R)).truncate(16)}
    w = est.transform([vp])[0]
    for y in ("Y1", "Y2"):
        assert w[y].value.truncate(w.prec) == vp[y].truncate(w.prec)


def test_factor_outside_neighborhood():
    est = node_fit()
    R = est.presentation_.ring
    u = parse_poly("1 + x", R)
    vp = {"Y1": parse_poly("x", R) * u, "Y2": (parse_poly("x", R) * unit_inverse(u, 16, R)).truncate(16)}
    with pytest.raises(NeighborhoodError, match="outside the uniform neighborhood"):
        est.transform([vp])


def test_factor_rejects_non_morphism():
    est = node_fit()
    with pytest.raises(ValueError, match="not a morphism"):
        est.transform([{"Y1": "x + x^4", "Y2": "x"}])


def test_parametrize_zero_gives_v():
    est = node_fit()
    v = est.inverse_transform([["0"]])[0]
    assert v["Y1"].value == parse_poly("x", est.presentation_.ring)
    assert v["Y2"].value == parse_poly("x", est.presentation_.ring)


def test_parametrize_roundtrip_and_injective():
    est = node_fit()
    pres = est.presentation_
    seen = set()
    for text in ("x^3", "2*x^3 - x^5", "x^4"):
        v = est.inverse_transform([[text]])[0]
        key = tuple(str(v[y].value) for y in ("Y1", "Y2"))
        assert key not in seen
        seen.add(key)
        w = est.transform([v])[0]
        tail = pres.data.tails[0][0]
        want = parse_poly(text, pres.ring) + pres.lift[tail].value
        assert (w[tail].value - want).truncate(w.prec).is_zero()


def test_parametrize_length_mismatch():
    est = node_fit()
    with pytest.raises(ValueError, match="expected 1 parameters"):
        est.inverse_transform([["x^3", "x^3"]])


def test_tampered_Q_is_detected():
    pres = dim1(node())
    T = pres.ring.var("T2")
    pres.data.Q[0] = pres.data.Q[0] + T * T
    assert any("Taylor split" in f for f in proposition_failures(pres))
