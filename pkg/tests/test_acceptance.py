"""Acceptance criteria, one test each; the summary prints one PASS/FAIL line per criterion."""
import pathlib
import random
import time
from fractions import Fraction

import pytest

from neron.certificate import check_certificate
from neron.cli import main
from neron.desing import UNIFORM_REJECTION, _P, _pick_systems, verify_standard_smooth
from neron.estimator import NeronDesingularizer
from neron.groebner import COUNTERS, Ideal, check_syzygy, colon, min_power_k, normal_form, syzygies
from neron.hensel import newton_lift
from neron.polyring import GF, QQ, Poly, VarBlock, make_ring, parse_poly, substitute, taylor_parts
from neron.problem import parse_problem
from neron.smoothlocus import adjugate, det, identity, matmul

from helpers import extension_levels, proposition_failures
from mutation import mutations
from oracles import sqrt_one_plus_x

ROOT = pathlib.Path(__file__).resolve().parent.parent
PROB = ROOT / "problems"


class Clock:
    def __init__(self, budget):
        self.budget = budget

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.budget, f"took {self.elapsed:.2f}s, budget {self.budget}s"


# ---------------------------------------------------------------------------

@pytest.mark.acceptance(1, "Rond constants d = (x1^2, x2^2, x3^4), k = 6, witnesses reassemble", 1)
def test_rond_constants():
    prob = parse_problem(PROB / "rond_p2.txt")
    with Clock(1.0):
        alg = prob.algebra(prob.precision)
        yp = prob.yprime()
        xring = prob.ring.subring(prob.xvars)
        ds = [substitute(_P(sys, alg.ring), yp).restrict(xring)
              for _, sys in (_pick_systems(alg, ps) for ps in prob.param_systems())]
        res = min_power_k(Ideal(xring, ds))
        w = normal_form(parse_poly("x1^2*x2^2 - x3^4", xring),
                        Ideal(xring, [parse_poly("x1*x2 - x3^2", xring)]), witness=True).witness
    assert ds == [parse_poly(t, xring) for t in ("x1^2", "x2^2", "x3^4")]
    assert res.k == 6 and res.nonmember == parse_poly("x1*x2*x3^3", xring)
    assert w.member and w.cofactors == [parse_poly("x1*x2 + x3^2", xring)]
    assert w.cofactors[0] * w.gens[0] == parse_poly("x1^2*x2^2 - x3^4", xring)


@pytest.mark.acceptance(2, "Rond gate rejection: uniform exits 2 with the verbatim message", 1)
def test_rond_gate_rejection(capsys):
    with Clock(1.0):
        code = main(["uniform", str(PROB / "rond_p2.txt")])
    out, err = capsys.readouterr()
    assert code == 2
    assert out.strip() == UNIFORM_REJECTION == "ȳ, f^{(i)}, N_i are not well chosen."
    assert "k: 6" in err and "I(ȳ) ⊆ (x)^18" in err and "order: 4" in err


@pytest.mark.acceptance(3, "extension-step identities on the node and the Rond pipeline", 30)
def test_proposition_identities():
    runs = [("node.txt", "dim1"), ("rond_line_smooth.txt", "neron"), ("rond_line_singular.txt", "neron")]
    with Clock(30.0):
        levels = 0
        for name, algorithm in runs:
            est = NeronDesingularizer(algorithm=algorithm).fit(str(PROB / name))
            pres = est.presentation_
            assert verify_standard_smooth(pres).ok, name
            for level in extension_levels(pres):
                assert proposition_failures(level) == [], name
                dd = level.data
                assert dd.s_congruent
                levels += 1
    assert levels >= 3


def _node():
    return NeronDesingularizer(algorithm="uniform").fit(str(PROB / "node.txt"))


def _sample_unit(rnd, R, n):
    """1 + x^3 * (random polynomial): a unit congruent to 1 modulo d^3 = x^3."""
    tail = sum((parse_poly(str(rnd.randint(-3, 3)), R) * R.var("x") ** (3 + i) for i in range(4)), R.zero())
    return R.one() + tail


def _inverse(u, n, R):
    inv, pw, t = R.one(), R.one(), R.one() - u
    for _ in range(n):
        pw = (pw * t).truncate(n)
        inv = inv + pw
    return inv.truncate(n)


@pytest.mark.acceptance(4, "uniform factorization of 20 sampled v' = v mod d^3 through one C; diagram mod m^c", 60)
def test_uniform_factorization():
    with Clock(60.0):
        est = _node()
        pres = est.presentation_
        R, N, c = pres.ring, pres.precision, est.problem_.c
        x = R.var("x")
        rnd = random.Random(20240601)
        seen = set()
        for _ in range(20):
            u = _sample_unit(rnd, R, N)
            vp = {"Y1": (x * u).truncate(N), "Y2": (x * _inverse(u, N, R)).truncate(N)}
            seen.add(str(vp["Y1"]))
            w = est.transform([vp])[0]
            for y in ("Y1", "Y2"):
                assert (w[y].value - vp[y]).truncate(w.prec).is_zero()
            vals = {k: j.value for k, j in w.values.items()}
            for rel in pres.relations:
                o = pres.data.d.min_degree(["x"]) * (pres.data.e + 1) if rel in pres.data.g else 0
                assert substitute(rel, vals, w.prec).truncate(w.prec - o).is_zero()
        # the canonical w composed with pi reproduces v modulo m^c
        for y, v in est.problem_.v.items():
            assert (pres.lift[y].value - v.coerce(R)).truncate(c).is_zero()
    assert len(seen) > 1


@pytest.mark.acceptance(5, "parametrization round trip on 20 random parameters; distinct parameters give distinct morphisms", 60)
def test_parametrization_round_trip():
    with Clock(60.0):
        est = _node()
        pres = est.presentation_
        R, N = pres.ring, pres.precision
        x = R.var("x")
        tail = pres.data.tails[0][0]
        rnd = random.Random(7)
        images = {}
        for _ in range(20):
            q = R.zero()
            for i in range(3):
                q = q + R.const(R.field.coerce(Fraction(rnd.randint(-4, 4), rnd.randint(1, 3)))) * x ** (3 + i)
            v = est.inverse_transform([[q]])[0]
            w = est.transform([v])[0]
            assert (w[tail].value - pres.lift[tail].value - q).truncate(w.prec).is_zero()
            key = tuple(str(v[y].value) for y in ("Y1", "Y2"))
            if str(q) in images:
                assert images[str(q)] == key
            else:
                assert key not in images.values()
                images[str(q)] = key


@pytest.mark.acceptance(6, "Newton lift of sqrt(1 + x1) matches the oracle; residual order doubles", 1)
def test_newton_sqrt():
    R = make_ring(QQ, x=("base", 1), Y=("algebra", 1))
    oracle = sqrt_one_plus_x(8)
    with Clock(1.0):
        res = newton_lift([parse_poly("Y1^2 - 1 - x1", R)], ["Y1"], {"Y1": R.one()}, 8)
    got = [QQ.to_fraction(res["Y1"].value.terms.get((k, 0), 0)) for k in range(8)]
    assert got == oracle
    assert oracle[:5] == [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16), Fraction(-5, 128)]
    hist = res.residual_orders
    assert hist[-1] >= 8
    assert all(b >= min(2 * a, 8) for a, b in zip(hist, hist[1:]))


# ---------------------------------------------------------------------------
# 7: kernel soundness

RK = make_ring(QQ, x=("base", 3))
RT = make_ring(QQ, x=("base", 2), Y=("algebra", 2), T=("tangent", 2))
F101 = make_ring(GF(101), x=("base", 2))


def _rand(rnd, ring, names=None, terms=3, deg=2, mod=None):
    idx = [ring.index[n] for n in (names or ring.names)]
    items = []
    for _ in range(terms):
        e = [0] * ring.nvars
        for i in idx:
            e[i] = rnd.randint(0, deg)
        c = rnd.randint(0, mod - 1) if mod else rnd.randint(-5, 5)
        items.append((tuple(e), ring.field.coerce(c)))
    return Poly.from_terms(ring, items)


def _ring_laws(rnd):
    f, g, h = (_rand(rnd, RK) for _ in range(3))
    return (f + g) * h == f * h + g * h and f * g == g * f and (f * g) * h == f * (g * h)


def _taylor(rnd):
    f = _rand(rnd, RT, ["x1", "x2", "Y1", "Y2"], terms=3, deg=2)
    yp = {y: _rand(rnd, RT, ["x1", "x2"], terms=2) for y in ("Y1", "Y2")}
    W = {"Y1": RT.var("T1") - 2 * RT.var("T2"), "Y2": _rand(rnd, RT, ["x1"], terms=1, deg=1) * RT.var("T2")}
    parts = taylor_parts(f, yp, W, tvars=["T1", "T2"])
    return sum(parts, RT.zero()) == substitute(f, {y: yp[y] + W[y] for y in yp})


def _adjugate(rnd):
    n = rnd.randint(1, 3)
    H = [[_rand(rnd, F101, terms=2, deg=1, mod=101) for _ in range(n)] for _ in range(n)]
    D = [[det(H) * e for e in row] for row in identity(n, F101)]
    G = adjugate(H)
    return matmul(G, H) == D and matmul(H, G) == D


NF_IDEAL = Ideal(RK, [parse_poly("x1^2 - x2*x3", RK), parse_poly("x2^2 - x1 + x3", RK)])


def _nf(rnd):
    f = _rand(rnd, RK, deg=3)
    r = normal_form(f, NF_IDEAL).remainder
    i = _rand(rnd, RK) * NF_IDEAL.gens[0] + _rand(rnd, RK) * NF_IDEAL.gens[1]
    return normal_form(r, NF_IDEAL).remainder == r and normal_form(f + i, NF_IDEAL).remainder == r


def _colon(rnd):
    J = Ideal(RK, [_rand(rnd, RK, terms=2) for _ in range(2)])
    g = _rand(rnd, RK, terms=2, deg=1)
    return all(J.contains(q * g) for q in colon(J, g).gens)


def _monomial(rnd):
    gens = [tuple(rnd.randint(0, 3) for _ in range(3)) for _ in range(rnd.randint(1, 3))]
    t = tuple(rnd.randint(0, 4) for _ in range(3))
    one = RK.field.coerce(1)
    I = Ideal(RK, [Poly(RK, {g: one}) for g in gens])
    dominated = any(all(a >= b for a, b in zip(t, g)) for g in gens)
    return I.contains(Poly(RK, {t: one})) == dominated


def _syzygy(rnd):
    gens = [_rand(rnd, RK, terms=2) for _ in range(3)]
    return all(check_syzygy(s, gens) for s in syzygies(gens))


CHECKS = [(_ring_laws, 250), (_taylor, 150), (_adjugate, 150), (_nf, 150),
          (_colon, 50), (_monomial, 200), (_syzygy, 50)]


@pytest.mark.acceptance(7, "kernel soundness: 1000 randomized property checks", 120)
def test_kernel_soundness():
    rnd = random.Random(101)
    failed, total = [], 0
    with Clock(120.0):
        for fn, count in CHECKS:
            for _ in range(count):
                total += 1
                if not fn(rnd):
                    failed.append(fn.__name__)
    assert total == 1000
    assert failed == []


# ---------------------------------------------------------------------------

CERT_RUNS = [("node.txt", "uniform"), ("sqrt.txt", "dim1"), ("artinian.txt", "neron"),
             ("linear.txt", "neron"), ("rond_line_smooth.txt", "neron")]


@pytest.mark.acceptance(8, "certificates check with arithmetic only; every single-coefficient mutation is detected", 600)
def test_checker_independence():
    total = 0
    for name, algorithm in CERT_RUNS:
        doc = NeronDesingularizer(algorithm=algorithm).fit(str(PROB / name)).certificate_
        before = COUNTERS["basis"]
        assert check_certificate(doc).ok, name
        missed = []
        for where, mutated in mutations(doc):
            total += 1
            if check_certificate(mutated).ok:
                missed.append(where)
        assert COUNTERS["basis"] == before, name
        assert missed == [], (name, missed[:5])
    assert total > 500
