import math

import numpy as np
import pytest

from ordlocus.locus import U_SCAN, _roots_on_line
from ordlocus.presentations import two_bridge
from ordlocus.psl2r import (
    InvalidInput,
    Kind,
    RealMatrix,
    cayley_to_disk,
    classify,
    compose,
    ev,
    fixed_data,
    lift,
    trans,
)
from ordlocus.tracer import (
    Character,
    Chart,
    ChartKind,
    Constraint,
    RelatorSystem,
    TraceError,
    TraceParams,
    _eval_word,
    _lifted_word,
    arc_point,
    classify_real_character,
    continue_arc,
    kappa,
    newton_correct,
    normalize_lifts,
    real_generators,
    relator_residual,
    rep_point,
    riley_rep,
    word_scale,
)

FIG8 = two_bridge(5, 3)


def solutions(P, p, kind=ChartKind.REAL_RILEY):
    system = RelatorSystem(P, kind)
    grid = np.linspace(*U_SCAN)
    return [Chart.from_coords(kind, p, q) for q in _roots_on_line(system, p, grid)]


def random_hyperbolic(rng, scale=1.5):
    t = rng.uniform(0.2, scale) * rng.choice([-1, 1])
    a, b = rng.normal(size=2)
    c = rng.normal()
    d = (1 + b * c) / a
    conj = np.array([[a, b], [c, d]])
    return conj, t


def test_chart_validation():
    with pytest.raises(InvalidInput):
        Chart(ChartKind.REAL_RILEY, 1.0, 0.5)
    with pytest.raises(InvalidInput):
        Chart(ChartKind.UNIT_RILEY, 0.0, -1.0)
    with pytest.raises(InvalidInput):
        Chart(ChartKind.REAL_RILEY, math.inf, 0.5)
    with pytest.raises(InvalidInput):
        Chart(ChartKind.UNIT_RILEY, 1.0, 0.5).coords


def test_chart_coordinates_round_trip():
    for kind, s, u in ((ChartKind.REAL_RILEY, 1.7, -0.4), (ChartKind.UNIT_RILEY, 1.1, -2.5)):
        c = Chart(kind, s, u)
        back = Chart.from_coords(kind, *c.coords)
        assert back.s == pytest.approx(s)
        assert back.u == pytest.approx(u)


def test_real_generators_have_riley_traces():
    c = Chart(ChartKind.REAL_RILEY, 1.5, 0.3)
    A, B = real_generators(c)
    s = 1.5
    assert A.trace == pytest.approx(s + 1 / s)
    assert B.trace == pytest.approx(s + 1 / s)
    assert (A @ B).trace == pytest.approx(s * s + 1 / (s * s) + 0.3)


def test_unit_chart_generators_are_real_and_conjugate():
    c = Chart(ChartKind.UNIT_RILEY, 0.9, -1.3)
    A, B = real_generators(c)
    assert A.trace == pytest.approx(2 * math.cos(0.9))
    assert B.trace == pytest.approx(2 * math.cos(0.9))
    assert (A @ B).trace == pytest.approx(2 * math.cos(1.8) - 1.3)
    a, b = riley_rep(c)
    assert np.trace(a @ b) == pytest.approx(2 * math.cos(1.8) - 1.3)


def test_kappa_matches_commutator_trace():
    for c in (Chart(ChartKind.REAL_RILEY, 1.5, 0.3), Chart(ChartKind.UNIT_RILEY, 0.9, -1.3)):
        A, B = real_generators(c)
        comm = A @ B @ A.inverse() @ B.inverse()
        assert kappa(c) == pytest.approx(comm.trace - 2.0, rel=1e-9)


def test_classify_real_character():
    assert classify_real_character(2.5, 2.5, 3.0) is Character.SL2R
    # a rotation pair generating an SU(2) character
    x = 2 * math.cos(0.9)
    assert classify_real_character(x, x, 2 * math.cos(1.8) + 1.0) is Character.SU2
    # abelian: kappa = 0
    s = 1.3
    t = s + 1 / s
    assert classify_real_character(t, t, s * s + 1 / (s * s)) is Character.REDUCIBLE


def test_word_scale_bounds_partial_products():
    gens = [(2.0, 1.0, 0.0, 0.5), (2.0, 0.0, 1.0, 0.5)]
    w = FIG8.relators[0]
    scale = word_scale(w, gens)
    assert scale >= 1.0
    assert scale >= math.hypot(*_eval_word(w, gens))


def test_newton_lands_on_the_curve():
    charts = solutions(FIG8, 0.5) + solutions(FIG8, 0.9)
    assert len(charts) == 4
    for chart in charts:
        A, B = real_generators(chart)
        assert relator_residual(FIG8, A, B) < 1e-9


def test_newton_with_constraint():
    chart = solutions(FIG8, 0.6)[0]
    p, q = chart.coords
    guess = Chart.from_coords(ChartKind.REAL_RILEY, p + 0.01, q + 0.01)
    fixed = newton_correct(FIG8, guess, Constraint.freeze(0, p + 0.01))
    assert fixed.coords[0] == pytest.approx(p + 0.01, abs=1e-10)


def test_newton_failure_raises_trace_error():
    # far from every solution of the relator on a frozen line
    with pytest.raises(TraceError):
        newton_correct(FIG8, Chart.from_coords(ChartKind.REAL_RILEY, 0.4, 50.0),
                       Constraint.freeze(0, 0.4))


def test_longitude_commutes_with_meridian_on_the_curve():
    for p in (0.6, 1.2):
        for chart in solutions(FIG8, p):
            A, B = real_generators(chart)
            gens = [(A.a, A.b, A.c, A.d), (B.a, B.b, B.c, B.d)]
            mu = np.array(_eval_word(FIG8.meridian, gens)).reshape(2, 2)
            lam = np.array(_eval_word(FIG8.longitude, gens)).reshape(2, 2)
            assert np.allclose(mu @ lam, lam @ mu, atol=1e-7 * max(1.0, np.abs(lam).max()))


def test_normalized_lifts_kill_the_relator():
    rng = np.random.default_rng(5)
    charts = solutions(FIG8, 0.5) + solutions(FIG8, 0.9)
    assert charts
    for chart in charts:
        A, B = real_generators(chart)
        sa, sb = (int(v) for v in rng.integers(-3, 4, size=2))
        la, lb = normalize_lifts(FIG8, A, B, sa, sb)
        g = _lifted_word(FIG8.relators[0], (la, lb))
        assert abs(g.gamma) < 1e-7
        assert abs(g.omega) < 1e-7


def test_relator_trans_parity_matches_sign():
    """A lifted relator is central of level m, and its SL(2,R) image is (-1)^m I."""
    rng = np.random.default_rng(6)
    for P in (FIG8, two_bridge(7, 3), two_bridge(13, 4)):
        charts = [c for p in (0.6, 1.2) for c in solutions(P, p)]
        assert charts
        for chart in charts:
            A, B = real_generators(chart)
            for _ in range(4):
                sheets = [int(v) for v in rng.integers(-5, 6, size=2)]
                lifts = [lift(cayley_to_disk(A), sheets[0]), lift(cayley_to_disk(B), sheets[1])]
                # flip the SL(2,R) sign of one generator half the time
                if rng.uniform() < 0.5:
                    lifts[0] = compose(lifts[0], lift(cayley_to_disk(RealMatrix(-1.0, 0.0, 0.0, -1.0))))
                g = _lifted_word(P.relators[0], lifts)
                cls = classify(g, tol=1e-6)
                assert cls.kind is Kind.CENTRAL
                m = round(trans(g))
                assert trans(g) == m
                image = g.project()
                assert image.alpha.real == pytest.approx((-1) ** m, abs=1e-6)


def test_ev_homomorphism_on_commuting_hyperbolics():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(50):
        conj, t1 = random_hyperbolic(rng)
        t2 = rng.uniform(-1.5, 1.5)
        inv = np.linalg.inv(conj)
        A = RealMatrix.from_array(conj @ np.diag([math.exp(t1), math.exp(-t1)]) @ inv)
        B = RealMatrix.from_array(conj @ np.diag([math.exp(t2), math.exp(-t2)]) @ inv)
        ga = lift(cayley_to_disk(A), int(rng.integers(-3, 4)))
        gb = lift(cayley_to_disk(B), int(rng.integers(-3, 4)))
        gab = compose(ga, gb)
        AB = A @ B
        if classify(AB).kind is not Kind.HYPERBOLIC or abs(t2) < 1e-3:
            continue
        for d in fixed_data(A):
            ea = ev(ga, _datum_at(A, d.v))
            eb = ev(gb, _datum_at(B, d.v))
            eab = ev(gab, _datum_at(AB, d.v))
            assert eab[0] == pytest.approx(ea[0] + eb[0], abs=1e-6)
            assert eab[1] == ea[1] + eb[1]
            checked += 1
    assert checked > 50


def _datum_at(m, v):
    return min(fixed_data(m), key=lambda e: _dist(e.v, v))


def _dist(u, v):
    if u is None or v is None:
        return 0.0 if u is v else math.inf
    return abs(u - v)


def test_rep_point_and_arc_point():
    chart = solutions(FIG8, 0.5)[0]
    rp = rep_point(FIG8, chart)
    assert rp.residual < 1e-9
    assert (rp.i, rp.j) == (0, 0)
    ap = arc_point(FIG8, chart)
    assert ap.x == pytest.approx(rp.ev_mu[0])
    assert ap.y == pytest.approx(rp.ev_lambda[0])
    # the meridian is conjugate to diag(s, 1/s) and the datum is its expanding point
    assert abs(ap.x) == pytest.approx(0.5, abs=1e-9)


def test_continue_arc_stays_on_the_curve():
    chart = solutions(FIG8, 0.5)[0]
    points, ends = continue_arc(FIG8, chart, TraceParams(max_points=300))
    assert len(points) > 10
    assert len(ends) == 2
    for ap in points[:: max(1, len(points) // 10)]:
        if ap.kind == "parabolic":
            continue
        c = Chart(ChartKind.REAL_RILEY, ap.s, ap.u)
        A, B = real_generators(c)
        assert relator_residual(FIG8, A, B) < 1e-6 * max(1.0, A.norm() ** 8)
    xy = np.array([(p.x, p.y) for p in points])
    assert np.all(np.hypot(*np.diff(xy, axis=0).T) < 0.5)
