"""Acceptance criteria 1 to 8.

Each criterion is one test function (criterion 7 is split per knot so that
every function stays inside its time budget).  The terminal summary prints
one PASS/FAIL line per criterion.
"""

import cmath
import math
import time

import numpy as np
import pytest

from conftest import BUILD_SECONDS, knot_41, knot_52, knot_73
from ordlocus import BuildOptions, build_locus
from ordlocus.alexander import alexander_polynomial
from ordlocus.laurent import LaurentPoly
from ordlocus.locus import SEEDS, validate_locus
from ordlocus.orderability import alexander_arc_check, el_line_hits, orderable_slopes
from ordlocus.psl2r import (
    Kind,
    LiftedElement,
    RealMatrix,
    cayley_to_disk,
    central,
    classify,
    compose,
    disk_to_real,
    ev,
    fixed_data,
    invert,
    lift,
    trans,
)

FAST_BUDGET = 10.0
REGRESSION_BUDGET = 60.0


def poly(*coeffs):
    return LaurentPoly(tuple(coeffs), 0)


def random_element(rng, rmax=0.95, wmax=10.0):
    rho = rmax * math.sqrt(rng.uniform())
    return LiftedElement(rho * cmath.exp(2j * math.pi * rng.uniform()), rng.uniform(-wmax, wmax))


def hyperbolic(conj, t):
    inv = np.linalg.inv(conj)
    return RealMatrix.from_array(conj @ np.diag([math.exp(t), math.exp(-t)]) @ inv)


def random_conjugator(rng):
    a, b, c = rng.normal(size=3)
    while abs(a) < 0.2:
        a = rng.normal()
    return np.array([[a, b], [c, (1 + b * c) / a]])


def matching_datum(m, v):
    def dist(u):
        if u is None or v is None:
            return 0.0 if u is v else math.inf
        return abs(u - v)
    return min(fixed_data(m), key=lambda d: dist(d.v))


def non_axis_slopes(arcs):
    return [[a.slope for a in arc.asymptotes] for arc in arcs if not arc.is_axis]


def near(values, target, tol):
    return any(abs(v - target) < tol for v in values)


def check_budget(name, start, budget=REGRESSION_BUDGET):
    elapsed = time.perf_counter() - start + BUILD_SECONDS.get(name, 0.0)
    assert elapsed < budget, f"{name}: {elapsed:.1f} s"


def test_criterion_1_lifted_group():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    n = 1000
    elems = [random_element(rng) for _ in range(3 * n)]
    for g, h, f in zip(elems[0::3], elems[1::3], elems[2::3]):
        # homomorphism onto SU(1,1)
        lhs = compose(g, h).project()
        rhs = g.project() @ h.project()
        assert abs(lhs.alpha - rhs.alpha) < 1e-8 * abs(rhs.alpha)
        assert abs(lhs.beta - rhs.beta) < 1e-8 * abs(rhs.alpha)
        # associativity
        a = compose(compose(g, h), f)
        b = compose(g, compose(h, f))
        assert abs(a.gamma - b.gamma) < 1e-8
        assert abs(a.omega - b.omega) < 1e-8 * max(1.0, abs(b.omega))
        # the center commutes and shifts omega by k pi
        k = int(rng.integers(-8, 9))
        zg, gz = compose(central(k), g), compose(g, central(k))
        assert abs(zg.gamma - gz.gamma) < 1e-8
        assert abs(zg.omega - gz.omega) < 1e-8
        assert abs(gz.omega - g.omega - k * math.pi) < 1e-8 * max(1.0, abs(gz.omega))

    for g, h in zip(elems[: n // 4], elems[n // 4: n // 2]):
        # conjugacy invariance and homogeneity of trans
        conj = compose(compose(h, g), invert(h))
        assert abs(trans(conj) - trans(g)) < 1e-6
        m = int(rng.integers(2, 5))
        assert abs(trans(g ** m) - m * trans(g)) < 1e-6
        assert abs(trans(invert(g)) + trans(g)) < 1e-6

    for k in range(-8, 9):
        assert round(trans(central(k))) == k
        assert trans(central(k)) == k
    check_budget("criterion 1", start, FAST_BUDGET)


def test_criterion_2_ev_properties():
    start = time.perf_counter()
    rng = np.random.default_rng(77)

    # ev is a homomorphism on commuting hyperbolic pairs sharing a fixed point
    pairs = 0
    while pairs < 300:
        conj = random_conjugator(rng)
        t1, t2 = rng.uniform(-2.0, 2.0, size=2)
        if min(abs(t1), abs(t2), abs(t1 + t2)) < 1e-2:
            continue
        A, B = hyperbolic(conj, t1), hyperbolic(conj, t2)
        ga = lift(cayley_to_disk(A), int(rng.integers(-4, 5)))
        gb = lift(cayley_to_disk(B), int(rng.integers(-4, 5)))
        gab = compose(ga, gb)
        AB = A @ B
        for d in fixed_data(A):
            ea = ev(ga, d)
            eb = ev(gb, matching_datum(B, d.v))
            eab = ev(gab, matching_datum(AB, d.v))
            assert abs(eab[0] - ea[0] - eb[0]) < 1e-7
            assert eab[1] == ea[1] + eb[1]
        pairs += 1

    # EV0: a commuting combination with ev = (0, 0) is the identity
    recovered = 0
    while recovered < 300:
        conj = random_conjugator(rng)
        k, j = (int(v) for v in rng.integers(1, 4, size=2))
        t1 = rng.uniform(0.1, 1.5) * rng.choice([-1, 1])
        t2 = -k * t1 / j
        A, B = hyperbolic(conj, t1), hyperbolic(conj, t2)
        # sheets with k * m + j * n = 0 make the combined translation vanish
        m = int(rng.integers(-2, 3))
        ga = lift(cayley_to_disk(A), j * m)
        gb = lift(cayley_to_disk(B), -k * m)
        g = compose(ga ** k, gb ** j)
        d = fixed_data(A)[0]
        value = ev(g, matching_datum(disk_to_real(g.project()), d.v)) if not \
            disk_to_real(g.project()).is_central() else (0.0, round(trans(g)))
        assert abs(value[0]) < 1e-6 and value[1] == 0
        assert abs(g.gamma) < 1e-8
        assert abs(g.omega) < 1e-8
        recovered += 1
    for k in range(-4, 5):
        z = central(k)
        assert classify(z).kind is Kind.CENTRAL
        assert (abs(z.gamma) < 1e-8 and abs(z.omega) < 1e-8) == (k == 0)

    # parity: a lift of +I has even translation number, a lift of -I odd
    checked = 0
    for _ in range(300):
        A = disk_to_real(random_element(rng, wmax=3.0).project())
        B = disk_to_real(random_element(rng, wmax=3.0).project())
        C = (A @ B).inverse()
        sign = rng.choice([1.0, -1.0])
        C = RealMatrix(sign * C.a, sign * C.b, sign * C.c, sign * C.d)
        lifts = [lift(cayley_to_disk(M), int(rng.integers(-3, 4))) for M in (A, B, C)]
        g = compose(compose(lifts[0], lifts[1]), lifts[2])
        real = disk_to_real(g.project())
        assert real.is_central(1e-9)
        n = trans(g)
        assert n == round(n)
        plus = abs(real.a - 1.0) < 1e-9
        assert (int(n) % 2 == 0) == plus
        checked += 1
    assert checked == 300
    check_budget("criterion 2", start, FAST_BUDGET)


def test_criterion_3_figure_eight(locus_41):
    start = time.perf_counter()
    P = knot_41()
    assert alexander_polynomial(P) == poly(1, -3, 1)
    xs = sorted(a.x for a in locus_41.alexander_points)
    assert len(xs) == 2
    assert abs(xs[1] - 0.481212) < 1e-6
    assert abs(xs[0] + 0.481212) < 1e-6
    assert {j for (_, j) in locus_41.components} == {0}
    slopes = [s for arc in non_axis_slopes(locus_41.component(0, 0)) for s in arc]
    assert slopes
    for s in slopes:
        assert near((-4.0, 4.0), s, 0.1), s
    assert near(slopes, -4.0, 0.1) and near(slopes, 4.0, 0.1)
    report = orderable_slopes(locus_41)
    assert len(report.intervals) == 1
    iv = report.intervals[0]
    assert abs(iv.lo + 4.0) < 0.1 and abs(iv.hi - 4.0) < 0.1
    assert not iv.lo_closed and not iv.hi_closed
    check_budget("4_1", start)


def test_criterion_4_5_2(locus_52):
    start = time.perf_counter()
    P = knot_52()
    assert alexander_polynomial(P) == poly(2, -3, 2)
    assert locus_52.alexander_points == ()
    slopes = [s for arc in non_axis_slopes(locus_52.component(0, 0)) for s in arc]
    assert slopes
    for s in slopes:
        assert near((-4.0, 0.0), s, 0.1), s
    assert near(slopes, -4.0, 0.1) and near(slopes, 0.0, 0.1)
    report = orderable_slopes(locus_52)
    assert len(report.intervals) == 1
    iv = report.intervals[0]
    assert abs(iv.lo) < 0.1 and iv.lo_closed
    assert abs(iv.hi - 4.0) < 0.1 and not iv.hi_closed
    for j in (1, -1):
        arcs = locus_52.component(0, j)
        assert arcs, j
        side = [s for arc in non_axis_slopes(arcs) for s in arc]
        assert near(side, -10.0, 0.2), (j, side)
    assert max(abs(j) for (_, j) in locus_52.components) == 1
    check_budget("5_2", start)


def test_criterion_5_7_3(locus_73):
    start = time.perf_counter()
    P = knot_73()
    assert alexander_polynomial(P) == poly(2, -3, 3, -3, 2)
    slopes14 = [s for j in (1, 3) for arc in non_axis_slopes(locus_73.component(0, j)) for s in arc]
    assert near(slopes14, 14.0, 0.3), slopes14
    h00 = non_axis_slopes(locus_73.component(0, 0))
    assert any(near(s, 0.0, 0.15) and near(s, 6.0, 0.15) for s in h00), h00
    check_budget("7_3", start)


def test_criterion_6_v2362(v2362_presentation, locus_v2362):
    start = time.perf_counter()
    assert alexander_polynomial(v2362_presentation) == poly(6, -13, 6)
    target = 0.5 * math.log(1.5)
    xs = sorted(a.x for a in locus_v2362.alexander_points)
    assert xs == pytest.approx([-target, target], abs=1e-9)
    checks = [c for c in alexander_arc_check(locus_v2362) if abs(c.x - target) < 1e-9]
    assert checks
    for c in checks:
        assert c.found
        assert c.tangent is False
    check_budget(v2362_presentation.name, start)


@pytest.mark.parametrize("name", ["4_1", "5_2", "7_3", "v2362"])
def test_criterion_7_structure(request, name):
    start = time.perf_counter()
    fixture = {"4_1": "locus_41", "5_2": "locus_52", "7_3": "locus_73", "v2362": "locus_v2362"}[name]
    locus = request.getfixturevalue(fixture)
    report = validate_locus(locus)
    for check in ("dinfty_symmetry", "axis_present", "parabolic_at_origin", "milnor_wood"):
        assert report[check]["passed"], (check, report[check])
    assert report["passed"]
    P = {"4_1": knot_41, "5_2": knot_52, "7_3": knot_73}.get(name)
    P = P() if P else request.getfixturevalue("v2362_presentation")
    dense = build_locus(P, BuildOptions(seeds=2 * SEEDS))
    assert set(dense.components) <= set(locus.components), \
        sorted(set(dense.components) - set(locus.components))
    elapsed = time.perf_counter() - start
    assert elapsed < REGRESSION_BUDGET, f"{name}: {elapsed:.1f} s"


def test_criterion_8_elliptic_side(locus_52):
    start = time.perf_counter()
    assert locus_52.el_arcs
    for r in range(-8, 1):
        hits = el_line_hits(locus_52, r)
        assert any(h.verified for h in hits), r
    report = orderable_slopes(locus_52, (-8, 0))
    assert sorted(report.el_hits) == list(range(-8, 1))
    assert all(report.el_hits.values())
    check_budget("5_2", start)
