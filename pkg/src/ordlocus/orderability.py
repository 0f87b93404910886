"""Orderable Dehn fillings read off from a locus.

A filling slope ``r`` is certified when the line ``y = -r x`` meets a
non-axis arc of ``H_{0,0}`` away from the origin.  Hits are refined on the
real curve, not on the polyline, and can be re-verified against the
representation: the lifted image of ``lambda^k mu^j`` (``r = j/k``) must have
``ev = (0, 0)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .locus import Arc, Locus
from .presentations import Presentation, parse_presentation
from .psl2r import ConvergenceFailure, InvalidInput, disk_to_real, trans
from .tracer import (
    Chart,
    ChartKind,
    Constraint,
    RelatorSystem,
    TraceError,
    _ev_at,
    _lifted_word,
    arc_point,
    newton_correct,
    rep_point,
    tangent,
)

log = logging.getLogger(__name__)

HIT_TOL = 1e-9
ORIGIN_TOL = 1e-6
NEAR_PARABOLIC = 1e-2
ON_ARC_TOL = 1e-4
TANGENT_TOL = 1e-2
ZERO_LIMIT_TOL = 0.1

CAVEATS = (
    "conclusions assume M(r) is irreducible, which holds for all but at most three slopes",
    "the computed locus is a lower bound: arcs missed by seeding cannot contribute",
    f"hits are refined to |y + r x| < {HIT_TOL:g} and checked by ev(lambda^k mu^j) = (0, 0) within 1e-6",
)

ZERO_FILLING_NOTE = (
    "M(0) has first Betti number 1 and is orderable when irreducible; cited, not computed"
)


@dataclass(frozen=True)
class SlopeHit:
    r: float
    x: float
    y: float
    arc: str
    quality: str
    chart: tuple[str, float, float]
    translate: int = 0
    residual: float = 0.0
    verified: bool | None = None

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "x": self.x,
            "y": self.y,
            "arc": self.arc,
            "quality": self.quality,
            "chart": list(self.chart),
            "translate": self.translate,
            "residual": self.residual,
            "verified": self.verified,
        }


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool
    arcs: tuple[str, ...] = ()
    limits: tuple[float, ...] = ()
    notes: tuple[str, ...] = ()

    def __contains__(self, r: float) -> bool:
        above = r > self.lo or (self.lo_closed and r == self.lo)
        below = r < self.hi or (self.hi_closed and r == self.hi)
        return above and below

    def text(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:.4f}, {self.hi:.4f}{right}"

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
            "arcs": list(self.arcs),
            "limits": list(self.limits),
            "notes": list(self.notes),
        }


@dataclass
class OrderableReport:
    name: str
    intervals: list[Interval]
    caveats: tuple[str, ...] = CAVEATS
    zero_filling: str = "asserted"
    zero_filling_note: str = ZERO_FILLING_NOTE
    el_hits: dict = field(default_factory=dict)

    def contains(self, r: float) -> bool:
        return any(r in iv for iv in self.intervals)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "intervals": [iv.to_dict() for iv in self.intervals],
            "caveats": list(self.caveats),
            "zero_filling": {"status": self.zero_filling, "note": self.zero_filling_note},
            "el_hits": {str(r): [h.to_dict() for h in hits] for r, hits in sorted(self.el_hits.items())},
        }

    def to_text(self) -> str:
        lines = [f"orderable fillings of {self.name or 'M'} from H_{{0,0}}:"]
        if not self.intervals:
            lines.append("  no intervals (no non-axis arc in H_{0,0})")
        for iv in self.intervals:
            extra = f"  arcs {', '.join(iv.arcs)}" if iv.arcs else ""
            lines.append(f"  {iv.text()}{extra}")
            for note in iv.notes:
                lines.append(f"    note: {note}")
        lines.append(f"zero filling: {self.zero_filling} ({self.zero_filling_note})")
        if self.el_hits:
            hit = sorted(r for r, h in self.el_hits.items() if h)
            miss = sorted(r for r, h in self.el_hits.items() if not h)
            lines.append(f"EL-based hits for integer slopes: {hit}")
            if miss:
                lines.append(f"EL-based misses: {miss}")
        lines.append("caveats:")
        lines.extend(f"  - {c}" for c in self.caveats)
        return "\n".join(lines) + "\n"


# --- refinement on the real curve ---


def _presentation(locus: Locus) -> Presentation:
    if not locus.presentation:
        raise ValueError("locus carries no presentation text")
    return parse_presentation(locus.presentation)


def _chart_kind(arc: Arc) -> ChartKind:
    return ChartKind.UNIT_RILEY if arc.kind == "elliptic-EL" else ChartKind.REAL_RILEY


def _point_chart(arc: Arc, k: int) -> Chart:
    p = arc.points[k]
    return Chart(_chart_kind(arc), p.s, p.u)


def _oriented(P, chart, reference) -> tuple[float, float]:
    """``(x, y)`` at ``chart`` in the reflection image that ``reference`` belongs to."""
    ap = arc_point(P, chart)
    sign = -1.0 if ap.x * reference.x + ap.y * reference.y < 0 else 1.0
    return sign * ap.x, sign * ap.y


def _curve_point(P, arc: Arc, k: int, tau: float):
    c0 = np.array(_point_chart(arc, k).coords)
    c1 = np.array(_point_chart(arc, k + 1).coords)
    d = c1 - c0
    pred = c0 + tau * d
    kind = _chart_kind(arc)
    guess = Chart.from_coords(kind, float(pred[0]), float(pred[1]))
    chart = newton_correct(P, guess, Constraint(tuple(d), tuple(pred)))
    return chart


def _refine(P, arc: Arc, k: int, g, translate: float):
    """Bisect ``g(x + translate, y)`` on the curve between samples ``k`` and ``k + 1``."""
    ref = arc.points[k]
    lo, hi = 0.0, 1.0
    a = arc.points[k]
    glo = g(a.x + translate, a.y)
    best = None
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        chart = _curve_point(P, arc, k, mid)
        x, y = _oriented(P, chart, ref)
        gm = g(x + translate, y)
        best = (chart, x, y, gm)
        if abs(gm) < HIT_TOL * max(1.0, abs(x + translate)):
            return best
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return best


def _quality(arc: Arc, k: int, x: float, y: float) -> str:
    if math.hypot(x, y) < NEAR_PARABOLIC:
        return "near-parabolic"
    flagged = arc.points[k].flags | arc.points[min(k + 1, len(arc.points) - 1)].flags
    if "beyond-window" in flagged:
        return "near-window"
    return "interior"


def _arc_hits(P, arc: Arc, r: float, translate: int = 0) -> list[SlopeHit]:
    def g(x, y):
        return y + r * x

    xy = arc.xy
    vals = xy[:, 1] + r * (xy[:, 0] + translate)
    scale = np.maximum(1.0, np.abs(xy[:, 0] + translate))
    hits = []
    kind = _chart_kind(arc).value
    last = len(vals) - 1
    for k in range(len(vals)):
        x, y = float(xy[k, 0]), float(xy[k, 1])
        if abs(vals[k]) < HIT_TOL * scale[k]:
            if math.hypot(x + translate, y) < ORIGIN_TOL or arc.points[k].kind == "parabolic":
                continue
            quality = _quality(arc, k, x + translate, y)
            if k in (0, last) and arc.ends[0 if k == 0 else 1] == "reducible-junction":
                quality = "reducible-junction"
            p = arc.points[k]
            hits.append(SlopeHit(r, x + translate, y, arc.id, quality, (kind, p.s, p.u),
                                 translate, float(vals[k])))
            continue
        if k == last or abs(vals[k + 1]) < HIT_TOL * scale[k + 1]:
            continue
        if (vals[k] > 0) == (vals[k + 1] > 0):
            continue
        try:
            found = _refine(P, arc, k, g, translate)
        except (TraceError, InvalidInput, ConvergenceFailure, ValueError, OverflowError) as exc:
            log.debug("refinement failed on %s segment %d: %s", arc.id, k, exc)
            found = None
        if found is None:
            # fall back to the chord
            t = vals[k] / (vals[k] - vals[k + 1])
            x = float(xy[k, 0] + t * (xy[k + 1, 0] - xy[k, 0]))
            y = float(xy[k, 1] + t * (xy[k + 1, 1] - xy[k, 1]))
            chart = _point_chart(arc, k)
            res = y + r * (x + translate)
        else:
            chart, x, y, res = found
        if math.hypot(x + translate, y) < ORIGIN_TOL:
            continue
        hits.append(SlopeHit(r, x + translate, y, arc.id, _quality(arc, k, x + translate, y),
                             (kind, chart.s, chart.u), translate, float(res)))
    return hits


def _hyperbolic_arcs(locus: Locus) -> list[Arc]:
    return [a for a in locus.component(0, 0) if not a.is_axis and len(a.points) > 1]


def line_hits(locus: Locus, r, verify: bool = True) -> list[SlopeHit]:
    """Intersections of ``y = -r x`` with the non-axis arcs of ``H_{0,0}``.

    The origin and parabolic points are excluded.  The axis is skipped: for
    ``r != 0`` it meets the line only at the origin.
    """
    P = _presentation(locus) if locus.presentation else None
    rf = float(r)
    hits = []
    for arc in _hyperbolic_arcs(locus):
        if P is None:
            continue
        hits.extend(_arc_hits(P, arc, rf))
    if verify and P is not None:
        hits = [_verified(P, h, r) for h in hits]
    return hits


# --- verification ---


def _as_fraction(r) -> Fraction | None:
    if isinstance(r, (int, Fraction)):
        return Fraction(r)
    f = Fraction(r).limit_denominator(1000)
    return f if abs(float(f) - float(r)) < 1e-12 else None


def _slope_word(P: Presentation, frac: Fraction):
    j, k = frac.numerator, frac.denominator
    return P.longitude ** k * P.meridian ** j, j, k


def verify_hit(P: Presentation, hit: SlopeHit, r=None) -> bool | None:
    """Re-check the hit on the representation.  ``None`` for irrational slopes."""
    frac = _as_fraction(hit.r if r is None else r)
    if frac is None:
        return None
    word, j, _ = _slope_word(P, frac)
    kind = ChartKind(hit.chart[0])
    chart = Chart(kind, hit.chart[1], hit.chart[2])
    rp = rep_point(P, chart)
    g = _lifted_word(word, (rp.liftA, rp.liftB))
    if rp.elliptic:
        sign = -1.0 if rp.i * (hit.x - hit.translate) + rp.j * hit.y < 0 else 1.0
        value = sign * trans(g) + j * hit.translate
        return abs(value) < 1e-6
    if (int(rp.i), int(rp.j)) != (0, 0):
        return False
    if rp.v is None:
        return abs(trans(g)) < 1e-6
    first, level = _ev_at(g, disk_to_real(g.project()), rp.v)
    return abs(first) < 1e-6 and level == 0


def _verified(P, hit: SlopeHit, r) -> SlopeHit:
    try:
        ok = verify_hit(P, hit, r)
    except (TraceError, InvalidInput, ConvergenceFailure, ValueError, OverflowError):
        ok = False
    return SlopeHit(hit.r, hit.x, hit.y, hit.arc, hit.quality, hit.chart, hit.translate,
                    hit.residual, ok)


# --- intervals ---


def _arc_range(arc: Arc):
    """``(lo, hi, lo_closed, hi_closed, limits)`` of ``-y/x`` along the arc."""
    xy = arc.xy
    keep = np.hypot(xy[:, 0], xy[:, 1]) > ORIGIN_TOL
    idx = np.nonzero(keep)[0]
    if len(idx) == 0:
        return None
    r = -xy[idx, 1] / xy[idx, 0]
    kmin, kmax = int(np.argmin(r)), int(np.argmax(r))
    last = len(idx) - 1
    limits = []
    for a in arc.asymptotes:
        if a.slope is not None and math.isfinite(a.slope):
            limits.append(-a.slope)

    def closed(k):
        # extremes at an arc end are limits (window exit or parabolic origin)
        return 0 < k < last

    return float(r[kmin]), float(r[kmax]), closed(kmin), closed(kmax), limits


def _merge(ranges) -> list[Interval]:
    ranges = sorted(ranges, key=lambda t: (t.lo, not t.lo_closed))
    out: list[Interval] = []
    for iv in ranges:
        if out:
            cur = out[-1]
            touching = iv.lo < cur.hi or (iv.lo == cur.hi and (iv.lo_closed or cur.hi_closed))
            if touching:
                if iv.hi > cur.hi or (iv.hi == cur.hi and iv.hi_closed):
                    hi, hi_closed = iv.hi, iv.hi_closed or (iv.hi == cur.hi and cur.hi_closed)
                else:
                    hi, hi_closed = cur.hi, cur.hi_closed
                lo_closed = cur.lo_closed or (iv.lo == cur.lo and iv.lo_closed)
                out[-1] = Interval(cur.lo, hi, lo_closed, hi_closed,
                                   tuple(sorted(set(cur.arcs) | set(iv.arcs))),
                                   tuple(sorted(set(cur.limits) | set(iv.limits))),
                                   cur.notes + iv.notes)
                continue
        out.append(iv)
    return out


def _close_at_zero(intervals: list[Interval]) -> list[Interval]:
    """Attach the cited ``M(0)`` case to an interval whose open end tends to 0."""
    out = []
    for iv in intervals:
        lim0 = any(abs(v) < ZERO_LIMIT_TOL for v in iv.limits)
        if lim0 and not iv.lo_closed and 0 <= iv.lo < ZERO_LIMIT_TOL:
            iv = Interval(0.0, iv.hi, True, iv.hi_closed, iv.arcs, iv.limits,
                          iv.notes + ("closed at 0 by the cited M(0) case; the arc tends to slope 0",))
        elif lim0 and not iv.hi_closed and -ZERO_LIMIT_TOL < iv.hi <= 0:
            iv = Interval(iv.lo, 0.0, iv.lo_closed, True, iv.arcs, iv.limits,
                          iv.notes + ("closed at 0 by the cited M(0) case; the arc tends to slope 0",))
        out.append(iv)
    return _merge(out)


def orderable_slopes(locus: Locus, el_range: tuple[int, int] | None = None) -> OrderableReport:
    """Intervals of ``r`` realized as ``-y/x`` along non-axis ``H_{0,0}`` arcs.

    Endpoints reached only at arc ends (window exits, parabolic origin) are
    open; ``limits`` records the asymptotic values ``-slope``.  With
    ``el_range = (lo, hi)`` the integer slopes in that range are also tested
    against the elliptic-side arcs.
    """
    ranges = []
    for arc in _hyperbolic_arcs(locus):
        got = _arc_range(arc)
        if got is None:
            continue
        lo, hi, lc, hc, limits = got
        ranges.append(Interval(lo, hi, lc, hc, (arc.id,), tuple(limits)))
    intervals = _close_at_zero(_merge(ranges))
    report = OrderableReport(locus.name, intervals)
    if el_range is not None:
        report.el_hits = {r: el_line_hits(locus, r) for r in range(el_range[0], el_range[1] + 1)}
    return report


# --- elliptic side ---


def _translates(arc: Arc, r: float, ymax: float) -> range:
    xy = arc.xy
    if r == 0:
        return range(0, 1)
    reach = int(math.ceil(ymax / abs(r))) + 2
    lo = int(math.floor(-reach - xy[:, 0].max()))
    hi = int(math.ceil(reach - xy[:, 0].min()))
    return range(lo, hi + 1)


def el_line_hits(locus: Locus, r, verify: bool = True) -> list[SlopeHit]:
    """Hits of ``y = -r x`` on the elliptic-side arcs and their integer ``x``-translates.

    Shifting the lift of the meridian by a central element moves ``x`` by an
    integer and leaves ``y`` alone, so every translate belongs to the locus.
    """
    if not locus.el_arcs:
        return []
    P = _presentation(locus)
    rf = float(r)
    ymax = max(float(np.abs(a.xy[:, 1]).max()) for a in locus.el_arcs)
    hits = []
    seen = set()
    for arc in locus.el_arcs:
        if len(arc.points) < 2:
            continue
        for n in _translates(arc, rf, ymax):
            for h in _arc_hits(P, arc, rf, n):
                key = (round(h.x, 6), round(h.y, 6))
                if key not in seen:
                    seen.add(key)
                    hits.append(h)
    if verify:
        hits = [_verified(P, h, r) for h in hits]
    return hits


# --- Alexander points ---


@dataclass(frozen=True)
class AlexanderCheck:
    x: float
    multiplicity: int
    found: bool
    distance: float
    arc: str | None
    slope: float | None
    tangent: bool | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _tangent_slope(P, hit: SlopeHit) -> float | None:
    chart = Chart(ChartKind(hit.chart[0]), hit.chart[1], hit.chart[2])
    system = RelatorSystem(P, chart.kind)
    c = np.array(chart.coords)
    t = tangent(system, c)
    h = 1e-5
    pts = []
    for sgn in (-1.0, 1.0):
        pred = c + sgn * h * t
        guess = Chart.from_coords(chart.kind, float(pred[0]), float(pred[1]))
        corrected = newton_correct(P, guess, Constraint(tuple(t), tuple(pred)))
        ap = arc_point(P, corrected)
        pts.append((ap.x, ap.y))
    dx = pts[1][0] - pts[0][0]
    dy = pts[1][1] - pts[0][1]
    if dx == 0:
        return math.inf
    return dy / dx


def alexander_arc_check(locus: Locus) -> list[AlexanderCheck]:
    """Does a non-axis arc pass through each Alexander point, and at what slope?"""
    P = _presentation(locus)
    out = []
    arcs = _hyperbolic_arcs(locus)
    for ap in locus.alexander_points:
        best = None
        for arc in arcs:
            for hit in _arc_hits(P, arc, 0.0):
                d = abs(hit.x - ap.x) + abs(hit.y)
                if best is None or d < best[0]:
                    best = (d, hit, arc)
        if best is None or best[0] > ON_ARC_TOL:
            out.append(AlexanderCheck(ap.x, ap.multiplicity, False,
                                      math.inf if best is None else best[0],
                                      None, None, None))
            continue
        d, hit, arc = best
        try:
            slope = _tangent_slope(P, hit)
        except (TraceError, InvalidInput, ConvergenceFailure, ValueError):
            slope = None
        tangent_flag = None if slope is None else abs(slope) < TANGENT_TOL
        out.append(AlexanderCheck(ap.x, ap.multiplicity, True, d, arc.id, slope, tangent_flag))
    return out
