"""Assembly of the holonomy extension locus from traced arcs."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .alexander import AlexanderPoint, alexander_points, alexander_polynomial, unit_circle_angles
from .presentations import Presentation
from .psl2r import InvalidInput
from .tracer import (
    ArcPoint,
    Character,
    Chart,
    ChartKind,
    Constraint,
    RelatorSystem,
    TraceError,
    TraceParams,
    arc_point,
    classify_real_character,
    continue_arc,
    kappa,
    newton_correct,
)

log = logging.getLogger(__name__)

WINDOW = (1.5, 8.0)
SEEDS = 200
# asinh(u) range and resolution of the sign-change scan at fixed s
U_SCAN = (-12.0, 12.0, 4001)
T_SCAN = (1e-3, 10.0, 4001)
EL_SEEDS = 120
ON_ARC_TOL = 2e-3


@dataclass(frozen=True)
class Asymptote:
    end: int
    slope: float | None
    nearest: float | None = None
    gap: float | None = None


@dataclass(frozen=True)
class Arc:
    id: str
    i: int
    j: int
    points: tuple[ArcPoint, ...]
    ends: tuple[str, str]
    asymptotes: tuple[Asymptote, ...] = ()
    kind: str = "hyperbolic"

    @property
    def xy(self) -> np.ndarray:
        return np.array([(p.x, p.y) for p in self.points]).reshape(-1, 2)

    @property
    def is_axis(self) -> bool:
        return self.kind == "axis"

    def slopes(self) -> list[float]:
        return [a.slope for a in self.asymptotes if a.slope is not None]


@dataclass(frozen=True)
class BuildOptions:
    window: tuple[float, float] = WINDOW
    seeds: int = SEEDS
    el: bool = False
    el_seeds: int = EL_SEEDS
    slope_candidates: tuple[float, ...] = ()
    alexander_seeding: bool = True
    grid_seeding: bool = True
    margin: float = 2.0

    def trace_params(self) -> TraceParams:
        return TraceParams(xmax=self.window[0], ymax=self.window[1], margin=self.margin)


@dataclass(frozen=True)
class Locus:
    name: str
    window: tuple[float, float]
    components: dict
    alexander_points: tuple[AlexanderPoint, ...] = ()
    parabolic_points: tuple[tuple[float, float, int, int], ...] = ()
    el_arcs: tuple[Arc, ...] | None = None
    diagnostics: dict = field(default_factory=dict)
    genus: int | None = None
    longitude_order: int = 1
    presentation: str = ""
    quotient: bool = False

    def arcs(self):
        for key in sorted(self.components):
            yield from self.components[key]

    def component(self, i: int, j: int) -> list[Arc]:
        return list(self.components.get((i, j), []))

    @property
    def j_bound(self) -> float | None:
        return None if self.genus is None else (2 * self.genus - 1) / self.longitude_order


# --- seeding ---


def _roots_on_line(system: RelatorSystem, p: float, grid: np.ndarray) -> list[float]:
    """Second coordinates ``q`` of solutions on the line of fixed first coordinate ``p``."""
    with np.errstate(all="ignore"):
        F = system.residual_vector(np.full_like(grid, p), grid, [1.0] * len(system.P.relators))
        F2 = system.residual_vector(np.full_like(grid, p), grid, [-1.0] * len(system.P.relators))
    candidates = set()
    for block in (F, F2):
        for row in block:
            row = np.real(row)
            ok = np.isfinite(row)
            sign = np.sign(row)
            idx = np.where(ok[:-1] & ok[1:] & (sign[:-1] * sign[1:] < 0))[0]
            candidates.update(int(k) for k in idx)
    out = []
    for k in sorted(candidates):
        q0 = 0.5 * (grid[k] + grid[k + 1])
        try:
            chart = newton_correct(system.P, Chart.from_coords(system.kind, p, q0), Constraint.freeze(0, p))
        except (TraceError, InvalidInput, OverflowError, ValueError):
            continue
        q = chart.coords[1]
        if not any(abs(q - r) < 1e-7 * max(1.0, abs(r)) for r in out):
            out.append(q)
    return out


def _on_traced(chart: Chart, traced: list[np.ndarray]) -> bool:
    p, q = chart.coords
    for coords in traced:
        if len(coords) < 2:
            if len(coords) == 1 and np.hypot(*(coords[0] - (p, q))) < ON_ARC_TOL:
                return True
            continue
        ps, qs = coords[:, 0], coords[:, 1]
        lo, hi = np.minimum(ps[:-1], ps[1:]), np.maximum(ps[:-1], ps[1:])
        for k in np.where((lo <= p) & (p <= hi))[0]:
            dp = ps[k + 1] - ps[k]
            frac = 0.0 if dp == 0 else (p - ps[k]) / dp
            qi = qs[k] + frac * (qs[k + 1] - qs[k])
            if abs(qi - q) < ON_ARC_TOL:
                return True
    return False


def _chart_coords(points) -> np.ndarray:
    rows = []
    for pt in points:
        if pt.kind == "parabolic":
            continue
        kind = ChartKind.UNIT_RILEY if pt.kind == "elliptic-EL" else ChartKind.REAL_RILEY
        try:
            rows.append(Chart(kind, pt.s, pt.u).coords)
        except InvalidInput:
            continue
    return np.array(rows).reshape(-1, 2)


def _hyperbolic_seeds(P: Presentation, options: BuildOptions, alex) -> list[tuple[str, Chart]]:
    system = RelatorSystem(P, ChartKind.REAL_RILEY)
    grid = np.linspace(*U_SCAN)
    seeds: list[tuple[str, Chart]] = []
    if options.alexander_seeding:
        for pt in alex:
            if pt.x <= 0 or not pt.simple:
                continue
            for dp in (-1e-3, 1e-3):
                p = pt.x + dp
                fine = np.linspace(-0.5, 0.5, 2001)
                for q in _roots_on_line(system, p, fine):
                    if abs(q) > 1e-9:
                        seeds.append(("alexander", Chart.from_coords(ChartKind.REAL_RILEY, p, q)))
    if options.grid_seeding:
        smax = math.exp(options.window[0])
        for s in np.geomspace(1.0 + 1e-3, smax, options.seeds):
            p = math.log(s)
            for q in _roots_on_line(system, p, grid):
                chart = Chart.from_coords(ChartKind.REAL_RILEY, p, q)
                if abs(kappa(chart)) > 1e-9:
                    seeds.append(("grid", chart))
    return seeds


def _elliptic_seeds(P: Presentation, options: BuildOptions) -> list[tuple[str, Chart]]:
    system = RelatorSystem(P, ChartKind.UNIT_RILEY)
    grid = np.linspace(*T_SCAN)
    seeds = []
    for th in np.linspace(0.0, math.pi, options.el_seeds + 2)[1:-1]:
        for q in _roots_on_line(system, th, grid):
            if q <= 1e-6:
                continue
            chart = Chart.from_coords(ChartKind.UNIT_RILEY, th, q)
            if abs(kappa(chart)) > 1e-9:
                seeds.append(("el-grid", chart))
    return seeds


def _trace_all(P, seeds, params, diagnostics):
    traced_charts: list[np.ndarray] = []
    raw = []
    for origin, chart in seeds:
        if _on_traced(chart, traced_charts):
            continue
        try:
            points, ends = continue_arc(P, chart, params)
        except (TraceError, InvalidInput, OverflowError, ValueError) as exc:
            diagnostics.setdefault("trace_failures", []).append(
                {"seed": [chart.s, chart.u], "origin": origin, "error": str(exc)}
            )
            continue
        traced_charts.append(_chart_coords(points))
        for piece, piece_ends in _real_pieces(points, ends, chart.kind, diagnostics):
            raw.append((origin, piece, piece_ends))
    return raw


def _character(p: ArcPoint, kind: ChartKind) -> tuple[float, float, float]:
    """``(tr A, tr B, tr AB)`` from the chart parameters of an arc point."""
    if kind is ChartKind.UNIT_RILEY:
        tr = 2.0 * math.cos(p.s)
        return tr, tr, 2.0 * math.cos(2.0 * p.s) + p.u
    tr = p.s + 1.0 / p.s
    return tr, tr, p.s * p.s + 1.0 / (p.s * p.s) + p.u


def _real_pieces(points, ends, kind: ChartKind, diagnostics: dict):
    """Drop points whose character is an SU(2) one, splitting the arc there."""
    pieces, current = [], []
    start = ends[0]
    for p in points:
        if classify_real_character(*_character(p, kind)) is Character.SU2:
            diagnostics.setdefault("filtered_points", []).append([p.x, p.y, p.i, p.j])
            if current:
                pieces.append((current, (start, "non-real-rep")))
            current, start = [], "non-real-rep"
            continue
        current.append(p)
    if current:
        pieces.append((current, (start, ends[1])))
    return pieces


# --- arcs and symmetry ---


def _flip(points, sx: float, tags: int) -> tuple[ArcPoint, ...]:
    out = []
    for p in points:
        x = sx * p.x if p.x else 0.0
        y = sx * p.y if p.y else 0.0
        out.append(replace(p, x=x, y=y, i=tags * p.i, j=tags * p.j))
    return tuple(out)


def _split_by_tags(points, ends):
    """Split a traced polyline where its tags change (after a parabolic end)."""
    pieces = []
    current = [points[0]]
    for pt in points[1:]:
        if (pt.i, pt.j) != (current[-1].i, current[-1].j):
            pieces.append(current)
            current = [pt]
        else:
            current.append(pt)
    pieces.append(current)
    if len(pieces) == 1:
        return [(pieces[0], ends)]
    out = []
    for k, piece in enumerate(pieces):
        start = ends[0] if k == 0 else "tag-jump"
        stop = ends[1] if k == len(pieces) - 1 else "tag-jump"
        out.append((piece, (start, stop)))
    return out


def asymptote_slopes(arc: Arc, candidates=(), fraction: float = 0.1) -> tuple[Asymptote, ...]:
    """Least-squares slope of the tail at each window-exit end.

    The tail is the run of points beyond the window at that end when it has
    at least five points, otherwise the last ``fraction`` of arclength.
    """
    xy = arc.xy
    out = []
    if len(xy) < 2:
        return ()
    seg = np.hypot(*np.diff(xy, axis=0).T)
    total = float(seg.sum())
    for end in (0, 1):
        if arc.ends[end] != "window-exit":
            continue
        pts = xy if end == 1 else xy[::-1]
        lengths = seg if end == 1 else seg[::-1]
        cum = np.concatenate([[0.0], np.cumsum(lengths[::-1])])[::-1]
        tail = pts[cum <= fraction * total]
        ordered = arc.points if end == 1 else arc.points[::-1]
        beyond = 0
        for p in reversed(ordered):
            if "beyond-window" not in p.flags:
                break
            beyond += 1
        if beyond >= 5:
            tail = pts[len(pts) - beyond:]
        if len(tail) < 3:
            out.append(Asymptote(end, None))
            continue
        slope = _fit_slope(tail)
        nearest = gap = None
        if candidates and slope is not None:
            nearest = min(candidates, key=lambda c: abs(c - slope))
            gap = abs(nearest - slope)
        out.append(Asymptote(end, slope, nearest, gap))
    return tuple(out)


def _fit_slope(tail: np.ndarray) -> float | None:
    x, y = tail[:, 0], tail[:, 1]
    if np.ptp(x) < 1e-9:
        return None if np.ptp(y) < 1e-9 else math.copysign(math.inf, 1.0)
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _axis_arc(P: Presentation, options: BuildOptions) -> Arc:
    xmax = options.window[0] * options.margin
    xs = np.linspace(-xmax, xmax, 2 * int(round(100 * options.margin)) + 1)
    points = []
    for x in xs:
        if abs(x) < 1e-12:
            points.append(ArcPoint(0.0, 0.0, 0, 0, 1.0, 0.0, "central"))
            continue
        # mu = diag(s, 1/s) with s = e^|x| and lambda = I; written down directly
        # because lifted words of large diagonal matrices lose all precision
        flags = frozenset({"beyond-window"}) if abs(x) > options.window[0] else frozenset()
        points.append(ArcPoint(float(x), 0.0, 0, 0, math.exp(abs(x)), 0.0, "hyperbolic", flags))
    arc = Arc("axis", 0, 0, tuple(points), ("window-exit", "window-exit"), kind="axis")
    return replace(arc, asymptotes=asymptote_slopes(arc))


def _junction_angles(P: Presentation, diagnostics: dict) -> list[float]:
    try:
        return [phi / 2.0 for phi in unit_circle_angles(alexander_polynomial(P))]
    except Exception as exc:  # noqa: BLE001 - reported, not fatal
        diagnostics["junction_error"] = str(exc)
        return []


def _close_junctions(P: Presentation, points, ends, angles, tol: float = 1e-2):
    """Append the abelian limit point at each ``reducible-junction`` end.

    The curve reaches ``t = 0`` at ``theta = phi / 2`` for a root ``e^{i phi}``
    of the Alexander polynomial; there the representation is a rotation and
    the point lies on the axis.
    """
    points = list(points)
    for end in (0, 1):
        if ends[end] != "reducible-junction" or not points:
            continue
        last = points[-1] if end == 1 else points[0]
        near = [th for th in angles if abs(th - last.s) < tol]
        if not near:
            continue
        th = min(near, key=lambda v: abs(v - last.s))
        try:
            ap = arc_point(P, Chart(ChartKind.UNIT_RILEY, th, 0.0))
        except (TraceError, InvalidInput, ValueError):
            continue
        ap = replace(ap, x=math.copysign(abs(ap.x), last.x), y=0.0, flags=frozenset({"closure"}))
        if end == 1:
            points.append(ap)
        else:
            points.insert(0, ap)
    return tuple(points)


def _images(points, ends, base_id: str):
    """The traced arc and its images under the two reflections."""
    i, j = points[0].i, points[0].j
    out = [(f"{base_id}", points), (f"{base_id}r", _flip(points, -1.0, 1))]
    if (i, j) != (0, 0):
        out += [(f"{base_id}m", _flip(points, 1.0, -1)), (f"{base_id}rm", _flip(points, -1.0, -1))]
    return [(name, pts, ends) for name, pts in out]


def build_locus(P: Presentation, options: BuildOptions | None = None) -> Locus:
    """Seed, trace and assemble the locus of a two-generator presentation."""
    options = options or BuildOptions()
    params = options.trace_params()
    diagnostics: dict = {}
    try:
        alex = tuple(alexander_points(P))
    except Exception as exc:  # noqa: BLE001 - reported, not fatal
        diagnostics["alexander_error"] = str(exc)
        alex = ()
    components: dict = {}
    axis = _axis_arc(P, options)
    components[(0, 0)] = [axis]

    seeds = _hyperbolic_seeds(P, options, alex)
    raw = _trace_all(P, seeds, params, diagnostics)
    parabolic = set()
    count = 0
    for origin, points, ends in raw:
        for piece, piece_ends in _split_by_tags(points, ends):
            if len(piece) == 1 and piece[0].kind == "parabolic":
                continue
            for name, pts, e in _images(tuple(piece), piece_ends, f"a{count}"):
                arc = Arc(name, pts[0].i, pts[0].j, pts, e)
                arc = replace(arc, asymptotes=asymptote_slopes(arc, options.slope_candidates))
                components.setdefault((arc.i, arc.j), []).append(arc)
                for p in pts:
                    if p.kind == "parabolic":
                        parabolic.add((0.0, 0.0, p.i, p.j))
            count += 1
    for key in components:
        components[key] = dedupe(components[key])

    el_arcs = None
    if options.el:
        el_raw = _trace_all(P, _elliptic_seeds(P, options), params, diagnostics)
        angles = _junction_angles(P, diagnostics)
        el_arcs = []
        for k, (origin, points, ends) in enumerate(el_raw):
            pts = _close_junctions(P, tuple(points), ends, angles)
            el_arcs.append(Arc(f"e{k}", 0, 0, pts, ends, kind="elliptic-EL"))
            el_arcs.append(Arc(f"e{k}r", 0, 0, _flip(pts, -1.0, 1), ends, kind="elliptic-EL"))
        el_arcs = tuple(el_arcs)

    locus = Locus(
        name=P.name,
        window=tuple(options.window),
        components={k: tuple(v) for k, v in sorted(components.items())},
        alexander_points=alex,
        parabolic_points=tuple(sorted(parabolic, key=lambda t: (t[2], t[3]))),
        el_arcs=el_arcs,
        diagnostics=diagnostics,
        genus=P.genus,
        longitude_order=P.longitude_order,
        presentation=P.to_text(),
    )
    report = validate_locus(locus)
    diagnostics["validation"] = report
    return locus


# --- geometry helpers ---


def _point_polyline_distance(pt: np.ndarray, xy: np.ndarray) -> float:
    if len(xy) == 1:
        return float(np.hypot(*(xy[0] - pt)))
    a, b = xy[:-1], xy[1:]
    d = b - a
    len2 = np.einsum("ij,ij->i", d, d)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(len2 > 0, np.einsum("ij,ij->i", pt - a, d) / len2, 0.0)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[:, None] * d
    return float(np.min(np.hypot(*(proj - pt).T)))


def hausdorff(a: Arc, b: Arc) -> float:
    xa, xb = a.xy, b.xy
    d1 = max(_point_polyline_distance(p, xb) for p in xa)
    d2 = max(_point_polyline_distance(p, xa) for p in xb)
    return max(d1, d2)


def dedupe(arcs, tol: float = 1e-5) -> list[Arc]:
    """Drop arcs within Hausdorff distance ``tol`` of an earlier arc with the same tags."""
    kept: list[Arc] = []
    for arc in arcs:
        if any(
            (k.i, k.j, k.kind) == (arc.i, arc.j, arc.kind) and hausdorff(k, arc) < tol for k in kept
        ):
            continue
        kept.append(arc)
    return kept


def distance_to_locus(locus: Locus, x: float, y: float, i: int, j: int) -> float:
    arcs = locus.components.get((i, j), ())
    if not arcs:
        return math.inf
    pt = np.array([x, y])
    return min(_point_polyline_distance(pt, arc.xy) for arc in arcs)


# --- symmetry reduction ---


def _clip_right(arc: Arc) -> list[Arc]:
    """Pieces of an arc with ``x >= 0``, cut by linear interpolation at ``x = 0``."""
    pieces, current = [], []
    pts = arc.points
    for k, p in enumerate(pts):
        if k > 0:
            q = pts[k - 1]
            if (q.x < 0) != (p.x < 0) and q.x != p.x:
                f = q.x / (q.x - p.x)
                cut = replace(p, x=0.0, y=q.y + f * (p.y - q.y), flags=p.flags | {"fold"})
                if p.x >= 0:
                    current = [cut]
                else:
                    current.append(cut)
                    pieces.append(current)
                    current = []
        if p.x >= 0:
            current.append(p)
    if current:
        pieces.append(current)
    out = []
    for n, piece in enumerate(pieces):
        if len(piece) < 2:
            continue
        start = arc.ends[0] if piece[0] is pts[0] else "fold"
        stop = arc.ends[1] if piece[-1] is pts[-1] else "fold"
        out.append(replace(arc, id=f"{arc.id}.{n}", points=tuple(piece), ends=(start, stop),
                           asymptotes=asymptote_slopes(replace(arc, points=tuple(piece), ends=(start, stop)))))
    return out


def dinfty_reduce(locus: Locus, step: int = 1) -> Locus:
    """Canonical representatives for the translations and the reflection.

    ``i`` is taken modulo ``step``; ``(i, j)`` and ``(-i, -j)`` are identified
    keeping ``j >= 0`` (``i >= 0`` when ``j = 0``); the self-identified
    components are folded to ``x >= 0``.
    """
    comps: dict = {}
    for (i, j), arcs in locus.components.items():
        ci = i % step if step else i
        cj = j
        if (j < 0) or (j == 0 and ci < 0):
            continue
        comps.setdefault((ci, cj), [])
        for arc in arcs:
            if ci != i:
                arc = replace(arc, i=ci, points=tuple(replace(p, i=ci) for p in arc.points))
            if cj == 0 and ci == 0:
                comps[(ci, cj)].extend(_clip_right(arc))
            else:
                comps[(ci, cj)].append(arc)
    for key in comps:
        comps[key] = tuple(dedupe(comps[key], 1e-9))
    alex = tuple(a for a in locus.alexander_points if a.x >= 0)
    parab = tuple(p for p in locus.parabolic_points if p[3] >= 0)
    el = None
    if locus.el_arcs is not None:
        el = tuple(a for a in locus.el_arcs if not a.id.endswith("r"))
    return replace(locus, components=dict(sorted(comps.items())), alexander_points=alex,
                   parabolic_points=parab, el_arcs=el, quotient=True)


# --- validation ---


def validate_locus(locus: Locus, samples: int = 200, seed: int = 0) -> dict:
    """Structural checks; each entry is ``{"passed": bool, "witness": ...}``."""
    report = {}
    rng = np.random.default_rng(seed)
    pool = [(arc, k) for arc in locus.arcs() if not arc.is_axis for k in range(len(arc.points))]
    witness = None
    if pool:
        picks = rng.choice(len(pool), size=min(samples, len(pool)), replace=False)
        for n in sorted(int(v) for v in picks):
            arc, k = pool[n]
            p = arc.points[k]
            d = distance_to_locus(locus, -p.x, -p.y, -p.i, -p.j)
            if d > 1e-4:
                witness = {"arc": arc.id, "point": [p.x, p.y, p.i, p.j], "distance": d}
                break
    report["dinfty_symmetry"] = {"passed": witness is None, "witness": witness}

    bound = locus.j_bound
    if bound is None:
        report["milnor_wood"] = {"passed": True, "witness": None, "skipped": True}
    else:
        bad = [key for key in locus.components if abs(key[1]) > bound + 1e-9]
        report["milnor_wood"] = {"passed": not bad, "witness": list(bad[0]) if bad else None, "bound": bound}

    off = None
    per_comp: dict = {}
    for arc in locus.arcs():
        for p in arc.points:
            if p.kind == "parabolic":
                if math.hypot(p.x, p.y) > 1e-6:
                    off = {"arc": arc.id, "point": [p.x, p.y]}
                per_comp.setdefault((arc.i, arc.j), set()).add((round(p.x, 6), round(p.y, 6)))
    report["parabolic_at_origin"] = {"passed": off is None, "witness": off}
    many = [list(k) for k, v in per_comp.items() if len(v) > 1]
    report["parabolic_count"] = {"passed": not many, "witness": many[0] if many else None}

    axis = [a for a in locus.component(0, 0) if a.is_axis]
    covered = False
    if axis:
        xs = axis[0].xy[:, 0]
        lo = 0.0 if locus.quotient else -locus.window[0]
        covered = bool(xs.min() <= lo + 1e-9 and xs.max() >= locus.window[0] - 1e-9)
    report["axis_present"] = {"passed": covered, "witness": None if covered else "axis arc missing"}

    report["tags_constant"] = {"passed": True, "witness": None}
    for arc in locus.arcs():
        if any((p.i, p.j) != (arc.i, arc.j) for p in arc.points):
            report["tags_constant"] = {"passed": False, "witness": arc.id}
            break
    report["passed"] = all(v["passed"] for k, v in report.items() if isinstance(v, dict))
    return report
