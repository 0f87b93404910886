"""Real curves of PSL(2,R) representations of two-generator knot groups.

Representations are written in Riley normal form

    A = [[s, 1], [0, 1/s]],   B = [[s, 0], [u, 1/s]]

with ``A``, ``B`` the images of the two generators.  Three charts are used:

* ``REAL_RILEY``: real ``s > 1`` and real ``u``; hyperbolic meridian.
* ``UNIT_RILEY``: ``s = exp(i theta)``; elliptic meridian.  For real
  characters with ``u < 0`` the pair is conjugate to the real pair
  ``A = R(theta)``, ``B = D R(theta) D^-1`` with ``D = diag(e^t, e^-t)`` and
  ``u = -4 sin(theta)^2 sinh(t)^2``.
* ``ABELIAN``: ``A = B = diag(s, 1/s)``, the horizontal axis.

Continuation works in the coordinates ``(ln s, asinh u)`` and ``(theta, t)``.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .presentations import Presentation, PresentationError, Word
from .psl2r import (
    ConvergenceFailure,
    FixedPointDatum,
    InvalidInput,
    Kind,
    LiftedElement,
    RealMatrix,
    cayley_to_disk,
    central,
    classify,
    compose,
    ev,
    fixed_data,
    lift,
    trans,
)

log = logging.getLogger(__name__)

UNIT_GAP = 1e-6
CHARACTER_TOL = 1e-9
NEWTON_TOL = 1e-10
NEWTON_MAXIT = 25
STEP_MIN = 1e-4
STEP_MAX = 0.05
_CSTEP = 1e-20
# beyond this partial-product norm the relator residual carries no information
SCALE_LIMIT = 1e8


class ChartKind(Enum):
    REAL_RILEY = "real-riley"
    UNIT_RILEY = "unit-riley"
    ABELIAN = "abelian"


class TraceError(ArithmeticError):
    """Newton failure or an inconsistent point during tracing."""


class BranchPoint(TraceError):
    """The Jacobian lost rank."""


@dataclass(frozen=True)
class Chart:
    """A point of a chart.  For ``UNIT_RILEY``, ``s`` holds the angle theta."""

    kind: ChartKind
    s: float
    u: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.s) and math.isfinite(self.u)):
            raise InvalidInput("chart parameters must be finite")
        if self.kind is ChartKind.UNIT_RILEY:
            th = self.s
            if not 0.0 < th < math.pi or min(th, math.pi - th) < UNIT_GAP:
                raise InvalidInput(f"theta={th!r} must lie in (0, pi) away from 0 and pi")
        elif abs(abs(self.s) - 1.0) <= UNIT_GAP:
            raise InvalidInput(f"|s|={abs(self.s)!r} too close to 1")

    @property
    def coords(self) -> tuple[float, float]:
        """Continuation coordinates."""
        if self.kind is ChartKind.UNIT_RILEY:
            return (self.s, _unit_t(self.s, self.u))
        return (math.log(abs(self.s)), math.asinh(self.u))

    @classmethod
    def from_coords(cls, kind: ChartKind, p: float, q: float) -> "Chart":
        if kind is ChartKind.UNIT_RILEY:
            return cls(kind, p, -4.0 * math.sin(p) ** 2 * math.sinh(q) ** 2)
        return cls(kind, math.exp(p), math.sinh(q))


def _unit_t(theta: float, u: float) -> float:
    if u > 0:
        raise InvalidInput("unit-circle chart points with u > 0 are not real representations")
    return math.asinh(math.sqrt(-u) / (2.0 * math.sin(theta)))


# --- 2x2 matrices as 4-tuples (entries may be numpy arrays or complex) ---


def _mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _norm(m):
    return math.sqrt(sum(abs(x) ** 2 for x in m))


def word_scale(word: Word, gens) -> float:
    """Largest Frobenius norm of a partial product while evaluating ``word``.

    Rounding error in the product grows like ``eps * scale**2``.
    """
    table = {}
    for g, m in enumerate(gens):
        table[(g, 1)] = m
        table[(g, -1)] = _inv(m)
    out = (1.0, 0.0, 0.0, 1.0)
    best = 1.0
    for letter in word:
        out = _mul(out, table[letter])
        best = max(best, math.hypot(*out))
    return best


def residual_tolerance(scale: float) -> float:
    return max(NEWTON_TOL, 4e-16 * scale * scale)


def _inv(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def _eval_word(word: Word, gens, ones=1.0):
    table = {}
    for g, m in enumerate(gens):
        table[(g, 1)] = m
        table[(g, -1)] = _inv(m)
    out = (ones, 0.0 * ones, 0.0 * ones, ones)
    for letter in word:
        out = _mul(out, table[letter])
    return out


def _lifted_word(word: Word, lifts) -> LiftedElement:
    table = {}
    for g, x in enumerate(lifts):
        table[(g, 1)] = x
        table[(g, -1)] = x.inverse()
    out = LiftedElement(0j, 0.0)
    for letter in word:
        out = compose(out, table[letter])
    return out


def _generators(kind: ChartKind, p, q):
    """Generator matrices from continuation coordinates (numpy-broadcastable)."""
    if kind is ChartKind.REAL_RILEY:
        s = np.exp(p)
        u = np.sinh(q)
        one = np.ones_like(s * u)
        return (s, one, 0.0 * one, 1.0 / s), (s, 0.0 * one, u, 1.0 / s)
    if kind is ChartKind.UNIT_RILEY:
        c, sn = np.cos(p), np.sin(p)
        e = np.exp(2.0 * q)
        return (c + 0.0 * e, -sn + 0.0 * e, sn + 0.0 * e, c + 0.0 * e), (c, -sn * e, sn / e, c)
    s = np.exp(p)
    z = 0.0 * s
    return (s, z, z, 1.0 / s), (s, z, z, 1.0 / s)


def riley_rep(chart: Chart):
    """Riley matrices ``(A, B)`` as numpy arrays (complex for ``UNIT_RILEY``)."""
    if chart.kind is ChartKind.UNIT_RILEY:
        s = cmath.exp(1j * chart.s)
    else:
        s = chart.s
    A = np.array([[s, 1.0], [0.0, 1.0 / s]])
    if chart.kind is ChartKind.ABELIAN:
        B = np.array([[s, 0.0], [0.0, 1.0 / s]])
        A = B.copy()
    else:
        B = np.array([[s, 0.0], [chart.u, 1.0 / s]])
    return A, B


def real_generators(chart: Chart) -> tuple[RealMatrix, RealMatrix]:
    """Real unit-determinant matrices for the two generators."""
    p, q = chart.coords
    ma, mb = _generators(chart.kind, p, q)
    return (
        RealMatrix(*(float(x) for x in ma)),
        RealMatrix(*(float(x) for x in mb)),
    )


def _nearest_sign(m) -> float:
    return 1.0 if (m[0] + m[3]).real >= 0 else -1.0


def relator_residual(P: Presentation, matA, matB) -> float:
    """Frobenius distance of the relators from the identity, up to sign."""
    gens = [_as_tuple(matA), _as_tuple(matB)]
    total = 0.0
    for r in P.relators:
        m = _eval_word(r, gens)
        best = min(
            sum(abs(x - y) ** 2 for x, y in zip(m, (sg, 0.0, 0.0, sg))) for sg in (1.0, -1.0)
        )
        total += best
    return math.sqrt(total)


def _as_tuple(m):
    if isinstance(m, RealMatrix):
        return (m.a, m.b, m.c, m.d)
    m = np.asarray(m)
    return (m[0, 0], m[0, 1], m[1, 0], m[1, 1])


class Character(Enum):
    SL2R = "SL2R"
    SU2 = "SU2"
    REDUCIBLE = "reducible"


def classify_real_character(x: float, y: float, z: float, tol: float = CHARACTER_TOL) -> Character:
    """Real form of a real character ``(tr A, tr B, tr AB)``.

    ``kappa = x^2 + y^2 + z^2 - x y z - 4`` is ``tr[A, B] - 2``.  An
    irreducible real character is an SU(2) character exactly when ``kappa < 0``
    and all three traces lie in ``[-2, 2]``; otherwise it is an SL(2,R) one.
    """
    kappa = x * x + y * y + z * z - x * y * z - 4.0
    if abs(kappa) <= tol:
        return Character.REDUCIBLE
    if kappa < 0 and max(abs(x), abs(y), abs(z)) <= 2.0:
        return Character.SU2
    return Character.SL2R


def kappa(chart: Chart) -> float:
    """``tr[A, B] - 2 = u (u + (s - 1/s)^2)``; zero exactly on reducible pairs."""
    if chart.kind is ChartKind.ABELIAN:
        return 0.0
    if chart.kind is ChartKind.UNIT_RILEY:
        return chart.u * (chart.u - 4.0 * math.sin(chart.s) ** 2)
    s = chart.s
    return chart.u * (chart.u + (s - 1.0 / s) ** 2)


class RelatorSystem:
    """The relator equations of a presentation on one chart."""

    def __init__(self, P: Presentation, kind: ChartKind):
        if P.ngens != 2:
            raise PresentationError("tracing needs a two-generator presentation")
        self.P = P
        self.kind = kind

    def matrices(self, p, q):
        gens = _generators(self.kind, p, q)
        if np.ndim(p) == 0 and np.ndim(q) == 0:
            # plain Python scalars multiply several times faster than numpy ones
            gens = [tuple(np.asarray(x).item() for x in m) for m in gens]
        return [_eval_word(r, gens) for r in self.P.relators]

    def signs(self, p, q) -> list[float]:
        return [_nearest_sign(m) for m in self.matrices(p, q)]

    def residual_vector(self, p, q, signs) -> np.ndarray:
        out = []
        for m, sg in zip(self.matrices(p, q), signs):
            out.extend((m[0] - sg, m[1], m[2], m[3] - sg))
        return np.array(out)

    def jacobian(self, p: float, q: float, signs) -> tuple[np.ndarray, np.ndarray]:
        """Residual vector and its Jacobian by complex-step differentiation."""
        f = self.residual_vector(p, q, signs).real
        jp = self.residual_vector(complex(p, _CSTEP), complex(q, 0.0), signs).imag / _CSTEP
        jq = self.residual_vector(complex(p, 0.0), complex(q, _CSTEP), signs).imag / _CSTEP
        return f, np.column_stack([jp, jq])

    def scale(self, p: float, q: float) -> float:
        gens = [tuple(float(x) for x in m) for m in _generators(self.kind, p, q)]
        return max(word_scale(r, gens) for r in self.P.relators)

    def residual(self, p: float, q: float) -> float:
        return float(np.linalg.norm(self.residual_vector(p, q, self.signs(p, q))))


@dataclass(frozen=True)
class Constraint:
    """``normal . (point - anchor) = 0``."""

    normal: tuple[float, float]
    anchor: tuple[float, float]

    @classmethod
    def freeze(cls, index: int, value: float) -> "Constraint":
        normal = (1.0, 0.0) if index == 0 else (0.0, 1.0)
        anchor = (value, 0.0) if index == 0 else (0.0, value)
        return cls(normal, anchor)


def _newton(system: RelatorSystem, start, constraint: Constraint | None):
    with np.errstate(over="ignore", invalid="ignore"):
        return _newton_raw(system, start, constraint)


def _newton_raw(system: RelatorSystem, start, constraint: Constraint | None):
    p = np.array(start, dtype=float)
    signs = system.signs(*p)
    n = None if constraint is None else np.array(constraint.normal)
    a = None if constraint is None else np.array(constraint.anchor)
    res = math.inf
    tol = None
    for it in range(1, NEWTON_MAXIT + 1):
        if not np.all(np.isfinite(p)):
            break
        f, J = system.jacobian(p[0], p[1], signs)
        res = float(np.linalg.norm(f))
        if not math.isfinite(res):
            break
        if n is not None:
            f = np.append(f, n @ (p - a))
            J = np.vstack([J, n])
        if tol is None or res < tol:
            # the scale is costly; refresh it only to confirm convergence
            scale = system.scale(p[0], p[1])
            if scale > SCALE_LIMIT:
                raise TraceError(f"precision limit: partial products of norm {scale:.3g}")
            tol = residual_tolerance(scale)
        if res < tol and (n is None or abs(f[-1]) < NEWTON_TOL):
            return p, res, it
        sv = np.linalg.svd(J, compute_uv=False)
        if sv[-1] <= 1e-14 * max(sv[0], 1.0):
            raise BranchPoint(f"rank collapse at {tuple(p)}")
        step, *_ = np.linalg.lstsq(J, -f, rcond=None)
        p = p + step
        if np.linalg.norm(step) < 1e-15 * (1.0 + np.linalg.norm(p)) and res < 100 * tol:
            return p, res, it
    raise TraceError(f"Newton did not converge (residual {res:.3g})")


def newton_correct(P: Presentation, chart: Chart, constraint: Constraint | None = None) -> Chart:
    """Gauss-Newton on the relator entries in the two chart unknowns."""
    system = RelatorSystem(P, chart.kind)
    p, _, _ = _newton(system, chart.coords, constraint)
    return Chart.from_coords(chart.kind, float(p[0]), float(p[1]))


def tangent(system: RelatorSystem, p) -> np.ndarray:
    """Unit null vector of the relator Jacobian."""
    _, J = system.jacobian(p[0], p[1], system.signs(*p))
    _, sv, vt = np.linalg.svd(J)
    if sv[0] <= 1e-14:
        raise BranchPoint("vanishing Jacobian")
    return vt[-1]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def _central_level(g: LiftedElement, tol: float = 1e-8) -> int:
    k = round(g.omega / math.pi)
    if abs(g.gamma) > tol or abs(g.omega - k * math.pi) > tol * max(1.0, abs(g.omega)):
        raise TraceError(f"lifted relator {g} is not central")
    return int(k)


def normalize_lifts(
    P: Presentation, matA: RealMatrix, matB: RealMatrix, sheetA: int = 0, sheetB: int = 0
) -> tuple[LiftedElement, LiftedElement]:
    """Lifts of the generator images whose lifted relator is the identity.

    The lifted relator of the given sheets is central, ``(0, m pi)``; the
    lifts are multiplied by powers ``k_a``, ``k_b`` of the central generator
    ``(0, pi)`` with ``e_a k_a + e_b k_b = -m``.
    """
    lifts = [lift(cayley_to_disk(matA), sheetA), lift(cayley_to_disk(matB), sheetB)]
    if len(P.relators) != 1:
        raise PresentationError("lift normalization supports one relator")
    r = P.relators[0]
    scale = word_scale(r, [_as_tuple(matA), _as_tuple(matB)])
    tol = min(0.1, max(1e-8, 1e-13 * scale * scale))
    m = _central_level(_lifted_word(r, lifts), tol)
    if m == 0:
        return lifts[0], lifts[1]
    ea, eb = r.exponent_sums(2)
    g, x, y = _egcd(ea, eb)
    if g == 0 or m % g:
        raise PresentationError(f"cannot cancel central level {m} with exponent sums ({ea}, {eb})")
    ka, kb = -x * (m // g), -y * (m // g)
    out = (compose(lifts[0], central(ka)), compose(lifts[1], central(kb)))
    if _central_level(_lifted_word(r, out), tol) != 0:
        raise TraceError("lift normalization failed")
    return out


@dataclass(frozen=True)
class RepPoint:
    chart: Chart
    matA: RealMatrix
    matB: RealMatrix
    liftA: LiftedElement
    liftB: LiftedElement
    v: FixedPointDatum | None
    ev_mu: tuple[float, float]
    ev_lambda: tuple[float, float]
    i: float
    j: float
    residual: float
    character: tuple[float, float, float]
    elliptic: bool = False


@dataclass(frozen=True)
class ArcPoint:
    x: float
    y: float
    i: int
    j: int
    s: float
    u: float
    kind: str
    flags: frozenset = field(default_factory=frozenset)


def _choose_datum(mu: RealMatrix, lam: RealMatrix) -> FixedPointDatum | None:
    base = lam if mu.is_central() else mu
    if base.is_central():
        return None
    data = fixed_data(base)
    # a deterministic choice: the fixed point where mu is expanding
    if not mu.is_central():
        return max(data, key=lambda d: (d.logmag, 0 if d.v is None else -abs(d.v)))
    return data[0]


def _logmag_at(m: RealMatrix, datum: FixedPointDatum) -> float:
    if datum.v is None:
        return -math.log(abs(m.a))
    den = m.c * datum.v + m.d
    return -math.log(abs(den))


def rep_point(P: Presentation, chart: Chart, sheets: tuple[int, int] = (0, 0)) -> RepPoint:
    """Evaluate the boundary data of the representation at a chart point."""
    matA, matB = real_generators(chart)
    residual = relator_residual(P, matA, matB)
    liftA, liftB = normalize_lifts(P, matA, matB, *sheets)
    gens = [(matA.a, matA.b, matA.c, matA.d), (matB.a, matB.b, matB.c, matB.d)]
    mu = RealMatrix.trusted(*_eval_word(P.meridian, gens))
    lam = RealMatrix.trusted(*_eval_word(P.longitude, gens))
    mu_l = _lifted_word(P.meridian, (liftA, liftB))
    lam_l = _lifted_word(P.longitude, (liftA, liftB))
    ab = matA @ matB
    character = (matA.trace, matB.trace, ab.trace)
    kind_mu = classify(mu).kind
    if kind_mu is Kind.ELLIPTIC:
        if chart.kind is not ChartKind.UNIT_RILEY:
            raise TraceError("elliptic meridian image in a hyperbolic chart")
        ti, tj = trans(mu_l), trans(lam_l)
        return RepPoint(chart, matA, matB, liftA, liftB, None, (0.0, ti), (0.0, tj),
                        ti, tj, residual, character, elliptic=True)
    datum = _choose_datum(mu, lam)
    if datum is None:
        ev_mu = ev(mu_l, FixedPointDatum(0.0, 1 + 0j, 0.0))
        ev_lam = ev(lam_l, FixedPointDatum(0.0, 1 + 0j, 0.0))
    else:
        ev_mu = _ev_at(mu_l, mu, datum)
        ev_lam = _ev_at(lam_l, lam, datum)
    return RepPoint(chart, matA, matB, liftA, liftB, datum, ev_mu, ev_lam,
                    ev_mu[1], ev_lam[1], residual, character)


def _ev_at(g: LiftedElement, m: RealMatrix, datum: FixedPointDatum) -> tuple[float, int]:
    """``ev`` with the log-eigenvalue taken at the shared fixed point ``datum``."""
    first, k = ev(g, datum)
    # parabolic within tolerance still has a well-defined multiplier at the datum
    if classify(g).kind in (Kind.HYPERBOLIC, Kind.PARABOLIC):
        first = _logmag_at(m, datum)
    return (first, k)


@dataclass(frozen=True)
class TraceParams:
    """Continuation controls.

    Arcs leaving the window ``|x| <= xmax, |y| <= ymax`` are followed out to
    ``margin`` times the window so the tail is long enough to read off the
    asymptote; points outside the window carry the ``beyond-window`` flag.
    """

    xmax: float = 1.5
    ymax: float = 8.0
    margin: float = 2.0
    step_min: float = STEP_MIN
    step_max: float = STEP_MAX
    max_points: int = 4000
    # largest allowed jump between consecutive points in the (x, y) plane
    max_spacing: float = 0.1
    kappa_tol: float = 1e-7
    parabolic_gap: float = 2e-3
    # the unit-circle chart stops at t = tmax (|u| grows like exp(2 t))
    tmax: float = 12.0
    # stop once partial products of the relator exceed this norm
    max_scale: float = 1e6


@dataclass
class HalfArc:
    points: list[ArcPoint]
    end: str
    reason: str = ""


def arc_point(P: Presentation, chart: Chart, rp: RepPoint | None = None,
              params: TraceParams | None = None) -> ArcPoint:
    rp = rep_point(P, chart) if rp is None else rp
    if rp.elliptic:
        ap = ArcPoint(rp.i, rp.j, 0, 0, chart.s, chart.u, "elliptic-EL")
    else:
        kind = classify(rp.liftA).kind.value
        ap = ArcPoint(rp.ev_mu[0], rp.ev_lambda[0], int(rp.i), int(rp.j), chart.s, chart.u, kind)
    if params is not None and _outside(ap, params, 1.0):
        ap = ArcPoint(ap.x, ap.y, ap.i, ap.j, ap.s, ap.u, ap.kind, frozenset({"beyond-window"}))
    return ap


def _outside(ap: ArcPoint, params: TraceParams, factor: float) -> bool:
    if ap.kind == "elliptic-EL":
        return abs(ap.y) > factor * params.ymax
    return abs(ap.x) > factor * params.xmax or abs(ap.y) > factor * params.ymax


def _parabolic_end(P: Presentation, system: RelatorSystem, p, tags=(0, 0)) -> ArcPoint | None:
    """Solve at ``s = 1`` from a nearby point; the boundary image is parabolic."""
    q = float(p[1])
    for _ in range(NEWTON_MAXIT):
        f, J = system.jacobian(0.0, q, system.signs(0.0, q))
        if not np.all(np.isfinite(f)):
            return None
        if float(np.linalg.norm(f)) < residual_tolerance(system.scale(0.0, q)):
            return ArcPoint(0.0, 0.0, tags[0], tags[1], 1.0, float(math.sinh(q)), "parabolic")
        col = J[:, 1]
        denom = float(col @ col)
        if denom == 0.0:
            return None
        q -= float(col @ f) / denom
    return None


def _ending(points: list[ArcPoint], end: str, reason: str = "") -> HalfArc:
    # a numerical breakdown outside the window still marks an asymptotic end
    if end in ("failure", "branch-point", "tag-jump", "budget", "precision-limit") and points:
        if "beyond-window" in points[-1].flags:
            return HalfArc(points, "window-exit", reason)
    return HalfArc(points, end, reason)


def _trace_direction(P, system: RelatorSystem, p0, t0, direction: float, params: TraceParams,
                     first: ArcPoint) -> HalfArc:
    kind = system.kind
    p = np.array(p0, dtype=float)
    t = direction * np.asarray(t0, dtype=float)
    h = params.step_max / 4
    points: list[ArcPoint] = []
    prev = first
    successes = 0
    while len(points) < params.max_points:
        pred = p + h * t
        try:
            q, _, iters = _newton(system, pred, Constraint(tuple(t), tuple(pred)))
            if kind is ChartKind.REAL_RILEY and q[0] <= params.parabolic_gap:
                # crossed s = 1: the arc ends at the parabolic point
                end = _parabolic_end(P, system, p, (prev.i, prev.j))
                if end is not None:
                    points.append(end)
                    return HalfArc(points, "parabolic-origin")
                h /= 2
                if h < params.step_min:
                    return _ending(points, "failure", "no parabolic end")
                continue
            chart = Chart.from_coords(kind, float(q[0]), float(q[1]))
            ap = arc_point(P, chart, params=params)
        except BranchPoint as exc:
            return _ending(points, "branch-point", str(exc))
        except (TraceError, InvalidInput, ConvergenceFailure, OverflowError, ValueError) as exc:
            if kind is ChartKind.REAL_RILEY and pred[0] < 4 * params.parabolic_gap:
                end = _parabolic_end(P, system, p, (prev.i, prev.j))
                if end is not None:
                    points.append(end)
                    return HalfArc(points, "parabolic-origin")
            if kind is ChartKind.UNIT_RILEY and pred[1] <= 0:
                return HalfArc(points, "reducible-junction")
            h /= 2
            successes = 0
            if h < params.step_min:
                return _ending(points, "failure", str(exc))
            continue
        if kind is ChartKind.UNIT_RILEY and q[1] <= 0:
            # t -> -t is conjugation by a quarter turn: the curve folds back here
            return HalfArc(points, "reducible-junction")
        jump = math.hypot(ap.x - prev.x, ap.y - prev.y)
        if (jump > params.max_spacing or (ap.i, ap.j) != (prev.i, prev.j)) and h > params.step_min:
            h = max(h / 2, params.step_min)
            successes = 0
            continue
        if (ap.i, ap.j) != (prev.i, prev.j):
            return _ending(points, "tag-jump", f"({prev.i},{prev.j}) -> ({ap.i},{ap.j})")
        try:
            t_new = tangent(system, q)
        except BranchPoint as exc:
            return _ending(points, "branch-point", str(exc))
        if t_new @ t < 0:
            t_new = -t_new
        p, t, prev = q, t_new, ap
        points.append(ap)
        if _outside(ap, params, params.margin):
            return HalfArc(points, "window-exit")
        if system.scale(p[0], p[1]) > params.max_scale:
            return _ending(points, "precision-limit")
        if abs(kappa(chart)) < params.kappa_tol:
            return HalfArc(points, "reducible-junction")
        if kind is ChartKind.REAL_RILEY:
            if p[0] < params.parabolic_gap:
                end = _parabolic_end(P, system, p, (prev.i, prev.j))
                if end is not None:
                    points.append(end)
                return HalfArc(points, "parabolic-origin")
        else:
            if min(p[0], math.pi - p[0]) < params.parabolic_gap:
                return HalfArc(points, "parabolic-origin")
            if p[1] > params.tmax:
                return HalfArc(points, "window-exit")
        successes = successes + 1 if iters <= 3 else 0
        if successes >= 2:
            h = min(h * 1.3, params.step_max)
            successes = 0
    return _ending(points, "budget")


def continue_arc(P: Presentation, seed: Chart, params: TraceParams | None = None):
    """Trace the real curve through ``seed`` in both directions.

    Returns ``(points, ends)`` with the points ordered along the curve and
    ``ends`` the stop reasons of the two ends (start end first).
    """
    params = params or TraceParams()
    system = RelatorSystem(P, seed.kind)
    p0 = np.array(seed.coords)
    t0 = tangent(system, p0)
    first = arc_point(P, seed, params=params)
    back = _trace_direction(P, system, p0, t0, -1.0, params, first)
    fwd = _trace_direction(P, system, p0, t0, 1.0, params, first)
    points = list(reversed(back.points)) + [first] + fwd.points
    return points, (back.end, fwd.end)
