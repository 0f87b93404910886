"""Arithmetic in PSL(2,R), SU(1,1) and their common universal cover.

Elements of the universal cover are stored in ``(gamma, omega)`` coordinates
with ``|gamma| < 1`` and ``omega`` an unbounded real angle.  The projection to
SU(1,1) is ``alpha = exp(i omega) / sqrt(1 - |gamma|^2)``,
``beta = -conj(gamma) * conj(alpha)``.

Translation numbers are normalized so that the central element ``(0, pi)``
(a full turn of the boundary circle) has translation number 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

DET_TOL = 1e-12
CLASS_TOL = 1e-8

_SQRT_HALF = 1.0 / math.sqrt(2.0)
# Cayley conjugator C = (1/sqrt 2) [[1, -i], [1, i]] and its inverse.
CAYLEY = np.array([[1.0, -1.0j], [1.0, 1.0j]]) * _SQRT_HALF
CAYLEY_INV = np.array([[1.0, 1.0], [1.0j, -1.0j]]) * _SQRT_HALF


class InvalidInput(ValueError):
    """Raised when an argument violates an operation's precondition."""


class ConvergenceFailure(ArithmeticError):
    """Raised when a translation number iteration fails to settle."""


def principal_arg(z: complex) -> float:
    """Argument of ``z`` on the branch [-pi, pi)."""
    a = cmath.phase(z)
    if a >= math.pi:
        a -= 2.0 * math.pi
    return a


@dataclass(frozen=True)
class RealMatrix:
    """A unit-determinant real 2x2 matrix ``[[a, b], [c, d]]``."""

    a: float
    b: float
    c: float
    d: float
    projective: bool = True

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not math.isfinite(det) or abs(det - 1.0) > DET_TOL * max(1.0, self.norm() ** 2):
            raise InvalidInput(f"determinant {det!r} is not 1")

    @classmethod
    def trusted(cls, a, b, c, d, projective: bool = True) -> "RealMatrix":
        """Build without the determinant check (products of checked matrices)."""
        m = object.__new__(cls)
        for name, value in zip("abcd", (a, b, c, d)):
            object.__setattr__(m, name, float(value))
        object.__setattr__(m, "projective", projective)
        return m

    @classmethod
    def from_array(cls, m, projective: bool = True) -> "RealMatrix":
        m = np.asarray(m, dtype=float)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]), projective)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def norm(self) -> float:
        return math.sqrt(self.a**2 + self.b**2 + self.c**2 + self.d**2)

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "RealMatrix") -> "RealMatrix":
        return RealMatrix.trusted(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.projective and other.projective,
        )

    def inverse(self) -> "RealMatrix":
        return RealMatrix.trusted(self.d, -self.b, -self.c, self.a, self.projective)

    def is_central(self, tol: float = CLASS_TOL) -> bool:
        """True when the matrix is within ``tol`` of +I or -I."""
        for sign in (1.0, -1.0):
            if max(abs(self.a - sign), abs(self.b), abs(self.c), abs(self.d - sign)) <= tol:
                return True
        return False

    def mobius(self, z):
        """Action on the projective line; ``None`` stands for infinity."""
        if z is None:
            return None if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return None
        return (self.a * z + self.b) / den


@dataclass(frozen=True)
class DiskMatrix:
    """The SU(1,1) matrix ``[[alpha, beta], [conj(beta), conj(alpha)]]``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        det = abs(self.alpha) ** 2 - abs(self.beta) ** 2
        if abs(det - 1.0) > DET_TOL * max(1.0, abs(self.alpha) ** 2):
            raise InvalidInput(f"|alpha|^2 - |beta|^2 = {det!r} is not 1")

    def as_array(self) -> np.ndarray:
        return np.array(
            [[self.alpha, self.beta], [self.beta.conjugate(), self.alpha.conjugate()]]
        )

    @property
    def trace(self) -> float:
        return 2.0 * self.alpha.real

    def __matmul__(self, other: "DiskMatrix") -> "DiskMatrix":
        alpha = self.alpha * other.alpha + self.beta * other.beta.conjugate()
        beta = self.alpha * other.beta + self.beta * other.alpha.conjugate()
        return DiskMatrix(alpha, beta)

    def inverse(self) -> "DiskMatrix":
        return DiskMatrix(self.alpha.conjugate(), -self.beta)


@dataclass(frozen=True)
class LiftedElement:
    """An element of the universal cover in ``(gamma, omega)`` coordinates."""

    gamma: complex
    omega: float

    def __post_init__(self):
        if not abs(self.gamma) < 1.0:
            raise InvalidInput(f"|gamma| = {abs(self.gamma)!r} must be < 1")

    def __mul__(self, other: "LiftedElement") -> "LiftedElement":
        return compose(self, other)

    def __pow__(self, n: int) -> "LiftedElement":
        base = self if n >= 0 else invert(self)
        result = IDENTITY
        for _ in range(abs(n)):
            result = compose(result, base)
        return result

    def inverse(self) -> "LiftedElement":
        return invert(self)

    def project(self) -> DiskMatrix:
        alpha = cmath.exp(1j * self.omega) / math.sqrt(1.0 - abs(self.gamma) ** 2)
        return DiskMatrix(alpha, -self.gamma.conjugate() * alpha.conjugate())


IDENTITY = LiftedElement(0j, 0.0)


def central(k: int) -> LiftedElement:
    """The k-th power of the generator ``(0, pi)`` of the center."""
    return LiftedElement(0j, k * math.pi)


class Kind(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    CENTRAL = "central"


@dataclass(frozen=True)
class ElementClass:
    kind: Kind
    level: int | None = None


@dataclass(frozen=True)
class FixedPointDatum:
    """A fixed point ``v`` on the projective line (``None`` is infinity)."""

    v: complex | None
    deriv: complex
    logmag: float

    @property
    def at_infinity(self) -> bool:
        return self.v is None


def cayley_to_disk(m: RealMatrix) -> DiskMatrix:
    """Conjugate an SL(2,R) matrix into SU(1,1) by the Cayley transform."""
    if not isinstance(m, RealMatrix):
        m = RealMatrix.from_array(m)
    # C m C^{-1} written out; alpha and beta are the top row.
    a, b, c, d = m.a, m.b, m.c, m.d
    alpha = 0.5 * complex(a + d, b - c)
    beta = 0.5 * complex(a - d, -(b + c))
    return DiskMatrix(alpha, beta)


def disk_to_real(g: DiskMatrix) -> RealMatrix:
    """Inverse of :func:`cayley_to_disk`."""
    m = CAYLEY_INV @ g.as_array() @ CAYLEY
    return RealMatrix.from_array(m.real)


def lift(m: DiskMatrix, sheet: int = 0) -> LiftedElement:
    """Lift an SU(1,1) matrix; ``sheet`` adds ``2 pi sheet`` to omega."""
    gamma = -m.beta.conjugate() / m.alpha
    return LiftedElement(gamma, principal_arg(m.alpha) + 2.0 * math.pi * sheet)


def compose(g: LiftedElement, h: LiftedElement) -> LiftedElement:
    """Group law of the universal cover."""
    rot = cmath.exp(-2j * g.omega)
    den = 1.0 + g.gamma.conjugate() * h.gamma * rot
    gamma = (g.gamma + h.gamma * rot) / den
    # (1/2i) log(den / conj(den)) with Re(den) > 0 is exactly Arg(den).
    omega = g.omega + h.omega + cmath.phase(den)
    if abs(gamma) >= 1.0:
        gamma = gamma / abs(gamma) * (1.0 - 1e-16)
    return LiftedElement(gamma, omega)


def invert(g: LiftedElement) -> LiftedElement:
    return LiftedElement(-g.gamma * cmath.exp(2j * g.omega), -g.omega)


def _trace_class(trace: float, is_central: bool, tol: float) -> Kind:
    if is_central:
        return Kind.CENTRAL
    t = abs(trace)
    if t < 2.0 - tol:
        return Kind.ELLIPTIC
    if t > 2.0 + tol:
        return Kind.HYPERBOLIC
    return Kind.PARABOLIC


def classify(m, tol: float = CLASS_TOL) -> ElementClass:
    """Elliptic / parabolic / hyperbolic / central by the trace trichotomy.

    Accepts a :class:`RealMatrix`, :class:`DiskMatrix` or
    :class:`LiftedElement`; only a lifted element carries a central level.
    """
    if isinstance(m, LiftedElement):
        g = m.project()
        is_central = abs(g.beta) <= tol and abs(abs(g.alpha.real) - 1.0) <= tol
        kind = _trace_class(g.trace, is_central, tol)
        level = int(round(m.omega / math.pi)) if kind is Kind.CENTRAL else None
        return ElementClass(kind, level)
    if isinstance(m, DiskMatrix):
        is_central = abs(m.beta) <= tol and abs(abs(m.alpha.real) - 1.0) <= tol
        return ElementClass(_trace_class(m.trace, is_central, tol))
    if not isinstance(m, RealMatrix):
        m = RealMatrix.from_array(m)
    return ElementClass(_trace_class(m.trace, m.is_central(tol), tol))


def lifted_circle_map(g: LiftedElement, theta: float) -> float:
    """Continuous lift to R of the boundary-circle action of ``g``."""
    phi = theta + 2.0 * g.omega
    return phi + 2.0 * cmath.phase(1.0 - g.gamma.conjugate() * cmath.exp(-1j * phi))


def _orbit_rate(g: LiftedElement, steps: int) -> float:
    theta = 0.0
    for _ in range(steps):
        theta = lifted_circle_map(g, theta)
    return theta / (2.0 * math.pi * steps)


def _elliptic_rotation(g: LiftedElement) -> float:
    """Rotation number mod 1 of an elliptic element, from its disk fixed point."""
    m = g.project()
    alpha, beta = m.alpha, m.beta
    # conj(beta) z^2 + (conj(alpha) - alpha) z - beta = 0, pick |z| < 1.
    qa, qb, qc = beta.conjugate(), alpha.conjugate() - alpha, -beta
    if abs(qa) < 1e-300:
        z0 = 0j
    else:
        disc = cmath.sqrt(qb * qb - 4.0 * qa * qc)
        roots = [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
        z0 = min(roots, key=abs)
    return -cmath.phase(beta.conjugate() * z0 + alpha.conjugate()) / math.pi


def trans(g: LiftedElement) -> float:
    """Translation number, in units of full turns of the boundary circle."""
    cls = classify(g)
    if cls.kind is Kind.ELLIPTIC:
        estimate = _orbit_rate(g, 256)
        frac = _elliptic_rotation(g)
        snapped = frac + round(estimate - frac)
        if abs(estimate - snapped) > 0.05:
            raise ConvergenceFailure(f"elliptic estimate {estimate} far from {snapped}")
        return snapped
    steps = 64
    while steps <= 4096:
        estimate = _orbit_rate(g, steps)
        k = round(estimate)
        if abs(estimate - k) < 0.1:
            return float(k)
        steps *= 4
    raise ConvergenceFailure("translation number did not settle on an integer")


def fixed_data(m: RealMatrix) -> list[FixedPointDatum]:
    """Fixed points of the Mobius action on the complex projective line."""
    if not isinstance(m, RealMatrix):
        m = RealMatrix.from_array(m)
    if m.is_central():
        raise InvalidInput("central matrices fix every point")
    a, b, c, d = m.a, m.b, m.c, m.d
    points: list[complex | None] = []
    # c v^2 + (d - a) v - b = 0; a vanishing leading term puts a root at infinity.
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= 1e-14 * scale:
        points.append(None)
        if abs(d - a) > 1e-14 * scale:
            points.append(b / (d - a))
    else:
        disc = (d - a) ** 2 + 4.0 * b * c
        if abs(disc) <= 1e-12 * scale * scale:
            points.append((a - d) / (2.0 * c))
        else:
            root = cmath.sqrt(disc)
            for r in (root, -root):
                v = (a - d + r) / (2.0 * c)
                points.append(v.real if abs(v.imag) == 0.0 else v)
    data = []
    for v in points:
        if v is None:
            # chart w = 1/z: w -> (c + d w) / (a + b w), derivative 1/a^2 at w = 0
            deriv = 1.0 / (a * a)
            logmag = -math.log(abs(a))
        else:
            den = c * v + d
            deriv = 1.0 / (den * den)
            logmag = -math.log(abs(den))
        data.append(FixedPointDatum(v, complex(deriv), logmag))
    return data


def ev(g: LiftedElement, datum: FixedPointDatum) -> tuple[float, int]:
    """``(log |a|, trans)`` for a hyperbolic, parabolic or central element."""
    cls = classify(g)
    if cls.kind is Kind.ELLIPTIC:
        raise InvalidInput("ev is undefined on elliptic elements")
    t = trans(g)
    k = round(t)
    if abs(t - k) > 0.05:
        raise InvalidInput(f"translation number {t} is not integral")
    first = datum.logmag if cls.kind is Kind.HYPERBOLIC else 0.0
    return (first, int(k))
