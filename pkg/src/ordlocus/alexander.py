"""Fox calculus, Alexander polynomials and Alexander points."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .laurent import LaurentPoly, positive_real_roots
from .presentations import Presentation, PresentationError, Word, abelianization_map

log = logging.getLogger(__name__)

ROOT_ONE_TOL = 1e-9


@dataclass(frozen=True)
class AlexanderPoint:
    """The point ``(ln(root) / 2, 0)`` of a positive real root ``root != 1``."""

    x: float
    root: float
    multiplicity: int
    simple: bool

    @classmethod
    def from_root(cls, root: float, multiplicity: int) -> "AlexanderPoint":
        return cls(math.log(root) / 2.0, root, multiplicity, multiplicity == 1)


def fox_derivative(word: Word, gen: int, phi=None) -> LaurentPoly:
    """Abelianized free derivative of ``word`` with respect to ``gen``.

    ``phi[g]`` is the power of ``t`` that generator ``g`` maps to; by default
    every generator maps to ``t``.
    """
    result: dict[int, int] = {}
    power = 0
    for g, e in word:
        step = 1 if phi is None else phi[g]
        if e > 0:
            if g == gen:
                result[power] = result.get(power, 0) + 1
            power += step
        else:
            power -= step
            if g == gen:
                result[power] = result.get(power, 0) - 1
    return LaurentPoly.from_dict(result)


def alexander_polynomial(p: Presentation) -> LaurentPoly:
    """Alexander polynomial of a deficiency-one presentation.

    With ``phi`` the abelianization to ``<t>``, deleting the column of a
    generator ``x`` with ``phi(x) != 1`` gives the minor ``D_x`` and
    ``Delta = (t - 1) D_x / (phi(x) - 1)`` up to units.
    """
    n = p.ngens
    if len(p.relators) != n - 1:
        raise PresentationError("deficiency-one presentation required")
    phi = abelianization_map(n, p.relators)
    col = max(range(n), key=lambda g: (abs(phi[g]) == 1, abs(phi[g]) > 0, -g))
    if phi[col] == 0:
        raise PresentationError("no generator maps nontrivially to H_1")
    keep = [g for g in range(n) if g != col]
    rows = [[fox_derivative(r, g, phi) for g in keep] for r in p.relators]
    minor = _laurent_det(rows)
    t_minus_1 = LaurentPoly((-1, 1), 0)
    x_minus_1 = LaurentPoly.monomial(phi[col]) - 1
    try:
        delta = (minor * t_minus_1).divmod_exact(x_minus_1)
    except ArithmeticError:
        raise PresentationError(
            "Fox-calculus quotient is not exact; check the relator conventions"
        ) from None
    if delta.is_zero():
        raise PresentationError("vanishing Alexander polynomial")
    return delta.normalized()


def _laurent_det(rows) -> LaurentPoly:
    n = len(rows)
    if n == 0:
        return LaurentPoly((1,), 0)
    if n == 1:
        return rows[0][0]
    total = LaurentPoly(())
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * _laurent_det(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def alexander_points(p: Presentation, delta: LaurentPoly | None = None) -> list[AlexanderPoint]:
    """One point per positive real root ``xi != 1`` (both ``xi`` and ``1/xi`` kept)."""
    if delta is None:
        delta = alexander_polynomial(p)
    points = []
    for root, mult in positive_real_roots(delta):
        if abs(root - 1.0) < ROOT_ONE_TOL:
            log.warning("root %.12g of the Alexander polynomial is 1; skipped", root)
            continue
        points.append(AlexanderPoint.from_root(root, mult))
    return points


def unit_circle_angles(delta: LaurentPoly, tol: float = 1e-8) -> list[float]:
    """Arguments ``phi`` in ``(0, pi)`` of the roots ``e^{i phi}`` of ``delta``."""
    coeffs = list(delta.normalized().coeffs)
    if len(coeffs) < 2:
        return []
    roots = np.roots(coeffs[::-1])
    out = []
    for z in roots:
        if abs(abs(z) - 1.0) < tol and z.imag > tol:
            out.append(float(np.angle(z)))
    return sorted(out)
