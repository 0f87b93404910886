"""Integer Laurent polynomials and exact positive-root isolation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class LaurentPoly:
    """``sum(coeffs[k] * t**(lo + k))`` with nonzero end coefficients.

    The zero polynomial is ``coeffs == ()``.
    """

    coeffs: tuple[int, ...]
    lo: int = 0

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        lo = self.lo
        start = 0
        while start < len(c) and c[start] == 0:
            start += 1
        end = len(c)
        while end > start and c[end - 1] == 0:
            end -= 1
        c = c[start:end]
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "lo", lo + start if c else 0)

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "LaurentPoly":
        return cls((c,), k)

    @classmethod
    def from_dict(cls, terms: dict[int, int]) -> "LaurentPoly":
        terms = {k: v for k, v in terms.items() if v}
        if not terms:
            return cls(())
        lo, hi = min(terms), max(terms)
        return cls(tuple(terms.get(k, 0) for k in range(lo, hi + 1)), lo)

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        """Span ``hi - lo``; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> dict[int, int]:
        return {self.lo + k: c for k, c in enumerate(self.coeffs) if c}

    def __add__(self, other):
        other = _coerce(other)
        terms = self.terms()
        for k, c in other.terms().items():
            terms[k] = terms.get(k, 0) + c
        return LaurentPoly.from_dict(terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(tuple(-c for c in self.coeffs), self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return LaurentPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LaurentPoly(tuple(out), self.lo + other.lo)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.coeffs, self.lo + k)

    def __call__(self, t):
        return sum(c * t ** (self.lo + k) for k, c in enumerate(self.coeffs))

    def divmod_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises ``ArithmeticError`` when there is a remainder."""
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        num = list(self.coeffs)
        den = other.coeffs
        if len(num) < len(den):
            if not num:
                return LaurentPoly(())
            raise ArithmeticError("inexact Laurent division")
        quot = [0] * (len(num) - len(den) + 1)
        for i in range(len(quot) - 1, -1, -1):
            lead = num[i + len(den) - 1]
            q, r = divmod(lead, den[-1])
            if r:
                raise ArithmeticError("inexact Laurent division")
            quot[i] = q
            for j, d in enumerate(den):
                num[i + j] -= q * d
        if any(num):
            raise ArithmeticError("inexact Laurent division")
        return LaurentPoly(tuple(quot), self.lo - other.lo)

    def normalized(self) -> "LaurentPoly":
        """Lowest exponent 0 and positive leading coefficient."""
        if self.is_zero():
            return self
        sign = -1 if self.coeffs[-1] < 0 else 1
        return LaurentPoly(tuple(sign * c for c in self.coeffs), 0)

    def reciprocal(self) -> "LaurentPoly":
        """``t**degree * p(1/t)`` after normalizing."""
        return LaurentPoly(tuple(reversed(self.coeffs)), 0)

    def __str__(self):
        return format_poly(self)


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly((int(x),), 0)


def format_poly(p: LaurentPoly, var: str = "t") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.hi, p.lo - 1, -1):
        c = p.coeffs[k - p.lo]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            coef = "" if mag == 1 else str(mag)
            body = coef + (var if k == 1 else f"{var}^{k}")
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# --- exact univariate arithmetic over Q (coefficient lists, low degree first) ---


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _deriv(p):
    return _trim([k * p[k] for k in range(1, len(p))])


def _divmod_q(a, b):
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(_trim(a)) >= len(b) and _trim(a):
        a = _trim(a)
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for j, c in enumerate(b):
            a[shift + j] -= f * c
    return _trim(q), _trim(a)


def _primitive(p):
    p = _trim(p)
    if not p:
        return p
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _gcd(a, b):
    a, b = _primitive(a), _primitive(b)
    while b:
        _, r = _divmod_q(a, b)
        a, b = b, _primitive(r)
    return _primitive(a)


def squarefree_decomposition(p) -> list[tuple[list[int], int]]:
    """Yun's algorithm: ``[(factor, multiplicity), ...]`` with square-free factors."""
    p = _primitive(p)
    out = []
    if len(p) <= 1:
        return out
    a = p
    b = _deriv(a)
    c = _gcd(a, b)
    w, _ = _divmod_q(a, c)
    y, _ = _divmod_q(b, c)
    k = 1
    while len(_primitive(w)) > 1:
        z = [yi - wi for yi, wi in zip(y + [0] * len(w), _deriv(w) + [0] * len(y))]
        z = _trim(z)
        g = _gcd(w, z) if z else _primitive(w)
        if len(g) > 1:
            out.append((g, k))
        w, _ = _divmod_q(w, g)
        y, _ = _divmod_q(z, g) if z else ([], [])
        k += 1
    return out


def _sturm_chain(p):
    chain = [[Fraction(c) for c in p], [Fraction(c) for c in _deriv(p)]]
    while len(_trim(chain[-1])) > 1:
        _, r = _divmod_q(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign_changes(chain, x) -> int:
    signs = [v for v in (_eval(q, x) for q in chain) if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def _isolate_positive(p) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals ``(lo, hi]``, one per positive root of square-free ``p``."""
    chain = _sturm_chain(p)
    bound = 1 + max(abs(Fraction(c, p[-1])) for c in p[:-1])
    out = []
    stack = [(Fraction(0), Fraction(bound))]
    while stack:
        lo, hi = stack.pop()
        n = _sign_changes(chain, lo) - _sign_changes(chain, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    return sorted(out)


def _refine(p, lo: Fraction, hi: Fraction, rel: float) -> float:
    flo = _eval(p, lo)
    if flo == 0:
        return float(lo)
    while (hi - lo) > rel * hi / 8:
        mid = (lo + hi) / 2
        fm = _eval(p, mid)
        if fm == 0:
            return float(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    # floating bisection for the last digits
    a, b = float(lo), float(hi)
    fa = float(_eval(p, lo))
    for _ in range(80):
        m = 0.5 * (a + b)
        fm = sum(float(c) * m**k for k, c in enumerate(p))
        if fm == 0 or b - a <= 1e-15 * b:
            break
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def positive_real_roots(poly: LaurentPoly, rel: float = 1e-12) -> list[tuple[float, int]]:
    """All roots ``xi > 0`` with multiplicity, sorted ascending."""
    if poly.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    p = list(poly.normalized().coeffs)
    roots = []
    for factor, mult in squarefree_decomposition(p):
        for lo, hi in _isolate_positive(factor):
            roots.append((_refine(factor, lo, hi, rel), mult))
    return sorted(roots)
