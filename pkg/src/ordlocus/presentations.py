"""Group presentations of knot exteriors and the two-bridge construction.

Words are tuples of ``(generator_index, exponent)`` letters with exponent
``+1`` or ``-1``.  In text, lowercase letters are generators and uppercase
letters their inverses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

Letter = tuple[int, int]


class PresentationError(ValueError):
    """Invalid presentation text or presentation data."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


def reduce_word(letters) -> tuple[Letter, ...]:
    """Free reduction."""
    out: list[Letter] = []
    for g, e in letters:
        if e not in (1, -1):
            raise PresentationError(f"exponent {e} must be +1 or -1")
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", reduce_word(self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def reversed(self) -> "Word":
        """The same letters read backwards (not the inverse)."""
        return Word(tuple(reversed(self.letters)))

    def exponent_sums(self, ngens: int) -> list[int]:
        sums = [0] * ngens
        for g, e in self.letters:
            sums[g] += e
        return sums

    def to_text(self, names) -> str:
        return "".join(names[g] if e > 0 else names[g].upper() for g, e in self.letters)

    @classmethod
    def from_text(cls, text: str, names) -> "Word":
        index = {n: i for i, n in enumerate(names)}
        letters = []
        for ch in text:
            if ch.isspace():
                continue
            low = ch.lower()
            if low not in index:
                raise PresentationError(f"unknown generator {ch!r}")
            letters.append((index[low], 1 if ch == low else -1))
        return cls(tuple(letters))


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    meridian: Word
    longitude: Word
    name: str = ""
    genus: int | None = None
    longitude_order: int = 1
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.generators:
            raise PresentationError("no generators")
        if not self.relators:
            raise PresentationError("no relators")
        if len(self.longitude) == 0:
            raise PresentationError("empty longitude")
        if len(self.meridian) == 0:
            raise PresentationError("empty meridian")
        if self.genus is not None and self.genus < 1:
            raise PresentationError("genus must be a positive integer")
        if self.longitude_order < 1:
            raise PresentationError("longitude_order must be a positive integer")
        lam = abelianize(self, self.longitude)
        if any(lam):
            sums = self.longitude.exponent_sums(len(self.generators))
            raise PresentationError(
                f"longitude is not null-homologous: exponent sums {sums}, image {lam[0]} in H_1/torsion"
            )

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def k_m(self) -> int | None:
        """``2 g - 1`` from the genus, when known."""
        return None if self.genus is None else 2 * self.genus - 1

    @property
    def j_bound(self) -> float | None:
        return None if self.genus is None else self.k_m / self.longitude_order

    def word(self, text: str) -> Word:
        return Word.from_text(text, self.generators)

    def to_text(self) -> str:
        lines = [f"# {n}" for n in self.notes]
        if self.name:
            lines.append(f"name: {self.name}")
        lines.append("generators: " + " ".join(self.generators))
        for r in self.relators:
            lines.append("relator: " + r.to_text(self.generators))
        lines.append("meridian: " + self.meridian.to_text(self.generators))
        lines.append("longitude: " + self.longitude.to_text(self.generators))
        if self.genus is not None:
            lines.append(f"genus: {self.genus}")
        lines.append(f"longitude_order: {self.longitude_order}")
        return "\n".join(lines) + "\n"


def _det(rows) -> int:
    """Exact determinant by fraction-free elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def abelianization_map(ngens: int, relators) -> list[int]:
    """Images of the generators in ``H_1 / torsion = Z``, as integers.

    For ``ngens - 1`` relators the kernel of the exponent-sum matrix is
    spanned by its signed maximal minors.  The sign is fixed so the first
    nonzero image is positive.
    """
    rows = [r.exponent_sums(ngens) for r in relators]
    if len(rows) != ngens - 1:
        raise PresentationError("deficiency-one presentation required for the abelianization")
    minors = [
        (-1) ** k * _det([row[:k] + row[k + 1:] for row in rows]) for k in range(ngens)
    ]
    g = math.gcd(*minors)
    if g == 0:
        raise PresentationError("abelianization has free rank > 1")
    ints = [x // g for x in minors]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return ints


def abelianize(p: Presentation, w: Word) -> list[int]:
    """Exponent-sum vector of ``w`` reduced modulo the relator lattice.

    Returned as the image in ``Z`` under :func:`abelianization_map` wrapped in
    a one-element list, so a null-homologous word gives ``[0]``.
    """
    phi = abelianization_map(p.ngens, p.relators)
    return [sum(x * y for x, y in zip(phi, w.exponent_sums(p.ngens)))]


def two_bridge_signs(p: int, q: int) -> list[int]:
    """``e_i = (-1)^floor(i q / p)``; an even ``q`` is first replaced by ``q - p``.

    The sign pattern only describes a knot for odd ``q``, and ``q - p``
    names the same knot.
    """
    if q % 2 == 0:
        q -= p
    return [1 if (i * q) // p % 2 == 0 else -1 for i in range(1, p)]


def two_bridge(p: int, q: int) -> Presentation:
    """Meridional presentation ``<a, b | a w = w b>`` of the knot K(p, q).

    ``w = b^e1 a^e2 b^e3 ... a^e(p-1)`` with signs from :func:`two_bridge_signs`,
    meridian ``a``, longitude ``w reverse(w) a^(-2 sum e_i)``, which commutes
    with ``a``.
    """
    if p < 3 or p % 2 == 0:
        raise PresentationError("p must be an odd integer >= 3")
    if not 0 < q < p or math.gcd(p, q) != 1:
        raise PresentationError("q must satisfy 0 < q < p and gcd(p, q) = 1")
    signs = two_bridge_signs(p, q)
    a, b = 0, 1
    w = Word(tuple((b if i % 2 == 0 else a, e) for i, e in enumerate(signs)))
    relator = Word(((a, 1),)) * w * Word(((b, -1),)) * w.inverse()
    total = sum(signs)
    longitude = w * w.reversed() * Word(((a, 1),)) ** (-2 * total)
    return Presentation(
        generators=("a", "b"),
        relators=(relator,),
        meridian=Word(((a, 1),)),
        longitude=longitude,
        name=f"K({p},{q})",
    )


_KEYS = {"generators", "relator", "meridian", "longitude", "genus", "longitude_order", "name"}


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented presentation format."""
    generators = None
    relators_raw = []
    fields: dict[str, tuple[str, int, int]] = {}
    notes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            notes.append(stripped[1:].strip())
            continue
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise PresentationError("expected 'key: value'", lineno, col)
        key, value = line.split(":", 1)
        key = key.strip()
        # 1-based column of the first character of the value
        col = line.index(":") + 2 + len(value) - len(value.lstrip())
        if key not in _KEYS:
            raise PresentationError(f"unknown directive {key!r}", lineno, line.index(key) + 1)
        value = value.strip()
        if key == "generators":
            names = value.split()
            for n in names:
                if len(n) != 1 or not n.isalpha() or not n.islower():
                    raise PresentationError(f"generator {n!r} must be one lowercase letter", lineno, col)
            if len(set(names)) != len(names):
                raise PresentationError("duplicate generator", lineno, col)
            generators = tuple(names)
        elif key == "relator":
            relators_raw.append((value, lineno, col))
        else:
            if key in fields:
                raise PresentationError(f"duplicate directive {key!r}", lineno, 1)
            fields[key] = (value, lineno, col)
    if generators is None:
        raise PresentationError("missing 'generators' directive")

    def to_word(value, lineno, col):
        index = {n: i for i, n in enumerate(generators)}
        letters = []
        for offset, ch in enumerate(value):
            if ch.isspace():
                continue
            if ch.lower() not in index:
                raise PresentationError(f"unknown generator {ch!r}", lineno, col + offset)
            letters.append((index[ch.lower()], 1 if ch.islower() else -1))
        return Word(tuple(letters))

    def int_field(key, default):
        if key not in fields:
            return default
        value, lineno, col = fields[key]
        try:
            return int(value)
        except ValueError:
            raise PresentationError(f"{key} must be an integer", lineno, col) from None

    relators = tuple(to_word(*r) for r in relators_raw)
    meridian = to_word(*fields["meridian"]) if "meridian" in fields else Word()
    longitude = to_word(*fields["longitude"]) if "longitude" in fields else Word()
    return Presentation(
        generators=generators,
        relators=relators,
        meridian=meridian,
        longitude=longitude,
        name=fields.get("name", ("",))[0],
        genus=int_field("genus", None),
        longitude_order=int_field("longitude_order", 1),
        notes=tuple(notes),
    )


def load_presentation(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())
