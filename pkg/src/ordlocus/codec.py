"""JSON and CSV codecs for loci.

The JSON document is versioned (``ordlocus-locus-v1``).  Components are keyed
``"i,j"`` and each arc stores its points as parallel arrays.  Floats are
written with ``repr`` precision, so encode followed by decode is lossless.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .alexander import AlexanderPoint
from .locus import Arc, Asymptote, Locus
from .tracer import ArcPoint

VERSION = "ordlocus-locus-v1"

END_REASONS = frozenset({
    "window-exit", "parabolic-origin", "reducible-junction", "branch-point", "failure",
    "tag-jump", "budget", "precision-limit", "fold", "isolated", "non-real-rep",
})


class CodecError(ValueError):
    """Malformed or incompatible locus document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 position: int | None = None):
        self.line = line
        self.column = column
        self.position = position
        where = ""
        if line is not None:
            where = f"line {line}, column {column} (char {position}): "
        super().__init__(where + message)


class VersionError(CodecError):
    """The document declares a different schema version."""


def _arc_to_json(arc: Arc) -> dict:
    pts = arc.points
    return {
        "id": arc.id,
        "i": arc.i,
        "j": arc.j,
        "kind": arc.kind,
        "ends": list(arc.ends),
        "asymptotes": [
            {"end": a.end, "slope": a.slope, "nearest": a.nearest, "gap": a.gap}
            for a in arc.asymptotes
        ],
        "x": [p.x for p in pts],
        "y": [p.y for p in pts],
        "i_tags": [p.i for p in pts],
        "j_tags": [p.j for p in pts],
        "s": [p.s for p in pts],
        "u": [p.u for p in pts],
        "point_kind": [p.kind for p in pts],
        "flags": [sorted(p.flags) for p in pts],
    }


def to_dict(locus: Locus) -> dict:
    return {
        "version": VERSION,
        "name": locus.name,
        "window": list(locus.window),
        "genus": locus.genus,
        "longitude_order": locus.longitude_order,
        "quotient": locus.quotient,
        "presentation": locus.presentation,
        "alexander_points": [
            {"x": a.x, "root": a.root, "multiplicity": a.multiplicity, "simple": a.simple}
            for a in locus.alexander_points
        ],
        "parabolic_points": [list(p) for p in locus.parabolic_points],
        "components": {
            f"{i},{j}": [_arc_to_json(a) for a in arcs]
            for (i, j), arcs in sorted(locus.components.items())
        },
        "el_arcs": None if locus.el_arcs is None else [_arc_to_json(a) for a in locus.el_arcs],
        "diagnostics": locus.diagnostics,
    }


def encode(locus: Locus) -> str:
    """Deterministic JSON text (non-finite slopes are written as ``Infinity``)."""
    return json.dumps(to_dict(locus), indent=1, sort_keys=False) + "\n"


# --- decoding ---


def _need(obj: dict, key: str, types, where: str):
    if not isinstance(obj, dict):
        raise CodecError(f"{where}: expected an object")
    if key not in obj:
        raise CodecError(f"{where}: missing field {key!r}")
    value = obj[key]
    if types is not None and not isinstance(value, types):
        raise CodecError(f"{where}.{key}: unexpected type {type(value).__name__}")
    return value


def _num(value, where: str, allow_none: bool = False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CodecError(f"{where}: expected a number")
    return float(value)


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise CodecError(f"{where}: expected an integer")
    return value


def _arc_from_json(obj: dict, where: str) -> Arc:
    columns = ("x", "y", "i_tags", "j_tags", "s", "u", "point_kind", "flags")
    arrays = {c: _need(obj, c, list, where) for c in columns}
    n = len(arrays["x"])
    for c, arr in arrays.items():
        if len(arr) != n:
            raise CodecError(f"{where}.{c}: length {len(arr)} differs from x ({n})")
    if n == 0:
        raise CodecError(f"{where}: arc without points")
    i = _int(_need(obj, "i", None, where), f"{where}.i")
    j = _int(_need(obj, "j", None, where), f"{where}.j")
    points = []
    for k in range(n):
        w = f"{where}[{k}]"
        pi = _int(arrays["i_tags"][k], w + ".i")
        pj = _int(arrays["j_tags"][k], w + ".j")
        if (pi, pj) != (i, j):
            raise CodecError(f"{w}: point tags ({pi},{pj}) differ from arc tags ({i},{j})")
        x = _num(arrays["x"][k], w + ".x")
        y = _num(arrays["y"][k], w + ".y")
        if not (math.isfinite(x) and math.isfinite(y)):
            raise CodecError(f"{w}: non-finite coordinates")
        flags = arrays["flags"][k]
        if not isinstance(flags, list) or not all(isinstance(f, str) for f in flags):
            raise CodecError(f"{w}.flags: expected a list of strings")
        kind = arrays["point_kind"][k]
        if not isinstance(kind, str):
            raise CodecError(f"{w}.point_kind: expected a string")
        points.append(ArcPoint(x, y, pi, pj, _num(arrays["s"][k], w + ".s"),
                               _num(arrays["u"][k], w + ".u"), kind, frozenset(flags)))
    ends = _need(obj, "ends", list, where)
    if len(ends) != 2 or not all(e in END_REASONS for e in ends):
        raise CodecError(f"{where}.ends: expected two known end reasons, got {ends!r}")
    asym = []
    for n_a, a in enumerate(_need(obj, "asymptotes", list, where)):
        w = f"{where}.asymptotes[{n_a}]"
        end = _int(_need(a, "end", None, w), w + ".end")
        if end not in (0, 1):
            raise CodecError(f"{w}.end: must be 0 or 1")
        asym.append(Asymptote(end, _num(a.get("slope"), w + ".slope", True),
                              _num(a.get("nearest"), w + ".nearest", True),
                              _num(a.get("gap"), w + ".gap", True)))
    return Arc(
        id=_need(obj, "id", str, where),
        i=i,
        j=j,
        points=tuple(points),
        ends=(ends[0], ends[1]),
        asymptotes=tuple(asym),
        kind=_need(obj, "kind", str, where),
    )


def from_dict(doc: dict) -> Locus:
    if not isinstance(doc, dict):
        raise CodecError("top level: expected an object")
    version = doc.get("version")
    if version != VERSION:
        raise VersionError(f"unsupported locus version {version!r}; expected {VERSION!r}")
    window = _need(doc, "window", list, "locus")
    if len(window) != 2:
        raise CodecError("locus.window: expected [xmax, ymax]")
    xmax, ymax = (_num(v, "locus.window") for v in window)
    if xmax <= 0 or ymax <= 0:
        raise CodecError("locus.window: entries must be positive")
    genus = doc.get("genus")
    if genus is not None:
        genus = _int(genus, "locus.genus")
    order = _int(_need(doc, "longitude_order", None, "locus"), "locus.longitude_order")
    comps: dict = {}
    for key, arcs in _need(doc, "components", dict, "locus").items():
        try:
            i, j = (int(v) for v in key.split(","))
        except ValueError:
            raise CodecError(f"locus.components: bad key {key!r}; expected 'i,j'") from None
        if not isinstance(arcs, list):
            raise CodecError(f"locus.components[{key}]: expected a list")
        decoded = []
        for n, obj in enumerate(arcs):
            arc = _arc_from_json(obj, f"components[{key}][{n}]")
            if (arc.i, arc.j) != (i, j):
                raise CodecError(f"components[{key}][{n}]: arc tags ({arc.i},{arc.j}) differ from key")
            decoded.append(arc)
        comps[(i, j)] = tuple(decoded)
    alex = []
    for n, a in enumerate(_need(doc, "alexander_points", list, "locus")):
        w = f"alexander_points[{n}]"
        alex.append(AlexanderPoint(_num(_need(a, "x", None, w), w + ".x"),
                                   _num(_need(a, "root", None, w), w + ".root"),
                                   _int(_need(a, "multiplicity", None, w), w + ".multiplicity"),
                                   bool(_need(a, "simple", bool, w))))
    parab = []
    for n, p in enumerate(_need(doc, "parabolic_points", list, "locus")):
        if not isinstance(p, list) or len(p) != 4:
            raise CodecError(f"parabolic_points[{n}]: expected [x, y, i, j]")
        parab.append((_num(p[0], "x"), _num(p[1], "y"), _int(p[2], "i"), _int(p[3], "j")))
    el = doc.get("el_arcs")
    if el is not None:
        if not isinstance(el, list):
            raise CodecError("locus.el_arcs: expected a list or null")
        el = tuple(_arc_from_json(obj, f"el_arcs[{n}]") for n, obj in enumerate(el))
    diagnostics = doc.get("diagnostics", {})
    if not isinstance(diagnostics, dict):
        raise CodecError("locus.diagnostics: expected an object")
    return Locus(
        name=_need(doc, "name", str, "locus"),
        window=(xmax, ymax),
        components=comps,
        alexander_points=tuple(alex),
        parabolic_points=tuple(parab),
        el_arcs=el,
        diagnostics=diagnostics,
        genus=genus,
        longitude_order=order,
        presentation=_need(doc, "presentation", str, "locus"),
        quotient=bool(_need(doc, "quotient", bool, "locus")),
    )


def decode(text: str) -> Locus:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodecError(exc.msg, exc.lineno, exc.colno, exc.pos) from None
    return from_dict(doc)


def save(locus: Locus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(encode(locus))


def load(path) -> Locus:
    with open(path, encoding="utf-8") as fh:
        return decode(fh.read())


CSV_COLUMNS = ("stream", "i", "j", "arc", "index", "x", "y", "s", "u", "kind", "flags")


def to_csv(locus: Locus) -> str:
    """One row per arc point; ``stream`` is ``HL`` or ``EL``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    streams = [("HL", a) for a in locus.arcs()]
    streams += [("EL", a) for a in (locus.el_arcs or ())]
    for stream, arc in streams:
        for k, p in enumerate(arc.points):
            writer.writerow([stream, p.i, p.j, arc.id, k, repr(p.x), repr(p.y), repr(p.s),
                             repr(p.u), p.kind, ";".join(sorted(p.flags))])
    return buf.getvalue()
