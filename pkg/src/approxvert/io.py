"""cdd-style ``.ine``/``.ext`` files and OFF, SVG and CSV exports."""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import FormatError
from .hrep import HPolytope
from .numerics import RATIONAL, get_backend, to_rational

_RATIONAL_TOKEN = re.compile(r"^[+-]?\d+(/\d+)?$")
_REAL_TOKEN = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


@dataclass
class CddData:
    """Parsed body of a cdd file: rows as exact rationals plus the declared number type."""

    kind: str
    number_type: str
    rows: list

    @property
    def dim(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else 0


def _token(tok: str, number_type: str, lineno: int):
    pat = _RATIONAL_TOKEN if number_type == "rational" else _REAL_TOKEN
    if not pat.match(tok):
        raise FormatError(f"line {lineno}: token {tok!r} is not {number_type}")
    try:
        return to_rational(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"line {lineno}: bad number {tok!r}") from exc


def parse_cdd(text: str) -> CddData:
    """Parse an ``H-representation`` or ``V-representation`` block.

    Lines starting with ``*`` and anything after ``end`` are ignored.
    """
    lines = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), 1)]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("*")]
    kind = None
    it = iter(lines)
    for n, ln in it:
        low = ln.lower()
        if low in ("h-representation", "v-representation"):
            kind = low[0].upper()
        elif low == "begin":
            break
    else:
        raise FormatError("missing 'begin'")
    if kind is None:
        raise FormatError("missing representation header")
    try:
        n, head = next(it)
    except StopIteration:
        raise FormatError("missing size line") from None
    parts = head.split()
    if len(parts) != 3:
        raise FormatError(f"line {n}: expected 'm n type'")
    try:
        m, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"line {n}: bad size line") from None
    ntype = parts[2].lower()
    if ntype not in ("real", "rational"):
        raise FormatError(f"line {n}: number type must be real or rational")
    if m < 1 or cols < 2:
        raise FormatError(f"line {n}: empty system")
    rows = []
    ended = False
    for n, ln in it:
        if ln.lower() == "end":
            ended = True
            break
        toks = ln.split()
        if len(toks) != cols:
            raise FormatError(f"line {n}: expected {cols} entries, got {len(toks)}")
        rows.append(tuple(_token(t, ntype, n) for t in toks))
    if not ended:
        raise FormatError("missing 'end'")
    if len(rows) != m:
        raise FormatError(f"declared {m} rows, found {len(rows)}")
    return CddData(kind, ntype, rows)


def _read(src) -> str:
    if isinstance(src, Path) or (isinstance(src, str) and "\n" not in src and Path(src).exists()):
        return Path(src).read_text()
    return src


def read_ine(src):
    """``(A, b, number_type)`` for ``A x <= b`` from an ``.ine`` file or its text.

    A row ``(b_i, c_i)`` means ``b_i + c_i x >= 0``, i.e. ``-c_i x <= b_i``.
    """
    data = parse_cdd(_read(src))
    if data.kind != "H":
        raise FormatError("expected an H-representation")
    A = [tuple(-c for c in r[1:]) for r in data.rows]
    b = [r[0] for r in data.rows]
    return A, b, data.number_type


def polytope_from_ine(src, backend=RATIONAL):
    """Read an ``.ine`` whose right-hand sides are all positive as a canonical polytope.

    Returns ``None`` when some ``b_i <= 0``; such inputs need recentring.
    """
    A, b, _ = read_ine(src)
    if any(x <= 0 for x in b):
        return None
    rows = [tuple(a / bi for a in row) for row, bi in zip(A, b)]
    return HPolytope.from_rows(rows, get_backend(backend))


def _fmt(x, number_type: str) -> str:
    if number_type == "real":
        return repr(float(x))
    q = to_rational(x)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _number_type(values) -> str:
    return "real" if any(isinstance(x, float) for x in values) else "rational"


def write_ine(P: HPolytope, number_type: str | None = None) -> str:
    """Canonical rows ``A_i`` as cdd rows ``(1, -A_i)``."""
    nt = number_type or _number_type(x for r in P.A for x in r)
    out = ["H-representation", "begin", f"{P.m} {P.d + 1} {nt}"]
    for r in P.A:
        out.append(" ".join([_fmt(1, nt)] + [_fmt(-x, nt) for x in r]))
    out.append("end")
    return "\n".join(out) + "\n"


def write_ext(points, number_type: str | None = None) -> str:
    points = [tuple(p) for p in points]
    if not points:
        raise ValueError("no points to write")
    nt = number_type or _number_type(x for p in points for x in p)
    out = ["V-representation", "begin", f"{len(points)} {len(points[0]) + 1} {nt}"]
    for p in points:
        out.append(" ".join([_fmt(1, nt)] + [_fmt(x, nt) for x in p]))
    out.append("end")
    return "\n".join(out) + "\n"


def read_ext(src) -> list:
    data = parse_cdd(_read(src))
    if data.kind != "V":
        raise FormatError("expected a V-representation")
    if any(r[0] != 1 for r in data.rows):
        raise FormatError("only points (leading 1) are supported")
    return [tuple(r[1:]) for r in data.rows]


def write_csv(ids, points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    d = len(points[0]) if points else 0
    w.writerow(["id"] + [f"x{j}" for j in range(1, d + 1)])
    for v, p in zip(ids, points):
        w.writerow([v] + [repr(float(x)) for x in p])
    return buf.getvalue()


def write_off(g, triangulate: bool = False, coords=None) -> str:
    """One polygon per bounding walk of every valid face of a spatial plane graph.

    ``coords`` overrides the graph's own coordinates.
    """
    coords = g.coords if coords is None else coords
    ids = g.vertices
    if any(len(coords.get(v, ())) != 3 for v in ids):
        raise ValueError("OFF export needs a graph with 3-d coordinates")
    index = {v: k for k, v in enumerate(ids)}
    polys = []
    for f in sorted(g.faces):
        if not g.faces[f].valid:
            continue
        for walk in g.bounding_walks(f):
            loop = [index[v] for v in walk]
            if triangulate:
                polys.extend([loop[0], loop[k], loop[k + 1]] for k in range(1, len(loop) - 1))
            else:
                polys.append(loop)
    out = ["OFF", f"{len(ids)} {len(polys)} 0"]
    out += [" ".join(repr(float(x)) for x in coords[v]) for v in ids]
    out += [" ".join(str(k) for k in [len(p)] + p) for p in polys]
    return "\n".join(out) + "\n"


def write_svg(g, size: int = 400, pad: int = 20, coords=None) -> str:
    """Planar graph drawing; the invalid face is the background."""
    coords = g.coords if coords is None else coords
    ids = g.vertices
    if any(len(coords.get(v, ())) != 2 for v in ids):
        raise ValueError("SVG export needs a graph with 2-d coordinates")
    xs = [float(coords[v][0]) for v in ids]
    ys = [float(coords[v][1]) for v in ids]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    s = (size - 2 * pad) / span

    def xy(v):
        x, y = (float(t) for t in coords[v])
        return pad + (x - min(xs)) * s, size - pad - (y - min(ys)) * s

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="#e6e6e6"/>']
    for f in sorted(g.faces):
        if not g.faces[f].valid:
            continue
        for walk in g.bounding_walks(f):
            pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in map(xy, walk))
            out.append(f'<polygon points="{pts}" fill="#ffffff" stroke="#1f4e9a" stroke-width="1.5"/>')
    for u, w in sorted(g.edge_set()):
        (a, b), (c, e) = xy(u), xy(w)
        out.append(f'<line x1="{a:.3f}" y1="{b:.3f}" x2="{c:.3f}" y2="{e:.3f}" stroke="#1f4e9a"/>')
    for v in ids:
        a, b = xy(v)
        out.append(f'<circle cx="{a:.3f}" cy="{b:.3f}" r="2.5" fill="#c0392b"><title>{v}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
