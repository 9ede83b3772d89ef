"""Deterministic SVG output for instances, solutions, subdivisions and cuts.

Coordinates stay exact until emission, where they are rounded to a fixed
number of decimal places.  The y axis is flipped so the picture reads with
the origin at the bottom left.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from .cheap_cut import Cut
from .instance import Instance, Solution
from .partition import Subdivision, TriangleSet

PALETTE = ("#e6b8a2", "#b8d8be", "#b5c7e6", "#e8dca0", "#d5b8e0", "#a8dcd9", "#f0c8d8", "#c9c9a3")


@dataclass
class Canvas:
    N: int
    places: int = 3
    items: list = field(default_factory=list)

    def num(self, v) -> str:
        s = f"{float(Fraction(v)):.{self.places}f}".rstrip("0").rstrip(".")
        return "0" if s in ("-0", "") else s

    def xy(self, p) -> str:
        return f"{self.num(p[0])},{self.num(self.N - Fraction(p[1]))}"

    def polygon(self, ring, fill, stroke="none", width=0, opacity=1):
        pts = " ".join(self.xy(p) for p in ring)
        self.items.append(f'<polygon points="{pts}" fill="{fill}" fill-opacity="{opacity}" '
                          f'stroke="{stroke}" stroke-width="{self.num(width)}"/>')

    def path(self, rings, fill, opacity=1):
        # even-odd fill so holes stay empty
        d = " ".join("M " + " L ".join(self.xy(p) for p in ring) + " Z" for ring in rings)
        self.items.append(f'<path d="{d}" fill="{fill}" fill-opacity="{opacity}" fill-rule="evenodd"/>')

    def line(self, seg, stroke, width):
        (x1, y1), (x2, y2) = self.xy(seg[0]).split(","), self.xy(seg[1]).split(",")
        self.items.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" '
                          f'stroke-width="{self.num(width)}"/>')

    def rect(self, x0, y0, x1, y1, fill, opacity=1):
        self.items.append(f'<rect x="{self.num(x0)}" y="{self.num(self.N - Fraction(y1))}" '
                          f'width="{self.num(Fraction(x1) - Fraction(x0))}" '
                          f'height="{self.num(Fraction(y1) - Fraction(y0))}" fill="{fill}" '
                          f'fill-opacity="{opacity}"/>')

    def text(self) -> str:
        n = self.N
        w = Fraction(n, 200)
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {n} {n}" '
                f'width="600" height="600">')
        frame = (f'<rect x="0" y="0" width="{n}" height="{n}" fill="white" stroke="black" '
                 f'stroke-width="{self.num(w)}"/>')
        return "\n".join([head, frame, *self.items, "</svg>"]) + "\n"


def _unit(N) -> Fraction:
    return Fraction(N, 400)


def instance_svg(inst: Instance, sol: Solution | None = None, places: int = 3) -> str:
    c = Canvas(inst.N, places)
    chosen = sol.chosen if sol is not None else frozenset()
    for p in sorted(inst.polygons, key=lambda p: p.id):
        fill = "#4c8c4a" if p.id in chosen else "#9aa7b8"
        c.polygon(p.vertices, fill, "black", _unit(inst.N), 0.6)
    return c.text()


def subdivision_svg(sub: Subdivision, ts: TriangleSet | None = None, places: int = 3) -> str:
    c = Canvas(sub.N, places)
    u = _unit(sub.N)
    for i, s in enumerate(sub.stripes):
        c.rect(s.x0, 0, s.x1, sub.N, "#999999" if i % 2 else "#cccccc", 0.25)
    for i, face in enumerate(sub.faces):
        c.path(list(face.rings()), PALETTE[i % len(PALETTE)], 0.7)
    if ts is not None:
        for t in ts.triangles:
            c.polygon(t.vertices, "#555555" if t.id in sub.owned else "none", "#333333", u / 2, 0.5)
    for seg in sub.Lext:
        c.line(seg, "#b0b0b0", u)
    for seg in sub.L0:
        c.line(seg, "black", u)
    return c.text()


def cut_svg(cut: Cut, N: int, polygons=(), places: int = 3) -> str:
    """Cut overlay; polygons are rings drawn underneath."""
    c = Canvas(N, places)
    u = _unit(N)
    for ring in polygons:
        c.polygon(ring, "#9aa7b8", "black", u / 2, 0.6)
    c.polygon(cut.gamma, "#d04040", "#d04040", 2 * u, 0.15)
    return c.text()


def atomic_write(path, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_svg(artifact, path, places: int = 3, **kw) -> None:
    """Dispatch on artifact type and write the SVG atomically."""
    if isinstance(artifact, Instance):
        text = instance_svg(artifact, kw.get("solution"), places)
    elif isinstance(artifact, Subdivision):
        text = subdivision_svg(artifact, kw.get("triangles"), places)
    elif isinstance(artifact, Cut):
        text = cut_svg(artifact, kw["N"], kw.get("polygons", ()), places)
    else:
        raise TypeError(f"cannot render {type(artifact).__name__}")
    atomic_write(path, text)
