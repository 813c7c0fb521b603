"""Trivalent lattices with 3-colored plaquettes.

Every builder works in the dual picture: plaquettes are vertices of a
triangulation whose triangles are the qubits (sites).  On a triangle patch the
lattice vertices lying on each border line are merged into one virtual vertex
of that border's color; the merged triangulation is the sphere minus one site.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .errors import (
    DimensionNotDivisibleBy3,
    InvalidDistanceParameter,
    InvalidLattice,
    NotASphere,
    UnknownSite,
)

SQRT3 = math.sqrt(3.0)


class Color(enum.Enum):
    R = "R"
    G = "G"
    B = "B"

    @property
    def index(self) -> int:
        return _COLOR_INDEX[self]

    def __lt__(self, other: "Color") -> bool:
        return self.index < other.index

    @staticmethod
    def third(a: "Color", b: "Color") -> "Color":
        if a == b:
            raise ValueError(f"no third color for {a.value}{b.value}")
        return COLORS[3 - a.index - b.index]


COLORS = (Color.R, Color.G, Color.B)
_COLOR_INDEX = {c: i for i, c in enumerate(COLORS)}


@dataclass(frozen=True)
class Site:
    id: int
    xy: tuple[float, float]


@dataclass(frozen=True)
class Link:
    id: int
    ends: tuple[int, int]
    color: Color


@dataclass(frozen=True)
class Plaquette:
    id: int
    color: Color
    sites: tuple[int, ...]


@dataclass(frozen=True)
class Border:
    color: Color
    sites: tuple[int, ...]


@dataclass(frozen=True)
class ShrunkEdge:
    link: int
    # plaquette id at each end; None marks the same-colored border
    ends: tuple[int | None, int | None]
    qubits: tuple[int, int]


@dataclass(frozen=True)
class ShrunkGraph:
    color: Color
    vertices: tuple[int, ...]
    edges: tuple[ShrunkEdge, ...]

    def edge(self, link_id: int) -> ShrunkEdge:
        for e in self.edges:
            if e.link == link_id:
                return e
        raise KeyError(link_id)


@dataclass(frozen=True)
class ColoredLattice:
    surface: str  # "torus" | "triangle" | "sphere"
    sites: tuple[Site, ...]
    links: tuple[Link, ...]
    plaquettes: tuple[Plaquette, ...]
    borders: tuple[Border, ...] = ()
    periods: tuple[tuple[float, float], tuple[float, float]] | None = None

    @property
    def n(self) -> int:
        return len(self.sites)

    @property
    def is_closed(self) -> bool:
        return self.surface in ("torus", "sphere")

    @property
    def euler_characteristic(self) -> int:
        return len(self.plaquettes) + len(self.sites) - len(self.links)

    def plaquettes_of(self, color: Color) -> list[Plaquette]:
        return [p for p in self.plaquettes if p.color == color]

    def links_of(self, color: Color) -> list[Link]:
        return [l for l in self.links if l.color == color]

    def border(self, color: Color) -> Border:
        for b in self.borders:
            if b.color == color:
                return b
        raise KeyError(color)

    @cached_property
    def faces(self) -> tuple[tuple[Color, tuple[int, ...], bool], ...]:
        """Real plaquettes followed by border segments as ``(color, sites, is_border)``."""
        out = [(p.color, p.sites, False) for p in self.plaquettes]
        out += [(b.color, b.sites, True) for b in self.borders]
        return tuple(out)

    @cached_property
    def site_faces(self) -> tuple[tuple[int, ...], ...]:
        acc: list[list[int]] = [[] for _ in self.sites]
        for f, (_, sites, _) in enumerate(self.faces):
            for s in sites:
                acc[s].append(f)
        return tuple(tuple(a) for a in acc)

    @cached_property
    def site_links(self) -> tuple[tuple[int, ...], ...]:
        acc: list[list[int]] = [[] for _ in self.sites]
        for l in self.links:
            for s in l.ends:
                acc[s].append(l.id)
        return tuple(tuple(a) for a in acc)

    @cached_property
    def link_by_ends(self) -> dict[tuple[int, int], list[int]]:
        acc: dict[tuple[int, int], list[int]] = defaultdict(list)
        for l in self.links:
            acc[tuple(sorted(l.ends))].append(l.id)
        return dict(acc)

    @cached_property
    def link_faces(self) -> tuple[tuple[int, ...], ...]:
        """Faces (plaquettes or borders) whose boundary runs along each link."""
        acc: list[list[int]] = [[] for _ in self.links]
        for f, (_, sites, is_border) in enumerate(self.faces):
            pairs = list(zip(sites, sites[1:]))
            if not is_border and len(sites) > 1:
                pairs.append((sites[-1], sites[0]))
            for s, t in pairs:
                for lid in self.link_by_ends.get(tuple(sorted((s, t))), ()):
                    if f not in acc[lid]:
                        acc[lid].append(f)
        return tuple(tuple(a) for a in acc)

    def face_of_color(self, site: int, color: Color) -> int | None:
        """Index into :attr:`faces` of the ``color`` face containing ``site``."""
        for f in self.site_faces[site]:
            if self.faces[f][0] == color:
                return f
        return None


# ---------------------------------------------------------------------------
# dual-triangulation assembly


def _third(a: Color, b: Color) -> Color:
    return Color.third(a, b)


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate to the lowest id and step toward its smaller neighbour."""
    m = len(cycle)
    if m < 3:
        return tuple(cycle)
    i = min(range(m), key=lambda k: cycle[k])
    fwd = [cycle[(i + k) % m] for k in range(m)]
    bwd = [cycle[(i - k) % m] for k in range(m)]
    return tuple(fwd if fwd[1] < bwd[1] else bwd)


def _canonical_path(path: Sequence[int]) -> tuple[int, ...]:
    path = tuple(path)
    return path if path[0] <= path[-1] else path[::-1]


def _walk(nodes: Iterable[int], adjacency: dict[int, list[int]], closed: bool) -> list[int]:
    nodes = sorted(set(nodes))
    if not nodes:
        return []
    if closed:
        start = nodes[0]
    else:
        ends = [v for v in nodes if len(adjacency.get(v, ())) == 1]
        if len(nodes) == 1:
            return nodes
        if len(ends) != 2:
            raise InvalidLattice(f"border sites {nodes} do not form a path")
        start = min(ends)
    order = [start]
    prev = None
    cur = start
    while True:
        nxt = [v for v in adjacency.get(cur, ()) if v != prev]
        if closed and len(order) == len(nodes):
            break
        if not nxt:
            break
        step = min(nxt) if prev is None else nxt[0]
        if step == start:
            break
        order.append(step)
        prev, cur = cur, step
    if len(order) != len(nodes):
        raise InvalidLattice(f"sites {nodes} do not form a single {'cycle' if closed else 'path'}")
    return order


def _sort_key(xy: tuple[float, float]) -> tuple[float, float]:
    return (round(xy[1], 6), round(xy[0], 6))


def _assemble(
    surface: str,
    vertices: dict[Hashable, tuple[Color, bool, tuple[float, float]]],
    edges: dict[Hashable, tuple[Hashable, Hashable]],
    faces: list[tuple[tuple[Hashable, Hashable, Hashable], tuple[float, float]]],
    periods=None,
) -> ColoredLattice:
    """Turn a colored triangulation into a ColoredLattice.

    ``vertices`` maps label -> (color, is_border, xy); ``edges`` maps edge key ->
    endpoint labels; each face lists its three edge keys and a render point.
    Edges on exactly one face must join two border vertices (the removed site).
    """
    order = sorted(range(len(faces)), key=lambda f: _sort_key(faces[f][1]))
    site_of_face = {f: s for s, f in enumerate(order)}
    sites = tuple(Site(s, (round(faces[f][1][0], 6), round(faces[f][1][1], 6))) for s, f in enumerate(order))

    edge_sites: dict[Hashable, list[int]] = defaultdict(list)
    for f, (keys, _) in enumerate(faces):
        if len(set(keys)) != 3:
            raise InvalidLattice("degenerate face")
        for k in keys:
            edge_sites[k].append(site_of_face[f])

    raw_links = []
    vertex_adj: dict[Hashable, dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
    vertex_sites: dict[Hashable, set[int]] = defaultdict(set)
    for k, ss in edge_sites.items():
        u, v = edges[k]
        for s in ss:
            vertex_sites[u].add(s)
            vertex_sites[v].add(s)
        if len(ss) == 2:
            cu, cv = vertices[u][0], vertices[v][0]
            if cu == cv:
                raise InvalidLattice(f"edge {k} joins two {cu.value} plaquettes")
            a, b = sorted(ss)
            raw_links.append(((a, b), _third(cu, cv)))
            for w in (u, v):
                vertex_adj[w][a].append(b)
                vertex_adj[w][b].append(a)
        elif len(ss) == 1:
            if not (vertices[u][1] and vertices[v][1]):
                raise InvalidLattice(f"dangling edge {k} touches a real plaquette")
        else:
            raise InvalidLattice(f"edge {k} shared by {len(ss)} faces")

    raw_links.sort(key=lambda t: (t[0], t[1].index))
    links = tuple(Link(i, ends, c) for i, (ends, c) in enumerate(raw_links))

    real = [lab for lab, (_, is_border, _) in vertices.items() if not is_border and vertex_sites.get(lab)]
    real.sort(key=lambda lab: _sort_key(vertices[lab][2]))
    plaquettes = []
    for pid, lab in enumerate(real):
        cyc = _walk(vertex_sites[lab], vertex_adj[lab], closed=True)
        plaquettes.append(Plaquette(pid, vertices[lab][0], _canonical_cycle(cyc)))

    borders = []
    for lab, (color, is_border, _) in vertices.items():
        if is_border and vertex_sites.get(lab):
            path = _walk(vertex_sites[lab], vertex_adj[lab], closed=False)
            borders.append(Border(color, _canonical_path(path)))
    borders.sort(key=lambda b: b.color.index)

    return ColoredLattice(surface, sites, links, tuple(plaquettes), tuple(borders), periods)


# ---------------------------------------------------------------------------
# builders


def _tri_xy(i: float, j: float) -> tuple[float, float]:
    """Cartesian position of triangular-lattice point (i, j), spacing sqrt(3)."""
    return (SQRT3 * (i + 0.5 * j), 1.5 * j)


def build_hex_torus(a: int, b: int) -> ColoredLattice:
    """Honeycomb lattice with ``a * b`` hexagons on a torus.

    Hexagon ``(i, j)`` gets color ``(i - j) mod 3``; both periods must be
    multiples of 3 for that coloring to close.
    """
    if not (isinstance(a, int) and isinstance(b, int)) or a < 3 or b < 3 or a % 3 or b % 3:
        raise DimensionNotDivisibleBy3(f"torus periods must be multiples of 3 and >= 3, got ({a}, {b})")
    vertices = {}
    for i in range(a):
        for j in range(b):
            vertices[(i, j)] = (COLORS[(i - j) % 3], False, _tri_xy(i, j))

    def v(i, j):
        return (i % a, j % b)

    # edge (i, j, d) joins (i, j) to (i, j) + step[d]
    steps = ((1, 0), (0, 1), (1, -1))
    edges = {}
    for i in range(a):
        for j in range(b):
            for d, (di, dj) in enumerate(steps):
                edges[(i, j, d)] = ((i, j), v(i + di, j + dj))

    def e(i, j, d):
        return (i % a, j % b, d)

    faces = []
    for i in range(a):
        for j in range(b):
            up = (e(i, j, 0), e(i, j, 1), e(i, j + 1, 2))
            faces.append((up, _centroid([_tri_xy(i, j), _tri_xy(i + 1, j), _tri_xy(i, j + 1)])))
            down = (e(i, j + 1, 2), e(i + 1, j, 1), e(i, j + 1, 0))
            faces.append((down, _centroid([_tri_xy(i + 1, j), _tri_xy(i, j + 1), _tri_xy(i + 1, j + 1)])))
    periods = (_tri_xy(a, 0), _tri_xy(0, b))
    return _assemble("torus", vertices, edges, faces, periods)


def _centroid(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    return (sum(p[0] for p in points) / len(points), sum(p[1] for p in points) / len(points))


def _merged_triangle(points: dict, classify, triangles: Sequence[tuple], base_ok=None) -> ColoredLattice:
    """Shared assembly for planar patches.

    ``points`` maps lattice point -> (color, xy). ``classify(pt)`` returns
    ``"in"``, ``"out"`` or a border Color. ``triangles`` are offset triples
    (relative to a base point accepted by ``base_ok``) spanning every face.
    """
    label = {}
    for pt in points:
        kind = classify(pt)
        if kind == "out":
            continue
        label[pt] = ("border", kind) if isinstance(kind, Color) else ("p", pt)

    vertices = {}
    for pt, lab in label.items():
        color, xy = points[pt]
        if lab[0] == "border":
            if color != lab[1]:
                raise InvalidLattice(f"border point {pt} has color {color.value}, expected {lab[1].value}")
            vertices[lab] = (color, True, (0.0, 0.0))
        else:
            vertices[lab] = (color, False, xy)

    edges = {}
    faces = []
    seen = set()
    for pt in label:
        for tri, anchor in itertools.product(triangles, range(3)):
            base = tuple(p - q for p, q in zip(pt, tri[anchor]))
            if base_ok is not None and not base_ok(base):
                continue
            corners = tuple(tuple(p + q for p, q in zip(base, off)) for off in tri)
            key = tuple(sorted(corners))
            if key in seen or not all(c in label for c in corners):
                continue
            seen.add(key)
            labs = [label[c] for c in corners]
            if len(set(labs)) < 3:
                continue
            ekeys = []
            for x, y in ((0, 1), (1, 2), (0, 2)):
                ek = frozenset((labs[x], labs[y]))
                edges[ek] = (labs[x], labs[y])
                ekeys.append(ek)
            faces.append((tuple(ekeys), _centroid([points[c][1] for c in corners])))
    return _assemble("triangle", vertices, edges, faces)


def _check_odd_distance(d: int) -> None:
    if not isinstance(d, int) or isinstance(d, bool) or d < 3 or d % 2 == 0:
        raise InvalidDistanceParameter(f"distance must be an odd integer >= 3, got {d!r}")


def build_triangle_666(d: int) -> ColoredLattice:
    """Triangular patch of the honeycomb with three straight colored borders.

    In the dual (hexagon centers on a triangular lattice, color ``i - j mod 3``)
    each border is a line along a second-neighbour direction, which carries a
    single color.  ``n = (3 d^2 + 1) / 4``.
    """
    _check_odd_distance(d)
    size = 3 * (d + 1) // 2
    lim = (0, 1, size - 1)  # bounds on i - j, i + 2j, -(2i + j)

    def forms(i, j):
        return (i - j, i + 2 * j, -(2 * i + j))

    points = {}
    for i in range(-2 * size - 2, 2 * size + 3):
        for j in range(-2 * size - 2, 2 * size + 3):
            if all(f <= m for f, m in zip(forms(i, j), lim)):
                points[(i, j)] = (COLORS[(i - j) % 3], _tri_xy(i, j))

    def classify(pt):
        for color, f, m in zip(COLORS, forms(*pt), lim):
            if f == m:
                return color
        return "in"

    triangles = (((0, 0), (1, 0), (0, 1)), ((1, 0), (0, 1), (1, 1)))
    return _merged_triangle(points, classify, triangles)


def build_triangle_488(d: int) -> ColoredLattice:
    """Right-angled patch of the square-octagon lattice; every plaquette has 4 or 8 sites.

    Dual coordinates are doubled so octagon centers sit at even points and
    square centers at odd ones.  Squares are red; octagons alternate green/blue.
    The red border is a diagonal through square centers, the green border a
    horizontal zigzag and the blue border a vertical zigzag.
    """
    _check_odd_distance(d)
    half = (d - 1) // 2
    top = half % 2
    right = 1
    diag = top - half

    points = {}
    for X in range(2 * (diag - 4), 2 * (right + 3)):
        for Y in range(2 * (diag - 4), 2 * (top + 3)):
            if X % 2 == 0 and Y % 2 == 0:
                color = Color.G if (X + Y) // 2 % 2 else Color.B
            elif X % 2 and Y % 2:
                color = Color.R
            else:
                continue
            points[(X, Y)] = (color, (X / 2, Y / 2))

    def classify(pt):
        color = points[pt][0]
        x, y = pt[0] / 2, pt[1] / 2
        if x + y < diag:
            return "out"
        if color == Color.R:
            if y > top or x > right:
                return "out"
            return Color.R if x + y == diag else "in"
        if color == Color.G:
            if y > top + 1 or x > right:
                return "out"
            return Color.G if y in (top, top + 1) else "in"
        # the octagon where the red and green borders meet would be cut twice
        if x > right + 1 or y > top or (y == top and x + y == diag):
            return "out"
        return Color.B if x in (right, right + 1) else "in"

    triangles = tuple(((0, 0), a, b) for a, b in (((-1, -1), (1, -1)), ((1, -1), (1, 1)), ((1, 1), (-1, 1)), ((-1, 1), (-1, -1))))
    return _merged_triangle(points, classify, triangles, base_ok=lambda p: p[0] % 2 == 1 and p[1] % 2 == 1)


def build_cube_sphere() -> ColoredLattice:
    """The cube: smallest trivalent sphere lattice with 3-colorable faces (opposite faces share a color)."""
    corners = list(itertools.product((0, 1), repeat=3))

    def xy(c):
        r = 1.0 if c[2] else 2.0
        return (r * (2 * c[0] - 1), r * (2 * c[1] - 1))

    corners.sort(key=lambda c: _sort_key(xy(c)) + (c[2],))
    sid = {c: i for i, c in enumerate(corners)}
    sites = tuple(Site(i, xy(c)) for i, c in enumerate(corners))
    raw_links = []
    for c in corners:
        for axis in range(3):
            if c[axis] == 0:
                o = list(c)
                o[axis] = 1
                raw_links.append((tuple(sorted((sid[c], sid[tuple(o)]))), COLORS[axis]))
    raw_links.sort(key=lambda t: t[0])
    links = tuple(Link(i, e, col) for i, (e, col) in enumerate(raw_links))
    plaquettes = []
    for axis in range(3):
        u, v = [a for a in range(3) if a != axis]
        for side in (0, 1):
            cyc = []
            for pu, pv in ((0, 0), (1, 0), (1, 1), (0, 1)):
                c = [0, 0, 0]
                c[axis], c[u], c[v] = side, pu, pv
                cyc.append(sid[tuple(c)])
            plaquettes.append((COLORS[axis], _canonical_cycle(cyc)))
    plaquettes.sort(key=lambda p: (p[0].index, p[1]))
    return ColoredLattice(
        "sphere", sites, links, tuple(Plaquette(i, c, s) for i, (c, s) in enumerate(plaquettes))
    )


def make_triangle_from_sphere(sphere: ColoredLattice, site_id: int) -> ColoredLattice:
    """Delete one site with its three links and three plaquettes from a sphere lattice."""
    if not sphere.is_closed or sphere.borders or sphere.euler_characteristic != 2:
        raise NotASphere(f"expected a closed lattice with euler characteristic 2, got {sphere.euler_characteristic}")
    if not isinstance(site_id, int) or not 0 <= site_id < sphere.n:
        raise UnknownSite(site_id)

    def new(s: int) -> int:
        return s if s < site_id else s - 1

    removed = [p for p in sphere.plaquettes if site_id in p.sites]
    kept = [p for p in sphere.plaquettes if site_id not in p.sites]
    if len(removed) != 3:
        raise NotASphere(f"site {site_id} lies on {len(removed)} plaquettes")
    borders = []
    for p in removed:
        k = p.sites.index(site_id)
        path = [new(s) for s in p.sites[k + 1:] + p.sites[:k]]
        borders.append(Border(p.color, _canonical_path(path)))
    borders.sort(key=lambda b: b.color.index)
    sites = tuple(Site(new(s.id), s.xy) for s in sphere.sites if s.id != site_id)
    kept_links = sorted(
        ((tuple(sorted(new(e) for e in l.ends)), l.color) for l in sphere.links if site_id not in l.ends),
        key=lambda t: (t[0], t[1].index),
    )
    links = tuple(Link(i, e, c) for i, (e, c) in enumerate(kept_links))
    plaquettes = tuple(
        Plaquette(i, p.color, _canonical_cycle([new(s) for s in p.sites])) for i, p in enumerate(kept)
    )
    return ColoredLattice("triangle", sites, links, plaquettes, tuple(borders))


def close_triangle(tri: ColoredLattice) -> ColoredLattice:
    """Inverse of :func:`make_triangle_from_sphere`: add the missing site and turn borders into plaquettes.

    The new site gets the last id and is linked to the three corner sites.
    """
    if tri.surface != "triangle" or len(tri.borders) != 3:
        raise InvalidLattice("close_triangle needs a triangle with three borders")
    new_id = tri.n
    xs = [s.xy[0] for s in tri.sites]
    ys = [s.xy[1] for s in tri.sites]
    far = (round(sum(xs) / len(xs), 6), round(min(ys) - (max(ys) - min(ys) + 1.0), 6))
    sites = tri.sites + (Site(new_id, far),)

    on_border: dict[int, list[Color]] = defaultdict(list)
    for b in tri.borders:
        for s in b.sites:
            on_border[s].append(b.color)
    corners = sorted(s for s, cs in on_border.items() if len(cs) == 2)
    if len(corners) != 3:
        raise InvalidLattice(f"expected 3 corner sites, found {len(corners)}")
    raw = [(l.ends, l.color) for l in tri.links]
    raw += [((c, new_id), Color.third(*on_border[c])) for c in corners]
    raw.sort(key=lambda t: (t[0], t[1].index))
    links = tuple(Link(i, e, c) for i, (e, c) in enumerate(raw))
    plaq = [(p.color, p.sites) for p in tri.plaquettes]
    plaq += [(b.color, _canonical_cycle(list(b.sites) + [new_id])) for b in tri.borders]
    plaquettes = tuple(Plaquette(i, c, s) for i, (c, s) in enumerate(plaq))
    return ColoredLattice("sphere", sites, links, plaquettes)


# ---------------------------------------------------------------------------
# derived structure


def shrunk_graph(lat: ColoredLattice, color: Color) -> ShrunkGraph:
    """One vertex per ``color`` plaquette, one edge per ``color`` link.

    Each link of color c runs between the two c-colored faces touching its
    endpoints; on a triangle one of those may be the c border (``None``).
    """
    n_real = len(lat.plaquettes)
    edges = []
    for l in lat.links_of(color):
        ends = []
        for s in l.ends:
            f = lat.face_of_color(s, color)
            if f is None:
                raise InvalidLattice(f"site {s} has no {color.value} face")
            ends.append(f if f < n_real else None)
        edges.append(ShrunkEdge(l.id, (ends[0], ends[1]), l.ends))
    verts = tuple(p.id for p in lat.plaquettes_of(color))
    return ShrunkGraph(color, verts, tuple(edges))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    offenders: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]
    euler_characteristic: int | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "euler_characteristic": self.euler_characteristic,
            "checks": [{"name": c.name, "passed": c.passed, "offenders": list(c.offenders)} for c in self.checks],
        }


def validate(lat: ColoredLattice) -> ValidationReport:
    """Run every structural check; failures are reported, never raised."""
    checks = []

    def add(name, bad):
        checks.append(Check(name, not bad, tuple(bad)))

    add("site_ids_dense", [s.id for i, s in enumerate(lat.sites) if s.id != i])
    add("link_ids_dense", [l.id for i, l in enumerate(lat.links) if l.id != i])
    add("plaquette_ids_dense", [p.id for i, p in enumerate(lat.plaquettes) if p.id != i])
    n = lat.n
    add(
        "references_in_range",
        sorted(
            {s for l in lat.links for s in l.ends if not 0 <= s < n}
            | {s for _, sites, _ in lat.faces for s in sites if not 0 <= s < n}
        ),
    )
    if not checks[-1].passed:
        return ValidationReport(tuple(checks), None)

    border_count = [0] * n
    for b in lat.borders:
        for s in b.sites:
            border_count[s] += 1
    add("site_on_three_faces", [s for s in range(n) if len(lat.site_faces[s]) != 3])
    add(
        "site_degree",
        [s for s in range(n) if len(lat.site_links[s]) != (3 if border_count[s] <= 1 else 2)],
    )
    add(
        "site_face_colors_distinct",
        [s for s in range(n) if len({lat.faces[f][0] for f in lat.site_faces[s]}) != len(lat.site_faces[s])],
    )

    bad_links = []
    for l in lat.links:
        fs = lat.link_faces[l.id]
        cols = {lat.faces[f][0] for f in fs}
        if len(fs) != 2 or len(cols) != 2 or l.color in cols:
            bad_links.append(l.id)
    add("link_color_is_third", bad_links)

    bad_adj = set()
    for l in lat.links:
        fs = lat.link_faces[l.id]
        for f, g in itertools.combinations(fs, 2):
            if lat.faces[f][0] == lat.faces[g][0]:
                bad_adj.update(x for x in (f, g) if x < len(lat.plaquettes))
    add("plaquettes_three_colored", sorted(bad_adj))
    add("plaquette_sizes_even", [p.id for p in lat.plaquettes if len(p.sites) % 2])
    bad_cycles = []
    for p in lat.plaquettes:
        m = len(p.sites)
        if len(set(p.sites)) != m or any(
            tuple(sorted((p.sites[i], p.sites[(i + 1) % m]))) not in lat.link_by_ends for i in range(m)
        ):
            bad_cycles.append(p.id)
    add("plaquette_boundaries_are_cycles", bad_cycles)

    euler = None
    if lat.is_closed:
        euler = lat.euler_characteristic
        expected = {"torus": 0, "sphere": 2}[lat.surface]
        add("euler_characteristic", [] if euler == expected else [euler])
    elif lat.surface == "triangle":
        add("three_borders_distinct_colors", [] if sorted(b.color.index for b in lat.borders) == [0, 1, 2] else [len(lat.borders)])
        add("odd_site_count", [] if n % 2 else [n])
    return ValidationReport(tuple(checks), euler)


# ---------------------------------------------------------------------------
# serialization


def canonicalize(lat: ColoredLattice) -> ColoredLattice:
    """Re-normalize cycle/path orientation and rounding so serialization is stable."""
    return ColoredLattice(
        lat.surface,
        tuple(Site(s.id, (round(float(s.xy[0]), 6), round(float(s.xy[1]), 6))) for s in lat.sites),
        tuple(Link(l.id, tuple(sorted(l.ends)), l.color) for l in lat.links),
        tuple(Plaquette(p.id, p.color, _canonical_cycle(p.sites)) for p in lat.plaquettes),
        tuple(sorted((Border(b.color, _canonical_path(b.sites)) for b in lat.borders), key=lambda b: b.color.index)),
        lat.periods,
    )


def to_dict(lat: ColoredLattice) -> dict:
    out = {
        "surface": lat.surface,
        "sites": [{"id": s.id, "xy": [s.xy[0], s.xy[1]]} for s in lat.sites],
        "links": [{"id": l.id, "ends": list(l.ends), "color": l.color.value} for l in lat.links],
        "plaquettes": [{"id": p.id, "color": p.color.value, "sites": list(p.sites)} for p in lat.plaquettes],
    }
    if lat.surface == "triangle":
        out["borders"] = [{"color": b.color.value, "sites": list(b.sites)} for b in lat.borders]
    if lat.periods is not None:
        out["periods"] = [list(v) for v in lat.periods]
    return out


def from_dict(data: dict) -> ColoredLattice:
    try:
        periods = data.get("periods")
        return ColoredLattice(
            data["surface"],
            tuple(Site(int(s["id"]), (float(s["xy"][0]), float(s["xy"][1]))) for s in data["sites"]),
            tuple(Link(int(l["id"]), (int(l["ends"][0]), int(l["ends"][1])), Color(l["color"])) for l in data["links"]),
            tuple(Plaquette(int(p["id"]), Color(p["color"]), tuple(int(s) for s in p["sites"])) for p in data["plaquettes"]),
            tuple(Border(Color(b["color"]), tuple(int(s) for s in b["sites"])) for b in data.get("borders", ())),
            tuple(tuple(float(x) for x in v) for v in periods) if periods else None,
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InvalidLattice(f"malformed lattice JSON: {exc}") from exc


def dumps(lat: ColoredLattice) -> str:
    return json.dumps(to_dict(canonicalize(lat)), sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> ColoredLattice:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidLattice(f"invalid JSON: {exc}") from exc
    return from_dict(data)


def _refine(lat: ColoredLattice, cls: list) -> list:
    """Color refinement over link and face incidences until the partition is stable."""
    while True:
        sigs = []
        for s in range(lat.n):
            nbrs = sorted(cls[t] for l in lat.site_links[s] for t in lat.links[l].ends if t != s)
            faces = sorted(
                (len(lat.faces[f][1]), lat.faces[f][2], tuple(sorted(cls[t] for t in lat.faces[f][1])))
                for f in lat.site_faces[s]
            )
            sigs.append((cls[s], tuple(nbrs), tuple(faces)))
        ranks = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = [ranks[sig] for sig in sigs]
        if len(ranks) == len(set(cls)):
            return new
        cls = new


def _encode(lat: ColoredLattice, relabel: list) -> tuple:
    best = None
    for cperm in itertools.permutations(range(3)):
        cmap = {c: cperm[c.index] for c in COLORS}
        enc = (
            lat.surface,
            tuple(sorted((cmap[p.color], tuple(sorted(relabel[s] for s in p.sites))) for p in lat.plaquettes)),
            tuple(sorted((cmap[b.color], tuple(sorted(relabel[s] for s in b.sites))) for b in lat.borders)),
            tuple(sorted((tuple(sorted(relabel[s] for s in l.ends)), cmap[l.color]) for l in lat.links)),
        )
        if best is None or enc < best:
            best = enc
    return best


def canonical_form(lat: ColoredLattice, max_leaves: int = 100_000) -> tuple:
    """Relabeling-invariant encoding; site ids and color names are both free.

    Individualization-refinement without automorphism pruning, so the cost grows
    with the symmetry group; fine for the lattices built here.
    """
    leaves = 0
    best = None

    def search(cls):
        nonlocal leaves, best
        cls = _refine(lat, cls)
        counts = defaultdict(list)
        for s, c in enumerate(cls):
            counts[c].append(s)
        split = [c for c in sorted(counts) if len(counts[c]) > 1]
        if not split:
            leaves += 1
            if leaves > max_leaves:
                raise ValueError("canonical_form exceeded its leaf budget")
            enc = _encode(lat, cls)
            if best is None or enc < best:
                best = enc
            return
        target = min(split, key=lambda c: (len(counts[c]), c))
        for v in counts[target]:
            nxt = [2 * c for c in cls]
            nxt[v] += 1
            search(nxt)

    search([0] * lat.n)
    return best
