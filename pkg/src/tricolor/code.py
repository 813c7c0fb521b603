"""Color codes built from colored lattices: generators, strings, logical operators, distance."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .errors import (
    BadJunction,
    ColorMismatch,
    InvalidLattice,
    NotATorus,
    NotATriangle,
    OpenPathOnClosedSurface,
    WrongBorderColor,
)
from .lattice import COLORS, Color, ColoredLattice, ShrunkGraph, shrunk_graph, validate
from .pauli import (
    PauliOperator,
    commutes,
    in_span,
    min_weight_nontrivial,
    plaquette_operator,
    product,
    rank,
)

DEFAULT_MAX_WEIGHT = 9
SIGMAS = ("X", "Z")


@dataclass(frozen=True)
class ColorCode:
    """Stabilizer code with one X and one Z generator per plaquette.

    Generator ``g`` is the X operator of plaquette ``g`` for ``g < f`` and the
    Z operator of plaquette ``g - f`` otherwise.
    """

    lattice: ColoredLattice
    generators: tuple[PauliOperator, ...]
    n: int
    k: int
    logical_reps: tuple[tuple[PauliOperator, PauliOperator], ...]
    family: str | None = None

    @property
    def num_plaquettes(self) -> int:
        return len(self.lattice.plaquettes)

    @property
    def x_generators(self) -> tuple[PauliOperator, ...]:
        return self.generators[: self.num_plaquettes]

    @property
    def z_generators(self) -> tuple[PauliOperator, ...]:
        return self.generators[self.num_plaquettes :]

    def generator_info(self, g: int) -> tuple[int, str]:
        """``(plaquette id, sigma)`` of generator ``g``."""
        f = self.num_plaquettes
        return (g, "X") if g < f else (g - f, "Z")

    @cached_property
    def rank(self) -> int:
        return rank([g.vector for g in self.generators])

    @cached_property
    def logical_operators(self) -> tuple[PauliOperator, ...]:
        return tuple(op for pair in self.logical_reps for op in pair)

    def plaquette_sizes(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for p in self.lattice.plaquettes:
            hist[len(p.sites)] = hist.get(len(p.sites), 0) + 1
        return dict(sorted(hist.items()))


def make_code(lat: ColoredLattice, family: str | None = None) -> ColorCode:
    report = validate(lat)
    if not report.ok:
        names = ", ".join(c.name for c in report.failed())
        raise InvalidLattice(f"lattice fails checks: {names}")
    f = len(lat.plaquettes)
    gens = tuple(plaquette_operator(lat, p, "X") for p in range(f)) + tuple(
        plaquette_operator(lat, p, "Z") for p in range(f)
    )
    k = lat.n - rank([g.vector for g in gens])
    expected = 4 - 2 * lat.euler_characteristic if lat.is_closed else 1
    if k != expected:
        raise InvalidLattice(f"rank gives k={k}, expected {expected}")
    base = ColorCode(lat, gens, lat.n, k, (), family)
    if lat.surface == "torus":
        reps = tuple(_torus_basis(base))
    elif lat.surface == "triangle":
        reps = ((logical_hat(base, "X"), logical_hat(base, "Z")),)
    else:
        reps = ()
    return ColorCode(lat, gens, lat.n, k, reps, family)


def color_product(code: ColorCode, color: Color, sigma: str) -> PauliOperator:
    """Product of the ``sigma`` operators of every ``color`` plaquette."""
    ops = [plaquette_operator(code.lattice, p.id, sigma) for p in code.lattice.plaquettes_of(color)]
    return product(ops, code.n)


def logical_hat(code: ColorCode, sigma: str) -> PauliOperator:
    """``sigma`` on every qubit of a triangular code."""
    if code.lattice.surface != "triangle":
        raise NotATriangle(f"hat operators need a triangle, got {code.lattice.surface}")
    return PauliOperator.from_support(code.n, range(code.n), sigma)


# ---------------------------------------------------------------------------
# homology on the torus


def _solve2(periods, v) -> tuple[float, float]:
    (a, c), (b, d) = periods  # columns are the two periods
    det = a * d - b * c
    return ((d * v[0] - b * v[1]) / det, (-c * v[0] + a * v[1]) / det)


def _minimal_image(periods, v) -> tuple[float, float]:
    c1, c2 = _solve2(periods, v)
    r1, r2 = round(c1), round(c2)
    return (v[0] - r1 * periods[0][0] - r2 * periods[1][0], v[1] - r1 * periods[0][1] - r2 * periods[1][1])


class _TorusGeometry:
    """Plaquette centers and per-link lattice windings for a torus lattice."""

    def __init__(self, lat: ColoredLattice):
        if lat.surface != "torus" or lat.periods is None:
            raise NotATorus(f"expected a torus lattice, got {lat.surface}")
        self.lat = lat
        self.periods = lat.periods
        self.centers = [self._center(p.sites) for p in lat.plaquettes]

    def _xy(self, s):
        return self.lat.sites[s].xy

    def _diff(self, a, b):
        return _minimal_image(self.periods, (b[0] - a[0], b[1] - a[1]))

    def _center(self, sites):
        x0 = self._xy(sites[0])
        acc = [0.0, 0.0]
        for s in sites:
            d = self._diff(x0, self._xy(s))
            acc[0] += d[0]
            acc[1] += d[1]
        return (x0[0] + acc[0] / len(sites), x0[1] + acc[1] / len(sites))

    def winding(self, start: int, s1: int, s2: int, end: int) -> tuple[int, int]:
        """Integer period vector picked up going from plaquette ``start`` via sites s1, s2 to ``end``."""
        steps = [
            self._diff(self.centers[start], self._xy(s1)),
            self._diff(self._xy(s1), self._xy(s2)),
            self._diff(self._xy(s2), self.centers[end]),
        ]
        dx = self.centers[start][0] + sum(s[0] for s in steps) - self.centers[end][0]
        dy = self.centers[start][1] + sum(s[1] for s in steps) - self.centers[end][1]
        c1, c2 = _solve2(self.periods, (dx, dy))
        return (round(c1), round(c2))


@dataclass(frozen=True)
class _Edge:
    link: int
    u: int | None
    v: int | None
    wind: tuple[int, int]  # winding from u to v


def _edges(lat: ColoredLattice, graph: ShrunkGraph, geom: _TorusGeometry | None) -> list[_Edge]:
    out = []
    for e in graph.edges:
        u, v = e.ends
        wind = (0, 0)
        if geom is not None:
            wind = geom.winding(u, e.qubits[0], e.qubits[1], v)
        out.append(_Edge(e.link, u, v, wind))
    return out


def homology_class(code: ColorCode, color: Color, path: Sequence[int]) -> tuple[int, int]:
    """Z2 winding numbers of a closed path of ``color`` links."""
    geom = _TorusGeometry(code.lattice)
    by_link = {e.link: e for e in _edges(code.lattice, shrunk_graph(code.lattice, color), geom)}
    _check_path(code.lattice, color, path)
    _odd_ends(by_link, path, closed=True)
    # orientation does not matter mod 2
    w1 = sum(by_link[l].wind[0] for l in path) % 2
    w2 = sum(by_link[l].wind[1] for l in path) % 2
    return (w1, w2)


def _shortest_walks(edges: Sequence[_Edge], vertices: Sequence[int]):
    """Shortest closed walk through each vertex for every nonzero Z2 winding class.

    Returns ``{class: (length, [link ids])}`` minimized over start vertices,
    ties broken by the smallest start vertex.
    """
    adj: dict[int, list[tuple[int, int, tuple[int, int]]]] = {v: [] for v in vertices}
    for e in edges:
        w = (e.wind[0] & 1, e.wind[1] & 1)
        adj[e.u].append((e.v, e.link, w))
        adj[e.v].append((e.u, e.link, w))
    best: dict[tuple[int, int], tuple[int, list[int]]] = {}
    for start in sorted(vertices):
        parent = {(start, (0, 0)): None}
        queue = deque([(start, (0, 0))])
        while queue:
            state = queue.popleft()
            v, cls = state
            for nxt, link, w in adj[v]:
                ncls = (cls[0] ^ w[0], cls[1] ^ w[1])
                key = (nxt, ncls)
                if key in parent:
                    continue
                parent[key] = (state, link)
                queue.append(key)
        for cls in ((1, 0), (0, 1), (1, 1)):
            key = (start, cls)
            if key not in parent:
                continue
            path = []
            while parent[key] is not None:
                key, link = parent[key]
                path.append(link)
            path.reverse()
            if cls not in best or len(path) < best[cls][0]:
                best[cls] = (len(path), path)
    return best


def shortest_noncontractible_strings(code: ColorCode) -> dict[tuple[Color, tuple[int, int]], list[int]]:
    """Shortest closed path of each color in each nonzero homology class (BFS over shrunk lattices)."""
    geom = _TorusGeometry(code.lattice)
    out = {}
    for c in COLORS:
        g = shrunk_graph(code.lattice, c)
        for cls, (_, path) in _shortest_walks(_edges(code.lattice, g, geom), g.vertices).items():
            out[(c, cls)] = path
    return out


def noncontractible_string_weight(code: ColorCode) -> int:
    """Weight of the lightest string with nontrivial homology, found by graph search alone."""
    paths = shortest_noncontractible_strings(code)
    # distinct same-colored links never share a site, so each link adds two qubits
    return min(2 * len(p) for p in paths.values())


def support_has_noncontractible_cycle(code: ColorCode, qubits: int) -> bool:
    """Whether some shrunk lattice has a homologically nontrivial cycle using only links inside ``qubits``.

    ``qubits`` is a bitmask; a link is usable when both of its sites are in it.
    """
    geom = _TorusGeometry(code.lattice)
    for c in COLORS:
        g = shrunk_graph(code.lattice, c)
        inside = [e for e in _edges(code.lattice, g, geom) if all(qubits >> q & 1 for q in code.lattice.links[e.link].ends)]
        if _shortest_walks(inside, g.vertices):
            return True
    return False


# ---------------------------------------------------------------------------
# string operators


@dataclass(frozen=True)
class StringOperator:
    color: Color
    sigma: str
    path: tuple[int, ...]
    word: PauliOperator
    homology_label: int | None = None


@dataclass(frozen=True)
class TriStringOperator:
    junction: int
    segments: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]  # R, G, B
    sigma: str
    word: PauliOperator


def _check_sigma(sigma: str) -> None:
    if sigma not in SIGMAS:
        raise ValueError(f"sigma must be X or Z, got {sigma!r}")


def _check_path(lat: ColoredLattice, color: Color, path: Sequence[int]) -> None:
    for l in path:
        if not isinstance(l, int) or not 0 <= l < len(lat.links):
            raise ColorMismatch(f"link {l} does not exist")
        if lat.links[l].color != color:
            raise ColorMismatch(f"link {l} is {lat.links[l].color.value}, path color is {color.value}")


def _odd_ends(by_link: Mapping[int, object], path: Sequence[int], closed: bool) -> dict:
    deg: dict = {}
    for l in path:
        e = by_link[l]
        for end in (e.u, e.v):
            deg[end] = deg.get(end, 0) ^ 1
    return {v for v, d in deg.items() if d}


def _support(lat: ColoredLattice, path: Sequence[int]) -> int:
    bits = 0
    for l in path:
        for s in lat.links[l].ends:
            bits ^= 1 << s
    return bits


def _word(n: int, bits: int, sigma: str) -> PauliOperator:
    return PauliOperator(n, bits, 0) if sigma == "X" else PauliOperator(n, 0, bits)


def string_operator(
    code: ColorCode, color: Color, path: Sequence[int], sigma: str, homology_label: int | None = None
) -> StringOperator:
    """String of ``sigma`` along a path of ``color`` links.

    The path must be closed, except on a triangle where open ends are allowed
    on the border of the same color.
    """
    _check_sigma(sigma)
    lat = code.lattice
    _check_path(lat, color, path)
    by_link = {e.link: e for e in _edges(lat, shrunk_graph(lat, color), None)}
    ends = _odd_ends(by_link, path, closed=lat.is_closed)
    if lat.is_closed and ends:
        raise OpenPathOnClosedSurface(f"path ends at plaquettes {sorted(ends)}")
    bulk = sorted(v for v in ends if v is not None)
    if bulk:
        raise WrongBorderColor(f"open {color.value} path must end on the {color.value} border, ends at {bulk}")
    word = _word(code.n, _support(lat, path), sigma)
    return StringOperator(color, sigma, tuple(path), word, homology_label)


_LABEL_CLASS = {1: (1, 0), 2: (0, 1)}


def canonical_string(code: ColorCode, color: Color, mu: int, sigma: str) -> StringOperator:
    """Shortest ``color`` string winding once along period ``mu`` (1 or 2)."""
    if code.lattice.surface != "torus":
        raise NotATorus("homology labels exist only on the torus")
    if mu not in _LABEL_CLASS:
        raise ValueError(f"mu must be 1 or 2, got {mu}")
    geom = _TorusGeometry(code.lattice)
    g = shrunk_graph(code.lattice, color)
    walks = _shortest_walks(_edges(code.lattice, g, geom), g.vertices)
    _, path = walks[_LABEL_CLASS[mu]]
    return string_operator(code, color, path, sigma, homology_label=mu)


# pairs (X-bar_i, Z-bar_i) as (label, color) of the X string and of the Z string
_TORUS_BASIS = (
    ((2, Color.G), (1, Color.R)),
    ((2, Color.R), (1, Color.G)),
    ((1, Color.G), (2, Color.R)),
    ((1, Color.R), (2, Color.G)),
)


def _torus_basis(code: ColorCode) -> list[tuple[PauliOperator, PauliOperator]]:
    out = []
    for (mx, cx), (mz, cz) in _TORUS_BASIS:
        x = canonical_string(code, cx, mx, "X").word
        z = canonical_string(code, cz, mz, "Z").word
        out.append((x, z))
    return out


def torus_logical_basis(code: ColorCode) -> list[tuple[PauliOperator, PauliOperator]]:
    """Four logical pairs built from red and green strings of both homology labels."""
    if code.lattice.surface != "torus":
        raise NotATorus(f"expected a torus code, got {code.lattice.surface}")
    return _torus_basis(code)


def commutation_matrix(ops: Sequence[PauliOperator]) -> list[list[int]]:
    """1 where a pair anticommutes."""
    return [[0 if commutes(a, b) else 1 for b in ops] for a in ops]


def combine_colors_check(
    code: ColorCode, mu: int, sigma: str = "X", mod_sign: bool = True, swap: Color | None = None
) -> bool:
    """Whether the product of the R, G and B strings with label ``mu`` is a stabilizer.

    ``swap`` replaces that color's string by the one with the other label.
    """
    if code.lattice.surface != "torus":
        raise NotATorus(f"expected a torus code, got {code.lattice.surface}")
    words = []
    for c in COLORS:
        label = (3 - mu) if c == swap else mu
        words.append(canonical_string(code, c, label, sigma).word)
    return in_span(product(words), code.generators, mod_sign=mod_sign)


# ---------------------------------------------------------------------------
# 3-strings on triangles


def _shortest_to_border(lat: ColoredLattice, color: Color, start: int) -> list[int]:
    """BFS from plaquette ``start`` to the ``color`` border through ``color`` links."""
    adj: dict = {}
    for e in shrunk_graph(lat, color).edges:
        u, v = e.ends
        adj.setdefault(u, []).append((v, e.link))
        adj.setdefault(v, []).append((u, e.link))
    parent = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if v is None:
            break
        for w, link in sorted(adj.get(v, ()), key=lambda t: t[1]):
            if w not in parent:
                parent[w] = (v, link)
                queue.append(w)
    if None not in parent:
        raise InvalidLattice(f"no {color.value} path reaches the border")
    path, node = [], None
    while parent[node] is not None:
        node, link = parent[node]
        path.append(link)
    return path[::-1]


def tristring_operator(
    code: ColorCode, junction: int, paths: Mapping[Color, Sequence[int]], sigma: str
) -> TriStringOperator:
    """Join three same-sigma strings, one per color, at site ``junction``.

    Segment C runs from the C plaquette containing the junction to the C
    border; it is empty when the junction already lies on that border.  The
    junction qubit itself is included, which cancels the three endpoint
    excitations.
    """
    _check_sigma(sigma)
    lat = code.lattice
    if lat.surface != "triangle":
        raise NotATriangle(f"3-strings need a triangle, got {lat.surface}")
    if not isinstance(junction, int) or not 0 <= junction < lat.n:
        raise BadJunction(f"junction {junction} is not a site")
    n_real = len(lat.plaquettes)
    bits = 1 << junction
    segments = []
    for c in COLORS:
        path = list(paths.get(c, ()))
        _check_path(lat, c, path)
        by_link = {e.link: e for e in _edges(lat, shrunk_graph(lat, c), None)}
        ends = _odd_ends(by_link, path, closed=False)
        f = lat.face_of_color(junction, c)
        start = f if f is not None and f < n_real else None
        if start is None:
            if path:
                raise BadJunction(f"junction {junction} lies on the {c.value} border, {c.value} segment must be empty")
        else:
            if start not in ends:
                raise BadJunction(f"{c.value} segment does not start at plaquette {start}")
            if ends != {start, None}:
                raise WrongBorderColor(f"{c.value} segment must end on the {c.value} border")
        bits ^= _support(lat, path)
        segments.append(tuple(path))
    return TriStringOperator(junction, tuple(segments), sigma, _word(code.n, bits, sigma))


def canonical_tristring(code: ColorCode, sigma: str, junction: int | None = None) -> TriStringOperator:
    """3-string with shortest segments; the default junction is the lowest-id site on all three real plaquettes."""
    lat = code.lattice
    if lat.surface != "triangle":
        raise NotATriangle(f"3-strings need a triangle, got {lat.surface}")
    n_real = len(lat.plaquettes)
    if junction is None:
        junction = next(s for s in range(lat.n) if all(f < n_real for f in lat.site_faces[s]))
    paths = {}
    for c in COLORS:
        f = lat.face_of_color(junction, c)
        paths[c] = _shortest_to_border(lat, c, f) if f is not None and f < n_real else []
    return tristring_operator(code, junction, paths, sigma)


# ---------------------------------------------------------------------------
# distance


def _is_css(code: ColorCode) -> bool:
    return all(g.x == 0 or g.z == 0 for g in code.generators) and all(
        x.z == 0 and z.x == 0 for x, z in code.logical_reps
    )


def distance_witness(
    code: ColorCode,
    max_weight: int | None = DEFAULT_MAX_WEIGHT,
    budget: int | None = None,
    threads: int = 1,
    css: bool = True,
) -> tuple[int, PauliOperator] | None:
    """Lightest logical operator, or None when it is heavier than ``max_weight``.

    For CSS codes (``css=True``) a logical operator ``X^a Z^b`` is nontrivial
    only if ``X^a`` or ``Z^b`` is, so the search runs separately over X-type
    and Z-type classes, which halves the rank of each enumeration.
    """
    if max_weight is not None and max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    if code.k == 0:
        return None
    if css and _is_css(code):
        xs = [x for x, _ in code.logical_reps]
        zs = [z for _, z in code.logical_reps]
        found = [
            min_weight_nontrivial(list(code.x_generators), xs, max_weight, budget, threads),
            min_weight_nontrivial(list(code.z_generators), zs, max_weight, budget, threads),
        ]
        found = [f for f in found if f is not None]
        if not found:
            return None
        return min(found, key=lambda t: (t[0], t[1].x, t[1].z))
    return min_weight_nontrivial(list(code.generators), list(code.logical_operators), max_weight, budget, threads)


def distance(
    code: ColorCode, max_weight: int | None = DEFAULT_MAX_WEIGHT, budget: int | None = None, threads: int = 1
) -> int | None:
    found = distance_witness(code, max_weight, budget, threads)
    return None if found is None else found[0]


def is_logical(code: ColorCode, op: PauliOperator) -> bool:
    """Commutes with every generator but is not a stabilizer (up to sign)."""
    return all(commutes(op, g) for g in code.generators) and not in_span(op, code.generators)


def expected_k(lat: ColoredLattice) -> int:
    return 4 - 2 * lat.euler_characteristic if lat.is_closed else 1


def binom_budget(n: int, w: int) -> int:
    return sum(math.comb(n, i) for i in range(w + 1))
