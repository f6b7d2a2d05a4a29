"""Combinatorics of the hypercube [k]^n.

Points are n-vectors with entries in 1..k.  A line template is a word over
{1..k} union {*} with at least one star; substituting i for every star
simultaneously (i = 1..k) yields the k ordered points of a combinatorial
line.  Geometric lines (anti-diagonals and friends) are deliberately not
modelled.

Conventions, fixed once so every downstream artifact is reproducible:

* point index = sum((c_t - 1) * k^(n-t)), coordinate 1 most significant;
* template streams are lexicographic with * sorting after symbol k;
* the symmetry group is coordinate permutations x uniform symbol
  permutations (per-coordinate symbol swaps do not preserve lines).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator

#: Sentinel for a starred template cell.  Rendered as "*".
STAR = 0

_MAX_POINTS = 2**32
_MAX_GROUP = 10**6


class ShapeError(ValueError):
    """Raised for invalid shapes, coordinates, symbols or indices."""


@dataclass(frozen=True)
class CubeShape:
    """The hypercube [k]^n: alphabet size k >= 2, dimension n >= 1."""

    k: int
    n: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ShapeError(f"alphabet size k must be >= 2, got {self.k}")
        if self.n < 1:
            raise ShapeError(f"dimension n must be >= 1, got {self.n}")
        if self.k**self.n > _MAX_POINTS:
            raise ShapeError(f"shape [{self.k}]^{self.n} exceeds the index budget")

    @property
    def point_count(self) -> int:
        return self.k**self.n

    @property
    def weights(self) -> tuple[int, ...]:
        """Mixed-radix weights: weights[t] = k^(n-1-t) for 0-based t."""
        return _weights(self.k, self.n)

    def iter_indices(self) -> range:
        return range(self.point_count)


@lru_cache(maxsize=None)
def _weights(k: int, n: int) -> tuple[int, ...]:
    return tuple(k ** (n - 1 - t) for t in range(n))


@dataclass(frozen=True)
class Point:
    """A vertex of [k]^n with its canonical linear index."""

    coords: tuple[int, ...]
    index: int

    def __str__(self) -> str:
        return "".join(str(c) for c in self.coords)


def point_index(coords: tuple[int, ...], shape: CubeShape) -> int:
    """Linear index of a coordinate vector (coordinate 1 most significant)."""
    if len(coords) != shape.n:
        raise ShapeError(f"expected {shape.n} coordinates, got {len(coords)}")
    idx = 0
    for c in coords:
        if not 1 <= c <= shape.k:
            raise ShapeError(f"coordinate {c} out of range 1..{shape.k}")
        idx = idx * shape.k + (c - 1)
    return idx


def point_from_index(index: int, shape: CubeShape) -> Point:
    """Inverse of :func:`point_index`."""
    if not 0 <= index < shape.point_count:
        raise ShapeError(f"index {index} out of range 0..{shape.point_count - 1}")
    coords = []
    rem = index
    for w in shape.weights:
        c, rem = divmod(rem, w)
        coords.append(c + 1)
    return Point(tuple(coords), index)


def point_of(coords: tuple[int, ...], shape: CubeShape) -> Point:
    return Point(tuple(coords), point_index(tuple(coords), shape))


@dataclass(frozen=True)
class LineTemplate:
    """A word over {1..k} union {*}; cells use STAR (= 0) for stars."""

    cells: tuple[int, ...]

    @property
    def star_set(self) -> frozenset[int]:
        """0-based positions of the stars (nonempty by construction)."""
        return frozenset(t for t, c in enumerate(self.cells) if c == STAR)

    def __str__(self) -> str:
        return "".join("*" if c == STAR else str(c) for c in self.cells)


def template_from_string(text: str, shape: CubeShape) -> LineTemplate:
    """Parse a template like "1*2"; the inverse of str()."""
    if len(text) != shape.n:
        raise ShapeError(f"template {text!r} has length {len(text)}, expected {shape.n}")
    cells = []
    for ch in text:
        if ch == "*":
            cells.append(STAR)
        elif ch.isdigit() and 1 <= int(ch) <= shape.k:
            cells.append(int(ch))
        else:
            raise ShapeError(f"bad template cell {ch!r} for k={shape.k}")
    if STAR not in cells:
        raise ShapeError(f"template {text!r} has no star")
    return LineTemplate(tuple(cells))


@dataclass(frozen=True)
class Line:
    """The k ordered points of a combinatorial line."""

    template: LineTemplate
    points: tuple[Point, ...]


def enumerate_lines(shape: CubeShape) -> Iterator[LineTemplate]:
    """All line templates of [k]^n, lexicographic with * after symbol k.

    Yields (k+1)^n - k^n templates, each exactly once.
    """
    # symbol k+1 stands for the star so plain lexicographic product order
    # puts * after k, as documented.
    star_symbol = shape.k + 1
    for word in product(range(1, star_symbol + 1), repeat=shape.n):
        if star_symbol in word:
            yield LineTemplate(tuple(STAR if c == star_symbol else c for c in word))


def line_count(shape: CubeShape) -> int:
    return (shape.k + 1) ** shape.n - shape.k**shape.n


def expand(template: LineTemplate, shape: CubeShape) -> Line:
    """The ordered points of the line: point i has symbol i at every star."""
    points = []
    for i in range(1, shape.k + 1):
        coords = tuple(i if c == STAR else c for c in template.cells)
        points.append(point_of(coords, shape))
    return Line(template, tuple(points))


@lru_cache(maxsize=None)
def line_index_table(shape: CubeShape) -> tuple[tuple[int, ...], ...]:
    """Point-index tuples of every line, in enumeration order.  Cached."""
    return tuple(
        tuple(p.index for p in expand(t, shape).points) for t in enumerate_lines(shape)
    )


@lru_cache(maxsize=None)
def template_table(shape: CubeShape) -> tuple[LineTemplate, ...]:
    return tuple(enumerate_lines(shape))


def collinear(u: Point, v: Point, shape: CubeShape) -> bool:
    """True iff u and v lie on a common combinatorial line.

    Two distinct points determine at most one line: the star set must be
    exactly the coordinate set D where they differ, and each point must be
    constant on D.
    """
    if u.index == v.index:
        raise ShapeError("collinear() requires two distinct points")
    diff = [t for t in range(shape.n) if u.coords[t] != v.coords[t]]
    u_vals = {u.coords[t] for t in diff}
    v_vals = {v.coords[t] for t in diff}
    return len(u_vals) == 1 and len(v_vals) == 1


def lines_through(p: Point, shape: CubeShape) -> list[LineTemplate]:
    """All templates whose expansion contains p, in enumeration order.

    For each symbol i the candidates are the nonempty subsets of
    {t : p_t = i} used as the star set; the count is sum(2^m_i - 1).
    """
    found = []
    positions_by_symbol: dict[int, list[int]] = {}
    for t, c in enumerate(p.coords):
        positions_by_symbol.setdefault(c, []).append(t)
    for positions in positions_by_symbol.values():
        for mask in range(1, 1 << len(positions)):
            stars = {positions[j] for j in range(len(positions)) if mask >> j & 1}
            cells = tuple(
                STAR if t in stars else p.coords[t] for t in range(shape.n)
            )
            found.append(LineTemplate(cells))
    star_symbol = shape.k + 1
    found.sort(key=lambda t: tuple(star_symbol if c == STAR else c for c in t.cells))
    return found


def layer(shape: CubeShape, t: int, i: int) -> frozenset[int]:
    """Indices of the k^(n-1) points with coordinate t equal to i (1-based)."""
    if not 1 <= t <= shape.n:
        raise ShapeError(f"coordinate {t} out of range 1..{shape.n}")
    if not 1 <= i <= shape.k:
        raise ShapeError(f"symbol {i} out of range 1..{shape.k}")
    w = shape.weights[t - 1]
    members = []
    for idx in shape.iter_indices():
        if idx // w % shape.k == i - 1:
            members.append(idx)
    return frozenset(members)


def sublayer_point(shape: CubeShape, t: int, i: int, rest_index: int) -> int:
    """Index in [k]^n of the point whose coordinate t is i and whose other
    coordinates are the digits of `rest_index` in the [k]^(n-1) subcube."""
    sub = CubeShape(shape.k, shape.n - 1)
    rest = point_from_index(rest_index, sub).coords
    coords = rest[: t - 1] + (i,) + rest[t - 1 :]
    return point_index(coords, shape)


@dataclass(frozen=True)
class Automorphism:
    """A line-preserving symmetry: permute coordinates, then relabel symbols.

    coord_perm is 0-based: image coordinate t reads source coordinate
    coord_perm[t].  symbol_perm is 0-based over symbols: symbol s maps to
    symbol_perm[s - 1].
    """

    coord_perm: tuple[int, ...]
    symbol_perm: tuple[int, ...]

    def apply_coords(self, coords: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(self.symbol_perm[coords[s] - 1] for s in self.coord_perm)

    def apply_cells(self, cells: tuple[int, ...]) -> tuple[int, ...]:
        """Template action: stars stay stars, fixed cells are relabeled."""
        return tuple(
            STAR if cells[s] == STAR else self.symbol_perm[cells[s] - 1]
            for s in self.coord_perm
        )

    @property
    def is_identity(self) -> bool:
        return all(s == t for t, s in enumerate(self.coord_perm)) and all(
            v == t + 1 for t, v in enumerate(self.symbol_perm)
        )


def automorphisms(shape: CubeShape) -> list[Automorphism]:
    """The full n!*k! coordinate x uniform-symbol group, identity first."""
    size = math.factorial(shape.k) * math.factorial(shape.n)
    if size > _MAX_GROUP:
        raise ShapeError(f"symmetry group of size {size} exceeds the {_MAX_GROUP} guard")
    out = []
    for cp in permutations(range(shape.n)):
        for sp in permutations(range(1, shape.k + 1)):
            out.append(Automorphism(cp, sp))
    return out


@lru_cache(maxsize=None)
def automorphism_index_maps(shape: CubeShape) -> tuple[tuple[int, ...], ...]:
    """For each group element, the induced permutation of point indices.

    maps[g][old_index] = new_index.  Cached; the identity is maps[0].
    """
    maps = []
    points = [point_from_index(i, shape) for i in shape.iter_indices()]
    for g in automorphisms(shape):
        maps.append(
            tuple(point_index(g.apply_coords(p.coords), shape) for p in points)
        )
    return tuple(maps)
