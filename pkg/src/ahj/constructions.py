"""Explicit rainbow-free colorings: digit-position, layer stacking, singletons.

Each generator returns a total Coloring and guarantees rainbow-freeness by
construction; the guarantees are also re-checked in the test suite.
"""

from __future__ import annotations

from typing import Iterable

from .coloring import Coloring, canonical_relabel, is_rainbow_free
from .hypercube import (
    CubeShape,
    LineTemplate,
    layer,
    line_index_table,
    point_from_index,
    template_table,
)


class ConstructionError(ValueError):
    """A construction precondition failed; may carry a witnessing line."""

    def __init__(self, message: str, witness: LineTemplate | None = None):
        super().__init__(message)
        self.witness = witness


def monochromatic(shape: CubeShape) -> Coloring:
    """Every point color 1; rainbow-free for every shape with k >= 2."""
    return Coloring(shape, (1,) * shape.point_count)


def digit_position_coloring(shape: CubeShape) -> Coloring:
    """Group points by where each of the symbols 1..k-2 occurs.

    Coordinates holding k-1 or k are interchangeable, so each coordinate
    contributes one of k-1 classes and the coloring uses (k-1)^n colors.
    On any line, the points with star value k-1 and k agree everywhere
    else and land in the same class, so no line is rainbow.
    """
    k, n = shape.k, shape.n
    if k < 3:
        raise ConstructionError("digit-position coloring needs k >= 3")
    high = k - 1
    colors = []
    for idx in shape.iter_indices():
        code = 0
        for v in point_from_index(idx, shape).coords:
            digit = v - 1 if v <= k - 2 else high - 1
            code = code * high + digit
        colors.append(code + 1)
    return Coloring(shape, tuple(colors))


def stack_recursive(base: Coloring, stacking_coord: int = 1) -> Coloring:
    """Grow a rainbow-free coloring of [k]^(n-1) into one of [k]^n.

    Layers 1..k-2 along the stacking coordinate carry disjoint fresh
    relabelings of the base (contiguous id blocks in layer order); layers
    k-1 and k share one final fresh color.  A line inside a low layer
    copies a base line, a line inside a high layer is monochromatic, and
    a line crossing layers hits both high layers in the shared color, so
    the result stays rainbow-free with (k-2) * base_colors + 1 colors.
    """
    k = base.shape.k
    if k < 3:
        raise ConstructionError("layer stacking needs k >= 3")
    if not base.is_total:
        raise ConstructionError("base coloring must be total")
    if not is_rainbow_free(base):
        raise ConstructionError("base coloring must be rainbow-free")
    shape = CubeShape(k, base.shape.n + 1)
    t = stacking_coord
    if not 1 <= t <= shape.n:
        raise ConstructionError(f"stacking coordinate {t} out of range 1..{shape.n}")

    base_colors = canonical_relabel(base).colors
    width = max(base_colors)
    cap_color = (k - 2) * width + 1
    out = [0] * shape.point_count
    for i in range(1, k + 1):
        members = sorted(layer(shape, t, i))
        for rest_index, idx in enumerate(members):
            if i <= k - 2:
                out[idx] = (i - 1) * width + base_colors[rest_index]
            else:
                out[idx] = cap_color
    return Coloring(shape, tuple(out))


def singleton_set_coloring(shape: CubeShape, special: Iterable[int]) -> Coloring:
    """One dominant color plus a distinct color per special point.

    Sound whenever every line meets the special set in at most k-2
    points: the other two points on the line share the dominant color.
    For k=3 this is exactly pairwise non-collinearity of the set.
    """
    special_set = frozenset(special)
    for idx in special_set:
        if not 0 <= idx < shape.point_count:
            raise ConstructionError(f"point index {idx} out of range")
    for tmpl, idxs in zip(template_table(shape), line_index_table(shape)):
        hits = sum(1 for i in idxs if i in special_set)
        if hits > shape.k - 2:
            raise ConstructionError(
                f"line {tmpl} meets the special set in {hits} points "
                f"(at most {shape.k - 2} allowed)",
                witness=tmpl,
            )
    colors = [1] * shape.point_count
    for next_id, idx in enumerate(sorted(special_set), start=2):
        colors[idx] = next_id
    return Coloring(shape, tuple(colors))
