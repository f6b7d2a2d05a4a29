"""Exact search: maximum-color rainbow-free colorings and completions.

The optimization runs over class partitions instead of colorings: a total
coloring is rainbow-free iff every line carries two same-class points, and
maximizing colors is minimizing class merges.  Branch and bound explores
merge decisions over a trailed union-find with exclusion constraints
("these two points stay in different classes"), unit propagation of forced
merges, and an admissible disjoint-line lower bound.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .coloring import Coloring, canonical_relabel, census, is_rainbow_free
from .constructions import digit_position_coloring, monochromatic, singleton_set_coloring
from .hypercube import (
    CubeShape,
    LineTemplate,
    Point,
    automorphism_index_maps,
    line_index_table,
    point_from_index,
    template_table,
)


class SearchError(ValueError):
    """Invalid search input or unsupported shape."""


class Status(Enum):
    OPTIMAL = "OPTIMAL"
    FEASIBLE_ONLY = "FEASIBLE_ONLY"
    INFEASIBLE = "INFEASIBLE"
    TIMEOUT = "TIMEOUT"


@dataclass(frozen=True)
class SearchConfig:
    time_limit: float | None = None
    worker_count: int = 1
    symmetry_reduction: bool = True
    node_limit: int | None = None

    def __post_init__(self) -> None:
        if self.time_limit is not None and self.time_limit <= 0:
            raise SearchError("time_limit must be positive")
        if self.worker_count < 1:
            raise SearchError("worker_count must be >= 1")
        if self.node_limit is not None and self.node_limit <= 0:
            raise SearchError("node_limit must be positive")


@dataclass(frozen=True)
class ForcedCell:
    """A free cell whose constraining lines admit no color at all."""

    point: Point
    witnesses: tuple[LineTemplate, ...]


@dataclass(frozen=True)
class SearchOutcome:
    status: Status
    best_value: int
    witness: Coloring | None
    nodes_explored: int
    wall_time: float
    certificate: ForcedCell | LineTemplate | None = None


class MergeState:
    """Union-find over point indices with an undo trail.

    No path compression: every structural change is a single reversible
    record.  `anti` constraints pin two classes apart; they are kept as a
    root adjacency map so violation checks are O(find).
    """

    __slots__ = ("shape", "parent", "size", "merge_count", "_incompat", "_trail")

    def __init__(self, shape: CubeShape):
        self.shape = shape
        count = shape.point_count
        self.parent = list(range(count))
        self.size = [1] * count
        self.merge_count = 0
        self._incompat: dict[int, set[int]] = {}
        self._trail: list[tuple] = []

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            x = parent[x]
        return x

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def blocked(self, a: int, b: int) -> bool:
        """True iff an anti constraint keeps a and b in different classes."""
        ra = self.find(a)
        return self.find(b) in self._incompat.get(ra, ())

    def forbid(self, a: int, b: int) -> None:
        """Pin the classes of a and b apart from here on (undoable)."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            raise SearchError("cannot forbid a pair already in one class")
        if rb in self._incompat.get(ra, ()):
            self._trail.append(("noop",))
            return
        self._incompat.setdefault(ra, set()).add(rb)
        self._incompat.setdefault(rb, set()).add(ra)
        self._trail.append(("anti", ra, rb))

    def merge(self, a: int, b: int) -> None:
        """Union the classes of a and b; the pair must be distinct and unblocked."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            raise SearchError("merge of an already merged pair")
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        if rb in self._incompat.get(ra, ()):
            raise SearchError("merge of a forbidden pair")
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.merge_count += 1
        moved = []
        mine = self._incompat.setdefault(ra, set())
        for r in self._incompat.get(rb, ()):
            self._incompat[r].discard(rb)
            fresh = r not in mine
            if fresh:
                mine.add(r)
                self._incompat[r].add(ra)
            moved.append((r, fresh))
        self._trail.append(("union", ra, rb, tuple(moved)))

    def mark(self) -> int:
        return len(self._trail)

    def undo_to(self, mark: int) -> None:
        while len(self._trail) > mark:
            entry = self._trail.pop()
            tag = entry[0]
            if tag == "union":
                _, ra, rb, moved = entry
                for r, fresh in reversed(moved):
                    if fresh:
                        self._incompat[ra].discard(r)
                        self._incompat[r].discard(ra)
                    self._incompat[r].add(rb)
                self.parent[rb] = rb
                self.size[ra] -= self.size[rb]
                self.merge_count -= 1
            elif tag == "anti":
                _, ra, rb = entry
                self._incompat[ra].discard(rb)
                self._incompat[rb].discard(ra)

    @property
    def class_count(self) -> int:
        return self.shape.point_count - self.merge_count

    def line_satisfied(self, idxs: tuple[int, ...]) -> bool:
        roots = [self.find(i) for i in idxs]
        return len(set(roots)) < len(roots)

    def to_coloring(self) -> Coloring:
        mapping: dict[int, int] = {}
        out = []
        for i in self.shape.iter_indices():
            r = self.find(i)
            if r not in mapping:
                mapping[r] = len(mapping) + 1
            out.append(mapping[r])
        return Coloring(self.shape, tuple(out))


def lower_bound_unsatisfied(state: MergeState) -> int:
    """Greedy count of unsatisfied lines with pairwise disjoint class sets.

    Scanned in enumeration order; deterministic.  Admissible: however the
    remaining merges play out, each counted line ends with two of its
    points in one class, and because no class touches two counted lines
    the merge forest spans two fresh endpoints per line, which by Hall's
    theorem pins one distinct merge per line.
    """
    used: set[int] = set()
    bound = 0
    for idxs in line_index_table(state.shape):
        roots = {state.find(i) for i in idxs}
        if len(roots) < len(idxs):
            continue
        if used & roots:
            continue
        used |= roots
        bound += 1
    return bound


class _Budget:
    """Shared stop conditions and the monotone incumbent."""

    def __init__(self, best_merges, witness_colors, node_limit, deadline):
        self.lock = threading.Lock()
        self.best_merges = best_merges
        self.witness_colors = witness_colors
        self.nodes = 0
        self.node_limit = node_limit
        self.deadline = deadline
        self.exhausted = False

    def tick(self) -> bool:
        """Count one node; False once any budget is exhausted."""
        with self.lock:
            if self.exhausted:
                return False
            self.nodes += 1
            if self.node_limit is not None and self.nodes >= self.node_limit:
                self.exhausted = True
            elif self.deadline is not None and time.monotonic() >= self.deadline:
                self.exhausted = True
            return not self.exhausted

    def offer(self, merges: int, colors: tuple[int, ...]) -> None:
        with self.lock:
            if merges < self.best_merges:
                self.best_merges = merges
                self.witness_colors = colors


def _branch_pairs(state: MergeState, idxs: tuple[int, ...]) -> list[tuple[int, int]]:
    return [(a, b) for a, b in combinations(idxs, 2) if not state.blocked(a, b)]


def _propagate(state: MergeState, lines, start: int) -> bool:
    """Merge every pair that is the only way left to satisfy its line.

    Returns False on a line with no mergeable pair (dead branch).
    """
    changed = True
    while changed:
        changed = False
        for li in range(start, len(lines)):
            idxs = lines[li]
            if state.line_satisfied(idxs):
                continue
            pairs = _branch_pairs(state, idxs)
            if not pairs:
                return False
            if len(pairs) == 1:
                state.merge(*pairs[0])
                changed = True
    return True


def _first_unsatisfied(state: MergeState, lines, start: int) -> int | None:
    for li in range(start, len(lines)):
        if not state.line_satisfied(lines[li]):
            return li
    return None


_DEAD = -2
_PRUNE = -3
_SOLVED = -1


def _settle(state: MergeState, lines, start: int, best: int) -> int:
    """Propagate forced merges, then prune-check and locate the branch line.

    One scan does triple duty per pass: forced-merge propagation, the
    greedy disjoint-class lower bound, and the first-unsatisfied pointer.
    A merge invalidates the pass's bound accumulators, so bound-based
    decisions only fire on quiescent passes; merge-count pruning is
    always sound.
    """
    parent = state.parent
    incompat = state._incompat
    while True:
        changed = False
        first = -1
        used: set[int] = set()
        bound = state.merge_count
        for li in range(start, len(lines)):
            roots = []
            for x in lines[li]:
                while parent[x] != x:
                    x = parent[x]
                roots.append(x)
            if len(set(roots)) < len(roots):
                continue
            pairs = [
                (a, b)
                for (a, ra), (b, rb) in combinations(zip(lines[li], roots), 2)
                if rb not in incompat.get(ra, ())
            ]
            if not pairs:
                return _DEAD
            if len(pairs) == 1:
                state.merge(*pairs[0])
                if state.merge_count >= best:
                    return _PRUNE
                changed = True
                continue
            if changed:
                continue
            if first < 0:
                first = li
            root_set = set(roots)
            if not (used & root_set):
                used |= root_set
                bound += 1
                if bound >= best:
                    return _PRUNE
        if not changed:
            if first < 0:
                return _SOLVED if state.merge_count < best else _PRUNE
            return first if bound < best else _PRUNE


def _dfs(state: MergeState, lines, start: int, budget: _Budget) -> None:
    if not budget.tick():
        return
    top = state.mark()
    outcome = _settle(state, lines, start, budget.best_merges)
    if outcome == _SOLVED:
        budget.offer(state.merge_count, state.to_coloring().colors)
        state.undo_to(top)
        return
    if outcome < 0:
        state.undo_to(top)
        return
    li = outcome
    for a, b in _branch_pairs(state, lines[li]):
        inner = state.mark()
        state.merge(a, b)
        _dfs(state, lines, li, budget)
        state.undo_to(inner)
        if budget.exhausted:
            break
        state.forbid(a, b)
    state.undo_to(top)


Op = tuple[str, int, int]


def _root_tasks(shape: CubeShape, symmetry_reduction: bool) -> list[list[Op]]:
    """Decision lists for the top branching level.

    The first line's points split, under the symbol permutations fixing
    the line's constant cells, into the pair orbit {point 1, other} and
    the pair orbit within points 2..k, so two branches cover everything:
    merge the first pair, or keep point 1 apart from all and merge the
    second-third pair.
    """
    idxs = line_index_table(shape)[0]
    pairs = list(combinations(idxs, 2))
    if symmetry_reduction and shape.k >= 3:
        p = idxs
        keep_first_apart: list[Op] = [("anti", p[0], q) for q in p[1:]]
        return [
            [("merge", p[0], p[1])],
            keep_first_apart + [("merge", p[1], p[2])],
        ]
    tasks: list[list[Op]] = []
    antis: list[Op] = []
    for a, b in pairs:
        tasks.append(antis + [("merge", a, b)])
        antis = antis + [("anti", a, b)]
    return tasks


def _replay(shape: CubeShape, ops: Iterable[Op]) -> MergeState:
    state = MergeState(shape)
    for tag, a, b in ops:
        if tag == "merge":
            state.merge(a, b)
        else:
            state.forbid(a, b)
    return state


def _expand_frontier(
    shape: CubeShape, tasks: list[list[Op]], budget: _Budget, target: int
) -> list[list[Op]]:
    """Split tasks one branching level at a time until `target` of them exist.

    Terminal tasks (dead or fully satisfied) are resolved on the spot.
    """
    lines = line_index_table(shape)
    frontier = list(tasks)
    while len(frontier) < target:
        grown: list[list[Op]] = []
        progress = False
        for ops in frontier:
            state = _replay(shape, ops)
            if not _propagate(state, lines, 0):
                continue
            if state.merge_count + lower_bound_unsatisfied(state) >= budget.best_merges:
                continue
            li = _first_unsatisfied(state, lines, 0)
            if li is None:
                budget.offer(state.merge_count, state.to_coloring().colors)
                continue
            antis: list[Op] = []
            for a, b in _branch_pairs(state, lines[li]):
                grown.append(ops + antis + [("merge", a, b)])
                antis = antis + [("anti", a, b)]
            progress = True
        frontier = grown
        if not progress or not frontier:
            break
    return frontier


class _BudgetOut(Exception):
    pass


def first_independent_set(
    shape: CubeShape, size: int, node_budget: int = 2_000_000
) -> tuple[int, ...] | None:
    """Lexicographically first size-`size` line-independent set, or None.

    None means either no such set exists or the node budget ran out, so a
    None is not a nonexistence proof; use enumerate_independent_sets for
    exhaustive answers.
    """
    if shape.k != 3:
        raise SearchError("independent-set search supports k = 3 only")
    masks = _collinearity_masks(shape)
    count = shape.point_count
    chosen: list[int] = []
    nodes = 0

    def extend(start: int, banned: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise _BudgetOut
        if len(chosen) == size:
            return True
        need = size - len(chosen)
        for p in range(start, count - need + 1):
            if banned >> p & 1:
                continue
            chosen.append(p)
            if extend(p + 1, banned | masks[p] | (1 << p)):
                return True
            chosen.pop()
        return False

    try:
        found = extend(0, 0)
    except _BudgetOut:
        return None
    return tuple(chosen) if found else None


def _greedy_independent_set(shape: CubeShape) -> tuple[int, ...]:
    masks = _collinearity_masks(shape)
    banned = 0
    chosen = []
    for p in shape.iter_indices():
        if banned >> p & 1:
            continue
        chosen.append(p)
        banned |= masks[p] | (1 << p)
    return tuple(chosen)


def _seed_coloring(shape: CubeShape) -> Coloring:
    """Deterministic warm-start witness: the best cheap construction.

    For k = 3 a singleton coloring over a large line-independent set
    usually beats the digit-position count, so sizes are probed downward
    from the arithmetic ceiling under one shared node budget.
    """
    if shape.k < 3:
        return monochromatic(shape)
    seed = canonical_relabel(digit_position_coloring(shape))
    if shape.k != 3:
        return seed
    from .bounds import bounds_table

    cap = min(bounds_table(3, shape.n).rows[-1].upper - 2, shape.point_count - 1)
    floor = len(_greedy_independent_set(shape))
    budget = 3_000_000
    best_set = _greedy_independent_set(shape)
    for size in range(cap, floor, -1):
        found = first_independent_set(shape, size, budget)
        if found is not None:
            best_set = found
            break
    if len(best_set) + 1 > census(seed).distinct_count:
        return canonical_relabel(singleton_set_coloring(shape, best_set))
    return seed


def max_rf_colors(shape: CubeShape, config: SearchConfig | None = None) -> SearchOutcome:
    """Maximum color count over rainbow-free colorings of [k]^n.

    OPTIMAL on natural exhaustion; FEASIBLE_ONLY with the best witness so
    far when a time or node budget runs out (still a valid lower bound).
    """
    config = config or SearchConfig()
    started = time.monotonic()
    deadline = started + config.time_limit if config.time_limit else None
    lines = line_index_table(shape)

    seed = _seed_coloring(shape)
    budget = _Budget(
        shape.point_count - census(seed).distinct_count,
        seed.colors,
        config.node_limit,
        deadline,
    )
    tasks = _root_tasks(shape, config.symmetry_reduction)
    if config.worker_count == 1:
        for ops in tasks:
            state = _replay(shape, ops)
            _dfs(state, lines, 0, budget)
            if budget.exhausted:
                break
    else:
        frontier = _expand_frontier(shape, tasks, budget, 4 * config.worker_count)
        with ThreadPoolExecutor(max_workers=config.worker_count) as pool:
            list(
                pool.map(
                    lambda ops: _dfs(_replay(shape, ops), lines, 0, budget), frontier
                )
            )

    witness = canonical_relabel(Coloring(shape, budget.witness_colors))
    value = shape.point_count - budget.best_merges
    if not is_rainbow_free(witness) or census(witness).distinct_count != value:
        raise SearchError("internal error: witness failed re-verification")
    status = Status.FEASIBLE_ONLY if budget.exhausted else Status.OPTIMAL
    return SearchOutcome(
        status=status,
        best_value=value,
        witness=witness,
        nodes_explored=budget.nodes,
        wall_time=time.monotonic() - started,
    )


def naive_max_rf_colors(shape: CubeShape) -> int:
    """Reference oracle: filter every set partition of the points.

    Exponential (Bell numbers); only sensible for k^n <= 9 or so.
    """
    count = shape.point_count
    labels = [0] * count

    def partitions(i: int, used: int):
        if i == count:
            yield labels
            return
        for c in range(used + 1):
            labels[i] = c
            yield from partitions(i + 1, used + (1 if c == used else 0))

    best = 0
    for assignment in partitions(0, 0):
        coloring = Coloring(shape, tuple(c + 1 for c in assignment))
        if is_rainbow_free(coloring):
            best = max(best, census(coloring).distinct_count)
    return best


@lru_cache(maxsize=None)
def _collinearity_masks(shape: CubeShape) -> tuple[int, ...]:
    """Bitmask per point of every point sharing a line with it."""
    masks = [0] * shape.point_count
    for idxs in line_index_table(shape):
        for a in idxs:
            for b in idxs:
                if a != b:
                    masks[a] |= 1 << b
    return tuple(masks)


def enumerate_independent_sets(
    shape: CubeShape, size: int, up_to_symmetry: bool = False
) -> list[tuple[int, ...]]:
    """All size-`size` point sets with no two members collinear (k = 3).

    Lexicographic backtracking over ascending point indices; with
    up_to_symmetry, keeps each automorphism orbit's lexicographically
    smallest member.  Pairwise non-collinearity encodes rainbow-freeness
    of the associated singleton coloring only for 3-point lines, so other
    alphabet sizes are rejected.
    """
    if shape.k != 3:
        raise SearchError("independent-set enumeration supports k = 3 only")
    if not 0 <= size <= shape.point_count:
        raise SearchError(f"size {size} out of range 0..{shape.point_count}")
    masks = _collinearity_masks(shape)
    results: list[tuple[int, ...]] = []
    chosen: list[int] = []
    count = shape.point_count

    def extend(start: int, banned: int) -> None:
        if len(chosen) == size:
            results.append(tuple(chosen))
            return
        need = size - len(chosen)
        for p in range(start, count - need + 1):
            if banned >> p & 1:
                continue
            chosen.append(p)
            extend(p + 1, banned | masks[p] | (1 << p))
            chosen.pop()

    extend(0, 0)
    if not up_to_symmetry:
        return results
    maps = automorphism_index_maps(shape)
    reps = []
    for s in results:
        orbit_min = min(tuple(sorted(m[p] for p in s)) for m in maps)
        if orbit_min == s:
            reps.append(s)
    return reps


def enumerate_minimal_rf(shape: CubeShape, num_colors: int) -> list[Coloring]:
    """Every minimal rainbow-free coloring with `num_colors` colors (k = 3).

    Built from the independent sets of size num_colors - 1: the singleton
    points of a minimal RF coloring are pairwise non-collinear, and every
    such set yields one.  Canonically relabeled, deduplicated, and
    returned in enumeration order.
    """
    if num_colors < 1:
        raise SearchError("num_colors must be >= 1")
    out = []
    seen = set()
    for s in enumerate_independent_sets(shape, num_colors - 1):
        coloring = canonical_relabel(singleton_set_coloring(shape, s))
        if coloring.colors not in seen:
            seen.add(coloring.colors)
            out.append(coloring)
    return out


@lru_cache(maxsize=None)
def _lines_by_point(shape: CubeShape) -> tuple[tuple[int, ...], ...]:
    table: list[list[int]] = [[] for _ in shape.iter_indices()]
    for li, idxs in enumerate(line_index_table(shape)):
        for i in idxs:
            table[i].append(li)
    return tuple(tuple(row) for row in table)


def _line_allowance(colors, idxs, cell: int) -> frozenset[int] | None:
    """Colors the free `cell` may take per this line, or None if unconstrained.

    A line constrains the cell only when its other points are assigned
    with pairwise distinct colors: the cell must then repeat one of them.
    """
    others = [colors[i] for i in idxs if i != cell]
    if 0 in others:
        return None
    if len(set(others)) != len(others):
        return None
    return frozenset(others)


def find_forced_cell(partial: Coloring) -> ForcedCell | None:
    """First free cell (point-index order) that no color can legally fill."""
    shape = partial.shape
    colors = partial.colors
    lines = line_index_table(shape)
    templates = template_table(shape)
    by_point = _lines_by_point(shape)
    for idx in shape.iter_indices():
        if colors[idx] != 0:
            continue
        allowance: frozenset[int] | None = None
        constraining: list[tuple[LineTemplate, frozenset[int]]] = []
        for li in by_point[idx]:
            allowed = _line_allowance(colors, lines[li], idx)
            if allowed is None:
                continue
            constraining.append((templates[li], allowed))
            allowance = allowed if allowance is None else allowance & allowed
        if allowance is not None and not allowance:
            witnesses = []
            running: frozenset[int] | None = None
            for tmpl, allowed in constraining:
                if running is None:
                    running = allowed
                    witnesses.append(tmpl)
                elif not running <= allowed:
                    running = running & allowed
                    witnesses.append(tmpl)
                if not running:
                    break
            return ForcedCell(point_from_index(idx, shape), tuple(witnesses))
    return None


def _completion_infeasible(
    started: float, total: int, certificate=None, nodes: int = 0
) -> SearchOutcome:
    return SearchOutcome(
        status=Status.INFEASIBLE,
        best_value=total,
        witness=None,
        nodes_explored=nodes,
        wall_time=time.monotonic() - started,
        certificate=certificate,
    )


def complete(
    partial: Coloring, total_colors: int, config: SearchConfig | None = None
) -> SearchOutcome:
    """Decide whether the free cells extend to a rainbow-free coloring
    with exactly `total_colors` distinct colors.

    Free cells may reuse assigned colors or introduce fresh ones; fresh
    colors are interchangeable, so each cell considers at most one fresh
    representative.  Cells are filled most-constrained-first.
    """
    config = config or SearchConfig()
    started = time.monotonic()
    deadline = started + config.time_limit if config.time_limit else None
    shape = partial.shape
    if total_colors < 1:
        raise SearchError("total_colors must be >= 1")
    lines = line_index_table(shape)
    templates = template_table(shape)
    by_point = _lines_by_point(shape)

    colors = list(partial.colors)
    for li, idxs in enumerate(lines):
        cs = [colors[i] for i in idxs]
        if 0 not in cs and len(set(cs)) == len(cs):
            return _completion_infeasible(started, total_colors, templates[li])

    free = [i for i in shape.iter_indices() if colors[i] == 0]
    used = {c for c in colors if c != 0}
    if len(used) > total_colors or len(used) + len(free) < total_colors:
        return _completion_infeasible(started, total_colors)
    if not free:
        witness = Coloring(shape, tuple(colors))
        return SearchOutcome(
            status=Status.OPTIMAL,
            best_value=total_colors,
            witness=witness,
            nodes_explored=0,
            wall_time=time.monotonic() - started,
        )

    fresh_next = max(used, default=0) + 1
    nodes = 0
    out_of_budget = False
    solution: tuple[int, ...] | None = None

    def choose_cell() -> tuple[int, list[int]] | None:
        """Most-constrained free cell and its candidates; None on a dead cell."""
        best_cell = -1
        best_cand: list[int] | None = None
        fresh_room = len(used) < total_colors
        for cell in free:
            if colors[cell] != 0:
                continue
            allowance: frozenset[int] | None = None
            for li in by_point[cell]:
                allowed = _line_allowance(colors, lines[li], cell)
                if allowed is None:
                    continue
                allowance = allowed if allowance is None else allowance & allowed
                if not allowance:
                    return None
            if allowance is None:
                cand = sorted(used)
                if fresh_room:
                    cand.append(fresh_next + (len(used) - len(partial_used)))
            else:
                cand = sorted(allowance)
            if best_cand is None or len(cand) < len(best_cand):
                best_cell, best_cand = cell, cand
                if len(cand) <= 1:
                    break
        assert best_cand is not None
        return best_cell, best_cand

    partial_used = set(used)

    def remaining_capacity() -> int:
        """Free cells that some line does not pin to existing colors."""
        room = 0
        for cell in free:
            if colors[cell] != 0:
                continue
            if all(
                _line_allowance(colors, lines[li], cell) is None
                for li in by_point[cell]
            ):
                room += 1
        return room

    def dfs() -> bool:
        nonlocal nodes, out_of_budget, solution
        nodes += 1
        if config.node_limit is not None and nodes >= config.node_limit:
            out_of_budget = True
        if deadline is not None and time.monotonic() >= deadline:
            out_of_budget = True
        if out_of_budget:
            return False
        if len(used) + remaining_capacity() < total_colors:
            return False
        if all(colors[cell] != 0 for cell in free):
            if len(used) == total_colors:
                solution = tuple(colors)
                return True
            return False
        picked = choose_cell()
        if picked is None:
            return False
        cell, candidates = picked
        for value in candidates:
            colors[cell] = value
            added = value not in used
            if added:
                used.add(value)
            if dfs():
                return True
            if added:
                used.discard(value)
            colors[cell] = 0
            if out_of_budget:
                return False
        return False

    found = dfs()
    wall = time.monotonic() - started
    if found and solution is not None:
        witness = Coloring(shape, solution)
        if not is_rainbow_free(witness) or census(witness).distinct_count != total_colors:
            raise SearchError("internal error: completion witness failed re-verification")
        return SearchOutcome(
            status=Status.OPTIMAL,
            best_value=total_colors,
            witness=witness,
            nodes_explored=nodes,
            wall_time=wall,
        )
    if out_of_budget:
        return SearchOutcome(
            status=Status.TIMEOUT,
            best_value=total_colors,
            witness=None,
            nodes_explored=nodes,
            wall_time=wall,
        )
    certificate = find_forced_cell(partial)
    return _completion_infeasible(started, total_colors, certificate, nodes)


def two_layer_arrangements() -> list[Coloring]:
    """The six partial colorings of [3]^4 behind the completion endgame.

    Each places the two minimal rainbow-free 10-colorings of [3]^3, in
    both orders, on one of the three ordered pairs of distinct layers
    along coordinate 1.  Their dominant colors are identified as color 1,
    the singleton palettes are disjoint (2..10 and 11..19), and the
    remaining layer is left unassigned.
    """
    shape3 = CubeShape(3, 3)
    shape4 = CubeShape(3, 4)
    patterns = enumerate_minimal_rf(shape3, 10)
    if len(patterns) != 2:
        raise SearchError("expected exactly two minimal 10-colorings")

    def relabeled(coloring: Coloring, singleton_base: int) -> tuple[int, ...]:
        sizes = census(coloring).class_sizes
        dominant = max(sizes, key=lambda c: sizes[c])
        mapping = {dominant: 1}
        for c in coloring.colors:
            if c != dominant and c not in mapping:
                mapping[c] = singleton_base + len(mapping) - 1
        return tuple(mapping[c] for c in coloring.colors)

    sub_count = shape3.point_count
    weights = shape4.weights
    out = []
    for first, second in ((patterns[0], patterns[1]), (patterns[1], patterns[0])):
        first_colors = relabeled(first, 2)
        second_colors = relabeled(second, 11)
        for la, lb in ((1, 2), (1, 3), (2, 3)):
            cells = [0] * shape4.point_count
            for rest in range(sub_count):
                cells[(la - 1) * weights[0] + rest] = first_colors[rest]
                cells[(lb - 1) * weights[0] + rest] = second_colors[rest]
            out.append(Coloring(shape4, tuple(cells)))
    return out
