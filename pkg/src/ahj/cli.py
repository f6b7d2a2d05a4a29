"""Command-line driver for enumeration, verification, construction, search,
bounds, and claim reproduction.

Results print as ``key=value`` lines so runs can be scripted and diffed;
the wall_time field is the only line that varies between identical
single-threaded invocations.  Exit codes are a stable contract: 0 for
success or claim-holds, 1 for claim-fails, 2 for usage or input errors,
3 for an exhausted search budget.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .bounds import BoundsError, bounds_table
from .coloring import (
    Coloring,
    ColoringError,
    ParseError,
    census,
    is_minimal,
    is_rainbow_free,
    orbit_canonical_form,
    parse,
    rainbow_lines,
    serialize,
)
from .constructions import (
    ConstructionError,
    digit_position_coloring,
    singleton_set_coloring,
    stack_recursive,
)
from .hypercube import CubeShape, ShapeError, enumerate_lines, line_count
from .search import (
    SearchConfig,
    SearchError,
    Status,
    complete,
    enumerate_independent_sets,
    enumerate_minimal_rf,
    find_forced_cell,
    max_rf_colors,
    naive_max_rf_colors,
    two_layer_arrangements,
)

EXIT_OK = 0
EXIT_CLAIM_FAILS = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _emit(key: str, value: object) -> None:
    print(f"{key}={value}")


def _emit_flag(key: str, value: object | None) -> None:
    _emit(key, "none" if value is None else value)


def _status_exit(status: Status) -> int:
    if status in (Status.OPTIMAL, Status.INFEASIBLE):
        return EXIT_OK
    return EXIT_BUDGET


def _write_coloring(path: str, coloring: Coloring, comment: str) -> None:
    Path(path).write_text(serialize(coloring, comment))


def _search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        time_limit=args.time_limit,
        worker_count=args.threads,
        node_limit=args.node_limit,
    )


def cmd_lines(args: argparse.Namespace) -> int:
    shape = CubeShape(args.k, args.n)
    if args.count:
        print(line_count(shape))
    else:
        for template in enumerate_lines(shape):
            print(template)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    coloring = parse(Path(args.file).read_text())
    cen = census(coloring)
    _emit("subcommand", "verify")
    _emit("file", args.file)
    _emit("k", coloring.shape.k)
    _emit("n", coloring.shape.n)
    _emit("colors", cen.distinct_count)
    _emit("unassigned", cen.unassigned_count)
    failures: list[str] = []
    if coloring.is_total:
        rainbows = rainbow_lines(coloring)
        _emit("rf", "true" if not rainbows else "false")
        _emit("minimal", "true" if is_minimal(coloring) else "false")
        if rainbows:
            _emit("rainbow_count", len(rainbows))
            _emit("first_rainbow", rainbows[0])
        if args.expect_rf and rainbows:
            failures.append(f"expected rainbow-free, found rainbow line {rainbows[0]}")
        if args.expect_minimal and not is_minimal(coloring):
            failures.append("expected a minimal coloring")
    else:
        _emit("rf", "unknown")
        if args.expect_rf:
            failures.append(f"{cen.unassigned_count} cells unassigned, cannot be rainbow-free")
        if args.expect_minimal:
            failures.append(f"{cen.unassigned_count} cells unassigned, cannot be minimal")
    if args.expect_colors is not None and cen.distinct_count != args.expect_colors:
        failures.append(f"expected {args.expect_colors} colors, found {cen.distinct_count}")
    for failure in failures:
        _emit("failure", failure)
    _emit("verified", "true" if not failures else "false")
    return EXIT_OK if not failures else EXIT_CLAIM_FAILS


def cmd_construct(args: argparse.Namespace) -> int:
    if args.kind == "digit-position":
        _require(args.k is not None and args.n is not None, "--k and --n are required")
        coloring = digit_position_coloring(CubeShape(args.k, args.n))
        detail = "digit-position"
    elif args.kind == "recursive":
        _require(args.base is not None, "--base is required")
        base = parse(Path(args.base).read_text())
        coloring = stack_recursive(base, args.stacking_coord)
        detail = f"recursive over {args.base}"
    else:
        _require(args.k is not None and args.n is not None, "--k and --n are required")
        _require(args.points is not None, "--points is required")
        special = _parse_points(args.points)
        coloring = singleton_set_coloring(CubeShape(args.k, args.n), special)
        detail = "singleton-set"
    if not is_rainbow_free(coloring):
        raise ConstructionError("self-verification failed: construction has a rainbow line")
    cen = census(coloring)
    comment = f"{detail} coloring, {cen.distinct_count} colors, rainbow-free"
    if args.output:
        _write_coloring(args.output, coloring, comment)
        _emit("subcommand", f"construct.{args.kind}")
        _emit("k", coloring.shape.k)
        _emit("n", coloring.shape.n)
        _emit("colors", cen.distinct_count)
        _emit("rf", "true")
        _emit("output", args.output)
    else:
        sys.stdout.write(serialize(coloring, comment))
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    shape = CubeShape(args.k, args.n)
    outcome = max_rf_colors(shape, _search_config(args))
    _emit("subcommand", "search.max-colors")
    _emit("k", args.k)
    _emit("n", args.n)
    _emit("threads", args.threads)
    _emit_flag("time_limit", args.time_limit)
    _emit_flag("node_limit", args.node_limit)
    _emit("status", outcome.status.name)
    _emit("value", outcome.best_value)
    _emit("nodes", outcome.nodes_explored)
    if args.certificate and outcome.witness is not None:
        _write_coloring(
            args.certificate,
            outcome.witness,
            f"search witness: rainbow-free {outcome.best_value}-coloring",
        )
        _emit("certificate", args.certificate)
    _emit("wall_time", f"{outcome.wall_time:.3f}")
    return _status_exit(outcome.status)


def cmd_enumerate(args: argparse.Namespace) -> int:
    shape = CubeShape(args.k, args.n)
    _emit("subcommand", "enumerate")
    _emit("k", args.k)
    _emit("n", args.n)
    if args.independent_size is not None:
        sets = enumerate_independent_sets(
            shape, args.independent_size, up_to_symmetry=args.up_to_symmetry
        )
        for points in sets:
            _emit("set", ",".join(str(p) for p in points))
        _emit("count", len(sets))
        return EXIT_OK
    _require(args.colors is not None, "one of --colors or --independent-size is required")
    _require(args.minimal_only, "only minimal colorings are enumerable; pass --minimal-only")
    colorings = enumerate_minimal_rf(shape, args.colors)
    if args.up_to_symmetry:
        seen: set[tuple[int, ...]] = set()
        kept = []
        for coloring in colorings:
            orbit = orbit_canonical_form(coloring).colors
            if orbit not in seen:
                seen.add(orbit)
                kept.append(coloring)
        colorings = kept
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, coloring in enumerate(colorings, start=1):
            path = out_dir / f"minimal-rf-{args.colors}col-{i:03d}.ahj"
            _write_coloring(
                str(path),
                coloring,
                f"minimal rainbow-free {args.colors}-coloring "
                f"of [{args.k}]^{args.n}, {i} of {len(colorings)}",
            )
            _emit("output", path)
    _emit("count", len(colorings))
    return EXIT_OK


def cmd_complete(args: argparse.Namespace) -> int:
    partial = parse(Path(args.file).read_text())
    outcome = complete(partial, args.total_colors, _search_config(args))
    _emit("subcommand", "complete")
    _emit("file", args.file)
    _emit("total_colors", args.total_colors)
    _emit_flag("time_limit", args.time_limit)
    _emit_flag("node_limit", args.node_limit)
    _emit("status", outcome.status.name)
    _emit("nodes", outcome.nodes_explored)
    if outcome.status is Status.INFEASIBLE and outcome.certificate is not None:
        cert = outcome.certificate
        if hasattr(cert, "point"):
            _emit("forced_cell", cert.point)
            for witness in cert.witnesses:
                _emit("witness_line", witness)
        else:
            _emit("rainbow_line", cert)
    if args.certificate and outcome.witness is not None:
        _write_coloring(
            args.certificate,
            outcome.witness,
            f"completion witness: rainbow-free {args.total_colors}-coloring",
        )
        _emit("certificate", args.certificate)
    _emit("wall_time", f"{outcome.wall_time:.3f}")
    return _status_exit(outcome.status)


def cmd_bounds(args: argparse.Namespace) -> int:
    report = bounds_table(args.k, args.n_max)
    rows = list(report.rows)
    if args.recompute:
        rows = [_recompute_row(args.k, row, args.time_limit) for row in rows]
    header = f"{'n':>3} {'lower':>7} {'upper':>7}  {'lower_source':<22} {'upper_source':<22}"
    print(header)
    for row in rows:
        print(
            f"{row.n:>3} {row.lower:>7} {row.upper:>7}  "
            f"{row.lower_source:<22} {row.upper_source:<22}"
        )
    for row in rows:
        print(
            f"n={row.n} lower={row.lower} upper={row.upper} "
            f"lower_source={row.lower_source} upper_source={row.upper_source}"
        )
    return EXIT_OK


def _recompute_row(k, row, time_limit):
    from .bounds import BoundsRow

    shape = CubeShape(k, row.n)
    if shape.point_count > 32:
        return row
    outcome = max_rf_colors(shape, SearchConfig(time_limit=time_limit))
    if outcome.status is not Status.OPTIMAL:
        return row
    value = outcome.best_value + 1
    return BoundsRow(row.n, value, value, "recomputed-search", "recomputed-search")


def _parse_points(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ConstructionError(f"bad point list {text!r}; expected comma-separated integers")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SearchError(message)


def _check_exact_values(threads: int) -> tuple[bool, str]:
    expected = {(3, 1): 2, (3, 2): 4, (3, 3): 10}
    parts = []
    for (k, n), value in sorted(expected.items()):
        outcome = max_rf_colors(
            CubeShape(k, n), SearchConfig(time_limit=900.0, worker_count=threads)
        )
        ok = outcome.status is Status.OPTIMAL and outcome.best_value == value
        parts.append(f"[{k}]^{n}:{outcome.best_value}/{outcome.status.name}")
        if not ok:
            return False, " ".join(parts)
    return True, " ".join(parts)


def _check_two_symbol(threads: int) -> tuple[bool, str]:
    for n in range(1, 5):
        outcome = max_rf_colors(
            CubeShape(2, n), SearchConfig(time_limit=10.0, worker_count=threads)
        )
        if outcome.status is not Status.OPTIMAL or outcome.best_value != 1:
            return False, f"[2]^{n} gave {outcome.best_value}/{outcome.status.name}"
    return True, "[2]^1..4 all optimal at 1"


def _check_oracle() -> tuple[bool, str]:
    for k, n in ((2, 2), (2, 3), (3, 1), (3, 2)):
        shape = CubeShape(k, n)
        fast = max_rf_colors(shape).best_value
        slow = naive_max_rf_colors(shape)
        if fast != slow:
            return False, f"[{k}]^{n}: search {fast} != oracle {slow}"
    return True, "search equals all-partitions oracle on 4 shapes"


def _check_enumeration(_threads: int = 1) -> tuple[bool, str]:
    c1 = len(enumerate_independent_sets(CubeShape(3, 2), 3))
    c2 = len(enumerate_independent_sets(CubeShape(3, 3), 9))
    c3 = len(enumerate_independent_sets(CubeShape(3, 3), 10))
    ok = (c1, c2, c3) == (5, 2, 0)
    return ok, f"sizes 3/9/10 -> {c1}/{c2}/{c3} (want 5/2/0)"


def _check_constructions() -> tuple[bool, str]:
    for k in (3, 4, 5):
        for n in (2, 3, 4):
            base = digit_position_coloring(CubeShape(k, n))
            if not is_rainbow_free(base):
                return False, f"digit-position [{k}]^{n} not rainbow-free"
            c = census(base).distinct_count
            if c != (k - 1) ** n:
                return False, f"digit-position [{k}]^{n} has {c} colors"
            stacked = stack_recursive(base)
            if not is_rainbow_free(stacked):
                return False, f"stack over [{k}]^{n} not rainbow-free"
            if census(stacked).distinct_count != (k - 2) * c + 1:
                return False, f"stack over [{k}]^{n} has wrong census"
    return True, "digit-position and stacking verified for k=3..5, n=2..4"


def _check_arrangements() -> tuple[bool, str]:
    arrangements = two_layer_arrangements()
    if len(arrangements) != 6:
        return False, f"{len(arrangements)} arrangements (want 6)"
    for i, arrangement in enumerate(arrangements):
        if find_forced_cell(arrangement) is None:
            return False, f"arrangement {i} has no forced cell"
        outcome = complete(arrangement, 27, SearchConfig(time_limit=60.0))
        if outcome.status is not Status.INFEASIBLE:
            return False, f"arrangement {i} completion gave {outcome.status.name}"
    return True, "all 6 arrangements have forced cells and refuse 27 colors"


def _check_bounds() -> tuple[bool, str]:
    from .bounds import geometric_upper, iterated_upper, refined_upper_3

    rows = [(r.lower, r.upper) for r in bounds_table(3, 5).rows]
    if rows != [(3, 3), (5, 5), (11, 11), (24, 27), (33, 77)]:
        return False, f"table rows {rows}"
    for k in range(3, 7):
        for n in range(1, 11):
            if geometric_upper(k, n) != iterated_upper(k, 1, k, n):
                return False, f"closed form != recursion at k={k}, n={n}"
    for n in range(4, 11):
        if refined_upper_3(n) != iterated_upper(3, 4, 27, n):
            return False, f"refined bound != recursion at n={n}"
    return True, "table [3,3],[5,5],[11,11],[24,27],[33,77]; identities hold"


def _check_fixtures() -> tuple[bool, str]:
    from .coloring import canonical_relabel
    from .fixtures import load_fixture

    specs = [
        ("square-rf-4.ahj", 4),
        ("cube-rf-10-a.ahj", 10),
        ("cube-rf-10-b.ahj", 10),
        ("hypercube-rf-23.ahj", 23),
    ]
    for name, colors in specs:
        coloring = load_fixture(name)
        if not is_rainbow_free(coloring):
            return False, f"{name} is not rainbow-free"
        if census(coloring).distinct_count != colors:
            return False, f"{name} does not have {colors} colors"
    enumerated = {c.colors for c in enumerate_minimal_rf(CubeShape(3, 3), 10)}
    shipped = {
        canonical_relabel(load_fixture(n)).colors
        for n in ("cube-rf-10-a.ahj", "cube-rf-10-b.ahj")
    }
    if shipped != enumerated:
        return False, "cube fixtures are not the two enumerated 10-colorings"
    return True, "4 fixtures verified; cube pair matches enumeration"


def _check_invariants() -> tuple[bool, str]:
    from .coloring import canonical_relabel
    from .hypercube import automorphism_index_maps, line_index_table

    for k in (2, 3, 4, 5):
        for n in (1, 2, 3, 4):
            shape = CubeShape(k, n)
            if shape.point_count > 700:
                continue
            if line_count(shape) != ((k + 1) ** n - k**n):
                return False, f"line count formula fails on [{k}]^{n}"
            lines = line_index_table(shape)
            for mapping in automorphism_index_maps(shape)[:24]:
                mapped = {tuple(sorted(mapping[i] for i in idxs)) for idxs in lines}
                if mapped != {tuple(sorted(idxs)) for idxs in lines}:
                    return False, f"automorphism breaks lines on [{k}]^{n}"
    witness = max_rf_colors(CubeShape(3, 2)).witness
    relabeled = canonical_relabel(witness)
    if canonical_relabel(relabeled).colors != relabeled.colors:
        return False, "canonical form is not idempotent"
    if not is_rainbow_free(witness):
        return False, "search witness fails self-verification"
    return True, "line counts, automorphisms, canonical form, witness checks hold"


def _check_determinism() -> tuple[bool, str]:
    for k, n, value in ((3, 1, 2), (3, 2, 4), (2, 3, 1)):
        for threads in (1, 4):
            outcome = max_rf_colors(
                CubeShape(k, n), SearchConfig(time_limit=60.0, worker_count=threads)
            )
            if outcome.best_value != value:
                return False, f"[{k}]^{n} at {threads} threads gave {outcome.best_value}"
    first = enumerate_independent_sets(CubeShape(3, 3), 9)
    second = enumerate_independent_sets(CubeShape(3, 3), 9)
    if first != second:
        return False, "independent-set enumeration is not reproducible"
    return True, "values and enumerations agree across worker counts"


def cmd_repro(args: argparse.Namespace) -> int:
    checks: list[tuple[str, object]] = [
        ("exact values [3]^1..3 by search", lambda: _check_exact_values(args.threads)),
        ("two-symbol cubes force 2 colors", lambda: _check_two_symbol(args.threads)),
        ("search equals naive oracle", _check_oracle),
        ("independent-set counts 5/2/0", _check_enumeration),
        ("construction censuses", _check_constructions),
        ("two-layer arrangements refuse 27", _check_arrangements),
        ("bounds table and identities", _check_bounds),
        ("bundled fixtures verify", _check_fixtures),
        ("structural invariants", _check_invariants),
        ("determinism across threads", _check_determinism),
    ]
    selected = None
    if args.only:
        selected = {int(tok) for tok in args.only.split(",")}
    failures = 0
    for i, (label, func) in enumerate(checks, start=1):
        if selected is not None and i not in selected:
            continue
        started = time.monotonic()
        try:
            ok, detail = func()
        except Exception as exc:  # noqa: BLE001 - report, do not abort the suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        elapsed = time.monotonic() - started
        verdict = "PASS" if ok else "FAIL"
        print(f"claim {i:2d} {verdict} {elapsed:7.2f}s  {label}: {detail}")
        if not ok:
            failures += 1
    return EXIT_OK if failures == 0 else EXIT_CLAIM_FAILS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ahj",
        description="Exact search and verification for rainbow-free hypercube colorings.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("lines", help="count or list combinatorial line templates")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_lines)

    p = sub.add_parser("verify", help="check a coloring file against expectations")
    p.add_argument("file")
    p.add_argument("--expect-rf", action="store_true")
    p.add_argument("--expect-colors", type=int, default=None)
    p.add_argument("--expect-minimal", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="build a rainbow-free coloring")
    p.add_argument("kind", choices=["digit-position", "recursive", "singleton"])
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--base", default=None, help="base coloring file for kind=recursive")
    p.add_argument("--stacking-coord", type=int, default=1)
    p.add_argument("--points", default=None, help="comma-separated indices for kind=singleton")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="run the exact branch-and-bound search")
    p.add_argument("mode", choices=["max-colors"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--certificate", default=None, help="write the witness coloring here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("enumerate", help="enumerate independent sets or minimal colorings")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--colors", type=int, default=None)
    p.add_argument("--minimal-only", action="store_true")
    p.add_argument("--independent-size", type=int, default=None)
    p.add_argument("--up-to-symmetry", action="store_true")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("complete", help="extend a partial coloring to a color target")
    p.add_argument("file")
    p.add_argument("--total-colors", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--certificate", default=None, help="write the completion here")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("bounds", help="print the best-known bounds table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--recompute", action="store_true")
    p.add_argument("--time-limit", type=float, default=60.0,
                   help="per-entry search budget for --recompute")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("repro", help="re-verify the package's headline claims")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--only", default=None, help="comma-separated claim numbers")
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witnessing line: {exc.witness}", file=sys.stderr)
        return EXIT_USAGE
    except (ShapeError, ColoringError, SearchError, BoundsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    console_main()
