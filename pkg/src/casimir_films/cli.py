"""Command-line entry point.

::

    casimir-films sweep --config FILE --out DIR [--ideal-mirror-test] [--verbose]
    casimir-films ratio --config FILE --baseline FILE --out DIR [--verbose]
    casimir-films plot CSV [CSV ...] --out DIR

Exit status: 0 success, 1 validation error, 2 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .dielectric import DielectricError
from .io import write_curve_csv
from .lifshitz import PRESSURE_FLOOR, GapScenario, casimir_point
from .plotting import emit_plot_script
from .quadrature import QuadratureError
from .reflection import PerfectMirror

log = logging.getLogger("casimir_films")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NONCONVERGED = 2


def _evaluate(task):
    """Worker: one separation. Returns ``(L, energy, pressure, rel_err, ok)``."""
    film_1, film_2, length, quadrature = task
    try:
        point = casimir_point(GapScenario(film_1, film_2, length), quadrature)
    except QuadratureError as exc:
        best = exc.value if isinstance(exc.value, tuple) else (math.nan, math.nan)
        return length, best[0], best[1], exc.error, False
    except ArithmeticError as exc:
        log.error("L = %g nm: %s", length, exc)
        return length, math.nan, math.nan, math.nan, False
    return length, point.energy_per_area, point.pressure, point.rel_err, True


def _run_points(tasks, workers):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map yields in submission order
            return list(pool.map(_evaluate, tasks))
    return [_evaluate(t) for t in tasks]


def _failed_marker(err):
    try:
        return f"FAILED(err={float(err):.3e})"
    except (TypeError, ValueError):
        return "FAILED"


def run_sweep(config: RunConfig, out_dir, ideal_mirror=False):
    """Sweep the separation grid and write ``<output>.csv``.

    Returns ``(csv_path, all_converged)``.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    film_1, film_2 = config.films
    if ideal_mirror:
        film_1 = film_2 = PerfectMirror()
    grid = config.grid.values()
    tasks = [(film_1, film_2, float(L), config.quadrature) for L in grid]
    results = _run_points(tasks, config.workers)
    rows = []
    for L, energy, pres, err, ok in results:
        log.info("L = %g nm: P = %.6e Pa (%s)", L, pres, "ok" if ok else "FAILED")
        rows.append((L, energy, pres, None, err if ok else _failed_marker(err)))
    path = out_dir / f"{config.output_name}.csv"
    write_curve_csv(path, rows, with_ratio=False)
    return path, all(r[4] for r in results)


def run_ratio(config: RunConfig, baseline: RunConfig, out_dir, ideal_mirror=False):
    """Numerator/baseline pressure ratios on the numerator's grid.

    Writes ``<output>_ratio.csv`` and a plot script next to it. Baseline
    films flagged ``match_thickness`` take the numerator films' thickness.
    """
    if config.grid != baseline.grid:
        raise ConfigError("numerator and baseline separation grids differ", key="separation")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    num_1, num_2 = config.films
    base_spec_1 = baseline.film_1
    base_spec_2 = baseline.film_2 or baseline.film_1
    base_1 = base_spec_1.build(num_1.thickness if base_spec_1.match_thickness else None)
    base_2 = base_spec_2.build(num_2.thickness if base_spec_2.match_thickness else None)
    if ideal_mirror:
        num_1 = num_2 = base_1 = base_2 = PerfectMirror()

    grid = config.grid.values()
    tasks = [(num_1, num_2, float(L), config.quadrature) for L in grid]
    tasks += [(base_1, base_2, float(L), config.quadrature) for L in grid]
    results = _run_points(tasks, config.workers)
    n = len(grid)
    rows = []
    all_ok = True
    for (L, energy, pres, err, ok), (_, _, base_p, base_err, base_ok) in zip(results[:n], results[n:]):
        if ok and base_ok and abs(base_p) > PRESSURE_FLOOR:
            ratio = pres / base_p
            rows.append((L, energy, pres, ratio, max(err, base_err)))
            log.info("L = %g nm: ratio = %.8f", L, ratio)
        else:
            all_ok = False
            worst = err if not ok else base_err
            rows.append((L, energy, pres, math.nan, _failed_marker(worst)))
            log.warning("L = %g nm: failed", L)
    path = out_dir / f"{config.output_name}_ratio.csv"
    write_curve_csv(path, rows, with_ratio=True)
    emit_plot_script([path], out_dir / f"{config.output_name}_ratio_plot.py", labels=[config.label])
    return path, all_ok


def build_parser():
    parser = argparse.ArgumentParser(prog="casimir-films", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--verbose", "-v", action="store_true")

    p_sweep = sub.add_parser("sweep", help="energy and pressure over a separation grid")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--ideal-mirror-test", action="store_true",
                         help="replace both films by perfect mirrors")
    common(p_sweep)

    p_ratio = sub.add_parser("ratio", help="pressure ratio against a baseline configuration")
    p_ratio.add_argument("--config", required=True)
    p_ratio.add_argument("--baseline", required=True)
    p_ratio.add_argument("--ideal-mirror-test", action="store_true")
    common(p_ratio)

    p_plot = sub.add_parser("plot", help="write a matplotlib script for result CSVs")
    p_plot.add_argument("csv", nargs="*")
    p_plot.add_argument("--name", default="plot_ratio.py")
    common(p_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "plot":
            script = emit_plot_script(args.csv, Path(args.out) / args.name)
            print(script)
            return EXIT_OK
        config = load_config(args.config)
        if args.command == "sweep":
            path, ok = run_sweep(config, args.out, ideal_mirror=args.ideal_mirror_test)
        else:
            baseline = load_config(args.baseline)
            path, ok = run_ratio(config, baseline, args.out, ideal_mirror=args.ideal_mirror_test)
    except (ConfigError, DielectricError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(path)
    if not ok:
        print("error: some points did not converge; see rows marked FAILED", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
