"""Command line: ``solve``, ``gen`` and ``batch``.

Exit codes: 0 optimal, 2 time limit, 1 error.  ``MCP_LOG`` selects the
log level (off, info, debug).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import resource
import sys
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import IO, Iterator

from .config import MODES, SolverConfig
from .formats import ParseError, instance_name, parse_instance, write_instance, write_solution
from .generate import DEFAULT_BOUND, generate_instance
from .geometry import GeometryError
from .render import render_svg
from .search import solve

EXIT_OPTIMAL, EXIT_ERROR, EXIT_TIMELIMIT = 0, 1, 2
LOG_LEVELS = {"off": logging.CRITICAL + 1, "info": logging.INFO, "debug": logging.DEBUG}
BATCH_KEYS = ("name", "n", "mode", "value", "bound", "status", "nodes", "pricing_rounds",
              "columns", "cuts", "peak_mem_bytes", "seconds")


def setup_logging() -> None:
    level = LOG_LEVELS.get(os.environ.get("MCP_LOG", "off").lower(), LOG_LEVELS["off"])
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    logging.getLogger("mcpp").setLevel(level)


def _peak_mem_bytes() -> int:
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024  # kB on Linux


def solve_file(path: str | os.PathLike, config: SolverConfig, round_floats: bool = False) -> dict:
    """One batch record; failures become records with status 'Error'."""
    path = Path(path)
    rec = dict.fromkeys(BATCH_KEYS)
    rec.update(name=path.stem, mode=config.mode)
    t0 = time.monotonic()
    try:
        data = path.read_bytes()
        rec["name"] = instance_name(data, path.stem)
        ps = parse_instance(data, round_floats)
        rec["n"] = ps.n
        res = solve(ps, config)
    except Exception as exc:  # recorded, the batch goes on
        rec.update(status="Error", error=f"{type(exc).__name__}: {exc}", seconds=round(time.monotonic() - t0, 6),
                   peak_mem_bytes=_peak_mem_bytes())
        logging.getLogger("mcpp").debug("%s failed\n%s", path, traceback.format_exc())
        return rec
    st = res.stats
    bound = res.bound
    rec.update(value=res.value, bound=int(bound) if float(bound).is_integer() else bound,
               status=res.status, nodes=st.nodes, pricing_rounds=st.pricing_rounds,
               columns=st.columns, cuts=st.cuts, peak_mem_bytes=_peak_mem_bytes(),
               seconds=round(time.monotonic() - t0, 6))
    return rec


def _instance_files(directory: str | os.PathLike) -> list[Path]:
    return sorted(p for p in Path(directory).iterdir() if p.is_file() and not p.name.startswith("."))


def run_batch(directory: str | os.PathLike, config: SolverConfig, jobs: int = 1,
              round_floats: bool = False) -> Iterator[dict]:
    """Yield one record per instance file, in file-name order."""
    files = _instance_files(directory)
    if jobs <= 1 or len(files) <= 1:
        for f in files:
            yield solve_file(f, config, round_floats)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(solve_file, files, [config] * len(files), [round_floats] * len(files))


def write_batch(records, out: IO[str]) -> int:
    k = 0
    for rec in records:
        out.write(json.dumps(rec) + "\n")  # whole line per write
        out.flush()
        k += 1
    return k


# ------------------------------------------------------------------ commands


def _config(args) -> SolverConfig:
    cfg = SolverConfig(mode=args.mode)
    if getattr(args, "time_limit", None) is not None:
        cfg = replace(cfg, time_limit=args.time_limit)
    if getattr(args, "lam", None) is not None:
        cfg = replace(cfg, smoothing=args.lam)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "audit_log", None):
        cfg = replace(cfg, audit_log=args.audit_log)
    return cfg


def cmd_solve(args) -> int:
    data = Path(args.file).read_bytes()
    ps = parse_instance(data, args.round)
    res = solve(ps, _config(args))
    doc = write_solution(ps, res)
    if args.json:
        Path(args.json).write_bytes(doc)
    else:
        sys.stdout.write(doc.decode())
    if args.svg:
        Path(args.svg).write_bytes(render_svg(ps, [p.vertices for p in res.incumbent.partition]))
    return EXIT_OPTIMAL if res.status == "Optimal" else EXIT_TIMELIMIT


def cmd_gen(args) -> int:
    ps = generate_instance(args.seed, args.n, args.bound)
    fmt = args.format or ("json" if args.output and args.output.endswith(".json") else "text")
    blob = write_instance(ps, fmt, name=f"rand-n{args.n}-s{args.seed}")
    if args.output:
        Path(args.output).write_bytes(blob)
    else:
        sys.stdout.write(blob.decode())
    return EXIT_OPTIMAL


def cmd_batch(args) -> int:
    recs = run_batch(args.directory, _config(args), args.jobs, args.round)
    if args.output:
        with open(args.output, "w") as fh:
            write_batch(recs, fh)
    else:
        write_batch(recs, sys.stdout)
    return EXIT_OPTIMAL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mcpp", description="Minimum convex partition of a point set.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("file")
    s.add_argument("--mode", choices=MODES, default="cg")
    s.add_argument("--time-limit", type=float, default=None, metavar="S")
    s.add_argument("--lambda", dest="lam", type=float, default=None, metavar="F",
                   help="dual smoothing weight in [0, 1)")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--svg", default=None)
    s.add_argument("--json", default=None)
    s.add_argument("--audit-log", default=None, help="JSON-lines node log")
    s.add_argument("--round", action="store_true", help="round non-integer coordinates")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="write a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    g.add_argument("--format", choices=("text", "json"), default=None)
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("batch", help="solve every instance in a directory")
    b.add_argument("directory")
    b.add_argument("--mode", choices=MODES, default="cg")
    b.add_argument("--time-limit", type=float, default=None, metavar="S")
    b.add_argument("--lambda", dest="lam", type=float, default=None, metavar="F")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--round", action="store_true")
    b.add_argument("-o", "--output", default=None)
    b.set_defaults(func=cmd_batch)
    return ap


def main(argv: list[str] | None = None) -> int:
    setup_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OPTIMAL if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (ParseError, GeometryError, OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
