"""Instance and solution files.

Instances come as plain text (``n`` then ``n`` lines ``x y``) or as JSON
``{"name": ..., "points": [{"i": 0, "x": .., "y": ..}, ...]}``.  Only
integer coordinates are accepted; ``round_floats=True`` rounds half to
even instead of rejecting.
"""
from __future__ import annotations

import json
from decimal import Decimal, InvalidOperation
from typing import Any

from .geometry import PointSet
from .validity import partition_edges

# deterministic key order of solution files
SOLUTION_KEYS = ("value", "bound", "status", "polygons", "edges", "stats")
STATS_KEYS = ("nodes", "pricing_rounds", "columns", "cuts", "seconds")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, offset: int | None = None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", offset {offset}" if offset is not None else "") + ")"
        super().__init__(msg + where)
        self.line = line
        self.offset = offset


class _FloatToken(str):
    pass


def _coord(tok: Any, round_floats: bool, line: int | None, offset: int | None) -> int:
    if isinstance(tok, bool):
        raise ParseError(f"coordinate {tok!r} is not an integer", line, offset)
    if isinstance(tok, int):
        return tok
    s = str(tok)
    try:
        return int(s)
    except ValueError:
        pass
    try:
        d = Decimal(s)
    except InvalidOperation:
        raise ParseError(f"coordinate {s!r} is not a number", line, offset) from None
    if not d.is_finite():
        raise ParseError(f"coordinate {s!r} is not finite", line, offset)
    if not round_floats:
        raise ParseError(f"non-integer coordinate {s!r} (use --round to accept)", line, offset)
    return int(d.to_integral_value())


def _parse_text(text: str, round_floats: bool) -> PointSet:
    lines = text.splitlines()
    rows = [(k + 1, ln) for k, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise ParseError("empty instance", 1, 0)
    first_no, first = rows[0]
    try:
        n = int(first.strip())
    except ValueError:
        raise ParseError(f"expected point count, got {first.strip()!r}", first_no, 0) from None
    if n < 0:
        raise ParseError("negative point count", first_no, 0)
    body = rows[1:]
    if len(body) != n:
        ln = body[-1][0] + 1 if body else first_no + 1
        raise ParseError(f"expected {n} points, found {len(body)}", ln, 0)
    pts = []
    for no, ln in body:
        toks = ln.split()
        if len(toks) != 2:
            raise ParseError(f"expected 'x y', got {ln.strip()!r}", no, 0)
        pts.append(tuple(_coord(t, round_floats, no, ln.index(t)) for t in toks))
    return PointSet(tuple(pts))


def _parse_json(text: str, round_floats: bool) -> PointSet:
    try:
        doc = json.loads(text, parse_float=_FloatToken)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno - 1) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("points"), list):
        raise ParseError("JSON instance needs a 'points' list", 1, 0)
    entries = doc["points"]
    pts: list[tuple[int, int] | None] = [None] * len(entries)
    for k, p in enumerate(entries):
        if not isinstance(p, dict) or "x" not in p or "y" not in p:
            raise ParseError(f"point entry {k} needs 'x' and 'y'")
        i = p.get("i", k)
        if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < len(entries) or pts[i] is not None:
            raise ParseError(f"point entry {k} has a bad or repeated index {i!r}")
        pts[i] = (_coord(p["x"], round_floats, None, None), _coord(p["y"], round_floats, None, None))
    return PointSet(tuple(pts))


def parse_instance(data: bytes | str, round_floats: bool = False) -> PointSet:
    """Parse either format; raises ParseError or GeneralPositionViolation."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc.reason}", None, exc.start) from None
    if data.lstrip().startswith("{"):
        return _parse_json(data, round_floats)
    return _parse_text(data, round_floats)


def instance_name(data: bytes | str, default: str) -> str:
    text = data.decode("utf-8", "replace") if isinstance(data, bytes) else data
    if text.lstrip().startswith("{"):
        try:
            name = json.loads(text).get("name")
        except (json.JSONDecodeError, AttributeError):
            return default
        if isinstance(name, str):
            return name
    return default


def write_instance(ps: PointSet, fmt: str = "text", name: str = "instance") -> bytes:
    if fmt == "text":
        return (f"{ps.n}\n" + "".join(f"{x} {y}\n" for x, y in ps.points)).encode()
    if fmt == "json":
        doc = {"name": name, "points": [{"i": i, "x": x, "y": y} for i, (x, y) in enumerate(ps.points)]}
        return (json.dumps(doc, indent=1) + "\n").encode()
    raise ValueError(f"unknown instance format {fmt!r}")


def solution_dict(ps: PointSet, result) -> dict:
    polys = sorted(tuple(p.vertices) for p in result.incumbent.partition)
    st = result.stats
    bound = result.bound
    return {
        "value": result.value,
        "bound": int(bound) if float(bound).is_integer() else bound,
        "status": result.status,
        "polygons": [list(p) for p in polys],
        "edges": [list(e) for e in partition_edges(ps, polys)],
        "stats": {k: (max(0.0, round(st.seconds, 6)) if k == "seconds" else int(getattr(st, k)))
                  for k in STATS_KEYS},
    }


def write_solution(ps: PointSet, result) -> bytes:
    return (json.dumps(solution_dict(ps, result)) + "\n").encode()
