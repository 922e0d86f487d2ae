"""Body and cover files.

Both are JSON objects.  Coordinates are written as decimal strings with 17
significant digits so that reading a file back reproduces every float
exactly; plain JSON numbers are accepted on input.

    body:  {"name": str, "dim": int, "vertices": [[x, y(, z)], ...]}
    cover: {"body": str, "gamma": x, "centers": [[x, y(, z)], ...]}
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .covering import HomothetCover
from .geometry import ConvexBody, convex_hull


class ParseError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BodyFile:
    name: str
    dim: int
    vertices: np.ndarray

    def body(self) -> ConvexBody:
        return convex_hull(self.vertices, self.dim)


@dataclass(frozen=True, eq=False)
class CoverFile:
    body: str
    gamma: float
    centers: np.ndarray

    def cover(self) -> HomothetCover:
        return HomothetCover(self.gamma, self.centers, self.body)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _num(v, what):
    if isinstance(v, bool):
        raise ParseError(f"{what}: expected a number")
    try:
        x = float(v)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: cannot read {v!r} as a number") from exc
    if not np.isfinite(x):
        raise ParseError(f"{what}: non-finite value")
    return x


def _rows(data, key, dim):
    rows = data.get(key)
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"{key!r} must be a non-empty list of rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"{key}[{i}] must have {dim} coordinates")
        out.append([_num(v, f"{key}[{i}]") for v in row])
    return np.array(out)


def _load(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    return data


def parse_body(data) -> BodyFile:
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim not in (2, 3):
        raise ParseError("'dim' must be 2 or 3")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ParseError("'name' must be a string")
    return BodyFile(name, dim, _rows(data, "vertices", dim))


def parse_cover(data, dim=None) -> CoverFile:
    body = data.get("body", "")
    if not isinstance(body, str):
        raise ParseError("'body' must be a string")
    gamma = _num(data.get("gamma"), "gamma")
    if not 0.0 <= gamma <= 1.0:
        raise ParseError("'gamma' must lie in [0, 1]")
    rows = data.get("centers")
    if dim is None:
        if not isinstance(rows, list) or not rows or not isinstance(rows[0], list):
            raise ParseError("'centers' must be a non-empty list of rows")
        dim = len(rows[0])
    return CoverFile(body, gamma, _rows(data, "centers", dim))


def read_body(path) -> BodyFile:
    return parse_body(_load(path))


def read_cover(path, dim=None) -> CoverFile:
    return parse_cover(_load(path), dim)


def body_dict(name, vertices):
    V = np.atleast_2d(np.asarray(vertices, dtype=float))
    return {"name": name, "dim": int(V.shape[1]), "vertices": [[fmt(x) for x in row] for row in V]}


def cover_dict(cover: HomothetCover, body=None):
    return {
        "body": cover.body_ref if body is None else body,
        "gamma": fmt(cover.gamma),
        "centers": [[fmt(x) for x in row] for row in cover.centers],
    }


def write_json(path, data):
    """Write atomically: temp file in the target directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh, indent=1)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_text(path, text):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_body(path, name, vertices):
    write_json(path, body_dict(name, vertices))


def write_cover(path, cover: HomothetCover, body=None):
    write_json(path, cover_dict(cover, body))
