"""JSON file formats for groups, braces, solutions and configurations.

Writers emit a canonical layout (one table row per line) so that writing a
parsed canonical file reproduces it byte for byte.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

import numpy as np

from .braces import Brace, validate_brace
from .groups import FiniteGroup, make_subgroup, validate_group
from .solutions import Solution, SolutionConfig


class FormatError(ValueError):
    """A file does not follow the expected layout.  ``where`` names the
    offending field (and row), or the JSON line and column."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


# --- reading -------------------------------------------------------------------


def read_text(source: str | Path) -> str:
    """File contents; ``-`` reads standard input."""
    if str(source) == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise FormatError(str(source), f"cannot read file ({exc.strerror})") from None


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None


def _require(obj: Any, key: str, kind: type | tuple, where: str = "") -> Any:
    if not isinstance(obj, dict):
        raise FormatError(where or "document", "expected a JSON object")
    if key not in obj:
        raise FormatError(f"{where}{key}", "missing field")
    value = obj[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        names = " or ".join(k.__name__ for k in (kind if isinstance(kind, tuple) else (kind,)))
        raise FormatError(f"{where}{key}", f"expected {names}")
    return value


def _int_list(value: Any, where: str, length: int | None = None) -> list[int]:
    if not isinstance(value, list):
        raise FormatError(where, "expected a list")
    if length is not None and len(value) != length:
        raise FormatError(where, f"expected {length} entries, found {len(value)}")
    for k, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, int):
            raise FormatError(f"{where}[{k}]", "expected an integer")
    return value


def _table(obj: dict, key: str, order: int) -> np.ndarray:
    rows = _require(obj, key, list)
    if len(rows) != order:
        raise FormatError(key, f"expected {order} rows, found {len(rows)}")
    for r, row in enumerate(rows):
        _int_list(row, f"{key} row {r}", order)
        bad = [v for v in row if not 0 <= v < order]
        if bad:
            raise FormatError(f"{key} row {r}", f"entry {bad[0]} outside 0..{order - 1}")
    return np.array(rows, dtype=np.int64).reshape(order, order)


def group_from_obj(obj: Any) -> FiniteGroup:
    order = _require(obj, "order", int)
    if order < 1:
        raise FormatError("order", "must be positive")
    return validate_group(_table(obj, "table", order))


def brace_from_obj(obj: Any) -> Brace:
    order = _require(obj, "order", int)
    if order < 1:
        raise FormatError("order", "must be positive")
    if "meta" in obj and not isinstance(obj["meta"], dict):
        raise FormatError("meta", "expected an object")
    return validate_brace(_table(obj, "add", order), _table(obj, "mul", order))


def solution_from_obj(obj: Any) -> Solution:
    size = _require(obj, "size", int)
    labels = _require(obj, "labels", list)
    sigma = _require(obj, "sigma", list)
    if size < 0:
        raise FormatError("size", "must be non-negative")
    if len(labels) != size or not all(isinstance(s, str) for s in labels):
        raise FormatError("labels", f"expected {size} strings")
    if len(sigma) != size:
        raise FormatError("sigma", f"expected {size} rows, found {len(sigma)}")
    for r, row in enumerate(sigma):
        _int_list(row, f"sigma row {r}", size)
        if sorted(row) != list(range(size)):
            raise FormatError(f"sigma row {r}", "not a permutation of the points")
    return Solution(np.array(sigma, dtype=np.int64).reshape(size, size), tuple(labels))


def config_from_obj(obj: Any, brace: Brace | None = None, base: Path | None = None) -> SolutionConfig:
    """``brace`` overrides the file's own brace reference, which may be an
    inline brace object or a path relative to ``base``."""
    if brace is None:
        ref = _require(obj, "brace", (dict, str))
        if isinstance(ref, str):
            path = Path(ref) if base is None or Path(ref).is_absolute() else base / ref
            brace = brace_from_obj(load_json(read_text(path)))
        else:
            brace = brace_from_obj(ref)
    reps = _int_list(_require(obj, "orbits", list), "orbits")
    fams = _require(obj, "families", list)
    if len(fams) != len(reps):
        raise FormatError("families", f"expected {len(reps)} families, one per orbit")
    families = []
    for i, fam in enumerate(fams):
        if not isinstance(fam, list):
            raise FormatError(f"families[{i}]", "expected a list of subgroups")
        members = []
        for j, K in enumerate(fam):
            elems = _int_list(K, f"families[{i}][{j}]")
            try:
                members.append(make_subgroup(brace.mul, elems))
            except ValueError as exc:
                raise FormatError(f"families[{i}][{j}]", str(exc)) from None
        families.append(tuple(members))
    return SolutionConfig(brace, tuple(reps), tuple(families))


def parse_group(source: str | Path) -> FiniteGroup:
    return group_from_obj(load_json(read_text(source)))


def parse_brace(source: str | Path) -> Brace:
    return brace_from_obj(load_json(read_text(source)))


def parse_solution(source: str | Path) -> Solution:
    return solution_from_obj(load_json(read_text(source)))


def parse_config(source: str | Path, brace: Brace | None = None) -> SolutionConfig:
    base = None if str(source) == "-" else Path(source).parent
    return config_from_obj(load_json(read_text(source)), brace, base)


# --- writing -------------------------------------------------------------------


def _dump(fields: list[tuple[str, Any]]) -> str:
    """Object with one line per field; lists of lists get one line per row."""
    lines = []
    for k, (key, value) in enumerate(fields):
        comma = "," if k < len(fields) - 1 else ""
        if isinstance(value, list) and value and all(isinstance(r, list) for r in value):
            rows = [f"    {json.dumps(r)}" for r in value]
            lines.append(f"  {json.dumps(key)}: [\n" + ",\n".join(rows) + f"\n  ]{comma}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value, sort_keys=True)}{comma}")
    return "{\n" + "\n".join(lines) + "\n}\n"


def group_to_text(G: FiniteGroup) -> str:
    return _dump([("order", G.order), ("table", G.table.tolist())])


def brace_to_obj(B: Brace, meta: dict | None = None) -> dict:
    return {"order": B.order, "add": B.add.table.tolist(), "mul": B.mul.table.tolist(), "meta": meta or {}}


def brace_to_text(B: Brace, meta: dict | None = None) -> str:
    return _dump(list(brace_to_obj(B, meta).items()))


def solution_to_text(s: Solution) -> str:
    return _dump([("size", s.size), ("labels", list(s.labels)), ("sigma", s.sigma.tolist())])


def config_to_text(cfg: SolutionConfig, brace_ref: str | None = None) -> str:
    """``brace_ref`` writes a path reference instead of the inline brace."""
    brace = brace_ref if brace_ref is not None else brace_to_obj(cfg.brace)
    fams = [[list(K.elements) for K in fam] for fam in cfg.families]
    return _dump([("brace", brace), ("orbits", list(cfg.reps)), ("families", fams)])


def _write(text: str, path: str | Path) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def write_group(G: FiniteGroup, path: str | Path) -> None:
    _write(group_to_text(G), path)


def write_brace(B: Brace, path: str | Path, meta: dict | None = None) -> None:
    _write(brace_to_text(B, meta), path)


def write_solution(s: Solution, path: str | Path) -> None:
    _write(solution_to_text(s), path)


def write_config(cfg: SolutionConfig, path: str | Path, brace_ref: str | None = None) -> None:
    _write(config_to_text(cfg, brace_ref), path)
