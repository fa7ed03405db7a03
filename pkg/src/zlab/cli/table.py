"""Tabular scan output with deterministic CSV and JSON rendering."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .. import __version__


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        return format_complex(v)
    return str(v)


def format_complex(z: complex) -> str:
    """Shortest round-trip text of z in the CLI's re+imi form."""
    re, im = repr(z.real), repr(abs(z.imag))
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{re}{sign}{im}i"


def _json_value(v: Any) -> Any:
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


@dataclass
class ScanTable:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        self.meta = {str(k): str(v) for k, v in self.meta.items()}
        self.meta.setdefault("tool_version", __version__)
        for r in self.rows:
            self._check(r)

    def _check(self, row: Sequence) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row arity {len(row)} != {len(self.columns)} columns")

    def append(self, row: Sequence) -> None:
        self._check(row)
        self.rows.append(tuple(row))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for k, v in sorted(self.meta.items()):
            buf.write(f"# {k}={v}\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(v) for v in r])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "columns": list(self.columns),
            "rows": [[_json_value(v) for v in r] for r in self.rows],
            "meta": dict(sorted(self.meta.items())),
        }
        return json.dumps(doc, indent=1) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")

    @classmethod
    def from_json(cls, text: str) -> "ScanTable":
        doc = json.loads(text)
        rows = []
        for r in doc["rows"]:
            rows.append(tuple(complex(v["re"], v["im"]) if isinstance(v, dict) else v for v in r))
        return cls(tuple(doc["columns"]), rows, doc["meta"])

    @classmethod
    def from_csv(cls, text: str) -> "ScanTable":
        meta = {}
        lines = []
        for line in text.splitlines():
            if line.startswith("# "):
                k, _, v = line[2:].partition("=")
                meta[k] = v
            else:
                lines.append(line)
        reader = csv.reader(lines)
        cols = tuple(next(reader))
        rows = [tuple(_parse_cell(c) for c in r) for r in reader]
        return cls(cols, rows, meta)


def _parse_cell(c: str) -> Any:
    if c == "":
        return None
    if c in ("true", "false"):
        return c == "true"
    try:
        return int(c)
    except ValueError:
        pass
    try:
        return float(c)
    except ValueError:
        pass
    if c.endswith("i"):
        try:
            return complex(c[:-1] + "j")
        except ValueError:
            pass
    return c


def thread_count(requested: int | None = None) -> int:
    if requested is not None and requested > 0:
        return requested
    env = os.environ.get("ZLAB_THREADS")
    if env and env.isdigit() and int(env) > 0:
        return int(env)
    return 1


def ordered_map(fn: Callable, items: Iterable, threads: int | None = None) -> list:
    """map(fn, items) with results in input order regardless of worker count."""
    items = list(items)
    n = thread_count(threads)
    if n == 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
