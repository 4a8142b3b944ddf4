"""
Tab-separated text artifacts with '#' header lines.

Edge lists hold "src<TAB>dst<TAB>weight" with 0-based birth-order node ids
and weights rendered with 17 significant digits, which round-trips 64-bit
floats exactly.
"""
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence

import numpy as np

from trafficweb.core.errors import EdgeListParseError, ParameterDomainError, TrafficWebError
from trafficweb.services.analysis_service import SpectrumTable
from trafficweb.services.graph_view import GraphView
from trafficweb.services.growth_service import Trajectory

logger = logging.getLogger(__name__)

_HEADER_KEYS = {"m": int, "delta": float, "n0": int, "n": int, "seed": int}


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_lines(path: Path, lines: Iterable[str]) -> Path:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8") as handle:
            for line in lines:
                handle.write(line)
                handle.write("\n")
    except OSError as e:
        raise TrafficWebError(f"Could not write {path}: {str(e)}") from e
    return path


def _header(view: GraphView, kind: str) -> List[str]:
    lines = [f"# trafficweb {kind}"]
    for key, value in (("m", view.m), ("delta", view.delta), ("n0", view.n0), ("n", view.n), ("seed", view.seed)):
        if value is not None:
            lines.append(f"# {key}={_fmt(value) if key == 'delta' else value}")
    return lines


def write_edge_list(view: GraphView, path: Path) -> Path:
    lines = _header(view, "edge list")
    lines.append("# src\tdst\tweight")
    lines.extend(
        f"{int(a)}\t{int(b)}\t{_fmt(float(w))}" for a, b, w in zip(view.src, view.dst, view.weight)
    )
    return _write_lines(path, lines)


def read_edge_list(path: Path) -> GraphView:
    path = Path(path)
    meta: Dict[str, float] = {}
    src: List[int] = []
    dst: List[int] = []
    weight: List[float] = []
    try:
        handle = path.open("r", encoding="utf-8")
    except OSError as e:
        raise EdgeListParseError(f"cannot open edge list: {str(e)}", path=str(path)) from e

    with handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    key = key.strip()
                    if key in _HEADER_KEYS:
                        try:
                            meta[key] = _HEADER_KEYS[key](value.strip())
                        except ValueError as e:
                            raise EdgeListParseError(f"bad header value '{body}'", line_no, str(path)) from e
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise EdgeListParseError(
                    f"expected 'src<TAB>dst<TAB>weight', got {len(fields)} field(s)", line_no, str(path)
                )
            try:
                a, b, w = int(fields[0]), int(fields[1]), float(fields[2])
            except ValueError as e:
                raise EdgeListParseError(f"unparseable values in '{line}'", line_no, str(path)) from e
            if a < 0 or b < 0:
                raise EdgeListParseError("node ids must be non-negative", line_no, str(path))
            if not w >= 0 or math.isinf(w):
                raise ParameterDomainError(f"{path}:line {line_no}: negative or invalid weight {fields[2]}")
            src.append(a)
            dst.append(b)
            weight.append(w)

    largest = max(max(src, default=-1), max(dst, default=-1)) + 1
    n = max(int(meta.get("n", 0)), largest)
    n0 = meta.get("n0")
    ids = np.arange(n, dtype=np.int64)
    birth = np.maximum(ids - n0 + 1, 0) if n0 is not None else ids.copy()
    logger.info(f"Loaded {len(src)} edges over {n} nodes from {path}")
    return GraphView(
        n=n,
        src=np.asarray(src, dtype=np.int64),
        dst=np.asarray(dst, dtype=np.int64),
        weight=np.asarray(weight, dtype=np.float64),
        birth=birth.astype(np.int64),
        m=meta.get("m"),
        delta=meta.get("delta"),
        n0=n0,
        seed=meta.get("seed"),
    )


def write_node_table(view: GraphView, path: Path) -> Path:
    lines = _header(view, "node table")
    lines.append("# node\tbirth\tk_in\tk_out\ts_in\ts_out")
    k_in, k_out, s_in, s_out = view.k_in, view.k_out, view.s_in, view.s_out
    lines.extend(
        f"{i}\t{int(view.birth[i])}\t{int(k_in[i])}\t{int(k_out[i])}\t{_fmt(float(s_in[i]))}\t{_fmt(float(s_out[i]))}"
        for i in range(view.n)
    )
    return _write_lines(path, lines)


def write_trajectory(trajectory: Trajectory, path: Path) -> Path:
    lines = [f"# trafficweb trajectory node={trajectory.node}", "# t\ts_in\tk_in"]
    lines.extend(f"{t}\t{_fmt(s)}\t{k}" for t, s, k in trajectory.points)
    return _write_lines(path, lines)


def write_trajectories(trajectories: Mapping[int, Trajectory], out_dir: Path) -> List[Path]:
    return [
        write_trajectory(trajectory, Path(out_dir) / f"trajectory_node{node}.tsv")
        for node, trajectory in sorted(trajectories.items())
    ]


def read_trajectory(path: Path) -> Trajectory:
    path = Path(path)
    node = -1
    points = []
    with path.open("r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "node=" in line:
                    node = int(line.split("node=")[1].split()[0])
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise EdgeListParseError("expected 't<TAB>s_in<TAB>k_in'", line_no, str(path))
            points.append((int(fields[0]), float(fields[1]), int(fields[2])))
    return Trajectory(node=node, points=points)


def write_spectrum(table: SpectrumTable, path: Path) -> Path:
    lines = [f"# trafficweb {table.name}", f"# {table.x_label}\tcount\t{table.value_label}\treliable"]
    lines.extend(f"{_fmt(row.x)}\t{row.count}\t{_fmt(row.value)}\t{int(row.reliable)}" for row in table.rows)
    return _write_lines(path, lines)


def write_key_values(values: Mapping[str, float], path: Path, title: str = "summary") -> Path:
    lines = [f"# trafficweb {title}", "# key\tvalue"]
    lines.extend(f"{key}\t{_fmt(float(value))}" for key, value in values.items())
    return _write_lines(path, lines)


def read_key_values(path: Path) -> Dict[str, float]:
    values: Dict[str, float] = {}
    with Path(path).open("r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("\t")
            values[key] = float(value)
    return values


def write_rows(header: Sequence[str], rows: Iterable[Sequence[object]], path: Path, title: str) -> Path:
    """Generic table: one '#' title line, one '#' column line, then tab-separated rows"""
    lines = [f"# trafficweb {title}", "# " + "\t".join(header)]
    for row in rows:
        lines.append("\t".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    return _write_lines(path, lines)
