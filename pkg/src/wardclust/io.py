"""Reading inputs and writing dendrograms (merge table, Newick, JSON, SVG)."""
from __future__ import annotations

import csv
import io
import json
import re
from pathlib import Path

import numpy as np

from .core import (DataMatrix, Dendrogram, DissimilarityMatrix, HeightScale, LinkageMethod, Scale,
                   ValidationError, n_from_condensed)

FORMATS = ("merge-table", "newick", "json", "svg")
JSON_FORMAT = "wardclust-dendrogram"
NODE_ID_NOTE = "leaves are 0..n-1; the cluster created at step t (0-based) is node n+t"


class ParseError(ValueError):
    """Input file could not be parsed; message carries the line number."""


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _read_rows(text: str):
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not cells or all(c == "" for c in cells) or cells[0].startswith("#"):
            continue
        rows.append((lineno, cells))
    return rows


def _split_table(rows):
    """Peel off an optional header row and label column, return floats."""
    if not rows:
        raise ParseError("no data rows")
    header = None
    first = rows[0][1]
    if not all(_is_number(c) for c in first[1:]) or (len(first) == 1 and not _is_number(first[0])):
        header = rows[0][1]
        rows = rows[1:]
    if not rows:
        raise ParseError("header but no data rows")
    has_labels = any(not _is_number(cells[0]) for _, cells in rows)
    labels = [cells[0] for _, cells in rows] if has_labels else None
    width = len(rows[0][1])
    values = []
    for lineno, cells in rows:
        if len(cells) != width:
            raise ParseError(f"line {lineno}: expected {width} fields, got {len(cells)}")
        body = cells[1:] if has_labels else cells
        out = []
        for col, c in enumerate(body):
            try:
                out.append(float(c))
            except ValueError:
                raise ParseError(f"line {lineno}, column {col + 1 + has_labels}: non-numeric cell {c!r}") from None
        values.append(out)
    return header, labels, np.array(values, dtype=float)


def read_data_matrix(text: str, masses=None) -> DataMatrix:
    _, labels, values = _split_table(_read_rows(text))
    if values.shape[1] == 0:
        raise ParseError("no numeric columns")
    return DataMatrix(values, masses, labels)


_N_DECL = re.compile(r"#\s*n\s*=\s*(\d+)")


def read_dissimilarity(text: str, scale=Scale.PLAIN) -> DissimilarityMatrix:
    declared = None
    for line in text.splitlines():
        m = _N_DECL.match(line.strip())
        if m:
            declared = int(m.group(1))
            break
    rows = _read_rows(text)
    if not rows:
        raise ParseError("no data rows")
    if declared is not None or len(rows) == 1 or all(len(c) == 1 for _, c in rows):
        vals = []
        for lineno, cells in rows:
            for c in cells:
                if c == "":
                    continue
                try:
                    vals.append(float(c))
                except ValueError:
                    raise ParseError(f"line {lineno}: non-numeric cell {c!r}") from None
        try:
            n = n_from_condensed(len(vals))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        if declared is not None and declared != n:
            raise ParseError(f"declared n={declared} but {len(vals)} entries imply n={n}")
        return DissimilarityMatrix(n, vals, scale)
    header, labels, values = _split_table(rows)
    if labels is None and header is not None and len(header) == values.shape[1]:
        labels = header
    return DissimilarityMatrix.from_square(values, scale, labels)


def ingest(path, kind: str, scale=Scale.PLAIN):
    """Load a data matrix (``kind="data"``) or dissimilarity file (``kind="dissim"``)."""
    text = Path(path).read_text()
    if kind in ("data", "data-matrix"):
        return read_data_matrix(text)
    if kind in ("dissim", "dissimilarity"):
        return read_dissimilarity(text, scale)
    raise ValueError(f"unknown input kind {kind!r}")


def fmt7(v: float) -> str:
    """Seven significant digits, the precision of the published height listings."""
    return f"{v:.7g}"


def merge_table(dend: Dendrogram) -> str:
    lines = [f"# {NODE_ID_NOTE}", "left,right,height,size"]
    for s in dend.steps:
        lines.append(f"{s.left},{s.right},{fmt7(s.height)},{fmt7(s.size)}")
    return "\n".join(lines) + "\n"


def _leaf_name(dend, i):
    name = dend.labels[i] if dend.labels else str(i)
    if re.search(r"[\s(),:;\[\]']", name):
        name = "'" + name.replace("'", "''") + "'"
    return name


def newick(dend: Dendrogram) -> str:
    """Newick string; a child's branch length is parent height minus child height."""
    n = dend.n
    if n == 1:
        return f"{_leaf_name(dend, 0)};"

    def height(node):
        return 0.0 if node < n else dend.steps[node - n].height

    text = {}
    for t, s in enumerate(dend.steps):
        h = s.height
        parts = []
        for c in (s.left, s.right):
            sub = text.pop(c) if c >= n else _leaf_name(dend, c)
            parts.append(f"{sub}:{h - height(c)!r}")
        text[n + t] = "(" + ",".join(parts) + ")"
    return text[2 * n - 2] + ";"


def to_json(dend: Dendrogram) -> str:
    doc = {
        "format": JSON_FORMAT,
        "version": 1,
        "node_ids": NODE_ID_NOTE,
        "n": dend.n,
        "method": dend.method.value,
        "height_scale": dend.height_scale.value,
        "steps": [[s.left, s.right, s.height, s.size] for s in dend.steps],
        "order": list(dend.order),
        "labels": list(dend.labels) if dend.labels else None,
        "masses": list(dend.masses) if dend.masses else None,
        "metadata": dend.metadata,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def from_json(text: str) -> Dendrogram:
    doc = json.loads(text)
    if doc.get("format") != JSON_FORMAT:
        raise ParseError(f"not a {JSON_FORMAT} document")
    try:
        return Dendrogram(doc["n"], tuple(tuple(s) for s in doc["steps"]), LinkageMethod.parse(doc["method"]),
                          HeightScale(doc["height_scale"]), order=tuple(doc["order"]),
                          labels=doc.get("labels"), metadata=doc.get("metadata") or {},
                          masses=doc.get("masses"))
    except (KeyError, TypeError, ValidationError) as exc:
        raise ParseError(f"malformed dendrogram document: {exc}") from None


def svg(dend: Dendrogram, width: int = 800, height: int = 500) -> str:
    """Static dendrogram drawing: leaves along the bottom in ``order``, heights up."""
    n = dend.n
    left, right, top, bottom = 70.0, 20.0, 30.0, 60.0
    plot_w, plot_h = width - left - right, height - top - bottom
    hmax = max([s.height for s in dend.steps] + [0.0])
    hmin = min([s.height for s in dend.steps] + [0.0])
    span = (hmax - hmin) or 1.0

    def ypos(h):
        return top + plot_h * (1.0 - (h - hmin) / span)

    slot = plot_w / max(n, 1)
    x = {leaf: left + slot * (k + 0.5) for k, leaf in enumerate(dend.order)}
    y = {leaf: ypos(0.0) for leaf in range(n)}
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{dend.method.value} dendrogram ({dend.height_scale.value} heights)</title>',
        '<g fill="none" stroke="#222" stroke-width="1">',
    ]
    for t, s in enumerate(dend.steps):
        node = n + t
        yh = ypos(s.height)
        xa, xb = x[s.left], x[s.right]
        out.append(f'<path d="M{xa:.2f},{y[s.left]:.2f}V{yh:.2f}H{xb:.2f}V{y[s.right]:.2f}"/>')
        x[node] = (xa + xb) / 2.0
        y[node] = yh
    out.append("</g>")
    # vertical axis with five ticks
    out.append(f'<g stroke="#555" font-family="sans-serif" font-size="10">')
    out.append(f'<line x1="{left - 10:.2f}" y1="{top:.2f}" x2="{left - 10:.2f}" y2="{top + plot_h:.2f}"/>')
    for k in range(5):
        h = hmin + span * k / 4
        yy = ypos(h)
        out.append(f'<line x1="{left - 14:.2f}" y1="{yy:.2f}" x2="{left - 10:.2f}" y2="{yy:.2f}"/>')
        out.append(f'<text x="{left - 16:.2f}" y="{yy + 3:.2f}" text-anchor="end" stroke="none">{fmt7(h)}</text>')
    out.append("</g>")
    if n <= 200:
        out.append('<g font-family="sans-serif" font-size="9" text-anchor="middle">')
        for leaf in dend.order:
            label = dend.labels[leaf] if dend.labels else str(leaf)
            label = label.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            out.append(f'<text x="{x[leaf]:.2f}" y="{top + plot_h + 14:.2f}">{label}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export(dend: Dendrogram, fmt: str) -> bytes:
    if fmt == "merge-table":
        return merge_table(dend).encode()
    if fmt == "newick":
        return (newick(dend) + "\n").encode()
    if fmt == "json":
        return to_json(dend).encode()
    if fmt == "svg":
        return svg(dend).encode()
    raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


EXTENSIONS = {"merge-table": ".csv", "newick": ".nwk", "json": ".json", "svg": ".svg"}
