"""Plain-text file formats for networks, kernel tables and matrices.

Network file::

    field 5
    node s v t
    source s
    sink t
    edge e1 s v
    edge e2 v t

Kernel file: one ``kernel <node> <rows> <cols>`` header per coding node,
source first, each followed by ``rows`` lines of ``cols`` scalars (no lines
when either is zero). Matrix files are bare rows of scalars. ``#`` starts a
comment anywhere. Emitters produce a canonical form that parses back to an
identical object and re-emits byte for byte.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from snc.errors import ParseError, ShapeMismatch
from snc.gf import FieldSpec
from snc.lnc import LinearNetworkCode
from snc.network import Edge, Network


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield no, body


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(no, f"expected an integer, got {tok!r}") from None


def parse_network_text(text: str) -> tuple[Network, FieldSpec]:
    p = source = None
    nodes: list[str] = []
    sinks: list[str] = []
    edges: list[Edge] = []
    for no, tok in _lines(text):
        head, args = tok[0], tok[1:]
        if head == "field":
            if p is not None:
                raise ParseError(no, "duplicate field directive")
            if len(args) != 1:
                raise ParseError(no, "usage: field <p>")
            try:
                field = FieldSpec(_int(args[0], no))
            except ValueError as exc:
                raise ParseError(no, str(exc)) from None
            p = field.p
        elif head == "node":
            if not args:
                raise ParseError(no, "usage: node <id>...")
            nodes.extend(args)
        elif head == "source":
            if source is not None:
                raise ParseError(no, "duplicate source directive")
            if len(args) != 1:
                raise ParseError(no, "usage: source <id>")
            source = args[0]
        elif head == "sink":
            if not args:
                raise ParseError(no, "usage: sink <id>...")
            sinks.extend(args)
        elif head == "edge":
            if len(args) != 3:
                raise ParseError(no, "usage: edge <id> <tail> <head>")
            edges.append(Edge(*args))
        else:
            raise ParseError(no, f"unknown directive {head!r}")
    if p is None:
        raise ParseError(0, "missing field directive")
    if source is None:
        raise ParseError(0, "missing source directive")
    if not sinks:
        raise ParseError(0, "missing sink directive")
    return Network(nodes, edges, source, sinks), FieldSpec(p)


def parse_network(path: str | Path) -> tuple[Network, FieldSpec]:
    text = Path(path).read_text()
    try:
        return parse_network_text(text)
    except ParseError as exc:
        raise ParseError(exc.line, exc.reason, str(path)) from None


def emit_network(net: Network, f: FieldSpec) -> str:
    lines = [f"field {f.p}", "node " + " ".join(net.nodes), f"source {net.source}",
             "sink " + " ".join(net.sinks)]
    lines += [f"edge {e.id} {e.tail} {e.head}" for e in net.edges]
    return "\n".join(lines) + "\n"


def _rows(rows: list[tuple[int, list[str]]], ncols: int) -> np.ndarray:
    out = []
    for no, tok in rows:
        if len(tok) != ncols:
            raise ParseError(no, f"expected {ncols} entries, got {len(tok)}")
        out.append([_int(t, no) for t in tok])
    return np.array(out, dtype=object).reshape(len(out), ncols)


def parse_kernels_text(text: str, net: Network, f: FieldSpec) -> LinearNetworkCode:
    lines = list(_lines(text))
    blocks: dict[str, np.ndarray] = {}
    first = None
    i = 0
    while i < len(lines):
        no, tok = lines[i]
        if tok[0] != "kernel" or len(tok) != 4:
            raise ParseError(no, "expected 'kernel <node> <rows> <cols>'")
        v, rows, cols = tok[1], _int(tok[2], no), _int(tok[3], no)
        if rows < 0 or cols < 0:
            raise ParseError(no, "negative kernel shape")
        if v in blocks:
            raise ParseError(no, f"duplicate kernel for {v!r}")
        first = v if first is None else first
        nlines = rows if cols else 0
        body = lines[i + 1:i + 1 + nlines]
        if len(body) < nlines:
            raise ParseError(no, f"kernel {v!r} truncated")
        for bno, btok in body:
            if btok[0] == "kernel":
                raise ParseError(bno, f"kernel {v!r} truncated")
        blocks[v] = _rows(body, cols) if cols else np.zeros((rows, 0), dtype=object)
        i += 1 + nlines
    if first is not None and first != net.source:
        raise ParseError(lines[0][0], "the source block must come first")
    if net.source not in blocks:
        raise ShapeMismatch(net.source, "missing local kernel")
    n = blocks[net.source].shape[0]
    arrays = {}
    for v, k in blocks.items():
        if k.size and (min(k.flat) < 0 or max(k.flat) >= f.p):
            raise ShapeMismatch(v, f"entries must lie in [0, {f.p - 1}]")
        arrays[v] = k.astype(f.dtype)
    return LinearNetworkCode(net, f, n, arrays)


def parse_kernels(path: str | Path, net: Network, f: FieldSpec) -> LinearNetworkCode:
    try:
        return parse_kernels_text(Path(path).read_text(), net, f)
    except ParseError as exc:
        raise ParseError(exc.line, exc.reason, str(path)) from None


def _emit_rows(m: np.ndarray) -> list[str]:
    if m.shape[1] == 0:
        return []
    return [" ".join(str(int(x)) for x in row) for row in m]


def emit_kernels(code: LinearNetworkCode) -> str:
    lines = []
    for v in code.network.coding_nodes:
        k = code.kernels[v]
        lines.append(f"kernel {v} {k.shape[0]} {k.shape[1]}")
        lines += _emit_rows(k)
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str, f: FieldSpec) -> np.ndarray:
    lines = list(_lines(text))
    if not lines:
        return f.zeros((0, 0))
    m = _rows(lines, len(lines[0][1]))
    if m.size and (min(m.flat) < 0 or max(m.flat) >= f.p):
        raise ParseError(lines[0][0], f"matrix entries must lie in [0, {f.p - 1}]")
    return m.astype(f.dtype)


def parse_matrix(path: str | Path, f: FieldSpec) -> np.ndarray:
    try:
        return parse_matrix_text(Path(path).read_text(), f)
    except ParseError as exc:
        raise ParseError(exc.line, exc.reason, str(path)) from None


def emit_matrix(m: np.ndarray) -> str:
    m = np.asarray(m)
    if m.size == 0:
        return ""
    return "".join(line + "\n" for line in _emit_rows(m))

