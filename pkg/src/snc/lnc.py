"""Linear network codes on a :class:`~snc.network.Network`.

A code is its set of local encoding kernels. Global kernels are always
derived from the local ones and never the other way round, since different
local kernels can induce the same global kernels.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from snc.errors import (ConstructionFailed, DimensionMismatch, DimensionTooLarge,
                        ShapeMismatch)
from snc.gf import FieldSpec, matrix_rank
from snc.network import Network

RETRY_BUDGET = 64
# exhaustive fallback only when p ** (number of coefficients) is at most this
EXHAUSTIVE_LIMIT = 200_000


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LinearNetworkCode:
    """An ``dimension``-dimensional code: one kernel per non-sink node.

    ``kernels[v]`` has shape ``|In(v)| x |Out(v)|`` (``dimension x |Out(s)|``
    at the source), with rows and columns in the network's edge order.
    Kernel arrays are read-only so that codes can share them.
    """

    network: Network
    field: FieldSpec
    dimension: int
    kernels: Mapping[str, np.ndarray]

    def __post_init__(self) -> None:
        net = self.network
        sinks = set(net.sinks)
        for v in self.kernels:
            if v not in net._in:
                raise ShapeMismatch(v, "not a node of the network")
            if v in sinks:
                raise ShapeMismatch(v, "sinks carry no kernel")
        fixed = {}
        for v in net.coding_nodes:
            if v not in self.kernels:
                raise ShapeMismatch(v, "missing local kernel")
            k = self.kernels[v]
            rows = self.dimension if v == net.source else len(net.in_edges(v))
            shape = (rows, len(net.out_edges(v)))
            k = np.asarray(k)
            if k.ndim != 2 or k.shape != shape:
                raise ShapeMismatch(v, f"kernel shape {k.shape}, expected {shape}")
            if k.size and (k.min() < 0 or k.max() >= self.field.p):
                raise ShapeMismatch(v, f"entries must lie in [0, {self.field.p - 1}]")
            fixed[v] = k if not k.flags.writeable and k.dtype == self.field.dtype \
                else _frozen(k.astype(self.field.dtype))
        object.__setattr__(self, "kernels", fixed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearNetworkCode):
            return NotImplemented
        return (self.network == other.network and self.field == other.field
                and self.dimension == other.dimension
                and all(np.array_equal(self.kernels[v], other.kernels[v]) for v in self.kernels))

    __hash__ = None  # type: ignore[assignment]

    @property
    def source_kernel(self) -> np.ndarray:
        return self.kernels[self.network.source]


def global_kernels(code: LinearNetworkCode) -> dict[str, np.ndarray]:
    """Global kernel ``f_e`` of every edge, keyed by edge id, in edge order."""
    net, f = code.network, code.field
    out: dict[str, np.ndarray] = {}
    for v in net.coding_nodes:
        if v == net.source:
            incoming = f.eye(code.dimension)
        else:
            incoming = _columns(out, net.in_edges(v), code.dimension, f)
        produced = f.matmul(incoming, code.kernels[v])
        for j, e in enumerate(net.out_edges(v)):
            out[e] = produced[:, j]
    return {e: out[e] for e in net.edge_ids}


def _columns(vectors: Mapping[str, np.ndarray], ids, dim: int, f: FieldSpec) -> np.ndarray:
    if not ids:
        return f.zeros((dim, 0))
    return np.stack([vectors[e] for e in ids], axis=1)


def kernel_matrix(gk: Mapping[str, np.ndarray], ids, dim: int, f: FieldSpec) -> np.ndarray:
    """Global kernels of ``ids`` side by side as columns."""
    return _columns(gk, tuple(ids), dim, f)


def sink_matrix(code: LinearNetworkCode, t: str, gk: Mapping[str, np.ndarray] | None = None
                ) -> np.ndarray:
    gk = global_kernels(code) if gk is None else gk
    return kernel_matrix(gk, code.network.in_edges(t), code.dimension, code.field)


def transmit_batch(code: LinearNetworkCode, x: np.ndarray) -> np.ndarray:
    """Symbols on every edge for each input row of ``x``.

    Evaluated by the local recursion alone. Returns an array of shape
    ``(len(x), |E|)`` with columns in edge order.
    """
    net, f = code.network, code.field
    x = f.array(x, ndim=2)
    if x.shape[1] != code.dimension:
        raise DimensionMismatch(f"input has length {x.shape[1]}, "
                                f"code dimension is {code.dimension}")
    y = f.zeros((x.shape[0], len(net.edges)))
    for v in net.coding_nodes:
        if v == net.source:
            incoming = x
        else:
            incoming = y[:, [net.edge_index[d] for d in net.in_edges(v)]]
        produced = f.matmul(incoming, code.kernels[v])
        for j, e in enumerate(net.out_edges(v)):
            y[:, net.edge_index[e]] = produced[:, j]
    return y


def transmit(code: LinearNetworkCode, x) -> dict[str, int]:
    """Symbol carried by each edge when the source inputs the row vector ``x``."""
    x = code.field.array(x, ndim=1)
    y = transmit_batch(code, x.reshape(1, -1))[0]
    return {e: int(y[i]) for i, e in enumerate(code.network.edge_ids)}


def is_decodable(code: LinearNetworkCode) -> bool:
    gk = global_kernels(code)
    return all(matrix_rank(sink_matrix(code, t, gk), code.field) == code.dimension
               for t in code.network.sinks)


def transform(q: np.ndarray, code: LinearNetworkCode) -> LinearNetworkCode:
    """The code ``q . C``: only the source kernel changes, to ``q @ K_s``.

    Every other kernel array is reused as is.
    """
    f = code.field
    q = f.array(q, ndim=2)
    if q.shape[1] != code.dimension or q.shape[0] > code.dimension:
        raise DimensionMismatch(f"cannot transform a {code.dimension}-dimensional code by a "
                                f"{q.shape[0]}x{q.shape[1]} matrix")
    kernels = dict(code.kernels)
    kernels[code.network.source] = _frozen(f.matmul(q, code.source_kernel))
    return LinearNetworkCode(code.network, f, q.shape[0], kernels)


def load_kernels(net: Network, n: int, table: Mapping[str, object], f: FieldSpec
                 ) -> LinearNetworkCode:
    """Wrap user-supplied kernels (nested lists or arrays) as a code."""
    kernels = {}
    for v, k in table.items():
        arr = np.array(k, dtype=object)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, len(net.out_edges(v)) if v in net._out else 0)
        try:
            kernels[v] = arr.astype(np.int64) if f.dtype is np.int64 else arr
        except (TypeError, ValueError):
            raise ShapeMismatch(v, "kernel entries must be integers") from None
    return LinearNetworkCode(net, f, n, kernels)


def _coefficient_slots(net: Network, n: int) -> list[tuple[str, tuple[int, int]]]:
    slots = []
    for v in net.coding_nodes:
        rows = n if v == net.source else len(net.in_edges(v))
        slots.append((v, (rows, len(net.out_edges(v)))))
    return slots


def _assemble(net: Network, f: FieldSpec, n: int, slots, flat) -> LinearNetworkCode:
    kernels, pos = {}, 0
    for v, (rows, cols) in slots:
        size = rows * cols
        kernels[v] = np.array(flat[pos:pos + size], dtype=f.dtype).reshape(rows, cols)
        pos += size
    return LinearNetworkCode(net, f, n, kernels)


def construct_decodable(net: Network, n: int, f: FieldSpec, seed: int = 0,
                        strategy: str = "auto") -> LinearNetworkCode:
    """A decodable ``n``-dimensional code.

    ``strategy="auto"`` draws seeded uniform kernels up to ``RETRY_BUDGET``
    times, then falls back to an exhaustive search in lexicographic order when
    the coefficient space is small. ``"exhaustive"`` skips the random phase.
    """
    if n > net.c_min:
        raise DimensionTooLarge(f"dimension {n} exceeds C_min = {net.c_min}")
    if strategy not in ("auto", "exhaustive"):
        raise ValueError(f"unknown strategy {strategy!r}")
    slots = _coefficient_slots(net, n)
    total = sum(r * c for _, (r, c) in slots)
    if strategy == "auto":
        rng = np.random.default_rng(seed)
        for _ in range(RETRY_BUDGET):
            code = _assemble(net, f, n, slots, rng.integers(0, f.p, size=total))
            if is_decodable(code):
                return code
    if f.p ** total <= EXHAUSTIVE_LIMIT:
        for flat in itertools.product(range(f.p), repeat=total):
            code = _assemble(net, f, n, slots, flat)
            if is_decodable(code):
                return code
        raise ConstructionFailed(f"no decodable {n}-dimensional code exists over F_{f.p}")
    raise ConstructionFailed(f"no decodable code found in {RETRY_BUDGET} random draws "
                             f"over F_{f.p}; try another seed or a larger field")
