"""Brute-force verifiers.

These enumerate every source input (or every candidate vector) instead of
relying on the rank criteria used by :mod:`snc.slnc`, so they can serve as
ground truth for it. Secrecy is judged by comparing the exact distribution of
the wiretapped symbols under each message; with a uniform message this is
the same as zero mutual information.
"""

from __future__ import annotations

import itertools
import math
import os
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from snc.errors import BudgetExceeded
from snc.gf import FieldSpec, matrix_rank
from snc.lnc import global_kernels, transmit_batch
from snc.network import EdgeSet, Network, WiretapCollection
from snc.slnc import SecureCode

DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    """Evaluation budget, overridable through the ``SNC_BUDGET`` environment variable."""
    raw = os.environ.get("SNC_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class AllWiretapSets:
    """Every edge subset of size at most ``r``, smallest first."""

    r: int
    sets: tuple[EdgeSet, ...]

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)


def all_wiretap_sets(net: Network, r: int) -> AllWiretapSets:
    sets = [c for size in range(r + 1) for c in itertools.combinations(net.edge_ids, size)]
    return AllWiretapSets(r, tuple(sets))


@dataclass(frozen=True)
class SecrecyReport:
    passed: bool
    failing_set: EdgeSet | None
    message_count: int
    key_count: int

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class DecodabilityReport:
    passed: bool
    failing_sink: str | None = None
    # two inputs (message, key) that a sink cannot tell apart
    witness: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] | None = None

    def __bool__(self) -> bool:
        return self.passed


def _all_vectors(dim: int, f: FieldSpec) -> np.ndarray:
    if dim == 0:
        return f.zeros((1, 0))
    return np.array(list(itertools.product(range(f.p), repeat=dim)), dtype=f.dtype)


def _digits_to_index(rows: np.ndarray, p: int) -> np.ndarray:
    idx = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        idx = idx * p + rows[:, j].astype(np.int64)
    return idx


def _enumerate(sc: SecureCode, budget: int, sets: int) -> tuple[np.ndarray, np.ndarray]:
    """All pairs of (message||key, edge symbols).

    Instead of inverting Q, walk every network input x' and recover the
    source input it corresponds to as x = x' Q.
    """
    f = sc.field
    required = f.p ** sc.dimension * max(1, sets)
    if required > budget:
        raise BudgetExceeded(required, budget)
    x_net = _all_vectors(sc.dimension, f)
    x_src = f.matmul(x_net, sc.Q)
    return x_src, transmit_batch(sc.code, x_net)


def exhaustive_secrecy(sc: SecureCode, scope: AllWiretapSets | Sequence[EdgeSet],
                       budget: int | None = None) -> SecrecyReport:
    f, w = sc.field, sc.rate
    sets = tuple(scope)
    budget = default_budget() if budget is None else budget
    x_src, y = _enumerate(sc, budget, len(sets))
    messages, keys = f.p ** w, f.p ** sc.security_level
    m_idx = _digits_to_index(x_src[:, :w], f.p)
    net = sc.network
    for a in sets:
        cols = [net.edge_index[e] for e in a]
        y_idx = _digits_to_index(y[:, cols], f.p)
        width = f.p ** len(a)
        counts = np.bincount(m_idx * width + y_idx, minlength=messages * width)
        counts = counts.reshape(messages, width)
        if not (counts == counts[0]).all():
            return SecrecyReport(False, a, messages, keys)
    return SecrecyReport(True, None, messages, keys)


def exhaustive_decodability(sc: SecureCode, budget: int | None = None) -> DecodabilityReport:
    """Whether every sink recovers the message from its incoming symbols, for every input."""
    f, w = sc.field, sc.rate
    budget = default_budget() if budget is None else budget
    net = sc.network
    x_src, y = _enumerate(sc, budget, len(net.sinks))
    m_idx = _digits_to_index(x_src[:, :w], f.p)
    for t in net.sinks:
        cols = [net.edge_index[e] for e in net.in_edges(t)]
        y_idx = _digits_to_index(y[:, cols], f.p)
        seen: dict[int, int] = {}
        for row, (yi, mi) in enumerate(zip(y_idx.tolist(), m_idx.tolist())):
            first = seen.setdefault(yi, row)
            if m_idx[first] != mi:
                def split(r: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
                    v = tuple(int(x) for x in x_src[r])
                    return v[:w], v[w:]
                return DecodabilityReport(False, t, (split(first), split(row)))
    return DecodabilityReport(True)


def _greedy_independent(columns: np.ndarray, count: int, f: FieldSpec) -> list[int]:
    kept: list[int] = []
    rank = 0
    for j in range(columns.shape[1]):
        if len(kept) == count:
            break
        new_rank = matrix_rank(columns[:, kept + [j]], f)
        if new_rank > rank:
            kept.append(j)
            rank = new_rank
    return kept


def valid_k_oracle(sc: SecureCode, collection: WiretapCollection, *,
                   kept: Sequence[int] | None = None, mode: str = "strict",
                   budget: int | None = None) -> list[tuple[int, ...]]:
    """Every lifting vector ``k`` in ``F^(n-1)`` that is acceptable, sorted.

    ``kept`` lists the message columns of ``Q`` that survive the reduction
    (default: the first ``rate - 1`` whose truncations are independent).

    ``mode="strict"`` keeps ``k`` iff, for wiretap sets whose truncated
    vectors are dependent, ``k`` avoids the span of the truncated vectors, and
    for the others the lifted vectors stay independent. ``mode="conditions"``
    keeps ``k`` iff the lifted message columns are independent and their span
    meets every lifted wiretap span trivially; this set can be larger.
    """
    if mode not in ("strict", "conditions"):
        raise ValueError(f"unknown mode {mode!r}")
    f, n, w = sc.field, sc.dimension, sc.rate
    d = n - 1
    budget = default_budget() if budget is None else budget
    required = f.p ** d * max(1, len(collection))
    if required > budget:
        raise BudgetExceeded(required, budget)
    if kept is None:
        kept = _greedy_independent(sc.Q[:d, :w], w - 1, f)
    b = sc.Q[:, list(kept)]
    gk = global_kernels(sc.code)
    fa = {a: np.stack([gk[e] for e in a], axis=1) if a else f.zeros((n, 0)) for a in collection}

    if mode == "strict":
        base_rank = {a: matrix_rank(np.hstack([b[:d], fa[a][:d]]), f) for a in collection}
        dependent = {a: base_rank[a] < d or b.shape[1] + fa[a].shape[1] != d
                     for a in collection}

    out = []
    for k in itertools.product(range(f.p), repeat=d):
        lift = np.hstack([f.eye(d), np.array(k, dtype=f.dtype).reshape(-1, 1)])
        bk = f.matmul(lift, b)
        ok = True
        if mode == "conditions":
            rb = matrix_rank(bk, f)
            ok = rb == len(kept)
            for a in collection:
                if not ok:
                    break
                fk = f.matmul(lift, fa[a])
                ok = matrix_rank(np.hstack([bk, fk]), f) == rb + matrix_rank(fk, f)
        else:
            kv = np.array(k, dtype=f.dtype).reshape(-1, 1)
            for a in collection:
                if dependent[a]:
                    aug = np.hstack([b[:d], fa[a][:d], kv])
                    ok = matrix_rank(aug, f) > base_rank[a]
                else:
                    ok = matrix_rank(np.hstack([bk, f.matmul(lift, fa[a])]), f) == d
                if not ok:
                    break
        if ok:
            out.append(tuple(int(x) for x in k))
    return out


def admissible_lower_bound(q: int, n: int, collection_size: int) -> int:
    """``q^(n-2) (q - |A_r|)``: guaranteed size of the admissible set of ``k``."""
    if n < 2:
        return 0
    return q ** (n - 2) * (q - collection_size)


def wiretap_count(num_edges: int, r: int) -> int:
    return sum(math.comb(num_edges, i) for i in range(r + 1))
