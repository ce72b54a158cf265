"""Secure linear network codes and local-encoding-preserving rate reduction.

A secure code pairs an ``n``-dimensional linear network code ``C`` with an
invertible ``n x n`` pre-coding matrix ``Q``. The source feeds
``x' = (m, k) . Q^-1`` into ``C``, where ``m`` holds ``rate`` message symbols
and ``k`` holds ``security_level`` uniform key symbols. The first ``rate``
columns of ``Q`` therefore encode the message and the rest encode the key.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from snc.errors import (ConstructionFailed, DimensionMismatch, FieldTooSmall, InvalidChoice,
                        NotIndependent, RateExhausted, SecurityLevelTooHigh, Singular,
                        UnionCoversSpace)
from snc.gf import (FieldSpec, Subspace, column_matrix, matrix_inverse, matrix_rank,
                    solve_unique, vector_outside_union)
from snc.lnc import (LinearNetworkCode, construct_decodable, global_kernels, is_decodable,
                     kernel_matrix, transform)
from snc.network import EdgeSet, Network, WiretapCollection, primary_subsets


@dataclass(frozen=True, eq=False)
class SecureCode:
    code: LinearNetworkCode
    Q: np.ndarray
    rate: int
    security_level: int

    def __post_init__(self) -> None:
        n = self.code.dimension
        if self.rate < 0 or self.security_level < 0 or self.rate + self.security_level != n:
            raise DimensionMismatch(f"rate {self.rate} + security level {self.security_level} "
                                    f"!= dimension {n}")
        q = self.code.field.array(self.Q, ndim=2)
        if q.shape != (n, n):
            raise DimensionMismatch(f"Q has shape {q.shape}, expected {(n, n)}")
        if matrix_rank(q, self.code.field) != n:
            raise Singular("pre-coding matrix is not invertible")
        q.setflags(write=False)
        object.__setattr__(self, "Q", q)

    @property
    def dimension(self) -> int:
        return self.code.dimension

    @property
    def field(self) -> FieldSpec:
        return self.code.field

    @property
    def network(self) -> Network:
        return self.code.network

    @property
    def message_columns(self) -> np.ndarray:
        return self.Q[:, :self.rate]

    def effective_code(self) -> LinearNetworkCode:
        """The code ``Q^-1 . C`` actually run by the network."""
        return transform(matrix_inverse(self.Q, self.field), self.code)


@dataclass(frozen=True)
class ReductionContext:
    """Every choice made by one rate-reduction step, for audit and replay."""

    permutation: tuple[int, ...]
    kept: tuple[int, ...]
    partition_dependent: tuple[EdgeSet, ...]
    partition_independent: tuple[EdgeSet, ...]
    h: tuple[int, ...]
    theta_table: dict[EdgeSet, int]
    theta: int
    k: tuple[int, ...]
    removed_column: int


@dataclass(frozen=True)
class CodeFamily:
    security_level: int
    collection: WiretapCollection
    members: tuple[SecureCode, ...]
    contexts: tuple[ReductionContext, ...] = field(default=())

    def rates(self) -> list[int]:
        return [m.rate for m in self.members]

    def member(self, rate: int) -> SecureCode:
        for m in self.members:
            if m.rate == rate:
                return m
        raise KeyError(rate)

    def shares_kernels(self) -> bool:
        """True iff every member has the very same kernel at each non-source node."""
        base = self.members[0].code
        src = base.network.source
        return all(m.code.kernels[v] is base.kernels[v] or
                   np.array_equal(m.code.kernels[v], base.kernels[v])
                   for m in self.members for v in base.kernels if v != src)


def _subspace(vectors: Sequence[np.ndarray], dim: int, f: FieldSpec) -> Subspace:
    return Subspace.span(vectors, dim, f)


def check_security(code: LinearNetworkCode, Q: np.ndarray, rate: int, r: int,
                   collection: WiretapCollection) -> bool:
    """Whether the span of the message columns of ``Q`` meets no wiretapped span.

    Uses rank additivity: the intersection is trivial iff
    ``rank([b_1..b_rate | f_e, e in A]) == rate + rank([f_e, e in A])``.
    """
    return failing_set(code, Q, rate, r, collection) is None


def failing_set(code: LinearNetworkCode, Q: np.ndarray, rate: int, r: int,
                collection: WiretapCollection) -> EdgeSet | None:
    """First wiretap set violating the security condition, or ``None``."""
    f, n = code.field, code.dimension
    Q = f.array(Q, ndim=2)
    if Q.shape != (n, n):
        raise DimensionMismatch(f"Q has shape {Q.shape}, expected {(n, n)}")
    if not 0 <= rate <= n:
        raise DimensionMismatch(f"rate {rate} outside [0, {n}]")
    if collection.r != r:
        raise DimensionMismatch(f"collection built for r={collection.r}, not {r}")
    if rate == 0:
        return None
    b = Q[:, :rate]
    gk = global_kernels(code)
    for a in collection:
        fa = kernel_matrix(gk, a, n, f)
        if matrix_rank(np.hstack([b, fa]), f) != rate + matrix_rank(fa, f):
            return a
    return None


def construct_Q(code: LinearNetworkCode, rate: int, r: int,
                collection: WiretapCollection) -> np.ndarray:
    """Invertible pre-coding matrix making ``(code, Q)`` secure on ``collection``.

    Columns are chosen one at a time as the lexicographically smallest vector
    outside the forbidden union: message column ``i`` avoids ``B_{i-1} + L_A``
    for every ``A``, key columns only avoid ``B_{i-1}``.
    """
    f, n = code.field, code.dimension
    if rate + r != n:
        raise DimensionMismatch(f"rate {rate} + security level {r} != dimension {n}")
    if collection.r != r:
        raise DimensionMismatch(f"collection built for r={collection.r}, not {r}")
    gk = global_kernels(code)
    wiretapped = [_subspace([gk[e] for e in a], n, f) for a in collection]
    chosen: list[np.ndarray] = []
    for i in range(n):
        span = _subspace(chosen, n, f)
        if i < rate and wiretapped:
            forbidden = list(dict.fromkeys(span + la for la in wiretapped))
        else:
            forbidden = [span]
        try:
            chosen.append(vector_outside_union(n, forbidden, f))
        except UnionCoversSpace:
            raise FieldTooSmall(f"F_{f.p} too small to choose column {i + 1} of Q "
                                f"({len(forbidden)} forbidden subspaces)") from None
    return column_matrix(chosen, n, f)


def partition_wiretap_sets(kept_b: np.ndarray, truncated: dict[str, np.ndarray],
                           collection: WiretapCollection, f: FieldSpec
                           ) -> tuple[tuple[EdgeSet, ...], tuple[EdgeSet, ...]]:
    """Split ``collection`` by whether the truncated vectors span ``F^(n-1)``.

    ``kept_b`` holds the kept truncated message columns; ``truncated`` maps
    edges to their truncated global kernels. Returns (dependent, independent).
    """
    dim = kept_b.shape[0]
    dependent, independent = [], []
    for a in collection:
        m = np.hstack([kept_b, kernel_matrix(truncated, a, dim, f)])
        if m.shape[1] == dim and matrix_rank(m, f) == dim:
            independent.append(a)
        else:
            dependent.append(a)
    return tuple(dependent), tuple(independent)


def kappa_set(a: EdgeSet, kept_b: np.ndarray, b_last: Sequence[int],
              truncated: dict[str, np.ndarray], f_last: dict[str, int],
              f: FieldSpec) -> set[tuple[int, ...]]:
    """All combinations of the basis whose last-row weights sum to -1.

    Materializes ``p^(n-2)`` vectors; meant for verification at small sizes.
    """
    dim = kept_b.shape[0]
    basis = np.hstack([kept_b, kernel_matrix(truncated, a, dim, f)])
    if basis.shape[1] != dim or matrix_rank(basis, f) != dim:
        raise NotIndependent(f"{a} does not complete the kept columns to a basis")
    weights = [int(x) % f.p for x in b_last] + [int(f_last[e]) % f.p for e in a]
    target = f.p - 1
    out = set()
    for coeffs in itertools.product(range(f.p), repeat=dim):
        if sum(c * w for c, w in zip(coeffs, weights)) % f.p == target:
            v = f.matmul(basis, np.array(coeffs, dtype=f.dtype).reshape(-1, 1)).ravel()
            out.add(tuple(int(x) for x in v))
    return out


def select_independent(columns: np.ndarray, count: int, f: FieldSpec) -> list[int]:
    """Indices of the first ``count`` columns that are independent, greedily by index."""
    kept: list[int] = []
    for j in range(columns.shape[1]):
        if len(kept) == count:
            break
        if matrix_rank(columns[:, kept + [j]], f) == len(kept) + 1:
            kept.append(j)
    if len(kept) < count:
        raise NotIndependent(f"only {len(kept)} independent columns, need {count}")
    return kept


def reduce_rate(sc: SecureCode, collection: WiretapCollection, *,
                h: Sequence[int] | None = None, theta: int | None = None
                ) -> tuple[SecureCode, ReductionContext]:
    """Secure code of rate ``rate - 1`` sharing every non-source kernel with ``sc``.

    ``h`` and ``theta`` pin the two free choices; each is checked against its
    legal set before use. By default the lexicographically smallest ``h`` and
    the smallest admissible ``theta`` are taken.
    """
    f, n, w, r = sc.field, sc.dimension, sc.rate, sc.security_level
    if w == 0:
        raise RateExhausted("rate is already 0")
    if collection.r != r:
        raise DimensionMismatch(f"collection built for r={collection.r}, not {r}")
    d = n - 1

    # pick w-1 message columns whose truncations stay independent; they lead
    kept = select_independent(sc.Q[:d, :w], w - 1, f)
    dropped = [j for j in range(w) if j not in kept]
    perm = tuple(kept + dropped + list(range(w, n)))
    q = sc.Q[:, list(perm)]
    kept_b = q[:d, :w - 1]
    b_last = q[d, :w - 1]

    gk = global_kernels(sc.code)
    truncated = {e: v[:d] for e, v in gk.items()}
    f_last = {e: int(v[d]) for e, v in gk.items()}
    dependent, independent = partition_wiretap_sets(kept_b, truncated, collection, f)

    kept_span = _subspace(list(kept_b.T), d, f)
    forbidden = list(dict.fromkeys(
        kept_span + _subspace([truncated[e] for e in a], d, f) for a in dependent))
    if h is None:
        try:
            hv = vector_outside_union(d, forbidden, f)
        except UnionCoversSpace:
            raise FieldTooSmall(f"F_{f.p} too small to choose h") from None
    else:
        hv = f.array(h, ndim=1)
        if hv.shape != (d,):
            raise InvalidChoice(f"h must have length {d}")
        if any(s.contains(hv) for s in forbidden):
            raise InvalidChoice(f"h = {hv.tolist()} lies in a forbidden subspace")

    theta_table: dict[EdgeSet, int] = {}
    for a in independent:
        basis = np.hstack([kept_b, kernel_matrix(truncated, a, d, f)])
        coords = solve_unique(basis, hv, f)
        weights = np.array(list(b_last) + [f_last[e] for e in a], dtype=f.dtype)
        theta_table[a] = int((coords * weights).sum() % f.p)

    minus_one = f.p - 1
    banned = {t for t in range(1, f.p)
              if any(t * ta % f.p == minus_one for ta in theta_table.values())}
    if theta is None:
        allowed = [t for t in range(1, f.p) if t not in banned]
        if not allowed:
            raise FieldTooSmall(f"F_{f.p} too small to choose theta")
        th = allowed[0]
    else:
        th = int(theta) % f.p
        if th == 0 or th in banned:
            raise InvalidChoice(f"theta = {theta} is zero or hits theta_A = -1/theta")

    k = (th * hv) % f.p
    lift = np.hstack([f.eye(d), k.reshape(-1, 1)])
    new_code = transform(lift, sc.code)
    qk = f.matmul(lift, q)

    # drop one of the last r+1 columns; try the rightmost first
    removed = None
    for j in reversed(range(w - 1, n)):
        cand = np.delete(qk, j, axis=1)
        if matrix_rank(cand, f) == d:
            removed = j
            break
    if removed is None:  # pragma: no cover - rank(qk) = n-1 guarantees a choice
        raise Singular("no removable column leaves an invertible matrix")
    new_q = np.delete(qk, removed, axis=1)

    out = SecureCode(new_code, new_q, w - 1, r)
    ctx = ReductionContext(
        permutation=perm, kept=tuple(kept),
        partition_dependent=dependent, partition_independent=independent,
        h=tuple(int(x) for x in hv), theta_table=theta_table, theta=th,
        k=tuple(int(x) for x in k), removed_column=removed)
    return out, ctx


def field_size_bound(net: Network, collection: WiretapCollection) -> int:
    """``max(|T|, |A_r|)``; any prime above it suffices for a whole family."""
    return max(len(net.sinks), len(collection))


def build_family(net: Network, r: int, f: FieldSpec, seed: int = 0, *,
                 base_code: LinearNetworkCode | None = None, best_effort: bool = False,
                 collection: WiretapCollection | None = None) -> CodeFamily:
    """Secure codes of security level ``r`` at every rate from ``C_min - r`` down to 0.

    Unless ``best_effort`` is set the field order must exceed
    :func:`field_size_bound`; otherwise construction is attempted anyway and
    fails only if some choice set turns out empty.
    """
    c_min = net.c_min
    if r > c_min:
        raise SecurityLevelTooHigh(f"security level {r} exceeds C_min = {c_min}")
    collection = primary_subsets(net, r) if collection is None else collection
    bound = field_size_bound(net, collection)
    if f.p <= bound and not best_effort:
        raise FieldTooSmall(f"q = {f.p} does not exceed max(|T|, |A_r|) = "
                            f"max({len(net.sinks)}, {len(collection)}) = {bound}")
    if base_code is None:
        base_code = construct_decodable(net, c_min, f, seed)
    elif base_code.dimension != c_min:
        raise DimensionMismatch(f"base code has dimension {base_code.dimension}, "
                                f"C_min is {c_min}")
    elif not is_decodable(base_code):
        raise DimensionMismatch("base code is not decodable")
    q = construct_Q(base_code, c_min - r, r, collection)
    members = [SecureCode(base_code, q, c_min - r, r)]
    contexts = []
    while members[-1].rate > 0:
        nxt, ctx = reduce_rate(members[-1], collection)
        members.append(nxt)
        contexts.append(ctx)
    for m in members:
        if not check_security(m.code, m.Q, m.rate, r, collection) or not is_decodable(m.code):
            raise ConstructionFailed(f"rate-{m.rate} member failed verification")
    return CodeFamily(r, collection, tuple(members), tuple(contexts))
