"""Exact linear algebra over a prime field F_p.

Matrices are plain ``numpy`` integer arrays whose entries are kept reduced
into ``[0, p-1]``. Vectors are 1-D arrays and are treated as columns when
stacked into a basis. Nothing here mutates its inputs.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from snc.errors import NonUnique, NotInSpan, Singular, UnionCoversSpace, ZeroInverse

# int64 matmul stays exact while inner-dimension * (p-1)^2 < 2^63
_INT64_SAFE_P = 1 << 24
_SCAN_CHUNK = 4096


# deterministic Miller-Rabin bases, exact below 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for b in _MR_BASES:
        if p % b == 0:
            return p == b
    d, s = p - 1, 0
    while d % 2 == 0:
        d, s = d // 2, s + 1
    for b in _MR_BASES:
        x = pow(b, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field of order ``p``."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise ValueError(f"field order must be prime, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))

    @property
    def order(self) -> int:
        return self.p

    @property
    def dtype(self) -> type:
        return np.int64 if self.p < _INT64_SAFE_P else object

    def array(self, data, *, ndim: int | None = None) -> np.ndarray:
        """Coerce ``data`` to a reduced array over this field."""
        arr = np.array(data, dtype=self.dtype)
        if ndim == 2 and arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if ndim is not None and arr.ndim != ndim:
            raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
        return arr % self.p

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=self.dtype)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (np.asarray(a, dtype=self.dtype) @ np.asarray(b, dtype=self.dtype)) % self.p

    def neg(self, a: int) -> int:
        return (-int(a)) % self.p


def field_inverse(a: int, f: FieldSpec) -> int:
    a = int(a) % f.p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse in F_{f.p}")
    return pow(a, f.p - 2, f.p)


def row_reduce(m: np.ndarray, f: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``m`` and its pivot columns."""
    a = f.array(m, ndim=2).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * field_inverse(a[r, c], f)) % f.p
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % f.p
        pivots.append(c)
        r += 1
    return a, pivots


def matrix_rank(m: np.ndarray, f: FieldSpec) -> int:
    m = f.array(m)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.size == 0:
        return 0
    return len(row_reduce(m, f)[1])


def column_matrix(vectors: Iterable[Sequence[int]], dim: int, f: FieldSpec) -> np.ndarray:
    """Stack vectors of length ``dim`` as the columns of a ``dim x k`` matrix."""
    cols = [f.array(v, ndim=1) for v in vectors]
    if not cols:
        return f.zeros((dim, 0))
    return np.stack(cols, axis=1)


def solve_unique(basis: np.ndarray, target: Sequence[int], f: FieldSpec) -> np.ndarray:
    """Coordinates ``c`` with ``basis @ c == target``.

    Raises NonUnique when the basis columns are dependent and NotInSpan when
    ``target`` is outside their span.
    """
    b = f.array(basis, ndim=2)
    t = f.array(target, ndim=1)
    d, k = b.shape
    if t.shape != (d,):
        raise ValueError(f"target has length {t.shape[0]}, basis has {d} rows")
    if matrix_rank(b, f) < k:
        raise NonUnique("basis columns are linearly dependent")
    red, pivots = row_reduce(np.hstack([b, t.reshape(-1, 1)]), f)
    if k in pivots:
        raise NotInSpan("target is not in the span of the basis")
    coords = f.zeros(k)
    for row, c in enumerate(pivots):
        coords[c] = red[row, k]
    return coords


def matrix_inverse(m: np.ndarray, f: FieldSpec) -> np.ndarray:
    a = f.array(m, ndim=2)
    n, n2 = a.shape
    if n != n2:
        raise ValueError(f"matrix is not square: {a.shape}")
    red, pivots = row_reduce(np.hstack([a, f.eye(n)]), f)
    if pivots[:n] != list(range(n)):
        raise Singular(f"matrix has rank {sum(c < n for c in pivots)} < {n}")
    return red[:, n:].copy()


def null_space(m: np.ndarray, f: FieldSpec) -> np.ndarray:
    """Columns spanning ``{x : m @ x == 0}``."""
    a = f.array(m, ndim=2)
    cols = a.shape[1]
    red, pivots = row_reduce(a, f) if a.size else (a, [])
    free = [c for c in range(cols) if c not in pivots]
    out = f.zeros((cols, len(free)))
    for j, c in enumerate(free):
        out[c, j] = 1
        for row, pc in enumerate(pivots):
            out[pc, j] = (-red[row, c]) % f.p
    return out


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^ambient_dim held by a canonical basis.

    ``rows`` is the reduced row echelon form of the spanning set with zero
    rows dropped, so equal spans compare (and hash) equal.
    """

    ambient_dim: int
    rows: tuple[tuple[int, ...], ...]
    field: FieldSpec

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], ambient_dim: int, f: FieldSpec) -> Subspace:
        vecs = [f.array(v, ndim=1) for v in vectors]
        for v in vecs:
            if v.shape != (ambient_dim,):
                raise ValueError(f"vector of length {v.shape[0]} in F^{ambient_dim}")
        if not vecs or ambient_dim == 0:
            return cls(ambient_dim, (), f)
        red, pivots = row_reduce(np.stack(vecs), f)
        rows = tuple(tuple(int(x) for x in red[i]) for i in range(len(pivots)))
        return cls(ambient_dim, rows, f)

    @classmethod
    def from_columns(cls, m: np.ndarray, f: FieldSpec) -> Subspace:
        m = f.array(m, ndim=2)
        return cls.span(m.T, m.shape[0], f)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> np.ndarray:
        """Basis vectors as columns, in reduced column echelon form."""
        if not self.rows:
            return self.field.zeros((self.ambient_dim, 0))
        return self.field.array(self.rows, ndim=2).T.copy()

    def contains(self, v: Sequence[int]) -> bool:
        b = self.basis
        aug = np.hstack([b, self.field.array(v, ndim=1).reshape(-1, 1)])
        return matrix_rank(aug, self.field) == self.dim

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __add__(self, other: Subspace) -> Subspace:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return Subspace.span(self.rows + other.rows, self.ambient_dim, self.field)

    def annihilator(self) -> np.ndarray:
        """Matrix ``H`` whose null space is exactly this subspace."""
        if self.dim == 0:
            return self.field.eye(self.ambient_dim)
        return null_space(self.field.array(self.rows, ndim=2), self.field).T.copy()

    def elements(self) -> set[tuple[int, ...]]:
        """Every vector of the subspace; exponential, for small checks only."""
        b = self.basis
        out = set()
        for coeffs in itertools.product(range(self.field.p), repeat=self.dim):
            v = self.field.matmul(b, np.array(coeffs, dtype=self.field.dtype).reshape(-1, 1))
            out.add(tuple(int(x) for x in v.ravel()))
        return out or {(0,) * self.ambient_dim}


def _lex_block(start: int, stop: int, dim: int, f: FieldSpec) -> np.ndarray:
    idx = np.arange(start, stop, dtype=object if f.dtype is object else np.int64)
    powers = [f.p ** (dim - 1 - j) for j in range(dim)]
    return np.stack([(idx // w) % f.p for w in powers], axis=1).astype(f.dtype)


def vector_outside_union(dim: int, subspaces: Sequence[Subspace], f: FieldSpec) -> np.ndarray:
    """Lexicographically smallest vector of F_p^dim lying in none of ``subspaces``.

    Coordinates are compared most significant first, so the scan order is
    0...00, 0...01, ..., (p-1)...(p-1).
    """
    checks = []
    for s in subspaces:
        if s.ambient_dim != dim:
            raise ValueError(f"subspace lives in F^{s.ambient_dim}, expected F^{dim}")
        checks.append(s.annihilator().T.copy())
    if dim == 0:
        if checks:
            raise UnionCoversSpace("every subspace of F^0 is the whole space")
        return f.zeros(0)
    total = f.p ** dim
    for start in range(0, total, _SCAN_CHUNK):
        stop = min(total, start + _SCAN_CHUNK)
        block = _lex_block(start, stop, dim, f)
        covered = np.zeros(stop - start, dtype=bool)
        for h in checks:
            covered |= ~((block @ h) % f.p).any(axis=1)
        free = np.nonzero(~covered)[0]
        if free.size:
            return block[int(free[0])].copy()
    raise UnionCoversSpace(f"{len(checks)} subspaces cover F_{f.p}^{dim}")
