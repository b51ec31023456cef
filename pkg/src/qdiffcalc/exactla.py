"""Sparse exact linear algebra over :class:`~qdiffcalc.scalars.Scalar`.

Vectors are plain ``dict[int, Scalar]`` maps with no zero values.  Matrices
(:class:`SparseMat`) are row-major dicts of such maps.  Subspaces are kept in
reduced row-echelon form so that equality is a term-by-term comparison.

Two rank paths are provided: exact Gauss-Jordan elimination over the
rational-function field, and a modular path that specializes the
indeterminates at random points modulo random primes above 2**31.  The
modular path only ever yields lower bounds for the generic rank.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import os
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .scalars import Scalar, ScalarRing, SpecializationError

__all__ = [
    "ResourceLimitError",
    "SparseMat",
    "Subspace",
    "EchelonBuilder",
    "RankResult",
    "Modular",
    "rank_kernel",
    "subspace_ops",
    "rank_mod_p",
    "nullspace_mod_p",
    "random_prime",
    "RankCache",
    "LIMITS",
    "vec_add",
    "vec_scale",
    "vec_axpy",
    "THREADS_ENV",
    "thread_count",
    "set_threads",
    "parallel_map",
]

THREADS_ENV = "QDIFFCALC_THREADS"
_threads: int | None = None


def set_threads(n: int | None) -> None:
    """Worker count for modular sampling; None restores the default."""
    global _threads
    if n is not None and n < 1:
        raise ValueError("thread count must be positive")
    _threads = n


def thread_count() -> int:
    """Explicit setting, else the environment override, else available cores."""
    if _threads is not None:
        return _threads
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def parallel_map(fn, items: list) -> list:
    """Order-preserving map; numpy releases the GIL in the modular kernels."""
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


LIMITS = {"exact": 4096 * 4096, "modular": 6561 * 6561 * 4}


class ResourceLimitError(RuntimeError):
    def __init__(self, msg: str = "resource limit"):
        super().__init__(msg)


# -- sparse vectors ----------------------------------------------------------

Vec = dict


def vec_add(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = v
        else:
            w = w + v
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def vec_axpy(out: dict, c: Scalar, b: Mapping) -> None:
    """``out += c * b`` in place."""
    if not c:
        return
    for k, v in b.items():
        w = out.get(k)
        p = c * v
        if w is None:
            out[k] = p
        else:
            w = w + p
            if w:
                out[k] = w
            else:
                del out[k]


def vec_scale(c: Scalar, a: Mapping) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


# -- matrices ----------------------------------------------------------------


class SparseMat:
    """Immutable sparse matrix with Scalar entries."""

    __slots__ = ("rows", "cols", "ring", "_data")

    def __init__(self, rows: int, cols: int, ring: ScalarRing, data: Mapping | None = None):
        self.rows = rows
        self.cols = cols
        self.ring = ring
        clean: dict[int, dict[int, Scalar]] = {}
        if data:
            for r, row in data.items():
                if not 0 <= r < rows:
                    raise IndexError(f"row {r} out of range")
                kept = {}
                for c, v in row.items():
                    if not 0 <= c < cols:
                        raise IndexError(f"column {c} out of range")
                    if v:
                        kept[c] = ring(v) if not isinstance(v, Scalar) else v
                if kept:
                    clean[r] = kept
        self._data = clean

    # construction
    @classmethod
    def from_entries(cls, rows: int, cols: int, ring: ScalarRing, entries: Mapping[tuple[int, int], object]):
        data: dict[int, dict[int, object]] = {}
        for (r, c), v in entries.items():
            data.setdefault(r, {})[c] = v
        return cls(rows, cols, ring, data)

    @classmethod
    def identity(cls, n: int, ring: ScalarRing, scale=None):
        one = ring.one if scale is None else ring(scale)
        return cls(n, n, ring, {i: {i: one} for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: ScalarRing):
        return cls(rows, cols, ring)

    @classmethod
    def from_dense(cls, rows: list[list], ring: ScalarRing):
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls(nr, nc, ring, {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(rows)})

    @classmethod
    def from_columns(cls, rows: int, columns: list[Mapping], ring: ScalarRing):
        data: dict[int, dict[int, Scalar]] = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                data.setdefault(i, {})[j] = v
        return cls(rows, len(columns), ring, data)

    # access
    @property
    def entries(self) -> dict[tuple[int, int], Scalar]:
        return {(r, c): v for r, row in self._data.items() for c, v in row.items()}

    def row(self, r: int) -> dict[int, Scalar]:
        return self._data.get(r, {})

    def row_items(self):
        return self._data.items()

    def __getitem__(self, rc: tuple[int, int]) -> Scalar:
        r, c = rc
        return self._data.get(r, {}).get(c, self.ring.zero)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not self._data

    def to_dense(self) -> list[list[Scalar]]:
        z = self.ring.zero
        return [[self._data.get(r, {}).get(c, z) for c in range(self.cols)] for r in range(self.rows)]

    def columns(self) -> list[dict[int, Scalar]]:
        cols: list[dict[int, Scalar]] = [{} for _ in range(self.cols)]
        for r, row in self._data.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    # algebra
    def __eq__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash(self.fingerprint())

    def __add__(self, other: "SparseMat") -> "SparseMat":
        self._check_same(other)
        data = {r: dict(row) for r, row in self._data.items()}
        for r, row in other._data.items():
            data[r] = vec_add(data.get(r, {}), row)
        return SparseMat(self.rows, self.cols, self.ring, data)

    def __neg__(self):
        return SparseMat(self.rows, self.cols, self.ring, {r: {c: -v for c, v in row.items()} for r, row in self._data.items()})

    def __sub__(self, other: "SparseMat") -> "SparseMat":
        return self + (-other)

    def scale(self, c) -> "SparseMat":
        c = self.ring(c)
        return SparseMat(self.rows, self.cols, self.ring, {r: vec_scale(c, row) for r, row in self._data.items()})

    def __mul__(self, c):
        if isinstance(c, SparseMat):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        data = {}
        for r, row in self._data.items():
            acc: dict = {}
            for k, v in row.items():
                orow = other._data.get(k)
                if orow:
                    vec_axpy(acc, v, orow)
            if acc:
                data[r] = acc
        return SparseMat(self.rows, other.cols, self.ring, data)

    def apply(self, vec: Mapping[int, Scalar]) -> dict[int, Scalar]:
        """Matrix-vector product ``M v`` on sparse vectors."""
        out = {}
        for r, row in self._data.items():
            acc = self.ring.zero
            for c, v in row.items():
                w = vec.get(c)
                if w is not None:
                    acc = acc + v * w
            if acc:
                out[r] = acc
        return out

    def transpose(self) -> "SparseMat":
        data: dict[int, dict[int, Scalar]] = {}
        for r, row in self._data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return SparseMat(self.cols, self.rows, self.ring, data)

    T = property(transpose)

    def kron(self, other: "SparseMat") -> "SparseMat":
        data: dict[int, dict[int, Scalar]] = {}
        for r1, row1 in self._data.items():
            for r2, row2 in other._data.items():
                out = {}
                for c1, v1 in row1.items():
                    for c2, v2 in row2.items():
                        out[c1 * other.cols + c2] = v1 * v2
                data[r1 * other.rows + r2] = out
        return SparseMat(self.rows * other.rows, self.cols * other.cols, self.ring, data)

    def inverse(self) -> "SparseMat":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        rows = [dict(self._data.get(r, {})) for r in range(n)]
        aug = [{n + r: self.ring.one} for r in range(n)]
        for r in range(n):
            rows[r].update(aug[r])
        red = _gauss_jordan(rows, n + n, pivot_limit=n)
        if len(red.pivots) < n or any(p >= n for p in red.pivots):
            raise ValueError("matrix is singular")
        data = {}
        for row, p in zip(red.rows, red.pivots):
            data[p] = {c - n: v for c, v in row.items() if c >= n}
        return SparseMat(n, n, self.ring, data)

    def specialize(self, assignment, modulus: int) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        for r, row in self._data.items():
            for c, v in row.items():
                out[r, c] = v.specialize(assignment, modulus)
        return out

    def fingerprint(self) -> str:
        h = hashlib.sha256(f"{self.rows}x{self.cols}|{self.ring.names}".encode())
        for r in sorted(self._data):
            row = self._data[r]
            for c in sorted(row):
                h.update(f"{r},{c}:{row[c]};".encode())
        return h.hexdigest()

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")

    def __repr__(self):
        return f"SparseMat({self.rows}x{self.cols}, nnz={self.nnz})"


# -- elimination -------------------------------------------------------------


@dataclass
class _Reduced:
    rows: list[dict[int, Scalar]]
    pivots: list[int]


def _gauss_jordan(rows: list[dict[int, Scalar]], ncols: int, pivot_limit: int | None = None) -> _Reduced:
    """Reduced row echelon form by Gauss-Jordan with Markowitz-style pivoting.

    Among the remaining rows, the structurally shortest are preferred; within
    those the pivot column with the fewest remaining nonzeros is chosen.  Only
    columns below ``pivot_limit`` may become pivots.  The result is sorted by
    pivot column and fully reduced.
    """
    limit = ncols if pivot_limit is None else pivot_limit
    active = [r for r in rows if r]
    colcount: dict[int, int] = {}
    for r in active:
        for c in r:
            if c < limit:
                colcount[c] = colcount.get(c, 0) + 1
    done: list[tuple[int, dict[int, Scalar]]] = []
    while active:
        best = None
        best_key = None
        for idx, r in enumerate(active):
            cand = [c for c in r if c < limit]
            if not cand:
                continue
            c = min(cand, key=lambda cc: (colcount.get(cc, 0), cc))
            key = (len(r), colcount.get(c, 0), c)
            if best_key is None or key < best_key:
                best_key, best = key, (idx, c)
                if key[0] == 1:
                    break
        if best is None:
            break
        idx, pc = best
        prow = active.pop(idx)
        for c in prow:
            if c < limit:
                colcount[c] -= 1
        inv = prow[pc].inverse()
        prow = {c: v * inv for c, v in prow.items()}
        prow[pc] = prow[pc].ring.one
        nxt = []
        for r in active:
            f = r.get(pc)
            if f is None:
                nxt.append(r)
                continue
            for c in r:
                if c < limit:
                    colcount[c] -= 1
            vec_axpy(r, -f, prow)
            if r:
                for c in r:
                    if c < limit:
                        colcount[c] = colcount.get(c, 0) + 1
                nxt.append(r)
        active = nxt
        # back-eliminate the pivot from finished rows
        for _, drow in done:
            f = drow.get(pc)
            if f is not None:
                vec_axpy(drow, -f, prow)
        done.append((pc, prow))
    done.sort(key=lambda x: x[0])
    return _Reduced([r for _, r in done], [p for p, _ in done])


class EchelonBuilder:
    """Incremental semi-echelon basis (unique leading column per row)."""

    def __init__(self, ambient_dim: int, ring: ScalarRing):
        self.ambient_dim = ambient_dim
        self.ring = ring
        self.rows: dict[int, dict[int, Scalar]] = {}

    def reduce(self, vec: Mapping[int, Scalar], track: dict | None = None) -> dict[int, Scalar]:
        """Residue of ``vec`` modulo the current rows.

        When ``track`` is a dict it receives pivot -> coefficient such that
        ``vec = residue + sum(coef * row[pivot])``.
        """
        v = dict(vec)
        if not self.rows:
            return v
        heap = list(v)
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            c = heapq.heappop(heap)
            f = v.get(c)
            if f is None:
                continue
            row = self.rows.get(c)
            if row is None:
                continue
            if track is not None:
                track[c] = track.get(c, self.ring.zero) + f
            for k, w in row.items():
                old = v.get(k)
                new = -f * w if old is None else old - f * w
                if new:
                    v[k] = new
                    if k not in seen:
                        seen.add(k)
                        heapq.heappush(heap, k)
                elif old is not None:
                    del v[k]
        return v

    def add(self, vec: Mapping[int, Scalar]) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        inv = r[p].inverse()
        r = {c: w * inv for c, w in r.items()}
        self.rows[p] = r
        return True

    def __len__(self):
        return len(self.rows)

    def contains(self, vec: Mapping[int, Scalar]) -> bool:
        return not self.reduce(vec)

    def freeze(self) -> "Subspace":
        piv = sorted(self.rows)
        reduced: dict[int, dict[int, Scalar]] = {}
        # back-substitute from the last pivot upward
        for p in reversed(piv):
            row = dict(self.rows[p])
            for c in sorted(k for k in row if k != p):
                f = row.get(c)
                if f is None or c not in reduced:
                    continue
                vec_axpy(row, -f, reduced[c])
            reduced[p] = row
        return Subspace(self.ambient_dim, self.ring, [reduced[p] for p in piv], _trusted=True)


class Subspace:
    """Subspace of ``ring^ambient_dim`` stored as an RREF basis."""

    __slots__ = ("ambient_dim", "ring", "basis", "pivots", "_index")

    def __init__(self, ambient_dim: int, ring: ScalarRing, basis: Iterable[Mapping[int, Scalar]] = (), _trusted: bool = False):
        self.ambient_dim = ambient_dim
        self.ring = ring
        if _trusted:
            rows = list(basis)
        else:
            b = EchelonBuilder(ambient_dim, ring)
            for v in basis:
                if any(not 0 <= k < ambient_dim for k in v):
                    raise IndexError("vector index out of range")
                b.add({k: ring(w) for k, w in v.items() if w})
            rows = b.freeze().basis
        self.basis = rows
        self.pivots = [min(r) for r in rows]
        self._index = dict(zip(self.pivots, rows))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def reduce(self, vec: Mapping[int, Scalar]) -> dict[int, Scalar]:
        b = EchelonBuilder(self.ambient_dim, self.ring)
        b.rows = self._index
        return b.reduce(vec)

    def coordinates(self, vec: Mapping[int, Scalar]) -> dict[int, Scalar] | None:
        """Coefficients (keyed by pivot) expressing ``vec`` in the basis, or None."""
        track: dict = {}
        b = EchelonBuilder(self.ambient_dim, self.ring)
        b.rows = self._index
        if b.reduce(vec, track):
            return None
        return {p: c for p, c in track.items() if c}

    def contains(self, vec: Mapping[int, Scalar]) -> bool:
        return not self.reduce(vec)

    def builder(self) -> EchelonBuilder:
        b = EchelonBuilder(self.ambient_dim, self.ring)
        b.rows = {p: dict(r) for p, r in self._index.items()}
        return b

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


# -- rank / kernel ------------------------------------------------------------


@dataclass(frozen=True)
class Modular:
    samples: int = 3
    seed: int = 0


@dataclass
class RankResult:
    rank: int
    kernel: Subspace | None
    certificate: str
    sample_ranks: list[int] = field(default_factory=list)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# p must stay below 2**31.5 so that p*p fits in int64
_PRIME_LO = 2**31
_PRIME_HI = 3_037_000_000


def random_prime(rng: random.Random) -> int:
    while True:
        n = rng.randrange(_PRIME_LO, _PRIME_HI) | 1
        if _is_prime(n):
            return n


def rank_mod_p(mat: np.ndarray, p: int) -> int:
    """Rank of an int64 matrix modulo a prime p < 2**31.5."""
    a = np.array(mat, dtype=np.int64) % p
    nr, nc = a.shape
    rank = 0
    for c in range(nc):
        if rank == nr:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank] = a[rank] * inv % p
        col = a[:, c].copy()
        col[rank] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = (a[rows] - (col[rows, None] * a[rank][None, :]) % p) % p
        rank += 1
    return rank


def rref_mod_p(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(mat, dtype=np.int64) % p
    nr, nc = a.shape
    rank = 0
    pivots = []
    for c in range(nc):
        if rank == nr:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank] = a[rank] * inv % p
        col = a[:, c].copy()
        col[rank] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = (a[rows] - (col[rows, None] * a[rank][None, :]) % p) % p
        pivots.append(c)
        rank += 1
    return a[:rank], pivots


def nullspace_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of the right kernel of ``mat`` modulo p."""
    nc = mat.shape[1]
    red, pivots = rref_mod_p(mat, p)
    free = [c for c in range(nc) if c not in set(pivots)]
    out = np.zeros((len(free), nc), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, pc in enumerate(pivots):
            out[i, pc] = (-red[r, f]) % p
    return out


def _sample_points(ring: ScalarRing, rng: random.Random) -> tuple[dict, int]:
    p = random_prime(rng)
    return {n: rng.randrange(2, p - 1) for n in ring.names}, p


def rank_kernel(m: SparseMat, mode="exact", cache: "RankCache | None" = None) -> RankResult:
    """Rank and (exact mode) RREF kernel basis of ``m``."""
    if mode == "exact":
        if m.rows * m.cols > LIMITS["exact"]:
            raise ResourceLimitError()
        if cache is not None:
            hit = cache.get(m)
        red = _gauss_jordan([dict(r) for _, r in sorted(m.row_items())], m.cols)
        pivset = set(red.pivots)
        kernel_rows = []
        for f in range(m.cols):
            if f in pivset:
                continue
            v = {f: m.ring.one}
            for row, pc in zip(red.rows, red.pivots):
                w = row.get(f)
                if w is not None:
                    v[pc] = -w
            kernel_rows.append(v)
        kernel = Subspace(m.cols, m.ring, kernel_rows)
        res = RankResult(len(red.pivots), kernel, "exact")
        if cache is not None:
            if hit is not None and hit["rank"] != res.rank:
                raise RuntimeError("cache entry disagrees with recomputation")
            cache.put(m, res)
        return res
    if isinstance(mode, Modular):
        if mode.samples < 2:
            raise ValueError("modular mode needs at least 2 samples")
        if m.rows * m.cols > LIMITS["modular"]:
            raise ResourceLimitError()
        rng = random.Random(mode.seed)
        ranks = []
        seen = set()
        failures = 0
        while len(ranks) < mode.samples:
            point, p = _sample_points(m.ring, rng)
            key = (tuple(sorted(point.items())), p)
            if key in seen:
                continue
            seen.add(key)
            try:
                a = m.specialize(point, p)
            except SpecializationError:
                failures += 1
                if failures > 20 * mode.samples:
                    raise
                continue
            ranks.append(rank_mod_p(a, p))
        cert = "probabilistic-lower-bound-agreed" if len(set(ranks)) == 1 else "probabilistic-lower-bound"
        return RankResult(max(ranks), None, cert, ranks)
    raise ValueError(f"unknown mode {mode!r}")


def subspace_ops(op: str, a: Subspace, b):
    """sum / intersect / member / equals on RREF subspaces."""
    if op == "member":
        if any(not 0 <= k < a.ambient_dim for k in b):
            raise ValueError("ambient dimension mismatch")
        return a.contains(b)
    if not isinstance(b, Subspace) or a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if op == "sum":
        bld = a.builder()
        for v in b.basis:
            bld.add(v)
        return bld.freeze()
    if op == "equals":
        return all(a.contains(v) for v in b.basis) and all(b.contains(v) for v in a.basis)
    if op == "intersect":
        # columns: basis vectors of a, then of b; kernel vectors (alpha, beta)
        # give alpha.A = -beta.B in the intersection
        cols = list(a.basis) + list(b.basis)
        if not cols:
            return Subspace(a.ambient_dim, a.ring)
        mat = SparseMat.from_columns(a.ambient_dim, cols, a.ring)
        ker = rank_kernel(mat).kernel
        out = []
        for kv in ker.basis:
            v: dict = {}
            for j, c in kv.items():
                if j < a.dim:
                    vec_axpy(v, c, a.basis[j])
            out.append(v)
        return Subspace(a.ambient_dim, a.ring, out)
    raise ValueError(f"unknown subspace op {op!r}")


# -- cache -------------------------------------------------------------------


class RankCache:
    """Versioned JSON-lines record file: matrix content hash -> (rank, kernel fingerprint).

    Safe to delete at any time; records from another format version are ignored.
    """

    VERSION = 1

    def __init__(self, path: str | os.PathLike):
        self.path = os.fspath(path)
        self._records: dict[str, dict] = {}
        if os.path.exists(self.path):
            with open(self.path) as fh:
                for line in fh:
                    try:
                        rec = json.loads(line)
                    except json.JSONDecodeError:
                        continue
                    if rec.get("version") == self.VERSION:
                        self._records[rec["key"]] = rec

    def get(self, m: SparseMat) -> dict | None:
        return self._records.get(m.fingerprint())

    def put(self, m: SparseMat, res: RankResult) -> None:
        key = m.fingerprint()
        kfp = hashlib.sha256(repr([sorted((k, str(v)) for k, v in r.items()) for r in res.kernel.basis]).encode()).hexdigest() if res.kernel is not None else None
        rec = {"version": self.VERSION, "key": key, "rank": res.rank, "kernel": kfp, "certificate": res.certificate}
        self._records[key] = rec
        with open(self.path, "a") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
