"""Left-invariant tensor forms in the nu-basis.

A degree-k form is a sparse map from multi-indices to Scalars.  Letters
``nu^i_j`` (0-based i, j) are encoded as ``a = i*N + j`` and a multi-index
``(a_1, ..., a_k)`` as the base-N^2 integer with ``a_1`` most significant, so
that integer order is lexicographic order of multi-indices.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .exactla import vec_add, vec_axpy, vec_scale
from .scalars import Scalar, ScalarRing

__all__ = ["TensorForm", "encode", "decode"]


def encode(letters: Iterable[int], N: int) -> int:
    d = N * N
    idx = 0
    for a in letters:
        idx = idx * d + a
    return idx


def decode(idx: int, k: int, N: int) -> tuple[int, ...]:
    d = N * N
    out = [0] * k
    for pos in range(k - 1, -1, -1):
        idx, out[pos] = divmod(idx, d)
    return tuple(out)


class TensorForm:
    """Element of the k-th tensor power of the left-invariant 1-forms."""

    __slots__ = ("N", "degree", "ring", "coeffs")

    def __init__(self, N: int, degree: int, ring: ScalarRing, coeffs: Mapping[int, Scalar] | None = None):
        self.N = N
        self.degree = degree
        self.ring = ring
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def zero(cls, N, degree, ring):
        return cls(N, degree, ring, {})

    @classmethod
    def scalar(cls, N, ring, value):
        return cls(N, 0, ring, {0: ring(value)})

    @classmethod
    def nu(cls, N, ring, i, j):
        return cls(N, 1, ring, {i * N + j: ring.one})

    @classmethod
    def from_pairs(cls, N, ring, terms: Mapping[tuple[tuple[int, int], ...], object]):
        items = list(terms.items())
        if not items:
            raise ValueError("degree of an empty form is ambiguous; use TensorForm.zero")
        k = len(items[0][0])
        coeffs: dict[int, Scalar] = {}
        for key, v in items:
            idx = encode((i * N + j for i, j in key), N)
            coeffs = vec_add(coeffs, {idx: ring(v)})
        return cls(N, k, ring, coeffs)

    @property
    def dim(self) -> int:
        return (self.N * self.N) ** self.degree

    def pairs(self) -> Iterator[tuple[tuple[tuple[int, int], ...], Scalar]]:
        for idx, v in sorted(self.coeffs.items()):
            letters = decode(idx, self.degree, self.N)
            yield tuple(divmod(a, self.N) for a in letters), v

    def _check(self, other: "TensorForm"):
        if self.N != other.N or self.degree != other.degree:
            raise ValueError("forms of different degree or rank")

    def __add__(self, other):
        self._check(other)
        return TensorForm(self.N, self.degree, self.ring, vec_add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TensorForm(self.N, self.degree, self.ring, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, c):
        if isinstance(c, TensorForm):
            return NotImplemented
        return TensorForm(self.N, self.degree, self.ring, vec_scale(self.ring(c), self.coeffs))

    __rmul__ = __mul__

    def tensor(self, other: "TensorForm") -> "TensorForm":
        if self.N != other.N:
            raise ValueError("rank mismatch")
        shift = (self.N * self.N) ** other.degree
        out = {}
        for i, v in self.coeffs.items():
            for j, w in other.coeffs.items():
                out[i * shift + j] = v * w
        return TensorForm(self.N, self.degree + other.degree, self.ring, out)

    __matmul__ = tensor

    def axpy(self, c, other: "TensorForm") -> "TensorForm":
        self._check(other)
        out = dict(self.coeffs)
        vec_axpy(out, self.ring(c), other.coeffs)
        return TensorForm(self.N, self.degree, self.ring, out)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TensorForm):
            return NotImplemented
        return self.N == other.N and self.degree == other.degree and self.coeffs == other.coeffs

    def __repr__(self):
        parts = []
        for key, v in list(self.pairs())[:6]:
            name = "*".join(f"nu{i + 1}{j + 1}" for i, j in key) or "1"
            parts.append(f"({v}){name}")
        more = " + ..." if len(self.coeffs) > 6 else ""
        return f"TensorForm(deg={self.degree}: {' + '.join(parts) or '0'}{more})"
