"""Degree-truncated full Fock space over the grid span.

Basis vectors are index words ``(i_1, ..., i_l)`` with ``l <= D``, ordered by
length and then lexicographically; the empty word is the vacuum and has
index 0.  Within one length the lexicographic order is the row-major
flattening of a ``(m,) * l`` array, so a degree-``l`` coefficient tensor maps
onto a contiguous slice of a Fock vector.

Operators are stored as ``scipy.sparse`` CSR matrices.  Anything mapped above
degree ``D`` is dropped, which realizes the compression ``P_D A P_D``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
import itertools

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg

from .exceptions import DomainError, ShapeError
from .grid import CoeffTensor, GridSpec

__all__ = [
    "FockBasis",
    "FockVector",
    "OperatorMatrix",
    "enumerate_basis",
    "ladder_matrix",
    "field_matrix",
    "wick_matrix",
    "word_blocks",
    "vacuum_expectation",
    "operator_norm_estimate",
]

# dense SVD below this dimension, sparse Lanczos above
DENSE_LIMIT = 3000


@dataclass(frozen=True)
class FockBasis:
    grid: GridSpec
    max_degree: int

    def __post_init__(self):
        if self.max_degree < 0:
            raise DomainError(f"max_degree must be >= 0, got {self.max_degree}")

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        """Start index of each word length; the last entry is the dimension."""
        m = self.grid.cells
        out = [0]
        for length in range(self.max_degree + 1):
            out.append(out[-1] + m**length)
        return tuple(out)

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    @property
    def words(self) -> list[tuple[int, ...]]:
        m = self.grid.cells
        return [
            w
            for length in range(self.max_degree + 1)
            for w in itertools.product(range(m), repeat=length)
        ]

    def index(self, word) -> int:
        word = tuple(word)
        if len(word) > self.max_degree:
            raise DomainError(f"word of length {len(word)} exceeds degree {self.max_degree}")
        m = self.grid.cells
        flat = 0
        for i in word:
            if not 0 <= i < m:
                raise DomainError(f"letter {i} outside [0, {m})")
            flat = flat * m + i
        return self.offsets[len(word)] + flat

    def degree_slice(self, length: int) -> slice:
        return slice(self.offsets[length], self.offsets[length + 1])

    def __len__(self):
        return self.dim


def enumerate_basis(grid: GridSpec, max_degree: int) -> FockBasis:
    return FockBasis(grid, max_degree)


@dataclass(frozen=True)
class FockVector:
    basis: FockBasis
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.shape != (self.basis.dim,):
            raise ShapeError(f"vector of length {c.shape} for basis of dim {self.basis.dim}")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def vacuum(cls, basis: FockBasis) -> "FockVector":
        return cls.from_word(basis, ())

    @classmethod
    def from_word(cls, basis: FockBasis, word) -> "FockVector":
        c = np.zeros(basis.dim, dtype=complex)
        c[basis.index(word)] = 1.0
        return cls(basis, c)

    @classmethod
    def from_tensors(cls, basis: FockBasis, tensors) -> "FockVector":
        """Stack degree-wise coefficient arrays, dropping degrees above ``D``."""
        c = np.zeros(basis.dim, dtype=complex)
        for n, arr in tensors.items():
            if n <= basis.max_degree:
                c[basis.degree_slice(n)] = np.asarray(arr, dtype=complex).ravel()
        return cls(basis, c)

    def degree_part(self, length: int) -> np.ndarray:
        m = self.basis.grid.cells
        return self.coefficients[self.basis.degree_slice(length)].reshape((m,) * length)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))


@dataclass(frozen=True)
class OperatorMatrix:
    """Square operator on a truncated Fock space (CSR storage)."""

    basis: FockBasis
    entries: sp.csr_array = field(repr=False)

    def __post_init__(self):
        a = sp.csr_array(self.entries, dtype=complex)
        if a.shape != (self.basis.dim, self.basis.dim):
            raise ShapeError(f"matrix shape {a.shape} does not match basis dim {self.basis.dim}")
        object.__setattr__(self, "entries", a)

    @classmethod
    def identity(cls, basis: FockBasis) -> "OperatorMatrix":
        return cls(basis, sp.identity(basis.dim, dtype=complex, format="csr"))

    def dense(self) -> np.ndarray:
        return self.entries.toarray()

    def _other(self, other):
        if not isinstance(other, OperatorMatrix):
            return None
        if other.basis != self.basis:
            raise ShapeError("operators act on different Fock bases")
        return other.entries

    def __add__(self, other):
        e = self._other(other)
        if e is None:
            return NotImplemented
        return OperatorMatrix(self.basis, self.entries + e)

    def __sub__(self, other):
        e = self._other(other)
        if e is None:
            return NotImplemented
        return OperatorMatrix(self.basis, self.entries - e)

    def __mul__(self, scalar):
        if np.isscalar(scalar):
            return OperatorMatrix(self.basis, self.entries * scalar)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.basis, self.entries @ self._other(other))
        if isinstance(other, FockVector):
            if other.basis != self.basis:
                raise ShapeError("vector lives on a different Fock basis")
            return FockVector(self.basis, self.entries @ other.coefficients)
        return NotImplemented

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.entries.conj().T)

    def apply_vacuum(self) -> FockVector:
        return FockVector(self.basis, self.entries[:, [0]].toarray().ravel())


def _check_vector(basis: FockBasis, h: CoeffTensor) -> np.ndarray:
    if h.degree != 1:
        raise ShapeError(f"direction must have degree 1, got {h.degree}")
    if h.grid != basis.grid:
        raise ShapeError("direction lives on a different grid")
    return h.coeffs


def _creation(basis: FockBasis, h: np.ndarray) -> sp.csr_array:
    # word w of length l -> sum_j h_j (j, w); block (l+1, l) = kron(h, I_{m^l})
    m = basis.grid.cells
    rows, cols, vals = [], [], []
    col_h = sp.csr_array(h.reshape(m, 1))
    for length in range(basis.max_degree):
        block = sp.kron(col_h, sp.identity(m**length, dtype=complex, format="csr")).tocoo()
        rows.append(block.row + basis.offsets[length + 1])
        cols.append(block.col + basis.offsets[length])
        vals.append(block.data)
    if not rows:
        return sp.csr_array((basis.dim, basis.dim), dtype=complex)
    return sp.csr_array(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(basis.dim, basis.dim),
    )


def ladder_matrix(basis: FockBasis, h: CoeffTensor, kind: str) -> OperatorMatrix:
    """Creation (``kind="create"``) or annihilation operator of ``h``.

    Annihilation sends ``(i, w)`` to ``<e_i, h> w = conj(h_i) w`` and the
    vacuum to 0; it is the conjugate transpose of creation.
    """
    c = _check_vector(basis, h)
    a = _creation(basis, c)
    if kind == "create":
        return OperatorMatrix(basis, a)
    if kind == "annihilate":
        return OperatorMatrix(basis, a.conj().T)
    raise DomainError(f"kind must be 'create' or 'annihilate', got {kind!r}")


def field_matrix(basis: FockBasis, h: CoeffTensor) -> OperatorMatrix:
    """Field operator ``X(h) = l(h) + l*(h)`` for real ``h``."""
    c = _check_vector(basis, h)
    if np.any(c.imag != 0):
        raise DomainError("field operators take real directions only")
    a = _creation(basis, c)
    return OperatorMatrix(basis, a + a.conj().T)


def word_blocks(word) -> list[tuple[int, int]]:
    """Run-length encode a word into ``(letter, power)`` blocks."""
    return [(j, len(list(g))) for j, g in itertools.groupby(tuple(word))]


def _chebyshev_u(x: sp.csr_array, k: int) -> sp.csr_array:
    """``U_k(x)`` by ``U_{k+1} = x U_k - U_{k-1}``."""
    dim = x.shape[0]
    prev = sp.identity(dim, dtype=complex, format="csr")
    if k == 0:
        return prev
    cur = x.copy()
    for _ in range(k - 1):
        prev, cur = cur, (x @ cur - prev).tocsr()
    return cur


def wick_matrix(basis: FockBasis, word=(), *, blocks=None) -> OperatorMatrix:
    """Wick product ``U_{k1}(X(e_{j1})) ... U_{kr}(X(e_{jr}))``.

    Pass either a flat index ``word`` (grouped into runs automatically) or
    explicit ``blocks`` of ``(letter, power)`` pairs; adjacent blocks must
    use distinct letters.
    """
    if blocks is None:
        blocks = word_blocks(word)
    blocks = [(int(j), int(k)) for j, k in blocks]
    for (j1, _), (j2, _) in zip(blocks, blocks[1:]):
        if j1 == j2:
            raise DomainError(f"adjacent blocks share letter {j1}")
    out = sp.identity(basis.dim, dtype=complex, format="csr")
    fields = {}
    for j, k in blocks:
        if k < 0:
            raise DomainError("block powers must be non-negative")
        if j not in fields:
            fields[j] = field_matrix(basis, basis.grid.basis(j)).entries
        out = (out @ _chebyshev_u(fields[j], k)).tocsr()
    return OperatorMatrix(basis, out)


def vacuum_expectation(a: OperatorMatrix) -> complex:
    """``<A Omega, Omega>``, i.e. the (0, 0) entry."""
    return complex(a.entries[0, 0])


def operator_norm_estimate(a: OperatorMatrix) -> float:
    """Largest singular value of the truncated matrix.

    This is a lower bound for the norm of the untruncated operator and is
    non-decreasing in the truncation degree.
    """
    if a.basis.dim <= DENSE_LIMIT:
        return float(scipy.linalg.norm(a.dense(), 2)) if a.basis.dim else 0.0
    if a.entries.nnz == 0:
        return 0.0
    s = scipy.sparse.linalg.svds(a.entries, k=1, return_singular_vectors=False, random_state=0)
    return float(s[0])
