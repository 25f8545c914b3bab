"""Small symmetric matrices (n = 2..4) with cached ascending spectra.

A SymMat is the jet variable of a pure second-order constant-coefficient
constraint set: only its (block) eigenvalues matter to every set in this
package, so the class mostly exists to own the eigendecomposition and the
trace-free/diagonal splitting A = mu + t*Id used by boundary graphs.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SymMat",
    "eigenvalues",
    "block_spectrum",
    "random_symmat",
    "random_tracefree_direction",
]

_MAX_N = 4


class SymMat:
    """Symmetric n x n matrix, n in {2, 3, 4}, with cached ascending eigenvalues."""

    __slots__ = ("n", "mat", "_eigs", "_vecs")

    def __init__(self, mat):
        m = np.asarray(mat, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        n = m.shape[0]
        if not 2 <= n <= _MAX_N:
            raise ValueError(f"dimension {n} outside supported range 2..{_MAX_N}")
        if not np.all(np.isfinite(m)):
            raise ValueError("non-finite entries")
        if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(m).max())):
            raise ValueError("matrix is not symmetric")
        self.n = n
        self.mat = 0.5 * (m + m.T)  # store exactly symmetric
        self.mat.setflags(write=False)
        self._eigs = None
        self._vecs = None

    @classmethod
    def from_packed(cls, n: int, packed) -> "SymMat":
        """Build from the n(n+1)/2 upper-triangle entries, row major."""
        packed = np.asarray(packed, dtype=float)
        if packed.size != n * (n + 1) // 2:
            raise ValueError("wrong number of packed entries")
        m = np.zeros((n, n))
        iu = np.triu_indices(n)
        m[iu] = packed
        m = m + np.triu(m, 1).T
        return cls(m)

    @classmethod
    def diag(cls, *entries) -> "SymMat":
        if len(entries) == 1 and np.ndim(entries[0]) == 1:
            entries = tuple(entries[0])
        return cls(np.diag(np.asarray(entries, dtype=float)))

    @classmethod
    def zero(cls, n: int) -> "SymMat":
        return cls(np.zeros((n, n)))

    @classmethod
    def identity(cls, n: int) -> "SymMat":
        return cls(np.eye(n))

    @property
    def packed(self) -> np.ndarray:
        return self.mat[np.triu_indices(self.n)]

    @property
    def eigs(self) -> np.ndarray:
        """Ascending eigenvalues (cached)."""
        if self._eigs is None:
            self._eigs, self._vecs = np.linalg.eigh(self.mat)
        return self._eigs

    @property
    def eigvecs(self) -> np.ndarray:
        if self._vecs is None:
            self._eigs, self._vecs = np.linalg.eigh(self.mat)
        return self._vecs

    def trace(self) -> float:
        return float(np.trace(self.mat))

    def tracefree_part(self) -> "SymMat":
        """mu with A = mu + (tr A / n) Id."""
        return SymMat(self.mat - (self.trace() / self.n) * np.eye(self.n))

    def diag_coordinate(self) -> float:
        """t with A = mu + t*Id, tr mu = 0."""
        return self.trace() / self.n

    def __add__(self, other):
        if isinstance(other, SymMat):
            return SymMat(self.mat + other.mat)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SymMat):
            return SymMat(self.mat - other.mat)
        return NotImplemented

    def __neg__(self):
        return SymMat(-self.mat)

    def __mul__(self, c):
        return SymMat(self.mat * float(c))

    __rmul__ = __mul__

    def shifted(self, t: float) -> "SymMat":
        """A + t*Id."""
        return SymMat(self.mat + float(t) * np.eye(self.n))

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.mat))

    def __repr__(self):
        rows = "; ".join(" ".join(f"{v:.6g}" for v in row) for row in self.mat)
        return f"SymMat([{rows}])"


def eigenvalues(a: SymMat) -> np.ndarray:
    """Ascending eigenvalue vector of a SymMat."""
    return a.eigs.copy()


def block_spectrum(a: SymMat, k: int, l: int) -> np.ndarray:
    """Eigenvalues of the two diagonal blocks, each ascending, concatenated.

    The k x k block comes first.  Off-diagonal coupling is ignored, which is
    exactly the data split-invariant sets depend on.
    """
    if k + l != a.n:
        raise ValueError(f"block sizes {k}+{l} do not match n={a.n}")
    top = np.linalg.eigvalsh(a.mat[:k, :k]) if k > 1 else a.mat[:1, 0]
    bot = np.linalg.eigvalsh(a.mat[k:, k:]) if l > 1 else a.mat[k:, k]
    return np.concatenate([np.atleast_1d(np.asarray(top, dtype=float)),
                           np.atleast_1d(np.asarray(bot, dtype=float))])


def random_symmat(rng: np.random.Generator, n: int, scale: float = 1.0) -> SymMat:
    """GOE-like sample: symmetrized gaussian matrix."""
    g = rng.standard_normal((n, n))
    return SymMat(scale * 0.5 * (g + g.T))


def random_tracefree_direction(rng: np.random.Generator, n: int) -> SymMat:
    """Uniform direction on the unit Frobenius sphere of trace-free matrices."""
    while True:
        g = rng.standard_normal((n, n))
        m = 0.5 * (g + g.T)
        m -= (np.trace(m) / n) * np.eye(n)
        norm = np.linalg.norm(m)
        if norm > 1e-8:
            return SymMat(m / norm)
