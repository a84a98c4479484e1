"""Exact dense linear algebra over F_p.

Matrices are int64 numpy arrays with entries reduced mod p.  The elimination
kernel comes from the compiled extension `_ffcore` when it is built; setting
TATEPROD_PURE=1 (or a missing extension) selects the numpy fallback.  Both
implement the same deterministic first-nonzero pivoting, so every basis the
package produces is backend independent.
"""

from __future__ import annotations

import os

import numpy as np

from . import _linalg_py

if os.environ.get("TATEPROD_PURE"):
    _rref_impl = _linalg_py.rref_mod_p
    BACKEND = "python"
else:
    try:
        from . import _ffcore

        _rref_impl = _ffcore.rref_mod_p
        BACKEND = "compiled"
    except ImportError:
        _rref_impl = _linalg_py.rref_mod_p
        BACKEND = "python"


class NoSolutionError(Exception):
    """Raised by `solve` when the right-hand side is not in the image."""


def as_matrix(a, cols: int | None = None) -> np.ndarray:
    m = np.asarray(a, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.size == 0 and cols is not None:
        m = m.reshape(0, cols) if m.shape[0] == 0 else m.reshape(-1, cols)
    return m


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # int64 products stay well below overflow for any p < 2^15.5 and the
    # inner dimensions used here.
    return (a % p) @ (b % p) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and strictly increasing pivot columns."""
    a = as_matrix(a)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a % p if a.size else a.copy(), []
    r, piv = _rref_impl(a, p)
    return r, list(piv)


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning ker(a); count = cols - rank, deterministic order."""
    a = as_matrix(a)
    m, n = a.shape
    if n == 0:
        return zeros(0, 0)
    if m == 0:
        return eye(n)
    r, pivots = rref(a, p)
    free = [j for j in range(n) if j not in set(pivots)]
    ker = zeros(n, len(free))
    for idx, f in enumerate(free):
        ker[f, idx] = 1
        for i, c in enumerate(pivots):
            ker[c, idx] = (-r[i, f]) % p
    return ker


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """One solution of a @ x = b, or NoSolutionError if b is not in im(a)."""
    a = as_matrix(a)
    b = as_matrix(b)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    m, n = a.shape
    k = b.shape[1]
    if m == 0:
        return zeros(n, k) if k > 1 else zeros(n, 1).reshape(n)
    aug = np.hstack([a % p, b % p])
    r, pivots = rref(aug, p)
    x = zeros(n, k)
    for i, c in enumerate(pivots):
        if c >= n:
            raise NoSolutionError("rhs not in column span")
        x[c] = r[i, n:]
    squeeze = np.asarray(b).ndim == 1 or (b.shape[1] == 1 and np.asarray(b).ndim == 2 and k == 1)
    return x[:, 0] if (squeeze and k == 1) else x


def independent_columns(span: np.ndarray | None, cand: np.ndarray, p: int) -> list[int]:
    """Indices of `cand` columns independent modulo the span columns."""
    cand = as_matrix(cand)
    if cand.shape[1] == 0:
        return []
    if span is None or span.size == 0:
        stacked, offset = cand, 0
    else:
        span = as_matrix(span)
        stacked = np.hstack([span % p, cand % p])
        offset = span.shape[1]
    _, pivots = rref(stacked, p)
    return [c - offset for c in pivots if c >= offset]


class ReducedSpan:
    """A subspace of F_p^n kept as reduced echelon rows.

    Supports batch reduction, membership, and the canonical complement of
    coordinates used for quotient (coset) bases.
    """

    def __init__(self, n: int, p: int, vectors: np.ndarray | None = None):
        self.n = n
        self.p = p
        self.rows = zeros(0, n)
        self.pivots: list[int] = []
        if vectors is not None and as_matrix(vectors).size:
            self.rows, self.pivots = rref(as_matrix(vectors), p)
            self._strip()

    @staticmethod
    def from_columns(cols: np.ndarray, p: int) -> "ReducedSpan":
        cols = as_matrix(cols)
        return ReducedSpan(cols.shape[0], p, cols.T.copy())

    def _strip(self):
        self.rows = self.rows[: len(self.pivots)]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vecs: np.ndarray) -> np.ndarray:
        """Residuals of row vectors after elimination; zero on pivot coords."""
        vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64)) % self.p
        if not self.pivots:
            return vecs
        coef = vecs[:, self.pivots]
        return (vecs - coef @ self.rows) % self.p

    def contains(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()

    def complement(self) -> list[int]:
        pset = set(self.pivots)
        return [j for j in range(self.n) if j not in pset]

    def coords_in_complement(self, vecs: np.ndarray) -> np.ndarray:
        """Coordinates of cosets on the complement basis (residual entries)."""
        return self.reduce(vecs)[:, self.complement()]
