"""Pure numpy elimination kernel over F_p; fallback for the compiled core."""

from __future__ import annotations

import numpy as np


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of `a` mod p and its pivot columns.

    Deterministic first-nonzero pivoting; the input is not mutated.
    """
    a = np.asarray(a, dtype=np.int64) % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, col]), p - 2, p)
        a[r] = a[r] * inv % p
        colvals = a[:, col].copy()
        colvals[r] = 0
        rows = np.nonzero(colvals)[0]
        if rows.size:
            a[rows] = (a[rows] - np.outer(colvals[rows], a[r])) % p
        pivots.append(col)
        r += 1
    return a, pivots
