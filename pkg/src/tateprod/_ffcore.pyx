# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p elimination kernel (row-major int64 Gauss-Jordan)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline long long inv_mod(long long x, long long p):
    # Fermat inverse by fast exponentiation; p is prime, x != 0 mod p.
    cdef long long result = 1
    cdef long long base = x % p
    cdef long long e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def rref_mod_p(a, long long p):
    """Reduced row echelon form mod p and pivot columns; input not mutated."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] mat = np.array(a, dtype=np.int64, order="C")
    cdef Py_ssize_t m = mat.shape[0]
    cdef Py_ssize_t n = mat.shape[1]
    cdef cnp.int64_t[:, :] A = mat
    cdef Py_ssize_t r = 0, col, i, j, pr
    cdef long long piv, inv, factor, tmp
    pivots = []
    for i in range(m):
        for j in range(n):
            A[i, j] = A[i, j] % p
            if A[i, j] < 0:
                A[i, j] += p
    for col in range(n):
        if r == m:
            break
        pr = -1
        for i in range(r, m):
            if A[i, col] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(n):
                tmp = A[r, j]
                A[r, j] = A[pr, j]
                A[pr, j] = tmp
        piv = A[r, col]
        if piv != 1:
            inv = inv_mod(piv, p)
            for j in range(col, n):
                A[r, j] = A[r, j] * inv % p
        for i in range(m):
            if i != r:
                factor = A[i, col]
                if factor != 0:
                    for j in range(col, n):
                        A[i, j] = (A[i, j] - factor * A[r, j]) % p
                        if A[i, j] < 0:
                            A[i, j] += p
        pivots.append(col)
        r += 1
    return mat, pivots
