"""Dense GF(2) vector/matrix arithmetic on numpy uint8 arrays.

Provides the bit-level building blocks for the OSD pre-processor:
XOR-based matrix products, index permutations, and Gaussian
elimination to systematic form [I | P].
"""

from __future__ import annotations

import numpy as np


class StructuralError(Exception):
    """Raised when a matrix lacks the structure an operation requires."""


def as_bits(v) -> np.ndarray:
    """Coerce to a uint8 array of {0,1} values."""
    a = np.asarray(v, dtype=np.uint8)
    if a.size and a.max() > 1:
        raise ValueError("entries must be 0 or 1")
    return a


def mat_vec_mul(v, M) -> np.ndarray:
    """GF(2) product v . M of a row vector with a matrix.

    result[j] = XOR over i of v[i] * M[i][j].
    """
    v = as_bits(v)
    M = as_bits(M)
    if M.ndim != 2 or v.ndim != 1:
        raise ValueError("expected a vector and a matrix")
    if v.shape[0] != M.shape[0]:
        raise ValueError(
            f"dimension mismatch: vector length {v.shape[0]} vs {M.shape[0]} rows"
        )
    # uint8 matmul wraps mod 256; parity survives because 256 is even.
    return (v @ M) & 1


def mat_mul(A, B) -> np.ndarray:
    """GF(2) matrix product."""
    A = as_bits(A)
    B = as_bits(B)
    if A.shape[-1] != B.shape[0]:
        raise ValueError("dimension mismatch")
    if A.shape[-1] > 255:
        return (A.astype(np.int64) @ B.astype(np.int64)) & 1
    return (A @ B) & 1


def identity_permutation(length: int) -> np.ndarray:
    return np.arange(length, dtype=np.int64)


def is_permutation(perm) -> bool:
    perm = np.asarray(perm)
    return perm.ndim == 1 and np.array_equal(np.sort(perm), np.arange(len(perm)))


def invert_permutation(perm) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm), dtype=np.int64)
    return inv


def apply_permutation(perm, v) -> np.ndarray:
    """Reorder v so that result[i] = v[perm[i]]."""
    perm = np.asarray(perm, dtype=np.int64)
    v = np.asarray(v)
    if len(perm) != len(v):
        raise ValueError(
            f"length mismatch: permutation {len(perm)} vs vector {len(v)}"
        )
    return v[perm]


def ge_op_count(n: int, rows: int) -> int:
    """Nominal mod-2 operation count of the systematic reduction.

    n * min(rows, n - rows)^2 for a rows x n generator.
    """
    return int(n) * min(int(rows), int(n) - int(rows)) ** 2


def systematic_form(G, col_order=None):
    """Reduce a full-rank generator to systematic form [I | P].

    Scans columns in `col_order` (identity when omitted), greedily keeps
    the first `rows` linearly independent columns, and returns:

        Gt     -- row-equivalent matrix with an exact identity block in
                  its first `rows` columns,
        lam2   -- column permutation (relative to the col_order'd matrix)
                  that moves the chosen columns to the front, preserving
                  relative order within the chosen and unchosen groups,
        ge_ops -- nominal operation count n * min(rows, n - rows)^2.

    Pivot tie-break: the first nonzero row under the current column wins.

    Raises StructuralError if G has rank < rows.
    """
    G = as_bits(G)
    if G.ndim != 2:
        raise ValueError("G must be a matrix")
    rows, n = G.shape
    if rows > n:
        raise ValueError("generator must have cols >= rows")
    if col_order is not None:
        if not is_permutation(col_order) or len(col_order) != n:
            raise ValueError("col_order must be a permutation of the columns")
        G = G[:, np.asarray(col_order, dtype=np.int64)]

    R = G.copy()
    pivot_cols = []
    prow = 0
    for col in range(n):
        nz = np.nonzero(R[prow:, col])[0]
        if nz.size == 0:
            continue
        pr = prow + nz[0]
        if pr != prow:
            R[[prow, pr]] = R[[pr, prow]]
        # Gauss-Jordan: clear the column everywhere else.
        mask = R[:, col].astype(bool)
        mask[prow] = False
        if mask.any():
            R[mask] ^= R[prow]
        pivot_cols.append(col)
        prow += 1
        if prow == rows:
            break
    if prow < rows:
        raise StructuralError(f"rank {prow} < {rows}: generator is rank deficient")

    chosen = np.asarray(pivot_cols, dtype=np.int64)
    rest = np.setdiff1d(np.arange(n, dtype=np.int64), chosen, assume_unique=True)
    lam2 = np.concatenate([chosen, rest])
    Gt = R[:, lam2]
    return Gt, lam2, ge_op_count(n, rows)


def gf2_rank(M) -> int:
    """GF(2) rank via row elimination."""
    R = as_bits(M).copy()
    rank = 0
    rows, n = R.shape
    for col in range(n):
        nz = np.nonzero(R[rank:, col])[0]
        if nz.size == 0:
            continue
        pr = rank + nz[0]
        if pr != rank:
            R[[rank, pr]] = R[[pr, rank]]
        below = np.nonzero(R[rank + 1 :, col])[0] + rank + 1
        R[below] ^= R[rank]
        rank += 1
        if rank == rows:
            break
    return rank
