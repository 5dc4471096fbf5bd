"""
Dense linear algebra over GF(p) with numpy int64 arrays.

Entries stay in [0, p), so p < 2^31 keeps every product inside int64.
"""
from typing import List, Tuple

import numpy as np

from src.utils.validation import CharacteristicError

MAX_PRIME = 2 ** 31


def _as_field(A: np.ndarray, p: int) -> np.ndarray:
    if p >= MAX_PRIME:
        raise CharacteristicError(f"Prime {p} is too large for int64 elimination")
    return np.array(A, dtype=np.int64, copy=True) % p


def rref_mod_p(A: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form of A over GF(p) and its pivot columns."""
    R = _as_field(A, p)
    rows, cols = R.shape
    pivots: List[int] = []
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nonzero = np.nonzero(R[rank:, c])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            R[[rank, pivot], :] = R[[pivot, rank], :]
        inv = pow(int(R[rank, c]), -1, p)
        R[rank, :] = (R[rank, :] * inv) % p
        factors = R[:, c].copy()
        factors[rank] = 0
        mask = factors != 0
        if mask.any():
            R[mask, :] = (R[mask, :] - np.outer(factors[mask], R[rank, :]) % p) % p
        pivots.append(c)
        rank += 1
    return R, pivots


def rank_mod_p(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref_mod_p(A, p)[1])


def nullspace_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : A x = 0} over GF(p); shape (cols - rank, cols)."""
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref_mod_p(A, p)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, c in enumerate(pivots):
            basis[k, c] = (-R[row, f]) % p
    return basis
