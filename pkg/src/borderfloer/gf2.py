"""Bitset-packed GF(2) rank, with a numba-jitted kernel and a numpy fallback.

Rows are packed 64 columns per uint64 word.  The backend is chosen by the
environment variable BORDERFLOER_GF2_BACKEND: "numba", "numpy", or "auto"
(default; numba when importable, else numpy).
"""

from __future__ import annotations

import os
from typing import List, Sequence

import numpy as np

__all__ = ["pack_rows", "gf2_rank", "rank_from_int_rows", "active_backend",
           "HAS_NUMBA"]

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap


def pack_rows(int_rows: Sequence[int], ncols: int) -> np.ndarray:
    """Pack python-int bitmask rows into a (nrows, nwords) uint64 array."""
    nwords = max(1, (ncols + 63) // 64)
    out = np.zeros((len(int_rows), nwords), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, row in enumerate(int_rows):
        w = 0
        while row:
            out[i, w] = row & mask
            row >>= 64
            w += 1
    return out


def _rank_numpy(mat: np.ndarray, ncols: int) -> int:
    mat = mat.copy()
    nrows = mat.shape[0]
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        w = col >> 6
        bit = np.uint64(1 << (col & 63))
        hits = np.nonzero(mat[r:, w] & bit)[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            mat[[r, p]] = mat[[p, r]]
        rest = mat[r + 1:, w] & bit != 0
        if rest.any():
            mat[r + 1:][rest] ^= mat[r]
        r += 1
    return r


@njit(cache=True)
def _rank_numba(mat: np.ndarray, ncols: int) -> int:  # pragma: no cover - jitted
    nrows, nwords = mat.shape
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        w = col >> 6
        bit = np.uint64(1 << (col & 63))
        pivot = -1
        for i in range(r, nrows):
            if mat[i, w] & bit:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            for k in range(nwords):
                tmp = mat[r, k]
                mat[r, k] = mat[pivot, k]
                mat[pivot, k] = tmp
        for i in range(r + 1, nrows):
            if mat[i, w] & bit:
                for k in range(nwords):
                    mat[i, k] ^= mat[r, k]
        r += 1
    return r


def active_backend() -> str:
    choice = os.environ.get("BORDERFLOER_GF2_BACKEND", "auto")
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"BORDERFLOER_GF2_BACKEND must be auto, numba, or numpy, "
                         f"got {choice!r}")
    if choice == "numba" and not HAS_NUMBA:
        raise RuntimeError("BORDERFLOER_GF2_BACKEND=numba but numba is not installed")
    if choice == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    return choice


def gf2_rank(mat: np.ndarray, ncols: int, backend: str | None = None) -> int:
    """Rank over GF(2) of a packed matrix."""
    if mat.shape[0] == 0 or ncols == 0:
        return 0
    be = backend or active_backend()
    if be == "numba":
        return int(_rank_numba(mat.copy(), ncols))
    return _rank_numpy(mat, ncols)


def rank_from_int_rows(int_rows: Sequence[int], ncols: int,
                       backend: str | None = None) -> int:
    return gf2_rank(pack_rows(int_rows, ncols), ncols, backend)
