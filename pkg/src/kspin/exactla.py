"""Small dense linear algebra over exact field scalars (QG or Fraction).

Everything here is O(n^3) schoolbook elimination; matrices stay small (the
fiber pieces have dimension at most binomial(8,4) = 70).  Used both by the
verification paths and as the independent slow oracle for the compiled
mode-sweep kernels.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple


def rank(rows: Sequence[Sequence]) -> int:
    """Rank via fraction-free-ish elimination with exact division."""
    mat = [list(r) for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][c]
        for i in range(r + 1, len(mat)):
            if mat[i][c]:
                f = mat[i][c] / pv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return r


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List]:
    """Basis of the right nullspace, exact.

    Returns vectors of length ncols; empty list for trivial kernel.
    """
    mat = [list(r) for r in rows]
    pivots: List[Tuple[int, int]] = []  # (row, col)
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][c]
        mat[r] = [a / pv for a in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append((r, c))
        r += 1
        if r == len(mat):
            break
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    zero = mat[0][0] - mat[0][0] if mat else 0  # zero of the scalar type
    unit = zero + 1
    basis = []
    for fc in free_cols:
        vec = [zero] * ncols
        for pr, pc in pivots:
            vec[pc] = -mat[pr][fc]
        vec[fc] = unit
        basis.append(vec)
    return basis


def nullity(rows: Sequence[Sequence], ncols: int) -> int:
    return ncols - rank(rows)
