"""Sparse exact Gaussian elimination over QRat.

Rows are dicts ``{column: QRat}``.  Pivots are chosen by smallest total
degree (numerator + denominator in u) to keep coefficient growth down.
"""

from __future__ import annotations

from .qfield import QRat


def _size(x):
    return x.size()


def _axpy(row, factor, pivot_row):
    out = dict(row)
    for c, v in pivot_row.items():
        nv = out[c] - factor * v if c in out else -(factor * v)
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


def echelon(rows):
    """Reduced row-echelon basis of the row span: ``{pivot_column: row}`` with row[pivot] == 1."""
    pivots = {}
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        for p, prow in pivots.items():
            if p in row:
                row = _axpy(row, row[p], prow)
        if not row:
            continue
        p = min(row, key=lambda c: (_size(row[c]), c))
        inv = row[p].inverse()
        row = {c: v * inv for c, v in row.items()}
        for q, qrow in list(pivots.items()):
            if p in qrow:
                pivots[q] = _axpy(qrow, qrow[p], row)
        pivots[p] = row
    return pivots


def rank(rows):
    return len(echelon(rows))


def nullspace(rows, ncols):
    """Basis of {v : row . v = 0 for all rows}, v indexed 0..ncols-1 (list of dicts)."""
    piv = echelon(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = {f: QRat(1)}
        for p, prow in piv.items():
            x = prow.get(f)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


def det_nonzero(matrix):
    """True if the square matrix (list of lists of QRat) is nonsingular."""
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        return False
    rows = [{j: v for j, v in enumerate(r) if v} for r in matrix]
    return rank(rows) == n
