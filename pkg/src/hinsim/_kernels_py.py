"""Pure-Python frontier expansion, the fallback for the compiled kernel.

Tuple codes are mixed-radix integers: code = sum(x_i * stride_i) with
strides row-major over the layer's canonical type order, matching the
lexicographic tuple order of LayerProduct.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"


def _strides(radix: np.ndarray) -> np.ndarray:
    out = np.ones(len(radix), dtype=np.int64)
    for i in range(len(radix) - 2, -1, -1):
        out[i] = out[i + 1] * radix[i + 1]
    return out


def expand_product(live_codes, row_radix, col_radix, constraints):
    """Adjacent column tuples for each live row tuple.

    constraints: list of (row_comp, col_comp, indptr, indices) where
    indptr/indices form the CSR adjacency from objects of the row
    component's type to objects of the column component's type. A column
    tuple is adjacent when every constraint holds (AND); column components
    untouched by any constraint range over their full object set.

    Returns (row_pos, col_codes): parallel int64 arrays, row_pos indexing
    into live_codes.
    """
    live_codes = np.asarray(live_codes, dtype=np.int64)
    row_radix = np.asarray(row_radix, dtype=np.int64)
    col_radix = np.asarray(col_radix, dtype=np.int64)
    row_strides = _strides(row_radix)
    col_strides = _strides(col_radix)

    by_col: dict[int, list] = {}
    for (ri, cj, indptr, indices) in constraints:
        by_col.setdefault(int(cj), []).append((int(ri), indptr, indices))
    full = [np.arange(n, dtype=np.int64) for n in col_radix]

    out_rows: list[np.ndarray] = []
    out_cols: list[np.ndarray] = []
    m = len(col_radix)
    for pos, code in enumerate(live_codes):
        comps = (code // row_strides) % row_radix
        cands = []
        dead = False
        for j in range(m):
            if j in by_col:
                cur = None
                for (ri, indptr, indices) in by_col[j]:
                    x = int(comps[ri])
                    adj = indices[indptr[x]:indptr[x + 1]]
                    cur = adj if cur is None else np.intersect1d(
                        cur, adj, assume_unique=True)
                    if len(cur) == 0:
                        dead = True
                        break
                if dead:
                    break
                cands.append(np.asarray(cur, dtype=np.int64))
            else:
                cands.append(full[j])
        if dead:
            continue
        # cartesian product of candidate component lists, emitted as codes
        codes = np.zeros(1, dtype=np.int64)
        for j in range(m):
            codes = (codes[:, None] + cands[j][None, :] * col_strides[j]).ravel()
        out_rows.append(np.full(len(codes), pos, dtype=np.int64))
        out_cols.append(codes)

    if not out_rows:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
    return (np.concatenate(out_rows), np.concatenate(out_cols))
