# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled frontier expansion over mixed-radix tuple codes.

Same contract as _kernels_py.expand_product; see that module for the
reference semantics. CSR inputs must have sorted indices.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

IMPLEMENTATION = "cython"


cdef Py_ssize_t _intersect(cnp.int64_t* a, Py_ssize_t na,
                           cnp.int64_t* b, Py_ssize_t nb,
                           cnp.int64_t* out) nogil:
    # sorted-array intersection, returns length written to out
    cdef Py_ssize_t i = 0, j = 0, n = 0
    while i < na and j < nb:
        if a[i] < b[j]:
            i += 1
        elif a[i] > b[j]:
            j += 1
        else:
            out[n] = a[i]
            n += 1
            i += 1
            j += 1
    return n


def expand_product(live_codes, row_radix, col_radix, constraints):
    live_arr = np.ascontiguousarray(live_codes, dtype=np.int64)
    rrad_arr = np.ascontiguousarray(row_radix, dtype=np.int64)
    crad_arr = np.ascontiguousarray(col_radix, dtype=np.int64)
    cdef cnp.int64_t[::1] live = live_arr
    cdef cnp.int64_t[::1] rrad = rrad_arr
    cdef cnp.int64_t[::1] crad = crad_arr
    cdef Py_ssize_t k = rrad.shape[0], m = crad.shape[0]
    cdef Py_ssize_t n_live = live.shape[0]
    cdef Py_ssize_t pos, i, j, c, x, a0, a1, nc, t, need
    cdef cnp.int64_t code, emit
    cdef bint dead, first

    # strides, row-major
    rstr_arr = np.ones(k, dtype=np.int64)
    for i in range(k - 2, -1, -1):
        rstr_arr[i] = rstr_arr[i + 1] * rrad_arr[i + 1]
    cstr_arr = np.ones(m, dtype=np.int64)
    for j in range(m - 2, -1, -1):
        cstr_arr[j] = cstr_arr[j + 1] * crad_arr[j + 1]
    cdef cnp.int64_t[::1] rstr = rstr_arr
    cdef cnp.int64_t[::1] cstr = cstr_arr

    # pack constraints: stacked CSR arrays plus per-constraint offsets
    cdef Py_ssize_t n_cons = len(constraints)
    cons_ri_arr = np.empty(n_cons, dtype=np.int64)
    cons_cj_arr = np.empty(n_cons, dtype=np.int64)
    ptr_parts, idx_parts = [], []
    ptr_off_arr = np.zeros(n_cons + 1, dtype=np.int64)
    idx_off_arr = np.zeros(n_cons + 1, dtype=np.int64)
    for c, (ri, cj, indptr, indices) in enumerate(constraints):
        cons_ri_arr[c] = ri
        cons_cj_arr[c] = cj
        # wraparound is off module-wide, so no [-1] list reads here
        p_arr = np.ascontiguousarray(indptr, dtype=np.int64)
        i_arr = np.ascontiguousarray(indices, dtype=np.int64)
        ptr_parts.append(p_arr)
        idx_parts.append(i_arr)
        ptr_off_arr[c + 1] = ptr_off_arr[c] + p_arr.shape[0]
        idx_off_arr[c + 1] = idx_off_arr[c] + i_arr.shape[0]
    ptr_all_arr = (np.concatenate(ptr_parts) if ptr_parts
                   else np.empty(0, dtype=np.int64))
    idx_all_arr = (np.concatenate(idx_parts) if idx_parts
                   else np.empty(0, dtype=np.int64))
    cdef cnp.int64_t[::1] cons_ri = cons_ri_arr
    cdef cnp.int64_t[::1] cons_cj = cons_cj_arr
    cdef cnp.int64_t[::1] ptr_off = ptr_off_arr
    cdef cnp.int64_t[::1] idx_off = idx_off_arr
    cdef cnp.int64_t[::1] ptr_all = ptr_all_arr
    cdef cnp.int64_t[::1] idx_all = idx_all_arr

    cdef cnp.int64_t max_rad = 0
    for j in range(m):
        if crad[j] > max_rad:
            max_rad = crad[j]

    # scratch: candidate lists per column component, plus one swap row
    cand_arr = np.empty((m, max(max_rad, 1)), dtype=np.int64)
    swap_arr = np.empty(max(max_rad, 1), dtype=np.int64)
    nlen_arr = np.empty(m, dtype=np.int64)
    comps_arr = np.empty(max(k, 1), dtype=np.int64)
    odo_arr = np.empty(max(m, 1), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] cand = cand_arr
    cdef cnp.int64_t[::1] swap = swap_arr
    cdef cnp.int64_t[::1] nlen = nlen_arr
    cdef cnp.int64_t[::1] comps = comps_arr
    cdef cnp.int64_t[::1] odo = odo_arr

    cdef Py_ssize_t cap = 1024, n_out = 0
    out_rows_arr = np.empty(cap, dtype=np.int64)
    out_cols_arr = np.empty(cap, dtype=np.int64)
    cdef cnp.int64_t[::1] out_rows = out_rows_arr
    cdef cnp.int64_t[::1] out_cols = out_cols_arr

    for pos in range(n_live):
        code = live[pos]
        for i in range(k):
            comps[i] = (code // rstr[i]) % rrad[i]
        dead = False
        for j in range(m):
            nlen[j] = -1  # -1 marks "unconstrained so far"
        for c in range(n_cons):
            j = cons_cj[c]
            x = comps[cons_ri[c]]
            a0 = ptr_all[ptr_off[c] + x]
            a1 = ptr_all[ptr_off[c] + x + 1]
            nc = a1 - a0
            if nlen[j] < 0:
                for t in range(nc):
                    cand[j, t] = idx_all[idx_off[c] + a0 + t]
                nlen[j] = nc
            elif nc == 0:
                nlen[j] = 0
            else:
                nc = _intersect(&cand[j, 0], nlen[j],
                                &idx_all[idx_off[c] + a0], nc,
                                &swap[0])
                for t in range(nc):
                    cand[j, t] = swap[t]
                nlen[j] = nc
            if nlen[j] == 0:
                dead = True
                break
        if dead:
            continue
        for j in range(m):
            if nlen[j] < 0:
                for t in range(crad[j]):
                    cand[j, t] = t
                nlen[j] = crad[j]

        # count, grow once, then odometer emission
        need = 1
        for j in range(m):
            need *= nlen[j]
        if need == 0:
            continue
        if n_out + need > cap:
            while n_out + need > cap:
                cap *= 2
            out_rows_arr = np.resize(out_rows_arr, cap)
            out_cols_arr = np.resize(out_cols_arr, cap)
            out_rows = out_rows_arr
            out_cols = out_cols_arr
        for j in range(m):
            odo[j] = 0
        first = True
        while True:
            if not first:
                j = m - 1
                while j >= 0:
                    odo[j] += 1
                    if odo[j] < nlen[j]:
                        break
                    odo[j] = 0
                    j -= 1
                if j < 0:
                    break
            first = False
            emit = 0
            for j in range(m):
                emit += cand[j, odo[j]] * cstr[j]
            out_rows[n_out] = pos
            out_cols[n_out] = emit
            n_out += 1

    return out_rows_arr[:n_out].copy(), out_cols_arr[:n_out].copy()
