# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels: the exact twin of perdec._kernels_py.

The dispatcher in perdec.kernels only routes here when every numerator
fits comfortably in int64, so all value arithmetic below is C integer
arithmetic.  Enumeration order must stay in lockstep with the pure
module; the test suite compares both on random inputs.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc


cdef long long* _alloc_ll(Py_ssize_t n) except NULL:
    cdef long long* p = <long long*> PyMem_Malloc(n * sizeof(long long))
    if p == NULL:
        raise MemoryError()
    return p


cdef Py_ssize_t* _alloc_sz(Py_ssize_t n) except NULL:
    cdef Py_ssize_t* p = <Py_ssize_t*> PyMem_Malloc(n * sizeof(Py_ssize_t))
    if p == NULL:
        raise MemoryError()
    return p


cdef signed char* _alloc_sc(Py_ssize_t n) except NULL:
    cdef signed char* p = <signed char*> PyMem_Malloc(n * sizeof(signed char))
    if p == NULL:
        raise MemoryError()
    return p


def star_scan(pow_tables, heads, members, kmax, lmin, bound, f_num):
    """See perdec._kernels_py.star_scan; identical contract and order."""
    cdef Py_ssize_t nb = len(heads)
    cdef Py_ssize_t size = len(f_num)
    cdef Py_ssize_t nt = len(pow_tables)
    cdef Py_ssize_t stride_k = size
    cdef Py_ssize_t stride_j = (bound + 1) * size
    cdef Py_ssize_t j, k, x, b, z, i, idx
    cdef int c_bound = bound
    cdef int c_lmin = lmin

    cdef Py_ssize_t* tab = _alloc_sz(nt * stride_j)
    cdef Py_ssize_t* c_heads = NULL
    cdef Py_ssize_t* c_kmax = NULL
    cdef Py_ssize_t* mem_off = NULL
    cdef Py_ssize_t* mem_idx = NULL
    cdef long long* values = NULL
    cdef signed char* memo = NULL
    cdef Py_ssize_t* kvec = NULL
    cdef Py_ssize_t* head_tab = NULL
    cdef Py_ssize_t* scratch = NULL
    cdef Py_ssize_t total_members = 0
    try:
        for j in range(nt):
            rows = pow_tables[j]
            for k in range(bound + 1):
                row = rows[k]
                for x in range(size):
                    tab[j * stride_j + k * stride_k + x] = row[x]
        c_heads = _alloc_sz(nb)
        c_kmax = _alloc_sz(nb)
        mem_off = _alloc_sz(nb + 1)
        for b in range(nb):
            c_heads[b] = heads[b]
            c_kmax[b] = kmax[b]
            total_members += len(members[b])
        mem_idx = _alloc_sz(total_members if total_members else 1)
        mem_off[0] = 0
        idx = 0
        for b in range(nb):
            for i in members[b]:
                mem_idx[idx] = i
                idx += 1
            mem_off[b + 1] = idx
        values = _alloc_ll(size)
        for x in range(size):
            values[x] = f_num[x]
        # memo[(b*(bound+1) + k)*size + z]: -1 unknown, 0 false, 1 true
        memo = _alloc_sc(nb * (bound + 1) * size if nb else 1)
        for idx in range(nb * (bound + 1) * size):
            memo[idx] = -1
        kvec = _alloc_sz(nb if nb else 1)
        head_tab = _alloc_sz(nb if nb else 1)
        scratch = _alloc_sz(size if size else 1)
        for idx in range(size):
            scratch[idx] = 0
        return _star_loop(tab, stride_j, stride_k, c_heads, c_kmax, mem_off,
                          mem_idx, values, memo, kvec, head_tab, scratch,
                          nb, size, c_bound, c_lmin)
    finally:
        PyMem_Free(tab)
        PyMem_Free(c_heads)
        PyMem_Free(c_kmax)
        PyMem_Free(mem_off)
        PyMem_Free(mem_idx)
        PyMem_Free(values)
        PyMem_Free(memo)
        PyMem_Free(kvec)
        PyMem_Free(head_tab)
        PyMem_Free(scratch)


cdef _star_loop(Py_ssize_t* tab, Py_ssize_t stride_j, Py_ssize_t stride_k,
                Py_ssize_t* heads, Py_ssize_t* kmax, Py_ssize_t* mem_off,
                Py_ssize_t* mem_idx, long long* values, signed char* memo,
                Py_ssize_t* kvec, Py_ssize_t* head_tab, Py_ssize_t* scratch,
                Py_ssize_t nb, Py_ssize_t size, int bound, int lmin):
    cdef Py_ssize_t b, z, pos, mask, w, applied, bits
    cdef Py_ssize_t stamp = 0
    cdef long long value
    cdef bint gated, done
    # nb == 0 still scans once with the empty exponent vector, matching
    # itertools.product in the pure twin
    for b in range(nb):
        kvec[b] = 1
    while True:
        for b in range(nb):
            head_tab[b] = heads[b] * stride_j + kvec[b] * stride_k
        for z in range(size):
            gated = True
            for b in range(nb):
                if mem_off[b + 1] > mem_off[b] and not _premise(
                        tab, stride_j, stride_k, heads, mem_off, mem_idx,
                        memo, scratch, &stamp, b, kvec[b], z, size, bound,
                        lmin):
                    gated = False
                    break
            if not gated:
                continue
            value = 0
            for mask in range(1 << nb):
                w = z
                bits = mask
                b = 0
                applied = 0
                while bits:
                    if bits & 1:
                        w = tab[head_tab[b] + w]
                        applied += 1
                    bits >>= 1
                    b += 1
                if (nb - applied) & 1:
                    value -= values[w]
                else:
                    value += values[w]
            if value != 0:
                return (tuple([kvec[b] for b in range(nb)]), z, value)
        # odometer: last block advances fastest, mirroring itertools.product
        done = True
        for pos in range(nb - 1, -1, -1):
            if kvec[pos] < kmax[pos]:
                kvec[pos] += 1
                for b in range(pos + 1, nb):
                    kvec[b] = 1
                done = False
                break
        if done:
            return None


cdef bint _premise(Py_ssize_t* tab, Py_ssize_t stride_j, Py_ssize_t stride_k,
                   Py_ssize_t* heads, Py_ssize_t* mem_off, Py_ssize_t* mem_idx,
                   signed char* memo, Py_ssize_t* scratch, Py_ssize_t* stamp,
                   Py_ssize_t b, Py_ssize_t k, Py_ssize_t z,
                   Py_ssize_t size, int bound, int lmin):
    cdef Py_ssize_t key = (b * (bound + 1) + k) * size + z
    cdef signed char cached = memo[key]
    if cached >= 0:
        return cached == 1
    cdef Py_ssize_t head_base = heads[b] * stride_j + k * stride_k
    cdef Py_ssize_t m, i, base
    cdef int l, l2
    cdef bint ok = True, found
    for m in range(mem_off[b], mem_off[b + 1]):
        i = mem_idx[m]
        base = i * stride_j
        # stamped scratch marks the reachable targets i^l2 z for this member
        stamp[0] += 1
        for l2 in range(lmin, bound + 1):
            scratch[tab[base + l2 * stride_k + z]] = stamp[0]
        found = False
        for l in range(lmin, bound + 1):
            if scratch[tab[head_base + tab[base + l * stride_k + z]]] == stamp[0]:
                found = True
                break
        if not found:
            ok = False
            break
    memo[key] = 1 if ok else 0
    return ok


def compat_scan(pow_a, pow_b, f_num, bound, value_on_a):
    """See perdec._kernels_py.compat_scan; identical contract and order."""
    cdef Py_ssize_t size = len(f_num)
    cdef Py_ssize_t stride = size
    cdef Py_ssize_t x, k, n, total, base, p
    cdef int c_bound = bound
    cdef bint on_a = bool(value_on_a)
    cdef long long v
    cdef Py_ssize_t* ta = _alloc_sz((bound + 1) * size)
    cdef Py_ssize_t* tb = NULL
    cdef long long* values = NULL
    cdef Py_ssize_t* first_k = NULL
    cdef Py_ssize_t* first_n = NULL
    cdef long long* first_v = NULL
    cdef signed char* seen = NULL
    try:
        for k in range(bound + 1):
            row = pow_a[k]
            for x in range(size):
                ta[k * stride + x] = row[x]
        tb = _alloc_sz((bound + 1) * size)
        for k in range(bound + 1):
            row = pow_b[k]
            for x in range(size):
                tb[k * stride + x] = row[x]
        values = _alloc_ll(size)
        for x in range(size):
            values[x] = f_num[x]
        first_k = _alloc_sz(size)
        first_n = _alloc_sz(size)
        first_v = _alloc_ll(size)
        seen = _alloc_sc(size)
        for x in range(size):
            for p in range(size):
                seen[p] = 0
            for total in range(2 * c_bound + 1):
                k = total - c_bound
                if k < 0:
                    k = 0
                while k <= (total if total < c_bound else c_bound):
                    n = total - k
                    base = tb[n * stride + x]
                    p = ta[k * stride + base]
                    if on_a:
                        v = values[ta[k * stride + x]]
                    else:
                        v = values[base]
                    if not seen[p]:
                        seen[p] = 1
                        first_k[p] = k
                        first_n[p] = n
                        first_v[p] = v
                    elif first_v[p] != v:
                        return (x, k, n, first_k[p], first_n[p], v, first_v[p])
                    k += 1
        return None
    finally:
        PyMem_Free(ta)
        PyMem_Free(tb)
        PyMem_Free(values)
        PyMem_Free(first_k)
        PyMem_Free(first_n)
        PyMem_Free(seen)
        PyMem_Free(first_v)
