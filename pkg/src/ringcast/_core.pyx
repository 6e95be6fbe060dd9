# cython: language_level=3
"""Compiled kernels; drop-in replacement for ``ringcast._purepy``.

Integer kernels run on int64. The caller (``ringcast.kernels``) checks that
scaled costs cannot overflow before dispatching here.
"""

import numpy as np

from libc.stdlib cimport malloc, free


def profile_table(costs, int n):
    """Social cost, potential and weak-Nash flag for all 2^n profile masks."""
    cdef long long[::1] c = np.asarray(costs, dtype=np.int64)
    cdef int m = n + 1
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    social_arr = np.zeros(size, dtype=np.int64)
    pot_arr = np.zeros(size, dtype=np.int64)
    nash_arr = np.zeros(size, dtype=np.uint8)
    hpot_arr = np.zeros((m, n + 1), dtype=np.int64)
    cdef long long[::1] social = social_arr
    cdef long long[::1] pot = pot_arr
    cdef unsigned char[::1] nash = nash_arr
    cdef long long[:, ::1] hpot = hpot_arr
    cdef int e, k, i
    cdef long long acc
    for e in range(m):
        acc = 0
        for k in range(1, n + 1):
            acc += c[e] // k
            hpot[e, k] = acc

    cdef long long *loads = <long long *> malloc(m * sizeof(long long))
    cdef long long *cur_pre = <long long *> malloc(m * sizeof(long long))
    cdef long long *plus_pre = <long long *> malloc(m * sizeof(long long))
    cdef long long *rights_before = <long long *> malloc((n + 1) * sizeof(long long))
    cdef long long *lefts_from = <long long *> malloc((n + 2) * sizeof(long long))
    if not loads or not cur_pre or not plus_pre or not rights_before or not lefts_from:
        free(loads); free(cur_pre); free(plus_pre); free(rights_before); free(lefts_from)
        raise MemoryError()

    cdef unsigned long long mask
    cdef long long soc, phi, acc_cur, acc_plus, current, alt, ld
    cdef bint ok
    try:
        with nogil:
            for mask in range(<unsigned long long>size):
                # rights_before[e]: RIGHT players with index < e
                # lefts_from[e]: LEFT players with index >= e
                rights_before[0] = 0
                for i in range(n):
                    rights_before[i + 1] = rights_before[i] + ((mask >> i) & 1)
                lefts_from[n] = 0
                for i in range(n - 1, -1, -1):
                    lefts_from[i] = lefts_from[i + 1] + (1 - ((mask >> i) & 1))
                soc = 0
                phi = 0
                acc_cur = 0
                acc_plus = 0
                for e in range(m):
                    ld = rights_before[e] + lefts_from[e]
                    loads[e] = ld
                    if ld:
                        soc += c[e]
                        acc_cur += c[e] // ld
                    phi += hpot[e, ld]
                    acc_plus += c[e] // (ld + 1)
                    cur_pre[e] = acc_cur
                    plus_pre[e] = acc_plus
                ok = True
                for i in range(n):
                    if (mask >> i) & 1:
                        current = acc_cur - cur_pre[i]
                        alt = plus_pre[i]
                    else:
                        current = cur_pre[i]
                        alt = acc_plus - plus_pre[i]
                    if alt < current:
                        ok = False
                        break
                social[mask] = soc
                pot[mask] = phi
                nash[mask] = ok
    finally:
        free(loads); free(cur_pre); free(plus_pre); free(rights_before); free(lefts_from)
    return social_arr, pot_arr, nash_arr


cdef void _play_int(const long long *c, int n, const long long *order, int count,
                    bint prefer_right, long long *loads, unsigned char *dirs,
                    long long *paid) noexcept nogil:
    cdef int t, e, p
    cdef long long left, right
    for e in range(n + 1):
        loads[e] = 0
    for t in range(count):
        p = <int>order[t]
        left = 0
        right = 0
        for e in range(p + 1):
            left += c[e] // (loads[e] + 1)
        for e in range(p + 1, n + 1):
            right += c[e] // (loads[e] + 1)
        if right < left or (right == left and prefer_right):
            for e in range(p + 1, n + 1):
                loads[e] += 1
            dirs[t] = 1
            paid[t] = right
        else:
            for e in range(p + 1):
                loads[e] += 1
            dirs[t] = 0
            paid[t] = left


cdef void _play_float(const double *c, int n, const long long *order, int count,
                      bint prefer_right, long long *loads, unsigned char *dirs,
                      double *paid) noexcept nogil:
    cdef int t, e, p
    cdef double left, right
    for e in range(n + 1):
        loads[e] = 0
    for t in range(count):
        p = <int>order[t]
        left = 0.0
        right = 0.0
        for e in range(p + 1):
            left += c[e] / (loads[e] + 1)
        for e in range(p + 1, n + 1):
            right += c[e] / (loads[e] + 1)
        if right < left or (right == left and prefer_right):
            for e in range(p + 1, n + 1):
                loads[e] += 1
            dirs[t] = 1
            paid[t] = right
        else:
            for e in range(p + 1):
                loads[e] += 1
            dirs[t] = 0
            paid[t] = left


def sequential_play(costs, order, bint prefer_right, bint exact):
    """Myopic arrivals. Returns (directions, myopic costs) indexed by arrival."""
    cdef int n = len(costs) - 1
    cdef long long[::1] o = np.asarray(order, dtype=np.int64)
    cdef int count = o.shape[0]
    loads_arr = np.zeros(n + 1, dtype=np.int64)
    dirs_arr = np.zeros(max(count, 1), dtype=np.uint8)
    cdef long long[::1] loads = loads_arr
    cdef unsigned char[::1] dirs = dirs_arr
    cdef long long[::1] ci, paid_i
    cdef double[::1] cf, paid_f
    if exact:
        ci = np.asarray(costs, dtype=np.int64)
        paid_arr = np.zeros(max(count, 1), dtype=np.int64)
        paid_i = paid_arr
        with nogil:
            _play_int(&ci[0], n, &o[0] if count else NULL, count, prefer_right,
                      &loads[0], &dirs[0], &paid_i[0])
    else:
        cf = np.asarray(costs, dtype=np.float64)
        paid_arr = np.zeros(max(count, 1), dtype=np.float64)
        paid_f = paid_arr
        with nogil:
            _play_float(&cf[0], n, &o[0] if count else NULL, count, prefer_right,
                        &loads[0], &dirs[0], &paid_f[0])
    return dirs_arr[:count].tolist(), paid_arr[:count].tolist()


def sequential_batch(costs, orders, bint prefer_right):
    """Network cost (scaled) reached by each arrival order; exact integers only."""
    cdef long long[::1] c = np.asarray(costs, dtype=np.int64)
    cdef int n = c.shape[0] - 1
    cdef long long[:, ::1] o = np.ascontiguousarray(np.asarray(orders, dtype=np.int64).reshape(-1, n))
    cdef Py_ssize_t rows = o.shape[0]
    out_arr = np.zeros(rows, dtype=np.int64)
    cdef long long[::1] out = out_arr
    loads_arr = np.zeros(n + 1, dtype=np.int64)
    dirs_arr = np.zeros(n, dtype=np.uint8)
    paid_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] loads = loads_arr
    cdef unsigned char[::1] dirs = dirs_arr
    cdef long long[::1] paid = paid_arr
    cdef Py_ssize_t r
    cdef int e
    cdef long long total
    with nogil:
        for r in range(rows):
            _play_int(&c[0], n, &o[r, 0], n, prefer_right, &loads[0], &dirs[0], &paid[0])
            total = 0
            for e in range(n + 1):
                if loads[e]:
                    total += c[e]
            out[r] = total
    return out_arr.tolist()
