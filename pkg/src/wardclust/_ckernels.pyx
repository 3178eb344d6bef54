# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled agglomeration kernels. Contract mirrors ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, INFINITY

cnp.import_array()

cdef double ROOT_CLAMP = 1e-12


class KernelError(ValueError):
    pass


cdef inline Py_ssize_t cidx(Py_ssize_t i, Py_ssize_t j, Py_ssize_t n) nogil:
    # caller guarantees i < j
    return n * i - (i * (i + 1)) // 2 + (j - i - 1)


cdef inline double getd(double[::1] d, Py_ssize_t i, Py_ssize_t j, Py_ssize_t n) nogil:
    if i < j:
        return d[cidx(i, j, n)]
    return d[cidx(j, i, n)]


cdef inline void setd(double[::1] d, Py_ssize_t i, Py_ssize_t j, Py_ssize_t n, double v) nogil:
    if i < j:
        d[cidx(i, j, n)] = v
    else:
        d[cidx(j, i, n)] = v


cdef inline double update(int code, double d_ik, double d_jk, double d_ij,
                          double w_i, double w_j, double w_k, int* bad) nogil:
    cdef double s, sq, scale
    if code == 0:
        return ((w_i + w_k) * d_ik + (w_j + w_k) * d_jk - w_k * d_ij) / (w_i + w_j + w_k)
    if code == 1:
        sq = ((w_i + w_k) * (d_ik * d_ik) + (w_j + w_k) * (d_jk * d_jk) - w_k * (d_ij * d_ij)) / (w_i + w_j + w_k)
        if sq < 0.0:
            scale = d_ik
            if d_jk > scale:
                scale = d_jk
            if d_ij > scale:
                scale = d_ij
            scale = scale * scale
            if scale < 1.0:
                scale = 1.0
            if sq < -ROOT_CLAMP * scale:
                bad[0] = 1
            return 0.0
        return sqrt(sq)
    if code == 2:
        return 0.5 * d_ik + 0.5 * d_jk + 0.0 * d_ij + -0.5 * fabs(d_ik - d_jk)
    if code == 3:
        return 0.5 * d_ik + 0.5 * d_jk + 0.0 * d_ij + 0.5 * fabs(d_ik - d_jk)
    if code == 4:
        s = w_i + w_j
        return w_i / s * d_ik + w_j / s * d_jk + 0.0 * d_ij + 0.0 * fabs(d_ik - d_jk)
    if code == 5:
        s = w_i + w_j
        return w_i / s * d_ik + w_j / s * d_jk + (-w_i * w_j / (s * s)) * d_ij + 0.0 * fabs(d_ik - d_jk)
    return 0.5 * d_ik + 0.5 * d_jk + -0.25 * d_ij + 0.0 * fabs(d_ik - d_jk)


cdef int merge_into(double[::1] d, Py_ssize_t n, int code, double[::1] size,
                    unsigned char[::1] alive, Py_ssize_t i, Py_ssize_t j) nogil:
    # writes d(i+j, k) into slot i for every live k, kills slot j
    cdef Py_ssize_t k
    cdef double d_ij = getd(d, i, j, n)
    cdef int bad = 0
    for k in range(n):
        if not alive[k] or k == i or k == j:
            continue
        setd(d, i, k, n, update(code, getd(d, i, k, n), getd(d, j, k, n), d_ij,
                                size[i], size[j], size[k], &bad))
    alive[j] = 0
    size[i] = size[i] + size[j]
    return bad


def naive(d_in, Py_ssize_t n, int code, masses):
    if code < 0 or code > 6:
        raise KernelError(f"unknown method code {code}")
    cdef double[::1] d = np.array(d_in, dtype=np.float64)
    cdef double[::1] size = np.array(masses, dtype=np.float64)
    cdef unsigned char[::1] alive = np.ones(n, dtype=np.uint8)
    cdef cnp.int64_t[::1] node = np.arange(n, dtype=np.int64)
    out_a = np.empty(n - 1, dtype=np.int64)
    out_b = np.empty(n - 1, dtype=np.int64)
    out_h = np.empty(n - 1, dtype=np.float64)
    out_s = np.empty(n - 1, dtype=np.float64)
    cdef cnp.int64_t[::1] oa = out_a, ob = out_b
    cdef double[::1] oh = out_h, osz = out_s
    cdef Py_ssize_t t, i, j, bi, bj
    cdef double h, v
    cdef cnp.int64_t lo, hi, blo, bhi
    cdef int bad = 0
    with nogil:
        for t in range(n - 1):
            h = INFINITY
            bi = -1
            bj = -1
            blo = 0
            bhi = 0
            for i in range(n):
                if not alive[i]:
                    continue
                for j in range(i + 1, n):
                    if not alive[j]:
                        continue
                    v = d[cidx(i, j, n)]
                    if node[i] < node[j]:
                        lo = node[i]
                        hi = node[j]
                    else:
                        lo = node[j]
                        hi = node[i]
                    if v < h or (v == h and (lo < blo or (lo == blo and hi < bhi))):
                        h = v
                        bi = i
                        bj = j
                        blo = lo
                        bhi = hi
            if merge_into(d, n, code, size, alive, bi, bj):
                bad = 1
                break
            node[bi] = n + t
            oa[t] = bi
            ob[t] = bj
            oh[t] = h
            osz[t] = size[bi]
    if bad:
        raise KernelError("negative value under the ward.D2 root: input is not Euclidean")
    return out_a, out_b, out_h, out_s


def nnchain(d_in, Py_ssize_t n, int code, masses):
    if code < 0 or code > 6:
        raise KernelError(f"unknown method code {code}")
    cdef double[::1] d = np.array(d_in, dtype=np.float64)
    cdef double[::1] size = np.array(masses, dtype=np.float64)
    cdef unsigned char[::1] alive = np.ones(n, dtype=np.uint8)
    cdef Py_ssize_t[::1] chain = np.empty(n, dtype=np.intp)
    out_a = np.empty(n - 1, dtype=np.int64)
    out_b = np.empty(n - 1, dtype=np.int64)
    out_h = np.empty(n - 1, dtype=np.float64)
    out_s = np.empty(n - 1, dtype=np.float64)
    cdef cnp.int64_t[::1] oa = out_a, ob = out_b
    cdef double[::1] oh = out_h, osz = out_s
    cdef Py_ssize_t t, k, x, y, prev, i, j, top = 0, lowest = 0
    cdef double best, v
    cdef int bad = 0
    with nogil:
        for t in range(n - 1):
            if top == 0:
                while not alive[lowest]:
                    lowest += 1
                chain[0] = lowest
                top = 1
            while True:
                x = chain[top - 1]
                prev = chain[top - 2] if top > 1 else -1
                best = INFINITY
                y = -1
                for k in range(n):
                    if k == x or not alive[k]:
                        continue
                    v = getd(d, x, k, n)
                    if v < best:
                        best = v
                        y = k
                if prev >= 0 and getd(d, x, prev, n) <= best:
                    y = prev
                if y == prev:
                    break
                chain[top] = y
                top += 1
            top -= 2
            if x < y:
                i = x
                j = y
            else:
                i = y
                j = x
            oh[t] = getd(d, i, j, n)
            if merge_into(d, n, code, size, alive, i, j):
                bad = 1
                break
            oa[t] = i
            ob[t] = j
            osz[t] = size[i]
    if bad:
        raise KernelError("negative value under the ward.D2 root: input is not Euclidean")
    return out_a, out_b, out_h, out_s
