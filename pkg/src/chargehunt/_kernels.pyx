# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise commutator sweep; mirrors ``_kernels_py.pair_commutators``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef extern from *:
    """
    static inline int ch_popcount(unsigned long long v) { return __builtin_popcountll(v); }
    static inline int ch_ctz(unsigned long long v) { return __builtin_ctzll(v); }
    static inline int ch_bitlen(unsigned long long v) { return v ? 64 - __builtin_clzll(v) : 0; }
    """
    int ch_popcount(unsigned long long v) nogil
    int ch_ctz(unsigned long long v) nogil
    int ch_bitlen(unsigned long long v) nogil


def pair_commutators(cx, cz, clen, canchor, hx, hz, hlen, hanchor):
    cdef uint64_t[::1] vcx = np.ascontiguousarray(cx, dtype=np.uint64)
    cdef uint64_t[::1] vcz = np.ascontiguousarray(cz, dtype=np.uint64)
    cdef int64_t[::1] vcl = np.ascontiguousarray(clen, dtype=np.int64)
    cdef int64_t[::1] vca = np.ascontiguousarray(canchor, dtype=np.int64)
    cdef uint64_t[::1] vhx = np.ascontiguousarray(hx, dtype=np.uint64)
    cdef uint64_t[::1] vhz = np.ascontiguousarray(hz, dtype=np.uint64)
    cdef int64_t[::1] vhl = np.ascontiguousarray(hlen, dtype=np.int64)
    cdef int64_t[::1] vha = np.ascontiguousarray(hanchor, dtype=np.int64)
    cdef Py_ssize_t nc = vcx.shape[0], nh = vhx.shape[0]
    cdef Py_ssize_t cap = nc * nh
    if cap == 0:
        cap = 1

    col_a = np.empty(cap, dtype=np.int64)
    term_a = np.empty(cap, dtype=np.int64)
    rx_a = np.empty(cap, dtype=np.uint64)
    rz_a = np.empty(cap, dtype=np.uint64)
    ra_a = np.empty(cap, dtype=np.int64)
    rl_a = np.empty(cap, dtype=np.int64)
    sg_a = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] col = col_a
    cdef int64_t[::1] term = term_a
    cdef uint64_t[::1] orx = rx_a
    cdef uint64_t[::1] orz = rz_a
    cdef int64_t[::1] ora = ra_a
    cdef int64_t[::1] orl = rl_a
    cdef int64_t[::1] osg = sg_a

    cdef Py_ssize_t i, j, out = 0
    cdef int64_t a1, e1, a2, e2, base
    cdef uint64_t px, pz, qx, qz, x, z, s
    cdef int m, tz
    with nogil:
        for i in range(nc):
            a1 = vca[i]
            e1 = a1 + vcl[i] - 1
            for j in range(nh):
                a2 = vha[j]
                e2 = a2 + vhl[j] - 1
                if a2 > e1 or a1 > e2:
                    continue
                if a1 <= a2:
                    base = a1
                    px = vcx[i]
                    pz = vcz[i]
                    qx = vhx[j] << (a2 - a1)
                    qz = vhz[j] << (a2 - a1)
                else:
                    base = a2
                    px = vcx[i] << (a1 - a2)
                    pz = vcz[i] << (a1 - a2)
                    qx = vhx[j]
                    qz = vhz[j]
                if not (ch_popcount((px & qz) ^ (pz & qx)) & 1):
                    continue
                x = px ^ qx
                z = pz ^ qz
                m = (ch_popcount(px & pz) + ch_popcount(qx & qz)
                     + 2 * ch_popcount(pz & qx) - ch_popcount(x & z)) & 3
                s = x | z
                tz = ch_ctz(s)
                x >>= tz
                z >>= tz
                col[out] = i
                term[out] = j
                orx[out] = x
                orz[out] = z
                ora[out] = base + tz
                orl[out] = ch_bitlen(x | z)
                osg[out] = 1 if m == 1 else -1
                out += 1
    return (col_a[:out].copy(), term_a[:out].copy(), rx_a[:out].copy(), rz_a[:out].copy(),
            ra_a[:out].copy(), rl_a[:out].copy(), sg_a[:out].copy())
