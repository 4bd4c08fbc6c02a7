# Compiled twins of eventcast._kernels_py; both backends must produce
# bit-identical outputs for the same inputs.

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t splitmix64_next(uint64_t *state) {
        uint64_t z = (*state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    """
    cnp.uint64_t splitmix64_next(cnp.uint64_t *state) nogil


def trace_table(cnp.int32_t[:, ::1] table, cnp.int32_t[::1] symbols, int start):
    """State after each symbol when stepping `table` from `start`."""
    cdef Py_ssize_t n = symbols.shape[0]
    out = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] out_view = out
    cdef int state = start
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            state = table[state, symbols[i]]
            out_view[i] = state
    return out


def sample_symbols(cnp.float64_t[:, ::1] cdf, int context, cnp.uint64_t state, Py_ssize_t length):
    """Draw `length` symbol indices from per-context cumulative rows."""
    cdef Py_ssize_t n_contexts = cdf.shape[0]
    cdef Py_ssize_t n_symbols = cdf.shape[1]
    out = np.empty(length, dtype=np.int32)
    cdef cnp.int32_t[::1] out_view = out
    cdef Py_ssize_t i, sym
    cdef Py_ssize_t c = context
    cdef double u
    cdef double unit = 1.0 / 9007199254740992.0  # 2**-53
    with nogil:
        for i in range(length):
            u = (splitmix64_next(&state) >> 11) * unit
            sym = 0
            while sym < n_symbols - 1 and u >= cdf[c, sym]:
                sym += 1
            out_view[i] = <cnp.int32_t>sym
            c = (c * n_symbols + sym) % n_contexts
    return out
