# cython: language_level=3
"""Compiled assignment sweep. Must stay behaviorally identical to _pykernel."""
import numpy as np
cimport numpy as cnp
from numpy cimport int32_t

cnp.import_array()


def sweep(const int32_t[:, ::1] code, const int32_t[::1] tables,
          const int32_t[::1] leaf_states, int n_states, int n_slots):
    cdef Py_ssize_t n_ops = code.shape[0]
    cdef Py_ssize_t n_values = leaf_states.shape[0]
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t a, op, j, sp, k
    cdef int32_t kind, n
    cdef Py_ssize_t idx
    for k in range(n_slots):
        total *= n_values

    out = np.empty(total, dtype=np.int32)
    cdef int32_t[::1] res = out
    cdef int32_t[::1] stack = np.empty(max(n_ops, 1), dtype=np.int32)
    cdef int32_t[::1] digits = np.zeros(max(n_slots, 1), dtype=np.int32)

    with nogil:
        for a in range(total):
            sp = 0
            for op in range(n_ops):
                kind = code[op, 0]
                if kind == 0:
                    stack[sp] = code[op, 1]
                    sp += 1
                elif kind == 1:
                    stack[sp] = leaf_states[digits[code[op, 1]]]
                    sp += 1
                else:
                    n = code[op, 1]
                    idx = 0
                    for j in range(sp - n, sp):
                        idx = idx * n_states + stack[j]
                    sp -= n
                    stack[sp] = tables[code[op, 2] + idx]
                    sp += 1
            res[a] = stack[0]
            k = n_slots - 1
            while k >= 0:
                digits[k] += 1
                if digits[k] < n_values:
                    break
                digits[k] = 0
                k -= 1
    return out
