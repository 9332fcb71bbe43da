# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled inner loop for truncated Taylor (jet) multiplication.

The multiplication of two jets is a sparse bilinear convolution driven by a
precomputed triple table (i, j, k): out[k] += a[i] * b[j].  This one loop
dominates the runtime of every curvature sweep, so it lives in C.
"""

BACKEND = "compiled"


def mul_into(double[::1] out, const double[::1] a, const double[::1] b,
             const int[::1] ti, const int[::1] tj, const int[::1] tk):
    cdef Py_ssize_t m
    cdef Py_ssize_t n = ti.shape[0]
    for m in range(n):
        out[tk[m]] += a[ti[m]] * b[tj[m]]
