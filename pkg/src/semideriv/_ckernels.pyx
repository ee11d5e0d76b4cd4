# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled matrix kernels. Flat row-major tuples in, tuples out."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free


def matmul_maxmin(tuple a, tuple b, Py_ssize_t n):
    cdef Py_ssize_t nn = n * n, i, j, k
    cdef long x, y, m, best
    cdef long *ca = <long *> PyMem_Malloc(2 * nn * sizeof(long))
    if ca == NULL:
        raise MemoryError()
    cdef long *cb = ca + nn
    try:
        for i in range(nn):
            ca[i] = a[i]
            cb[i] = b[i]
        out = [None] * nn
        for i in range(n):
            for j in range(n):
                best = 0
                for k in range(n):
                    x = ca[i * n + k]
                    y = cb[k * n + j]
                    m = x if x < y else y
                    if m > best:
                        best = m
                out[i * n + j] = best
        return tuple(out)
    finally:
        PyMem_Free(ca)


def matadd_maxmin(tuple a, tuple b):
    cdef Py_ssize_t i, nn = len(a)
    cdef long x, y
    out = [None] * nn
    for i in range(nn):
        x = a[i]
        y = b[i]
        out[i] = x if x > y else y
    return tuple(out)


def matmul_sumprod(tuple a, tuple b, Py_ssize_t n):
    # object arithmetic: arbitrary-precision ints and polynomials
    cdef Py_ssize_t i, j, k
    out = [None] * (n * n)
    for i in range(n):
        for j in range(n):
            s = a[i * n] * b[j]
            for k in range(1, n):
                s = s + a[i * n + k] * b[k * n + j]
            out[i * n + j] = s
    return tuple(out)


def matadd_sumprod(tuple a, tuple b):
    cdef Py_ssize_t i, nn = len(a)
    out = [None] * nn
    for i in range(nn):
        out[i] = a[i] + b[i]
    return tuple(out)


def matmul_maxplus(tuple a, tuple b, Py_ssize_t n, object neginf):
    cdef Py_ssize_t i, j, k
    out = [None] * (n * n)
    for i in range(n):
        for j in range(n):
            best = neginf
            for k in range(n):
                x = a[i * n + k]
                y = b[k * n + j]
                if x is neginf or y is neginf:
                    continue
                s = x + y
                if best is neginf or s > best:
                    best = s
            out[i * n + j] = best
    return tuple(out)


def matadd_maxplus(tuple a, tuple b, object neginf):
    cdef Py_ssize_t i, nn = len(a)
    out = [None] * nn
    for i in range(nn):
        x = a[i]
        y = b[i]
        if x is neginf:
            out[i] = y
        elif y is neginf or x >= y:
            out[i] = x
        else:
            out[i] = y
    return tuple(out)


def matmul_generic(tuple a, tuple b, Py_ssize_t n, object add, object mul, object zero):
    cdef Py_ssize_t i, j, k
    out = [None] * (n * n)
    for i in range(n):
        for j in range(n):
            s = zero
            for k in range(n):
                s = add(s, mul(a[i * n + k], b[k * n + j]))
            out[i * n + j] = s
    return tuple(out)


def matadd_generic(tuple a, tuple b, object add):
    cdef Py_ssize_t i, nn = len(a)
    out = [None] * nn
    for i in range(nn):
        out[i] = add(a[i], b[i])
    return tuple(out)
