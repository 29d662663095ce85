# cython: language_level=3
"""Compiled twins of the kernels in ``_pykernels``."""
import numpy as np

from libc.math cimport log
from libc.stdlib cimport malloc, free

NAME = "cython"

cdef double SHIFT_THRESHOLD = 10.0
cdef double[10] BERNOULLI
BERNOULLI[:] = [
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0,
    -174611.0 / 330.0,
]


cdef double _psi(int order, double z) noexcept nogil:
    cdef double shift = 0.0
    cdef double zi2, power, acc = 0.0
    cdef int k
    while z < SHIFT_THRESHOLD:
        if order == 0:
            shift -= 1.0 / z
        elif order == 1:
            shift += 1.0 / (z * z)
        else:
            shift -= 2.0 / (z * z * z)
        z += 1.0
    zi2 = 1.0 / (z * z)
    power = zi2
    for k in range(1, 11):
        if order == 0:
            acc += BERNOULLI[k - 1] / (2 * k) * power
        elif order == 1:
            acc += BERNOULLI[k - 1] * power
        else:
            acc += (2 * k + 1) * BERNOULLI[k - 1] * power
        power *= zi2
    if order == 0:
        return log(z) - 0.5 / z - acc + shift
    if order == 1:
        return (1.0 + 0.5 / z + acc) / z + shift
    return -(1.0 + 1.0 / z + acc) * zi2 + shift


def polygamma(int order, z):
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=np.float64).ravel()
    out = np.empty(zv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(zv.shape[0]):
            ov[i] = _psi(order, zv[i])
    return out


def h_family(int order, u, double total):
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64).ravel()
    out = np.empty(uv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double x, top
    with nogil:
        top = _psi(0, total + 1.0)
        for i in range(uv.shape[0]):
            x = total * uv[i] + 1.0
            if order == 0:
                ov[i] = uv[i] * (top - _psi(0, x))
            elif order == 1:
                ov[i] = top - _psi(0, x) - uv[i] * total * _psi(1, x)
            else:
                ov[i] = -2.0 * total * _psi(1, x) - uv[i] * total * total * _psi(2, x)
    return out


def strong_exact_mask(dom, ea, eb, int m):
    cdef const unsigned char[:, ::1] dv = np.ascontiguousarray(dom, dtype=np.uint8)
    cdef const long long[::1] av = np.ascontiguousarray(ea, dtype=np.int64)
    cdef const long long[::1] bv = np.ascontiguousarray(eb, dtype=np.int64)
    cdef Py_ssize_t n_edges = av.shape[0]
    out = np.zeros(n_edges, dtype=bool)
    cdef unsigned char[::1] ov = out.view(np.uint8)
    cdef unsigned char *adj = <unsigned char *> malloc(m * m)
    cdef unsigned char *seen = <unsigned char *> malloc(m)
    cdef int *queue = <int *> malloc(m * sizeof(int))
    cdef Py_ssize_t e, f, i
    cdef int head, tail, v, w, target
    if adj == NULL or seen == NULL or queue == NULL:
        free(adj); free(seen); free(queue)
        raise MemoryError()
    try:
        with nogil:
            for e in range(n_edges):
                for i in range(m * m):
                    adj[i] = 1
                for i in range(m):
                    adj[i * m + i] = 0
                    seen[i] = 0
                for f in range(n_edges):
                    if f == e or dv[e, f]:
                        adj[av[f] * m + bv[f]] = 0
                        adj[bv[f] * m + av[f]] = 0
                target = <int> bv[e]
                head = 0
                tail = 1
                queue[0] = <int> av[e]
                seen[av[e]] = 1
                while head < tail and not seen[target]:
                    v = queue[head]
                    head += 1
                    for w in range(m):
                        if adj[v * m + w] and not seen[w]:
                            seen[w] = 1
                            queue[tail] = w
                            tail += 1
                ov[e] = 0 if seen[target] else 1
    finally:
        free(adj); free(seen); free(queue)
    return out
