# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: distance tables, nearest-center assignment,
centroid updates and the row-wise shrinkage used by the SON solver."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

NAME = "cython"


def pairwise_sq_dists(object X_in, object C_in):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] X = np.ascontiguousarray(X_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(C_in, dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0], k = C.shape[0], d = X.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n, k), dtype=np.float64)
    cdef Py_ssize_t i, j, c
    cdef double acc, diff
    for i in range(n):
        for c in range(k):
            acc = 0.0
            for j in range(d):
                diff = X[i, j] - C[c, j]
                acc += diff * diff
            out[i, c] = acc
    return out


def assign_nearest(object X_in, object C_in):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] X = np.ascontiguousarray(X_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(C_in, dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0], k = C.shape[0], d = X.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] labels = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i, j, c, best
    cdef double acc, diff, best_d
    for i in range(n):
        best = 0
        best_d = 0.0
        for c in range(k):
            acc = 0.0
            for j in range(d):
                diff = X[i, j] - C[c, j]
                acc += diff * diff
            if c == 0 or acc < best_d:
                best_d = acc
                best = c
        labels[i] = best
    return labels


def min_sq_dists(object X_in, object C_in):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] X = np.ascontiguousarray(X_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(C_in, dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0], k = C.shape[0], d = X.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, j, c
    cdef double acc, diff, best_d
    for i in range(n):
        best_d = 0.0
        for c in range(k):
            acc = 0.0
            for j in range(d):
                diff = X[i, j] - C[c, j]
                acc += diff * diff
            if c == 0 or acc < best_d:
                best_d = acc
        out[i] = best_d
    return out


def update_centers(object X_in, object labels_in, Py_ssize_t k):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] X = np.ascontiguousarray(X_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] labels = np.ascontiguousarray(labels_in, dtype=np.int64)
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] centers = np.zeros((k, d), dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t i, j, c
    for i in range(n):
        c = labels[i]
        counts[c] += 1
        for j in range(d):
            centers[c, j] += X[i, j]
    for c in range(k):
        if counts[c] > 0:
            for j in range(d):
                centers[c, j] /= counts[c]
    return centers, counts


def block_soft_threshold(object V_in, double t):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] V = np.ascontiguousarray(V_in, dtype=np.float64)
    cdef Py_ssize_t n = V.shape[0], d = V.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n, d), dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double acc, nrm, scale
    for i in range(n):
        acc = 0.0
        for j in range(d):
            acc += V[i, j] * V[i, j]
        nrm = sqrt(acc)
        if nrm > t:
            scale = 1.0 - t / nrm
            for j in range(d):
                out[i, j] = V[i, j] * scale
    return out
