# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; same API as ``_pykernels``."""

from libc.stdlib cimport malloc, free


cdef int _csr(int n, const int[:] src, const int[:] dst, int* start, int* adj) nogil:
    cdef Py_ssize_t m = src.shape[0]
    cdef Py_ssize_t i
    cdef int u
    for i in range(n + 1):
        start[i] = 0
    for i in range(m):
        start[src[i] + 1] += 1
    for i in range(n):
        start[i + 1] += start[i]
    cdef int* fill = <int*> malloc((n + 1) * sizeof(int))
    if fill == NULL:
        return -1
    for i in range(n):
        fill[i] = start[i]
    for i in range(m):
        u = src[i]
        adj[fill[u]] = dst[i]
        fill[u] += 1
    free(fill)
    return 0


def scc_labels(int n, const int[:] src, const int[:] dst):
    """Strongly connected component label per node (iterative Tarjan)."""
    cdef Py_ssize_t m = src.shape[0]
    cdef int* start = <int*> malloc((n + 1) * sizeof(int))
    cdef int* adj = <int*> malloc((m + 1) * sizeof(int))
    cdef int* index = <int*> malloc((n + 1) * sizeof(int))
    cdef int* low = <int*> malloc((n + 1) * sizeof(int))
    cdef char* on_stack = <char*> malloc((n + 1) * sizeof(char))
    cdef int* label = <int*> malloc((n + 1) * sizeof(int))
    cdef int* stack = <int*> malloc((n + 1) * sizeof(int))
    cdef int* work_v = <int*> malloc((n + 1) * sizeof(int))
    cdef int* work_p = <int*> malloc((n + 1) * sizeof(int))
    cdef int sp = 0, wp = 0, counter = 0, n_comp = 0
    cdef int root, v, w, ptr, parent, i
    if (start == NULL or adj == NULL or index == NULL or low == NULL or on_stack == NULL
            or label == NULL or stack == NULL or work_v == NULL or work_p == NULL):
        raise MemoryError()
    try:
        with nogil:
            _csr(n, src, dst, start, adj)
            for i in range(n):
                index[i] = -1
                on_stack[i] = 0
                label[i] = -1
            for root in range(n):
                if index[root] != -1:
                    continue
                index[root] = counter
                low[root] = counter
                counter += 1
                stack[sp] = root
                sp += 1
                on_stack[root] = 1
                work_v[0] = root
                work_p[0] = start[root]
                wp = 1
                while wp > 0:
                    v = work_v[wp - 1]
                    ptr = work_p[wp - 1]
                    if ptr < start[v + 1]:
                        work_p[wp - 1] = ptr + 1
                        w = adj[ptr]
                        if index[w] == -1:
                            index[w] = counter
                            low[w] = counter
                            counter += 1
                            stack[sp] = w
                            sp += 1
                            on_stack[w] = 1
                            work_v[wp] = w
                            work_p[wp] = start[w]
                            wp += 1
                        elif on_stack[w] and index[w] < low[v]:
                            low[v] = index[w]
                        continue
                    wp -= 1
                    if wp > 0:
                        parent = work_v[wp - 1]
                        if low[v] < low[parent]:
                            low[parent] = low[v]
                    if low[v] == index[v]:
                        while True:
                            sp -= 1
                            w = stack[sp]
                            on_stack[w] = 0
                            label[w] = n_comp
                            if w == v:
                                break
                        n_comp += 1
        return [label[i] for i in range(n)]
    finally:
        free(start)
        free(adj)
        free(index)
        free(low)
        free(on_stack)
        free(label)
        free(stack)
        free(work_v)
        free(work_p)


def reachable(int n, const int[:] src, const int[:] dst, int origin):
    """0/1 flags of the nodes reachable from ``origin`` (origin included)."""
    cdef Py_ssize_t m = src.shape[0]
    cdef int* start = <int*> malloc((n + 1) * sizeof(int))
    cdef int* adj = <int*> malloc((m + 1) * sizeof(int))
    cdef int* todo = <int*> malloc((n + 1) * sizeof(int))
    out = bytearray(n)
    cdef unsigned char[:] seen = out
    cdef int top = 0, v, w, i
    if start == NULL or adj == NULL or todo == NULL:
        raise MemoryError()
    try:
        with nogil:
            _csr(n, src, dst, start, adj)
            seen[origin] = 1
            todo[0] = origin
            top = 1
            while top > 0:
                top -= 1
                v = todo[top]
                for i in range(start[v], start[v + 1]):
                    w = adj[i]
                    if not seen[w]:
                        seen[w] = 1
                        todo[top] = w
                        top += 1
        return out
    finally:
        free(start)
        free(adj)
        free(todo)


def reach_pairs(int n, const int[:] src, const int[:] dst, const int[:] origins, const int[:] goals):
    """For each query i: is goals[i] reachable from origins[i]?"""
    cdef Py_ssize_t m = src.shape[0]
    cdef Py_ssize_t nq = origins.shape[0]
    cdef int* start = <int*> malloc((n + 1) * sizeof(int))
    cdef int* adj = <int*> malloc((m + 1) * sizeof(int))
    cdef int* stamp = <int*> malloc((n + 1) * sizeof(int))
    cdef int* todo = <int*> malloc((n + 1) * sizeof(int))
    out = bytearray(nq)
    cdef unsigned char[:] res = out
    cdef Py_ssize_t q
    cdef int o, g, v, w, i, top, mark, found
    if start == NULL or adj == NULL or stamp == NULL or todo == NULL:
        raise MemoryError()
    try:
        with nogil:
            _csr(n, src, dst, start, adj)
            for i in range(n):
                stamp[i] = 0
            for q in range(nq):
                o = origins[q]
                g = goals[q]
                if o == g:
                    res[q] = 1
                    continue
                mark = <int>(q + 1)
                stamp[o] = mark
                todo[0] = o
                top = 1
                found = 0
                while top > 0 and not found:
                    top -= 1
                    v = todo[top]
                    for i in range(start[v], start[v + 1]):
                        w = adj[i]
                        if stamp[w] != mark:
                            if w == g:
                                found = 1
                                break
                            stamp[w] = mark
                            todo[top] = w
                            top += 1
                res[q] = found
        return out
    finally:
        free(start)
        free(adj)
        free(stamp)
        free(todo)
