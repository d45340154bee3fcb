# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_pykernel``: same ``Topology`` API, same results.

Path costs are accumulated in signed 64-bit integers; sums saturate at
2**63 - 1, which callers never reach with costs below ``MAX_COST``.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

ctypedef long long i64

cdef i64 BIG = 9223372036854775807


cdef inline bint _less(i64 c1, i64 h1, i64 c2, i64 h2) noexcept nogil:
    return c1 < c2 or (c1 == c2 and h1 < h2)


cdef class Topology:
    cdef public int n
    cdef public int m
    cdef int *tails
    cdef int *heads
    cdef int *out_start
    cdef int *out_list
    cdef int *in_start
    cdef int *in_list
    # scratch buffers reused across calls
    cdef i64 *dc
    cdef i64 *dh
    cdef unsigned char *done
    cdef unsigned char *live
    cdef i64 *heap_c
    cdef i64 *heap_h
    cdef int *heap_v
    cdef int *stack
    cdef int *via
    cdef int *flow

    backend = "cython"

    def __cinit__(self, node_count, tails, heads):
        cdef int n = node_count
        cdef int m = len(tails)
        cdef int a, i
        self.n = n
        self.m = m
        self.tails = <int *>malloc(max(m, 1) * sizeof(int))
        self.heads = <int *>malloc(max(m, 1) * sizeof(int))
        self.out_start = <int *>malloc((n + 1) * sizeof(int))
        self.in_start = <int *>malloc((n + 1) * sizeof(int))
        self.out_list = <int *>malloc(max(m, 1) * sizeof(int))
        self.in_list = <int *>malloc(max(m, 1) * sizeof(int))
        self.dc = <i64 *>malloc(n * sizeof(i64))
        self.dh = <i64 *>malloc(n * sizeof(i64))
        self.done = <unsigned char *>malloc(n)
        self.live = <unsigned char *>malloc(n)
        # lazy-deletion heap holds at most one entry per relaxation
        self.heap_c = <i64 *>malloc((m + 1) * sizeof(i64))
        self.heap_h = <i64 *>malloc((m + 1) * sizeof(i64))
        self.heap_v = <int *>malloc((m + 1) * sizeof(int))
        self.stack = <int *>malloc((n + 1) * sizeof(int))
        self.via = <int *>malloc(n * sizeof(int))
        self.flow = <int *>malloc(max(m, 1) * sizeof(int))
        if not (self.tails and self.heads and self.out_start and self.in_start
                and self.out_list and self.in_list and self.dc and self.dh
                and self.done and self.live and self.heap_c and self.heap_h
                and self.heap_v and self.stack and self.via and self.flow):
            raise MemoryError()
        for a in range(m):
            self.tails[a] = tails[a]
            self.heads[a] = heads[a]
        memset(self.out_start, 0, (n + 1) * sizeof(int))
        memset(self.in_start, 0, (n + 1) * sizeof(int))
        for a in range(m):
            self.out_start[self.tails[a] + 1] += 1
            self.in_start[self.heads[a] + 1] += 1
        for i in range(n):
            self.out_start[i + 1] += self.out_start[i]
            self.in_start[i + 1] += self.in_start[i]
        cdef int *fo = <int *>malloc((n + 1) * sizeof(int))
        cdef int *fi = <int *>malloc((n + 1) * sizeof(int))
        for i in range(n + 1):
            fo[i] = self.out_start[i]
            fi[i] = self.in_start[i]
        # arc ids ascend within each adjacency list
        for a in range(m):
            self.out_list[fo[self.tails[a]]] = a
            fo[self.tails[a]] += 1
            self.in_list[fi[self.heads[a]]] = a
            fi[self.heads[a]] += 1
        free(fo)
        free(fi)

    def __dealloc__(self):
        free(self.tails); free(self.heads)
        free(self.out_start); free(self.in_start)
        free(self.out_list); free(self.in_list)
        free(self.dc); free(self.dh); free(self.done); free(self.live)
        free(self.heap_c); free(self.heap_h); free(self.heap_v)
        free(self.stack); free(self.via); free(self.flow)

    @property
    def tails_list(self):
        return [self.tails[a] for a in range(self.m)]

    @property
    def heads_list(self):
        return [self.heads[a] for a in range(self.m)]

    cdef inline void _push(self, int *size, i64 c, i64 h, int v) noexcept nogil:
        cdef int i = size[0]
        cdef int p
        size[0] += 1
        while i > 0:
            p = (i - 1) >> 1
            if not _less(c, h, self.heap_c[p], self.heap_h[p]):
                break
            self.heap_c[i] = self.heap_c[p]
            self.heap_h[i] = self.heap_h[p]
            self.heap_v[i] = self.heap_v[p]
            i = p
        self.heap_c[i] = c
        self.heap_h[i] = h
        self.heap_v[i] = v

    cdef inline void _pop(self, int *size) noexcept nogil:
        cdef int last = size[0] - 1
        cdef i64 c = self.heap_c[last]
        cdef i64 h = self.heap_h[last]
        cdef int v = self.heap_v[last]
        cdef int i = 0
        cdef int child
        size[0] = last
        while True:
            child = 2 * i + 1
            if child >= last:
                break
            if child + 1 < last and _less(self.heap_c[child + 1], self.heap_h[child + 1],
                                          self.heap_c[child], self.heap_h[child]):
                child += 1
            if not _less(self.heap_c[child], self.heap_h[child], c, h):
                break
            self.heap_c[i] = self.heap_c[child]
            self.heap_h[i] = self.heap_h[child]
            self.heap_v[i] = self.heap_v[child]
            i = child
        if last > 0:
            self.heap_c[i] = c
            self.heap_h[i] = h
            self.heap_v[i] = v

    def shortest(self, const unsigned char[:] blocked, const i64[:] costs, int s, int f):
        """Min-(cost, hops, arc-id sequence) s-f path as ``(cost, arc_ids)``, or None."""
        cdef int n = self.n
        cdef int size = 0
        cdef int i, a, u, v, top
        cdef i64 c, h, nc, w
        for i in range(n):
            self.dc[i] = BIG
            self.dh[i] = BIG
        memset(self.done, 0, n)
        memset(self.live, 0, n)
        with nogil:
            self.dc[s] = 0
            self.dh[s] = 0
            self._push(&size, 0, 0, s)
            while size > 0:
                c = self.heap_c[0]
                h = self.heap_h[0]
                u = self.heap_v[0]
                self._pop(&size)
                if self.done[u]:
                    continue
                self.done[u] = 1
                if u == f:
                    break
                for i in range(self.out_start[u], self.out_start[u + 1]):
                    a = self.out_list[i]
                    if blocked[a]:
                        continue
                    v = self.heads[a]
                    if self.done[v]:
                        continue
                    w = costs[a]
                    nc = c + w if w <= BIG - c else BIG
                    if _less(nc, h + 1, self.dc[v], self.dh[v]):
                        self.dc[v] = nc
                        self.dh[v] = h + 1
                        self._push(&size, nc, h + 1, v)
        if not self.done[f]:
            return None

        top = 0
        self.live[f] = 1
        self.stack[top] = f
        top += 1
        while top > 0:
            top -= 1
            v = self.stack[top]
            for i in range(self.in_start[v], self.in_start[v + 1]):
                a = self.in_list[i]
                if blocked[a]:
                    continue
                u = self.tails[a]
                if self.live[u] or not self.done[u]:
                    continue
                if self.dc[u] + costs[a] == self.dc[v] and self.dh[u] + 1 == self.dh[v]:
                    self.live[u] = 1
                    self.stack[top] = u
                    top += 1

        path = []
        u = s
        while u != f:
            for i in range(self.out_start[u], self.out_start[u + 1]):
                a = self.out_list[i]
                if blocked[a]:
                    continue
                v = self.heads[a]
                if self.live[v] and self.dc[u] + costs[a] == self.dc[v] and self.dh[u] + 1 == self.dh[v]:
                    path.append(a)
                    u = v
                    break
        return self.dc[f], tuple(path)

    def max_flow(self, const unsigned char[:] blocked, const unsigned char[:] uncapped,
                 int s, int f, int limit):
        """Unit-capacity s-f flow capped at ``limit``; ``(value, min-cut arcs or None)``."""
        cdef int n = self.n
        cdef int m = self.m
        cdef int total = 0
        cdef int head, tail, i, a, u, v
        cdef unsigned char *fwd = <unsigned char *>malloc(n)
        if fwd == NULL:
            raise MemoryError()
        memset(self.flow, 0, max(m, 1) * sizeof(int))
        try:
            while total < limit:
                memset(self.done, 0, n)
                self.done[s] = 1
                head = 0
                tail = 0
                self.stack[tail] = s
                tail += 1
                while head < tail and not self.done[f]:
                    u = self.stack[head]
                    head += 1
                    for i in range(self.out_start[u], self.out_start[u + 1]):
                        a = self.out_list[i]
                        if blocked[a]:
                            continue
                        v = self.heads[a]
                        if self.done[v] or not (uncapped[a] or self.flow[a] == 0):
                            continue
                        self.done[v] = 1
                        self.via[v] = a
                        fwd[v] = 1
                        self.stack[tail] = v
                        tail += 1
                    for i in range(self.in_start[u], self.in_start[u + 1]):
                        a = self.in_list[i]
                        if blocked[a] or self.flow[a] == 0:
                            continue
                        v = self.tails[a]
                        if self.done[v]:
                            continue
                        self.done[v] = 1
                        self.via[v] = a
                        fwd[v] = 0
                        self.stack[tail] = v
                        tail += 1
                if not self.done[f]:
                    break
                v = f
                while v != s:
                    a = self.via[v]
                    if fwd[v]:
                        self.flow[a] += 1
                        v = self.tails[a]
                    else:
                        self.flow[a] -= 1
                        v = self.heads[a]
                total += 1
            if total >= limit:
                return total, None
            cut = [a for a in range(m)
                   if not blocked[a] and self.done[self.tails[a]] and not self.done[self.heads[a]]]
            return total, cut
        finally:
            free(fwd)
