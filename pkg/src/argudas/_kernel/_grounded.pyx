# cython: language_level=3
"""Compiled grounded labelling kernel.

Same worklist algorithm as the pure fallback, over flat C arrays: an
argument with no live attacker is IN, targets of IN arguments are OUT,
an OUT argument releases its targets' attacker counts.
"""

from libc.stdlib cimport free, malloc

IN, OUT, UNDEC = 0, 1, 2


def grounded_labels(int n, attacks):
    """Label arguments 0..n-1 given (attacker, target) pairs."""
    cdef int m = len(attacks)
    cdef int i, a, b, x, t, head, tail, start, end

    if n == 0:
        return []

    cdef int *src = <int *> malloc(m * sizeof(int))
    cdef int *dst = <int *> malloc(m * sizeof(int))
    cdef int *deg = <int *> malloc(n * sizeof(int))          # out-degree
    cdef int *offset = <int *> malloc((n + 1) * sizeof(int))
    cdef int *adj = <int *> malloc(m * sizeof(int))          # targets, CSR layout
    cdef int *pending = <int *> malloc(n * sizeof(int))      # attackers not yet OUT
    cdef int *labels = <int *> malloc(n * sizeof(int))
    cdef int *queue = <int *> malloc(n * sizeof(int))
    if (src == NULL or dst == NULL or deg == NULL or offset == NULL
            or adj == NULL or pending == NULL or labels == NULL or queue == NULL):
        free(src); free(dst); free(deg); free(offset)
        free(adj); free(pending); free(labels); free(queue)
        raise MemoryError()

    try:
        for i in range(n):
            deg[i] = 0
            pending[i] = 0
            labels[i] = UNDEC
        for i, (a, b) in enumerate(attacks):
            if a < 0 or a >= n or b < 0 or b >= n:
                raise IndexError("attack endpoint out of range")
            src[i] = a
            dst[i] = b
            deg[a] += 1
            pending[b] += 1

        offset[0] = 0
        for i in range(n):
            offset[i + 1] = offset[i] + deg[i]
        for i in range(n):
            deg[i] = offset[i]  # reuse as insertion cursor
        for i in range(m):
            adj[deg[src[i]]] = dst[i]
            deg[src[i]] += 1

        tail = 0
        for i in range(n):
            if pending[i] == 0:
                labels[i] = IN
                queue[tail] = i
                tail += 1
        head = 0
        while head < tail:
            x = queue[head]
            head += 1
            start = offset[x]
            end = offset[x + 1]
            if labels[x] == IN:
                for i in range(start, end):
                    t = adj[i]
                    if labels[t] == UNDEC:
                        labels[t] = OUT
                        queue[tail] = t
                        tail += 1
            else:
                for i in range(start, end):
                    t = adj[i]
                    pending[t] -= 1
                    if pending[t] == 0 and labels[t] == UNDEC:
                        labels[t] = IN
                        queue[tail] = t
                        tail += 1

        return [labels[i] for i in range(n)]
    finally:
        free(src); free(dst); free(deg); free(offset)
        free(adj); free(pending); free(labels); free(queue)
