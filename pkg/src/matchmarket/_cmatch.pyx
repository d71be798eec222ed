# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled matching kernels; same contract and visiting order as ``_pymatch``."""

from libc.stdlib cimport malloc, free


cdef int* _to_c(object seq, Py_ssize_t n) except NULL:
    cdef int* out = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = seq[i]
    return out


def max_matching_csr(int n_left, int n_right, indptr, indices):
    cdef int* ip = _to_c(indptr, n_left + 1)
    cdef int* ix = _to_c(indices, len(indices))
    cdef int* ml = <int*> malloc((n_left if n_left > 0 else 1) * sizeof(int))
    cdef int* mr = <int*> malloc((n_right if n_right > 0 else 1) * sizeof(int))
    cdef char* visited = <char*> malloc((n_right if n_right > 0 else 1) * sizeof(char))
    cdef int depth_cap = n_left + 1
    cdef int* stack_v = <int*> malloc(depth_cap * sizeof(int))
    cdef int* stack_k = <int*> malloc(depth_cap * sizeof(int))
    cdef int* via = <int*> malloc(depth_cap * sizeof(int))
    cdef int root, top, v, k, g, w, t, i
    try:
        for i in range(n_left):
            ml[i] = -1
        for i in range(n_right):
            mr[i] = -1
        for root in range(n_left):
            if ip[root] == ip[root + 1]:
                continue
            for i in range(n_right):
                visited[i] = 0
            top = 0
            stack_v[0] = root
            stack_k[0] = ip[root]
            while top >= 0:
                v = stack_v[top]
                k = stack_k[top]
                if k < ip[v + 1]:
                    stack_k[top] = k + 1
                    g = ix[k]
                    if visited[g]:
                        continue
                    visited[g] = 1
                    w = mr[g]
                    via[top] = g
                    if w == -1:
                        for t in range(top + 1):
                            ml[stack_v[t]] = via[t]
                            mr[via[t]] = stack_v[t]
                        break
                    top += 1
                    stack_v[top] = w
                    stack_k[top] = ip[w]
                else:
                    top -= 1
        return [ml[i] for i in range(n_left)], [mr[i] for i in range(n_right)]
    finally:
        free(ip); free(ix); free(ml); free(mr); free(visited)
        free(stack_v); free(stack_k); free(via)


def alternating_reach_csr(int n_left, int n_right, rindptr, rindices, match_left, starts):
    cdef int* rp = _to_c(rindptr, n_right + 1)
    cdef int* rx = _to_c(rindices, len(rindices))
    cdef int* ml = _to_c(match_left, n_left)
    cdef char* left = <char*> malloc((n_left if n_left > 0 else 1) * sizeof(char))
    cdef char* right = <char*> malloc((n_right if n_right > 0 else 1) * sizeof(char))
    cdef int* queue = <int*> malloc((n_right if n_right > 0 else 1) * sizeof(int))
    cdef int head = 0, tail = 0, g, k, a, h, i
    try:
        for i in range(n_left):
            left[i] = 0
        for i in range(n_right):
            right[i] = 0
        for g in starts:
            if not right[g]:
                right[g] = 1
                queue[tail] = g
                tail += 1
        while head < tail:
            g = queue[head]
            head += 1
            for k in range(rp[g], rp[g + 1]):
                a = rx[k]
                if left[a]:
                    continue
                left[a] = 1
                h = ml[a]
                if h != -1 and not right[h]:
                    right[h] = 1
                    queue[tail] = h
                    tail += 1
        return [left[i] for i in range(n_left)], [right[i] for i in range(n_right)]
    finally:
        free(rp); free(rx); free(ml); free(left); free(right); free(queue)
