"""Pure-Python matching kernels.

Graphs arrive in CSR form (``indptr``, ``indices``) with neighbours sorted
ascending. ``_cmatch.pyx`` implements the same two functions with the same
visiting order, so both backends return identical matchings.
"""
from __future__ import annotations


def max_matching_csr(n_left: int, n_right: int, indptr, indices):
    """Kuhn's augmenting-path matching, roots and neighbours in ascending order.

    Returns ``(match_left, match_right)`` with ``-1`` for unmatched vertices.
    """
    match_left = [-1] * n_left
    match_right = [-1] * n_right
    for root in range(n_left):
        if indptr[root] == indptr[root + 1]:
            continue
        visited = [False] * n_right
        stack_v = [root]
        stack_k = [indptr[root]]
        via = []
        while stack_v:
            v = stack_v[-1]
            k = stack_k[-1]
            if k < indptr[v + 1]:
                stack_k[-1] = k + 1
                g = indices[k]
                if visited[g]:
                    continue
                visited[g] = True
                w = match_right[g]
                if w == -1:
                    via.append(g)
                    for t in range(len(stack_v)):
                        match_left[stack_v[t]] = via[t]
                        match_right[via[t]] = stack_v[t]
                    break
                via.append(g)
                stack_v.append(w)
                stack_k.append(indptr[w])
            else:
                stack_v.pop()
                stack_k.pop()
                if via:
                    via.pop()
    return match_left, match_right


def alternating_reach_csr(n_left: int, n_right: int, rindptr, rindices, match_left, starts):
    """Vertices reachable from the right-side ``starts`` by alternating paths.

    Right to left uses any edge (reverse CSR ``rindptr``/``rindices``), left to
    right uses the matching edge only. Returns ``(left_reached, right_reached)``
    as 0/1 lists.
    """
    left = [0] * n_left
    right = [0] * n_right
    queue = []
    for g in starts:
        if not right[g]:
            right[g] = 1
            queue.append(g)
    head = 0
    while head < len(queue):
        g = queue[head]
        head += 1
        for k in range(rindptr[g], rindptr[g + 1]):
            a = rindices[k]
            if left[a]:
                continue
            left[a] = 1
            h = match_left[a]
            if h != -1 and not right[h]:
                right[h] = 1
                queue.append(h)
    return left, right
