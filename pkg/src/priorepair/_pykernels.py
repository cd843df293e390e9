"""Pure-Python graph kernels (fallback for the compiled ``_ckernels``)."""

from __future__ import annotations


def _csr(n, src, dst):
    start = [0] * (n + 1)
    for u in src:
        start[u + 1] += 1
    for i in range(n):
        start[i + 1] += start[i]
    fill = start[:-1].copy()
    adj = [0] * len(src)
    for u, v in zip(src, dst):
        adj[fill[u]] = v
        fill[u] += 1
    return start, adj


def scc_labels(n, src, dst):
    """Strongly connected component label per node (iterative Tarjan)."""
    start, adj = _csr(n, src, dst)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    label = [-1] * n
    stack = []
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, start[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, ptr = work[-1]
            if ptr < start[v + 1]:
                work[-1] = (v, ptr + 1)
                w = adj[ptr]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, start[w]))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    label[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return label


def reachable(n, src, dst, origin):
    """0/1 flags of the nodes reachable from ``origin`` (origin included)."""
    start, adj = _csr(n, src, dst)
    seen = bytearray(n)
    seen[origin] = 1
    todo = [origin]
    while todo:
        v = todo.pop()
        for i in range(start[v], start[v + 1]):
            w = adj[i]
            if not seen[w]:
                seen[w] = 1
                todo.append(w)
    return seen


def reach_pairs(n, src, dst, origins, goals):
    """For each query i: is goals[i] reachable from origins[i]?"""
    start, adj = _csr(n, src, dst)
    stamp = [0] * n
    out = bytearray(len(origins))
    for q, (o, g) in enumerate(zip(origins, goals)):
        if o == g:
            out[q] = 1
            continue
        mark = q + 1
        stamp[o] = mark
        todo = [o]
        found = False
        while todo and not found:
            v = todo.pop()
            for i in range(start[v], start[v + 1]):
                w = adj[i]
                if stamp[w] != mark:
                    if w == g:
                        found = True
                        break
                    stamp[w] = mark
                    todo.append(w)
        out[q] = found
    return out
