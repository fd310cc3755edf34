# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact linear algebra kernels (same contract as ``_kernels_py``)."""


def rref(rows):
    cdef list A = [list(src) for src in rows]
    cdef Py_ssize_t n = len(A)
    cdef Py_ssize_t m = len(A[0]) if n else 0
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef list pivots = []
    cdef list prow, row, new
    for c in range(m):
        if r == n:
            break
        p = -1
        for i in range(r, n):
            if (<list>A[i])[c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        prow = <list>A[r]
        inv = 1 / prow[c]
        prow = [x * inv for x in prow]
        A[r] = prow
        for i in range(n):
            if i != r:
                row = <list>A[i]
                f = row[c]
                if f != 0:
                    new = [None] * m
                    for j in range(m):
                        new[j] = row[j] - f * prow[j]
                    A[i] = new
        pivots.append(c)
        r += 1
    return A, pivots


def rank(rows):
    cdef list A = [list(src) for src in rows]
    cdef Py_ssize_t n = len(A)
    cdef Py_ssize_t m = len(A[0]) if n else 0
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef list prow, row, new
    for c in range(m):
        if r == n:
            break
        p = -1
        for i in range(r, n):
            if (<list>A[i])[c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        prow = <list>A[r]
        piv = prow[c]
        for i in range(r + 1, n):
            row = <list>A[i]
            f = row[c]
            if f != 0:
                f = f / piv
                new = [None] * m
                for j in range(m):
                    new[j] = row[j] - f * prow[j]
                A[i] = new
        r += 1
    return r


def bareiss_rank(rows):
    cdef list A = [[int(x) for x in src] for src in rows]
    cdef Py_ssize_t n = len(A)
    cdef Py_ssize_t m = len(A[0]) if n else 0
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef list prow, row, new
    prev = 1
    for c in range(m):
        if r == n:
            break
        p = -1
        for i in range(r, n):
            if (<list>A[i])[c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        prow = <list>A[r]
        piv = prow[c]
        for i in range(r + 1, n):
            row = <list>A[i]
            f = row[c]
            new = [None] * m
            for j in range(m):
                new[j] = (piv * row[j] - f * prow[j]) // prev
            A[i] = new
        prev = piv
        r += 1
    return r


def sym_inertia(rows):
    cdef list A = [list(src) for src in rows]
    cdef Py_ssize_t n, i, j, k, pi, pj, s, t
    cdef Py_ssize_t pos = 0, neg = 0
    cdef list B, row, colk, ci, cj, keep, new
    while A:
        n = len(A)
        k = -1
        for i in range(n):
            if (<list>A[i])[i] != 0:
                k = i
                break
        if k >= 0:
            piv = (<list>A[k])[k]
            if piv > 0:
                pos += 1
            else:
                neg += 1
            colk = [(<list>A[i])[k] for i in range(n)]
            B = []
            for i in range(n):
                if i == k:
                    continue
                row = <list>A[i]
                f = colk[i]
                new = []
                if f != 0:
                    f = f / piv
                    for j in range(n):
                        if j != k:
                            new.append(row[j] - f * colk[j])
                else:
                    for j in range(n):
                        if j != k:
                            new.append(row[j])
                B.append(new)
            A = B
            continue
        pi = -1
        pj = -1
        for i in range(n):
            for j in range(i + 1, n):
                if (<list>A[i])[j] != 0:
                    pi = i
                    pj = j
                    break
            if pi >= 0:
                break
        if pi < 0:
            break
        pos += 1
        neg += 1
        a = (<list>A[pi])[pj]
        ci = [(<list>A[t])[pi] for t in range(n)]
        cj = [(<list>A[t])[pj] for t in range(n)]
        keep = [t for t in range(n) if t != pi and t != pj]
        B = []
        for t in keep:
            row = <list>A[t]
            ri = ci[t] / a
            rj = cj[t] / a
            if ri == 0 and rj == 0:
                B.append([row[s] for s in keep])
            else:
                B.append([row[s] - (ri * cj[s] + rj * ci[s]) for s in keep])
        A = B
    return pos, neg


def matmul(A, B):
    if not A or not B:
        return [[] for _ in A]
    cdef list cols = [list(c) for c in zip(*B)]
    cdef Py_ssize_t n = len(A), p = len(cols), q, i, j, l
    cdef list out = [], row, col, out_row
    zero = A[0][0] * 0 if A[0] else 0
    for i in range(n):
        row = list(A[i])
        q = len(row)
        out_row = [None] * p
        for j in range(p):
            col = <list>cols[j]
            acc = zero
            for l in range(q):
                x = row[l]
                if x != 0:
                    y = col[l]
                    if y != 0:
                        acc = acc + x * y
            out_row[j] = acc
        out.append(out_row)
    return out


def matvec(A, v):
    cdef list vv = list(v)
    cdef Py_ssize_t l, q = len(vv)
    cdef list out = [], row
    for r in A:
        row = list(r)
        acc = 0
        for l in range(q):
            x = row[l]
            if x != 0:
                y = vv[l]
                if y != 0:
                    acc = acc + x * y
        out.append(acc)
    return out


def solve_linear(A, B):
    cdef Py_ssize_t n = len(A), m, k, i
    if n == 0:
        return []
    m = len(A[0])
    k = len(B[0]) if B else 0
    aug = [list(A[i]) + list(B[i]) for i in range(n)]
    R, pivots = rref(aug)
    if pivots and pivots[len(pivots) - 1] >= m:
        return None
    zero = aug[0][0] * 0
    X = [[zero] * k for _ in range(m)]
    for i, c in enumerate(pivots):
        X[c] = R[i][m:]
    return X
