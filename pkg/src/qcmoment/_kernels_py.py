"""Pure-Python exact linear algebra kernels.

Matrices are lists of row lists holding exact scalars (``mpq`` in practice,
but anything with field arithmetic works). Inputs are never mutated.
The compiled module ``_kernels`` implements the same functions.
"""


def rref(rows):
    """Reduced row echelon form. Returns ``(R, pivot_columns)``."""
    A = [list(r) for r in rows]
    n = len(A)
    m = len(A[0]) if n else 0
    pivots = []
    r = 0
    for c in range(m):
        if r == n:
            break
        p = -1
        for i in range(r, n):
            if A[i][c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        prow = A[r]
        inv = 1 / prow[c]
        prow = [x * inv for x in prow]
        A[r] = prow
        for i in range(n):
            if i != r:
                row = A[i]
                f = row[c]
                if f != 0:
                    A[i] = [x - f * y for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(rows):
    """Rank by forward elimination (no back substitution)."""
    A = [list(r) for r in rows]
    n = len(A)
    m = len(A[0]) if n else 0
    r = 0
    for c in range(m):
        if r == n:
            break
        p = -1
        for i in range(r, n):
            if A[i][c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        prow = A[r]
        piv = prow[c]
        for i in range(r + 1, n):
            row = A[i]
            f = row[c]
            if f != 0:
                f = f / piv
                A[i] = [x - f * y for x, y in zip(row, prow)]
        r += 1
    return r


def bareiss_rank(rows):
    """Rank of an integer matrix by fraction-free Bareiss elimination."""
    A = [[int(x) for x in r] for r in rows]
    n = len(A)
    m = len(A[0]) if n else 0
    r = 0
    prev = 1
    for c in range(m):
        if r == n:
            break
        p = -1
        for i in range(r, n):
            if A[i][c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        prow = A[r]
        piv = prow[c]
        for i in range(r + 1, n):
            row = A[i]
            f = row[c]
            A[i] = [(piv * x - f * y) // prev for x, y in zip(row, prow)]
        prev = piv
        r += 1
    return r


def sym_inertia(rows):
    """Exact ``(i_plus, i_minus)`` of a symmetric matrix by congruence.

    Uses a 1x1 pivot when some diagonal entry is nonzero, otherwise a 2x2
    pivot ``[[0, a], [a, 0]]`` which carries one positive and one negative
    eigenvalue.
    """
    A = [list(r) for r in rows]
    pos = 0
    neg = 0
    while A:
        n = len(A)
        k = -1
        for i in range(n):
            if A[i][i] != 0:
                k = i
                break
        if k >= 0:
            piv = A[k][k]
            if piv > 0:
                pos += 1
            else:
                neg += 1
            colk = [A[i][k] for i in range(n)]
            B = []
            for i in range(n):
                if i == k:
                    continue
                row = A[i]
                f = colk[i]
                if f != 0:
                    f = f / piv
                    B.append([row[j] - f * colk[j] for j in range(n) if j != k])
                else:
                    B.append([row[j] for j in range(n) if j != k])
            A = B
            continue
        pi = -1
        pj = -1
        for i in range(n):
            for j in range(i + 1, n):
                if A[i][j] != 0:
                    pi = i
                    pj = j
                    break
            if pi >= 0:
                break
        if pi < 0:
            break
        pos += 1
        neg += 1
        a = A[pi][pj]
        ci = [A[r][pi] for r in range(n)]
        cj = [A[r][pj] for r in range(n)]
        keep = [r for r in range(n) if r != pi and r != pj]
        B = []
        for r in keep:
            row = A[r]
            ri = ci[r] / a
            rj = cj[r] / a
            if ri == 0 and rj == 0:
                B.append([row[s] for s in keep])
            else:
                B.append([row[s] - (ri * cj[s] + rj * ci[s]) for s in keep])
        A = B
    return pos, neg


def matmul(A, B):
    if not A or not B:
        return [[] for _ in A]
    cols = list(zip(*B))
    zero = A[0][0] * 0 if A[0] else 0
    out = []
    for row in A:
        out_row = []
        for col in cols:
            acc = zero
            for x, y in zip(row, col):
                if x != 0 and y != 0:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(A, v):
    out = []
    for row in A:
        acc = 0
        for x, y in zip(row, v):
            if x != 0 and y != 0:
                acc = acc + x * y
        out.append(acc)
    return out


def solve_linear(A, B):
    """A particular solution ``X`` of ``A X = B`` (free variables zero), or None.

    ``B`` is a matrix given as row lists with the same row count as ``A``.
    """
    n = len(A)
    if n == 0:
        return []
    m = len(A[0])
    k = len(B[0]) if B else 0
    aug = [list(A[i]) + list(B[i]) for i in range(n)]
    R, pivots = rref(aug)
    if pivots and pivots[-1] >= m:
        return None
    zero = aug[0][0] * 0
    X = [[zero] * k for _ in range(m)]
    for i, c in enumerate(pivots):
        X[c] = R[i][m:]
    return X
