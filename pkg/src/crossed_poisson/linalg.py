"""Exact dense linear algebra over a cyclotomic field.

Matrices are lists of lists of Cyclotomic.  Elimination is fraction-free in
the Bareiss style: the forward pass multiplies before dividing by the previous
pivot, so every intermediate entry stays in the ring generated by the input
and rank decisions are exact by construction.  Sizes here are tiny (the
complexes are truncated), so no effort is spent on asymptotics.
"""

from __future__ import annotations

from .scalars import Cyclotomic


def identity_matrix(M, n):
    one = Cyclotomic.one(M)
    zero = Cyclotomic.zero(M)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    if not A or not B:
        return []
    zero = Cyclotomic.zero(A[0][0].M)
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            s = zero
            for t in range(k):
                a = Ai[t]
                if a:
                    s = s + a * B[t][j]
            row.append(s)
        out.append(row)
    return out


def mat_vec(A, v):
    zero = Cyclotomic.zero(v[0].M) if v else None
    out = []
    for row in A:
        s = zero
        for a, x in zip(row, v):
            if a and x:
                s = s + a * x
        out.append(s)
    return out


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_eq(A, B):
    return len(A) == len(B) and all(ra == rb for ra, rb in zip(A, B))


def _echelon(rows, ncols):
    """Fraction-free row echelon form.

    Returns (echelon_rows, pivot_cols).  echelon_rows[r] has its leading
    nonzero entry in column pivot_cols[r]; rows of zeros are dropped.
    """
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    prev_inv = None  # inverse of the previous pivot, for the Bareiss division
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, len(rows)):
            head = rows[i][c]
            if head:
                new = [piv * b - head * a for a, b in zip(rows[r], rows[i])]
            else:
                new = [piv * b for b in rows[i]]
            if prev_inv is not None:
                new = [b * prev_inv for b in new]
            rows[i] = new
        pivots.append(c)
        prev_inv = piv.invert()
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(A):
    if not A:
        return 0
    _, pivots = _echelon(A, len(A[0]))
    return len(pivots)


def mat_inv(A, M):
    """Exact inverse of a square matrix; raises ValueError if singular."""
    n = len(A)
    one = Cyclotomic.one(M)
    zero = Cyclotomic.zero(M)
    aug = [list(A[i]) + [one if i == j else zero for j in range(n)]
           for i in range(n)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        raise ValueError("singular matrix")
    return [row[n:] for row in R]


def rref(A):
    """Reduced row echelon form (pivots normalized to 1, cleared above)."""
    if not A:
        return [], []
    ncols = len(A[0])
    ech, pivots = _echelon(A, ncols)
    for r in range(len(ech) - 1, -1, -1):
        c = pivots[r]
        inv = ech[r][c].invert()
        ech[r] = [a * inv for a in ech[r]]
        for i in range(r):
            f = ech[i][c]
            if f:
                ech[i] = [a - f * b for a, b in zip(ech[i], ech[r])]
    return ech, pivots


def kernel_basis(A, ncols, M):
    """Basis of the right kernel of A (rows may be empty; ncols required)."""
    zero = Cyclotomic.zero(M)
    one = Cyclotomic.one(M)
    if not A:
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(A)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, c in enumerate(pivots):
            v[c] = -R[r][f]
        basis.append(v)
    return basis


def solve(A, b, M):
    """One exact solution x of A x = b, or None if inconsistent.

    Also returns the list of inconsistent row indices (for certificates):
    (x, []) on success, (None, bad_rows) on failure.
    """
    if not A:
        return ([], []) if not any(bb for bb in b) else (None, [i for i, bb in enumerate(b) if bb])
    ncols = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    zero = Cyclotomic.zero(M)
    x = [zero] * ncols
    for r, c in enumerate(pivots):
        if c < ncols:
            x[c] = R[r][ncols]
    if any(c == ncols for c in pivots):
        # inconsistent; x solves the satisfiable part, so the original
        # equations it violates are exactly the ones worth reporting
        bad = []
        for i, (row, bi) in enumerate(zip(A, b)):
            acc = zero
            for aij, xj in zip(row, x):
                if aij and xj:
                    acc = acc + aij * xj
            if acc != bi:
                bad.append(i)
        return None, bad
    return x, []


def row_space_contains(R, pivots, v):
    """Reduce v against an rref basis; return the residual vector."""
    v = list(v)
    for r, c in enumerate(pivots):
        f = v[c]
        if f:
            v = [a - f * b for a, b in zip(v, R[r])]
    return v


def extend_to_basis(R, pivots, vectors):
    """Greedily pick vectors independent of the rref row space; returns picks.

    R, pivots are mutated to include the chosen vectors.
    """
    picked = []
    for v in vectors:
        res = row_space_contains(R, pivots, v)
        lead = next((c for c, a in enumerate(res) if a), None)
        if lead is None:
            continue
        inv = res[lead].invert()
        res = [a * inv for a in res]
        for i in range(len(R)):
            f = R[i][lead]
            if f:
                R[i] = [a - f * b for a, b in zip(R[i], res)]
        pos = 0
        while pos < len(pivots) and pivots[pos] < lead:
            pos += 1
        R.insert(pos, res)
        pivots.insert(pos, lead)
        picked.append(v)
    return picked
