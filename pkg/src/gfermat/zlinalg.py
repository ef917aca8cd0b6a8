"""Small exact integer/rational linear algebra: Hermite normal form, integer kernels."""

from __future__ import annotations

from fractions import Fraction


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


def hnf_with_transform(rows):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ rows == H``. ``H`` has the
    same number of rows as the input; nonzero rows come first, pivots are
    positive, entries above each pivot are reduced into ``[0, pivot)``.
    """
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            A[r], A[i] = (
                [x * s + y * t for s, t in zip(A[r], A[i])],
                [-bg * s + ag * t for s, t in zip(A[r], A[i])],
            )
            U[r], U[i] = (
                [x * s + y * t for s, t in zip(U[r], U[i])],
                [-bg * s + ag * t for s, t in zip(U[r], U[i])],
            )
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-s for s in A[r]]
            U[r] = [-s for s in U[r]]
        piv = A[r][c]
        for i in range(r):
            k = A[i][c] // piv
            if k:
                A[i] = [s - k * t for s, t in zip(A[i], A[r])]
                U[i] = [s - k * t for s, t in zip(U[i], U[r])]
        r += 1
    return A, U


def hnf(rows):
    """Nonzero rows of the row-style Hermite normal form."""
    if not rows:
        return []
    H, _ = hnf_with_transform(rows)
    return [row for row in H if any(row)]


def integer_kernel(matrix, ncols=None):
    """A Z-basis of ``{x in Z^n : matrix @ x == 0}`` (rows of the result)."""
    n = ncols if ncols is not None else len(matrix[0])
    if not matrix:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    cols = [[matrix[i][j] for i in range(len(matrix))] for j in range(n)]
    H, U = hnf_with_transform(cols)
    return [U[i] for i in range(n) if not any(H[i])]


def gf2_kernel(rows, ncols):
    """Basis (0/1 lists) of the right kernel over GF(2) of the matrix with the given rows."""
    A = [[v & 1 for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(A)) if A[i][c]), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        for i in range(len(A)):
            if i != r and A[i][c]:
                A[i] = [s ^ t for s, t in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            if A[i][fc]:
                v[pc] = 1
        basis.append(v)
    return basis


def gf2_rank(rows):
    A = [[v & 1 for v in r] for r in rows]
    if not A:
        return 0
    ncols = len(A[0])
    return ncols - len(gf2_kernel(A, ncols))


def solve_rational(A, b):
    """Solve ``A x = b`` exactly for a (possibly tall) consistent system; raises if inconsistent."""
    m = len(A)
    n = len(A[0])
    M = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][c]
        M[r] = [v / pv for v in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                k = M[i][c]
                M[i] = [s - k * t for s, t in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, m):
        if M[i][n] != 0:
            raise ValueError("inconsistent linear system")
    if len(piv_cols) < n:
        raise ValueError("underdetermined linear system")
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = M[i][n]
    return x


def determinant_abs_hnf(rows):
    """|det| of a full-rank square lattice basis (product of HNF pivots)."""
    H = hnf(rows)
    if len(H) < len(rows[0]):
        return 0
    out = 1
    for i, row in enumerate(H):
        out *= row[i]
    return out
