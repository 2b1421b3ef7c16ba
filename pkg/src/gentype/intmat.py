"""Exact integer and rational matrix utilities.

Small dense matrices only (lattice ranks here stay below ~30), so everything
is plain lists of Python ints / Fractions.  The Smith normal form keeps both
transform matrices because discriminant-group generators are read off from
them; the Hermite normal form is used wherever a deterministic basis of a
sublattice is needed (kernels, overlattices, orthogonal complements).
"""

from __future__ import annotations

from fractions import Fraction


Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            ait = ai[t]
            if ait:
                bt = b[t]
                for j in range(m):
                    oi[j] += ait * bt[j]
    return out


def transpose(a):
    return [list(row) for row in zip(*a)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def det_bareiss(mat: Matrix) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def snf_with_transforms(mat: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form.  Returns (U, S, V) with U * mat * V = S.

    S is diagonal with nonnegative entries satisfying S[i][i] | S[i+1][i+1];
    U and V are unimodular.
    """
    m = [list(row) for row in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    u = identity(rows)
    v = identity(cols)

    def row_op(i, j, c):  # row_i += c * row_j
        for t in range(cols):
            m[i][t] += c * m[j][t]
        for t in range(rows):
            u[i][t] += c * u[j][t]

    def col_op(i, j, c):  # col_i += c * col_j
        for t in range(rows):
            m[t][i] += c * m[t][j]
        for t in range(cols):
            v[t][i] += c * v[t][j]

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for t in range(rows):
            m[t][i], m[t][j] = m[t][j], m[t][i]
        for t in range(cols):
            v[t][i], v[t][j] = v[t][j], v[t][i]

    def smallest_pivot(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = abs(m[i][j])
                if x and (best is None or x < best[0]):
                    best = (x, i, j)
        return best

    t = 0
    while t < min(rows, cols):
        found = smallest_pivot(t)
        if found is None:
            break
        _, pi, pj = found
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        dirty = False
        for i in range(t + 1, rows):
            if m[i][t]:
                q = m[i][t] // m[t][t]
                row_op(i, t, -q)
                if m[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if m[t][j]:
                q = m[t][j] // m[t][t]
                col_op(j, t, -q)
                if m[t][j]:
                    dirty = True
        if dirty:
            continue  # remainders left; pick a smaller pivot again
        # divisibility fix: pivot must divide every remaining entry
        fixed = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % m[t][t]:
                    row_op(t, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            t += 1

    for i in range(min(rows, cols)):
        if m[i][i] < 0:
            for tt in range(rows):
                u[i][tt] = -u[i][tt]
            m[i][i] = -m[i][i]
    return u, m, v


def hnf_rows(mat: Matrix) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by the rows.

    Returns a canonical basis: pivot entries positive, entries above each
    pivot reduced into [0, pivot), zero rows dropped.
    """
    m = [list(row) for row in mat if any(row)]
    if not m:
        return []
    cols = len(m[0])
    basis: list[list[int]] = []
    r = 0
    for c in range(cols):
        # find a row below r with nonzero entry in column c
        idx = None
        for i in range(r, len(m)):
            if m[i][c]:
                idx = i
                break
        if idx is None:
            continue
        m[r], m[idx] = m[idx], m[r]
        # eliminate below via gcd steps
        for i in range(r + 1, len(m)):
            while m[i][c]:
                if abs(m[i][c]) < abs(m[r][c]):
                    m[r], m[i] = m[i], m[r]
                q = m[i][c] // m[r][c]
                for t in range(cols):
                    m[i][t] -= q * m[r][t]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        r += 1
        if r == len(m):
            break
    m = [row for row in m[:r] if any(row)]
    # back-reduce entries above pivots
    pivots = []
    for row in m:
        c = next(i for i, x in enumerate(row) if x)
        pivots.append(c)
    for i in range(len(m) - 1, -1, -1):
        c = pivots[i]
        for j in range(i):
            q = m[j][c] // m[i][c]
            if q:
                for t in range(len(m[0])):
                    m[j][t] -= q * m[i][t]
    return m


def kernel_basis(mat: Matrix) -> Matrix:
    """Basis (list of vectors) of the integer kernel {x : mat @ x = 0}."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if rows == 0:
        return identity(cols)
    _, s, v = snf_with_transforms(mat)
    rank = sum(1 for i in range(min(rows, cols)) if s[i][i])
    return [[v[t][j] for t in range(cols)] for j in range(rank, cols)]


def invert_unimodular(mat: Matrix) -> Matrix:
    """Exact inverse of a unimodular integer matrix (result re-verified integral)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c])
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            x = a[i][j + n]
            assert x.denominator == 1, "matrix was not unimodular"
            row.append(int(x))
        out.append(row)
    return out


def solve_fraction(mat, rhs):
    """Solve mat @ x = rhs exactly (mat square nonsingular, entries int/Fraction)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c])
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] for i in range(n)]


def inertia(gram: Matrix) -> tuple[int, int, int]:
    """Signature (n_plus, n_minus, n_zero) of a symmetric integer matrix.

    Symmetric Gaussian reduction over Q; no eigenvalues involved.
    """
    n = len(gram)
    a = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    pos = neg = zero = 0
    idx = list(range(n))
    while idx:
        # prefer a nonzero diagonal entry
        d = next((i for i in idx if a[i][i] != 0), None)
        if d is None:
            # all diagonal zero: find off-diagonal pair, else done
            pair = None
            for i in idx:
                for j in idx:
                    if j > i and a[i][j] != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                zero += len(idx)
                break
            i, j = pair
            # v = e_i + e_j has a(v,v) = 2 a_ij != 0; fold into diagonal
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            continue
        piv = a[d][d]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        idx.remove(d)
        for i in idx:
            f = a[i][d] / piv
            if f:
                for j in idx:
                    a[i][j] -= f * a[d][j]
                a[i][d] = Fraction(0)
        for i in idx:
            a[d][i] = Fraction(0)
    return pos, neg, zero


def gram_apply(gram: Matrix, basis_rows) -> list[list]:
    """Gram matrix of the sublattice spanned by basis rows: B G B^T.

    Entries may be Fractions when the basis is rational.
    """
    bg = []
    for row in basis_rows:
        bg.append([sum(row[k] * gram[k][j] for k in range(len(row)))
                   for j in range(len(gram))])
    return [[sum(bg[i][k] * basis_rows[j][k] for k in range(len(gram)))
             for j in range(len(basis_rows))] for i in range(len(basis_rows))]
