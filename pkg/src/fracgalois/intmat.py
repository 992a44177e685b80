"""Exact integer / rational matrix routines.

Everything here is over Z or Q (``fractions.Fraction``), no floats. Matrices
are row-major lists of lists. The column-style Hermite normal form is the
canonicalizer for lattices given by generator columns: upper triangular,
positive pivots, entries to the right of a pivot reduced into [0, pivot).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k = len(a), len(b)
    assert k == 0 or len(a[0]) == k
    m = len(b[0]) if k else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    oi[j] += x * bt[j]
    return out


def mat_transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def _columns(a):
    # matrix -> list of column vectors (lists)
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def _from_columns(cols, nrows):
    if not cols:
        return [[] for _ in range(nrows)]
    return [list(row) for row in zip(*cols)]


def column_echelon(a, *, with_transform=False):
    """Bring the columns of ``a`` (n x m, integer) to echelon form.

    Returns (pivot_cols, pivot_rows, kernel_cols) where pivot_cols are the
    nonzero echelon columns ordered by increasing pivot row, pivot_rows the
    corresponding rows, and kernel_cols an integer basis of the right kernel
    (empty unless with_transform). Works bottom-up: after row i is processed
    every still-active column vanishes on rows >= i.
    """
    n = len(a)
    m = len(a[0]) if a else 0
    cols = _columns(a)
    trans = _columns(identity_matrix(m)) if with_transform else None
    active = list(range(m))
    parked = []  # (pivot_row, col_index)
    for i in range(n - 1, -1, -1):
        live = [j for j in active if cols[j][i] != 0]
        while len(live) > 1:
            live.sort(key=lambda j: abs(cols[j][i]))
            j0 = live[0]
            piv = cols[j0][i]
            for j in live[1:]:
                q = cols[j][i] // piv
                if q:
                    cj, c0 = cols[j], cols[j0]
                    for r in range(i + 1):  # rows > i are already zero
                        cj[r] -= q * c0[r]
                    if with_transform:
                        tj, t0 = trans[j], trans[j0]
                        for r in range(m):
                            tj[r] -= q * t0[r]
            live = [j for j in live if cols[j][i] != 0]
        if live:
            j0 = live[0]
            if cols[j0][i] < 0:
                cols[j0] = [-x for x in cols[j0]]
                if with_transform:
                    trans[j0] = [-x for x in trans[j0]]
            parked.append((i, j0))
            active.remove(j0)
    parked.sort()
    pivot_rows = [p for p, _ in parked]
    pivot_cols = [cols[j] for _, j in parked]
    kernel = []
    if with_transform:
        for j in active:
            assert all(x == 0 for x in cols[j])
            kernel.append(trans[j])
    return pivot_cols, pivot_rows, kernel


def hnf_columns(a):
    """Canonical column HNF of the integer column span of ``a``.

    Returns (cols, pivot_rows): echelon columns by increasing pivot row with
    positive pivots and, for each pivot, the entries of that row in all later
    columns reduced into [0, pivot). This is a unique representative of the
    span, so equal spans give bitwise-equal output.
    """
    cols, pivot_rows, _ = column_echelon(a)
    r = len(cols)
    for t in range(r - 1, -1, -1):  # descending pivot rows keep earlier work intact
        p = pivot_rows[t]
        piv = cols[t][p]
        for j in range(t + 1, r):
            q = cols[j][p] // piv
            if q:
                cj, ct = cols[j], cols[t]
                for rr in range(p + 1):
                    cj[rr] -= q * ct[rr]
    return cols, pivot_rows


def kernel_basis(a):
    """Integer basis of {x : a x = 0}, as a list of columns."""
    _, _, ker = column_echelon(a, with_transform=True)
    if not ker:
        return []
    cols, _ = hnf_columns(_from_columns(ker, len(ker[0])))
    return cols


def span_contains(a_cols, v):
    """Is integer vector v in the Z-span of the integer columns a_cols?"""
    if all(x == 0 for x in v):
        return True
    if not a_cols:
        return False
    n = len(v)
    cols, pivot_rows = hnf_columns(_from_columns(a_cols, n))
    w = list(v)
    for t in range(len(cols) - 1, -1, -1):
        p = pivot_rows[t]
        if w[p]:
            q, rem = divmod(w[p], cols[t][p])
            if rem:
                return False
            for rr in range(p + 1):
                w[rr] -= q * cols[t][rr]
    return all(x == 0 for x in w)


def span_equal(a_cols, b_cols, n):
    """Do two integer column lists span the same sublattice of Z^n?"""
    ha = hnf_columns(_from_columns(a_cols, n)) if a_cols else ([], [])
    hb = hnf_columns(_from_columns(b_cols, n)) if b_cols else ([], [])
    return ha == hb


def smith_normal_form(a):
    """U, D, V with U a V = D diagonal, d_i | d_{i+1}, U and V unimodular."""
    n = len(a)
    m = len(a[0]) if a else 0
    d = [row[:] for row in a]
    u = identity_matrix(n)
    v = identity_matrix(m)

    def row_op(i, j, q):  # row_i -= q * row_j
        for t in range(m):
            d[i][t] -= q * d[j][t]
        for t in range(n):
            u[i][t] -= q * u[j][t]

    def col_op(i, j, q):  # col_i -= q * col_j
        for t in range(n):
            d[t][i] -= q * d[t][j]
        for t in range(m):
            v[t][i] -= q * v[t][j]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for t in range(n):
            d[t][i], d[t][j] = d[t][j], d[t][i]
        for t in range(m):
            v[t][i], v[t][j] = v[t][j], v[t][i]

    t = 0
    while t < min(n, m):
        # locate a minimal nonzero entry in the trailing block
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, n):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    row_op(i, t, q)
                    if d[i][t]:  # nonzero remainder becomes the new, smaller pivot
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, m):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    col_op(j, t, q)
                    if d[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # divisibility fix: pivot must divide the whole trailing block
        fixed = True
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if d[i][j] % d[t][t]:
                    row_op(t, i, -1)  # add row i to row t, then redo elimination
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if d[t][t] < 0:
            for j in range(m):
                d[t][j] = -d[t][j]
            for j in range(n):
                u[t][j] = -u[t][j]
        t += 1
    return u, d, v


def det_int(a):
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
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
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_upper_triangular(cols, pivot_rows, v):
    """Solve H y = v for square upper-echelon columns H; rational y or None."""
    r = len(cols)
    w = [Fraction(x) for x in v]
    y = [Fraction(0)] * r
    for t in range(r - 1, -1, -1):
        p = pivot_rows[t]
        y[t] = w[p] / cols[t][p]
        if y[t]:
            for rr in range(p + 1):
                w[rr] -= y[t] * cols[t][rr]
        w[p] = Fraction(0)
    if any(w):
        return None
    return y


def solve_rational(a, b):
    """One rational solution x of a x = b, or None. a: n x m over Q/Z."""
    n = len(a)
    m = len(a[0]) if a else 0
    aug = [[Fraction(a[i][j]) for j in range(m)] + [Fraction(b[i])] for i in range(n)]
    pivots = []
    row = 0
    for col in range(m):
        pr = None
        for i in range(row, n):
            if aug[i][col]:
                pr = i
                break
        if pr is None:
            continue
        aug[row], aug[pr] = aug[pr], aug[row]
        piv = aug[row][col]
        aug[row] = [x / piv for x in aug[row]]
        for i in range(n):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    for i in range(row, n):
        if aug[i][m]:
            return None
    x = [Fraction(0)] * m
    for r_i, col in enumerate(pivots):
        x[col] = aug[r_i][m]
    return x


def content(values):
    """gcd of an iterable of integers (0 for empty/all-zero)."""
    g = 0
    for x in values:
        g = gcd(g, x)
        if g == 1:
            return 1
    return g
