"""Integer and rational linear algebra helpers.

Everything here is exact: matrices are lists of lists of int or Fraction.
Hermite and Smith normal forms return the transforms, which sympy's
versions do not expose.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            row.append(sum(ai[t] * b[t][j] for t in range(k)))
        out.append(row)
    return out


def mat_vec(a, v):
    return [sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def vec_mat(v, a):
    return [sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0]))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_eq(a, b) -> bool:
    return len(a) == len(b) and all(list(x) == list(y) for x, y in zip(a, b))


def gram_of(basis, gram):
    """Gram matrix of the rows of `basis` with respect to `gram`."""
    return mat_mul(mat_mul(basis, gram), transpose(basis))


def mat_inv(a):
    """Inverse of a square matrix over Q, as Fractions."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def solve_right(a, b):
    """One solution x of a x = b over Q, or None. a is m x n, b length m."""
    m, n = len(a), len(a[0])
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, m) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(m):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if aug[r][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = aug[r][n]
    return x


def det_int(a: Matrix) -> int:
    """Determinant of an integer matrix (Bareiss, fraction free)."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def hnf_row(a: Matrix) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns (h, u) with u unimodular, u a = h, h in row echelon form with
    positive pivots and reduced entries above them.  Zero rows sink to the
    bottom.
    """
    m, n = len(a), len(a[0]) if a else 0
    h = [row[:] for row in a]
    u = identity_matrix(m)
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, m):
            if h[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        h[row], h[piv] = h[piv], h[row]
        u[row], u[piv] = u[piv], u[row]
        for r in range(row + 1, m):
            while h[r][col] != 0:
                q = h[row][col] // h[r][col]
                h[row] = [x - q * y for x, y in zip(h[row], h[r])]
                u[row] = [x - q * y for x, y in zip(u[row], u[r])]
                h[row], h[r] = h[r], h[row]
                u[row], u[r] = u[r], u[row]
        if h[row][col] < 0:
            h[row] = [-x for x in h[row]]
            u[row] = [-x for x in u[row]]
        for r in range(row):
            q = h[r][col] // h[row][col]
            if q:
                h[r] = [x - q * y for x, y in zip(h[r], h[row])]
                u[r] = [x - q * y for x, y in zip(u[r], u[row])]
        row += 1
        if row == m:
            break
    return h, u


def kernel_int(a: Matrix) -> list[list[int]]:
    """Basis of the left kernel {x in Z^m : x a = 0}, as rows."""
    h, u = hnf_row(a)
    return [u[i] for i in range(len(h)) if all(x == 0 for x in h[i])]


def right_kernel_int(a: Matrix) -> list[list[int]]:
    """Basis of {x in Z^n : a x = 0}, as rows."""
    return kernel_int(transpose(a))


def snf(a: Matrix, modulus: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form.

    Returns (d, u, v) with u, v unimodular and u a v = d diagonal,
    d[i][i] >= 0 and d[i][i] divides d[i+1][i+1].

    Naive elimination can blow up intermediate entries.  When the cokernel
    Z^m / a Z^n is finite with exponent dividing `modulus` (for square
    nonsingular a, modulus = |det a| always works), pass it: working
    entries are then balanced mod `modulus`, which keeps them small.  In
    that mode u and v are still unimodular over the integers, but
    u a v = d only holds modulo `modulus` and the diagonal entries are
    returned as gcd(pivot, modulus); that is exactly the data describing
    the cokernel, which is all a caller of this mode can rely on.
    """
    m, n = len(a), len(a[0]) if a else 0
    d = [row[:] for row in a]
    u = identity_matrix(m)
    v = identity_matrix(n)

    if modulus is not None and modulus < 0:
        modulus = -modulus

    def bal(x):
        if modulus is None or modulus == 0:
            return x
        r = x % modulus
        return r - modulus if r > modulus // 2 else r

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        d[dst] = [bal(x - q * y) for x, y in zip(d[dst], d[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in d:
            row[dst] = bal(row[dst] - q * row[src])
        for row in v:
            row[dst] -= q * row[src]

    if modulus:
        d = [[bal(x) for x in row] for row in d]

    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0:
                    if piv is None or abs(d[i][j]) < abs(d[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    add_row(t, i, q)
                    if d[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    add_col(t, j, q)
                    if d[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        # pivot must divide the rest of the block
        stray = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i][j] % d[t][t]:
                    stray = i
                    break
            if stray is not None:
                break
        if stray is not None:
            add_row(stray, t, -1)
            continue
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    if modulus:
        # rows that became zero mod the modulus have pivot = modulus
        for i in range(min(m, n)):
            d[i][i] = gcd(d[i][i], modulus)
    return d, u, v


def charpoly_int(a: Matrix) -> list[int]:
    """Characteristic polynomial det(x I - a), coefficients high to low.

    Faddeev-LeVerrier over Fractions, returned as ints.
    """
    n = len(a)
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        for i in range(n):
            mk[i][i] += coeffs[-1]
        mk = mat_mul([[Fraction(x) for x in row] for row in a], mk)
        c = -Fraction(sum(mk[i][i] for i in range(n)), k)
        coeffs.append(c)
    out = []
    for c in coeffs:
        assert c.denominator == 1
        out.append(int(c))
    return out


def poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Divide integer polynomials (coefficients high to low, den monic-ish)."""
    num = num[:]
    q: list[int] = []
    dlead = den[0]
    while len(num) >= len(den):
        c = num[0]
        if c % dlead:
            raise ValueError("non-exact leading division")
        f = c // dlead
        q.append(f)
        for i in range(len(den)):
            num[i] -= f * den[i]
        assert num[0] == 0
        num.pop(0)
    return q, num


def poly_mul_int(a: list[int], b: list[int]) -> list[int]:
    """Product of integer polynomials, coefficients high to low."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
