"""Dense exact linear algebra over the rationals.

Matrices are lists of lists of :class:`fractions.Fraction`; vectors are
lists.  Sizes here are small (a few hundred at most), so dense Gaussian
elimination is the right tool.  All functions leave their arguments
untouched.
"""

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def zeros(rows, cols):
    return [[ZERO] * cols for _ in range(rows)]


def identity(n):
    mat = zeros(n, n)
    for i in range(n):
        mat[i][i] = ONE
    return mat


def copy_matrix(a):
    return [row[:] for row in a]


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    c = frac(c)
    return [[c * x for x in row] for row in a]


def mat_mul(a, b):
    if a and b and len(a[0]) != len(b):
        raise ValueError("shape mismatch: %dx%d times %dx%d"
                         % (len(a), len(a[0]), len(b), len(b[0]) if b else 0))
    if not a or not b:
        return zeros(len(a), len(b[0]) if b else 0)
    bt = transpose(b)
    out = []
    for row in a:
        out.append([sum((x * y for x, y in zip(row, col) if x and y), ZERO)
                    for col in bt])
    return out


def mat_vec(a, v):
    return [sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in a]


def is_zero_matrix(a):
    return all(x == 0 for row in a for x in row)


def rref(a):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    r = copy_matrix(a)
    rows = len(r)
    cols = len(r[0]) if rows else 0
    pivots = []
    lead = 0
    for col in range(cols):
        pivot_row = None
        for i in range(lead, rows):
            if r[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        r[lead], r[pivot_row] = r[pivot_row], r[lead]
        inv = ONE / r[lead][col]
        r[lead] = [x * inv for x in r[lead]]
        for i in range(rows):
            if i != lead and r[i][col] != 0:
                c = r[i][col]
                r[i] = [x - c * y for x, y in zip(r[i], r[lead])]
        pivots.append(col)
        lead += 1
        if lead == rows:
            break
    return r, pivots


def rank(a):
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a):
    """Basis of the right kernel {v : a v = 0}, one vector per free column."""
    if not a:
        return []
    cols = len(a[0])
    r, pivots = rref(a)
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [ZERO] * cols
        v[j] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][j]
        basis.append(v)
    return basis


def solve(a, b):
    """One solution of a x = b, or None if inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [a[i][:] + [frac(b[i])] for i in range(rows)]
    r, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [ZERO] * cols
    for i, pc in enumerate(pivots):
        x[pc] = r[i][cols]
    return x


def inverse(a):
    n = len(a)
    aug = [a[i][:] + identity(n)[i] for i in range(n)]
    r, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in r]


def solve_in_span(basis_vectors, v):
    """Coordinates of v in the span of basis_vectors, or None.

    basis_vectors is a list of length-n vectors; returns c with
    sum c_i basis_i = v.
    """
    if not basis_vectors:
        return [] if all(x == 0 for x in v) else None
    a = transpose(basis_vectors)
    return solve(a, v)


def stack_rows(mats):
    out = []
    for m in mats:
        out.extend(copy_matrix(m))
    return out


def gram_matrix(vectors, pairing):
    return [[pairing(u, v) for v in vectors] for u in vectors]
