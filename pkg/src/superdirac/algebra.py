"""Structure data for the type-A Lie superalgebras gl(m|n), sl(m|n), psl(n|n)
and the even special linear algebras sl(n).

Basis elements are (projections of) elementary matrices.  The invariant form
is the supertrace form of the defining representation, except for the even
sl(n) where the Killing form 2n*tr(xy) is used.  Weight coordinates live in
the epsilon/delta lattice of the ambient gl(m|n); for psl(n|n) two coordinate
vectors that differ by the supertrace direction (1,..,1|-1,..,-1) define the
same functional on the Cartan subalgebra and are compared accordingly.
"""

from dataclasses import dataclass
from fractions import Fraction

from superdirac import linalg
from superdirac.linalg import ZERO, ONE, frac


class AlgebraError(ValueError):
    """Unsupported algebra or inconsistent construction input."""


@dataclass(frozen=True)
class Weight:
    """Rational coordinate vector in the epsilon/delta basis of h*."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(frac(c) for c in self.coords))

    def __add__(self, other):
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Weight(tuple(-a for a in self.coords))

    def scale(self, c):
        c = frac(c)
        return Weight(tuple(c * a for a in self.coords))

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def sort_key(self):
        return self.coords

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def zero_weight(length):
    return Weight((ZERO,) * length)


class LieSuperalgebra:
    """Validated structure data: basis, parity, bracket table, form, roots.

    The bracket table maps (i, j) with i <= j to a sparse {k: coeff} dict;
    brackets with i > j are recovered from super-antisymmetry.
    """

    def __init__(self, name, family, m, n, labels, parity, bracket_table,
                 form, cartan, basis_weights, killing_normalized=False):
        self.name = name
        self.family = family
        self.m = m
        self.n = n
        self.labels = list(labels)
        self.parity = tuple(parity)
        self.dim = len(self.labels)
        self._bracket = bracket_table
        self.form = form
        self.cartan = tuple(cartan)
        self.rank = len(self.cartan)
        self.basis_weights = tuple(basis_weights)
        self.killing_normalized = killing_normalized
        self.coord_len = m + n
        # h*-pairing signs: +1 on epsilon coordinates, -1 on delta coordinates,
        # rescaled by 1/(2n) for the Killing normalization of even sl(n).
        self._wsigns = [ONE] * m + [-ONE] * n
        self._wscale = Fraction(1, 2 * m) if killing_normalized else ONE
        self.root_space = {}
        for i, w in enumerate(self.basis_weights):
            if not w.is_zero():
                self.root_space.setdefault(w, []).append(i)
        self.roots = sorted(self.root_space, key=lambda w: w.sort_key())
        self._dual = None

    # -- bracket and form ---------------------------------------------------

    def bracket(self, i, j):
        """[e_i, e_j] as a sparse {k: coeff} dict."""
        if i <= j:
            return dict(self._bracket.get((i, j), {}))
        sign = -ONE if not (self.parity[i] and self.parity[j]) else ONE
        return {k: sign * c for k, c in self._bracket.get((j, i), {}).items()}

    def bracket_vec(self, x, y):
        """Bracket of sparse coefficient vectors {index: coeff}."""
        out = {}
        for i, a in x.items():
            if not a:
                continue
            for j, b in y.items():
                if not b:
                    continue
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, ZERO) + a * b * c
        return {k: c for k, c in out.items() if c}

    def B(self, i, j):
        return self.form[i][j]

    def B_vec(self, x, y):
        total = ZERO
        for i, a in x.items():
            row = self.form[i]
            for j, b in y.items():
                total += a * b * row[j]
        return total

    def ad_matrix(self, x):
        """Matrix of ad_x in the basis, x a sparse coefficient vector."""
        mat = linalg.zeros(self.dim, self.dim)
        for j in range(self.dim):
            for k, c in self.bracket_vec(x, {j: ONE}).items():
                mat[k][j] = c
        return mat

    def dual_basis(self):
        """Coefficient vectors of the B-dual basis: B(e_a, e^b) = delta_ab."""
        if self._dual is None:
            try:
                inv = linalg.inverse(self.form)
            except ValueError:
                raise AlgebraError("degenerate-form: %s" % self.name)
            # column b of inv solves B . x = delta_b
            self._dual = [
                {i: inv[i][b] for i in range(self.dim) if inv[i][b]}
                for b in range(self.dim)
            ]
        return self._dual

    # -- weights ------------------------------------------------------------

    def weight(self, coords):
        """Validated weight; sl-type input is projected orthogonal to the
        radical direction so the h*-pairing computes the honest dual form."""
        w = Weight(tuple(coords))
        if len(w.coords) != self.coord_len:
            raise AlgebraError("weight needs %d coordinates, got %d"
                               % (self.coord_len, len(w.coords)))
        if self.family == "psl":
            if sum(w.coords) != 0:
                raise AlgebraError(
                    "psl weights must have coordinate sum 0 (got %s)" % (w,))
            return w
        if self.family == "sl":
            mean = sum(w.coords) / len(w.coords)
            if mean:
                w = Weight(tuple(c - mean for c in w.coords))
            return w
        if self.family == "slmn":
            total = sum(w.coords)
            if total:
                t = total / (self.m - self.n)
                rad = self.radical_direction()
                w = Weight(tuple(c - t * r
                                 for c, r in zip(w.coords, rad.coords)))
            return w
        return w

    def pair(self, u, v):
        """Invariant form on h* in epsilon/delta coordinates."""
        return self._wscale * sum(
            s * a * b for s, a, b in zip(self._wsigns, u.coords, v.coords))

    def norm2(self, u):
        return self.pair(u, u)

    def radical_direction(self):
        """Direction of h*-coordinate ambiguity, or None.

        For sl/psl the supertrace functional (1,..,1|-1,..,-1) vanishes on the
        Cartan subalgebra; two coordinate vectors differing by a multiple of
        it restrict to the same functional.
        """
        if self.family == "gl":
            return None
        return Weight(tuple([ONE] * self.m + [-ONE] * self.n))

    def same_functional(self, u, v):
        """Whether u and v restrict to the same functional on h."""
        d = (u - v).coords
        rad = self.radical_direction()
        if rad is None:
            return all(c == 0 for c in d)
        base = None
        for di, ri in zip(d, rad.coords):
            if ri == 0:
                if di != 0:
                    return False
            else:
                t = di / ri
                if base is None:
                    base = t
                elif t != base:
                    return False
        return True

    def functional_key(self, w):
        """Canonical coordinates of the functional w|_h (hashable)."""
        rad = self.radical_direction()
        if rad is None:
            return w.coords
        # normalize the last coordinate to zero along the radical direction
        t = w.coords[-1] / rad.coords[-1]
        return tuple(a - t * r for a, r in zip(w.coords, rad.coords))

    def evaluate(self, w, h_vec):
        """Value of the functional w on a Cartan element {index: coeff}."""
        total = ZERO
        for i, c in h_vec.items():
            total += c * self.pairing_free_eval(w, i)
        return total

    def pairing_free_eval(self, w, idx):
        """w(e_idx) for a Cartan basis element, via its diagonal entries."""
        diag = self._cartan_diagonals[self.cartan.index(idx)]
        return sum(a * d for a, d in zip(w.coords, diag))

    # filled in by the builders
    _cartan_diagonals = ()

    # -- misc ---------------------------------------------------------------

    def basis_index(self, label):
        return self.labels.index(label)

    def __repr__(self):
        return "LieSuperalgebra(%s)" % self.name


# ---------------------------------------------------------------------------
# construction


def _gl_data(m, n):
    """Elementary-matrix data of gl(m|n): labels, parities, weights."""
    size = m + n
    labels = []
    parities = []
    weights = []
    for i in range(size):
        for j in range(size):
            labels.append((i, j))
            parities.append(((i >= m) + (j >= m)) % 2)
            coords = [ZERO] * size
            coords[i] += 1
            coords[j] -= 1
            weights.append(Weight(tuple(coords)))
    return labels, parities, weights


def _matrix_of(label, size):
    mat = linalg.zeros(size, size)
    mat[label[0]][label[1]] = ONE
    return mat


def _supertrace(mat, m):
    return sum(mat[i][i] for i in range(m)) - sum(mat[i][i] for i in range(m, len(mat)))


def _trace(mat):
    return sum(mat[i][i] for i in range(len(mat)))


class _MatrixRealization:
    """Realize an algebra as a span of matrices; derive structure constants.

    basis_mats: list of (m+n)x(m+n) matrices spanning the algebra.
    project: optional map applied after each bracket (for quotients).
    """

    def __init__(self, m, n, basis_mats, project=None):
        self.m = m
        self.n = n
        self.size = m + n
        self.mats = basis_mats
        self.project = project or (lambda mat: mat)
        flat = [self._flatten(mat) for mat in basis_mats]
        self._span = flat

    def _flatten(self, mat):
        return [x for row in mat for x in row]

    def coords_of(self, mat):
        c = linalg.solve_in_span(self._span, self._flatten(mat))
        if c is None:
            raise AlgebraError("matrix outside the chosen span")
        return c

    def parity_of(self, mat):
        even = any(mat[i][j] != 0 for i in range(self.size) for j in range(self.size)
                   if ((i >= self.m) + (j >= self.m)) % 2 == 0)
        odd = any(mat[i][j] != 0 for i in range(self.size) for j in range(self.size)
                  if ((i >= self.m) + (j >= self.m)) % 2 == 1)
        if even and odd:
            raise AlgebraError("basis matrix is not parity homogeneous")
        return 1 if odd else 0

    def bracket_table(self, parities):
        table = {}
        for a in range(len(self.mats)):
            for b in range(a, len(self.mats)):
                x, y = self.mats[a], self.mats[b]
                sign = -ONE if not (parities[a] and parities[b]) else ONE
                xy = linalg.mat_mul(x, y)
                yx = linalg.mat_mul(y, x)
                br = linalg.mat_add(xy, linalg.mat_scale(sign, yx))
                br = self.project(br)
                coeffs = self.coords_of(br)
                entry = {k: c for k, c in enumerate(coeffs) if c}
                if entry:
                    table[(a, b)] = entry
        return table


def build_algebra(family, m=None, n=None):
    """Construct a validated algebra.

    family: one of "sl" (even, give n), "gl", "slmn", "psl".
    Also accepts compact names like "sl2", "gl(1|1)", "sl(2|1)", "psl(2|2)".
    """
    family, m, n = _parse_algebra_name(family, m, n)
    if family == "sl":
        return _build_sl_even(m)
    if family == "gl":
        return _build_glmn(m, n)
    if family == "slmn":
        if m == n:
            raise AlgebraError(
                "sl(n|n) has a center; use psl(%d|%d) instead" % (m, n))
        return _build_slmn(m, n)
    if family == "psl":
        if m != n or n < 2:
            raise AlgebraError("psl requires m == n >= 2")
        return _build_psl(n)
    raise AlgebraError("unsupported-algebra: %r" % (family,))


def _parse_algebra_name(family, m, n):
    if isinstance(family, str) and (m is None and n is None):
        name = family.replace(" ", "")
        for prefix in ("psl", "gl", "sl"):
            if name.startswith(prefix):
                rest = name[len(prefix):].strip("()")
                if "|" in rest:
                    a, b = rest.split("|")
                    sizes = (int(a), int(b))
                elif rest:
                    sizes = (int(rest), 0)
                else:
                    sizes = (None, None)
                if prefix == "sl" and sizes[1] == 0:
                    return "sl", sizes[0], 0
                if prefix == "sl":
                    return "slmn", sizes[0], sizes[1]
                if prefix == "gl":
                    return "gl", sizes[0], sizes[1]
                return "psl", sizes[0], sizes[1]
        raise AlgebraError("unsupported-algebra: %r" % (family,))
    if family == "sl" and (n is None or n == 0):
        return "sl", m, 0
    if family == "sl":
        return "slmn", m, n
    return family, m, n


def _build_sl_even(n):
    if n is None or n < 2:
        raise AlgebraError("sl(n) needs n >= 2")
    m = n
    labels = [(i, j) for i in range(n) for j in range(n) if i != j]
    mats = [_matrix_of(lbl, n) for lbl in labels]
    cartan_labels = []
    for i in range(n - 1):
        mat = linalg.zeros(n, n)
        mat[i][i] = ONE
        mat[i + 1][i + 1] = -ONE
        mats.append(mat)
        cartan_labels.append(("h", i))
    labels = labels + cartan_labels
    parities = [0] * len(labels)
    real = _MatrixRealization(n, 0, mats)
    table = real.bracket_table(parities)
    # Killing form of sl(n): 2n tr(xy)
    form = [[2 * n * _trace(linalg.mat_mul(x, y)) for y in mats] for x in mats]
    weights = []
    for lbl in labels:
        if lbl[0] == "h":
            weights.append(zero_weight(n))
        else:
            coords = [ZERO] * n
            coords[lbl[0]] += 1
            coords[lbl[1]] -= 1
            weights.append(Weight(tuple(coords)))
    cartan = tuple(range(len(labels) - (n - 1), len(labels)))
    alg = LieSuperalgebra("sl(%d)" % n, "sl", n, 0, labels, parities, table,
                          form, cartan, weights, killing_normalized=True)
    alg._cartan_diagonals = tuple(
        tuple(mats[i][d][d] for d in range(n)) for i in cartan)
    _check_nondegenerate(alg)
    return alg


def _super_basis(m, n):
    size = m + n
    labels = [(i, j) for i in range(size) for j in range(size) if i != j]
    mats = [_matrix_of(lbl, size) for lbl in labels]
    cartan_labels = []
    for i in range(size - 1):
        mat = linalg.zeros(size, size)
        mat[i][i] = ONE
        # crossing the parity boundary uses a plus sign to stay supertraceless
        mat[i + 1][i + 1] = ONE if i == m - 1 else -ONE
        mats.append(mat)
        cartan_labels.append(("h", i))
    return labels, cartan_labels, mats


def _build_glmn(m, n):
    if m is None or n is None or m < 1 or n < 1:
        raise AlgebraError("gl(m|n) needs m, n >= 1")
    size = m + n
    labels, parities, weights = _gl_data(m, n)
    mats = [_matrix_of(lbl, size) for lbl in labels]
    real = _MatrixRealization(m, n, mats)
    table = real.bracket_table(parities)
    form = [[_supertrace(linalg.mat_mul(x, y), m) for y in mats] for x in mats]
    cartan = tuple(i for i, lbl in enumerate(labels) if lbl[0] == lbl[1])
    alg = LieSuperalgebra("gl(%d|%d)" % (m, n), "gl", m, n, labels, parities,
                          table, form, cartan, weights)
    alg._cartan_diagonals = tuple(
        tuple(mats[i][d][d] for d in range(size)) for i in cartan)
    _check_nondegenerate(alg)
    return alg


def _build_slmn(m, n):
    size = m + n
    labels, cartan_labels, mats = _super_basis(m, n)
    all_labels = labels + cartan_labels
    parities = []
    for lbl in all_labels:
        if lbl[0] == "h":
            parities.append(0)
        else:
            parities.append(((lbl[0] >= m) + (lbl[1] >= m)) % 2)
    real = _MatrixRealization(m, n, mats)
    table = real.bracket_table(parities)
    form = [[_supertrace(linalg.mat_mul(x, y), m) for y in mats] for x in mats]
    weights = []
    for lbl in all_labels:
        if lbl[0] == "h":
            weights.append(zero_weight(size))
        else:
            coords = [ZERO] * size
            coords[lbl[0]] += 1
            coords[lbl[1]] -= 1
            weights.append(Weight(tuple(coords)))
    cartan = tuple(range(len(labels), len(all_labels)))
    alg = LieSuperalgebra("sl(%d|%d)" % (m, n), "slmn", m, n, all_labels,
                          parities, table, form, cartan, weights)
    alg._cartan_diagonals = tuple(
        tuple(mats[i][d][d] for d in range(size)) for i in cartan)
    _check_nondegenerate(alg)
    return alg


def _build_psl(n):
    size = 2 * n
    m = n
    labels = [(i, j) for i in range(size) for j in range(size) if i != j]
    mats = [_matrix_of(lbl, size) for lbl in labels]
    # coset representatives: supertraceless with traceless upper-left block
    cartan_labels = []
    for i in range(n - 1):
        mat = linalg.zeros(size, size)
        mat[i][i] = ONE
        mat[i + 1][i + 1] = -ONE
        mats.append(mat)
        cartan_labels.append(("h", i))
    for j in range(n - 1):
        mat = linalg.zeros(size, size)
        mat[n + j][n + j] = ONE
        mat[n + j + 1][n + j + 1] = -ONE
        mats.append(mat)
        cartan_labels.append(("h", n - 1 + j))
    all_labels = labels + cartan_labels

    def project(mat):
        # subtract the multiple of the identity fixing tr(upper block) = 0
        t = sum(mat[i][i] for i in range(n)) / n
        if t == 0:
            return mat
        out = linalg.copy_matrix(mat)
        for i in range(size):
            out[i][i] -= t
        return out

    parities = []
    for lbl in all_labels:
        if lbl[0] == "h":
            parities.append(0)
        else:
            parities.append(((lbl[0] >= n) + (lbl[1] >= n)) % 2)
    real = _MatrixRealization(n, n, mats, project=project)
    table = real.bracket_table(parities)
    form = [[_supertrace(linalg.mat_mul(x, y), n) for y in mats] for x in mats]
    weights = []
    for lbl in all_labels:
        if lbl[0] == "h":
            weights.append(zero_weight(size))
        else:
            coords = [ZERO] * size
            coords[lbl[0]] += 1
            coords[lbl[1]] -= 1
            weights.append(Weight(tuple(coords)))
    cartan = tuple(range(len(labels), len(all_labels)))
    alg = LieSuperalgebra("psl(%d|%d)" % (n, n), "psl", n, n, all_labels,
                          parities, table, form, cartan, weights)
    alg._cartan_diagonals = tuple(
        tuple(mats[i][d][d] for d in range(size)) for i in cartan)
    _check_nondegenerate(alg)
    return alg


def _check_nondegenerate(alg):
    if linalg.rank(alg.form) != alg.dim:
        raise AlgebraError("degenerate-form: %s has form rank %d < %d"
                           % (alg.name, linalg.rank(alg.form), alg.dim))


# ---------------------------------------------------------------------------
# structure validation


def validate_structure(alg, max_triples=None):
    """Run the full structure check suite; returns a list of result dicts.

    Checks: super-antisymmetry, graded Jacobi over all basis triples, form
    supersymmetry/consistency/invariance, non-degeneracy, Cartan diagonality,
    and the dual-basis identity.
    """
    results = []
    p = alg.parity
    d = alg.dim

    def record(name, ok, counterexample=None):
        entry = {"check_name": name, "status": "pass" if ok else "fail"}
        if counterexample is not None:
            entry["counterexample"] = counterexample
        results.append(entry)

    ok, ce = True, None
    for i in range(d):
        for j in range(d):
            lhs = alg.bracket(i, j)
            sign = -ONE if not (p[i] and p[j]) else ONE
            rhs = {k: sign * c for k, c in alg.bracket(j, i).items()}
            if lhs != rhs:
                ok, ce = False, [alg.labels[i], alg.labels[j]]
                break
        if not ok:
            break
    record("super_antisymmetry", ok, ce)

    ok, ce = True, None
    for i in range(d):
        for j in range(d):
            bij = alg.bracket(i, j)
            for k in range(d):
                # [e_i,[e_j,e_k]] = [[e_i,e_j],e_k] + (-1)^{p_i p_j}[e_j,[e_i,e_k]]
                lhs = alg.bracket_vec({i: ONE}, alg.bracket(j, k))
                rhs = alg.bracket_vec(bij, {k: ONE})
                sgn = -ONE if (p[i] and p[j]) else ONE
                for idx, c in alg.bracket_vec({j: ONE}, alg.bracket(i, k)).items():
                    rhs[idx] = rhs.get(idx, ZERO) + sgn * c
                rhs = {a: b for a, b in rhs.items() if b}
                if lhs != rhs:
                    ok, ce = False, [alg.labels[i], alg.labels[j], alg.labels[k]]
                    break
            if not ok:
                break
        if not ok:
            break
    record("graded_jacobi", ok, ce)

    ok, ce = True, None
    for i in range(d):
        for j in range(d):
            sign = -ONE if (p[i] and p[j]) else ONE
            if alg.form[i][j] != sign * alg.form[j][i]:
                ok, ce = False, [alg.labels[i], alg.labels[j]]
                break
            if p[i] != p[j] and alg.form[i][j] != 0:
                ok, ce = False, [alg.labels[i], alg.labels[j]]
                break
        if not ok:
            break
    record("form_supersymmetry_consistency", ok, ce)

    ok, ce = True, None
    for i in range(d):
        for j in range(d):
            bij = alg.bracket(i, j)
            for k in range(d):
                lhs = sum(c * alg.form[idx][k] for idx, c in bij.items())
                rhs = alg.B_vec({i: ONE}, alg.bracket(j, k))
                if lhs != rhs:
                    ok, ce = False, [alg.labels[i], alg.labels[j], alg.labels[k]]
                    break
            if not ok:
                break
        if not ok:
            break
    record("form_invariance", ok, ce)

    record("form_nondegenerate", linalg.rank(alg.form) == d)

    ok, ce = True, None
    for h in alg.cartan:
        for j in range(d):
            br = alg.bracket(h, j)
            expect = alg.evaluate(alg.basis_weights[j], {h: ONE})
            want = {j: expect} if expect else {}
            if br != want:
                ok, ce = False, [alg.labels[h], alg.labels[j]]
                break
        if not ok:
            break
    record("cartan_diagonal_adjoint", ok, ce)

    dual = alg.dual_basis()
    ok, ce = True, None
    for a in range(d):
        for b in range(d):
            val = alg.B_vec({a: ONE}, dual[b])
            if val != (ONE if a == b else ZERO):
                ok, ce = False, [alg.labels[a], alg.labels[b]]
                break
        if not ok:
            break
    record("dual_basis_identity", ok, ce)

    return results
