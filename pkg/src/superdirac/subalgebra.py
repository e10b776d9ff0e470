"""Quadratic subalgebras l of a built algebra g, given by basis index subsets.

All supported subalgebras contain the full Cartan subalgebra, so weights of
l-modules live in the same coordinate lattice as weights of g-modules.
"""

from superdirac import linalg
from superdirac.algebra import AlgebraError
from superdirac.linalg import ZERO, ONE
from superdirac.weights import PositiveSystem, distinguished_system


class SubalgebraView:
    """A bracket-closed, B-nondegenerate span of basis elements containing h."""

    def __init__(self, alg, indices, name, system=None):
        self.alg = alg
        self.name = name
        self.indices = tuple(sorted(set(indices)))
        index_set = set(self.indices)
        if not set(alg.cartan) <= index_set:
            raise AlgebraError("subalgebra must contain the Cartan subalgebra")
        for i in self.indices:
            for j in self.indices:
                if not set(alg.bracket(i, j)) <= index_set:
                    raise AlgebraError(
                        "not a subalgebra: [%s, %s] leaves the span"
                        % (alg.labels[i], alg.labels[j]))
        self.gram = [[alg.form[i][j] for j in self.indices] for i in self.indices]
        if linalg.rank(self.gram) != len(self.indices):
            raise AlgebraError("form degenerates on subalgebra %r" % name)
        parent_system = system or distinguished_system(alg)
        self.parent_system = parent_system
        self.roots = tuple(a for a in alg.roots
                           if set(alg.root_space[a]) <= index_set)
        self.positives = tuple(a for a in parent_system.positives
                               if a in set(self.roots))
        self.rho0, self.rho1, self.rho = _weyl_vectors(alg, self, self.positives)
        self._dual = None

    @property
    def dim(self):
        return len(self.indices)

    def is_full(self):
        return self.dim == self.alg.dim

    def odd_indices(self):
        return tuple(i for i in self.indices if self.alg.parity[i] == 1)

    def positive_root_indices(self):
        out = []
        for a in self.positives:
            out.extend(i for i in self.alg.root_space[a]
                       if i in set(self.indices))
        return tuple(sorted(out))

    def negative_root_indices(self):
        out = []
        for a in self.positives:
            out.extend(i for i in self.alg.root_space[-a]
                       if i in set(self.indices))
        return tuple(sorted(out))

    def p_indices(self):
        """Basis indices of the orthocomplement p = l^perp (root vectors)."""
        mine = set(self.indices)
        return tuple(i for i in range(self.alg.dim) if i not in mine)

    def dual_pairs(self):
        """[(e^a, e_a)] with both sides sparse vectors over parent indices."""
        if self._dual is None:
            inv = linalg.inverse(self.gram)
            pairs = []
            for a, ia in enumerate(self.indices):
                dual = {self.indices[b]: inv[b][a]
                        for b in range(len(self.indices)) if inv[b][a]}
                pairs.append((dual, {ia: ONE}))
            self._dual = pairs
        return self._dual

    def casimir_pairs(self):
        return self.dual_pairs()

    def fdv_scalar(self):
        """(1/24) str_l(ad_l Omega_l), computed from structure constants."""
        alg = self.alg
        total = ZERO
        index_pos = {idx: k for k, idx in enumerate(self.indices)}
        for dual, basis in self.dual_pairs():
            # supertrace over l of ad(dual) ad(basis)
            for j in self.indices:
                inner = alg.bracket_vec(basis, {j: ONE})
                outer = alg.bracket_vec(dual, inner)
                coeff = outer.get(j, ZERO)
                if coeff:
                    sign = -ONE if alg.parity[j] else ONE
                    total += sign * coeff
        return total / 24

    def __repr__(self):
        return "SubalgebraView(%s in %s)" % (self.name, self.alg.name)


def _weyl_vectors(alg, view, positives):
    from superdirac.algebra import zero_weight
    half_even = zero_weight(alg.coord_len)
    half_odd = zero_weight(alg.coord_len)
    for a in positives:
        idx = alg.root_space[a][0]
        if alg.parity[idx]:
            half_odd = half_odd + a
        else:
            half_even = half_even + a
    from fractions import Fraction
    half = Fraction(1, 2)
    return (half_even.scale(half), half_odd.scale(half),
            (half_even - half_odd).scale(half))


def full_view(alg, system=None):
    return SubalgebraView(alg, range(alg.dim), "g", system=system)


def even_view(alg, system=None):
    idx = [i for i in range(alg.dim) if alg.parity[i] == 0]
    return SubalgebraView(alg, idx, "g0", system=system)


def cartan_view(alg, system=None):
    return SubalgebraView(alg, alg.cartan, "h", system=system)


def levi_view(alg, block_sizes, system=None):
    """Block-diagonal Levi subalgebra from consecutive index blocks.

    block_sizes partitions the m+n matrix indices in their natural order;
    the view is spanned by the Cartan subalgebra and all root vectors E_ij
    with i, j in the same block.
    """
    size = alg.m + alg.n
    if sum(block_sizes) != size or any(s < 1 for s in block_sizes):
        raise AlgebraError("levi blocks must partition %d indices" % size)
    block_of = {}
    pos = 0
    for b, s in enumerate(block_sizes):
        for i in range(pos, pos + s):
            block_of[i] = b
        pos += s
    indices = list(alg.cartan)
    for k, lbl in enumerate(alg.labels):
        if lbl[0] == "h" or lbl[0] == lbl[1]:
            continue
        if block_of[lbl[0]] == block_of[lbl[1]]:
            indices.append(k)
    name = "levi:" + ",".join(str(s) for s in block_sizes)
    return SubalgebraView(alg, indices, name, system=system)


def view_from_spec(alg, spec, system=None):
    """Parse h | g0 | g | levi:s1,s2,... into a view."""
    if spec == "h":
        return cartan_view(alg, system)
    if spec == "g0":
        return even_view(alg, system)
    if spec == "g":
        return full_view(alg, system)
    if spec.startswith("levi:"):
        sizes = [int(s) for s in spec[len("levi:"):].split(",")]
        return levi_view(alg, sizes, system=system)
    raise AlgebraError("unknown subalgebra spec %r" % spec)


# ---------------------------------------------------------------------------
# even part factorization


class EvenFactor:
    """A simple or abelian factor of the even part of the parent algebra.

    vectors: homogeneous basis of the factor as sparse dicts over parent
    indices.  Duals are with respect to the restricted invariant form.
    """

    def __init__(self, alg, vectors, roots, abelian, tag):
        self.alg = alg
        self.vectors = vectors
        self.roots = tuple(roots)
        self.abelian = abelian
        self.tag = tag
        gram = [[alg.B_vec(u, v) for v in vectors] for u in vectors]
        if linalg.rank(gram) != len(vectors):
            raise AlgebraError("degenerate factor form (%s)" % tag)
        inv = linalg.inverse(gram)
        self.dual_vectors = []
        for a in range(len(vectors)):
            dual = {}
            for b in range(len(vectors)):
                if inv[b][a]:
                    for idx, c in vectors[b].items():
                        dual[idx] = dual.get(idx, ZERO) + inv[b][a] * c
            self.dual_vectors.append({k: v for k, v in dual.items() if v})

    def casimir_pairs(self):
        return list(zip(self.dual_vectors, self.vectors))

    def fdv_scalar(self):
        """(1/24) str over the factor of ad(Omega_factor)."""
        alg = self.alg
        flat = [_sparse_to_dense(v, alg.dim) for v in self.vectors]
        total = ZERO
        for dual, basis in self.casimir_pairs():
            for j, vj in enumerate(self.vectors):
                inner = alg.bracket_vec(basis, vj)
                outer = alg.bracket_vec(dual, inner)
                coords = linalg.solve_in_span(
                    flat, _sparse_to_dense(outer, alg.dim))
                if coords is None:
                    raise AlgebraError("factor is not ad-closed (%s)" % self.tag)
                if coords[j]:
                    total += coords[j]   # factors are purely even
        return total / 24

def _sparse_to_dense(vec, dim):
    out = [ZERO] * dim
    for k, c in vec.items():
        out[k] = c
    return out


def even_factors(alg, system=None):
    """Simple factors plus the abelian factor of the even part of alg.

    Returns (factors, abelian_factor_or_None); each simple factor consists of
    its even root vectors and the span of their coroots.
    """
    system = system or distinguished_system(alg)
    even_roots = [a for a in alg.roots if system.root_parity(a) == 0]
    # connected components under non-orthogonality
    comps = []
    remaining = set(even_roots)
    while remaining:
        seed = sorted(remaining, key=lambda w: w.sort_key())[0]
        comp = {seed}
        frontier = [seed]
        while frontier:
            cur = frontier.pop()
            for other in list(remaining):
                if other in comp:
                    continue
                if alg.pair(cur, other) != 0:
                    comp.add(other)
                    frontier.append(other)
        remaining -= comp
        comps.append(sorted(comp, key=lambda w: w.sort_key()))

    factors = []
    coroot_vectors = []
    for tag, comp in enumerate(comps):
        vectors = []
        h_candidates = []
        for root in comp:
            for idx in alg.root_space[root]:
                vectors.append({idx: ONE})
        for root in comp:
            pos_idx = alg.root_space[root][0]
            neg_idx = alg.root_space[-root][0]
            h_vec = alg.bracket(pos_idx, neg_idx)
            h_candidates.append(_sparse_to_dense(h_vec, alg.dim))
        basis_rows, _ = linalg.rref(h_candidates)
        h_basis = [row for row in basis_rows if any(c != 0 for c in row)]
        for row in h_basis:
            vec = {k: c for k, c in enumerate(row) if c}
            vectors.append(vec)
            coroot_vectors.append(row)
        factors.append(EvenFactor(alg, vectors, comp, abelian=False,
                                  tag="factor%d" % tag))

    # abelian part: Cartan vectors orthogonal to all coroots
    h_dim = len(alg.cartan)
    if coroot_vectors:
        pairing_rows = []
        for row in coroot_vectors:
            hvec = {k: c for k, c in enumerate(row) if c}
            pairing_rows.append([
                alg.B_vec(hvec, {h: ONE}) for h in alg.cartan])
        null = linalg.nullspace(pairing_rows)
    else:
        null = [list(r) for r in linalg.identity(h_dim)]
    abelian = None
    if null:
        vectors = []
        for v in null:
            vec = {alg.cartan[k]: c for k, c in enumerate(v) if c}
            vectors.append(vec)
        abelian = EvenFactor(alg, vectors, (), abelian=True, tag="abelian")
    return factors, abelian
