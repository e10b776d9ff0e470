"""Relative cubic Dirac operators as exact block operators on M (x) Mbar(p).

The operator is assembled in the reduced form

    D = sum_a e^a (x) e_a + 1 (x) phi'_p      (a over a basis of p)

and every assembly is gated by the verification suite: l-equivariance and
the blockwise square identity

    D^2 = Omega_g - j(Omega_l) + (1/24) str_g(ad Omega_g)
                                - (1/24) str_l(ad Omega_l).

Blocks are indexed by total weights; operators record exact image blocks of
every materialized source weight, so compositions are exact wherever the
intermediate weights are materialized.
"""

from fractions import Fraction

from superdirac import linalg
from superdirac.algebra import AlgebraError
from superdirac.clifford import (CliffordError, OscillatorSpace, CWElement,
                                 nu_star, polarized_space,
                                 structure_tensor_quantized)
from superdirac.linalg import ZERO, ONE
from superdirac.subalgebra import full_view


class DiracError(ValueError):
    pass


class BlockOp:
    """Sparse weight-block operator: {(src_weight, dst_weight): matrix}."""

    def __init__(self, ctx, blocks, sources):
        self.ctx = ctx
        self.blocks = {k: m for k, m in blocks.items()
                       if m and any(any(x for x in row) for row in m)}
        self.sources = frozenset(sources)

    def block(self, src, dst):
        mat = self.blocks.get((src, dst))
        if mat is not None:
            return mat
        return linalg.zeros(self.ctx.dim(dst), self.ctx.dim(src))

    def add(self, other, scale=ONE):
        out = {k: [row[:] for row in m] for k, m in self.blocks.items()}
        for k, m in other.blocks.items():
            sm = linalg.mat_scale(scale, m)
            if k in out:
                out[k] = linalg.mat_add(out[k], sm)
            else:
                out[k] = sm
        return BlockOp(self.ctx, out, self.sources & other.sources)

    def scale(self, c):
        return BlockOp(self.ctx,
                       {k: linalg.mat_scale(c, m) for k, m in self.blocks.items()},
                       self.sources)

    def compose(self, other):
        """self . other; exact for sources whose other-images are sources of
        self."""
        for (src, mid) in other.blocks:
            if mid not in self.sources:
                raise DiracError("composition through unmaterialized weight "
                                 "%s" % (mid,))
        out = {}
        for (src, mid), m1 in other.blocks.items():
            for (mid2, dst), m2 in self.blocks.items():
                if mid2 != mid:
                    continue
                prod = linalg.mat_mul(m2, m1)
                key = (src, dst)
                if key in out:
                    out[key] = linalg.mat_add(out[key], prod)
                else:
                    out[key] = prod
        return BlockOp(self.ctx, out, other.sources)

    def transpose(self):
        out = {}
        for (src, dst), m in self.blocks.items():
            out[(dst, src)] = linalg.transpose(m)
        return BlockOp(self.ctx, out, frozenset(
            dst for (_, dst) in self.blocks) | self.sources)

    def is_zero_on(self, weights):
        for (src, dst), m in self.blocks.items():
            if src in weights and not linalg.is_zero_matrix(m):
                return False
        return True

    def weight_preserving(self):
        return all(src == dst for (src, dst) in self.blocks)

    def diagonal_block(self, nu):
        return self.block(nu, nu)

    def kernel_per_weight(self, weights):
        """{weight: kernel basis} for a weight-preserving operator."""
        if not self.weight_preserving():
            raise DiracError("kernel_per_weight needs a weight-preserving op")
        out = {}
        for nu in weights:
            dim = self.ctx.dim(nu)
            if dim == 0:
                continue
            mat = self.block(nu, nu)
            null = linalg.nullspace(mat)
            if null:
                out[nu] = null
        return out


def identity_op(ctx, weights, scalar=ONE):
    blocks = {}
    for nu in weights:
        d = ctx.dim(nu)
        if d:
            blocks[(nu, nu)] = linalg.mat_scale(scalar, linalg.identity(d))
    return BlockOp(ctx, blocks, weights)


class PairContext:
    """Operators of a quadratic pair (g, l) acting on M (x) Mbar(p).

    module: a SimpleModule for g; l_view: the subalgebra.  Basis vectors of
    the total-weight-nu block are triples (module weight, module index,
    oscillator monomial); their module parity is the module parity plus the
    monomial length.
    """

    def __init__(self, module, l_view):
        self.module = module
        self.alg = module.alg
        self.l_view = l_view
        self.system = l_view.parent_system
        p_idx = l_view.p_indices()
        if len(p_idx) % 2:
            raise DiracError("odd-dimensional-p")
        self.pol = polarized_space(self.alg, l_view)
        self.osc = OscillatorSpace(self.pol)
        self.phi = structure_tensor_quantized(self.pol)
        self._nu_cache = {}
        self._basis_cache = {}
        self.fdv_g = full_view(self.alg, self.system).fdv_scalar()
        self.fdv_l = l_view.fdv_scalar()
        self._module_parity = {
            mu: module.parities(mu) for mu in module.weights}

    # -- bases ---------------------------------------------------------------

    def basis(self, nu):
        """[(module weight, module basis index, monomial)] of total weight nu."""
        cached = self._basis_cache.get(nu)
        if cached is not None:
            return cached
        out = []
        for mu in self.module.weights:
            target = nu - mu
            for mono in self.osc.slice(target):
                for i in range(self.module.weight_dim(mu)):
                    out.append((mu, i, mono))
        out.sort(key=lambda b: (b[0].sort_key(), b[2], b[1]))
        self._basis_cache[nu] = out
        return out

    def dim(self, nu):
        return len(self.basis(nu))

    def parity(self, basis_elem):
        mu, i, mono = basis_elem
        return (self._module_parity[mu][i] + len(mono)) % 2

    def parities(self, nu):
        return [self.parity(b) for b in self.basis(nu)]

    def sdim_block(self, nu):
        pars = self.parities(nu)
        return len(pars) - 2 * sum(pars)

    def nu_action(self, gen):
        el = self._nu_cache.get(gen)
        if el is None:
            el = nu_star(self.pol, {gen: ONE})
            self._nu_cache[gen] = el
        return el

    # -- assembly ------------------------------------------------------------

    def assemble(self, terms, src_weights):
        """BlockOp of sum over terms (uvec | None, cwelem | None).

        uvec is a sparse single-weight algebra element acting on the module
        factor; cwelem acts on the oscillator factor with the Koszul sign
        (-1)^{p(c) p(m)} for its intrinsic parity p(c).
        """
        blocks = {}
        srcs = list(src_weights)
        for uvec, celem in terms:
            cpar = 0
            if celem is not None:
                bid = celem.bidegree()
                if bid is None:
                    raise DiracError("inhomogeneous Clifford factor")
                cpar = bid[1]
            ushift = None
            if uvec is not None:
                shifts = {self.alg.basis_weights[i] for i in uvec}
                if len(shifts) != 1:
                    raise DiracError("mixed-weight module factor")
                ushift = shifts.pop()
            ublocks = (self.module.action_vec(uvec)
                       if uvec is not None else None)
            for nu in srcs:
                bas = self.basis(nu)
                if not bas:
                    continue
                col_of = {b: j for j, b in enumerate(bas)}
                for b, j in col_of.items():
                    mu, i, mono = b
                    # module factor
                    if uvec is None:
                        mimages = [(mu, i, ONE)]
                    else:
                        mat = ublocks.get(mu)
                        tgt = mu + ushift
                        mimages = []
                        if mat:
                            for i2 in range(len(mat)):
                                if mat[i2][i]:
                                    mimages.append((tgt, i2, mat[i2][i]))
                    if not mimages:
                        continue
                    # oscillator factor
                    if celem is None:
                        cimages = {mono: ONE}
                    else:
                        cimages = self.osc.act(celem, mono)
                        if cpar and self._module_parity[mu][i] % 2:
                            cimages = {m2: -c for m2, c in cimages.items()}
                    for (mu2, i2, cm) in mimages:
                        for mono2, cc in cimages.items():
                            dst = mu2 + self.osc.weight_of(mono2)
                            dbas = self.basis(dst)
                            key = (nu, dst)
                            mat = blocks.get(key)
                            if mat is None:
                                mat = linalg.zeros(len(dbas), len(bas))
                                blocks[key] = mat
                            row = dbas.index((mu2, i2, mono2))
                            mat[row][j] += cm * cc
        return BlockOp(self, blocks, srcs)

    def diag_op(self, x_sparse, src_weights):
        """gamma^W(x) = x (x) 1 + 1 (x) nu(x) for x in l (single weight)."""
        combined = CWElement(self.pol, {})
        for gen, c in x_sparse.items():
            combined = combined + self.nu_action(gen).scale(c)
        return self.assemble([(x_sparse, None), (None, combined)], src_weights)

    def dirac_op(self, src_weights):
        duals = self.pol.dual_coords()
        terms = []
        for a in range(self.pol.size):
            dual_vec = {}
            for b, cb in enumerate(duals[a]):
                if cb:
                    for idx, ci in self.pol.vectors[b].items():
                        dual_vec[idx] = dual_vec.get(idx, ZERO) + cb * ci
            terms.append((dual_vec, self.pol.gen(a)))
        if not self.phi.is_zero():
            terms.append((None, self.phi))
        return self.assemble(terms, src_weights)

    def casimir_g_op(self, src_weights):
        """Omega_g (x) 1 from precomputed module Casimir blocks."""
        gview = full_view(self.alg, self.system)
        mblocks = self.module.casimir_blocks(gview.casimir_pairs())
        blocks = {}
        for nu in src_weights:
            bas = self.basis(nu)
            if not bas:
                continue
            mat = linalg.zeros(len(bas), len(bas))
            for j, (mu, i, mono) in enumerate(bas):
                sub = mblocks.get(mu)
                if sub is None:
                    continue
                for i2 in range(len(sub)):
                    if sub[i2][i]:
                        row = bas.index((mu, i2, mono))
                        mat[row][j] += sub[i2][i]
            blocks[(nu, nu)] = mat
        return BlockOp(self, blocks, src_weights)

    def casimir_l_diag_op(self, src_weights):
        """j(Omega_l): the diagonal Casimir sum_a diag(e^a) diag(e_a)."""
        ext = self.extend_by_l_roots(src_weights)
        total = None
        for dual, vec in self.l_view.dual_pairs():
            right = self.diag_op(vec, src_weights)
            left = self.diag_op(dual, ext)
            prod = left.compose(right)
            total = prod if total is None else total.add(prod)
        return total

    def extend_by_l_roots(self, weights):
        ext = set(weights)
        for w in weights:
            for a in self.l_view.roots:
                ext.add(w + a)
        return sorted(ext, key=lambda x: x.sort_key())

    # -- verification ----------------------------------------------------

    def verify(self, test_weights):
        """l-equivariance and the square identity on the given blocks."""
        inner = sorted(set(test_weights), key=lambda w: w.sort_key())
        ext = self.extend_by_l_roots(inner)
        dirac_ext = self.dirac_op(ext)
        # (i) [D, gamma^W(x)] = 0 (colour commutator is the plain one here)
        for idx in self.l_view.indices:
            x = {idx: ONE}
            xop = self.diag_op(x, inner)
            ext_x = self.diag_op(x, ext)
            left = dirac_ext.compose(xop)
            right = ext_x.compose(self.dirac_op(inner))
            comm = left.add(right, scale=-ONE)
            if not comm.is_zero_on(set(inner)):
                raise DiracError(
                    "verification-failure: [D, %s] != 0"
                    % (self.alg.labels[idx],))
        # (ii) D^2 equals the square formula blockwise
        dsq = dirac_ext.compose(self.dirac_op(inner))
        ref = self.casimir_g_op(inner)
        ref = ref.add(self.casimir_l_diag_op(inner), scale=-ONE)
        const = self.fdv_g - self.fdv_l
        ref = ref.add(identity_op(self, inner, const))
        diff = dsq.add(ref, scale=-ONE)
        for nu in inner:
            mat = diff.block(nu, nu)
            if not linalg.is_zero_matrix(mat):
                raise DiracError(
                    "verification-failure: square formula fails at %s" % (nu,))
        return True


def cohomology(ctx, operator, weights):
    """H(T) = ker T / (ker T cap im T) over the flattened weight blocks.

    Returns (kernel_basis, image_intersection_basis, quotient_info) where
    quotient_info lists (weight, parity) data of a chosen complement basis.
    All vectors are in the flattened coordinate order of the given weights.
    """
    weights = sorted(set(weights), key=lambda w: w.sort_key())
    index = []
    offsets = {}
    for nu in weights:
        offsets[nu] = len(index)
        index.extend((nu, k) for k in range(ctx.dim(nu)))
    total = len(index)
    if total == 0:
        return [], [], []
    mat = linalg.zeros(total, total)
    for (src, dst), m in operator.blocks.items():
        if src not in offsets:
            continue
        if dst not in offsets:
            if not linalg.is_zero_matrix(m):
                raise DiracError("operator leaves the weight window")
            continue
        o_s, o_d = offsets[src], offsets[dst]
        for r in range(len(m)):
            for c in range(len(m[0])):
                if m[r][c]:
                    mat[o_d + r][o_s + c] += m[r][c]
    kernel = linalg.nullspace(mat)
    image = [col for col in linalg.transpose(mat)]
    # image basis
    img_rref, img_piv = linalg.rref(image)
    image_basis = [image[i] for i in img_piv]
    # intersection ker cap im via joint solve
    inter = _span_intersection(kernel, image_basis)
    # complement of inter inside kernel
    quotient = _complement_in_span(kernel, inter)
    info = []
    for v in quotient:
        supp = [k for k, x in enumerate(v) if x]
        wt = index[supp[0]][0]
        par = None
        pars = {ctx.parity((ctx.basis(index[k][0])[index[k][1]]))
                for k in supp}
        par = pars.pop() if len(pars) == 1 else None
        info.append({"weight": wt, "parity": par, "vector": v})
    return kernel, inter, info


def _span_intersection(a_basis, b_basis):
    if not a_basis or not b_basis:
        return []
    stacked = [list(v) for v in a_basis] + [list(v) for v in b_basis]
    rel = linalg.nullspace(linalg.transpose(stacked))
    out = []
    for r in rel:
        vec = [ZERO] * len(a_basis[0])
        for i, c in enumerate(r[: len(a_basis)]):
            if c:
                for k in range(len(vec)):
                    vec[k] += c * a_basis[i][k]
        if any(x != 0 for x in vec):
            out.append(vec)
    rrefd, piv = linalg.rref(out) if out else ([], [])
    return [out[i] for i in piv]


def _complement_in_span(big, small):
    """Vectors of big extending a basis of span(small) to span(big)."""
    chosen = [list(v) for v in small]
    out = []
    r = linalg.rank(chosen) if chosen else 0
    for v in big:
        trial = chosen + [list(v)]
        r2 = linalg.rank(trial)
        if r2 > r:
            chosen = trial
            r = r2
            out.append(list(v))
    return out
