"""Semisimple perturbations: Laplace families, the modified even family,
energy operators, and the detecting family.

For an even simple algebra the Laplace family acts on L(Lambda) (x) S by the
weight scalar |Lambda+rho|^2 - |nu|^2 + |nu+xi|^2; the scalar route is cross
checked against the assembled relative Dirac operator.  For a super algebra
the family of the even subalgebra acts on the tensor realization

    L(Lambda) (x) S (x) C_{-rho1},

where S is the even spin module realized as the simple g0-module of highest
weight rho0 (parity is disregarded on this realization; reported kernels sit
on the top spin line, which is even).
"""

import itertools
from fractions import Fraction

from superdirac import linalg
from superdirac.algebra import AlgebraError, Weight, zero_weight
from superdirac.linalg import ZERO, ONE
from superdirac.modules import SimpleModule, weyl_dimension
from superdirac.subalgebra import even_view, even_factors
from superdirac.weights import WeylGroup


class FamilyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# even simple case


def spin_weight_multiplicities(ctx):
    """Weights with multiplicity and parity split of the oscillator module
    restricted to finitely many weights (even case: the full spin module)."""
    alg = ctx.alg
    positives = ctx.pol.p_positive_roots
    out = {}
    for r in range(len(positives) + 1):
        for subset in itertools.combinations(positives, r):
            w = ctx.osc.vacuum_weight()
            for a in subset:
                w = w - a
            even, odd = out.get(w, (0, 0))
            if r % 2:
                out[w] = (even, odd + 1)
            else:
                out[w] = (even + 1, odd)
    return out


def laplace_scalar(alg, lam, rho, nu, xi):
    return (alg.pair(lam + rho, lam + rho) - alg.pair(nu, nu)
            + alg.pair(nu + xi, nu + xi))


def laplace_kernel(module, ctx, xi, cross_check=False):
    """Kernel of the Laplace family member at xi, for an even simple algebra.

    Returns {"kernel": [{weight, dim, parity_split}], "criterion": bool}
    where the criterion is xi in W(-Lambda-rho).
    """
    alg = module.alg
    if alg.n != 0 and alg.family != "sl":
        raise FamilyError("laplace_kernel applies to even simple algebras")
    xi = alg.weight(xi.coords)
    system = ctx.system
    rho = system.rho
    spin = spin_weight_multiplicities(ctx)
    entries = []
    for mu in module.weights:
        dmu = module.weight_dim(mu)
        pars_mu = module.parities(mu)
        for w, (ev, od) in spin.items():
            nu = mu + w
            if laplace_scalar(alg, module.lam, rho, nu, xi) == 0:
                even = dmu * ev
                odd = dmu * od
                entries.append((nu, dmu * (ev + od), even, odd))
    merged = {}
    for nu, dim, ev, od in entries:
        d0, e0, o0 = merged.get(nu, (0, 0, 0))
        merged[nu] = (d0 + dim, e0 + ev, o0 + od)
    kernel = [{"weight": nu, "dim": d, "parity_split": (e, o)}
              for nu, (d, e, o) in sorted(
                  merged.items(), key=lambda kv: kv[0].sort_key())]
    if cross_check:
        _laplace_matrix_check(module, ctx, xi, merged)
    W = WeylGroup(alg)
    point = -(module.lam + rho)
    criterion = W.contains_functional(point, xi)
    return {"kernel": kernel, "criterion_satisfied": criterion}


def _laplace_matrix_check(module, ctx, xi, merged):
    """Assemble Delta(xi) = D_{g,h}^2 + |nu+xi|^2 on candidate blocks and
    compare kernels against the scalar route."""
    alg = module.alg
    weights = sorted(merged, key=lambda w: w.sort_key())
    if not weights:
        # verify a sample block is nonsingular
        sample = [module.lam + ctx.osc.vacuum_weight()]
        weights_all = sample
    else:
        weights_all = weights
    D = ctx.dirac_op(weights_all)
    Dsq = D.compose(D)
    for nu in weights_all:
        d = ctx.dim(nu)
        if d == 0:
            continue
        mat = [row[:] for row in Dsq.block(nu, nu)]
        shift = alg.pair(nu + xi, nu + xi)
        for i in range(d):
            mat[i][i] += shift
        null = linalg.nullspace(mat)
        want = merged.get(nu, (0,))[0]
        if len(null) != want:
            raise FamilyError("scalar and matrix Laplace kernels disagree "
                              "at %s" % (nu,))


# ---------------------------------------------------------------------------
# tensor realization for the super case


class TensorSpinSpace:
    """L(Lambda) (x) S(g0-spin realization) (x) C_{-rho1}."""

    def __init__(self, module, system):
        self.module = module
        self.alg = module.alg
        self.system = system
        self.g0 = even_view(self.alg, system)
        self.spin = SimpleModule(self.g0, self.g0.rho0)
        expected = 2 ** len(self.g0.positives)
        if self.spin.dim != expected:
            raise FamilyError("even spin module has dimension %d != %d"
                              % (self.spin.dim, expected))
        self.shift = -system.rho1
        self._basis_cache = {}
        self.weights = sorted(
            {mu + w + self.shift
             for mu in module.weights for w in self.spin.weights},
            key=lambda x: x.sort_key())

    def basis(self, nu):
        cached = self._basis_cache.get(nu)
        if cached is not None:
            return cached
        out = []
        for mu in self.module.weights:
            target = nu - mu - self.shift
            ds = self.spin.weight_dim(target)
            if ds == 0:
                continue
            for i in range(self.module.weight_dim(mu)):
                for j in range(ds):
                    out.append((mu, i, target, j))
        out.sort(key=lambda b: (b[0].sort_key(), b[2].sort_key(), b[1], b[3]))
        self._basis_cache[nu] = out
        return out

    def dim(self, nu):
        return len(self.basis(nu))

    def module_parity(self, b):
        mu, i, _, _ = b
        return self.module.parities(mu)[i]

    def total_weight_pair(self, nu, xi):
        return self.alg.pair(nu, xi)

    def diag_action_block(self, gen, nu):
        """Matrix of the diagonal g0-action of a basis generator on the nu
        block, mapping into the nu + wt(gen) block."""
        alg = self.alg
        shift = alg.basis_weights[gen]
        src = self.basis(nu)
        dst = self.basis(nu + shift)
        index = {b: r for r, b in enumerate(dst)}
        mat = linalg.zeros(len(dst), len(src))
        mblocks = self.module.action(gen)
        sblocks = self.spin.action(gen)
        is_cartan = gen in set(alg.cartan)
        for c, (mu, i, sw, j) in enumerate(src):
            if is_cartan:
                val = (alg.evaluate(mu, {gen: ONE})
                       + alg.evaluate(sw, {gen: ONE})
                       + alg.evaluate(self.shift, {gen: ONE}))
                if val:
                    mat[index[(mu, i, sw, j)]][c] += val
                continue
            mmat = mblocks.get(mu)
            if mmat:
                for i2 in range(len(mmat)):
                    if mmat[i2][i]:
                        r = index.get((mu + shift, i2, sw, j))
                        if r is None:
                            raise FamilyError("diagonal action escapes basis")
                        mat[r][c] += mmat[i2][i]
            smat = sblocks.get(sw)
            if smat:
                for j2 in range(len(smat)):
                    if smat[j2][j]:
                        r = index.get((mu, i, sw + shift, j2))
                        if r is None:
                            raise FamilyError("diagonal action escapes basis")
                        mat[r][c] += smat[j2][j]
        return mat

    def module_factor_block(self, mblocks, nu):
        """Lift {mu: matrix} acting on the module factor to the nu block."""
        bas = self.basis(nu)
        mat = linalg.zeros(len(bas), len(bas))
        index = {b: r for r, b in enumerate(bas)}
        for c, (mu, i, sw, j) in enumerate(bas):
            sub = mblocks.get(mu)
            if sub is None:
                continue
            for i2 in range(len(sub)):
                if sub[i2][i]:
                    mat[index[(mu, i2, sw, j)]][c] += sub[i2][i]
        return mat


class EvenFamily:
    """The factorwise Laplace family of g0 on the tensor realization."""

    def __init__(self, module, system):
        self.space = TensorSpinSpace(module, system)
        self.alg = module.alg
        self.module = module
        self.system = system
        self.factors, self.abelian = even_factors(self.alg, system)
        self._factor_data = []
        for fac in self.factors:
            omega_mod = module.casimir_blocks(fac.casimir_pairs())
            fdv = fac.fdv_scalar()
            basis_roots = self._root_span_basis(fac.roots)
            self._factor_data.append((fac, omega_mod, fdv, basis_roots))
        if self.abelian:
            ab_basis = self._abelian_span_basis()
        else:
            ab_basis = None
        self._abelian_basis = ab_basis

    def _root_span_basis(self, roots):
        rows = [list(r.coords) for r in roots]
        rr, piv = linalg.rref(rows)
        basis = [Weight(tuple(row)) for row in rr if any(c != 0 for c in row)]
        return basis

    def _abelian_span_basis(self):
        """h*-directions of the abelian factor: orthogonal to all factor
        roots, inside the span of all weights of interest."""
        rows = []
        for fac in self.factors:
            rows.extend(list(r.coords) for r in fac.roots)
        null = linalg.nullspace(
            [[s * c for s, c in zip(self.alg._wsigns, row)] for row in rows])
        return [Weight(tuple(v)) for v in null]

    def project(self, w, basis):
        """B-orthogonal projection of w onto the span of basis weights."""
        if not basis:
            return zero_weight(self.alg.coord_len)
        gram = [[self.alg.pair(u, v) for v in basis] for u in basis]
        rhs = [self.alg.pair(w, u) for u in basis]
        sol = linalg.solve(gram, rhs)
        if sol is None:
            raise FamilyError("projection failed")
        out = zero_weight(self.alg.coord_len)
        for c, b in zip(sol, basis):
            out = out + b.scale(c)
        return out

    def factor_components(self, xi):
        """[(factor_projection, factor)] plus the abelian remainder."""
        comps = []
        rest = xi
        for (fac, _, _, basis_roots) in self._factor_data:
            comp = self.project(xi, basis_roots)
            comps.append(comp)
            rest = rest - comp
        return comps, rest

    def delta_blocks(self, xi, nu):
        """[matrix] of each factor Laplacian at xi on the nu block."""
        space = self.space
        bas = space.basis(nu)
        d = len(bas)
        comps, rest = self.factor_components(xi)
        mats = []
        for (fac, omega_mod, fdv, _), comp in zip(self._factor_data, comps):
            mat = space.module_factor_block(omega_mod, nu)
            for c, (mu, i, sw, j) in enumerate(bas):
                nu_ls = mu + sw
                diag = (fdv + 2 * self.alg.pair(nu_ls, comp)
                        + self.alg.pair(comp, comp))
                mat[c][c] += diag
            mats.append(mat)
        if self.abelian is not None:
            mat = linalg.zeros(d, d)
            ab_basis = self._abelian_basis
            for c, (mu, i, sw, j) in enumerate(bas):
                nu_ls = mu + sw
                nu0 = self.project(nu_ls, ab_basis)
                vec = nu0 + rest
                mat[c][c] += self.alg.pair(vec, vec)
            mats.append(mat)
        return mats

    def modified_kernel(self, xi):
        """ker of the modified family = intersection of factor kernels.

        Returns {"kernel": [{weight, dim, parity_split}],
                 "criterion_satisfied": bool, "orbit_points": [...]}.
        """
        xi = self.alg.weight(xi.coords)
        out = []
        for nu in self.space.weights:
            d = self.space.dim(nu)
            if d == 0:
                continue
            mats = self.delta_blocks(xi, nu)
            stacked = linalg.stack_rows(mats)
            null = linalg.nullspace(stacked)
            if null:
                pars = [self.space.module_parity(b) for b in self.space.basis(nu)]
                ev = od = 0
                for v in null:
                    vp = {pars[k] for k, c in enumerate(v) if c}
                    if vp == {0}:
                        ev += 1
                    elif vp == {1}:
                        od += 1
                    else:
                        ev = od = None
                        break
                out.append({"weight": nu, "dim": len(null),
                            "parity_split": (ev, od)})
        mults = self.module.restriction_multiplicities(
            even_view(self.alg, self.system))
        W = WeylGroup(self.alg)
        points = sorted({-(mu + self.system.rho0) for mu in mults},
                        key=lambda w: w.sort_key())
        criterion = any(W.contains_functional(pt, xi) for pt in points)
        return {"kernel": out, "criterion_satisfied": criterion,
                "orbit_points": points}

    def delta_tilde_blocks(self, xi, nu):
        """sum_i Delta_i^T Delta_i on the nu block (transpose route)."""
        mats = self.delta_blocks(xi, nu)
        total = None
        for m in mats:
            prod = linalg.mat_mul(linalg.transpose(m), m)
            total = prod if total is None else linalg.mat_add(total, prod)
        return total


# ---------------------------------------------------------------------------
# energy operator and the detecting family


def isotropic_rank(alg, system, eta):
    """Rank of eta: least number of mutually orthogonal independent odd
    isotropic roots spanning it.  Raises if eta is not isotropic or not in
    any such span."""
    eta = alg.weight(eta.coords)
    if alg.pair(eta, eta) != 0:
        raise FamilyError("not-isotropic")
    if eta.is_zero():
        return 0
    iso = [a for a in system.positive_odd if alg.pair(a, a) == 0]
    for size in range(1, len(iso) + 1):
        for subset in itertools.combinations(iso, size):
            if any(alg.pair(a, b) != 0
                   for a, b in itertools.combinations(subset, 2)):
                continue
            rows = [list(a.coords) for a in subset]
            if linalg.rank(rows) != size:
                continue
            sol = linalg.solve_in_span(rows, list(eta.coords))
            if sol is not None:
                return size
    raise FamilyError("not-isotropic: no orthogonal isotropic expansion")


def energy_scalar(alg, nu_total, eta):
    return 2 * alg.pair(nu_total, eta)


class DetectingFamily:
    """(T(eta), modified even family) on the g0-closure of the singular
    spin-top lines of L(Lambda) (x) S (x) vacuum."""

    def __init__(self, module, system):
        self.family = EvenFamily(module, system)
        self.space = self.family.space
        self.alg = module.alg
        self.module = module
        self.system = system
        self.g0 = self.family.space.g0
        self.mults = module.restriction_multiplicities(self.g0)
        self._closure = None

    def seeds(self):
        """Singular lines v_mu (x) 1_S (x) vac, keyed by total weight."""
        out = {}
        spin_top = self.space.spin.lam
        raising = []
        sums = {a + b for a in self.g0.positives for b in self.g0.positives}
        simple = [a for a in self.g0.positives if a not in sums]
        idxset = set(self.g0.indices)
        for a in simple:
            raising.extend(i for i in self.alg.root_space[a] if i in idxset)
        for mu in sorted(self.mults, key=lambda w: w.sort_key()):
            sing = self.module.singular_vectors(mu, raising)
            nu = mu + spin_top + self.space.shift
            bas = self.space.basis(nu)
            for v in sing:
                vec = [ZERO] * len(bas)
                for k, b in enumerate(bas):
                    if b[0] == mu and b[2] == spin_top and b[3] == 0:
                        vec[k] = v[b[1]]
                out.setdefault(nu, []).append(vec)
        return out

    def closure(self):
        """g0-closure of the seeds: {weight: echelon basis}."""
        if self._closure is not None:
            return self._closure
        basis = {nu: [list(v) for v in vecs]
                 for nu, vecs in self.seeds().items()}
        gens = list(self.g0.indices)
        changed = True
        while changed:
            changed = False
            for nu in sorted(basis, key=lambda w: w.sort_key()):
                for gen in gens:
                    shift = self.alg.basis_weights[gen]
                    target = nu + shift
                    if self.space.dim(target) == 0:
                        continue
                    mat = self.space.diag_action_block(gen, nu)
                    for v in list(basis[nu]):
                        img = linalg.mat_vec(mat, v)
                        if all(x == 0 for x in img):
                            continue
                        cur = basis.setdefault(target, [])
                        stacked = cur + [img]
                        if linalg.rank(stacked) > len(cur):
                            cur.append(img)
                            changed = True
        # echelonize for determinism
        out = {}
        for nu, vecs in basis.items():
            rr, piv = linalg.rref(vecs)
            rows = [row for row in rr if any(c != 0 for c in row)]
            if rows:
                out[nu] = rows
        self._closure = out
        return out

    def closure_dimension(self):
        return sum(len(v) for v in self.closure().values())

    def joint_kernel(self, eta, xi):
        """ker T(eta) cap ker(modified family at xi) on the closure."""
        eta = self.alg.weight(eta.coords)
        xi = self.alg.weight(xi.coords)
        isotropic_rank(self.alg, self.system, eta)
        closure = self.closure()
        entries = []
        for nu in sorted(closure, key=lambda w: w.sort_key()):
            if energy_scalar(self.alg, nu, eta) != 0:
                continue
            sub = closure[nu]
            mats = self.family.delta_blocks(xi, nu)
            rows = []
            for m in mats:
                for v in sub:
                    rows.append(linalg.mat_vec(m, v))
            # kernel within the closure subspace: coefficients c with
            # sum c_j Delta (sub_j) = 0 for every factor Laplacian
            stacked = []
            dim_amb = self.space.dim(nu)
            per = len(sub)
            for fi in range(len(mats)):
                block = rows[fi * per: (fi + 1) * per]
                stacked.append(linalg.transpose(block))
            null = linalg.nullspace(linalg.stack_rows(stacked))
            if null:
                pars = []
                bas_par = [self.space.module_parity(b)
                           for b in self.space.basis(nu)]
                ev = od = 0
                mixed = False
                for c in null:
                    vec = [ZERO] * dim_amb
                    for j, cj in enumerate(c):
                        if cj:
                            for k in range(dim_amb):
                                vec[k] += cj * sub[j][k]
                    ps = {bas_par[k] for k, x in enumerate(vec) if x}
                    if ps == {0}:
                        ev += 1
                    elif ps == {1}:
                        od += 1
                    else:
                        mixed = True
                entries.append({"weight": nu, "dim": len(null),
                                "parity_split": None if mixed else (ev, od)})
        return entries

    def criterion(self, eta, xi):
        """Theorem conditions: some constituent mu with xi = -(mu+rho0) as a
        functional and B(mu+rho, eta) = 0."""
        rho0 = self.system.rho0
        rho = self.system.rho
        W = WeylGroup(self.alg)
        for mu in self.mults:
            if W.contains_functional(-(mu + rho0), xi):
                if self.alg.pair(mu + rho, eta) == 0:
                    return True
        return False
