"""Finite-dimensional simple highest weight supermodules, exactly.

L(Lambda) is realized as the Verma module modulo its maximal submodule.  The
maximal submodule is detected weight by weight: a vector of weight mu lies in
it iff every monomial in U(n+) of weight Lambda - mu kills it, i.e. iff its
pairing row against all raising monomials vanishes.  Everything reduces to
rank computations of exact rational matrices.
"""

from fractions import Fraction

from superdirac import linalg
from superdirac.algebra import Weight, zero_weight
from superdirac.enveloping import PBW
from superdirac.linalg import ZERO, ONE


class ModuleError(ValueError):
    pass


class SimpleModule:
    """Simple quotient of a Verma module, with exact action matrices.

    view: the (sub)algebra acting; lam: the highest weight.  Only weights in
    the finite support of the simple quotient are stored; neighbouring Verma
    weight spaces are materialized lazily when actions project through them.
    """

    MAX_WEIGHTS = 6000
    MAX_SPACE_DIM = 4000

    def __init__(self, view, lam, system=None):
        self.view = view
        self.alg = view.alg
        self.lam = self.alg.weight(lam.coords)
        self.system = system or view.parent_system
        self.pbw = PBW(view)
        self._neg_gens = [(i, -self.alg.basis_weights[i])
                          for i in self.pbw.negative]
        self._pos_gens = [(i, self.alg.basis_weights[i])
                          for i in self.pbw.positive]
        self._ht = [Fraction(self.alg.coord_len - k)
                    for k in range(self.alg.coord_len)]
        self._data = {}
        self._action_cache = {}
        if not self._is_dominant():
            raise ModuleError("not-dominant: %s over %s"
                              % (self.lam, view.name))
        self._build()

    # -- construction -------------------------------------------------------

    def _is_dominant(self):
        alg = self.alg
        for alpha in self._view_simple_even():
            norm = alg.pair(alpha, alpha)
            val = 2 * alg.pair(self.lam, alpha) / norm
            if val < 0 or val.denominator != 1:
                return False
        return True

    def _view_simple_even(self):
        positives_even = [a for a in self.view.positives
                          if self.system.root_parity(a) == 0]
        sums = {a + b for a in positives_even for b in positives_even}
        return [a for a in positives_even if a not in sums]

    def _simple_roots(self):
        positives = list(self.view.positives)
        sums = {a + b for a in positives for b in positives}
        return [a for a in positives if a not in sums]

    def _build(self):
        simples = self._simple_roots()
        queue = [self.lam]
        seen = {self.lam}
        support = []
        while queue:
            queue.sort(key=lambda w: (self._height(self.lam - w), w.sort_key()))
            mu = queue.pop(0)
            data = self._space(mu)
            if data["dim"] == 0:
                continue
            support.append(mu)
            if len(support) > self.MAX_WEIGHTS:
                raise ModuleError("polytope-overflow: weight support exceeds "
                                  "%d" % self.MAX_WEIGHTS)
            for alpha in simples:
                nxt = mu - alpha
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        self.weights = sorted(support, key=lambda w: w.sort_key())
        self._support = set(self.weights)
        self.dim = sum(self._data[w]["dim"] for w in self.weights)
        self.sdim = sum(
            self._data[w]["dim"] - 2 * sum(self._data[w]["parity"])
            for w in self.weights)

    def _height(self, diff):
        return sum(c * h for c, h in zip(diff.coords, self._ht))

    def _combinations(self, gens, diff):
        """Multisets over gens (odd at most once) with weight sum diff."""
        alg = self.alg
        out = []

        def rec(k, remaining, acc):
            if remaining.is_zero():
                out.append(tuple(acc))
                return
            if k == len(gens):
                return
            ht_rem = self._height(remaining)
            if ht_rem <= 0:
                return
            idx, w = gens[k]
            ht = self._height(w)
            if ht <= 0:
                raise ModuleError("generator weight of nonpositive height")
            max_mult = 1 if alg.parity[idx] else int(ht_rem // ht)
            rem = remaining
            for mult in range(0, max_mult + 1):
                if mult > 0:
                    rem = rem - w
                rec(k + 1, rem, acc + [idx] * mult)

        rec(0, diff, [])
        return sorted(set(out))

    def _space(self, mu):
        """Verma weight space data with the radical split, built on demand."""
        data = self._data.get(mu)
        if data is not None:
            return data
        diff = self.lam - mu
        monos = self._combinations(self._neg_gens, diff)
        if len(monos) > self.MAX_SPACE_DIM:
            raise ModuleError("polytope-overflow: Verma space dim %d"
                              % len(monos))
        if not monos:
            data = {"monos": [], "dim": 0, "kernel": [], "chosen": [],
                    "parity": [], "solver": None}
            self._data[mu] = data
            return data
        raising = self._combinations(self._pos_gens, diff)
        pairing = []
        for f in monos:
            row = []
            for e in raising:
                prod = self.pbw.mul_mono(e, f)
                row.append(self.pbw.apply_to_highest(
                    prod, self.lam).get((), ZERO))
            pairing.append(row)
        transposed = linalg.transpose(pairing)
        kernel = linalg.nullspace(transposed)
        _, chosen = linalg.rref(transposed)
        cols = []
        for c in chosen:
            unit = [ZERO] * len(monos)
            unit[c] = ONE
            cols.append(unit)
        cols.extend(kernel)
        solver = linalg.inverse(linalg.transpose(cols))
        parity = [self.pbw.mono_parity(monos[c]) for c in chosen]
        data = {"monos": monos, "dim": len(chosen), "kernel": kernel,
                "chosen": list(chosen), "parity": parity, "solver": solver}
        self._data[mu] = data
        return data

    # -- queries ------------------------------------------------------------

    def weight_dim(self, mu):
        data = self._data.get(mu)
        return data["dim"] if data else 0

    def parities(self, mu):
        data = self._data.get(mu)
        return list(data["parity"]) if data else []

    def basis_labels(self, mu):
        data = self._data.get(mu)
        if not data:
            return []
        return [data["monos"][c] for c in data["chosen"]]

    def project(self, mu, vec):
        """Quotient coordinates of a Verma coordinate vector at weight mu."""
        data = self._space(mu)
        if not data["monos"]:
            if any(c != 0 for c in vec):
                raise ModuleError("vector outside Verma weight space")
            return []
        sol = linalg.mat_vec(data["solver"], vec)
        return sol[: data["dim"]]

    def action(self, gen):
        """Blocks {mu: matrix} of basis generator gen; matrix maps the mu
        coordinates into the (mu + wt(gen)) coordinates."""
        cached = self._action_cache.get(gen)
        if cached is not None:
            return cached
        shift = self.alg.basis_weights[gen]
        blocks = {}
        for mu in self.weights:
            data = self._data[mu]
            if data["dim"] == 0:
                continue
            target = mu + shift
            in_support = target in self._support
            cols = []
            for c in data["chosen"]:
                mono = data["monos"][c]
                image = {}
                for t, coeff in self.pbw.mul_gen_left(gen, mono).items():
                    for nt, val in self.pbw.apply_to_highest(
                            {t: coeff}, self.lam).items():
                        image[nt] = image.get(nt, ZERO) + val
                tdata = self._space(target)
                known = set(tdata["monos"])
                if any(c2 for m2, c2 in image.items() if m2 not in known):
                    raise ModuleError("action leaves the stored basis")
                vec = [image.get(m, ZERO) for m in tdata["monos"]]
                proj = self.project(target, vec)
                if not in_support and any(x != 0 for x in proj):
                    raise ModuleError(
                        "nonzero projection into an unsupported weight")
                cols.append(proj)
            if in_support and self._data[target]["dim"]:
                blocks[mu] = linalg.transpose(cols)
        self._action_cache[gen] = blocks
        return blocks

    def action_vec(self, vec_sparse):
        """Blocks of a sparse algebra element (single weight homogeneous)."""
        shifts = {self.alg.basis_weights[i] for i in vec_sparse}
        if len(shifts) > 1:
            raise ModuleError("mixed-weight algebra element")
        total = {}
        for gen, c in vec_sparse.items():
            if not c:
                continue
            for mu, mat in self.action(gen).items():
                if mu in total:
                    total[mu] = linalg.mat_add(total[mu],
                                               linalg.mat_scale(c, mat))
                else:
                    total[mu] = linalg.mat_scale(c, mat)
        return total

    def singular_vectors(self, mu, raising_gens):
        """Basis of {v in L^mu : e v = 0 for all e in raising_gens}."""
        data = self._data.get(mu)
        if not data or data["dim"] == 0:
            return []
        rows = []
        for gen in raising_gens:
            mat = self.action(gen).get(mu)
            if mat:
                rows.extend(mat)
        if not rows:
            return [list(r) for r in linalg.identity(data["dim"])]
        return linalg.nullspace(rows)

    def restriction_multiplicities(self, subview):
        """{mu: n(mu)} for the decomposition over the reductive subview,
        counted by joint singular vectors against its simple raising
        operators."""
        sums = {a + b for a in subview.positives for b in subview.positives}
        simple = [a for a in subview.positives if a not in sums]
        raising = []
        idxset = set(subview.indices)
        for a in simple:
            raising.extend(i for i in self.alg.root_space[a] if i in idxset)
        out = {}
        for mu in self.weights:
            sing = self.singular_vectors(mu, raising)
            if sing:
                out[mu] = len(sing)
        return out

    def weight_multiplicities(self):
        return {mu: self._data[mu]["dim"] for mu in self.weights}

    def casimir_blocks(self, pairs):
        """Blocks of sum_a e^a e_a for pairs = [(dual_vec, vec)]."""
        total = {mu: linalg.zeros(self._data[mu]["dim"], self._data[mu]["dim"])
                 for mu in self.weights}
        for dual, vec in pairs:
            left = self.action_vec(dual)
            right = self.action_vec(vec)
            shift = None
            for i in vec:
                shift = self.alg.basis_weights[i]
            for mu, mat in right.items():
                lmat = left.get(mu + shift)
                if lmat is None or not mat:
                    continue
                total[mu] = linalg.mat_add(total[mu], linalg.mat_mul(lmat, mat))
        return total

    def serialize(self):
        """Deterministic JSON-ready dump of the weight basis."""
        out = {
            "algebra": self.alg.name,
            "highest_weight": [str(c) for c in self.lam.coords],
            "dim": self.dim,
            "sdim": self.sdim,
            "weights": [],
        }
        for mu in self.weights:
            data = self._data[mu]
            out["weights"].append({
                "weight": [str(c) for c in mu.coords],
                "dim": data["dim"],
                "parity": list(data["parity"]),
            })
        return out


def weyl_dimension(alg, view, lam):
    """Weyl dimension formula over the even positive roots of the view.

    Exact oracle for even factors at small rank; valid when the view is a
    reductive even algebra.
    """
    rho0 = view.rho0
    dim = Fraction(1)
    for alpha in view.positives:
        num = alg.pair(lam + rho0, alpha)
        den = alg.pair(rho0, alpha)
        dim *= num / den
    return dim
