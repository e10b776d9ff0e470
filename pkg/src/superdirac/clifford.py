"""Exact Clifford-Weyl operator algebra in a fixed ordered generator frame.

A CWSpace is a quadratic super subspace with an ordered homogeneous basis
and its Gram matrix.  Products are normal ordered with the rewrite

    a b = -(-1)^{p(a)p(b)} b a + 2 B(a, b),      a after b in the order,

which encodes both the Clifford relation on even generators and the Weyl
relation on odd ones.  Even generators square to B(a, a); odd generators
square freely (polynomial directions).

For a quadratic pair (g, l) the polarized frame orders generators
ubar-even, u-even, ubar-odd, u-odd, so that vacuum expectation of a normal
ordered element is its constant term.
"""

import itertools
from fractions import Fraction

from superdirac import linalg
from superdirac.algebra import AlgebraError, zero_weight
from superdirac.linalg import ZERO, ONE


class CliffordError(ValueError):
    pass


class CWSpace:
    """Ordered generator frame with Gram matrix, inside a parent algebra.

    vectors[i] is the sparse parent-coefficient vector of generator i;
    kinds[i] is one of "ubar0", "u0", "ubar1", "u1", "plain".
    """

    def __init__(self, alg, vectors, kinds, names=None):
        self.alg = alg
        self.vectors = list(vectors)
        self.kinds = list(kinds)
        self.size = len(vectors)
        self.names = list(names) if names else [
            "c%d" % i for i in range(self.size)]
        self.parity = []
        for vec in self.vectors:
            ps = {alg.parity[i] for i in vec}
            if len(ps) != 1:
                raise CliffordError("generator is not parity homogeneous")
            self.parity.append(ps.pop())
        self.gram = [[alg.B_vec(u, v) for v in self.vectors]
                     for u in self.vectors]
        if linalg.rank(self.gram) != self.size:
            raise CliffordError("degenerate-subspace")
        self.weights = [self._vector_weight(v) for v in self.vectors]
        self._flat = [self._dense(v) for v in self.vectors]
        self._dual_cache = None

    def _vector_weight(self, vec):
        ws = {self.alg.basis_weights[i] for i in vec}
        if len(ws) != 1:
            raise CliffordError("generator mixes weights")
        return ws.pop()

    def _dense(self, vec):
        out = [ZERO] * self.alg.dim
        for k, c in vec.items():
            out[k] = c
        return out

    def coords_in_frame(self, vec):
        """Coordinates of a sparse parent vector in this frame, or None."""
        return linalg.solve_in_span(self._flat, self._dense(vec))

    def dual_coords(self):
        """dual_coords()[a] = coordinates of e^a in the frame."""
        if self._dual_cache is None:
            inv = linalg.inverse(self.gram)
            self._dual_cache = [
                [inv[b][a] for b in range(self.size)]
                for a in range(self.size)
            ]
        return self._dual_cache

    def scalar(self, c=ONE):
        return CWElement(self, {(): Fraction(c)})

    def gen(self, i):
        return CWElement(self, {(i,): ONE})

    def zero(self):
        return CWElement(self, {})

    def from_coords(self, coords):
        terms = {}
        for i, c in enumerate(coords):
            if c:
                terms[(i,)] = Fraction(c)
        return CWElement(self, terms)


def polarized_space(alg, l_view):
    """Polarization p = u + ubar of the orthocomplement of an l-view.

    u is spanned by the positive p-root vectors; ubar by negative root
    vectors rescaled so that B(ubar_a, u_a) = 1.
    """
    system = l_view.parent_system
    l_roots = set(l_view.roots)
    p_pos = [a for a in system.positives if a not in l_roots]
    ubar0, u0, ubar1, u1 = [], [], [], []
    for a in p_pos:
        for idx in alg.root_space[a]:
            neg_candidates = alg.root_space[-a]
            # pick the partner with nonzero pairing against this vector
            partner = None
            for jdx in neg_candidates:
                if alg.form[jdx][idx] != 0:
                    partner = jdx
                    break
            if partner is None:
                raise CliffordError("unpaired root vector")
            scale = ONE / alg.form[partner][idx]
            entry_u = {idx: ONE}
            entry_ubar = {partner: scale}
            if alg.parity[idx] == 0:
                u0.append(entry_u)
                ubar0.append(entry_ubar)
            else:
                u1.append(entry_u)
                ubar1.append(entry_ubar)
    vectors = ubar0 + u0 + ubar1 + u1
    kinds = (["ubar0"] * len(ubar0) + ["u0"] * len(u0) +
             ["ubar1"] * len(ubar1) + ["u1"] * len(u1))
    names = []
    for vec, kind in zip(vectors, kinds):
        idx = next(iter(vec))
        names.append("%s[%s]" % (kind, alg.labels[idx]))
    space = CWSpace(alg, vectors, kinds, names)
    space.l_view = l_view
    space.rho_u = _rho_u(alg, l_view, p_pos)
    space.p_positive_roots = tuple(p_pos)
    return space


def full_space(alg):
    """Frame on all of g in basis order (used for the cubic element of g)."""
    vectors = [{i: ONE} for i in range(alg.dim)]
    kinds = ["plain"] * alg.dim
    names = [str(lbl) for lbl in alg.labels]
    return CWSpace(alg, vectors, kinds, names)


def subspace_frame(alg, indices):
    """Frame on the span of the given basis indices."""
    vectors = [{i: ONE} for i in indices]
    kinds = ["plain"] * len(vectors)
    names = [str(alg.labels[i]) for i in indices]
    return CWSpace(alg, vectors, kinds, names)


def _rho_u(alg, l_view, p_pos):
    total_even = zero_weight(alg.coord_len)
    total_odd = zero_weight(alg.coord_len)
    for a in p_pos:
        idx = alg.root_space[a][0]
        if alg.parity[idx]:
            total_odd = total_odd + a
        else:
            total_even = total_even + a
    half = Fraction(1, 2)
    return total_even.scale(half) - total_odd.scale(half)


class CWElement:
    """Normal ordered element: sparse map monomial tuple -> coefficient."""

    __slots__ = ("space", "terms")

    def __init__(self, space, terms):
        self.space = space
        self.terms = {t: c for t, c in terms.items() if c}

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, ZERO) + c
        return CWElement(self.space, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, ZERO) - c
        return CWElement(self.space, out)

    def scale(self, c):
        c = Fraction(c)
        return CWElement(self.space, {t: c * v for t, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        self._check(other)
        out = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                for t, c in self.space_normal(t1 + t2).items():
                    out[t] = out.get(t, ZERO) + c1 * c2 * c
        return CWElement(self.space, out)

    def space_normal(self, seq):
        return _normal_order(self.space, seq)

    def _check(self, other):
        if self.space is not other.space:
            raise CliffordError("mixed-polarization")

    def __eq__(self, other):
        return (isinstance(other, CWElement) and self.space is other.space
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- structure ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_scalar(self):
        return all(t == () for t in self.terms)

    def scalar_part(self):
        return self.terms.get((), ZERO)

    def bidegree(self):
        """(clifford degree, intrinsic parity) if homogeneous, else None."""
        degs = set()
        for t in self.terms:
            lengths = len(t) % 2
            par = sum(self.space.parity[i] for i in t) % 2
            degs.add((lengths, par))
        if not degs:
            return (0, 0)
        if len(degs) > 1:
            return None
        return degs.pop()

    def commutator(self, other):
        """Colour commutator with the bicharacter sign of the bidegrees."""
        da, db = self.bidegree(), other.bidegree()
        if da is None or db is None:
            raise CliffordError("commutator of inhomogeneous elements")
        sign = -ONE if (da[0] * db[0] + da[1] * db[1]) % 2 else ONE
        return self * other - (other * self).scale(sign)

    def filtration_degree(self):
        return max((len(t) for t in self.terms), default=0)

    def dump(self):
        """Deterministic list of [name-string, coefficient-string] pairs."""
        rows = []
        for t in sorted(self.terms):
            mono = "*".join(self.space.names[i] for i in t) or "1"
            rows.append([mono, str(self.terms[t])])
        return rows

    def __repr__(self):
        if not self.terms:
            return "CW(0)"
        return "CW(" + " + ".join(
            "%s %s" % (c, m) for m, c in
            [(k, v) for k, v in sorted(self.dump())]) + ")"


def _normal_order(space, seq):
    """Normal order a raw generator sequence; returns {monomial: coeff}."""
    out = {}
    stack = [(ONE, tuple(seq))]
    parity = space.parity
    gram = space.gram
    while stack:
        coeff, t = stack.pop()
        if not coeff:
            continue
        spot = None
        for k in range(len(t) - 1):
            a, b = t[k], t[k + 1]
            if a > b:
                spot = k
                break
            if a == b and parity[a] == 0:
                spot = k
                break
        if spot is None:
            out[t] = out.get(t, ZERO) + coeff
            continue
        k = spot
        a, b = t[k], t[k + 1]
        head, tail = t[:k], t[k + 2:]
        if a == b:
            # even square: a a = B(a, a)
            stack.append((coeff * gram[a][a], head + tail))
            continue
        sign = -ONE if not (parity[a] and parity[b]) else ONE
        stack.append((coeff * sign, head + (b, a) + tail))
        pairing = gram[a][b]
        if pairing:
            stack.append((coeff * 2 * pairing, head + tail))
    return {t: c for t, c in out.items() if c}


# ---------------------------------------------------------------------------
# exterior algebra over a frame (odd generators are polynomial directions)


class ExtElement:
    """Super exterior form over a CWSpace frame, wedge degree <= 3 in use."""

    __slots__ = ("space", "terms")

    def __init__(self, space, terms):
        self.space = space
        self.terms = {t: c for t, c in terms.items() if c}

    @classmethod
    def zero(cls, space):
        return cls(space, {})

    def __add__(self, other):
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, ZERO) + c
        return ExtElement(self.space, out)

    def scale(self, c):
        c = Fraction(c)
        return ExtElement(self.space,
                          {t: c * v for t, v in self.terms.items()})

    def wedge_seq(self, seq, coeff):
        """Add coeff * (x_{seq[0]} ^ x_{seq[1]} ^ ...) in normal form."""
        out = dict(self.terms)
        for t, c in _ext_normal(self.space, tuple(seq)).items():
            out[t] = out.get(t, ZERO) + coeff * c
        return ExtElement(self.space, out)

    def contract(self, vec_coords, vec_parity):
        """Contraction iota_v with v = sum vec_coords[i] gen_i."""
        space = self.space
        out = {}
        for t, c in self.terms.items():
            for k in range(len(t)):
                b = ZERO
                for i, ci in enumerate(vec_coords):
                    if ci:
                        b += ci * space.gram[i][t[k]]
                if not b:
                    continue
                sign = -ONE if (k % 2) else ONE
                koszul = sum(space.parity[t[j]] for j in range(k)) * vec_parity
                if koszul % 2:
                    sign = -sign
                rest = t[:k] + t[k + 1:]
                for t2, c2 in _ext_normal(space, rest).items():
                    out[t2] = out.get(t2, ZERO) + sign * b * c * c2
        return ExtElement(space, out)

    def lie_derive(self, action, action_parity=0):
        """L_T for T given by action: gen index -> coordinate list."""
        space = self.space
        out = {}
        for t, c in self.terms.items():
            for k in range(len(t)):
                coords = action(t[k])
                koszul = sum(space.parity[t[j]] for j in range(k)) * action_parity
                sgn = -ONE if koszul % 2 else ONE
                for i, ci in enumerate(coords):
                    if not ci:
                        continue
                    seq = t[:k] + (i,) + t[k + 1:]
                    for t2, c2 in _ext_normal(space, seq).items():
                        out[t2] = out.get(t2, ZERO) + sgn * ci * c * c2
        return ExtElement(space, out)

    def quantize(self):
        """The symmetrization map into the Clifford-Weyl frame (degree <= 3)."""
        space = self.space
        total = {}
        for t, c in self.terms.items():
            k = len(t)
            if k > 3:
                raise CliffordError("quantization implemented for wedge "
                                    "degree <= 3 only")
            if k == 0:
                total[()] = total.get((), ZERO) + c
                continue
            inv = Fraction(1, _factorial(k))
            for perm in itertools.permutations(range(k)):
                sgn = _perm_sign(perm)
                kos = ONE
                for i in range(k):
                    for j in range(i + 1, k):
                        # positions i < j swapped by the permutation
                        if perm.index(i) > perm.index(j):
                            if space.parity[t[i]] and space.parity[t[j]]:
                                kos = -kos
                seq = tuple(t[p] for p in perm)
                for t2, c2 in _normal_order(space, seq).items():
                    total[t2] = total.get(t2, ZERO) + c * inv * sgn * kos * c2
        return CWElement(space, total)


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _perm_sign(perm):
    sign = ONE
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _ext_normal(space, seq):
    """Sort a wedge word: x ^ y = -(-1)^{p(x)p(y)} y ^ x; even repeats die."""
    out = {}
    stack = [(ONE, tuple(seq))]
    parity = space.parity
    while stack:
        coeff, t = stack.pop()
        spot = None
        for k in range(len(t) - 1):
            if t[k] > t[k + 1] or (t[k] == t[k + 1] and parity[t[k]] == 0):
                spot = k
                break
        if spot is None:
            out[t] = out.get(t, ZERO) + coeff
            continue
        a, b = t[spot], t[spot + 1]
        if a == b:
            continue   # even repeat: zero
        sign = -ONE if not (parity[a] and parity[b]) else ONE
        stack.append((coeff * sign, t[:spot] + (b, a) + t[spot + 2:]))
    return {t: c for t, c in out.items() if c}


# ---------------------------------------------------------------------------
# canonical elements


def structure_tensor(space):
    """phi = -(1/12) sum (-1)^{p(a)p(b)+p(c)} f_abc e^a ^ e^b ^ e^c over the
    frame, with duals and structure constants from the parent algebra."""
    alg = space.alg
    duals = space.dual_coords()
    phi = ExtElement.zero(space)
    base_coeff = Fraction(-1, 12)
    for a in range(space.size):
        for b in range(space.size):
            bracket_ab = alg.bracket_vec(space.vectors[a], space.vectors[b])
            if not bracket_ab:
                continue
            for c in range(space.size):
                f = alg.B_vec(bracket_ab, space.vectors[c])
                if not f:
                    continue
                sgn = ONE
                if (space.parity[a] * space.parity[b] + space.parity[c]) % 2:
                    sgn = -ONE
                # wedge the frame duals, coefficients resolved in the frame
                phi = _wedge_coords(phi, [duals[a], duals[b], duals[c]],
                                    base_coeff * sgn * f)
    return phi


def _wedge_coords(acc, coord_lists, coeff):
    space = acc.space
    out = dict(acc.terms)
    for combo in itertools.product(*[
            [(i, c) for i, c in enumerate(cl) if c] for cl in coord_lists]):
        idxs = tuple(i for i, _ in combo)
        val = coeff
        for _, c in combo:
            val *= c
        for t, c2 in _ext_normal(space, idxs).items():
            out[t] = out.get(t, ZERO) + val * c2
    return ExtElement(space, out)


def structure_tensor_quantized(space):
    """phi' = q(phi) for the frame; total parity is even by construction."""
    phi = structure_tensor(space)
    out = phi.quantize()
    bid = out.bidegree()
    if bid is not None and bid[1] != 0:
        raise CliffordError("structure tensor with odd intrinsic parity")
    return out


def lambda_form(space, x_vec):
    """lambda(ad_x) = -1/2 sum_a ad_x(e^a) ^ e_a as an ExtElement."""
    alg = space.alg
    duals = space.dual_coords()
    acc = ExtElement.zero(space)
    for a in range(space.size):
        dual_vec = {}
        for b, cb in enumerate(duals[a]):
            if cb:
                for idx, ci in space.vectors[b].items():
                    dual_vec[idx] = dual_vec.get(idx, ZERO) + cb * ci
        image = alg.bracket_vec(x_vec, dual_vec)
        if not image:
            continue
        coords = space.coords_in_frame(image)
        if coords is None:
            raise CliffordError("subspace-not-stable")
        unit = [ZERO] * space.size
        unit[a] = ONE
        acc = _wedge_coords(acc, [coords, unit], Fraction(-1, 2))
    return acc


def gamma_prime(space, x_vec):
    """gamma'(x) = q(lambda(ad_x restricted to the frame))."""
    return lambda_form(space, x_vec).quantize()


def nu_star(space, x_vec):
    """Clifford part of the diagonal embedding of l for a polarized frame.

    nu(x) = 1/2 sum_{j,k} (-1)^{p(u_j)} B(x, [ubar_j, u_k]) ubar_k u_j
            + rho_u(x) for the Cartan component of x.
    """
    alg = space.alg
    u_idx = [i for i, k in enumerate(space.kinds) if k in ("u0", "u1")]
    ubar_idx = [i for i, k in enumerate(space.kinds) if k in ("ubar0", "ubar1")]
    terms = {}
    half = Fraction(1, 2)
    for j in u_idx:
        sgn = -ONE if space.parity[j] else ONE
        for k in u_idx:
            jbar = _partner(space, j)
            br = alg.bracket_vec(space.vectors[jbar], space.vectors[k])
            if not br:
                continue
            coeff = alg.B_vec(x_vec, br)
            if not coeff:
                continue
            kbar = _partner(space, k)
            for t, c in _normal_order(space, (kbar, j)).items():
                terms[t] = terms.get(t, ZERO) + half * sgn * coeff * c
    # Cartan character
    h_part = {i: c for i, c in x_vec.items() if i in set(alg.cartan)}
    if h_part:
        val = alg.evaluate(space.rho_u, h_part)
        if val:
            terms[()] = terms.get((), ZERO) + val
    return CWElement(space, terms)


def _partner(space, i):
    """Index of the dual polarized partner of generator i."""
    for j in range(space.size):
        if j != i and space.gram[i][j] != 0:
            return j
    raise CliffordError("unpaired generator in polarization")


# ---------------------------------------------------------------------------
# oscillator module slices


class OscillatorSpace:
    """Weight slices of the oscillator supermodule of a polarized frame.

    Basis monomials use only ubar generators (even ones at most once, odd
    ones freely); the monomial weight is rho_u plus the sum of the generator
    weights, and the module parity of a monomial is its length mod 2.
    """

    def __init__(self, space):
        if not hasattr(space, "rho_u"):
            raise CliffordError("oscillator slices need a polarized frame")
        self.space = space
        self.alg = space.alg
        self.ubar = tuple(i for i, k in enumerate(space.kinds)
                          if k.startswith("ubar"))
        self._slices = {}
        # strictly positive height functional on positive roots
        n = self.alg.coord_len
        self._ht = [Fraction(n - k) for k in range(n)]

    def _height(self, w):
        return sum(c * h for c, h in zip(w.coords, self._ht))

    def slice(self, weight):
        """Sorted monomial tuples of the given weight (possibly empty)."""
        cached = self._slices.get(weight)
        if cached is not None:
            return cached
        target = self.space.rho_u - weight
        out = []

        def rec(k, remaining, acc):
            if remaining.is_zero():
                out.append(tuple(acc))
                return
            if k == len(self.ubar):
                return
            ht_rem = self._height(remaining)
            if ht_rem <= 0:
                return
            gen = self.ubar[k]
            root = -self.space.weights[gen]
            ht = self._height(root)
            max_mult = 1 if self.space.parity[gen] == 0 else int(ht_rem // ht)
            rem = remaining
            for mult in range(0, max_mult + 1):
                if mult > 0:
                    rem = rem - root
                rec(k + 1, rem, acc + [gen] * mult)

        rec(0, target, [])
        result = tuple(sorted(set(out)))
        self._slices[weight] = result
        return result

    def weight_of(self, mono):
        w = self.space.rho_u
        for gen in mono:
            w = w + self.space.weights[gen]
        return w

    def parity_of(self, mono):
        return len(mono) % 2

    def vacuum_weight(self):
        return self.space.rho_u

    def act(self, element, mono):
        """Apply a CWElement to a slice monomial; {monomial: coeff}."""
        kinds = self.space.kinds
        out = {}
        for t, c in element.terms.items():
            prod = _normal_order(self.space, t + mono)
            for t2, c2 in prod.items():
                if any(kinds[i] in ("u0", "u1") for i in t2):
                    continue
                out[t2] = out.get(t2, ZERO) + c * c2
        return {t: c for t, c in out.items() if c}

    def action_matrix(self, element, src_weight, dst_weight):
        """Matrix of a CWElement from the src slice to the dst slice."""
        src = self.slice(src_weight)
        dst = self.slice(dst_weight)
        index = {m: i for i, m in enumerate(dst)}
        mat = linalg.zeros(len(dst), len(src))
        for j, mono in enumerate(src):
            for m2, c in self.act(element, mono).items():
                i = index.get(m2)
                if i is None:
                    if c:
                        raise CliffordError("image escapes the target slice")
                    continue
                mat[i][j] = c
        return mat
