"""PBW straightening in the universal enveloping algebra of a built algebra.

Monomials are tuples of basis indices ordered negative root vectors, then
Cartan, then positive root vectors (each group internally ordered).  Products
are straightened with the super commutation rule

    x_a x_b = (-1)^{p(a)p(b)} x_b x_a + [x_a, x_b]

and odd squares reduce via x^2 = [x, x]/2.
"""

from fractions import Fraction

from superdirac.linalg import ZERO, ONE


class PBW:
    def __init__(self, view):
        self.view = view
        self.alg = view.alg
        alg = self.alg
        neg = view.negative_root_indices()
        pos = view.positive_root_indices()
        order = list(neg) + list(alg.cartan) + list(pos)
        if set(order) != set(view.indices):
            raise ValueError("view basis does not split into roots and Cartan")
        self.rank_of = {idx: r for r, idx in enumerate(order)}
        self.negative = tuple(neg)
        self.positive = tuple(pos)
        self._gen_cache = {}

    def _straighten(self, coeff, mono, out):
        stack = [(coeff, mono)]
        alg = self.alg
        rank_of = self.rank_of
        parity = alg.parity
        while stack:
            c, t = stack.pop()
            if not c:
                continue
            spot = None
            for k in range(len(t) - 1):
                a, b = t[k], t[k + 1]
                if rank_of[a] > rank_of[b] or (a == b and parity[a]):
                    spot = k
                    break
            if spot is None:
                out[t] = out.get(t, ZERO) + c
                continue
            k = spot
            a, b = t[k], t[k + 1]
            head, tail = t[:k], t[k + 2:]
            if a == b:
                # odd square: x x = [x, x] / 2
                for z, cz in alg.bracket(a, a).items():
                    stack.append((c * cz / 2, head + (z,) + tail))
                continue
            sign = -ONE if (parity[a] and parity[b]) else ONE
            stack.append((c * sign, head + (b, a) + tail))
            for z, cz in alg.bracket(a, b).items():
                stack.append((c * cz, head + (z,) + tail))

    def mul_gen_left(self, gen, mono):
        """x_gen * mono as a dict of straightened monomials."""
        key = (gen, mono)
        cached = self._gen_cache.get(key)
        if cached is None:
            out = {}
            self._straighten(ONE, (gen,) + mono, out)
            cached = {t: c for t, c in out.items() if c}
            self._gen_cache[key] = cached
        return dict(cached)

    def mul_mono(self, left, right):
        """Product of two straightened monomials as a dict."""
        out = {right: ONE}
        for gen in reversed(left):
            nxt = {}
            for mono, c in out.items():
                for t, ct in self.mul_gen_left(gen, mono).items():
                    nxt[t] = nxt.get(t, ZERO) + c * ct
            out = {t: c for t, c in nxt.items() if c}
        return out

    def mul_dicts(self, left, right):
        out = {}
        for ml, cl in left.items():
            for mr, cr in right.items():
                for t, c in self.mul_mono(ml, mr).items():
                    out[t] = out.get(t, ZERO) + cl * cr * c
        return {t: c for t, c in out.items() if c}

    def split_mono(self, mono):
        """(negative part, cartan part, positive part) of a straightened
        monomial."""
        neg, car, pos = [], [], []
        negset = set(self.negative)
        posset = set(self.positive)
        for idx in mono:
            if idx in negset:
                neg.append(idx)
            elif idx in posset:
                pos.append(idx)
            else:
                car.append(idx)
        return tuple(neg), tuple(car), tuple(pos)

    def apply_to_highest(self, element, lam):
        """element . v_lam in the Verma module of highest weight lam.

        element is a dict of straightened monomials; the result maps
        negative-part monomials to coefficients.
        """
        alg = self.alg
        out = {}
        for mono, c in element.items():
            neg, car, pos = self.split_mono(mono)
            if pos:
                continue
            val = c
            for h in car:
                val *= alg.evaluate(lam, {h: ONE})
                if not val:
                    break
            if val:
                out[neg] = out.get(neg, ZERO) + val
        return {t: v for t, v in out.items() if v}

    def mono_weight(self, mono):
        alg = self.alg
        total = None
        for idx in mono:
            w = alg.basis_weights[idx]
            total = w if total is None else total + w
        if total is None:
            from superdirac.algebra import zero_weight
            return zero_weight(alg.coord_len)
        return total

    def mono_parity(self, mono):
        return sum(self.alg.parity[i] for i in mono) % 2
