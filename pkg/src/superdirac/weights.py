"""Positive systems, Weyl vectors, the Weyl group, and atypicality."""

import itertools
from fractions import Fraction

from superdirac import linalg
from superdirac.algebra import AlgebraError, Weight, zero_weight
from superdirac.linalg import ZERO, ONE


class PositiveSystem:
    """A choice of positive roots with the derived Weyl vectors.

    Roots are kept as epsilon/delta coordinate vectors of the ambient
    gl(m|n); for psl(n|n) distinct coordinate labels may restrict to the same
    functional on h (two-dimensional root spaces), and the combinatorics here
    is deliberately label-level.
    """

    def __init__(self, alg, positives):
        self.alg = alg
        self.positives = tuple(sorted(positives, key=lambda w: w.sort_key()))
        self._pos_set = set(self.positives)
        if len(self._pos_set) * 2 != len(alg.roots):
            raise AlgebraError("positive system must contain half the roots")
        for a in self.positives:
            if -a in self._pos_set:
                raise AlgebraError("positive system contains both +a and -a")
        self.positive_even = tuple(a for a in self.positives
                                   if self.root_parity(a) == 0)
        self.positive_odd = tuple(a for a in self.positives
                                  if self.root_parity(a) == 1)
        half = Fraction(1, 2)
        self.rho0 = _weight_sum(self.positive_even, alg.coord_len).scale(half)
        self.rho1 = _weight_sum(self.positive_odd, alg.coord_len).scale(half)
        self.rho = self.rho0 - self.rho1

    def root_parity(self, root):
        idx = self.alg.root_space[root][0]
        return self.alg.parity[idx]

    def is_positive(self, root):
        return root in self._pos_set

    def simple_roots(self):
        """Positive roots not expressible as a sum of two positive roots."""
        sums = set()
        for a, b in itertools.combinations_with_replacement(self.positives, 2):
            sums.add(a + b)
        return tuple(a for a in self.positives if a not in sums)

    def simple_even_roots(self):
        """Indecomposables of the even positive system."""
        sums = set()
        for a, b in itertools.combinations_with_replacement(self.positive_even, 2):
            sums.add(a + b)
        return tuple(a for a in self.positive_even if a not in sums)

    def positive_indices(self):
        out = []
        for a in self.positives:
            out.extend(self.alg.root_space[a])
        return tuple(sorted(out))

    def negative_indices(self):
        out = []
        for a in self.positives:
            out.extend(self.alg.root_space[-a])
        return tuple(sorted(out))

    def odd_reflection(self, alpha):
        """New system with a simple isotropic odd root alpha replaced by -alpha."""
        if alpha not in self._pos_set:
            raise AlgebraError("%s is not a positive root" % (alpha,))
        if self.root_parity(alpha) != 1 or self.alg.pair(alpha, alpha) != 0:
            raise AlgebraError("odd reflections need an isotropic odd root")
        if alpha not in self.simple_roots():
            raise AlgebraError("odd reflections need a simple root")
        positives = [a for a in self.positives if a != alpha] + [-alpha]
        return PositiveSystem(self.alg, positives)

    def is_dominant_integral(self, lam):
        """B(lam + rho0, alpha) > 0 integrality test on the even system."""
        for alpha in self.positive_even:
            halfnorm = self.alg.pair(alpha, alpha)
            val = 2 * self.alg.pair(lam, alpha) / halfnorm
            if val.denominator != 1:
                return False
        for alpha in self.simple_even_roots():
            halfnorm = self.alg.pair(alpha, alpha)
            if 2 * self.alg.pair(lam, alpha) / halfnorm < 0:
                return False
        return True


def _weight_sum(weights, length):
    total = zero_weight(length)
    for w in weights:
        total = total + w
    return total


def distinguished_system(alg):
    """i < j ordering of the epsilon/delta coordinates."""
    positives = []
    for root in alg.roots:
        nz = [k for k, c in enumerate(root.coords) if c != 0]
        i = min(k for k in nz if root.coords[k] > 0)
        j = min(k for k in nz if root.coords[k] < 0)
        if i < j:
            positives.append(root)
    return PositiveSystem(alg, positives)


def root_data(alg, positive_choice="distinguished", odd_reflections=()):
    """Positive system plus derived data.

    positive_choice "custom" applies the listed odd reflections (indices into
    the current simple isotropic roots) starting from the distinguished
    system.
    """
    system = distinguished_system(alg)
    if positive_choice == "distinguished":
        return system
    if positive_choice != "custom":
        raise AlgebraError("positive_choice must be distinguished or custom")
    for step in odd_reflections:
        simples = [a for a in system.simple_roots()
                   if system.root_parity(a) == 1 and alg.pair(a, a) == 0]
        if not simples:
            raise AlgebraError("no simple isotropic root to reflect")
        system = system.odd_reflection(simples[step % len(simples)])
    return system


# ---------------------------------------------------------------------------
# Weyl group


class WeylGroup:
    """S_m x S_n acting by permutations of the epsilon and delta coordinates."""

    MAX_ORDER = 40320

    def __init__(self, alg):
        self.alg = alg
        m, n = alg.m, alg.n
        if alg.family == "sl":
            m, n = alg.m, 0
        order = _factorial(m) * _factorial(n)
        if order > self.MAX_ORDER:
            raise AlgebraError("group-too-large: |W| = %d" % order)
        self.elements = [
            (pm, pn)
            for pm in itertools.permutations(range(m))
            for pn in itertools.permutations(range(n))
        ]
        self.m = m
        self.n = n

    def __len__(self):
        return len(self.elements)

    def apply(self, element, w):
        pm, pn = element
        eps = w.coords[: self.m]
        delta = w.coords[self.m:]
        new = [eps[pm[i]] for i in range(self.m)] + \
              [delta[pn[j]] for j in range(self.n)]
        return Weight(tuple(new))

    def orbit(self, w):
        return sorted({self.apply(g, w) for g in self.elements},
                      key=lambda x: x.sort_key())

    def orbit_functionals(self, w):
        """Orbit deduplicated at the level of functionals on h."""
        seen = {}
        for g in self.elements:
            img = self.apply(g, w)
            seen.setdefault(self.alg.functional_key(img), img)
        return sorted(seen.values(), key=lambda x: x.sort_key())

    def contains_functional(self, w, candidate):
        key = self.alg.functional_key(candidate)
        return any(self.alg.functional_key(self.apply(g, w)) == key
                   for g in self.elements)


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def reflection(alg, alpha, w):
    """s_alpha(w) for a non-isotropic root alpha."""
    norm = alg.pair(alpha, alpha)
    if norm == 0:
        raise AlgebraError("cannot reflect in an isotropic root")
    c = 2 * alg.pair(w, alpha) / norm
    return w - alpha.scale(c)


# ---------------------------------------------------------------------------
# atypicality


def atypicality(alg, lam, system=None):
    """Degree of atypicality of lam with a witness root set, plus the defect.

    Returns {"degree", "witness", "a_lambda", "defect"}.  The degree is the
    maximal number of linearly independent, mutually orthogonal, positive odd
    isotropic roots orthogonal to lam + rho; ties are broken lexicographically
    on the root coordinates.
    """
    lam = alg.weight(lam.coords if isinstance(lam, Weight) else lam)
    if system is None:
        system = distinguished_system(alg)
    shifted = lam + system.rho
    a_lam = [a for a in system.positive_odd
             if alg.pair(a, a) == 0 and alg.pair(shifted, a) == 0]
    degree, witness = _max_orthogonal_independent(alg, a_lam)
    iso_all = [a for a in system.positive_odd if alg.pair(a, a) == 0]
    defect, _ = _max_orthogonal_independent(alg, iso_all)
    return {
        "degree": degree,
        "witness": witness,
        "a_lambda": tuple(a_lam),
        "defect": defect,
    }


def _max_orthogonal_independent(alg, roots):
    roots = sorted(roots, key=lambda w: w.sort_key())
    best, best_set = 0, ()
    for size in range(len(roots), 0, -1):
        for subset in itertools.combinations(roots, size):
            ok = all(alg.pair(a, b) == 0
                     for a, b in itertools.combinations(subset, 2))
            if not ok:
                continue
            mat = [list(a.coords) for a in subset]
            if linalg.rank(mat) == size:
                return size, subset
    return best, best_set
