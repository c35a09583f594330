"""Finite quadratic spaces, discriminant forms, and the Weil representation.

A finite quadratic space is presented by cyclic generator orders together
with the values Q(g_i) and B(g_i, g_j) in Q/Z.  All arithmetic is exact;
the Weil matrices have entries in Q(zeta_M) for M = lcm(8, level).

The heavy verification products (S^2, (ST)^3, unitarity) run on integer
numpy arrays of unreduced root-of-unity exponents and are reduced modulo
the cyclotomic polynomial at the end, so they are exact as well.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from .cyclo import CyclotomicNumber, sqrt_positive_int, unit_phase, _power_table, _phi
from .errors import (
    DegenerateForm,
    OddLattice,
    OddSignatureNeedsWord,
    SingularGram,
    TooLarge,
)
from .nt import det_int, lcm, snf
from .sl2 import sl2_check, sl2_word

Element = tuple[int, ...]


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


class FiniteQuadraticSpace:
    """Finite abelian group with a Q/Z-valued quadratic form."""

    def __init__(self, orders, q_gens, b_gens, dual_generators=None) -> None:
        self.orders = tuple(int(o) for o in orders)
        if any(o < 2 for o in self.orders):
            raise ValueError("generator orders must be at least 2")
        self.q_gens = tuple(_mod1(Fraction(q)) for q in q_gens)
        self.b_gens = tuple(tuple(_mod1(Fraction(b)) for b in row) for row in b_gens)
        k = len(self.orders)
        if len(self.q_gens) != k or len(self.b_gens) != k:
            raise ValueError("generator data sizes disagree")
        for i in range(k):
            if len(self.b_gens[i]) != k:
                raise ValueError("bilinear matrix is not square")
            for j in range(k):
                if self.b_gens[i][j] != self.b_gens[j][i]:
                    raise ValueError("bilinear matrix is not symmetric")
            if _mod1(2 * self.q_gens[i]) != self.b_gens[i][i]:
                raise ValueError("B(g,g) must equal 2Q(g)")
        self.dual_generators = dual_generators

    # -- group structure --------------------------------------------

    @property
    def order(self) -> int:
        n = 1
        for o in self.orders:
            n *= o
        return n

    def zero(self) -> Element:
        return (0,) * len(self.orders)

    def elements(self):
        return itertools.product(*(range(o) for o in self.orders))

    def reduce(self, x) -> Element:
        return tuple(int(a) % o for a, o in zip(x, self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % o for a, b, o in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % o for a, o in zip(x, self.orders))

    def element_order(self, x: Element) -> int:
        return lcm(1, *(o // gcd(o, a) for a, o in zip(x, self.orders)))

    def group_invariants(self) -> tuple[int, ...]:
        """Invariant factors of the underlying group, ascending, 1s dropped."""
        k = len(self.orders)
        d, _, _ = snf([[self.orders[i] if i == j else 0 for j in range(k)]
                       for i in range(k)])
        out = [d[i][i] for i in range(k)]
        return tuple(sorted(x for x in out if x > 1))

    # -- the form -----------------------------------------------------

    def q_value(self, x) -> Fraction:
        x = self.reduce(x)
        total = Fraction(0)
        k = len(x)
        for i in range(k):
            if x[i]:
                total += x[i] * x[i] * self.q_gens[i]
                for j in range(i + 1, k):
                    if x[j]:
                        total += x[i] * x[j] * self.b_gens[i][j]
        return _mod1(total)

    def b_value(self, x, y) -> Fraction:
        x, y = self.reduce(x), self.reduce(y)
        total = Fraction(0)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        total += a * b * self.b_gens[i][j]
        return _mod1(total)

    def q_value_multiset(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.q_value(x) for x in self.elements()))

    # -- invariants ----------------------------------------------------

    def level(self) -> int:
        n = lcm(1, *(q.denominator for q in self.q_gens),
                *(b.denominator for row in self.b_gens for b in row))
        return n

    def is_degenerate(self, limit: int = 200_000) -> bool:
        if self.order > limit:
            raise TooLarge(f"radical search over {self.order} elements")
        gens = self.standard_generators()
        zero = self.zero()
        for x in self.elements():
            if x == zero:
                continue
            if all(self.b_value(x, g) == 0 for g in gens):
                return True
        return False

    def standard_generators(self) -> list[Element]:
        k = len(self.orders)
        return [tuple(1 if i == j else 0 for j in range(k)) for i in range(k)]

    def signature_and_level(self) -> tuple[int, int]:
        """(signature mod 8, level) via the Milgram Gauss sum, exactly."""
        n = self.level()
        if self.is_degenerate():
            raise DegenerateForm("bilinear form has a nontrivial radical")
        counts = [0] * n
        for x in self.elements():
            q = self.q_value(x)
            counts[int(q * n) % n] += 1
        m = lcm(8, n)
        gauss = CyclotomicNumber.from_powers(
            m, {(j * m // n) % m: c for j, c in enumerate(counts) if c})
        target = sqrt_positive_int(self.order)
        for s in range(8):
            if gauss == target * unit_phase(Fraction(s, 8)):
                return s, n
        raise DegenerateForm("Milgram sum matched no eighth root of unity")

    def signature(self) -> int:
        return self.signature_and_level()[0]

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_even_lattice(cls, gram) -> "FiniteQuadraticSpace":
        """Discriminant form L'/L of an even lattice given by its Gram matrix."""
        g = [[int(x) for x in row] for row in gram]
        n = len(g)
        for i in range(n):
            if len(g[i]) != n:
                raise SingularGram("Gram matrix is not square")
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise SingularGram("Gram matrix is not symmetric")
            if g[i][i] % 2:
                raise OddLattice(f"diagonal entry {g[i][i]} is odd")
        det = det_int([row[:] for row in g])
        if det == 0:
            raise SingularGram("Gram matrix is singular")
        d, u, _ = snf(g, modulus=abs(det))
        gens = []
        orders = []
        for i in range(n):
            s = d[i][i]
            if s > 1:
                orders.append(s)
                gen = [Fraction(u[i][j], s) for j in range(n)]
                assert all(sum(x * g[k][j] for k, x in enumerate(gen)).denominator == 1
                           for j in range(n)), "generator is not in the dual"
                gens.append(gen)
        def ip(x, y):
            return sum(x[i] * g[i][j] * y[j] for i in range(n) for j in range(n))
        q_gens = [Fraction(ip(v, v), 2) for v in gens]
        b_gens = [[ip(v, w) for w in gens] for v in gens]
        return cls(orders, q_gens, b_gens, dual_generators=[tuple(v) for v in gens])

    def orthogonal_sum(self, other: "FiniteQuadraticSpace") -> "FiniteQuadraticSpace":
        k1, k2 = len(self.orders), len(other.orders)
        orders = self.orders + other.orders
        q = self.q_gens + other.q_gens
        b = [[Fraction(0)] * (k1 + k2) for _ in range(k1 + k2)]
        for i in range(k1):
            for j in range(k1):
                b[i][j] = self.b_gens[i][j]
        for i in range(k2):
            for j in range(k2):
                b[k1 + i][k1 + j] = other.b_gens[i][j]
        return FiniteQuadraticSpace(orders, q, b)


# -- subgroups ----------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    space: FiniteQuadraticSpace
    generators: tuple[Element, ...]
    elements: frozenset

    @classmethod
    def generated_by(cls, space: FiniteQuadraticSpace, gens) -> "Subgroup":
        gens = tuple(space.reduce(g) for g in gens)
        seen = {space.zero()}
        frontier = [space.zero()]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = space.add(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return cls(space, gens, frozenset(seen))

    def __len__(self) -> int:
        return len(self.elements)

    def is_isotropic(self) -> bool:
        return all(self.space.q_value(x) == 0 for x in self.elements)


def orthogonal_complement(space: FiniteQuadraticSpace, sub: Subgroup,
                          limit: int = 200_000) -> Subgroup:
    """A^perp = {x : B(x, a) = 0 for all a in A}, by exhaustive scan."""
    if space.order > limit:
        raise TooLarge(f"complement scan over {space.order} elements")
    gens = sub.generators if sub.generators else (space.zero(),)
    members = [x for x in space.elements()
               if all(space.b_value(x, g) == 0 for g in gens)]
    return Subgroup(space, tuple(members), frozenset(members))


def maximal_self_orthogonal_isotropics(space: FiniteQuadraticSpace,
                                       limit: int = 20_000) -> list[Subgroup]:
    """All isotropic subgroups I with I = I^perp.

    These exist only when |D| is a perfect square; the search is exhaustive
    over isotropic closures, so the group order is capped.
    """
    if space.order > limit:
        raise TooLarge(f"isotropic search over {space.order} elements")
    root = isqrt(space.order)
    if root * root != space.order:
        return []
    iso_elts = [x for x in space.elements() if space.q_value(x) == 0]
    results: dict[frozenset, Subgroup] = {}
    seen_states: set[frozenset] = set()

    def extend(current: Subgroup):
        if frozenset(current.elements) in seen_states:
            return
        seen_states.add(frozenset(current.elements))
        if len(current) == root:
            # candidate: verify I = I^perp
            comp = orthogonal_complement(space, current)
            if comp.elements == current.elements:
                results[current.elements] = current
            return
        for x in iso_elts:
            if x in current.elements:
                continue
            if any(space.b_value(x, g) != 0 for g in current.generators):
                continue
            if space.b_value(x, x) != 0:
                continue
            bigger = Subgroup.generated_by(space, current.generators + (x,))
            if len(bigger) <= root and bigger.is_isotropic():
                extend(bigger)

    extend(Subgroup.generated_by(space, ()))
    return sorted(results.values(), key=lambda s: sorted(s.elements))


# -- isomorphism testing ------------------------------------------------


def are_isomorphic(a: FiniteQuadraticSpace, b: FiniteQuadraticSpace,
                   limit: int = 10_000) -> bool:
    """Explicit isomorphism search preserving Q (and hence B)."""
    if a.order != b.order:
        return False
    if a.order > limit:
        raise TooLarge("isomorphism search too large")
    if a.group_invariants() != b.group_invariants():
        return False
    if a.q_value_multiset() != b.q_value_multiset():
        return False
    gens_a = a.standard_generators()
    b_elts = list(b.elements())
    candidates = []
    for i, g in enumerate(gens_a):
        oa, qa = a.orders[i], a.q_gens[i]
        cand = [x for x in b_elts
                if oa % b.element_order(x) == 0 and b.element_order(x) == oa
                and b.q_value(x) == qa]
        if not cand:
            return False
        candidates.append(cand)

    k = len(gens_a)
    # subgroup sizes along the generator prefixes; images must match them,
    # which prunes linearly dependent partial maps immediately
    expected = [1]
    for o in a.orders:
        expected.append(expected[-1] * o)

    def closure(span: frozenset, x: Element, cap: int):
        grown = set(span)
        frontier = [y for y in (b.add(s, x) for s in span) if y not in grown]
        while frontier:
            if len(grown) + len(frontier) > cap:
                return None
            grown.update(frontier)
            frontier = [y for y in (b.add(f, x) for f in frontier)
                        if y not in grown]
        return frozenset(grown) if len(grown) == cap else None

    def place(idx: int, chosen: list[Element], span: frozenset) -> bool:
        if idx == k:
            return len(span) == b.order
        for x in candidates[idx]:
            if not all(b.b_value(x, chosen[j]) == a.b_gens[idx][j]
                       for j in range(idx)):
                continue
            grown = closure(span, x, expected[idx + 1])
            if grown is None:
                continue
            if place(idx + 1, chosen + [x], grown):
                return True
        return False

    return place(0, [], frozenset({b.zero()}))


# -- the E-groups of fusion algebras -------------------------------------


class EGroup:
    """Z_n x Z_n with multiplication twisted by c_d(i, l) = d * floor((i+l)/n).

    Isomorphic to Z_{n^2/(d,n)} x Z_{(d,n)}; when d = 2r mod n the group
    carries the quadratic form Q((i,j)) = ij/n + i^2 r / n^2.
    """

    def __init__(self, n: int, d: int) -> None:
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.d = d % n

    def op(self, x, y) -> Element:
        n = self.n
        i, j = x[0] % n, x[1] % n
        l, k = y[0] % n, y[1] % n
        return ((i + l) % n, (j + k + self.d * ((i + l) // n)) % n)

    def identity(self) -> Element:
        return (0, 0)

    def inverse(self, x) -> Element:
        n = self.n
        i = x[0] % n
        ni = (n - i) % n
        c = self.d * ((i + ni) // n)
        return (ni, (-x[1] - c) % n)

    def power(self, x, k: int) -> Element:
        if k < 0:
            return self.power(self.inverse(x), -k)
        out = self.identity()
        for _ in range(k):
            out = self.op(out, x)
        return out

    def element_order(self, x) -> int:
        out = self.op(self.identity(), x)
        k = 1
        while out != self.identity():
            out = self.op(out, x)
            k += 1
        return k

    def elements(self):
        return itertools.product(range(self.n), range(self.n))

    def canonical_generators(self) -> tuple[Element, Element]:
        """(e1, e2) of orders n^2/(d,n) and (d,n)."""
        n, d = self.n, self.d
        g = gcd(d, n)
        e1 = (1 % n, 0)
        m = n // g
        if m == 1:
            gamma = 0
        else:
            inv = pow((d // g) % m, -1, m)
            gamma = (n // g) * inv
        e2 = self.op((0, 1 % n), self.inverse(self.power(e1, gamma)))
        return e1, e2

    def structure_orders(self) -> tuple[int, int]:
        n, d = self.n, self.d
        g = gcd(d, n)
        return (n * n // g, g)

    def q_value(self, x, r: int) -> Fraction:
        n = self.n
        i, j = x[0] % n, x[1] % n
        return _mod1(Fraction(i * j, n) + Fraction(i * i * (r % n), n * n))


def e_group(n: int, d: int, r: int | None = None):
    """The fusion group E_{c_d}(n); with r supplied (d = 2r mod n) the
    corresponding finite quadratic space on its canonical generators."""
    grp = EGroup(n, d)
    if r is None:
        return grp
    if (2 * r - d) % n != 0:
        raise ValueError("need d = 2r mod n to carry the quadratic form")
    e1, e2 = grp.canonical_generators()
    o1, o2 = grp.structure_orders()
    pairs = [(o, g) for o, g in ((o1, e1), (o2, e2)) if o > 1]
    orders = [o for o, _ in pairs]
    gens = [g for _, g in pairs]
    q = [grp.q_value(g, r) for g in gens]

    def bval(x, y):
        return _mod1(grp.q_value(grp.op(x, y), r) - grp.q_value(x, r)
                     - grp.q_value(y, r))

    b = [[bval(x, y) for y in gens] for x in gens]
    return FiniteQuadraticSpace(orders, q, b)


# -- Weil representation -------------------------------------------------


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * k with k squarefree; returns (s, k)."""
    s, k = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            s *= p ** (e // 2)
            if e % 2:
                k *= p
        p += 1
    if m > 1:
        k *= m
    return s, k


class WeilRepresentation:
    """Exact Weil representation data for one finite quadratic space."""

    def __init__(self, space: FiniteQuadraticSpace) -> None:
        self.space = space
        sign, level = space.signature_and_level()
        self.sign = sign
        self.level = level
        self.root_order = lcm(8, level)
        self.elements = list(space.elements())
        self.index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        m = self.root_order
        # T is diagonal with phases e^(2 pi i Q(x))
        self.t_exponents = np.array(
            [int(space.q_value(x) * m) % m for x in self.elements], dtype=np.int64)
        # S entries: |D|^(-1/2) e^(2 pi i (-B(x,y) - sign/8))
        off = (-sign * (m // 8)) % m
        exps = np.empty((n, n), dtype=np.int64)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                exps[i, j] = (-int(space.b_value(x, y) * m) + off) % m
        self.s_exponents = exps
        self.s_scale_sq = Fraction(1, space.order)  # (1/sqrt|D|)^2
        s, k = _squarefree_split(space.order)
        self.sqrt_scale = Fraction(1, s * k)  # 1/sqrt|D| = sqrt_scale * sqrt(k)
        self.sqrt_radicand = k

    # the composition state: (scalar, w, counts) represents
    # scalar * sqrt(k)^w * sum_e counts[..., e] zeta_M^e

    def _identity_state(self):
        n, m = len(self.elements), self.root_order
        counts = np.zeros((n, n, m), dtype=np.int64)
        for i in range(n):
            counts[i, i, 0] = 1
        return Fraction(1), 0, counts

    def _apply_t(self, state, power: int):
        scalar, w, counts = state
        m = self.root_order
        out = np.empty_like(counts)
        for j in range(counts.shape[1]):
            out[:, j, :] = np.roll(counts[:, j, :], (power * int(self.t_exponents[j])) % m,
                                   axis=-1)
        return scalar, w, out

    def _apply_s(self, state):
        scalar, w, counts = state
        n, m = counts.shape[1], self.root_order
        out = np.zeros_like(counts)
        for b in range(n):
            col = counts[:, b, :]
            for d in range(n):
                shift = int(self.s_exponents[b, d])
                out[:, d, :] += np.roll(col, shift, axis=-1)
        scalar = scalar * self.sqrt_scale
        if w:
            scalar = scalar * self.sqrt_radicand
        return scalar, 1 - w, out

    def matrix_state(self, word):
        state = self._identity_state()
        for gen, power in word:
            if gen == "T":
                state = self._apply_t(state, power)
            elif gen == "S":
                for _ in range(power % 8):
                    state = self._apply_s(state)
            else:
                raise ValueError(f"unknown generator {gen!r}")
        return state

    def materialize(self, state) -> list[list[CyclotomicNumber]]:
        scalar, w, counts = state
        m = self.root_order
        factor = CyclotomicNumber.rational(scalar)
        if w:
            factor = factor * sqrt_positive_int(self.sqrt_radicand)
        n = counts.shape[0]
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                nz = {e: int(c) for e, c in enumerate(counts[i, j]) if c}
                row.append(CyclotomicNumber.from_powers(m, nz) * factor if nz
                           else CyclotomicNumber.zero())
            out.append(row)
        return out

    def matrix(self, word) -> list[list[CyclotomicNumber]]:
        return self.materialize(self.matrix_state(word))

    def row_of_word(self, word, start: Element) -> list[CyclotomicNumber]:
        """Row (rho(word))_{start, .} without building the full matrix."""
        n, m = len(self.elements), self.root_order
        vec = np.zeros((n, m), dtype=np.int64)
        vec[self.index[self.space.reduce(start)], 0] = 1
        scalar, w = Fraction(1), 0
        for gen, power in word:
            if gen == "T":
                out = np.empty_like(vec)
                for j in range(n):
                    out[j] = np.roll(vec[j], (power * int(self.t_exponents[j])) % m)
                vec = out
            elif gen == "S":
                for _ in range(power % 8):
                    out = np.zeros_like(vec)
                    for b in range(n):
                        if not vec[b].any():
                            continue
                        row = vec[b]
                        for d in range(n):
                            out[d] += np.roll(row, int(self.s_exponents[b, d]))
                    scalar = scalar * self.sqrt_scale
                    if w:
                        scalar = scalar * self.sqrt_radicand
                    w = 1 - w
                    vec = out
            else:
                raise ValueError(f"unknown generator {gen!r}")
        factor = CyclotomicNumber.rational(scalar)
        if w:
            factor = factor * sqrt_positive_int(self.sqrt_radicand)
        out_row = []
        for j in range(n):
            nz = {e: int(c) for e, c in enumerate(vec[j]) if c}
            out_row.append(CyclotomicNumber.from_powers(m, nz) * factor if nz
                           else CyclotomicNumber.zero())
        return out_row


def weil_matrix(space: FiniteQuadraticSpace, m_or_word,
                rep: WeilRepresentation | None = None):
    """Weil matrix rho(M) as CyclotomicNumber rows.

    Accepts an SL2 matrix (even signature only; the representation then
    descends to SL2(Z)) or an explicit S,T word (any signature; the value
    is attached to the metaplectic element the word spells).
    """
    rep = rep or WeilRepresentation(space)
    if isinstance(m_or_word, (list, tuple)) and \
            (not m_or_word or (isinstance(m_or_word[0], tuple)
                               and isinstance(m_or_word[0][0], str))):
        word = list(m_or_word)
    else:
        m = sl2_check(m_or_word)
        if rep.sign % 2:
            raise OddSignatureNeedsWord(
                "odd-signature Weil matrices need an explicit S,T word")
        word = sl2_word(m)
    return rep.matrix(word)


# -- fast exact relation checks (for the property suite) -----------------


def _reduction_table(m: int) -> np.ndarray:
    table = _power_table(m)
    return np.array([table[k] for k in range(m)], dtype=np.int64)


def _mult_matrix(z: CyclotomicNumber, m: int) -> np.ndarray:
    """phi x phi integer matrix of multiplication by z on reduced vectors."""
    z = z.promote(m)
    assert all(c.denominator == 1 for c in z.coeffs)
    phi = _phi(m)
    table = _power_table(m)
    cols = []
    for j in range(phi):
        # z * x^j reduced
        acc = np.zeros(phi, dtype=np.int64)
        for kk, c in enumerate(z.coeffs):
            if c:
                acc += int(c) * np.array(table[(kk + j) % m if kk + j >= m else kk + j],
                                         dtype=np.int64)
        cols.append(acc)
    return np.stack(cols, axis=1)


def _histogram_product(exps_a: np.ndarray, exps_b: np.ndarray, m: int) -> np.ndarray:
    """counts[i, j, e] = #{k : exps_a[i,k] + exps_b[k,j] = e mod m}.

    The inputs are exponent matrices of monomial-entry matrices (every entry
    a single root of unity); the output is the unreduced product.
    """
    n = exps_a.shape[0]
    counts = np.zeros((n, n, m), dtype=np.int64)
    for i in range(n):
        e = (exps_a[i][:, None] + exps_b) % m  # (k, j)
        for j in range(n):
            np.add.at(counts[i, j], e[:, j], 1)
    return counts


def check_weil_relations(space: FiniteQuadraticSpace) -> dict[str, bool]:
    """Exact verification of S^8 = 1, (ST)^3 = S^2, unitarity, and
    S^2 = sign-phase times the negation permutation."""
    rep = WeilRepresentation(space)
    m = rep.root_order
    n = len(rep.elements)
    red = _reduction_table(m)
    phi = red.shape[1]

    s_exp = rep.s_exponents
    # S^2 with scalar 1/|D|: histogram product, reduced
    s2_counts = _histogram_product(s_exp, s_exp, m)
    s2_red = s2_counts.reshape(n * n, m) @ red
    s2_red = s2_red.reshape(n, n, phi)

    # expected: |D| * e^(-2 pi i sign/4) delta_{x, -y}
    phase = (-rep.sign * (m // 4)) % m
    expected = np.zeros((n, n, phi), dtype=np.int64)
    target_vec = space.order * red[phase]
    for i, x in enumerate(rep.elements):
        j = rep.index[space.neg(x)]
        expected[i, j] = target_vec
    ok_s2 = bool(np.array_equal(s2_red, expected))

    # Once S^2 = e^(-2 pi i sign/4) P is confirmed (P the negation
    # permutation, P^2 = id), S^8 = e^(-2 pi i sign) id = id follows;
    # the eighth-root phase is 8 * (-sign * m/8) = -sign * m = 0 mod m.
    ok_s8 = ok_s2 and ((-rep.sign * m) % m == 0)

    # (ST)^3 = S^2: P = ST has exponents s_exp[i,j] + t[j]
    st_exp = (s_exp + rep.t_exponents[None, :]) % m
    p2 = _histogram_product(st_exp, st_exp, m)
    # multiply P^2 (counts) by P (monomial) exactly: one more histogram pass
    p3 = np.zeros((n, n, m), dtype=np.int64)
    for k in range(n):
        for j in range(n):
            shift = int(st_exp[k, j])
            p3[:, j, :] += np.roll(p2[:, k, :], shift, axis=-1)
    p3_red = (p3.reshape(n * n, m) @ red).reshape(n, n, phi)
    # p3 carries scalar (1/sqrt|D|)^3 = (1/|D|) * 1/sqrt|D|; S^2 carries 1/|D|.
    # So require p3_red = sqrt(|D|) * s2_red.
    sqrt_d = sqrt_positive_int(space.order)
    mul_sqrt = _mult_matrix(sqrt_d, m)
    s2_scaled = s2_red.reshape(n * n, phi) @ mul_sqrt.T
    ok_st3 = bool(np.array_equal(p3_red.reshape(n * n, phi), s2_scaled))

    # unitarity: S Sbar^T = |D| * id (with the 1/|D| scalar folded in)
    sbar_t = (-s_exp.T) % m
    uni = _histogram_product(s_exp, sbar_t, m)
    uni_red = (uni.reshape(n * n, m) @ red).reshape(n, n, phi)
    expected_uni = np.zeros((n, n, phi), dtype=np.int64)
    id_vec = space.order * red[0]
    for i in range(n):
        expected_uni[i, i] = id_vec
    ok_uni = bool(np.array_equal(uni_red, expected_uni))
    # T is diagonal with unit phases, so T Tbar^T = id holds trivially.

    return {"S2_negation": ok_s2, "S8": ok_s8, "ST3": ok_st3, "unitary": ok_uni}


def random_even_gram(rank: int, rng: random.Random, spread: int = 2):
    """Random even positive-definite Gram matrix (via 2 A^T A)."""
    while True:
        a = [[rng.randint(-spread, spread) for _ in range(rank)] for _ in range(rank)]
        g = [[2 * sum(a[k][i] * a[k][j] for k in range(rank)) for j in range(rank)]
             for i in range(rank)]
        from .nt import det_int
        if det_int(g) != 0:
            return g


__all__ = [
    "FiniteQuadraticSpace",
    "Subgroup",
    "orthogonal_complement",
    "maximal_self_orthogonal_isotropics",
    "are_isomorphic",
    "EGroup",
    "e_group",
    "WeilRepresentation",
    "weil_matrix",
    "check_weil_relations",
    "random_even_gram",
]
