"""Integer lattices: theta series, automorphisms, cycle shapes.

A lattice is its Gram matrix; vectors are integer coordinate columns and
automorphisms are integer matrices U with U^T G U = G acting as v -> U v.
Short-vector enumeration is exact (rational LDL decomposition with integer
bounds), so theta coefficients are exact counts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from sympy import Poly, Symbol, cyclotomic_poly

_x = Symbol("x")

from .errors import (
    NonIntegralResult,
    NotFiniteOrder,
    NotPositiveDefinite,
    OddLattice,
    SingularGram,
    UnboundedSearch,
)
from .fqs import FiniteQuadraticSpace
from .nt import (
    charpoly_int,
    det_int,
    identity_matrix,
    mat_eq,
    mat_mul,
    poly_divmod_int,
    poly_mul_int,
    right_kernel_int,
    solve_right,
    transpose,
)
from .qseries import PuiseuxSeries


def _as_int_matrix(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


class IntegerLattice:
    """Finitely generated free Z-module with an integral symmetric form."""

    def __init__(self, gram, name: str | None = None) -> None:
        g = _as_int_matrix(gram)
        n = len(g)
        for row in g:
            if len(row) != n:
                raise SingularGram("Gram matrix is not square")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise SingularGram("Gram matrix is not symmetric")
        self.gram = g
        self.name = name

    @property
    def rank(self) -> int:
        return len(self.gram)

    def det(self) -> int:
        return det_int([list(r) for r in self.gram])

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def bilinear(self, v, w) -> Fraction | int:
        return sum(v[i] * self.gram[i][j] * w[j]
                   for i in range(self.rank) for j in range(self.rank))

    def norm(self, v):
        return self.bilinear(v, v)

    def rescale(self, factor) -> "IntegerLattice":
        """L(factor): multiply the form by a rational scalar."""
        f = Fraction(factor)
        out = []
        for row in self.gram:
            new_row = []
            for x in row:
                y = f * x
                if y.denominator != 1:
                    raise NonIntegralResult(
                        f"scaling by {factor} leaves {y} non-integral")
                new_row.append(int(y))
            out.append(new_row)
        return IntegerLattice(out, name=None)

    def direct_sum(self, other: "IntegerLattice") -> "IntegerLattice":
        n, m = self.rank, other.rank
        g = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                g[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                g[n + i][n + j] = other.gram[i][j]
        return IntegerLattice(g)

    def discriminant_group(self) -> FiniteQuadraticSpace:
        return FiniteQuadraticSpace.from_even_lattice(self.gram)

    def level(self) -> int:
        return self.discriminant_group().level()

    # -- enumeration ---------------------------------------------------

    def _ldl(self):
        """G = L D L^T with L unit lower triangular, D positive diagonal."""
        n = self.rank
        a = [[Fraction(x) for x in row] for row in self.gram]
        l = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        d = [Fraction(0)] * n
        for j in range(n):
            d[j] = a[j][j] - sum(l[j][k] ** 2 * d[k] for k in range(j))
            if d[j] <= 0:
                raise NotPositiveDefinite(
                    "LDL pivot is not positive; enumeration needs a"
                    " positive-definite form")
            for i in range(j + 1, n):
                l[i][j] = (a[i][j] - sum(l[i][k] * l[j][k] * d[k]
                                         for k in range(j))) / d[j]
        return l, d

    def enumerate_vectors(self, max_norm, offset=None, strict: bool = True):
        """All v with norm(v + offset) < max_norm (or <= if strict=False).

        The offset is a rational vector in lattice coordinates; vectors come
        out in a fixed lexicographic order, so runs are reproducible.
        """
        n = self.rank
        bound = Fraction(max_norm)
        if offset is None:
            offset = [Fraction(0)] * n
        else:
            offset = [Fraction(x) for x in offset]
        l, d = self._ldl()
        # norm(y) = sum_i d_i (y_i + sum_{j>i} l_ji y_j)^2 for y = v + offset
        out: list[tuple[tuple[int, ...], Fraction]] = []
        y = [Fraction(0)] * n

        def descend(i: int, remaining: Fraction):
            if i < 0:
                total = bound - remaining
                out.append((tuple(int(y[k] - offset[k]) for k in range(n)),
                            total))
                return
            shift = offset[i] + sum(l[j][i] * y[j] for j in range(i + 1, n))
            # d_i (x_i + shift)^2 <= remaining (strictness handled at the leaf)
            radius_sq = remaining / d[i]
            # integer window around -shift of half-width sqrt(radius_sq)
            r_num, r_den = radius_sq.numerator, radius_sq.denominator
            root_floor = Fraction(isqrt(r_num * r_den), r_den)
            lo = -shift - root_floor - 1
            hi = -shift + root_floor + 1
            x = lo.numerator // lo.denominator
            top = hi.numerator // hi.denominator + 1
            while x <= top:
                val = d[i] * (x + shift) ** 2
                if val <= remaining:
                    y[i] = x + offset[i]
                    descend(i - 1, remaining - val)
                x += 1

        descend(n - 1, bound)
        result = []
        for v, norm_val in sorted(out):
            if strict and norm_val >= bound:
                continue
            result.append((v, norm_val))
        return result

    def theta_series(self, precision, offset=None) -> PuiseuxSeries:
        """Sum over v + offset of q^(norm/2), exact counts, given precision."""
        prec = Fraction(precision)
        counts: dict[Fraction, int] = {}
        for _, norm_val in self.enumerate_vectors(2 * prec, offset=offset):
            e = norm_val / 2
            counts[e] = counts.get(e, 0) + 1
        return PuiseuxSeries(counts, precision=prec)

    def minimum(self) -> int:
        # the basis vectors bound the minimum by the largest diagonal entry
        bound = max(self.gram[i][i] for i in range(self.rank)) + 1
        best = None
        for v, norm_val in self.enumerate_vectors(bound):
            if v != (0,) * self.rank:
                if best is None or norm_val < best:
                    best = norm_val
        if best is None:
            raise NotPositiveDefinite("no nonzero vector found in bound")
        return int(best)

    def roots(self, region=None):
        """Vectors with norm/2 = d and contained in d*dual, d dividing the level.

        For a positive-definite lattice the search is complete; otherwise an
        explicit coordinate box (list of (lo, hi) per coordinate) is required.
        """
        level = self.level()
        divisors = [d for d in range(1, level + 1) if level % d == 0]
        out = []
        if region is None:
            bound = 2 * max(divisors)
            try:
                candidates = [v for v, nv in self.enumerate_vectors(
                    bound, strict=False)]
            except NotPositiveDefinite:
                raise UnboundedSearch(
                    "indefinite lattice needs an explicit search region")
        else:
            candidates = []
            ranges = [range(lo, hi + 1) for lo, hi in region]
            for tup in itertools.product(*ranges):
                candidates.append(tup)
        for v in candidates:
            nv = self.norm(v)
            if nv <= 0 or nv % 2:
                continue
            d = nv // 2
            if d in divisors and self._in_scaled_dual(v, d):
                out.append(tuple(v))
        return out

    def _in_scaled_dual(self, v, d: int) -> bool:
        """v in d * dual, i.e. all inner products with basis divisible by d."""
        return all(sum(self.gram[i][j] * v[j] for j in range(self.rank)) % d == 0
                   for i in range(self.rank))

    # -- automorphisms ---------------------------------------------------

    def is_automorphism(self, u) -> bool:
        m = [list(r) for r in _as_int_matrix(u)]
        g = [list(r) for r in self.gram]
        return mat_eq(mat_mul(mat_mul(transpose(m), g), m), g)

    def automorphism_order(self, u, bound: int = 1000) -> int:
        m = [list(r) for r in _as_int_matrix(u)]
        p = m
        ident = identity_matrix(self.rank)
        for k in range(1, bound + 1):
            if mat_eq(p, ident):
                return k
            p = mat_mul(p, m)
        raise NotFiniteOrder(f"no power up to {bound} is the identity")

    def cycle_shape(self, u) -> dict[int, int]:
        """Exponents b_t with char poly of u = prod_t (x^t - 1)^(b_t).

        Negative exponents are allowed (frame shapes); the factorization is
        verified by reconstruction, so a wrong shape cannot escape.
        """
        m = [list(r) for r in _as_int_matrix(u)]
        order = self.automorphism_order(m)
        p = charpoly_int(m)
        divisors = [t for t in range(1, order + 1) if order % t == 0]
        mult: dict[int, int] = {}
        rem = p[:]
        for dd in divisors:
            phi = [int(c) for c in Poly(cyclotomic_poly(dd, _x), _x).all_coeffs()]
            count = 0
            while True:
                try:
                    quo, r = poly_divmod_int(rem, phi)
                except ValueError:
                    break
                if any(r):
                    break
                rem = quo
                count += 1
            if count:
                mult[dd] = count
        if rem != [1]:
            raise NotFiniteOrder("characteristic polynomial has a"
                                 " non-cyclotomic factor")
        shape: dict[int, int] = {}
        for t in sorted(divisors, reverse=True):
            b = mult.get(t, 0) - sum(v for tt, v in shape.items() if tt % t == 0)
            if b:
                shape[t] = b
        # verify: prod (x^t - 1)^(b_t) = charpoly, moving negatives across
        lhs, rhs = [1], p[:]
        for t, b in shape.items():
            cyc = [1] + [0] * (t - 1) + [-1]
            for _ in range(abs(b)):
                if b > 0:
                    lhs = poly_mul_int(lhs, cyc)
                else:
                    rhs = poly_mul_int(rhs, cyc)
        if lhs != rhs:
            raise NotFiniteOrder("cycle shape reconstruction failed")
        return dict(sorted(shape.items()))

    def fixed_and_coinvariant(self, u, k: int = 1) -> "FixedCoinvariant":
        """Fixed sublattice of u^k and its orthogonal complement in L.

        Also returns the averaging projection pi = (1/m') sum_i u^(ik) and
        its complement as rational matrices (m' the order of u^k).
        """
        base = [list(r) for r in _as_int_matrix(u)]
        n = self.rank
        m = identity_matrix(n)
        for _ in range(k % self.automorphism_order(base)):
            m = mat_mul(m, base)
        order = self.automorphism_order(m)
        delta = [[m[i][j] - (i == j) for j in range(n)] for i in range(n)]
        fixed_basis = right_kernel_int(delta)
        # coinvariant: kernel of the norm map sum_i (u^k)^i
        total = identity_matrix(n)
        p = identity_matrix(n)
        for _ in range(order - 1):
            p = mat_mul(p, m)
            total = [[total[i][j] + p[i][j] for j in range(n)] for i in range(n)]
        coinv_basis = right_kernel_int(total)
        projection = [[Fraction(total[i][j], order) for j in range(n)]
                      for i in range(n)]
        complement = [[Fraction(int(i == j)) - projection[i][j]
                       for j in range(n)] for i in range(n)]
        g = [list(r) for r in self.gram]

        def sublattice(basis):
            if not basis:
                return IntegerLattice([]), []
            bmat = [list(b) for b in basis]  # rows are vectors
            gg = mat_mul(mat_mul(bmat, g), transpose(bmat))
            return IntegerLattice(gg), [tuple(b) for b in basis]

        fixed, fb = sublattice(fixed_basis)
        coinv, cb = sublattice(coinv_basis)
        return FixedCoinvariant(fixed, fb, coinv, cb, projection, complement)

    def vector_in_sublattice(self, basis, v):
        """Coordinates of v in the given sublattice basis, or None."""
        if not basis:
            return None
        a = transpose([list(b) for b in basis])
        coords = solve_right(a, list(v))
        if coords is None:
            return None
        if any(c.denominator != 1 for c in coords):
            return None
        return [int(c) for c in coords]

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        out = {"gram": [list(r) for r in self.gram]}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json_dict(cls, data) -> "IntegerLattice":
        return cls(data["gram"], name=data.get("name"))

    def __repr__(self) -> str:
        label = self.name or f"rank {self.rank}"
        return f"IntegerLattice({label}, det {self.det()})"


@dataclass
class FixedCoinvariant:
    fixed: IntegerLattice
    fixed_basis: list
    coinvariant: IntegerLattice
    coinvariant_basis: list
    projection: list
    complement: list


def shape_of_power(shape: dict[int, int], k: int) -> dict[int, int]:
    """Cycle shape of nu^k from the shape of nu."""
    from math import gcd
    out: dict[int, int] = {}
    for t, b in shape.items():
        g = gcd(t, k)
        tt = t // g
        out[tt] = out.get(tt, 0) + b * g
    return {t: b for t, b in sorted(out.items()) if b}


def format_cycle_shape(shape: dict[int, int]) -> str:
    parts = []
    for t in sorted(shape):
        b = shape[t]
        parts.append(f"{t}" if b == 1 else f"{t}^{b}")
    return " ".join(parts)


def parse_cycle_shape(text: str) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in text.split():
        if "^" in part:
            t, b = part.split("^")
            out[int(t)] = int(b)
        else:
            out[int(part)] = out.get(int(part), 0) + 1
    return out


__all__ = [
    "IntegerLattice",
    "FixedCoinvariant",
    "shape_of_power",
    "format_cycle_shape",
    "parse_cycle_shape",
]
