"""Even unimodular lattices glued from root-lattice blocks.

Blocks use the standard Euclidean coordinate realisations

    A_n = {x in Z^(n+1) : x_1 + ... + x_(n+1) = 0},
    D_n = {x in Z^n : x_1 + ... + x_n even},

so block automorphisms given by (signed) coordinate permutations stay
integral.  A glued lattice is spanned by the blocks together with glue
vectors indexed by words of a code over the product of the glue groups
A_n'/A_n and D_n'/D_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .lattice import IntegerLattice
from .nt import hnf_row, lcm, solve_right, transpose
from .qseries import PuiseuxSeries


@dataclass(frozen=True)
class RootBlock:
    """One orthogonal summand together with its glue-group data."""

    kind: str
    rank: int
    ambient: int
    basis: tuple
    glue_order: int

    def glue_vector(self, label: int):
        """Representative of the glue class in ambient coordinates."""
        if self.kind == "A":
            m = self.rank + 1
            k = label % m
            return tuple(
                [Fraction(m - k, m)] * k + [Fraction(-k, m)] * (m - k)
            )
        n = self.ambient
        if label % 4 == 0:
            return tuple([Fraction(0)] * n)
        if label % 4 == 1:
            return tuple([Fraction(1, 2)] * n)
        if label % 4 == 2:
            return tuple([Fraction(0)] * (n - 1) + [Fraction(1)])
        return tuple([Fraction(1, 2)] * (n - 1) + [Fraction(-1, 2)])

    def add_labels(self, a: int, b: int) -> int:
        if self.kind == "A":
            return (a + b) % (self.rank + 1)
        if self.rank % 2 == 0:
            # Klein four-group on the labels {0, s, v, c}
            return a ^ b
        return (a + b) % 4

    def block_gram(self):
        rows = []
        for u in self.basis:
            rows.append(tuple(sum(x * y for x, y in zip(u, v)) for v in self.basis))
        return tuple(rows)


def block_a(n: int) -> RootBlock:
    basis = []
    for i in range(n):
        row = [0] * (n + 1)
        row[i] = 1
        row[i + 1] = -1
        basis.append(tuple(row))
    return RootBlock("A", n, n + 1, tuple(basis), n + 1)


def block_d(n: int) -> RootBlock:
    if n < 4:
        raise ValueError("D_n blocks need n >= 4")
    basis = []
    for i in range(n - 1):
        row = [0] * n
        row[i] = 1
        row[i + 1] = -1
        basis.append(tuple(row))
    last = [0] * n
    last[n - 2] = 1
    last[n - 1] = 1
    basis.append(tuple(last))
    return RootBlock("D", n, n, tuple(basis), 4)


def close_code(blocks, generators):
    """Closure of the generator words under componentwise label addition."""
    zero = tuple(0 for _ in blocks)
    seen = {zero}
    frontier = [zero]
    while frontier:
        word = frontier.pop()
        for gen in generators:
            new = tuple(
                b.add_labels(x, y) for b, x, y in zip(blocks, word, gen)
            )
            if new not in seen:
                seen.add(new)
                frontier.append(new)
    return tuple(sorted(seen))


@dataclass(frozen=True)
class GluedLattice:
    blocks: tuple
    code: tuple
    basis: tuple
    lattice: IntegerLattice

    @property
    def offsets(self):
        out = []
        pos = 0
        for b in self.blocks:
            out.append(pos)
            pos += b.ambient
        return tuple(out)

    def glue_row(self, word):
        row = []
        for b, label in zip(self.blocks, word):
            row.extend(b.glue_vector(label))
        return tuple(row)


def glue_lattice(blocks, generators, name: str) -> GluedLattice:
    blocks = tuple(blocks)
    code = close_code(blocks, [tuple(g) for g in generators])
    ambient = sum(b.ambient for b in blocks)
    rows = []
    pos = 0
    for b in blocks:
        for v in b.basis:
            row = [Fraction(0)] * ambient
            for j, x in enumerate(v):
                row[pos + j] = Fraction(x)
            rows.append(row)
        pos += b.ambient
    for gen in generators:
        row = []
        for b, label in zip(blocks, gen):
            row.extend(b.glue_vector(label))
        rows.append(list(row))

    scale = lcm(*[x.denominator for row in rows for x in row])
    integral = [[int(x * scale) for x in row] for row in rows]
    h, _ = hnf_row(integral)
    reduced = [row for row in h if any(row)]
    rank = sum(b.rank for b in blocks)
    if len(reduced) != rank:
        raise ValidationError(
            f"glued lattice has rank {len(reduced)}, expected {rank}"
        )
    basis = tuple(
        tuple(Fraction(x, scale) for x in row) for row in reduced
    )

    gram = []
    for u in basis:
        entries = []
        for v in basis:
            val = sum(x * y for x, y in zip(u, v))
            if val.denominator != 1:
                raise ValidationError("glue produced a non-integral inner product")
            entries.append(int(val))
        gram.append(entries)
    lat = IntegerLattice(gram, name=name)
    if not lat.is_even():
        raise ValidationError("glue produced an odd lattice")

    block_det = 1
    for b in blocks:
        block_det *= b.glue_order if b.kind == "A" else 4
    expected = block_det // len(code) ** 2
    if block_det != expected * len(code) ** 2 or lat.det() != expected:
        raise ValidationError(
            f"glued determinant {lat.det()} does not match {block_det}/|C|^2"
        )
    return GluedLattice(blocks, code, basis, lat)


def theta_by_glue(glued: GluedLattice, precision) -> PuiseuxSeries:
    """Theta series as a sum of coset-theta products over the glue code."""
    cache = {}
    lattices = []
    for b in glued.blocks:
        lattices.append(IntegerLattice([list(r) for r in b.block_gram()]))

    def coset_theta(i, label):
        b = glued.blocks[i]
        key = (b.kind, b.rank, label)
        if key not in cache:
            vec = b.glue_vector(label)
            coords = solve_right(transpose([list(r) for r in b.basis]), list(vec))
            cache[key] = lattices[i].theta_series(precision, offset=coords)
        return cache[key]

    total = PuiseuxSeries.zero(precision)
    for word in glued.code:
        term = coset_theta(0, word[0])
        for i in range(1, len(glued.blocks)):
            term = term * coset_theta(i, word[i])
        total = total + term
    return total


def automorphism_from_ambient(glued: GluedLattice, p):
    """Matrix of an ambient map on the glued basis, in column convention.

    p acts on ambient column vectors.  Raises ValidationError unless the
    image of every basis vector lies in the lattice with integer
    coordinates and the Gram matrix is preserved.
    """
    ambient = len(glued.basis[0])
    if len(p) != ambient or any(len(row) != ambient for row in p):
        raise ValidationError("ambient map has the wrong size")
    a = transpose([list(row) for row in glued.basis])
    columns = []
    for b in glued.basis:
        image = [sum(p[i][k] * b[k] for k in range(ambient)) for i in range(ambient)]
        x = solve_right(a, image)
        if x is None or any(c.denominator != 1 for c in x):
            raise ValidationError("ambient map does not preserve the lattice")
        columns.append([int(c) for c in x])
    u = [[columns[j][i] for j in range(len(columns))] for i in range(len(columns[0]))]
    if not glued.lattice.is_automorphism(u):
        raise ValidationError("ambient map does not preserve the Gram matrix")
    return tuple(tuple(row) for row in u)


def coordinate_cycle(d: int):
    """Cyclic shift (x_1, ..., x_d) -> (x_d, x_1, ..., x_(d-1))."""
    p = [[0] * d for _ in range(d)]
    p[0][d - 1] = 1
    for i in range(1, d):
        p[i][i - 1] = 1
    return [list(r) for r in p]


def identity_block(d: int):
    return [[1 if i == j else 0 for j in range(d)] for i in range(d)]


def negate(m):
    return [[-x for x in row] for row in m]


def assemble_blocks(blocks, entries):
    """Block matrix from {(target, source): local} placements.

    Every block index must occur exactly once as a target and once as a
    source, so the result is a block permutation with local actions.
    """
    blocks = tuple(blocks)
    targets = sorted(t for t, _ in entries)
    sources = sorted(s for _, s in entries)
    if targets != list(range(len(blocks))) or sources != list(range(len(blocks))):
        raise ValueError("entries must cover each block once as target and source")
    offsets = []
    pos = 0
    for b in blocks:
        offsets.append(pos)
        pos += b.ambient
    p = [[0] * pos for _ in range(pos)]
    for (t, s), local in entries.items():
        if len(local) != blocks[t].ambient or len(local[0]) != blocks[s].ambient:
            raise ValueError("local block has the wrong size")
        for i, row in enumerate(local):
            for j, x in enumerate(row):
                p[offsets[t] + i][offsets[s] + j] = x
    return p


# ---------------------------------------------------------------------------
# Specific glue codes and ambient maps


def _cyclic_shifts(word):
    out = []
    w = list(word)
    for _ in range(len(w)):
        out.append(tuple(w))
        w = [w[-1]] + w[:-1]
    return out


def niemeier_a4_6() -> GluedLattice:
    """N(A4^6): glue generated by the shifts of (1 | 0 1 4 4 1)."""
    blocks = [block_a(4)] * 6
    gens = [(1,) + shift for shift in _cyclic_shifts((0, 1, 4, 4, 1))]
    glued = glue_lattice(blocks, gens, "N(A4^6)")
    if len(glued.code) != 125:
        raise ValidationError(f"glue code has size {len(glued.code)}, expected 125")
    return glued


def case2_ambient():
    """Coordinate 5-cycle on the first A4, block 5-cycle on the rest."""
    blocks = [block_a(4)] * 6
    entries = {
        (0, 0): coordinate_cycle(5),
        (1, 5): identity_block(5),
        (2, 1): identity_block(5),
        (3, 2): identity_block(5),
        (4, 3): identity_block(5),
        (5, 4): identity_block(5),
    }
    return assemble_blocks(blocks, entries)


def case5_ambient():
    """The negative of the order-5 map; has order 10."""
    return negate(case2_ambient())


def niemeier_a9_2_d6() -> GluedLattice:
    blocks = [block_a(9), block_a(9), block_d(6)]
    gens = [(2, 4, 0), (5, 0, 1), (0, 5, 3)]
    glued = glue_lattice(blocks, gens, "N(A9^2 D6)")
    if len(glued.code) != 20:
        raise ValidationError(f"glue code has size {len(glued.code)}, expected 20")
    return glued


def case1_ambient():
    """Signed swap of the two A9 blocks with a signed 4-cycle on D6."""
    blocks = [block_a(9), block_a(9), block_d(6)]
    d6 = [[0] * 6 for _ in range(6)]
    d6[0][0] = 1
    d6[1][1] = 1
    d6[2][3] = 1
    d6[3][2] = 1
    d6[4][5] = -1
    d6[5][4] = 1
    entries = {
        (0, 1): negate(identity_block(10)),
        (1, 0): identity_block(10),
        (2, 2): d6,
    }
    return assemble_blocks(blocks, entries)


def ternary_golay_generators():
    """Rows generating the extended [12, 6] self-dual ternary code.

    Cyclic span of x^5 + x^4 + 2x^3 + x^2 + 2 on eleven coordinates,
    extended by the digit sum.  Self-duality is checked, which pins the
    code up to equivalence together with minimum weight 6.
    """
    g = (2, 0, 1, 2, 1, 1)
    gens = []
    for shift in range(6):
        word = [0] * 11
        for i, c in enumerate(g):
            word[(i + shift) % 11] = c
        word.append(sum(word) % 3)
        gens.append(tuple(word))
    for u in gens:
        for v in gens:
            if sum(x * y for x, y in zip(u, v)) % 3 != 0:
                raise ValidationError("ternary code extension is not self-dual")
    return gens


def niemeier_a2_12() -> GluedLattice:
    blocks = [block_a(2)] * 12
    glued = glue_lattice(blocks, ternary_golay_generators(), "N(A2^12)")
    if len(glued.code) != 729:
        raise ValidationError(f"glue code has size {len(glued.code)}, expected 729")
    if min(sum(1 for x in w if x) for w in glued.code if any(w)) != 6:
        raise ValidationError("glue code has minimum weight below 6")
    return glued


def tetracode_words():
    """The nine words of the self-dual [4, 2] ternary tetracode."""
    gens = [(1, 0, 1, 2), (0, 1, 1, 1)]
    words = set()
    for a in range(3):
        for b in range(3):
            words.add(tuple((a * x + b * y) % 3 for x, y in zip(*gens)))
    return tuple(sorted(words))


def niemeier_e6_4() -> GluedLattice:
    """N(E6^4) realised on twelve A2 blocks.

    Each E6 is the span of an A2 triple and the [111] glue word; the
    tetracode then glues the four E6 discriminant labels, embedded via
    the representative (1, 2, 0) per triple.
    """
    blocks = [block_a(2)] * 12
    rep = {0: (0, 0, 0), 1: (1, 2, 0), 2: (2, 1, 0)}
    gens = []
    for t in range(4):
        word = [0] * 12
        word[3 * t] = word[3 * t + 1] = word[3 * t + 2] = 1
        gens.append(tuple(word))
    for tet in [(1, 0, 1, 2), (0, 1, 1, 1)]:
        word = []
        for k in tet:
            word.extend(rep[k])
        gens.append(tuple(word))
    glued = glue_lattice(blocks, gens, "N(E6^4)")
    if len(glued.code) != 729:
        raise ValidationError(f"glue code has size {len(glued.code)}, expected 729")
    return glued


def case4_ambient():
    """Negated rotation of three E6 copies, -sigma_3 per A2 on the first."""
    blocks = [block_a(2)] * 12
    neg_s3 = negate(coordinate_cycle(3))
    entries = {}
    for i in range(3):
        entries[(i, i)] = neg_s3
    for i in range(3):
        entries[(3 + i, 9 + i)] = negate(identity_block(3))
        entries[(6 + i, 3 + i)] = negate(identity_block(3))
        entries[(9 + i, 6 + i)] = negate(identity_block(3))
    return assemble_blocks(blocks, entries)


# Monomial symmetry of the extended ternary code above, found as a word in
# its monomial group (coordinate shift, multiplication by 3, the two maps
# t -> -1/t and t -> t^3 / 5t^3 with quadratic-residue signs).  Orbits
# (7)(3 5)(1 9 8)(0 10 2 4 6 11) with sign products -, +, -, + per orbit.
_CASE3_PERMUTATION = (10, 9, 4, 5, 6, 3, 11, 7, 1, 8, 2, 0)
_CASE3_SIGNS = (-1, -1, -1, -1, -1, -1, 1, -1, -1, -1, -1, 1)


def case3_ambient():
    """Signed permutation of the twelve A2 blocks with order-6 shape.

    Copies on odd-length sign-negative orbits receive an extra
    coordinate rotation so the induced lattice map has cycle shape
    1 2^-2 3^-3 6^6.
    """
    blocks = [block_a(2)] * 12
    perm, signs = _CASE3_PERMUTATION, _CASE3_SIGNS
    orbit_of = {}
    seen = set()
    for i in range(12):
        if i not in seen:
            orbit = [i]
            seen.add(i)
            j = perm[i]
            while j != i:
                seen.add(j)
                orbit.append(j)
                j = perm[j]
            for k in orbit:
                orbit_of[k] = tuple(orbit)
    entries = {}
    for i in range(12):
        # rotate once on the fixed copy and on the 2-cycle so that the
        # returning power is a nontrivial rotation, not the identity
        if len(orbit_of[i]) <= 2 and i == orbit_of[i][0]:
            local = coordinate_cycle(3)
        else:
            local = identity_block(3)
        if signs[i] < 0:
            local = negate(local)
        entries[(perm[i], i)] = local
    return assemble_blocks(blocks, entries)
