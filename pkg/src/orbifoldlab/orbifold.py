"""Cyclic orbifold characters of lattice vertex operator algebras.

The pipeline starts from an even unimodular positive-definite lattice and a
finite-order automorphism.  The untwisted trace functions are quotients of
sign-split theta series by eta products; every other entry of the trace
table is obtained from those by an exact modular transformation, with the
discriminant-form Weil representation acting on the theta part and the
Hermite-reduced eta multipliers acting on the denominator.  Characters of
the irreducible fixed-point modules follow by finite Fourier inversion, and
their sums give the character of the orbifold algebra.

Downstream of the characters: fusion-group reports, the two closed
dimension formulas for the weight-one space, the inverse-orbifold
consistency checks, and the expansion of the fixed-point character as a
polynomial in a Hauptmodul.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy import divisor_sigma

from .autlift import LiftData, TwistedTypeData, twisted_weight_and_type
from .cyclo import CyclotomicNumber, unit_phase
from .errors import (
    InsufficientPrecision,
    JMismatch,
    NonIntegralCharacter,
    NonIntegralResult,
    TypeNotZero,
    UnsupportedN,
    ValidationError,
)
from .fqs import (
    FiniteQuadraticSpace,
    WeilRepresentation,
    e_group,
    maximal_self_orthogonal_isotropics,
)
from .lattice import IntegerLattice, shape_of_power
from .modtrans import AutomorphyFactor, transform_scaled_eta, z_character
from .nt import det_int, lcm, solve_right, transpose
from .qseries import (
    HAUPTMODUL_LEVELS,
    PuiseuxSeries,
    eisenstein_e4,
    eta_product,
    hauptmodul,
    j_function,
    modular_discriminant,
)
from .sl2 import mp2_of_word, sl2_check, sl2_word

__all__ = [
    "FusionReport",
    "InverseOrbifoldReport",
    "OrbifoldInput",
    "OrbifoldResult",
    "TraceTable",
    "all_traces",
    "dimension_formula_I",
    "dimension_formula_II",
    "fixed_point_dimensions",
    "fusion_report",
    "hauptmodul_coefficients",
    "inverse_orbifold_check",
    "module_characters",
    "orbifold_character",
    "run_pipeline",
    "sl2_completion",
    "transformed_trace",
    "twisted_dims_from_traces",
    "unimodular_theta",
    "untwisted_traces",
]


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


class OrbifoldInput:
    """Even unimodular lattice, automorphism, and a working precision.

    The series precision is an exponent cutoff: all characters are exact
    below it.  Construction computes the standard lift and the type data;
    positive definiteness and rank divisibility by 8 are checked here so
    the later stages can rely on them.
    """

    def __init__(self, lattice: IntegerLattice, automorphism,
                 precision=Fraction(4)) -> None:
        self.lattice = lattice
        self.automorphism = tuple(tuple(int(x) for x in row)
                                  for row in automorphism)
        self.precision = Fraction(precision)
        if lattice.rank % 8:
            raise ValidationError("rank must be a multiple of 8")
        for k in range(1, lattice.rank + 1):
            minor = det_int([row[:k] for row in lattice.gram[:k]])
            if minor <= 0:
                raise ValidationError("lattice must be positive-definite")
        self.lift = LiftData.from_automorphism(lattice, self.automorphism)
        self.type_data = twisted_weight_and_type(lattice, self.automorphism,
                                                 lift=self.lift)
        self.n = self.type_data.n
        self.shape = lattice.cycle_shape(self.automorphism)
        self._disc_cache: dict = {}
        self._theta_cache: dict = {}


@dataclass(frozen=True)
class TraceTable:
    """Twisted traces T(1,i,j) indexed over Z_n x Z_n.

    lambdas are the S-matrix constants of the chosen module phases; for
    type n{0} they are all one, and the table is only built in that case.
    """

    n: int
    c: int
    traces: dict
    lambdas: dict


def _expand_to(target: Fraction, build):
    """Run build at increasing working precision until target is reached."""
    slack = Fraction(2)
    for _ in range(6):
        out = build(target + slack)
        if out.precision is None or out.precision >= target:
            return out.truncate(target)
        slack *= 2
    raise InsufficientPrecision("trace expansion stalled below target")


def unimodular_theta(lattice: IntegerLattice, precision) -> PuiseuxSeries:
    """Theta series of an even unimodular positive-definite lattice.

    For ranks 8 and 16 the theta series is a power of E4; for rank 24 the
    root count fixes the coefficient of the discriminant form.  Other
    ranks fall back to direct vector enumeration.
    """
    if lattice.det() != 1 or not lattice.is_even():
        raise ValidationError("fast theta path needs an even unimodular lattice")
    prec = Fraction(precision)
    rank = lattice.rank
    if rank == 8:
        return eisenstein_e4(prec)
    if rank == 16:
        e4 = eisenstein_e4(prec)
        return e4 * e4
    if rank == 24:
        e4 = eisenstein_e4(prec)
        roots = len(lattice.roots())
        return e4 ** 3 + modular_discriminant(prec) * (roots - 720)
    return lattice.theta_series(prec)


def _split_theta(split, precision) -> PuiseuxSeries:
    if not split.kernel_basis:
        return PuiseuxSeries.one()
    kernel = split.kernel
    if split.beta1 is None and kernel.rank % 8 == 0 and kernel.det() == 1:
        return unimodular_theta(kernel, precision)
    return split.signed_theta(precision)


def _untwisted_trace(inp: OrbifoldInput, j: int, target) -> PuiseuxSeries:
    split = inp.lift.split(j)
    shape = shape_of_power(inp.shape, j)

    def build(work):
        return _split_theta(split, work) / eta_product(shape, work)

    return _expand_to(Fraction(target), build)


def untwisted_traces(inp: OrbifoldInput) -> dict:
    """T(1,0,j) for all j: sign-split theta over eta product, at the cusp."""
    return {j: _untwisted_trace(inp, j, inp.precision) for j in range(inp.n)}


def sl2_completion(c: int, d: int):
    """The canonical SL2(Z) matrix with bottom row (c, d).

    The top row is the minimal Bezout solution, so the choice is
    deterministic; any other completion differs by a power of T on the
    left, which the trace transforms absorb.
    """
    g, x, y = _xgcd(d, c)
    if g != 1:
        raise ValueError("bottom row must be coprime")
    return sl2_check((x, -y, c, d))


def _coordinates_in(basis, vector):
    coords = solve_right(transpose([list(b) for b in basis]), list(vector))
    if coords is None:
        raise ValidationError("vector outside the rational span of the basis")
    return [Fraction(x) for x in coords]


def _disc_class(space: FiniteQuadraticSpace, coords):
    """Group element whose dual-generator combination is coords mod 1."""
    gens = space.dual_generators
    for x in space.elements():
        combo = [sum(Fraction(a) * gen[i] for a, gen in zip(x, gens))
                 for i in range(len(coords))]
        if all((u - v).denominator == 1 for u, v in zip(combo, coords)):
            return x
    raise ValidationError("coset representative not found in the "
                          "discriminant group")


def _weil_data(inp: OrbifoldInput, g: int):
    if g not in inp._disc_cache:
        space = inp.lift.split(g).kernel.discriminant_group()
        inp._disc_cache[g] = (space, WeilRepresentation(space))
    return inp._disc_cache[g]


def _coset_theta(inp: OrbifoldInput, g: int, x, precision) -> PuiseuxSeries:
    key = (g, x, Fraction(precision))
    if key not in inp._theta_cache:
        kernel = inp.lift.split(g).kernel
        if any(x):
            space, _ = _weil_data(inp, g)
            gens = space.dual_generators
            offset = [sum(Fraction(a) * gen[i] for a, gen in zip(x, gens))
                      for i in range(kernel.rank)]
            series = kernel.theta_series(precision, offset=offset)
        else:
            series = kernel.theta_series(precision)
        inp._theta_cache[key] = series
    return inp._theta_cache[key]


def _transformed_split_theta(inp: OrbifoldInput, g: int, word,
                             precision) -> AutomorphyFactor:
    split = inp.lift.split(g)
    if not split.kernel_basis:
        return AutomorphyFactor(Fraction(0), CyclotomicNumber.one(),
                                PuiseuxSeries.one())
    space, rep = _weil_data(inp, g)
    row = rep.row_of_word(word, space.zero())
    if split.beta1 is not None:
        coords = _coordinates_in(split.kernel_basis, split.beta1)
        other = rep.row_of_word(word, _disc_class(space, coords))
        row = [a - b for a, b in zip(row, other)]
    total = PuiseuxSeries.zero()
    for x, coeff in zip(rep.elements, row):
        if not coeff:
            continue
        total = total + _coset_theta(inp, g, x, precision) * coeff
    rank = split.kernel.rank
    beta = mp2_of_word(word).beta
    return AutomorphyFactor(Fraction(rank, 2),
                            CyclotomicNumber.rational(beta ** rank), total)


def _transformed_eta(inp: OrbifoldInput, g: int, m, precision) -> AutomorphyFactor:
    shape = shape_of_power(inp.shape, g)
    out = None
    for t in sorted(shape):
        if not shape[t]:
            continue
        factor = transform_scaled_eta(t, m, precision) ** shape[t]
        out = factor if out is None else out * factor
    assert out is not None
    return out


def transformed_trace(inp: OrbifoldInput, g: int, m, precision=None) -> PuiseuxSeries:
    """T(1,0,g) evaluated at M.tau, divided by the character Z(M).

    m may be any SL2(Z) matrix; picking the bottom row (i,j)/gcd(i,j)
    turns this into T(1,i,j).  The result is independent of the chosen
    completion of that bottom row.
    """
    target = Fraction(inp.precision if precision is None else precision)
    m = sl2_check(m)
    word = sl2_word(m)
    z = z_character(m, inp.lattice.rank)

    def build(work):
        num = _transformed_split_theta(inp, g, word, work)
        den = _transformed_eta(inp, g, m, work)
        return (num / den).as_series() / z

    return _expand_to(target, build)


def all_traces(inp: OrbifoldInput) -> TraceTable:
    """The full trace table over Z_n x Z_n for an automorphism of type n{0}."""
    td = inp.type_data
    if td.r % td.n:
        raise TypeNotZero(
            f"automorphism has type {td.type_string}; character assembly "
            "requires r = 0")
    n = inp.n
    traces = {}
    for j in range(n):
        traces[(0, j)] = _untwisted_trace(inp, j, inp.precision)
    for i in range(1, n):
        for j in range(n):
            g = gcd(i, j)
            m = sl2_completion(i // g, j // g)
            traces[(i, j)] = transformed_trace(inp, g, m)
    lambdas = {key: CyclotomicNumber.one() for key in traces}
    return TraceTable(n, inp.lattice.rank, traces, lambdas)


def _integral_character(series: PuiseuxSeries, i: int, j: int, n: int,
                        c: int) -> PuiseuxSeries:
    support = Fraction(i * j, n) - Fraction(c, 24)
    terms = {}
    for e, coeff in series.terms.items():
        if (e - support).denominator != 1:
            raise NonIntegralCharacter(
                f"W^({i},{j}) has a term at q^{e} outside {support} + Z")
        if isinstance(coeff, CyclotomicNumber):
            if not coeff.is_rational():
                raise NonIntegralCharacter(
                    f"W^({i},{j}) coefficient at q^{e} is not rational")
            coeff = coeff.to_rational()
        value = Fraction(coeff)
        if value.denominator != 1 or value < 0:
            raise NonIntegralCharacter(
                f"W^({i},{j}) coefficient {value} at q^{e} is not a "
                "non-negative integer")
        terms[e] = int(value)
    return PuiseuxSeries(terms, series.precision)


def module_characters(table: TraceTable) -> dict:
    """ch of W^(i,j) by Fourier inversion of the trace table.

    Any residual cyclotomic phase, fractional coefficient or exponent
    outside ij/n + Z is a hard error: those only arise from a transform
    bug upstream, never from a valid input.
    """
    n = table.n
    out = {}
    for i in range(n):
        for j in range(n):
            acc = PuiseuxSeries.zero()
            for l in range(n):
                acc = acc + table.traces[(i, l)] * unit_phase(Fraction(-l * j, n))
            out[(i, j)] = _integral_character(acc / n, i, j, n, table.c)
    return out


@dataclass(frozen=True)
class FusionReport:
    """Fusion group of the fixed-point subalgebra as a quadratic space."""

    space: FiniteQuadraticSpace
    orders: tuple
    level: int
    level_tilde: int
    isotropics: tuple


def fusion_report(td: TwistedTypeData, c: int = 24) -> FusionReport:
    """Fusion quadratic space E_{c_{2r}} with levels and isotropic data.

    level is the level N = n^2/(r,n) of the quadratic form; level_tilde
    additionally absorbs the cube root of unity entering the trace
    transformations unless 3 divides c/8.
    """
    n = td.n
    space = e_group(n, (2 * td.r) % n, td.r % n)
    assert space.level() == td.level
    tilde = td.level if (c // 8) % 3 == 0 else lcm(3, td.level)
    iso = maximal_self_orthogonal_isotropics(space)
    return FusionReport(space, tuple(space.orders), td.level, tilde,
                        tuple(iso))


@dataclass
class OrbifoldResult:
    """Characters and consistency data of one orbifold run."""

    characters: dict
    character: PuiseuxSeries
    dims: dict
    fusion: FusionReport
    type_data: TwistedTypeData
    j_consistent: bool | None
    precision: Fraction
    table: TraceTable | None = None


def orbifold_character(inp: OrbifoldInput, characters: dict) -> OrbifoldResult:
    """Character of the orbifold algebra: the sum over ch of W^(i,0).

    For central charge 24 the result must be the j-invariant plus its
    constant term; any discrepancy within the working precision raises.
    """
    n = inp.n
    ch = characters[(0, 0)]
    for i in range(1, n):
        ch = ch + characters[(i, 0)]
    c = inp.lattice.rank
    shift = Fraction(c, 24)
    prec = ch.precision if ch.precision is not None else inp.precision
    dims = {}
    k = 0
    while k - shift < prec:
        dims[k] = ch.integer_coefficient(k - shift)
        k += 1
    j_ok = None
    if c == 24:
        expected = j_function(prec) + dims.get(1, 0)
        if not ch.agrees_with(expected):
            raise JMismatch("orbifold character is not j plus a constant")
        j_ok = True
    return OrbifoldResult(characters, ch, dims, fusion_report(inp.type_data, c),
                          inp.type_data, j_ok, inp.precision)


def run_pipeline(inp: OrbifoldInput) -> OrbifoldResult:
    """Trace table, characters, and orbifold character in one sweep."""
    table = all_traces(inp)
    result = orbifold_character(inp, module_characters(table))
    result.table = table
    return result


def fixed_point_dimensions(character: PuiseuxSeries, n: int,
                           c: int = 24) -> list:
    """dim of the fixed-point weight spaces 1..n read off its character."""
    shift = Fraction(c, 24)
    return [character.integer_coefficient(k - shift) for k in range(1, n + 1)]


def twisted_dims_from_traces(table: TraceTable) -> dict:
    """Twisted-module dimensions at weights k/n < 1, keyed by (i, k)."""
    n = table.n
    shift = Fraction(table.c, 24)
    out = {}
    for i in range(1, n):
        trace = table.traces[(i, 0)]
        for k in range(1, n):
            out[(i, k)] = trace.integer_coefficient(Fraction(k, n) - shift)
    return out


_DIMENSION_TABLES = {
    2: ((Fraction(3), Fraction(-3, 256)),
        Fraction(75471, 64)),
    3: ((Fraction(4), Fraction(-436, 6561), Fraction(28, 19683)),
        Fraction(-114246104, 19683)),
    5: ((Fraction(6), Fraction(-4285488, 9765625), Fraction(443466, 9765625),
         Fraction(-30138, 9765625), Fraction(966, 9765625)),
        Fraction(-439185525204, 9765625)),
    7: ((Fraction(8), Fraction(-36795312, 40353607),
         Fraction(4010900, 40353607), Fraction(-448800, 282475249),
         Fraction(-52284, 40353607), Fraction(51172, 282475249),
         Fraction(-2392, 282475249)),
        Fraction(7451576705112, 40353607)),
    13: ((Fraction(14), Fraction(-4340182604352, 1792160394037),
          Fraction(-94190051662, 137858491849),
          Fraction(1170998168940, 1792160394037),
          Fraction(-261335651400, 1792160394037),
          Fraction(-58352587520, 1792160394037),
          Fraction(3919301316, 137858491849),
          Fraction(-12697988616, 1792160394037),
          Fraction(692327890, 1792160394037),
          Fraction(393826480, 1792160394037),
          Fraction(-111115482, 1792160394037),
          Fraction(12706778, 1792160394037),
          Fraction(-577738, 1792160394037)),
         Fraction(4455938899358543724, 1792160394037)),
}


def dimension_formula_I(n: int, dims) -> Fraction:
    """dim V_1 + dim of the orbifold weight-one space, from fixed-point dims.

    dims are the dimensions of the fixed-point weight spaces 1..n.  Only
    the prime orders n with (n-1) | 24 admit this closed form.
    """
    if n not in _DIMENSION_TABLES:
        raise UnsupportedN(f"no stored coefficients for n={n}")
    coeffs, constant = _DIMENSION_TABLES[n]
    dims = list(dims)
    if len(dims) != n:
        raise ValueError(f"need exactly {n} fixed-point dimensions")
    return sum((c * Fraction(d) for c, d in zip(coeffs, dims)), constant)


def dimension_formula_II(n: int, d1, twisted_dims) -> Fraction:
    """The twisted-module form of the weight-one dimension count.

    twisted_dims maps (i, k) to the dimension of the weight-k/n space of
    the i-th twisted module, for i, k in 1..n-1.  When every twisted
    module has conformal weight at least one the sum is empty and the
    value is 24 + (n+1) d1.
    """
    if n not in _DIMENSION_TABLES:
        raise UnsupportedN(f"no stored coefficients for n={n}")
    correction = Fraction(0)
    for k in range(1, n):
        inner = sum(Fraction(twisted_dims.get((i, k), 0))
                    for i in range(1, n))
        correction += int(divisor_sigma(n - k, 1)) * inner
    return 24 + (n + 1) * Fraction(d1) - Fraction(24, n - 1) * correction


@dataclass(frozen=True)
class InverseOrbifoldReport:
    """Outcome of the character-level inverse-orbifold identities."""

    untwisted_match: bool
    column_support: dict
    passed: bool


def inverse_orbifold_check(inp: OrbifoldInput,
                           result: OrbifoldResult) -> InverseOrbifoldReport:
    """Check that orbifolding back recovers the original algebra.

    The row sum over W^(0,j) must reproduce the character of the input
    algebra, and the column sums (the twisted characters of the inverse
    orbifold) may only carry exponents in (1/n)Z after the weight shift.
    """
    n = inp.n
    chars = result.characters
    total = chars[(0, 0)]
    for j in range(1, n):
        total = total + chars[(0, j)]
    ch_v = _untwisted_trace(inp, 0, inp.precision)
    untwisted_match = total.agrees_with(ch_v)
    shift = Fraction(inp.lattice.rank, 24)
    support = {}
    for i in range(n):
        col = chars[(0, i)]
        for j in range(1, n):
            col = col + chars[(j, i)]
        support[i] = all(((e + shift) * n).denominator == 1
                         for e in col.terms)
    passed = untwisted_match and all(support.values())
    return InverseOrbifoldReport(untwisted_match, support, passed)


def hauptmodul_coefficients(character: PuiseuxSeries, n: int) -> dict:
    """Expand a fixed-point character as a polynomial in the Hauptmodul.

    Returns the integers c_k with character = t_n + c_0 + c_{-1}/t_n +
    ... + c_{-n}/t_n^n, where c_{-n} is forced to n^((11n+1)/(n-1)).
    Raises if the expansion does not close within the series precision.
    """
    if n not in HAUPTMODUL_LEVELS:
        raise UnsupportedN(f"no Hauptmodul of this shape for n={n}")
    prec = character.precision
    if prec is None:
        raise InsufficientPrecision("need a finite-precision character")
    t = hauptmodul(n, prec + n + 2)
    tinv = t.invert()
    leading = n ** ((11 * n + 1) // (n - 1))
    residual = character - t - tinv ** n * leading
    coefficients = {-n: leading}
    power = PuiseuxSeries.one()
    for k in range(n):
        c = residual.rational_coefficient(Fraction(k))
        if c.denominator != 1:
            raise NonIntegralResult(
                f"Hauptmodul coefficient c_{-k} = {c} is not integral")
        coefficients[-k] = int(c)
        residual = residual - power * c
        power = power * tinv
    if not residual.agrees_with(PuiseuxSeries.zero()):
        raise ValidationError(
            "character is not a degree-n polynomial in the Hauptmodul")
    return coefficients
