"""Exact modular transformations of eta factors and vector-valued thetas.

An AutomorphyFactor records f(M.tau) symbolically as

    phase * sqrt_pr(c tau + d)^(2 weight) * series(tau)

with sqrt_pr the principal square root, so half-integer weights are
unambiguous.  All quantities the orbifold pipeline consumes are weight-0
quotients of such factors, where the tau-dependence cancels and a plain
q-series remains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclo import CyclotomicNumber, sqrt_positive_rational, unit_phase
from .errors import CNotMultipleOf8
from .fqs import weil_matrix
from .qseries import PuiseuxSeries, eta_argument
from .sl2 import (
    Mp2,
    eta_multiplier,
    inv,
    mp2_of_word,
    mul,
    sl2_check,
    sl2_word,
    t_power,
)

__all__ = [
    "AutomorphyFactor",
    "eta_multiplier",
    "hermite_factor",
    "sl2_word",
    "transform_scaled_eta",
    "transform_theta_vv",
    "z_character",
]


@dataclass(frozen=True)
class AutomorphyFactor:
    """Value of a form at M.tau, relative to the automorphy factor of M.

    Products and quotients only make sense for factors attached to the
    same matrix M; weights add, phases and series multiply.
    """

    weight: Fraction
    phase: CyclotomicNumber
    series: PuiseuxSeries

    def __mul__(self, other: "AutomorphyFactor") -> "AutomorphyFactor":
        if not isinstance(other, AutomorphyFactor):
            return NotImplemented
        return AutomorphyFactor(self.weight + other.weight,
                                self.phase * other.phase,
                                self.series * other.series)

    def __truediv__(self, other: "AutomorphyFactor") -> "AutomorphyFactor":
        if not isinstance(other, AutomorphyFactor):
            return NotImplemented
        return AutomorphyFactor(self.weight - other.weight,
                                self.phase / other.phase,
                                self.series / other.series)

    def __pow__(self, exponent: int) -> "AutomorphyFactor":
        if not isinstance(exponent, int):
            return NotImplemented
        series = self.series ** exponent
        return AutomorphyFactor(self.weight * exponent,
                                self.phase ** exponent, series)

    def as_series(self) -> PuiseuxSeries:
        """The plain q-series of a weight-0 factor."""
        if self.weight != 0:
            raise ValueError(f"factor has weight {self.weight}, not 0")
        return self.series * self.phase


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x a + y b = g = gcd(a, b), g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hermite_factor(t: int, m) -> tuple[tuple[int, int, int, int], int, int, int]:
    """Factor diag(t,1) M = M1 (a b; 0 d) with M1 in SL2(Z).

    Returns (M1, a, b, d) with a d = t, a, d > 0 and 0 <= b < d; the
    factorization is canonical, so downstream expansions are cacheable.
    """
    if t < 1:
        raise ValueError("the scale must be a positive integer")
    ma, mb, mc, md = sl2_check(m)
    n = (t * ma, t * mb, mc, md)
    # bottom row of M1^(-1) kills the first column of n
    if n[2] == 0:
        r, s = 0, 1
    else:
        g = gcd(n[0], n[2])
        r, s = -n[2] // g, n[0] // g
    _, p, q = _xgcd(s, -r)
    m1_inv = (p, q, r, s)
    upper = mul(m1_inv, n)
    assert upper[2] == 0 and upper[0] * upper[3] == t
    m1 = inv(m1_inv)
    a, b, d = upper[0], upper[1], upper[3]
    if a < 0:
        a, b, d = -a, -b, -d
        m1 = tuple(-x for x in m1)
    k = b // d
    b -= k * d
    m1 = mul(m1, t_power(k))
    return m1, a, b, d


def transform_scaled_eta(t: int, m, precision) -> AutomorphyFactor:
    """eta(t M.tau) as phase * sqrt_pr(c tau + d) * series(tau).

    Writing diag(t,1) M = M1 (a b; 0 d), the scaled argument becomes
    M1.((a tau + b)/d), the eta multiplier of M1 supplies the phase, and
    the positive scale d only contributes 1/sqrt(d).
    """
    m1, a, b, d = hermite_factor(t, m)
    phase = eta_multiplier(m1) * sqrt_positive_rational(Fraction(1, d))
    return AutomorphyFactor(Fraction(1, 2), phase,
                            eta_argument(a, b, d, precision))


def transform_theta_vv(lattice, m_or_word, precision):
    """Coset theta series of a positive-definite even lattice at M.tau.

    Returns {coset element: AutomorphyFactor} where the factor of gamma
    is sum_delta rho(M)_{gamma,delta} theta_{delta+L}(tau) at weight
    rank/2, rho the Weil representation of the discriminant form.  A
    matrix argument uses its canonical S,T word; passing a word directly
    pins down the metaplectic element when the rank is odd.
    """
    space = lattice.discriminant_group()
    if isinstance(m_or_word, (list, tuple)) and \
            (not m_or_word or (isinstance(m_or_word[0], tuple)
                               and isinstance(m_or_word[0][0], str))):
        word = list(m_or_word)
    else:
        word = sl2_word(m_or_word)
    rho = weil_matrix(space, word)
    rank = lattice.rank
    beta = mp2_of_word(word).beta
    phase = CyclotomicNumber.rational(beta ** rank)
    gens = space.dual_generators or []
    elements = list(space.elements())
    thetas = []
    for x in elements:
        coords = [sum(int(a) * g[i] for a, g in zip(x, gens))
                  for i in range(lattice.rank)]
        if any(coords):
            thetas.append(lattice.theta_series(precision, offset=coords))
        else:
            thetas.append(lattice.theta_series(precision))
    out = {}
    for i, x in enumerate(elements):
        series = PuiseuxSeries.zero(Fraction(precision))
        for j in range(len(elements)):
            if not rho[i][j].is_zero():
                series = series + thetas[j] * rho[i][j]
        out[x] = AutomorphyFactor(Fraction(rank, 2), phase, series)
    return out


def z_character(m, c: int) -> CyclotomicNumber:
    """The cube root of unity eps(M)^(-c) for central charge c, 8 | c."""
    if c % 8:
        raise CNotMultipleOf8(f"central charge {c} is not a multiple of 8")
    if c % 24 == 0:
        return CyclotomicNumber.one()
    alpha, beta, gamma, delta = sl2_check(m)
    if delta % 3:
        e = (beta - gamma) * delta
    else:
        e = beta + (alpha + 1) * gamma
    return unit_phase(Fraction(-c * e, 24))
