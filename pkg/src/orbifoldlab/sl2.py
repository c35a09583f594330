"""SL2(Z), S,T words, and the metaplectic double cover.

A metaplectic element is a pair (M, beta): the matrix together with a sign
recording which branch of sqrt(c tau + d) it carries, relative to the
principal branch.  The cocycle is evaluated exactly at tau = i using only
integer sign and quadrant comparisons, so no floating point enters.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CyclotomicNumber, unit_phase
from .errors import NotSL2

SL2 = tuple[int, int, int, int]  # (a, b, c, d) row-major

T: SL2 = (1, 1, 0, 1)
S: SL2 = (0, -1, 1, 0)
I2: SL2 = (1, 0, 0, 1)


def sl2_check(m) -> SL2:
    a, b, c, d = (int(x) for x in _flatten(m))
    if a * d - b * c != 1:
        raise NotSL2(f"determinant of {m} is not 1")
    return (a, b, c, d)


def _flatten(m):
    if len(m) == 4:
        return m
    if len(m) == 2 and len(m[0]) == 2:
        return (m[0][0], m[0][1], m[1][0], m[1][1])
    raise NotSL2(f"cannot interpret {m!r} as a 2x2 matrix")


def mul(m1: SL2, m2: SL2) -> SL2:
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = m2
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def inv(m: SL2) -> SL2:
    a, b, c, d = m
    return (d, -b, -c, a)


def t_power(k: int) -> SL2:
    return (1, k, 0, 1)


def sl2_word(m) -> list[tuple[str, int]]:
    """Decompose m in SL2(Z) as a word in S and T.

    Returns [(gen, power), ...] with gen in {"S", "T"} such that the
    product of gen^power in order equals m.  The decomposition runs the
    Euclidean algorithm on the bottom row, so it is deterministic.
    """
    m = sl2_check(m)
    # reduce m by right multiplications; m * suffix^(-1) accumulates on the left
    suffix: list[tuple[str, int]] = []
    a, b, c, d = m
    while c != 0:
        q = d // c
        # right-multiply by T^(-q): d -> d - q c
        b, d = b - q * a, d - q * c
        suffix.append(("T", q))
        # right-multiply by S^(-1) = (0,1,-1,0): (a,b,c,d) -> (-b,a,-d,c)
        a, b, c, d = -b, a, -d, c
        suffix.append(("S", 1))
    # now the matrix is (1, b, 0, 1) or (-1, b, 0, -1)
    word: list[tuple[str, int]] = []
    if a == -1:
        word.append(("S", 2))
        b = -b
    if b:
        word.append(("T", b))
    word.extend(reversed(suffix))
    return [(g, p) for g, p in word if p]


def word_to_matrix(word) -> SL2:
    out = I2
    for gen, power in word:
        if gen == "T":
            out = mul(out, t_power(power))
        elif gen == "S":
            for _ in range(power % 4):
                out = mul(out, S)
        else:
            raise ValueError(f"unknown generator {gen!r}")
    return out


# -- metaplectic cover ---------------------------------------------------
#
# Branch bookkeeping happens at tau = i, where c tau + d is the Gaussian
# integer d + c i.  The cocycle sigma(m1, m2) in {+1, -1} compares principal
# arguments, which reduces to exact sign tests on cross and dot products.


def _arg_positive(x: int, y: int) -> bool:
    """Is Arg(x + y i) in (0, pi]?  Arg = pi counts as positive."""
    if y != 0:
        return y > 0
    return x < 0


def _theta_positive(x1, y1, x2, y2) -> bool:
    """Is the principal Arg((x1 + y1 i) / (x2 + y2 i)) in (0, pi]?"""
    cross = y1 * x2 - x1 * y2
    if cross != 0:
        return cross > 0
    dot = x1 * x2 + y1 * y2
    return dot < 0


def cocycle_sign(m1: SL2, m2: SL2) -> int:
    """sigma with sqrt_pr(j(m1, m2 i)) sqrt_pr(j(m2, i)) = sigma sqrt_pr(j(m1 m2, i)).

    Here j(m, tau) = c tau + d and sqrt_pr is the principal branch.
    """
    c2, d2 = m2[2], m2[3]
    m12 = mul(m1, m2)
    c12, d12 = m12[2], m12[3]
    # u = j(m1 m2, i), v = j(m2, i); j(m1, m2 i) = u / v
    u, v = (d12, c12), (d2, c2)
    pu, pv = _arg_positive(*u), _arg_positive(*v)
    if pu == pv:
        return 1
    if pu and not pv:
        # difference of args lies in (0, 2 pi); wraps iff Arg(u/v) <= 0
        return -1 if not _theta_positive(u[0], u[1], v[0], v[1]) else 1
    # difference lies in (-2 pi, 0); wraps iff Arg(u/v) > 0
    return -1 if _theta_positive(u[0], u[1], v[0], v[1]) else 1


class Mp2:
    """Element of the metaplectic group: (matrix, branch sign)."""

    __slots__ = ("m", "beta")

    def __init__(self, m: SL2, beta: int = 1) -> None:
        self.m = sl2_check(m)
        if beta not in (1, -1):
            raise ValueError("branch sign must be +1 or -1")
        self.beta = beta

    def __mul__(self, other: "Mp2") -> "Mp2":
        return Mp2(mul(self.m, other.m),
                   self.beta * other.beta * cocycle_sign(self.m, other.m))

    def __eq__(self, other):
        return isinstance(other, Mp2) and self.m == other.m and self.beta == other.beta

    def __repr__(self) -> str:
        return f"Mp2({self.m}, {self.beta:+d})"


MP_T = Mp2(T)
MP_S = Mp2(S)


def mp2_of_word(word) -> Mp2:
    out = Mp2(I2)
    for gen, power in word:
        if gen == "T":
            out = out * Mp2(t_power(power))
        elif gen == "S":
            for _ in range(power % 8):
                out = out * MP_S
        else:
            raise ValueError(f"unknown generator {gen!r}")
    return out


def eta_multiplier(m) -> CyclotomicNumber:
    """The 24th root of unity eps(m) with eta(m tau) = eps(m) sqrt_pr(c tau + d) eta(tau).

    eps(T) = e^(2 pi i / 24) and eps(S) = e^(-2 pi i / 8); along a word the
    branch signs are absorbed so the result refers to the principal branch.
    """
    word = sl2_word(m)
    value = CyclotomicNumber.one()
    acc = Mp2(I2)
    for gen, power in word:
        if gen == "T":
            value = value * unit_phase(Fraction(power, 24))
            acc = acc * Mp2(t_power(power))
        else:
            for _ in range(power % 8):
                value = value * unit_phase(Fraction(-1, 8))
                acc = acc * MP_S
    # (m, -1) carries value -eps relative to the principal branch
    return value * acc.beta


def dedekind_sum(d: int, c: int) -> Fraction:
    """s(d, c) = sum_{k=1}^{c-1} ((k/c)) ((d k / c)) for c > 0."""
    total = Fraction(0)
    for k in range(1, c):
        x = Fraction(k, c)
        y = Fraction(d * k, c)
        yf = y - (y.numerator // y.denominator)
        sx = x - Fraction(1, 2)
        sy = yf - Fraction(1, 2) if yf != 0 else Fraction(0)
        total += sx * sy
    return total


def eta_multiplier_dedekind(m) -> CyclotomicNumber:
    """Independent eta multiplier via Dedekind sums; requires c > 0."""
    a, b, c, d = sl2_check(m)
    if c <= 0:
        raise ValueError("Dedekind-sum form needs c > 0")
    phase = Fraction(a + d, 24 * c) - dedekind_sum(d, c) / 2 - Fraction(1, 8)
    return unit_phase(phase)
