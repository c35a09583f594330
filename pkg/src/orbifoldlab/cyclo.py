"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Elements are stored in the power basis 1, z, ..., z^(phi(M)-1) of Q(zeta_M)
with z = e^(2 pi i / M), always fully reduced modulo the M-th cyclotomic
polynomial.  Mixed-order arithmetic promotes both operands to the lcm of
their orders.  There is no floating point anywhere in this module except
the explicitly approximate :meth:`CyclotomicNumber.approx`.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache

from sympy import Poly, Symbol, cyclotomic_poly, factorint, totient
from sympy.functions.combinatorial.numbers import legendre_symbol

from .errors import NotRational
from .nt import lcm, solve_right

Rational = int | Fraction

_x = Symbol("x")


@lru_cache(maxsize=None)
def _phi(order: int) -> int:
    return int(totient(order))


@lru_cache(maxsize=None)
def _power_table(order: int) -> tuple[tuple[int, ...], ...]:
    """x^k mod Phi_order for 0 <= k < 2*order, as integer coefficient rows."""
    phi = _phi(order)
    poly = Poly(cyclotomic_poly(order, _x), _x).all_coeffs()
    # x^phi = -(a_{phi-1} x^{phi-1} + ... + a_0), a_i read off monic Phi
    top = tuple(-c for c in reversed(poly[1:]))
    rows: list[tuple[int, ...]] = []
    for k in range(phi):
        rows.append(tuple(1 if i == k else 0 for i in range(phi)))
    for _ in range(phi, 2 * order):
        prev = rows[-1]
        lead = prev[phi - 1]
        shifted = (0,) + prev[: phi - 1]
        if lead:
            rows.append(tuple(s + lead * t for s, t in zip(shifted, top)))
        else:
            rows.append(shifted)
    return tuple(rows)


def _from_power_dict(order: int, powers: dict[int, Fraction]) -> tuple[Fraction, ...]:
    phi = _phi(order)
    table = _power_table(order)
    acc = [Fraction(0)] * phi
    for k, c in powers.items():
        if not c:
            continue
        row = table[k % order]
        for i in range(phi):
            if row[i]:
                acc[i] += c * row[i]
    return tuple(acc)


class CyclotomicNumber:
    """An element of Q(zeta_order) in the reduced power basis."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs) -> None:
        if order < 1:
            raise ValueError("order must be positive")
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != _phi(order):
            raise ValueError("coefficient vector has wrong length")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def rational(cls, value: Rational) -> "CyclotomicNumber":
        return cls(1, (Fraction(value),))

    @classmethod
    def zero(cls) -> "CyclotomicNumber":
        return cls.rational(0)

    @classmethod
    def one(cls) -> "CyclotomicNumber":
        return cls.rational(1)

    @classmethod
    def from_powers(cls, order: int, powers: dict[int, Rational]) -> "CyclotomicNumber":
        """Sum of c_k * zeta_order^k over the items of `powers`."""
        return cls(order, _from_power_dict(order, {k: Fraction(c) for k, c in powers.items()}))

    # -- conversions -------------------------------------------------

    def promote(self, order: int) -> "CyclotomicNumber":
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError("can only promote to a multiple of the current order")
        step = order // self.order
        return CyclotomicNumber(
            order,
            _from_power_dict(order, {k * step: c for k, c in enumerate(self.coeffs) if c}),
        )

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise NotRational(f"{self} is not rational")
        return self.coeffs[0]

    def approx(self) -> complex:
        """Floating-point value; diagnostic only, never used in computations."""
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * z**k for k, c in enumerate(self.coeffs) if c)

    # -- arithmetic --------------------------------------------------

    def _common(self, other) -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.rational(other)
        elif not isinstance(other, CyclotomicNumber):
            return NotImplemented, NotImplemented
        if self.order == other.order:
            return self, other
        m = lcm(self.order, other.order)
        return self.promote(m), other.promote(m)

    def __add__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return CyclotomicNumber(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return CyclotomicNumber(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return CyclotomicNumber(self.order, tuple(c * f for c in self.coeffs))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        if a.is_rational():
            return b * a.coeffs[0]
        if b.is_rational():
            return a * b.coeffs[0]
        mono = b._monomial() or a._monomial()
        if mono is not None:
            if b._monomial() is None:
                a, b = b, a
            k, c = mono
            m = a.order
            return CyclotomicNumber(
                m,
                _from_power_dict(
                    m, {(j + k) % m: ca * c for j, ca in enumerate(a.coeffs) if ca}),
            )
        phi = len(a.coeffs)
        raw = [Fraction(0)] * (2 * phi - 1)
        for i, ca in enumerate(a.coeffs):
            if not ca:
                continue
            for j, cb in enumerate(b.coeffs):
                if cb:
                    raw[i + j] += ca * cb
        table = _power_table(a.order)
        acc = list(raw[:phi])
        for k in range(phi, 2 * phi - 1):
            c = raw[k]
            if c:
                row = table[k]
                for i in range(phi):
                    if row[i]:
                        acc[i] += c * row[i]
        return CyclotomicNumber(a.order, tuple(acc))

    __rmul__ = __mul__

    def _monomial(self) -> tuple[int, Fraction] | None:
        """If the element is c * zeta^k in the power basis, return (k, c)."""
        hits = [(k, c) for k, c in enumerate(self.coeffs) if c]
        if len(hits) == 1:
            return hits[0]
        return None

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if f == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / f)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        if b.is_zero():
            raise ZeroDivisionError("division by zero")
        if b.is_rational():
            return a * (1 / b.coeffs[0])
        mono = b._monomial()
        if mono is not None:
            k, c = mono
            inv = CyclotomicNumber.from_powers(b.order, {(b.order - k) % b.order: 1 / c})
            return a * inv
        # generic case: solve x * b = a in the power basis
        phi = len(a.coeffs)
        basis = [CyclotomicNumber.from_powers(a.order, {j: 1}) * b for j in range(phi)]
        cols = [v.coeffs for v in basis]
        mat = [[cols[j][i] for j in range(phi)] for i in range(phi)]
        x = solve_right(mat, list(a.coeffs))
        assert x is not None
        return CyclotomicNumber(a.order, tuple(x))

    def __rtruediv__(self, other):
        return CyclotomicNumber.rational(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return CyclotomicNumber.one() / self ** (-exponent)
        result = CyclotomicNumber.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "CyclotomicNumber":
        """Complex conjugate (zeta -> zeta^(-1))."""
        m = self.order
        powers: dict[int, Fraction] = {}
        for k, c in enumerate(self.coeffs):
            if c:
                powers[(m - k) % m] = c
        return CyclotomicNumber(m, _from_power_dict(m, powers))

    def norm_squared(self) -> "CyclotomicNumber":
        return self * self.conjugate()

    # -- comparisons -------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                z = f"z{self.order}" if k == 1 else f"z{self.order}^{k}"
                if c == 1:
                    parts.append(z)
                elif c == -1:
                    parts.append(f"-{z}")
                else:
                    parts.append(f"{c}*{z}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


def root_of_unity(order: int, power: int = 1) -> CyclotomicNumber:
    """zeta_order^power with zeta_order = e^(2 pi i / order)."""
    if order < 1:
        raise ValueError("order must be positive")
    return CyclotomicNumber.from_powers(order, {power % order: 1})


def unit_phase(r: Rational) -> CyclotomicNumber:
    """e^(2 pi i r) for rational r."""
    f = Fraction(r)
    return root_of_unity(f.denominator, f.numerator % f.denominator)


def _sqrt_prime(p: int) -> CyclotomicNumber:
    """sqrt(p) for prime p, via quadratic Gauss sums."""
    if p == 2:
        return root_of_unity(8) + root_of_unity(8, 7)
    g = CyclotomicNumber.from_powers(p, {a: legendre_symbol(a, p) for a in range(1, p)})
    if p % 4 == 1:
        return g
    # g = i*sqrt(p) here, so divide by i
    return g * root_of_unity(4, 3)


def sqrt_positive_int(n: int) -> CyclotomicNumber:
    """Exact sqrt(n) for a positive integer, as a cyclotomic number."""
    if n <= 0:
        raise ValueError("need a positive integer")
    out = CyclotomicNumber.one()
    square = 1
    for p, e in factorint(n).items():
        square *= p ** (e // 2)
        if e % 2:
            out = out * _sqrt_prime(p)
    return out * square


def sqrt_positive_rational(r: Rational) -> CyclotomicNumber:
    """Exact sqrt(r) for a positive rational."""
    f = Fraction(r)
    if f <= 0:
        raise ValueError("need a positive rational")
    return sqrt_positive_int(f.numerator * f.denominator) / f.denominator


def primitive_order(z: CyclotomicNumber) -> int | None:
    """The multiplicative order of z if z is a root of unity, else None."""
    m = z.order
    for d in sorted(set(divisors_of(2 * m))):
        if (z**d) == 1:
            return d
    return None


def divisors_of(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def as_cyclotomic(value) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return CyclotomicNumber.rational(value)
    raise TypeError(f"cannot interpret {value!r} as a cyclotomic number")


__all__ = [
    "CyclotomicNumber",
    "root_of_unity",
    "unit_phase",
    "sqrt_positive_int",
    "sqrt_positive_rational",
    "primitive_order",
    "as_cyclotomic",
]
