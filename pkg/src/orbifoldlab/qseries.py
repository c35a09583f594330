"""Truncated Puiseux series in q with exact coefficients.

A series is a sparse map from rational exponents to coefficients (integers,
rationals or cyclotomic numbers) together with an explicit precision: the
coefficient of q^e is known for every e < precision.  precision None means
the series is exact (a Puiseux polynomial).

Multiplication propagates precision as min(v_a + P_b, v_b + P_a) where v is
the valuation, so products never claim more than they know.  Requesting a
coefficient at or beyond the precision raises InsufficientPrecision.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil
from typing import Iterable, Mapping

from sympy import divisor_sigma

from .cyclo import CyclotomicNumber, unit_phase
from .errors import InsufficientPrecision, NotRational, ZeroLeadingCoefficient
from .nt import lcm

Coefficient = int | Fraction | CyclotomicNumber
Exponent = int | Fraction


def _is_zero(c: Coefficient) -> bool:
    return not c


def _cadd(a: Coefficient, b: Coefficient) -> Coefficient:
    return a + b


def _cmul(a: Coefficient, b: Coefficient) -> Coefficient:
    return a * b


def _min_prec(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PuiseuxSeries:
    __slots__ = ("terms", "precision")

    def __init__(self, terms: Mapping[Exponent, Coefficient] | Iterable = (),
                 precision: Exponent | None = None) -> None:
        prec = None if precision is None else Fraction(precision)
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Fraction, Coefficient] = {}
        for e, c in items:
            e = Fraction(e)
            if _is_zero(c):
                continue
            if prec is not None and e >= prec:
                continue
            if e in clean:
                c = _cadd(clean[e], c)
                if _is_zero(c):
                    del clean[e]
                    continue
            clean[e] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "precision", prec)

    def __setattr__(self, name, value):
        raise AttributeError("PuiseuxSeries is immutable")

    # -- basic structure ----------------------------------------------

    @property
    def valuation(self) -> Fraction | None:
        """Largest known lower bound for the support; None for exact zero."""
        if self.terms:
            return min(self.terms)
        return self.precision

    @property
    def exponent_denominator(self) -> int:
        return lcm(1, *(e.denominator for e in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def leading(self) -> tuple[Fraction, Coefficient]:
        if not self.terms:
            raise ZeroLeadingCoefficient("series has no known nonzero term")
        e = min(self.terms)
        return e, self.terms[e]

    def coefficient(self, e: Exponent) -> Coefficient:
        e = Fraction(e)
        if self.precision is not None and e >= self.precision:
            raise InsufficientPrecision(
                f"coefficient at q^{e} requested but precision is {self.precision}")
        return self.terms.get(e, 0)

    def rational_coefficient(self, e: Exponent) -> Fraction:
        c = self.coefficient(e)
        if isinstance(c, CyclotomicNumber):
            return c.to_rational()
        return Fraction(c)

    def integer_coefficient(self, e: Exponent) -> int:
        r = self.rational_coefficient(e)
        if r.denominator != 1:
            raise NotRational(f"coefficient at q^{e} is {r}, not an integer")
        return r.numerator

    # -- arithmetic ---------------------------------------------------

    @classmethod
    def zero(cls, precision: Exponent | None = None) -> "PuiseuxSeries":
        return cls((), precision)

    @classmethod
    def monomial(cls, coeff: Coefficient, e: Exponent = 0,
                 precision: Exponent | None = None) -> "PuiseuxSeries":
        return cls({Fraction(e): coeff}, precision)

    @classmethod
    def one(cls, precision: Exponent | None = None) -> "PuiseuxSeries":
        return cls.monomial(1, 0, precision)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            other = PuiseuxSeries.monomial(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        prec = _min_prec(self.precision, other.precision)
        merged = dict(self.terms)
        for e, c in other.terms.items():
            merged[e] = _cadd(merged.get(e, 0), c)
        return PuiseuxSeries(merged, prec)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries({e: -c for e, c in self.terms.items()}, self.precision)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            if _is_zero(other):
                return PuiseuxSeries.zero(self.precision)
            return PuiseuxSeries({e: _cmul(c, other) for e, c in self.terms.items()},
                                 self.precision)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        va, vb = self.valuation, other.valuation
        prec = None
        if other.precision is not None:
            prec = None if va is None else va + other.precision
        if self.precision is not None:
            p2 = None if vb is None else vb + self.precision
            prec = _min_prec(prec, p2)
        acc: dict[Fraction, Coefficient] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = ea + eb
                if prec is not None and e >= prec:
                    continue
                prev = acc.get(e)
                acc[e] = _cmul(ca, cb) if prev is None else _cadd(prev, _cmul(ca, cb))
        return PuiseuxSeries(acc, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self * (CyclotomicNumber.one() / other)
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self * other.invert()

    def invert(self, target_precision: Exponent | None = None) -> "PuiseuxSeries":
        """Multiplicative inverse.

        The result has absolute precision P - 2*v when the input has
        precision P and valuation v.  For an exact input a target precision
        must be supplied (the inverse of a polynomial is an infinite series).
        """
        if not self.terms:
            raise ZeroLeadingCoefficient("cannot invert a series with no nonzero term")
        v, c0 = self.leading()
        if self.precision is None and target_precision is None:
            raise InsufficientPrecision(
                "inverting an exact series requires an explicit target precision")
        out_prec = None if self.precision is None else self.precision - 2 * v
        if target_precision is not None:
            out_prec = _min_prec(out_prec, Fraction(target_precision))
        assert out_prec is not None
        n = lcm(self.exponent_denominator, (out_prec + v).denominator, v.denominator)
        steps = ceil((out_prec + v) * n)
        if isinstance(c0, CyclotomicNumber):
            inv0: Coefficient = CyclotomicNumber.one() / c0
        else:
            inv0 = Fraction(1) / Fraction(c0)
        coeffs_a = {int((e - v) * n): c for e, c in self.terms.items()}
        coeffs_b: dict[int, Coefficient] = {0: inv0}
        for m in range(1, steps):
            s: Coefficient = 0
            for k, ak in coeffs_a.items():
                if 0 < k <= m and (m - k) in coeffs_b:
                    s = _cadd(s, _cmul(ak, coeffs_b[m - k]))
            if not _is_zero(s):
                coeffs_b[m] = _cmul(-inv0, s) if isinstance(inv0, CyclotomicNumber) \
                    else _cmul(s, -inv0)
        return PuiseuxSeries({-v + Fraction(j, n): c for j, c in coeffs_b.items()},
                             out_prec)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.invert() ** (-exponent)
        # preserve precision of the input even for trivial powers
        if exponent == 0:
            prec = None
            if self.precision is not None and self.valuation is not None:
                prec = self.precision - self.valuation
            return PuiseuxSeries.one(prec)
        result = self
        for _ in range(exponent - 1):
            result = result * self
        return result

    # -- reindexing ---------------------------------------------------

    def shift(self, s: Exponent) -> "PuiseuxSeries":
        """Multiply by q^s."""
        s = Fraction(s)
        return PuiseuxSeries({e + s: c for e, c in self.terms.items()},
                             None if self.precision is None else self.precision + s)

    def scale_exponents(self, f: Exponent) -> "PuiseuxSeries":
        """Substitute q -> q^f for f > 0."""
        f = Fraction(f)
        if f <= 0:
            raise ValueError("exponent scale must be positive")
        return PuiseuxSeries({e * f: c for e, c in self.terms.items()},
                             None if self.precision is None else self.precision * f)

    def twist(self, f: Exponent, r: Exponent) -> "PuiseuxSeries":
        """Substitute q -> e^(2 pi i r) q^f; each q^e picks up e^(2 pi i r e)."""
        f, r = Fraction(f), Fraction(r)
        if f <= 0:
            raise ValueError("exponent scale must be positive")
        return PuiseuxSeries(
            {e * f: _cmul(c, unit_phase(r * e)) for e, c in self.terms.items()},
            None if self.precision is None else self.precision * f)

    def truncate(self, precision: Exponent) -> "PuiseuxSeries":
        return PuiseuxSeries(self.terms, _min_prec(self.precision, Fraction(precision)))

    def map_coefficients(self, fn) -> "PuiseuxSeries":
        return PuiseuxSeries({e: fn(c) for e, c in self.terms.items()}, self.precision)

    # -- comparisons and display --------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            other = PuiseuxSeries.monomial(other) if other else PuiseuxSeries.zero()
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        if self.precision != other.precision:
            return False
        return self._same_terms(other)

    def _same_terms(self, other: "PuiseuxSeries") -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(e, 0) == other.terms.get(e, 0) for e in keys)

    def agrees_with(self, other: "PuiseuxSeries",
                    through: Exponent | None = None) -> bool:
        """Equality of coefficients up to the common precision."""
        prec = _min_prec(self.precision, other.precision)
        if through is not None:
            prec = _min_prec(prec, Fraction(through))
        keys = set(self.terms) | set(other.terms)
        for e in keys:
            if prec is not None and e >= prec:
                continue
            if self.terms.get(e, 0) != other.terms.get(e, 0):
                return False
        return True

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e in sorted(self.terms):
                c = self.terms[e]
                cs = str(c)
                if isinstance(c, CyclotomicNumber) and not c.is_rational():
                    cs = f"({cs})"
                if e == 0:
                    parts.append(cs)
                else:
                    qs = "q" if e == 1 else f"q^({e})"
                    if cs == "1":
                        parts.append(qs)
                    elif cs == "-1":
                        parts.append(f"-{qs}")
                    else:
                        parts.append(f"{cs}*{qs}")
            body = " + ".join(parts).replace("+ -", "- ")
        if self.precision is None:
            return body
        return f"{body} + O(q^({self.precision}))"

    # -- serialization ------------------------------------------------

    def to_json_dict(self) -> dict:
        def enc(c: Coefficient):
            if isinstance(c, CyclotomicNumber):
                if c.is_rational():
                    return str(c.to_rational())
                return {"order": c.order, "coeffs": [str(x) for x in c.coeffs]}
            return str(Fraction(c))

        return {
            "N": self.exponent_denominator,
            "terms": [[str(e), enc(c)] for e, c in sorted(self.terms.items())],
            "precision": None if self.precision is None else str(self.precision),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PuiseuxSeries":
        def dec(c):
            if isinstance(c, dict):
                return CyclotomicNumber(c["order"], [Fraction(x) for x in c["coeffs"]])
            f = Fraction(c)
            return int(f) if f.denominator == 1 else f

        prec = data.get("precision")
        return cls({Fraction(e): dec(c) for e, c in data["terms"]},
                   None if prec is None else Fraction(prec))


# -- eta products and Hauptmoduln --------------------------------------


def euler_product(scale: Exponent, phase: Exponent,
                  precision: Exponent) -> PuiseuxSeries:
    """prod_{n>=1} (1 - x^n) with x = e^(2 pi i phase) q^scale.

    Expanded through the pentagonal number theorem, which holds formally
    in x, so the substitution is exact.
    """
    s, r, prec = Fraction(scale), Fraction(phase), Fraction(precision)
    if s <= 0:
        raise ValueError("exponent scale must be positive")
    terms: dict[Fraction, Coefficient] = {}
    k = 0
    while True:
        for kk in ((k,) if k == 0 else (k, -k)):
            g = kk * (3 * kk - 1) // 2
            e = s * g
            if e < prec:
                c: Coefficient = unit_phase(r * g) * (-1 if kk % 2 else 1)
                terms[e] = _cadd(terms.get(e, 0), c)
        if s * (k * (3 * k - 1) // 2) >= prec and k > 0:
            break
        k += 1
    return PuiseuxSeries(terms, prec)


def eta_argument(a: int, b: int, d: int, precision: Exponent) -> PuiseuxSeries:
    """Series of eta((a tau + b) / d) in q^(1/(24 d)ish exponents.

    Requires a, d > 0.  This is the generalized eta value
    e^(2 pi i b / (24 d)) q^(a/(24 d)) prod (1 - e^(2 pi i b n / d) q^(a n / d)).
    """
    if a <= 0 or d <= 0:
        raise ValueError("eta argument needs positive a and d")
    prec = Fraction(precision)
    lead = Fraction(a, 24 * d)
    body = euler_product(Fraction(a, d), Fraction(b, d), prec - lead)
    return (body.shift(lead) * unit_phase(Fraction(b, 24 * d)))


def eta(precision: Exponent, scale: int = 1) -> PuiseuxSeries:
    """eta(scale * tau) as a q-series."""
    return eta_argument(scale, 0, 1, precision)


def eta_product(shape: Mapping[int, int], precision: Exponent) -> PuiseuxSeries:
    """prod_t eta(t tau)^(b_t) for a cycle shape {t: b_t}.

    Negative exponents are allowed; the result is truncated to the
    requested precision and the construction retries with more working
    precision until that is actually attained.
    """
    prec = Fraction(precision)
    slack = Fraction(2)
    for _ in range(8):
        work = prec + slack
        out = PuiseuxSeries.one(None)
        for t in sorted(shape):
            bt = shape[t]
            if bt == 0:
                continue
            f = eta_argument(t, 0, 1, work)
            out = out * (f ** bt if bt > 0 else f.invert() ** (-bt))
        if out.precision is None or out.precision >= prec:
            return out.truncate(prec)
        slack *= 2
    raise InsufficientPrecision("eta product failed to reach requested precision")


def eisenstein_e4(precision: Exponent) -> PuiseuxSeries:
    """E_4 = 1 + 240 sum_k sigma_3(k) q^k."""
    prec = Fraction(precision)
    terms: dict[Fraction, Coefficient] = {Fraction(0): 1}
    k = 1
    while k < prec:
        terms[Fraction(k)] = 240 * int(divisor_sigma(k, 3))
        k += 1
    return PuiseuxSeries(terms, prec)


def modular_discriminant(precision: Exponent) -> PuiseuxSeries:
    """Delta = q prod_{n>=1} (1 - q^n)^24."""
    prec = Fraction(precision)
    return (euler_product(1, 0, prec - 1) ** 24).shift(1)


def j_function(precision: Exponent) -> PuiseuxSeries:
    """The j-invariant less its constant term: q^-1 + 196884 q + ..."""
    prec = Fraction(precision)
    slack = Fraction(2)
    for _ in range(8):
        work = prec + slack
        out = eisenstein_e4(work) ** 3 / modular_discriminant(work)
        if out.precision is not None and out.precision >= prec:
            return out.truncate(prec) - 744
        slack *= 2
    raise InsufficientPrecision("j-function failed to reach requested precision")


HAUPTMODUL_LEVELS = (2, 3, 5, 7, 13)


def hauptmodul(n: int, precision: Exponent) -> PuiseuxSeries:
    """t_n = (eta(tau)/eta(n tau))^(24/(n-1)) for n with genus-zero Gamma_0(n).

    Normalized as q^(-1) - 24/(n-1) + O(q).
    """
    if n not in HAUPTMODUL_LEVELS:
        raise ValueError(f"no Hauptmodul of this shape for n={n}")
    return eta_product({1: 24 // (n - 1), n: -24 // (n - 1)}, precision)


def hauptmodul_s_image(n: int, precision: Exponent) -> PuiseuxSeries:
    """t_n(S.tau) = n^(12/(n-1)) (eta(tau)/eta(tau/n))^(24/(n-1))."""
    if n not in HAUPTMODUL_LEVELS:
        raise ValueError(f"no Hauptmodul of this shape for n={n}")
    e = 24 // (n - 1)
    prec = Fraction(precision)
    slack = Fraction(2)
    for _ in range(8):
        work = prec + slack
        num = eta_argument(1, 0, 1, work) ** e
        den = eta_argument(1, 0, n, work) ** e
        out = num * den.invert()
        if out.precision is not None and out.precision >= prec:
            return out.truncate(prec) * (n ** (12 // (n - 1)))
        slack *= 2
    raise InsufficientPrecision("transformed Hauptmodul failed to reach precision")


__all__ = [
    "PuiseuxSeries",
    "euler_product",
    "eta_argument",
    "eta",
    "eta_product",
    "eisenstein_e4",
    "modular_discriminant",
    "j_function",
    "hauptmodul",
    "hauptmodul_s_image",
    "HAUPTMODUL_LEVELS",
]
