"""Standard lifts of lattice automorphisms, at the level of computable data.

A standard lift fixes e_alpha for every alpha in the fixed sublattice.  Its
k-th power acts on e_alpha, alpha fixed by nu^k, by the sign
(-1)^<alpha, nu^(k/2) alpha> when the order and k are both even, and
trivially otherwise.  That sign is a homomorphism, so everything reduces
to parity scans over a basis: the lift order, the index-two splitting of
the fixed sublattice, the conformal weight of the twisted module, and the
orbifold type all come from it plus the cycle-shape vacuum anomaly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import NonStandardLiftUnsupported, NotFixed, ValidationError
from .lattice import IntegerLattice, shape_of_power
from .nt import identity_matrix, mat_inv, mat_mul, solve_right, transpose
from .qseries import PuiseuxSeries


def _matrix_power(u, k: int):
    base = [list(r) for r in u]
    out = identity_matrix(len(base))
    for _ in range(k):
        out = mat_mul(out, base)
    return out


def _apply(u, v):
    return tuple(sum(u[i][j] * v[j] for j in range(len(v)))
                 for i in range(len(u)))


def standard_lift_sign(lattice: IntegerLattice, u, k: int, alpha) -> int:
    """Sign picked up by the k-th power of a standard lift on e_alpha.

    The power is reduced by the lift order, so k may be any non-negative
    integer.
    """
    m = lattice.automorphism_order(u)
    alpha = tuple(int(x) for x in alpha)
    if _apply(_matrix_power(u, k % m), alpha) != alpha:
        raise NotFixed(f"{alpha} is not fixed by the {k}-th power")
    if m % 2 or k % 2:
        return 1
    k = k % order_doubling(lattice, u)
    half = _matrix_power(u, (k // 2) % m)
    pairing = lattice.bilinear(alpha, _apply(half, alpha))
    return -1 if pairing % 2 else 1


def order_doubling(lattice: IntegerLattice, u) -> int:
    """Order of the standard lift: m, or 2m when some <e_i, nu^(m/2) e_i> is odd.

    The sign is a homomorphism on the whole lattice (the m-th power fixes
    everything), so checking a basis settles it.
    """
    m = lattice.automorphism_order(u)
    if m % 2:
        return m
    half = _matrix_power(u, m // 2)
    paired = mat_mul([list(r) for r in lattice.gram], half)
    if any(paired[i][i] % 2 for i in range(lattice.rank)):
        return 2 * m
    return m


def vacuum_anomaly(shape: dict[int, int]) -> Fraction:
    """rho_nu = (1/24) sum_t b_t (t - 1/t) for the cycle shape of nu."""
    total = sum(Fraction(b) * (Fraction(t) - Fraction(1, t))
                for t, b in shape.items())
    return total / 24


@dataclass
class SignSplit:
    """Fixed sublattice of a power, split by the lift's sign homomorphism.

    kernel_basis rows are vectors of the ambient lattice spanning the
    index-one-or-two kernel; beta1 is an ambient coset representative for
    the minus part, or None when the sign is trivial.
    """

    ambient: IntegerLattice
    fixed: IntegerLattice
    fixed_basis: list
    kernel: IntegerLattice
    kernel_basis: list
    beta1: tuple | None
    parities: list | None = None

    def signed_theta(self, precision) -> PuiseuxSeries:
        """theta_{L0} - theta_{beta1 + L0}; just theta of the fixed part
        when the sign is trivial."""
        if not self.kernel_basis or self.beta1 is None:
            return self.kernel.theta_series(precision)
        coords = _coordinates_in(self.kernel_basis, self.beta1)
        plus = self.kernel.theta_series(precision)
        minus = self.kernel.theta_series(precision, offset=coords)
        return plus - minus


def _coordinates_in(basis, vector):
    """Rational coordinates of an ambient vector in the given row basis."""
    coords = solve_right(transpose([list(b) for b in basis]), list(vector))
    if coords is None:
        raise ValidationError("vector lies outside the rational span")
    return coords


def split_by_sign(lattice: IntegerLattice, u, k: int) -> SignSplit:
    """Kernel decomposition of the sign homomorphism on the nu^k fixed part.

    The power is reduced by the lift order first; the sign of the reduced
    power is the sign of the original one since they agree as operators.
    """
    fc = lattice.fixed_and_coinvariant(u, k)
    fixed, basis = fc.fixed, fc.fixed_basis
    m = lattice.automorphism_order(u)
    rank = len(basis)
    if m % 2 or k % 2 or rank == 0:
        return SignSplit(lattice, fixed, basis, fixed, basis, None)
    k = k % order_doubling(lattice, u)
    half = _matrix_power(u, (k // 2) % m)
    parities = [int(lattice.bilinear(b, _apply(half, b))) % 2 for b in basis]
    if not any(parities):
        return SignSplit(lattice, fixed, basis, fixed, basis, None)
    t = parities.index(1)
    rows = []
    for i in range(rank):
        if i == t:
            continue
        if parities[i]:
            rows.append([x + y for x, y in zip(basis[i], basis[t])])
        else:
            rows.append(list(basis[i]))
    rows.append([2 * x for x in basis[t]])
    g = [list(r) for r in lattice.gram]
    kernel_gram = mat_mul(mat_mul(rows, g), transpose(rows))
    kernel = IntegerLattice(kernel_gram)
    return SignSplit(lattice, fixed, basis, kernel,
                     [tuple(r) for r in rows], tuple(basis[t]), parities)


@dataclass
class LiftData:
    """A standard lift: the automorphism, its order, and the lift order.

    eta is a placeholder for the shift vector of non-standard lifts; any
    non-None value is rejected by the pipeline.
    """

    lattice: IntegerLattice
    u: tuple
    order: int
    lift_order: int
    eta: tuple | None = None
    _splits: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_automorphism(cls, lattice: IntegerLattice, u) -> "LiftData":
        m = lattice.automorphism_order(u)
        return cls(lattice, tuple(tuple(int(x) for x in r) for r in u),
                   m, order_doubling(lattice, u))

    def split(self, k: int) -> SignSplit:
        key = k % self.lift_order if self.lift_order else 0
        if key not in self._splits:
            self._splits[key] = split_by_sign(self.lattice, self.u, key)
        return self._splits[key]

    def sign(self, k: int, alpha) -> int:
        return standard_lift_sign(self.lattice, self.u, k, alpha)


@dataclass
class TwistedTypeData:
    """Per-power vacuum anomalies and conformal weights, and the type n{r}."""

    n: int
    lattice_order: int
    anomalies: dict[int, Fraction]
    weights: dict[int, Fraction]
    r: int
    level: int
    h: int

    @property
    def type_string(self) -> str:
        return f"{self.n}{{{self.r}}}"


def _coset_minimum(fixed: IntegerLattice, parities) -> Fraction:
    """Min of <a,a>/2 over lambda + dual(fixed), lambda the half-character.

    lambda has coordinates parities/2 in the dual basis, so the search runs
    over the dual lattice rescaled by |det| to stay integral.
    """
    d = abs(fixed.det())
    ginv = mat_inv([[Fraction(x) for x in row] for row in fixed.gram])
    scaled = [[int(d * x) for x in row] for row in ginv]
    dual = IntegerLattice(scaled)
    offset = [Fraction(p, 2) for p in parities]
    bound = 1
    while True:
        hits = dual.enumerate_vectors(bound, offset=offset, strict=False)
        if hits:
            best = min(nv for _, nv in hits)
            return best / (2 * d)
        bound *= 2


def twisted_weight_and_type(lattice: IntegerLattice, u,
                            lift: LiftData | None = None) -> TwistedTypeData:
    """Anomalies, twisted conformal weights, and the orbifold type n{r}.

    The lattice must be even and unimodular: then the projection of L onto
    the fixed space of any power is the full dual of the fixed sublattice,
    which is what the coset minimum runs over.
    """
    if lift is not None and lift.eta is not None:
        raise NonStandardLiftUnsupported(
            "only standard lifts are supported; got a shift vector")
    if not lattice.is_even() or lattice.det() != 1:
        raise ValidationError("type data needs an even unimodular lattice")
    if lift is None:
        lift = LiftData.from_automorphism(lattice, u)
    m = lift.order
    n = lift.lift_order
    shape = lattice.cycle_shape(u)
    anomalies = {}
    weights = {}
    for i in range(n):
        power_shape = shape_of_power(shape, i % m)
        rho = vacuum_anomaly(power_shape)
        anomalies[i] = rho
        split = lift.split(i)
        if split.beta1 is None or not split.fixed_basis:
            weights[i] = rho
            continue
        weights[i] = rho + _coset_minimum(split.fixed, split.parities)
    rho1 = weights.get(1, Fraction(0))
    scaled = rho1 * n * n
    if scaled.denominator != 1:
        raise ValidationError(
            f"conformal weight {rho1} is not in (1/{n}^2)Z")
    r = int(scaled) % n
    g = gcd(r, n)
    return TwistedTypeData(n, m, anomalies, weights, r,
                           level=n * n // g, h=n // g)


__all__ = [
    "LiftData",
    "SignSplit",
    "TwistedTypeData",
    "order_doubling",
    "split_by_sign",
    "standard_lift_sign",
    "twisted_weight_and_type",
    "vacuum_anomaly",
]
