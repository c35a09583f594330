"""Lift signs, order doubling, vacuum anomalies, twisted weights and types."""

from fractions import Fraction
from math import gcd

import pytest

from orbifoldlab.autlift import (
    LiftData,
    order_doubling,
    split_by_sign,
    standard_lift_sign,
    twisted_weight_and_type,
    vacuum_anomaly,
)
from orbifoldlab.data import load_lattice
from orbifoldlab.errors import (
    NonStandardLiftUnsupported,
    NotFixed,
    ValidationError,
)
from orbifoldlab.lattice import IntegerLattice, shape_of_power

A2 = IntegerLattice([[2, -1], [-1, 2]])
SWAP = ((0, 1), (1, 0))


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def m23_shape(m):
    e = 24 // sum(divisors(m))
    return {t: e for t in divisors(m)}


class TestSigns:
    def test_odd_pairing_gives_minus_one(self):
        # <e1, swap e1> = -1
        assert standard_lift_sign(A2, SWAP, 2, (1, 0)) == -1

    def test_even_pairing_gives_plus_one(self):
        # e1 + e2 is fixed with norm <a, swap a> = 2
        assert standard_lift_sign(A2, SWAP, 2, (1, 1)) == 1

    def test_odd_order_always_one(self):
        rot = ((0, -1), (1, -1))
        assert A2.automorphism_order(rot) == 3
        assert standard_lift_sign(A2, rot, 3, (1, 0)) == 1

    def test_odd_power_always_one(self):
        assert standard_lift_sign(A2, SWAP, 1, (1, 1)) == 1

    def test_identity_automorphism(self):
        ident = ((1, 0), (0, 1))
        assert standard_lift_sign(A2, ident, 1, (2, 1)) == 1

    def test_unfixed_vector_rejected(self):
        with pytest.raises(NotFixed):
            standard_lift_sign(A2, SWAP, 1, (1, 0))

    def test_sign_is_homomorphism(self):
        vectors = [(1, 0), (0, 1), (1, 1), (2, -1), (-1, 3)]
        for a in vectors:
            for b in vectors:
                s = standard_lift_sign(A2, SWAP, 2, tuple(
                    x + y for x, y in zip(a, b)))
                assert s == (standard_lift_sign(A2, SWAP, 2, a)
                             * standard_lift_sign(A2, SWAP, 2, b))

    def test_power_reduction_matches_lift_order(self):
        # the lift of the swap has order 4, so powers repeat with period 4
        for k in (2, 6, 10):
            assert standard_lift_sign(A2, SWAP, k, (1, 0)) == -1
        assert standard_lift_sign(A2, SWAP, 4, (1, 0)) == 1


class TestOrderDoubling:
    def test_swap_doubles(self):
        assert order_doubling(A2, SWAP) == 4

    def test_negation_on_a1_does_not_double(self):
        a1 = IntegerLattice([[2]])
        assert order_doubling(a1, ((-1,),)) == 2

    def test_odd_order_never_doubles(self):
        rot = ((0, -1), (1, -1))
        assert order_doubling(A2, rot) == 3

    def test_leech_m23_elements_do_not_double(self):
        data = load_lattice("leech")
        for m in (2, 6, 14):
            assert order_doubling(data.lattice, data.automorphism(f"m{m}")) == m


class TestVacuumAnomaly:
    def test_identity_shape(self):
        assert vacuum_anomaly({1: 24}) == 0

    def test_case2_shape(self):
        assert vacuum_anomaly({1: -1, 5: 5}) == 1

    def test_case5_shape(self):
        assert vacuum_anomaly({1: 1, 2: -1, 5: -5, 10: 5}) == 1

    @pytest.mark.parametrize("m", [1, 2, 3, 5, 6, 7, 11, 14, 15, 23])
    def test_balanced_shapes(self, m):
        assert vacuum_anomaly(m23_shape(m)) == Fraction(m - 1, m)

    def test_consistent_under_powers(self):
        from orbifoldlab.nt import identity_matrix, mat_mul

        shape = {1: 2, 2: -9, 4: 10}
        data = load_lattice("nA9_2D6")
        lat, u = data.lattice, data.automorphism("case1")
        p = identity_matrix(24)
        for k in range(5):
            assert lat.cycle_shape(p) == shape_of_power(shape, k)
            p = mat_mul(p, [list(r) for r in u])


class TestSplitBySign:
    def test_odd_order_trivial(self):
        rot = ((0, -1), (1, -1))
        split = split_by_sign(A2, rot, 3)
        assert split.beta1 is None
        assert split.kernel.gram == A2.gram

    def test_swap_squared_splits(self):
        split = split_by_sign(A2, SWAP, 2)
        assert split.beta1 is not None
        # index two in the full lattice
        assert split.kernel.det() == 4 * A2.det()

    def test_signed_theta_matches_brute_force(self):
        split = split_by_sign(A2, SWAP, 2)
        got = split.signed_theta(4)
        counts = {}
        for v, nv in A2.enumerate_vectors(8):
            w = standard_lift_sign(A2, SWAP, 2, v)
            e = Fraction(nv, 2)
            counts[e] = counts.get(e, 0) + w
        for e, c in counts.items():
            if e < 4:
                assert got.coefficient(e) == c, e

    def test_trivial_sign_keeps_full_fixed_lattice(self):
        data = load_lattice("nA4_6")
        split = split_by_sign(data.lattice, data.automorphism("case2"), 1)
        assert split.beta1 is None
        assert split.kernel.det() == 125


class TestTwistedType:
    def test_case2_type(self):
        data = load_lattice("nA4_6")
        td = twisted_weight_and_type(data.lattice, data.automorphism("case2"))
        assert td.type_string == "5{0}"
        assert td.level == 5 and td.h == 1
        assert td.weights == {0: 0, 1: 1, 2: 1, 3: 1, 4: 1}

    def test_case5_type(self):
        data = load_lattice("nA4_6")
        td = twisted_weight_and_type(data.lattice, data.automorphism("case5"))
        assert td.type_string == "10{0}"
        assert td.weights[1] == 1

    def test_case1_type_and_weight_invariants(self):
        data = load_lattice("nA9_2D6")
        td = twisted_weight_and_type(data.lattice, data.automorphism("case1"))
        assert td.type_string == "4{0}"
        assert td.anomalies[2] == Fraction(5, 4)
        assert td.weights[2] == Fraction(3, 2)
        n = td.n
        for i, w in td.weights.items():
            g = gcd(i, n)
            assert (w / Fraction(g * g, n * n)).denominator == 1
            assert (w - Fraction(i * i * td.r, n * n)) % Fraction(g, n) == 0

    def test_requires_unimodular(self):
        with pytest.raises(ValidationError):
            twisted_weight_and_type(A2, SWAP)

    def test_non_standard_lift_rejected(self):
        data = load_lattice("nA4_6")
        lift = LiftData.from_automorphism(data.lattice,
                                          data.automorphism("case2"))
        lift.eta = (1,) * 24
        with pytest.raises(NonStandardLiftUnsupported):
            twisted_weight_and_type(data.lattice, data.automorphism("case2"),
                                    lift)
