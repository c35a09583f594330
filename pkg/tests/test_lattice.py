"""Lattice enumeration, theta series, and cycle shapes."""

import itertools
from fractions import Fraction

import pytest

from orbifoldlab.errors import (
    NonIntegralResult,
    NotFiniteOrder,
    NotPositiveDefinite,
)
from orbifoldlab.lattice import (
    IntegerLattice,
    format_cycle_shape,
    parse_cycle_shape,
    shape_of_power,
)

A1 = [[2]]
A2 = [[2, -1], [-1, 2]]
A4 = [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
D4 = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]
E8 = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
]


def brute_theta_counts(gram, precision, offset=None, box=8):
    """Box-scan oracle for theta coefficients; independent of the LDL path."""
    n = len(gram)
    prec = Fraction(precision)
    if offset is None:
        offset = [Fraction(0)] * n
    counts = {}
    for tup in itertools.product(range(-box, box + 1), repeat=n):
        y = [tup[i] + offset[i] for i in range(n)]
        norm = sum(y[i] * gram[i][j] * y[j] for i in range(n) for j in range(n))
        e = Fraction(norm, 2)
        if e < prec:
            counts[e] = counts.get(e, 0) + 1
    return counts


class TestEnumeration:
    def test_requires_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            IntegerLattice([[0, 1], [1, 0]]).enumerate_vectors(4)
        with pytest.raises(NotPositiveDefinite):
            IntegerLattice([[-2]]).enumerate_vectors(4)

    def test_a1_vectors(self):
        lat = IntegerLattice(A1)
        found = lat.enumerate_vectors(9)
        assert found == [((-2,), Fraction(8)), ((-1,), Fraction(2)),
                         ((0,), Fraction(0)), ((1,), Fraction(2)),
                         ((2,), Fraction(8))]

    def test_strictness(self):
        lat = IntegerLattice(A1)
        strict = lat.enumerate_vectors(8)
        loose = lat.enumerate_vectors(8, strict=False)
        assert len(loose) == len(strict) + 2

    def test_deterministic(self):
        lat = IntegerLattice(A4)
        assert lat.enumerate_vectors(6) == lat.enumerate_vectors(6)

    def test_offset_enumeration(self):
        lat = IntegerLattice(A1)
        found = lat.enumerate_vectors(5, offset=[Fraction(1, 2)])
        norms = sorted(n for _, n in found)
        assert norms == [Fraction(1, 2), Fraction(1, 2),
                         Fraction(9, 2), Fraction(9, 2)]

    def test_minimum(self):
        assert IntegerLattice(A2).minimum() == 2
        assert IntegerLattice(E8).minimum() == 2

    def test_roots_unimodular(self):
        # level 1: only d = 1 contributes, the classical norm-2 roots
        assert len(IntegerLattice(E8).roots()) == 240

    def test_roots_with_higher_divisor(self):
        # level 3: d = 3 adds the norm-6 vectors lying in 3 * dual
        lat = IntegerLattice(A2)
        found = lat.roots()
        by_norm = {}
        for v in found:
            by_norm.setdefault(lat.norm(v), []).append(v)
        assert len(by_norm[2]) == 6
        assert len(by_norm[6]) == 6
        assert len(found) == 12

    def test_roots_indefinite_needs_region(self):
        from orbifoldlab.errors import UnboundedSearch
        lat = IntegerLattice([[0, 1], [1, 0]])
        with pytest.raises(UnboundedSearch):
            lat.roots()
        # norm(x, y) = 2xy, so the only norm-2 vectors are (1, 1) and (-1, -1)
        boxed = lat.roots(region=[(-2, 2), (-2, 2)])
        assert set(boxed) == {(1, 1), (-1, -1)}


class TestTheta:
    @pytest.mark.parametrize("gram,box", [(A1, 8), (A2, 6), (A4, 6), (D4, 6)],
                             ids=["A1", "A2", "A4", "D4"])
    def test_against_box_oracle(self, gram, box):
        lat = IntegerLattice(gram)
        theta = lat.theta_series(5)
        oracle = brute_theta_counts(gram, 5, box=box)
        for e, c in oracle.items():
            assert theta.coefficient(e) == c
        assert theta.coefficient(Fraction(0)) == 1

    def test_e8_classical(self):
        theta = IntegerLattice(E8).theta_series(4)
        assert theta.integer_coefficient(Fraction(0)) == 1
        assert theta.integer_coefficient(Fraction(1)) == 240
        assert theta.integer_coefficient(Fraction(2)) == 2160
        assert theta.integer_coefficient(Fraction(3)) == 6720

    def test_coset_theta(self):
        lat = IntegerLattice(A1)
        theta = lat.theta_series(3, offset=[Fraction(1, 2)])
        assert theta.coefficient(Fraction(1, 4)) == 2
        assert theta.coefficient(Fraction(9, 4)) == 2
        assert theta.coefficient(Fraction(1)) == 0
        oracle = brute_theta_counts(A1, 3, offset=[Fraction(1, 2)])
        for e, c in oracle.items():
            assert theta.coefficient(e) == c

    def test_precision_recorded(self):
        theta = IntegerLattice(A2).theta_series(Fraction(7, 2))
        assert theta.precision == Fraction(7, 2)


class TestBasics:
    def test_det_and_parity(self):
        assert IntegerLattice(A4).det() == 5
        assert IntegerLattice(E8).det() == 1
        assert IntegerLattice(A2).is_even()
        assert not IntegerLattice([[1, 0], [0, 2]]).is_even()

    def test_hyperbolic_is_even_indefinite(self):
        u = IntegerLattice([[0, 1], [1, 0]])
        assert u.is_even()
        assert u.det() == -1
        assert u.discriminant_group().order == 1

    def test_scaled_hyperbolic_disc(self):
        u2 = IntegerLattice([[0, 2], [2, 0]])
        d = u2.discriminant_group()
        assert d.group_invariants() == (2, 2)
        assert sorted(d.q_value(x) for x in d.elements()) == [
            0, 0, 0, Fraction(1, 2)]

    def test_rescale(self):
        tripled = IntegerLattice(A2).rescale(3)
        assert tripled.gram == ((6, -3), (-3, 6))
        with pytest.raises(NonIntegralResult):
            IntegerLattice(A2).rescale(Fraction(1, 2))

    def test_direct_sum(self):
        s = IntegerLattice(A1).direct_sum(IntegerLattice(A2))
        assert s.rank == 3
        assert s.det() == 2 * 3

    def test_level(self):
        assert IntegerLattice(A1).level() == 4
        assert IntegerLattice(A2).level() == 3

    def test_json_round_trip(self):
        lat = IntegerLattice(A4, name="A4")
        again = IntegerLattice.from_json_dict(lat.to_json_dict())
        assert again.gram == lat.gram and again.name == "A4"


def reflection(gram, i):
    """Reflection in the i-th basis vector (norm 2), in lattice coordinates."""
    n = len(gram)
    return [[(1 if k == j else 0) - (1 if k == i else 0) * gram[i][j]
             for j in range(n)] for k in range(n)]


class TestAutomorphisms:
    def test_is_automorphism(self):
        lat = IntegerLattice(A2)
        assert lat.is_automorphism(reflection(A2, 0))
        assert not lat.is_automorphism([[1, 1], [0, 1]])

    def test_order(self):
        lat = IntegerLattice(A2)
        neg = [[-1, 0], [0, -1]]
        assert lat.automorphism_order(neg) == 2
        assert lat.automorphism_order(reflection(A2, 0)) == 2

    def test_infinite_order_detected(self):
        lat = IntegerLattice([[0, 1], [1, 0]])
        with pytest.raises(NotFiniteOrder):
            lat.automorphism_order([[1, 1], [0, 1]], bound=50)

    def test_cycle_shape_identity(self):
        lat = IntegerLattice(A2)
        assert lat.cycle_shape([[1, 0], [0, 1]]) == {1: 2}

    def test_cycle_shape_negation_is_frame_shape(self):
        lat = IntegerLattice(A2)
        assert lat.cycle_shape([[-1, 0], [0, -1]]) == {1: -2, 2: 2}

    def test_cycle_shape_swap(self):
        lat = IntegerLattice([[2, 0], [0, 2]])
        assert lat.cycle_shape([[0, 1], [1, 0]]) == {2: 1}

    def coxeter_a4(self):
        m = None
        for i in range(4):
            r = reflection(A4, i)
            m = r if m is None else [[sum(m[a][k] * r[k][b] for k in range(4))
                                      for b in range(4)] for a in range(4)]
        return m

    def test_coxeter_a4_shape(self):
        lat = IntegerLattice(A4)
        cox = self.coxeter_a4()
        assert lat.is_automorphism(cox)
        assert lat.automorphism_order(cox) == 5
        assert lat.cycle_shape(cox) == {1: -1, 5: 1}

    def test_shape_of_power(self):
        assert shape_of_power({1: -1, 5: 1}, 5) == {1: 4}
        assert shape_of_power({1: -1, 5: 1}, 2) == {1: -1, 5: 1}
        assert shape_of_power({2: 1}, 2) == {1: 2}
        assert shape_of_power({1: 8, 2: 8}, 2) == {1: 24}

    def test_shape_of_power_matches_direct(self):
        lat = IntegerLattice(A4)
        cox = self.coxeter_a4()
        sq = [[sum(cox[a][k] * cox[k][b] for k in range(4)) for b in range(4)]
              for a in range(4)]
        assert lat.cycle_shape(sq) == shape_of_power(lat.cycle_shape(cox), 2)

    def test_fixed_and_coinvariant_swap(self):
        lat = IntegerLattice([[2, 0], [0, 2]])
        fc = lat.fixed_and_coinvariant([[0, 1], [1, 0]])
        assert fc.fixed.rank == 1 and fc.coinvariant.rank == 1
        assert fc.fixed.gram == ((4,),)
        assert fc.coinvariant.gram == ((4,),)
        (fv,), (cv,) = fc.fixed_basis, fc.coinvariant_basis
        assert lat.bilinear(fc.fixed_basis[0], fc.coinvariant_basis[0]) == 0

    def test_fixed_and_coinvariant_coxeter(self):
        lat = IntegerLattice(A4)
        fc = lat.fixed_and_coinvariant(self.coxeter_a4())
        assert fc.fixed.rank == 0
        assert fc.coinvariant.rank == 4

    def test_fixed_identity(self):
        lat = IntegerLattice(A2)
        fc = lat.fixed_and_coinvariant([[1, 0], [0, 1]])
        assert fc.fixed.rank == 2 and fc.coinvariant.rank == 0

    def test_vector_in_sublattice(self):
        lat = IntegerLattice([[2, 0], [0, 2]])
        fc = lat.fixed_and_coinvariant([[0, 1], [1, 0]])
        assert lat.vector_in_sublattice(fc.fixed_basis, [2, 2]) is not None
        assert lat.vector_in_sublattice(fc.fixed_basis, [1, 2]) is None


class TestShapeFormat:
    def test_round_trip(self):
        shape = {1: -1, 5: 5}
        assert parse_cycle_shape(format_cycle_shape(shape)) == shape

    def test_format(self):
        assert format_cycle_shape({1: 8, 2: 8}) == "1^8 2^8"
        assert format_cycle_shape({23: 1}) == "23"

    def test_parse_plain(self):
        assert parse_cycle_shape("1 2 7 14") == {1: 1, 2: 1, 7: 1, 14: 1}
