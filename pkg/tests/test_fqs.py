"""Discriminant forms, E-groups, and the Weil representation."""

import random
from fractions import Fraction

import pytest

from orbifoldlab.cyclo import CyclotomicNumber, root_of_unity, unit_phase
from orbifoldlab.errors import OddLattice, OddSignatureNeedsWord, SingularGram
from orbifoldlab.fqs import (
    EGroup,
    FiniteQuadraticSpace,
    Subgroup,
    are_isomorphic,
    check_weil_relations,
    e_group,
    maximal_self_orthogonal_isotropics,
    orthogonal_complement,
    random_even_gram,
    weil_matrix,
    WeilRepresentation,
)
from orbifoldlab.sl2 import S, T

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


def hyperbolic_scaled(n):
    return [[0, n], [n, 0]]


class TestConstruction:
    def test_rejects_odd_lattice(self):
        with pytest.raises(OddLattice):
            FiniteQuadraticSpace.from_even_lattice([[1]])

    def test_rejects_singular(self):
        with pytest.raises(SingularGram):
            FiniteQuadraticSpace.from_even_lattice([[2, 2], [2, 2]])
        with pytest.raises(SingularGram):
            FiniteQuadraticSpace.from_even_lattice([[2, 1], [0, 2]])

    def test_rejects_bad_generator_data(self):
        with pytest.raises(ValueError):
            FiniteQuadraticSpace((2,), (Fraction(1, 4),), ((Fraction(1, 4),),))

    def test_a1_disc(self):
        d = FiniteQuadraticSpace.from_even_lattice(A1)
        assert d.orders == (2,)
        assert d.order == 2
        assert d.q_value((1,)) == Fraction(1, 4)
        assert d.level() == 4
        assert d.signature() == 1

    def test_a2_disc(self):
        d = FiniteQuadraticSpace.from_even_lattice(A2)
        assert d.orders == (3,)
        assert sorted(d.q_value((k,)) for k in range(3)) == [
            0, Fraction(1, 3), Fraction(1, 3)]
        assert d.signature_and_level() == (2, 3)

    def test_a4_disc(self):
        d = FiniteQuadraticSpace.from_even_lattice(A4)
        assert d.orders == (5,)
        vals = sorted(d.q_value((k,)) for k in range(5))
        assert vals == [0, Fraction(2, 5), Fraction(2, 5),
                        Fraction(3, 5), Fraction(3, 5)]
        assert d.signature_and_level() == (4, 5)

    def test_d4_disc(self):
        d = FiniteQuadraticSpace.from_even_lattice(D4)
        assert d.group_invariants() == (2, 2)
        nonzero = [x for x in d.elements() if x != d.zero()]
        assert all(d.q_value(x) == Fraction(1, 2) for x in nonzero)
        assert d.signature_and_level() == (4, 2)

    def test_e8_disc_trivial(self):
        d = FiniteQuadraticSpace.from_even_lattice(E8)
        assert d.order == 1
        assert d.signature_and_level() == (0, 1)

    def test_negative_definite_signature(self):
        neg = [[-x for x in row] for row in A2]
        d = FiniteQuadraticSpace.from_even_lattice(neg)
        assert d.signature() == 6

    def test_hyperbolic_scaled_disc(self):
        d = FiniteQuadraticSpace.from_even_lattice(hyperbolic_scaled(5))
        assert d.group_invariants() == (5, 5)
        assert d.signature_and_level() == (0, 5)

    def test_orthogonal_sum(self):
        a = FiniteQuadraticSpace.from_even_lattice(A1)
        b = FiniteQuadraticSpace.from_even_lattice(A2)
        s = a.orthogonal_sum(b)
        assert s.order == 6
        assert s.signature() == 3
        assert s.q_value((1, 1)) == Fraction(1, 4) + s.q_gens[1]

    def test_polarization_identity(self):
        d = FiniteQuadraticSpace.from_even_lattice(A4)
        for x in d.elements():
            for y in d.elements():
                lhs = (d.q_value(d.add(x, y)) - d.q_value(x) - d.q_value(y)) % 1
                assert lhs == d.b_value(x, y)

    def test_dual_generators_recorded(self):
        d = FiniteQuadraticSpace.from_even_lattice(A2)
        (g,) = d.dual_generators
        ip = sum(g[i] * A2[i][j] * g[j] for i in range(2) for j in range(2))
        assert (Fraction(ip, 2) - d.q_gens[0]).denominator == 1


class TestSubgroups:
    def test_complement_sizes(self):
        d = FiniteQuadraticSpace.from_even_lattice(hyperbolic_scaled(6))
        rng = random.Random(5)
        for _ in range(25):
            g = tuple(rng.randrange(o) for o in d.orders)
            sub = Subgroup.generated_by(d, [g])
            comp = orthogonal_complement(d, sub)
            assert len(sub) * len(comp) == d.order
            again = orthogonal_complement(d, comp)
            assert again.elements == sub.elements

    def test_isotropics_hyperbolic_prime(self):
        d = FiniteQuadraticSpace.from_even_lattice(hyperbolic_scaled(5))
        found = maximal_self_orthogonal_isotropics(d)
        assert len(found) == 2
        assert all(len(i) == 5 for i in found)

    def test_isotropics_nonsquare_order(self):
        d = FiniteQuadraticSpace.from_even_lattice(A2)
        assert maximal_self_orthogonal_isotropics(d) == []

    def test_isotropic_flag(self):
        d = FiniteQuadraticSpace.from_even_lattice(hyperbolic_scaled(4))
        sub = Subgroup.generated_by(d, [(1, 0)])
        assert sub.is_isotropic()
        sub2 = Subgroup.generated_by(d, [(1, 1)])
        assert not sub2.is_isotropic()


class TestIsomorphism:
    def test_same_form_different_generator(self):
        a = FiniteQuadraticSpace.from_even_lattice(A2)
        b = FiniteQuadraticSpace((3,), (Fraction(4, 3),), ((Fraction(8, 3),),))
        assert are_isomorphic(a, b)

    def test_distinguishes_quadratic_values(self):
        a = FiniteQuadraticSpace.from_even_lattice(A1)
        b = FiniteQuadraticSpace((2,), (Fraction(3, 4),), ((Fraction(3, 2),),))
        assert not are_isomorphic(a, b)

    def test_distinguishes_groups(self):
        a = FiniteQuadraticSpace.from_even_lattice(D4)
        b = FiniteQuadraticSpace((4,), (Fraction(1, 2),), ((Fraction(1, 1),),))
        assert not are_isomorphic(a, b)

    def test_egroup_matches_scaled_hyperbolic(self):
        a = e_group(5, 0, 0)
        b = FiniteQuadraticSpace.from_even_lattice(hyperbolic_scaled(5))
        assert are_isomorphic(a, b)


class TestEGroup:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_group_axioms(self, n):
        for d in range(n):
            g = EGroup(n, d)
            e = g.identity()
            xs = list(g.elements())
            for x in xs[:6]:
                assert g.op(x, g.inverse(x)) == e
                assert g.op(e, x) == x

    @pytest.mark.parametrize("n", range(2, 13))
    def test_structure_orders(self, n):
        for d in range(n):
            g = EGroup(n, d)
            e1, e2 = g.canonical_generators()
            o1, o2 = g.structure_orders()
            assert o1 * o2 == n * n
            assert g.element_order(e1) == o1
            if o2 > 1:
                assert g.element_order(e2) == o2
            # e1, e2 generate independently: count distinct sums
            seen = set()
            for i in range(o1):
                for j in range(o2):
                    seen.add(g.op(g.power(e1, i), g.power(e2, j)))
            assert len(seen) == n * n

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8])
    def test_lemma_n_times_generator(self, n):
        for d in range(n):
            g = EGroup(n, d)
            for j in range(n):
                assert g.power((1, j), n) == (0, d % n)

    def test_requires_compatible_r(self):
        with pytest.raises(ValueError):
            e_group(5, 1, 1)  # 2*1 = 2 != 1 mod 5

    @pytest.mark.parametrize("n,r", [(2, 0), (2, 1), (3, 1), (4, 1), (5, 2),
                                     (6, 2), (7, 3), (8, 3), (9, 4), (12, 5)])
    def test_quadratic_form_consistency(self, n, r):
        d = (2 * r) % n
        grp = EGroup(n, d)
        space = e_group(n, d, r)
        assert space.order == n * n
        # the generator presentation reproduces Q on every element
        e1, e2 = grp.canonical_generators()
        o1, o2 = grp.structure_orders()
        for a in range(o1):
            for b in range(o2):
                x = grp.op(grp.power(e1, a), grp.power(e2, b))
                coords = (a, b)[: len(space.orders)]
                assert space.q_value(coords) == grp.q_value(x, r)

    @pytest.mark.parametrize("n,r", [(2, 1), (3, 1), (4, 2), (5, 1), (6, 3)])
    def test_signature_zero_and_level(self, n, r):
        from math import gcd
        space = e_group(n, (2 * r) % n, r)
        sig, level = space.signature_and_level()
        assert sig == 0
        assert level == n * n // gcd(r, n)


class TestWeil:
    def test_trivial_space(self):
        d = FiniteQuadraticSpace.from_even_lattice(E8)
        m = weil_matrix(d, S)
        assert len(m) == 1 and m[0][0] == 1

    def test_a1_needs_word(self):
        d = FiniteQuadraticSpace.from_even_lattice(A1)
        with pytest.raises(OddSignatureNeedsWord):
            weil_matrix(d, S)

    def test_a1_s_matrix(self):
        d = FiniteQuadraticSpace.from_even_lattice(A1)
        m = weil_matrix(d, [("S", 1)])
        half = Fraction(1, 2)
        i4 = root_of_unity(4, 1)
        base = (CyclotomicNumber.one() - i4) * half  # e^(-i pi/4)/sqrt(2)
        assert m[0][0] == base
        assert m[0][1] == base
        assert m[1][0] == base
        assert m[1][1] == -base

    def test_a1_t_matrix(self):
        d = FiniteQuadraticSpace.from_even_lattice(A1)
        m = weil_matrix(d, [("T", 1)])
        assert m[0][0] == 1 and m[1][1] == root_of_unity(4, 1)
        assert m[0][1] == 0 and m[1][0] == 0

    def test_t_matrix_from_sl2(self):
        d = FiniteQuadraticSpace.from_even_lattice(A2)
        m = weil_matrix(d, (1, 2, 0, 1))
        for k in range(3):
            expect = unit_phase(2 * d.q_value((k,)))
            assert m[k][k] == expect

    def test_word_matches_matrix_product(self):
        d = FiniteQuadraticSpace.from_even_lattice(A2)
        rep = WeilRepresentation(d)
        ms = rep.matrix([("S", 1)])
        mt3 = rep.matrix([("T", 3)])
        prod = [[sum((ms[i][k] * mt3[k][j] for k in range(3)),
                     CyclotomicNumber.zero()) for j in range(3)]
                for i in range(3)]
        both = rep.matrix([("S", 1), ("T", 3)])
        assert prod == both

    def test_row_of_word_matches_matrix(self):
        d = FiniteQuadraticSpace.from_even_lattice(A4)
        rep = WeilRepresentation(d)
        word = [("S", 1), ("T", 2), ("S", 1)]
        full = rep.matrix(word)
        row = rep.row_of_word(word, (0,))
        assert full[0] == row

    def test_s_squared_is_phase_times_negation(self):
        d = FiniteQuadraticSpace.from_even_lattice(A2)
        rep = WeilRepresentation(d)
        s2 = rep.matrix([("S", 2)])
        phase = unit_phase(Fraction(-rep.sign, 4))
        for i, x in enumerate(rep.elements):
            for j, y in enumerate(rep.elements):
                expect = phase if y == d.neg(x) else CyclotomicNumber.zero()
                assert s2[i][j] == expect

    @pytest.mark.parametrize("gram", [A1, A2, A4, D4, hyperbolic_scaled(3)],
                             ids=["A1", "A2", "A4", "D4", "U3"])
    def test_relations_named(self, gram):
        d = FiniteQuadraticSpace.from_even_lattice(gram)
        checks = check_weil_relations(d)
        assert all(checks.values()), checks

    def test_relations_random(self):
        rng = random.Random(41)
        done = 0
        while done < 6:
            g = random_even_gram(2, rng)
            d = FiniteQuadraticSpace.from_even_lattice(g)
            if d.order > 60 or d.order < 2:
                continue
            done += 1
            checks = check_weil_relations(d)
            assert all(checks.values()), (g, checks)

    def test_relations_egroup(self):
        space = e_group(4, 2, 1)
        checks = check_weil_relations(space)
        assert all(checks.values()), checks
