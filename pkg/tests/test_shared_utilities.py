"""
Test suite for _shared_utilities.py
Tests the seeded generators used by the tests and the verification run
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "scripts"))

import pytest
from _colouring import check_axioms, evaluate, natural_colouring, q_colouring, tabulate
from _exactalg import SeriesH
from _pbw import straightening_context
from _shared_utilities import (
    make_rng,
    plant_value,
    random_colourings,
    random_element,
    random_poly_n,
    random_rational,
    random_regular_sequence,
    random_slot_polynomial,
    random_word,
)
from _verma import GENERATORS


class TestRandomness:
    """Test seeding and scalar draws"""

    def test_same_seed_same_draws(self):
        """Test two generators with one seed agree"""
        first = make_rng(3)
        second = make_rng(3)
        assert [first.random() for _ in range(5)] == [second.random() for _ in range(5)]

    def test_default_seed_from_config(self, mocker):
        """Test the default seed is read from Config"""
        from _config import Config

        mocker.patch.object(Config, "SEED", 99)
        assert make_rng().random() == make_rng(99).random()

    def test_random_rational_bounds(self):
        rng = make_rng(1)
        for _ in range(50):
            value = random_rational(rng, 3)
            assert isinstance(value, Fraction)
            assert abs(value) <= 3

    def test_random_poly_degree(self):
        rng = make_rng(2)
        for _ in range(10):
            assert random_poly_n(rng, 2).degree() <= 2


class TestColouringGenerators:
    """Test perturbation and colouring draws"""

    def test_slot_polynomial_shape(self):
        """Test the perturbation is constant in h with bounded total degree"""
        P = random_slot_polynomial(make_rng(4), 3, degree=2)
        assert P.order == 2
        assert P.coefficient(1).is_zero
        assert P.coefficient(0).is_zero or P.coefficient(0).total_degree() <= 2

    def test_slot_polynomial_order_zero(self):
        P = random_slot_polynomial(make_rng(4), 0)
        assert P.order == 0

    def test_colourings_are_verified(self):
        """Test every drawn colouring passes the symbolic axiom check"""
        colourings = random_colourings(4, 2, seed=8)
        assert len(colourings) == 4
        for psi in colourings:
            assert psi.axioms_verified
            assert check_axioms(psi).passed

    def test_colourings_reproducible(self):
        first = random_colourings(3, 2, seed=8)
        second = random_colourings(3, 2, seed=8)
        assert [psi.hcoeffs for psi in first] == [psi.hcoeffs for psi in second]


class TestSequenceAndWordGenerators:
    """Test sequence, word and element draws"""

    def test_regular_sequence_support(self):
        """Test entries vanish beyond the requested support"""
        f = random_regular_sequence(make_rng(5), 1, 8, 2, support=3)
        assert f.d == 1
        assert f.kmax == 8
        assert f.regular_verified
        assert all(f.entry(k).is_zero() for k in range(4, 9))

    def test_word_alphabet_and_length(self):
        rng = make_rng(6)
        for _ in range(20):
            word = random_word(rng, 4)
            assert len(word) <= 4
            assert set(word) <= set(GENERATORS)

    def test_random_element_context(self):
        context = straightening_context(q_colouring(1), 6)
        element = random_element(make_rng(7), context)
        assert element.context is context
        assert element.order == 1


class TestPlantValue:
    """Test planting values into tabulated colourings"""

    def test_replaces_one_value(self):
        table = tabulate(natural_colouring(1), 3, -2, 2)
        value = SeriesH((Fraction(7), Fraction(1)))
        planted = plant_value(table, 2, 1, value)
        assert evaluate(planted, 2, 1) == value
        assert evaluate(planted, 1, 1) == evaluate(table, 1, 1)
        assert not planted.axioms_verified


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
