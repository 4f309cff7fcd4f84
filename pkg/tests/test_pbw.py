"""
Test suite for _pbw.py
Tests normal-ordered products, the quantum relation and the b-trivialization image
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "scripts"))

import pytest

from _colouring import W, evaluate, natural_colouring, perturbed_colouring, q_colouring, sequence, slot_polynomial
from _errors import CutoffUnavailable, MissingStraightening, MixedContext, NotHomogeneous
from _exactalg import N, SeriesH, poly_from_expr, qnumber
from _pbw import (
    AlgebraElement,
    StraighteningContext,
    b_trivialization_image,
    from_word,
    generator,
    identity,
    is_zero,
    linear_combination,
    multiply,
    quantum_commutator,
    quantum_relation_check,
    straightening_context,
)
from _shared_utilities import make_rng, random_element, random_word
from _verma import (
    XMINUS,
    XPLUS,
    H,
    act_element,
    act_word,
    basis_vector,
    classical_verma,
    deformed_verma,
    kills_all_vermas,
    zero_vector,
)


def series_n(*layers):
    return SeriesH(tuple(poly_from_expr(layer) for layer in layers))


@pytest.fixture
def natural_context():
    return straightening_context(natural_colouring(2), 8)


@pytest.fixture
def q_context():
    return straightening_context(q_colouring(2), 8)


class TestGenerators:
    """Test single generators and the identity"""

    def test_generator_terms(self):
        assert generator(H, 1).terms == {(0, 0): series_n(N, 0)}
        assert generator(XMINUS, 1).terms == {(1, 0): series_n(1, 0)}
        assert generator(XPLUS, 1).terms == {(0, 1): series_n(1, 0)}

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            generator("E", 1)

    def test_empty_word_is_identity(self, natural_context):
        assert from_word([], natural_context) == identity(2, natural_context)

    def test_word_needs_order_or_context(self):
        with pytest.raises(MissingStraightening):
            from_word([H], None)

    def test_degree(self, natural_context):
        assert from_word([XPLUS, XPLUS, XMINUS], natural_context).degree() == 1
        with pytest.raises(NotHomogeneous):
            (generator(H, 0) + generator(XPLUS, 0)).degree()


class TestMultiplication:
    """Test straightening of products"""

    def test_weight_relation(self, q_context):
        x = from_word([H, XPLUS], q_context) - from_word([XPLUS, H], q_context)
        assert x == generator(XPLUS, 2, q_context).scale(2)

    def test_weight_relation_xminus(self):
        x = from_word([H, XMINUS], None, order=1) - from_word([XMINUS, H], None, order=1)
        assert x == generator(XMINUS, 1).scale(-2)

    def test_natural_commutator(self, natural_context):
        x = from_word([XPLUS, XMINUS], natural_context)
        assert x.terms == {(1, 1): series_n(1, 0, 0), (0, 0): series_n(N, 0, 0)}

    def test_quantum_commutator_order_two(self):
        commutator = quantum_commutator(2, 8)
        assert commutator.terms == {(0, 0): series_n(N, 0, (N**3 - N) / 6)}

    def test_already_normal_needs_no_context(self):
        x = from_word([XMINUS, XMINUS, H, XPLUS], None, order=1)
        assert set(x.terms) == {(2, 1)}
        assert x.terms[(2, 1)] == series_n(N + 2, 0)

    def test_missing_straightening(self):
        with pytest.raises(MissingStraightening):
            multiply(generator(XPLUS, 1), generator(XMINUS, 1))

    def test_mixed_context(self, natural_context, q_context):
        with pytest.raises(MixedContext):
            generator(XPLUS, 2, natural_context) * generator(XMINUS, 2, q_context)

    @pytest.mark.parametrize("seed", range(4))
    def test_associativity(self, q_context, seed):
        rng = make_rng(seed)
        x, y, z = (random_element(rng, q_context) for _ in range(3))
        assert (x * y) * z == x * (y * z)

    @pytest.mark.parametrize("seed", range(4))
    def test_grading_preserved(self, natural_context, seed):
        word = random_word(make_rng(seed), 6)
        expected = word.count(XPLUS) - word.count(XMINUS)
        element = from_word(word, natural_context)
        assert all(b - a == expected for (a, b) in element.terms)

    def test_linear_combination(self, natural_context):
        x = linear_combination(
            [(1, from_word([XPLUS, XMINUS], natural_context)), (-1, from_word([XMINUS, XPLUS], natural_context))], 2
        )
        assert x == generator(H, 2, natural_context)


class TestQuantumRelation:
    """[X^+, X^-] = [H]_q in U_h(psi_q)"""

    @pytest.mark.parametrize("order", [0, 2, 4])
    def test_holds(self, order):
        assert quantum_relation_check(order, 8)

    def test_commutator_layers(self):
        commutator = quantum_commutator(4, 8)
        assert list(commutator.terms) == [(0, 0)]
        assert commutator.terms[(0, 0)] == qnumber(None, 4)


class TestCoherence:
    """Normal forms act on Verma modules as the words they come from"""

    @pytest.mark.parametrize(
        "psi",
        [natural_colouring(2), q_colouring(2), perturbed_colouring(slot_polynomial(1, 2), 2)],
        ids=["natural", "q", "p_1"],
    )
    def test_random_words(self, psi):
        context = straightening_context(psi, 10)
        module = deformed_verma(psi)
        rng = make_rng(17)
        for _ in range(10):
            word = random_word(rng, 5)
            element = from_word(word, context)
            for k in range(6):
                v = basis_vector(k, module)
                assert act_element(element, v, module) == act_word(word, v, module)

    def test_weight_perturbation(self):
        psi = perturbed_colouring(slot_polynomial(W, 2), 2)
        context = straightening_context(psi, 10)
        module = deformed_verma(psi)
        word = [XPLUS, XPLUS, XMINUS, XMINUS, XMINUS]
        element = from_word(word, context)
        for k in range(5):
            v = basis_vector(k, module)
            assert act_element(element, v, module) == act_word(word, v, module)

    def test_classical_specialization(self, natural_context, q_context):
        word = [XPLUS, XPLUS, XMINUS, XMINUS]
        natural = from_word(word, natural_context)
        quantum = from_word(word, q_context)
        keys = set(natural.terms) | set(quantum.terms)
        for key in keys:
            left = natural.terms.get(key)
            right = quantum.terms.get(key)
            left0 = left.coefficient(0) if left is not None else poly_from_expr(0)
            right0 = right.coefficient(0) if right is not None else poly_from_expr(0)
            assert left0 == right0


class TestStraighteningContext:
    """Test context construction"""

    def test_missing_sequence(self):
        with pytest.raises(MissingStraightening):
            StraighteningContext(natural_colouring(0), None)

    def test_missing_cutoff(self):
        xi = sequence(0, [series_n(N), series_n(1), series_n(0)])
        with pytest.raises(CutoffUnavailable):
            StraighteningContext(natural_colouring(0), xi)

    def test_wrong_base_index(self):
        xi = sequence(1, [series_n(1), series_n(0)], cutoff=1)
        with pytest.raises(ValueError):
            StraighteningContext(natural_colouring(0), xi)

    def test_shared_per_colouring(self):
        psi = q_colouring(2)
        assert straightening_context(psi, 8) is straightening_context(psi, 8)

    def test_contexts_compare_by_colouring(self):
        assert straightening_context(q_colouring(2), 8) == straightening_context(q_colouring(2), 6)
        assert straightening_context(q_colouring(2), 8) != straightening_context(natural_colouring(2), 8)


class TestVanishing:
    """Elements with zero normal form"""

    def test_is_zero(self, natural_context):
        x = from_word([XPLUS, XMINUS], natural_context) - from_word([XMINUS, XPLUS], natural_context)
        assert not is_zero(x)
        assert is_zero(x - generator(H, 2, natural_context))

    def test_zero_element(self):
        assert is_zero(AlgebraElement(3))

    def test_weight_relation_vanishes_and_kills(self, q_context):
        x = from_word([H, XMINUS], q_context) - from_word([XMINUS, H], q_context) + generator(XMINUS, 2, q_context).scale(2)
        assert is_zero(x)
        assert kills_all_vermas(x, q_colouring(2), 6)

    @pytest.mark.parametrize("seed", range(3))
    def test_vanishing_implies_killing(self, q_context, seed):
        rng = make_rng(seed)
        x, y, z = (random_element(rng, q_context) for _ in range(3))
        difference = (x * y) * z - x * (y * z)
        assert is_zero(difference)
        assert kills_all_vermas(difference, q_colouring(2), 6)


class TestBTrivialization:
    """The image of X^+ in U_h(N) acts through psi"""

    def test_natural_is_xplus(self):
        image = b_trivialization_image(natural_colouring(2), 6)
        assert image.terms == generator(XPLUS, 2).terms

    @pytest.mark.parametrize(
        "psi",
        [q_colouring(2), perturbed_colouring(slot_polynomial(W, 2), 2)],
        ids=["q", "p_w"],
    )
    def test_acts_as_colouring(self, psi):
        module = classical_verma(2)
        image = b_trivialization_image(psi, 8)
        assert act_element(image, basis_vector(0, module), module) == zero_vector(module)
        for k in range(1, 7):
            acted = act_element(image, basis_vector(k, module), module)
            assert acted == basis_vector(k - 1, module).scale(evaluate(psi, k))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
