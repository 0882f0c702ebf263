"""The averaging operator: contraction, composition, kernel, adjoint."""

import random
from fractions import Fraction

import pytest

from exchkit.errors import InputError
from exchkit.measures import product_law, urn_measure
from exchkit.oracle import matrix_rank
from exchkit.symmetrize import (
    SymmetricFunction,
    apply_U,
    expectation,
    kernel_check,
    sup_norm,
)
from exchkit.typespace import Alphabet, TypeVector, enumerate_types
from exchkit.measures import urn_coefficient

from helpers import random_function

T = TypeVector
AB = Alphabet(("a", "b"))

SPIKE = SymmetricFunction.from_values(
    AB, 2, {T((2, 0)): Fraction(-1), T((1, 1)): Fraction(2), T((0, 2)): Fraction(-1)}
)


def test_apply_U_preserves_constants():
    one = SymmetricFunction.constant(AB, 2, Fraction(1))
    lifted = apply_U(one, 5)
    assert all(v == 1 for v in lifted.values.values())


def test_apply_U_hand_example():
    lifted = apply_U(SPIKE, 3)
    assert dict(lifted.values) == {
        T((0, 3)): Fraction(-1),
        T((1, 2)): Fraction(1),
        T((2, 1)): Fraction(1),
        T((3, 0)): Fraction(-1),
    }
    assert sup_norm(lifted) == 1


def test_apply_U_requires_growth():
    with pytest.raises(InputError):
        apply_U(SPIKE, 1)


def test_sup_norm_examples():
    assert sup_norm(SymmetricFunction.constant(AB, 2, Fraction(0))) == 0
    assert sup_norm(apply_U(SPIKE, 3)) == 1
    assert sup_norm(SPIKE) == 2


def test_expectation_examples():
    P = product_law((Fraction(1, 2), Fraction(1, 2)), 2, AB)
    one = SymmetricFunction.constant(AB, 2, Fraction(1))
    assert expectation(P, one) == 1
    indicator = SymmetricFunction.from_values(AB, 2, {T((1, 1)): Fraction(1)})
    assert expectation(P, indicator) == Fraction(1, 2)
    uniform_mixed = urn_measure(T((1, 1)), 2, AB)
    assert expectation(uniform_mixed, SPIKE) == 2


def test_expectation_mass_mismatch():
    P = product_law((Fraction(1, 2), Fraction(1, 2)), 3, AB)
    with pytest.raises(InputError):
        expectation(P, SPIKE)


def test_kernel_check_zero_and_nonzero():
    zero = SymmetricFunction.constant(AB, 2, Fraction(0))
    assert kernel_check(zero, 4)
    assert not kernel_check(SPIKE, 4)


@pytest.mark.parametrize("k,n", [(k, n) for k in (1, 2, 3) for n in (1, 2, 3)])
def test_kernel_trivial_on_indicators(k, n):
    alphabet = Alphabet.of_size(k)
    for N in range(n, 7):
        for mu in enumerate_types(k, n):
            g = SymmetricFunction.from_values(alphabet, n, {mu: Fraction(1)})
            assert not kernel_check(g, N)


@pytest.mark.parametrize("k,n", [(k, n) for k in (1, 2, 3) for n in (1, 2, 3)])
def test_averaging_matrix_full_column_rank(k, n):
    # exact elimination: the kernel of the operator is trivial
    mus = enumerate_types(k, n)
    for N in range(n, 7):
        matrix = [
            [urn_coefficient(nu, mu) for mu in mus] for nu in enumerate_types(k, N)
        ]
        assert matrix_rank(matrix) == len(mus)


def test_composition_contraction_monotone():
    rng = random.Random(7)
    for k in (2, 3):
        alphabet = Alphabet.of_size(k)
        for n in (1, 2, 3):
            for _ in range(5):
                g = random_function(rng, alphabet, n)
                norms = [sup_norm(apply_U(g, N)) for N in range(n, n + 7)]
                assert norms[0] == sup_norm(g)  # U at N=n is the identity here
                assert all(a >= b for a, b in zip(norms, norms[1:]))  # monotone
                assert all(v <= sup_norm(g) for v in norms)  # contraction
                for n2 in range(n, n + 5):
                    for n3 in range(n2, n + 5):
                        assert apply_U(g, n3) == apply_U(apply_U(g, n2), n3)


def test_adjoint_identity():
    rng = random.Random(11)
    for k in (2, 3):
        alphabet = Alphabet.of_size(k)
        g = random_function(rng, alphabet, 2)
        for N in (2, 3, 4):
            lifted = apply_U(g, N)
            for nu in enumerate_types(k, N):
                law = urn_measure(nu, 2, alphabet)
                assert expectation(law, g) == lifted.values[nu]


def test_sparse_construction_and_totality():
    g = SymmetricFunction.from_values(AB, 2, {T((1, 1)): Fraction(1)})
    assert g.values[T((2, 0))] == 0
    with pytest.raises(InputError):
        SymmetricFunction(AB, 2, {T((1, 1)): Fraction(1)})  # not total
    with pytest.raises(InputError):
        SymmetricFunction.from_values(AB, 2, {T((1, 1, 1)): Fraction(1)})
