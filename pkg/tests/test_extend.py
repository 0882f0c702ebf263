"""Extendibility: norm, witnesses, refutations, probes, covariance."""

import random
from fractions import Fraction

import pytest

from exchkit.corpus import disjoint_pairs_law, dyadic_max_law, urn_without_replacement
from exchkit.errors import InputError
from exchkit.extend import (
    InfiniteOutcome,
    Verdict,
    _transport_witness,
    _witness_by_lp,
    check_extendible,
    corollary_criterion,
    covariance_bound,
    marginal_matches,
    mixture_extension,
    norm_EN,
    probe_infinite,
    staircase_mixture,
)
from exchkit.measures import marginalize, product_law
from exchkit.symmetrize import SymmetricFunction, apply_U, expectation, sup_norm
from exchkit.typespace import TypeVector

from helpers import assert_report_certified, random_law

T = TypeVector
URN = urn_without_replacement(2, 1)
SPIKE = SymmetricFunction.from_values(
    URN.alphabet,
    2,
    {T((2, 0)): Fraction(-1), T((1, 1)): Fraction(2), T((0, 2)): Fraction(-1)},
)


def test_norm_examples():
    assert norm_EN(product_law((Fraction(1, 2), Fraction(1, 2)), 2), 4) == 1
    assert norm_EN(URN, 3) == 2
    # hand witness for the value 2: E g = 2 while sup |U g| = 1
    assert expectation(URN, SPIKE) == 2
    assert sup_norm(apply_U(SPIKE, 3)) == 1
    # at N = n the norm is always 1
    rng = random.Random(5)
    for _ in range(5):
        law = random_law(rng, 3, 2)
        assert norm_EN(law, law.n) == 1


def test_norm_requires_target_at_least_n():
    with pytest.raises(InputError):
        norm_EN(URN, 1)


def test_check_extendible_urn_refuted():
    report = check_extendible(URN, 3)
    assert report.verdict is Verdict.NOT_EXTENDIBLE
    assert report.norm == 2
    assert_report_certified(URN, report)


def test_check_extendible_product_witness():
    P = product_law((Fraction(1, 3), Fraction(2, 3)), 2)
    report = check_extendible(P, 6)
    assert report.verdict is Verdict.EXTENDIBLE
    assert report.norm == 1
    assert_report_certified(P, report)


def test_lp_route_agrees_with_fast_paths():
    # exercise the witness LP directly on laws the fast paths also cover
    P = product_law((Fraction(1, 2), Fraction(1, 2)), 2)
    witness, refutation = _witness_by_lp(P, 4)
    assert refutation is None and marginal_matches(witness, P)
    witness, refutation = _witness_by_lp(URN, 3)
    assert witness is None
    assert expectation(URN, refutation) > sup_norm(apply_U(refutation, 3))


def test_transport_witness_fast_path():
    P = product_law((Fraction(1, 2), Fraction(1, 2)), 2)
    w = _transport_witness(P, 3)
    assert w is not None and marginal_matches(w, P)
    assert _transport_witness(URN, 3) is None  # signed transport


def test_staircase_mixture_detection():
    law, decomposition = dyadic_max_law(1, [1, Fraction(1, 2)])
    atoms = staircase_mixture(law)
    assert atoms is not None
    assert atoms == decomposition.atoms
    assert staircase_mixture(URN) is None
    witness = mixture_extension(atoms, 5, law.alphabet)
    assert marginal_matches(witness, law)


def test_corollary_criterion_examples():
    one = SymmetricFunction.constant(URN.alphabet, 2, Fraction(1))
    assert corollary_criterion(URN, one, 3, Fraction(1, 7))
    assert not corollary_criterion(URN, SPIKE, 3, Fraction(1, 2))  # 2 > 3/2
    P = product_law((Fraction(1, 4), Fraction(3, 4)), 2, URN.alphabet)
    for g in (one, SPIKE):
        assert corollary_criterion(P, g, 4, Fraction(1, 100))
    with pytest.raises(InputError):
        corollary_criterion(URN, one, 3, Fraction(0))


def test_probe_product_certifies_with_single_atom():
    P = product_law((Fraction(1, 2), Fraction(1, 2)), 3)
    report = probe_infinite(P, 8, 2)
    assert report.outcome is InfiniteOutcome.CERTIFIED_INFINITE
    assert report.mixture == ((Fraction(1), (Fraction(1, 2), Fraction(1, 2))),)
    assert report.grid_depth_used == 2


def test_probe_urn_refutes_at_first_target():
    report = probe_infinite(URN, 5, 2)
    assert report.outcome is InfiniteOutcome.REFUTED_AT
    assert report.failing_N == 3
    assert report.failing_report is not None
    assert_report_certified(URN, report.failing_report)


def test_probe_unknown_on_coarse_grid():
    # extendible at small N but not a mixture on the depth-1 grid, and the
    # single doubling to depth 2 still misses it: honest UNKNOWN
    P = product_law((Fraction(1, 3), Fraction(2, 3)), 2)
    report = probe_infinite(P, 3, 1)
    assert report.outcome is InfiniteOutcome.UNKNOWN
    assert report.mixture is None and report.failing_N is None
    # a grid that contains theta certifies
    assert probe_infinite(P, 3, 3).outcome is InfiniteOutcome.CERTIFIED_INFINITE


def test_probe_records_range_and_depth():
    report = probe_infinite(URN, 4, 7)
    assert (report.N_max, report.grid_depth) == (4, 7)


def test_probe_validation_and_capacity(monkeypatch):
    with pytest.raises(InputError):
        probe_infinite(URN, 1, 2)  # N_max < n
    with pytest.raises(InputError):
        probe_infinite(URN, 4, 0)  # bad grid depth
    from exchkit.errors import CapacityError

    monkeypatch.setenv("EXCHKIT_CAP", "4")
    with pytest.raises(CapacityError):
        # not a staircase law, so the probe must reach the grid search
        probe_infinite(product_law((Fraction(1, 3), Fraction(2, 3)), 2), 2, 9)


def test_values_are_immutable():
    import dataclasses

    with pytest.raises(dataclasses.FrozenInstanceError):
        URN.n = 3
    with pytest.raises(TypeError):
        URN.weights[T((2, 0))] = Fraction(1)
    with pytest.raises(dataclasses.FrozenInstanceError):
        SPIKE.m = 3


def test_covariance_examples():
    law, embedding = disjoint_pairs_law()
    bound = covariance_bound(law, embedding)
    assert bound.cov == Fraction(3, 16)
    assert bound.var == Fraction(5, 16)
    assert bound.satisfies

    P = product_law((Fraction(1, 3), Fraction(2, 3)), 3)
    pb = covariance_bound(P, {"s1": Fraction(0), "s2": Fraction(1)})
    assert pb.cov == 0 and pb.satisfies

    ub = covariance_bound(URN, {"0": Fraction(0), "1": Fraction(1)})
    assert ub.cov == Fraction(-1, 4)
    assert ub.var == Fraction(1, 4)
    assert ub.satisfies  # floor at n=2 is exactly -1/4


def test_covariance_needs_pairs():
    P = product_law((Fraction(1, 2), Fraction(1, 2)), 1)
    with pytest.raises(InputError):
        covariance_bound(P, {"s1": Fraction(0), "s2": Fraction(1)})


def test_duality_on_random_laws_small():
    rng = random.Random(23)
    for _ in range(25):
        law = random_law(rng, rng.randint(1, 3), rng.randint(1, 3))
        for N in range(law.n, 5):
            report = check_extendible(law, N)
            norm = norm_EN(law, N)
            assert (report.verdict is Verdict.EXTENDIBLE) == (norm == 1)
            assert report.norm == norm if report.verdict is Verdict.NOT_EXTENDIBLE else report.norm == 1
            assert_report_certified(law, report)


def test_monotone_extendibility_via_witness_projection():
    rng = random.Random(31)
    hits = 0
    for _ in range(40):
        law = random_law(rng, 2, 2)
        report = check_extendible(law, 5)
        if report.verdict is not Verdict.EXTENDIBLE:
            continue
        hits += 1
        for M in range(law.n, 5):
            projected = marginalize(report.witness, M)
            assert marginal_matches(projected, law)
            assert check_extendible(law, M).verdict is Verdict.EXTENDIBLE
    assert hits >= 3  # the sweep actually exercised the property


def test_norm_monotone_in_N():
    rng = random.Random(37)
    for _ in range(10):
        law = random_law(rng, 2, 2)
        norms = [norm_EN(law, N) for N in range(law.n, law.n + 5)]
        assert norms[0] == 1
        assert all(a <= b for a, b in zip(norms, norms[1:]))


def test_covariance_necessity_on_extendible_laws():
    rng = random.Random(41)
    embeddings = [
        {"s1": Fraction(0), "s2": Fraction(1)},
        {"s1": Fraction(-1), "s2": Fraction(2)},
    ]
    for _ in range(20):
        law = random_law(rng, 2, 2)
        report = check_extendible(law, 4)
        if report.verdict is Verdict.EXTENDIBLE:
            for embedding in embeddings:
                lifted = covariance_bound(report.witness, embedding)
                assert lifted.cov >= -lifted.var / (4 - 1)
