import pytest

from tree_actions.automorphisms import Automorphism, nielsen_pool
from tree_actions.errors import PreconditionError, UnsupportedPresentationError
from tree_actions.free_group import in_elementary_closure
from tree_actions.models.base import Verdict
from tree_actions.persistence import (
    TRIAL_COLUMNS,
    PersistenceEstimator,
    PersistenceExperiment,
    basis_element_counterexample,
    dehn_twist_contrast,
    estimate,
    generate_partner
)


@pytest.mark.parametrize('m', [1, 2, 4])
def test_partner_overlap(cayley, word, m):
    g = word('aabb')
    h = generate_partner(g, m, seed=0)
    assert str(h).startswith(str(g ** m))
    assert cayley.axis_overlap(g, h).length == m * len(g)
    assert not in_elementary_closure(h, g)


def test_partner_is_deterministic(word):
    g = word('abAB')
    assert generate_partner(g, 2, seed=5) == generate_partner(g, 2, seed=5)


def test_partner_preconditions(word, z2z3):
    with pytest.raises(PreconditionError):
        generate_partner(word('ab'), 0, seed=0)
    with pytest.raises(PreconditionError):
        generate_partner(word('abA'), 1, seed=0)
    with pytest.raises(UnsupportedPresentationError):
        generate_partner(z2z3.word('s1s2'), 1, seed=0)


@pytest.mark.parametrize('N', range(1, 6))
def test_basis_element_counterexample(f2, word, N):
    report = basis_element_counterexample(N, f2)
    assert report.verdict == Verdict.PASS
    assert report.quantities['input_overlap'] == N
    assert report.quantities['image_overlap'] == 0
    assert report.quantities['image_h'] == word('b')


def test_counterexample_needs_positive_N():
    with pytest.raises(PreconditionError):
        basis_element_counterexample(0)


def test_dehn_twist_contrast(word):
    report = dehn_twist_contrast(word('abAB'), 1, seed=0)
    assert report.verdict == Verdict.PASS
    assert report.quantities['input_overlap'] == 12
    assert report.quantities['image_translation_length'] == 4


def _experiment(word, **kwargs):
    defaults = dict(g=word('abAB'), automorphism_pool=nielsen_pool(
        word('a').presentation, 1), constants=(1, 2), max_multiple=3,
        trials=2, seed=0)
    defaults.update(kwargs)
    return PersistenceExperiment(**defaults)


def test_estimate_trial_log(word):
    result = estimate(_experiment(word))
    trials = result.trials
    assert list(trials.columns) == TRIAL_COLUMNS
    # multiples x trials x pool
    assert len(trials.index) == 3 * 2 * 8
    assert set(result.n_hat) == {1, 2}
    assert (trials.input_overlap == trials.m * 4).all()

    identity = trials[trials.automorphism == 'id']
    assert (identity.image_overlap == identity.input_overlap).all()


def test_estimate_is_deterministic(word):
    first = estimate(_experiment(word))
    second = estimate(_experiment(word))
    assert first.n_hat == second.n_hat
    assert first.trials.equals(second.trials)


def test_n_hat_is_monotone_in_C(word):
    result = estimate(_experiment(word, constants=(1, 2, 3)))
    values = [result.n_hat[c] for c in (1, 2, 3)]
    known = [v for v in values if v is not None]
    assert known == sorted(known)
    if values[0] is None:
        assert all(v is None for v in values)


def test_pairs_record_two_partners(word):
    result = estimate(_experiment(word, pairs=True, max_multiple=2))
    assert all(len(h.split()) == 2 for h in result.trials.h)
    assert any('pairs' in caveat for caveat in result.caveats)


def test_twisted_basis_element_does_not_persist(f2, word):
    pool = [Automorphism.dehn_twist(f2, n) for n in range(1, 4)]
    result = estimate(_experiment(word, g=word('a'), automorphism_pool=pool,
                                  constants=(1,), partner_generator=lambda
                                  g, m, rng: g ** m * word('b')))
    assert result.n_hat[1] is None
    assert result.failures


def test_estimate_preconditions(word):
    with pytest.raises(PreconditionError):
        estimate(_experiment(word, automorphism_pool=[]))
    with pytest.raises(PreconditionError):
        estimate(_experiment(word, g=word('1')))


def test_estimator_stats(word):
    estimator = PersistenceEstimator()
    estimator.estimate(_experiment(word))
    stats = estimator.get_stats()
    assert stats['partner_sets'] == 6
    assert stats['trials'] == 48
    assert len(estimator.get_trial_log().index) == 48


@pytest.mark.slow
def test_workers_match_serial(word):
    serial = estimate(_experiment(word))
    parallel = estimate(_experiment(word), workers=2)
    assert serial.trials.equals(parallel.trials)
