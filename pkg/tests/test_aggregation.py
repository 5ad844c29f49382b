import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import monte_carlo_q, sorted_uniform_samples
from seedrank.aggregation import (
    STEPS,
    FusionConfig,
    discounted_rating,
    ndos_scores,
    normalize_scores,
    order_statistics_q,
    scores_to_ranks,
    weighted_sum,
)
from seedrank.madm import WeightVector


def wv(vals):
    return WeightVector.normalized(STEPS, vals)


@pytest.mark.parametrize(
    "values,expected",
    [([2, 4, 6], [0, 0.5, 1]), ([5, 5], [0, 0]), ([0, 0.3, 1], [0, 0.3, 1])],
)
def test_normalize(values, expected):
    np.testing.assert_allclose(normalize_scores(np.array(values, dtype=float)), expected)


def test_normalize_over_candidates_only():
    v = np.array([100.0, 2, 4, 6, -50])
    np.testing.assert_allclose(normalize_scores(v, [1, 2, 3]), [0, 0.5, 1])


def test_weighted_sum_one_hot():
    rng = np.random.default_rng(1)
    scores = {s: rng.random(20) for s in STEPS}
    cands = np.arange(3, 17)
    fused = weighted_sum(scores, FusionConfig(wv([1, 0, 0, 0])), cands)
    np.testing.assert_allclose(fused, normalize_scores(scores["NP"], cands))


def test_weighted_sum_identical_steps():
    v = np.array([0.1, 0.7, 0.3, 0.9])
    fused = weighted_sum({s: v for s in STEPS}, FusionConfig(), np.arange(4))
    np.testing.assert_allclose(fused, normalize_scores(v), atol=1e-15)


def test_weighted_sum_matches_direct_summation(rng):
    table = rng.random((4, 20)) * np.array([[1], [10], [0.01], [7]])
    w = rng.random(4)
    w /= w.sum()
    cands = np.arange(20)
    fused = weighted_sum(dict(zip(STEPS, table)), FusionConfig(wv(w)), cands)
    expected = np.zeros(20)
    for k in range(4):
        row = table[k]
        expected += w[k] * (row - row.min()) / (row.max() - row.min())
    np.testing.assert_allclose(fused, expected, atol=1e-12)
    raw = weighted_sum(dict(zip(STEPS, table)), FusionConfig(wv(w), "NONE"), cands)
    np.testing.assert_allclose(raw, w @ table, atol=1e-12)


def test_weighted_sum_length_mismatch():
    with pytest.raises(ValueError):
        weighted_sum({"NP": np.ones(3), "RWR": np.ones(4), "SP": np.ones(3), "EVIDENCE": np.ones(3)}, FusionConfig(), [0])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 9), st.floats(0.0, 5.0))
def test_weighted_sum_monotone(seed, gene, bump):
    rng = np.random.default_rng(seed)
    scores = {s: rng.random(10) for s in STEPS}
    cfg = FusionConfig(wv(rng.random(4) + 0.01))
    base = weighted_sum(scores, cfg, np.arange(10))
    step = STEPS[seed % 4]
    bumped = dict(scores)
    bumped[step] = scores[step].copy()
    bumped[step][gene] += bump
    after = weighted_sum(bumped, cfg, np.arange(10))
    # raising the raw score can only raise its normalized value
    assert after[gene] >= base[gene] - 1e-12


def test_q_closed_forms():
    assert order_statistics_q([0.5]) == 0.5
    assert order_statistics_q([1, 1, 1, 1]) == 1.0
    assert order_statistics_q([0.5, 0.5]) == 0.25


def test_q_rejects_bad_input():
    with pytest.raises(ValueError):
        order_statistics_q([0.6, 0.2])
    with pytest.raises(ValueError):
        order_statistics_q([0.2, 1.2])


def test_q_matches_monte_carlo():
    rng = np.random.default_rng(3)
    samples = {n: sorted_uniform_samples(n, 200_000, rng) for n in range(1, 6)}
    for _ in range(30):
        n = int(rng.integers(1, 6))
        r = np.sort(rng.random(n))
        p, se = monte_carlo_q(samples[n], r)
        assert abs(order_statistics_q(r) - p) <= 3 * se + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=6), st.integers(0, 5), st.floats(0, 1))
def test_q_monotone(ratios, pos, delta):
    r = sorted(ratios)
    pos %= len(r)
    bigger = r.copy()
    bigger[pos] = min(1.0, bigger[pos] + delta)
    bigger.sort()
    assert order_statistics_q(bigger) >= order_statistics_q(r) - 1e-12


def test_discounted_rating_examples():
    assert discounted_rating(np.array([[1]]), [1.0]) == pytest.approx(1.0)
    assert discounted_rating(np.array([[2, 1]]), [1.0])[0] == pytest.approx(0.95)
    r = np.array([[1, 2, 3], [3, 1, 2]])
    assert discounted_rating(r, [0.5, 0.5])[0] == pytest.approx(0.5 + 0.5 * 0.9025, abs=1e-15)


def test_discounted_rating_bounds_and_ties(rng):
    m = 12
    ranks = np.vstack([rng.permutation(m) + 1 for _ in range(4)])
    s = discounted_rating(ranks, [0.1, 0.2, 0.3, 0.4])
    assert np.all((s > 0) & (s <= 1))
    # equal weights, mirrored ranks: candidates 0 and 1 tie
    mirrored = np.array([[1, 3, 2], [3, 1, 2]])
    out = discounted_rating(mirrored, [0.5, 0.5])
    assert out[0] == out[1]
    with pytest.raises(ValueError):
        discounted_rating(np.array([[0, 1]]), [1.0])


def test_scores_to_ranks_tie_key():
    np.testing.assert_array_equal(scores_to_ranks(np.array([0.5, 0.9, 0.5])), [2, 1, 3])
    np.testing.assert_array_equal(scores_to_ranks(np.array([0.5, 0.9, 0.5]), ["z", "a", "b"]), [3, 1, 2])


def test_ndos_prefers_consistently_top():
    ranks = np.array([[1, 2, 3], [1, 3, 2], [1, 2, 3]])
    q = ndos_scores(ranks)
    assert np.argmin(q) == 0
