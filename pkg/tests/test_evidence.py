import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seedrank.evidence import (
    DiseaseGeneMap,
    DiseaseSimilarityNetwork,
    evidence_score,
    read_disease_genes,
    read_similarity,
    top_similar_diseases,
)
from seedrank.graph import NetworkFormatError, load_network


def sim_net(pairs):
    return DiseaseSimilarityNetwork.from_edges(pairs)


def test_top_k_descending():
    sim = sim_net([("Q", "D1", 0.9), ("Q", "D2", 0.5), ("Q", "D3", 0.7)])
    assert [d for d, _ in top_similar_diseases(sim, "Q", 2)] == ["D1", "D3"]


def test_top_k_lexicographic_tie():
    sim = sim_net([("Q", "D2", 0.5), ("Q", "D1", 0.5)])
    assert [d for d, _ in top_similar_diseases(sim, "Q", 1)] == ["D1"]


def test_top_k_shortfall_warns():
    sim = sim_net([("Q", "D1", 0.5)])
    with pytest.warns(UserWarning, match="only 1"):
        assert len(top_similar_diseases(sim, "Q", 10)) == 1


def test_query_without_edges():
    sim = sim_net([("A", "B", 0.5)])
    with pytest.raises(KeyError):
        top_similar_diseases(sim, "Q", 3)


def test_duplicate_pair_rejected():
    with pytest.raises(NetworkFormatError):
        sim_net([("A", "B", 0.5), ("B", "A", 0.4)])


def net():
    return load_network([("g1", "g2", 1.0), ("g2", "g3", 1.0), ("g3", "s", 1.0)])


def test_single_disease_scores_one():
    genes = DiseaseGeneMap.from_pairs([("D1", "g1")])
    s = evidence_score(["D1"], genes, net()).values
    assert s[0] == 1 and s[1] == 0


def test_ten_diseases_upper_bound():
    top = [f"D{i}" for i in range(10)]
    genes = DiseaseGeneMap.from_pairs([(d, "g2") for d in top] + [("D0", "offnet")])
    n = net()
    s = evidence_score(top, genes, n).values
    assert s[n.index["g2"]] == 10
    assert s[n.index["g1"]] == 0


def test_seeds_zeroed_and_missing_disease_warns():
    n = net()
    genes = DiseaseGeneMap.from_pairs([("D1", "s"), ("D1", "g3")])
    with pytest.warns(UserWarning, match="D9"):
        s = evidence_score(["D1", "D9"], genes, n, seeds=[n.index["s"]]).values
    assert s[n.index["s"]] == 0 and s[n.index["g3"]] == 1


@settings(max_examples=50, deadline=None)
@given(
    st.dictionaries(st.sampled_from([f"D{i}" for i in range(6)]), st.sets(st.sampled_from(["g1", "g2", "g3", "s"]), min_size=1), min_size=1),
    st.randoms(use_true_random=False),
)
def test_bounds_monotone_order_free(assoc, rnd):
    genes = DiseaseGeneMap({d: frozenset(g) for d, g in assoc.items()})
    top = list(assoc)
    n = net()
    s = evidence_score(top, genes, n).values
    assert np.all(s >= 0) and np.all(s <= len(top)) and np.all(s == np.round(s))
    shuffled = top[:]
    rnd.shuffle(shuffled)
    np.testing.assert_array_equal(evidence_score(shuffled, genes, n).values, s)
    if len(top) > 1:
        smaller = evidence_score(top[1:], genes, n).values
        assert np.all(smaller <= s)


def test_file_readers(tmp_path):
    (tmp_path / "sim.tsv").write_text("# c\nQ\tD1\t0.5\nQ\tD2\t0.9\n")
    (tmp_path / "dg.tsv").write_text("D1\tg1\nD1\tg2\nD2\tg2\n")
    sim = read_similarity(tmp_path / "sim.tsv")
    assert [d for d, _ in top_similar_diseases(sim, "Q", 2)] == ["D2", "D1"]
    genes = read_disease_genes(tmp_path / "dg.tsv")
    assert genes.associations["D1"] == {"g1", "g2"}
    (tmp_path / "bad.tsv").write_text("Q\tD1\n")
    with pytest.raises(NetworkFormatError, match="line 1"):
        read_similarity(tmp_path / "bad.tsv")
