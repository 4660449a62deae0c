import itertools
import random
from importlib import resources

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geoling.linguistic import PartitionError, build_uniform_partition
from geoling.partition_builder import (
    BagError,
    ResemblanceMatrix,
    SynonymBag,
    build_partition_from_bags,
    order_terms,
    parse_bags,
    place_apexes,
    read_bags,
    resemblance_matrix,
)

from oracles import order_oracle


def bag(label, *words):
    return SynonymBag(label, frozenset(words))


def matrix(labels, rates):
    n = len(labels)
    r = np.eye(n)
    for (a, b), v in rates.items():
        i, j = labels.index(a), labels.index(b)
        r[i, j] = r[j, i] = v
    return ResemblanceMatrix(tuple(labels), r)


def shipped_bags():
    path = resources.files("geoling.data").joinpath("distance_bags.txt")
    return read_bags(path)


# --- resemblance ----------------------------------------------------------------

def test_identical_bags():
    m = resemblance_matrix([bag("a", "x", "y"), bag("b", "y", "x")])
    assert m.rate("a", "b") == 1.0


def test_disjoint_bags():
    m = resemblance_matrix([bag("a", "x"), bag("b", "y")])
    assert m.rate("a", "b") == 0.0


def test_half_overlap():
    m = resemblance_matrix([bag("a", "a", "b", "c"), bag("b", "b", "c", "d")])
    assert m.rate("a", "b") == 0.5


def test_synonyms_are_case_folded_and_trimmed():
    m = resemblance_matrix([bag("a", " Near ", "CLOSE"), bag("b", "near", "close")])
    assert m.rate("a", "b") == 1.0


@pytest.mark.parametrize("bags, match", [
    ([bag("a", "x")], "at least 2"),
    ([bag("a", "x"), bag("a", "y")], "duplicate"),
])
def test_resemblance_errors(bags, match):
    with pytest.raises(BagError, match=match):
        resemblance_matrix(bags)


def test_empty_bag_rejected():
    with pytest.raises(BagError, match="empty"):
        SynonymBag("a", frozenset({" "}))


words = st.sets(st.sampled_from("abcdefghij"), min_size=1, max_size=6)


@given(st.lists(words, min_size=2, max_size=6))
def test_resemblance_symmetric_unit_diagonal(sets):
    m = resemblance_matrix([SynonymBag(f"l{i}", frozenset(s)) for i, s in enumerate(sets)])
    np.testing.assert_array_equal(m.r, m.r.T)
    np.testing.assert_array_equal(np.diag(m.r), 1.0)
    assert np.all((m.r >= 0) & (m.r <= 1))


# --- ordering -------------------------------------------------------------------

def test_order_two_labels():
    m = matrix(["hi", "lo"], {("hi", "lo"): 0.3})
    assert order_terms(m, "lo", "hi") == ["lo", "hi"]


def test_order_three_labels():
    m = matrix(["A", "B", "C"], {("A", "B"): 0.6, ("B", "C"): 0.5, ("A", "C"): 0.1})
    assert order_terms(m, "A", "C") == ["A", "B", "C"]


def test_order_ties_are_lexicographic():
    labels = ["D", "C", "B", "A"]
    m = matrix(labels, {pair: 0.4 for pair in itertools.combinations(labels, 2)})
    assert order_terms(m, "A", "D") == ["A", "B", "C", "D"]


def test_order_errors():
    m = matrix(["a", "b"], {("a", "b"): 0.1})
    with pytest.raises(BagError, match="anchor"):
        order_terms(m, "a", "zz")
    big = ResemblanceMatrix(tuple(f"l{i}" for i in range(11)), np.eye(11))
    with pytest.raises(BagError, match="cap"):
        order_terms(big, "l0", "l1")


def _random_matrix(rng, n, quantize):
    r = rng.random((n, n))
    if quantize:
        r = np.round(r * 4) / 4  # forces ties
    r = np.triu(r, 1)
    r = r + r.T
    np.fill_diagonal(r, 1.0)
    return ResemblanceMatrix(tuple(f"t{i}" for i in range(n)), r)


@pytest.mark.parametrize("seed", range(40))
def test_order_matches_exhaustive_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    m = _random_matrix(rng, n, quantize=seed % 2 == 0)
    low, high = rng.choice(n, 2, replace=False)
    low, high = m.labels[low], m.labels[high]
    assert order_terms(m, low, high) == order_oracle(list(m.labels), m.r, low, high)


# --- apex placement -------------------------------------------------------------

def test_equal_distances_give_uniform_apexes():
    labels = ["a", "b", "c", "d"]
    m = matrix(labels, {("a", "b"): 0.3, ("b", "c"): 0.3, ("c", "d"): 0.3})
    assert place_apexes(m, labels, 0.0, 1200.0) == pytest.approx([0, 400, 800, 1200])


def test_unbalanced_spacing():
    labels = ["a", "b", "c"]
    m = matrix(labels, {("a", "b"): 0.8, ("b", "c"): 0.4})
    apexes = place_apexes(m, labels, 0.0, 1200.0)
    assert apexes == pytest.approx([0.0, 300.0, 1200.0])
    assert apexes[0] == 0.0 and apexes[-1] == 1200.0


@given(st.lists(st.floats(0.0, 0.95), min_size=1, max_size=7),
       st.floats(0.1, 1.0), st.floats(-500, 500), st.floats(1, 1000))
def test_scaling_distances_is_a_no_op(rates, scale, lo, span):
    labels = [f"t{i}" for i in range(len(rates) + 1)]
    base = matrix(labels, {(a, b): r for (a, b), r in zip(zip(labels, labels[1:]), rates)})
    # d' = scale * d  <=>  r' = 1 - scale * (1 - r)
    scaled = matrix(labels, {(a, b): 1 - scale * (1 - r)
                             for (a, b), r in zip(zip(labels, labels[1:]), rates)})
    hi = lo + span
    a1 = place_apexes(base, labels, lo, hi)
    a2 = place_apexes(scaled, labels, lo, hi)
    assert a1 == pytest.approx(a2, rel=1e-9, abs=1e-9 * span)
    assert a1[0] == lo and a1[-1] == hi
    assert all(x < y for x, y in zip(a1, a1[1:]))


def test_zero_distance_is_degenerate():
    m = matrix(["a", "b"], {("a", "b"): 1.0})
    with pytest.raises(BagError, match="degenerate"):
        place_apexes(m, ["a", "b"], 0.0, 1.0)


# --- pipeline -------------------------------------------------------------------

def test_equal_resemblance_bags_give_uniform_partition():
    bags = [bag("lo", "x", "s"), bag("mid", "s", "t"), bag("hi", "t", "x")]
    p = build_partition_from_bags(bags, 0.0, 120.0, "lo", "hi")
    assert p.apexes == pytest.approx(build_uniform_partition(["lo", "mid", "hi"], 0, 120).apexes)


def test_engineered_bags_reproduce_distance_apexes():
    p = build_partition_from_bags(shipped_bags(), 0.0, 1200.0, "InTheCenter", "OutOfRoute")
    assert p.labels == ("InTheCenter", "VeryCloseTo", "Near", "Far", "OutOfRoute")
    assert p.apexes == pytest.approx([0, 200, 400, 700, 1200], abs=1e-9)


def test_engineered_bags_found_by_search():
    # brute force: over small vocabularies, find bags whose neighbour distances
    # are proportional to (200, 200, 300, 500) and whose optimal order is the chain
    target = np.array([200, 200, 300, 500]) / 1200
    vocab = "abcdefg"
    subsets = [frozenset(c) for k in (2, 3, 4) for c in itertools.combinations(vocab, k)]
    rng = random.Random(3)
    found = None
    for _ in range(20000):
        sets = [rng.choice(subsets) for _ in range(5)]
        bags = [SynonymBag(f"L{i}", s) for i, s in enumerate(sets)]
        try:
            m = resemblance_matrix(bags)
        except BagError:
            continue
        d = np.array([1 - m.r[i, i + 1] for i in range(4)])
        if d.min() <= 0 or not np.allclose(d / d.sum(), target):
            continue
        if order_terms(m, "L0", "L4") == ["L0", "L1", "L2", "L3", "L4"]:
            found = bags
            break
    assert found is not None
    p = build_partition_from_bags(found, 0.0, 1200.0, "L0", "L4")
    assert p.apexes == pytest.approx([0, 200, 400, 700, 1200], abs=1e-9)


def test_two_bags_span_the_domain():
    p = build_partition_from_bags([bag("a", "x", "y"), bag("b", "y", "z")], -5.0, 5.0, "a", "b")
    assert p.apexes == (-5.0, 5.0)


def test_pipeline_is_independent_of_input_order():
    bags = shipped_bags()
    ref = build_partition_from_bags(bags, 0.0, 1200.0, "InTheCenter", "OutOfRoute")
    for perm in itertools.permutations(bags):
        assert build_partition_from_bags(list(perm), 0.0, 1200.0, "InTheCenter", "OutOfRoute") == ref


def test_pipeline_propagates_coverage_rejection():
    # r = 0.9, 0.9, 0 between neighbours: the last gap takes 10/12 of the span,
    # beyond twice the reference width of 1/3
    bags = [bag("a", *"123456789"), bag("b", *"123456789x"), bag("c", *"23456789x"),
            bag("d", "z")]
    with pytest.raises(PartitionError, match="coverage"):
        build_partition_from_bags(bags, 0.0, 1.0, "a", "d")


def test_parse_bags_format():
    bags = parse_bags(["# comment", "", "Near: close, Nearby ,  adjacent", "Far: remote"])
    assert [b.label for b in bags] == ["Near", "Far"]
    assert bags[0].synonyms == {"close", "nearby", "adjacent"}
    with pytest.raises(BagError, match="line 1"):
        parse_bags(["no colon here"])
