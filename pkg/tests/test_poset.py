import itertools
import random

import pytest

from relaxedalign.errors import CycleError
from relaxedalign.poset import Cut, Poset, transitive_closure


def chain(*xs):
    return Poset.from_pairs(xs, list(zip(xs, xs[1:])))


# The six-element example poset: two three-step lifecycles where the
# second one slots entirely between the first one's start and its middle.
POSET_A = Poset.from_pairs(
    ["a1", "b1", "c1", "a2", "b2", "c2"],
    [("a1", "b2"), ("a2", "b2"), ("b2", "c2"), ("c2", "b1"), ("b1", "c1")],
)


def brute_force_extensions(p: Poset):
    return [
        seq
        for seq in itertools.permutations(sorted(p.elements))
        if all(seq.index(a) < seq.index(b) for a, b in p.order)
    ]


def test_transitive_closure_simple():
    p = transitive_closure([("a", "b"), ("b", "c")])
    assert p.order == {("a", "b"), ("b", "c"), ("a", "c")}


def test_empty_relation_incomparable():
    p = Poset.from_pairs(["a", "b"], [])
    assert p.order == frozenset()
    assert not p.comparable("a", "b")


def test_mutual_pair_raises():
    with pytest.raises(CycleError):
        transitive_closure([("a", "b"), ("b", "a")])


def test_longer_cycle_raises():
    with pytest.raises(CycleError):
        transitive_closure([("a", "b"), ("b", "c"), ("c", "a")])


def test_covering_relation_of_example_poset():
    assert POSET_A.covering_relation() == {
        ("a1", "b2"),
        ("a2", "b2"),
        ("b2", "c2"),
        ("c2", "b1"),
        ("b1", "c1"),
    }


def test_covering_relation_chain_and_antichain():
    assert chain("a", "b", "c").covering_relation() == {("a", "b"), ("b", "c")}
    antichain = Poset.from_pairs(["x", "y", "z"], [])
    assert antichain.covering_relation() == frozenset()


def test_projection_of_example_poset_is_chain():
    projected = POSET_A.project({"a1", "b1", "c1"})
    assert projected.order == {("a1", "b1"), ("b1", "c1"), ("a1", "c1")}


def test_projection_identity_and_empty():
    assert POSET_A.project(POSET_A.elements) == POSET_A
    assert POSET_A.project(set()) == Poset(frozenset())


def test_minimal_maximal():
    assert POSET_A.minimal_elements() == {"a1", "a2"}
    assert POSET_A.maximal_elements() == {"c1"}
    empty = Poset(frozenset())
    assert empty.minimal_elements() == frozenset()
    antichain = Poset.from_pairs(["x", "y"], [])
    assert antichain.minimal_elements() == {"x", "y"}
    assert antichain.maximal_elements() == {"x", "y"}


def test_linear_extensions_chain_and_antichain():
    seqs, truncated = chain("a", "b", "c").linear_extensions()
    assert seqs == [("a", "b", "c")] and not truncated
    seqs, truncated = Poset.from_pairs(["a", "b"], []).linear_extensions()
    assert sorted(seqs) == [("a", "b"), ("b", "a")] and not truncated


def test_linear_extensions_match_brute_force_on_example():
    seqs, truncated = POSET_A.linear_extensions()
    assert not truncated
    assert sorted(seqs) == sorted(brute_force_extensions(POSET_A))


def test_linear_extensions_truncation_flag():
    antichain = Poset.from_pairs(list("abcdef"), [])
    seqs, truncated = antichain.linear_extensions(limit=10)
    assert truncated and len(seqs) == 10


def test_union_of_chains():
    merged = chain("a", "b").union(chain("b", "c"))
    assert merged.order == {("a", "b"), ("b", "c"), ("a", "c")}


def test_union_cycle_raises():
    with pytest.raises(CycleError):
        chain("a", "b").union(chain("b", "a"))


def test_difference_recovers_projection():
    assert POSET_A.difference({"a2", "b2", "c2"}) == POSET_A.project({"a1", "b1", "c1"})


def test_subposet():
    sub = POSET_A.project({"a1", "b1", "c1"})
    assert sub.is_subposet(POSET_A)
    assert not chain("b1", "a1").is_subposet(POSET_A)


def test_cut_validation():
    cut = Cut.of(POSET_A, {"a1", "a2", "b2"})
    assert cut.validate_against(POSET_A)
    with pytest.raises(ValueError):
        Cut.of(POSET_A, {"b2"})  # misses a1/a2 below b2


def random_poset(rng: random.Random, size: int) -> Poset:
    names = [f"n{i}" for i in range(size)]
    pairs = set()
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < 0.3:
                pairs.add((names[i], names[j]))
    return Poset.from_pairs(names, pairs)


def test_random_posets_roundtrip_and_extensions():
    """Closure/covering round-trip, projection idempotence, and extension
    counts against the permutation filter on 1,000 random posets."""
    rng = random.Random(20240811)
    for trial in range(1000):
        size = rng.randint(0, 7)
        p = random_poset(rng, size)
        assert transitive_closure(p.covering_relation()).project(p.elements).union(
            Poset(p.elements)
        ) == p
        keep = {x for x in p.elements if rng.random() < 0.6}
        once = p.project(keep)
        assert once.project(keep) == once
        seqs, truncated = p.linear_extensions(limit=6000)
        assert not truncated
        assert sorted(seqs) == sorted(brute_force_extensions(p))


def test_respects():
    assert chain("a", "b", "c").respects(["a", "b", "c"])
    assert not chain("a", "b", "c").respects(["b", "a", "c"])
