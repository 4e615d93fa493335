import numpy as np
import pytest

from detlab import ValidationError
from detlab.checks import random_event_proposition, random_model_set, random_similarity
from detlab.modal import (
    CounterfactualVerdict,
    FiniteWorld,
    ModelSet,
    Proposition,
    SimilarityOrder,
    agree_at,
    check_determinism,
    check_futuristic_determinism,
    check_historical_determinism,
    check_strong_determinism,
    counterfactual,
    counterfactual_dependence,
    load_model_set,
    load_proposition,
    load_similarity,
    model_set_to_json,
)

from oracles import brute_counterfactual


def world(wid, labels):
    return FiniteWorld(wid, dict(enumerate(labels)))


def model(*worlds, actual=None):
    n = len(next(iter(worlds)).trajectory)
    return ModelSet(tuple(worlds), range(n), actual)


@pytest.fixture
def six_parallel():
    # six trajectories with pairwise distinct labels at every time: the
    # never-crossing picture of a deterministic, non-strong theory
    return model(*[world(f"X{i}", [f"s{i}{t}" for t in range(5)]) for i in range(6)])


@pytest.fixture
def merging_pair():
    a = world("a", ["a0", "a1", "m", "m", "m"])
    b = world("b", ["b0", "b1", "m", "m", "m"])
    return model(a, b)


@pytest.fixture
def crossing_pair():
    a = world("a", ["a0", "a1", "a2", "s", "a4"])
    b = world("b", ["b0", "b1", "b2", "s", "b4"])
    return model(a, b)


class TestAgreeAt:
    def test_reflexive(self, six_parallel):
        w = six_parallel.worlds[0]
        assert all(agree_at(w, w, t) for t in six_parallel.times)

    def test_non_crossing_pair_never_agrees(self, six_parallel):
        w, v = six_parallel.worlds[:2]
        assert not any(agree_at(w, v, t) for t in six_parallel.times)

    def test_crossing_pair_agrees_once(self, crossing_pair):
        w, v = crossing_pair.worlds
        assert agree_at(w, v, 3)
        assert [t for t in crossing_pair.times if agree_at(w, v, t)] == [3]

    def test_time_outside_domain(self, six_parallel):
        w = six_parallel.worlds[0]
        with pytest.raises(ValidationError):
            agree_at(w, w, 99)


class TestDeterminismCheckers:
    def test_six_parallel_worlds_deterministic(self, six_parallel):
        assert check_determinism(six_parallel).holds

    def test_agree_then_diverge(self):
        a = world("a", ["same", "a1"])
        b = world("b", ["same", "b1"])
        verdict = check_determinism(model(a, b))
        assert not verdict.holds
        w, v, t_agree, t_dis = verdict.counterexample
        assert {w, v} == {"a", "b"}
        assert (t_agree, t_dis) == (0, 1)

    def test_singleton_trivially_deterministic(self):
        m = model(world("only", ["x", "y", "z"]))
        assert check_determinism(m).holds

    def test_merge_is_futuristic_but_not_full(self, merging_pair):
        assert check_futuristic_determinism(merging_pair).holds
        assert not check_determinism(merging_pair).holds
        assert not check_historical_determinism(merging_pair).holds

    def test_split_fails_futuristic(self):
        a = world("a", ["m", "m", "a2"])
        b = world("b", ["m", "m", "b2"])
        m = model(a, b)
        assert not check_futuristic_determinism(m).holds
        assert check_historical_determinism(m).holds

    def test_determinism_implies_futuristic(self, six_parallel):
        assert check_futuristic_determinism(six_parallel).holds
        assert check_historical_determinism(six_parallel).holds

    def test_conjunction_equals_full_determinism(self):
        rng = np.random.default_rng(123)
        for _ in range(300):
            m = random_model_set(rng)
            full = check_determinism(m).holds
            both = (
                check_futuristic_determinism(m).holds
                and check_historical_determinism(m).holds
            )
            assert full == both


class TestStrongDeterminism:
    def test_singleton(self):
        assert check_strong_determinism(model(world("w", ["a", "b"])))

    def test_six_worlds_deterministic_but_not_strong(self, six_parallel):
        assert check_determinism(six_parallel).holds
        assert not check_strong_determinism(six_parallel)

    def test_strong_implies_deterministic_property(self):
        rng = np.random.default_rng(7)
        singletons = 0
        for _ in range(500):
            m = random_model_set(rng)
            if check_strong_determinism(m):
                singletons += 1
                assert check_determinism(m).holds
        assert singletons > 20  # the property was actually exercised


class TestCounterfactual:
    def test_vacuous_in_singleton(self):
        w = world("w", ["a", "a", "b"])
        m = model(w)
        sim = SimilarityOrder({"w": {"w": 0}})
        a = Proposition(event_pairs=frozenset({("zz", 1)}))  # false at w
        c = Proposition(event_pairs=frozenset({("a", 0)}))
        with pytest.raises(ValidationError):
            counterfactual(m, sim, a, c, "w")  # "zz" is not a label in the set
        a2 = Proposition(event_pairs=frozenset({("b", 1)}))  # b occurs, not at t=1
        assert counterfactual(m, sim, a2, c, "w") is CounterfactualVerdict.VACUOUS_TRUE

    def test_strong_centering(self):
        w1 = world("w1", ["a", "b"])
        w2 = world("w2", ["c", "d"])
        m = model(w1, w2)
        sim = SimilarityOrder({"w1": {"w1": 0, "w2": 1}, "w2": {"w2": 0, "w1": 1}})
        a = Proposition(event_pairs=frozenset({("a", 0)}))  # true at w1
        c_true = Proposition(event_pairs=frozenset({("b", 1)}))
        c_false = Proposition(event_pairs=frozenset({("d", 1)}))
        assert counterfactual(m, sim, a, c_true, "w1") is CounterfactualVerdict.TRUE
        assert counterfactual(m, sim, a, c_false, "w1") is CounterfactualVerdict.FALSE

    def test_three_world_fixture_against_oracle(self):
        w1 = world("w1", ["a", "x"])
        w2 = world("w2", ["b", "x"])
        w3 = world("w3", ["b", "y"])
        m = model(w1, w2, w3)
        sim = SimilarityOrder({
            "w1": {"w1": 0, "w2": 1, "w3": 2},
            "w2": {"w2": 0, "w1": 1, "w3": 1},
            "w3": {"w3": 0, "w2": 1, "w1": 2},
        })
        a = Proposition(event_pairs=frozenset({("b", 0)}))
        c = Proposition(event_pairs=frozenset({("x", 1)}))
        got = counterfactual(m, sim, a, c, "w1")
        assert got.value == brute_counterfactual(m, sim, a, c, "w1")
        # closest b-world from w1 is w2, which has x at t=1
        assert got is CounterfactualVerdict.TRUE

    def test_random_sets_match_brute_force(self):
        rng = np.random.default_rng(31)
        agreements = 0
        for _ in range(200):
            m = random_model_set(rng)
            sim = random_similarity(rng, m)
            a = random_event_proposition(rng, m)
            c = random_event_proposition(rng, m)
            eval_id = m.worlds[int(rng.integers(len(m.worlds)))].id
            got = counterfactual(m, sim, a, c, eval_id)
            assert got.value == brute_counterfactual(m, sim, a, c, eval_id)
            agreements += 1
        assert agreements == 200


class TestCounterfactualDependence:
    def test_singleton_pathology_for_actual_events(self):
        # the degenerate-causation pathology: any two actual events of the
        # one possible world counterfactually depend on each other, because
        # the not-A conjunct has no world to range over
        w = world("w", ["a", "b"])
        m = model(w)
        sim = SimilarityOrder({"w": {"w": 0}})
        a = Proposition(event_pairs=frozenset({("a", 0)}))  # actual event at t=0
        c = Proposition(event_pairs=frozenset({("b", 1)}))  # actual event at t=1
        dep = counterfactual_dependence(m, sim, a, c, "w")
        assert dep.depends
        assert dep.degenerate
        assert dep.a_then_c is CounterfactualVerdict.TRUE          # strong centering
        assert dep.not_a_then_not_c is CounterfactualVerdict.VACUOUS_TRUE

    def test_singleton_with_both_events_absent(self):
        # A and C both false at the world: first conjunct vacuous, second
        # true by centering, so dependence still degenerately holds
        w = world("w", ["a", "b"])
        m = model(w)
        sim = SimilarityOrder({"w": {"w": 0}})
        a = Proposition(event_pairs=frozenset({("b", 0)}))  # never happens
        c = Proposition(event_pairs=frozenset({("a", 1)}))  # never happens
        dep = counterfactual_dependence(m, sim, a, c, "w")
        assert dep.depends
        assert dep.degenerate
        assert dep.a_then_c is CounterfactualVerdict.VACUOUS_TRUE
        assert dep.not_a_then_not_c is CounterfactualVerdict.TRUE

    def test_singleton_absent_cause_of_actual_event_does_not_depend(self):
        # A false but C true at the world: strict semantics denies dependence
        # (not-A holds at the world, whose not-C is false); vacuity does not
        # spread to conjuncts whose antecedent is satisfiable
        w = world("w", ["a", "b"])
        m = model(w)
        sim = SimilarityOrder({"w": {"w": 0}})
        a = Proposition(event_pairs=frozenset({("b", 0)}))  # never happens
        c = Proposition(event_pairs=frozenset({("b", 1)}))  # actual event
        dep = counterfactual_dependence(m, sim, a, c, "w")
        assert not dep.depends
        assert dep.a_then_c is CounterfactualVerdict.VACUOUS_TRUE
        assert dep.not_a_then_not_c is CounterfactualVerdict.FALSE

    def test_dependence_false_when_not_a_world_has_c(self):
        w1 = world("w1", ["a", "c"])   # A and C here
        w2 = world("w2", ["b", "c"])   # not-A but C anyway
        m = model(w1, w2)
        sim = SimilarityOrder({"w1": {"w1": 0, "w2": 1}, "w2": {"w2": 0, "w1": 1}})
        a = Proposition(event_pairs=frozenset({("a", 0)}))
        c = Proposition(event_pairs=frozenset({("c", 1)}))
        dep = counterfactual_dependence(m, sim, a, c, "w1")
        assert not dep.depends
        assert dep.a_then_c is CounterfactualVerdict.TRUE
        assert dep.not_a_then_not_c is CounterfactualVerdict.FALSE

    def test_dependence_true_when_nearest_not_a_lacks_c(self):
        w1 = world("w1", ["a", "c"])
        w2 = world("w2", ["b", "d"])
        m = model(w1, w2)
        sim = SimilarityOrder({"w1": {"w1": 0, "w2": 1}, "w2": {"w2": 0, "w1": 1}})
        a = Proposition(event_pairs=frozenset({("a", 0)}))
        c = Proposition(event_pairs=frozenset({("c", 1)}))
        dep = counterfactual_dependence(m, sim, a, c, "w1")
        assert dep.depends
        assert not dep.degenerate


class TestValidationAndJson:
    def test_duplicate_ids_rejected(self):
        w = world("dup", ["a"])
        with pytest.raises(ValidationError):
            ModelSet((w, world("dup", ["b"])), range(1))

    def test_partial_trajectory_rejected(self):
        with pytest.raises(ValidationError):
            ModelSet((FiniteWorld("w", {0: "a"}),), range(3))

    def test_actual_must_be_member(self):
        with pytest.raises(ValidationError):
            model(world("w", ["a"]), actual="ghost")

    def test_similarity_must_be_centered(self):
        w1, w2 = world("w1", ["a"]), world("w2", ["b"])
        m = model(w1, w2)
        bad = SimilarityOrder({"w1": {"w1": 1, "w2": 0}, "w2": {"w2": 0, "w1": 1}})
        with pytest.raises(ValidationError):
            bad.validate_against(m)

    def test_roundtrip(self, six_parallel):
        doc = model_set_to_json(six_parallel)
        again = load_model_set(doc)
        assert len(again) == 6
        assert again.times == six_parallel.times
        assert check_determinism(again).holds

    def test_malformed_model_set(self):
        with pytest.raises(ValidationError):
            load_model_set({"worlds": []})
        with pytest.raises(ValidationError):
            load_model_set({"times": [3, 0], "worlds": [{"id": "w", "trajectory": {}}]})

    def test_proposition_and_similarity_loaders(self):
        p = load_proposition({"pairs": [["a", 0], ["b", 2]], "name": "spark"})
        assert p.name == "spark"
        assert ("a", 0) in p.event_pairs
        q = load_proposition({"worlds": ["w1", "w2"]})
        assert q.world_ids == {"w1", "w2"}
        sim = load_similarity({"w": {"w": 0}})
        assert sim.rank_from("w", "w") == 0
