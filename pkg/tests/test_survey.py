from artifact.randgen import sub_seed, trial_rng
from artifact.survey import survey
from artifact.weightpoly import is_in_pi


def test_n5_interior_is_always_full_rank():
    rep = survey(5, 60, seed=1)
    assert rep.histogram == {4: 60}


def test_n6_has_trivial_and_intermediate_ranks():
    rep = survey(6, 200, seed=20190521)
    assert 0 in rep.histogram
    assert any(0 < k < 5 for k in rep.histogram)
    assert set(rep.histogram) <= set(range(6))
    assert sum(rep.histogram.values()) == 200
    for A in rep.representatives.values():
        assert is_in_pi(A, strict=True)


def test_survey_is_deterministic():
    assert survey(6, 25, 4).to_json() == survey(6, 25, 4).to_json()


def test_representatives_replay_from_sub_seed():
    from artifact.eltrans import admissible_group
    rep = survey(6, 50, 7)
    for k, s in rep.sub_seeds.items():
        assert admissible_group(rep.representatives[k]).rank == k
        assert s in {sub_seed(7, t) for t in range(50)}


def test_trial_streams_are_independent_of_order():
    a = trial_rng(3, 10)[1].integers(0, 1 << 30, 5).tolist()
    trial_rng(3, 9)[1].integers(0, 10)
    b = trial_rng(3, 10)[1].integers(0, 1 << 30, 5).tolist()
    assert a == b
