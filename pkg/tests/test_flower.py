"""Petal composition, mode calculus, and cross-petal separation."""

import pytest

from seqent.construct import build_log_m, minimal_schedule
from seqent.errors import InvalidConfig
from seqent.flower import (
    MODE_ACTIVE,
    MODE_COLLAPSED,
    MODE_FROZEN,
    PetalSystem,
    Value,
    compose,
    cross_petal_check,
    parse_value,
    value_calculus,
)


@pytest.fixture(scope="module")
def petals():
    p2 = PetalSystem("p2", Value.log(2), build_log_m(2, 2, minimal_schedule(2, 2)))
    p3 = PetalSystem("p3", Value.log(3), build_log_m(3, 2, minimal_schedule(3, 2)))
    return p2, p3


class TestValue:
    def test_ordering(self):
        assert Value.zero().sort_key < Value.log(2).sort_key
        assert Value.log(2).sort_key < Value.log(3).sort_key
        assert Value.log(99).sort_key < Value.infinity().sort_key

    def test_render_and_parse(self):
        for v in (Value.zero(), Value.log(2), Value.log(7), Value.infinity()):
            assert parse_value(v.render()) == v
        assert parse_value("inf") == Value.infinity()

    def test_bad_token_rejected(self):
        with pytest.raises(ValueError):
            parse_value("log")


class TestPetalValidation:
    def test_declared_value_must_match_trajectory(self):
        traj = build_log_m(2, 1, minimal_schedule(2, 1))
        with pytest.raises(InvalidConfig):
            PetalSystem("bad", Value.log(3), traj)

    def test_declared_only_petal_is_fine(self):
        p = PetalSystem("abstract", Value.log(7))
        assert p.trajectory is None


class TestCompose:
    def test_duplicate_ids_rejected(self, petals):
        p2, _ = petals
        with pytest.raises(InvalidConfig):
            compose([p2, p2])

    def test_unknown_mode_rejected(self, petals):
        p2, p3 = petals
        with pytest.raises(InvalidConfig):
            compose([p2, p3], {"p2": "melted"})

    def test_collapse_needs_active_target(self, petals):
        p2, p3 = petals
        with pytest.raises(InvalidConfig):
            compose([p2, p3], {"p2": MODE_COLLAPSED}, {"p2": "p9"})
        with pytest.raises(InvalidConfig):
            compose([p2, p3],
                    {"p2": MODE_COLLAPSED, "p3": MODE_FROZEN},
                    {"p2": "p3"})

    def test_non_collapsed_cannot_name_target(self, petals):
        p2, p3 = petals
        with pytest.raises(InvalidConfig):
            compose([p2, p3], {}, {"p2": "p3"})

    def test_single_petal_composite(self, petals):
        p2, _ = petals
        comp = compose([p2])
        assert value_calculus(comp) == Value.log(2)


class TestValueCalculus:
    def test_active_pair_takes_the_larger_base(self, petals):
        comp = compose(list(petals))
        assert value_calculus(comp) == Value.log(3)

    def test_all_frozen_is_zero(self, petals):
        p2, p3 = petals
        comp = compose([p2, p3], {"p2": MODE_FROZEN, "p3": MODE_FROZEN})
        assert value_calculus(comp) == Value.zero()

    def test_freezing_the_top_petal_lowers_the_value(self, petals):
        p2, p3 = petals
        comp = compose([p2, p3], {"p3": MODE_FROZEN})
        assert value_calculus(comp) == Value.log(2)

    def test_collapsing_never_increases_the_value(self, petals):
        p2, p3 = petals
        full = value_calculus(compose([p2, p3]))
        collapsed = value_calculus(
            compose([p2, p3], {"p3": MODE_COLLAPSED}, {"p3": "p2"}))
        assert collapsed.sort_key <= full.sort_key

    def test_unbounded_family_tops_out(self, petals):
        comp = compose(list(petals), unbounded_family=True)
        assert value_calculus(comp) == Value.infinity()

    def test_unbounded_family_with_nothing_active_is_zero(self, petals):
        p2, p3 = petals
        comp = compose([p2, p3], {"p2": MODE_FROZEN, "p3": MODE_FROZEN},
                       unbounded_family=True)
        assert value_calculus(comp) == Value.zero()


class TestCrossPetalCheck:
    def test_no_cross_pairs_and_in_petal_evidence(self, petals):
        comp = compose(list(petals))
        rep = cross_petal_check(comp)
        assert rep.passed, rep.counterexample
        assert len(rep.certificates) == 2
        for cert in rep.certificates:
            assert cert.died_level == 2
            assert cert.frontier_sizes == (1, 0)
        joined = "\n".join(rep.details)
        assert "p2: in-petal pair independent at difference 7" in joined
        assert "p3: in-petal pair independent at difference 9" in joined

    def test_needs_two_built_active_petals(self, petals):
        p2, _ = petals
        with pytest.raises(InvalidConfig):
            cross_petal_check(compose([p2]))

    def test_frozen_petals_do_not_count(self, petals):
        p2, p3 = petals
        comp = compose([p2, p3], {"p3": MODE_FROZEN})
        with pytest.raises(InvalidConfig):
            cross_petal_check(comp)
