import random
from fractions import Fraction

import pytest

from advrisk.errors import TooLarge
from advrisk.measure import DiscreteMeasure, min_overlap
from advrisk.metric import grid_1d, grid_2d, is_midpoint_complete
from advrisk.optimal import optimal_risk, optimal_risk_bruteforce
from advrisk.risk import GameInstance, risk_expansion

G3 = grid_1d(3)
G4 = grid_1d(4)


def dirac(space, i):
    return DiscreteMeasure.dirac(space, i)


def _random_probability(rng, space):
    weights = [rng.randint(0, 5) for _ in range(space.n)]
    if not any(weights):
        weights[0] = 1
    total = sum(weights)
    return DiscreteMeasure(space, tuple(Fraction(w, total) for w in weights))


def _random_instance(rng, t_choices=(1, 2, Fraction(7, 2)), eps_choices=(0, 1, 2)):
    space = rng.choice(
        (grid_1d(rng.randint(2, 6)), grid_2d(2, rng.randint(1, 3), rng.choice(("l1", "linf"))))
    )
    return GameInstance(
        space,
        _random_probability(rng, space),
        _random_probability(rng, space),
        rng.choice(t_choices),
        rng.choice(eps_choices),
    )


class TestExamples:
    def test_separable_pair(self):
        inst = GameInstance(G4, dirac(G4, 0), dirac(G4, 3), 1, 1)
        report = optimal_risk(inst)
        assert report.value == 0
        assert report.witness.indices() == (2, 3)
        assert report.dual_set.indices() == (3,)
        assert report.midpoint_complete

    def test_adjacent_pair(self):
        inst = GameInstance(G3, dirac(G3, 0), dirac(G3, 2), 1, 1)
        assert optimal_risk(inst).value == Fraction(1, 2)

    def test_unequal_priors(self):
        inst = GameInstance(G3, dirac(G3, 0), dirac(G3, 2), 2, 1)
        assert optimal_risk(inst).value == Fraction(1, 3)

    def test_prior_below_one_swaps(self):
        inst = GameInstance(G3, dirac(G3, 0), dirac(G3, 2), Fraction(1, 2), 1)
        report = optimal_risk(inst)
        assert report.value == Fraction(1, 3)
        # witness must achieve the value on the original orientation
        assert risk_expansion(inst, report.witness) == report.value


class TestBruteforce:
    def test_huge_budget_floors_at_trivial_classifier(self):
        inst = GameInstance(G3, dirac(G3, 0), dirac(G3, 2), 2, 10)
        value, argmin = optimal_risk_bruteforce(inst)
        assert value == Fraction(1, 3)  # min(T,1)/(T+1) at A = empty
        assert argmin.indices() == ()

    def test_adjacent_pair(self):
        inst = GameInstance(G3, dirac(G3, 0), dirac(G3, 2), 1, 1)
        value, argmin = optimal_risk_bruteforce(inst)
        assert value == Fraction(1, 2)
        assert argmin.indices() == ()

    def test_identical_classes(self):
        rng = random.Random(1)
        p = _random_probability(rng, G4)
        inst = GameInstance(G4, p, p, 1, 1)
        value, _ = optimal_risk_bruteforce(inst)
        assert value == Fraction(1, 2)

    def test_size_guard(self):
        big = grid_1d(21)
        inst = GameInstance(big, dirac(big, 0), dirac(big, 20), 1, 1)
        with pytest.raises(TooLarge):
            optimal_risk_bruteforce(inst)


class TestFormulaAgainstBruteforce:
    def test_complete_instances_agree_exactly(self):
        rng = random.Random(7)
        seen = 0
        while seen < 60:
            inst = _random_instance(rng)
            if not is_midpoint_complete(inst.space, inst.eps).complete:
                continue
            seen += 1
            report = optimal_risk(inst)
            brute_value, _ = optimal_risk_bruteforce(inst)
            assert report.value == brute_value
            assert risk_expansion(inst, report.witness) == report.value
            assert report.midpoint_complete

    def test_bayes_risk_at_zero_budget(self):
        rng = random.Random(11)
        for _ in range(20):
            inst = _random_instance(rng, eps_choices=(0,))
            report = optimal_risk(inst)
            t = inst.prior_ratio
            bayes = min_overlap(inst.p0.scaled(t), inst.p1) / (Fraction(t) + 1)
            assert report.value == bayes

    def test_monotone_in_eps(self):
        rng = random.Random(13)
        for _ in range(15):
            space = grid_1d(rng.randint(2, 6))
            p0, p1 = _random_probability(rng, space), _random_probability(rng, space)
            t = rng.choice((1, 2))
            values = [
                optimal_risk(GameInstance(space, p0, p1, t, e)).value for e in (0, 1, 2, 3)
            ]
            assert all(a <= b for a, b in zip(values, values[1:]))
            assert all(0 <= v <= 1 for v in values)

    def test_non_complete_reports_both_numbers(self):
        inst = GameInstance(G4, dirac(G4, 0), dirac(G4, 3), 1, Fraction(3, 2))
        report = optimal_risk(inst)
        assert not report.midpoint_complete
        assert report.mode_used == "both"
        assert report.value == Fraction(1, 2)  # transport formula
        assert report.value_bruteforce == 0  # true exhaustive minimum
        assert report.agreement is False

    def test_witness_never_beats_formula(self):
        # risk(witness) <= formula value on every instance, complete or not
        rng = random.Random(17)
        for _ in range(40):
            inst = _random_instance(rng, eps_choices=(0, 1, Fraction(3, 2), Fraction(5, 2)))
            report = optimal_risk(inst)
            assert risk_expansion(inst, report.witness) <= report.value
            if report.value_bruteforce is not None:
                assert report.value_bruteforce <= report.value
