import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advrisk.errors import EmptySpace, NonMetric
from advrisk.metric import (
    DecisionRegion,
    ball_masks,
    build_space,
    contract,
    expand,
    expansion_table,
    grid_1d,
    grid_2d,
    is_midpoint_complete,
    mask_expand,
    midpoint,
    region_from_mask,
    space_from_matrix,
    space_from_points,
)


def region(space, *members):
    return DecisionRegion(space, frozenset(members))


class TestBuilders:
    def test_grid_1d_distances(self):
        g = grid_1d(3)
        assert g.dist[0][2] == 2
        assert g.labels == ("0", "1", "2")

    def test_matrix_two_points(self):
        s = space_from_matrix([[0, 1], [1, 0]])
        assert s.n == 2 and s.is_exact

    def test_matrix_asymmetry_rejected(self):
        with pytest.raises(NonMetric) as info:
            space_from_matrix([[0, 3], [1, 0]])
        assert info.value.axiom == "symmetry"
        assert info.value.where == (0, 1)

    def test_matrix_triangle_rejected(self):
        with pytest.raises(NonMetric) as info:
            space_from_matrix([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        assert info.value.axiom == "triangle"

    def test_matrix_diagonal_rejected(self):
        with pytest.raises(NonMetric):
            space_from_matrix([[1]])

    def test_empty_rejected(self):
        with pytest.raises(EmptySpace):
            space_from_matrix([])
        with pytest.raises(EmptySpace):
            grid_1d(0)

    def test_grid_2d_l1_linf(self):
        l1 = grid_2d(2, 2, "l1")
        linf = grid_2d(2, 2, "linf")
        # corner to corner: (0,0) -> (1,1)
        assert l1.dist[0][3] == 2
        assert linf.dist[0][3] == 1
        assert l1.labels[3] == "(1,1)"

    def test_grid_2d_l2_is_float(self):
        g = grid_2d(2, 2, "l2")
        assert g.tol > 0
        assert abs(g.dist[0][3] - 2 ** 0.5) < 1e-12

    def test_points_l1_exact(self):
        s = space_from_points([(0, 0), (Fraction(1, 2), 1)], p=1)
        assert s.is_exact
        assert s.dist[0][1] == Fraction(3, 2)

    def test_points_linf(self):
        s = space_from_points([(0, 0), (3, 1)], p="inf")
        assert s.dist[0][1] == 3

    def test_build_space_dispatch(self):
        assert build_space({"kind": "grid1d", "n": 4}).n == 4
        assert build_space({"kind": "grid2d", "width": 2, "height": 3}).n == 6
        assert build_space({"kind": "matrix", "dist": [[0, 1], [1, 0]]}).n == 2
        assert build_space({"kind": "points", "coords": [[0], [2]], "p": 1}).n == 2
        with pytest.raises(ValueError):
            build_space({"kind": "nope"})


class TestExpansion:
    def test_expand_unit_ball(self):
        g = grid_1d(3)
        assert expand(region(g, 1), 1).members == {0, 1, 2}

    def test_expand_empty(self):
        g = grid_1d(3)
        assert expand(DecisionRegion.empty(g), 5).members == set()

    def test_expand_two_seeds(self):
        g = grid_1d(4)
        assert expand(region(g, 0, 3), 1).members == {0, 1, 2, 3}

    def test_expand_zero_identity(self):
        g = grid_1d(5)
        r = region(g, 1, 3)
        assert expand(r, 0).members == r.members

    def test_contract_full(self):
        g = grid_1d(3)
        r = DecisionRegion.full(g)
        assert contract(r, 1).members == {0, 1, 2}

    def test_contract_examples(self):
        g = grid_1d(4)
        assert contract(region(g, 1, 2, 3), 1).members == {2, 3}
        g3 = grid_1d(3)
        assert contract(region(g3, 1), 1).members == set()

    def test_negative_radius_rejected(self):
        g = grid_1d(3)
        with pytest.raises(ValueError):
            expand(region(g, 1), -1)


class TestMidpoint:
    def test_exact_midpoint(self):
        g = grid_1d(3)
        assert midpoint(g, 0, 2) == (1, 1)

    def test_same_point(self):
        g = grid_1d(3)
        assert midpoint(g, 1, 1) == (1, 0)

    def test_tie_breaks_low(self):
        g = grid_1d(4)
        assert midpoint(g, 0, 3) == (1, 2)

    def test_complete_integer_grid(self):
        assert is_midpoint_complete(grid_1d(4), 1).complete

    def test_incomplete_at_half_steps(self):
        report = is_midpoint_complete(grid_1d(4), Fraction(3, 2))
        assert not report.complete
        assert report.witness == (0, 3)
        assert report.radius_achieved == 2

    def test_eps_zero_always_complete(self):
        s = space_from_matrix([[0, 5, 9], [5, 0, 5], [9, 5, 0]])
        assert is_midpoint_complete(s, 0).complete

    def test_report_consistency_guard(self):
        from advrisk.metric import MidpointReport

        with pytest.raises(ValueError):
            MidpointReport(True, (0, 1), 2)


class TestMasks:
    def test_ball_masks_match_expand(self):
        g = grid_1d(5)
        masks = ball_masks(g, 2)
        for mask in range(1 << 5):
            expanded = expand(region_from_mask(g, mask), 2)
            assert mask_expand(masks, mask) == sum(1 << i for i in expanded.members)

    def test_expansion_table(self):
        g = grid_2d(2, 2, "linf")
        table = expansion_table(g, 1)
        for mask in range(1 << 4):
            expanded = expand(region_from_mask(g, mask), 1)
            assert table[mask] == sum(1 << i for i in expanded.members)


# random spaces for property tests: shortest-path closure of random weights
def _random_space(rng, n):
    w = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = rng.randint(1, 9)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if i != j and w[i][k] + w[k][j] < w[i][j]:
                    w[i][j] = w[i][k] + w[k][j]
    return space_from_matrix(w)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_expansion_properties_random(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    n = data.draw(st.integers(2, 7))
    space = _random_space(rng, n)
    members_a = data.draw(st.sets(st.integers(0, n - 1)))
    members_b = data.draw(st.sets(st.integers(0, n - 1)))
    a = DecisionRegion(space, frozenset(members_a))
    b = DecisionRegion(space, frozenset(members_b))
    e1 = data.draw(st.integers(0, 6))
    e2 = data.draw(st.integers(0, 6))
    lo, hi = min(e1, e2), max(e1, e2)

    # monotone in the radius and in the region
    assert expand(a, lo).members <= expand(a, hi).members
    if a.members <= b.members:
        assert expand(a, e1).members <= expand(b, e1).members

    # union / intersection algebra
    union = DecisionRegion(space, a.members | b.members)
    inter = DecisionRegion(space, a.members & b.members)
    assert expand(union, e1).members == expand(a, e1).members | expand(b, e1).members
    assert expand(inter, e1).members <= expand(a, e1).members & expand(b, e1).members

    # erosion sandwich
    assert expand(contract(a, e1), e1).members <= a.members
    assert a.members <= contract(expand(a, e1), e1).members


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_nested_expansion_bound_random(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    n = data.draw(st.integers(2, 7))
    space = _random_space(rng, n)
    a = DecisionRegion(space, frozenset(data.draw(st.sets(st.integers(0, n - 1)))))
    e1 = Fraction(data.draw(st.integers(2, 12)), 2)
    e2 = e1 * Fraction(data.draw(st.integers(1, 3)), 4)
    delta = (e1 - e2) * Fraction(1, data.draw(st.integers(2, 5)))
    small = expand(a, e1 - e2 - delta)
    target = contract(expand(a, e1), e2)
    assert small.members <= target.members


def test_indicator_identity_exhaustive():
    space = grid_2d(2, 3, "l1")
    n = space.n
    for eps in (0, 1, 2):
        masks = ball_masks(space, eps)
        for mask in range(1 << n):
            expanded = expand(region_from_mask(space, mask), eps)
            for x in range(n):
                ball_hit = bool(masks[x] & mask)
                assert (x in expanded.members) == ball_hit


def test_midpoint_completeness_matches_double_expansion():
    # complete iff expand(A, 2e) <= expand(expand(A, e), e) for every A
    cases = [
        (grid_1d(5), 1),
        (grid_1d(5), Fraction(3, 2)),
        (grid_1d(10), 2),
        (grid_1d(10), Fraction(5, 2)),
        (grid_2d(2, 3, "l1"), 1),
        (space_from_matrix([[0, 3, 3], [3, 0, 3], [3, 3, 0]]), Fraction(3, 2)),
    ]
    for space, eps in cases:
        complete = is_midpoint_complete(space, eps).complete
        holds = True
        for mask in range(1 << space.n):
            r = region_from_mask(space, mask)
            direct = expand(r, 2 * eps)
            doubled = expand(expand(r, eps), eps)
            if not direct.members <= doubled.members:
                holds = False
                break
        assert complete == holds


def test_space_equality_and_region_validation():
    g1, g2 = grid_1d(3), grid_1d(3)
    assert g1 == g2
    with pytest.raises(ValueError):
        DecisionRegion(g1, frozenset({3}))
    r = region(g1, 0, 2)
    assert r.complement().members == {1}
    assert r.indices() == (0, 2)
    assert len(r) == 2 and 0 in r
