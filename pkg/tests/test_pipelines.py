import itertools
import math
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from fairfan.measures import DiscreteMeasure, MeasureFamily, evaluate_matrix, random_family
from fairfan.pipelines import (
    NU_MEASURE,
    POINT_MEASURE,
    PipelineError,
    ScopeError,
    alpha_ratio,
    build_nu,
    claim_extremal,
    claim_threshold,
    equal_total_sums,
    epsilon_bound,
    fraction_pipeline,
    pigeonhole_indices,
    plan_alpha_groups,
    plan_epsilon_groups,
    point_measure,
    split_quotas,
    theorem5_pipeline,
)

unit = st.fractions(min_value=0, max_value=1, max_denominator=12)


def test_claim_examples():
    assert pigeonhole_indices([Q(1), Q(1), Q(1, 2)], 2, Q(1, 2)) == [0, 1]
    assert pigeonhole_indices([0, 0, 0], 1, Q(1, 3)) is None
    xs = [Q(1, 5), Q(3, 5), Q(1, 5)]
    assert xs[pigeonhole_indices(xs, 1, Q(1, 3))[0]] >= Q(1, 3)
    with pytest.raises(PipelineError):
        pigeonhole_indices([Q(2)], 1, Q(1, 2))


@given(st.lists(unit, min_size=1, max_size=7), st.data())
@settings(max_examples=300, deadline=None)
def test_claim_against_counting_oracle(xs, data):
    r = data.draw(st.integers(1, len(xs)))
    eps = data.draw(unit)
    got = pigeonhole_indices(xs, r, eps)
    holds = sum(xs) >= claim_threshold(len(xs), r, eps)
    assert (got is not None) == holds
    if holds:
        assert sum(1 for x in xs if x >= eps) >= r
        assert len(got) == r and all(xs[i] >= eps for i in got)


@given(st.integers(1, 9), st.data())
@settings(max_examples=100, deadline=None)
def test_extremal_vector_falls_short(m, data):
    r = data.draw(st.integers(1, m))
    eps = data.draw(st.fractions(min_value=Q(1, 50), max_value=1, max_denominator=50))
    below = eps * data.draw(st.fractions(min_value=0, max_value=Q(49, 50), max_denominator=50))
    xs = claim_extremal(m, r, eps, below)
    assert sum(xs) < claim_threshold(m, r, eps)
    assert sum(1 for x in xs if x >= eps) == r - 1


def test_aggregate_examples():
    a = DiscreteMeasure((((0, 0), 2),), Q(1, 4), "a")
    b = DiscreteMeasure((((1, 0), 1), ((2, 0), 4)), Q(1, 4), "b")
    fam = MeasureFamily((a, b), 2)
    assert build_nu(fam, [1]).total == 1
    assert build_nu(fam, [0, 1]).total == 2
    assert build_nu(fam, [0, 1], normalized=False).total == 7
    v = point_measure(fam, [0, 1])
    assert v.total == 2 and v.result.atoms[1][0] == (2, 0)
    assert v.result.label not in ("a", "b")


def test_nu_total_for_coverage_setup():
    n, c, d = 4, 3, 2
    m = n * (c - d) + d
    fam = random_family(random.Random(0), d, m)
    assert build_nu(fam, range(d - 1, m)).total == n * (c - d) + 1


def coverage_oracle(fam, part, i):
    """Closed coverage of region i by direct ball-region tests."""
    return sum(
        1 for mu in fam.measures if any(part.regions[i].meets_open_ball(p, mu.bump_radius) for p, _ in mu.atoms)
    )


@pytest.mark.parametrize("proof", [NU_MEASURE, POINT_MEASURE])
@pytest.mark.parametrize("n,c", [(2, 2), (2, 3), (2, 4), (4, 2), (4, 3), (4, 4)])
def test_coverage_pipeline(proof, n, c):
    m = n * (c - 2) + 2
    fam = random_family(random.Random(100 * n + c), 2, m)
    part, rep = theorem5_pipeline(fam, n, c, proof)
    assert rep.certified, rep.problems
    first = fam.measures[0]
    mat = evaluate_matrix(fam, part)
    assert list(mat.entries[0]) == [first.total / n] * n
    assert all(coverage_oracle(fam, part, i) >= c for i in range(n))
    if proof == NU_MEASURE:
        assert rep.auxiliary == [Q(n * (c - 2) + 1, n)] * n


def test_small_coverage_example():
    fam = random_family(random.Random(9), 2, 4)
    part, rep = theorem5_pipeline(fam, 2, 3, NU_MEASURE)
    assert rep.auxiliary == [Q(3, 2)] * 2
    assert all(len(t) >= 2 for t in rep.touched)
    assert min(rep.coverage) >= 3


def test_corollary_with_equal_totals():
    rng = random.Random(4)
    raw = random_family(rng, 2, 6)
    fam = MeasureFamily(tuple(mu.scaled(1 / mu.total) for mu in raw.measures), 2)
    part, rep = theorem5_pipeline(fam, 4, 3, NU_MEASURE)
    tail, full = equal_total_sums(fam, part)
    assert tail == [Q(5, 4)] * 4 and full == [Q(6, 4)] * 4


def test_scope_and_hypothesis_errors():
    fam = random_family(random.Random(0), 2, 5)
    with pytest.raises(ScopeError):
        theorem5_pipeline(fam, 3, 3)
    with pytest.raises(PipelineError, match=r"m = n\(c-d\)\+d"):
        theorem5_pipeline(fam, 2, 3)
    with pytest.raises(ScopeError):
        theorem5_pipeline(random_family(random.Random(0), 3, 5), 2, 3)


@pytest.mark.parametrize(
    "n,c,d,eps,bound",
    [(2, 4, 2, Q(1, 4), Q(1, 8)), (3, 5, 2, Q(1, 15), Q(2, 45)), (4, 3, 3, Q(1, 4), Q(1, 16))],
)
def test_epsilon_examples(n, c, d, eps, bound):
    assert epsilon_bound(n, c, d) == (eps, bound)


@given(st.integers(2, 9), st.integers(2, 5), st.integers(0, 12))
def test_epsilon_dominates_bound(n, d, extra):
    eps, bound = epsilon_bound(n, d + extra, d)
    assert eps >= bound
    assert eps == Q(1, n * ((n - 1) * (math.ceil((d + extra) / d) - 1) + 1))


def brute_quotas(c, d):
    """All quota vectors with entries in {floor, ceil} of c/d summing to c."""
    lo, hi = c // d, -(-c // d)
    return {v for v in itertools.product({lo, hi}, repeat=d) if sum(v) == c}


def test_plan_examples():
    p = plan_epsilon_groups(6, 2, 4, 2)
    assert p.quotas == (2, 2) and p.group_sizes == (3, 3)
    p = plan_epsilon_groups(8, 2, 5, 2)
    assert sorted(p.quotas) == [2, 3] and sorted(p.group_sizes) == [3, 5]
    p = plan_epsilon_groups(3, 4, 3, 3)
    assert p.quotas == (1, 1, 1) and p.group_sizes == (1, 1, 1)
    for c in range(2, 12):
        for d in range(1, c + 1):
            assert tuple(split_quotas(c, d)) in brute_quotas(c, d)


def test_alpha_examples():
    assert alpha_ratio(2, Q(1, 5)) == Q(8, 3)
    plan, m = plan_alpha_groups(2, 4, 2, Q(1, 5))
    assert plan.quotas == (2, 2) and plan.group_sizes == (3, 3) and m == 6
    for n in range(2, 7):
        assert alpha_ratio(n, Q(1, 2 * n - 1)) == 2 * n
        for c in range(4, 9):
            assert plan_alpha_groups(n, c, 2, Q(1, 2 * n - 1))[1] == 2 * n * (c - 2)
    with pytest.raises(PipelineError):
        plan_alpha_groups(2, 4, 2, Q(1, 2))
    with pytest.raises(PipelineError):
        plan_alpha_groups(2, 3, 2, Q(1, 5))


@pytest.mark.parametrize("n,c", [(2, 4), (2, 5), (4, 4), (2, 2), (4, 3)])
def test_epsilon_fraction_pipeline(n, c):
    d = 2
    m = n * (c - d) + d
    fam = random_family(random.Random(n * 31 + c), d, m)
    plan = plan_epsilon_groups(m, n, c, d)
    part, rep = fraction_pipeline(fam, n, c, plan, "epsilon")
    assert rep.ok, rep.problems
    eps, _ = epsilon_bound(n, c, d)
    mat = evaluate_matrix(fam, part)
    totals = fam.totals()
    for i in range(n):
        good = [j for j in range(m) if mat.entries[j][i] >= eps * totals[j]]
        assert len(good) >= c


def test_single_measure_groups_are_split_evenly():
    n = 4
    fam = random_family(random.Random(2), 2, 2)
    plan = plan_epsilon_groups(2, n, 2, 2)
    part, rep = fraction_pipeline(fam, n, 2, plan)
    mat = evaluate_matrix(fam, part)
    for j, mu in enumerate(fam.measures):
        assert list(mat.entries[j]) == [mu.total / n] * n


@pytest.mark.parametrize("n,c", [(2, 4), (4, 4), (2, 5)])
def test_alpha_fraction_pipeline(n, c):
    alpha = Q(1, 2 * n - 1)
    plan, m = plan_alpha_groups(n, c, 2, alpha)
    fam = random_family(random.Random(m), 2, m)
    part, rep = fraction_pipeline(fam, n, c, plan, "alpha")
    assert rep.ok, rep.problems
    for cert, fr in zip(rep.certified, rep.fractions):
        assert len(cert) >= c and all(fr[j] >= alpha for j in cert)
