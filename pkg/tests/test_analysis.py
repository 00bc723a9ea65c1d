import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rgl import analysis as an
from rgl.analysis import PairType, classify_pair, pair_census
from rgl.core import ColoredGraph, Edge, canonical_edge
from rgl.generators import gen_gadget, gen_hub, gen_k4_matchings, gen_random_graph, gen_random_two_matchings
from rgl.rng import SplitMix64
from rgl.search import girth_exact

from oracles import brute_joint, brute_variance

GRID = [round(0.05 * i, 2) for i in range(1, 20)]
DECILES = [round(0.1 * i, 1) for i in range(1, 10)]


def M(*pairs):
    return tuple(canonical_edge(a, b) for a, b in pairs)


@pytest.mark.parametrize(
    "mi,mj,expected",
    [
        (M((0, 1), (2, 3)), M((4, 5), (6, 7)), PairType.DISJOINT),
        (M((0, 1), (2, 3)), M((0, 4), (5, 6)), PairType.TYPE_I),
        (M((0, 1), (2, 3)), M((0, 4), (2, 5)), PairType.TYPE_II),
        (M((0, 1), (2, 3)), M((0, 2), (4, 5)), PairType.CONTAINED_EDGE),
        (M((0, 1), (2, 3)), M((0, 4), (1, 5)), PairType.OTHER_OVERLAP),
        (M((0, 1), (2, 3)), M((0, 2), (1, 3)), PairType.CONTAINED_EDGE),
        (M((0, 1), (2, 3)), M((0, 2), (1, 4)), PairType.CONTAINED_EDGE),
    ],
)
def test_classify_examples(mi, mj, expected):
    assert classify_pair(mi, mj) == expected


def test_classify_rejects_bad_input():
    with pytest.raises(ValueError):
        classify_pair(M((0, 1), (1, 2)), M((4, 5), (6, 7)))
    with pytest.raises(ValueError):
        classify_pair(M((0, 1), (2, 3)), M((0, 1), (4, 5)))


def _reference_type(mi, mj):
    """Classification recomputed from the union graph's component shapes."""
    vi = {x for e in mi for x in e}
    shared = vi & {x for e in mj for x in e}
    if not shared:
        return PairType.DISJOINT
    if any(set(e) <= vi for e in mj):
        return PairType.CONTAINED_EDGE
    if len(shared) == 1:
        return PairType.TYPE_I
    union = nx.Graph([*mi, *mj])
    longest = max(union.subgraph(c).number_of_edges() for c in nx.connected_components(union))
    return PairType.OTHER_OVERLAP if longest == 3 else PairType.TYPE_II


def _draw_matching(rng, n):
    vs = []
    while len(vs) < 4:
        v = rng.below(n)
        if v not in vs:
            vs.append(v)
    return M((vs[0], vs[1]), (vs[2], vs[3]))


def test_classify_total_on_random_pairs():
    rng = SplitMix64(2024)
    seen = set()
    for _ in range(100_000):
        mi, mj = _draw_matching(rng, 9), _draw_matching(rng, 9)
        if set(mi) & set(mj):
            continue
        t = classify_pair(mi, mj)
        assert t == _reference_type(mi, mj)
        seen.add(t)
    assert seen == set(PairType)


def test_census_examples():
    assert pair_census(gen_hub(10)).as_dict() == {
        "Disjoint": 0, "ContainedEdge": 0, "TypeI": 45, "TypeII": 0, "OtherOverlap": 0,
    }
    assert pair_census(gen_k4_matchings())[PairType.CONTAINED_EDGE] == 3


def test_census_additive_over_disjoint_copies():
    a = gen_gadget(PairType.TYPE_II)
    shifted = [tuple(Edge(u + a.n, v + a.n) for u, v in c) for c in a.classes]
    both = ColoredGraph(2 * a.n, a.classes + tuple(shifted))
    single = pair_census(a)
    double = pair_census(both)
    assert double[PairType.TYPE_II] == 2 * single[PairType.TYPE_II]
    assert double[PairType.DISJOINT] == 2 * single[PairType.DISJOINT] + 4


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_census_methods_agree(seed):
    g = gen_random_two_matchings(60, 200, seed)
    brute = pair_census(g, method="brute")
    fast = pair_census(g, method="indexed")
    assert brute == fast
    assert brute.total == 200 * 199 // 2


def test_marginal():
    assert an.marginal_prob(1.0) == 1.0
    assert an.marginal_prob(0.0) == 0.0
    gp = (math.sqrt(5) - 1) / 2
    assert abs(an.marginal_prob(gp) - gp) <= 1e-12
    with pytest.raises(ValueError):
        an.marginal_prob(1.5)


def test_printed_polynomials_at_one():
    assert an.poly_caseI_paper(1.0) == 1.0
    assert an.poly_caseII_paper(1.0) == 1.0
    assert an.poly_g(1.0) == 1.0


def test_printed_polynomial_derivatives():
    h = 1e-4
    d = lambda f: (f(1 + h) - f(1 - h)) / (2 * h)
    assert abs(d(an.poly_caseI_paper) - 3) <= 1e-6
    assert abs(d(an.poly_g)) <= 1e-6


@pytest.mark.parametrize("p", GRID)
def test_printed_polynomials_match_expansions(p):
    assert an.poly_caseI_paper(p) == pytest.approx(p**3 + 3 * p**4 - 3 * p**5 - 3 * p**6 + 3 * p**7, abs=1e-14)
    assert an.poly_caseII_paper(p) == pytest.approx(2 * p**3 + 2 * p**4 - 6 * p**5 + 3 * p**6, abs=1e-14)
    assert an.poly_g(p) == pytest.approx(an.marginal_prob(p) ** 2, abs=1e-14)


@pytest.mark.parametrize("t", list(PairType))
def test_joint_endpoints(t):
    g = gen_gadget(t)
    assert an.joint_prob_exact(g, 1.0) == 1.0
    assert an.joint_prob_exact(g, 0.0) == 0.0
    assert an.covariance_exact(g, 0.0) == 0.0
    assert an.covariance_exact(g, 1.0) == 0.0


@pytest.mark.parametrize("t", list(PairType))
def test_joint_two_independent_routes(t):
    g = gen_gadget(t)
    for p in GRID:
        exact = an.joint_prob_exact(g, p)
        assert abs(exact - an.joint_prob_inclusion_exclusion(g, p)) <= 1e-12
        assert abs(exact - brute_joint(g.classes, g.n, p)) <= 1e-12


def test_disjoint_factorizes():
    g = gen_gadget(PairType.DISJOINT)
    for p in DECILES:
        assert abs(an.joint_prob_exact(g, p) - an.marginal_prob(p) ** 2) <= 1e-12
        assert abs(an.covariance_exact(g, p)) <= 1e-12


# Joint probabilities of the overlap gadgets, expanded symbolically from 2^V-subset
# enumeration (sympy, once): TypeI p^3+3p^4-2p^5-2p^6+p^7, TypeII 2p^3+2p^4-4p^5+p^6,
# ContainedEdge and OtherOverlap 2p^3+p^4-2p^5.
ENUMERATED = {
    PairType.TYPE_I: lambda p: p**3 + 3 * p**4 - 2 * p**5 - 2 * p**6 + p**7,
    PairType.TYPE_II: lambda p: 2 * p**3 + 2 * p**4 - 4 * p**5 + p**6,
    PairType.CONTAINED_EDGE: lambda p: 2 * p**3 + p**4 - 2 * p**5,
    PairType.OTHER_OVERLAP: lambda p: 2 * p**3 + p**4 - 2 * p**5,
}


@pytest.mark.parametrize("t", list(ENUMERATED))
def test_joint_matches_frozen_expansion(t):
    g = gen_gadget(t)
    for p in GRID:
        assert abs(an.joint_prob_exact(g, p) - ENUMERATED[t](p)) <= 1e-12


def test_printed_case_polynomials_differ_from_enumeration():
    # recorded, not a defect in the oracle: the printed forms disagree at interior p
    p = 0.5
    assert an.joint_prob_exact(gen_gadget(PairType.TYPE_I), p) - an.poly_caseI_paper(p) == pytest.approx(0.03125)
    assert an.joint_prob_exact(gen_gadget(PairType.TYPE_II), p) - an.poly_caseII_paper(p) == pytest.approx(0.03125)


def test_typeII_covariance_sign_near_one():
    # observed sign by enumeration; the printed analysis expects the opposite near p = 1
    cov = an.covariance_exact(gen_gadget(PairType.TYPE_II), 0.99)
    assert cov > 0


@pytest.mark.parametrize("t", list(PairType))
def test_joint_monotone_in_p(t):
    g = gen_gadget(t)
    vals = [an.joint_prob_exact(g, i / 100) for i in range(101)]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


def test_joint_too_large():
    with pytest.raises(ValueError):
        an.joint_prob_exact(gen_random_two_matchings(20, 2, 0), 0.5)


@pytest.mark.parametrize("p", DECILES)
def test_variance_k4_matches_full_enumeration(p):
    g = gen_k4_matchings()
    assert abs(an.variance_exact(g, p) - brute_variance(g, p)) <= 1e-12


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_variance_small_random_matches_full_enumeration(seed):
    g = gen_random_two_matchings(10, 6, seed)
    for p in (0.3, 0.7, 0.9):
        assert abs(an.variance_exact(g, p) - brute_variance(g, p)) <= 1e-12


def test_variance_degenerate_and_disjoint():
    g = gen_random_two_matchings(12, 8, 4)
    assert an.variance_exact(g, 0.0) == 0.0
    assert abs(an.variance_exact(g, 1.0)) <= 1e-15
    d = gen_gadget(PairType.DISJOINT)
    for p in DECILES:
        m = an.marginal_prob(p)
        assert abs(an.variance_exact(d, p) - 2 * m * (1 - m)) <= 1e-12


def test_variance_nonnegative():
    instances = [gen_hub(20), gen_k4_matchings()] + [gen_gadget(t) for t in PairType]
    instances += [gen_random_two_matchings(40, 40, s) for s in range(5)]
    for g in instances:
        for p in [i / 100 for i in range(101)]:
            assert an.variance_exact(g, p) >= -1e-12


def test_variance_cap():
    with pytest.raises(ValueError, match="cap"):
        an.variance_exact(gen_hub(10), 0.5, cap=10)


def test_bs_bound_values():
    assert an.bs_bound(4, 2) == 10.0
    assert an.bs_bound(100, 4) == pytest.approx(208 / 12 * 7, abs=1e-12)
    with pytest.raises(ValueError):
        an.bs_bound(3, 2)
    with pytest.raises(ValueError):
        an.bs_bound(10, 1)


def test_bs_bound_dominates_girth():
    rng = SplitMix64(11)
    for i in range(200):
        n = 10 + rng.below(51)
        k = 2 + rng.below(19)
        edges = gen_random_graph(n, n + k, rng.next_u64())
        girth, _ = girth_exact(edges, n)
        assert girth <= an.bs_bound(n, k)


def test_chernoff_chebyshev():
    assert an.chernoff_bound(900, 0.05) == pytest.approx(math.exp(-0.75), abs=1e-12)
    assert an.chernoff_bound(900, 0.05) == pytest.approx(0.47237, abs=1e-5)
    assert an.chebyshev_bound(0, 5.0, 0.1) == 0
    assert an.chebyshev_bound(4.0, 10.0, 0.5) == pytest.approx(0.16)
    with pytest.raises(ValueError):
        an.chernoff_bound(900, 1.0)
    with pytest.raises(ValueError):
        an.chebyshev_bound(-1, 1, 1)


def test_alpha_threshold():
    a0, p0 = an.alpha_threshold()
    assert abs(a0 - 0.9185586535) <= 1e-9
    assert abs(p0 - a0 * (2 * p0**2 - p0**4)) <= 1e-12
    assert abs(a0 * (4 * p0 - 4 * p0**3) - 1) <= 1e-12


def test_feasible_interval():
    a0, p0 = an.alpha_threshold()
    assert an.feasible_p_interval(a0 - 0.01) is None
    lo, hi = an.feasible_p_interval(a0 + 1e-6)
    assert lo < p0 < hi
    lo, hi = an.feasible_p_interval(1.0)
    assert abs(lo - (math.sqrt(5) - 1) / 2) <= 1e-6
    assert abs(hi - 1.0) <= 1e-6


@pytest.mark.parametrize("alpha", [0.95, 1.0, 1.5, 3.0])
def test_feasible_interval_against_cubic_roots(alpha):
    # independent route: real roots of alpha p^3 - 2 alpha p + 1 in (0, 1)
    roots = sorted(r.real for r in np.roots([alpha, 0, -2 * alpha, 1]) if abs(r.imag) < 1e-12 and 0 < r.real < 1)
    lo, hi = an.feasible_p_interval(alpha)
    assert abs(lo - roots[0]) <= 1e-8
    assert abs(hi - (roots[1] if len(roots) > 1 else 1.0)) <= 1e-8


def test_select_parameters_alpha_one():
    params = an.select_parameters(1.0)
    # 4p - 4p^3 = 1 has its relevant root at the maximizer of 2p^2 - p^4 - p
    root = max(r.real for r in np.roots([4, 0, -4, 1]) if abs(r.imag) < 1e-12 and 0 < r.real < 1)
    assert abs(params.p - root) <= 1e-8
    assert params.p == pytest.approx(0.83757, abs=1e-5)
    assert params.delta == pytest.approx(0.0244, abs=1e-4)
    assert params.eps == pytest.approx(0.0140, abs=1e-4)
    q = an.marginal_prob(params.p)
    assert (1 - params.eps) * q - (1 + params.eps) * params.p > (q - params.p) / 3 > 0


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.93, max_value=5.0))
def test_select_parameters_invariant(alpha):
    pr = an.select_parameters(alpha)
    q = an.marginal_prob(pr.p)
    assert pr.delta == pytest.approx((alpha * q - pr.p) / 3, abs=1e-15)
    assert (1 - pr.eps) * alpha * q - (1 + pr.eps) * pr.p >= pr.delta > 0


def test_select_parameters_infeasible():
    with pytest.raises(ValueError):
        an.select_parameters(0.5)


def test_make_params_rejects_bad_margin():
    with pytest.raises(ValueError):
        an.make_params(1.0, 0.5)  # below the golden ratio conjugate: no separation
    with pytest.raises(ValueError):
        an.make_params(1.0, 0.84, eps=0.2)
